//! TOML run configuration. Keys carry their unit as a suffix.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::KMeansParams;
use crate::geometry::{GeometryError, LosParams, RoadClass};
use crate::planner::{FleetParams, PlannerError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl From<GeometryError> for ConfigError {
    fn from(e: GeometryError) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

impl From<PlannerError> for ConfigError {
    fn from(e: PlannerError) -> Self {
        ConfigError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Greedy,
    Exact,
}

impl std::str::FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Solver::Greedy),
            "exact" => Ok(Solver::Exact),
            other => Err(format!(
                "unknown solver {other:?} (expected greedy or exact)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LosSection {
    pub h_v_m: f64,
    pub h_u_m: f64,
    pub w_bv_m: f64,
    pub r_max_m: f64,
}

impl Default for LosSection {
    fn default() -> Self {
        let p = LosParams::default();
        Self {
            h_v_m: p.h_v_m,
            h_u_m: p.h_u_m,
            w_bv_m: p.w_bv_m,
            r_max_m: p.r_max_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub rho: u32,
    pub poi_spacing_m: f64,
    /// Building height assumed for road points outside every subarea.
    pub default_h_max_m: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            rho: 5,
            poi_spacing_m: 25.0,
            default_h_max_m: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FleetSection {
    pub v_kmh: f64,
    pub t_min: f64,
}

impl Default for FleetSection {
    fn default() -> Self {
        Self {
            v_kmh: 40.0,
            t_min: 30.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoverSection {
    pub solver: Solver,
    pub node_limit: u64,
}

impl Default for CoverSection {
    fn default() -> Self {
        Self {
            solver: Solver::Greedy,
            node_limit: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KMeansSection {
    pub max_iter: usize,
    pub tol_m2: f64,
}

impl Default for KMeansSection {
    fn default() -> Self {
        let p = KMeansParams::default();
        Self {
            max_iter: p.max_iter,
            tol_m2: p.tol,
        }
    }
}

/// On-disk layout of `config.toml`. Every key is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub seed: u64,
    pub road_classes: Vec<RoadClass>,
    pub los: LosSection,
    pub grid: GridSection,
    pub fleet: FleetSection,
    pub cover: CoverSection,
    pub kmeans: KMeansSection,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            seed: 1,
            road_classes: RoadClass::ALL.to_vec(),
            los: LosSection::default(),
            grid: GridSection::default(),
            fleet: FleetSection::default(),
            cover: CoverSection::default(),
            kmeans: KMeansSection::default(),
        }
    }
}

/// Validated configuration for one planning run.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanConfig {
    pub los: LosParams,
    pub rho: u32,
    pub poi_spacing_m: f64,
    pub default_h_max_m: f64,
    pub fleet: FleetParams,
    pub seed: u64,
    pub road_classes: Vec<RoadClass>,
    pub solver: Solver,
    pub node_limit: u64,
    pub kmeans: KMeansParams,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig::try_from(ConfigFile::default()).expect("defaults are valid")
    }
}

impl TryFrom<ConfigFile> for PlanConfig {
    type Error = ConfigError;

    fn try_from(file: ConfigFile) -> Result<Self, Self::Error> {
        let los = LosParams::new(
            file.los.h_v_m,
            file.los.h_u_m,
            file.los.w_bv_m,
            file.los.r_max_m,
        )?;
        if file.grid.rho == 0 {
            return Err(ConfigError::Invalid("grid.rho must be >= 1".into()));
        }
        if !(file.grid.poi_spacing_m.is_finite() && file.grid.poi_spacing_m > 0.0) {
            return Err(ConfigError::Invalid(
                "grid.poi_spacing_m must be > 0".into(),
            ));
        }
        if !(file.grid.default_h_max_m.is_finite() && file.grid.default_h_max_m > 0.0) {
            return Err(ConfigError::Invalid(
                "grid.default_h_max_m must be > 0".into(),
            ));
        }
        if !(file.kmeans.tol_m2.is_finite() && file.kmeans.tol_m2 >= 0.0) {
            return Err(ConfigError::Invalid("kmeans.tol_m2 must be >= 0".into()));
        }
        let fleet = FleetParams::new(file.fleet.v_kmh, file.fleet.t_min)?;
        let mut road_classes = file.road_classes;
        road_classes.sort();
        road_classes.dedup();
        if road_classes.is_empty() {
            return Err(ConfigError::Invalid(
                "road_classes must not be empty".into(),
            ));
        }
        Ok(PlanConfig {
            los,
            rho: file.grid.rho,
            poi_spacing_m: file.grid.poi_spacing_m,
            default_h_max_m: file.grid.default_h_max_m,
            fleet,
            seed: file.seed,
            road_classes,
            solver: file.cover.solver,
            node_limit: file.cover.node_limit,
            kmeans: KMeansParams {
                max_iter: file.kmeans.max_iter,
                tol: file.kmeans.tol_m2,
            },
        })
    }
}

impl PlanConfig {
    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            seed: self.seed,
            road_classes: self.road_classes.clone(),
            los: LosSection {
                h_v_m: self.los.h_v_m,
                h_u_m: self.los.h_u_m,
                w_bv_m: self.los.w_bv_m,
                r_max_m: self.los.r_max_m,
            },
            grid: GridSection {
                rho: self.rho,
                poi_spacing_m: self.poi_spacing_m,
                default_h_max_m: self.default_h_max_m,
            },
            fleet: FleetSection {
                v_kmh: self.fleet.speed_kmh,
                t_min: self.fleet.max_flight_min,
            },
            cover: CoverSection {
                solver: self.solver,
                node_limit: self.node_limit,
            },
            kmeans: KMeansSection {
                max_iter: self.kmeans.max_iter,
                tol_m2: self.kmeans.tol,
            },
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("config serializes")
    }
}

pub fn parse_config(text: &str) -> Result<PlanConfig, ConfigError> {
    let file: ConfigFile = toml::from_str(text)?;
    PlanConfig::try_from(file)
}
