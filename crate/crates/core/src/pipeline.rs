//! End-to-end orchestration: inputs to sites, sites to tours, tours to files.

use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, PlanConfig, Solver};
use crate::coverage::{build_coverage, exact_cover, greedy_cover, CoverError, CoverSolution};
use crate::geometry::{
    build_grid, los_radius, sample_pois, CandidateSite, GeoPoint, GeometryError, LosParams,
    PlanarPoint, PoI, Projection, RoadNetwork, RoadSegment, Subarea,
};
use crate::io::{parse_roads, parse_subareas, tours_geojson, InputError, PlanDocument, SiteRecord};
use crate::planner::{
    monte_carlo_rip_with_growth, mta_with_trace, plan_stats, sweep_m_d, Comparison, MtaStep, Plan,
    PlanStats, PlannerError, RipGrowth, SweepPoint,
};
use crate::svg::{emit_plan_svg, emit_sweep_svg};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("no roads left after filtering to classes {0:?}")]
    EmptyRoadFilter(Vec<String>),
    #[error("{count} PoI(s) are not visible from any candidate site: {0:?}", count = .0.len())]
    Uncoverable(Vec<usize>),
    #[error(transparent)]
    Cover(CoverError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl From<CoverError> for PipelineError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::UncoverablePoIs(pois) => PipelineError::Uncoverable(pois),
            other => PipelineError::Cover(other),
        }
    }
}

impl PipelineError {
    /// 2 for bad input, 3 for an unsatisfiable coverage requirement, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Input(_)
            | PipelineError::Config(_)
            | PipelineError::Geometry(_)
            | PipelineError::EmptyRoadFilter(_) => 2,
            PipelineError::Uncoverable(_) => 3,
            PipelineError::Cover(_) | PipelineError::Planner(_) | PipelineError::Io { .. } => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), PipelineError> {
    fs::write(path, contents).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Projected roads and subareas.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub projection: Projection,
    pub subareas: Vec<Subarea>,
    pub network: RoadNetwork,
}

pub fn load_dataset(roads_text: &str, subareas_text: &str) -> Result<Dataset, PipelineError> {
    let roads = parse_roads(roads_text)?;
    let areas = parse_subareas(subareas_text)?;
    let all: Vec<GeoPoint> = roads
        .iter()
        .flat_map(|r| r.coords.iter().copied())
        .chain(areas.iter().flat_map(|a| a.ring.iter().copied()))
        .collect();
    let projection = Projection::centered_on(&all).ok_or(InputError::Feature {
        index: 0,
        message: "inputs contain no features".into(),
    })?;
    let subareas = areas
        .into_iter()
        .map(|a| {
            let ring = a.ring.iter().map(|g| projection.forward(*g)).collect();
            Subarea::new(a.id, ring, a.h_max_m).map_err(|e| InputError::Feature {
                index: a.index,
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let segments = roads
        .into_iter()
        .map(|r| RoadSegment {
            id: r.index,
            class: r.class,
            points: r.coords.iter().map(|g| projection.forward(*g)).collect(),
        })
        .collect();
    let network = RoadNetwork::new(segments)?;
    Ok(Dataset {
        projection,
        subareas,
        network,
    })
}

pub fn load_dataset_files(roads: &Path, subareas: &Path) -> Result<Dataset, PipelineError> {
    load_dataset(&read(roads)?, &read(subareas)?)
}

/// Candidate sites, PoIs and the covering selection.
#[derive(Debug, Clone)]
pub struct Placement {
    pub candidate_sites: Vec<CandidateSite>,
    pub pois: Vec<PoI>,
    pub cover: CoverSolution,
}

impl Placement {
    pub fn selected_sites(&self) -> Vec<&CandidateSite> {
        self.cover
            .selected
            .iter()
            .map(|&i| &self.candidate_sites[i])
            .collect()
    }

    pub fn selected_points(&self) -> Vec<PlanarPoint> {
        self.selected_sites().iter().map(|s| s.position).collect()
    }
}

pub fn place_sites(dataset: &Dataset, config: &PlanConfig) -> Result<Placement, PipelineError> {
    let network = dataset.network.filter_classes(&config.road_classes);
    if network.is_empty() {
        return Err(PipelineError::EmptyRoadFilter(
            config.road_classes.iter().map(|c| c.to_string()).collect(),
        ));
    }
    let candidate_sites = build_grid(&dataset.subareas, config.rho, &config.los)?;
    let pois = sample_pois(
        &network,
        config.poi_spacing_m,
        &dataset.subareas,
        &config.los,
        config.default_h_max_m,
    )?;
    let coverage = build_coverage(&candidate_sites, &pois);
    let cover = match config.solver {
        Solver::Greedy => greedy_cover(&coverage)?,
        Solver::Exact => exact_cover(&coverage, config.node_limit)?,
    };
    Ok(Placement {
        candidate_sites,
        pois,
        cover,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub candidate_sites: usize,
    pub pois: usize,
    pub selected_sites: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub placement_ms: f64,
    pub planning_ms: f64,
}

/// Contents of `stats.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub counts: Counts,
    pub cover: CoverSolution,
    pub max_distance_km: f64,
    pub feasible: bool,
    pub stats: PlanStats,
    pub mta_trace: Vec<MtaStep>,
    pub timing: Timing,
}

#[derive(Debug, Clone)]
pub struct PlanRun {
    pub placement: Placement,
    pub document: PlanDocument,
    pub report: RunReport,
    projection: Projection,
}

impl PlanRun {
    pub fn plan(&self) -> &Plan {
        &self.document.plan
    }

    pub fn tours_geojson(&self) -> String {
        tours_geojson(&self.document.plan, &self.document.sites, &self.projection)
    }

    pub fn plot_svg(&self) -> String {
        let pois: Vec<PlanarPoint> = self.placement.pois.iter().map(|p| p.position).collect();
        emit_plan_svg(&self.document.plan, &self.document.points(), &pois)
    }

    pub fn stats_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }

    /// Writes tours.geojson, plan.json, stats.json and plot.svg into `out_dir`.
    pub fn write(&self, out_dir: &Path) -> Result<(), PipelineError> {
        fs::create_dir_all(out_dir).map_err(|source| PipelineError::Io {
            path: out_dir.display().to_string(),
            source,
        })?;
        write(&out_dir.join("tours.geojson"), &self.tours_geojson())?;
        write(&out_dir.join("plan.json"), &self.document.to_json())?;
        write(&out_dir.join("stats.json"), &self.stats_json())?;
        write(&out_dir.join("plot.svg"), &self.plot_svg())?;
        Ok(())
    }
}

/// Full pipeline: grid, PoIs, coverage, set cover, then multi-tour planning
/// over the selected sites.
pub fn run_plan(dataset: &Dataset, config: &PlanConfig) -> Result<PlanRun, PipelineError> {
    let started = Instant::now();
    let placement = place_sites(dataset, config)?;
    let placement_ms = started.elapsed().as_secs_f64() * 1e3;

    let started = Instant::now();
    let points = placement.selected_points();
    let (plan, trace) = mta_with_trace(&points, &config.fleet, config.seed, &config.kmeans)?;
    let planning_ms = started.elapsed().as_secs_f64() * 1e3;

    let sites: Vec<SiteRecord> = placement
        .selected_sites()
        .into_iter()
        .map(|s| {
            let g = dataset.projection.inverse(s.position);
            SiteRecord {
                x_m: s.position.x,
                y_m: s.position.y,
                lat: g.lat,
                lon: g.lon,
                subarea_id: s.subarea_id.clone(),
            }
        })
        .collect();
    let report = RunReport {
        counts: Counts {
            candidate_sites: placement.candidate_sites.len(),
            pois: placement.pois.len(),
            selected_sites: placement.cover.objective,
        },
        cover: placement.cover.clone(),
        max_distance_km: config.fleet.max_distance_km,
        feasible: plan.feasible,
        stats: plan_stats(&plan),
        mta_trace: trace,
        timing: Timing {
            placement_ms,
            planning_ms,
        },
    };
    let document = PlanDocument {
        origin: dataset.projection.origin(),
        fleet: config.fleet,
        sites,
        plan,
    };
    Ok(PlanRun {
        placement,
        document,
        report,
        projection: dataset.projection,
    })
}

/// Tour count per distance budget over the covering sites, same seed throughout.
pub fn run_sweep(
    dataset: &Dataset,
    config: &PlanConfig,
    max_distances_km: &[f64],
) -> Result<Vec<SweepPoint>, PipelineError> {
    let placement = place_sites(dataset, config)?;
    let mut budgets = max_distances_km.to_vec();
    budgets.sort_by(f64::total_cmp);
    let variants = budgets
        .iter()
        .map(|&m_d| config.fleet.with_max_distance_km(m_d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(sweep_m_d(
        &placement.selected_points(),
        &variants,
        config.seed,
        &config.kmeans,
    )?)
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("max_distance_km,tours\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.max_distance_km, p.tours));
    }
    out
}

pub fn write_sweep(points: &[SweepPoint], out_dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(out_dir).map_err(|source| PipelineError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    write(&out_dir.join("sweep.csv"), &sweep_csv(points))?;
    write(&out_dir.join("sweep.svg"), &emit_sweep_svg(points))
}

/// Baseline Monte Carlo at the plan's tour count.
pub fn run_compare(
    doc: &PlanDocument,
    runs: usize,
    seed: u64,
    growth: RipGrowth,
) -> Result<Comparison, PipelineError> {
    let report = monte_carlo_rip_with_growth(
        &doc.points(),
        doc.plan.num_tours(),
        runs,
        seed,
        &doc.fleet,
        growth,
    )?;
    Ok(Comparison::new(&doc.plan, report))
}

pub fn write_compare(comparison: &Comparison, out_dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(out_dir).map_err(|source| PipelineError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let mut json = serde_json::to_string_pretty(comparison).expect("comparison serializes");
    json.push('\n');
    write(&out_dir.join("compare.json"), &json)?;
    write(&out_dir.join("compare.txt"), &comparison.to_table())
}

pub fn read_plan_document(path: &Path) -> Result<PlanDocument, PipelineError> {
    Ok(crate::io::parse_plan_document(&read(path)?)?)
}

pub fn read_config(path: &Path) -> Result<PlanConfig, PipelineError> {
    Ok(crate::config::parse_config(&read(path)?)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub h_max_m: f64,
    pub radius_m: f64,
    /// Height at or below the vehicle, so the radius is the configured cap.
    pub clamped: bool,
}

pub fn radius_table(heights: &[f64], los: &LosParams) -> Vec<RadiusRow> {
    heights
        .iter()
        .map(|&h| RadiusRow {
            h_max_m: h,
            radius_m: los_radius(h, los),
            clamped: h <= los.h_v_m,
        })
        .collect()
}
