//! Multi-tour planning under a per-drone distance budget, the random-initial-
//! placement baseline, and tour-quality statistics.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::{cluster_subsets, kmeans, KMeansParams};
use crate::geometry::PlanarPoint;
use crate::routing::{cia_tour, tour_cost, DistanceMatrix, InsertionBuilder, Tour};

#[derive(Debug, Error, PartialEq)]
pub enum PlannerError {
    #[error("invalid fleet parameters: {0}")]
    InvalidFleet(String),
    #[error("tour count {l} must be between 1 and the number of points ({n})")]
    LTooLarge { l: usize, n: usize },
    #[error("no points to plan over")]
    NoPoints,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
}

/// Homogeneous fleet: constant speed and endurance, hence a fixed per-tour
/// distance budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FleetParams {
    pub speed_kmh: f64,
    pub max_flight_min: f64,
    pub max_distance_km: f64,
}

impl FleetParams {
    pub fn new(speed_kmh: f64, max_flight_min: f64) -> Result<Self, PlannerError> {
        if !(speed_kmh.is_finite() && speed_kmh > 0.0) {
            return Err(PlannerError::InvalidFleet(format!(
                "speed must be > 0 km/h, got {speed_kmh}"
            )));
        }
        if !(max_flight_min.is_finite() && max_flight_min > 0.0) {
            return Err(PlannerError::InvalidFleet(format!(
                "flight time must be > 0 min, got {max_flight_min}"
            )));
        }
        Ok(Self {
            speed_kmh,
            max_flight_min,
            max_distance_km: speed_kmh * max_flight_min / 60.0,
        })
    }

    /// Fleet with the given budget at the same flight time; speed is derived.
    pub fn with_max_distance_km(&self, max_distance_km: f64) -> Result<Self, PlannerError> {
        if !(max_distance_km.is_finite() && max_distance_km > 0.0) {
            return Err(PlannerError::InvalidFleet(format!(
                "max distance must be > 0 km, got {max_distance_km}"
            )));
        }
        Ok(Self {
            speed_kmh: max_distance_km * 60.0 / self.max_flight_min,
            max_flight_min: self.max_flight_min,
            max_distance_km,
        })
    }

    pub fn max_distance_m(&self) -> f64 {
        self.max_distance_km * 1000.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PlanMethod {
    Mta,
    Rip,
}

/// Tours over point indices. Together the tours visit every input point once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub method: PlanMethod,
    pub seed: u64,
    pub max_distance_km: f64,
    pub feasible: bool,
    pub tours: Vec<Tour>,
}

impl Plan {
    fn new(method: PlanMethod, seed: u64, max_distance_km: f64, tours: Vec<Tour>) -> Self {
        let budget = max_distance_km * 1000.0;
        let feasible = tours.iter().all(|t| t.cost <= budget);
        Self {
            method,
            seed,
            max_distance_km,
            feasible,
            tours,
        }
    }

    pub fn num_tours(&self) -> usize {
        self.tours.len()
    }

    pub fn max_cost_m(&self) -> f64 {
        self.tours.iter().map(|t| t.cost).fold(0.0, f64::max)
    }

    /// True when every index in `0..n` appears in exactly one tour.
    pub fn partitions(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for t in &self.tours {
            for &k in &t.order {
                if k >= n || std::mem::replace(&mut seen[k], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// One outer-loop iteration of the multi-tour search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MtaStep {
    pub tours: usize,
    pub max_cost_m: f64,
    pub feasible: bool,
}

fn tours_for_clusters(
    points: &[PlanarPoint],
    d: &DistanceMatrix,
    l: usize,
    seed: u64,
    kmeans_params: &KMeansParams,
) -> Vec<Tour> {
    let clustering =
        kmeans(points, l, seed.wrapping_add(l as u64), kmeans_params).expect("1 <= L <= |points|");
    cluster_subsets(&clustering)
        .par_iter()
        .map(|nodes| cia_tour(d, nodes).expect("clusters are non-empty"))
        .collect()
}

/// Multiple Tour Algorithm with its search trace.
///
/// Tries L = 1, 2, ... clusters (k-means seeded with `seed + L`), builds one
/// cheapest-insertion tour per cluster and stops at the first L where every
/// tour fits the budget. L = |points| always succeeds with zero-cost singletons.
pub fn mta_with_trace(
    points: &[PlanarPoint],
    fleet: &FleetParams,
    seed: u64,
    kmeans_params: &KMeansParams,
) -> Result<(Plan, Vec<MtaStep>), PlannerError> {
    if points.is_empty() {
        return Err(PlannerError::NoPoints);
    }
    let d = DistanceMatrix::from_points(points);
    let budget = fleet.max_distance_m();
    let mut trace = Vec::new();
    for l in 1..=points.len() {
        let tours = tours_for_clusters(points, &d, l, seed, kmeans_params);
        let max_cost_m = tours.iter().map(|t| t.cost).fold(0.0, f64::max);
        let feasible = max_cost_m <= budget;
        trace.push(MtaStep {
            tours: l,
            max_cost_m,
            feasible,
        });
        if feasible {
            return Ok((
                Plan::new(PlanMethod::Mta, seed, fleet.max_distance_km, tours),
                trace,
            ));
        }
    }
    unreachable!("singleton tours always fit the budget")
}

pub fn mta(points: &[PlanarPoint], fleet: &FleetParams, seed: u64) -> Result<Plan, PlannerError> {
    mta_with_trace(points, fleet, seed, &KMeansParams::default()).map(|(plan, _)| plan)
}

/// How the baseline assigns the remaining nodes to its tours.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RipGrowth {
    /// Tours take turns; each inserts its own cheapest pending node.
    #[default]
    RoundRobin,
    /// Each step inserts the globally cheapest (node, tour, edge).
    GlobalCheapest,
}

impl std::str::FromStr for RipGrowth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "round-robin" | "round_robin" => Ok(RipGrowth::RoundRobin),
            "global-cheapest" | "global_cheapest" => Ok(RipGrowth::GlobalCheapest),
            other => Err(format!(
                "unknown growth rule {other:?} (expected round-robin or global-cheapest)"
            )),
        }
    }
}

/// Random-initial-placement baseline: `l` tours seeded with distinct uniformly
/// random nodes, then grown by cheapest insertion with tours taking turns.
/// The plan is returned even when it breaks the budget.
pub fn rip(
    points: &[PlanarPoint],
    l: usize,
    seed: u64,
    fleet: &FleetParams,
) -> Result<Plan, PlannerError> {
    rip_with_growth(points, l, seed, fleet, RipGrowth::default())
}

pub fn rip_with_growth(
    points: &[PlanarPoint],
    l: usize,
    seed: u64,
    fleet: &FleetParams,
    growth: RipGrowth,
) -> Result<Plan, PlannerError> {
    let d = DistanceMatrix::from_points(points);
    rip_with_matrix(&d, l, seed, fleet, growth)
}

fn rip_with_matrix(
    d: &DistanceMatrix,
    l: usize,
    seed: u64,
    fleet: &FleetParams,
    growth: RipGrowth,
) -> Result<Plan, PlannerError> {
    let n = d.len();
    if l == 0 || l > n {
        return Err(PlannerError::LTooLarge { l, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts = rand::seq::index::sample(&mut rng, n, l).into_vec();
    let mut is_start = vec![false; n];
    for &s in &starts {
        is_start[s] = true;
    }
    let tours = starts.iter().map(|&s| Tour::singleton(s)).collect();
    let pending = (0..n).filter(|&k| !is_start[k]).collect();
    let builder = InsertionBuilder::new(d, tours, pending);
    let tours = match growth {
        RipGrowth::RoundRobin => builder.finish_round_robin(),
        RipGrowth::GlobalCheapest => builder.finish(),
    };
    Ok(Plan::new(
        PlanMethod::Rip,
        seed,
        fleet.max_distance_km,
        tours,
    ))
}

/// Sample standard deviation over the mean.
pub fn coefficient_of_variation(costs: &[f64]) -> Result<f64, PlannerError> {
    if costs.len() < 2 {
        return Err(PlannerError::DegenerateInput("need at least two values"));
    }
    let n = costs.len() as f64;
    let mean = costs.iter().sum::<f64>() / n;
    if mean.is_nan() || mean <= 0.0 {
        return Err(PlannerError::DegenerateInput("mean must be positive"));
    }
    let var = costs.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(var.sqrt() / mean)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanStats {
    pub tours: usize,
    /// Undefined (None) for fewer than two tours or an all-zero plan.
    pub cv: Option<f64>,
    pub mean_cost_km: f64,
    pub mean_edges: f64,
    pub per_tour_costs_km: Vec<f64>,
}

pub fn plan_stats(plan: &Plan) -> PlanStats {
    let costs: Vec<f64> = plan.tours.iter().map(|t| t.cost / 1000.0).collect();
    let n = costs.len().max(1) as f64;
    PlanStats {
        tours: plan.tours.len(),
        cv: coefficient_of_variation(&costs).ok(),
        mean_cost_km: costs.iter().sum::<f64>() / n,
        mean_edges: plan
            .tours
            .iter()
            .map(|t| t.edge_count() as f64)
            .sum::<f64>()
            / n,
        per_tour_costs_km: costs,
    }
}

/// Recomputes every tour cost from the distance matrix.
pub fn recompute_costs(plan: &Plan, points: &[PlanarPoint]) -> Vec<f64> {
    let d = DistanceMatrix::from_points(points);
    plan.tours.iter().map(|t| tour_cost(t, &d)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub max_distance_km: f64,
    pub tours: usize,
}

/// Tour count for each fleet variant, same seed throughout.
pub fn sweep_m_d(
    points: &[PlanarPoint],
    variants: &[FleetParams],
    seed: u64,
    kmeans_params: &KMeansParams,
) -> Result<Vec<SweepPoint>, PlannerError> {
    variants
        .iter()
        .map(|fleet| {
            mta_with_trace(points, fleet, seed, kmeans_params).map(|(plan, _)| SweepPoint {
                max_distance_km: fleet.max_distance_km,
                tours: plan.num_tours(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub growth: RipGrowth,
    pub runs: usize,
    pub tours: usize,
    pub seeds: Vec<u64>,
    pub per_run_mean_edges: Vec<f64>,
    pub per_run_mean_cost_km: Vec<f64>,
    pub mean_edges: f64,
    /// Population variance across runs.
    pub var_edges: f64,
    pub mean_cost_km: f64,
    pub var_cost_km: f64,
    pub feasible_runs: usize,
}

fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var)
}

/// Runs the baseline with seeds `seed + 1 ..= seed + runs` and aggregates the
/// per-run mean edge count and mean tour cost.
pub fn monte_carlo_rip(
    points: &[PlanarPoint],
    l: usize,
    runs: usize,
    seed: u64,
    fleet: &FleetParams,
) -> Result<MonteCarloReport, PlannerError> {
    monte_carlo_rip_with_growth(points, l, runs, seed, fleet, RipGrowth::default())
}

pub fn monte_carlo_rip_with_growth(
    points: &[PlanarPoint],
    l: usize,
    runs: usize,
    seed: u64,
    fleet: &FleetParams,
    growth: RipGrowth,
) -> Result<MonteCarloReport, PlannerError> {
    if runs == 0 {
        return Err(PlannerError::DegenerateInput("runs must be at least 1"));
    }
    if l == 0 || l > points.len() {
        return Err(PlannerError::LTooLarge { l, n: points.len() });
    }
    let d = DistanceMatrix::from_points(points);
    let seeds: Vec<u64> = (1..=runs as u64).map(|r| seed.wrapping_add(r)).collect();
    let stats: Vec<(PlanStats, bool)> = seeds
        .par_iter()
        .map(|&s| {
            let plan = rip_with_matrix(&d, l, s, fleet, growth)?;
            Ok((plan_stats(&plan), plan.feasible))
        })
        .collect::<Result<_, PlannerError>>()?;
    let per_run_mean_edges: Vec<f64> = stats.iter().map(|(s, _)| s.mean_edges).collect();
    let per_run_mean_cost_km: Vec<f64> = stats.iter().map(|(s, _)| s.mean_cost_km).collect();
    let (mean_edges, var_edges) = mean_and_variance(&per_run_mean_edges);
    let (mean_cost_km, var_cost_km) = mean_and_variance(&per_run_mean_cost_km);
    Ok(MonteCarloReport {
        growth,
        runs,
        tours: l,
        seeds,
        feasible_runs: stats.iter().filter(|(_, f)| *f).count(),
        per_run_mean_edges,
        per_run_mean_cost_km,
        mean_edges,
        var_edges,
        mean_cost_km,
        var_cost_km,
    })
}

/// Side-by-side comparison of one MTA plan against the baseline at equal L.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub tours: usize,
    pub mta: PlanStats,
    pub rip: MonteCarloReport,
}

impl Comparison {
    pub fn new(mta_plan: &Plan, rip: MonteCarloReport) -> Self {
        Self {
            tours: mta_plan.num_tours(),
            mta: plan_stats(mta_plan),
            rip,
        }
    }

    /// Plain-text table: one row for mean edges per tour, one for mean tour
    /// cost; MTA value next to the baseline's mean and variance.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "L = {} tours, {} baseline runs\n",
            self.tours, self.rip.runs
        ));
        out.push_str(&format!(
            "{:<8} | {:>8} | {:>8} | {:>8}\n",
            "", "MTA", "RIP mu", "RIP s^2"
        ));
        out.push_str(&format!(
            "{:-<8}-+-{:->8}-+-{:->8}-+-{:->8}\n",
            "", "", "", ""
        ));
        out.push_str(&format!(
            "{:<8} | {:>8.1} | {:>8.1} | {:>8.1}\n",
            "|T|", self.mta.mean_edges, self.rip.mean_edges, self.rip.var_edges
        ));
        out.push_str(&format!(
            "{:<8} | {:>8.1} | {:>8.1} | {:>8.1}\n",
            "C (km)", self.mta.mean_cost_km, self.rip.mean_cost_km, self.rip.var_cost_km
        ));
        out
    }
}
