use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use uavtour::config::{PlanConfig, Solver};
use uavtour::fixture;
use uavtour::geometry::RoadClass;
use uavtour::pipeline::{
    load_dataset_files, radius_table, read_config, read_plan_document, run_compare, run_plan,
    run_sweep, write_compare, write_sweep, PipelineError,
};
use uavtour::planner::RipGrowth;

/// The eleven building heights of the reference radius table, meters.
const REFERENCE_HEIGHTS: [f64; 11] = [
    5.0, 5.5, 8.0, 10.0, 11.5, 13.5, 17.0, 24.0, 38.0, 45.0, 52.0,
];

#[derive(Parser)]
#[command(
    name = "uavtour",
    version,
    about = "Drone monitoring sites and distance-bounded tour plans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the detection radius for each maximum building height.
    Radius {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated heights in meters.
        #[arg(long, value_delimiter = ',')]
        heights: Option<Vec<f64>>,
    },
    /// Place monitoring sites and compute tours.
    Plan {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare a plan against the random-initial-placement baseline.
    Compare {
        /// plan.json written by `plan`.
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        /// Defaults to the plan's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Baseline growth rule: round-robin or global-cheapest.
        #[arg(long, default_value = "round-robin")]
        growth: RipGrowth,
    },
    /// Tour count as a function of the maximum travel distance.
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated budgets in km.
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 20.0, 40.0, 80.0])]
        max_distances: Vec<f64>,
    },
    /// Write the synthetic test city (roads, subareas, config).
    Fixture {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    roads: PathBuf,
    #[arg(long)]
    subareas: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    solver: Option<Solver>,
    /// Comma-separated road classes to keep.
    #[arg(long, value_delimiter = ',')]
    classes: Option<Vec<RoadClass>>,
}

impl Inputs {
    fn config(&self) -> Result<PlanConfig, PipelineError> {
        let mut config = match &self.config {
            Some(path) => read_config(path)?,
            None => PlanConfig::default(),
        };
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(solver) = self.solver {
            config.solver = solver;
        }
        if let Some(classes) = &self.classes {
            config.road_classes = classes.clone();
            config.road_classes.sort();
            config.road_classes.dedup();
        }
        Ok(config)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), PipelineError> {
    std::fs::write(path, contents).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    match cli.command {
        Command::Radius { config, heights } => {
            let los = match config {
                Some(path) => read_config(&path)?.los,
                None => PlanConfig::default().los,
            };
            let heights = heights.unwrap_or_else(|| REFERENCE_HEIGHTS.to_vec());
            println!("{:>8}  {:>8}", "h_M (m)", "R (m)");
            for row in radius_table(&heights, &los) {
                if row.clamped {
                    eprintln!(
                        "warning: h_M = {} m is not above the vehicle height; using r_max = {} m",
                        row.h_max_m, los.r_max_m
                    );
                }
                println!("{:>8.1}  {:>8.1}", row.h_max_m, row.radius_m);
            }
        }
        Command::Plan { inputs, out } => {
            let config = inputs.config()?;
            let dataset = load_dataset_files(&inputs.roads, &inputs.subareas)?;
            println!(
                "m_d = {} km (v = {} km/h, t = {} min)",
                config.fleet.max_distance_km, config.fleet.speed_kmh, config.fleet.max_flight_min
            );
            let run = run_plan(&dataset, &config)?;
            run.write(&out)?;
            let counts = &run.report.counts;
            println!(
                "candidate sites: {}, PoIs: {}, selected sites: {}",
                counts.candidate_sites, counts.pois, counts.selected_sites
            );
            let stats = &run.report.stats;
            println!(
                "tours: {}, mean cost: {:.2} km, mean edges: {:.1}, CV: {}",
                stats.tours,
                stats.mean_cost_km,
                stats.mean_edges,
                stats.cv.map_or("n/a".to_string(), |cv| format!("{cv:.3}"))
            );
            println!("wrote {}", out.display());
        }
        Command::Compare {
            plan,
            out,
            runs,
            seed,
            growth,
        } => {
            let doc = read_plan_document(&plan)?;
            let seed = seed.unwrap_or(doc.plan.seed);
            let comparison = run_compare(&doc, runs, seed, growth)?;
            write_compare(&comparison, &out)?;
            print!("{}", comparison.to_table());
        }
        Command::Sweep {
            inputs,
            out,
            max_distances,
        } => {
            let config = inputs.config()?;
            let dataset = load_dataset_files(&inputs.roads, &inputs.subareas)?;
            let points = run_sweep(&dataset, &config, &max_distances)?;
            write_sweep(&points, &out)?;
            for p in &points {
                println!("m_d = {} km -> {} tours", p.max_distance_km, p.tours);
            }
        }
        Command::Fixture { out } => {
            std::fs::create_dir_all(&out).map_err(|source| PipelineError::Io {
                path: out.display().to_string(),
                source,
            })?;
            write_file(&out.join("roads.geojson"), &fixture::roads_geojson())?;
            write_file(&out.join("subareas.geojson"), &fixture::subareas_geojson())?;
            write_file(&out.join("config.toml"), &fixture::config_toml())?;
            println!("wrote {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
