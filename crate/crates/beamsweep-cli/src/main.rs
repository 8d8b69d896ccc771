use beamsweep_cli::args::{ScenarioFlags, ScenarioOverrides};
use beamsweep_cli::commands::{self, MetricAxis};
use beamsweep_cli::output;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "beamsweep",
    version,
    about = "SSB beam-sweep timing and beam-misalignment metrics for NR TDD deployments",
    after_help = "Scenario flags may also come from a --config key=value file; flags win."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    scenario: ScenarioFlags,

    /// Key = value scenario file (keys mirror the scenario flags)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report gain columns in dB instead of linear
    #[arg(long, global = true)]
    db: bool,

    /// Seed for the simulation subcommand
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Effective SSBs per burst set for every case, pattern and filter
    Table1,
    /// Sweep duration versus requested SSB count
    SweepCurve {
        /// Smallest requested SSB count
        #[arg(long = "n-req-min", default_value_t = 1)]
        n_req_min: u32,
        /// Largest requested SSB count
        #[arg(long = "n-req-max", default_value_t = 512)]
        n_req_max: u32,
        /// Emit every case/pattern/filter combination
        #[arg(long = "all-configs")]
        all_configs: bool,
    },
    /// Overall misalignment duration along a swept scenario field
    DurationCurve {
        #[arg(long, default_value = "nbs", value_parser = MetricAxis::parse)]
        axis: MetricAxis,
        /// Comma-separated axis values (default 1..=128)
        #[arg(long)]
        values: Option<String>,
    },
    /// Misalignment fractions along a swept scenario field
    FractionCurve {
        #[arg(long, default_value = "nbs", value_parser = MetricAxis::parse)]
        axis: MetricAxis,
        #[arg(long)]
        values: Option<String>,
    },
    /// Average beamforming gain along a swept scenario field
    GainCurve {
        #[arg(long, default_value = "nbs", value_parser = MetricAxis::parse)]
        axis: MetricAxis,
        #[arg(long)]
        values: Option<String>,
    },
    /// Start symbols and burst segmentation of the scenario grid
    GridDump,
    /// Closed-form sweep times against the symbol-walk oracle
    Validate {
        #[arg(long = "n-req-max", default_value_t = 512)]
        n_req_max: u32,
    },
    /// Seeded Monte-Carlo comparison against the analytic chain
    Simulate {
        /// Simulated seconds per replication (default: sized for ~10^4 events)
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long, default_value_t = 16)]
        replications: u32,
        /// Largest tolerated |z| before a nonzero exit
        #[arg(long = "z-max", default_value_t = 4.0)]
        z_max: f64,
    },
}

fn run(cli: Cli) -> Result<bool, String> {
    let mut overrides = ScenarioOverrides::from(&cli.scenario);
    overrides.seed = cli.seed;
    if let Some(path) = &cli.config {
        overrides = overrides.merged_over(ScenarioOverrides::from_config_file(path)?);
    }
    let scenario = overrides.build_scenario()?;
    let out = cli.out.as_deref();

    match cli.command {
        Command::Table1 => {
            let mut w = output::csv_writer(out).map_err(|e| e.to_string())?;
            commands::cmd_table1(&mut w)?;
            Ok(true)
        }
        Command::SweepCurve {
            n_req_min,
            n_req_max,
            all_configs,
        } => {
            let mut w = output::csv_writer(out).map_err(|e| e.to_string())?;
            commands::cmd_sweep_curve(&scenario, n_req_min, n_req_max, all_configs, &mut w)?;
            Ok(true)
        }
        Command::DurationCurve { axis, values }
        | Command::FractionCurve { axis, values }
        | Command::GainCurve { axis, values } => {
            let values = match values {
                Some(s) => commands::parse_values(&s)?,
                None => (1..=128).map(f64::from).collect(),
            };
            let mut w = output::csv_writer(out).map_err(|e| e.to_string())?;
            commands::cmd_metric_curve(&scenario, axis, &values, cli.db, &mut w)?;
            Ok(true)
        }
        Command::GridDump => {
            let mut w = output::csv_writer(out).map_err(|e| e.to_string())?;
            commands::cmd_grid_dump(&scenario, &mut w)?;
            Ok(true)
        }
        Command::Validate { n_req_max } => {
            let mut sink = output::text_writer(out).map_err(|e| e.to_string())?;
            commands::cmd_validate(n_req_max, &mut sink)
        }
        Command::Simulate {
            horizon,
            replications,
            z_max,
        } => {
            let mut w = output::csv_writer(out).map_err(|e| e.to_string())?;
            commands::cmd_simulate(&scenario, horizon, replications, overrides.seed(), z_max, &mut w)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
