use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ampsep_core::experiment::{
    run_experiment, Experiment, ExperimentSpec, FunctionSpec, ReportFormat, Target,
};
use ampsep_core::{BooleanFunction, EstimationMode};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit status for an invalid experiment spec.
const EXIT_INVALID_SPEC: u8 = 2;
/// Exit status when a simulation invariant breaks.
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ampsep",
    version,
    about = "Amplitude separation experiments on an exact statevector simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Number of independent trials.
    #[arg(long, global = true, default_value_t = 1)]
    trials: u64,

    /// Master seed; trial i uses substream i.
    #[arg(long, global = true, env = "AMPSEP_SEED", default_value_t = 0)]
    seed: u64,

    /// Worker threads for trials (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    parallel: usize,

    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Distribution)]
    mode: ModeArg,

    /// Report format; defaults to csv for `curves` and json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Include one record per trial in JSON reports.
    #[arg(long, global = true)]
    per_trial: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Distribution,
    Statevector,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Additive-error amplitude estimation.
    Estimate {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        /// Override the median repetition count (odd).
        #[arg(long)]
        repetitions: Option<u32>,
    },
    /// Decide p >= t versus p <= t'.
    Separate {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long)]
        repetitions: Option<u32>,
    },
    /// Decide wt(f) >= k2 versus wt(f) <= k1.
    Wdp {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long)]
        k1: u64,
        #[arg(long)]
        k2: u64,
        #[arg(long)]
        delta: f64,
    },
    /// Find wt(f) among candidate weights.
    Mwdp {
        #[command(flatten)]
        function: FunctionArgs,
        /// Strictly increasing, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long)]
        delta: f64,
    },
    /// Dominant query-complexity terms of the three strategies as CSV.
    Curves {
        #[arg(long = "rho-y")]
        rho_y: f64,
        /// Defaults to 1 - rho_y.
        #[arg(long = "rho-n-max")]
        rho_n_max: Option<f64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Classical repetition, estimation only and separation on the same input.
    Trials {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
    },
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[arg(long)]
    t: f64,
    #[arg(long = "tprime")]
    t_prime: f64,
    #[arg(long)]
    delta: f64,
}

#[derive(Args, Debug)]
struct FunctionArgs {
    /// Truth-table file (`n=<int>` then the table, or `weight=`/`seed=`).
    #[arg(long = "truth-table", conflicts_with_all = ["n", "weight"])]
    truth_table: Option<PathBuf>,
    /// Input bits of a pseudorandom function.
    #[arg(long, requires = "weight")]
    n: Option<u32>,
    /// Exact weight of the pseudorandom function.
    #[arg(long, alias = "wt", requires = "n")]
    weight: Option<u64>,
    #[arg(long = "fn-seed", default_value_t = 0)]
    fn_seed: u64,
}

#[derive(Args, Debug)]
struct TargetArgs {
    /// Analytic success probability of the algorithm.
    #[arg(long, conflicts_with_all = ["truth_table", "n", "weight"])]
    p: Option<f64>,
    #[command(flatten)]
    function: FunctionArgs,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] ampsep_core::Error),
    #[error("cannot write report: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID_SPEC,
            CliError::Core(ampsep_core::Error::Invariant(_)) => EXIT_INVARIANT,
            CliError::Core(_) => EXIT_INVALID_SPEC,
            CliError::Output(_) => 1,
        }
    }
}

fn read_function(path: &Path) -> Result<FunctionSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Invalid(format!("cannot read truth table {}: {e}", path.display()))
    })?;
    let f = BooleanFunction::parse(&text)?;
    Ok(FunctionSpec::from_function(&f))
}

impl FunctionArgs {
    fn spec(&self) -> Result<FunctionSpec, CliError> {
        match (&self.truth_table, self.n, self.weight) {
            (Some(path), _, _) => read_function(path),
            (None, Some(n), Some(weight)) => Ok(FunctionSpec::Weighted {
                n,
                weight,
                seed: self.fn_seed,
            }),
            _ => Err(CliError::Invalid(
                "a function is required: --truth-table FILE or --n N --weight W".into(),
            )),
        }
    }
}

impl TargetArgs {
    fn target(&self) -> Result<Target, CliError> {
        match self.p {
            Some(p) => Ok(Target::Probability(p)),
            None => self.function.spec().map(Target::Function).map_err(|_| {
                CliError::Invalid(
                    "an algorithm is required: --p P, --truth-table FILE, or --n N --weight W"
                        .into(),
                )
            }),
        }
    }
}

fn build_spec(cli: &Cli) -> Result<ExperimentSpec, CliError> {
    let experiment = match &cli.command {
        Command::Estimate {
            target,
            epsilon,
            delta,
            repetitions,
        } => Experiment::Estimate {
            target: target.target()?,
            epsilon: *epsilon,
            delta: *delta,
            repetitions: *repetitions,
        },
        Command::Separate {
            target,
            thresholds,
            repetitions,
        } => Experiment::Separate {
            target: target.target()?,
            t: thresholds.t,
            t_prime: thresholds.t_prime,
            delta: thresholds.delta,
            repetitions: *repetitions,
        },
        Command::Wdp {
            function,
            k1,
            k2,
            delta,
        } => Experiment::Wdp {
            function: function.spec()?,
            k1: *k1,
            k2: *k2,
            delta: *delta,
        },
        Command::Mwdp {
            function,
            weights,
            delta,
        } => Experiment::Mwdp {
            function: function.spec()?,
            weights: weights.clone(),
            delta: *delta,
        },
        Command::Curves {
            rho_y,
            rho_n_max,
            steps,
        } => Experiment::Curves {
            rho_y: *rho_y,
            rho_n_max: rho_n_max.unwrap_or(1.0 - rho_y),
            steps: *steps,
        },
        Command::Trials { target, thresholds } => Experiment::Trials {
            target: target.target()?,
            t: thresholds.t,
            t_prime: thresholds.t_prime,
            delta: thresholds.delta,
        },
    };
    Ok(ExperimentSpec {
        experiment,
        trials: cli.trials,
        seed: cli.seed,
        mode: match cli.mode {
            ModeArg::Distribution => EstimationMode::Distribution,
            ModeArg::Statevector => EstimationMode::Statevector,
        },
        per_trial: cli.per_trial,
    })
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let spec = build_spec(cli)?;
    let report = run_experiment(&spec, cli.parallel)?;
    let format = match (cli.format, &spec.experiment) {
        (Some(FormatArg::Json), _) => ReportFormat::Json,
        (Some(FormatArg::Csv), _) | (None, Experiment::Curves { .. }) => ReportFormat::Csv,
        (None, _) => ReportFormat::Json,
    };
    let body = report.render(format);
    match &cli.output {
        Some(path) => fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_failure_kind() {
        assert_eq!(CliError::Invalid("x".into()).exit_code(), 2);
        assert_eq!(
            CliError::Core(ampsep_core::Error::Domain("x".into())).exit_code(),
            2
        );
        assert_eq!(
            CliError::Core(ampsep_core::Error::Invariant("x".into())).exit_code(),
            3
        );
        let io = std::io::Error::other("x");
        assert_eq!(CliError::Output(io).exit_code(), 1);
    }

    #[test]
    fn command_line_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
