use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use conflict_triad::{
    classify, iterate_bilateral, normalize, parameter_sweep, run_triad, BilateralModel,
    BilateralTrajectory, Error as CoreError, PhaseLabel, Selector, SweepResult,
};
use thiserror::Error;

use crate::config::{load_config, ConfigError, ExperimentConfig};
use crate::output::write_trajectory;
use crate::plot::{parse_axes, render_phase_plot, PlotError};
use crate::presets::PresetId;
use crate::report::format_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COLLAPSE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ctriad",
    version,
    about = "Simulate and classify conflict triad dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a config file, write the trajectory CSV and print a phase report
    Run {
        /// Experiment file (`key = value` lines)
        config: PathBuf,
        #[command(flatten)]
        out: RunOutput,
    },
    /// Iterate a two-substance map from inline vectors
    Bilateral(BilateralArgs),
    /// Simulate and print only the phase report
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Classify a grid of values for one parameter or initial coordinate
    Sweep(SweepArgs),
    /// Run a built-in configuration
    Preset {
        id: PresetId,
        /// Print notes about the preset and exit
        #[arg(long)]
        describe: bool,
        /// Print the preset as a config file and exit
        #[arg(long)]
        print_config: bool,
        #[command(flatten)]
        out: RunOutput,
    },
}

#[derive(Debug, Args)]
pub struct RunOutput {
    /// Override the number of steps
    #[arg(long)]
    pub steps: Option<usize>,
    /// Trajectory CSV path
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Phase-plane SVG path
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Plot axes, e.g. `P_1,Q_1`; `N` is the step index
    #[arg(long)]
    pub axes: Option<String>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub preset: Option<PresetId>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Pm,
    Mp,
    Mm,
}

impl ModelArg {
    fn model(self) -> BilateralModel {
        match self {
            ModelArg::Pm => BilateralModel::PlusMinus,
            ModelArg::Mp => BilateralModel::MinusPlus,
            ModelArg::Mm => BilateralModel::MinusMinus,
        }
    }

    /// Names of the first and second vector.
    fn names(self) -> (&'static str, &'static str) {
        match self {
            ModelArg::Pm => ("p", "r"),
            ModelArg::Mp => ("p", "q"),
            ModelArg::Mm => ("q", "r"),
        }
    }
}

#[derive(Debug, Args)]
pub struct BilateralArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub q: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    /// Decimal places in the printed result
    #[arg(long, default_value_t = 6)]
    pub digits: usize,
    /// Write every step as CSV
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    /// `d1`..`c`, or an initial coordinate such as `R_2`
    #[arg(long)]
    pub param: String,
    /// Explicit grid, comma-separated
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "range"
    )]
    pub values: Option<Vec<f64>>,
    /// Evenly spaced grid `start,stop,count` (inclusive)
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub range: Option<Vec<f64>>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Table path; stdout when absent
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] CoreError),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run_command(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run_command(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Run { config, out: opts } => {
            let cfg = load_config(&config)?;
            simulate(cfg, &opts, None, out)
        }
        Command::Preset {
            id,
            describe,
            print_config,
            out: opts,
        } => {
            if describe {
                writeln!(out, "{}: {}", id.name(), id.describe()).map_err(stdout_err)?;
                return Ok(EXIT_OK);
            }
            if print_config {
                write!(out, "{}", id.config().to_file_string()).map_err(stdout_err)?;
                return Ok(EXIT_OK);
            }
            simulate(id.config(), &opts, Some(id), out)
        }
        Command::Classify { source, steps } => {
            let (mut cfg, _) = load_source(&source)?;
            if let Some(s) = steps {
                cfg.steps = s;
            }
            let t = run_triad(&cfg.triad, cfg.steps)?;
            let label = classify(&t, &cfg.settings)?;
            writeln!(out, "{}", format_report(&label)).map_err(stdout_err)?;
            Ok(exit_for(&label))
        }
        Command::Bilateral(args) => bilateral(args, out),
        Command::Sweep(args) => sweep(args, out),
    }
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn exit_for(label: &PhaseLabel) -> i32 {
    match label {
        PhaseLabel::Collapse { .. } => EXIT_COLLAPSE,
        _ => EXIT_OK,
    }
}

fn load_source(source: &Source) -> Result<(ExperimentConfig, Option<PresetId>), CliError> {
    match (&source.config, source.preset) {
        (Some(path), None) => Ok((load_config(path)?, None)),
        (None, Some(id)) => Ok((id.config(), Some(id))),
        _ => Err(CliError::Usage(
            "give exactly one of --config or --preset".into(),
        )),
    }
}

fn simulate(
    mut cfg: ExperimentConfig,
    opts: &RunOutput,
    preset: Option<PresetId>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if let Some(s) = opts.steps {
        cfg.steps = s;
    }
    let axes = match (&opts.axes, preset) {
        (Some(a), _) => Some(parse_axes(a)?),
        (None, Some(id)) => {
            let (x, y) = id.default_axes();
            Some((x.parse()?, y.parse()?))
        }
        (None, None) => None,
    };
    let t = run_triad(&cfg.triad, cfg.steps)?;
    if let Some(path) = opts.output.as_ref().or(cfg.output.as_ref()) {
        write_trajectory(&t, path).map_err(io_err(path))?;
    }
    if let Some(path) = &opts.plot {
        let axes = axes.ok_or_else(|| CliError::Usage("--plot needs --axes".into()))?;
        render_phase_plot(&t, axes, path)?;
    }
    match classify(&t, &cfg.settings) {
        Ok(label) => {
            writeln!(out, "{}", format_report(&label)).map_err(stdout_err)?;
            Ok(exit_for(&label))
        }
        // Short runs are still written; they just cannot be labelled.
        Err(CoreError::TooShort { .. }) => Ok(EXIT_OK),
        Err(e) => Err(e.into()),
    }
}

fn bilateral(args: BilateralArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (xn, yn) = args.model.names();
    let pick = |name: &str| match name {
        "p" => &args.p,
        "r" => &args.r,
        _ => &args.q,
    };
    let unused = ["p", "r", "q"]
        .into_iter()
        .find(|&k| k != xn && k != yn && pick(k).is_some());
    if let Some(k) = unused {
        return Err(CliError::Usage(format!(
            "--{k} is not used by model {}",
            args.model.model()
        )));
    }
    let get = |name: &str| {
        pick(name)
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("model needs --{xn} and --{yn}")))
            .and_then(|v| normalize(v).map_err(CliError::from))
    };
    let x = get(xn)?;
    let y = get(yn)?;
    let t = iterate_bilateral(args.model.model(), &x, &y, args.steps)?;
    if let Some(path) = &args.trajectory {
        std::fs::write(path, bilateral_csv(&t, xn, yn)).map_err(io_err(path))?;
    }
    let last = t.last();
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|c| format!("{c:.*}", args.digits))
            .collect::<Vec<_>>()
            .join(",")
    };
    let theta = last.x.inner(&last.y)?.value();
    writeln!(
        out,
        "step={} {xn}={} {yn}={} theta={theta:.*}",
        last.step,
        fmt(last.x.coords()),
        fmt(last.y.coords()),
        args.digits
    )
    .map_err(stdout_err)?;
    if let Some(f) = t.failure() {
        writeln!(out, "stopped at step {}: {}", f.step, f.error).map_err(stdout_err)?;
        return Ok(EXIT_COLLAPSE);
    }
    Ok(EXIT_OK)
}

fn bilateral_csv(t: &BilateralTrajectory, xn: &str, yn: &str) -> String {
    let n = t.states()[0].x.len();
    let mut s = String::from("step");
    for name in [xn, yn] {
        for i in 1..=n {
            write!(s, ",{name}_{i}").unwrap();
        }
    }
    s.push_str(",theta\n");
    for (state, theta) in t.states().iter().zip(t.conflict_indices()) {
        write!(s, "{}", state.step).unwrap();
        for v in state.x.coords().iter().chain(state.y.coords()) {
            write!(s, ",{v}").unwrap();
        }
        writeln!(s, ",{theta}").unwrap();
    }
    s
}

fn grid(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    match (&args.values, &args.range) {
        (Some(v), None) => Ok(v.clone()),
        (None, Some(r)) => {
            let [start, stop, count] = r[..] else {
                return Err(CliError::Usage("--range takes start,stop,count".into()));
            };
            if !(count >= 1.0 && count.fract() == 0.0) {
                return Err(CliError::Usage(
                    "--range count must be a positive integer".into(),
                ));
            }
            let count = count as usize;
            if count == 1 {
                return Ok(vec![start]);
            }
            let h = (stop - start) / (count - 1) as f64;
            Ok((0..count).map(|i| start + h * i as f64).collect())
        }
        _ => Err(CliError::Usage("give one of --values or --range".into())),
    }
}

/// Sweep table: `value,phase,period,collapse_step`. Wave periods are joined
/// with `;`.
pub fn sweep_table(result: &SweepResult) -> String {
    let mut s = String::from("value,phase,period,collapse_step\n");
    for p in &result.points {
        let period = match &p.label {
            PhaseLabel::Cycle { period, .. } => period.to_string(),
            PhaseLabel::WaveOfCycles { periods } => periods
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(";"),
            _ => String::new(),
        };
        let step = match p.label {
            PhaseLabel::Collapse { step } => step.to_string(),
            _ => String::new(),
        };
        writeln!(s, "{},{},{period},{step}", p.value, p.label.name()).unwrap();
    }
    s
}

fn sweep(args: SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (cfg, _) = load_source(&args.source)?;
    let selector: Selector = args.param.parse()?;
    let grid = grid(&args)?;
    let steps = args.steps.unwrap_or(cfg.steps);
    let result = parameter_sweep(&cfg.triad, selector, &grid, steps, &cfg.settings)?;
    let table = sweep_table(&result);
    match &args.output {
        Some(path) => {
            std::fs::write(path, table).map_err(io_err(path))?;
            for (a, b) in &result.boundaries {
                writeln!(out, "boundary={a},{b}").map_err(stdout_err)?;
            }
        }
        None => out.write_all(table.as_bytes()).map_err(stdout_err)?,
    }
    Ok(EXIT_OK)
}
