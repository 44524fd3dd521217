//! The `datafarm` command line: design generation, batch execution,
//! analysis, surrogate modelling, geo utilities and the navigation case
//! study.
//!
//! [`dispatch`] is the whole program; `main` only forwards the process
//! arguments and exit code. Exit codes: 0 success, 1 usage error, 2 data or
//! contract error. Diagnostics go to stderr; data goes to files or stdout.

pub mod config;

/// The command-line chapter of the guide, compiled as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}

use clap::{Args, Parser, Subcommand};
use config::{ExperimentConfig, RunnerConfig};
use datafarm::analysis::{
    self, detect_outliers, eda_summary, emit_plot, fit_distributions, pareto_front, run_hypothesis_test,
    Direction, Family, FitOptions, OutlierMethod, Plot, PlotOptions, SCHEMA_VERSION,
};
use datafarm::doe::{lhs_design, read_design_csv, write_design_csv, Design, FactorSpace, FactorSpec};
use datafarm::exec::{
    attach_inputs, mean_convergence_criterion, run_batches, DesignChunk, NeverStop, Runner, StopCriterion,
    StopReason, SubprocessRunner,
};
use datafarm::geo::{self, EcefCoord, GeodeticCoord, Unit};
use datafarm::models::{self, ModelSpec, Prediction, TrainedModel};
use datafarm::simkit::{self, CaseStudyOptions, NavsimRunner};
use datafarm::table::{format_real, ColumnData, DataColumn, ResultTable, RowStatus};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};

static QUIET: AtomicBool = AtomicBool::new(false);

/// Informational stderr line, silenced by `--quiet`.
macro_rules! note {
    ($($arg:tt)*) => {
        if !QUIET.load(Ordering::Relaxed) {
            eprintln!($($arg)*);
        }
    };
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

type CliResult = Result<(), CliError>;
type BoxedRunner = Box<dyn Fn(&DesignChunk<'_>) -> Result<ResultTable, String>>;
type BoxedCriterion = Box<dyn FnMut(&ResultTable, &ResultTable) -> Result<bool, String>>;

#[derive(Debug, Parser)]
#[command(
    name = "datafarm",
    version,
    about = "Data-farming toolkit: designs, batch runs, analysis and surrogate models"
)]
pub struct Cli {
    /// Suppress progress notes and summaries (errors and warnings still print)
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a Latin hypercube design from a factor-space JSON file
    Doe(DoeArgs),
    /// Execute an experiment described by a config file
    Run(RunArgs),
    /// Statistical analysis of a results CSV
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Surrogate models: search, train, predict, resample
    #[command(subcommand)]
    Model(ModelCommand),
    /// Unit conversion and WGS-84 coordinates
    #[command(subcommand)]
    Geo(GeoCommand),
    /// Reproducible case studies
    #[command(subcommand)]
    Casestudy(CaseStudyCommand),
    /// The navigation simulator in subprocess-runner mode: reads a design
    /// CSV (speed, altitude) and writes a result CSV
    Navsim(NavsimArgs),
}

#[derive(Debug, Args)]
struct DoeArgs {
    /// Factor-space JSON ({"factors": [...]})
    #[arg(long)]
    factors: PathBuf,
    /// Number of design points
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Input CSV; rows whose `_status` is not `ok` are ignored
    #[arg(long)]
    input: PathBuf,
    /// Report JSON (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum AnalyzeCommand {
    /// Select and run a hypothesis test across groups
    Test {
        #[command(flatten)]
        io: InputArgs,
        /// One group per listed numeric column
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["value", "by"])]
        columns: Vec<String>,
        /// Numeric column split into groups by `--by`
        #[arg(long, requires = "by")]
        value: Option<String>,
        /// Grouping column (groups ordered by level)
        #[arg(long, requires = "value")]
        by: Option<String>,
        #[arg(long)]
        paired: bool,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Fit candidate distributions and rank them by K-S distance
    Fit {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        column: String,
        /// Candidate families (normal, uniform, exponential, chi_squared, beta)
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        /// Rescale into (0, 1) before fitting beta
        #[arg(long)]
        rescale_beta: bool,
        /// Skip families whose support excludes the data
        #[arg(long)]
        skip_inapplicable: bool,
        /// Histogram SVG of the column
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Non-dominated front of several objectives
    Pareto {
        #[command(flatten)]
        io: InputArgs,
        /// Objectives as name:min or name:max
        #[arg(long, value_delimiter = ',', required = true)]
        objectives: Vec<String>,
        /// Scatter SVG of the first two objectives
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Flag outliers by z-score or IQR fences
    Outliers {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long)]
        column: String,
        #[arg(long, value_parser = ["zscore", "iqr"], default_value = "iqr")]
        method: String,
        /// Fence multiplier (default 3 for zscore, 1.5 for iqr)
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Exploratory summary of every column
    Eda {
        #[command(flatten)]
        io: InputArgs,
        /// Directory for one histogram SVG per numeric column
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ModelIo {
    /// Training CSV
    #[arg(long)]
    input: PathBuf,
    /// Model spec JSON
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trained model JSON
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum ModelCommand {
    /// Random search with k-fold cross-validation, refit the best
    Search {
        #[command(flatten)]
        io: ModelIo,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        budget: usize,
        /// CV report JSON
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Train a spec whose hyperparameters are all fixed
    Train {
        #[command(flatten)]
        io: ModelIo,
    },
    /// Predict with a trained model
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Predictions CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Metrics JSON against the model's target column in the input
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Synthetic minority oversampling
    Smote {
        #[arg(long)]
        input: PathBuf,
        /// Numeric feature columns
        #[arg(long, value_delimiter = ',', required = true)]
        features: Vec<String>,
        #[arg(long)]
        label: String,
        #[arg(long)]
        minority: String,
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Oversampling amount in percent (multiple of 100)
        #[arg(long, default_value_t = 100)]
        amount: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Synthetic samples CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum GeoCommand {
    /// Convert VALUE between units (m, km, ft, mi, NM, deg, rad)
    #[command(allow_negative_numbers = true)]
    Convert { value: f64, from: String, to: String },
    /// Geodetic (lat lon [alt]) to ECEF
    #[command(allow_negative_numbers = true)]
    ToEcef {
        lat: f64,
        lon: f64,
        #[arg(default_value_t = 0.0)]
        alt: f64,
    },
    /// ECEF (x y z) to geodetic
    #[command(allow_negative_numbers = true)]
    ToGeodetic { x: f64, y: f64, z: f64 },
    /// Haversine distance (m) and initial bearing (deg) between two points
    #[command(allow_negative_numbers = true)]
    Distance {
        lat1: f64,
        lon1: f64,
        lat2: f64,
        lon2: f64,
    },
}

#[derive(Debug, Subcommand)]
enum CaseStudyCommand {
    /// Fighter navigation fuel study: calibrate, design, run, analyse
    Navigation {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4000)]
        n: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        chunk_size: usize,
        /// Stop early once the running mean fuel converges
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        noise_sigma: f64,
    },
}

#[derive(Debug, Args)]
struct NavsimArgs {
    input: PathBuf,
    output: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    noise_sigma: f64,
}

/// Runs the program on `args` (including the program name) and returns
/// the exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    QUIET.store(cli.quiet, Ordering::Relaxed);
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("usage error: {m}"),
                CliError::Data(m) => eprintln!("error: {m}"),
            }
            e.exit_code()
        }
    }
}

fn execute(cmd: Command) -> CliResult {
    match cmd {
        Command::Doe(a) => cmd_doe(a),
        Command::Run(a) => cmd_run(&a.config),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Model(m) => cmd_model(m),
        Command::Geo(g) => cmd_geo(g),
        Command::Casestudy(CaseStudyCommand::Navigation {
            out,
            n,
            seed,
            chunk_size,
            epsilon,
            noise_sigma,
        }) => {
            let opts = CaseStudyOptions {
                n,
                seed,
                chunk_size,
                epsilon,
                noise_sigma,
                ..CaseStudyOptions::default()
            };
            let report = simkit::run_navigation_case_study(&opts, &out).map_err(data)?;
            if !QUIET.load(Ordering::Relaxed) {
                let path = out.join("report.json");
                println!("report: {}", path.display());
                for (name, ok) in &report.checks {
                    println!("check {name}: {}", if *ok { "pass" } else { "FAIL" });
                }
            }
            Ok(())
        }
        Command::Navsim(a) => cmd_navsim(a),
    }
}

// ---------------------------------------------------------------- output

fn write_text(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Data(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(data)
        }
    }
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(data)? + "\n";
    write_text(out, &text)
}

fn write_table(out: Option<&Path>, table: &ResultTable) -> CliResult {
    let mut buf = Vec::new();
    table.write_csv(&mut buf).map_err(data)?;
    write_text(out, &String::from_utf8(buf).map_err(data)?)
}

// ---------------------------------------------------------------- doe / run

fn cmd_doe(a: DoeArgs) -> CliResult {
    let space = FactorSpace::from_path(&a.factors).map_err(data)?;
    let design = lhs_design(&space.factors, a.n, a.seed).map_err(data)?;
    let mut buf = Vec::new();
    write_design_csv(&design, &mut buf).map_err(data)?;
    write_text(a.out.as_deref(), &String::from_utf8(buf).map_err(data)?)
}

#[derive(Debug, Serialize)]
struct RunReport {
    schema_version: u32,
    design_rows: usize,
    chunk_size: usize,
    chunks_executed: usize,
    rows_executed: usize,
    ok_rows: usize,
    failed_rows: usize,
    stop_reason: StopReason,
    config: ExperimentConfig,
}

fn cmd_run(path: &Path) -> CliResult {
    let cfg = ExperimentConfig::from_path(path).map_err(CliError::Data)?;
    let space = FactorSpace::from_path(&cfg.factors).map_err(data)?;
    let design = match &cfg.design {
        Some(p) => {
            let f = std::fs::File::open(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            read_design_csv(std::io::BufReader::new(f), &space.factors).map_err(data)?
        }
        None => lhs_design(&space.factors, cfg.n.unwrap_or(0), cfg.seed).map_err(data)?,
    };
    let runner: BoxedRunner = match &cfg.runner {
        RunnerConfig::Builtin(_) => {
            let r = NavsimRunner {
                params: simkit::calibrate(cfg.noise_sigma).map_err(data)?,
                seed: cfg.seed,
            };
            Box::new(move |c: &DesignChunk<'_>| r.run(c))
        }
        RunnerConfig::Command { command } => {
            let r = SubprocessRunner::new(command[0].clone(), command[1..].to_vec());
            Box::new(move |c: &DesignChunk<'_>| r.run(c))
        }
    };
    let criterion: BoxedCriterion = match &cfg.criterion {
        Some(c) => {
            let mut m = mean_convergence_criterion(c.metric.clone(), c.epsilon, c.floor).map_err(data)?;
            Box::new(move |a: &ResultTable, b: &ResultTable| m.should_stop(a, b))
        }
        None => {
            let mut never = NeverStop;
            Box::new(move |a: &ResultTable, b: &ResultTable| never.should_stop(a, b))
        }
    };
    let (results, exec) = run_batches(&design, runner, criterion, cfg.chunk_size).map_err(data)?;
    for (i, s) in exec.chunk_wall_seconds.iter().enumerate() {
        note!("chunk {}: {s:.3} s", i + 1);
    }
    std::fs::create_dir_all(&cfg.output_dir).map_err(data)?;
    write_design_to(&design, &cfg.output_dir.join("design.csv"))?;
    let full = attach_inputs(&design, &results).map_err(CliError::Data)?;
    full.write_csv_path(cfg.output_dir.join("results.csv"))
        .map_err(data)?;
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        design_rows: design.len(),
        chunk_size: cfg.chunk_size,
        chunks_executed: exec.chunks_executed,
        rows_executed: exec.rows_executed,
        ok_rows: results.ok_count(),
        failed_rows: results.len() - results.ok_count(),
        stop_reason: exec.stop_reason,
        config: cfg.clone(),
    };
    write_json(Some(&cfg.output_dir.join("report.json")), &report)
}

fn write_design_to(design: &Design, path: &Path) -> CliResult {
    let f = std::fs::File::create(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    write_design_csv(design, std::io::BufWriter::new(f)).map_err(data)
}

fn cmd_navsim(a: NavsimArgs) -> CliResult {
    let factors = [
        FactorSpec::continuous("speed", simkit::SPEED_RANGE.0, simkit::SPEED_RANGE.1),
        FactorSpec::continuous("altitude", simkit::ALTITUDE_RANGE.0, simkit::ALTITUDE_RANGE.1),
    ];
    let f =
        std::fs::File::open(&a.input).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    let design = read_design_csv(std::io::BufReader::new(f), &factors).map_err(data)?;
    let params = simkit::calibrate(a.noise_sigma).map_err(data)?;
    let table = simkit::simulate_navigation(&design, &params, a.seed).map_err(data)?;
    table.write_csv_path(&a.output).map_err(data)
}

// ---------------------------------------------------------------- analyze

/// Columns of `path` restricted to rows with status `ok`.
fn load_ok(path: &Path) -> Result<Vec<DataColumn>, CliError> {
    let t =
        ResultTable::read_csv_path(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let ok: Vec<usize> = (0..t.len()).filter(|&r| t.status[r] == RowStatus::Ok).collect();
    Ok(t.columns.iter().map(|c| c.select(&ok)).collect())
}

fn column<'a>(cols: &'a [DataColumn], name: &str) -> Result<&'a DataColumn, CliError> {
    cols.iter()
        .find(|c| c.name == name)
        .ok_or_else(|| CliError::Data(format!("column `{name}` not found")))
}

fn numeric_values(c: &DataColumn) -> Result<Vec<f64>, CliError> {
    c.present_numeric().map_err(data)
}

fn histogram_svg(c: &DataColumn, path: &Path) -> CliResult {
    let mut v = numeric_values(c)?;
    v.sort_by(f64::total_cmp);
    let plot = Plot::from(analysis::eda::histogram(&v));
    let opts = PlotOptions {
        title: c.name.clone(),
        x_label: c.name.clone(),
        y_label: "count".into(),
        ..PlotOptions::default()
    };
    emit_plot(&plot, &opts, path).map_err(data)
}

fn cmd_analyze(cmd: AnalyzeCommand) -> CliResult {
    match cmd {
        AnalyzeCommand::Test {
            io,
            columns,
            value,
            by,
            paired,
            alpha,
        } => {
            let cols = load_ok(&io.input)?;
            let groups: Vec<DataColumn> = match (value, by) {
                (Some(v), Some(b)) => split_groups(column(&cols, &v)?, column(&cols, &b)?)?,
                _ if columns.len() >= 2 => columns
                    .iter()
                    .map(|n| {
                        let c = column(&cols, n)?;
                        Ok(DataColumn::numeric(n.clone(), numeric_values(c)?))
                    })
                    .collect::<Result<_, CliError>>()?,
                _ => {
                    return Err(CliError::Usage(
                        "give --columns a,b[,...] or --value <col> --by <group col>".into(),
                    ))
                }
            };
            let report = run_hypothesis_test(&groups, paired, alpha).map_err(data)?;
            write_json(io.out.as_deref(), &report)
        }
        AnalyzeCommand::Fit {
            io,
            column: name,
            families,
            rescale_beta,
            skip_inapplicable,
            svg,
        } => {
            let cols = load_ok(&io.input)?;
            let c = column(&cols, &name)?;
            let candidates = if families.is_empty() {
                Family::ALL.to_vec()
            } else {
                families
                    .iter()
                    .map(|f| Family::parse(f).ok_or_else(|| CliError::Usage(format!("unknown family `{f}`"))))
                    .collect::<Result<_, _>>()?
            };
            let opts = FitOptions {
                candidates,
                rescale_beta,
                skip_inapplicable,
            };
            let report = fit_distributions(c, &opts).map_err(data)?;
            if let Some(p) = svg {
                histogram_svg(c, &p)?;
            }
            write_json(io.out.as_deref(), &report)
        }
        AnalyzeCommand::Pareto { io, objectives, svg } => {
            let cols = load_ok(&io.input)?;
            let mut values = Vec::new();
            let mut directions = Vec::new();
            for o in &objectives {
                let (name, dir) = o.rsplit_once(':').ok_or_else(|| {
                    CliError::Usage(format!("objective `{o}` must be name:min or name:max"))
                })?;
                directions.push(match dir {
                    "min" => Direction::Minimize,
                    "max" => Direction::Maximize,
                    _ => return Err(CliError::Usage(format!("direction `{dir}` must be min or max"))),
                });
                let c = column(&cols, name)?.as_numeric().map_err(data)?;
                values.push(
                    c.iter()
                        .map(|v| v.ok_or_else(|| CliError::Data(format!("missing value in `{name}`"))))
                        .collect::<Result<Vec<f64>, _>>()?,
                );
            }
            let n = values.first().map_or(0, Vec::len);
            let points: Vec<Vec<f64>> = (0..n).map(|r| values.iter().map(|v| v[r]).collect()).collect();
            let report = pareto_front(&points, &directions).map_err(data)?;
            if let (Some(p), true) = (svg, values.len() >= 2) {
                let opts = PlotOptions {
                    title: "Objectives".into(),
                    x_label: objectives[0].clone(),
                    y_label: objectives[1].clone(),
                    ..PlotOptions::default()
                };
                let plot = Plot::Scatter {
                    x: values[0].clone(),
                    y: values[1].clone(),
                };
                emit_plot(&plot, &opts, &p).map_err(data)?;
            }
            write_json(io.out.as_deref(), &report)
        }
        AnalyzeCommand::Outliers {
            io,
            column: name,
            method,
            k,
            svg,
        } => {
            let cols = load_ok(&io.input)?;
            let c = column(&cols, &name)?;
            let method = match method.as_str() {
                "zscore" => OutlierMethod::Zscore { k: k.unwrap_or(3.0) },
                _ => OutlierMethod::Iqr { k: k.unwrap_or(1.5) },
            };
            let report = detect_outliers(c, method).map_err(data)?;
            if let Some(p) = svg {
                histogram_svg(c, &p)?;
            }
            write_json(io.out.as_deref(), &report)
        }
        AnalyzeCommand::Eda { io, svg_dir } => {
            let cols = load_ok(&io.input)?;
            let report = eda_summary(&cols).map_err(data)?;
            if let Some(dir) = svg_dir {
                std::fs::create_dir_all(&dir).map_err(data)?;
                for c in cols.iter().filter(|c| matches!(c.data, ColumnData::Numeric(_))) {
                    if !numeric_values(c)?.is_empty() {
                        histogram_svg(c, &dir.join(format!("{}_hist.svg", c.name)))?;
                    }
                }
            }
            write_json(io.out.as_deref(), &report)
        }
    }
}

/// Splits `value` into one group per level of `by` (levels sorted).
fn split_groups(value: &DataColumn, by: &DataColumn) -> Result<Vec<DataColumn>, CliError> {
    let v = value.as_numeric().map_err(data)?;
    let keys: Vec<Option<String>> = match &by.data {
        ColumnData::Categorical(c) => c.clone(),
        ColumnData::Numeric(c) => c.iter().map(|x| x.map(format_real)).collect(),
    };
    let mut groups: std::collections::BTreeMap<String, Vec<f64>> = Default::default();
    for (x, k) in v.iter().zip(&keys) {
        if let (Some(x), Some(k)) = (x, k) {
            groups.entry(k.clone()).or_default().push(*x);
        }
    }
    Ok(groups
        .into_iter()
        .map(|(k, xs)| DataColumn::numeric(k, xs))
        .collect())
}

// ---------------------------------------------------------------- model

fn load_spec(path: &Path) -> Result<ModelSpec, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    ModelSpec::from_json(&text).map_err(data)
}

fn cmd_model(cmd: ModelCommand) -> CliResult {
    match cmd {
        ModelCommand::Search {
            io,
            k,
            budget,
            report,
        } => {
            let spec = load_spec(&io.spec)?;
            let cols = load_ok(&io.input)?;
            let (model, cv) = models::random_search_cv(&spec, &cols, k, budget, io.seed).map_err(data)?;
            write_text(Some(&io.out), &(model.to_json().map_err(data)? + "\n"))?;
            note!(
                "best configuration #{} mean {} = {}",
                cv.best_index,
                cv.metric,
                format_real(cv.mean)
            );
            match report {
                Some(p) => write_json(Some(&p), &cv),
                None => Ok(()),
            }
        }
        ModelCommand::Train { io } => {
            let spec = load_spec(&io.spec)?;
            let cols = load_ok(&io.input)?;
            let model = models::train(&spec, &cols, io.seed).map_err(data)?;
            write_text(Some(&io.out), &(model.to_json().map_err(data)? + "\n"))
        }
        ModelCommand::Predict {
            model,
            input,
            out,
            metrics,
        } => {
            let text = std::fs::read_to_string(&model)
                .map_err(|e| CliError::Data(format!("{}: {e}", model.display())))?;
            let m = TrainedModel::from_json(&text).map_err(data)?;
            let cols = load_ok(&input)?;
            let (pred, unseen) = m.predict_with_unseen(&cols).map_err(data)?;
            for (row, col) in &unseen {
                eprintln!("warning: row {row}: unseen level in `{col}` encoded as all zeros");
            }
            let column = match &pred {
                Prediction::Regression(v) => DataColumn::numeric("prediction", v.iter().copied()),
                Prediction::Classification(v) => DataColumn::categorical("prediction", v.iter().cloned()),
            };
            let n = pred.len();
            let table =
                ResultTable::new((0..n).collect(), vec![RowStatus::Ok; n], vec![column]).map_err(data)?;
            write_table(out.as_deref(), &table)?;
            if let Some(p) = metrics {
                let truth_col = column_for_metrics(&cols, &m)?;
                let set = models::evaluate_metrics(&pred, &truth_col).map_err(data)?;
                #[derive(Serialize)]
                struct MetricsReport {
                    schema_version: u32,
                    target: String,
                    metrics: models::MetricSet,
                }
                write_json(
                    Some(&p),
                    &MetricsReport {
                        schema_version: SCHEMA_VERSION,
                        target: m.target.clone(),
                        metrics: set,
                    },
                )?;
            }
            Ok(())
        }
        ModelCommand::Smote {
            input,
            features,
            label,
            minority,
            k,
            amount,
            seed,
            out,
        } => {
            let cols = load_ok(&input)?;
            let fcols: Vec<&[Option<f64>]> = features
                .iter()
                .map(|f| column(&cols, f)?.as_numeric().map_err(data))
                .collect::<Result<_, _>>()?;
            let lab = column(&cols, &label)?;
            let labels: Vec<String> = match &lab.data {
                ColumnData::Categorical(v) => v.iter().map(|x| x.clone().unwrap_or_default()).collect(),
                ColumnData::Numeric(v) => v.iter().map(|x| x.map(format_real).unwrap_or_default()).collect(),
            };
            let n = labels.len();
            let x: Vec<Vec<f64>> = (0..n)
                .map(|r| {
                    fcols
                        .iter()
                        .zip(&features)
                        .map(|(c, name)| {
                            c[r].ok_or_else(|| CliError::Data(format!("missing value in `{name}` row {r}")))
                        })
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            let s = models::smote(&x, &labels, &minority, k, amount, seed).map_err(data)?;
            if s.k_reduced {
                note!(
                    "note: k reduced from {} to {} (minority class too small)",
                    s.k_requested,
                    s.k_used
                );
            }
            let m = s.samples.len();
            let mut columns: Vec<DataColumn> = features
                .iter()
                .enumerate()
                .map(|(j, f)| DataColumn::numeric(f.clone(), s.samples.iter().map(|r| r[j])))
                .collect();
            columns.push(DataColumn::categorical(label.clone(), vec![minority.clone(); m]));
            columns.push(DataColumn::numeric("parent", s.parents.iter().map(|&p| p as f64)));
            columns.push(DataColumn::numeric(
                "neighbour",
                s.neighbours.iter().map(|&p| p as f64),
            ));
            let table = ResultTable::new((0..m).collect(), vec![RowStatus::Ok; m], columns).map_err(data)?;
            write_table(out.as_deref(), &table)
        }
    }
}

fn column_for_metrics(cols: &[DataColumn], m: &TrainedModel) -> Result<Prediction, CliError> {
    let c = column(cols, &m.target)?;
    let missing = || CliError::Data(format!("target `{}` has missing values", m.target));
    Ok(match (&m.classes, &c.data) {
        (None, ColumnData::Numeric(v)) => Prediction::Regression(
            v.iter()
                .map(|x| x.ok_or_else(missing))
                .collect::<Result<_, _>>()?,
        ),
        (None, ColumnData::Categorical(_)) => {
            return Err(CliError::Data(format!("target `{}` is not numeric", m.target)))
        }
        (Some(_), ColumnData::Numeric(v)) => Prediction::Classification(
            v.iter()
                .map(|x| x.map(format_real).ok_or_else(missing))
                .collect::<Result<_, _>>()?,
        ),
        (Some(_), ColumnData::Categorical(v)) => Prediction::Classification(
            v.iter()
                .map(|x| x.clone().ok_or_else(missing))
                .collect::<Result<_, _>>()?,
        ),
    })
}

// ---------------------------------------------------------------- geo

#[derive(Serialize)]
struct DistanceOut {
    distance_m: f64,
    bearing_deg: f64,
}

fn parse_unit(s: &str) -> Result<Unit, CliError> {
    s.parse()
        .map_err(|e: geo::GeoError| CliError::Usage(e.to_string()))
}

fn geodetic(lat: f64, lon: f64, alt: f64) -> Result<GeodeticCoord, CliError> {
    GeodeticCoord::new(lat, lon, alt).map_err(data)
}

fn cmd_geo(cmd: GeoCommand) -> CliResult {
    let line = match cmd {
        GeoCommand::Convert { value, from, to } => {
            // `Display` is the shortest round-trip form without a forced `.0`.
            geo::convert_unit(value, parse_unit(&from)?, parse_unit(&to)?)
                .map_err(data)?
                .to_string()
        }
        GeoCommand::ToEcef { lat, lon, alt } => {
            serde_json::to_string(&geo::geodetic_to_ecef(&geodetic(lat, lon, alt)?)).map_err(data)?
        }
        GeoCommand::ToGeodetic { x, y, z } => {
            serde_json::to_string(&geo::ecef_to_geodetic(&EcefCoord { x, y, z }).map_err(data)?)
                .map_err(data)?
        }
        GeoCommand::Distance {
            lat1,
            lon1,
            lat2,
            lon2,
        } => {
            let (d, b) = geo::distance_bearing(&geodetic(lat1, lon1, 0.0)?, &geodetic(lat2, lon2, 0.0)?);
            serde_json::to_string(&DistanceOut {
                distance_m: d,
                bearing_deg: b,
            })
            .map_err(data)?
        }
    };
    println!("{line}");
    Ok(())
}
