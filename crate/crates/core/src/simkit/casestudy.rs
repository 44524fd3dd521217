//! End-to-end navigation case study: calibrate, design, execute, analyse.
//!
//! Steps: calibrate the fuel model; draw an LHS design over speed and
//! altitude; run it through the execution controller with the `navsim`
//! runner; fit fuel on time of flight by least squares; locate the extrema
//! of the noise-free fuel surface on a 201 × 251 grid; write the results
//! table, a fuel heatmap, a time-vs-fuel scatter and a JSON report. Each
//! property check is reported as a boolean rather than enforced, so the
//! report documents where the model agrees with the scenario's
//! qualitative claims and where it does not.

use super::{calibrate, total_fuel, FuelGrid, FuelModelParams, GridPoint, NavsimRunner, ANCHORS};
use crate::analysis::{emit_plot, Plot, PlotOptions, SCHEMA_VERSION};
use crate::doe::{lhs_design, write_design_csv, FactorSpec};
use crate::exec::{attach_inputs, mean_convergence_criterion, run_batches, NeverStop, StopReason};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyOptions {
    pub n: usize,
    pub seed: u64,
    pub chunk_size: usize,
    /// Optional early stop on the running mean of `fuel_consumed`.
    pub epsilon: Option<f64>,
    pub noise_sigma: f64,
    pub grid: (usize, usize),
    /// Heatmap resolution (speed × altitude cells).
    pub heatmap: (usize, usize),
}

impl Default for CaseStudyOptions {
    fn default() -> Self {
        CaseStudyOptions {
            n: 4000,
            seed: 7,
            chunk_size: 100,
            epsilon: None,
            noise_sigma: 0.0,
            grid: (201, 251),
            heatmap: (41, 51),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorCheck {
    pub speed: f64,
    pub altitude: f64,
    pub target: f64,
    pub value: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyReport {
    pub schema_version: u32,
    pub options: CaseStudyOptions,
    pub params: FuelModelParams,
    pub anchors: Vec<AnchorCheck>,
    pub rows_executed: usize,
    pub chunks_executed: usize,
    pub stop_reason: StopReason,
    /// Least-squares fit of `fuel_consumed` on `time_of_flight`.
    pub time_fuel_fit: LinearFit,
    pub grid_argmin: GridPoint,
    pub grid_argmax: GridPoint,
    pub checks: BTreeMap<String, bool>,
    pub files: BTreeMap<String, String>,
}

impl CaseStudyReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.values().all(|v| *v)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CaseStudyError {
    #[error(transparent)]
    Sim(#[from] super::SimError),
    #[error(transparent)]
    Doe(#[from] crate::doe::DoeError),
    #[error(transparent)]
    Exec(#[from] crate::exec::ExecError),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
    #[error(transparent)]
    Table(#[from] crate::table::TableError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Other(String),
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let r2 = if sxx > 0.0 && syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept: my - slope * mx,
        r2,
    }
}

fn path_string(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

/// Runs the case study, writing artefacts into `out_dir` (created if
/// needed).
pub fn run_navigation_case_study(
    opts: &CaseStudyOptions,
    out_dir: impl AsRef<Path>,
) -> Result<CaseStudyReport, CaseStudyError> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir)?;
    let params = calibrate(opts.noise_sigma)?;
    let anchors: Vec<AnchorCheck> = ANCHORS
        .iter()
        .map(|&(speed, altitude, target)| {
            let value = total_fuel(speed, altitude, &params)?;
            Ok(AnchorCheck {
                speed,
                altitude,
                target,
                value,
                residual: value - target,
            })
        })
        .collect::<Result<_, super::SimError>>()?;

    let factors = [
        FactorSpec::continuous("speed", super::SPEED_RANGE.0, super::SPEED_RANGE.1),
        FactorSpec::continuous("altitude", super::ALTITUDE_RANGE.0, super::ALTITUDE_RANGE.1),
    ];
    let design = lhs_design(&factors, opts.n, opts.seed)?;
    let runner = NavsimRunner {
        params,
        seed: opts.seed,
    };
    let (results, exec) = match opts.epsilon {
        Some(eps) => run_batches(
            &design,
            runner,
            mean_convergence_criterion("fuel_consumed", eps, 1e-9)?,
            opts.chunk_size,
        )?,
        None => run_batches(&design, runner, NeverStop, opts.chunk_size)?,
    };
    let time = results.ok_numeric("time_of_flight")?;
    let fuel = results.ok_numeric("fuel_consumed")?;
    let fit = linear_fit(&time, &fuel);

    let grid = FuelGrid::new(&params, opts.grid.0, opts.grid.1)?;
    let (argmin, argmax) = (grid.argmin(), grid.argmax());
    let heat = FuelGrid::new(&params, opts.heatmap.0, opts.heatmap.1)?;

    let mut files = BTreeMap::new();
    let design_path: PathBuf = out_dir.join("design.csv");
    write_design_csv(
        &design,
        std::io::BufWriter::new(std::fs::File::create(&design_path)?),
    )?;
    files.insert("design".to_string(), path_string(&design_path));
    let results_path = out_dir.join("results.csv");
    attach_inputs(&design, &results)
        .map_err(CaseStudyError::Other)?
        .write_csv_path(&results_path)?;
    files.insert("results".to_string(), path_string(&results_path));
    let heatmap_path = out_dir.join("fuel_heatmap.svg");
    emit_plot(
        &Plot::Heatmap {
            x: heat.speeds.clone(),
            y: heat.altitudes.clone(),
            z: heat.fuel.clone(),
        },
        &PlotOptions {
            title: "Total fuel (lb)".into(),
            x_label: "speed (kt)".into(),
            y_label: "altitude (ft)".into(),
            ..PlotOptions::default()
        },
        &heatmap_path,
    )?;
    files.insert("heatmap".to_string(), path_string(&heatmap_path));
    let scatter_path = out_dir.join("time_vs_fuel.svg");
    emit_plot(
        &Plot::Scatter {
            x: time.clone(),
            y: fuel.clone(),
        },
        &PlotOptions {
            title: "Fuel consumed vs time of flight".into(),
            x_label: "time_of_flight (s)".into(),
            y_label: "fuel_consumed (lb)".into(),
            ..PlotOptions::default()
        },
        &scatter_path,
    )?;
    files.insert("scatter".to_string(), path_string(&scatter_path));
    let report_path = out_dir.join("report.json");
    files.insert("report".to_string(), path_string(&report_path));

    let within = |p: &GridPoint, (v0, v1): (f64, f64), (h0, h1): (f64, f64)| {
        (v0..=v1).contains(&p.speed) && (h0..=h1).contains(&p.altitude)
    };
    let mut checks = BTreeMap::new();
    checks.insert(
        "anchors_within_1e-6".to_string(),
        anchors.iter().all(|a| a.residual.abs() <= 1e-6),
    );
    checks.insert(
        "argmax_in_500-550kt_10k-12kft".to_string(),
        within(&argmax, (500.0, 550.0), (10_000.0, 12_000.0)),
    );
    checks.insert(
        "argmin_in_400-450kt_25k-30kft".to_string(),
        within(&argmin, (400.0, 450.0), (25_000.0, 30_000.0)),
    );
    checks.insert(
        "grid_min_in_900-1100lb".to_string(),
        (900.0..=1100.0).contains(&argmin.fuel),
    );
    checks.insert(
        "grid_max_in_1700-1900lb".to_string(),
        (1700.0..=1900.0).contains(&argmax.fuel),
    );
    checks.insert("time_fuel_r2_below_0.5".to_string(), fit.r2 < 0.5);

    let report = CaseStudyReport {
        schema_version: SCHEMA_VERSION,
        options: opts.clone(),
        params,
        anchors,
        rows_executed: exec.rows_executed,
        chunks_executed: exec.chunks_executed,
        stop_reason: exec.stop_reason,
        time_fuel_fit: fit,
        grid_argmin: argmin,
        grid_argmax: argmax,
        checks,
        files,
    };
    std::fs::write(&report_path, serde_json::to_string_pretty(&report)? + "\n")?;
    Ok(report)
}
