//! Analytic flight-fuel simulator for a fixed navigation scenario.
//!
//! A fighter flies a 500 NM route at constant speed `v` (kt) and altitude
//! `h` (ft) and holds for 600 s at the same flow. Fuel flow follows a
//! two-term drag-polar shape
//!
//! `FF(v, h) = A·σ(h)·(v/100)³ + B / (σ(h)·(v/100))`  (lb/hr)
//!
//! with the ISA density ratio `σ(h) = (1 − h/145442)^4.2559`. The constants
//! `A` (parasite) and `B` (induced) are solved exactly from two anchor
//! totals by [`calibrate`]. Optional multiplicative lognormal noise with
//! median one is drawn from a stream keyed by `(seed, design row)`, so results do
//! not depend on chunking or thread count.

pub mod casestudy;

pub use casestudy::{run_navigation_case_study, CaseStudyOptions, CaseStudyReport};

use crate::doe::{FactorSpec, Value};
use crate::exec::{DesignChunk, Runner};
use crate::rng::Stream;
use crate::table::{DataColumn, ResultTable, RowStatus};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ROUTE_DISTANCE_NM: f64 = 500.0;
pub const HOLD_SECONDS: f64 = 600.0;
pub const SPEED_RANGE: (f64, f64) = (350.0, 550.0);
pub const ALTITUDE_RANGE: (f64, f64) = (10_000.0, 35_000.0);
/// Calibration anchors `(speed kt, altitude ft, total fuel lb)`.
pub const ANCHORS: [(f64, f64, f64); 2] = [(525.0, 10_000.0, 1800.0), (425.0, 27_500.0, 1000.0)];
/// Output column names, in order.
pub const OUTPUTS: [&str; 2] = ["time_of_flight", "fuel_consumed"];

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("calibration error: {0}")]
    Calibration(String),
    #[error("contract error: {0}")]
    Contract(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FuelModelParams {
    /// Parasite-term coefficient (lb/hr).
    pub a: f64,
    /// Induced-term coefficient (lb/hr).
    pub b: f64,
    pub route_distance_nm: f64,
    pub hold_seconds: f64,
    /// Relative lognormal σ; 0 is deterministic.
    pub noise_sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlightOutput {
    pub time_of_flight: f64,
    pub fuel_consumed: f64,
}

/// ISA density ratio at `altitude_ft`.
pub fn sigma(altitude_ft: f64) -> f64 {
    (1.0 - altitude_ft / 145_442.0).powf(4.2559)
}

fn check_input(speed: f64, altitude: f64) -> Result<(), SimError> {
    let ok = |x: f64, (lo, hi): (f64, f64)| x.is_finite() && (lo..=hi).contains(&x);
    if !ok(speed, SPEED_RANGE) {
        return Err(SimError::Domain(format!("speed {speed} kt outside [350, 550]")));
    }
    if !ok(altitude, ALTITUDE_RANGE) {
        return Err(SimError::Domain(format!(
            "altitude {altitude} ft outside [10000, 35000]"
        )));
    }
    Ok(())
}

/// The two basis terms `(σ·(v/100)³, 1/(σ·(v/100)))` multiplying A and B.
fn basis(speed: f64, altitude: f64) -> (f64, f64) {
    let s = sigma(altitude);
    let u = speed / 100.0;
    (s * u.powi(3), 1.0 / (s * u))
}

/// Fuel flow in lb/hr.
pub fn fuel_flow(speed: f64, altitude: f64, p: &FuelModelParams) -> Result<f64, SimError> {
    check_input(speed, altitude)?;
    let (ta, tb) = basis(speed, altitude);
    Ok(p.a * ta + p.b * tb)
}

/// Route time plus hold, in seconds.
pub fn time_of_flight(speed: f64, p: &FuelModelParams) -> f64 {
    p.route_distance_nm / speed * 3600.0 + p.hold_seconds
}

/// Noise-free total fuel (lb).
pub fn total_fuel(speed: f64, altitude: f64, p: &FuelModelParams) -> Result<f64, SimError> {
    Ok(fuel_flow(speed, altitude, p)? * time_of_flight(speed, p) / 3600.0)
}

/// Solves for `A`, `B` so both [`ANCHORS`] are met exactly.
pub fn calibrate(noise_sigma: f64) -> Result<FuelModelParams, SimError> {
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(SimError::Calibration(format!(
            "noise_sigma must be >= 0, got {noise_sigma}"
        )));
    }
    let mut p = FuelModelParams {
        a: 0.0,
        b: 0.0,
        route_distance_nm: ROUTE_DISTANCE_NM,
        hold_seconds: HOLD_SECONDS,
        noise_sigma,
    };
    let rows: Vec<(f64, f64, f64)> = ANCHORS
        .iter()
        .map(|&(v, h, target)| {
            let hours = time_of_flight(v, &p) / 3600.0;
            let (ta, tb) = basis(v, h);
            (ta * hours, tb * hours, target)
        })
        .collect();
    let (a1, b1, c1) = rows[0];
    let (a2, b2, c2) = rows[1];
    let det = a1 * b2 - a2 * b1;
    if det.abs() < 1e-12 * (a1 * b2).abs().max((a2 * b1).abs()) {
        return Err(SimError::Calibration("anchor system is singular".into()));
    }
    p.a = (c1 * b2 - c2 * b1) / det;
    p.b = (a1 * c2 - a2 * c1) / det;
    if !(p.a > 0.0 && p.b > 0.0) {
        return Err(SimError::Calibration(format!(
            "non-positive coefficients A={}, B={}",
            p.a, p.b
        )));
    }
    Ok(p)
}

/// One flight; `row` keys the noise stream.
pub fn simulate_flight(
    speed: f64,
    altitude: f64,
    p: &FuelModelParams,
    seed: u64,
    row: usize,
) -> Result<FlightOutput, SimError> {
    let mut fuel = total_fuel(speed, altitude, p)?;
    if p.noise_sigma > 0.0 {
        let z = Stream::new(seed).substream(row as u64).normal();
        fuel *= (p.noise_sigma * z).exp();
    }
    Ok(FlightOutput {
        time_of_flight: time_of_flight(speed, p),
        fuel_consumed: fuel,
    })
}

/// Positions of `speed` and `altitude` among the factors; any other factor
/// or a missing one violates the contract.
fn locate(factors: &[FactorSpec]) -> Result<(usize, usize), SimError> {
    let find = |n: &str| factors.iter().position(|f| f.name == n);
    match (find("speed"), find("altitude")) {
        (Some(s), Some(a)) if factors.len() == 2 => Ok((s, a)),
        _ => Err(SimError::Contract(format!(
            "navsim needs exactly the factors `speed` and `altitude`, got [{}]",
            factors
                .iter()
                .map(|f| f.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

/// Simulates `rows` (design indices `indices`) into a result table.
pub fn simulate_rows(
    factors: &[FactorSpec],
    rows: &[Vec<Value>],
    indices: &[usize],
    p: &FuelModelParams,
    seed: u64,
) -> Result<ResultTable, SimError> {
    let (si, ai) = locate(factors)?;
    let outs: Vec<FlightOutput> = rows
        .par_iter()
        .zip(indices.par_iter())
        .map(|(row, &idx)| {
            let get = |j: usize| {
                row[j].as_f64().ok_or_else(|| {
                    SimError::Contract(format!("row {idx}: `{}` is not numeric", factors[j].name))
                })
            };
            simulate_flight(get(si)?, get(ai)?, p, seed, idx)
        })
        .collect::<Result<_, _>>()?;
    ResultTable::new(
        indices.to_vec(),
        vec![RowStatus::Ok; outs.len()],
        vec![
            DataColumn::numeric(OUTPUTS[0], outs.iter().map(|o| o.time_of_flight)),
            DataColumn::numeric(OUTPUTS[1], outs.iter().map(|o| o.fuel_consumed)),
        ],
    )
    .map_err(|e| SimError::Contract(e.to_string()))
}

/// The simulator over a whole design.
pub fn simulate_navigation(
    design: &crate::doe::Design,
    p: &FuelModelParams,
    seed: u64,
) -> Result<ResultTable, SimError> {
    let idx: Vec<usize> = (0..design.len()).collect();
    simulate_rows(&design.factors, &design.rows, &idx, p, seed)
}

/// The simulator as an execution runner (`navsim`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavsimRunner {
    pub params: FuelModelParams,
    pub seed: u64,
}

impl Runner for NavsimRunner {
    fn run(&self, chunk: &DesignChunk<'_>) -> Result<ResultTable, String> {
        simulate_rows(chunk.factors, chunk.rows, &chunk.indices, &self.params, self.seed)
            .map_err(|e| e.to_string())
    }
}

/// Noise-free total fuel on a regular grid; `fuel[i][j]` is altitude `i`,
/// speed `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuelGrid {
    pub speeds: Vec<f64>,
    pub altitudes: Vec<f64>,
    pub fuel: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub speed: f64,
    pub altitude: f64,
    pub fuel: f64,
}

fn linspace((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl FuelGrid {
    /// `n_speed × n_altitude` evenly spaced points spanning the domain
    /// (201 × 251 gives 1 kt × 100 ft spacing).
    pub fn new(p: &FuelModelParams, n_speed: usize, n_altitude: usize) -> Result<FuelGrid, SimError> {
        if n_speed < 2 || n_altitude < 2 {
            return Err(SimError::Domain("grid needs at least 2 points per axis".into()));
        }
        let speeds = linspace(SPEED_RANGE, n_speed);
        let altitudes = linspace(ALTITUDE_RANGE, n_altitude);
        let fuel = altitudes
            .iter()
            .map(|&h| speeds.iter().map(|&v| total_fuel(v, h, p)).collect())
            .collect::<Result<_, _>>()?;
        Ok(FuelGrid {
            speeds,
            altitudes,
            fuel,
        })
    }

    fn extreme(&self, better: impl Fn(f64, f64) -> bool) -> GridPoint {
        let mut best = GridPoint {
            speed: self.speeds[0],
            altitude: self.altitudes[0],
            fuel: self.fuel[0][0],
        };
        for (i, row) in self.fuel.iter().enumerate() {
            for (j, &f) in row.iter().enumerate() {
                if better(f, best.fuel) {
                    best = GridPoint {
                        speed: self.speeds[j],
                        altitude: self.altitudes[i],
                        fuel: f,
                    };
                }
            }
        }
        best
    }

    pub fn argmin(&self) -> GridPoint {
        self.extreme(|a, b| a < b)
    }

    pub fn argmax(&self) -> GridPoint {
        self.extreme(|a, b| a > b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doe::{lhs_design, Design};
    use crate::exec::{run_batches, NeverStop};

    fn params() -> FuelModelParams {
        calibrate(0.0).unwrap()
    }

    #[test]
    fn sigma_at_sea_level() {
        assert_eq!(sigma(0.0), 1.0);
        assert!(sigma(35_000.0) < sigma(10_000.0));
    }

    #[test]
    fn calibration_hits_anchors_with_positive_constants() {
        let p = params();
        assert!(p.a > 0.0 && p.b > 0.0);
        // Reference solution of the 2×2 anchor system.
        assert!((p.a - 13.739_714_971_598_614).abs() < 1e-9, "{}", p.a);
        assert!((p.b - 543.882_638_053_063_8).abs() < 1e-7, "{}", p.b);
        for (v, h, target) in ANCHORS {
            assert!((total_fuel(v, h, &p).unwrap() - target).abs() < 1e-6);
        }
    }

    #[test]
    fn flow_shape() {
        let p = params();
        let mut prev = 0.0;
        for v in 450..=550 {
            let f = fuel_flow(v as f64, 10_000.0, &p).unwrap();
            assert!(f > prev);
            prev = f;
        }
        for v in 500..=550 {
            let v = v as f64;
            assert!(fuel_flow(v, 35_000.0, &p).unwrap() < fuel_flow(v, 10_000.0, &p).unwrap());
        }
        assert!(fuel_flow(349.0, 20_000.0, &p).is_err());
        assert!(fuel_flow(400.0, 36_000.0, &p).is_err());
    }

    #[test]
    fn time_arithmetic() {
        let p = params();
        assert_eq!(time_of_flight(500.0, &p), 4200.0);
        assert!(time_of_flight(400.0, &p) > time_of_flight(401.0, &p));
    }

    fn design(n: usize) -> Design {
        lhs_design(
            &[
                FactorSpec::continuous("speed", 350.0, 550.0),
                FactorSpec::continuous("altitude", 10_000.0, 35_000.0),
            ],
            n,
            5,
        )
        .unwrap()
    }

    #[test]
    fn chunking_invariance_with_noise() {
        let mut p = params();
        p.noise_sigma = 0.05;
        let d = design(250);
        let whole = simulate_navigation(&d, &p, 3).unwrap();
        for chunk in [1, 7, 100] {
            let (t, _) = run_batches(&d, NavsimRunner { params: p, seed: 3 }, NeverStop, chunk).unwrap();
            assert_eq!(t, whole);
        }
        assert_ne!(simulate_navigation(&d, &p, 4).unwrap(), whole);
    }

    #[test]
    fn contract_errors() {
        let p = params();
        let bad = Design {
            factors: vec![FactorSpec::continuous("speed", 350.0, 550.0)],
            rows: vec![vec![Value::Real(400.0)]],
            seed: None,
        };
        assert!(matches!(
            simulate_navigation(&bad, &p, 0),
            Err(SimError::Contract(_))
        ));
    }

    #[test]
    fn weak_linear_relation_between_time_and_fuel() {
        let p = params();
        let t = simulate_navigation(&design(4000), &p, 0).unwrap();
        let x = t.ok_numeric("time_of_flight").unwrap();
        let y = t.ok_numeric("fuel_consumed").unwrap();
        let r = crate::analysis::descriptive::pearson(&x, &y).unwrap();
        assert!(r * r < 0.5, "r² = {}", r * r);
    }
}
