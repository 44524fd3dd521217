//! Distribution fitting ranked by the Kolmogorov–Smirnov statistic.
//!
//! Parameters are closed-form estimates: normal and exponential by maximum
//! likelihood, uniform by the sample range, chi-squared degrees of freedom
//! by the method of moments (df = mean), beta by the method of moments.
//! Candidates are ranked by D alone; the attached p-values use the
//! asymptotic Kolmogorov distribution and are only indicative, because the
//! parameters were estimated from the same sample.
//!
//! Beta needs data strictly inside (0, 1). With `rescale_beta` the sample
//! is first mapped by `x' = (x − min + h) / (max − min + 2h)` with
//! `h = (max − min) / n`, which keeps every value strictly inside the unit
//! interval; the map is recorded as `shift`/`scale` parameters. D is
//! invariant under this monotone map, so rankings remain comparable.

use super::descriptive::{mean, sorted, variance};
use super::{AnalysisError, SCHEMA_VERSION};
use crate::dist::{chi2_cdf, ks_p_value, normal_cdf};
use crate::special::beta_inc;
use crate::table::DataColumn;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Minimum sample size accepted by [`fit_distributions`].
pub const MIN_FIT_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Normal,
    Uniform,
    Exponential,
    ChiSquared,
    Beta,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Normal,
        Family::Uniform,
        Family::Exponential,
        Family::ChiSquared,
        Family::Beta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Normal => "normal",
            Family::Uniform => "uniform",
            Family::Exponential => "exponential",
            Family::ChiSquared => "chi_squared",
            Family::Beta => "beta",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub candidates: Vec<Family>,
    /// Map the sample into (0, 1) before fitting the beta family.
    pub rescale_beta: bool,
    /// Skip candidates whose domain excludes the data instead of failing.
    pub skip_inapplicable: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            candidates: Family::ALL.to_vec(),
            rescale_beta: false,
            skip_inapplicable: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyFit {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
    pub ks_statistic: f64,
    pub p_value_indicative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedFamily {
    pub family: Family,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema_version: u32,
    pub column: String,
    pub n: usize,
    pub fits: Vec<FamilyFit>,
    /// Families ordered by ascending D.
    pub ranking: Vec<Family>,
    pub skipped: Vec<SkippedFamily>,
}

impl FitReport {
    pub fn best(&self) -> Option<&FamilyFit> {
        let f = *self.ranking.first()?;
        self.fits.iter().find(|x| x.family == f)
    }
}

/// K-S statistic of sorted data against a CDF:
/// `max_i max(i/n − F(x_i), F(x_i) − (i−1)/n)`.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0)
}

pub fn fit_distributions(sample: &DataColumn, options: &FitOptions) -> Result<FitReport, AnalysisError> {
    let x = sample.present_numeric()?;
    if x.len() < MIN_FIT_SAMPLES {
        return Err(AnalysisError::InvalidArgument(format!(
            "distribution fitting needs at least {MIN_FIT_SAMPLES} values, got {}",
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(AnalysisError::InvalidArgument(
            "sample has non-finite values".into(),
        ));
    }
    if options.candidates.is_empty() {
        return Err(AnalysisError::InvalidArgument("no candidate families".into()));
    }
    let var = variance(&x);
    if var <= 0.0 {
        return Err(AnalysisError::DegenerateSample(format!(
            "column `{}` has zero variance",
            sample.name
        )));
    }
    let xs = sorted(&x);
    let n = xs.len();
    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    let mut seen = Vec::new();
    for &family in &options.candidates {
        if seen.contains(&family) {
            continue;
        }
        seen.push(family);
        match fit_one(family, &xs, var, options.rescale_beta) {
            Ok((params, d)) => fits.push(FamilyFit {
                family,
                params,
                ks_statistic: d,
                p_value_indicative: ks_p_value(d, n),
            }),
            Err(e) if options.skip_inapplicable => skipped.push(SkippedFamily {
                family,
                reason: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    let mut order: Vec<&FamilyFit> = fits.iter().collect();
    order.sort_by(|a, b| a.ks_statistic.total_cmp(&b.ks_statistic));
    let ranking = order.iter().map(|f| f.family).collect();
    Ok(FitReport {
        schema_version: SCHEMA_VERSION,
        column: sample.name.clone(),
        n,
        fits,
        ranking,
        skipped,
    })
}

type Fitted = (BTreeMap<String, f64>, f64);

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn fit_one(family: Family, xs: &[f64], var: f64, rescale: bool) -> Result<Fitted, AnalysisError> {
    let n = xs.len() as f64;
    let m = mean(xs);
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    match family {
        Family::Normal => {
            let sd = (var * (n - 1.0) / n).sqrt();
            let d = ks_statistic(xs, |x| normal_cdf((x - m) / sd));
            Ok((params(&[("mean", m), ("sd", sd)]), d))
        }
        Family::Uniform => {
            let d = ks_statistic(xs, |x| ((x - lo) / (hi - lo)).clamp(0.0, 1.0));
            Ok((params(&[("lo", lo), ("hi", hi)]), d))
        }
        Family::Exponential => {
            if m <= 0.0 {
                return Err(AnalysisError::Domain(format!(
                    "exponential needs a positive mean, got {m}"
                )));
            }
            let rate = 1.0 / m;
            let d = ks_statistic(xs, |x| if x <= 0.0 { 0.0 } else { -(-rate * x).exp_m1() });
            Ok((params(&[("rate", rate)]), d))
        }
        Family::ChiSquared => {
            if m <= 0.0 {
                return Err(AnalysisError::Domain(format!(
                    "chi-squared needs a positive mean, got {m}"
                )));
            }
            let d = ks_statistic(xs, |x| if x <= 0.0 { 0.0 } else { chi2_cdf(x, m) });
            Ok((params(&[("df", m)]), d))
        }
        Family::Beta => {
            let (shift, scale) = if rescale {
                let h = (hi - lo) / n;
                (lo - h, hi - lo + 2.0 * h)
            } else {
                if lo <= 0.0 || hi >= 1.0 {
                    return Err(AnalysisError::Domain(format!(
                        "beta needs values strictly inside (0, 1); sample spans [{lo}, {hi}] \
                         (enable rescaling to map it)"
                    )));
                }
                (0.0, 1.0)
            };
            let u: Vec<f64> = xs.iter().map(|x| (x - shift) / scale).collect();
            let mu = mean(&u);
            let vu = variance(&u);
            let common = mu * (1.0 - mu) / vu - 1.0;
            if !(common > 0.0) {
                return Err(AnalysisError::Domain(
                    "beta moment equations have no positive solution".into(),
                ));
            }
            let (a, b) = (mu * common, (1.0 - mu) * common);
            let d = ks_statistic(&u, |x| beta_inc(a, b, x.clamp(0.0, 1.0)));
            let mut p = params(&[("alpha", a), ("beta", b)]);
            if rescale {
                p.insert("shift".into(), shift);
                p.insert("scale".into(), scale);
            }
            Ok((p, d))
        }
    }
}
