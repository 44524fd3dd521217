//! Normality tests: Shapiro–Wilk (Royston's approximation, 3 ≤ n ≤ 5000)
//! and D'Agostino's K² omnibus test for larger samples.

use super::descriptive::{mean, sorted};
use crate::dist::{chi2_sf, normal_quantile, normal_sf};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalityResult {
    pub statistic: f64,
    pub p_value: f64,
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Shapiro–Wilk W and its p-value (Royston 1992/1995 approximations).
/// Returns `None` for n < 3, n > 5000 or zero range.
pub fn shapiro_wilk(x: &[f64]) -> Option<NormalityResult> {
    let n = x.len();
    if !(3..=5000).contains(&n) {
        return None;
    }
    let xs = sorted(x);
    if xs[n - 1] - xs[0] <= 0.0 {
        return None;
    }
    let nf = n as f64;

    let a: Vec<f64> = if n == 3 {
        let s = 0.5f64.sqrt();
        vec![-s, 0.0, s]
    } else {
        let m: Vec<f64> = (1..=n)
            .map(|i| normal_quantile((i as f64 - 0.375) / (nf + 0.25)))
            .collect();
        let mm: f64 = m.iter().map(|v| v * v).sum();
        let u = 1.0 / nf.sqrt();
        let an = m[n - 1] / mm.sqrt() + poly(&[0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056], u);
        let mut a = vec![0.0; n];
        if n > 5 {
            let an1 =
                m[n - 2] / mm.sqrt() + poly(&[0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633], u);
            let phi = (mm - 2.0 * m[n - 1].powi(2) - 2.0 * m[n - 2].powi(2))
                / (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
            for i in 2..n - 2 {
                a[i] = m[i] / phi.sqrt();
            }
            a[n - 2] = an1;
            a[1] = -an1;
        } else {
            let phi = (mm - 2.0 * m[n - 1].powi(2)) / (1.0 - 2.0 * an * an);
            for i in 1..n - 1 {
                a[i] = m[i] / phi.sqrt();
            }
        }
        a[n - 1] = an;
        a[0] = -an;
        a
    };

    let mu = mean(&xs);
    let ss: f64 = xs.iter().map(|v| (v - mu) * (v - mu)).sum();
    let num: f64 = a.iter().zip(&xs).map(|(ai, xi)| ai * xi).sum();
    let w = (num * num / ss).min(1.0);

    let p = if n == 3 {
        let p = 6.0 / PI * (w.sqrt().asin() - 0.75f64.sqrt().asin());
        p.clamp(0.0, 1.0)
    } else if n <= 11 {
        let gamma = poly(&[-2.273, 0.459], nf);
        let mu = poly(&[0.5440, -0.39978, 0.025054, -6.714e-4], nf);
        let sigma = poly(&[1.3822, -0.77857, 0.062767, -0.0020322], nf).exp();
        let y = -(gamma - (1.0 - w).ln()).ln();
        normal_sf((y - mu) / sigma)
    } else {
        let ln_n = nf.ln();
        let mu = poly(&[-1.5861, -0.31082, -0.083751, 0.0038915], ln_n);
        let sigma = poly(&[-0.4803, -0.082676, 0.0030302], ln_n).exp();
        normal_sf(((1.0 - w).ln() - mu) / sigma)
    };
    Some(NormalityResult {
        statistic: w,
        p_value: if p.is_nan() { 0.0 } else { p.clamp(0.0, 1.0) },
    })
}

/// D'Agostino–Pearson K² test combining the skewness and kurtosis
/// z-scores. Requires n ≥ 20 and positive variance.
pub fn dagostino_k2(x: &[f64]) -> Option<NormalityResult> {
    let n = x.len();
    if n < 20 {
        return None;
    }
    let nf = n as f64;
    let mu = mean(x);
    let m2 = x.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / nf;
    if m2 <= 0.0 {
        return None;
    }
    let m3 = x.iter().map(|v| (v - mu).powi(3)).sum::<f64>() / nf;
    let m4 = x.iter().map(|v| (v - mu).powi(4)).sum::<f64>() / nf;

    // skewness
    let b1 = m3 / m2.powf(1.5);
    let y = b1 * ((nf + 1.0) * (nf + 3.0) / (6.0 * (nf - 2.0))).sqrt();
    let beta2 = 3.0 * (nf * nf + 27.0 * nf - 70.0) * (nf + 1.0) * (nf + 3.0)
        / ((nf - 2.0) * (nf + 5.0) * (nf + 7.0) * (nf + 9.0));
    let w2 = -1.0 + (2.0 * (beta2 - 1.0)).sqrt();
    let delta = 1.0 / (0.5 * w2.ln()).sqrt();
    let alpha = (2.0 / (w2 - 1.0)).sqrt();
    let ya = y / alpha;
    let z1 = delta * (ya + (ya * ya + 1.0).sqrt()).ln();

    // kurtosis
    let b2 = m4 / (m2 * m2);
    let e = 3.0 * (nf - 1.0) / (nf + 1.0);
    let var = 24.0 * nf * (nf - 2.0) * (nf - 3.0) / ((nf + 1.0).powi(2) * (nf + 3.0) * (nf + 5.0));
    let xk = (b2 - e) / var.sqrt();
    let sqrt_beta1 = 6.0 * (nf * nf - 5.0 * nf + 2.0) / ((nf + 7.0) * (nf + 9.0))
        * (6.0 * (nf + 3.0) * (nf + 5.0) / (nf * (nf - 2.0) * (nf - 3.0))).sqrt();
    let a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + (1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)).sqrt());
    let term1 = 1.0 - 2.0 / (9.0 * a);
    let denom = 1.0 + xk * (2.0 / (a - 4.0)).sqrt();
    let term2 = if denom == 0.0 {
        f64::INFINITY
    } else {
        denom.signum() * ((1.0 - 2.0 / a) / denom.abs()).cbrt()
    };
    let z2 = (term1 - term2) / (2.0 / (9.0 * a)).sqrt();

    let k2 = z1 * z1 + z2 * z2;
    Some(NormalityResult {
        statistic: k2,
        p_value: chi2_sf(k2, 2.0),
    })
}

/// Normality check used by the test-selection flow: Shapiro–Wilk up to
/// n = 5000, K² beyond. Returns the method name with the result.
pub fn normality_check(x: &[f64]) -> Option<(&'static str, NormalityResult)> {
    if x.len() <= 5000 {
        shapiro_wilk(x).map(|r| ("shapiro_wilk", r))
    } else {
        dagostino_k2(x).map(|r| ("dagostino_k2", r))
    }
}
