//! Incomplete gamma/beta against values frozen from a 40-digit evaluation.

use datafarm::special::{beta_inc, gamma_p, gamma_q};

fn probes() -> Vec<(String, f64, f64, f64, f64)> {
    include_str!("fixtures/special_probes.csv")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let num = |s: &str| {
                if s.is_empty() {
                    f64::NAN
                } else {
                    s.parse().unwrap()
                }
            };
            (f[0].to_string(), num(f[1]), num(f[2]), num(f[3]), num(f[4]))
        })
        .collect()
}

#[test]
fn hundred_probe_grid_within_1e10() {
    let probes = probes();
    assert_eq!(probes.len(), 100);
    let mut worst = 0.0f64;
    for (kind, a, b, x, expected) in probes {
        let got = match kind.as_str() {
            "gamma_p" => gamma_p(a, x),
            "beta_inc" => beta_inc(a, b, x),
            other => panic!("unknown probe kind {other}"),
        };
        let err = (got - expected).abs();
        worst = worst.max(err);
        assert!(err < 1e-10, "{kind}({a}, {b}, {x}) = {got}, expected {expected}");
    }
    eprintln!("worst absolute error {worst:e}");
}

#[test]
fn upper_gamma_complements_lower() {
    for (kind, a, _, x, expected) in probes() {
        if kind == "gamma_p" {
            assert!((gamma_q(a, x) - (1.0 - expected)).abs() < 1e-10);
        }
    }
}
