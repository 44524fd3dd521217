use super::{validate_factors, Design, DoeError, FactorKind, FactorSpec, Value};
use crate::rng::Stream;

/// Latin hypercube design with `n` runs.
///
/// Continuous factors: `[lo, hi)` is cut into `n` equal strata, each
/// stratum receives exactly one sample placed uniformly inside it, and the
/// stratum order is an independent random permutation per factor. Integer
/// factors are sampled the same way over `[lo, hi + 1)` and floored.
/// Categorical and boolean factors cycle through their levels until `n`
/// cells are filled, then shuffle, so level counts differ by at most one.
///
/// Factor `j` draws only from `Stream::new(seed).substream(j)`.
pub fn lhs_design(factors: &[FactorSpec], n: usize, seed: u64) -> Result<Design, DoeError> {
    if n == 0 {
        return Err(DoeError::InvalidArgument("sample size n must be >= 1".into()));
    }
    validate_factors(factors)?;
    let root = Stream::new(seed);
    let columns: Vec<Vec<Value>> = factors
        .iter()
        .enumerate()
        .map(|(j, f)| sample_factor(f, n, &mut root.substream(j as u64)))
        .collect();
    let rows = (0..n)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(Design {
        factors: factors.to_vec(),
        rows,
        seed: Some(seed),
    })
}

/// One stratified draw per stratum of `[lo, hi)`, in permuted order.
fn stratified(lo: f64, hi: f64, n: usize, rng: &mut Stream) -> Vec<f64> {
    let perm = rng.permutation(n);
    let width = (hi - lo) / n as f64;
    perm.into_iter()
        .map(|stratum| {
            let x = lo + width * (stratum as f64 + rng.uniform());
            // Rounding can land exactly on the stratum's upper edge.
            let upper = lo + width * (stratum + 1) as f64;
            if x >= upper {
                upper.next_down().max(lo)
            } else {
                x
            }
        })
        .collect()
}

fn balanced<T: Clone>(levels: &[T], n: usize, rng: &mut Stream) -> Vec<T> {
    let mut cells: Vec<T> = (0..n).map(|i| levels[i % levels.len()].clone()).collect();
    rng.shuffle(&mut cells);
    cells
}

fn sample_factor(f: &FactorSpec, n: usize, rng: &mut Stream) -> Vec<Value> {
    match &f.kind {
        FactorKind::Continuous { lo, hi } => stratified(*lo, *hi, n, rng)
            .into_iter()
            .map(Value::Real)
            .collect(),
        FactorKind::Integer { lo, hi } => {
            let (lo_f, hi_f) = (*lo as f64, *hi as f64 + 1.0);
            stratified(lo_f, hi_f, n, rng)
                .into_iter()
                .map(|x| Value::Int((x.floor() as i64).clamp(*lo, *hi)))
                .collect()
        }
        FactorKind::Categorical { levels } => {
            balanced(levels, n, rng).into_iter().map(Value::Level).collect()
        }
        FactorKind::Boolean => balanced(&[false, true], n, rng)
            .into_iter()
            .map(Value::Bool)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doe::validate_design;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn strata(values: &[f64], lo: f64, hi: f64) -> Vec<usize> {
        let n = values.len();
        let mut s: Vec<usize> = values
            .iter()
            .map(|x| ((x - lo) / (hi - lo) * n as f64).floor() as usize)
            .collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn four_quartiles_one_each() {
        let d = lhs_design(&[FactorSpec::continuous("x", 0.0, 1.0)], 4, 42).unwrap();
        let xs = d.numeric_column("x").unwrap();
        for q in 0..4 {
            let (a, b) = (q as f64 * 0.25, (q + 1) as f64 * 0.25);
            assert_eq!(xs.iter().filter(|&&x| x >= a && x < b).count(), 1);
        }
    }

    #[test]
    fn categorical_levels_balanced() {
        let f = FactorSpec::categorical("c", ["A", "B", "C"]);
        for seed in 0..10 {
            let d = lhs_design(std::slice::from_ref(&f), 6, seed).unwrap();
            let mut counts = BTreeMap::new();
            for r in &d.rows {
                *counts.entry(r[0].to_string()).or_insert(0) += 1;
            }
            assert_eq!(counts.values().copied().collect::<Vec<_>>(), vec![2, 2, 2]);
        }
    }

    #[test]
    fn large_mixed_design_is_in_domain() {
        let factors = vec![
            FactorSpec::continuous("distance", 10.0, 120.0),
            FactorSpec::continuous("aspect", -180.0, 180.0),
            FactorSpec::continuous("dalt", -10_000.0, 10_000.0),
            FactorSpec::integer("blue", 1, 4),
            FactorSpec::integer("red", 1, 4),
            FactorSpec::categorical("doctrine", ["aggressive", "defensive", "balanced"]),
            FactorSpec::boolean("awacs"),
        ];
        let d = lhs_design(&factors, 3729, 1).unwrap();
        assert_eq!(d.rows.len(), 3729);
        assert!(d.rows.iter().all(|r| r.len() == 7));
        assert!(validate_design(&d).is_ok());
    }

    #[test]
    fn zero_runs_rejected() {
        let err = lhs_design(&[FactorSpec::boolean("b")], 0, 1).unwrap_err();
        assert!(matches!(err, DoeError::InvalidArgument(_)));
    }

    #[test]
    fn invalid_factor_named_in_error() {
        let err = lhs_design(&[FactorSpec::continuous("alt", 5.0, 1.0)], 3, 1).unwrap_err();
        assert!(err.to_string().contains("alt"));
    }

    #[test]
    fn integer_factor_reaches_every_value() {
        let d = lhs_design(&[FactorSpec::integer("k", -2, 2)], 5, 9).unwrap();
        let mut seen: Vec<i64> = d
            .rows
            .iter()
            .map(|r| match r[0] {
                Value::Int(i) => i,
                _ => unreachable!(),
            })
            .collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![-2, -1, 0, 1, 2]);
    }

    #[test]
    fn adding_a_factor_keeps_earlier_columns() {
        let a = vec![FactorSpec::continuous("x", 0.0, 1.0)];
        let mut b = a.clone();
        b.push(FactorSpec::categorical("c", ["p", "q"]));
        let da = lhs_design(&a, 50, 5).unwrap();
        let db = lhs_design(&b, 50, 5).unwrap();
        for (ra, rb) in da.rows.iter().zip(&db.rows) {
            assert_eq!(ra[0], rb[0]);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn continuous_marginals_are_stratified(
            n in 1usize..400,
            seed in any::<u64>(),
            lo in -1e3f64..1e3,
            span in 1e-3f64..1e4,
        ) {
            let hi = lo + span;
            let d = lhs_design(&[FactorSpec::continuous("x", lo, hi)], n, seed).unwrap();
            let xs = d.numeric_column("x").unwrap();
            prop_assert!(xs.iter().all(|&x| x >= lo && x < hi));
            prop_assert_eq!(strata(&xs, lo, hi), (0..n).collect::<Vec<_>>());
        }

        #[test]
        fn level_counts_differ_by_at_most_one(n in 1usize..300, levels in 1usize..7, seed in any::<u64>()) {
            let names: Vec<String> = (0..levels).map(|i| format!("L{i}")).collect();
            let d = lhs_design(&[FactorSpec::categorical("c", names.clone()), FactorSpec::boolean("b")], n, seed).unwrap();
            for (j, all) in [names, vec!["false".to_string(), "true".to_string()]].into_iter().enumerate() {
                let mut counts: BTreeMap<String, usize> = all.into_iter().map(|l| (l, 0)).collect();
                for r in &d.rows {
                    *counts.get_mut(&r[j].to_string()).unwrap() += 1;
                }
                let max = counts.values().max().unwrap();
                let min = counts.values().min().unwrap();
                prop_assert!(max - min <= 1);
            }
        }

        #[test]
        fn same_seed_same_design(seed in any::<u64>()) {
            let f = vec![FactorSpec::continuous("x", 0.0, 1.0), FactorSpec::integer("i", 0, 9)];
            prop_assert_eq!(lhs_design(&f, 30, seed).unwrap(), lhs_design(&f, 30, seed).unwrap());
        }
    }
}
