//! Acceptance suite: ten end-to-end criteria, each checked at its stated
//! tolerance and time budget. Prints one `PASS`/`FAIL` line per criterion
//! and exits non-zero if any fails.
//!
//! Reference values come from independent generators (`rand_distr`),
//! brute-force oracles, or closed forms — never from the code under test.

use datafarm::analysis::{
    fit_distributions, pareto_front, run_hypothesis_test, Decision, Direction, Family, FitOptions,
};
use datafarm::doe::{lhs_design, FactorKind, FactorSpec, Value};
use datafarm::exec::{mean_convergence_criterion, run_batches, NeverStop, RowRunner, StopReason};
use datafarm::geo::{ecef_to_geodetic, geodetic_to_ecef, GeodeticCoord};
use datafarm::models::forest::{ForestModel, ForestParams};
use datafarm::models::linear::RidgeModel;
use datafarm::models::metrics::regression_metrics;
use datafarm::models::mlp::MlpNet;
use datafarm::models::tree::{TreeModel, TreeParams};
use datafarm::models::{random_search_cv, smote, ModelSpec, Prediction, Targets};
use datafarm::rng::Stream;
use datafarm::simkit::{calibrate, NavsimRunner};
use datafarm::special::{beta_inc, gamma_p};
use datafarm::table::{DataColumn, ResultTable};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Beta, ChiSquared, Distribution, Exp, Normal, Uniform};
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// 1 ------------------------------------------------------------------------

fn lhs_stratification() -> Outcome {
    let factors = [
        FactorSpec::continuous("x", 0.0, 1.0),
        FactorSpec::continuous("y", -5.0, 10.0),
        FactorSpec::integer("k", 1, 7),
        FactorSpec::categorical("c", ["red", "green", "blue"]),
    ];
    for n in [10usize, 100, 1000] {
        let d = lhs_design(&factors, n, 42 + n as u64).map_err(err)?;
        ensure(d.len() == n, || format!("n={n}: {} rows", d.len()))?;
        for (j, f) in factors.iter().enumerate() {
            match &f.kind {
                FactorKind::Continuous { lo, hi } => {
                    let mut hits = vec![0usize; n];
                    for row in &d.rows {
                        let x = row[j].as_f64().ok_or("non-numeric continuous value")?;
                        ensure((*lo..=*hi).contains(&x), || {
                            format!("{} = {x} out of range", f.name)
                        })?;
                        let s = (((x - lo) / (hi - lo)) * n as f64).floor() as usize;
                        hits[s.min(n - 1)] += 1;
                    }
                    ensure(hits.iter().all(|&h| h == 1), || {
                        format!("n={n}: factor {} strata not one-per-stratum", f.name)
                    })?;
                }
                FactorKind::Categorical { levels } => {
                    let mut counts: BTreeMap<&str, usize> = levels.iter().map(|l| (l.as_str(), 0)).collect();
                    for row in &d.rows {
                        let Value::Level(l) = &row[j] else {
                            return Err(format!("non-level value {:?}", row[j]));
                        };
                        *counts.get_mut(l.as_str()).ok_or("unknown level")? += 1;
                    }
                    let (mn, mx) = (counts.values().min().unwrap(), counts.values().max().unwrap());
                    ensure(mx - mn <= 1, || format!("n={n}: level counts {counts:?}"))?;
                }
                FactorKind::Integer { lo, hi } => {
                    for row in &d.rows {
                        let v = row[j].as_f64().ok_or("non-numeric integer value")?;
                        ensure(v.fract() == 0.0 && v >= *lo as f64 && v <= *hi as f64, || {
                            format!("integer value {v} outside [{lo}, {hi}]")
                        })?;
                    }
                }
                FactorKind::Boolean => {}
            }
        }
    }
    Ok("n ∈ {10, 100, 1000}: one sample per stratum, level counts within 1".into())
}

// 2 ------------------------------------------------------------------------

fn execution_prefix() -> Outcome {
    let factors = [
        FactorSpec::continuous("speed", 350.0, 550.0),
        FactorSpec::continuous("altitude", 10_000.0, 35_000.0),
    ];
    let design = lhs_design(&factors, 1000, 5).map_err(err)?;
    let runner = || NavsimRunner {
        params: calibrate(0.0).unwrap(),
        seed: 5,
    };
    let scripted = |cur: &ResultTable, _: &ResultTable| Ok(cur.len() >= 200);
    let (short, rs) = run_batches(&design, runner(), scripted, 100).map_err(err)?;
    let (full, rf) = run_batches(&design, runner(), NeverStop, 100).map_err(err)?;
    ensure(rs.chunks_executed == 2 && rs.rows_executed == 200, || {
        format!("scripted run: {rs:?}")
    })?;
    ensure(rs.stop_reason == StopReason::CriterionMet { chunk: 2 }, || {
        format!("stop reason {:?}", rs.stop_reason)
    })?;
    ensure(rf.chunks_executed == 10 && rf.rows_executed == 1000, || {
        format!("full run: {rf:?}")
    })?;
    ensure(rf.stop_reason == StopReason::DesignExhausted, || {
        format!("{:?}", rf.stop_reason)
    })?;
    let prefix: Vec<usize> = (0..200).collect();
    ensure(short == full.select(&prefix), || {
        "stopped run differs from first 200 rows".into()
    })?;
    Ok("2 chunks / 200 rows, identical to the exhaustive prefix".into())
}

// 3 ------------------------------------------------------------------------

fn convergence_early_stop() -> Outcome {
    let design = lhs_design(&[FactorSpec::continuous("u", 0.0, 1.0)], 10_000, 1).map_err(err)?;
    let mut early = 0;
    for seed in 0..100u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let normal = Normal::new(100.0, 1.0).unwrap();
        let stream: Arc<Vec<f64>> = Arc::new((0..10_000).map(|_| normal.sample(&mut rng)).collect());
        let runner = RowRunner::new(vec!["m".into()], move |i, _, _| Some(vec![stream[i]]));
        let crit = mean_convergence_criterion("m", 0.005, 1e-9).map_err(err)?;
        let (_, report) = run_batches(&design, runner, crit, 100).map_err(err)?;
        if matches!(report.stop_reason, StopReason::CriterionMet { .. }) && report.rows_executed < 10_000 {
            early += 1;
        }
    }
    ensure(early >= 90, || format!("only {early}/100 runs stopped early"))?;
    Ok(format!("{early}/100 runs stopped before exhausting 10,000 rows"))
}

// 4 ------------------------------------------------------------------------

fn brute_force_front(points: &[Vec<f64>], dirs: &[Direction]) -> Vec<usize> {
    let better = |a: f64, b: f64, d: Direction| match d {
        Direction::Minimize => a < b,
        Direction::Maximize => a > b,
    };
    let dominates = |p: &[f64], q: &[f64]| {
        let no_worse = (0..dirs.len()).all(|k| !better(q[k], p[k], dirs[k]));
        let strictly = (0..dirs.len()).any(|k| better(p[k], q[k], dirs[k]));
        no_worse && strictly
    };
    (0..points.len())
        .filter(|&i| !(0..points.len()).any(|j| j != i && dominates(&points[j], &points[i])))
        .collect()
}

fn pareto_oracle() -> Outcome {
    let mut sizes = Vec::new();
    for m in [2usize, 3] {
        for seed in 0..20u64 {
            let mut rng = StdRng::seed_from_u64(1000 * m as u64 + seed);
            let points: Vec<Vec<f64>> = (0..1000)
                .map(|_| (0..m).map(|_| rng.random::<f64>()).collect())
                .collect();
            let dirs: Vec<Direction> = (0..m)
                .map(|k| {
                    if (seed as usize + k).is_multiple_of(2) {
                        Direction::Minimize
                    } else {
                        Direction::Maximize
                    }
                })
                .collect();
            let got = pareto_front(&points, &dirs).map_err(err)?.front;
            let want = brute_force_front(&points, &dirs);
            ensure(got == want, || {
                format!("m={m} seed={seed}: front differs from brute force")
            })?;
            sizes.push(want.len());
        }
    }
    Ok(format!(
        "40 fronts match O(n²) dominance (sizes {}–{})",
        sizes.iter().min().unwrap(),
        sizes.iter().max().unwrap()
    ))
}

// 5 ------------------------------------------------------------------------

fn normal_sample(rng: &mut StdRng, mu: f64, n: usize) -> Vec<f64> {
    let d = Normal::new(mu, 1.0).unwrap();
    (0..n).map(|_| d.sample(rng)).collect()
}

fn hypothesis_calibration() -> Outcome {
    let mut power = 0;
    for seed in 0..100u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = DataColumn::numeric("a", normal_sample(&mut rng, 0.0, 100));
        let b = DataColumn::numeric("b", normal_sample(&mut rng, 1.0, 100));
        if run_hypothesis_test(&[a, b], false, 0.05).map_err(err)?.decision == Decision::Reject {
            power += 1;
        }
    }
    let mut type1 = 0;
    for seed in 0..1000u64 {
        let mut rng = StdRng::seed_from_u64(10_000 + seed);
        let a = DataColumn::numeric("a", normal_sample(&mut rng, 0.0, 100));
        let b = DataColumn::numeric("b", normal_sample(&mut rng, 0.0, 100));
        if run_hypothesis_test(&[a, b], false, 0.05).map_err(err)?.decision == Decision::Reject {
            type1 += 1;
        }
    }
    let groups: Vec<DataColumn> = (1..=3)
        .map(|s| DataColumn::numeric(format!("g{s}"), (s..s + 5).map(f64::from)))
        .collect();
    let anova = run_hypothesis_test(&groups, false, 0.05).map_err(err)?;
    let rate = type1 as f64 / 1000.0;
    ensure(power >= 99, || format!("power {power}/100"))?;
    ensure((0.03..=0.07).contains(&rate), || format!("type-I rate {rate}"))?;
    ensure((anova.statistic - 2.0).abs() <= 1e-9, || {
        format!("{:?} statistic {}", anova.test, anova.statistic)
    })?;
    Ok(format!(
        "power {power}/100, type-I {rate:.3}, {:?} F = {}",
        anova.test, anova.statistic
    ))
}

// 6 ------------------------------------------------------------------------

fn special_functions() -> Outcome {
    let text = include_str!("../../core/tests/fixtures/special_probes.csv");
    let mut worst = 0.0f64;
    let mut count = 0;
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let f: Vec<&str> = line.split(',').collect();
        let num = |s: &str| s.parse::<f64>().unwrap_or(f64::NAN);
        let got = match f[0] {
            "gamma_p" => gamma_p(num(f[1]), num(f[3])),
            "beta_inc" => beta_inc(num(f[1]), num(f[2]), num(f[3])),
            other => return Err(format!("unknown probe {other}")),
        };
        worst = worst.max((got - num(f[4])).abs());
        count += 1;
    }
    ensure(count == 100, || format!("{count} probes"))?;
    ensure(worst < 1e-10, || format!("max abs error {worst:e}"))?;
    Ok(format!("{count} probes, max abs error {worst:.2e}"))
}

// 7 ------------------------------------------------------------------------

fn fit_recovery() -> Outcome {
    let opts = FitOptions {
        candidates: Family::ALL.to_vec(),
        rescale_beta: false,
        skip_inapplicable: true,
    };
    let mut summary = Vec::new();
    let mut failed = Vec::new();
    for family in Family::ALL {
        let mut first = 0;
        for seed in 0..20u64 {
            let mut rng = StdRng::seed_from_u64(7919 * seed + family as u64);
            let xs: Vec<f64> = match family {
                Family::Normal => Normal::new(10.0, 2.0)
                    .unwrap()
                    .sample_iter(&mut rng)
                    .take(5000)
                    .collect(),
                Family::Uniform => Uniform::new(2.0, 5.0)
                    .unwrap()
                    .sample_iter(&mut rng)
                    .take(5000)
                    .collect(),
                Family::Exponential => Exp::new(2.0).unwrap().sample_iter(&mut rng).take(5000).collect(),
                Family::ChiSquared => ChiSquared::new(5.0)
                    .unwrap()
                    .sample_iter(&mut rng)
                    .take(5000)
                    .collect(),
                Family::Beta => Beta::new(2.0, 5.0)
                    .unwrap()
                    .sample_iter(&mut rng)
                    .take(5000)
                    .collect(),
            };
            let report = fit_distributions(&DataColumn::numeric("x", xs), &opts).map_err(err)?;
            if report.ranking.first() == Some(&family) {
                first += 1;
            }
        }
        summary.push(format!("{} {first}/20", family.name()));
        if first < 18 {
            failed.push(family.name());
        }
    }
    ensure(failed.is_empty(), || {
        format!("below 90%: {failed:?} ({})", summary.join(", "))
    })?;
    Ok(summary.join(", "))
}

// 8 ------------------------------------------------------------------------

fn geo_round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let (mut dlat, mut dlon, mut dalt) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let lat = rng.random_range(-90.0..=90.0);
        let lon = rng.random_range(-179.999_999..=180.0);
        let alt = rng.random_range(-1000.0..=50_000.0);
        let g = GeodeticCoord::new(lat, lon, alt).map_err(err)?;
        let back = ecef_to_geodetic(&geodetic_to_ecef(&g)).map_err(err)?;
        dlat = dlat.max((back.lat - g.lat).abs());
        // Longitude is meaningless at the poles.
        if g.lat.abs() < 90.0 {
            let d = (back.lon - g.lon).abs();
            dlon = dlon.max(d.min(360.0 - d));
        }
        dalt = dalt.max((back.alt - g.alt).abs());
    }
    ensure(dlat < 1e-9 && dlon < 1e-9 && dalt < 1e-4, || {
        format!("max |Δlat| {dlat:e}, |Δlon| {dlon:e}, |Δalt| {dalt:e}")
    })?;
    let e0 = geodetic_to_ecef(&GeodeticCoord::new(0.0, 0.0, 0.0).map_err(err)?);
    ensure(e0.x == 6_378_137.0 && e0.y == 0.0 && e0.z == 0.0, || {
        format!("(0,0,0) -> {e0:?}")
    })?;
    let pole = geodetic_to_ecef(&GeodeticCoord::new(90.0, 0.0, 0.0).map_err(err)?);
    ensure((pole.z - 6_356_752.314_2).abs() <= 1e-4, || {
        format!("pole z = {}", pole.z)
    })?;
    Ok(format!(
        "10⁴ points: |Δlat| {dlat:.1e}°, |Δlon| {dlon:.1e}°, |Δalt| {dalt:.1e} m; anchors exact"
    ))
}

// 9 ------------------------------------------------------------------------

fn ridge_exact_line() -> Result<(), String> {
    let x: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 * 0.5 - 3.0]).collect();
    let y: Vec<f64> = x.iter().map(|r| 2.0 * r[0] + 1.0).collect();
    let m = RidgeModel::fit(&x, &y, 0.0).map_err(err)?;
    ensure(
        (m.coefficients[0] - 2.0).abs() < 1e-9 && (m.intercept - 1.0).abs() < 1e-9,
        || format!("ridge recovered ({}, {})", m.coefficients[0], m.intercept),
    )
}

fn mlp_gradient() -> Result<f64, String> {
    let mut worst = 0.0f64;
    for classification in [false, true] {
        let mut s = Stream::new(99);
        let net = MlpNet::new(3, &[6, 4], if classification { 3 } else { 1 }, classification);
        let mut params = net.init(&mut s);
        // Keep every unit off the ReLU kink so central differences are smooth.
        let mut at = 0;
        for w in net.sizes.windows(2) {
            at += w[0] * w[1];
            for b in &mut params[at..at + w[1]] {
                *b = s.uniform_range(-0.1, 0.1);
            }
            at += w[1];
        }
        let x: Vec<Vec<f64>> = (0..8)
            .map(|_| (0..3).map(|_| s.uniform_range(-1.0, 1.0)).collect())
            .collect();
        let y: Vec<f64> = (0..8)
            .map(|i| {
                if classification {
                    (i % 3) as f64
                } else {
                    s.normal()
                }
            })
            .collect();
        let (_, g) = net.loss_and_gradient(&params, &x, &y);
        let h = 1e-5;
        for i in 0..params.len() {
            let mut p = params.clone();
            p[i] += h;
            let up = net.loss(&p, &x, &y);
            p[i] -= 2.0 * h;
            let down = net.loss(&p, &x, &y);
            let fd = (up - down) / (2.0 * h);
            worst = worst.max((g[i] - fd).abs() / g[i].abs().max(fd.abs()).max(1e-6));
        }
    }
    ensure(worst < 1e-4, || format!("MLP gradient max rel error {worst:e}"))?;
    Ok(worst)
}

fn forest_equals_tree() -> Result<(), String> {
    let mut s = Stream::new(3);
    let x: Vec<Vec<f64>> = (0..150).map(|_| (0..4).map(|_| s.uniform()).collect()).collect();
    let y: Vec<f64> = x.iter().map(|r| (3.0 * r[0]).sin() + r[1] * r[2]).collect();
    let targets = Targets::Regression(y);
    let rows: Vec<usize> = (0..x.len()).collect();
    let tp = TreeParams {
        max_depth: 6,
        min_leaf: 2,
        max_features: None,
    };
    let tree = TreeModel::fit(&x, &targets, &rows, tp, &mut Stream::new(0)).map_err(err)?;
    let fp = ForestParams {
        n_trees: 1,
        feature_fraction: 1.0,
        bootstrap: false,
        max_depth: 6,
        min_leaf: 2,
    };
    let forest = ForestModel::fit(&x, &targets, fp, 12345).map_err(err)?;
    ensure(forest.trees[0] == tree, || {
        "forest(1 tree) structure differs from tree".into()
    })?;
    for _ in 0..200 {
        let q: Vec<f64> = (0..4).map(|_| s.uniform_range(-0.2, 1.2)).collect();
        ensure(forest.predict_row(&q) == tree.predict_row(&q), || {
            format!("predictions differ at {q:?}")
        })?;
    }
    Ok(())
}

fn smote_properties() -> Result<(), String> {
    for seed in 0..20u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let n_min = rng.random_range(4..15usize);
        let n_maj = 40;
        let mut x = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n_min + n_maj {
            let c = if i < n_min { 0.0 } else { 3.0 };
            x.push(vec![
                c + rng.random::<f64>(),
                c + rng.random::<f64>(),
                rng.random::<f64>(),
            ]);
            labels.push(if i < n_min { "min" } else { "maj" }.to_string());
        }
        let k = 5;
        let amount = 100 * rng.random_range(1..4usize);
        let out = smote(&x, &labels, "min", k, amount, seed).map_err(err)?;
        ensure(out.samples.len() == n_min * amount / 100, || {
            format!(
                "seed {seed}: {} samples for {n_min} minority at {amount}%",
                out.samples.len()
            )
        })?;
        let k_eff = k.min(n_min - 1);
        let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>();
        for ((s, &p), &q) in out.samples.iter().zip(&out.parents).zip(&out.neighbours) {
            ensure(labels[p] == "min" && labels[q] == "min" && p != q, || {
                format!("seed {seed}: parent/neighbour not distinct minority rows")
            })?;
            // q must be among p's k nearest minority neighbours.
            let dq = dist(&x[p], &x[q]);
            let closer = (0..n_min).filter(|&j| j != p && dist(&x[p], &x[j]) < dq).count();
            ensure(closer < k_eff, || {
                format!("seed {seed}: neighbour {q} not within {k_eff}-NN of {p}")
            })?;
            // s = p + t (q − p) for one t ∈ [0, 1].
            let d: Vec<f64> = (0..3).map(|j| x[q][j] - x[p][j]).collect();
            let j = (0..3).max_by(|&a, &b| d[a].abs().total_cmp(&d[b].abs())).unwrap();
            let t = (s[j] - x[p][j]) / d[j];
            ensure((-1e-12..=1.0 + 1e-12).contains(&t), || {
                format!("seed {seed}: t = {t}")
            })?;
            for j in 0..3 {
                let on = x[p][j] + t * d[j];
                ensure((s[j] - on).abs() <= 1e-9, || {
                    format!("seed {seed}: sample off segment")
                })?;
            }
        }
    }
    Ok(())
}

fn noisy_line(n: usize, seed: u64) -> Vec<DataColumn> {
    let mut rng = StdRng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 0.5).unwrap();
    let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
    let y: Vec<f64> = x.iter().map(|v| 3.0 * v - 2.0 + noise.sample(&mut rng)).collect();
    vec![DataColumn::numeric("x", x), DataColumn::numeric("y", y)]
}

fn search_holdout() -> Result<f64, String> {
    let spec = ModelSpec::from_json(
        r#"{"family": "linear_ridge", "task": "regression", "target": "y",
            "preprocess": {"columns": [{"column": "x", "scaling": "zscore"}]},
            "hyperparameters": {"lambda": {"type": "float", "lo": 1e-6, "hi": 100, "log": true}}}"#,
    )
    .map_err(err)?;
    let (model, _) = random_search_cv(&spec, &noisy_line(300, 1), 5, 20, 11).map_err(err)?;
    let test = noisy_line(200, 2);
    let Prediction::Regression(p) = model.predict(&test).map_err(err)? else {
        return Err("regression model produced class labels".into());
    };
    let r2 = regression_metrics(&p, &test[1].present_numeric().map_err(err)?)
        .map_err(err)?
        .r2
        .ok_or("undefined R²")?;
    ensure(r2 >= 0.95, || format!("holdout R² {r2}"))?;
    Ok(r2)
}

fn model_suite() -> Outcome {
    ridge_exact_line()?;
    let grad = mlp_gradient()?;
    forest_equals_tree()?;
    smote_properties()?;
    let r2 = search_holdout()?;
    Ok(format!(
        "ridge (2, 1); MLP grad rel err {grad:.1e}; forest ≡ tree; SMOTE 20 seeds; holdout R² {r2:.4}"
    ))
}

// 10 -----------------------------------------------------------------------

fn case_study() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let out_dir = dir.path().to_str().ok_or("non-UTF-8 temp dir")?;
    let code = datafarm_cli::dispatch([
        "datafarm",
        "--quiet",
        "casestudy",
        "navigation",
        "--out",
        out_dir,
        "--n",
        "4000",
    ]);
    ensure(code == 0, || {
        format!("`datafarm casestudy navigation` exited {code}")
    })?;
    let text = std::fs::read_to_string(dir.path().join("report.json")).map_err(err)?;
    let r: serde_json::Value = serde_json::from_str(&text).map_err(err)?;
    let num = |v: &serde_json::Value| v.as_f64().unwrap_or(f64::NAN);
    let mut problems = Vec::new();
    let targets = [(525.0, 10_000.0, 1800.0), (425.0, 27_500.0, 1000.0)];
    for (a, (v, h, t)) in r["anchors"].as_array().ok_or("no anchors")?.iter().zip(targets) {
        ensure(num(&a["speed"]) == v && num(&a["altitude"]) == h, || {
            "anchor order".into()
        })?;
        if (num(&a["value"]) - t).abs() > 1e-6 {
            problems.push(format!("total_fuel({v},{h}) = {}", num(&a["value"])));
        }
    }
    let (amax, amin) = (&r["grid_argmax"], &r["grid_argmin"]);
    let inside = |p: &serde_json::Value, (v0, v1): (f64, f64), (h0, h1): (f64, f64)| {
        (v0..=v1).contains(&num(&p["speed"])) && (h0..=h1).contains(&num(&p["altitude"]))
    };
    let at = |p: &serde_json::Value| {
        format!(
            "({} kt, {} ft, {:.0} lb)",
            num(&p["speed"]),
            num(&p["altitude"]),
            num(&p["fuel"])
        )
    };
    if !inside(amax, (500.0, 550.0), (10_000.0, 12_000.0)) {
        problems.push(format!("argmax {} outside [500,550]kt×[10k,12k]ft", at(amax)));
    }
    if !inside(amin, (400.0, 450.0), (25_000.0, 30_000.0)) {
        problems.push(format!("argmin {} outside [400,450]kt×[25k,30k]ft", at(amin)));
    }
    let r2 = num(&r["time_fuel_fit"]["r2"]);
    if r2.is_nan() || r2 >= 0.5 {
        problems.push(format!("R²(time, fuel) = {r2}"));
    }
    if num(&r["rows_executed"]) != 4000.0 {
        problems.push(format!("rows_executed {}", r["rows_executed"]));
    }
    let svg = std::fs::read_to_string(dir.path().join("fuel_heatmap.svg")).unwrap_or_default();
    if !svg.contains("<svg") {
        problems.push("heatmap SVG missing".into());
    }
    ensure(problems.is_empty(), || problems.join("; "))?;
    Ok(format!(
        "anchors exact; argmax {}; argmin {}; R² {r2:.3}; heatmap written",
        at(amax),
        at(amin)
    ))
}

// --------------------------------------------------------------------------

fn main() {
    let criteria: [(&str, u64, Check); 10] = [
        ("LHS stratification", 1, lhs_stratification),
        ("execution prefix property", 5, execution_prefix),
        ("convergence early stop", 30, convergence_early_stop),
        ("Pareto oracle equivalence", 10, pareto_oracle),
        ("hypothesis-flow calibration", 60, hypothesis_calibration),
        ("special functions", 1, special_functions),
        ("distribution-fit recovery", 30, fit_recovery),
        ("geo round trip", 1, geo_round_trip),
        ("model suite", 120, model_suite),
        ("case-study harness", 60, case_study),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(budget) => Err(format!(
                "{detail}; took {:.2} s > {budget} s",
                elapsed.as_secs_f64()
            )),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS {:>2} {name} ({:.2} s): {detail}",
                i + 1,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({:.2} s): {why}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
