//! Automatic hypothesis-test selection.
//!
//! The flow, recorded step by step in [`TestReport::decision_path`]:
//!
//! 1. Normality of every group (of the differences, when paired) with
//!    Shapiro–Wilk, or D'Agostino K² above n = 5000. A zero-variance group
//!    fails this step. All pass ⇒ parametric branch.
//! 2. Parametric, independent groups: Brown–Forsythe (median-centred
//!    Levene) test of equal variances.
//! 3. Two groups: Student t (equal variances), Welch t (unequal) or
//!    Mann–Whitney U (non-normal); paired: paired t or Wilcoxon
//!    signed-rank.
//! 4. Three or more groups: one-way ANOVA, Welch ANOVA or Kruskal–Wallis.
//!    When the omnibus test rejects, Tukey HSD (parametric) or Dunn with
//!    Bonferroni adjustment (non-parametric) compares all pairs.
//!
//! Rank tests use midranks with tie-corrected variances and the normal
//! approximation with a 0.5 continuity correction.

use super::descriptive::{mean, median, midranks, tie_sum, variance};
use super::normality::normality_check;
use super::AnalysisError;
use crate::dist::{chi2_sf, f_sf, normal_sf, studentized_range_sf, t_two_sided_p};
use crate::table::DataColumn;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    StudentT,
    WelchT,
    PairedT,
    MannWhitneyU,
    WilcoxonSignedRank,
    OneWayAnova,
    WelchAnova,
    KruskalWallis,
}

impl TestKind {
    pub fn is_parametric(self) -> bool {
        matches!(
            self,
            TestKind::StudentT
                | TestKind::WelchT
                | TestKind::PairedT
                | TestKind::OneWayAnova
                | TestKind::WelchAnova
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Reject,
    FailToReject,
}

/// One pre-check on the decision path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathStep {
    pub check: String,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub first: String,
    pub second: String,
    pub statistic: f64,
    pub p_adjusted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostHocMethod {
    TukeyHsd,
    DunnBonferroni,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostHoc {
    pub method: PostHocMethod,
    pub comparisons: Vec<PairwiseComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub schema_version: u32,
    pub test: TestKind,
    pub groups: Vec<String>,
    pub statistic: f64,
    /// Degrees of freedom where the reference distribution has them.
    pub df: Vec<f64>,
    pub p_value: f64,
    pub alpha: f64,
    pub decision: Decision,
    pub decision_path: Vec<PathStep>,
    pub post_hoc: Option<PostHoc>,
}

/// Statistic, p-value and degrees of freedom of a single test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub df1: Option<f64>,
    pub df2: Option<f64>,
}

impl TestOutcome {
    fn new(statistic: f64, p_value: f64, df1: Option<f64>, df2: Option<f64>) -> Self {
        let p = if p_value.is_nan() {
            1.0
        } else {
            p_value.clamp(0.0, 1.0)
        };
        TestOutcome {
            statistic,
            p_value: p,
            df1,
            df2,
        }
    }

    fn df(&self) -> Vec<f64> {
        self.df1.into_iter().chain(self.df2).collect()
    }
}

/// Runs the selection flow on `groups` at significance `alpha`.
pub fn run_hypothesis_test(
    groups: &[DataColumn],
    paired: bool,
    alpha: f64,
) -> Result<TestReport, AnalysisError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(AnalysisError::InvalidArgument(format!(
            "alpha must be in (0, 1), got {alpha}"
        )));
    }
    if groups.len() < 2 {
        return Err(AnalysisError::InvalidArgument(
            "at least two groups are required".into(),
        ));
    }
    let names: Vec<String> = groups.iter().map(|g| g.name.clone()).collect();
    let data: Vec<Vec<f64>> = if paired {
        if groups.len() != 2 {
            return Err(AnalysisError::InvalidArgument(
                "paired comparisons take exactly two groups".into(),
            ));
        }
        let (a, b) = (groups[0].as_numeric()?, groups[1].as_numeric()?);
        if a.len() != b.len() {
            return Err(AnalysisError::InvalidArgument(format!(
                "paired groups differ in length ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        let (x, y): (Vec<f64>, Vec<f64>) = a.iter().zip(b).filter_map(|(x, y)| Some(((*x)?, (*y)?))).unzip();
        vec![x, y]
    } else {
        groups
            .iter()
            .map(|g| g.present_numeric())
            .collect::<Result<_, _>>()?
    };
    for (name, g) in names.iter().zip(&data) {
        if g.len() < 3 {
            return Err(AnalysisError::InvalidArgument(format!(
                "group `{name}` has {} observations; at least 3 are required",
                g.len()
            )));
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(AnalysisError::InvalidArgument(format!(
                "group `{name}` has non-finite values"
            )));
        }
    }

    let mut path = Vec::new();

    // 1. normality
    let normal = if paired {
        let d: Vec<f64> = data[0].iter().zip(&data[1]).map(|(x, y)| x - y).collect();
        normality_step("normality(differences)", &d, alpha, &mut path)
    } else {
        let mut all = true;
        for (name, g) in names.iter().zip(&data) {
            all &= normality_step(&format!("normality({name})"), g, alpha, &mut path);
        }
        all
    };

    // 2-4. selection
    let k = data.len();
    let (test, outcome) = if paired {
        if normal {
            (TestKind::PairedT, paired_t(&data[0], &data[1]))
        } else {
            (
                TestKind::WilcoxonSignedRank,
                wilcoxon_signed_rank(&data[0], &data[1]),
            )
        }
    } else if normal {
        let bf = brown_forsythe(&data);
        let homogeneous = bf.p_value >= alpha;
        path.push(PathStep {
            check: "variance_homogeneity(brown_forsythe)".into(),
            statistic: Some(bf.statistic),
            p_value: Some(bf.p_value),
            outcome: if homogeneous { "pass" } else { "fail" }.into(),
        });
        match (k, homogeneous) {
            (2, true) => (TestKind::StudentT, student_t(&data[0], &data[1])),
            (2, false) => (TestKind::WelchT, welch_t(&data[0], &data[1])),
            (_, true) => (TestKind::OneWayAnova, one_way_anova(&data)),
            (_, false) => (TestKind::WelchAnova, welch_anova(&data)),
        }
    } else if k == 2 {
        (TestKind::MannWhitneyU, mann_whitney_u(&data[0], &data[1]))
    } else {
        (TestKind::KruskalWallis, kruskal_wallis(&data))
    };
    path.push(PathStep {
        check: format!("selected({})", serde_json::to_value(test)?.as_str().unwrap_or("")),
        statistic: None,
        p_value: None,
        outcome: if test.is_parametric() {
            "parametric"
        } else {
            "nonparametric"
        }
        .into(),
    });

    let decision = if outcome.p_value < alpha {
        Decision::Reject
    } else {
        Decision::FailToReject
    };
    let post_hoc = if k >= 3 && decision == Decision::Reject {
        Some(if test.is_parametric() {
            PostHoc {
                method: PostHocMethod::TukeyHsd,
                comparisons: tukey_hsd(&data, &names),
            }
        } else {
            PostHoc {
                method: PostHocMethod::DunnBonferroni,
                comparisons: dunn_bonferroni(&data, &names),
            }
        })
    } else {
        None
    };

    Ok(TestReport {
        schema_version: super::SCHEMA_VERSION,
        test,
        groups: names,
        statistic: outcome.statistic,
        df: outcome.df(),
        p_value: outcome.p_value,
        alpha,
        decision,
        decision_path: path,
        post_hoc,
    })
}

fn normality_step(label: &str, x: &[f64], alpha: f64, path: &mut Vec<PathStep>) -> bool {
    if variance(x) == 0.0 {
        path.push(PathStep {
            check: label.to_string(),
            statistic: None,
            p_value: None,
            outcome: "zero_variance".into(),
        });
        return false;
    }
    match normality_check(x) {
        Some((method, r)) => {
            let pass = r.p_value >= alpha;
            path.push(PathStep {
                check: format!("{label}[{method}]"),
                statistic: Some(r.statistic),
                p_value: Some(r.p_value),
                outcome: if pass { "pass" } else { "fail" }.into(),
            });
            pass
        }
        None => {
            path.push(PathStep {
                check: label.to_string(),
                statistic: None,
                p_value: None,
                outcome: "not_testable".into(),
            });
            false
        }
    }
}

pub fn student_t(a: &[f64], b: &[f64]) -> TestOutcome {
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let df = n1 + n2 - 2.0;
    let sp2 = ((n1 - 1.0) * variance(a) + (n2 - 1.0) * variance(b)) / df;
    let t = (mean(a) - mean(b)) / (sp2 * (1.0 / n1 + 1.0 / n2)).sqrt();
    TestOutcome::new(t, t_two_sided_p(t, df), Some(df), None)
}

pub fn welch_t(a: &[f64], b: &[f64]) -> TestOutcome {
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let (v1, v2) = (variance(a) / n1, variance(b) / n2);
    let t = (mean(a) - mean(b)) / (v1 + v2).sqrt();
    let df = (v1 + v2).powi(2) / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
    TestOutcome::new(t, t_two_sided_p(t, df), Some(df), None)
}

pub fn paired_t(a: &[f64], b: &[f64]) -> TestOutcome {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = d.len() as f64;
    let t = mean(&d) / (variance(&d) / n).sqrt();
    TestOutcome::new(t, t_two_sided_p(t, n - 1.0), Some(n - 1.0), None)
}

/// Mann–Whitney U. The statistic is U of the first group.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> TestOutcome {
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&all);
    let r1: f64 = ranks[..a.len()].iter().sum();
    let u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    let n = n1 + n2;
    let mu = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_sum(&ties) / (n * (n - 1.0)));
    let p = if var <= 0.0 {
        1.0
    } else {
        let z = ((u1 - mu).abs() - 0.5).max(0.0) / var.sqrt();
        2.0 * normal_sf(z)
    };
    TestOutcome::new(u1, p, None, None)
}

/// Wilcoxon signed-rank on paired differences; zero differences are
/// dropped. The statistic is min(W+, W−).
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> TestOutcome {
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|v| *v != 0.0)
        .collect();
    if d.is_empty() {
        return TestOutcome::new(0.0, 1.0, None, None);
    }
    let n = d.len() as f64;
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let (ranks, ties) = midranks(&abs);
    let w_plus: f64 = d
        .iter()
        .zip(&ranks)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, r)| r)
        .sum();
    let w_minus = n * (n + 1.0) / 2.0 - w_plus;
    let mu = n * (n + 1.0) / 4.0;
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_sum(&ties) / 48.0;
    let p = if var <= 0.0 {
        1.0
    } else {
        let z = ((w_plus - mu).abs() - 0.5).max(0.0) / var.sqrt();
        2.0 * normal_sf(z)
    };
    TestOutcome::new(w_plus.min(w_minus), p, None, None)
}

fn sums_of_squares(groups: &[Vec<f64>]) -> (f64, f64, usize) {
    let n: usize = groups.iter().map(Vec::len).sum();
    let grand = groups.iter().flatten().sum::<f64>() / n as f64;
    let ssb = groups
        .iter()
        .map(|g| g.len() as f64 * (mean(g) - grand).powi(2))
        .sum();
    let ssw = groups
        .iter()
        .map(|g| {
            let m = mean(g);
            g.iter().map(|v| (v - m).powi(2)).sum::<f64>()
        })
        .sum();
    (ssb, ssw, n)
}

pub fn one_way_anova(groups: &[Vec<f64>]) -> TestOutcome {
    let (ssb, ssw, n) = sums_of_squares(groups);
    let df1 = (groups.len() - 1) as f64;
    let df2 = (n - groups.len()) as f64;
    let f = (ssb / df1) / (ssw / df2);
    let p = if f.is_nan() { 1.0 } else { f_sf(f, df1, df2) };
    TestOutcome::new(f, p, Some(df1), Some(df2))
}

pub fn welch_anova(groups: &[Vec<f64>]) -> TestOutcome {
    let k = groups.len() as f64;
    let w: Vec<f64> = groups.iter().map(|g| g.len() as f64 / variance(g)).collect();
    let sw: f64 = w.iter().sum();
    let mw = groups.iter().zip(&w).map(|(g, wi)| wi * mean(g)).sum::<f64>() / sw;
    let a = groups
        .iter()
        .zip(&w)
        .map(|(g, wi)| wi * (mean(g) - mw).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    let tmp = groups
        .iter()
        .zip(&w)
        .map(|(g, wi)| (1.0 - wi / sw).powi(2) / (g.len() as f64 - 1.0))
        .sum::<f64>();
    let b = 1.0 + 2.0 * (k - 2.0) / (k * k - 1.0) * tmp;
    let f = a / b;
    let df1 = k - 1.0;
    let df2 = (k * k - 1.0) / (3.0 * tmp);
    TestOutcome::new(f, f_sf(f, df1, df2), Some(df1), Some(df2))
}

pub fn kruskal_wallis(groups: &[Vec<f64>]) -> TestOutcome {
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let (ranks, ties) = midranks(&all);
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let h0 = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
    let correction = 1.0 - tie_sum(&ties) / (n * n * n - n);
    let df = (groups.len() - 1) as f64;
    if correction <= 0.0 {
        return TestOutcome::new(0.0, 1.0, Some(df), None);
    }
    let h = h0 / correction;
    TestOutcome::new(h, chi2_sf(h, df), Some(df), None)
}

/// Brown–Forsythe test: one-way ANOVA on absolute deviations from each
/// group's median.
pub fn brown_forsythe(groups: &[Vec<f64>]) -> TestOutcome {
    let dev: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            let m = median(g);
            g.iter().map(|v| (v - m).abs()).collect()
        })
        .collect();
    one_way_anova(&dev)
}

/// Tukey HSD (Tukey–Kramer for unequal sizes).
pub fn tukey_hsd(groups: &[Vec<f64>], names: &[String]) -> Vec<PairwiseComparison> {
    let (_, ssw, n) = sums_of_squares(groups);
    let k = groups.len();
    let df = (n - k) as f64;
    let msw = ssw / df;
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let (ni, nj) = (groups[i].len() as f64, groups[j].len() as f64);
            let q = (mean(&groups[i]) - mean(&groups[j])).abs() / (msw / 2.0 * (1.0 / ni + 1.0 / nj)).sqrt();
            out.push(PairwiseComparison {
                first: names[i].clone(),
                second: names[j].clone(),
                statistic: q,
                p_adjusted: studentized_range_sf(q, k, df),
            });
        }
    }
    out
}

/// Dunn's test on pooled midranks with Bonferroni-adjusted p-values.
pub fn dunn_bonferroni(groups: &[Vec<f64>], names: &[String]) -> Vec<PairwiseComparison> {
    let all: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let (ranks, ties) = midranks(&all);
    let mut mean_ranks = Vec::new();
    let mut offset = 0;
    for g in groups {
        mean_ranks.push(ranks[offset..offset + g.len()].iter().sum::<f64>() / g.len() as f64);
        offset += g.len();
    }
    let k = groups.len();
    let m = (k * (k - 1) / 2) as f64;
    let base = n * (n + 1.0) / 12.0 - tie_sum(&ties) / (12.0 * (n - 1.0));
    let mut out = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let se = (base * (1.0 / groups[i].len() as f64 + 1.0 / groups[j].len() as f64)).sqrt();
            let z = (mean_ranks[i] - mean_ranks[j]) / se;
            let p = if se > 0.0 { 2.0 * normal_sf(z.abs()) } else { 1.0 };
            out.push(PairwiseComparison {
                first: names[i].clone(),
                second: names[j].clone(),
                statistic: z,
                p_adjusted: (p * m).min(1.0),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference data and values from an independent statistics package.
    const A: [f64; 25] = [
        -1.4238, 1.2637, -0.8707, -0.2592, -0.0753, -0.7409, -1.3678, 0.6489, 0.3611, -1.9529, 2.3474,
        0.9685, -0.7594, 0.9022, -0.467, -0.0607, 0.7888, -1.2567, 0.5759, 1.399, 1.3223, -0.2997, 0.9029,
        -1.6216, -0.1582,
    ];
    const B: [f64; 30] = [
        1.2742, -1.4154, 0.4775, 3.1871, 4.5272, 1.766, 1.8429, -0.8385, -1.2141, -1.5184, 1.4123, 1.7279,
        -0.3881, -1.243, 0.9863, 1.0694, 0.4038, 2.505, 0.4606, 0.5008, -1.0623, 0.8039, 2.6206, 0.6917,
        0.7064, 1.2505, 1.0162, 1.3954, 1.4051, 1.5275,
    ];
    const C: [f64; 22] = [
        1.0399, 0.4583, 1.1949, 4.1253, 2.1342, 0.386, 0.0865, 1.3487, 0.7546, 1.2005, 0.1506, 1.3544,
        0.5555, 0.1593, 0.1692, 1.1748, 0.2912, 1.4315, 0.587, 0.309, 4.4697, 0.1,
    ];

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * b.abs().max(1e-300), "{a} vs {b}");
    }

    fn abc() -> Vec<Vec<f64>> {
        vec![A.to_vec(), B.to_vec(), C.to_vec()]
    }

    #[test]
    fn two_sample_tests_match_reference() {
        let s = student_t(&A, &B);
        close(s.statistic, -2.4749295281578583, 1e-12);
        close(s.p_value, 0.016559157232490896, 1e-9);
        let w = welch_t(&A, &B);
        close(w.statistic, -2.5305099265811584, 1e-12);
        close(w.df1.unwrap(), 52.82130735761873, 1e-12);
        close(w.p_value, 0.014405884786391631, 1e-9);
        let p = paired_t(&A, &B[..25]);
        close(p.statistic, -1.9033521883841025, 1e-12);
        close(p.p_value, 0.06905516965194239, 1e-9);
    }

    #[test]
    fn rank_tests_match_reference() {
        let u = mann_whitney_u(&A, &B);
        assert_eq!(u.statistic, 230.0);
        close(u.p_value, 0.014586099490464417, 1e-9);
        let w = wilcoxon_signed_rank(&A, &B[..25]);
        assert_eq!(w.statistic, 100.0);
        close(w.p_value, 0.09527036954999811, 1e-9);
        let k = kruskal_wallis(&abc());
        close(k.statistic, 8.892278630460481, 1e-12);
        close(k.p_value, 0.011723741382002158, 1e-9);
    }

    #[test]
    fn anova_family_matches_reference() {
        let f = one_way_anova(&abc());
        close(f.statistic, 4.961363443515833, 1e-12);
        close(f.p_value, 0.009506680880089597, 1e-9);
        let w = welch_anova(&abc());
        close(w.statistic, 5.7822252089640305, 1e-12);
        close(w.df2.unwrap(), 48.36604198879122, 1e-12);
        close(w.p_value, 0.005602531040244045, 1e-9);
        let bf = brown_forsythe(&abc());
        close(bf.statistic, 0.6270730935849796, 1e-12);
        close(bf.p_value, 0.5369670281932537, 1e-9);
    }

    #[test]
    fn tukey_matches_reference() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let t = tukey_hsd(&abc(), &names);
        close(t[0].p_adjusted, 0.03600229760550733, 1e-4);
        close(t[1].p_adjusted, 0.013452674090269623, 1e-4);
        close(t[2].p_adjusted, 0.829660541989623, 1e-4);
    }

    #[test]
    fn dunn_hand_computation() {
        // Groups {1,2,3}, {4,5,6}, {7,8,9}: mean ranks 2, 5, 8, N = 9, no ties.
        let g = vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 9.0]];
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let d = dunn_bonferroni(&g, &names);
        let se = (9.0 * 10.0 / 12.0 * (2.0 / 3.0f64)).sqrt();
        close(d[0].statistic, -3.0 / se, 1e-14);
        close(d[1].statistic, -6.0 / se, 1e-14);
        close(d[0].p_adjusted, (3.0 * 2.0 * normal_sf(3.0 / se)).min(1.0), 1e-12);
    }

    #[test]
    fn anova_on_shifted_integer_runs_is_exactly_two() {
        // SSB = 10 on 2 df, SSW = 30 on 12 df  =>  F = (10/2)/(30/12) = 2.
        let g: Vec<Vec<f64>> = (1..=3).map(|s| (s..s + 5).map(|v| v as f64).collect()).collect();
        let (ssb, ssw, _) = sums_of_squares(&g);
        assert_eq!(ssb, 10.0);
        assert_eq!(ssw, 30.0);
        let f = one_way_anova(&g);
        assert!((f.statistic - 2.0).abs() < 1e-12);
        let cols: Vec<DataColumn> = g
            .iter()
            .enumerate()
            .map(|(i, v)| DataColumn::numeric(format!("g{i}"), v.clone()))
            .collect();
        let report = run_hypothesis_test(&cols, false, 0.05).unwrap();
        assert_eq!(report.test, TestKind::OneWayAnova);
        assert!((report.statistic - 2.0).abs() < 1e-9);
        assert_eq!(report.decision, Decision::FailToReject);
        assert!(report.post_hoc.is_none());
    }

    #[test]
    fn argument_errors() {
        let g = DataColumn::numeric("g", [1.0, 2.0, 3.0]);
        assert!(run_hypothesis_test(std::slice::from_ref(&g), false, 0.05).is_err());
        let tiny = DataColumn::numeric("t", [1.0, 2.0]);
        assert!(run_hypothesis_test(&[g.clone(), tiny], false, 0.05).is_err());
        let longer = DataColumn::numeric("l", [1.0, 2.0, 3.0, 4.0]);
        assert!(run_hypothesis_test(&[g.clone(), longer], true, 0.05).is_err());
        assert!(run_hypothesis_test(&[g.clone(), g], false, 1.5).is_err());
    }

    #[test]
    fn zero_variance_routes_to_rank_test() {
        let flat = DataColumn::numeric("flat", [5.0; 10]);
        let other = DataColumn::numeric("other", (0..10).map(|i| i as f64));
        let r = run_hypothesis_test(&[flat, other], false, 0.05).unwrap();
        assert_eq!(r.test, TestKind::MannWhitneyU);
        assert_eq!(r.decision_path[0].outcome, "zero_variance");
    }

    #[test]
    fn reject_iff_p_below_alpha() {
        let cols = vec![
            DataColumn::numeric("a", A),
            DataColumn::numeric("b", B),
            DataColumn::numeric("c", C),
        ];
        for alpha in [0.001, 0.01, 0.05, 0.2] {
            let r = run_hypothesis_test(&cols, false, alpha).unwrap();
            assert_eq!(r.decision == Decision::Reject, r.p_value < alpha);
            assert_eq!(r.post_hoc.is_some(), r.decision == Decision::Reject);
        }
    }
}
