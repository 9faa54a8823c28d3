//! Confusion counts, per-class and macro-averaged precision/recall/F1, and
//! PCA projection of embeddings.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Label;
use crate::error::{check_dim, Error, Result};

/// Counts with fake as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

impl ClassMetrics {
    /// Metrics of one class from its true positives, false positives and
    /// false negatives. Zero denominators give zero.
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        ClassMetrics {
            precision,
            recall,
            f1: f1_score(precision, recall),
            support: tp + fn_,
        }
    }
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationReport {
    pub confusion: ConfusionMatrix,
    pub fake: ClassMetrics,
    pub real: ClassMetrics,
    pub macro_precision: f64,
    pub macro_recall: f64,
    /// Mean of the two per-class F1 values.
    pub macro_f1: f64,
}

impl EvaluationReport {
    pub fn from_confusion(confusion: ConfusionMatrix) -> Self {
        let c = confusion;
        let fake = ClassMetrics::from_counts(c.tp, c.fp, c.fn_);
        let real = ClassMetrics::from_counts(c.tn, c.fn_, c.fp);
        EvaluationReport {
            confusion,
            fake,
            real,
            macro_precision: (fake.precision + real.precision) / 2.0,
            macro_recall: (fake.recall + real.recall) / 2.0,
            macro_f1: (fake.f1 + real.f1) / 2.0,
        }
    }
}

fn is_fake(label: Label) -> Result<bool> {
    match label {
        Label::Fake => Ok(true),
        Label::Real => Ok(false),
        other => Err(Error::invalid(alloc::format!(
            "evaluation needs fake/real labels, found `{}`",
            other.as_str()
        ))),
    }
}

pub fn confusion_matrix(y_true: &[Label], y_pred: &[Label]) -> Result<ConfusionMatrix> {
    check_dim("predictions", y_true.len(), y_pred.len())?;
    if y_true.is_empty() {
        return Err(Error::invalid("nothing to evaluate"));
    }
    let mut c = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (is_fake(t)?, is_fake(p)?) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

pub fn evaluate(y_true: &[Label], y_pred: &[Label]) -> Result<EvaluationReport> {
    Ok(EvaluationReport::from_confusion(confusion_matrix(y_true, y_pred)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaProjection {
    /// `n × k` projected rows.
    pub projected: Vec<Vec<f64>>,
    /// Eigenvalues of the sample covariance, non-increasing.
    pub explained_variance: Vec<f64>,
    /// `k` unit eigenvectors of length `d`.
    pub components: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues, eigenvectors as columns of a row-major `d × d`).
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = a.len();
    let mut v: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>();
    for _ in 0..100 {
        let off: f64 = (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..d {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..d {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..d).map(|i| a[i][i]).collect(), v)
}

/// Flips `v` so its largest-magnitude entry (first one on ties) is positive.
fn orient(v: &mut [f64]) {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Projects the column-centered rows onto the `k` leading eigenvectors of
/// the sample covariance (divisor `n - 1`).
pub fn pca_project(x: &[Vec<f64>], k: usize) -> Result<PcaProjection> {
    let n = x.len();
    if n < 2 {
        return Err(Error::invalid("PCA needs at least two rows"));
    }
    let d = x[0].len();
    for row in x {
        check_dim("PCA row", d, row.len())?;
    }
    if k == 0 || k > d {
        return Err(Error::invalid(alloc::format!("cannot keep {k} components of {d}")));
    }
    let mut mean = vec![0.0; d];
    for row in x {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered: Vec<Vec<f64>> = x.iter().map(|r| r.iter().zip(&mean).map(|(v, m)| v - m).collect()).collect();
    let mut cov = vec![vec![0.0; d]; d];
    for row in &centered {
        for i in 0..d {
            for j in i..d {
                cov[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            cov[i][j] /= (n - 1) as f64;
            cov[j][i] = cov[i][j];
        }
    }
    let (values, vectors) = jacobi_eigen(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let components: Vec<Vec<f64>> = order[..k]
        .iter()
        .map(|&c| {
            let mut v: Vec<f64> = vectors.iter().map(|row| row[c]).collect();
            orient(&mut v);
            v
        })
        .collect();
    let explained_variance = order[..k].iter().map(|&c| values[c].max(0.0)).collect();
    let projected = centered
        .iter()
        .map(|r| components.iter().map(|c| crate::nn::dot(r, c)).collect())
        .collect();
    Ok(PcaProjection {
        projected,
        explained_variance,
        components,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn labels(s: &str) -> Vec<Label> {
        s.chars().map(|c| if c == 'f' { Label::Fake } else { Label::Real }).collect()
    }

    #[test]
    fn real_row_f1() {
        assert!((f1_score(0.64, 0.88) - 0.741).abs() < 1e-3);
        assert_eq!(libm::round(f1_score(0.64, 0.88) * 100.0) / 100.0, 0.74);
    }

    #[test]
    fn all_fake_baseline() {
        let mut truth = vec![Label::Fake; 31];
        truth.extend(vec![Label::Real; 23]);
        let r = evaluate(&truth, &vec![Label::Fake; 54]).unwrap();
        let p = 31.0 / 54.0;
        let f = 2.0 * p / (p + 1.0);
        assert_eq!(r.fake.precision, p);
        assert_eq!(r.real.f1, 0.0);
        assert!((r.macro_precision - p / 2.0).abs() < 1e-15);
        assert_eq!(r.macro_recall, 0.5);
        assert!((r.macro_f1 - f / 2.0).abs() < 1e-15);
        assert!((r.macro_precision - 0.287).abs() < 1e-3);
        assert!((r.macro_f1 - 0.365).abs() < 1e-3);
    }

    #[test]
    fn perfect_predictions() {
        let y = labels("ffrrfr");
        let r = evaluate(&y, &y).unwrap();
        assert_eq!((r.macro_precision, r.macro_recall, r.macro_f1), (1.0, 1.0, 1.0));
        assert_eq!(r.confusion.total(), 6);
    }

    #[test]
    fn bad_inputs() {
        assert!(evaluate(&labels("ff"), &labels("f")).is_err());
        assert!(evaluate(&[], &[]).is_err());
        assert!(evaluate(&[Label::NotSure], &[Label::Fake]).is_err());
    }

    fn swap(l: &[Label]) -> Vec<Label> {
        l.iter().map(|&x| if x == Label::Fake { Label::Real } else { Label::Fake }).collect()
    }

    proptest! {
        #[test]
        fn relabeling_swaps_rows(pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 1..60)) {
            let t: Vec<Label> = pairs.iter().map(|p| if p.0 { Label::Fake } else { Label::Real }).collect();
            let p: Vec<Label> = pairs.iter().map(|p| if p.1 { Label::Fake } else { Label::Real }).collect();
            let a = evaluate(&t, &p).unwrap();
            let b = evaluate(&swap(&t), &swap(&p)).unwrap();
            prop_assert_eq!(a.fake, b.real);
            prop_assert_eq!(a.real, b.fake);
            prop_assert!((a.macro_f1 - b.macro_f1).abs() < 1e-15);
        }

        #[test]
        fn constant_predictor_closed_form(a in 1usize..50, b in 1usize..50, predict_fake in any::<bool>()) {
            let mut t = vec![Label::Fake; a];
            t.extend(vec![Label::Real; b]);
            let constant = if predict_fake { Label::Fake } else { Label::Real };
            let r = evaluate(&t, &vec![constant; a + b]).unwrap();
            let hits = if predict_fake { a } else { b } as f64;
            let p = hits / (a + b) as f64;
            prop_assert!((r.macro_f1 - 0.5 * f1_score(p, 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn pca_of_axis_aligned_data_is_centering() {
        let x = vec![vec![3.0, 1.5], vec![-3.0, 1.5], vec![5.0, 0.5], vec![-5.0, 0.5]];
        let p = pca_project(&x, 2).unwrap();
        assert_eq!(p.components[0], vec![1.0, 0.0]);
        assert_eq!(p.components[1], vec![0.0, 1.0]);
        for (row, proj) in x.iter().zip(&p.projected) {
            assert!((proj[0] - row[0]).abs() < 1e-12);
            assert!((proj[1] - (row[1] - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn pca_of_identical_rows_is_zero() {
        let p = pca_project(&vec![vec![1.0, 2.0, 3.0]; 5], 2).unwrap();
        assert!(p.projected.iter().flatten().all(|v| *v == 0.0));
        assert_eq!(p.explained_variance, vec![0.0, 0.0]);
    }

    #[test]
    fn pca_shape_errors() {
        assert!(pca_project(&[vec![1.0, 2.0]], 1).is_err());
        assert!(pca_project(&[vec![1.0, 2.0], vec![0.0, 1.0]], 3).is_err());
    }

    fn random_matrix(seed: u64, n: usize, d: usize) -> Vec<Vec<f64>> {
        let mut rng = crate::nn::seeded_rng(seed);
        (0..n).map(|_| (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect()).collect()
    }

    #[test]
    fn full_rank_projection_keeps_distances() {
        let x = random_matrix(11, 20, 5);
        let p = pca_project(&x, 5).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let d0: f64 = x[i].iter().zip(&x[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                let d1: f64 = p.projected[i].iter().zip(&p.projected[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                assert!((d0.sqrt() - d1.sqrt()).abs() < 1e-8);
            }
        }
        assert!(p.explained_variance.windows(2).all(|w| w[0] >= w[1]));
    }
}
