//! Desk-scale evaluation harness: KNN and one-vs-rest logistic regression,
//! confusion-based metrics, and stratified cross-validated benchmarking where
//! resampling touches training folds only.

use crate::baselines::{run_pipeline, Pipeline, PipelineConfig};
use crate::dataset::{Dataset, FoldPlan, ScaleTable};
use crate::error::{Error, Result};
use crate::geometry::squared_euclidean;
use crate::seeding;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Classifier selection for the harness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifierSpec {
    Knn { k: usize },
    LogReg { epochs: usize, lr: f64 },
}

impl ClassifierSpec {
    pub fn default_knn() -> Self {
        ClassifierSpec::Knn { k: 5 }
    }

    pub fn default_logreg() -> Self {
        ClassifierSpec::LogReg {
            epochs: 500,
            lr: 0.1,
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "knn" => Ok(Self::default_knn()),
            "logreg" | "lr" => Ok(Self::default_logreg()),
            other => Err(Error::InvalidConfig(format!(
                "unknown classifier `{other}` (expected knn or logreg)"
            ))),
        }
    }
}

impl fmt::Display for ClassifierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierSpec::Knn { .. } => f.write_str("knn"),
            ClassifierSpec::LogReg { .. } => f.write_str("logreg"),
        }
    }
}

/// Majority vote over the k nearest training rows (Euclidean). Vote ties go
/// to the tied class seen earliest in distance order.
pub fn knn_predict(train: &Dataset, test_features: &[Vec<f64>], k: usize) -> Result<Vec<usize>> {
    if train.n_rows() == 0 {
        return Err(Error::Contract("knn requires a nonempty training set".into()));
    }
    if k == 0 {
        return Err(Error::InvalidConfig("knn requires k >= 1".into()));
    }
    let k_eff = k.min(train.n_rows());
    let mut predictions = Vec::with_capacity(test_features.len());
    for query in test_features {
        if query.len() != train.n_features() {
            return Err(Error::DimensionMismatch {
                left: train.n_features(),
                right: query.len(),
            });
        }
        let mut dists: Vec<(f64, usize)> = (0..train.n_rows())
            .map(|j| (squared_euclidean(query, train.row(j)), j))
            .collect();
        dists.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let mut votes = vec![0usize; train.n_classes()];
        for &(_, j) in dists.iter().take(k_eff) {
            votes[train.label(j)] += 1;
        }
        let top = *votes.iter().max().expect("nonempty");
        let winner = dists
            .iter()
            .take(k_eff)
            .map(|&(_, j)| train.label(j))
            .find(|&c| votes[c] == top)
            .expect("some neighbor carries the top vote");
        predictions.push(winner);
    }
    Ok(predictions)
}

fn sigmoid(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

/// Gradient of the mean cross-entropy with respect to the weights.
fn logistic_grad(rows: &[Vec<f64>], targets: &[f64], weights: &[f64]) -> Vec<f64> {
    let mut grad = vec![0.0; weights.len()];
    for (row, &y) in rows.iter().zip(targets) {
        let z: f64 = row.iter().zip(weights).map(|(x, w)| x * w).sum();
        let err = sigmoid(z) - y;
        for (g, x) in grad.iter_mut().zip(row) {
            *g += err * x;
        }
    }
    let m = rows.len() as f64;
    grad.iter_mut().for_each(|g| *g /= m);
    grad
}

fn fit_binary(rows: &[Vec<f64>], targets: &[f64], epochs: usize, lr: f64) -> Vec<f64> {
    let dim = rows[0].len();
    let mut weights = vec![0.0; dim];
    for _ in 0..epochs {
        let grad = logistic_grad(rows, targets, &weights);
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= lr * g;
        }
    }
    weights
}

/// One-vs-rest logistic regression trained by full-batch gradient descent on
/// min-max-scaled features (the scaler is fitted on the training rows and
/// applied unchanged to the test rows). Predicts the argmax class score.
pub fn logreg_fit_predict(
    train: &Dataset,
    test_features: &[Vec<f64>],
    epochs: usize,
    lr: f64,
) -> Result<Vec<usize>> {
    if train.n_rows() == 0 {
        return Err(Error::Contract("logreg requires a nonempty training set".into()));
    }
    let table = ScaleTable::fit(train);
    let with_bias = |row: &[f64]| -> Vec<f64> {
        let mut scaled = table.transform_row(row);
        scaled.push(1.0);
        scaled
    };
    let train_rows: Vec<Vec<f64>> = train.rows().map(with_bias).collect();
    let test_rows: Vec<Vec<f64>> = test_features.iter().map(|r| with_bias(r)).collect();

    let k = train.n_classes();
    let models: Vec<Vec<f64>> = (0..k)
        .map(|class| {
            let targets: Vec<f64> = train
                .labels()
                .iter()
                .map(|&l| if l == class { 1.0 } else { 0.0 })
                .collect();
            fit_binary(&train_rows, &targets, epochs, lr)
        })
        .collect();

    Ok(test_rows
        .iter()
        .map(|row| {
            let mut best = 0;
            let mut best_score = f64::NEG_INFINITY;
            for (class, weights) in models.iter().enumerate() {
                let score: f64 = row.iter().zip(weights).map(|(x, w)| x * w).sum();
                if score > best_score {
                    best = class;
                    best_score = score;
                }
            }
            best
        })
        .collect())
}

fn predict(spec: &ClassifierSpec, train: &Dataset, test_features: &[Vec<f64>]) -> Result<Vec<usize>> {
    match *spec {
        ClassifierSpec::Knn { k } => knn_predict(train, test_features, k),
        ClassifierSpec::LogReg { epochs, lr } => {
            logreg_fit_predict(train, test_features, epochs, lr)
        }
    }
}

/// One-vs-rest confusion counts for a single positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn from_labels(truth: &[usize], predicted: &[usize], positive: usize) -> ConfusionCounts {
        let mut counts = ConfusionCounts {
            tp: 0,
            fp: 0,
            tn: 0,
            fn_: 0,
        };
        for (&t, &p) in truth.iter().zip(predicted) {
            match (t == positive, p == positive) {
                (true, true) => counts.tp += 1,
                (true, false) => counts.fn_ += 1,
                (false, true) => counts.fp += 1,
                (false, false) => counts.tn += 1,
            }
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// The six report metrics; every 0/0 term is defined as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub specificity: f64,
    /// Balanced accuracy (arithmetic mean of recall and specificity); kept
    /// under this name to avoid confusion with rank-based ROC-AUC.
    pub auc_balanced: f64,
    pub g_mean: f64,
    /// True when the values are macro-averages over classes.
    pub macro_averaged: bool,
}

impl MetricsReport {
    pub fn from_counts(c: &ConfusionCounts) -> MetricsReport {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(c.tp, c.tp + c.fp);
        let recall = ratio(c.tp, c.tp + c.fn_);
        let specificity = ratio(c.tn, c.tn + c.fp);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        MetricsReport {
            precision,
            recall,
            f1,
            specificity,
            auc_balanced: (recall + specificity) / 2.0,
            g_mean: (recall * specificity).sqrt(),
            macro_averaged: false,
        }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.precision,
            self.recall,
            self.f1,
            self.specificity,
            self.auc_balanced,
            self.g_mean,
        ]
    }

    pub fn from_array(values: [f64; 6], macro_averaged: bool) -> MetricsReport {
        MetricsReport {
            precision: values[0],
            recall: values[1],
            f1: values[2],
            specificity: values[3],
            auc_balanced: values[4],
            g_mean: values[5],
            macro_averaged,
        }
    }

    pub const METRIC_NAMES: [&'static str; 6] = [
        "precision",
        "recall",
        "f1",
        "specificity",
        "auc_balanced",
        "g_mean",
    ];
}

/// Computes the report for a prediction. Binary problems score the given
/// positive class; problems with more classes macro-average one-vs-rest
/// metrics over all classes.
pub fn compute_metrics(
    truth: &[usize],
    predicted: &[usize],
    n_classes: usize,
    positive_class: usize,
) -> Result<MetricsReport> {
    if truth.is_empty() {
        return Err(Error::Contract("cannot score an empty prediction".into()));
    }
    if truth.len() != predicted.len() {
        return Err(Error::Contract(format!(
            "{} truth labels vs {} predictions",
            truth.len(),
            predicted.len()
        )));
    }
    if n_classes == 2 {
        let counts = ConfusionCounts::from_labels(truth, predicted, positive_class);
        Ok(MetricsReport::from_counts(&counts))
    } else {
        let mut acc = [0.0; 6];
        for class in 0..n_classes {
            let counts = ConfusionCounts::from_labels(truth, predicted, class);
            let report = MetricsReport::from_counts(&counts);
            for (a, v) in acc.iter_mut().zip(report.to_array()) {
                *a += v;
            }
        }
        acc.iter_mut().for_each(|a| *a /= n_classes as f64);
        Ok(MetricsReport::from_array(acc, true))
    }
}

/// Metrics of one classifier on one fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldClassifierResult {
    pub classifier: String,
    pub metrics: MetricsReport,
}

/// All classifier results for one held-out fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub results: Vec<FoldClassifierResult>,
}

/// Mean and standard deviation over folds for one classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub classifier: String,
    pub mean: MetricsReport,
    pub std: MetricsReport,
}

/// Full cross-validation report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub pipeline: String,
    pub positive_class: usize,
    pub folds: Vec<FoldReport>,
    pub summary: Vec<SummaryEntry>,
}

/// Runs the pipeline on each training fold, scores the untouched test fold,
/// and reports per-fold plus mean/std metrics. Fold seeds derive from
/// `cfg.seed` and the fold index, so reports are bit-reproducible; folds run
/// in parallel when `jobs > 1` and merge in fold order.
pub fn cross_validate(
    d: &Dataset,
    pipeline: &Pipeline,
    folds: &FoldPlan,
    classifiers: &[ClassifierSpec],
    cfg: &PipelineConfig,
    jobs: usize,
) -> Result<CvReport> {
    if folds.assignments.len() != d.n_rows() {
        return Err(Error::Contract(format!(
            "fold plan covers {} rows but dataset has {}",
            folds.assignments.len(),
            d.n_rows()
        )));
    }
    if classifiers.is_empty() {
        return Err(Error::Contract("no classifiers selected".into()));
    }
    let positive_class = d.minority_class();

    let run_fold = |fold: usize| -> Result<FoldReport> {
        let test_idx = folds.test_indices(fold);
        let train_idx = folds.train_indices(fold);
        assert!(
            test_idx.iter().all(|i| !train_idx.contains(i)),
            "train/test folds overlap"
        );
        let train = d.subset(&train_idx)?;
        let fold_cfg = cfg.reseeded(seeding::mix(cfg.seed, fold as u64));
        let (resampled, _mask) = run_pipeline(&train, pipeline, &fold_cfg)?;
        let test_features: Vec<Vec<f64>> = test_idx.iter().map(|&i| d.row(i).to_vec()).collect();
        let truth: Vec<usize> = test_idx.iter().map(|&i| d.label(i)).collect();
        let mut results = Vec::with_capacity(classifiers.len());
        for spec in classifiers {
            let predictions = predict(spec, &resampled, &test_features)?;
            let metrics = compute_metrics(&truth, &predictions, d.n_classes(), positive_class)?;
            results.push(FoldClassifierResult {
                classifier: spec.to_string(),
                metrics,
            });
        }
        Ok(FoldReport { fold, results })
    };

    let fold_reports: Vec<FoldReport> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..folds.k_folds)
                .into_par_iter()
                .map(run_fold)
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        (0..folds.k_folds).map(run_fold).collect::<Result<Vec<_>>>()?
    };

    let macro_averaged = d.n_classes() > 2;
    let summary = classifiers
        .iter()
        .map(|spec| {
            let name = spec.to_string();
            let per_fold: Vec<[f64; 6]> = fold_reports
                .iter()
                .map(|fr| {
                    fr.results
                        .iter()
                        .find(|r| r.classifier == name)
                        .expect("classifier present in every fold")
                        .metrics
                        .to_array()
                })
                .collect();
            let n = per_fold.len() as f64;
            let mut mean = [0.0; 6];
            for row in &per_fold {
                for (m, v) in mean.iter_mut().zip(row) {
                    *m += v;
                }
            }
            mean.iter_mut().for_each(|m| *m /= n);
            let mut var = [0.0; 6];
            for row in &per_fold {
                for ((v, m), x) in var.iter_mut().zip(&mean).zip(row) {
                    let dif = x - m;
                    *v += dif * dif;
                }
            }
            var.iter_mut().for_each(|v| *v = (*v / n).sqrt());
            SummaryEntry {
                classifier: name,
                mean: MetricsReport::from_array(mean, macro_averaged),
                std: MetricsReport::from_array(var, macro_averaged),
            }
        })
        .collect();

    Ok(CvReport {
        pipeline: pipeline.to_string(),
        positive_class,
        folds: fold_reports,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::stratified_folds;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn blob_dataset(maj: usize, min: usize, sep: f64, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..maj {
            rows.push(vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
            labels.push(0);
        }
        for _ in 0..min {
            rows.push(vec![
                sep + rng.random_range(-1.0..1.0),
                sep + rng.random_range(-1.0..1.0),
            ]);
            labels.push(1);
        }
        Dataset::from_rows(rows, labels, vec!["maj".into(), "min".into()], "t").unwrap()
    }

    #[test]
    fn knn_exact_match_k1() {
        let d = blob_dataset(5, 5, 10.0, 1);
        let query = vec![d.row(7).to_vec()];
        let pred = knn_predict(&d, &query, 1).unwrap();
        assert_eq!(pred[0], d.label(7));
    }

    #[test]
    fn knn_majority_vote() {
        let d = Dataset::from_rows(
            vec![
                vec![0.0],
                vec![0.1],
                vec![0.2],
                vec![0.3],
                vec![0.4],
                vec![10.0],
            ],
            vec![0, 0, 0, 0, 0, 1],
            vec!["a".into(), "b".into()],
            "t",
        )
        .unwrap();
        let pred = knn_predict(&d, &[vec![0.2]], 5).unwrap();
        assert_eq!(pred[0], 0);
    }

    #[test]
    fn knn_is_deterministic() {
        let d = blob_dataset(20, 10, 2.0, 3);
        let queries: Vec<Vec<f64>> = (0..6).map(|i| d.row(i).to_vec()).collect();
        assert_eq!(
            knn_predict(&d, &queries, 5).unwrap(),
            knn_predict(&d, &queries, 5).unwrap()
        );
    }

    #[test]
    fn logreg_separates_linear_data() {
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![if i < 10 { 0.0 } else { 1.0 } + (i % 10) as f64 * 1e-3])
            .collect();
        let labels: Vec<usize> = (0..20).map(|i| usize::from(i >= 10)).collect();
        let d = Dataset::from_rows(rows.clone(), labels.clone(), vec!["n".into(), "p".into()], "t")
            .unwrap();
        let pred = logreg_fit_predict(&d, &rows, 500, 0.1).unwrap();
        assert_eq!(pred, labels);
    }

    #[test]
    fn logreg_ignores_symmetric_useless_feature() {
        // Feature 0 separates (±1); feature 1 is balanced within each class,
        // so by symmetry its gradient vanishes at the start and stays zero
        // through full-batch descent.
        let with_bias = vec![
            vec![-1.0, 0.0, 1.0],
            vec![-1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ];
        let targets = vec![0.0, 0.0, 1.0, 1.0];
        let grad0 = logistic_grad(&with_bias, &targets, &[0.0, 0.0, 0.0]);
        assert!(grad0[1].abs() < 1e-15, "gradient {}", grad0[1]);
        let weights = fit_binary(&with_bias, &targets, 2000, 0.5);
        assert!(weights[1].abs() < 1e-12, "useless weight {}", weights[1]);
        assert!(weights[0] > 1.0);
    }

    /// Mean cross-entropy in a numerically stable form, independent of the
    /// gradient path it checks.
    fn logistic_loss(rows: &[Vec<f64>], targets: &[f64], weights: &[f64]) -> f64 {
        let mut loss = 0.0;
        for (row, &y) in rows.iter().zip(targets) {
            let z: f64 = row.iter().zip(weights).map(|(x, w)| x * w).sum();
            loss += z.max(0.0) - z * y + (1.0 + (-z.abs()).exp()).ln();
        }
        loss / rows.len() as f64
    }

    #[test]
    fn logreg_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let m = rng.random_range(3..12);
            let dim = rng.random_range(2..5);
            let rows: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect())
                .collect();
            let targets: Vec<f64> = (0..m).map(|_| f64::from(rng.random_range(0..2u32))).collect();
            let weights: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let grad = logistic_grad(&rows, &targets, &weights);
            let h = 1e-6;
            for j in 0..dim {
                let mut plus = weights.clone();
                plus[j] += h;
                let mut minus = weights.clone();
                minus[j] -= h;
                let numeric =
                    (logistic_loss(&rows, &targets, &plus) - logistic_loss(&rows, &targets, &minus))
                        / (2.0 * h);
                let denom = numeric.abs().max(grad[j].abs()).max(1e-8);
                assert!(
                    (numeric - grad[j]).abs() / denom < 1e-5,
                    "grad[{j}]: analytic {} vs numeric {numeric}",
                    grad[j]
                );
            }
        }
    }

    #[test]
    fn metrics_hand_example() {
        // TP=8, FN=2, TN=90, FP=10.
        let counts = ConfusionCounts {
            tp: 8,
            fp: 10,
            tn: 90,
            fn_: 2,
        };
        assert_eq!(counts.total(), 110);
        let r = MetricsReport::from_counts(&counts);
        assert_relative_eq!(r.recall, 0.8, max_relative = 1e-12);
        assert_relative_eq!(r.specificity, 0.9, max_relative = 1e-12);
        assert_relative_eq!(r.precision, 8.0 / 18.0, max_relative = 1e-12);
        assert_relative_eq!(r.f1, 2.0 * (8.0 / 18.0) * 0.8 / (8.0 / 18.0 + 0.8), max_relative = 1e-12);
        assert_relative_eq!(r.auc_balanced, 0.85, max_relative = 1e-12);
        assert_relative_eq!(r.g_mean, (0.8f64 * 0.9).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn metrics_perfect_prediction() {
        let truth = vec![0, 1, 0, 1, 1];
        let r = compute_metrics(&truth, &truth, 2, 1).unwrap();
        assert_eq!(r.to_array(), [1.0; 6]);
    }

    #[test]
    fn metrics_all_majority_kills_gmean() {
        let truth = vec![0, 0, 0, 1, 1];
        let predicted = vec![0, 0, 0, 0, 0];
        let r = compute_metrics(&truth, &predicted, 2, 1).unwrap();
        assert_eq!(r.recall, 0.0);
        assert_eq!(r.g_mean, 0.0);
        assert_eq!(r.specificity, 1.0);
    }

    #[test]
    fn metrics_identities_binary() {
        let truth = vec![0, 1, 1, 0, 1, 0, 0, 1];
        let predicted = vec![0, 1, 0, 1, 1, 0, 1, 0];
        let r = compute_metrics(&truth, &predicted, 2, 1).unwrap();
        assert_relative_eq!(r.g_mean * r.g_mean, r.recall * r.specificity, epsilon = 1e-12);
        assert_relative_eq!(r.auc_balanced, (r.recall + r.specificity) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn metrics_rejects_empty_or_mismatched() {
        assert!(compute_metrics(&[], &[], 2, 1).is_err());
        assert!(compute_metrics(&[0, 1], &[0], 2, 1).is_err());
    }

    #[test]
    fn cross_validate_separable_data_scores_high() {
        let d = blob_dataset(40, 20, 30.0, 5);
        let folds = stratified_folds(&d, 2, 7).unwrap();
        let report = cross_validate(
            &d,
            &Pipeline::default(),
            &folds,
            &[ClassifierSpec::default_knn(), ClassifierSpec::default_logreg()],
            &PipelineConfig::default(),
            1,
        )
        .unwrap();
        for entry in &report.summary {
            assert!(entry.mean.g_mean > 0.95, "{entry:?}");
        }
    }

    #[test]
    fn cross_validate_is_deterministic_and_parallel_safe() {
        let d = blob_dataset(60, 12, 3.0, 8);
        let folds = stratified_folds(&d, 4, 11).unwrap();
        let pipeline = Pipeline::parse("ingb").unwrap();
        let classifiers = [ClassifierSpec::default_knn(), ClassifierSpec::default_logreg()];
        let cfg = PipelineConfig::default();
        let a = cross_validate(&d, &pipeline, &folds, &classifiers, &cfg, 1).unwrap();
        let b = cross_validate(&d, &pipeline, &folds, &classifiers, &cfg, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    proptest! {
        // AM-GM: the G-mean never exceeds the balanced accuracy.
        #[test]
        fn gmean_le_auc(tp in 0usize..50, fp in 0usize..50, tn in 0usize..50, fn_ in 0usize..50) {
            prop_assume!(tp + fp + tn + fn_ > 0);
            let r = MetricsReport::from_counts(&ConfusionCounts { tp, fp, tn, fn_ });
            prop_assert!(r.g_mean <= r.auc_balanced + 1e-12);
        }

        // Scoring is invariant under a consistent shuffle of both vectors.
        #[test]
        fn metrics_permutation_invariant(
            pairs in prop::collection::vec((0usize..2, 0usize..2), 1..40),
            seed in 0u64..100,
        ) {
            let truth: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let predicted: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            let base = compute_metrics(&truth, &predicted, 2, 1).unwrap();
            let mut order: Vec<usize> = (0..pairs.len()).collect();
            use rand::seq::SliceRandom;
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let t2: Vec<usize> = order.iter().map(|&i| truth[i]).collect();
            let p2: Vec<usize> = order.iter().map(|&i| predicted[i]).collect();
            let shuffled = compute_metrics(&t2, &p2, 2, 1).unwrap();
            prop_assert_eq!(base, shuffled);
        }
    }
}
