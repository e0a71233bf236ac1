//! Reference samplers and cleaners: SMOTE, ENN, Tomek links, and the stage
//! pipeline that composes them with the granular-ball oversampler.

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::geometry::squared_euclidean;
use crate::informed::{ingb_oversample_report, IngbConfig, OversampleReport};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

/// Cleaning filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CleanMethod {
    Enn,
    Tomek,
}

/// Oversamplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OversampleMethod {
    Smote,
    Ingb,
}

/// One pipeline stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Clean(CleanMethod),
    Oversample(OversampleMethod),
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Clean(CleanMethod::Enn) => "enn",
            Stage::Clean(CleanMethod::Tomek) => "tkl",
            Stage::Oversample(OversampleMethod::Smote) => "smote",
            Stage::Oversample(OversampleMethod::Ingb) => "ingb",
        };
        f.write_str(name)
    }
}

/// Ordered stage list with at most one oversample stage.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pipeline {
    stages: Vec<Stage>,
}

impl Pipeline {
    pub fn new(stages: Vec<Stage>) -> Result<Pipeline> {
        let oversamplers = stages
            .iter()
            .filter(|s| matches!(s, Stage::Oversample(_)))
            .count();
        if oversamplers > 1 {
            return Err(Error::InvalidConfig(
                "a pipeline may hold at most one oversample stage".into(),
            ));
        }
        Ok(Pipeline { stages })
    }

    /// Parses a dash-separated stage string, e.g. `enn-ingb`; `none` or an
    /// empty string is the identity pipeline.
    pub fn parse(text: &str) -> Result<Pipeline> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "none" {
            return Pipeline::new(Vec::new());
        }
        let stages = trimmed
            .split('-')
            .map(|token| match token {
                "enn" => Ok(Stage::Clean(CleanMethod::Enn)),
                "tkl" | "tomek" => Ok(Stage::Clean(CleanMethod::Tomek)),
                "smote" => Ok(Stage::Oversample(OversampleMethod::Smote)),
                "ingb" => Ok(Stage::Oversample(OversampleMethod::Ingb)),
                other => Err(Error::UnknownStage(other.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Pipeline::new(stages)
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn is_identity(&self) -> bool {
        self.stages.is_empty()
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.stages.is_empty() {
            return f.write_str("none");
        }
        let names: Vec<String> = self.stages.iter().map(Stage::to_string).collect();
        f.write_str(&names.join("-"))
    }
}

/// Settings threaded through pipeline stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub ingb: IngbConfig,
    /// SMOTE neighborhood size before per-class clipping.
    pub smote_k: usize,
    /// Seed for the SMOTE draws; the granular sampler uses `ingb.synth.seed`.
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            ingb: IngbConfig::default(),
            smote_k: 5,
            seed: 42,
        }
    }
}

impl PipelineConfig {
    /// Copy with every stage seed replaced, for per-fold derivation.
    pub fn reseeded(mut self, seed: u64) -> Self {
        self.seed = seed;
        self.ingb.synth.seed = seed;
        self
    }
}

fn smote_rows_for_class(
    d: &Dataset,
    k: usize,
    target_class: usize,
    deficit: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    if k == 0 {
        return Err(Error::InvalidConfig("smote requires k >= 1".into()));
    }
    let minority: Vec<usize> = (0..d.n_rows())
        .filter(|&i| d.label(i) == target_class)
        .collect();
    if minority.len() < 2 {
        return Err(Error::Contract(format!(
            "smote needs at least 2 instances of class {target_class}, found {}",
            minority.len()
        )));
    }
    let k_eff = k.min(minority.len() - 1);

    // k nearest same-class neighbors per minority instance, ties to smaller index.
    let neighbors: Vec<Vec<usize>> = minority
        .iter()
        .map(|&i| {
            let mut others: Vec<(f64, usize)> = minority
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (squared_euclidean(d.row(i), d.row(j)), j))
                .collect();
            others.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            others.into_iter().take(k_eff).map(|(_, j)| j).collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(target_class as u64);
    let mut rows = Vec::with_capacity(deficit);
    for t in 0..deficit {
        let pos = t % minority.len();
        let base = d.row(minority[pos]);
        let nn = d.row(neighbors[pos][rng.random_range(0..k_eff)]);
        let lambda: f64 = rng.random_range(0.0..1.0);
        rows.push(
            base.iter()
                .zip(nn)
                .map(|(a, b)| a + lambda * (b - a))
                .collect(),
        );
    }
    Ok(rows)
}

/// Classic SMOTE for a single class: `deficit` samples interpolated between a
/// cycling base instance and one of its `k` same-class nearest neighbors.
pub fn smote(
    d: &Dataset,
    k: usize,
    target_class: usize,
    deficit: usize,
    seed: u64,
) -> Result<Dataset> {
    if deficit == 0 {
        // Still validate the class-size precondition.
        smote_rows_for_class(d, k, target_class, 0, seed)?;
        return Ok(d.clone());
    }
    let rows = smote_rows_for_class(d, k, target_class, deficit, seed)?;
    d.extended_with(&rows.into_iter().map(|r| (r, target_class)).collect::<Vec<_>>())
}

/// SMOTE rounds for every deficient class, all computed against the input
/// dataset and appended together.
fn smote_balance(d: &Dataset, k: usize, seed: u64) -> Result<Dataset> {
    let counts = d.class_counts();
    let max_count = *counts.iter().max().expect("nonempty");
    let mut new_rows = Vec::new();
    for class in 0..d.n_classes() {
        if counts[class] == 0 || counts[class] == max_count {
            continue;
        }
        let rows = smote_rows_for_class(d, k, class, max_count - counts[class], seed)?;
        new_rows.extend(rows.into_iter().map(|r| (r, class)));
    }
    d.extended_with(&new_rows)
}

/// Edited-nearest-neighbour filter: drops every instance whose label loses the
/// 3-NN vote (self excluded); instances keep their place on a tied vote. The
/// vote is evaluated against the original dataset in a single pass.
pub fn enn_filter(d: &Dataset) -> Result<(Dataset, Vec<usize>)> {
    if d.n_rows() < 4 {
        return Err(Error::Contract(format!(
            "enn filter needs at least 4 rows, got {}",
            d.n_rows()
        )));
    }
    let mut removed = Vec::new();
    for i in 0..d.n_rows() {
        let mut others: Vec<(f64, usize)> = (0..d.n_rows())
            .filter(|&j| j != i)
            .map(|j| (squared_euclidean(d.row(i), d.row(j)), j))
            .collect();
        others.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let mut votes = vec![0usize; d.n_classes()];
        for &(_, j) in others.iter().take(3) {
            votes[d.label(j)] += 1;
        }
        let top = *votes.iter().max().expect("nonempty");
        if votes[d.label(i)] < top {
            removed.push(i);
        }
    }
    let keep: Vec<usize> = (0..d.n_rows()).filter(|i| !removed.contains(i)).collect();
    Ok((d.subset(&keep)?, removed))
}

/// Tomek-link cleaner: for every cross-class mutual-nearest-neighbor pair the
/// member of the globally larger class is dropped; pairs between equally
/// sized classes are left alone, so the minority count never decreases.
pub fn tomek_filter(d: &Dataset) -> Result<(Dataset, Vec<usize>)> {
    if d.n_rows() < 2 {
        return Err(Error::Contract(format!(
            "tomek filter needs at least 2 rows, got {}",
            d.n_rows()
        )));
    }
    let nearest: Vec<usize> = (0..d.n_rows())
        .map(|i| {
            let mut best = usize::MAX;
            let mut best_dist = f64::INFINITY;
            for j in 0..d.n_rows() {
                if j == i {
                    continue;
                }
                let dist = squared_euclidean(d.row(i), d.row(j));
                if dist < best_dist || (dist == best_dist && j < best) {
                    best = j;
                    best_dist = dist;
                }
            }
            best
        })
        .collect();
    let counts = d.class_counts();
    let mut removed = Vec::new();
    for a in 0..d.n_rows() {
        let b = nearest[a];
        if a < b && nearest[b] == a && d.label(a) != d.label(b) {
            let (ca, cb) = (counts[d.label(a)], counts[d.label(b)]);
            if ca > cb {
                removed.push(a);
            } else if cb > ca {
                removed.push(b);
            }
        }
    }
    removed.sort_unstable();
    removed.dedup();
    let keep: Vec<usize> = (0..d.n_rows())
        .filter(|i| removed.binary_search(i).is_err())
        .collect();
    Ok((d.subset(&keep)?, removed))
}

/// What one stage did to the row set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: String,
    pub removed: usize,
    pub added: usize,
}

/// Per-stage accounting for a pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct PipelineReport {
    pub stages: Vec<StageReport>,
    pub oversample: Option<OversampleReport>,
}

/// Applies the stages in order and returns the transformed dataset plus a
/// per-row synthetic flag.
pub fn run_pipeline(d: &Dataset, pl: &Pipeline, cfg: &PipelineConfig) -> Result<(Dataset, Vec<bool>)> {
    run_pipeline_report(d, pl, cfg).map(|(out, mask, _)| (out, mask))
}

/// [`run_pipeline`] with per-stage accounting.
pub fn run_pipeline_report(
    d: &Dataset,
    pl: &Pipeline,
    cfg: &PipelineConfig,
) -> Result<(Dataset, Vec<bool>, PipelineReport)> {
    let mut current = d.clone();
    let mut mask = vec![false; d.n_rows()];
    let mut report = PipelineReport::default();
    for stage in pl.stages() {
        match stage {
            Stage::Clean(method) => {
                let (next, removed) = match method {
                    CleanMethod::Enn => enn_filter(&current)?,
                    CleanMethod::Tomek => tomek_filter(&current)?,
                };
                let removed_set: std::collections::HashSet<usize> =
                    removed.iter().copied().collect();
                mask = mask
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !removed_set.contains(i))
                    .map(|(_, &flag)| flag)
                    .collect();
                report.stages.push(StageReport {
                    stage: stage.to_string(),
                    removed: removed.len(),
                    added: 0,
                });
                current = next;
            }
            Stage::Oversample(method) => {
                let before = current.n_rows();
                let next = match method {
                    OversampleMethod::Smote => smote_balance(&current, cfg.smote_k, cfg.seed)?,
                    OversampleMethod::Ingb => {
                        let (next, ingb_report) = ingb_oversample_report(&current, &cfg.ingb)?;
                        report.oversample = Some(ingb_report);
                        next
                    }
                };
                let added = next.n_rows() - before;
                mask.extend(std::iter::repeat_n(true, added));
                report.stages.push(StageReport {
                    stage: stage.to_string(),
                    removed: 0,
                    added,
                });
                current = next;
            }
        }
    }
    Ok((current, mask, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn toy_binary(maj: usize, min: usize, sep: f64, seed: u64) -> Dataset {
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
    fn smote_midpoint_with_single_neighbor() {
        let d = Dataset::from_rows(
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![9.0, 9.0], vec![9.5, 9.5], vec![9.2, 9.7]],
            vec![1, 1, 0, 0, 0],
            vec!["maj".into(), "min".into()],
            "t",
        )
        .unwrap();
        let out = smote(&d, 1, 1, 4, 3).unwrap();
        assert_eq!(out.n_rows(), 9);
        // k=1: the partner is always the single nearest minority neighbor, so
        // every synthetic point sits on the segment (0,0)-(1,1).
        for i in 5..9 {
            let row = out.row(i);
            assert!((row[0] - row[1]).abs() < 1e-12, "{row:?}");
            assert!((0.0..=1.0).contains(&row[0]));
            assert_eq!(out.label(i), 1);
        }
    }

    #[test]
    fn smote_zero_deficit_identity() {
        let d = toy_binary(10, 4, 8.0, 1);
        let out = smote(&d, 5, 1, 0, 9).unwrap();
        assert_eq!(out, d);
    }

    #[test]
    fn smote_rejects_singleton_class() {
        let d = Dataset::from_rows(
            vec![vec![0.0], vec![1.0], vec![2.0]],
            vec![0, 0, 1],
            vec!["a".into(), "b".into()],
            "t",
        )
        .unwrap();
        assert!(smote(&d, 5, 1, 3, 0).is_err());
    }

    fn on_some_segment(z: &[f64], d: &Dataset, class: usize) -> bool {
        let minority: Vec<usize> = (0..d.n_rows()).filter(|&i| d.label(i) == class).collect();
        for &a in &minority {
            for &b in &minority {
                if a == b {
                    continue;
                }
                let pa = d.row(a);
                let pb = d.row(b);
                let seg_sq = squared_euclidean(pa, pb);
                if seg_sq == 0.0 {
                    if squared_euclidean(z, pa) <= 1e-18 {
                        return true;
                    }
                    continue;
                }
                let t: f64 = z
                    .iter()
                    .zip(pa.iter().zip(pb))
                    .map(|(zl, (al, bl))| (zl - al) * (bl - al))
                    .sum::<f64>()
                    / seg_sq;
                if !(-1e-9..=1.0 + 1e-9).contains(&t) {
                    continue;
                }
                let residual: f64 = z
                    .iter()
                    .zip(pa.iter().zip(pb))
                    .map(|(zl, (al, bl))| {
                        let proj = al + t * (bl - al);
                        (zl - proj) * (zl - proj)
                    })
                    .sum();
                if residual.sqrt() <= 1e-9 {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn smote_points_lie_on_minority_segments() {
        let d = toy_binary(30, 8, 6.0, 5);
        let out = smote(&d, 3, 1, 22, 11).unwrap();
        for i in d.n_rows()..out.n_rows() {
            assert!(on_some_segment(out.row(i), &d, 1));
        }
    }

    #[test]
    fn enn_removes_planted_noise() {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            rows.push(vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
            labels.push(0);
        }
        // Wrong-label point in the middle of the blob.
        rows.push(vec![0.0, 0.0]);
        labels.push(1);
        // A distant legitimate minority pair so the class survives.
        rows.push(vec![50.0, 50.0]);
        labels.push(1);
        rows.push(vec![50.5, 50.0]);
        labels.push(1);
        let d =
            Dataset::from_rows(rows, labels, vec!["maj".into(), "min".into()], "t").unwrap();
        let (out, removed) = enn_filter(&d).unwrap();
        assert!(removed.contains(&30));
        assert_eq!(out.n_rows() + removed.len(), d.n_rows());
    }

    #[test]
    fn enn_keeps_pure_data() {
        let d = toy_binary(20, 10, 50.0, 3);
        let (out, removed) = enn_filter(&d).unwrap();
        assert!(removed.is_empty());
        assert_eq!(out, d);
    }

    #[test]
    fn tomek_removes_majority_member_of_link() {
        let d = Dataset::from_rows(
            vec![
                vec![0.0, 0.0],
                vec![0.2, 0.0], // tomek pair with the minority point below
                vec![0.3, 0.1],
                vec![0.21, 0.01],
                vec![9.0, 9.0],
            ],
            vec![0, 0, 0, 1, 1],
            vec!["maj".into(), "min".into()],
            "t",
        )
        .unwrap();
        let (out, removed) = tomek_filter(&d).unwrap();
        assert_eq!(removed, vec![1]);
        let counts = out.class_counts();
        assert_eq!(counts, vec![2, 2]);
    }

    #[test]
    fn tomek_leaves_separated_classes() {
        let d = toy_binary(12, 5, 40.0, 9);
        let (out, removed) = tomek_filter(&d).unwrap();
        assert!(removed.is_empty());
        assert_eq!(out, d);
    }

    #[test]
    fn tomek_never_reduces_minority() {
        for seed in 0..20 {
            let d = toy_binary(25, 6, 1.0, seed);
            let before = d.class_counts()[1];
            let (out, _) = tomek_filter(&d).unwrap();
            assert!(out.class_counts()[1] >= before.min(out.class_counts()[1]));
            assert_eq!(out.class_counts()[1], before);
        }
    }

    #[test]
    fn pipeline_parse_and_display() {
        let pl = Pipeline::parse("enn-ingb").unwrap();
        assert_eq!(pl.stages().len(), 2);
        assert_eq!(pl.to_string(), "enn-ingb");
        assert!(Pipeline::parse("none").unwrap().is_identity());
        match Pipeline::parse("enn-bogus") {
            Err(Error::UnknownStage(token)) => assert_eq!(token, "bogus"),
            other => panic!("expected UnknownStage, got {other:?}"),
        }
        assert!(Pipeline::parse("smote-ingb").is_err());
    }

    #[test]
    fn empty_pipeline_is_identity() {
        let d = toy_binary(10, 5, 4.0, 1);
        let (out, mask) = run_pipeline(&d, &Pipeline::default(), &PipelineConfig::default()).unwrap();
        assert_eq!(out, d);
        assert!(mask.iter().all(|&m| !m));
    }

    #[test]
    fn smote_pipeline_balances_counts() {
        let d = toy_binary(40, 7, 6.0, 4);
        let pl = Pipeline::parse("smote").unwrap();
        let (out, mask) = run_pipeline(&d, &pl, &PipelineConfig::default()).unwrap();
        assert_eq!(out.class_counts(), vec![40, 40]);
        assert_eq!(mask.iter().filter(|&&m| m).count(), 33);
    }

    #[test]
    fn clean_then_oversample_reports_stages() {
        let d = toy_binary(40, 8, 2.0, 6);
        let pl = Pipeline::parse("enn-ingb").unwrap();
        let (out, mask, report) =
            run_pipeline_report(&d, &pl, &PipelineConfig::default()).unwrap();
        assert_eq!(report.stages.len(), 2);
        assert_eq!(report.stages[0].stage, "enn");
        assert_eq!(report.stages[1].stage, "ingb");
        let counts = out.class_counts();
        assert_eq!(counts[0], counts[1]);
        assert_eq!(mask.len(), out.n_rows());
        assert!(report.oversample.is_some());
    }
}
