//! Dataset ingestion, min-max scaling, label-noise injection and stratified folds.
//!
//! A [`Dataset`] is immutable after construction: every operation returns a new
//! value, so datasets can be shared freely across concurrent fold evaluations.

use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Which CSV column carries the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// Match the header by name.
    Name(String),
    /// Use the last column.
    Last,
}

/// Immutable feature matrix plus class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>, // row-major m×n
    n_rows: usize,
    n_cols: usize,
    labels: Vec<usize>,
    class_names: Vec<String>,
    feature_names: Vec<String>,
    label_name: String,
    provenance: String,
}

impl Dataset {
    /// Builds a dataset and checks its invariants: at least one row, at least
    /// two classes, labels in range, all features finite.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        features: Vec<f64>,
        n_cols: usize,
        labels: Vec<usize>,
        class_names: Vec<String>,
        feature_names: Vec<String>,
        label_name: String,
        provenance: String,
    ) -> Result<Dataset> {
        if n_cols == 0 || features.len() % n_cols != 0 {
            return Err(Error::InvalidDataset(format!(
                "feature buffer of length {} is not a multiple of {} columns",
                features.len(),
                n_cols
            )));
        }
        let n_rows = features.len() / n_cols;
        if n_rows == 0 {
            return Err(Error::InvalidDataset("dataset has no rows".into()));
        }
        if labels.len() != n_rows {
            return Err(Error::InvalidDataset(format!(
                "{} labels for {} rows",
                labels.len(),
                n_rows
            )));
        }
        if class_names.len() < 2 {
            return Err(Error::InvalidDataset(format!(
                "at least 2 classes required, got {}",
                class_names.len()
            )));
        }
        if feature_names.len() != n_cols {
            return Err(Error::InvalidDataset(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                n_cols
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::InvalidDataset(format!(
                "label index {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDataset(
                "features contain NaN or infinite values".into(),
            ));
        }
        Ok(Dataset {
            features,
            n_rows,
            n_cols,
            labels,
            class_names,
            feature_names,
            label_name,
            provenance,
        })
    }

    /// Convenience constructor with generated column names (`f0`, `f1`, ...).
    pub fn from_rows(
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        provenance: &str,
    ) -> Result<Dataset> {
        let n_cols = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidDataset("ragged feature rows".into()));
        }
        let feature_names = (0..n_cols).map(|i| format!("f{i}")).collect();
        let features = rows.into_iter().flatten().collect();
        Dataset::new(
            features,
            n_cols,
            labels,
            class_names,
            feature_names,
            "label".into(),
            provenance.into(),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_cols
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.n_cols)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Number of rows per class, indexed by class.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_names.len()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Class with the most rows; ties break toward the smaller index.
    pub fn majority_class(&self) -> usize {
        let counts = self.class_counts();
        let mut best = 0;
        for (c, &n) in counts.iter().enumerate() {
            if n > counts[best] {
                best = c;
            }
        }
        best
    }

    /// Class with the fewest rows; ties break toward the smaller index.
    pub fn minority_class(&self) -> usize {
        let counts = self.class_counts();
        let mut best = 0;
        for (c, &n) in counts.iter().enumerate() {
            if n < counts[best] {
                best = c;
            }
        }
        best
    }

    /// New dataset holding the given rows, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let mut features = Vec::with_capacity(indices.len() * self.n_cols);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            features.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Dataset::new(
            features,
            self.n_cols,
            labels,
            self.class_names.clone(),
            self.feature_names.clone(),
            self.label_name.clone(),
            self.provenance.clone(),
        )
    }

    /// New dataset with `rows` appended after the existing ones.
    pub fn extended_with(&self, rows: &[(Vec<f64>, usize)]) -> Result<Dataset> {
        let mut features = self.features.clone();
        let mut labels = self.labels.clone();
        for (row, label) in rows {
            if row.len() != self.n_cols {
                return Err(Error::DimensionMismatch {
                    left: self.n_cols,
                    right: row.len(),
                });
            }
            features.extend_from_slice(row);
            labels.push(*label);
        }
        Dataset::new(
            features,
            self.n_cols,
            labels,
            self.class_names.clone(),
            self.feature_names.clone(),
            self.label_name.clone(),
            self.provenance.clone(),
        )
    }

    /// Same rows, new labels (used by noise injection).
    fn with_labels(&self, labels: Vec<usize>) -> Result<Dataset> {
        Dataset::new(
            self.features.clone(),
            self.n_cols,
            labels,
            self.class_names.clone(),
            self.feature_names.clone(),
            self.label_name.clone(),
            self.provenance.clone(),
        )
    }

    /// Same shape, new feature buffer (used by scaling).
    fn with_features(&self, features: Vec<f64>) -> Result<Dataset> {
        Dataset::new(
            features,
            self.n_cols,
            self.labels.clone(),
            self.class_names.clone(),
            self.feature_names.clone(),
            self.label_name.clone(),
            self.provenance.clone(),
        )
    }
}

/// Reads a UTF-8, comma-separated file with a header row. Every non-label
/// column must parse as a real number; the label column is categorical with
/// class names recorded in first-appearance order.
pub fn load_csv(path: &Path, label_column: &LabelColumn) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if headers.is_empty() {
        return Err(Error::InvalidDataset("empty header row".into()));
    }
    let label_idx = match label_column {
        LabelColumn::Last => headers.len() - 1,
        LabelColumn::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::InvalidDataset(format!("no column named `{name}`")))?,
    };
    let feature_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != label_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if feature_names.is_empty() {
        return Err(Error::InvalidDataset("no feature columns".into()));
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != headers.len() {
            return Err(Error::Parse {
                row: row_idx + 1,
                column: String::new(),
                message: format!(
                    "expected {} fields, found {}",
                    headers.len(),
                    record.len()
                ),
            });
        }
        for (col_idx, field) in record.iter().enumerate() {
            if col_idx == label_idx {
                let name = field.trim();
                let class = match class_names.iter().position(|c| c == name) {
                    Some(c) => c,
                    None => {
                        class_names.push(name.to_string());
                        class_names.len() - 1
                    }
                };
                labels.push(class);
            } else {
                let value: f64 = field.trim().parse().map_err(|_| Error::Parse {
                    row: row_idx + 1,
                    column: headers[col_idx].clone(),
                    message: format!("`{field}` is not a real number"),
                })?;
                if !value.is_finite() {
                    return Err(Error::Parse {
                        row: row_idx + 1,
                        column: headers[col_idx].clone(),
                        message: format!("`{field}` is not finite"),
                    });
                }
                features.push(value);
            }
        }
    }

    if class_names.len() < 2 {
        return Err(Error::InvalidDataset(format!(
            "dataset must hold at least 2 classes, found {}",
            class_names.len()
        )));
    }
    let mut counts = vec![0usize; class_names.len()];
    for &l in &labels {
        counts[l] += 1;
    }
    if let Some(c) = counts.iter().position(|&n| n < 2) {
        return Err(Error::InvalidDataset(format!(
            "class `{}` has {} instance(s); at least 2 required",
            class_names[c], counts[c]
        )));
    }

    Dataset::new(
        features,
        feature_names.len(),
        labels,
        class_names,
        feature_names,
        headers[label_idx].clone(),
        path.display().to_string(),
    )
}

/// Writes the dataset back out; when `synthetic` is given, a trailing 0/1
/// `synthetic` column is appended to the header.
pub fn write_csv(d: &Dataset, path: &Path, synthetic: Option<&[bool]>) -> Result<()> {
    if let Some(mask) = synthetic {
        if mask.len() != d.n_rows() {
            return Err(Error::Contract(format!(
                "synthetic mask of length {} for {} rows",
                mask.len(),
                d.n_rows()
            )));
        }
    }
    let mut writer = csv::Writer::from_path(path)?;
    let mut header: Vec<&str> = d.feature_names().iter().map(String::as_str).collect();
    header.push(d.label_name());
    if synthetic.is_some() {
        header.push("synthetic");
    }
    writer.write_record(&header)?;
    for i in 0..d.n_rows() {
        let mut record: Vec<String> = d.row(i).iter().map(|v| format_value(*v)).collect();
        record.push(d.class_names()[d.label(i)].clone());
        if let Some(mask) = synthetic {
            record.push(if mask[i] { "1".into() } else { "0".into() });
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

fn format_value(v: f64) -> String {
    // Shortest representation that round-trips; keeps outputs byte-stable.
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// Per-feature affine map fitted on a dataset; supports the inverse map so
/// synthetic samples can be reported in original units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleTable {
    mins: Vec<f64>,
    maxs: Vec<f64>,
}

impl ScaleTable {
    pub fn fit(d: &Dataset) -> ScaleTable {
        let n = d.n_features();
        let mut mins = vec![f64::INFINITY; n];
        let mut maxs = vec![f64::NEG_INFINITY; n];
        for row in d.rows() {
            for (j, &v) in row.iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        ScaleTable { mins, maxs }
    }

    pub fn bounds(&self, feature: usize) -> (f64, f64) {
        (self.mins[feature], self.maxs[feature])
    }

    /// Maps a row into [0,1] per feature; constant features map to 0.
    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                let span = self.maxs[j] - self.mins[j];
                if span > 0.0 {
                    (v - self.mins[j]) / span
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Inverse of [`ScaleTable::transform_row`]; constant features recover their value.
    pub fn invert_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| {
                let span = self.maxs[j] - self.mins[j];
                if span > 0.0 {
                    v * span + self.mins[j]
                } else {
                    self.mins[j]
                }
            })
            .collect()
    }
}

/// Maps every feature affinely onto [0,1] and returns the fitted table.
pub fn scale_minmax(d: &Dataset) -> Result<(Dataset, ScaleTable)> {
    let table = ScaleTable::fit(d);
    let mut features = Vec::with_capacity(d.n_rows() * d.n_features());
    for row in d.rows() {
        features.extend(table.transform_row(row));
    }
    Ok((d.with_features(features)?, table))
}

/// Label-noise specification: the fraction of each class to flip, seeded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub rate: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(rate: f64, seed: u64) -> Result<NoiseSpec> {
        if !(0.0..=0.3).contains(&rate) {
            return Err(Error::InvalidConfig(format!(
                "noise rate must lie in [0, 0.3], got {rate}"
            )));
        }
        Ok(NoiseSpec { rate, seed })
    }
}

/// Flips `floor(rate · count(c))` uniformly chosen instances of every class to
/// a uniformly chosen different class. Features are untouched. Returns the new
/// dataset plus the sorted list of flipped row indices.
pub fn inject_label_noise(d: &Dataset, spec: &NoiseSpec) -> Result<(Dataset, Vec<usize>)> {
    NoiseSpec::new(spec.rate, spec.seed)?;
    let k = d.n_classes();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut labels = d.labels().to_vec();
    let mut flipped = Vec::new();
    for class in 0..k {
        let mut members: Vec<usize> = (0..d.n_rows()).filter(|&i| d.label(i) == class).collect();
        let n_flip = (spec.rate * members.len() as f64).floor() as usize;
        if n_flip == 0 {
            continue;
        }
        members.shuffle(&mut rng);
        for &i in members.iter().take(n_flip) {
            let offset = rng.random_range(0..k - 1);
            let target = if offset >= class { offset + 1 } else { offset };
            labels[i] = target;
            flipped.push(i);
        }
    }
    flipped.sort_unstable();
    Ok((d.with_labels(labels)?, flipped))
}

/// Stratified fold assignment over a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k_folds: usize,
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect()
    }
}

/// Stratified k-fold assignment: per class, shuffled indices are dealt
/// round-robin, so per-fold per-class counts differ by at most one.
pub fn stratified_folds(d: &Dataset, k_folds: usize, seed: u64) -> Result<FoldPlan> {
    if k_folds < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 folds, got {k_folds}"
        )));
    }
    let counts = d.class_counts();
    if let Some(c) = counts.iter().position(|&n| n < k_folds) {
        return Err(Error::Contract(format!(
            "class `{}` has {} instance(s), fewer than {} folds",
            d.class_names()[c],
            counts[c],
            k_folds
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0usize; d.n_rows()];
    for class in 0..d.n_classes() {
        let mut members: Vec<usize> = (0..d.n_rows()).filter(|&i| d.label(i) == class).collect();
        members.shuffle(&mut rng);
        // Rotate the starting fold per class so remainders spread out.
        let start = class % k_folds;
        for (pos, &i) in members.iter().enumerate() {
            assignments[i] = (start + pos) % k_folds;
        }
    }
    Ok(FoldPlan {
        k_folds,
        assignments,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn toy(counts: &[usize]) -> Dataset {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (class, &n) in counts.iter().enumerate() {
            for i in 0..n {
                rows.push(vec![class as f64 * 10.0 + i as f64, i as f64]);
                labels.push(class);
            }
        }
        let names = (0..counts.len()).map(|c| format!("c{c}")).collect();
        Dataset::from_rows(rows, labels, names, "toy").unwrap()
    }

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn load_csv_reads_back() {
        let f = write_tmp("x,y,label\n1,2,a\n3,4,a\n5,6,b\n7,8,b\n");
        let d = load_csv(f.path(), &LabelColumn::Last).unwrap();
        assert_eq!(d.n_rows(), 4);
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.n_classes(), 2);
        assert_eq!(d.class_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(d.row(2), &[5.0, 6.0]);
    }

    #[test]
    fn load_csv_names_bad_cell() {
        let f = write_tmp("x,y,label\n1,2,a\n3,oops,a\n5,6,b\n7,8,b\n");
        let err = load_csv(f.path(), &LabelColumn::Last).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2"), "{msg}");
        assert!(msg.contains('y'), "{msg}");
    }

    #[test]
    fn load_csv_rejects_single_class() {
        let f = write_tmp("x,label\n1,a\n2,a\n3,a\n");
        assert!(load_csv(f.path(), &LabelColumn::Last).is_err());
    }

    #[test]
    fn load_csv_label_by_name() {
        let f = write_tmp("label,x\na,1\nb,2\na,3\nb,4\n");
        let d = load_csv(f.path(), &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(d.n_features(), 1);
        assert_eq!(d.labels(), &[0, 1, 0, 1]);
    }

    #[test]
    fn scale_minmax_columns() {
        let d = Dataset::from_rows(
            vec![vec![2.0, 7.0, 0.0], vec![4.0, 7.0, 0.5], vec![6.0, 7.0, 1.0]],
            vec![0, 1, 0],
            vec!["a".into(), "b".into()],
            "t",
        )
        .unwrap();
        let (scaled, table) = scale_minmax(&d).unwrap();
        assert_eq!(scaled.row(0), &[0.0, 0.0, 0.0]);
        assert_eq!(scaled.row(1), &[0.5, 0.0, 0.5]);
        assert_eq!(scaled.row(2), &[1.0, 0.0, 1.0]);
        // Constant feature inverts back to its constant.
        assert_eq!(table.invert_row(&[0.0, 0.0, 0.0]), &[2.0, 7.0, 0.0]);
    }

    #[test]
    fn noise_zero_rate_is_identity() {
        let d = toy(&[5, 3]);
        let (out, flipped) = inject_label_noise(&d, &NoiseSpec::new(0.0, 1).unwrap()).unwrap();
        assert_eq!(out, d);
        assert!(flipped.is_empty());
    }

    #[test]
    fn noise_flip_counts_are_exact() {
        let d = toy(&[100, 10]);
        let spec = NoiseSpec::new(0.1, 7).unwrap();
        let (out, flipped) = inject_label_noise(&d, &spec).unwrap();
        assert_eq!(flipped.len(), 11);
        // Binary: every flip lands on the other class.
        let maj_flips = flipped.iter().filter(|&&i| d.label(i) == 0).count();
        let min_flips = flipped.iter().filter(|&&i| d.label(i) == 1).count();
        assert_eq!((maj_flips, min_flips), (10, 1));
        for &i in &flipped {
            assert_ne!(out.label(i), d.label(i));
        }
        // Features untouched.
        assert_eq!(out.row(3), d.row(3));
    }

    #[test]
    fn noise_is_deterministic() {
        let d = toy(&[40, 20, 15]);
        let spec = NoiseSpec::new(0.2, 99).unwrap();
        let (a, fa) = inject_label_noise(&d, &spec).unwrap();
        let (b, fb) = inject_label_noise(&d, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(fa, fb);
    }

    #[test]
    fn noise_rejects_out_of_range_rate() {
        assert!(NoiseSpec::new(0.31, 0).is_err());
        assert!(NoiseSpec::new(-0.01, 0).is_err());
    }

    #[test]
    fn folds_partition_and_stratify() {
        let d = toy(&[100, 10]);
        let plan = stratified_folds(&d, 10, 3).unwrap();
        let mut seen = vec![false; d.n_rows()];
        for fold in 0..10 {
            for i in plan.test_indices(fold) {
                assert!(!seen[i]);
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
        for fold in 0..10 {
            let test = plan.test_indices(fold);
            let maj = test.iter().filter(|&&i| d.label(i) == 0).count();
            let min = test.iter().filter(|&&i| d.label(i) == 1).count();
            assert_eq!((maj, min), (10, 1));
        }
    }

    #[test]
    fn folds_reject_small_class() {
        let d = toy(&[30, 9]);
        assert!(stratified_folds(&d, 10, 0).is_err());
    }

    #[test]
    fn csv_roundtrip_with_synthetic_column() {
        let d = toy(&[3, 2]);
        let tmp = tempfile::NamedTempFile::new().unwrap();
        let mask = vec![false, false, false, true, true];
        write_csv(&d, tmp.path(), Some(&mask)).unwrap();
        let text = std::fs::read_to_string(tmp.path()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "f0,f1,label,synthetic");
        assert!(text.lines().filter(|l| l.ends_with(",1")).count() == 2);
        let back = load_csv(tmp.path(), &LabelColumn::Name("label".into())).unwrap();
        // The synthetic column loads as a numeric feature; drop it by reading label by name.
        assert_eq!(back.n_rows(), 5);
    }

    proptest! {
        #[test]
        fn scale_then_invert_roundtrips(
            rows in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 3), 2..30)
        ) {
            let labels: Vec<usize> = (0..rows.len()).map(|i| i % 2).collect();
            let d = Dataset::from_rows(rows.clone(), labels, vec!["a".into(), "b".into()], "p");
            prop_assume!(d.is_ok());
            let d = d.unwrap();
            let (scaled, table) = scale_minmax(&d).unwrap();
            for (i, row) in rows.iter().enumerate() {
                let back = table.invert_row(scaled.row(i));
                for (orig, rec) in row.iter().zip(&back) {
                    prop_assert!((orig - rec).abs() <= 1e-9 * orig.abs().max(1.0));
                }
            }
        }

        #[test]
        fn noise_changes_exactly_the_budget(
            maj in 4usize..60,
            min in 4usize..40,
            rate in 0.0f64..=0.3,
            seed in 0u64..1000,
        ) {
            let d = toy(&[maj, min]);
            let spec = NoiseSpec::new(rate, seed).unwrap();
            let (out, flipped) = inject_label_noise(&d, &spec).unwrap();
            let budget = (rate * maj as f64).floor() as usize
                + (rate * min as f64).floor() as usize;
            prop_assert_eq!(flipped.len(), budget);
            let changed = (0..d.n_rows()).filter(|&i| out.label(i) != d.label(i)).count();
            prop_assert_eq!(changed, budget);
            for i in 0..d.n_rows() {
                prop_assert_eq!(out.row(i), d.row(i));
            }
        }

        #[test]
        fn folds_deviation_bound(
            counts in prop::collection::vec(5usize..40, 2..4),
            k in 2usize..6,
            seed in 0u64..100,
        ) {
            prop_assume!(counts.iter().all(|&c| c >= k));
            let d = toy(&counts);
            let plan = stratified_folds(&d, k, seed).unwrap();
            for class in 0..counts.len() {
                let mut per_fold = vec![0usize; k];
                for i in 0..d.n_rows() {
                    if d.label(i) == class {
                        per_fold[plan.assignments[i]] += 1;
                    }
                }
                let hi = per_fold.iter().max().unwrap();
                let lo = per_fold.iter().min().unwrap();
                prop_assert!(hi - lo <= 1);
            }
        }
    }
}
