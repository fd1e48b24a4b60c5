//! Labeled feature datasets: construction, CSV ingestion, seeded train/test
//! splitting, and a synthetic Gaussian-mixture generator used in place of
//! real phoneme recordings.
//!
//! Class labels are dense indices into the dataset's class alphabet. Subsets
//! produced by splitting keep the full alphabet of their parent so that ids
//! stay comparable between train and test partitions.

use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One labeled observation. `label` indexes the owning dataset's `classes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    dimension: usize,
    classes: Vec<String>,
    samples: Vec<Sample>,
}

impl Dataset {
    /// Builds a dataset after checking dimensions, finiteness, label range and
    /// uniqueness of class names.
    pub fn new(name: impl Into<String>, dimension: usize, classes: Vec<String>, samples: Vec<Sample>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dataset dimension must be positive"));
        }
        if samples.is_empty() {
            return Err(Error::invalid("dataset has no samples"));
        }
        let mut seen = HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            if seen.insert(c.as_str(), i).is_some() {
                return Err(Error::invalid(format!("duplicate class name {c:?}")));
            }
        }
        for (i, s) in samples.iter().enumerate() {
            if s.features.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: s.features.len(),
                });
            }
            if s.label >= classes.len() {
                return Err(Error::invalid(format!(
                    "sample {i}: label {} outside class alphabet of size {}",
                    s.label,
                    classes.len()
                )));
            }
            if s.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("sample {i}: non-finite feature")));
            }
        }
        Ok(Dataset {
            name: name.into(),
            dimension,
            classes,
            samples,
        })
    }

    /// Convenience constructor from parallel feature rows and label names.
    /// The class alphabet is built in first-appearance order.
    pub fn from_rows<S: AsRef<str>>(name: impl Into<String>, rows: Vec<Vec<f64>>, labels: &[S]) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::invalid("rows and labels differ in length"));
        }
        let dimension = rows.first().map_or(0, Vec::len);
        let mut classes: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let samples = rows
            .into_iter()
            .zip(labels)
            .map(|(features, l)| {
                let l = l.as_ref();
                let label = *index.entry(l.to_string()).or_insert_with(|| {
                    classes.push(l.to_string());
                    classes.len() - 1
                });
                Sample { features, label }
            })
            .collect();
        Dataset::new(name, dimension, classes, samples)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.samples[i].features
    }

    pub fn label(&self, i: usize) -> usize {
        self.samples[i].label
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.samples.iter().map(|s| s.label)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Number of samples per class id.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.classes.len()];
        for s in &self.samples {
            counts[s.label] += 1;
        }
        counts
    }

    /// Number of classes with at least one sample.
    pub fn n_present_classes(&self) -> usize {
        self.class_counts().iter().filter(|&&c| c > 0).count()
    }

    /// Subset by sample index, keeping the class alphabet. Indices may repeat
    /// (used by bootstrap resampling).
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let samples = indices
            .iter()
            .map(|&i| {
                self.samples
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::invalid(format!("sample index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(self.name.clone(), self.dimension, self.classes.clone(), samples)
    }

    /// Applies `f` to every feature vector, e.g. for standardization.
    pub fn map_features(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<Dataset> {
        let samples = self
            .samples
            .iter()
            .map(|s| Sample {
                features: f(&s.features),
                label: s.label,
            })
            .collect();
        Dataset::new(self.name.clone(), self.dimension, self.classes.clone(), samples)
    }
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Reads a dataset whose last column is the class name and whose remaining
/// columns are decimal features. Row numbers in errors are 1-based file lines.
pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    read_csv(file, has_header, &name)
}

pub fn read_csv<R: std::io::Read>(reader: R, has_header: bool, name: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut width = None;
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1 + usize::from(has_header);
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        if record.len() == 1 && record.get(0).is_some_and(|c| c.trim().is_empty()) {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                row,
                expected,
                found: record.len(),
            });
        }
        if expected < 2 {
            return Err(Error::Csv(format!(
                "row {row}: need at least one feature column and a label"
            )));
        }
        let features = record
            .iter()
            .take(expected - 1)
            .enumerate()
            .map(|(column, cell)| {
                cell.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::NonNumeric {
                        row,
                        column: column + 1,
                        value: cell.to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(features);
        labels.push(record[expected - 1].trim().to_string());
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile(name.to_string()));
    }
    Dataset::from_rows(name, rows, &labels)
}

/// Writes the dataset in the format accepted by [`load_csv`], with a header
/// row `f0,…,f{d-1},label`. Floats use the shortest round-tripping form.
pub fn write_csv<W: std::io::Write>(d: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let csv_err = |e: csv::Error| Error::Csv(e.to_string());
    let mut header: Vec<String> = (0..d.dimension).map(|j| format!("f{j}")).collect();
    header.push("label".to_string());
    w.write_record(&header).map_err(csv_err)?;
    for s in &d.samples {
        let mut rec: Vec<String> = s.features.iter().map(|v| v.to_string()).collect();
        rec.push(d.classes[s.label].clone());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(())
}

pub fn save_csv(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(d, std::io::BufWriter::new(file))
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    #[serde(default)]
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.7,
            seed: 0,
            stratified: false,
        }
    }
}

/// Index partition of a dataset. Both lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Seeded partition of sample indices.
///
/// Global mode shuffles all indices and keeps `round(f·n)` for training.
/// Stratified mode gives class `c` a quota of `f·n_c`, floors the quotas and
/// hands the remaining `round(f·n) − Σ floor` slots to the largest fractional
/// remainders (ties to the lower class id); each class then keeps at least one
/// sample on each side.
pub fn split_indices(d: &Dataset, spec: &SplitSpec) -> Result<Split> {
    let f = spec.train_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::invalid(format!("train_fraction {f} not in (0,1)")));
    }
    let n = d.len();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (mut train, mut test) = if spec.stratified {
        let counts = d.class_counts();
        if let Some(c) = counts.iter().position(|&c| c == 1) {
            return Err(Error::invalid(format!(
                "class {:?} has fewer than 2 samples; cannot stratify",
                d.classes[c]
            )));
        }
        let quotas = largest_remainder(&counts, f);
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (c, &quota) in quotas.iter().enumerate() {
            let mut members: Vec<usize> = (0..n).filter(|&i| d.label(i) == c).collect();
            members.shuffle(&mut rng);
            train.extend_from_slice(&members[..quota]);
            test.extend_from_slice(&members[quota..]);
        }
        (train, test)
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let k = (f * n as f64).round() as usize;
        let test = idx.split_off(k.min(n));
        (idx, test)
    };
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

/// Per-class train sizes under largest-remainder rounding, clamped so every
/// class with ≥ 2 members keeps one sample on each side.
pub fn largest_remainder(counts: &[usize], fraction: f64) -> Vec<usize> {
    let total: usize = counts.iter().sum();
    let target = (fraction * total as f64).round() as usize;
    let exact: Vec<f64> = counts.iter().map(|&c| fraction * c as f64).collect();
    let mut quotas: Vec<usize> = exact.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = quotas.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    // stable sort keeps lower class ids first among equal remainders
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra)
    });
    for &c in order.iter().take(target.saturating_sub(assigned)) {
        quotas[c] += 1;
    }
    for (q, &c) in quotas.iter_mut().zip(counts) {
        if c >= 2 {
            *q = (*q).clamp(1, c - 1);
        } else {
            *q = (*q).min(c);
        }
    }
    quotas
}

pub fn split_train_test(d: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let split = split_indices(d, spec)?;
    Ok((d.subset(&split.train)?, d.subset(&split.test)?))
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

/// Parameters of the Gaussian-mixture stand-in for a phoneme group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub classes: usize,
    pub per_class: usize,
    #[serde(default = "default_synth_dimension")]
    pub dimension: usize,
    pub overlap: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_synth_dimension() -> usize {
    39
}

/// Class `c` is drawn from `N(μ_c, overlap²·I)`. When `dimension ≥ n_classes`
/// the means are the unit simplex vertices `e_c`; otherwise they sit evenly on
/// the unit circle spanned by the first two axes (or on the line `c/(k−1)` in
/// one dimension). Samples are emitted class by class.
pub fn synth_phoneme_like(
    n_classes: usize,
    n_per_class: usize,
    dimension: usize,
    overlap: f64,
    seed: u64,
) -> Result<Dataset> {
    if n_classes < 2 {
        return Err(Error::invalid("synthetic data needs at least 2 classes"));
    }
    if dimension == 0 {
        return Err(Error::invalid("synthetic dimension must be ≥ 1"));
    }
    if n_per_class == 0 {
        return Err(Error::invalid("synthetic data needs ≥ 1 sample per class"));
    }
    if !(overlap >= 0.0 && overlap.is_finite()) {
        return Err(Error::invalid("overlap must be a finite non-negative number"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means = simplex_means(n_classes, dimension);
    let mut samples = Vec::with_capacity(n_classes * n_per_class);
    for (label, mean) in means.iter().enumerate() {
        for _ in 0..n_per_class {
            let features = mean
                .iter()
                .map(|&m| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    m + overlap * z
                })
                .collect();
            samples.push(Sample { features, label });
        }
    }
    let classes = (0..n_classes).map(|c| format!("c{c}")).collect();
    Dataset::new("synthetic", dimension, classes, samples)
}

pub fn synth_from_spec(spec: &SynthSpec) -> Result<Dataset> {
    synth_phoneme_like(spec.classes, spec.per_class, spec.dimension, spec.overlap, spec.seed)
}

fn simplex_means(k: usize, d: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|c| {
            let mut m = vec![0.0; d];
            if d >= k {
                m[c] = 1.0;
            } else if d == 1 {
                m[0] = c as f64 / (k - 1) as f64;
            } else {
                let theta = std::f64::consts::TAU * c as f64 / k as f64;
                m[0] = theta.cos();
                m[1] = theta.sin();
            }
            m
        })
        .collect()
}

/// Class frequencies indexed by class id; absent classes get 0.
pub fn class_priors(d: &Dataset) -> Vec<f64> {
    let n = d.len() as f64;
    d.class_counts().iter().map(|&c| c as f64 / n).collect()
}

// ---------------------------------------------------------------------------
// Standardization (optional, off by default in the harness)
// ---------------------------------------------------------------------------

/// Per-feature z-score transform fitted on one dataset and applied to others.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(d: &Dataset) -> Self {
        let n = d.len() as f64;
        let mut mean = vec![0.0; d.dimension()];
        for s in d.samples() {
            for (m, v) in mean.iter_mut().zip(&s.features) {
                *m += v / n;
            }
        }
        let mut var = vec![0.0; d.dimension()];
        for s in d.samples() {
            for ((acc, v), m) in var.iter_mut().zip(&s.features).zip(&mean) {
                *acc += (v - m) * (v - m) / n;
            }
        }
        // constant columns pass through centered but unscaled
        let scale = var.into_iter().map(|v| if v > 0.0 { v.sqrt() } else { 1.0 }).collect();
        Standardizer { mean, scale }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((v, m), s)| (v - m) / s)
            .collect()
    }

    pub fn apply(&self, d: &Dataset) -> Result<Dataset> {
        d.map_features(|x| self.transform(x))
    }
}
