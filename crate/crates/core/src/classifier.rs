//! Contracts shared by the component classifiers and the booster.

use crate::dataset::Dataset;
use crate::error::Result;

/// A trained multi-class predictor over fixed-dimension feature vectors.
pub trait Classifier {
    fn dimension(&self) -> usize;

    /// Predicted class id.
    fn predict(&self, x: &[f64]) -> Result<usize>;

    fn predict_dataset(&self, d: &Dataset) -> Result<Vec<usize>> {
        d.samples().iter().map(|s| self.predict(&s.features)).collect()
    }
}

impl<C: Classifier + ?Sized> Classifier for Box<C> {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn predict(&self, x: &[f64]) -> Result<usize> {
        (**self).predict(x)
    }
}

/// Something that fits a [`Classifier`] to a weighted sample.
///
/// `weights` are aligned with `data.samples()`, non-negative, with positive
/// sum. Training must be a pure function of `(data, weights, seed)`.
pub trait WeakLearner {
    type Model: Classifier;

    fn train(&self, data: &Dataset, weights: &[f64], seed: u64) -> Result<Self::Model>;
}

/// Fraction of samples misclassified, in `[0, 1]`.
pub fn error_rate<C: Classifier + ?Sized>(model: &C, d: &Dataset) -> Result<f64> {
    let wrong = model
        .predict_dataset(d)?
        .into_iter()
        .zip(d.labels())
        .filter(|(p, y)| p != y)
        .count();
    Ok(wrong as f64 / d.len() as f64)
}
