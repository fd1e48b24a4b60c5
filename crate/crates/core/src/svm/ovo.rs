//! One-against-one reduction: a binary SVM per unordered class pair, combined
//! by majority vote.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::RbfKernel;
use super::smo::{smo_train_binary, SmoParams, SvmBinaryModel};
use crate::classifier::{Classifier, WeakLearner};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum PairModel {
    Binary(SvmBinaryModel),
    /// Only one class of the pair had (positively weighted) samples.
    Constant(usize),
}

/// Binary model for classes `(low, high)`, `low < high`. A non-negative
/// decision value votes for `low`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseModel {
    pub low: usize,
    pub high: usize,
    pub model: PairModel,
}

impl PairwiseModel {
    /// Winning class and the absolute decision value (0 for constant voters).
    pub fn vote(&self, x: &[f64]) -> (usize, f64) {
        match &self.model {
            PairModel::Constant(c) => (*c, 0.0),
            PairModel::Binary(m) => {
                let v = m.decision_value_unchecked(x);
                if v >= 0.0 {
                    (self.low, v.abs())
                } else {
                    (self.high, v.abs())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmMulticlassModel {
    pub classes: Vec<String>,
    pub dimension: usize,
    pub kernel: RbfKernel,
    pub pairs: Vec<PairwiseModel>,
}

impl SvmMulticlassModel {
    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    /// Pairs that fell back to a constant voter.
    pub fn constant_pairs(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| matches!(p.model, PairModel::Constant(_)))
            .count()
    }

    /// Pairs whose SMO run did not meet its KKT tolerance.
    pub fn unconverged_pairs(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| matches!(&p.model, PairModel::Binary(m) if !m.diagnostics.converged))
            .count()
    }

    /// Vote counts and summed winning margins per class.
    pub fn tally(&self, x: &[f64]) -> Result<(Vec<usize>, Vec<f64>)> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        let mut votes = vec![0usize; self.n_classes()];
        let mut margins = vec![0.0; self.n_classes()];
        for p in &self.pairs {
            let (c, m) = p.vote(x);
            votes[c] += 1;
            margins[c] += m;
        }
        Ok((votes, margins))
    }
}

/// Most votes wins; among tied classes the larger summed margin of the votes
/// they won, then the lower class id.
pub fn resolve_votes(votes: &[usize], margins: &[f64]) -> usize {
    let mut best = 0;
    for c in 1..votes.len() {
        if votes[c] > votes[best] || (votes[c] == votes[best] && margins[c] > margins[best]) {
            best = c;
        }
    }
    best
}

pub fn predict_ovo(m: &SvmMulticlassModel, x: &[f64]) -> Result<usize> {
    let (votes, margins) = m.tally(x)?;
    Ok(resolve_votes(&votes, &margins))
}

impl Classifier for SvmMulticlassModel {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn predict(&self, x: &[f64]) -> Result<usize> {
        predict_ovo(self, x)
    }
}

/// Trains all `k(k−1)/2` pairwise models (in parallel). With `weights`, each
/// pair sees only its positively weighted samples and box constraints scaled
/// from their weights.
pub fn train_ovo(
    data: &Dataset,
    weights: Option<&[f64]>,
    kernel: RbfKernel,
    params: &SmoParams,
) -> Result<SvmMulticlassModel> {
    let k = data.n_classes();
    if k < 2 {
        return Err(Error::invalid("one-against-one needs at least 2 classes"));
    }
    if let Some(w) = weights {
        if w.len() != data.len() {
            return Err(Error::invalid(format!(
                "{} weights for {} samples",
                w.len(),
                data.len()
            )));
        }
    }
    params.validate()?;
    let pair_list: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let pairs = pair_list
        .par_iter()
        .map(|&(low, high)| train_pair(data, weights, kernel, params, low, high))
        .collect::<Result<Vec<_>>>()?;
    Ok(SvmMulticlassModel {
        classes: data.classes().to_vec(),
        dimension: data.dimension(),
        kernel,
        pairs,
    })
}

fn train_pair(
    data: &Dataset,
    weights: Option<&[f64]>,
    kernel: RbfKernel,
    params: &SmoParams,
    low: usize,
    high: usize,
) -> Result<PairwiseModel> {
    let mut points = Vec::new();
    let mut y = Vec::new();
    let mut w = Vec::new();
    for (i, s) in data.samples().iter().enumerate() {
        let wi = weights.map_or(1.0, |w| w[i]);
        if (s.label == low || s.label == high) && wi > 0.0 {
            points.push(s.features.as_slice());
            y.push(if s.label == low { 1.0 } else { -1.0 });
            w.push(wi);
        }
    }
    let has_low = y.contains(&1.0);
    let has_high = y.contains(&-1.0);
    let model = match (has_low, has_high) {
        (true, true) => {
            let w = weights.map(|_| w.as_slice());
            PairModel::Binary(smo_train_binary(&points, &y, w, kernel, params)?)
        }
        (false, true) => PairModel::Constant(high),
        _ => PairModel::Constant(low),
    };
    Ok(PairwiseModel { low, high, model })
}

/// How boosting weights reach the SVM.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SvmWeighting {
    /// Per-sample box constraints.
    #[default]
    BoxConstraints,
    /// Ignore weights (the caller resamples instead).
    Ignore,
}

/// [`WeakLearner`] adapter for the multi-class SVM.
#[derive(Debug, Clone)]
pub struct SvmLearner {
    pub kernel: RbfKernel,
    pub params: SmoParams,
    pub weighting: SvmWeighting,
}

impl SvmLearner {
    pub fn new(gamma: f64, params: SmoParams) -> Result<Self> {
        Ok(SvmLearner {
            kernel: RbfKernel::new(gamma)?,
            params,
            weighting: SvmWeighting::BoxConstraints,
        })
    }
}

impl WeakLearner for SvmLearner {
    type Model = SvmMulticlassModel;

    fn train(&self, data: &Dataset, weights: &[f64], seed: u64) -> Result<SvmMulticlassModel> {
        let params = SmoParams {
            seed: self.params.seed ^ seed,
            ..self.params.clone()
        };
        let w = match self.weighting {
            SvmWeighting::BoxConstraints => Some(weights),
            SvmWeighting::Ignore => None,
        };
        train_ovo(data, w, self.kernel, &params)
    }
}
