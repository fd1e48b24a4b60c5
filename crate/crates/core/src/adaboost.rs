//! AdaBoost.M1 over any [`WeakLearner`].
//!
//! Each round fits the learner to the current distribution, measures its
//! weighted error ε on the full training set, and multiplies the weights of
//! correctly classified samples by β = ε/(1−ε) before renormalizing. The
//! ensemble predicts by a vote weighted with ln(1/β).

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{Classifier, WeakLearner};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// β used for a round with zero weighted error.
pub const BETA_CAP: f64 = 1e-10;

/// A probability vector over training samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("distribution over zero samples"));
        }
        Ok(Distribution(vec![1.0 / n as f64; n]))
    }

    /// Normalizes non-negative weights to sum to one.
    pub fn from_weights(w: Vec<f64>) -> Result<Self> {
        if w.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid("weights must be finite and non-negative"));
        }
        let sum: f64 = w.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::invalid("weights sum to zero"));
        }
        Ok(Distribution(w.into_iter().map(|v| v / sum).collect()))
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn init_uniform(n: usize) -> Result<Distribution> {
    Distribution::uniform(n)
}

/// Per-sample misclassification flags of `model` on `data`.
pub fn mistakes<C: Classifier + ?Sized>(model: &C, data: &Dataset) -> Result<Vec<bool>> {
    Ok(model
        .predict_dataset(data)?
        .into_iter()
        .zip(data.labels())
        .map(|(p, y)| p != y)
        .collect())
}

fn error_of(dist: &Distribution, wrong: &[bool]) -> f64 {
    let e = dist
        .0
        .iter()
        .zip(wrong)
        .filter(|(_, &m)| m)
        .fold(0.0, |acc, (w, _)| acc + w);
    e.clamp(0.0, 1.0)
}

/// ε = Σ of the weights of misclassified samples.
pub fn weighted_error<C: Classifier + ?Sized>(model: &C, data: &Dataset, dist: &Distribution) -> Result<f64> {
    check_aligned(data, dist)?;
    Ok(error_of(dist, &mistakes(model, data)?))
}

fn check_aligned(data: &Dataset, dist: &Distribution) -> Result<()> {
    if data.len() != dist.len() {
        return Err(Error::invalid(format!(
            "distribution over {} samples, dataset has {}",
            dist.len(),
            data.len()
        )));
    }
    Ok(())
}

/// Scales correct samples by β = ε/(1−ε) and renormalizes. Afterwards the
/// misclassified samples carry exactly half the mass.
pub fn reweight(dist: &Distribution, wrong: &[bool], epsilon: f64) -> Result<Distribution> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::invalid(format!("ε = {epsilon} outside (0, 0.5)")));
    }
    if wrong.len() != dist.len() {
        return Err(Error::invalid("mistake flags not aligned with distribution"));
    }
    let beta = epsilon / (1.0 - epsilon);
    let w = dist
        .0
        .iter()
        .zip(wrong)
        .map(|(&w, &m)| if m { w } else { w * beta })
        .collect();
    Distribution::from_weights(w)
}

pub fn update_weights<C: Classifier + ?Sized>(
    dist: &Distribution,
    model: &C,
    data: &Dataset,
    epsilon: f64,
) -> Result<Distribution> {
    check_aligned(data, dist)?;
    reweight(dist, &mistakes(model, data)?, epsilon)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// Hand the distribution to the learner as sample weights.
    #[default]
    WeightedLoss,
    /// Train on a seeded weighted bootstrap sample with uniform weights.
    Resample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoostParams {
    pub rounds: usize,
    pub weight_mode: WeightMode,
    /// Bootstrap size in resample mode; `None` means the training-set size.
    pub resample_size: Option<usize>,
    pub seed: u64,
}

impl Default for BoostParams {
    fn default() -> Self {
        BoostParams {
            rounds: 25,
            weight_mode: WeightMode::WeightedLoss,
            resample_size: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaltReason {
    CompletedT,
    EpsilonZero,
    EpsilonGeHalf,
}

#[derive(Debug, Clone)]
pub struct BoostRound<M> {
    pub model: M,
    pub vote_weight: f64,
    pub epsilon: f64,
}

/// One line of the boosting trace. `stored` is false for the discarded
/// round that triggered an ε ≥ ½ halt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub round: usize,
    pub epsilon: f64,
    pub vote_weight: f64,
    pub train_error_so_far: f64,
    pub stored: bool,
}

#[derive(Debug, Clone)]
pub struct BoostedEnsemble<M> {
    pub rounds: Vec<BoostRound<M>>,
    pub halted: HaltReason,
    pub trace: Vec<TraceRow>,
    pub diagnostics: Vec<String>,
    n_classes: usize,
    dimension: usize,
}

impl<M: Classifier> BoostedEnsemble<M> {
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Per-class vote totals using the first `t` rounds.
    pub fn scores_prefix(&self, x: &[f64], t: usize) -> Result<Vec<f64>> {
        if self.rounds.is_empty() {
            return Err(Error::invalid("empty ensemble"));
        }
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: x.len(),
            });
        }
        let mut scores = vec![0.0; self.n_classes];
        for r in self.rounds.iter().take(t) {
            scores[r.model.predict(x)?] += r.vote_weight;
        }
        Ok(scores)
    }

    /// Weighted-vote prediction of the first `t` rounds.
    pub fn predict_prefix(&self, x: &[f64], t: usize) -> Result<usize> {
        Ok(argmax_lowest(&self.scores_prefix(x, t)?))
    }
}

impl<M: Classifier> Classifier for BoostedEnsemble<M> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn predict(&self, x: &[f64]) -> Result<usize> {
        self.predict_prefix(x, self.rounds.len())
    }
}

pub fn predict_ensemble<M: Classifier>(e: &BoostedEnsemble<M>, x: &[f64]) -> Result<usize> {
    e.predict(x)
}

fn argmax_lowest(v: &[f64]) -> usize {
    let mut best = 0;
    for (c, &s) in v.iter().enumerate() {
        if s > v[best] {
            best = c;
        }
    }
    best
}

/// What the booster saw in one round, handed to an observer.
#[derive(Debug)]
pub struct RoundReport<'a> {
    pub round: usize,
    pub epsilon: f64,
    pub before: &'a [f64],
    /// The reweighted distribution, when the round was kept and boosting
    /// continues.
    pub after: Option<&'a [f64]>,
    pub mistakes: &'a [bool],
}

pub fn boost_m1<L: WeakLearner>(
    data: &Dataset,
    learner: &L,
    params: &BoostParams,
) -> Result<BoostedEnsemble<L::Model>> {
    boost_m1_observed(data, learner, params, |_| {})
}

/// [`boost_m1`] with a callback invoked after every round.
pub fn boost_m1_observed<L: WeakLearner>(
    data: &Dataset,
    learner: &L,
    params: &BoostParams,
    mut observe: impl FnMut(&RoundReport<'_>),
) -> Result<BoostedEnsemble<L::Model>> {
    if params.rounds == 0 {
        return Err(Error::invalid("boosting needs T ≥ 1"));
    }
    if data.n_present_classes() < 2 {
        return Err(Error::invalid("boosting needs at least 2 classes present"));
    }
    let n = data.len();
    let k = data.n_classes();
    let mut dist = Distribution::uniform(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut scores = vec![vec![0.0; k]; n];
    let mut ensemble = BoostedEnsemble {
        rounds: Vec::new(),
        halted: HaltReason::CompletedT,
        trace: Vec::new(),
        diagnostics: Vec::new(),
        n_classes: k,
        dimension: data.dimension(),
    };

    for t in 1..=params.rounds {
        let at_round = |e: Error| Error::Round {
            round: t,
            source: Box::new(e),
        };
        let round_seed = params.seed.wrapping_add(t as u64);
        let model = match params.weight_mode {
            WeightMode::WeightedLoss => learner.train(data, dist.weights(), round_seed),
            WeightMode::Resample => {
                let m = params.resample_size.unwrap_or(n);
                if m == 0 {
                    return Err(Error::invalid("resample size must be ≥ 1"));
                }
                let sampler =
                    WeightedIndex::new(dist.weights()).map_err(|e| at_round(Error::invalid(e.to_string())))?;
                let idx: Vec<usize> = (0..m).map(|_| sampler.sample(&mut rng)).collect();
                let boot = data.subset(&idx)?;
                learner.train(&boot, &vec![1.0; m], round_seed)
            }
        }
        .map_err(at_round)?;
        let wrong = mistakes(&model, data).map_err(at_round)?;
        let epsilon = error_of(&dist, &wrong);

        if epsilon >= 0.5 {
            ensemble.halted = HaltReason::EpsilonGeHalf;
            let kept = t == 1;
            if kept {
                ensemble.diagnostics.push(format!(
                    "round 1 has ε = {epsilon:.4} ≥ 0.5; kept as a single classifier"
                ));
                ensemble.rounds.push(BoostRound {
                    model,
                    vote_weight: 1.0,
                    epsilon,
                });
                accumulate(&mut scores, &ensemble.rounds[0].model, data, 1.0)?;
            }
            ensemble.trace.push(TraceRow {
                round: t,
                epsilon,
                vote_weight: if kept { 1.0 } else { 0.0 },
                train_error_so_far: training_error(&scores, data),
                stored: kept,
            });
            observe(&RoundReport {
                round: t,
                epsilon,
                before: dist.weights(),
                after: None,
                mistakes: &wrong,
            });
            break;
        }

        let terminal = epsilon == 0.0;
        let beta = if terminal { BETA_CAP } else { epsilon / (1.0 - epsilon) };
        let vote_weight = (1.0 / beta).ln();
        accumulate(&mut scores, &model, data, vote_weight)?;
        ensemble.rounds.push(BoostRound {
            model,
            vote_weight,
            epsilon,
        });
        ensemble.trace.push(TraceRow {
            round: t,
            epsilon,
            vote_weight,
            train_error_so_far: training_error(&scores, data),
            stored: true,
        });
        if terminal {
            ensemble.halted = HaltReason::EpsilonZero;
            observe(&RoundReport {
                round: t,
                epsilon,
                before: dist.weights(),
                after: None,
                mistakes: &wrong,
            });
            break;
        }
        let next = reweight(&dist, &wrong, epsilon).map_err(at_round)?;
        observe(&RoundReport {
            round: t,
            epsilon,
            before: dist.weights(),
            after: (t < params.rounds).then_some(next.weights()),
            mistakes: &wrong,
        });
        dist = next;
    }
    Ok(ensemble)
}

fn accumulate<M: Classifier>(scores: &mut [Vec<f64>], model: &M, data: &Dataset, w: f64) -> Result<()> {
    for (s, p) in scores.iter_mut().zip(model.predict_dataset(data)?) {
        s[p] += w;
    }
    Ok(())
}

fn training_error(scores: &[Vec<f64>], data: &Dataset) -> f64 {
    let wrong = scores
        .iter()
        .zip(data.labels())
        .filter(|(s, y)| argmax_lowest(s) != *y)
        .count();
    wrong as f64 / data.len() as f64
}

/// Writes `round,epsilon,vote_weight,train_error_so_far` rows.
pub fn write_trace<W: std::io::Write>(trace: &[TraceRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "round,epsilon,vote_weight,train_error_so_far")?;
    for r in trace.iter().filter(|r| r.stored) {
        writeln!(
            w,
            "{},{},{},{}",
            r.round, r.epsilon, r.vote_weight, r.train_error_so_far
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c45::{C45Learner, C45Params};
    use crate::classifier::error_rate;
    use crate::dataset::synth_phoneme_like;

    /// Predicts from a lookup of the training rows; perfect on its data.
    struct Memorizer;
    struct Lookup(Vec<(Vec<f64>, usize)>, usize);

    impl Classifier for Lookup {
        fn dimension(&self) -> usize {
            self.1
        }
        fn predict(&self, x: &[f64]) -> Result<usize> {
            Ok(self.0.iter().find(|(f, _)| f == x).map_or(0, |(_, l)| *l))
        }
    }

    impl WeakLearner for Memorizer {
        type Model = Lookup;
        fn train(&self, d: &Dataset, _: &[f64], _: u64) -> Result<Lookup> {
            Ok(Lookup(
                d.samples().iter().map(|s| (s.features.clone(), s.label)).collect(),
                d.dimension(),
            ))
        }
    }

    /// Always predicts a fixed class.
    struct Const(usize);
    #[derive(Debug)]
    struct ConstModel(usize, usize);
    impl Classifier for ConstModel {
        fn dimension(&self) -> usize {
            self.1
        }
        fn predict(&self, _: &[f64]) -> Result<usize> {
            Ok(self.0)
        }
    }
    impl WeakLearner for Const {
        type Model = ConstModel;
        fn train(&self, d: &Dataset, _: &[f64], _: u64) -> Result<ConstModel> {
            Ok(ConstModel(self.0, d.dimension()))
        }
    }

    struct Failing;
    impl WeakLearner for Failing {
        type Model = ConstModel;
        fn train(&self, _: &Dataset, _: &[f64], _: u64) -> Result<ConstModel> {
            Err(Error::invalid("boom"))
        }
    }

    fn line4() -> Dataset {
        Dataset::from_rows(
            "l",
            vec![vec![-2.0], vec![-1.0], vec![1.0], vec![2.0]],
            &["a", "a", "b", "b"],
        )
        .unwrap()
    }

    #[test]
    fn uniform_distribution() {
        assert_eq!(init_uniform(4).unwrap().weights(), &[0.25; 4]);
        assert_eq!(init_uniform(1).unwrap().weights(), &[1.0]);
        assert!(init_uniform(0).is_err());
        let s: f64 = init_uniform(7).unwrap().weights().iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_error_cases() {
        let d = line4();
        let dist = init_uniform(4).unwrap();
        let perfect = Memorizer.train(&d, &[], 0).unwrap();
        assert_eq!(weighted_error(&perfect, &d, &dist).unwrap(), 0.0);
        let d3 = Dataset::from_rows(
            "x",
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            &["a", "a", "a", "b"],
        )
        .unwrap();
        assert_eq!(weighted_error(&ConstModel(0, 1), &d3, &dist).unwrap(), 0.25);
        assert!(weighted_error(&ConstModel(0, 1), &d3, &init_uniform(3).unwrap()).is_err());
    }

    #[test]
    fn one_error_in_four() {
        let dist = init_uniform(4).unwrap();
        let next = reweight(&dist, &[true, false, false, false], 0.25).unwrap();
        assert!((next.weights()[0] - 0.5).abs() < 1e-15);
        for w in &next.weights()[1..] {
            assert!((w - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn near_half_error_barely_moves() {
        let dist = Distribution::from_weights(vec![0.4999, 0.5001]).unwrap();
        let next = reweight(&dist, &[true, false], 0.4999).unwrap();
        for (a, b) in next.weights().iter().zip(dist.weights()) {
            assert!((a - b).abs() < 1e-3);
        }
        assert!(reweight(&dist, &[true, false], 0.5).is_err());
        assert!(reweight(&dist, &[true, false], 0.0).is_err());
    }

    #[test]
    fn perfect_learner_stops_after_one_round() {
        let d = line4();
        let e = boost_m1(&d, &Memorizer, &BoostParams::default()).unwrap();
        assert_eq!(e.rounds.len(), 1);
        assert_eq!(e.halted, HaltReason::EpsilonZero);
        assert!((e.rounds[0].vote_weight - (1.0 / BETA_CAP).ln()).abs() < 1e-9);
    }

    #[test]
    fn stump_separates_line() {
        let d = line4();
        let stump = C45Learner::new(C45Params {
            max_depth: Some(1),
            min_weight_leaf: 0.5,
            min_gain: 1e-7,
        });
        let e = boost_m1(&d, &stump, &BoostParams::default()).unwrap();
        assert_eq!(e.rounds.len(), 1);
        assert_eq!(e.rounds[0].epsilon, 0.0);
        assert_eq!(e.halted, HaltReason::EpsilonZero);
    }

    #[test]
    fn bad_first_round_is_kept_with_unit_vote() {
        let d = Dataset::from_rows(
            "x",
            vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            &["a", "b", "b", "b"],
        )
        .unwrap();
        let e = boost_m1(&d, &Const(0), &BoostParams::default()).unwrap();
        assert_eq!(e.rounds.len(), 1);
        assert_eq!(e.rounds[0].vote_weight, 1.0);
        assert_eq!(e.halted, HaltReason::EpsilonGeHalf);
        assert_eq!(e.diagnostics.len(), 1);
    }

    #[test]
    fn learner_failure_carries_round() {
        let err = boost_m1(&line4(), &Failing, &BoostParams::default()).unwrap_err();
        assert!(matches!(err, Error::Round { round: 1, .. }));
    }

    #[test]
    fn vote_weights_decide() {
        let e = BoostedEnsemble {
            rounds: vec![
                BoostRound {
                    model: ConstModel(1, 1),
                    vote_weight: 2.0,
                    epsilon: 0.1,
                },
                BoostRound {
                    model: ConstModel(0, 1),
                    vote_weight: 1.0,
                    epsilon: 0.2,
                },
            ],
            halted: HaltReason::CompletedT,
            trace: vec![],
            diagnostics: vec![],
            n_classes: 2,
            dimension: 1,
        };
        assert_eq!(predict_ensemble(&e, &[0.0]).unwrap(), 1);
        assert_eq!(e.predict_prefix(&[0.0], 1).unwrap(), 1);
        let tie = BoostedEnsemble {
            rounds: vec![
                BoostRound {
                    model: ConstModel(1, 1),
                    vote_weight: 1.0,
                    epsilon: 0.1,
                },
                BoostRound {
                    model: ConstModel(0, 1),
                    vote_weight: 1.0,
                    epsilon: 0.1,
                },
            ],
            ..e
        };
        assert_eq!(tie.predict(&[0.0]).unwrap(), 0);
        let empty: BoostedEnsemble<ConstModel> = BoostedEnsemble { rounds: vec![], ..tie };
        assert!(empty.predict(&[0.0]).is_err());
    }

    #[test]
    fn shallow_trees_improve_training_error() {
        let d = synth_phoneme_like(3, 40, 4, 0.5, 12).unwrap();
        let learner = C45Learner::new(C45Params::weak());
        let single = learner.train(&d, &vec![1.0; d.len()], 0).unwrap();
        let e = boost_m1(&d, &learner, &BoostParams::default()).unwrap();
        assert!(error_rate(&e, &d).unwrap() <= error_rate(&single, &d).unwrap());
    }

    #[test]
    fn resample_mode_is_deterministic() {
        let d = synth_phoneme_like(3, 30, 3, 0.6, 4).unwrap();
        let learner = C45Learner::new(C45Params::weak());
        let params = BoostParams {
            rounds: 8,
            weight_mode: WeightMode::Resample,
            resample_size: None,
            seed: 99,
        };
        let a = boost_m1(&d, &learner, &params).unwrap();
        let b = boost_m1(&d, &learner, &params).unwrap();
        assert_eq!(a.trace, b.trace);
        assert!(!a.rounds.is_empty());
    }

    #[test]
    fn trace_csv() {
        let d = synth_phoneme_like(2, 30, 2, 0.8, 2).unwrap();
        let learner = C45Learner::new(C45Params {
            max_depth: Some(1),
            ..C45Params::default()
        });
        let e = boost_m1(
            &d,
            &learner,
            &BoostParams {
                rounds: 5,
                ..BoostParams::default()
            },
        )
        .unwrap();
        let mut out = Vec::new();
        write_trace(&e.trace, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("round,epsilon,vote_weight,train_error_so_far\n1,"));
        assert_eq!(text.lines().count(), 1 + e.rounds.len());
    }
}
