//! Independent reference implementations used as test oracles. Everything
//! here is written from the textbook definitions, deliberately slow and
//! without reusing library internals.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use phoneme_boost::dataset::{Dataset, Sample};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `|X_k|²` for `k = 0..=n/2` of the zero-padded signal, by the O(n²) sum.
pub fn naive_power_spectrum(x: &[f64], n: usize) -> Vec<f64> {
    (0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &v) in x.iter().enumerate() {
                let angle = -2.0 * PI * (k * t) as f64 / n as f64;
                re += v * angle.cos();
                im += v * angle.sin();
            }
            re * re + im * im
        })
        .collect()
}

/// Time-domain energy recovered from a one-sided power spectrum of a real
/// signal (Parseval).
pub fn energy_from_one_sided(p: &[f64]) -> f64 {
    let n = 2 * (p.len() - 1);
    let interior: f64 = p[1..p.len() - 1].iter().sum();
    (p[0] + p[p.len() - 1] + 2.0 * interior) / n as f64
}

/// Orthonormal DCT-II as an explicit basis-matrix product.
pub fn naive_dct(x: &[f64], keep: usize) -> Vec<f64> {
    let n = x.len();
    let basis = |k: usize, i: usize| {
        let norm = if k == 0 {
            1.0 / (n as f64).sqrt()
        } else {
            (2.0 / n as f64).sqrt()
        };
        norm * (PI / n as f64 * (i as f64 + 0.5) * k as f64).cos()
    };
    (0..keep).map(|k| (0..n).map(|i| basis(k, i) * x[i]).sum()).collect()
}

/// Shannon entropy in bits of a weighted class histogram.
pub fn entropy(hist: &[f64]) -> f64 {
    let total: f64 = hist.iter().sum();
    hist.iter()
        .filter(|&&h| h > 0.0)
        .map(|&h| {
            let p = h / total;
            -p * p.ln() / 2f64.ln()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub attribute: usize,
    pub threshold: f64,
    pub gain: f64,
    pub ratio: f64,
}

/// Every admissible `(attribute, midpoint)` split of the whole dataset, in
/// (attribute, threshold) order. `weights` are used as given.
pub fn all_root_candidates(d: &Dataset, weights: &[f64], min_leaf: f64, min_gain: f64) -> Vec<Candidate> {
    let k = d.n_classes();
    let mut parent = vec![0.0; k];
    for i in 0..d.len() {
        parent[d.label(i)] += weights[i];
    }
    let total: f64 = parent.iter().sum();
    let mut out = Vec::new();
    for a in 0..d.dimension() {
        let mut values: Vec<f64> = (0..d.len()).map(|i| d.features(i)[a]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for pair in values.windows(2) {
            let threshold = (pair[0] + pair[1]) / 2.0;
            let mut left = vec![0.0; k];
            let mut right = vec![0.0; k];
            for i in 0..d.len() {
                if d.features(i)[a] <= threshold {
                    left[d.label(i)] += weights[i];
                } else {
                    right[d.label(i)] += weights[i];
                }
            }
            let wl: f64 = left.iter().sum();
            let wr: f64 = right.iter().sum();
            if wl < min_leaf || wr < min_leaf {
                continue;
            }
            let gain = entropy(&parent) - wl / total * entropy(&left) - wr / total * entropy(&right);
            let split_info = entropy(&[wl, wr]);
            if gain < min_gain || split_info <= 0.0 {
                continue;
            }
            out.push(Candidate {
                attribute: a,
                threshold,
                gain,
                ratio: gain / split_info,
            });
        }
    }
    out
}

/// The best candidate: highest ratio, ratios within `tie` of the maximum
/// resolved toward the lowest (attribute, threshold).
pub fn exhaustive_best(cands: &[Candidate], tie: f64) -> Option<Candidate> {
    let best = cands.iter().map(|c| c.ratio).fold(f64::NEG_INFINITY, f64::max);
    cands.iter().find(|c| c.ratio >= best - tie).copied()
}

pub fn rbf(x: &[f64], y: &[f64], gamma: f64) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum();
    (-gamma * d2).exp()
}

/// `f(x) = Σ α_j y_j K(x_j, x) + b`.
pub fn svm_decision(alpha: &[f64], y: &[f64], points: &[Vec<f64>], bias: f64, gamma: f64, x: &[f64]) -> f64 {
    alpha
        .iter()
        .zip(y)
        .zip(points)
        .map(|((a, yi), p)| a * yi * rbf(p, x, gamma))
        .sum::<f64>()
        + bias
}

/// Whether `(α, y·f(x))` satisfies the soft-margin KKT conditions to `tol`.
pub fn kkt_satisfied(alpha: f64, bound: f64, margin: f64, tol: f64) -> bool {
    if alpha == 0.0 {
        margin >= 1.0 - tol
    } else if alpha == bound {
        margin <= 1.0 + tol
    } else {
        (margin - 1.0).abs() <= tol
    }
}

/// Cholesky factorization succeeds on `A + jitter·I` iff it is positive
/// definite; used to check that Gram matrices are PSD.
pub fn cholesky_ok(a: &[Vec<f64>], jitter: f64) -> bool {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j] + if i == j { jitter } else { 0.0 };
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// Gaussian blobs with random means in `[-1, 1]^d`.
pub fn random_blobs(rng: &mut ChaCha8Rng, n: usize, d: usize, k: usize, spread: f64) -> Dataset {
    let means: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    let samples = (0..n)
        .map(|i| {
            let label = i % k;
            let features = means[label].iter().map(|m| m + spread * gaussian(rng)).collect();
            Sample { features, label }
        })
        .collect();
    Dataset::new("blobs", d, (0..k).map(|c| format!("k{c}")).collect(), samples).unwrap()
}

/// Box–Muller standard normal.
pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random_range(f64::EPSILON..1.0);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

/// Fraction of `data` misclassified by the weighted vote of `(prediction
/// per sample, vote weight)` rounds, ties to the lowest class.
pub fn vote_error(preds: &[Vec<usize>], votes: &[f64], data: &Dataset) -> f64 {
    let k = data.n_classes();
    let mut wrong = 0;
    for i in 0..data.len() {
        let mut score = vec![0.0; k];
        for (p, v) in preds.iter().zip(votes) {
            score[p[i]] += v;
        }
        let mut best = 0;
        for c in 1..k {
            if score[c] > score[best] {
                best = c;
            }
        }
        if best != data.label(i) {
            wrong += 1;
        }
    }
    wrong as f64 / data.len() as f64
}
