//! Binary soft-margin SVM trained with Platt-style sequential minimal
//! optimization.
//!
//! The solver keeps an exact cache `g_i = Σ_j α_j y_j K(x_i, x_j)` so every
//! error `E_i = g_i + b − y_i` is current. Outer passes alternate between a
//! sweep over all samples and sweeps over the unbound ones; the inner choice
//! maximises `|E1 − E2|`, falling back to unbound and then all samples from a
//! seeded starting point. Per-sample box constraints `C_i` carry sample
//! weights.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kernel::{KernelCache, RbfKernel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SmoParams {
    pub cost: f64,
    /// KKT tolerance on `y·f(x)` around 1.
    pub tolerance: f64,
    /// Smallest accepted change of a dual variable.
    pub eps: f64,
    pub max_passes: usize,
    /// Seeds the starting offsets of the fallback scans.
    pub seed: u64,
    /// Track the dual objective after every pair update.
    pub debug_checks: bool,
}

impl Default for SmoParams {
    fn default() -> Self {
        SmoParams {
            cost: 10.0,
            tolerance: 1e-3,
            eps: 1e-12,
            max_passes: 10_000,
            seed: 0,
            debug_checks: false,
        }
    }
}

impl SmoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cost > 0.0) || !self.cost.is_finite() {
            return Err(Error::invalid("SVM cost must be positive"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("SMO tolerance must be positive"));
        }
        if !(self.eps > 0.0) {
            return Err(Error::invalid("SMO eps must be positive"));
        }
        if self.max_passes == 0 {
            return Err(Error::invalid("max_passes must be ≥ 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SmoDiagnostics {
    pub converged: bool,
    pub passes: usize,
    pub steps: usize,
    /// Samples whose KKT residual exceeds the tolerance under the final bias.
    pub kkt_violations: usize,
    pub max_kkt_residual: f64,
    /// Pair updates that lowered the dual objective (only with `debug_checks`).
    pub objective_decreases: usize,
    pub n_samples: usize,
    pub n_support: usize,
    pub n_bound_support: usize,
    pub dual_objective: f64,
}

/// Trained two-class model; positive decision values mean label `+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmBinaryModel {
    pub support_vectors: Vec<Vec<f64>>,
    /// `α_i·y_i` per support vector.
    pub dual_coefs: Vec<f64>,
    pub bias: f64,
    pub kernel: RbfKernel,
    pub diagnostics: SmoDiagnostics,
}

impl SvmBinaryModel {
    pub fn dimension(&self) -> Option<usize> {
        self.support_vectors.first().map(Vec::len)
    }

    /// `Σ (α_i y_i)·K(sv_i, x) + b`.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if let Some(d) = self.dimension() {
            if d != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: x.len(),
                });
            }
        }
        Ok(self.decision_value_unchecked(x))
    }

    pub(crate) fn decision_value_unchecked(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coefs)
            .map(|(sv, c)| c * self.kernel.eval(sv, x))
            .sum::<f64>()
            + self.bias
    }
}

/// Full solver output, including every dual variable (useful for auditing
/// feasibility and KKT conditions).
#[derive(Debug, Clone)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    pub box_bounds: Vec<f64>,
    pub bias: f64,
    pub diagnostics: SmoDiagnostics,
}

/// Box constraints `C_i = C·n·w_i/Σw`, or `C` for every sample.
pub fn box_bounds(cost: f64, n: usize, weights: Option<&[f64]>) -> Result<Vec<f64>> {
    match weights {
        None => Ok(vec![cost; n]),
        Some(w) => {
            if w.len() != n {
                return Err(Error::invalid(format!("{} weights for {n} samples", w.len())));
            }
            if w.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
                return Err(Error::invalid("sample weights must be finite and non-negative"));
            }
            let sum: f64 = w.iter().sum();
            if !(sum > 0.0) {
                return Err(Error::invalid("sample weights sum to zero"));
            }
            Ok(w.iter().map(|&v| cost * n as f64 * v / sum).collect())
        }
    }
}

/// Trains on `points` with labels `y ∈ {−1, +1}`.
pub fn smo_train_binary(
    points: &[&[f64]],
    y: &[f64],
    weights: Option<&[f64]>,
    kernel: RbfKernel,
    params: &SmoParams,
) -> Result<SvmBinaryModel> {
    let sol = smo_solve(points, y, weights, kernel, params)?;
    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    for (i, &a) in sol.alpha.iter().enumerate() {
        if a > 0.0 {
            support_vectors.push(points[i].to_vec());
            dual_coefs.push(a * y[i]);
        }
    }
    Ok(SvmBinaryModel {
        support_vectors,
        dual_coefs,
        bias: sol.bias,
        kernel,
        diagnostics: sol.diagnostics,
    })
}

pub fn smo_solve(
    points: &[&[f64]],
    y: &[f64],
    weights: Option<&[f64]>,
    kernel: RbfKernel,
    params: &SmoParams,
) -> Result<SmoSolution> {
    params.validate()?;
    let n = points.len();
    if y.len() != n {
        return Err(Error::invalid("labels and points differ in length"));
    }
    if n == 0 {
        return Err(Error::invalid("no training samples"));
    }
    if let Some(bad) = y.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(Error::invalid(format!("binary labels must be ±1, got {bad}")));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(Error::invalid("both classes must be present"));
    }
    let d = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.len(),
        });
    }
    let bounds = box_bounds(params.cost, n, weights)?;
    let mut solver = Solver {
        cache: KernelCache::new(points, kernel),
        y,
        c: bounds,
        alpha: vec![0.0; n],
        g: vec![0.0; n],
        b: 0.0,
        // half the KKT tolerance inside the loop leaves room for the final
        // bias averaging
        tol: params.tolerance / 2.0,
        eps: params.eps,
        rng: ChaCha8Rng::seed_from_u64(params.seed),
        steps: 0,
        debug: params.debug_checks,
        objective_decreases: 0,
    };
    let mut passes = 0;
    let mut converged = false;
    let mut violations = (0, 0.0);
    // restart the pass loop under the averaged bias until it agrees
    for _ in 0..8 {
        converged = solver.run(params.max_passes, &mut passes);
        solver.b = solver.final_bias();
        violations = solver.kkt_report(params.tolerance);
        if !converged || violations.0 == 0 {
            break;
        }
    }
    let n_support = solver.alpha.iter().filter(|&&a| a > 0.0).count();
    let n_bound_support = solver
        .alpha
        .iter()
        .zip(&solver.c)
        .filter(|(&a, &c)| a > 0.0 && a >= c)
        .count();
    let diagnostics = SmoDiagnostics {
        converged: converged && violations.0 == 0,
        passes,
        steps: solver.steps,
        kkt_violations: violations.0,
        max_kkt_residual: violations.1,
        objective_decreases: solver.objective_decreases,
        n_samples: n,
        n_support,
        n_bound_support,
        dual_objective: solver.objective(),
    };
    Ok(SmoSolution {
        alpha: solver.alpha,
        box_bounds: solver.c,
        bias: solver.b,
        diagnostics,
    })
}

/// KKT residual of one sample given its margin `y·f(x)`.
pub fn kkt_residual(alpha: f64, bound: f64, margin: f64) -> f64 {
    if bound <= 0.0 {
        0.0
    } else if alpha <= 0.0 {
        (1.0 - margin).max(0.0)
    } else if alpha >= bound {
        (margin - 1.0).max(0.0)
    } else {
        (margin - 1.0).abs()
    }
}

struct Solver<'a> {
    cache: KernelCache<'a>,
    y: &'a [f64],
    c: Vec<f64>,
    alpha: Vec<f64>,
    g: Vec<f64>,
    b: f64,
    tol: f64,
    eps: f64,
    rng: ChaCha8Rng,
    steps: usize,
    debug: bool,
    objective_decreases: usize,
}

impl Solver<'_> {
    fn n(&self) -> usize {
        self.alpha.len()
    }

    fn error(&self, i: usize) -> f64 {
        self.g[i] + self.b - self.y[i]
    }

    fn is_unbound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c[i]
    }

    fn objective(&self) -> f64 {
        self.alpha
            .iter()
            .zip(self.y)
            .zip(&self.g)
            .map(|((a, y), g)| a - 0.5 * a * y * g)
            .sum()
    }

    /// Returns true when a full sweep found nothing to change.
    fn run(&mut self, max_passes: usize, passes: &mut usize) -> bool {
        let mut examine_all = true;
        let mut changed = 0usize;
        while changed > 0 || examine_all {
            if *passes >= max_passes {
                return false;
            }
            *passes += 1;
            changed = 0;
            if examine_all {
                for i in 0..self.n() {
                    changed += usize::from(self.examine(i));
                }
            } else {
                for i in 0..self.n() {
                    if self.is_unbound(i) {
                        changed += usize::from(self.examine(i));
                    }
                }
            }
            if examine_all {
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
        }
        true
    }

    fn examine(&mut self, i2: usize) -> bool {
        if self.c[i2] <= 0.0 {
            return false;
        }
        let e2 = self.error(i2);
        let r2 = e2 * self.y[i2];
        let a2 = self.alpha[i2];
        if !((r2 < -self.tol && a2 < self.c[i2]) || (r2 > self.tol && a2 > 0.0)) {
            return false;
        }
        let n = self.n();
        let mut best = None;
        let mut best_gap = -1.0;
        let mut n_unbound = 0;
        for i in 0..n {
            if self.is_unbound(i) {
                n_unbound += 1;
                let gap = (self.error(i) - e2).abs();
                if gap > best_gap {
                    best_gap = gap;
                    best = Some(i);
                }
            }
        }
        if n_unbound > 1 {
            if let Some(i1) = best {
                if self.take_step(i1, i2) {
                    return true;
                }
            }
        }
        let start = self.rng.random_range(0..n);
        for k in 0..n {
            let i1 = (start + k) % n;
            if self.is_unbound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        let start = self.rng.random_range(0..n);
        for k in 0..n {
            let i1 = (start + k) % n;
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 || self.c[i1] <= 0.0 {
            return false;
        }
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (c1, c2) = (self.c[i1], self.c[i2]);
        let (e1, e2) = (self.error(i1), self.error(i2));
        let s = y1 * y2;
        let (lo, hi) = if s < 0.0 {
            ((a2 - a1).max(0.0), c2.min(c1 + a2 - a1))
        } else {
            ((a1 + a2 - c1).max(0.0), c2.min(a1 + a2))
        };
        if lo >= hi {
            return false;
        }
        let row1 = self.cache.row(i1);
        let row2 = self.cache.row(i2);
        let (k11, k12, k22) = (row1[i1], row1[i2], row2[i2]);
        let eta = k11 + k22 - 2.0 * k12;
        // dual gain along the constraint line for a step of size `delta` in α2
        let gain = |delta: f64| y2 * (e1 - e2) * delta - 0.5 * eta * delta * delta;
        let mut a2n = if eta > 0.0 {
            (a2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            let (gl, gh) = (gain(lo - a2), gain(hi - a2));
            if gl > gh + self.eps {
                lo
            } else if gh > gl + self.eps {
                hi
            } else {
                a2
            }
        };
        if (a2n - a2).abs() < self.eps * (a2n + a2 + self.eps) {
            return false;
        }
        let mut a1n = a1 + s * (a2 - a2n);
        a1n = snap(a1n, c1);
        a2n = snap(a2n, c2);
        let (d1, d2) = (y1 * (a1n - a1), y2 * (a2n - a2));

        let before = if self.debug { self.objective() } else { 0.0 };
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        self.alpha[i1] = a1n;
        self.alpha[i2] = a2n;
        self.b = if self.is_unbound(i1) {
            b1
        } else if self.is_unbound(i2) {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        for (g, (k1, k2)) in self.g.iter_mut().zip(row1.iter().zip(row2.iter())) {
            *g += d1 * k1 + d2 * k2;
        }
        self.steps += 1;
        if self.debug {
            let after = self.objective();
            if after < before - 1e-10 * before.abs().max(1.0) {
                self.objective_decreases += 1;
            }
        }
        true
    }

    /// Mean of `y_i − g_i` over unbound samples, else the midpoint of the
    /// interval allowed by the bound ones.
    fn final_bias(&self) -> f64 {
        let (mut sum, mut count) = (0.0, 0usize);
        let (mut lower, mut upper) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..self.n() {
            if self.c[i] <= 0.0 {
                continue;
            }
            let implied = self.y[i] - self.g[i];
            if self.is_unbound(i) {
                sum += implied;
                count += 1;
            } else {
                // α = 0 needs y·f ≥ 1, α = C needs y·f ≤ 1
                let at_zero = self.alpha[i] <= 0.0;
                if (self.y[i] > 0.0) == at_zero {
                    lower = lower.max(implied);
                } else {
                    upper = upper.min(implied);
                }
            }
        }
        if count > 0 {
            sum / count as f64
        } else if lower.is_finite() && upper.is_finite() {
            0.5 * (lower + upper)
        } else if lower.is_finite() {
            lower
        } else if upper.is_finite() {
            upper
        } else {
            0.0
        }
    }

    fn kkt_report(&self, tolerance: f64) -> (usize, f64) {
        let mut count = 0;
        let mut worst: f64 = 0.0;
        for i in 0..self.n() {
            let margin = self.y[i] * (self.g[i] + self.b);
            let r = kkt_residual(self.alpha[i], self.c[i], margin);
            worst = worst.max(r);
            if r > tolerance {
                count += 1;
            }
        }
        (count, worst)
    }
}

/// Pins values within rounding distance of a bound onto it, then clamps.
fn snap(a: f64, c: f64) -> f64 {
    let slack = 1e-12 * c.max(1.0);
    if a < slack {
        0.0
    } else if a > c - slack {
        c
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refs(v: &[Vec<f64>]) -> Vec<&[f64]> {
        v.iter().map(Vec::as_slice).collect()
    }

    #[test]
    fn two_point_analytic() {
        let pts = vec![vec![-1.0], vec![1.0]];
        let gamma = 0.01;
        let params = SmoParams {
            cost: 1000.0,
            ..SmoParams::default()
        };
        let m = smo_train_binary(&refs(&pts), &[-1.0, 1.0], None, RbfKernel::new(gamma).unwrap(), &params).unwrap();
        assert_eq!(m.support_vectors.len(), 2);
        let expected_alpha = 1.0 / (1.0 - (-4.0 * gamma).exp());
        for c in &m.dual_coefs {
            assert!((c.abs() - expected_alpha).abs() < 1e-9);
        }
        assert!(m.decision_value(&[0.0]).unwrap().abs() < 1e-9);
        assert!(m.diagnostics.converged);
    }

    #[test]
    fn xor_separates() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let y = [1.0, 1.0, -1.0, -1.0];
        let m = smo_train_binary(
            &refs(&pts),
            &y,
            None,
            RbfKernel::new(1.0).unwrap(),
            &SmoParams::default(),
        )
        .unwrap();
        for (p, &t) in pts.iter().zip(&y) {
            assert_eq!(m.decision_value(p).unwrap().signum(), t);
        }
    }

    #[test]
    fn empty_support_returns_bias() {
        let m = SvmBinaryModel {
            support_vectors: vec![],
            dual_coefs: vec![],
            bias: 0.25,
            kernel: RbfKernel::new(1.0).unwrap(),
            diagnostics: SmoDiagnostics::default(),
        };
        assert_eq!(m.decision_value(&[1.0, 2.0, 3.0]).unwrap(), 0.25);
    }

    #[test]
    fn rejects_bad_input() {
        let pts = vec![vec![0.0], vec![1.0]];
        let k = RbfKernel::new(1.0).unwrap();
        let p = SmoParams::default();
        assert!(smo_train_binary(&refs(&pts), &[1.0, 1.0], None, k, &p).is_err());
        assert!(smo_train_binary(&refs(&pts), &[1.0, 0.0], None, k, &p).is_err());
        assert!(smo_train_binary(&refs(&pts), &[1.0, -1.0], Some(&[0.0, 0.0]), k, &p).is_err());
        let bad = SmoParams { cost: 0.0, ..p };
        assert!(smo_train_binary(&refs(&pts), &[1.0, -1.0], None, k, &bad).is_err());
    }

    #[test]
    fn weighted_bounds() {
        let b = box_bounds(10.0, 4, Some(&[1.0, 1.0, 1.0, 1.0])).unwrap();
        assert_eq!(b, vec![10.0; 4]);
        let b = box_bounds(10.0, 2, Some(&[0.75, 0.25])).unwrap();
        assert_eq!(b, vec![15.0, 5.0]);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let pts: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()])
            .collect();
        let y: Vec<f64> = (0..30).map(|i| if i % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let params = SmoParams {
            max_passes: 1,
            ..SmoParams::default()
        };
        let m = smo_train_binary(&refs(&pts), &y, None, RbfKernel::new(2.0).unwrap(), &params).unwrap();
        assert!(!m.diagnostics.converged);
        assert_eq!(m.diagnostics.passes, 1);
    }
}
