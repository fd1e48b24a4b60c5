//! RBF kernel and the Gram-row cache used by the SMO solver.

use std::collections::HashMap;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Problems up to this many samples get a fully materialized Gram matrix.
pub const FULL_CACHE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RbfKernel {
    gamma: f64,
}

impl RbfKernel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!("RBF gamma must be positive, got {gamma}")));
        }
        Ok(RbfKernel { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `exp(−γ‖x−y‖²)`; callers guarantee equal lengths.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        (-self.gamma * d2).exp()
    }
}

/// Checked kernel evaluation.
pub fn rbf(x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(RbfKernel::new(gamma)?.eval(x, y))
}

/// Gram rows over a fixed point set: all rows up front for small problems,
/// otherwise computed on demand and kept in a bounded LRU.
pub struct KernelCache<'a> {
    points: &'a [&'a [f64]],
    kernel: RbfKernel,
    store: Store,
}

enum Store {
    Full(Vec<Rc<[f64]>>),
    Lru {
        capacity: usize,
        clock: u64,
        rows: HashMap<usize, (Rc<[f64]>, u64)>,
    },
}

impl<'a> KernelCache<'a> {
    pub fn new(points: &'a [&'a [f64]], kernel: RbfKernel) -> Self {
        if points.len() <= FULL_CACHE_LIMIT {
            Self::full(points, kernel)
        } else {
            // ~256 MiB of rows at most
            let capacity = ((1usize << 25) / points.len()).max(2);
            Self::lru(points, kernel, capacity)
        }
    }

    pub fn full(points: &'a [&'a [f64]], kernel: RbfKernel) -> Self {
        let n = points.len();
        let mut flat = vec![0.0; n * n];
        for i in 0..n {
            flat[i * n + i] = 1.0;
            for j in 0..i {
                let v = kernel.eval(points[i], points[j]);
                flat[i * n + j] = v;
                flat[j * n + i] = v;
            }
        }
        let rows = flat.chunks(n.max(1)).take(n).map(Rc::from).collect();
        KernelCache {
            points,
            kernel,
            store: Store::Full(rows),
        }
    }

    pub fn lru(points: &'a [&'a [f64]], kernel: RbfKernel, capacity: usize) -> Self {
        KernelCache {
            points,
            kernel,
            store: Store::Lru {
                capacity: capacity.max(2),
                clock: 0,
                rows: HashMap::new(),
            },
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_full(&self) -> bool {
        matches!(self.store, Store::Full(_))
    }

    pub fn row(&mut self, i: usize) -> Rc<[f64]> {
        match &mut self.store {
            Store::Full(rows) => rows[i].clone(),
            Store::Lru { capacity, clock, rows } => {
                *clock += 1;
                if let Some((row, stamp)) = rows.get_mut(&i) {
                    *stamp = *clock;
                    return row.clone();
                }
                if rows.len() >= *capacity {
                    let oldest = rows
                        .iter()
                        .min_by_key(|(_, (_, stamp))| *stamp)
                        .map(|(&k, _)| k)
                        .expect("cache is non-empty");
                    rows.remove(&oldest);
                }
                let xi = self.points[i];
                let row: Rc<[f64]> = self.points.iter().map(|xj| self.kernel.eval(xi, xj)).collect();
                rows.insert(i, (row.clone(), *clock));
                row
            }
        }
    }

    pub fn cached_rows(&self) -> usize {
        match &self.store {
            Store::Full(rows) => rows.len(),
            Store::Lru { rows, .. } => rows.len(),
        }
    }
}
