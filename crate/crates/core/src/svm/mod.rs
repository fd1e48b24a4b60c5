//! Soft-margin RBF support vector machines: SMO training for two classes,
//! one-against-one multi-class voting, and a plain-text model format.

mod io;
pub mod kernel;
pub mod ovo;
pub mod smo;

pub use io::{read_model, write_model};
pub use kernel::{rbf, KernelCache, RbfKernel};
pub use ovo::{predict_ovo, train_ovo, PairModel, PairwiseModel, SvmLearner, SvmMulticlassModel, SvmWeighting};
pub use smo::{kkt_residual, smo_solve, smo_train_binary, SmoDiagnostics, SmoParams, SmoSolution, SvmBinaryModel};

/// γ = 1/39: one over the MFCC feature count.
pub const DEFAULT_GAMMA: f64 = 1.0 / 39.0;
/// Alternative γ profile for 39-dimensional phoneme features.
pub const ALT_GAMMA: f64 = 0.008;
pub const DEFAULT_COST: f64 = 10.0;
