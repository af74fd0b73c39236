//! Spectral initialization for sparse phase retrieval.
//!
//! The crate implements the generalized exponential spectral pursuit
//! initializer (gESP) together with the pieces it is built from:
//!
//! * [`numerics`]: complex-vector helpers, the phase-invariant distance, the
//!   structure function `s(p)` and the sample-complexity objective used to
//!   pick `p`.
//! * [`signal`]: k-sparse ground-truth generators.
//! * [`measurement`]: complex Gaussian sensing and phaseless observations.
//! * [`spectrum`]: the matrix-free weighted outer-product spectrum.
//! * [`eigen`]: top eigenpair of a small Hermitian matrix.
//! * [`gesp`]: the four-step initializer and its `p` strategies.
//! * [`baselines`]: comparison initializers.
//!
//! ```
//! use gesp_core::prelude::*;
//! use rand::SeedableRng;
//!
//! let mut rng = rand::rngs::StdRng::seed_from_u64(7);
//! let spec = SignalModelSpec::new(SignalModel::Gaussian, 64, 4);
//! let x = generate(&spec, &mut rng).unwrap();
//! let a = sample_sensing(64, 400, &mut rng).unwrap();
//! let meas = measure(&x, a).unwrap();
//! let est = gesp(&meas, 4, PStrategy::SqrtK, None).unwrap();
//! assert_eq!(est.support.len(), 4);
//! ```

pub mod baselines;
pub mod eigen;
pub mod error;
pub mod gesp;
pub mod measurement;
pub mod numerics;
pub mod signal;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub mod prelude {
    pub use crate::baselines::{
        diag_two_step_init, esp_init, run_baseline, truncated_power_init, BaselineKind,
    };
    pub use crate::eigen::{max_eigvec, EigResult, HermitianMatrix};
    pub use crate::error::{Error, Result};
    pub use crate::gesp::{gesp, residual_score, InitEstimate, PStrategy};
    pub use crate::measurement::{measure, sample_sensing, MeasurementSet, SensingMatrix};
    pub use crate::numerics::{
        dist, magnitude_profile, p_objective, p_opt, raw_relative_error, relative_error,
        structure_function, top_k_indices, ComplexVec, IndexSet, MagnitudeProfile, PVariant,
    };
    pub use crate::signal::{generate, sample_support, SignalModel, SignalModelSpec, SparseSignal};
    pub use crate::spectrum::{SpectrumOperator, WeightingKind};
    pub use num_complex::Complex64;
}
