//! Random passive-Gaussian-state ensembles.
//!
//! A product of single-mode squeezed states is rotated by a Haar-random
//! passive (unitary) transformation and reduced to `k` of its `n` modes. This
//! crate computes the reduced symplectic spectrum and entropy, exact Haar
//! moments of the concentration functional through Weingarten calculus, and
//! runs reproducible Monte Carlo ensembles that compare the two.

pub mod entropy;
pub mod error;
pub mod haar;
pub mod harness;
pub mod moments;
pub mod profiles;
pub mod symplectic;
pub mod weingarten;

pub use error::{Error, Result};
pub use haar::{sample_haar_unitary, SeededStream};
pub use harness::{EnsembleConfig, RunSummary, TrialRecord};
pub use moments::{MomentInputs, MomentReport};
pub use profiles::{ProfileSpec, ScalingConfig};
pub use symplectic::{
    CovarianceMatrix, PassiveSymplectic, SqueezingSpectrum, SymplecticForm, SymplecticSpectrum,
};
