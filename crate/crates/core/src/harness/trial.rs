use serde::{Deserialize, Serialize};

use crate::entropy::gaussian_entropy;
use crate::error::{Error, Result};
use crate::haar::{sample_haar_unitary, SeededStream};
use crate::profiles::{sample_profile, ProfileSpec};
use crate::symplectic::{
    average_energy, concentration_f, eta_embed_unchecked, jm_power_traces, purity_defect,
    reduce_covariance, rotated_fiducial, spectral_deviation_delta, symplectic_spectrum, ComplexMatrix,
    SqueezingSpectrum,
};

/// One realization of the rotated-and-reduced ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub n: usize,
    pub k: usize,
    pub lambda_bar: f64,
    /// Reduced symplectic eigenvalues, descending.
    pub symplectic_spectrum: Vec<f64>,
    /// Entanglement entropy in nats.
    pub entropy: f64,
    pub f_value: f64,
    pub delta: f64,
    /// Upper bound on `max_j |λ_j - 1|` for the full `n`-mode state.
    pub purity_residual: f64,
    pub tr_jm2: f64,
    pub tr_jm4: f64,
}

impl TrialRecord {
    /// `|f - 2Δ²|` relative to `max(f, 2Δ²)`; zero when both vanish.
    pub fn f_delta_discrepancy(&self) -> f64 {
        let two_d2 = 2.0 * self.delta * self.delta;
        let scale = self.f_value.abs().max(two_d2);
        if scale == 0.0 {
            0.0
        } else {
            (self.f_value - two_d2).abs() / scale
        }
    }
}

/// A trial that could not be completed, kept so failures are counted rather
/// than dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial_id: u64,
    pub reason: String,
}

/// Draws `U` from `stream` and evaluates the pipeline for squeezing `z`.
pub fn run_trial(z: &SqueezingSpectrum, k: usize, stream: SeededStream) -> Result<TrialRecord> {
    if k == 0 || k > z.modes() {
        return Err(Error::InvalidSubsystem { k, n: z.modes() });
    }
    let u = sample_haar_unitary(z.modes(), &mut stream.rng());
    trial_from_unitary(stream.stream_id, z, k, &u)
}

/// Like [`run_trial`], drawing the squeezing spectrum from `spec` first on
/// the same stream when the profile is random.
pub fn run_profile_trial(spec: &ProfileSpec, k: usize, stream: SeededStream) -> Result<TrialRecord> {
    let n = spec.modes();
    if k == 0 || k > n {
        return Err(Error::InvalidSubsystem { k, n });
    }
    let mut rng = stream.rng();
    let z = sample_profile(spec, &mut rng)?;
    let u = sample_haar_unitary(n, &mut rng);
    trial_from_unitary(stream.stream_id, &z, k, &u)
}

/// The pipeline for a given unitary `u`, assumed unitary.
pub fn trial_from_unitary(
    trial_id: u64,
    z: &SqueezingSpectrum,
    k: usize,
    u: &ComplexMatrix,
) -> Result<TrialRecord> {
    let n = z.modes();
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.nrows(),
        });
    }
    let o = eta_embed_unchecked(u);
    let full = rotated_fiducial(z, &o)?;
    let purity_residual = purity_defect(&full);
    let reduced = reduce_covariance(&full, k)?;
    let spectrum = symplectic_spectrum(&reduced)?;
    let lambda_bar = average_energy(z);
    let (tr_jm2, tr_jm4) = jm_power_traces(&reduced);
    Ok(TrialRecord {
        trial_id,
        n,
        k,
        lambda_bar,
        entropy: gaussian_entropy(&spectrum)?,
        f_value: concentration_f(&reduced, lambda_bar)?,
        delta: spectral_deviation_delta(&spectrum, lambda_bar),
        purity_residual,
        tr_jm2,
        tr_jm4,
        symplectic_spectrum: spectrum.lambdas,
    })
}
