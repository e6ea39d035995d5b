//! Entropy functionals of symplectic eigenvalues. Natural logarithms (nats).

use crate::error::{Error, Result};
use crate::symplectic::SymplecticSpectrum;

/// Mean photon number `N(λ) = (λ - 1)/2`.
pub fn photon_number(lambda: f64) -> Result<f64> {
    if !(lambda >= 1.0) {
        return Err(Error::Domain(format!("symplectic eigenvalue {lambda} < 1")));
    }
    Ok(0.5 * (lambda - 1.0))
}

/// `g(N) = (N+1) log(N+1) - N log N`, with `g(0) = 0`.
pub fn entropy_g(photons: f64) -> Result<f64> {
    if !(photons >= 0.0) {
        return Err(Error::Domain(format!("photon number {photons} < 0")));
    }
    if photons == 0.0 {
        return Ok(0.0);
    }
    Ok((photons + 1.0) * photons.ln_1p() - photons * photons.ln())
}

/// `G(λ) = g(N(λ))`, the entropy of one thermal mode.
pub fn entropy_big_g(lambda: f64) -> Result<f64> {
    entropy_g(photon_number(lambda)?)
}

/// Inverse temperature `β(λ) = log((λ+1)/(λ-1))`; `+∞` at the pure point.
pub fn inverse_temperature_beta(lambda: f64) -> Result<f64> {
    if !(lambda >= 1.0) {
        return Err(Error::Domain(format!("symplectic eigenvalue {lambda} < 1")));
    }
    if lambda == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok((2.0 / (lambda - 1.0)).ln_1p())
}

/// `S = Σ_j G(λ_j)`.
///
/// Eigenvalues inside the extraction tolerance below 1 are read as 1.
pub fn gaussian_entropy(spec: &SymplecticSpectrum) -> Result<f64> {
    spec.lambdas
        .iter()
        .map(|&l| {
            let l = if (1.0 - crate::symplectic::WILLIAMSON_TOL..1.0).contains(&l) {
                1.0
            } else {
                l
            };
            entropy_big_g(l)
        })
        .sum()
}
