use nalgebra::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar::{sample_haar_unitary, SeededStream};
use crate::symplectic::{
    average_energy, concentration_f, eta_embed_unchecked, reduce_covariance, rotated_fiducial, ComplexMatrix,
    SqueezingSpectrum,
};

/// Step sizes used for nearby pairs, cycled through.
const NEARBY_STEPS: [f64; 3] = [1e-1, 1e-2, 1e-3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub pairs: usize,
    /// Largest `|f(U) - f(V)| / ||U - V||_2` over all pairs.
    pub max_quotient: f64,
    pub max_quotient_independent: f64,
    pub max_quotient_nearby: f64,
    /// `32 sqrt(2k) ||Z||_∞⁴`.
    pub bound: f64,
}

impl LipschitzReport {
    pub fn within_bound(&self) -> bool {
        self.max_quotient <= self.bound
    }
}

/// `32 sqrt(2k) ||Z||_∞⁴`.
pub fn lipschitz_bound(z: &SqueezingSpectrum, k: usize) -> f64 {
    32.0 * (2.0 * k as f64).sqrt() * z.max().powi(4)
}

/// `f(U)` for the reduced state of the first `k` modes.
pub fn f_of_unitary(z: &SqueezingSpectrum, k: usize, u: &ComplexMatrix) -> Result<f64> {
    let full = rotated_fiducial(z, &eta_embed_unchecked(u))?;
    concentration_f(&reduce_covariance(&full, k)?, average_energy(z))
}

/// Hilbert-Schmidt norm `sqrt(tr(A* A))`.
fn hs_norm(a: &ComplexMatrix) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `U (I - X)^{-1} (I + X)` with `X = (step/2) H` for a random skew-Hermitian
/// `H` of unit norm: a unitary at distance about `step` from `U`.
fn nearby_unitary<R: Rng + ?Sized>(u: &ComplexMatrix, step: f64, rng: &mut R) -> ComplexMatrix {
    let n = u.nrows();
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let h = (&g - g.adjoint()) * Complex::new(0.5, 0.0);
    let x = &h * Complex::new(0.5 * step / hs_norm(&h), 0.0);
    let id = ComplexMatrix::identity(n, n);
    let inv = (&id - &x).try_inverse().expect("I - X is invertible for skew-Hermitian X");
    u * inv * (id + x)
}

/// Largest observed difference quotient of `f` over `pairs` unitary pairs.
/// Even-numbered pairs are independent Haar draws; odd-numbered pairs are a
/// Haar draw and a small perturbation of it.
pub fn lipschitz_probe(z: &SqueezingSpectrum, k: usize, pairs: usize, seed: u64) -> Result<LipschitzReport> {
    if pairs == 0 {
        return Err(Error::InvalidSpec("pairs must be at least 1".into()));
    }
    let n = z.modes();
    if k == 0 || k > n {
        return Err(Error::InvalidSubsystem { k, n });
    }
    let mut independent = 0.0f64;
    let mut nearby = 0.0f64;
    for i in 0..pairs {
        let mut rng = SeededStream::new(seed, i as u64).rng();
        let u = sample_haar_unitary(n, &mut rng);
        let v = if i % 2 == 0 {
            sample_haar_unitary(n, &mut rng)
        } else {
            nearby_unitary(&u, NEARBY_STEPS[(i / 2) % NEARBY_STEPS.len()], &mut rng)
        };
        let dist = hs_norm(&(&u - &v));
        if dist == 0.0 {
            continue;
        }
        let q = (f_of_unitary(z, k, &u)? - f_of_unitary(z, k, &v)?).abs() / dist;
        if i % 2 == 0 {
            independent = independent.max(q);
        } else {
            nearby = nearby.max(q);
        }
    }
    Ok(LipschitzReport {
        pairs,
        max_quotient: independent.max(nearby),
        max_quotient_independent: independent,
        max_quotient_nearby: nearby,
        bound: lipschitz_bound(z, k),
    })
}
