//! Haar-distributed unitaries from reproducible per-trial random streams.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::symplectic::ComplexMatrix;

/// A `(seed, stream_id)` pair naming one independent ChaCha stream.
///
/// The seed fixes the key and the stream id selects the ChaCha stream
/// counter, so trial `i` of a run draws the same numbers no matter which
/// worker executes it or in what order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeededStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// Standard complex Gaussian with `E|g|^2 = 1`.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Samples an `n x n` unitary from Haar measure.
///
/// A Ginibre matrix is QR-factorized and each column of `Q` is multiplied by
/// the phase of the matching diagonal entry of `R`. Without that correction
/// the result is not Haar distributed.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    assert!(n >= 1, "dimension must be positive");
    // Filled column by column so the draw order is fixed.
    let ginibre = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let modulus = d.norm();
        if modulus > 0.0 {
            let phase = d / modulus;
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::unitarity_defect;

    #[test]
    fn unitary_and_deterministic() {
        for n in [1, 2, 5, 16] {
            let a = sample_haar_unitary(n, &mut SeededStream::new(3, 7).rng());
            let b = sample_haar_unitary(n, &mut SeededStream::new(3, 7).rng());
            assert_eq!(a, b);
            assert!(unitarity_defect(&a) < 1e-12);
        }
        let a = sample_haar_unitary(4, &mut SeededStream::new(3, 7).rng());
        let b = sample_haar_unitary(4, &mut SeededStream::new(3, 8).rng());
        assert_ne!(a, b);
    }

    /// Mean and standard error of a sample.
    fn mean_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn one_dimensional_phase_is_uniform() {
        let mut rng = SeededStream::new(11, 0).rng();
        let args: Vec<f64> = (0..100_000)
            .map(|_| {
                let u = sample_haar_unitary(1, &mut rng)[(0, 0)];
                assert!((u.norm() - 1.0).abs() < 1e-14);
                u.arg().rem_euclid(std::f64::consts::TAU)
            })
            .collect();
        let (mean, se) = mean_se(&args);
        assert!((mean - std::f64::consts::PI).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn second_moments_n4() {
        let mut rng = SeededStream::new(12, 0).rng();
        let mut diag = Vec::with_capacity(100_000);
        let mut cross_re = Vec::with_capacity(100_000);
        let mut cross_im = Vec::with_capacity(100_000);
        for _ in 0..100_000 {
            let u = sample_haar_unitary(4, &mut rng);
            diag.push(u[(0, 0)].norm_sqr());
            let c = u[(0, 0)] * u[(1, 1)].conj();
            cross_re.push(c.re);
            cross_im.push(c.im);
        }
        let (m, se) = mean_se(&diag);
        assert!((m - 0.25).abs() < 3.0 * se, "{m} ± {se}");
        let (m, se) = mean_se(&cross_re);
        assert!(m.abs() < 3.0 * se, "{m} ± {se}");
        let (m, se) = mean_se(&cross_im);
        assert!(m.abs() < 3.0 * se, "{m} ± {se}");
    }

    /// Two-sample Kolmogorov-Smirnov statistic.
    fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
        }
        d
    }

    #[test]
    fn left_invariance_witness() {
        let n = 4;
        let draws = 10_000;
        let v = sample_haar_unitary(n, &mut SeededStream::new(99, 0).rng());
        let mut rng_a = SeededStream::new(13, 0).rng();
        let mut rng_b = SeededStream::new(13, 1).rng();
        let plain: Vec<f64> = (0..draws)
            .map(|_| sample_haar_unitary(n, &mut rng_a).trace().re)
            .collect();
        let shifted: Vec<f64> = (0..draws)
            .map(|_| (&v * sample_haar_unitary(n, &mut rng_b)).trace().re)
            .collect();
        let d = ks_statistic(plain, shifted);
        // Critical value at significance 0.001: c(α) sqrt((m + n) / (m n)).
        let c_alpha = (-(0.001f64 / 2.0).ln() / 2.0).sqrt();
        let critical = c_alpha * (2.0 / draws as f64).sqrt();
        assert!(d < critical, "KS {d} >= {critical}");
    }
}
