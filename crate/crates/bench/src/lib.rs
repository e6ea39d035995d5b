//! Shared fixtures for the benchmarks.

use gaussent::SqueezingSpectrum;

/// One squeezed mode of strength `z` followed by `n - 1` vacua.
pub fn peaked(n: usize, z: f64) -> SqueezingSpectrum {
    let mut values = vec![1.0; n];
    values[0] = z;
    SqueezingSpectrum::new(values).expect("valid squeezing")
}

/// Squeezing that decreases linearly from `top` to 1.
pub fn ramp(n: usize, top: f64) -> SqueezingSpectrum {
    let step = if n > 1 { (top - 1.0) / (n - 1) as f64 } else { 0.0 };
    SqueezingSpectrum::new((0..n).map(|j| top - step * j as f64).collect()).expect("valid squeezing")
}
