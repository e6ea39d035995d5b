//! Exact Haar averages of `tr((JM)^2)` and `tr((JM)^4)` for the reduced
//! covariance matrix of a randomly rotated squeezed product state.
//!
//! Both moments are linear combinations of trace monomials in
//! `A = (Z - Z⁻¹)/2` and `B = (Z + Z⁻¹)/2` with rational coefficients in
//! `(n, k)`. Everything is evaluated over the rationals and converted to `f64`
//! only in [`MomentReport`]; the fourth-moment rows cancel to a small residual
//! that float evaluation would swamp at large `n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::SqueezingSpectrum;

fn q(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Diagonals of `A` and `B` for `n` modes, plus the subsystem size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentInputs {
    n: usize,
    k: usize,
    a: Vec<BigRational>,
    b: Vec<BigRational>,
}

impl MomentInputs {
    /// Checks `b_j >= 1` and `b_j^2 - a_j^2 = 1` exactly.
    pub fn new(k: usize, a: Vec<BigRational>, b: Vec<BigRational>) -> Result<Self> {
        let n = b.len();
        if a.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.len(),
            });
        }
        if k == 0 || k > n {
            return Err(Error::InvalidSubsystem { k, n });
        }
        for (j, (aj, bj)) in a.iter().zip(&b).enumerate() {
            if *bj < BigRational::one() || bj * bj - aj * aj != BigRational::one() {
                return Err(Error::Domain(format!("mode {j}: b^2 - a^2 != 1 or b < 1")));
            }
        }
        Ok(Self { n, k, a, b })
    }

    /// From exact squeezing parameters `z_j >= 1`.
    pub fn from_rational_squeezing(z: &[BigRational], k: usize) -> Result<Self> {
        let half = q(1, 2);
        let mut a = Vec::with_capacity(z.len());
        let mut b = Vec::with_capacity(z.len());
        for zj in z {
            if *zj < BigRational::one() {
                return Err(Error::InvalidSqueezing(format!("z = {zj} < 1")));
            }
            let inv = zj.recip();
            a.push((zj - &inv) * &half);
            b.push((zj + &inv) * &half);
        }
        Self::new(k, a, b)
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn subsystem(&self) -> usize {
        self.k
    }

    pub fn a(&self) -> &[BigRational] {
        &self.a
    }

    pub fn b(&self) -> &[BigRational] {
        &self.b
    }

    pub fn power_sums(&self) -> PowerSums {
        PowerSums::from_diagonals(&self.a, &self.b)
    }

    /// `λ̄ = tr B / n`, the average energy per mode.
    pub fn average_energy(&self) -> BigRational {
        self.b.iter().sum::<BigRational>() / q(self.n as i128, 1)
    }
}

/// `a_j = (z_j - 1/z_j)/2`, `b_j = (z_j + 1/z_j)/2`, with each `z_j` read as the
/// exact binary value of its `f64`.
pub fn moment_inputs_from_spectrum(z: &SqueezingSpectrum, k: usize) -> Result<MomentInputs> {
    let exact: Vec<BigRational> = z
        .values()
        .iter()
        .map(|&v| BigRational::from_float(v).expect("squeezing values are finite"))
        .collect();
    MomentInputs::from_rational_squeezing(&exact, k)
}

/// Trace monomials in the diagonal matrices `A`, `B`.
///
/// `tr[(AB)^2]` and `tr[A^2 B^2]` coincide for diagonal inputs but are kept
/// as separate fields to mirror the coefficient table row for row.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSums {
    pub tr_b: BigRational,
    pub tr_b2: BigRational,
    pub tr_b3: BigRational,
    pub tr_b4: BigRational,
    pub tr_a2: BigRational,
    pub tr_a4: BigRational,
    pub tr_abab: BigRational,
    pub tr_a2b2: BigRational,
    pub tr_a2b: BigRational,
}

impl PowerSums {
    pub fn from_diagonals(a: &[BigRational], b: &[BigRational]) -> Self {
        let sum = |f: &dyn Fn(&BigRational, &BigRational) -> BigRational| -> BigRational {
            a.iter().zip(b).map(|(x, y)| f(x, y)).sum()
        };
        let tr_a2b2 = sum(&|x, y| x * x * y * y);
        Self {
            tr_b: sum(&|_, y| y.clone()),
            tr_b2: sum(&|_, y| y * y),
            tr_b3: sum(&|_, y| y * y * y),
            tr_b4: sum(&|_, y| y * y * y * y),
            tr_a2: sum(&|x, _| x * x),
            tr_a4: sum(&|x, _| x * x * x * x),
            tr_abab: tr_a2b2.clone(),
            tr_a2b2,
            tr_a2b: sum(&|x, y| x * x * y),
        }
    }
}

fn require_modes(n: usize, required: usize) -> Result<()> {
    if n < required {
        return Err(Error::DimensionTooSmall { n, required });
    }
    Ok(())
}

/// `λ̃² = ((n-k)/(n(n²-1))) (tr B)² - ((k+1)/(n(n+1))) tr A² + ((kn-1)/(n(n²-1))) tr B²`.
pub fn tilde_lambda_squared_from_sums(n: usize, k: usize, s: &PowerSums) -> Result<BigRational> {
    require_modes(n, 2)?;
    let (n, k) = (n as i128, k as i128);
    let d = n * (n * n - 1);
    Ok(q(n - k, d) * &s.tr_b * &s.tr_b - q(k + 1, n * (n + 1)) * &s.tr_a2 + q(k * n - 1, d) * &s.tr_b2)
}

/// The three-row expansion of `E tr((JM)^2)` over `(tr B)², tr A², tr B²`.
pub fn second_moment_table(n: usize, k: usize, s: &PowerSums) -> Result<BigRational> {
    require_modes(n, 2)?;
    let (n, k) = (n as i128, k as i128);
    let d = n * (n * n - 1);
    Ok(q(2 * k * (k - n), d) * &s.tr_b * &s.tr_b + q(2 * k * (k + 1), n * (n + 1)) * &s.tr_a2
        - q(2 * k * (k * n - 1), d) * &s.tr_b2)
}

/// The twelve-row expansion of `E tr((JM)^4)`.
pub fn fourth_moment_table(n: usize, k: usize, s: &PowerSums) -> Result<BigRational> {
    require_modes(n, 4)?;
    let (n, k) = (n as i128, k as i128);
    let (n2, n3) = (n * n, n * n * n);
    let (k2, k3) = (k * k, k * k * k);
    let d1 = n * (n3 * n3 - 14 * n2 * n2 + 49 * n2 - 36);
    let d2 = (n - 2) * (n - 1) * n2 * (n + 1) * (n + 2) * (n + 3);
    let d3 = (n - 1) * n2 * (n + 1) * (n + 2) * (n + 3);

    let rows: [(BigRational, BigRational); 12] = [
        (
            q(2 * k * (-5 * k3 + 10 * n * k2 - (6 * n2 + 1) * k + n3 + n), d1),
            &s.tr_b * &s.tr_b * &s.tr_b * &s.tr_b,
        ),
        (
            q(
                -8 * k * ((n2 + 1) * k3 - n * (n2 + 11) * k2 + 11 * (n2 + 1) * k - n * (n2 + 11)),
                d1,
            ),
            &s.tr_b * &s.tr_b3,
        ),
        (
            q(4 * k * (5 * n * k3 - 2 * (4 * n2 + 9) * k2 + n * (3 * n2 + 28) * k - 10 * n2), d1),
            &s.tr_b * &s.tr_b * &s.tr_b2,
        ),
        (
            q(2 * k * ((n3 + n) * k3 - 20 * n2 * k2 + 5 * n * (n2 + 13) * k - 4 * (4 * n2 + 9)), d1),
            s.tr_b4.clone(),
        ),
        (
            q(
                2 * k * ((3 - 2 * n2) * k3 + 2 * n * (n2 + 6) * k2 - (16 * n2 + 21) * k + n * (n2 + 21)),
                d1,
            ),
            &s.tr_b2 * &s.tr_b2,
        ),
        (
            q(
                -4 * k
                    * ((3 * n + 4) * k3 - 2 * n * (2 * n + 1) * k2 + (n3 - 3 * n2 - n - 4) * k
                        + n * (n2 + n + 4)),
                d2,
            ),
            &s.tr_b * &s.tr_b * &s.tr_a2,
        ),
        (
            q(-4 * k * (k + 1) * ((n + 1) * k2 - (n2 + 1) * k - (n - 1) * n), d3),
            &s.tr_a2 * &s.tr_a2,
        ),
        (
            q(2 * k * (k + 1) * ((n2 + n + 2) * k2 + (3 * n2 - 5 * n - 2) * k + 4 * (n - 1) * n), d3),
            s.tr_a4.clone(),
        ),
        (
            q(4 * k * (k + 1) * ((n2 + 5 * n + 4) * k2 - (n2 + n + 4) * k - 2 * n * (n + 1)), d3),
            s.tr_abab.clone(),
        ),
        (
            q(
                -8 * k
                    * ((n3 + 2 * n2 - n - 4) * k3 + n * (n2 - 5 * n - 4) * k2 + (n3 - 8 * n2 + 5 * n + 4) * k
                        + n * (n2 - n + 8)),
                d2,
            ),
            s.tr_a2b2.clone(),
        ),
        (
            q(
                4 * k
                    * ((2 * n2 + 3 * n - 4) * k3 - 2 * n * (n2 + n - 1) * k2 + (-n3 + n2 - 5 * n + 4) * k
                        + n * (n2 + 5 * n - 4)),
                d2,
            ),
            &s.tr_a2 * &s.tr_b2,
        ),
        (
            q(
                8 * k
                    * ((n2 + n + 4) * k3 + n * (-n2 + n - 8) * k2 - (2 * n3 - 5 * n2 + 5 * n + 4) * k
                        + n * (-n2 + 5 * n + 4)),
                d2,
            ),
            &s.tr_b * &s.tr_a2b,
        ),
    ];
    Ok(rows.iter().map(|(alpha, m)| alpha * m).sum())
}

pub fn tilde_lambda_squared_exact(mi: &MomentInputs) -> Result<BigRational> {
    tilde_lambda_squared_from_sums(mi.n, mi.k, &mi.power_sums())
}

/// `E tr((JM)^2) = -2k λ̃²`, exact.
pub fn second_moment_trace_exact(mi: &MomentInputs) -> Result<BigRational> {
    Ok(tilde_lambda_squared_exact(mi)? * q(-2 * mi.k as i128, 1))
}

pub fn fourth_moment_trace_exact(mi: &MomentInputs) -> Result<BigRational> {
    fourth_moment_table(mi.n, mi.k, &mi.power_sums())
}

/// `E f = E tr((JM)^4) + 2 λ̄² E tr((JM)^2) + 2k λ̄⁴`, exact.
pub fn expected_f_exact(mi: &MomentInputs) -> Result<BigRational> {
    let fourth = fourth_moment_trace_exact(mi)?;
    let second = second_moment_trace_exact(mi)?;
    let l2 = {
        let l = mi.average_energy();
        &l * &l
    };
    Ok(fourth + q(2, 1) * &l2 * second + q(2 * mi.k as i128, 1) * &l2 * &l2)
}

pub fn tilde_lambda_squared(mi: &MomentInputs) -> Result<f64> {
    Ok(to_f64(&tilde_lambda_squared_exact(mi)?))
}

pub fn second_moment_trace(mi: &MomentInputs) -> Result<f64> {
    Ok(to_f64(&second_moment_trace_exact(mi)?))
}

pub fn fourth_moment_trace(mi: &MomentInputs) -> Result<f64> {
    Ok(to_f64(&fourth_moment_trace_exact(mi)?))
}

pub fn expected_f(mi: &MomentInputs) -> Result<f64> {
    Ok(to_f64(&expected_f_exact(mi)?))
}

/// Float summary of the exact moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub n: usize,
    pub k: usize,
    pub lambda_bar: f64,
    pub tilde_lambda_sq: f64,
    pub second_moment: f64,
    pub fourth_moment: f64,
    pub expected_f: f64,
}

pub fn moment_report(mi: &MomentInputs) -> Result<MomentReport> {
    let ef = expected_f_exact(mi)?;
    debug_assert!(!ef.is_negative(), "E f must be nonnegative");
    Ok(MomentReport {
        n: mi.n,
        k: mi.k,
        lambda_bar: to_f64(&mi.average_energy()),
        tilde_lambda_sq: tilde_lambda_squared(mi)?,
        second_moment: second_moment_trace(mi)?,
        fourth_moment: fourth_moment_trace(mi)?,
        expected_f: to_f64(&ef),
    })
}

impl PowerSums {
    /// All-zero sums, useful as a starting point for hand-built test points.
    pub fn zero() -> Self {
        let z = BigRational::zero;
        Self {
            tr_b: z(),
            tr_b2: z(),
            tr_b3: z(),
            tr_b4: z(),
            tr_a2: z(),
            tr_a4: z(),
            tr_abab: z(),
            tr_a2b2: z(),
            tr_a2b: z(),
        }
    }
}
