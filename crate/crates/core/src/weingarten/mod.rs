//! Exact Weingarten calculus for the unitary group.
//!
//! `Wg(n, σ)` is evaluated from the character expansion over Young diagrams
//! with `p` boxes. [`gram_weingarten_oracle`] computes the same numbers by
//! inverting the Gram matrix `G(σ, τ) = n^{#cycles(σ⁻¹τ)}` and shares no code
//! with the character route beyond permutation bookkeeping.

mod character;
pub mod exact;
mod partition;
mod permutation;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use character::{character_chi, irrep_dimension, CharacterTable};
pub use partition::{partitions, CycleType, Partition, YoungDiagram};
pub use permutation::Permutation;

use crate::error::{Error, Result};
use crate::symplectic::RealMatrix;

/// Largest order accepted by the Gram oracle.
pub const MAX_GRAM_ORDER: usize = 6;

/// Dimension of the `U(n)` irrep labelled by `λ`, by the hook-content formula
/// `∏ (n + j - i) / hook(i, j)`.
pub fn unitary_irrep_dimension(lambda: &YoungDiagram, n: usize) -> Result<BigRational> {
    if n < lambda.rows() {
        return Err(Error::RowOverflow {
            rows: lambda.rows(),
            n,
        });
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (i, j) in lambda.cells() {
        num *= BigInt::from(n + j - i);
        den *= BigInt::from(lambda.hook(i, j));
    }
    Ok(BigRational::new(num, den))
}

/// `Wg(n, σ)` for `σ` of the given cycle type, as an exact rational.
///
/// Requires `n >= p`, so every diagram with `p` boxes has at most `n` rows.
pub fn weingarten(n: usize, sigma: &CycleType) -> Result<BigRational> {
    let p = sigma.size();
    if n < p {
        return Err(Error::DimensionTooSmall { n, required: p });
    }
    let mut table = CharacterTable::new();
    let identity = Partition::from_unsorted(vec![1; p]);
    let mut sum = BigRational::zero();
    for lambda in partitions(p) {
        let dim = table.chi(&lambda, &identity)?;
        let chi = table.chi(&lambda, sigma)?;
        if chi == 0 {
            continue;
        }
        let term = BigRational::from_integer(BigInt::from(dim * dim * chi));
        sum += term / unitary_irrep_dimension(&lambda, n)?;
    }
    let factorial: BigInt = (1..=p).map(BigInt::from).product();
    Ok(sum / BigRational::from_integer(&factorial * &factorial))
}

pub fn weingarten_f64(n: usize, sigma: &CycleType) -> Result<f64> {
    Ok(weingarten(n, sigma)?.to_f64().unwrap_or(f64::NAN))
}

/// `Wg(n, ·)` on every cycle type of `S_p`, from the inverse Gram matrix.
///
/// `G` commutes with conjugation, so `G⁻¹(id, ·)` is a class function and
/// solving `G x = e_id` reduces to one equation per conjugacy class:
/// `Σ_C (Σ_{τ ∈ C} n^{#cycles(σ_C⁻¹ τ)}) x_C = [σ_C = id]`.
pub fn gram_weingarten_oracle(n: usize, p: usize) -> Result<BTreeMap<CycleType, BigRational>> {
    if p == 0 || p > MAX_GRAM_ORDER {
        return Err(Error::UnsupportedOrder {
            p,
            max: MAX_GRAM_ORDER,
        });
    }
    if n < p {
        return Err(Error::DimensionTooSmall { n, required: p });
    }
    let classes = partitions(p);
    let index: BTreeMap<&CycleType, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let perms = Permutation::all(p);
    let class_of: Vec<usize> = perms.iter().map(|t| index[&t.cycle_type()]).collect();
    let powers: Vec<BigInt> = (0..=p).map(|e| BigInt::from(n).pow(e as u32)).collect();

    let mut system = vec![vec![BigRational::zero(); classes.len()]; classes.len()];
    let mut rhs = vec![BigRational::zero(); classes.len()];
    for (i, class) in classes.iter().enumerate() {
        let rep_inv = Permutation::from_cycle_type(class).inverse();
        let mut row = vec![BigInt::zero(); classes.len()];
        for (tau, &c) in perms.iter().zip(&class_of) {
            row[c] += &powers[rep_inv.compose(tau).num_cycles()];
        }
        system[i] = row.into_iter().map(BigRational::from_integer).collect();
        if class.parts().iter().all(|&l| l == 1) {
            rhs[i] = BigRational::one();
        }
    }
    let solution = exact::solve(system, rhs).ok_or(Error::SingularGram)?;
    Ok(classes.into_iter().zip(solution).collect())
}

/// Closed form of `E[U B U* Π U B U* - U A Uᵀ Π Ū A U*]` for diagonal `A`, `B`
/// and a diagonal 0/1 projector `Π`. The result is diagonal.
pub fn haar_average_bb_minus_aa(a: &[f64], b: &[f64], pi: &[f64]) -> Result<RealMatrix> {
    let n = pi.len();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, required: 2 });
    }
    for v in [a, b] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    if pi.iter().any(|&x| x != 0.0 && x != 1.0) {
        return Err(Error::Domain("projector entries must be 0 or 1".into()));
    }
    let nf = n as f64;
    let tr_b = b.iter().sum::<f64>();
    let tr_b2 = b.iter().map(|x| x * x).sum::<f64>();
    let tr_a2 = a.iter().map(|x| x * x).sum::<f64>();
    let tr_pi = pi.iter().sum::<f64>();
    let c1 = 1.0 / (nf * nf - 1.0);
    let c2 = 1.0 / (nf * (nf * nf - 1.0));
    let pi_coeff = c1 * (tr_b * tr_b - tr_a2) + c2 * (tr_a2 - tr_b2);
    let id_coeff = c1 * (tr_b2 - tr_a2) * tr_pi + c2 * (tr_a2 - tr_b * tr_b) * tr_pi;
    Ok(RealMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        pi.iter().map(|&p| pi_coeff * p + id_coeff),
    )))
}
