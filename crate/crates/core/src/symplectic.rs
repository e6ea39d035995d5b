//! Covariance-matrix level description of centered Gaussian states.
//!
//! Phase-space coordinates are ordered `(Q_1..Q_n, P_1..P_n)` throughout. The
//! symplectic form is `J = [[0, -I], [I, 0]]` in that ordering, the reduction
//! to the first `k` modes keeps rows/columns `0..k` and `n..n+k`, and the
//! passive embedding of a unitary is `[[Re U, Im U], [-Im U, Re U]]`.

use nalgebra::{Complex, DMatrix, Schur, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex<f64>>;

/// Relative tolerance for the symmetry check on covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Smallest eigenvalue of `M + iJ` still accepted as physical.
pub const UNCERTAINTY_TOL: f64 = 1e-8;
/// Max entry of `U*U - I` for a matrix accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Pairing failure threshold, relative to `max(1, ||M||_max)`.
pub const PAIRING_TOL: f64 = 1e-6;
/// Symplectic eigenvalues below `1 - WILLIAMSON_TOL` are rejected.
pub const WILLIAMSON_TOL: f64 = 1e-6;

/// Squeezing parameters `z_1..z_n`, each at least 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SqueezingSpectrum(Vec<f64>);

impl SqueezingSpectrum {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidSqueezing("need at least one mode".into()));
        }
        if let Some((j, &bad)) = z
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 1.0)
        {
            return Err(Error::InvalidSqueezing(format!(
                "z[{j}] = {bad} is not a finite value >= 1"
            )));
        }
        Ok(Self(z))
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn constant(z: f64, n: usize) -> Result<Self> {
        Self::new(vec![z; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    /// `||Z||_inf`, the largest squeezing parameter.
    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(1.0, f64::max)
    }
}

impl TryFrom<Vec<f64>> for SqueezingSpectrum {
    type Error = Error;

    fn try_from(z: Vec<f64>) -> Result<Self> {
        Self::new(z)
    }
}

impl From<SqueezingSpectrum> for Vec<f64> {
    fn from(z: SqueezingSpectrum) -> Self {
        z.0
    }
}

/// The standard symplectic form on `n` modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> RealMatrix {
        let n = self.n;
        let mut j = RealMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j[(i, n + i)] = -1.0;
            j[(n + i, i)] = 1.0;
        }
        j
    }

    /// `J * x` without forming `J`: the top half becomes `-x_bottom`, the
    /// bottom half becomes `x_top`.
    pub fn apply_left(&self, x: &RealMatrix) -> RealMatrix {
        let n = self.n;
        assert_eq!(x.nrows(), 2 * n, "row count must be 2n");
        let mut out = RealMatrix::zeros(2 * n, x.ncols());
        out.rows_mut(0, n).copy_from(&(-x.rows(n, n)));
        out.rows_mut(n, n).copy_from(&x.rows(0, n));
        out
    }
}

/// Covariance matrix of a centered Gaussian state on `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    entries: RealMatrix,
}

impl CovarianceMatrix {
    /// Validates symmetry and the uncertainty relation `M + iJ >= 0`.
    pub fn new(entries: RealMatrix) -> Result<Self> {
        let cov = Self::shape_checked(entries)?;
        let scale = cov.max_abs().max(1.0);
        let asym = (&cov.entries - cov.entries.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidCovariance(format!(
                "not symmetric: max |M - M^T| = {asym:e}"
            )));
        }
        let min_eig = cov.uncertainty_min_eigenvalue();
        if min_eig < -UNCERTAINTY_TOL {
            return Err(Error::InvalidCovariance(format!(
                "uncertainty relation violated: min eig(M + iJ) = {min_eig:e}"
            )));
        }
        Ok(cov)
    }

    /// Skips the `M + iJ` eigenvalue check. Used for matrices produced from a
    /// valid covariance matrix by rotation or reduction, which preserve it.
    pub(crate) fn new_unchecked(entries: RealMatrix) -> Self {
        debug_assert!(entries.is_square() && entries.nrows() % 2 == 0);
        Self {
            n: entries.nrows() / 2,
            entries,
        }
    }

    fn shape_checked(entries: RealMatrix) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 || entries.nrows() % 2 != 0 {
            return Err(Error::InvalidCovariance(format!(
                "expected a nonempty 2n x 2n matrix, got {} x {}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self::new_unchecked(entries))
    }

    /// Thermal state `lambda * I_{2n}`.
    pub fn thermal(n: usize, lambda: f64) -> Result<Self> {
        if !(lambda >= 1.0) {
            return Err(Error::Domain(format!("thermal value {lambda} < 1")));
        }
        Ok(Self::new_unchecked(RealMatrix::identity(2 * n, 2 * n) * lambda))
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &RealMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> RealMatrix {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.amax()
    }

    /// `J M` for the form of matching size.
    pub fn j_times(&self) -> RealMatrix {
        SymplecticForm::new(self.n).apply_left(&self.entries)
    }

    /// Smallest eigenvalue of the Hermitian matrix `M + iJ`.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let j = SymplecticForm::new(self.n).matrix();
        let h = ComplexMatrix::from_fn(2 * self.n, 2 * self.n, |r, c| {
            Complex::new(self.entries[(r, c)], j[(r, c)])
        });
        SymmetricEigen::new(h)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Real orthogonal symplectic matrix, the image of a unitary under the
/// passive embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct PassiveSymplectic {
    n: usize,
    entries: RealMatrix,
}

impl PassiveSymplectic {
    pub fn identity(n: usize) -> Self {
        Self {
            n,
            entries: RealMatrix::identity(2 * n, 2 * n),
        }
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &RealMatrix {
        &self.entries
    }

    /// Max entry of `O O^T - I`.
    pub fn orthogonality_defect(&self) -> f64 {
        let dim = 2 * self.n;
        (&self.entries * self.entries.transpose() - RealMatrix::identity(dim, dim)).amax()
    }

    /// Max entry of `O J O^T - J`.
    pub fn symplectic_defect(&self) -> f64 {
        let form = SymplecticForm::new(self.n);
        let ojot = &self.entries * form.apply_left(&self.entries.transpose());
        (ojot - form.matrix()).amax()
    }
}

/// Max entry of `U* U - I`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    (gram - ComplexMatrix::identity(n, n))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
}

/// Embeds an `n x n` unitary as `[[Re U, Im U], [-Im U, Re U]]`.
pub fn eta_embed(u: &ComplexMatrix) -> Result<PassiveSymplectic> {
    if !u.is_square() || u.nrows() == 0 {
        return Err(Error::DimensionMismatch {
            expected: u.nrows(),
            found: u.ncols(),
        });
    }
    let deviation = unitarity_defect(u);
    if !(deviation <= UNITARY_TOL) {
        return Err(Error::NonUnitaryInput { deviation });
    }
    Ok(eta_embed_unchecked(u))
}

pub(crate) fn eta_embed_unchecked(u: &ComplexMatrix) -> PassiveSymplectic {
    let n = u.nrows();
    let mut o = RealMatrix::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let z = u[(r, c)];
            o[(r, c)] = z.re;
            o[(r, n + c)] = z.im;
            o[(n + r, c)] = -z.im;
            o[(n + r, n + c)] = z.re;
        }
    }
    PassiveSymplectic { n, entries: o }
}

/// `diag(z_1..z_n, 1/z_1..1/z_n)`.
pub fn fiducial_covariance(z: &SqueezingSpectrum) -> CovarianceMatrix {
    let n = z.modes();
    let diag = nalgebra::DVector::from_iterator(
        2 * n,
        z.values()
            .iter()
            .copied()
            .chain(z.values().iter().map(|v| 1.0 / v)),
    );
    CovarianceMatrix::new_unchecked(RealMatrix::from_diagonal(&diag))
}

/// `O M O^T`.
pub fn rotate_covariance(m: &CovarianceMatrix, o: &PassiveSymplectic) -> Result<CovarianceMatrix> {
    if m.modes() != o.modes() {
        return Err(Error::DimensionMismatch {
            expected: m.modes(),
            found: o.modes(),
        });
    }
    let rotated = &o.entries * &m.entries * o.entries.transpose();
    Ok(CovarianceMatrix::new_unchecked(symmetrized(rotated)))
}

/// `O (Z ⊕ Z⁻¹) O^T`, the rotated fiducial state. Same result as
/// [`rotate_covariance`] on [`fiducial_covariance`] with one matrix product
/// instead of two.
pub fn rotated_fiducial(z: &SqueezingSpectrum, o: &PassiveSymplectic) -> Result<CovarianceMatrix> {
    let n = z.modes();
    if n != o.modes() {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: o.modes(),
        });
    }
    let mut scaled = o.entries.clone();
    for (j, &zj) in z.values().iter().enumerate() {
        scaled.column_mut(j).scale_mut(zj);
        scaled.column_mut(n + j).scale_mut(1.0 / zj);
    }
    let rotated = scaled * o.entries.transpose();
    Ok(CovarianceMatrix::new_unchecked(symmetrized(rotated)))
}

/// `||(J M)^2 + I||_F`, an upper bound on `max_j |λ_j - 1|` over the whole
/// symplectic spectrum of `M` that needs no eigensolver.
///
/// The eigenvalues of `(J M)^2 + I` are `1 - λ_j^2`, and
/// `|λ_j - 1| <= |1 - λ_j^2|` for `λ_j >= 0`.
pub fn purity_defect(m: &CovarianceMatrix) -> f64 {
    let jm = m.j_times();
    let mut sq = &jm * &jm;
    for i in 0..sq.nrows() {
        sq[(i, i)] += 1.0;
    }
    sq.norm()
}

fn symmetrized(x: RealMatrix) -> RealMatrix {
    let xt = x.transpose();
    (x + xt) * 0.5
}

/// Covariance matrix of the first `k` modes: rows and columns
/// `{0..k} ∪ {n..n+k}`.
pub fn reduce_covariance(m: &CovarianceMatrix, k: usize) -> Result<CovarianceMatrix> {
    let n = m.modes();
    if k == 0 || k > n {
        return Err(Error::InvalidSubsystem { k, n });
    }
    let index = |r: usize| if r < k { r } else { n + (r - k) };
    let sub = RealMatrix::from_fn(2 * k, 2 * k, |r, c| m.entries[(index(r), index(c))]);
    Ok(CovarianceMatrix::new_unchecked(sub))
}

/// Symplectic eigenvalues sorted descending, with the largest real part seen
/// among the eigenvalues of `JM` kept as a quality diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub lambdas: Vec<f64>,
    pub pairing_residual: f64,
}

impl SymplecticSpectrum {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.lambdas.first().copied().unwrap_or(1.0)
    }

    /// `max_j |lambda_j - 1|`; zero for a pure state.
    pub fn purity_residual(&self) -> f64 {
        self.lambdas.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Eigenvalues of the real non-symmetric matrix `JM`, grouped into `±iλ`
/// pairs.
pub fn symplectic_spectrum(m: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    let scale = m.max_abs().max(1.0);
    let tolerance = PAIRING_TOL * scale;
    let jm = m.j_times();
    let dim = jm.nrows();
    let schur = Schur::try_new(jm, f64::EPSILON, 1000 * dim.max(10)).ok_or(Error::PairingFailure {
        residual: f64::INFINITY,
        tolerance,
    })?;
    let eigenvalues: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    pair_conjugates(&eigenvalues, tolerance)
}

/// Greedy nearest-conjugate matching of `+iλ` against `-iλ`.
fn pair_conjugates(eigenvalues: &[Complex<f64>], tolerance: f64) -> Result<SymplecticSpectrum> {
    let residual = eigenvalues.iter().map(|e| e.re.abs()).fold(0.0, f64::max);
    let fail = |residual: f64| Error::PairingFailure { residual, tolerance };
    if residual > tolerance {
        return Err(fail(residual));
    }

    let mut upper: Vec<f64> = eigenvalues.iter().filter(|e| e.im > 0.0).map(|e| e.im).collect();
    let mut lower: Vec<f64> = eigenvalues.iter().filter(|e| e.im < 0.0).map(|e| -e.im).collect();
    if upper.len() != lower.len() || 2 * upper.len() != eigenvalues.len() {
        return Err(fail(residual.max(tolerance * 2.0)));
    }
    upper.sort_by(|a, b| b.total_cmp(a));
    lower.sort_by(|a, b| b.total_cmp(a));

    let mut used = vec![false; lower.len()];
    let mut lambdas = Vec::with_capacity(upper.len());
    for &u in &upper {
        let (best, gap) = lower
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, &l)| (i, (u - l).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("equal counts");
        if gap > tolerance {
            return Err(fail(gap));
        }
        used[best] = true;
        lambdas.push(0.5 * (u + lower[best]));
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));

    if let Some(&smallest) = lambdas.last() {
        if smallest < 1.0 - WILLIAMSON_TOL {
            return Err(Error::InvalidCovariance(format!(
                "symplectic eigenvalue {smallest} below 1"
            )));
        }
    }
    Ok(SymplecticSpectrum {
        lambdas,
        pairing_residual: residual,
    })
}

/// `λ(n) = (1/2n) Σ (z_j + 1/z_j)`.
pub fn average_energy(z: &SqueezingSpectrum) -> f64 {
    let n = z.modes() as f64;
    z.values().iter().map(|v| v + 1.0 / v).sum::<f64>() / (2.0 * n)
}

/// Mode energy `E = z + 1/z`; the inverse of [`squeezing_from_energy`].
pub fn mode_energy_from_squeezing(z: f64) -> Result<f64> {
    if !(z >= 1.0) || !z.is_finite() {
        return Err(Error::Domain(format!("squeezing {z} < 1")));
    }
    Ok(z + 1.0 / z)
}

/// `z = (E + sqrt(E^2 - 4)) / 2`, defined for `E >= 2`.
pub fn squeezing_from_energy(e: f64) -> Result<f64> {
    if !(e >= 2.0) || !e.is_finite() {
        return Err(Error::Domain(format!("mode energy {e} < 2")));
    }
    // (E - 2)(E + 2) avoids cancellation near the vacuum.
    let z = 0.5 * (e + ((e - 2.0) * (e + 2.0)).sqrt());
    Ok(z.max(1.0))
}

/// `tr((J M)^2)` and `tr((J M)^4)` by direct matrix arithmetic.
pub fn jm_power_traces(m: &CovarianceMatrix) -> (f64, f64) {
    let jm = m.j_times();
    let sq = &jm * &jm;
    (sq.trace(), trace_of_product(&sq, &sq))
}

fn trace_of_product(a: &RealMatrix, b: &RealMatrix) -> f64 {
    a.iter()
        .zip(b.transpose().iter())
        .map(|(x, y)| x * y)
        .sum()
}

/// `tr[((J M)^2 + λ̄^2 I)^2]` by direct matrix arithmetic.
pub fn concentration_f(m_red: &CovarianceMatrix, lambda_bar: f64) -> Result<f64> {
    if !(lambda_bar >= 1.0) {
        return Err(Error::Domain(format!("average energy {lambda_bar} < 1")));
    }
    let jm = m_red.j_times();
    let mut y = &jm * &jm;
    let shift = lambda_bar * lambda_bar;
    for i in 0..y.nrows() {
        y[(i, i)] += shift;
    }
    Ok(trace_of_product(&y, &y))
}

/// `Δ = sqrt(Σ_j (λ̄^2 - λ_j^2)^2)`.
pub fn spectral_deviation_delta(spec: &SymplecticSpectrum, lambda_bar: f64) -> f64 {
    let l2 = lambda_bar * lambda_bar;
    spec.lambdas
        .iter()
        .map(|l| {
            let d = l2 - l * l;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}
