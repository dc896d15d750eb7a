//! Gaussian covariance-matrix machinery: purity, impurity and Rényi-2
//! entropies of marginals, determinant identities for pure tripartite states,
//! and a seeded sampler of random pure covariance matrices.
//!
//! Conventions: ℏ = 1, vacuum CM = identity, quadratures interleaved as
//! `(q₁, p₁, q₂, p₂, …)`. A state is pure iff `det σ = 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::haar_unitary;

const SYMMETRY_TOL: f64 = 1e-10;
const UNCERTAINTY_TOL: f64 = 1e-9;
const PURITY_TOL: f64 = 1e-8;

/// Covariance matrix of a tripartite Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCovariance {
    mode_partition: [usize; 3],
    sigma: DMatrix<f64>,
}

impl GaussianCovariance {
    /// Validates symmetry and the uncertainty relation `σ + iΩ ⪰ 0`.
    pub fn new(mode_partition: [usize; 3], sigma: DMatrix<f64>) -> Result<Self> {
        if mode_partition.contains(&0) {
            return Err(Error::InvalidDims(format!(
                "each party needs at least one mode, got {mode_partition:?}"
            )));
        }
        let n: usize = mode_partition.iter().sum();
        if sigma.nrows() != 2 * n || sigma.ncols() != 2 * n {
            return Err(Error::InvalidDims(format!(
                "covariance matrix must be {0}x{0} for {n} modes, got {1}x{2}",
                2 * n,
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        let mut asym = 0.0f64;
        for i in 0..2 * n {
            for j in 0..i {
                asym = asym.max((sigma[(i, j)] - sigma[(j, i)]).abs());
            }
        }
        if asym > SYMMETRY_TOL {
            return Err(Error::UnphysicalCovariance(format!(
                "not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        // σ + iΩ is Hermitian; its smallest eigenvalue certifies physicality.
        let mut h = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        let omega = symplectic_form(n);
        for i in 0..2 * n {
            for j in 0..2 * n {
                h[(i, j)] = Complex64::new(sigma[(i, j)], omega[(i, j)]);
            }
        }
        let min_eig = h
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eig < -UNCERTAINTY_TOL {
            return Err(Error::UnphysicalCovariance(format!(
                "uncertainty relation violated (min eigenvalue of sigma + i*Omega is {min_eig:.3e})"
            )));
        }
        Ok(Self {
            mode_partition,
            sigma,
        })
    }

    /// Vacuum of the given mode partition.
    pub fn vacuum(mode_partition: [usize; 3]) -> Self {
        let n: usize = mode_partition.iter().sum();
        Self {
            mode_partition,
            sigma: DMatrix::identity(2 * n, 2 * n),
        }
    }

    /// Two-mode squeezed vacuum on parties A, B (one mode each) tensored
    /// with vacuum on C.
    pub fn tmsv_with_vacuum(r: f64) -> Self {
        let ch = (2.0 * r).cosh();
        let sh = (2.0 * r).sinh();
        let mut sigma = DMatrix::identity(6, 6);
        for (q, p) in [(0, 1), (2, 3)] {
            sigma[(q, q)] = ch;
            sigma[(p, p)] = ch;
        }
        sigma[(0, 2)] = sh;
        sigma[(2, 0)] = sh;
        sigma[(1, 3)] = -sh;
        sigma[(3, 1)] = -sh;
        Self {
            mode_partition: [1, 1, 1],
            sigma,
        }
    }

    pub fn mode_partition(&self) -> [usize; 3] {
        self.mode_partition
    }

    pub fn n_modes(&self) -> usize {
        self.mode_partition.iter().sum()
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn is_pure(&self) -> bool {
        (self.sigma.determinant() - 1.0).abs() <= PURITY_TOL
    }

    fn mode_range(&self, party: usize) -> std::ops::Range<usize> {
        let start: usize = self.mode_partition[..party].iter().sum();
        start..start + self.mode_partition[party]
    }

    /// Principal submatrix on the modes of the given parties.
    pub fn submatrix(&self, parties: &[usize]) -> Result<DMatrix<f64>> {
        if parties.is_empty() || parties.iter().any(|&p| p >= 3) {
            return Err(Error::InvalidArgument(format!(
                "party set {parties:?} invalid for a tripartite state"
            )));
        }
        let mut rows: Vec<usize> = Vec::new();
        for &p in parties {
            for m in self.mode_range(p) {
                rows.push(2 * m);
                rows.push(2 * m + 1);
            }
        }
        let k = rows.len();
        let mut out = DMatrix::zeros(k, k);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in rows.iter().enumerate() {
                out[(a, b)] = self.sigma[(i, j)];
            }
        }
        Ok(out)
    }
}

/// Standard symplectic form in interleaved ordering.
fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n, 2 * n);
    for m in 0..n {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

fn marginal_determinant(cm: &GaussianCovariance, parties: &[usize]) -> Result<f64> {
    let det = cm.submatrix(parties)?.determinant();
    if det < 1.0 - PURITY_TOL {
        return Err(Error::UnphysicalCovariance(format!(
            "marginal determinant {det} below 1"
        )));
    }
    Ok(det.max(1.0))
}

/// Impurity `1 − 1/√(det σ_sub)` of the marginal on `parties`.
pub fn gaussian_impurity(cm: &GaussianCovariance, parties: &[usize]) -> Result<f64> {
    Ok(1.0 - 1.0 / marginal_determinant(cm, parties)?.sqrt())
}

/// Rényi-2 entropy `log₂ det σ_sub` of the marginal on `parties` (base 2 to
/// match the discrete convention; only the area scale depends on the base).
pub fn gaussian_renyi2(cm: &GaussianCovariance, parties: &[usize]) -> Result<f64> {
    Ok(marginal_determinant(cm, parties)?.log2())
}

/// Random pure tripartite covariance matrix `σ = S Sᵀ` for a Haar
/// orthogonal-symplectic × squeezer × orthogonal-symplectic Euler sandwich,
/// squeezing parameters uniform in `[0, 1.5]`.
pub fn random_pure_tripartite_cm<R: Rng>(
    mode_partition: [usize; 3],
    rng: &mut R,
) -> GaussianCovariance {
    let n: usize = mode_partition.iter().sum();
    let o1 = orthogonal_symplectic_block(n, rng);
    let o2 = orthogonal_symplectic_block(n, rng);
    let mut z = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let r: f64 = rng.gen_range(0.0..1.5);
        z[(i, i)] = r.exp();
        z[(n + i, n + i)] = (-r).exp();
    }
    let s_block = o1 * z * o2;
    // Permute from (q-block, p-block) to interleaved ordering.
    let mut perm = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        perm[(2 * k, k)] = 1.0;
        perm[(2 * k + 1, n + k)] = 1.0;
    }
    let s = &perm * s_block * perm.transpose();
    let sigma = &s * s.transpose();
    GaussianCovariance::new(mode_partition, sigma).expect("symplectic image of the vacuum is physical")
}

/// Real orthogonal-symplectic matrix in (q-block, p-block) ordering, from a
/// Haar unitary `U = X + iY` via `[[X, −Y], [Y, X]]`.
fn orthogonal_symplectic_block<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let u = haar_unitary(n, rng);
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            o[(i, j)] = u[(i, j)].re;
            o[(i, n + j)] = -u[(i, j)].im;
            o[(n + i, j)] = u[(i, j)].im;
            o[(n + i, n + j)] = u[(i, j)].re;
        }
    }
    o
}

/// Determinant and impurity relations of a pure tripartite Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianRelationsReport {
    /// `det σ_i` per party.
    pub det_marginals: [f64; 3],
    /// `det σ_{jk}` of the complementary pair per party.
    pub det_complements: [f64; 3],
    /// `det σ_j · det σ_k − det σ_i` per party (subadditivity, ≥ 0).
    pub subadditivity_slack: [f64; 3],
    /// Marginal impurities `I_i = 1 − 1/√(det σ_i)`.
    pub impurities: [f64; 3],
    /// `(I_j + I_k − I_i) − I_j I_k` per party (impurity chain, ≥ 0).
    pub impurity_chain_slack: [f64; 3],
    pub all_hold: bool,
}

/// Verifies `det σ_i = det σ_{jk}`, `det σ_i ≤ det σ_j det σ_k`, and the
/// impurity chain `I_j + I_k − I_i ≥ I_j I_k ≥ 0` for every permutation.
pub fn gaussian_det_relations(cm: &GaussianCovariance) -> Result<GaussianRelationsReport> {
    if !cm.is_pure() {
        return Err(Error::UnphysicalCovariance(format!(
            "determinant relations need a pure state; det sigma = {}",
            cm.sigma.determinant()
        )));
    }
    let mut det_marginals = [0.0; 3];
    let mut det_complements = [0.0; 3];
    let mut impurities = [0.0; 3];
    for i in 0..3 {
        let (j, k) = (((i + 1) % 3), ((i + 2) % 3));
        det_marginals[i] = marginal_determinant(cm, &[i])?;
        det_complements[i] = marginal_determinant(cm, &[j, k])?;
        impurities[i] = 1.0 - 1.0 / det_marginals[i].sqrt();
    }
    let mut subadditivity_slack = [0.0; 3];
    let mut impurity_chain_slack = [0.0; 3];
    let mut all_hold = true;
    for i in 0..3 {
        let (j, k) = (((i + 1) % 3), ((i + 2) % 3));
        let scale = det_marginals[i].max(det_complements[i]);
        if (det_marginals[i] - det_complements[i]).abs() > 1e-8 * scale {
            all_hold = false;
        }
        subadditivity_slack[i] = det_marginals[j] * det_marginals[k] - det_marginals[i];
        if subadditivity_slack[i] < -1e-8 * det_marginals[i].max(1.0) {
            all_hold = false;
        }
        impurity_chain_slack[i] =
            impurities[j] + impurities[k] - impurities[i] - impurities[j] * impurities[k];
        if impurity_chain_slack[i] < -1e-9 {
            all_hold = false;
        }
    }
    Ok(GaussianRelationsReport {
        det_marginals,
        det_complements,
        subadditivity_slack,
        impurities,
        impurity_chain_slack,
        all_hold,
    })
}

/// Thermal single-mode covariance with symplectic eigenvalue `v`, embedded as
/// a convenience for tests and examples.
pub fn thermal_mode_cm(v: f64) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(vec![v, v]))
}
