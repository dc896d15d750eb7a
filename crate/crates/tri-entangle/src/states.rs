//! Pure states, density operators, partial trace, and spectral data.
//!
//! Subsystem ordering is little-endian by declaration order: party 0 is the
//! fastest-varying digit of the flat basis index. All bipartitions are given
//! as index sets, never by position arithmetic at call sites.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;
const HERMITICITY_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const EIGEN_TOL: f64 = 1e-10;

/// Normalized complex amplitude tensor over an ordered list of subsystem
/// dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: DVector<Complex64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidDims(format!(
                "every subsystem dimension must be >= 2, got {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::InvalidDims(format!(
                "amplitude vector has length {}, expected {total}",
                amps.len()
            )));
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sq));
        }
        Ok(Self {
            dims,
            amps: DVector::from_vec(amps),
        })
    }

    /// Builds a state from sparse `(digits, amplitude)` terms, e.g.
    /// `(&[0,0,0], c0)` for `c0|000>`.
    pub fn from_terms(dims: Vec<usize>, terms: &[(&[usize], Complex64)]) -> Result<Self> {
        let total: usize = dims.iter().product();
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        for (digits, amp) in terms {
            let idx = flat_index(&dims, digits)?;
            amps[idx] += *amp;
        }
        Self::new(dims, amps)
    }

    /// Computational basis state `|digits>`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        Self::from_terms(dims.clone(), &[(digits, Complex64::new(1.0, 0.0))])
    }

    /// `cos θ |000> + sin θ |111>` on three qubits.
    pub fn ghz(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_terms(
            vec![2, 2, 2],
            &[
                (&[0, 0, 0], Complex64::new(c, 0.0)),
                (&[1, 1, 1], Complex64::new(s, 0.0)),
            ],
        )
        .expect("GHZ state is normalized")
    }

    /// `a|100> + b|010> + c|001>` with `a^2 + b^2 + c^2 = 1`.
    pub fn w_class(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::from_terms(
            vec![2, 2, 2],
            &[
                (&[1, 0, 0], Complex64::new(a, 0.0)),
                (&[0, 1, 0], Complex64::new(b, 0.0)),
                (&[0, 0, 1], Complex64::new(c, 0.0)),
            ],
        )
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    /// Digit of the flat index `idx` belonging to `party`.
    pub fn digit(&self, idx: usize, party: usize) -> usize {
        let stride: usize = self.dims[..party].iter().product();
        (idx / stride) % self.dims[party]
    }

    /// Replaces the digit of `party` inside `idx`.
    pub fn with_digit(&self, idx: usize, party: usize, digit: usize) -> usize {
        let stride: usize = self.dims[..party].iter().product();
        let old = (idx / stride) % self.dims[party];
        (idx as isize + (digit as isize - old as isize) * stride as isize) as usize
    }
}

pub(crate) fn flat_index(dims: &[usize], digits: &[usize]) -> Result<usize> {
    if digits.len() != dims.len() {
        return Err(Error::InvalidDims(format!(
            "expected {} digits, got {}",
            dims.len(),
            digits.len()
        )));
    }
    let mut idx = 0;
    let mut stride = 1;
    for (d, (&digit, &dim)) in digits.iter().zip(dims).enumerate() {
        if digit >= dim {
            return Err(Error::InvalidDims(format!(
                "digit {digit} out of range for party {d} with dimension {dim}"
            )));
        }
        idx += digit * stride;
        stride *= dim;
    }
    Ok(idx)
}

/// Hermitian, positive-semidefinite, unit-trace matrix on a finite-dimensional
/// subsystem. Validated eagerly on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || matrix.ncols() != dim {
            return Err(Error::InvalidDims(format!(
                "density operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut asym: f64 = 0.0;
        for i in 0..dim {
            for j in i..dim {
                asym = asym.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if asym > HERMITICITY_TOL {
            return Err(Error::NotHermitian(asym));
        }
        let trace: Complex64 = matrix.diagonal().iter().sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(trace.re));
        }
        let eigen = SymmetricEigen::new(matrix.clone());
        if let Some(min) = eigen
            .eigenvalues
            .iter()
            .cloned()
            .min_by(|a, b| a.total_cmp(b))
        {
            if min < -EIGEN_TOL {
                return Err(Error::NotPositive(min));
            }
        }
        Ok(Self { dim, matrix })
    }

    /// Diagonal operator from a classical probability vector.
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        let dim = probs.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &p) in probs.iter().enumerate() {
            m[(i, i)] = Complex64::new(p, 0.0);
        }
        Self::new(m)
    }

    /// Projector onto a pure state.
    pub fn from_pure(state: &PureState) -> Self {
        let v = state.amplitudes();
        let m = v * v.adjoint();
        Self {
            dim: v.len(),
            matrix: m,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Sorted eigenvalues of a reduced state together with the smallest one,
/// the Schmidt parameter used by the qubit measure catalogue.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtProfile {
    pub lambda_min: f64,
    /// Ascending, clipped to [0, 1], summing to 1 within 1e-10.
    pub spectrum: Vec<f64>,
}

/// Reduced density operator on the kept subsystems.
pub fn partial_trace(state: &PureState, keep: &[usize]) -> Result<DensityOperator> {
    let n = state.n_parties();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() || kept.len() == n {
        return Err(Error::InvalidArgument(
            "keep set must be a nonempty strict subset of the parties".into(),
        ));
    }
    if kept.iter().any(|&p| p >= n) {
        return Err(Error::InvalidArgument(format!(
            "party index out of range in keep set {kept:?}"
        )));
    }
    let traced: Vec<usize> = (0..n).filter(|p| !kept.contains(p)).collect();
    let dims = state.dims();
    let strides: Vec<usize> = (0..n).map(|p| dims[..p].iter().product()).collect();
    let d_keep: usize = kept.iter().map(|&p| dims[p]).product();
    let d_trace: usize = traced.iter().map(|&p| dims[p]).product();

    // Flat offsets of every kept / traced digit combination.
    let offsets = |parties: &[usize], count: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(count);
        for mut idx in 0..count {
            let mut offset = 0;
            for &p in parties {
                offset += (idx % dims[p]) * strides[p];
                idx /= dims[p];
            }
            out.push(offset);
        }
        out
    };
    let keep_offsets = offsets(&kept, d_keep);
    let trace_offsets = offsets(&traced, d_trace);

    let amps = state.amplitudes();
    let mut rho = DMatrix::zeros(d_keep, d_keep);
    let mut column = vec![Complex64::new(0.0, 0.0); d_keep];
    for &t in &trace_offsets {
        for (r, &k) in keep_offsets.iter().enumerate() {
            column[r] = amps[k + t];
        }
        for r in 0..d_keep {
            for c in 0..d_keep {
                rho[(r, c)] += column[r] * column[c].conj();
            }
        }
    }
    DensityOperator::new(rho)
}

/// Eigen-decomposes a density operator into its sorted spectrum. Negative
/// round-off below `-1e-10` is rejected; smaller noise is clipped to zero.
pub fn eigen_spectrum(rho: &DensityOperator) -> Result<SchmidtProfile> {
    let eigen = SymmetricEigen::new(rho.matrix().clone());
    let mut spectrum: Vec<f64> = eigen.eigenvalues.iter().cloned().collect();
    spectrum.sort_by(|a, b| a.total_cmp(b));
    if spectrum[0] < -EIGEN_TOL {
        return Err(Error::NotPositive(spectrum[0]));
    }
    for v in &mut spectrum {
        *v = v.clamp(0.0, 1.0);
    }
    let sum: f64 = spectrum.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidTrace(sum));
    }
    let mut lambda_min = spectrum[0];
    if rho.dim() == 2 {
        lambda_min = lambda_min.min(0.5);
    }
    Ok(SchmidtProfile {
        lambda_min,
        spectrum,
    })
}

/// `1 - Tr(rho^2)`, the Tsallis-2 entropy of the state.
pub fn impurity(rho: &DensityOperator) -> f64 {
    1.0 - rho.purity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// Independent dense contraction used as the oracle for `partial_trace`.
    fn partial_trace_oracle(state: &PureState, keep: &[usize]) -> DMatrix<Complex64> {
        let n = state.n_parties();
        let dims = state.dims();
        let d_keep: usize = keep.iter().map(|&p| dims[p]).product();
        let mut rho = DMatrix::zeros(d_keep, d_keep);
        let digits = |idx: usize| -> Vec<usize> { (0..n).map(|p| state.digit(idx, p)).collect() };
        let kept_digits = |digs: &[usize]| -> usize {
            let mut out = 0;
            let mut stride = 1;
            for &p in keep {
                out += digs[p] * stride;
                stride *= dims[p];
            }
            out
        };
        let total = state.total_dim();
        for i in 0..total {
            for j in 0..total {
                let di = digits(i);
                let dj = digits(j);
                let traced_match = (0..n)
                    .filter(|p| !keep.contains(p))
                    .all(|p| di[p] == dj[p]);
                if traced_match {
                    rho[(kept_digits(&di), kept_digits(&dj))] +=
                        state.amplitudes()[i] * state.amplitudes()[j].conj();
                }
            }
        }
        rho
    }

    #[test]
    fn product_state_reduces_to_projector() {
        let s = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        let rho = partial_trace(&s, &[0]).unwrap();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn ghz_marginal_is_maximally_mixed() {
        let s = PureState::ghz(PI / 4.0);
        let rho = partial_trace(&s, &[0]).unwrap();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn ghz_pi8_marginal_matches_oracle() {
        let s = PureState::ghz(PI / 8.0);
        let rho = partial_trace(&s, &[0]).unwrap();
        let oracle = partial_trace_oracle(&s, &[0]);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    (rho.matrix()[(i, j)] - oracle[(i, j)]).norm(),
                    0.0,
                    epsilon = 1e-14
                );
            }
        }
        let c = (PI / 8.0).cos();
        let sn = (PI / 8.0).sin();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, c * c, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, sn * sn, epsilon = 1e-14);
    }

    #[test]
    fn pair_marginal_matches_oracle() {
        let s = PureState::from_terms(
            vec![2, 2, 2],
            &[
                (&[0, 0, 0], re(0.5)),
                (&[1, 0, 0], re(0.5)),
                (&[1, 1, 1], re(1.0 / 2f64.sqrt())),
            ],
        )
        .unwrap();
        let rho = partial_trace(&s, &[0, 2]).unwrap();
        let oracle = partial_trace_oracle(&s, &[0, 2]);
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(
                    (rho.matrix()[(i, j)] - oracle[(i, j)]).norm(),
                    0.0,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn eigen_spectrum_fixtures() {
        let mixed = DensityOperator::from_probabilities(&[0.5, 0.5]).unwrap();
        let p = eigen_spectrum(&mixed).unwrap();
        assert_abs_diff_eq!(p.lambda_min, 0.5, epsilon = 1e-14);

        let pure = DensityOperator::from_probabilities(&[1.0, 0.0]).unwrap();
        let p = eigen_spectrum(&pure).unwrap();
        assert_abs_diff_eq!(p.lambda_min, 0.0, epsilon = 1e-14);

        let sn = (PI / 8.0).sin();
        let rho =
            DensityOperator::from_probabilities(&[(PI / 8.0).cos().powi(2), sn * sn]).unwrap();
        let p = eigen_spectrum(&rho).unwrap();
        assert_abs_diff_eq!(p.lambda_min, sn * sn, epsilon = 1e-12);
        assert_abs_diff_eq!(p.lambda_min, 0.146447, epsilon = 1e-6);
    }

    #[test]
    fn impurity_fixtures() {
        let pure = DensityOperator::from_probabilities(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(impurity(&pure), 0.0, epsilon = 1e-14);
        let mixed = DensityOperator::from_probabilities(&[0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(impurity(&mixed), 0.5, epsilon = 1e-14);
        let skew = DensityOperator::from_probabilities(&[0.25, 0.75]).unwrap();
        assert_abs_diff_eq!(impurity(&skew), 0.375, epsilon = 1e-14);
    }

    #[test]
    fn keep_set_must_be_strict_subset() {
        let s = PureState::ghz(PI / 4.0);
        assert!(partial_trace(&s, &[]).is_err());
        assert!(partial_trace(&s, &[0, 1, 2]).is_err());
        assert!(partial_trace(&s, &[3]).is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = re(0.5);
        m[(1, 1)] = re(0.5);
        m[(0, 1)] = re(0.3);
        m[(1, 0)] = re(-0.3);
        assert!(matches!(
            DensityOperator::new(m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn complementary_impurities_agree() {
        use crate::random::haar_pure_state;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = haar_pure_state(&[2, 2, 2], &mut rng);
            let a = impurity(&partial_trace(&s, &[0]).unwrap());
            let bc = impurity(&partial_trace(&s, &[1, 2]).unwrap());
            assert_abs_diff_eq!(a, bc, epsilon = 1e-10);
        }
    }
}
