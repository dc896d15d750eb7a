//! Convex-roof upper bound on the triangle area of mixed tripartite states.
//!
//! Every decomposition of `ρ = Σ λ_i |e_i⟩⟨e_i|` arises from an isometry
//! applied to the eigenensemble: `|φ̃_m⟩ = Σ_i U*_{mi} √λ_i |e_i⟩`. Sampling
//! isometries and keeping the best ensemble average yields a certified upper
//! bound on the roof, monotone nonincreasing in the budget for a fixed seed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::locc::state_area;
use crate::measures::MeasureSpec;
use crate::random::haar_unitary;
use crate::states::{DensityOperator, PureState};

/// Largest supported eigendecomposition rank.
pub const MAX_ROOF_RANK: usize = 8;

const EIGENVALUE_TOL: f64 = 1e-12;

/// Upper-bounds the convex-roof triangle area (raw convention) of `rho`
/// interpreted over the subsystem dimensions `dims`.
pub fn convex_roof_area_estimate(
    rho: &DensityOperator,
    dims: &[usize],
    spec: &MeasureSpec<f64>,
    budget: usize,
    seed: u64,
) -> Result<f64> {
    if dims.len() != 3 {
        return Err(Error::InvalidArgument(format!(
            "expected 3 subsystem dimensions, got {:?}",
            dims
        )));
    }
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::InvalidDims(format!(
            "dims {:?} do not multiply to operator dimension {}",
            dims,
            rho.dim()
        )));
    }
    let eig = rho.matrix().clone().symmetric_eigen();
    let mut pairs: Vec<(f64, DVector<Complex64>)> = Vec::new();
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l > EIGENVALUE_TOL {
            pairs.push((l, eig.eigenvectors.column(i).into_owned()));
        }
    }
    let rank = pairs.len();
    if rank > MAX_ROOF_RANK {
        return Err(Error::RankTooHigh(rank, MAX_ROOF_RANK));
    }
    // Columns √λ_i |e_i⟩; a decomposition is `W U†` for any isometry U.
    let mut b = DMatrix::<Complex64>::zeros(total, rank);
    for (i, (l, v)) in pairs.iter().enumerate() {
        b.set_column(i, &(v * Complex64::new(l.sqrt(), 0.0)));
    }

    let ensemble_area = |u: &DMatrix<Complex64>| -> Result<f64> {
        // u: m×rank isometry (rows index ensemble members).
        let mut sum = 0.0;
        for m in 0..u.nrows() {
            let mut phi = DVector::<Complex64>::zeros(total);
            for i in 0..rank {
                phi += b.column(i) * u[(m, i)].conj();
            }
            let p: f64 = phi.iter().map(|c| c.norm_sqr()).sum();
            if p < 1e-14 {
                continue;
            }
            let scale = p.sqrt();
            let amps: Vec<Complex64> = phi.iter().map(|c| c / scale).collect();
            let branch = PureState::new(dims.to_vec(), amps)?;
            sum += p * state_area(&branch, spec)?;
        }
        Ok(sum)
    };

    // The eigendecomposition itself is the first candidate.
    let mut best = ensemble_area(&DMatrix::identity(rank, rank))?;
    if rank == 1 {
        return Ok(best);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut incumbent = DMatrix::<Complex64>::identity(rank, rank);
    let mut refine_scale = 0.3;
    for it in 0..budget {
        // Alternate global draws (sizes rank and 2·rank) with local
        // refinement of the incumbent by a near-identity rotation.
        let candidate = match it % 3 {
            0 => haar_unitary(rank, &mut rng),
            1 => {
                let u = haar_unitary(2 * rank, &mut rng);
                u.columns(0, rank).into_owned()
            }
            _ => {
                let g = haar_unitary(incumbent.ncols(), &mut rng);
                let blend = DMatrix::<Complex64>::identity(incumbent.ncols(), incumbent.ncols())
                    * Complex64::new(1.0 - refine_scale, 0.0)
                    + g * Complex64::new(refine_scale, 0.0);
                let q = reorthonormalize(&blend);
                &incumbent * q
            }
        };
        if let Ok(a) = ensemble_area(&candidate) {
            if a < best {
                best = a;
                if candidate.nrows() == rank {
                    incumbent = candidate;
                    refine_scale = (refine_scale * 0.9).max(0.02);
                }
            }
        }
    }
    Ok(best)
}

fn reorthonormalize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let qr = m.clone().qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..q.nrows() {
                q[(i, j)] *= phase.conj();
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{MeasureKind, MeasureSpec};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn spec() -> MeasureSpec<f64> {
        MeasureSpec::new(MeasureKind::ConcurrenceSquared, 0.5).unwrap()
    }

    fn mix(states: &[(f64, PureState)]) -> DensityOperator {
        let d = states[0].1.total_dim();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for (p, s) in states {
            let v = s.amplitudes();
            m += (v * v.adjoint()) * Complex64::new(*p, 0.0);
        }
        DensityOperator::new(m).unwrap()
    }

    #[test]
    fn rank_one_returns_pure_area_exactly() {
        let ghz = PureState::ghz(PI / 4.0);
        let rho = DensityOperator::from_pure(&ghz);
        let est = convex_roof_area_estimate(&rho, &[2, 2, 2], &spec(), 10, 1).unwrap();
        let exact = state_area(&ghz, &spec()).unwrap();
        assert_abs_diff_eq!(est, exact, epsilon = 1e-12);
        assert_abs_diff_eq!(est, 3f64.sqrt() / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn classical_ghz_mixture_is_zero() {
        let rho = mix(&[
            (0.5, PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap()),
            (0.5, PureState::basis(vec![2, 2, 2], &[1, 1, 1]).unwrap()),
        ]);
        let est = convex_roof_area_estimate(&rho, &[2, 2, 2], &spec(), 50, 2).unwrap();
        assert_abs_diff_eq!(est, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn werner_like_state_below_pure_area_and_monotone_in_budget() {
        let ghz = PureState::ghz(PI / 4.0);
        let mut m = DMatrix::<Complex64>::identity(8, 8) * Complex64::new(0.01 / 8.0, 0.0);
        let v = ghz.amplitudes();
        m += (v * v.adjoint()) * Complex64::new(0.99, 0.0);
        let rho = DensityOperator::new(m).unwrap();
        let short = convex_roof_area_estimate(&rho, &[2, 2, 2], &spec(), 30, 7).unwrap();
        let long = convex_roof_area_estimate(&rho, &[2, 2, 2], &spec(), 150, 7).unwrap();
        let pure_area = state_area(&ghz, &spec()).unwrap();
        assert!(long <= short + 1e-15, "estimate must not grow with budget");
        assert!(long > 0.0);
        assert!(long < pure_area);
    }

    #[test]
    fn rank_limit_enforced() {
        let rho = DensityOperator::from_probabilities(&[1.0 / 16.0; 16]).unwrap();
        assert!(matches!(
            convex_roof_area_estimate(&rho, &[4, 2, 2], &spec(), 5, 1),
            Err(Error::RankTooHigh(16, MAX_ROOF_RANK))
        ));
    }

    #[test]
    fn dims_validated() {
        let rho = DensityOperator::from_probabilities(&[0.5, 0.5]).unwrap();
        assert!(convex_roof_area_estimate(&rho, &[2, 2, 2], &spec(), 5, 1).is_err());
    }

    #[test]
    fn biseparable_mixture_of_bell_pairs() {
        // (|Φ+⟩_AB |0⟩_C): area 0 for every decomposition; estimator finds 0
        // already at the eigenensemble.
        let inv = 1.0 / 2f64.sqrt();
        let bell = PureState::from_terms(
            vec![2, 2, 2],
            &[
                (&[0, 0, 0], Complex64::new(inv, 0.0)),
                (&[1, 1, 0], Complex64::new(inv, 0.0)),
            ],
        )
        .unwrap();
        let rho = mix(&[
            (0.6, bell),
            (0.4, PureState::basis(vec![2, 2, 2], &[0, 0, 1]).unwrap()),
        ]);
        let est = convex_roof_area_estimate(&rho, &[2, 2, 2], &spec(), 60, 3).unwrap();
        assert_abs_diff_eq!(est, 0.0, epsilon = 1e-10);
    }
}
