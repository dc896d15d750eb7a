//! Seeded samplers: Haar-random pure states and Haar-random unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::states::PureState;

/// Haar-random pure state on the given subsystem dimensions, sampled as a
/// normalized complex Gaussian vector.
pub fn haar_pure_state<R: Rng>(dims: &[usize], rng: &mut R) -> PureState {
    let total: usize = dims.iter().product();
    let mut amps: Vec<Complex64> = (0..total)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    PureState::new(dims.to_vec(), amps).expect("normalized by construction")
}

/// Haar-random `n x n` unitary via QR of a complex Ginibre matrix with the
/// usual phase fix on the R diagonal.
pub fn haar_unitary<R: Rng>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase.conj();
        }
    }
    q
}
