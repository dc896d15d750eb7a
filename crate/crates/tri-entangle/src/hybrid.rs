//! The qubit-qubit-coherent hybrid family `(|00α₁⟩ + |11α₂⟩)/√2` with real
//! displacements, its marginal impurities, and the displacement-grid area
//! sweep.
//!
//! The coherent branches attach to orthogonal qubit pairs, so the state is
//! exactly normalized for any displacements; all marginal impurities follow
//! from the overlap `t = ⟨α₁|α₂⟩` through the 2×2 Gram matrix.

use serde::Serialize;

use crate::error::Result;
use crate::geometry::{area_from_sides, area_normalization};
use crate::measures::BipartitionVector;

/// A member of the two-branch hybrid family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridState {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl HybridState {
    pub fn new(alpha1: f64, alpha2: f64) -> Self {
        Self { alpha1, alpha2 }
    }

    pub fn overlap(&self) -> f64 {
        coherent_overlap(self.alpha1, self.alpha2)
    }
}

/// `⟨α₁|α₂⟩ = exp(−(α₁−α₂)²/2)` for real displacements.
pub fn coherent_overlap(alpha1: f64, alpha2: f64) -> f64 {
    (-(alpha1 - alpha2).powi(2) / 2.0).exp()
}

/// Marginal impurities `(I_A, I_B, I_C)`.
///
/// The qubit marginals are maximally mixed regardless of the displacements;
/// the oscillator marginal is `½(|α₁⟩⟨α₁| + |α₂⟩⟨α₂|)` with purity
/// `(1 + t²)/2` from its Gram matrix.
pub fn hybrid_impurities(h: &HybridState) -> [f64; 3] {
    let t = h.overlap();
    [0.5, 0.5, (1.0 - t * t) / 2.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridPoint {
    pub alpha1: f64,
    pub alpha2: f64,
    pub impurities: [f64; 3],
    /// Normalized impurity-triangle area at the sweep exponent.
    pub area: f64,
}

/// Normalized impurity-triangle area of one family member.
pub fn hybrid_area(h: &HybridState, alpha: f64) -> Result<f64> {
    let v = BipartitionVector::new(hybrid_impurities(h))?;
    let raw = area_from_sides(crate::geometry::sides(&v, alpha))?;
    Ok(raw * area_normalization::<f64>())
}

/// Area table over a displacement grid; `alpha` is the side exponent on the
/// impurity measure (the non-obtuse regime `α = 1/2` is the default choice).
pub fn hybrid_area_sweep(grid1: &[f64], grid2: &[f64], alpha: f64) -> Result<Vec<HybridPoint>> {
    let mut out = Vec::with_capacity(grid1.len() * grid2.len());
    for &a1 in grid1 {
        for &a2 in grid2 {
            let h = HybridState::new(a1, a2);
            out.push(HybridPoint {
                alpha1: a1,
                alpha2: a2,
                impurities: hybrid_impurities(&h),
                area: hybrid_area(&h, alpha)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn equal_displacements_degenerate() {
        let h = HybridState::new(0.7, 0.7);
        assert_eq!(hybrid_impurities(&h), [0.5, 0.5, 0.0]);
        assert_abs_diff_eq!(hybrid_area(&h, 0.5).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn distant_displacements_approach_ghz() {
        let h = HybridState::new(-4.0, 4.0);
        let i = hybrid_impurities(&h);
        assert_abs_diff_eq!(i[2], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(hybrid_area(&h, 0.5).unwrap(), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn oscillator_impurity_matches_fock_oracle() {
        // Truncated Fock expansion of ρ_C = ½(|α₁⟩⟨α₁| + |α₂⟩⟨α₂|); the
        // tail beyond 40 photons is < 1e-15 for |α| ≤ 3.
        let coherent = |a: f64| -> Vec<f64> {
            let mut v = Vec::with_capacity(41);
            let mut term = (-a * a / 2.0).exp();
            v.push(term);
            for n in 1..=40usize {
                term *= a / (n as f64).sqrt();
                v.push(term);
            }
            v
        };
        for (a1, a2) in [(0.0, 1.0), (0.3, -0.8), (1.5, 2.5)] {
            let v1 = coherent(a1);
            let v2 = coherent(a2);
            let dot: f64 = v1.iter().zip(&v2).map(|(x, y)| x * y).sum();
            let n1: f64 = v1.iter().map(|x| x * x).sum();
            let n2: f64 = v2.iter().map(|x| x * x).sum();
            let purity = 0.25 * (n1 * n1 + n2 * n2 + 2.0 * dot * dot);
            let oracle = 1.0 - purity;
            let h = HybridState::new(a1, a2);
            assert_abs_diff_eq!(hybrid_impurities(&h)[2], oracle, epsilon = 1e-12);
        }
        // Gram eigenvalues ½(1 ± t) for α₁=0, α₂=1 give t = e^{−1/2}.
        let t = (-0.5f64).exp();
        let gram = [(1.0 + t) / 2.0, (1.0 - t) / 2.0];
        let purity: f64 = gram.iter().map(|p| p * p).sum();
        assert_abs_diff_eq!(
            hybrid_impurities(&HybridState::new(0.0, 1.0))[2],
            1.0 - purity,
            epsilon = 1e-12
        );
    }

    #[test]
    fn sweep_bounds_symmetry_and_triangle() {
        let grid: Vec<f64> = (0..50).map(|i| -2.0 + 4.0 * i as f64 / 49.0).collect();
        let table = hybrid_area_sweep(&grid, &grid, 0.5).unwrap();
        assert_eq!(table.len(), 2500);
        let n = grid.len();
        for (idx, p) in table.iter().enumerate() {
            assert!(p.area <= 0.5 + 1e-10, "area bound broken at {p:?}");
            assert!(p.area >= -1e-12);
            // Impurity triangle relation per permutation.
            let i = p.impurities;
            for k in 0..3 {
                let (a, b) = ((k + 1) % 3, (k + 2) % 3);
                assert!(i[k] <= i[a] + i[b] + 1e-9);
            }
            // Symmetry under swapping the displacements.
            let (r, c) = (idx / n, idx % n);
            let swapped = &table[c * n + r];
            assert_abs_diff_eq!(p.area, swapped.area, epsilon = 1e-12);
            if (p.alpha1 - p.alpha2).abs() < 1e-12 {
                assert_abs_diff_eq!(p.area, 0.0, epsilon = 1e-12);
            }
        }
    }
}
