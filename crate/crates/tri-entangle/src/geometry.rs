//! Triangle relation, Heron area, angle classification, bounds, and Hessian
//! diagnostics.
//!
//! Sides are `e_i = E_{i|jk}^α`; their squares `x_i = E^{2α}` drive every
//! closed form below. The area uses the rewritten Heron form
//! `A = ¼√(−x₁² + 2x₁(x₂+x₃) − (x₂−x₃)²)` which avoids the catastrophic
//! cancellation of the four-factor product on needle triangles.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::BipartitionVector;
use crate::scalar::Real;

/// Absolute slack below which the triangle relation counts as violated.
pub const RELATION_TOL: f64 = 1e-10;

/// Areas below this are classified degenerate.
pub const DEGENERATE_AREA_TOL: f64 = 1e-12;

/// Scale factor mapping the raw Heron area onto `[0, 1]` for three qubits.
pub fn area_normalization<F: Real>() -> F {
    F::of(4.0) / F::of(3.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HessianCoordinates {
    /// `x_i = E^{2α}` (squared sides).
    E2Alpha,
    /// `x_i = E^α` (sides).
    EAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriangleClass {
    Acute,
    Right,
    Obtuse,
    DegenerateLine,
    DegeneratePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", untagged)]
pub enum Cosines<F> {
    Values([F; 3]),
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleCheck<F> {
    pub holds: [bool; 3],
    pub slack: [F; 3],
}

impl<F: Real> TriangleCheck<F> {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }

    pub fn worst_slack(&self) -> F {
        self.slack.iter().copied().fold(F::infinity(), F::min)
    }
}

/// Per-permutation slack `e_j + e_k − e_i` of the triangle relation at the
/// given exponent.
pub fn triangle_check<F: Real>(v: &BipartitionVector<F>, alpha: F) -> TriangleCheck<F> {
    let e = sides(v, alpha);
    let total = e[0] + e[1] + e[2];
    let mut slack = [F::zero(); 3];
    let mut holds = [false; 3];
    for i in 0..3 {
        slack[i] = total - F::two() * e[i];
        holds[i] = slack[i] >= -F::of(RELATION_TOL);
    }
    TriangleCheck { holds, slack }
}

/// Sides `e_i = E_i^α`.
pub fn sides<F: Real>(v: &BipartitionVector<F>, alpha: F) -> [F; 3] {
    v.values.map(|x| x.powf(alpha))
}

/// Raw Heron area from sides, via the rewritten form in squared-side
/// variables. Errors when the triangle relation fails beyond tolerance.
pub fn area_from_sides<F: Real>(e: [F; 3]) -> Result<F> {
    let total = e[0] + e[1] + e[2];
    let mut worst = F::infinity();
    for s in e {
        worst = worst.min(total - F::two() * s);
    }
    if worst < -F::of(RELATION_TOL) {
        return Err(Error::InvalidTriangle(worst.as_f64()));
    }
    let x = e.map(|s| s * s);
    let q = -x[0] * x[0] + F::two() * x[0] * (x[1] + x[2]) - (x[1] - x[2]) * (x[1] - x[2]);
    Ok(q.max(F::zero()).sqrt() / F::of(4.0))
}

/// Literal four-factor Heron product `√(s(s−a)(s−b)(s−c))`; kept as an
/// independent cross-check of [`area_from_sides`].
pub fn area_heron_product<F: Real>(e: [F; 3]) -> F {
    let s = (e[0] + e[1] + e[2]) * F::half();
    let p = s * (s - e[0]) * (s - e[1]) * (s - e[2]);
    p.max(F::zero()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleReport<F> {
    pub sides: [F; 3],
    pub semiperimeter: F,
    /// Area under the requested convention (raw, or × 4/√3 when normalized).
    pub area: F,
    pub normalized_area: F,
    pub cosines: Cosines<F>,
    pub classification: TriangleClass,
    /// Bounds in the same convention as `area`, so the sandwich
    /// `lower ≤ area ≤ upper` always refers to the reported value.
    pub lower_bound: F,
    pub upper_bound: F,
}

/// Full triangle report for a bipartition vector at exponent `alpha`.
pub fn triangle_area<F: Real>(
    v: &BipartitionVector<F>,
    alpha: F,
    normalized: bool,
) -> Result<TriangleReport<F>> {
    let e = sides(v, alpha);
    let raw = area_from_sides(e)?;
    let x = e.map(|s| s * s);
    let norm = area_normalization::<F>();
    let degenerate = e.iter().any(|&s| s <= F::zero()) || raw < F::of(DEGENERATE_AREA_TOL);
    let (cosines, classification) = if degenerate {
        let class = if e.iter().all(|&s| s <= F::zero()) {
            TriangleClass::DegeneratePoint
        } else {
            TriangleClass::DegenerateLine
        };
        (Cosines::Degenerate, class)
    } else {
        let mut cos = [F::zero(); 3];
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            cos[i] = (x[j] + x[k] - x[i]) / (F::two() * e[j] * e[k]);
        }
        let tol = F::of(RELATION_TOL);
        let class = if cos.iter().any(|&c| c < -tol) {
            TriangleClass::Obtuse
        } else if cos.iter().any(|&c| c.abs() <= tol) {
            TriangleClass::Right
        } else {
            TriangleClass::Acute
        };
        (Cosines::Values(cos), class)
    };
    let (lower, upper) = area_bounds_from_sides(e);
    let scale = if normalized { norm } else { F::one() };
    Ok(TriangleReport {
        sides: e,
        semiperimeter: (e[0] + e[1] + e[2]) * F::half(),
        area: raw * scale,
        normalized_area: raw * norm,
        cosines,
        classification,
        lower_bound: lower * scale,
        upper_bound: upper * scale,
    })
}

fn area_bounds_from_sides<F: Real>(e: [F; 3]) -> (F, F) {
    let x = e.map(|s| s * s);
    let min = x[0].min(x[1]).min(x[2]);
    let root3 = F::of(3.0).sqrt();
    let lower = root3 / F::of(4.0) * min;
    let upper = (x[0] + x[1] + x[2]) / (F::of(4.0) * root3);
    (lower, upper)
}

/// Raw-area bounds `((√3/4)·min E^{2α}, Σ E^{2α}/(4√3))`.
pub fn area_bounds<F: Real>(v: &BipartitionVector<F>, alpha: F) -> (F, F) {
    area_bounds_from_sides(sides(v, alpha))
}

/// Genuinely multipartite measure: the minimum over the three bipartitions.
pub fn gmc<F: Real>(v: &BipartitionVector<F>) -> F {
    v.values.iter().copied().fold(F::infinity(), F::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianReport<F> {
    pub coordinates: HessianCoordinates,
    /// Leading principal minors `(D₁, D₂, D₃)`. In `E2Alpha` coordinates
    /// these are minors of the area Hessian with the positive coefficient
    /// `1/(128 A³)` stripped; in `EAlpha` coordinates they are minors of the
    /// actual Hessian `∂²A/∂x_i∂x_j`.
    pub minors: [F; 3],
    pub det_h: F,
    pub negative_semidefinite: bool,
}

/// Hessian diagnostics of the area as a function of the chosen coordinates,
/// evaluated at `x` (a valid triangle in those coordinates).
pub fn hessian_minors<F: Real>(x: [F; 3], coordinates: HessianCoordinates) -> Result<HessianReport<F>> {
    let sides = match coordinates {
        // x are the squared sides.
        HessianCoordinates::E2Alpha => x.map(|v| v.max(F::zero()).sqrt()),
        HessianCoordinates::EAlpha => x,
    };
    let area = area_from_sides(sides)?;
    if area < F::of(DEGENERATE_AREA_TOL) {
        return Err(Error::DegenerateTriangle(area.as_f64()));
    }
    let m = match coordinates {
        HessianCoordinates::E2Alpha => scaled_hessian_e2alpha(x),
        HessianCoordinates::EAlpha => hessian_ealpha(x, area),
    };
    let minors = leading_minors(&m);
    let tol = F::of(1e-9) * scale_of(&m);
    let negative_semidefinite =
        minors[0] <= tol && minors[1] >= -tol && minors[2].abs() <= tol;
    Ok(HessianReport {
        coordinates,
        minors,
        det_h: minors[2],
        negative_semidefinite,
    })
}

/// Hessian of `A(x)` in squared-side coordinates, times `128A³`:
/// diagonal `−2x_j x_k`, off-diagonal `x_k(x_i + x_j − x_k)`.
fn scaled_hessian_e2alpha<F: Real>(x: [F; 3]) -> [[F; 3]; 3] {
    let two = F::two();
    let mut m = [[F::zero(); 3]; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        m[i][i] = -two * x[j] * x[k];
        m[i][j] = x[k] * (x[i] + x[j] - x[k]);
        m[j][i] = m[i][j];
    }
    m
}

/// Actual Hessian of `A(e)` in side coordinates, with `Q = 16A²`:
/// `H_ii = (Q(x_j+x_k−x_i) − 8x_i x_j x_k)/(2Q^{3/2})`,
/// `H_ij = 2 e_i e_j x_k (x_i+x_j−x_k)/Q^{3/2}` where `x_i = e_i²`.
fn hessian_ealpha<F: Real>(e: [F; 3], area: F) -> [[F; 3]; 3] {
    let x = e.map(|s| s * s);
    let q = F::of(16.0) * area * area;
    let q32 = q * q.sqrt();
    let mut m = [[F::zero(); 3]; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        m[i][i] = (q * (x[j] + x[k] - x[i]) - F::of(8.0) * x[i] * x[j] * x[k])
            / (F::two() * q32);
        m[i][j] = F::two() * e[i] * e[j] * x[k] * (x[i] + x[j] - x[k]) / q32;
        m[j][i] = m[i][j];
    }
    m
}

fn leading_minors<F: Real>(m: &[[F; 3]; 3]) -> [F; 3] {
    let d1 = m[0][0];
    let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [d1, d2, d3]
}

fn scale_of<F: Real>(m: &[[F; 3]; 3]) -> F {
    let mut s = F::one();
    for row in m {
        for v in row {
            s = s.max(v.abs());
        }
    }
    s * s * s
}
