//! Local generalized measurements, LOCC ensembles, the monotonicity gap of
//! the triangle area, and the constructive violation searches.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::convexity::case2_sign_carrier;
use crate::error::{Error, Result};
use crate::geometry::area_from_sides;
use crate::measures::{bipartition_vector, measure_of_lambda, MeasureSpec};
use crate::states::PureState;

const COMPLETENESS_TOL: f64 = 1e-10;

/// Branches below this probability are dropped; their post-states are
/// undefined and contribute nothing to ensemble sums.
pub const BRANCH_PROB_TOL: f64 = 1e-14;

/// A generalized local measurement: Kraus operators acting on one party.
#[derive(Debug, Clone)]
pub struct LocalMeasurement {
    pub party: usize,
    pub kraus: Vec<DMatrix<Complex64>>,
}

impl LocalMeasurement {
    /// Validates completeness `Σ X_k†X_k = I` elementwise to 1e-10.
    pub fn new(party: usize, kraus: Vec<DMatrix<Complex64>>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("need at least one Kraus operator".into()));
        }
        let d = kraus[0].nrows();
        if kraus.iter().any(|x| x.nrows() != d || x.ncols() != d) {
            return Err(Error::InvalidArgument("Kraus operators must be square and same-sized".into()));
        }
        let mut sum = DMatrix::<Complex64>::zeros(d, d);
        for x in &kraus {
            sum += x.adjoint() * x;
        }
        let mut residual = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let expected = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::default() };
                residual = residual.max((sum[(i, j)] - expected).norm());
            }
        }
        if residual > COMPLETENESS_TOL {
            return Err(Error::IncompleteMeasurement(residual));
        }
        Ok(Self { party, kraus })
    }

    /// The trivial one-outcome measurement.
    pub fn identity(party: usize, dim: usize) -> Self {
        Self {
            party,
            kraus: vec![DMatrix::identity(dim, dim)],
        }
    }
}

/// Angles of the two-outcome measurement family `X_i = D_i V` with
/// `D₁ = diag(sinφ₁, sinφ₂)`, `D₂ = diag(cosφ₁, cosφ₂)` and the unitary `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementParams {
    pub phi1: f64,
    pub phi2: f64,
    pub psi1: f64,
    pub psi2: f64,
}

impl MeasurementParams {
    pub fn new(phi1: f64, phi2: f64, psi1: f64, psi2: f64) -> Result<Self> {
        let pi = std::f64::consts::PI;
        for a in [phi1, phi2, psi1, psi2] {
            if !(-pi..=pi).contains(&a) {
                return Err(Error::InvalidArgument(format!("angle {a} outside [-pi, pi]")));
            }
        }
        Ok(Self { phi1, phi2, psi1, psi2 })
    }
}

/// Builds the two-outcome measurement `{D₁V, D₂V}` on the first qubit;
/// `D₁² + D₂² = I` holds identically.
pub fn measurement_from_params(p: &MeasurementParams) -> LocalMeasurement {
    let v = DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(p.psi1.cos(), 0.0),
            -Complex64::from_polar(1.0, p.psi2) * p.psi1.sin(),
            Complex64::new(p.psi1.sin(), 0.0),
            Complex64::from_polar(1.0, p.psi2) * p.psi1.cos(),
        ],
    );
    let d1 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(p.phi1.sin(), 0.0),
        Complex64::new(p.phi2.sin(), 0.0),
    ]));
    let d2 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(p.phi1.cos(), 0.0),
        Complex64::new(p.phi2.cos(), 0.0),
    ]));
    LocalMeasurement {
        party: 0,
        kraus: vec![d1 * &v, d2 * &v],
    }
}

/// Three-qubit pure state in the standard (Acín) form
/// `l₀|000⟩ + l₁e^{iφ}|100⟩ + l₂|101⟩ + l₃|110⟩ + l₄|111⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StandardFormState {
    pub l: [f64; 5],
    pub varphi: f64,
}

impl StandardFormState {
    pub fn new(l: [f64; 5], varphi: f64) -> Result<Self> {
        if l.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidArgument(format!("coefficients must be nonnegative, got {l:?}")));
        }
        let norm: f64 = l.iter().map(|x| x * x).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        if !(0.0..=std::f64::consts::PI).contains(&varphi) {
            return Err(Error::InvalidArgument(format!("varphi {varphi} outside [0, pi]")));
        }
        Ok(Self { l, varphi })
    }

    /// Recovers `l₀` from normalization.
    pub fn from_tail(l1: f64, l2: f64, l3: f64, l4: f64, varphi: f64) -> Result<Self> {
        let tail: f64 = [l1, l2, l3, l4].iter().map(|x| x * x).sum();
        if tail > 1.0 + 1e-12 {
            return Err(Error::NotNormalized(tail));
        }
        Self::new([(1.0 - tail).max(0.0).sqrt(), l1, l2, l3, l4], varphi)
    }

    pub fn to_state(&self) -> PureState {
        let one = Complex64::new(1.0, 0.0);
        PureState::from_terms(
            vec![2, 2, 2],
            &[
                (&[0, 0, 0], one * self.l[0]),
                (&[1, 0, 0], Complex64::from_polar(1.0, self.varphi) * self.l[1]),
                (&[1, 0, 1], one * self.l[2]),
                (&[1, 1, 0], one * self.l[3]),
                (&[1, 1, 1], one * self.l[4]),
            ],
        )
        .expect("normalized by construction")
    }
}

/// Probabilities and normalized post-measurement states of an LOCC branch
/// ensemble.
#[derive(Debug, Clone)]
pub struct LoccOutcome {
    pub probabilities: Vec<f64>,
    pub post_states: Vec<PureState>,
}

/// Applies a local measurement, returning the branch ensemble. Branches with
/// probability below [`BRANCH_PROB_TOL`] are dropped together with their
/// (undefined) post-states.
pub fn apply_measurement(state: &PureState, m: &LocalMeasurement) -> Result<LoccOutcome> {
    let dims = state.dims();
    if m.party >= dims.len() {
        return Err(Error::InvalidArgument(format!(
            "party {} out of range for {} subsystems",
            m.party,
            dims.len()
        )));
    }
    let d = dims[m.party];
    // Re-validate completeness so hand-built measurements cannot sneak in.
    let checked = LocalMeasurement::new(m.party, m.kraus.clone())?;
    if checked.kraus[0].nrows() != d {
        return Err(Error::InvalidDims(format!(
            "Kraus dimension {} does not match party dimension {d}",
            checked.kraus[0].nrows()
        )));
    }
    let amps = state.amplitudes();
    let total = state.total_dim();
    let mut probabilities = Vec::new();
    let mut post_states = Vec::new();
    for x in &checked.kraus {
        let mut out = vec![Complex64::default(); total];
        for (idx, slot) in out.iter_mut().enumerate() {
            let a = state.digit(idx, m.party);
            for b in 0..d {
                let src = state.with_digit(idx, m.party, b);
                *slot += x[(a, b)] * amps[src];
            }
        }
        let p: f64 = out.iter().map(|c| c.norm_sqr()).sum();
        if p < BRANCH_PROB_TOL {
            continue;
        }
        let scale = p.sqrt();
        for c in &mut out {
            *c /= scale;
        }
        probabilities.push(p);
        post_states.push(PureState::new(dims.to_vec(), out)?);
    }
    let total_p: f64 = probabilities.iter().sum();
    if (total_p - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidTrace(total_p));
    }
    Ok(LoccOutcome {
        probabilities,
        post_states,
    })
}

/// Raw triangle area of a pure three-party state at the given measure spec.
pub fn state_area(state: &PureState, spec: &MeasureSpec<f64>) -> Result<f64> {
    let v = bipartition_vector(state, spec)?;
    area_from_sides(crate::geometry::sides(&v, spec.alpha))
}

/// `A(ψ) − Σ_k p_k A(ψ^{(k)})` with the raw (unnormalized) area. Negative
/// values certify a violation of strong LOCC monotonicity.
pub fn monotonicity_gap(
    state: &PureState,
    m: &LocalMeasurement,
    spec: &MeasureSpec<f64>,
) -> Result<f64> {
    let before = state_area(state, spec)?;
    let outcome = apply_measurement(state, m)?;
    let mut ensemble = 0.0;
    for (p, branch) in outcome.probabilities.iter().zip(&outcome.post_states) {
        ensemble += p * state_area(branch, spec)?;
    }
    Ok(before - ensemble)
}

/// The worked Case-I state `√3/2|100⟩ + √2/4(|010⟩ + |001⟩)`.
pub fn case1_state() -> PureState {
    PureState::w_class(3f64.sqrt() / 2.0, 2f64.sqrt() / 4.0, 2f64.sqrt() / 4.0)
        .expect("normalized by construction")
}

/// The worked Case-I measurement on the first qubit.
pub fn case1_measurement() -> LocalMeasurement {
    let diag = |a: f64, b: f64| {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
        ]))
    };
    LocalMeasurement::new(
        0,
        vec![
            diag(3f64.sqrt() / 2.0, 2f64.sqrt() / 2.0),
            diag(0.5, 2f64.sqrt() / 2.0),
        ],
    )
    .expect("completeness by construction")
}

#[derive(Debug, Clone)]
pub struct Case2Violation {
    pub state: PureState,
    pub measurement: LocalMeasurement,
    pub p2: f64,
    /// `A(W) − p₂ A(W^{(2)})`, strictly negative on success.
    pub gap: f64,
}

/// Constructs the Case-II violation: a W-class state with `b = c = √β` and
/// the branch-killing measurement `X₁ = diag(0, y₁)`, `X₂ = diag(1, y₂)`.
/// The interval end `p_{α,β}` is located numerically from the sign carrier.
pub fn case2_violation(spec: &MeasureSpec<f64>, beta: f64) -> Result<Case2Violation> {
    if !(spec.alpha >= 0.5 && spec.alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "case-II construction requires 1/2 <= alpha < 1, got {}",
            spec.alpha
        )));
    }
    if !(beta > 0.0 && beta < 0.1) {
        return Err(Error::InvalidArgument(format!("beta must be small and positive, got {beta}")));
    }
    let a2 = 1.0 - 2.0 * beta;
    let area_w2 = |p2: f64| -> Result<f64> {
        let lam = [2.0 * beta / p2, beta / p2, beta / p2];
        let mut sides = [0.0; 3];
        for (s, &l) in sides.iter_mut().zip(&lam) {
            *s = measure_of_lambda(spec.kind, l)?.powf(spec.alpha);
        }
        area_from_sides(sides)
    };
    let base_area = area_w2(1.0)?;
    // Walk p₂ downward while the derivative sign carrier stays negative.
    let step = 1e-3;
    let mut p_edge = 1.0;
    while p_edge - step > 8.0 * beta {
        let next = p_edge - step;
        match case2_sign_carrier(spec.kind, spec.alpha, beta, next) {
            Ok(l) if l < 0.0 => p_edge = next,
            _ => break,
        }
    }
    // Evaluate the realized gap on a grid of the decreasing interval.
    let mut best: Option<(f64, f64)> = None;
    let n = 200;
    for i in 0..=n {
        let p2 = p_edge + (1.0 - p_edge) * i as f64 / n as f64;
        let gap = base_area - p2 * area_w2(p2)?;
        if best.is_none_or(|(_, g)| gap < g) {
            best = Some((p2, gap));
        }
    }
    let (p2, gap) = best.expect("grid is nonempty");
    if gap >= -1e-8 {
        return Err(Error::SearchFailed(format!(
            "no Case-II violation for {} at alpha {} with beta {beta} (best gap {gap:.3e})",
            spec.kind.name(),
            spec.alpha
        )));
    }
    let y2 = ((p2 - 2.0 * beta) / a2).sqrt();
    let y1 = (1.0 - y2 * y2).max(0.0).sqrt();
    let diag = |a: f64, b: f64| {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
        ]))
    };
    let measurement = LocalMeasurement::new(0, vec![diag(0.0, y1), diag(1.0, y2)])?;
    let state = PureState::w_class(a2.sqrt(), beta.sqrt(), beta.sqrt())?;
    Ok(Case2Violation {
        state,
        measurement,
        p2,
        gap,
    })
}

/// Best violation found by the Case-III random + pattern search.
#[derive(Debug, Clone, Serialize)]
pub struct Case3Search {
    pub state: StandardFormState,
    pub params: MeasurementParams,
    pub gap: f64,
    pub evaluations: usize,
}

const N_COORDS: usize = 9;

fn wrap_angle(a: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let mut x = (a + pi).rem_euclid(2.0 * pi) - pi;
    if x < -pi {
        x = -pi;
    }
    x
}

fn eval_candidate(spec: &MeasureSpec<f64>, x: &[f64; N_COORDS]) -> Option<(f64, StandardFormState, MeasurementParams)> {
    let state = StandardFormState::from_tail(x[0], x[1], x[2], x[3], x[4].clamp(0.0, std::f64::consts::PI)).ok()?;
    let params = MeasurementParams::new(
        wrap_angle(x[5]),
        wrap_angle(x[6]),
        wrap_angle(x[7]),
        wrap_angle(x[8]),
    )
    .ok()?;
    let m = measurement_from_params(&params);
    let gap = monotonicity_gap(&state.to_state(), &m, spec).ok()?;
    Some((gap, state, params))
}

/// Seeded random search with pattern-search refinement over the standard-form
/// coefficients and measurement angles, minimizing the monotonicity gap.
/// Deterministic given the seed; `init` seeds the incumbent when provided.
pub fn random_violation_search(
    spec: &MeasureSpec<f64>,
    seed: u64,
    budget: usize,
    init: Option<(StandardFormState, MeasurementParams)>,
) -> Result<Case3Search> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evals = 0usize;
    let mut best: Option<(f64, [f64; N_COORDS], StandardFormState, MeasurementParams)> = None;
    let consider = |x: [f64; N_COORDS], evals: &mut usize, best: &mut Option<(f64, [f64; N_COORDS], StandardFormState, MeasurementParams)>| {
        *evals += 1;
        if let Some((gap, s, p)) = eval_candidate(spec, &x) {
            if best.as_ref().is_none_or(|(g, ..)| gap < *g) {
                *best = Some((gap, x, s, p));
            }
        }
    };

    if let Some((s, p)) = init {
        let x = [s.l[1], s.l[2], s.l[3], s.l[4], s.varphi, p.phi1, p.phi2, p.psi1, p.psi2];
        consider(x, &mut evals, &mut best);
    } else {
        // Default incumbent: a product state under a trivial-angle
        // measurement, gap 0.
        consider([0.0; N_COORDS], &mut evals, &mut best);
    }

    let pi = std::f64::consts::PI;
    let explore = budget.saturating_sub(evals) * 3 / 5;
    for _ in 0..explore {
        let x = [
            rng.gen_range(0.0..0.45),
            rng.gen_range(0.0..0.45),
            rng.gen_range(0.0..0.45),
            rng.gen_range(0.0..0.45),
            rng.gen_range(0.0..pi),
            rng.gen_range(-pi..pi),
            rng.gen_range(-pi..pi),
            rng.gen_range(-pi..pi),
            rng.gen_range(-pi..pi),
        ];
        consider(x, &mut evals, &mut best);
    }

    // Pattern search around the incumbent: coordinate steps, halved when a
    // full sweep yields no improvement.
    let mut steps = [0.02, 0.02, 0.02, 0.02, 0.1 * pi, 0.1 * pi, 0.1 * pi, 0.1 * pi, 0.1 * pi];
    while evals < budget && steps.iter().any(|&s| s > 1e-7) {
        let Some((incumbent_gap, incumbent_x, ..)) = best else { break };
        let mut improved = false;
        'sweep: for i in 0..N_COORDS {
            for sign in [1.0, -1.0] {
                if evals >= budget {
                    break 'sweep;
                }
                let mut x = incumbent_x;
                x[i] += sign * steps[i];
                if i < 4 {
                    x[i] = x[i].max(0.0);
                }
                consider(x, &mut evals, &mut best);
                if best.as_ref().map(|(g, ..)| *g).unwrap() < incumbent_gap {
                    improved = true;
                    break 'sweep;
                }
            }
        }
        if !improved {
            for s in &mut steps {
                *s *= 0.5;
            }
        }
    }

    let (gap, _, state, params) = best.expect("at least one candidate evaluated");
    Ok(Case3Search {
        state,
        params,
        gap,
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{lambda_profile, MeasureKind};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn spec(kind: MeasureKind<f64>, alpha: f64) -> MeasureSpec<f64> {
        MeasureSpec::new(kind, alpha).unwrap()
    }

    #[test]
    fn params_build_complete_measurements() {
        let p = MeasurementParams::new(0.4 * PI, 0.1 * PI, 0.6 * PI, 0.2 * PI).unwrap();
        let m = measurement_from_params(&p);
        assert!(LocalMeasurement::new(0, m.kraus.clone()).is_ok());
        // φ₁=φ₂=π/2 makes X₁ = V (a unitary channel) and X₂ = 0.
        let p = MeasurementParams::new(PI / 2.0, PI / 2.0, 0.3, -0.4).unwrap();
        let m = measurement_from_params(&p);
        let outcome = apply_measurement(&case1_state(), &m).unwrap();
        assert_eq!(outcome.probabilities.len(), 1);
        assert_abs_diff_eq!(outcome.probabilities[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn incomplete_measurement_rejected() {
        let x = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ]));
        assert!(matches!(
            LocalMeasurement::new(0, vec![x]),
            Err(Error::IncompleteMeasurement(_))
        ));
    }

    #[test]
    fn case1_branch_state_and_profiles() {
        let w = case1_state();
        assert_profile(&w, [0.25, 0.125, 0.125]);
        let outcome = apply_measurement(&w, &case1_measurement()).unwrap();
        assert_eq!(outcome.probabilities.len(), 2);
        assert_abs_diff_eq!(outcome.probabilities[0], 9.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(outcome.probabilities[1], 7.0 / 16.0, epsilon = 1e-12);
        // Branch 1 is √6/3|100⟩ + √6/6(|010⟩+|001⟩).
        let b1 = &outcome.post_states[0];
        let amp = |digits: &[usize]| {
            let idx = digits[0] + 2 * digits[1] + 4 * digits[2];
            b1.amplitudes()[idx]
        };
        assert_abs_diff_eq!(amp(&[1, 0, 0]).re, 6f64.sqrt() / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(amp(&[0, 1, 0]).re, 6f64.sqrt() / 6.0, epsilon = 1e-12);
        assert_profile(b1, [1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]);
    }

    fn assert_profile(s: &PureState, want: [f64; 3]) {
        let got = lambda_profile(s).unwrap();
        for i in 0..3 {
            assert_abs_diff_eq!(got[i], want[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn case1_branch_area_grows_but_ensemble_shrinks() {
        let s = spec(MeasureKind::ConcurrenceSquared, 0.5);
        let w = case1_state();
        let outcome = apply_measurement(&w, &case1_measurement()).unwrap();
        let a_w = state_area(&w, &s).unwrap();
        let a_b1 = state_area(&outcome.post_states[0], &s).unwrap();
        assert!(a_b1 > a_w, "branch area {a_b1} should exceed {a_w}");
        let gap = monotonicity_gap(&w, &case1_measurement(), &s).unwrap();
        assert!(gap >= 0.0, "ensemble monotonicity violated: {gap}");
    }

    #[test]
    fn identity_measurement_gap_is_zero() {
        let s = spec(MeasureKind::VonNeumann, 0.5);
        let gap = monotonicity_gap(&case1_state(), &LocalMeasurement::identity(0, 2), &s).unwrap();
        assert_abs_diff_eq!(gap, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn standard_form_roundtrip_and_validation() {
        let s = StandardFormState::from_tail(0.264, 0.367, 0.32, 0.055, 0.8 * PI).unwrap();
        let norm: f64 = s.l.iter().map(|x| x * x).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        assert!(StandardFormState::from_tail(0.9, 0.9, 0.0, 0.0, 0.0).is_err());
        assert!(StandardFormState::new([1.0, 0.0, 0.0, 0.0, 0.0], -0.1).is_err());
    }

    #[test]
    fn case2_violation_fixture() {
        let v = case2_violation(&spec(MeasureKind::ConcurrenceSquared, 0.75), 1e-4).unwrap();
        assert!(v.gap < -1e-8, "gap {} not a violation", v.gap);
        assert!(v.p2 < 1.0);
        // Cross-check the analytic gap against the full measurement pipeline.
        let s = spec(MeasureKind::ConcurrenceSquared, 0.75);
        let full = monotonicity_gap(&v.state, &v.measurement, &s).unwrap();
        assert_abs_diff_eq!(full, v.gap, epsilon = 1e-9);
    }

    #[test]
    fn case2_entropic_violation() {
        let v = case2_violation(&spec(MeasureKind::VonNeumann, 0.9), 1e-6).unwrap();
        assert!(v.gap < 0.0);
    }

    #[test]
    fn case2_boundary_alpha_finds_nothing() {
        assert!(matches!(
            case2_violation(&spec(MeasureKind::ConcurrenceSquared, 0.5), 1e-4),
            Err(Error::SearchFailed(_))
        ));
    }

    #[test]
    fn random_measurements_preserve_probability() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let state = crate::random::haar_pure_state(&[2, 2, 2], &mut rng);
            let p = MeasurementParams::new(
                rng.gen_range(-PI..PI),
                rng.gen_range(-PI..PI),
                rng.gen_range(-PI..PI),
                rng.gen_range(-PI..PI),
            )
            .unwrap();
            let outcome = apply_measurement(&state, &measurement_from_params(&p)).unwrap();
            let total: f64 = outcome.probabilities.iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-10);
            for s in &outcome.post_states {
                let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
                assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn search_returns_zero_for_degenerate_budget() {
        let s = spec(MeasureKind::VonNeumann, 1.0);
        let r = random_violation_search(&s, 1, 1, None).unwrap();
        assert_abs_diff_eq!(r.gap, 0.0, epsilon = 1e-12);
    }
}
