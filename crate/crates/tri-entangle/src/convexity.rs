//! Convexity diagnostics for `E^α(λ)` and the two analytic violation
//! constructions built on them: the strict-convexity witness (`α > 1`) and
//! the Case-II sign carrier `L(β, p₂)` (`1/2 < α < 1`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{measure_d1, measure_d2, measure_of_lambda, MeasureKind, MeasureSpec};
use crate::scalar::Real;
use crate::states::PureState;

/// Largest interval `(0, u_α]` on which `E^α(λ)` is strictly convex, when
/// nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityInterval<F> {
    pub kind: MeasureKind<F>,
    pub alpha: F,
    pub u_alpha: Option<F>,
}

/// Sign carrier of `(E^α)″`: `(α−1)E′(λ)² + E(λ)E″(λ)`, with the positive
/// factor `αE^{α−2}` dropped.
pub fn convexity_sign_carrier<F: Real>(kind: MeasureKind<F>, alpha: F, lambda: F) -> F {
    let e = measure_of_lambda(kind, lambda).expect("lambda in range");
    let d1 = measure_d1(kind, lambda);
    let d2 = measure_d2(kind, lambda);
    (alpha - F::one()) * d1 * d1 + e * d2
}

/// Computes the strict-convexity interval of `E^α(λ)`.
///
/// Closed forms exist for the Schmidt weight (full interval) and the
/// polynomial measures (`u_α = ½(1 − √(1/(2α−1)))`); the entropic kinds are
/// located by a log-spaced scan of the sign carrier followed by bisection.
pub fn convexity_interval<F: Real>(spec: &MeasureSpec<F>) -> Result<ConvexityInterval<F>> {
    let alpha = spec.alpha;
    let empty = ConvexityInterval {
        kind: spec.kind,
        alpha,
        u_alpha: None,
    };
    if alpha <= F::one() {
        return Ok(empty);
    }
    let u = match spec.kind {
        MeasureKind::SchmidtWeight => F::half(),
        MeasureKind::ConcurrenceSquared | MeasureKind::NegativitySquared | MeasureKind::Impurity => {
            F::half() * (F::one() - (F::one() / (F::two() * alpha - F::one())).sqrt())
        }
        MeasureKind::VonNeumann | MeasureKind::Tsallis(_) | MeasureKind::Renyi2 => {
            entropic_root(spec.kind, alpha)?
        }
    };
    Ok(ConvexityInterval {
        kind: spec.kind,
        alpha,
        u_alpha: Some(u),
    })
}

/// Locates the first zero of the sign carrier on a geometric λ-grid; the
/// carrier is positive as λ → 0⁺ for α > 1 and negative at λ = 1/2.
fn entropic_root<F: Real>(kind: MeasureKind<F>, alpha: F) -> Result<F> {
    let lo = F::of(1e-30);
    let hi = F::half();
    let steps = 3000usize;
    let ratio = (hi / lo).powf(F::one() / F::of(steps as f64));
    let mut prev = lo;
    if convexity_sign_carrier(kind, alpha, prev) <= F::zero() {
        return Err(Error::SearchFailed(format!(
            "convexity interval below grid resolution for {} at alpha {alpha}",
            kind.name()
        )));
    }
    let mut cur = lo;
    for _ in 0..steps {
        cur = (cur * ratio).min(hi);
        if convexity_sign_carrier(kind, alpha, cur) <= F::zero() {
            // Bisect [prev, cur] in log space down to the grid tolerance.
            let (mut a, mut b) = (prev, cur);
            while (b - a) > F::of(1e-9) * b.max(F::of(1e-6)) {
                let mid = (a * b).sqrt();
                if convexity_sign_carrier(kind, alpha, mid) > F::zero() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Ok(a);
        }
        prev = cur;
    }
    Ok(F::half())
}

/// Constructs a W-class state whose Schmidt parameters sit inside the
/// strict-convexity interval, so the triangle relation fails at `spec.alpha`.
/// Returns the state and the (negative) relation slack
/// `E^α(λ_B) + E^α(λ_C) − E^α(λ_A)`.
pub fn triangle_violation_witness(spec: &MeasureSpec<f64>) -> Result<(PureState, f64)> {
    let interval = convexity_interval(spec)?;
    let u = interval.u_alpha.ok_or_else(|| {
        Error::InvalidArgument(format!(
            "no strict-convexity interval for {} at alpha {}",
            spec.kind.name(),
            spec.alpha
        ))
    })?;
    // b² = c² = t with 2t inside the interval; scan t downwards and keep the
    // deepest violation. Near α → 1⁺ the attainable slack for the entropic
    // measures decays like exp(−c/(α−1)), so strictness is judged against the
    // triangle scale (with −1e-8 as the absolute criterion when reachable),
    // a million times above double-precision noise on these closed forms.
    let mut t = (0.45 * u).min(0.2);
    let mut best: Option<(f64, f64)> = None;
    for _ in 0..200 {
        let ea = measure_of_lambda(spec.kind, 2.0 * t)?.powf(spec.alpha);
        let eb = measure_of_lambda(spec.kind, t)?.powf(spec.alpha);
        let slack = 2.0 * eb - ea;
        if slack < -1e-8 || (slack < -1e-6 * ea && best.is_none_or(|(_, s)| slack < s)) {
            best = Some((t, slack));
            if slack < -1e-8 {
                break;
            }
        }
        t *= 0.5;
        if t < 1e-13 {
            break;
        }
    }
    match best {
        Some((t, slack)) => {
            let a = (1.0 - 2.0 * t).sqrt();
            let state = PureState::w_class(a, t.sqrt(), t.sqrt())?;
            Ok((state, slack))
        }
        None => Err(Error::SearchFailed(format!(
            "no strict violation located for {} at alpha {}",
            spec.kind.name(),
            spec.alpha
        ))),
    }
}

/// Inputs for the Case-II sign-carrier profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationProbe<F> {
    pub kind: MeasureKind<F>,
    pub alpha: F,
    /// `β = b²` of the W-class state, small.
    pub beta: F,
    pub p2_grid: Vec<F>,
}

impl<F: Real> ViolationProbe<F> {
    pub fn new(kind: MeasureKind<F>, alpha: F, beta: F, p2_grid: Vec<F>) -> Result<Self> {
        if !(alpha > F::half() && alpha < F::one()) {
            return Err(Error::InvalidArgument(format!(
                "case-II probe requires 1/2 < alpha < 1, got {alpha}"
            )));
        }
        if !(beta > F::zero()) {
            return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
        }
        if p2_grid.iter().any(|&p| !(p > F::zero() && p <= F::one())) {
            return Err(Error::InvalidArgument("p2 grid values must lie in (0, 1]".into()));
        }
        Ok(Self {
            kind,
            alpha,
            beta,
            p2_grid,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case2Profile<F> {
    /// `(p₂, L(β, p₂))` pairs on the requested grid.
    pub points: Vec<(F, F)>,
    /// `lim_{β→0} l(β) = (2α−1)(1−4^{1−α})`.
    pub beta_zero_limit: F,
}

/// `(2α−1)(1−4^{1−α})`, the β → 0 limit of the `p₂ = 1` sign carrier.
pub fn case2_limit<F: Real>(alpha: F) -> F {
    (F::two() * alpha - F::one()) * (F::one() - F::of(4.0).powf(F::one() - alpha))
}

/// Sign carrier of `d(g²)/dp₂` with the positive prefactor `2E^{4α}(2β/p₂)`
/// dropped: negative values certify that the ensemble area grows under the
/// branch-killing measurement.
pub fn case2_sign_carrier<F: Real>(kind: MeasureKind<F>, alpha: F, beta: F, p2: F) -> Result<F> {
    let l2 = F::two() * beta / p2;
    let l1 = beta / p2;
    if l2 > F::half() {
        return Err(Error::InvalidArgument(format!(
            "2*beta/p2 = {l2} exceeds 1/2; beta too large for this p2"
        )));
    }
    let e2 = measure_of_lambda(kind, l2)?;
    let e1 = measure_of_lambda(kind, l1)?;
    let r = e1 / e2;
    let t2 = beta * measure_d1(kind, l2) / e2;
    let t3 = beta * measure_d1(kind, l1) / e2;
    let four = F::of(4.0);
    let r2a = r.powf(F::two() * alpha);
    Ok(four * p2 * r2a - p2 - F::of(8.0) * alpha * t2 * r2a + four * alpha * t2
        - four * alpha * t3 * r.powf(F::two() * alpha - F::one()))
}

/// Evaluates the Case-II sign carrier on the probe grid.
pub fn case2_profile<F: Real>(probe: &ViolationProbe<F>) -> Result<Case2Profile<F>> {
    let mut points = Vec::with_capacity(probe.p2_grid.len());
    for &p2 in &probe.p2_grid {
        points.push((p2, case2_sign_carrier(probe.kind, probe.alpha, probe.beta, p2)?));
    }
    Ok(Case2Profile {
        points,
        beta_zero_limit: case2_limit(probe.alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(kind: MeasureKind<f64>, alpha: f64) -> MeasureSpec<f64> {
        MeasureSpec::new(kind, alpha).unwrap()
    }

    #[test]
    fn alpha_at_most_one_gives_empty_interval() {
        for kind in [
            MeasureKind::SchmidtWeight,
            MeasureKind::ConcurrenceSquared,
            MeasureKind::VonNeumann,
        ] {
            let i = convexity_interval(&spec(kind, 1.0)).unwrap();
            assert!(i.u_alpha.is_none());
            let i = convexity_interval(&spec(kind, 0.5)).unwrap();
            assert!(i.u_alpha.is_none());
        }
    }

    #[test]
    fn closed_form_intervals() {
        let i = convexity_interval(&spec(MeasureKind::ConcurrenceSquared, 2.0)).unwrap();
        assert_abs_diff_eq!(i.u_alpha.unwrap(), 0.5 * (1.0 - (1f64 / 3.0).sqrt()), epsilon = 1e-14);
        assert_abs_diff_eq!(i.u_alpha.unwrap(), 0.2113, epsilon = 5e-5);
        let i = convexity_interval(&spec(MeasureKind::SchmidtWeight, 1.5)).unwrap();
        assert_abs_diff_eq!(i.u_alpha.unwrap(), 0.5, epsilon = 1e-14);
        let i = convexity_interval(&spec(MeasureKind::Impurity, 2.0)).unwrap();
        assert_abs_diff_eq!(i.u_alpha.unwrap(), 0.2113, epsilon = 5e-5);
    }

    #[test]
    fn entropic_intervals_bracket_the_sign_change() {
        for kind in [
            MeasureKind::VonNeumann,
            MeasureKind::Tsallis(2.0),
            MeasureKind::Renyi2,
        ] {
            for alpha in [1.1, 1.5, 2.0] {
                let u = convexity_interval(&spec(kind, alpha)).unwrap().u_alpha.unwrap();
                assert!(u > 0.0 && u <= 0.5, "{} u={u}", kind.name());
                assert!(convexity_sign_carrier(kind, alpha, u * 0.5) > 0.0);
                if u < 0.49 {
                    assert!(convexity_sign_carrier(kind, alpha, (u * 1.5).min(0.499)) < 0.0);
                }
            }
        }
    }

    #[test]
    fn carrier_matches_direct_second_derivative() {
        let h = 1e-6;
        for kind in [MeasureKind::ConcurrenceSquared, MeasureKind::VonNeumann, MeasureKind::Renyi2] {
            for alpha in [1.3, 2.0] {
                for l in [0.05, 0.2, 0.4] {
                    let f = |x: f64| measure_of_lambda(kind, x).unwrap().powf(alpha);
                    let d2 = (f(l + h) - 2.0 * f(l) + f(l - h)) / (h * h);
                    let carrier = convexity_sign_carrier(kind, alpha, l);
                    let e = measure_of_lambda(kind, l).unwrap();
                    let full = alpha * e.powf(alpha - 2.0) * carrier;
                    assert_abs_diff_eq!(full, d2, epsilon = 1e-2 * d2.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn witness_fixtures() {
        // Schmidt weight, α=1.5, b²=c²=0.1: slack = 2(0.2)^1.5·√2 ... direct form.
        let ea = (2.0 * 0.2f64).powf(1.5);
        let eb = (2.0 * 0.1f64).powf(1.5);
        let expected = ea - 2.0 * eb;
        assert_abs_diff_eq!(expected, 0.0741, epsilon = 5e-5);

        for (kind, alpha, threshold) in [
            (MeasureKind::SchmidtWeight, 1.5, -1e-8),
            (MeasureKind::ConcurrenceSquared, 1.2, -1e-8),
            // Near α → 1⁺ the entropic violation depth decays like
            // exp(−c/(α−1)); strict but below the absolute criterion.
            (MeasureKind::VonNeumann, 1.05, -1e-16),
            (MeasureKind::Tsallis(2.0), 1.5, -1e-8),
            (MeasureKind::Renyi2, 1.1, -1e-8),
        ] {
            let (state, slack) = triangle_violation_witness(&spec(kind, alpha)).unwrap();
            assert!(slack < threshold, "{} alpha={alpha} slack={slack}", kind.name());
            // The returned state must realize the violating λ-profile.
            let profile = crate::measures::lambda_profile(&state).unwrap();
            let ea = measure_of_lambda(kind, profile[0]).unwrap().powf(alpha);
            let eb = measure_of_lambda(kind, profile[1]).unwrap().powf(alpha);
            let ec = measure_of_lambda(kind, profile[2]).unwrap().powf(alpha);
            assert_abs_diff_eq!(eb + ec - ea, slack, epsilon = 1e-9);
        }
    }

    #[test]
    fn witness_requires_alpha_above_one() {
        assert!(triangle_violation_witness(&spec(MeasureKind::VonNeumann, 1.0)).is_err());
    }

    #[test]
    fn case2_limit_fixtures() {
        assert_abs_diff_eq!(case2_limit(0.75), 0.5 * (1.0 - 4f64.powf(0.25)), epsilon = 1e-14);
        assert_abs_diff_eq!(case2_limit(0.75), -0.2071, epsilon = 5e-5);
        assert_abs_diff_eq!(case2_limit(0.5), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn case2_carrier_negative_on_reference_interval() {
        let grid: Vec<f64> = (0..=20).map(|i| 0.9 + 0.005 * i as f64).collect();
        let probe = ViolationProbe::new(MeasureKind::ConcurrenceSquared, 0.6, 1e-8, grid).unwrap();
        let profile = case2_profile(&probe).unwrap();
        for (p2, l) in profile.points {
            assert!(l < 0.0, "L({p2}) = {l} not negative");
        }
    }

    #[test]
    fn case2_carrier_approaches_limit_at_small_beta() {
        for kind in [MeasureKind::ConcurrenceSquared, MeasureKind::VonNeumann, MeasureKind::Renyi2] {
            for alpha in [0.6f64, 0.75, 0.9] {
                let l = case2_sign_carrier(kind, alpha, 1e-10, 1.0).unwrap();
                let lim: f64 = case2_limit(alpha);
                // Entropic carriers converge only logarithmically in β; check sign + loose gap.
                assert!(
                    (l - lim).abs() < 0.05 && l.signum() == lim.signum(),
                    "{} alpha={alpha}: L={l} vs limit {lim}",
                    kind.name()
                );
            }
        }
    }

    #[test]
    fn probe_validation() {
        assert!(ViolationProbe::new(MeasureKind::<f64>::VonNeumann, 0.4, 1e-8, vec![1.0]).is_err());
        assert!(ViolationProbe::new(MeasureKind::<f64>::VonNeumann, 1.2, 1e-8, vec![1.0]).is_err());
        assert!(ViolationProbe::new(MeasureKind::<f64>::VonNeumann, 0.75, -1.0, vec![1.0]).is_err());
        assert!(ViolationProbe::new(MeasureKind::<f64>::VonNeumann, 0.75, 1e-8, vec![1.5]).is_err());
    }
}
