//! The bipartite entanglement measure catalogue.
//!
//! Every measure in the qubit set is a function of the Schmidt parameter
//! `lambda`, the smallest eigenvalue of a one-qubit reduced state:
//!
//! * Schmidt weight        `W = 2λ`
//! * squared concurrence   `C² = 4λ(1-λ)`
//! * squared negativity    `N² = 4λ(1-λ)` (pure two-qubit states)
//! * von Neumann entropy   `S = -λ log₂ λ - (1-λ) log₂ (1-λ)`
//! * Tsallis-q entropy     `T = (1 - λ^q - (1-λ)^q) / (q-1)`
//! * Rényi-2 entropy       `R = -log₂(λ² + (1-λ)²)`
//! * impurity              `I = 2λ(1-λ)`
//!
//! Discrete entropies use base-2 logarithms throughout; a different base only
//! rescales triangle sides uniformly and never changes any verdict.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::states::{eigen_spectrum, partial_trace, DensityOperator, PureState};

/// Below this distance from `q = 1` the Tsallis closed form is numerically
/// unusable and evaluation dispatches to von Neumann entropy.
pub const TSALLIS_Q_ONE_TOL: f64 = 1e-6;

const LAMBDA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind<F> {
    SchmidtWeight,
    ConcurrenceSquared,
    NegativitySquared,
    VonNeumann,
    Tsallis(F),
    Renyi2,
    Impurity,
}

impl<F: Real> MeasureKind<F> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SchmidtWeight => "schmidt-weight",
            Self::ConcurrenceSquared => "concurrence-squared",
            Self::NegativitySquared => "negativity-squared",
            Self::VonNeumann => "von-neumann",
            Self::Tsallis(_) => "tsallis",
            Self::Renyi2 => "renyi2",
            Self::Impurity => "impurity",
        }
    }
}

/// A bipartite measure together with the exponent applied when triangle sides
/// are formed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureSpec<F> {
    pub kind: MeasureKind<F>,
    pub alpha: F,
}

impl<F: Real> MeasureSpec<F> {
    pub fn new(kind: MeasureKind<F>, alpha: F) -> Result<Self> {
        if !(alpha > F::zero()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if let MeasureKind::Tsallis(q) = kind {
            if !(q >= F::one()) {
                return Err(Error::InvalidArgument(format!(
                    "Tsallis q must be >= 1, got {q}"
                )));
            }
        }
        Ok(Self { kind, alpha })
    }
}

fn xlog2<F: Real>(x: F) -> F {
    if x > F::zero() {
        x * x.log2()
    } else {
        F::zero()
    }
}

fn binary_entropy<F: Real>(l: F) -> F {
    -xlog2(l) - xlog2(F::one() - l)
}

fn tsallis_is_von_neumann<F: Real>(q: F) -> bool {
    (q - F::one()).abs() < F::of(TSALLIS_Q_ONE_TOL)
}

/// Evaluates a measure at the Schmidt parameter `lambda` in `[0, 1/2]`.
pub fn measure_of_lambda<F: Real>(kind: MeasureKind<F>, lambda: F) -> Result<F> {
    let tol = F::of(LAMBDA_TOL);
    if lambda < -tol || lambda > F::half() + tol {
        return Err(Error::InvalidArgument(format!(
            "lambda must lie in [0, 1/2], got {lambda}"
        )));
    }
    let l = lambda.max(F::zero()).min(F::half());
    let one = F::one();
    Ok(match kind {
        MeasureKind::SchmidtWeight => F::two() * l,
        MeasureKind::ConcurrenceSquared | MeasureKind::NegativitySquared => {
            F::of(4.0) * l * (one - l)
        }
        MeasureKind::Impurity => F::two() * l * (one - l),
        MeasureKind::VonNeumann => binary_entropy(l),
        MeasureKind::Tsallis(q) => {
            if tsallis_is_von_neumann(q) {
                binary_entropy(l)
            } else {
                (one - l.powf(q) - (one - l).powf(q)) / (q - one)
            }
        }
        MeasureKind::Renyi2 => -(l * l + (one - l) * (one - l)).log2(),
    })
}

/// First derivative dE/dλ on (0, 1/2).
pub fn measure_d1<F: Real>(kind: MeasureKind<F>, l: F) -> F {
    let one = F::one();
    let ln2 = F::LN_2();
    match kind {
        MeasureKind::SchmidtWeight => F::two(),
        MeasureKind::ConcurrenceSquared | MeasureKind::NegativitySquared => {
            F::of(4.0) - F::of(8.0) * l
        }
        MeasureKind::Impurity => F::two() - F::of(4.0) * l,
        MeasureKind::VonNeumann => ((one - l) / l).log2(),
        MeasureKind::Tsallis(q) => {
            if tsallis_is_von_neumann(q) {
                measure_d1(MeasureKind::VonNeumann, l)
            } else {
                q * ((one - l).powf(q - one) - l.powf(q - one)) / (q - one)
            }
        }
        MeasureKind::Renyi2 => {
            let u = F::two() * l * l - F::two() * l + one;
            -(F::of(4.0) * l - F::two()) / (u * ln2)
        }
    }
}

/// Second derivative d²E/dλ² on (0, 1/2).
pub fn measure_d2<F: Real>(kind: MeasureKind<F>, l: F) -> F {
    let one = F::one();
    let ln2 = F::LN_2();
    match kind {
        MeasureKind::SchmidtWeight => F::zero(),
        MeasureKind::ConcurrenceSquared | MeasureKind::NegativitySquared => -F::of(8.0),
        MeasureKind::Impurity => -F::of(4.0),
        MeasureKind::VonNeumann => -one / (ln2 * l * (one - l)),
        MeasureKind::Tsallis(q) => {
            if tsallis_is_von_neumann(q) {
                measure_d2(MeasureKind::VonNeumann, l)
            } else {
                -q * (l.powf(q - F::two()) + (one - l).powf(q - F::two()))
            }
        }
        MeasureKind::Renyi2 => {
            let u = F::two() * l * l - F::two() * l + one;
            let du = F::of(4.0) * l - F::two();
            -(F::of(4.0) * u - du * du) / (u * u * ln2)
        }
    }
}

/// Evaluates a measure on a reduced density operator of any finite dimension.
///
/// Schmidt weight and squared negativity are defined through the two Schmidt
/// coefficients of a qubit marginal and are rejected for larger dimensions.
pub fn measure_of_state(kind: MeasureKind<f64>, rho: &DensityOperator) -> Result<f64> {
    let profile = eigen_spectrum(rho)?;
    let purity: f64 = profile.spectrum.iter().map(|l| l * l).sum();
    match kind {
        MeasureKind::SchmidtWeight | MeasureKind::NegativitySquared => {
            if rho.dim() != 2 {
                return Err(Error::UnsupportedMeasure(kind.name(), rho.dim()));
            }
            measure_of_lambda(kind, profile.lambda_min)
        }
        MeasureKind::ConcurrenceSquared => Ok(2.0 * (1.0 - purity)),
        MeasureKind::Impurity => Ok(1.0 - purity),
        MeasureKind::Renyi2 => Ok(-purity.log2()),
        MeasureKind::VonNeumann => Ok(profile.spectrum.iter().map(|&l| -xlog2(l)).sum()),
        MeasureKind::Tsallis(q) => {
            if tsallis_is_von_neumann(q) {
                Ok(profile.spectrum.iter().map(|&l| -xlog2(l)).sum())
            } else {
                let moment: f64 = profile.spectrum.iter().map(|l| l.powf(q)).sum();
                Ok((1.0 - moment) / (q - 1.0))
            }
        }
    }
}

/// The three bipartition entanglement values `(E_{A|BC}, E_{B|AC}, E_{C|AB})`
/// of a pure tripartite state, before raising to `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BipartitionVector<F> {
    pub values: [F; 3],
}

impl<F: Real> BipartitionVector<F> {
    pub fn new(values: [F; 3]) -> Result<Self> {
        if values.iter().any(|v| *v < -F::of(1e-12)) {
            return Err(Error::InvalidArgument(format!(
                "bipartition entanglement must be nonnegative, got {values:?}"
            )));
        }
        Ok(Self {
            values: values.map(|v| v.max(F::zero())),
        })
    }

    pub fn labels() -> [&'static str; 3] {
        ["A|BC", "B|AC", "C|AB"]
    }
}

/// Bipartition vector of a three-party pure state: the measure is evaluated on
/// each single-party reduced operator, using `E_{i|jk} = E(rho_i)`.
pub fn bipartition_vector(
    state: &PureState,
    spec: &MeasureSpec<f64>,
) -> Result<BipartitionVector<f64>> {
    if state.n_parties() != 3 {
        return Err(Error::InvalidArgument(format!(
            "expected exactly 3 parties, got {}",
            state.n_parties()
        )));
    }
    let mut values = [0.0; 3];
    for (i, v) in values.iter_mut().enumerate() {
        let rho = partial_trace(state, &[i])?;
        *v = measure_of_state(spec.kind, &rho)?;
    }
    BipartitionVector::new(values)
}

/// Schmidt parameters `(λ_A, λ_B, λ_C)` of a pure three-qubit state.
pub fn lambda_profile(state: &PureState) -> Result<[f64; 3]> {
    if state.dims() != [2, 2, 2] {
        return Err(Error::InvalidArgument(format!(
            "lambda profile requires three qubits, got dims {:?}",
            state.dims()
        )));
    }
    let mut out = [0.0; 3];
    for (i, l) in out.iter_mut().enumerate() {
        let rho = partial_trace(state, &[i])?;
        *l = eigen_spectrum(&rho)?.lambda_min;
    }
    Ok(out)
}

/// Polygon relation per party: `E^α(rho_i) <= Σ_{j≠i} E^α(rho_j) + 1e-10`.
pub fn polygon_check(state: &PureState, spec: &MeasureSpec<f64>) -> Result<Vec<bool>> {
    let n = state.n_parties();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "polygon relation needs at least 3 parties, got {n}"
        )));
    }
    let mut sides = Vec::with_capacity(n);
    for i in 0..n {
        let rho = partial_trace(state, &[i])?;
        sides.push(measure_of_state(spec.kind, &rho)?.powf(spec.alpha));
    }
    let total: f64 = sides.iter().sum();
    Ok(sides.iter().map(|&s| s <= total - s + 1e-10).collect())
}
