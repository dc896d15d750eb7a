//! Named randomized property suites. Each suite is deterministic for a fixed
//! seed and reports failures with replayable counterexample dumps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gaussian::{gaussian_det_relations, gaussian_renyi2, random_pure_tripartite_cm};
use crate::geometry::{
    area_bounds, area_from_sides, hessian_minors, triangle_area, triangle_check, Cosines,
    HessianCoordinates,
};
use crate::hybrid::hybrid_area_sweep;
use crate::locc::{measurement_from_params, monotonicity_gap, MeasurementParams};
use crate::measures::{bipartition_vector, polygon_check, MeasureKind, MeasureSpec};
use crate::random::haar_pure_state;
use crate::states::PureState;

/// Measures exercised by the randomized suites.
pub fn suite_measures() -> [MeasureKind<f64>; 6] {
    [
        MeasureKind::SchmidtWeight,
        MeasureKind::ConcurrenceSquared,
        MeasureKind::NegativitySquared,
        MeasureKind::VonNeumann,
        MeasureKind::Tsallis(2.0),
        MeasureKind::Renyi2,
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    TriangleHolds,
    Strictness,
    NonObtuse,
    Monotonicity,
    GaussianRelations,
    HybridSweep,
    Polygon,
    HessianMinors,
    BoundsSandwich,
}

impl SuiteName {
    pub const ALL: [SuiteName; 9] = [
        SuiteName::TriangleHolds,
        SuiteName::Strictness,
        SuiteName::NonObtuse,
        SuiteName::Monotonicity,
        SuiteName::GaussianRelations,
        SuiteName::HybridSweep,
        SuiteName::Polygon,
        SuiteName::HessianMinors,
        SuiteName::BoundsSandwich,
    ];

    pub fn parse(name: &str) -> Result<Self> {
        let found = Self::ALL.iter().find(|s| s.as_str() == name);
        found.copied().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown suite {name:?}; known suites: {}",
                Self::ALL.map(|s| s.as_str()).join(", ")
            ))
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::TriangleHolds => "triangle-holds",
            SuiteName::Strictness => "strictness",
            SuiteName::NonObtuse => "non-obtuse",
            SuiteName::Monotonicity => "monotonicity",
            SuiteName::GaussianRelations => "gaussian-relations",
            SuiteName::HybridSweep => "hybrid-sweep",
            SuiteName::Polygon => "polygon",
            SuiteName::HessianMinors => "hessian-minors",
            SuiteName::BoundsSandwich => "bounds-sandwich",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub seed: u64,
    pub samples: usize,
    pub checks: usize,
    pub failures: usize,
    pub counterexamples: Vec<Value>,
    pub passed: bool,
}

const MAX_COUNTEREXAMPLES: usize = 10;

struct SuiteRun {
    checks: usize,
    failures: usize,
    counterexamples: Vec<Value>,
}

impl SuiteRun {
    fn new() -> Self {
        Self {
            checks: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, dump: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(dump());
            }
        }
    }
}

fn amplitudes_json(state: &PureState) -> Value {
    let amps: Vec<[f64; 2]> = state.amplitudes().iter().map(|c| [c.re, c.im]).collect();
    json!({ "dims": state.dims(), "amplitudes": amps })
}

/// Runs one named suite with the given seed and sample count; evaluation is
/// sequential so replays are exact.
pub fn run_suite(suite: SuiteName, seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = SuiteRun::new();
    match suite {
        SuiteName::TriangleHolds => {
            let alphas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
            for _ in 0..samples {
                let state = haar_pure_state(&[2, 2, 2], &mut rng);
                for kind in suite_measures() {
                    let spec = MeasureSpec::new(kind, 1.0)?;
                    let v = bipartition_vector(&state, &spec)?;
                    for alpha in alphas {
                        let check = triangle_check(&v, alpha);
                        run.record(check.all_hold(), || {
                            json!({
                                "state": amplitudes_json(&state),
                                "measure": kind.name(),
                                "alpha": alpha,
                                "slack": check.slack,
                                "seed": seed,
                            })
                        });
                    }
                }
            }
        }
        SuiteName::Strictness => {
            let alphas = [0.1, 0.3, 0.5, 0.7, 0.9];
            for _ in 0..samples {
                let state = haar_pure_state(&[2, 2, 2], &mut rng);
                for kind in suite_measures() {
                    let spec = MeasureSpec::new(kind, 1.0)?;
                    let v = bipartition_vector(&state, &spec)?;
                    // Haar states are genuinely entangled almost surely; skip
                    // the measure-zero boundary to keep the claim exact.
                    if v.values.iter().any(|&x| x < 1e-8) {
                        continue;
                    }
                    for alpha in alphas {
                        let check = triangle_check(&v, alpha);
                        run.record(check.worst_slack() > 0.0, || {
                            json!({
                                "state": amplitudes_json(&state),
                                "measure": kind.name(),
                                "alpha": alpha,
                                "slack": check.slack,
                                "seed": seed,
                            })
                        });
                    }
                }
            }
        }
        SuiteName::NonObtuse => {
            let alphas = [0.1, 0.25, 0.5];
            for _ in 0..samples {
                let state = haar_pure_state(&[2, 2, 2], &mut rng);
                for kind in suite_measures() {
                    let spec = MeasureSpec::new(kind, 1.0)?;
                    let v = bipartition_vector(&state, &spec)?;
                    for alpha in alphas {
                        let report = triangle_area(&v, alpha, false)?;
                        let ok = match report.cosines {
                            Cosines::Values(c) => c.iter().all(|&x| x >= -1e-10),
                            Cosines::Degenerate => true,
                        };
                        run.record(ok, || {
                            json!({
                                "state": amplitudes_json(&state),
                                "measure": kind.name(),
                                "alpha": alpha,
                                "cosines": report.cosines,
                                "seed": seed,
                            })
                        });
                    }
                }
            }
        }
        SuiteName::Monotonicity => {
            let pi = std::f64::consts::PI;
            for _ in 0..samples {
                let state = haar_pure_state(&[2, 2, 2], &mut rng);
                for _ in 0..10 {
                    let params = MeasurementParams::new(
                        rng.gen_range(-pi..pi),
                        rng.gen_range(-pi..pi),
                        rng.gen_range(-pi..pi),
                        rng.gen_range(-pi..pi),
                    )?;
                    let m = measurement_from_params(&params);
                    for kind in suite_measures() {
                        for alpha in [0.25, 0.5] {
                            let spec = MeasureSpec::new(kind, alpha)?;
                            let gap = monotonicity_gap(&state, &m, &spec)?;
                            run.record(gap >= -1e-9, || {
                                json!({
                                    "state": amplitudes_json(&state),
                                    "measure": kind.name(),
                                    "alpha": alpha,
                                    "measurement": params,
                                    "gap": gap,
                                    "seed": seed,
                                })
                            });
                        }
                    }
                }
            }
        }
        SuiteName::GaussianRelations => {
            for _ in 0..samples {
                let cm = random_pure_tripartite_cm([1, 1, 1], &mut rng);
                let report = gaussian_det_relations(&cm)?;
                run.record(report.all_hold, || {
                    json!({
                        "sigma": cm.sigma().as_slice(),
                        "report": report,
                        "seed": seed,
                    })
                });
                let r: Vec<f64> = (0..3)
                    .map(|p| gaussian_renyi2(&cm, &[p]))
                    .collect::<Result<_>>()?;
                let renyi_ok = (0..3).all(|i| r[i] <= r[(i + 1) % 3] + r[(i + 2) % 3] + 1e-9);
                run.record(renyi_ok, || {
                    json!({ "sigma": cm.sigma().as_slice(), "renyi2": r, "seed": seed })
                });
            }
        }
        SuiteName::HybridSweep => {
            let n = 50;
            let grid: Vec<f64> = (0..n).map(|i| -2.5 + 5.0 * i as f64 / (n - 1) as f64).collect();
            let table = hybrid_area_sweep(&grid, &grid, 0.5)?;
            for p in table {
                let i = p.impurities;
                let triangle_ok = (0..3).all(|k| i[k] <= i[(k + 1) % 3] + i[(k + 2) % 3] + 1e-9);
                let bound_ok = p.area <= 0.5 + 1e-10;
                let diag_ok = (p.alpha1 - p.alpha2).abs() > 1e-12 || p.area.abs() < 1e-12;
                run.record(triangle_ok && bound_ok && diag_ok, || json!(p));
            }
        }
        SuiteName::Polygon => {
            let spec = MeasureSpec::new(MeasureKind::Impurity, 1.0)?;
            for _ in 0..samples {
                let state = haar_pure_state(&[2, 2, 2, 2], &mut rng);
                let verdicts = polygon_check(&state, &spec)?;
                run.record(verdicts.iter().all(|&b| b), || {
                    json!({ "state": amplitudes_json(&state), "verdicts": verdicts, "seed": seed })
                });
            }
        }
        SuiteName::HessianMinors => {
            let mut produced = 0usize;
            while produced < samples {
                let x = [
                    rng.gen_range(0.01..1.0),
                    rng.gen_range(0.01..1.0),
                    rng.gen_range(0.01..1.0),
                ];
                let sides = x.map(f64::sqrt);
                match area_from_sides(sides) {
                    Ok(a) if a > 1e-6 => {}
                    _ => continue,
                }
                produced += 1;
                let r2 = hessian_minors(x, HessianCoordinates::E2Alpha)?;
                run.record(r2.negative_semidefinite, || json!({ "x": x, "report": r2 }));
                let r1 = hessian_minors(sides, HessianCoordinates::EAlpha)?;
                run.record(r1.det_h > 0.0, || json!({ "sides": sides, "report": r1 }));
            }
        }
        SuiteName::BoundsSandwich => {
            for _ in 0..samples {
                let state = haar_pure_state(&[2, 2, 2], &mut rng);
                for kind in suite_measures() {
                    let spec = MeasureSpec::new(kind, 1.0)?;
                    let v = bipartition_vector(&state, &spec)?;
                    for alpha in [0.1, 0.3, 0.5] {
                        let report = triangle_area(&v, alpha, false)?;
                        let (lo, hi) = area_bounds(&v, alpha);
                        let ok = lo <= report.area + 1e-10 && report.area <= hi + 1e-10;
                        run.record(ok, || {
                            json!({
                                "state": amplitudes_json(&state),
                                "measure": kind.name(),
                                "alpha": alpha,
                                "area": report.area,
                                "lower": lo,
                                "upper": hi,
                                "seed": seed,
                            })
                        });
                    }
                }
            }
        }
    }
    Ok(SuiteReport {
        suite,
        seed,
        samples,
        checks: run.checks,
        failures: run.failures,
        passed: run.failures == 0,
        counterexamples: run.counterexamples,
    })
}
