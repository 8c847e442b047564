//! Randomized checks of the n-valued group axioms on a coset space:
//!
//! 1. `μ(x, μ(y, z)) = μ(μ(x, y), z)` in `Sym^{n²} X`;
//! 2. `μ(x, e) = μ(e, x) = [x, …, x]`;
//! 3. `e ∈ μ(x, inv(x))` and `e ∈ μ(inv(x), x)`;
//!
//! plus independence of `μ` from the choice of representatives.
//!
//! Sample points are generic (see [`CosetSpace::random_point`]). A trial whose
//! canonicalization hits a tie is redrawn and counted as a warning.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coset::{CosetSpace, Orbit, OrbitMultiset, Projected, SpaceDescriptor, TieWarning};
use crate::rotgroups::GroupSpec;
use crate::tol::AXIOM_TOL;

/// Redraws allowed per trial before the best-effort value is accepted.
const MAX_REDRAWS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Identity,
    Inverse,
    Associativity,
    WellDefined,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Identity => "identity",
            Axiom::Inverse => "inverse",
            Axiom::Associativity => "associativity",
            Axiom::WellDefined => "well_defined",
        })
    }
}

/// Result of one randomized suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub trials: usize,
    pub failures: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Trials redrawn because of a degenerate canonicalization.
    pub warnings: usize,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub space: SpaceDescriptor,
    pub seed: u64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn check(&self, axiom: Axiom) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn merge(mut self, other: AxiomReport) -> AxiomReport {
        self.checks.extend(other.checks);
        self
    }
}

struct Trial {
    deviation: f64,
    ok: bool,
}

impl Trial {
    fn within(deviation: f64, tol: f64) -> Self {
        Trial {
            deviation,
            ok: deviation <= tol,
        }
    }
}

fn run_trials<F>(space: &CosetSpace, axiom: Axiom, trials: usize, seed: u64, tol: f64, mut trial: F) -> AxiomReport
where
    F: FnMut(&mut ChaCha8Rng) -> Projected<Trial>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = AxiomCheck {
        axiom,
        trials,
        failures: 0,
        max_deviation: 0.0,
        tolerance: tol,
        warnings: 0,
    };
    for _ in 0..trials {
        let mut outcome = trial(&mut rng);
        let mut redraws = 0;
        while let Err(TieWarning { .. }) = outcome {
            check.warnings += 1;
            redraws += 1;
            if redraws >= MAX_REDRAWS {
                break;
            }
            outcome = trial(&mut rng);
        }
        let t = outcome.unwrap_or_else(TieWarning::into_inner);
        if !t.ok || t.deviation.is_nan() {
            check.failures += 1;
        }
        if t.deviation > check.max_deviation || t.deviation.is_nan() {
            check.max_deviation = t.deviation;
        }
    }
    AxiomReport {
        space: space.descriptor(),
        seed,
        checks: vec![check],
    }
}

/// Propagates a tie from `p` into the trial result.
fn lift<T>(p: Projected<T>, tie: &mut bool) -> T {
    match p {
        Ok(v) => v,
        Err(t) => {
            *tie = true;
            t.value
        }
    }
}

fn finish(trial: Trial, tie: bool) -> Projected<Trial> {
    if tie {
        Err(TieWarning { value: trial, gap: 0.0 })
    } else {
        Ok(trial)
    }
}

fn random_orbit(space: &CosetSpace, rng: &mut ChaCha8Rng, tie: &mut bool) -> Orbit {
    lift(space.project(space.random_point(rng)), tie)
}

fn distance_to_nearest(space: &CosetSpace, set: &OrbitMultiset, target: &Orbit) -> f64 {
    set.iter()
        .map(|o| space.orbit_distance(o, target))
        .fold(f64::INFINITY, f64::min)
}

/// Axiom (2): `μ(e, x)` and `μ(x, e)` are `n` copies of `x`.
pub fn check_identity(space: &CosetSpace, samples: usize, seed: u64, tol: f64) -> AxiomReport {
    let e = space.identity();
    run_trials(space, Axiom::Identity, samples, seed, tol, |rng| {
        let mut tie = false;
        let x = random_orbit(space, rng, &mut tie);
        let left = lift(space.mu(&e, &x), &mut tie);
        let right = lift(space.mu(&x, &e), &mut tie);
        let mut deviation: f64 = 0.0;
        for o in left.iter().chain(&right) {
            deviation = deviation.max(space.orbit_distance(o, &x));
        }
        let sized = left.len() == space.n() && right.len() == space.n();
        let mut t = Trial::within(deviation, tol);
        t.ok &= sized;
        finish(t, tie)
    })
}

/// Axiom (3): `e` occurs in `μ(x, inv(x))` and in `μ(inv(x), x)`.
pub fn check_inverse(space: &CosetSpace, samples: usize, seed: u64, tol: f64) -> AxiomReport {
    let e = space.identity();
    run_trials(space, Axiom::Inverse, samples, seed, tol, |rng| {
        let mut tie = false;
        let x = random_orbit(space, rng, &mut tie);
        let xi = space.inv(&x);
        let left = lift(space.mu(&x, &xi), &mut tie);
        let right = lift(space.mu(&xi, &x), &mut tie);
        let deviation = distance_to_nearest(space, &left, &e).max(distance_to_nearest(space, &right, &e));
        finish(Trial::within(deviation, tol), tie)
    })
}

/// Axiom (1), compared as multisets of `n²` orbits.
pub fn check_assoc(space: &CosetSpace, triples: usize, seed: u64, tol: f64) -> AxiomReport {
    run_trials(space, Axiom::Associativity, triples, seed, tol, |rng| {
        let mut tie = false;
        let x = random_orbit(space, rng, &mut tie);
        let y = random_orbit(space, rng, &mut tie);
        let z = random_orbit(space, rng, &mut tie);
        let left = lift(space.mu_left(&x, &y, &z), &mut tie);
        let right = lift(space.mu_right(&x, &y, &z), &mut tie);
        let t = match space.match_multisets(&left, &right, tol) {
            Ok(m) => Trial {
                deviation: m.max_distance,
                ok: m.matched,
            },
            Err(_) => Trial {
                deviation: f64::INFINITY,
                ok: false,
            },
        };
        finish(t, tie)
    })
}

/// `μ(π(g(a)), π(h(b)))` computed from the shifted representatives agrees
/// with `μ(π(a), π(b))`.
pub fn check_well_defined(space: &CosetSpace, samples: usize, seed: u64, tol: f64) -> AxiomReport {
    run_trials(space, Axiom::WellDefined, samples, seed, tol, |rng| {
        let mut tie = false;
        let a = space.random_point(rng);
        let b = space.random_point(rng);
        let g = rng.random_range(0..space.n());
        let h = rng.random_range(0..space.n());
        let shifted = lift(space.mu_points(space.act(g, a), space.act(h, b)), &mut tie);
        let direct = lift(space.mu_points(a, b), &mut tie);
        let t = match space.match_multisets(&shifted, &direct, tol) {
            Ok(m) => Trial {
                deviation: m.max_distance,
                ok: m.matched,
            },
            Err(_) => Trial {
                deviation: f64::INFINITY,
                ok: false,
            },
        };
        finish(t, tie)
    })
}

/// Trial counts and tolerance for a full verification run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub identity_samples: usize,
    pub inverse_samples: usize,
    pub triples: usize,
    pub well_defined_samples: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl VerifyConfig {
    /// 200/200/100 samples and 50 triples; the icosahedral group gets 20
    /// triples since each one expands to 3600 products per side.
    pub fn defaults_for(spec: GroupSpec) -> Self {
        VerifyConfig {
            identity_samples: 200,
            inverse_samples: 200,
            triples: if spec == GroupSpec::Icosahedral { 20 } else { 50 },
            well_defined_samples: 100,
            seed: 0,
            tolerance: AXIOM_TOL,
        }
    }
}

/// Runs all four suites.
pub fn verify_space(space: &CosetSpace, cfg: &VerifyConfig) -> AxiomReport {
    check_identity(space, cfg.identity_samples, cfg.seed, cfg.tolerance)
        .merge(check_inverse(space, cfg.inverse_samples, cfg.seed, cfg.tolerance))
        .merge(check_assoc(space, cfg.triples, cfg.seed, cfg.tolerance))
        .merge(check_well_defined(
            space,
            cfg.well_defined_samples,
            cfg.seed,
            cfg.tolerance,
        ))
}
