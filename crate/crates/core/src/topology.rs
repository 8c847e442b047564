//! Finitely checkable facts behind the homeomorphism types of the quotients.
//!
//! * `Sp(1)/G`: conjugation preserves `Re` and fixes `±1`, so the quotient is
//!   the suspension of `S²/G`. The branch data of `S² → S²/G` satisfies
//!   `2 = n(2 − Σ(1 − 1/νᵢ))`, which forces `S²/G` to have genus 0.
//! * `SO(3)/G = (Sp(1)/G)/τ` where `τ` comes from `x ↦ −x`. `τ` has a fixed
//!   point iff some lift `q` solves `q x q⁻¹ = −x`, iff `G` contains a
//!   half-turn, iff `|G|` is even. Fixed points give `S³`, none give `ℝP³`.

use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::coset::Base;
use crate::quaternion::{conj_action, random_unit, rotation_of, Quaternion, UnitQuaternion, Vec3};
use crate::rotgroups::{build_group, has_half_turn, GroupError, GroupSpec, RotationGroup};
use crate::tol::{ANTIPODAL_TOL, EPS, RE_PRESERVATION_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("Riemann-Hurwitz identity fails for {spec}: n·χ = {lhs}, expected 2")]
    IdentityViolation { spec: GroupSpec, lhs: String },
    #[error("parity signals disagree for {spec}: tau fixed points {tau}, half-turn {half_turn}, even order {even}")]
    ConsistencyFailure {
        spec: GroupSpec,
        tau: bool,
        half_turn: bool,
        even: bool,
    },
}

/// Solutions of `q x q⁻¹ = −x` on `Sp(1)`.
///
/// Non-empty exactly when `q` covers a half-turn; then the solutions form the
/// great circle of unit imaginary quaternions orthogonal to the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntipodalSolutions {
    pub solvable: bool,
    pub axis: Option<Vec3>,
}

impl AntipodalSolutions {
    /// Point at parameter `t` on the solution circle.
    pub fn circle_point(&self, t: f64) -> Option<Vec3> {
        if !self.solvable {
            return None;
        }
        let axis = self.axis?;
        let (u, v) = orthonormal_complement(axis);
        let (s, c) = t.sin_cos();
        Some(u.scale(c) + v.scale(s))
    }

    /// `count` equally spaced points of the solution circle.
    pub fn sample_circle(&self, count: usize) -> Vec<Vec3> {
        (0..count)
            .filter_map(|k| self.circle_point(2.0 * PI * k as f64 / count as f64))
            .collect()
    }
}

fn orthonormal_complement(axis: Vec3) -> (Vec3, Vec3) {
    let helper = if axis.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let u = axis.cross(helper).normalized();
    let v = axis.cross(u).normalized();
    (u, v)
}

/// Residual `|q x q⁻¹ + x|`.
pub fn antipodal_residual(q: UnitQuaternion, x: Vec3) -> f64 {
    let xq = x.to_quaternion();
    (conj_action(q, xq) + xq).norm()
}

pub fn solve_antipodal(q: UnitQuaternion) -> AntipodalSolutions {
    let r = rotation_of(q);
    match r.axis {
        Some(axis) if (r.angle - PI).abs() <= ANTIPODAL_TOL => AntipodalSolutions {
            solvable: true,
            axis: Some(axis),
        },
        axis => AntipodalSolutions { solvable: false, axis },
    }
}

/// Whether the involution of `Sp(1)/G` induced by `x ↦ −x` has a fixed point.
pub fn tau_has_fixed_points(group: &RotationGroup) -> bool {
    group.cover().iter().any(|&q| solve_antipodal(q).solvable)
}

/// Size of the orbit of `x` under `G × C₂` acting by `(g, ε)(x) = ε·q x q⁻¹`.
pub fn extended_orbit_size(group: &RotationGroup, x: UnitQuaternion) -> usize {
    let mut seen: Vec<Quaternion> = Vec::new();
    for q in group.lifts() {
        let y = conj_action(q, x.quaternion());
        for z in [y, -y] {
            if !seen.iter().any(|s| s.distance(z) <= EPS) {
                seen.push(z);
            }
        }
    }
    seen.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuspensionCheck {
    pub passed: bool,
    /// Largest `|Re(g(x)) − Re(x)|` over samples and cover elements.
    pub max_deviation: f64,
    /// Largest `|g(±1) ∓ 1|`.
    pub pole_deviation: f64,
}

/// Re-preservation and fixed poles for an arbitrary action of the cover.
pub fn check_re_preservation<F>(group: &RotationGroup, samples: usize, seed: u64, action: F) -> SuspensionCheck
where
    F: Fn(UnitQuaternion, Quaternion) -> Quaternion,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..samples {
        let x = random_unit(&mut rng).quaternion();
        for &q in group.cover() {
            max_deviation = max_deviation.max((action(q, x).re() - x.re()).abs());
        }
    }
    let mut pole_deviation: f64 = 0.0;
    for &q in group.cover() {
        for pole in [Quaternion::ONE, -Quaternion::ONE] {
            pole_deviation = pole_deviation.max(action(q, pole).distance(pole));
        }
    }
    SuspensionCheck {
        passed: max_deviation < RE_PRESERVATION_TOL && pole_deviation < RE_PRESERVATION_TOL,
        max_deviation,
        pole_deviation,
    }
}

/// Conjugation by every element of `2G` preserves `Re` and fixes `±1`.
pub fn check_suspension(group: &RotationGroup, samples: usize, seed: u64) -> SuspensionCheck {
    check_re_preservation(group, samples, seed, conj_action)
}

/// A `G`-orbit of points on `S²` with nontrivial stabilizer.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularOrbit {
    pub points: Vec<Vec3>,
    /// Number of group elements (identity included) fixing each point.
    pub stabilizer: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularOrbitData {
    pub group_order: usize,
    pub orbits: Vec<SingularOrbit>,
}

impl SingularOrbitData {
    /// Stabilizer orders in ascending order.
    pub fn signature(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits.iter().map(|o| o.stabilizer).collect();
        s.sort_unstable();
        s
    }
}

fn rotate(q: UnitQuaternion, p: Vec3) -> Vec3 {
    conj_action(q, p.to_quaternion()).im()
}

/// Branch points of `S² → S²/G`, grouped into orbits.
///
/// Candidates are the axis endpoints `±u` of each nontrivial rotation; the
/// stabilizer of each is counted directly over the group.
pub fn singular_orbits(group: &RotationGroup) -> SingularOrbitData {
    let mut candidates: Vec<Vec3> = Vec::new();
    for g in group.elements() {
        if let Some(axis) = g.rotation().axis {
            for p in [axis, -axis] {
                if !candidates.iter().any(|c| c.distance(p) <= EPS) {
                    candidates.push(p);
                }
            }
        }
    }

    let lifts: Vec<UnitQuaternion> = group.lifts().collect();
    let mut assigned = vec![false; candidates.len()];
    let mut orbits = Vec::new();
    for i in 0..candidates.len() {
        if assigned[i] {
            continue;
        }
        let p = candidates[i];
        let mut points: Vec<Vec3> = Vec::new();
        for &q in &lifts {
            let image = rotate(q, p);
            if !points.iter().any(|c| c.distance(image) <= EPS) {
                points.push(image);
            }
        }
        for (j, c) in candidates.iter().enumerate() {
            if points.iter().any(|p| p.distance(*c) <= EPS) {
                assigned[j] = true;
            }
        }
        let stabilizer = lifts.iter().filter(|&&q| rotate(q, p).distance(p) <= EPS).count();
        orbits.push(SingularOrbit { points, stabilizer });
    }
    orbits.sort_by_key(|o| o.stabilizer);
    SingularOrbitData {
        group_order: group.order(),
        orbits,
    }
}

/// Exact check of `n·(2 − Σ(1 − 1/νᵢ)) = 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannHurwitz {
    pub n: usize,
    pub signature: Vec<usize>,
    /// Orbifold Euler characteristic `2 − Σ(1 − 1/νᵢ)` of `S²/G`.
    pub orbifold_euler: Ratio<i64>,
}

pub fn riemann_hurwitz_check(group: &RotationGroup) -> Result<RiemannHurwitz, TopologyError> {
    let data = singular_orbits(group);
    let signature = data.signature();
    let n = group.order();
    let branching: Ratio<i64> = signature.iter().map(|&nu| Ratio::new(nu as i64 - 1, nu as i64)).sum();
    let orbifold_euler = Ratio::from_integer(2) - branching;
    let lhs = orbifold_euler * Ratio::from_integer(n as i64);
    if lhs != Ratio::from_integer(2) {
        return Err(TopologyError::IdentityViolation {
            spec: group.spec(),
            lhs: lhs.to_string(),
        });
    }
    Ok(RiemannHurwitz {
        n,
        signature,
        orbifold_euler,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Space {
    S3,
    RP3,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::S3 => "S3",
            Space::RP3 => "RP3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub suspension: bool,
    pub riemann_hurwitz: bool,
    pub parity_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub base: Base,
    pub family: String,
    pub n: usize,
    pub parity: Parity,
    pub tau_fixed_points: bool,
    pub predicted_space: Space,
    pub evidence: Evidence,
}

impl ClassificationReport {
    pub fn all_evidence(&self) -> bool {
        self.evidence.suspension && self.evidence.riemann_hurwitz && self.evidence.parity_consistent
    }
}

/// Samples used for the suspension evidence in [`classify`].
pub const SUSPENSION_SAMPLES: usize = 1000;

/// Predicted homeomorphism type of `W/G` together with the evidence for it.
///
/// The suspension and genus evidence concern `Sp(1)/G`; for `W = SO(3)` they
/// certify the first step of the factorization `SO(3)/G = (Sp(1)/G)/τ`.
pub fn classify(base: Base, spec: GroupSpec) -> Result<ClassificationReport, TopologyError> {
    let group = build_group(spec)?;
    let n = group.order();
    let tau = tau_has_fixed_points(&group);
    let half_turn = has_half_turn(&group);
    let even = n.is_multiple_of(2);
    if tau != half_turn || half_turn != even {
        return Err(TopologyError::ConsistencyFailure {
            spec,
            tau,
            half_turn,
            even,
        });
    }
    let predicted_space = match base {
        Base::Sp1 => Space::S3,
        Base::So3 if tau => Space::S3,
        Base::So3 => Space::RP3,
    };
    let evidence = Evidence {
        suspension: check_suspension(&group, SUSPENSION_SAMPLES, 0).passed,
        riemann_hurwitz: riemann_hurwitz_check(&group).is_ok(),
        parity_consistent: true,
    };
    Ok(ClassificationReport {
        base,
        family: spec.to_string(),
        n,
        parity: if even { Parity::Even } else { Parity::Odd },
        tau_fixed_points: tau,
        predicted_space,
        evidence,
    })
}
