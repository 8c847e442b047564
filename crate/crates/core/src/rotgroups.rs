//! The finite subgroups of SO(3) and their binary covers in Sp(1).
//!
//! Every group is enumerated by breadth-first closure of a fixed set of
//! generator lifts:
//!
//! | family | generator lifts                                      |
//! |--------|------------------------------------------------------|
//! | `Cn`   | `cos(π/n) + sin(π/n)k`                               |
//! | `Dm`   | the `Cm` generator and `i`                           |
//! | `T`    | `i`, `j`, `(1+i+j+k)/2`                              |
//! | `O`    | the `T` generators and `(1+k)/√2`                    |
//! | `I`    | the `T` generators and `(φ + φ⁻¹i + j)/2`            |
//!
//! so `T` is the rotation group of the tetrahedron inscribed in `[-1, 1]³`
//! and its cover is exactly the 24 Hurwitz units.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::quaternion::{rotation_of, Quaternion, Rotation, UnitQuaternion, Vec3};
use crate::tol::EPS;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("invalid group spec {0:?}: expected Cn, Dm (n, m >= 1), T, O or I")]
    InvalidSpec(String),
    #[error("closure of {spec} produced {found} cover elements, expected {expected}")]
    ClosureFailure {
        spec: GroupSpec,
        found: usize,
        expected: usize,
    },
    #[error("point {0} is not an element of the group")]
    NotInGroup(UnitQuaternion),
}

/// One of the five families of finite rotation groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSpec {
    Cyclic(u32),
    Dihedral(u32),
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl GroupSpec {
    pub fn order(self) -> usize {
        match self {
            GroupSpec::Cyclic(n) => n as usize,
            GroupSpec::Dihedral(m) => 2 * m as usize,
            GroupSpec::Tetrahedral => 12,
            GroupSpec::Octahedral => 24,
            GroupSpec::Icosahedral => 60,
        }
    }

    /// `C1..C8, D1..D6, T, O, I`.
    pub fn catalog() -> Vec<GroupSpec> {
        let mut specs: Vec<_> = (1..=8).map(GroupSpec::Cyclic).collect();
        specs.extend((1..=6).map(GroupSpec::Dihedral));
        specs.extend([GroupSpec::Tetrahedral, GroupSpec::Octahedral, GroupSpec::Icosahedral]);
        specs
    }

    /// `D1` and `C2` are both generated by a single half-turn; they differ only
    /// in the axis, so they are conjugate in SO(3).
    pub fn conjugate_alias(self) -> Option<GroupSpec> {
        match self {
            GroupSpec::Dihedral(1) => Some(GroupSpec::Cyclic(2)),
            GroupSpec::Cyclic(2) => Some(GroupSpec::Dihedral(1)),
            _ => None,
        }
    }

    fn generators(self) -> Vec<UnitQuaternion> {
        let z_turn = |n: u32| {
            let half = PI / n as f64;
            // cos(π/2) is 6e-17 in floating point; the half-turn lift should be exactly k.
            let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
            UnitQuaternion::new_unchecked(Quaternion::new(snap(half.cos()), 0.0, 0.0, snap(half.sin())))
        };
        let hurwitz = || {
            vec![
                UnitQuaternion::I,
                UnitQuaternion::J,
                UnitQuaternion::new_unchecked(Quaternion::new(0.5, 0.5, 0.5, 0.5)),
            ]
        };
        match self {
            GroupSpec::Cyclic(n) => vec![z_turn(n)],
            GroupSpec::Dihedral(m) => vec![z_turn(m), UnitQuaternion::I],
            GroupSpec::Tetrahedral => hurwitz(),
            GroupSpec::Octahedral => {
                let mut g = hurwitz();
                g.push(UnitQuaternion::new_unchecked(Quaternion::new(
                    FRAC_1_SQRT_2,
                    0.0,
                    0.0,
                    FRAC_1_SQRT_2,
                )));
                g
            }
            GroupSpec::Icosahedral => {
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                let mut g = hurwitz();
                let q = Quaternion::new(phi / 2.0, 0.5 / phi, 0.5, 0.0);
                g.push(UnitQuaternion::new_normalize(q).expect("icosian generator has unit norm"));
                g
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "C{n}"),
            GroupSpec::Dihedral(m) => write!(f, "D{m}"),
            GroupSpec::Tetrahedral => f.write_str("T"),
            GroupSpec::Octahedral => f.write_str("O"),
            GroupSpec::Icosahedral => f.write_str("I"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_uppercase();
        let bad = || GroupError::InvalidSpec(s.to_string());
        match t.as_str() {
            "T" => return Ok(GroupSpec::Tetrahedral),
            "O" => return Ok(GroupSpec::Octahedral),
            "I" => return Ok(GroupSpec::Icosahedral),
            _ => {}
        }
        let (family, digits) = t.split_at(t.chars().next().map_or(0, char::len_utf8));
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let k: u32 = digits.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match family {
            "C" => Ok(GroupSpec::Cyclic(k)),
            "D" => Ok(GroupSpec::Dihedral(k)),
            _ => Err(bad()),
        }
    }
}

/// Sort key: coordinates rounded to 12 decimals.
pub(crate) fn rounded_key(c: [f64; 4]) -> [i64; 4] {
    c.map(|v| (v * 1e12).round() as i64)
}

/// A point of SO(3) = Sp(1)/{±1}, stored as the lift whose first coordinate
/// of magnitude above `EPS` is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPoint(UnitQuaternion);

impl ProjPoint {
    pub fn new(q: UnitQuaternion) -> Self {
        let c = q.to_array();
        match c.iter().find(|v| v.abs() > EPS) {
            Some(v) if *v < 0.0 => Self(-q),
            _ => Self(q),
        }
    }

    pub fn identity() -> Self {
        Self(UnitQuaternion::ONE)
    }

    pub fn lift(self) -> UnitQuaternion {
        self.0
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0.to_array()
    }

    pub fn distance(self, other: Self) -> f64 {
        self.0.projective_distance(other.0)
    }

    pub fn is_identity(self) -> bool {
        self.distance(Self::identity()) <= EPS
    }

    pub fn rotation(self) -> Rotation {
        rotation_of(self.0)
    }
}

impl std::ops::Mul for ProjPoint {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new((self.0 * r.0).renormalize())
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A finite subgroup `G ⊂ SO(3)` together with its binary cover `2G ⊂ Sp(1)`.
#[derive(Debug, Clone)]
pub struct RotationGroup {
    spec: GroupSpec,
    elements: Vec<ProjPoint>,
    cover: Vec<UnitQuaternion>,
    identity: usize,
}

fn key_cmp(a: [f64; 4], b: [f64; 4]) -> Ordering {
    rounded_key(a).cmp(&rounded_key(b))
}

fn position_within(points: &[UnitQuaternion], q: UnitQuaternion) -> Option<usize> {
    points.iter().position(|p| p.distance(q) <= EPS)
}

/// Enumerates the group generated by `spec`'s fixed generators.
pub fn build_group(spec: GroupSpec) -> Result<RotationGroup, GroupError> {
    let expected = 2 * spec.order();
    let mut generators = spec.generators();
    generators.push(-UnitQuaternion::ONE);

    let mut cover = vec![UnitQuaternion::ONE];
    let mut queue = VecDeque::from([UnitQuaternion::ONE]);
    while let Some(x) = queue.pop_front() {
        for &g in &generators {
            let y = (x * g).renormalize();
            if position_within(&cover, y).is_none() {
                cover.push(y);
                queue.push_back(y);
                if cover.len() > 2 * expected {
                    return Err(GroupError::ClosureFailure {
                        spec,
                        found: cover.len(),
                        expected,
                    });
                }
            }
        }
    }
    if cover.len() != expected {
        return Err(GroupError::ClosureFailure {
            spec,
            found: cover.len(),
            expected,
        });
    }

    let mut elements: Vec<ProjPoint> = Vec::with_capacity(spec.order());
    for &q in &cover {
        let p = ProjPoint::new(q);
        if !elements.iter().any(|e| e.distance(p) <= EPS) {
            elements.push(p);
        }
    }
    if elements.len() != spec.order() {
        return Err(GroupError::ClosureFailure {
            spec,
            found: 2 * elements.len(),
            expected,
        });
    }
    Ok(RotationGroup::from_elements(spec, elements))
}

impl RotationGroup {
    /// Assembles a group from its elements without checking closure.
    ///
    /// Sorts the elements and derives the cover `{±q}`. Used by
    /// [`build_group`] and by [`RotationGroup::perturbed`] to make sets that
    /// are deliberately not groups.
    fn from_elements(spec: GroupSpec, mut elements: Vec<ProjPoint>) -> Self {
        elements.sort_by(|a, b| key_cmp(a.to_array(), b.to_array()));
        let mut cover: Vec<UnitQuaternion> = elements.iter().flat_map(|e| [e.lift(), -e.lift()]).collect();
        cover.sort_by(|a, b| key_cmp(a.to_array(), b.to_array()));
        let identity = elements.iter().position(|e| e.is_identity()).unwrap_or(0);
        Self {
            spec,
            elements,
            cover,
            identity,
        }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ProjPoint] {
        &self.elements
    }

    /// One lift per element, in element order.
    pub fn lifts(&self) -> impl ExactSizeIterator<Item = UnitQuaternion> + '_ {
        self.elements.iter().map(|e| e.lift())
    }

    pub fn cover(&self) -> &[UnitQuaternion] {
        &self.cover
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, g: ProjPoint) -> Option<usize> {
        self.elements.iter().position(|e| e.distance(g) <= EPS)
    }

    /// Largest distance from a product `gᵢgⱼ` to the nearest element.
    /// Zero up to rounding for a genuine group.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for &a in &self.elements {
            for &b in &self.elements {
                let p = a * b;
                let d = self
                    .elements
                    .iter()
                    .map(|e| e.distance(p))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Copy of this group with element `index` replaced by its composition with
    /// a rotation by `angle` about `axis`. The result is no longer closed.
    pub fn perturbed(&self, index: usize, axis: Vec3, angle: f64) -> RotationGroup {
        let mut elements = self.elements.clone();
        let twist = UnitQuaternion::from_axis_angle(axis, angle);
        elements[index] = ProjPoint::new((elements[index].lift() * twist).renormalize());
        RotationGroup::from_elements(self.spec, elements)
    }
}

/// Both lifts `±q` of every element.
pub fn binary_cover(group: &RotationGroup) -> Vec<UnitQuaternion> {
    group.cover.clone()
}

/// Least `d ≥ 1` with `gᵈ = e`.
pub fn element_order(g: ProjPoint, group: &RotationGroup) -> Result<usize, GroupError> {
    if group.index_of(g).is_none() {
        return Err(GroupError::NotInGroup(g.lift()));
    }
    let mut power = g;
    for d in 1..=group.order() {
        if power.is_identity() {
            return Ok(d);
        }
        power = power * g;
    }
    Err(GroupError::NotInGroup(g.lift()))
}

/// Whether `G` contains a rotation by π.
pub fn has_half_turn(group: &RotationGroup) -> bool {
    group
        .elements
        .iter()
        .any(|&g| !g.is_identity() && matches!(element_order(g, group), Ok(2)))
}
