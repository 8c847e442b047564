//! The coset n-valued group `X = W/G` for `W ∈ {Sp(1), SO(3)}`.
//!
//! `G` acts on `W` by conjugation `w ↦ q w q⁻¹`, where `q` is either lift of
//! the rotation. Points of `X` are orbits, each stored by a canonical
//! representative: the lexicographic maximum of its images, coordinates
//! compared at `EPS` granularity. For `W = SO(3)` the images of both signs
//! are taken, which also fixes the sign of the representative.
//!
//! The product is `μ(π(a), π(b)) = [π(a·g₁(b)), …, π(a·gₙ(b))]` and the
//! inverse `inv(π(w)) = π(w⁻¹)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::matching::{complete_matching, Adjacency};
use crate::quaternion::{conj_action, random_unit, Quaternion, UnitQuaternion};
use crate::rotgroups::{ProjPoint, RotationGroup};
use crate::tol::{EPS, GENERIC_SEPARATION, TIE_BAND};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CosetError {
    #[error("multisets have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("unknown base {0:?}: expected sp1 or so3")]
    InvalidBase(String),
}

/// A canonicalization that could not separate two distinct images of a point.
///
/// The best-effort value is still available; callers that need a robust
/// representative resample instead.
#[derive(Debug, Clone, PartialEq)]
pub struct TieWarning<T> {
    pub value: T,
    /// Distance between the competing images.
    pub gap: f64,
}

impl<T> TieWarning<T> {
    pub fn into_inner(self) -> T {
        self.value
    }
}

impl<T> fmt::Display for TieWarning<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degenerate canonicalization: two images {:.3e} apart", self.gap)
    }
}

impl<T: fmt::Debug> std::error::Error for TieWarning<T> {}

pub type Projected<T> = Result<T, TieWarning<T>>;

/// Unwraps a [`Projected`] value, ignoring a tie.
pub fn best_effort<T>(p: Projected<T>) -> T {
    p.unwrap_or_else(TieWarning::into_inner)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Base {
    Sp1,
    So3,
}

impl Base {
    pub const ALL: [Base; 2] = [Base::Sp1, Base::So3];
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Sp1 => "sp1",
            Base::So3 => "so3",
        })
    }
}

impl FromStr for Base {
    type Err = CosetError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sp1" => Ok(Base::Sp1),
            "so3" => Ok(Base::So3),
            _ => Err(CosetError::InvalidBase(s.to_string())),
        }
    }
}

/// Identifies a coset space in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpaceDescriptor {
    pub base: Base,
    pub group: String,
    pub n: usize,
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} (n={})", self.base, self.group, self.n)
    }
}

/// A point of `X`, stored as its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orbit {
    rep: UnitQuaternion,
}

impl Orbit {
    pub fn representative(&self) -> UnitQuaternion {
        self.rep
    }
}

/// JSON form of an orbit: the representative rounded to 12 decimals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub space: SpaceDescriptor,
    pub rep: [f64; 4],
}

/// Rounds to 12 decimals, mapping `-0.0` to `0.0`.
pub fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12 + 0.0
}

/// An unordered value of `μ`, with multiplicity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OrbitMultiset {
    items: Vec<Orbit>,
}

impl OrbitMultiset {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Orbit> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[Orbit] {
        &self.items
    }

    /// Distinct orbits (by representative, within `tol`) with multiplicities,
    /// in order of first appearance.
    pub fn grouped(&self, tol: f64) -> Vec<(Orbit, usize)> {
        let mut out: Vec<(Orbit, usize)> = Vec::new();
        for o in &self.items {
            match out.iter_mut().find(|(p, _)| p.rep.distance(o.rep) <= tol) {
                Some((_, m)) => *m += 1,
                None => out.push((*o, 1)),
            }
        }
        out
    }
}

impl From<Vec<Orbit>> for OrbitMultiset {
    fn from(items: Vec<Orbit>) -> Self {
        Self { items }
    }
}

impl FromIterator<Orbit> for OrbitMultiset {
    fn from_iter<I: IntoIterator<Item = Orbit>>(iter: I) -> Self {
        Self {
            items: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a OrbitMultiset {
    type Item = &'a Orbit;
    type IntoIter = std::slice::Iter<'a, Orbit>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// Lexicographic comparison that treats coordinates within `eps` as equal.
fn cmp_eps(a: &[f64; 4], b: &[f64; 4], eps: f64) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        if d > eps {
            return Ordering::Greater;
        }
        if d < -eps {
            return Ordering::Less;
        }
    }
    Ordering::Equal
}

/// Outcome of comparing two multisets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchOutcome {
    pub matched: bool,
    /// Largest distance over matched pairs; when no perfect matching exists,
    /// the largest nearest-neighbour distance among the unmatched elements.
    pub max_distance: f64,
    pub used_fallback: bool,
}

/// `X = W/G`.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    base: Base,
    group: RotationGroup,
    lifts: Vec<UnitQuaternion>,
}

impl CosetSpace {
    pub fn new(base: Base, group: RotationGroup) -> Self {
        let lifts = group.lifts().collect();
        Self { base, group, lifts }
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn group(&self) -> &RotationGroup {
        &self.group
    }

    /// `n = |G|`.
    pub fn n(&self) -> usize {
        self.lifts.len()
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        SpaceDescriptor {
            base: self.base,
            group: self.group.spec().to_string(),
            n: self.n(),
        }
    }

    pub fn record(&self, x: &Orbit) -> OrbitRecord {
        OrbitRecord {
            space: self.descriptor(),
            rep: x.rep.to_array().map(round12),
        }
    }

    /// Brings an arbitrary unit quaternion into the point set of `W`.
    pub fn point(&self, w: UnitQuaternion) -> UnitQuaternion {
        match self.base {
            Base::Sp1 => w,
            Base::So3 => ProjPoint::new(w).lift(),
        }
    }

    /// `gᵢ(w) = qᵢ w qᵢ⁻¹`.
    pub fn act(&self, i: usize, w: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion::new_unchecked(conj_action(self.lifts[i], w.quaternion()))
    }

    fn point_distance(&self, a: UnitQuaternion, b: UnitQuaternion) -> f64 {
        match self.base {
            Base::Sp1 => a.distance(b),
            Base::So3 => a.projective_distance(b),
        }
    }

    /// All images of `w` used for canonicalization.
    fn images(&self, w: UnitQuaternion) -> Vec<[f64; 4]> {
        let mut out = Vec::with_capacity(2 * self.n());
        for i in 0..self.n() {
            let g = self.act(i, w);
            out.push(g.to_array());
            if self.base == Base::So3 {
                out.push((-g).to_array());
            }
        }
        out
    }

    /// `π(w)`.
    pub fn project(&self, w: UnitQuaternion) -> Projected<Orbit> {
        let images = self.images(w);
        // Seeding with the identity image keeps fixed points exact.
        let mut best = w.to_array();
        for im in &images {
            if cmp_eps(im, &best, EPS) == Ordering::Greater {
                best = *im;
            }
        }
        let orbit = Orbit {
            rep: UnitQuaternion::new_unchecked(Quaternion::from_array(best)),
        };
        let tie = images
            .iter()
            .filter(|im| cmp_eps(im, &best, EPS) != Ordering::Equal && cmp_eps(im, &best, TIE_BAND) == Ordering::Equal)
            .map(|im| Quaternion::from_array(*im).distance(Quaternion::from_array(best)))
            .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))));
        match tie {
            Some(gap) => Err(TieWarning { value: orbit, gap }),
            None => Ok(orbit),
        }
    }

    /// `e = π(1)`.
    pub fn identity(&self) -> Orbit {
        Orbit {
            rep: UnitQuaternion::ONE,
        }
    }

    /// `[π(a·g₁(b)), …, π(a·gₙ(b))]` for arbitrary representatives `a`, `b`.
    pub fn mu_points(&self, a: UnitQuaternion, b: UnitQuaternion) -> Projected<OrbitMultiset> {
        let mut tie: Option<f64> = None;
        let items = (0..self.n())
            .map(|i| {
                let p = (a * self.act(i, b)).renormalize();
                match self.project(p) {
                    Ok(o) => o,
                    Err(t) => {
                        tie = Some(tie.map_or(t.gap, |g| g.min(t.gap)));
                        t.value
                    }
                }
            })
            .collect();
        wrap(items, tie)
    }

    /// `μ(x, y)`.
    pub fn mu(&self, x: &Orbit, y: &Orbit) -> Projected<OrbitMultiset> {
        self.mu_points(x.rep, y.rep)
    }

    /// `inv(π(w)) = π(w⁻¹)`.
    pub fn inv(&self, x: &Orbit) -> Orbit {
        best_effort(self.project(x.rep.inverse()))
    }

    /// `μ(x, μ(y, z))`, `n²` entries.
    pub fn mu_left(&self, x: &Orbit, y: &Orbit, z: &Orbit) -> Projected<OrbitMultiset> {
        let mut tie = None;
        let inner = absorb(self.mu(y, z), &mut tie);
        let mut items = Vec::with_capacity(self.n() * self.n());
        for w in &inner {
            items.extend(absorb(self.mu(x, w), &mut tie).items);
        }
        wrap(items, tie)
    }

    /// `μ(μ(x, y), z)`, `n²` entries.
    pub fn mu_right(&self, x: &Orbit, y: &Orbit, z: &Orbit) -> Projected<OrbitMultiset> {
        let mut tie = None;
        let inner = absorb(self.mu(x, y), &mut tie);
        let mut items = Vec::with_capacity(self.n() * self.n());
        for w in &inner {
            items.extend(absorb(self.mu(w, z), &mut tie).items);
        }
        wrap(items, tie)
    }

    /// Quotient metric: the smallest distance between images of the two
    /// representatives (up to sign for `SO(3)`).
    pub fn orbit_distance(&self, x: &Orbit, y: &Orbit) -> f64 {
        (0..self.n())
            .map(|i| self.point_distance(self.act(i, x.rep), y.rep))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether every two distinct images of `w` are at least
    /// `GENERIC_SEPARATION` apart, i.e. `w` is away from the singular set.
    pub fn is_generic(&self, w: UnitQuaternion) -> bool {
        if self.base == Base::So3 && w.quaternion().re().abs() < GENERIC_SEPARATION {
            return false;
        }
        let images: Vec<UnitQuaternion> = (0..self.n()).map(|i| self.act(i, w)).collect();
        for (i, a) in images.iter().enumerate() {
            for b in &images[i + 1..] {
                if self.point_distance(*a, *b) < GENERIC_SEPARATION {
                    return false;
                }
            }
        }
        true
    }

    /// A uniformly random generic point of `W`.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitQuaternion {
        loop {
            let w = self.point(random_unit(rng));
            if self.is_generic(w) {
                return w;
            }
        }
    }

    /// Distance used for matching: representative distance, falling back to the
    /// orbit distance when canonicalization may have picked different images.
    fn match_distance(&self, a: &Orbit, b: &Orbit, tol: f64) -> f64 {
        let d = self.point_distance(a.rep, b.rep);
        if d <= tol {
            d
        } else {
            d.min(self.orbit_distance(a, b))
        }
    }

    /// Sort key bounding both distances from below: `Re` is invariant under
    /// conjugation, and `|Re|` under the sign ambiguity of `SO(3)`.
    fn window_key(&self, o: &Orbit) -> f64 {
        let re = o.rep.quaternion().re();
        match self.base {
            Base::Sp1 => re,
            Base::So3 => re.abs(),
        }
    }

    /// Decides whether `a` and `b` are equal in `Symᵐ X` up to `tol`.
    ///
    /// Greedy nearest-neighbour pairing first; if some element finds no partner
    /// the threshold graph is handed to an exact augmenting-path matcher.
    pub fn match_multisets(&self, a: &OrbitMultiset, b: &OrbitMultiset, tol: f64) -> Result<MatchOutcome, CosetError> {
        if a.len() != b.len() {
            return Err(CosetError::SizeMismatch(a.len(), b.len()));
        }
        let m = a.len();
        let mut order: Vec<usize> = (0..m).collect();
        let keys: Vec<f64> = b.items.iter().map(|o| self.window_key(o)).collect();
        order.sort_by(|&i, &j| keys[i].total_cmp(&keys[j]));
        let sorted_keys: Vec<f64> = order.iter().map(|&i| keys[i]).collect();
        let window = |o: &Orbit| {
            let k = self.window_key(o);
            let lo = sorted_keys.partition_point(|&v| v < k - tol);
            let hi = sorted_keys.partition_point(|&v| v <= k + tol);
            lo..hi
        };

        let mut used = vec![false; m];
        let mut partner: Vec<Option<usize>> = vec![None; m];
        let mut max_distance: f64 = 0.0;
        let mut greedy_ok = true;
        for (ia, x) in a.items.iter().enumerate() {
            let mut best: Option<(usize, f64)> = None;
            for &ib in &order[window(x)] {
                if used[ib] {
                    continue;
                }
                let d = self.point_distance(x.rep, b.items[ib].rep);
                if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((ib, d));
                    if d == 0.0 {
                        break;
                    }
                }
            }
            if best.is_none() {
                for &ib in &order[window(x)] {
                    if !used[ib] {
                        let d = self.match_distance(x, &b.items[ib], tol);
                        if d <= tol && best.is_none_or(|(_, bd)| d < bd) {
                            best = Some((ib, d));
                        }
                    }
                }
            }
            match best {
                Some((ib, d)) => {
                    used[ib] = true;
                    partner[ia] = Some(ib);
                    max_distance = max_distance.max(d);
                }
                None => greedy_ok = false,
            }
        }
        if greedy_ok {
            return Ok(MatchOutcome {
                matched: true,
                max_distance,
                used_fallback: false,
            });
        }

        let adj: Adjacency = a
            .items
            .iter()
            .map(|x| {
                order[window(x)]
                    .iter()
                    .filter_map(|&ib| {
                        let d = self.match_distance(x, &b.items[ib], tol);
                        (d <= tol).then_some((ib, d))
                    })
                    .collect()
            })
            .collect();
        let matched = complete_matching(&adj, m, &mut partner);
        let max_distance = if matched {
            partner
                .iter()
                .enumerate()
                .map(|(ia, p)| {
                    let ib = p.expect("perfect matching");
                    adj[ia].iter().find(|(r, _)| *r == ib).map_or(0.0, |(_, d)| *d)
                })
                .fold(0.0, f64::max)
        } else {
            partner
                .iter()
                .enumerate()
                .filter(|(_, p)| p.is_none())
                .map(|(ia, _)| {
                    b.items
                        .iter()
                        .map(|y| self.point_distance(a.items[ia].rep, y.rep))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        Ok(MatchOutcome {
            matched,
            max_distance,
            used_fallback: true,
        })
    }

    /// Equality in `Symᵐ X`: a perfect matching of `tol`-close pairs exists.
    pub fn multiset_equal(&self, a: &OrbitMultiset, b: &OrbitMultiset, tol: f64) -> Result<bool, CosetError> {
        self.match_multisets(a, b, tol).map(|o| o.matched)
    }
}

fn absorb<T>(p: Projected<T>, tie: &mut Option<f64>) -> T {
    match p {
        Ok(v) => v,
        Err(t) => {
            *tie = Some(tie.map_or(t.gap, |g: f64| g.min(t.gap)));
            t.value
        }
    }
}

fn wrap(items: Vec<Orbit>, tie: Option<f64>) -> Projected<OrbitMultiset> {
    let value = OrbitMultiset { items };
    match tie {
        Some(gap) => Err(TieWarning { value, gap }),
        None => Ok(value),
    }
}
