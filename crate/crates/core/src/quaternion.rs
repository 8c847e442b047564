//! Real quaternions, the unit sphere Sp(1) = S³ and its double cover of SO(3).
//!
//! All arithmetic is plain `f64`. Exactness, where it matters, comes from the
//! inputs: products of Hurwitz units stay dyadic and are computed exactly.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::tol::{EPS, UNDERFLOW_NORM};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuaternionError {
    #[error("cannot normalize a quaternion of norm {0:e}")]
    ZeroNorm(f64),
}

/// A quaternion `w + xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub const fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_parts(re: f64, im: Vec3) -> Self {
        Self::new(re, im.x, im.y, im.z)
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Euclidean distance in ℝ⁴.
    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        let a = self;
        Self::new(
            a.w * r.w - a.x * r.x - a.y * r.y - a.z * r.z,
            a.w * r.x + a.x * r.w + a.y * r.z - a.z * r.y,
            a.w * r.y - a.x * r.z + a.y * r.w + a.z * r.x,
            a.w * r.z + a.x * r.y - a.y * r.x + a.z * r.w,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.w, self.x, self.y, self.z)
    }
}

/// Free-function form of the Hamilton product.
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

/// A vector of ℝ³, identified with the purely imaginary quaternion `xi + yj + zk`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(self) -> Self {
        self.scale(1.0 / self.norm())
    }

    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn distance(self, o: Self) -> f64 {
        (self - o).norm()
    }
}

impl Add for Vec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// A point of Sp(1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: Self = Self(Quaternion::ONE);
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    /// Normalizes `q`; fails when `q` is too close to zero to have a direction.
    pub fn new_normalize(q: Quaternion) -> Result<Self, QuaternionError> {
        let n = q.norm();
        if !n.is_finite() || n < UNDERFLOW_NORM {
            return Err(QuaternionError::ZeroNorm(n));
        }
        if (n - 1.0).abs() <= f64::EPSILON {
            return Ok(Self(q));
        }
        Ok(Self(q.scale(1.0 / n)))
    }

    /// Wraps `q` without normalizing. The caller guarantees `|q| = 1`.
    pub fn new_unchecked(q: Quaternion) -> Self {
        debug_assert!((q.norm() - 1.0).abs() < 1e-6, "not a unit quaternion: {q}");
        Self(q)
    }

    /// `cos(θ/2) + sin(θ/2)·axis`, the lift of the rotation by `angle` about `axis`.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let u = axis.normalized();
        let (s, c) = (angle / 2.0).sin_cos();
        Self(Quaternion::from_parts(c, u.scale(s)))
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0.to_array()
    }

    /// For a unit quaternion the inverse is the conjugate.
    pub fn inverse(self) -> Self {
        Self(self.0.conj())
    }

    pub fn renormalize(self) -> Self {
        let n = self.0.norm();
        if n == 1.0 {
            self
        } else {
            Self(self.0.scale(1.0 / n))
        }
    }

    pub fn distance(self, other: Self) -> f64 {
        self.0.distance(other.0)
    }

    /// Distance in SO(3)'s chordal sense: `min(|p − q|, |p + q|)`.
    pub fn projective_distance(self, other: Self) -> f64 {
        self.0.distance(other.0).min(self.0.distance(-other.0))
    }
}

impl Mul for UnitQuaternion {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self(self.0 * r.0)
    }
}

impl Neg for UnitQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn conj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn re(q: Quaternion) -> f64 {
    q.re()
}

pub fn im(q: Quaternion) -> Vec3 {
    q.im()
}

pub fn inverse(q: UnitQuaternion) -> UnitQuaternion {
    q.inverse()
}

/// `q x q⁻¹`.
pub fn conj_action(q: UnitQuaternion, x: Quaternion) -> Quaternion {
    q.0 * x * q.0.conj()
}

/// The SO(3) rotation covered by a unit quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    /// `None` for the identity rotation, where no axis is defined.
    pub axis: Option<Vec3>,
    /// Angle in `[0, 2π)`, measured counter-clockwise about `axis`.
    pub angle: f64,
}

impl Rotation {
    pub fn is_identity(&self) -> bool {
        self.axis.is_none()
    }
}

/// Whether the first coordinate of magnitude above `EPS` is negative.
fn leading_sign_negative(c: &[f64]) -> bool {
    c.iter().find(|v| v.abs() > EPS).is_some_and(|v| *v < 0.0)
}

/// Axis and angle of the rotation `x ↦ q x q⁻¹`.
///
/// The axis is oriented so that its first coordinate of magnitude above `EPS`
/// is positive; the angle is adjusted to `2π − θ` when that flips the axis.
/// `q` and `−q` give the same result.
pub fn rotation_of(q: UnitQuaternion) -> Rotation {
    let q = q.0;
    let v = q.im();
    let s = v.norm();
    if s <= EPS {
        return Rotation { axis: None, angle: 0.0 };
    }
    // Representative with non-negative real part: θ ∈ [0, π].
    let (w, v) = if q.w < 0.0 { (-q.w, -v) } else { (q.w, v) };
    let mut angle = 2.0 * s.atan2(w);
    let mut axis = v.scale(1.0 / s);
    if leading_sign_negative(&axis.to_array()) {
        axis = -axis;
        angle = 2.0 * PI - angle;
    }
    if angle >= 2.0 * PI {
        angle -= 2.0 * PI;
    }
    Rotation {
        axis: Some(axis),
        angle,
    }
}

/// Uniform sample on S³: a normalized vector of four independent standard normals.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> UnitQuaternion {
    loop {
        let q = Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        if let Ok(u) = UnitQuaternion::new_normalize(q) {
            return u;
        }
    }
}

/// Uniform sample on the unit sphere of purely imaginary quaternions.
pub fn random_unit_vec3<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let n = v.norm();
        if n >= UNDERFLOW_NORM {
            return v.scale(1.0 / n);
        }
    }
}
