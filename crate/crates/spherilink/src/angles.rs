//! Sector angles, fold coordinates and the projective line they live on.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Neg;

use num_complex::Complex64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute slack used when checking the sector-angle inequalities.
pub const ANGLE_TOL: f64 = 1e-12;

/// The four sector angles of a degree-4 vertex, in radians.
///
/// Creases are labelled `x, y, z, w` in cyclic order. `beta` is the sector
/// between `x` and `y`, `gamma` between `y` and `z`, `delta` between `z` and
/// `w`, and `alpha` between `w` and `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorAngles {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl SectorAngles {
    /// Validates four sector angles. Boundary cases are rejected.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let named = [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)];
        for (name, value) in named {
            if !value.is_finite() {
                return Err(Error::NonFinite(value));
            }
            if value <= ANGLE_TOL || value >= PI - ANGLE_TOL {
                return Err(Error::OutOfRange { name, value });
            }
        }
        let total = alpha + beta + gamma + delta;
        for (name, value) in named {
            let rest = total - value;
            if rest - value <= ANGLE_TOL {
                return Err(Error::QuadrilateralInequality(format!(
                    "{name} < sum of the other three fails ({value} >= {rest})"
                )));
            }
            if value + 2.0 * PI - rest <= ANGLE_TOL {
                return Err(Error::QuadrilateralInequality(format!(
                    "sum of the other three < {name} + 2π fails ({rest} >= {})",
                    value + 2.0 * PI
                )));
            }
        }
        Ok(Self { alpha, beta, gamma, delta })
    }

    pub fn from_degrees(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        Self::new(alpha.to_radians(), beta.to_radians(), gamma.to_radians(), delta.to_radians())
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `[alpha, beta, gamma, delta]`
    pub fn to_array(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    /// Half the angle sum, always in (0, 2π).
    pub fn semi_perimeter(&self) -> f64 {
        semi_perimeter(self)
    }

    /// Relabels so that crease `y` plays the role of `x`.
    ///
    /// The fold coordinates follow with [`FoldTangents::rotated`].
    pub(crate) fn rotated(&self) -> Self {
        Self { alpha: self.beta, beta: self.gamma, gamma: self.delta, delta: self.alpha }
    }

    /// Angles for the `x`–`w` relation, which reuses the `x`–`y` form.
    pub(crate) fn mirrored(&self) -> Self {
        Self { alpha: self.beta, beta: self.alpha, gamma: self.delta, delta: self.gamma }
    }

    /// Builds without validation; callers guarantee the result is valid.
    pub(crate) fn raw(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self { alpha, beta, gamma, delta }
    }
}

impl<'de> Deserialize<'de> for SectorAngles {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            alpha: f64,
            beta: f64,
            gamma: f64,
            delta: f64,
        }
        let r = Raw::deserialize(d)?;
        SectorAngles::new(r.alpha, r.beta, r.gamma, r.delta).map_err(de::Error::custom)
    }
}

/// Same as [`SectorAngles::new`].
pub fn validate_sector_angles(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<SectorAngles> {
    SectorAngles::new(alpha, beta, gamma, delta)
}

pub fn semi_perimeter(angles: &SectorAngles) -> f64 {
    0.5 * (angles.alpha + angles.beta + angles.gamma + angles.delta)
}

/// A point of the real projective line: a real number or the single point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectiveReal {
    Finite(f64),
    Infinity,
}

impl ProjectiveReal {
    pub const ZERO: Self = ProjectiveReal::Finite(0.0);

    /// `num / den`, with a zero denominator mapping to infinity.
    pub fn ratio(num: f64, den: f64) -> Self {
        if den == 0.0 {
            ProjectiveReal::Infinity
        } else {
            ProjectiveReal::Finite(num / den)
        }
    }

    /// Maps non-finite floats (either sign of infinity) to [`ProjectiveReal::Infinity`].
    pub fn from_f64(v: f64) -> Self {
        if v.is_infinite() {
            ProjectiveReal::Infinity
        } else {
            ProjectiveReal::Finite(v)
        }
    }

    pub fn recip(self) -> Self {
        match self {
            ProjectiveReal::Infinity => ProjectiveReal::ZERO,
            ProjectiveReal::Finite(v) if v == 0.0 => ProjectiveReal::Infinity,
            ProjectiveReal::Finite(v) => ProjectiveReal::Finite(1.0 / v),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ProjectiveReal::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ProjectiveReal::Finite(v) => Some(v),
            ProjectiveReal::Infinity => None,
        }
    }

    /// `f64::INFINITY` for the point at infinity.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// Unit-norm homogeneous pair `(t1, t2)` with `t = t1 / t2`.
    pub fn homogeneous(self) -> (f64, f64) {
        match self {
            ProjectiveReal::Infinity => (1.0, 0.0),
            ProjectiveReal::Finite(v) => {
                let n = v.hypot(1.0);
                (v / n, 1.0 / n)
            }
        }
    }

    /// The fold angle `2·atan(t)`, with infinity giving π.
    pub fn fold_angle(self) -> f64 {
        match self {
            ProjectiveReal::Infinity => PI,
            ProjectiveReal::Finite(v) => 2.0 * v.atan(),
        }
    }

    /// Chordal distance `|sin((ρa − ρb)/2)|` on the projective line.
    pub fn chordal_distance(self, other: Self) -> f64 {
        let (a1, a2) = self.homogeneous();
        let (b1, b2) = other.homogeneous();
        (a1 * b2 - a2 * b1).abs()
    }

    /// Difference scaled by `max(1, |a|, |b|)`; infinity only matches infinity.
    pub fn scaled_difference(self, other: Self) -> f64 {
        match (self, other) {
            (ProjectiveReal::Infinity, ProjectiveReal::Infinity) => 0.0,
            (ProjectiveReal::Finite(a), ProjectiveReal::Finite(b)) => {
                (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
            }
            // A huge finite value against infinity: compare reciprocals.
            (ProjectiveReal::Finite(a), ProjectiveReal::Infinity)
            | (ProjectiveReal::Infinity, ProjectiveReal::Finite(a)) => {
                if a.abs() > 1.0 {
                    1.0 / a.abs()
                } else {
                    1.0
                }
            }
        }
    }
}

impl Neg for ProjectiveReal {
    type Output = Self;
    fn neg(self) -> Self {
        match self {
            ProjectiveReal::Infinity => ProjectiveReal::Infinity,
            ProjectiveReal::Finite(v) => ProjectiveReal::Finite(-v),
        }
    }
}

impl From<f64> for ProjectiveReal {
    fn from(v: f64) -> Self {
        ProjectiveReal::from_f64(v)
    }
}

impl fmt::Display for ProjectiveReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveReal::Infinity => f.write_str("inf"),
            ProjectiveReal::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for ProjectiveReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ProjectiveReal::Infinity => s.serialize_str("inf"),
            ProjectiveReal::Finite(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for ProjectiveReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ProjectiveReal;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(ProjectiveReal::Finite(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(ProjectiveReal::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ProjectiveReal::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "inf" {
                    Ok(ProjectiveReal::Infinity)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// `tan(ρ/2)`, with ρ = ±π mapping to infinity.
pub fn tan_half(rho: f64) -> ProjectiveReal {
    let (s, c) = half_angle(rho);
    ProjectiveReal::ratio(s, c)
}

/// `(sin(ρ/2), cos(ρ/2))`, exact at ρ = 0 and ρ = ±π.
pub(crate) fn half_angle(rho: f64) -> (f64, f64) {
    if rho.abs() == PI {
        (rho.signum(), 0.0)
    } else if rho == 0.0 {
        (0.0, 1.0)
    } else {
        (0.5 * rho).sin_cos()
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(rho: f64) -> f64 {
    let r = rho.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Fold angles in (−π, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldAngles {
    pub rho_x: f64,
    pub rho_y: f64,
    pub rho_z: f64,
    pub rho_w: f64,
}

impl FoldAngles {
    pub fn new(rho_x: f64, rho_y: f64, rho_z: f64, rho_w: f64) -> Self {
        Self {
            rho_x: wrap_angle(rho_x),
            rho_y: wrap_angle(rho_y),
            rho_z: wrap_angle(rho_z),
            rho_w: wrap_angle(rho_w),
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.rho_x, self.rho_y, self.rho_z, self.rho_w]
    }

    pub fn tangents(&self) -> FoldTangents {
        FoldTangents::new(
            tan_half(self.rho_x),
            tan_half(self.rho_y),
            tan_half(self.rho_z),
            tan_half(self.rho_w),
        )
    }
}

/// A configuration in tangent half-angle coordinates `(x, y, z, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldTangents {
    pub x: ProjectiveReal,
    pub y: ProjectiveReal,
    pub z: ProjectiveReal,
    pub w: ProjectiveReal,
}

impl FoldTangents {
    pub fn new(x: ProjectiveReal, y: ProjectiveReal, z: ProjectiveReal, w: ProjectiveReal) -> Self {
        Self { x, y, z, w }
    }

    pub fn finite(x: f64, y: f64, z: f64, w: f64) -> Self {
        Self::new(x.into(), y.into(), z.into(), w.into())
    }

    pub fn from_array(c: [ProjectiveReal; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(&self) -> [ProjectiveReal; 4] {
        [self.x, self.y, self.z, self.w]
    }

    pub fn fold_angles(&self) -> FoldAngles {
        FoldAngles {
            rho_x: self.x.fold_angle(),
            rho_y: self.y.fold_angle(),
            rho_z: self.z.fold_angle(),
            rho_w: self.w.fold_angle(),
        }
    }

    /// Coordinates seen from [`SectorAngles::rotated`] angles.
    #[cfg(test)]
    pub(crate) fn rotated(&self) -> Self {
        Self::new(self.y, self.z, self.w, self.x)
    }

    /// Inverse of [`FoldTangents::rotated`].
    pub(crate) fn unrotated(&self) -> Self {
        Self::new(self.w, self.x, self.y, self.z)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.x, -self.y, -self.z, -self.w)
    }

    /// Largest [`ProjectiveReal::scaled_difference`] over the four coordinates.
    pub fn max_difference(&self, other: &Self) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| a.scaled_difference(b))
            .fold(0.0, f64::max)
    }
}

/// Square root with the sign convention used for branch amplitudes:
/// nonnegative real for `a >= 0`, `i·√(−a)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedSqrt(Complex64);

impl SignedSqrt {
    pub fn of(a: f64) -> Self {
        if a >= 0.0 {
            SignedSqrt(Complex64::new(a.sqrt(), 0.0))
        } else {
            SignedSqrt(Complex64::new(0.0, (-a).sqrt()))
        }
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn is_real(&self) -> bool {
        self.0.im == 0.0
    }

    pub fn magnitude(&self) -> f64 {
        self.0.re + self.0.im
    }

    /// The radicand this root was taken of.
    pub fn square(&self) -> f64 {
        self.0.re * self.0.re - self.0.im * self.0.im
    }
}

impl Serialize for SignedSqrt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for SignedSqrt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(SignedSqrt(Complex64::new(re, im)))
    }
}
