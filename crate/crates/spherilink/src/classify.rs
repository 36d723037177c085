//! Relation coefficients, the sixteen vertex types and the elliptic modulus.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::angles::{SectorAngles, SignedSqrt};
use crate::error::{Error, Result};

/// Angle relations closer to zero than this count as exact.
pub const CLASSIFY_TOL: f64 = 1e-10;

/// Coefficients of the adjacent relation
/// `f22 x²y² + f20 x² + 2 f11 xy + f02 y² + f00 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FCoeffs {
    pub f22: f64,
    pub f20: f64,
    pub f11: f64,
    pub f02: f64,
    pub f00: f64,
}

/// Coefficients of the opposite relation `g22 x²z² + g20 x² + g02 z² + g00 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GCoeffs {
    pub g22: f64,
    pub g20: f64,
    pub g02: f64,
    pub g00: f64,
}

/// Coefficients of the cubic relation between the diagonals, written in
/// `a = 1 − cos u`, `b = 1 − cos v`:
/// `a²b² − 2a²b − 2ab² + h11 ab + h10 a + h01 b + h00 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HCoeffs {
    pub h11: f64,
    pub h10: f64,
    pub h01: f64,
    pub h00: f64,
}

pub fn adjacent_coeffs(angles: &SectorAngles) -> FCoeffs {
    let [a, b, g, d] = angles.to_array();
    let s = angles.semi_perimeter();
    FCoeffs {
        f22: (s - b).sin() * (s - b - d).sin(),
        f20: (s - a).sin() * (s - a - d).sin(),
        f11: -a.sin() * g.sin(),
        f02: (s - g).sin() * (s - g - d).sin(),
        f00: s.sin() * (s - d).sin(),
    }
}

/// Coefficients of the `x`–`w` relation.
pub fn adjacent_w_coeffs(angles: &SectorAngles) -> FCoeffs {
    adjacent_coeffs(&angles.mirrored())
}

/// The adjacent relation before simplification, in cosine differences.
///
/// Each entry is `−2` times the matching [`FCoeffs`] entry.
pub fn adjacent_cosine_form(angles: &SectorAngles) -> FCoeffs {
    let [a, b, g, d] = angles.to_array();
    FCoeffs {
        f22: (a - b + g).cos() - d.cos(),
        f20: (a - b - g).cos() - d.cos(),
        f11: 2.0 * a.sin() * g.sin(),
        f02: (a + b - g).cos() - d.cos(),
        f00: (a + b + g).cos() - d.cos(),
    }
}

pub fn opposite_coeffs(angles: &SectorAngles) -> GCoeffs {
    let [a, b, g, d] = angles.to_array();
    let s = angles.semi_perimeter();
    GCoeffs {
        g22: (s - a - d).sin() * (s - b - d).sin(),
        g20: (s - a).sin() * (s - b).sin(),
        g02: -(s - g).sin() * (s - d).sin(),
        g00: s.sin() * (s - a - b).sin(),
    }
}

pub fn diagonal_coeffs(angles: &SectorAngles) -> HCoeffs {
    let [ca, cb, cg, cd] = angles.to_array().map(f64::cos);
    HCoeffs {
        h11: 2.0 * (2.0 - ca * cg - cb * cd),
        h10: 2.0 * (cb - cg) * (cd - ca),
        h01: 2.0 * (ca - cb) * (cg - cd),
        h00: ((1.0 - ca) * (1.0 - cg) - (1.0 - cb) * (1.0 - cd))
            * ((1.0 + ca) * (1.0 + cg) - (1.0 + cb) * (1.0 + cd)),
    }
}

/// The sixteen linkage types, ordered by degree of degeneracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexType {
    Square,
    Rhombus,
    Cross,
    MiuraI,
    MiuraII,
    Isogram,
    AntiIsogram,
    DeltoidI,
    AntiDeltoidI,
    DeltoidII,
    AntiDeltoidII,
    ConicI,
    ConicII,
    ConicIII,
    ConicIV,
    Elliptic,
}

impl VertexType {
    pub const ALL: [VertexType; 16] = [
        VertexType::Square,
        VertexType::Rhombus,
        VertexType::Cross,
        VertexType::MiuraI,
        VertexType::MiuraII,
        VertexType::Isogram,
        VertexType::AntiIsogram,
        VertexType::DeltoidI,
        VertexType::AntiDeltoidI,
        VertexType::DeltoidII,
        VertexType::AntiDeltoidII,
        VertexType::ConicI,
        VertexType::ConicII,
        VertexType::ConicIII,
        VertexType::ConicIV,
        VertexType::Elliptic,
    ];

    /// Which of `(f22, f20, f02, f00)` vanish for this type.
    pub fn zero_pattern(self) -> [bool; 4] {
        use VertexType::*;
        let (t, f) = (true, false);
        match self {
            Square => [t, t, t, t],
            Rhombus => [t, t, t, f],
            Cross => [f, t, t, t],
            MiuraI => [t, f, t, t],
            MiuraII => [t, t, f, t],
            Isogram => [f, t, t, f],
            AntiIsogram => [t, f, f, t],
            DeltoidI => [t, f, t, f],
            AntiDeltoidI => [f, t, f, t],
            DeltoidII => [t, t, f, f],
            AntiDeltoidII => [f, f, t, t],
            ConicI => [t, f, f, f],
            ConicII => [f, t, f, f],
            ConicIII => [f, f, t, f],
            ConicIV => [f, f, f, t],
            Elliptic => [f, f, f, f],
        }
    }

    pub fn name(self) -> &'static str {
        use VertexType::*;
        match self {
            Square => "Square",
            Rhombus => "Rhombus",
            Cross => "Cross",
            MiuraI => "MiuraI",
            MiuraII => "MiuraII",
            Isogram => "Isogram",
            AntiIsogram => "AntiIsogram",
            DeltoidI => "DeltoidI",
            AntiDeltoidI => "AntiDeltoidI",
            DeltoidII => "DeltoidII",
            AntiDeltoidII => "AntiDeltoidII",
            ConicI => "ConicI",
            ConicII => "ConicII",
            ConicIII => "ConicIII",
            ConicIV => "ConicIV",
            Elliptic => "Elliptic",
        }
    }

    pub fn is_conic(self) -> bool {
        matches!(
            self,
            VertexType::ConicI | VertexType::ConicII | VertexType::ConicIII | VertexType::ConicIV
        )
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub vertex_type: VertexType,
    /// Only ever set for elliptic vertices.
    pub orthodiagonal: bool,
}

/// The four angle relations whose vanishing zeroes `f22, f20, f02, f00`.
pub fn degeneracy_relations(angles: &SectorAngles) -> [f64; 4] {
    let [a, b, g, d] = angles.to_array();
    // pairwise differences of nearby angles are exact, so small relations keep their digits
    [(a - b) + (g - d), (a - b) - (g - d), (a - g) + (b - d), ((a + b) - PI) + ((g + d) - PI)]
}

pub fn classify(angles: &SectorAngles) -> Classification {
    let zeros = degeneracy_relations(angles).map(|r| r.abs() < CLASSIFY_TOL);
    let vertex_type = VertexType::ALL
        .into_iter()
        .find(|t| t.zero_pattern() == zeros)
        .expect("every zero pattern names a type");
    let orthodiagonal = vertex_type == VertexType::Elliptic && is_orthodiagonal(angles);
    Classification { vertex_type, orthodiagonal }
}

/// `cos α cos γ = cos β cos δ` within [`CLASSIFY_TOL`].
pub fn is_orthodiagonal(angles: &SectorAngles) -> bool {
    let [a, b, g, d] = angles.to_array();
    (a.cos() * g.cos() - b.cos() * d.cos()).abs() < CLASSIFY_TOL
}

/// `M = sin α sin β sin γ sin δ / Π sin(σ − ·)`, evaluated in log space.
///
/// The elliptic infinity analysis prints this ratio without the sines; the
/// finite-solution form with sines is the one used throughout.
pub fn modulus_m(angles: &SectorAngles) -> Result<f64> {
    let class = classify(angles);
    if class.vertex_type != VertexType::Elliptic {
        return Err(Error::NotElliptic(class.vertex_type));
    }
    Ok(modulus_m_unchecked(angles))
}

/// `M − 1` without cancellation near `M = 1`, from
/// `Π sin θ − Π sin(σ − θ) = −Π sin(r/2)` over the four degeneracy relations `r`.
pub(crate) fn modulus_m_minus_one(angles: &SectorAngles) -> f64 {
    let s = angles.semi_perimeter();
    let halves: f64 = degeneracy_relations(angles).iter().map(|r| (0.5 * r).sin()).product();
    let den: f64 = angles.to_array().iter().map(|a| (s - a).sin()).product();
    -halves / den
}

pub(crate) fn modulus_m_unchecked(angles: &SectorAngles) -> f64 {
    let s = angles.semi_perimeter();
    let num: f64 = angles.to_array().iter().map(|a| a.sin().ln()).sum();
    let den: f64 = angles.to_array().iter().map(|a| (s - a).sin().ln()).sum();
    (num - den).exp()
}

/// Branch amplitudes `p_x, p_y, p_z, p_w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitudes {
    pub px: SignedSqrt,
    pub py: SignedSqrt,
    pub pz: SignedSqrt,
    pub pw: SignedSqrt,
}

impl Amplitudes {
    pub fn to_array(&self) -> [SignedSqrt; 4] {
        [self.px, self.py, self.pz, self.pw]
    }
}

/// `p_x² = sin α sin β / (sin(σ−α) sin(σ−β)) − 1` and its cyclic analogues.
pub fn amplitudes(angles: &SectorAngles) -> Amplitudes {
    let [a, b, g, d] = angles.to_array();
    let s = angles.semi_perimeter();
    let p = |u: f64, v: f64| SignedSqrt::of(u.sin() * v.sin() / ((s - u).sin() * (s - v).sin()) - 1.0);
    Amplitudes { px: p(a, b), py: p(b, g), pz: p(g, d), pw: p(d, a) }
}
