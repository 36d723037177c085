//! The adjacent, opposite and diagonal relations, solved on the projective line.

use serde::{Deserialize, Serialize};

use crate::angles::{FoldTangents, ProjectiveReal, SectorAngles};
use crate::classify::{adjacent_coeffs, diagonal_coeffs, opposite_coeffs, FCoeffs, GCoeffs, HCoeffs};
use crate::error::{Error, Result};

/// Relative size below which a quadratic's leading coefficient counts as zero.
pub const LEADING_TOL: f64 = 1e-13;
/// Absolute size below which all three coefficients count as zero (the relation reads `0 = 0`).
pub const INDETERMINATE_TOL: f64 = 1e-12;
/// Negative discriminants down to this (relative) value are clamped to zero.
pub const DISCRIMINANT_TOL: f64 = 1e-12;
/// Discriminants within this multiple of the rounding scale of `b² − 4ac` count as zero.
const ROUNDOFF_DISC: f64 = 64.0 * f64::EPSILON;
/// Largest excursion of an arccos argument outside `[-1, 1]` that is clamped.
pub const ACOS_GUARD: f64 = 1e-9;

/// Bihomogenized adjacent relation at unit-norm representatives of `x` and `y`.
pub fn eval_adjacent(f: &FCoeffs, x: ProjectiveReal, y: ProjectiveReal) -> f64 {
    let (x1, x2) = x.homogeneous();
    let (y1, y2) = y.homogeneous();
    f.f22 * x1 * x1 * y1 * y1
        + f.f20 * x1 * x1 * y2 * y2
        + 2.0 * f.f11 * x1 * y1 * x2 * y2
        + f.f02 * x2 * x2 * y1 * y1
        + f.f00 * x2 * x2 * y2 * y2
}

/// Bihomogenized opposite relation at unit-norm representatives of `x` and `z`.
pub fn eval_opposite(g: &GCoeffs, x: ProjectiveReal, z: ProjectiveReal) -> f64 {
    let (x1, x2) = x.homogeneous();
    let (z1, z2) = z.homogeneous();
    g.g22 * x1 * x1 * z1 * z1 + g.g20 * x1 * x1 * z2 * z2 + g.g02 * x2 * x2 * z1 * z1 + g.g00 * x2 * x2 * z2 * z2
}

/// Absolute values of the `x–y`, `x–w` and `x–z` relations at a state.
pub fn relation_residuals(angles: &SectorAngles, state: &FoldTangents) -> [f64; 3] {
    let f = adjacent_coeffs(angles);
    let fw = adjacent_coeffs(&angles.mirrored());
    let g = opposite_coeffs(angles);
    [
        eval_adjacent(&f, state.x, state.y).abs(),
        eval_adjacent(&fw, state.x, state.w).abs(),
        eval_opposite(&g, state.x, state.z).abs(),
    ]
}

/// Real roots of one relation for a fixed driving coordinate.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RootPair {
    pub roots: Vec<ProjectiveReal>,
    /// Multiplicity of each entry of `roots`.
    pub multiplicity: Vec<u8>,
    /// The relation reduced to `0 = 0`: every value is admissible.
    pub indeterminate: bool,
    /// The roots were a complex-conjugate pair and were dropped.
    pub complex: bool,
}

impl RootPair {
    fn single(r: ProjectiveReal, mult: u8) -> Self {
        Self { roots: vec![r], multiplicity: vec![mult], ..Self::default() }
    }

    fn pair(a: ProjectiveReal, b: ProjectiveReal) -> Self {
        Self { roots: vec![a, b], multiplicity: vec![1, 1], ..Self::default() }
    }
}

/// Projective roots of `a·t1² + b·t1·t2 + c·t2² = 0`.
pub fn solve_quadratic(a: f64, b: f64, c: f64) -> RootPair {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale < INDETERMINATE_TOL || !scale.is_finite() {
        // coefficients are products of sines, so an absolute floor separates cancellation from a real zero
        return RootPair { indeterminate: scale < INDETERMINATE_TOL, ..RootPair::default() };
    }
    let (a, b, mut c) = (a / scale, b / scale, c / scale);
    if c.abs() < LEADING_TOL {
        // mirror of the leading-coefficient case: a root at exactly zero
        c = 0.0;
    }
    if a.abs() < LEADING_TOL {
        // One root at infinity; the other from b·t1 + c·t2 = 0.
        if b.abs() < LEADING_TOL {
            return RootPair::single(ProjectiveReal::Infinity, 2);
        }
        return RootPair::pair(ProjectiveReal::Finite(-c / b), ProjectiveReal::Infinity);
    }
    let mut disc = b * b - 4.0 * a * c;
    if disc.abs() <= ROUNDOFF_DISC * (b * b + (4.0 * a * c).abs()) {
        // rounding alone splits a double root by about √ε
        disc = 0.0;
    } else if disc < 0.0 {
        if disc >= -DISCRIMINANT_TOL {
            disc = 0.0;
        } else {
            return RootPair { complex: true, ..RootPair::default() };
        }
    }
    if disc == 0.0 {
        return RootPair::single(ProjectiveReal::Finite(-b / (2.0 * a) + 0.0), 2);
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    // `+ 0.0` turns a negative zero into zero
    let (r1, r2) = (q / a + 0.0, c / q + 0.0);
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    RootPair::pair(ProjectiveReal::Finite(lo), ProjectiveReal::Finite(hi))
}

fn solve_adjacent(f: &FCoeffs, x: ProjectiveReal) -> RootPair {
    let (x1, x2) = x.homogeneous();
    solve_quadratic(
        f.f22 * x1 * x1 + f.f02 * x2 * x2,
        2.0 * f.f11 * x1 * x2,
        f.f20 * x1 * x1 + f.f00 * x2 * x2,
    )
}

/// All `y` with `f(α, β, γ, δ, x, y) = 0`.
pub fn solve_y(angles: &SectorAngles, x: ProjectiveReal) -> RootPair {
    solve_adjacent(&adjacent_coeffs(angles), x)
}

/// All `w` with `f(β, α, δ, γ, x, w) = 0`.
pub fn solve_w(angles: &SectorAngles, x: ProjectiveReal) -> RootPair {
    solve_adjacent(&adjacent_coeffs(&angles.mirrored()), x)
}

/// All `z` with `g(x, z) = 0`, through the separated form for `z²`.
pub fn solve_z(angles: &SectorAngles, x: ProjectiveReal) -> RootPair {
    let g = opposite_coeffs(angles);
    let (x1, x2) = x.homogeneous();
    solve_quadratic(g.g22 * x1 * x1 + g.g02 * x2 * x2, 0.0, g.g20 * x1 * x1 + g.g00 * x2 * x2)
}

/// The product of the three root sets for one driving `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidates {
    pub tuples: Vec<FoldTangents>,
    /// `[y, z, w]` axes whose relation was indeterminate.
    pub indeterminate: [bool; 3],
}

/// Every `(x, y, z, w)` satisfying the three relations at this `x` (at most 8).
pub fn candidate_tuples(angles: &SectorAngles, x: ProjectiveReal) -> Candidates {
    let ys = solve_y(angles, x);
    let zs = solve_z(angles, x);
    let ws = solve_w(angles, x);
    let mut tuples = Vec::new();
    for &y in &ys.roots {
        for &z in &zs.roots {
            for &w in &ws.roots {
                tuples.push(FoldTangents::new(x, y, z, w));
            }
        }
    }
    Candidates { tuples, indeterminate: [ys.indeterminate, zs.indeterminate, ws.indeterminate] }
}

/// Spherical diagonal lengths: `u` joins creases `w` and `y`, `v` joins `x` and `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagonals {
    pub u: f64,
    pub v: f64,
}

fn guarded_acos(c: f64) -> Result<f64> {
    if c.abs() > 1.0 + ACOS_GUARD || c.is_nan() {
        return Err(Error::DomainError(c));
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// `cos ρ = (1 − t²)/(1 + t²)`, equal to −1 at infinity.
fn cos_fold(t: ProjectiveReal) -> f64 {
    let (t1, t2) = t.homogeneous();
    t2 * t2 - t1 * t1
}

/// Third side of the spherical triangle with sides `a`, `b` and the fold
/// `t` on the crease between them.
fn third_side(a: f64, b: f64, t: ProjectiveReal) -> Result<f64> {
    guarded_acos(a.cos() * b.cos() - a.sin() * b.sin() * cos_fold(t))
}

/// `u` from the `x` side.
pub fn diagonal_u(angles: &SectorAngles, x: ProjectiveReal) -> Result<f64> {
    third_side(angles.alpha(), angles.beta(), x)
}

/// `u` from the `z` side.
pub fn diagonal_u_from_z(angles: &SectorAngles, z: ProjectiveReal) -> Result<f64> {
    third_side(angles.gamma(), angles.delta(), z)
}

/// `v` from the `y` side.
pub fn diagonal_v(angles: &SectorAngles, y: ProjectiveReal) -> Result<f64> {
    third_side(angles.beta(), angles.gamma(), y)
}

/// `v` from the `w` side.
pub fn diagonal_v_from_w(angles: &SectorAngles, w: ProjectiveReal) -> Result<f64> {
    third_side(angles.delta(), angles.alpha(), w)
}

pub fn diagonals(angles: &SectorAngles, state: &FoldTangents) -> Result<Diagonals> {
    Ok(Diagonals { u: diagonal_u(angles, state.x)?, v: diagonal_v(angles, state.y)? })
}

/// Value of the spherical Cayley–Menger relation at the given diagonals.
pub fn cayley_menger_residual(angles: &SectorAngles, d: &Diagonals) -> f64 {
    eval_diagonal(&diagonal_coeffs(angles), d)
}

pub fn eval_diagonal(h: &HCoeffs, d: &Diagonals) -> f64 {
    let a = 1.0 - d.u.cos();
    let b = 1.0 - d.v.cos();
    a * a * b * b - 2.0 * a * a * b - 2.0 * a * b * b + h.h11 * a * b + h.h10 * a + h.h01 * b + h.h00
}
