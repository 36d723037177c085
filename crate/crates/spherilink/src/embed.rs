//! Euclidean embedding of a vertex and the closure test used to certify states.
//!
//! Two charts are built. The rotation chart composes, around the vertex, a
//! fold rotation about each crease and a sector rotation to the next crease;
//! a genuine state returns to the identity. The figure chart places the two
//! panels adjacent to the `x` and `y` creases explicitly and measures whether
//! the remaining sector closes; it is kept as an independent second opinion.

use serde::{Deserialize, Serialize};

use crate::angles::{FoldTangents, ProjectiveReal, SectorAngles};
use crate::error::{Error, Result};

/// Default tolerance for [`post_examine`].
pub const CLOSURE_TOL: f64 = 1e-8;

/// The figure chart measures fold angles with the opposite orientation to the
/// rotation chart. Fixed once by making the rhombus branch
/// `y = cos α / x, z = x, w = cos α / x` close in both charts.
pub const FIGURE_ORIENTATION: f64 = -1.0;

pub type Vec3 = [f64; 3];
type Mat3 = [[f64; 3]; 3];

fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

/// Rotation about the first axis by the fold whose half-angle tangent is `t`.
fn fold_rotation(t: ProjectiveReal) -> Mat3 {
    let (t1, t2) = t.homogeneous();
    // cos ρ and sin ρ straight from the homogeneous pair
    let (c, s) = (t2 * t2 - t1 * t1, 2.0 * t1 * t2);
    [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
}

/// Rotation about the third axis by a sector angle.
fn sector_rotation(a: f64) -> Mat3 {
    let (s, c) = a.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

pub(crate) fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn unit(v: Vec3) -> Vec3 {
    let n = dot(&v, &v).sqrt();
    v.map(|c| c / n)
}

fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Frames along the rotation chart: crease `x`, `y`, `z`, `w`, and the
/// composed transfer all the way round.
fn rotation_frames(angles: &SectorAngles, fold: &FoldTangents) -> ([Mat3; 4], Mat3) {
    let [a, b, g, d] = angles.to_array();
    let f0 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let f1 = mul(&mul(&f0, &fold_rotation(fold.x)), &sector_rotation(b));
    let f2 = mul(&mul(&f1, &fold_rotation(fold.y)), &sector_rotation(g));
    let f3 = mul(&mul(&f2, &fold_rotation(fold.z)), &sector_rotation(d));
    let full = mul(&mul(&f3, &fold_rotation(fold.w)), &sector_rotation(a));
    ([f0, f1, f2, f3], full)
}

/// Frobenius distance from the identity of the transfer rotation round the vertex.
///
/// Zero exactly when the four folds are a genuine configuration.
pub fn closure_residual(angles: &SectorAngles, fold: &FoldTangents) -> f64 {
    let (_, full) = rotation_frames(angles, fold);
    let mut sum = 0.0;
    for (i, row) in full.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let e = if i == j { v - 1.0 } else { *v };
            sum += e * e;
        }
    }
    sum.sqrt()
}

/// States whose closure residual is below `tol`, in input order.
pub fn post_examine(angles: &SectorAngles, tuples: &[FoldTangents], tol: f64) -> Vec<FoldTangents> {
    tuples.iter().copied().filter(|t| closure_residual(angles, t) < tol).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// Panels at creases `x` and `y` placed explicitly; needs `α, γ ≠ π/2`.
    Figure,
    /// Composition of fold and sector rotations.
    Rotation,
}

/// Reference points of the figure chart: the apex `O`, unit distance points
/// `A` on crease `x` and `D` on crease `y`, and the feet `B` (crease `w`) and
/// `C` (crease `z`) of the perpendiculars raised at `A` and `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigurePoints {
    pub o: Vec3,
    pub a: Vec3,
    pub b: Vec3,
    pub c: Vec3,
    pub d: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration3D {
    pub chart: Chart,
    /// Unit crease directions `x, y, z, w`.
    pub creases: [Vec3; 4],
    /// Unit normals of the panels between `x–y`, `y–z`, `z–w`, `w–x`.
    pub panel_normals: [Vec3; 4],
    pub points: Option<FigurePoints>,
}

impl Configuration3D {
    /// Fold angles measured from the panel normals, in the rotation chart's orientation.
    pub fn measured_folds(&self) -> [f64; 4] {
        let sign = match self.chart {
            Chart::Figure => FIGURE_ORIENTATION,
            Chart::Rotation => 1.0,
        };
        let n = &self.panel_normals;
        [0, 1, 2, 3].map(|i| {
            let (prev, next) = (&n[(i + 3) % 4], &n[i]);
            sign * dot(&cross(prev, next), &self.creases[i]).atan2(dot(prev, next))
        })
    }
}

fn normals(creases: &[Vec3; 4]) -> [Vec3; 4] {
    [0, 1, 2, 3].map(|i| unit(cross(&creases[i], &creases[(i + 1) % 4])))
}

/// The rotation-chart crease directions of a state.
pub fn rotation_creases(angles: &SectorAngles, fold: &FoldTangents) -> [Vec3; 4] {
    let (frames, _) = rotation_frames(angles, fold);
    frames.map(|f| [f[0][0], f[1][0], f[2][0]])
}

/// Builds the figure chart when `α` and `γ` allow it, the rotation chart otherwise.
pub fn build_embedding(angles: &SectorAngles, fold: &FoldTangents) -> Result<Configuration3D> {
    match figure_embedding(angles, fold) {
        Ok(c) => Ok(c),
        Err(Error::ChartSingular) => {
            let creases = rotation_creases(angles, fold);
            Ok(Configuration3D { chart: Chart::Rotation, creases, panel_normals: normals(&creases), points: None })
        }
        Err(e) => Err(e),
    }
}

/// The figure chart. The triangle `OAD` lies in the `xy`-plane with `A` at the
/// origin and `OA = OD = 1`; `AB = tan α` and `DC = tan γ` are perpendicular to
/// their creases.
pub fn figure_embedding(angles: &SectorAngles, fold: &FoldTangents) -> Result<Configuration3D> {
    let [alpha, beta, gamma, _] = angles.to_array();
    if alpha.cos().abs() < 1e-9 || gamma.cos().abs() < 1e-9 {
        return Err(Error::ChartSingular);
    }
    let (sh, ch) = (0.5 * beta).sin_cos();
    let (ta, tg) = (alpha.tan(), gamma.tan());
    let (x1, x2) = fold.x.homogeneous();
    let (y1, y2) = fold.y.homogeneous();
    let (cx, sx) = (x2 * x2 - x1 * x1, 2.0 * x1 * x2);
    let (cy, sy) = (y2 * y2 - y1 * y1, 2.0 * y1 * y2);

    let o = [sh, ch, 0.0];
    let a = [0.0, 0.0, 0.0];
    let d = [2.0 * sh, 0.0, 0.0];
    let b = [-cx * ta * ch, cx * ta * sh, -sx * ta];
    let c = [2.0 * sh + cy * tg * ch, cy * tg * sh, -sy * tg];

    let ex = unit(sub(&a, &o));
    let ey = unit(sub(&d, &o));
    // B and C fall on the far ray of their crease when the sector is obtuse.
    let ew = unit(sub(&b, &o)).map(|v| v * alpha.cos().signum());
    let ez = unit(sub(&c, &o)).map(|v| v * gamma.cos().signum());
    let creases = [ex, ey, ez, ew];
    Ok(Configuration3D {
        chart: Chart::Figure,
        creases,
        panel_normals: normals(&creases),
        points: Some(FigurePoints { o, a, b, c, d }),
    })
}

/// Residual of the figure chart: the mismatch of the `z–w` sector plus the
/// chordal mismatch of each measured fold against the state.
pub fn figure_residual(angles: &SectorAngles, fold: &FoldTangents) -> Result<f64> {
    let conf = figure_embedding(angles, fold)?;
    let sector = (dot(&conf.creases[2], &conf.creases[3]) - angles.delta().cos()).abs();
    let given = fold.fold_angles().to_array();
    let folds: f64 = conf
        .measured_folds()
        .iter()
        .zip(given)
        .map(|(m, g)| (0.5 * (m - g)).sin().abs())
        .sum();
    Ok(sector + folds)
}
