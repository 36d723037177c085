use serde::{Deserialize, Serialize};
use spherilink::{build_embedding, Branch, Diagonals, FoldAngles, FoldTangents, SectorAngles};
use spherilink_cli::SampleRow;

/// Points per sector arc, endpoints included.
pub const ARC_POINTS: usize = 17;

type Vec3 = [f64; 3];

/// A sector drawn as a great-circle arc between two creases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    /// Creases at the ends, e.g. `"x"` and `"y"` for the sector `β`.
    pub from: char,
    pub to: char,
    pub points: Vec<Vec3>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateResponse {
    pub branch_id: u32,
    pub s: f64,
    pub fold: FoldTangents,
    pub fold_angles: FoldAngles,
    pub diagonals: Diagonals,
    pub self_intersects: bool,
    pub closure_residual: f64,
    /// Unit vectors of creases `x, y, z, w`.
    pub creases: [Vec3; 4],
    /// Sectors `β, γ, δ, α` in crease order.
    pub arcs: Vec<Arc>,
}

fn unit(v: Vec3) -> Vec3 {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|c| c / n)
}

/// Great-circle arc of length `angle` from `a` towards `b`.
fn arc(a: Vec3, b: Vec3, angle: f64) -> Vec<Vec3> {
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let e = unit([b[0] - dot * a[0], b[1] - dot * a[1], b[2] - dot * a[2]]);
    (0..ARC_POINTS)
        .map(|i| {
            let (s, c) = (angle * i as f64 / (ARC_POINTS - 1) as f64).sin_cos();
            unit([c * a[0] + s * e[0], c * a[1] + s * e[1], c * a[2] + s * e[2]])
        })
        .collect()
}

pub fn state_response(angles: &SectorAngles, branch: &Branch, s: f64) -> Result<StateResponse, spherilink::Error> {
    let fold = branch.state(s)?;
    let row = SampleRow::new(angles, s, &fold)?;
    let creases = build_embedding(angles, &fold)?.creases;
    let [alpha, beta, gamma, delta] = angles.to_array();
    let names = ['x', 'y', 'z', 'w'];
    let arcs = [beta, gamma, delta, alpha]
        .iter()
        .enumerate()
        .map(|(i, &angle)| Arc {
            from: names[i],
            to: names[(i + 1) % 4],
            points: arc(creases[i], creases[(i + 1) % 4], angle),
        })
        .collect();
    Ok(StateResponse {
        branch_id: branch.branch_id,
        s,
        fold,
        fold_angles: fold.fold_angles(),
        diagonals: Diagonals { u: row.u, v: row.v },
        self_intersects: row.self_intersects,
        closure_residual: row.closure_residual,
        creases,
        arcs,
    })
}
