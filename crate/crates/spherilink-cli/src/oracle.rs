//! Brute-force states: for each `x` on a grid, every closing tuple from the relations.

use serde::{Deserialize, Serialize};
use spherilink::{candidate_tuples, closure_residual, post_examine, ProjectiveReal, SectorAngles};

use crate::document::SCHEMA_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OraclePoint {
    pub x: ProjectiveReal,
    pub y: ProjectiveReal,
    pub z: ProjectiveReal,
    pub w: ProjectiveReal,
    pub closure_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCloud {
    pub schema_version: String,
    pub angles: SectorAngles,
    pub tolerance: f64,
    pub points: Vec<OraclePoint>,
}

/// `n` values of `x = tan(ρ/2)` for `ρ` uniform on `(−π, π]`.
pub fn uniform_grid(n: usize) -> Vec<ProjectiveReal> {
    (1..=n).map(|i| spherilink::tan_half(-std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / n as f64)).collect()
}

pub fn oracle(angles: &SectorAngles, xs: &[ProjectiveReal], tolerance: f64) -> OracleCloud {
    let points = xs
        .iter()
        .flat_map(|&x| post_examine(angles, &candidate_tuples(angles, x).tuples, tolerance))
        .map(|st| OraclePoint { x: st.x, y: st.y, z: st.z, w: st.w, closure_residual: closure_residual(angles, &st) })
        .collect();
    OracleCloud { schema_version: SCHEMA_VERSION.to_owned(), angles: *angles, tolerance, points }
}

impl OracleCloud {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "z", "w", "closure_residual"])?;
        for p in &self.points {
            let mut rec: Vec<String> = [p.x, p.y, p.z, p.w].iter().map(|c| c.to_string()).collect();
            rec.push(p.closure_residual.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}
