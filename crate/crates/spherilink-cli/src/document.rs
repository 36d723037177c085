//! The branch document written by `sample` and read back by `verify`.

use serde::{Deserialize, Serialize};
use spherilink::{
    classify, closure_residual, diagonals, enumerate_branches, modulus_m, self_intersects, solutions_at_infinity,
    Amplitudes, Branch, BranchKind, FoldTangents, InfinitySolution, PhaseShift, ProjectiveReal, SDomain,
    SectorAngles, VertexType,
};

pub const SCHEMA_VERSION: &str = "1";
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error(transparent)]
    Library(#[from] spherilink::Error),
    #[error("unsupported schema_version {0:?} (expected \"1\")")]
    Version(String),
    #[error("document does not match the schema: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("{count} sample rows reach the tolerance {tolerance:e}")]
    Residual { count: usize, tolerance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchDocument {
    pub schema_version: String,
    pub angles: SectorAngles,
    pub vertex_type: VertexType,
    pub orthodiagonal: bool,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Closure residual every sample row stays below.
    pub tolerance: f64,
    pub branches: Vec<BranchRecord>,
    pub infinity_solutions: Vec<InfinitySolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub branch_id: u32,
    pub kind: BranchKind,
    pub amplitudes: Option<Amplitudes>,
    pub phase_shifts: Vec<PhaseShift>,
    pub s_domain: SDomain,
    pub closure_at_infinity: bool,
    pub samples: Vec<SampleRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub s: f64,
    pub x: ProjectiveReal,
    pub y: ProjectiveReal,
    pub z: ProjectiveReal,
    pub w: ProjectiveReal,
    pub rho_x: f64,
    pub rho_y: f64,
    pub rho_z: f64,
    pub rho_w: f64,
    pub u: f64,
    pub v: f64,
    pub self_intersects: bool,
    pub closure_residual: f64,
}

impl SampleRow {
    pub fn new(angles: &SectorAngles, s: f64, st: &FoldTangents) -> Result<Self, spherilink::Error> {
        let rho = st.fold_angles();
        let d = diagonals(angles, st)?;
        Ok(SampleRow {
            s,
            x: st.x,
            y: st.y,
            z: st.z,
            w: st.w,
            rho_x: rho.rho_x,
            rho_y: rho.rho_y,
            rho_z: rho.rho_z,
            rho_w: rho.rho_w,
            u: d.u,
            v: d.v,
            // a flat or fully folded crease has no sign, so no crossing pattern
            self_intersects: self_intersects(st).unwrap_or(false),
            closure_residual: closure_residual(angles, st),
        })
    }

    pub fn state(&self) -> FoldTangents {
        FoldTangents::new(self.x, self.y, self.z, self.w)
    }
}

fn record(angles: &SectorAngles, br: &Branch, n: usize) -> Result<BranchRecord, spherilink::Error> {
    let samples = br
        .sample_parameters(n)
        .into_iter()
        .map(|s| SampleRow::new(angles, s, &br.state(s)?))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BranchRecord {
        branch_id: br.branch_id,
        kind: br.kind,
        amplitudes: br.amplitudes,
        phase_shifts: br.phase1.into_iter().chain(br.phase2).collect(),
        s_domain: br.s_domain,
        closure_at_infinity: br.closure_at_infinity,
        samples,
    })
}

/// Samples every branch at `n` parameters. Branches are sampled on separate
/// threads; the output is ordered by branch id, then by `s`.
pub fn sample_document(angles: &SectorAngles, n: usize, tolerance: f64) -> Result<BranchDocument, DocumentError> {
    let class = classify(angles);
    let branches = enumerate_branches(angles)?;
    let mut records = std::thread::scope(|scope| {
        let handles: Vec<_> = branches.iter().map(|br| scope.spawn(move || record(angles, br, n))).collect();
        handles.into_iter().map(|h| h.join().expect("sampling thread panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    records.sort_by_key(|r| r.branch_id);
    let doc = BranchDocument {
        schema_version: SCHEMA_VERSION.to_owned(),
        angles: *angles,
        vertex_type: class.vertex_type,
        orthodiagonal: class.orthodiagonal,
        m: (class.vertex_type == VertexType::Elliptic).then(|| modulus_m(angles)).transpose()?,
        tolerance,
        branches: records,
        infinity_solutions: solutions_at_infinity(angles),
    };
    let bad = doc.failing_rows().len();
    if bad > 0 {
        return Err(DocumentError::Residual { count: bad, tolerance });
    }
    Ok(doc)
}

/// A sample row whose recomputed closure residual reached the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailingRow {
    pub branch_id: u32,
    pub index: usize,
    pub s: f64,
    pub residual: f64,
}

impl BranchDocument {
    /// Parses a document, rejecting unknown schema versions before reading the rest.
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        match value.get("schema_version").and_then(|v| v.as_str()) {
            Some(SCHEMA_VERSION) => Ok(serde_json::from_value(value)?),
            Some(other) => Err(DocumentError::Version(other.to_owned())),
            None => Err(DocumentError::Version(value.get("schema_version").map_or("missing".into(), |v| v.to_string()))),
        }
    }

    /// Rows whose residual, recomputed from the stored tangents, is not below the tolerance.
    pub fn failing_rows(&self) -> Vec<FailingRow> {
        let mut out = Vec::new();
        for br in &self.branches {
            for (index, row) in br.samples.iter().enumerate() {
                let residual = closure_residual(&self.angles, &row.state());
                if !(residual < self.tolerance) {
                    out.push(FailingRow { branch_id: br.branch_id, index, s: row.s, residual });
                }
            }
        }
        out
    }

    /// Every sample as a CSV row under [`CSV_HEADER`].
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for br in &self.branches {
            for r in &br.samples {
                let mut rec = vec![br.branch_id.to_string(), r.s.to_string()];
                rec.extend([r.x, r.y, r.z, r.w].map(|c| c.to_string()));
                rec.extend([r.rho_x, r.rho_y, r.rho_z, r.rho_w, r.u, r.v].map(|c| c.to_string()));
                rec.push(r.self_intersects.to_string());
                rec.push(r.closure_residual.to_string());
                w.write_record(&rec)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub const CSV_HEADER: [&str; 14] = [
    "branch_id",
    "s",
    "x",
    "y",
    "z",
    "w",
    "rho_x",
    "rho_y",
    "rho_z",
    "rho_w",
    "u",
    "v",
    "self_intersects",
    "closure_residual",
];
