//! Documents and reports shared by the `spherilink` command and the HTTP service.
//!
//! Numbers are written in their shortest round-trip form, so every `f64`
//! reads back bit for bit. Infinite fold tangents are the string `"inf"`.

pub mod document;
pub mod oracle;
pub mod report;

pub use document::{sample_document, BranchDocument, BranchRecord, DocumentError, SampleRow, CSV_HEADER};
pub use oracle::{oracle, uniform_grid, OracleCloud, OraclePoint};
pub use report::ClassifyReport;

use serde::{Deserialize, Serialize};
use spherilink::SectorAngles;

/// Process exit codes.
pub mod exit {
    pub const INVALID_INPUT: u8 = 2;
    pub const NEAR_DEGENERATE: u8 = 3;
    pub const VERIFY_FAILED: u8 = 4;
    pub const SCHEMA: u8 = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    #[default]
    Rad,
    Deg,
}

/// Validated angles from four literals in `unit`.
pub fn angles_in(unit: AngleUnit, [a, b, g, d]: [f64; 4]) -> spherilink::Result<SectorAngles> {
    match unit {
        AngleUnit::Rad => SectorAngles::new(a, b, g, d),
        AngleUnit::Deg => SectorAngles::from_degrees(a, b, g, d),
    }
}
