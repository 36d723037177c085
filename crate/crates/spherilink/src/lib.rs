//! Kinematics of the spherical four-bar linkage, equivalently a rigid
//! degree-4 origami vertex.
//!
//! Sector angles `α, β, γ, δ` fix the vertex; a state is the tuple of fold
//! tangents `x, y, z, w = tan(ρ/2)` on the four creases. [`classify`] sorts a
//! vertex into one of sixteen types, [`enumerate_branches`] returns every
//! connected piece of its configuration space in closed form, and
//! [`closure_residual`] certifies any state independently by composing
//! rotations around the vertex.
//!
//! ```
//! use spherilink::{classify, enumerate_branches, closure_residual, SectorAngles, VertexType};
//!
//! let angles = SectorAngles::from_degrees(60.0, 90.0, 72.0, 45.0)?;
//! assert_eq!(classify(&angles).vertex_type, VertexType::Elliptic);
//! for branch in enumerate_branches(&angles)? {
//!     let state = branch.state(0.3)?;
//!     assert!(closure_residual(&angles, &state) < 1e-8);
//! }
//! # Ok::<(), spherilink::Error>(())
//! ```

pub mod analysis;
pub mod angles;
pub mod branches;
pub mod classify;
pub mod elliptic;
pub mod embed;
pub mod error;
pub mod relations;

pub use analysis::{conjugate, grashof, self_intersects, strip_switch, Crease, GrashofReport};
pub use angles::{
    semi_perimeter, tan_half, validate_sector_angles, FoldAngles, FoldTangents, ProjectiveReal, SectorAngles,
    SignedSqrt,
};
pub use branches::{
    branch_state, enumerate_branches, phase_shifts, sample_branch, solutions_at_infinity, Branch, BranchKind,
    InfinitySolution, PhaseShift, SDomain,
};
pub use classify::{
    adjacent_coeffs, amplitudes, classify, diagonal_coeffs, is_orthodiagonal, modulus_m, opposite_coeffs,
    Amplitudes, Classification, FCoeffs, GCoeffs, HCoeffs, VertexType,
};
pub use elliptic::{complete_k, dc, dc_inverse, jacobi, jacobi_shifted, EllipticContext, JacobiTriple, ShiftedArgument};
pub use embed::{build_embedding, closure_residual, post_examine, Configuration3D};
pub use error::{Error, Result};
pub use relations::{candidate_tuples, cayley_menger_residual, diagonals, relation_residuals, Diagonals};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/branches.md")]
    mod branches {}
    #[doc = include_str!("../../../book/src/elliptic.md")]
    mod elliptic {}
    #[doc = include_str!("../../../book/src/infinity.md")]
    mod infinity {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/tools.md")]
    mod tools {}
}
