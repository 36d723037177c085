//! Grashof reachability, self-intersection, the conjugate linkage and strip switches.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angles::{FoldTangents, ProjectiveReal, SectorAngles};
use crate::branches::solutions_at_infinity;
use crate::classify::{classify, modulus_m_minus_one, VertexType};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Crease {
    X,
    Y,
    Z,
    W,
}

impl Crease {
    pub const ALL: [Crease; 4] = [Crease::X, Crease::Y, Crease::Z, Crease::W];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrashofReport {
    pub grashof: bool,
    pub sigma: f64,
    pub max_plus_min: f64,
    /// Creases whose fold tangent reaches infinity somewhere on the configuration space.
    pub reachable_infinities: Vec<Crease>,
}

/// For elliptic vertices, crease `c` folds flat (tangent `∞`) iff
/// `(M − 1)·sgn(π − σ)·sgn(σ − s_c) < 0`, where `s_c` is the sum of the two
/// sectors meeting at `c`.
fn elliptic_reachable(angles: &SectorAngles) -> Vec<Crease> {
    let [a, b, g, d] = angles.to_array();
    let sigma = angles.semi_perimeter();
    let m1 = modulus_m_minus_one(angles);
    let pair_sums = [a + b, b + g, g + d, d + a];
    Crease::ALL
        .into_iter()
        .zip(pair_sums)
        .filter(|(_, s)| m1 * (PI - sigma).signum() * (sigma - s).signum() < 0.0)
        .map(|(c, _)| c)
        .collect()
}

pub fn grashof(angles: &SectorAngles) -> GrashofReport {
    let arr = angles.to_array();
    let max = arr.iter().cloned().fold(f64::MIN, f64::max);
    let min = arr.iter().cloned().fold(f64::MAX, f64::min);
    let sigma = angles.semi_perimeter();
    let max_plus_min = max + min;
    if classify(angles).vertex_type == VertexType::Elliptic {
        return GrashofReport {
            grashof: max_plus_min < sigma,
            sigma,
            max_plus_min,
            reachable_infinities: elliptic_reachable(angles),
        };
    }
    let mut reach = [false; 4];
    for sol in solutions_at_infinity(angles) {
        for (i, c) in sol.state.to_array().iter().enumerate() {
            // a branch at infinity sweeps its free coordinates through ∞ as well
            reach[i] |= c.is_infinite() || !sol.isolated;
        }
    }
    let reachable_infinities: Vec<Crease> = Crease::ALL.into_iter().filter(|c| reach[c.index()]).collect();
    GrashofReport { grashof: !reachable_infinities.is_empty(), sigma, max_plus_min, reachable_infinities }
}

/// Sign-pattern test for a self-intersecting state.
pub fn self_intersects(fold: &FoldTangents) -> Result<bool> {
    let mut signs = [0i8; 4];
    for (s, c) in signs.iter_mut().zip(fold.to_array()) {
        match c {
            ProjectiveReal::Finite(v) if v != 0.0 && v.is_finite() => *s = if v > 0.0 { 1 } else { -1 },
            _ => return Err(Error::DegenerateState),
        }
    }
    const PATTERNS: [[i8; 4]; 4] = [[1, 1, -1, -1], [-1, 1, 1, -1], [-1, -1, 1, 1], [1, -1, -1, 1]];
    Ok(PATTERNS.contains(&signs))
}

/// `(σ − α, σ − β, σ − γ, σ − δ)`, which shares its diagonal lengths with the input.
pub fn conjugate(angles: &SectorAngles) -> SectorAngles {
    let s = angles.semi_perimeter();
    let [a, b, g, d] = angles.to_array();
    // each entry lies in (0, π) and the inequalities carry over
    SectorAngles::raw(s - a, s - b, s - g, s - d)
}

/// Replaces two adjacent sectors by their supplements and maps the state along.
///
/// | variant | angles | fold tangents |
/// |---|---|---|
/// | 1 | `(α, β, π−γ, π−δ)` | `(x, −1/y, −z, −1/w)` |
/// | 2 | `(π−α, β, γ, π−δ)` | `(−1/x, y, −1/z, −w)` |
/// | 3 | `(π−α, π−β, γ, δ)` | `(−x, −1/y, z, −1/w)` |
/// | 4 | `(α, π−β, π−γ, δ)` | `(−1/x, −y, −1/z, w)` |
pub fn strip_switch(variant: u8, angles: &SectorAngles, fold: &FoldTangents) -> Result<(SectorAngles, FoldTangents)> {
    let [a, b, g, d] = angles.to_array();
    let FoldTangents { x, y, z, w } = *fold;
    let nr = |t: ProjectiveReal| -t.recip();
    let (angles, fold) = match variant {
        1 => ([a, b, PI - g, PI - d], [x, nr(y), -z, nr(w)]),
        2 => ([PI - a, b, g, PI - d], [nr(x), y, nr(z), -w]),
        3 => ([PI - a, PI - b, g, d], [-x, nr(y), z, nr(w)]),
        4 => ([a, PI - b, PI - g, d], [nr(x), -y, nr(z), w]),
        v => return Err(Error::UnknownVariant(v)),
    };
    // supplementing two adjacent sectors maps the sector-angle inequalities onto each other
    Ok((SectorAngles::raw(angles[0], angles[1], angles[2], angles[3]), FoldTangents::from_array(fold)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::diagonal_coeffs;
    use crate::embed::closure_residual;
    use crate::relations::candidate_tuples;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn self_intersection_patterns() {
        assert_eq!(self_intersects(&FoldTangents::finite(1.0, 2.0, -3.0, -4.0)), Ok(true));
        assert_eq!(self_intersects(&FoldTangents::finite(1.0, -1.0, 1.0, -1.0)), Ok(false));
        assert_eq!(self_intersects(&FoldTangents::finite(1.0, 0.0, 1.0, 1.0)), Err(Error::DegenerateState));
        let inf = FoldTangents::new(ProjectiveReal::Infinity, 1.0.into(), 1.0.into(), 1.0.into());
        assert_eq!(self_intersects(&inf), Err(Error::DegenerateState));
    }

    #[test]
    fn conjugate_examples() {
        let sq = SectorAngles::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        assert_eq!(conjugate(&sq).to_array(), sq.to_array());
        let a = SectorAngles::new(FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_4).unwrap();
        let c = conjugate(&a).to_array();
        for (got, want) in c.iter().zip([FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_4]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn switch_maps_types() {
        let d1 = SectorAngles::new(1.0, 0.6, 0.6, 1.0).unwrap();
        let (img, _) = strip_switch(1, &d1, &FoldTangents::finite(0.1, 0.2, 0.3, 0.4)).unwrap();
        assert_eq!(classify(&img).vertex_type, VertexType::AntiDeltoidI);
        let c1 = SectorAngles::new(1.0, 0.7, 1.2, 1.5).unwrap();
        assert_eq!(classify(&c1).vertex_type, VertexType::ConicI);
        let (img, _) = strip_switch(2, &c1, &FoldTangents::finite(0.1, 0.2, 0.3, 0.4)).unwrap();
        assert_eq!(classify(&img).vertex_type, VertexType::ConicIII);
        assert_eq!(strip_switch(5, &c1, &FoldTangents::finite(0.0, 0.0, 0.0, 0.0)), Err(Error::UnknownVariant(5)));
    }

    #[test]
    fn square_reaches_infinity_everywhere() {
        let sq = SectorAngles::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap();
        let r = grashof(&sq);
        assert!(r.grashof);
        assert_eq!(r.reachable_infinities, Crease::ALL.to_vec());
    }

    #[test]
    fn fixture_grashof_is_arithmetic() {
        let a = SectorAngles::new(FRAC_PI_3, FRAC_PI_2, 2.0 * PI / 5.0, FRAC_PI_4).unwrap();
        let r = grashof(&a);
        assert!((r.sigma - 89.0 * PI / 120.0).abs() < 1e-14);
        assert!((r.max_plus_min - 3.0 * PI / 4.0).abs() < 1e-14);
        assert!(!r.grashof);
    }

    fn valid_angles() -> impl Strategy<Value = SectorAngles> {
        prop::array::uniform4(0.05f64..3.09).prop_filter_map("invalid", |a| SectorAngles::from_array(a).ok())
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(a in valid_angles()) {
            let back = conjugate(&conjugate(&a)).to_array();
            for (x, y) in back.iter().zip(a.to_array()) {
                prop_assert!((x - y).abs() < 1e-14);
            }
            prop_assert!(SectorAngles::from_array(conjugate(&a).to_array()).is_ok());
        }

        #[test]
        fn conjugate_keeps_diagonal_relation(a in valid_angles()) {
            let (h, hc) = (diagonal_coeffs(&a), diagonal_coeffs(&conjugate(&a)));
            for (x, y) in [(h.h11, hc.h11), (h.h10, hc.h10), (h.h01, hc.h01), (h.h00, hc.h00)] {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }

        #[test]
        fn switches_are_involutions(a in valid_angles(), v in 1u8..=4, t in prop::array::uniform4(-5.0f64..5.0)) {
            let fold = FoldTangents::finite(t[0], t[1], t[2], t[3]);
            let (a1, f1) = strip_switch(v, &a, &fold).unwrap();
            prop_assert!(SectorAngles::from_array(a1.to_array()).is_ok());
            let (a2, f2) = strip_switch(v, &a1, &f1).unwrap();
            for (x, y) in a2.to_array().iter().zip(a.to_array()) {
                prop_assert!((x - y).abs() < 1e-14);
            }
            prop_assert!(f2.max_difference(&fold) < 1e-12);
        }

        #[test]
        fn switches_carry_solutions(a in valid_angles(), v in 1u8..=4, x in -4.0f64..4.0) {
            for t in candidate_tuples(&a, x.into()).tuples {
                if closure_residual(&a, &t) < 1e-8 {
                    let (a1, t1) = strip_switch(v, &a, &t).unwrap();
                    prop_assert!(closure_residual(&a1, &t1) < 1e-7);
                }
            }
        }

        #[test]
        fn self_intersection_is_sign_symmetric(t in prop::array::uniform4(prop_oneof![-3.0f64..-0.01, 0.01f64..3.0])) {
            let fold = FoldTangents::finite(t[0], t[1], t[2], t[3]);
            prop_assert_eq!(self_intersects(&fold), self_intersects(&fold.neg()));
        }
    }
}
