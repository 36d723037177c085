//! Properties of sampled branches across random vertices.

use std::f64::consts::PI;

use proptest::prelude::*;
use spherilink::{
    amplitudes, candidate_tuples, classify, closure_residual, conjugate, diagonals, enumerate_branches,
    post_examine, relation_residuals, Branch, ProjectiveReal, SectorAngles, VertexType,
};

const SAMPLES: usize = 65;

fn valid() -> impl Strategy<Value = SectorAngles> {
    prop::array::uniform4(0.05f64..PI - 0.05).prop_filter_map("invalid", |a| SectorAngles::from_array(a).ok())
}

fn elliptic() -> impl Strategy<Value = SectorAngles> {
    valid().prop_filter("not elliptic", |a| {
        classify(a).vertex_type == VertexType::Elliptic && enumerate_branches(a).is_ok()
    })
}

fn finite_samples(br: &Branch) -> Vec<[f64; 4]> {
    br.sample_parameters(SAMPLES)
        .into_iter()
        .filter_map(|s| {
            let st = br.state(s).unwrap();
            let c = st.to_array();
            c.iter().all(|v| !v.is_infinite()).then(|| c.map(ProjectiveReal::to_f64))
        })
        .collect()
}

/// Distance from `(u, v)` to the diagonal trace of `angles`, found by solving
/// for the states whose `x` crease produces the diagonal `u`.
fn distance_to_trace(angles: &SectorAngles, u: f64, v: f64) -> f64 {
    let [a, b, _, _] = angles.to_array();
    let cos_rho = (a.cos() * b.cos() - u.cos()) / (a.sin() * b.sin());
    if cos_rho.abs() > 1.0 + 1e-12 {
        return f64::INFINITY;
    }
    let rho = cos_rho.clamp(-1.0, 1.0).acos();
    let mut best = f64::INFINITY;
    for r in [rho, -rho] {
        let x = ProjectiveReal::from_f64((0.5 * r).tan());
        for st in post_examine(angles, &candidate_tuples(angles, x).tuples, 1e-8) {
            if let Ok(d) = diagonals(angles, &st) {
                best = best.min((d.u - u).abs().max((d.v - v).abs()));
            }
        }
    }
    best
}

/// Whether `(u, v)` sits where a fold tangent is 0 or ∞, so that recovering
/// the state from the diagonals loses half its digits.
fn at_turning_point(angles: &SectorAngles, u: f64, v: f64) -> bool {
    let [a, b, g, d] = angles.to_array();
    let ends = |p: f64, q: f64| [(p - q).abs(), p + q, 2.0 * PI - p - q];
    let near = |t: f64, e: [f64; 3]| e.iter().any(|&e| (t - e).abs() < 1e-6);
    near(u, ends(a, b)) || near(u, ends(g, d)) || near(v, ends(b, g)) || near(v, ends(d, a))
}

fn flanking_creases_of_shortest(angles: &SectorAngles) -> [usize; 2] {
    // sector i lies between crease i − 1 and crease i (α between w and x, β between x and y, ...)
    let arr = angles.to_array();
    let i = (0..4).min_by(|&p, &q| arr[p].total_cmp(&arr[q])).unwrap();
    [(i + 3) % 4, i]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn elliptic_samples_are_certified(angles in elliptic()) {
        for br in enumerate_branches(&angles).unwrap() {
            for s in br.sample_parameters(SAMPLES) {
                let st = br.state(s).unwrap();
                for r in relation_residuals(&angles, &st) {
                    prop_assert!(r < 1e-9, "s={} {:?}: {:e}", s, st, r);
                }
                prop_assert!(closure_residual(&angles, &st) < 1e-8);
            }
        }
    }

    #[test]
    fn first_elliptic_branch_keeps_xz_positive(angles in elliptic()) {
        prop_assume!(amplitudes(&angles).px.is_real());
        let br = enumerate_branches(&angles).unwrap().into_iter().find(|b| b.branch_id == 1).unwrap();
        for [x, _, z, _] in finite_samples(&br) {
            if x * z != 0.0 {
                prop_assert!(x * z > 0.0, "x={} z={}", x, z);
            }
        }
    }

    #[test]
    fn deltoid_two_has_equal_y_and_w(b in 0.1f64..PI - 0.1, g in 0.1f64..PI - 0.1) {
        let angles = SectorAngles::new(b, b, g, g);
        prop_assume!(angles.is_ok());
        let angles = angles.unwrap();
        prop_assume!(classify(&angles).vertex_type == VertexType::DeltoidII);
        for br in enumerate_branches(&angles).unwrap() {
            for s in br.sample_parameters(SAMPLES) {
                let st = br.state(s).unwrap();
                if br.closure_at_infinity {
                    // the branch at infinity has w = −y instead
                    prop_assert_eq!(st.w, -st.y);
                } else {
                    prop_assert_eq!(st.y, st.w);
                }
            }
        }
    }

    #[test]
    fn orthodiagonal_relation_separates(a in 0.2f64..PI - 0.2, b in 0.2f64..PI - 0.2, g in 0.2f64..PI - 0.2) {
        let cd = a.cos() * g.cos() / b.cos();
        prop_assume!(cd.abs() < 1.0);
        let angles = SectorAngles::new(a, b, g, cd.acos());
        prop_assume!(angles.is_ok());
        let angles = angles.unwrap();
        prop_assume!(classify(&angles).orthodiagonal && enumerate_branches(&angles).is_ok());
        for br in enumerate_branches(&angles).unwrap() {
            for [x, y, _, _] in finite_samples(&br) {
                prop_assume!(x != 0.0 && y != 0.0);
                let lhs = ((b - a).sin() * x + (b + a).sin() / x) * ((b - g).sin() * y + (b + g).sin() / y);
                let rhs = 4.0 * a.sin() * g.sin() * b.cos();
                // back to the bihomogeneous scale of the relation
                let r = (lhs - rhs) * x * y / ((1.0 + x * x) * (1.0 + y * y));
                prop_assert!(r.abs() < 1e-9, "x={} y={}: {:e}", x, y, r);
            }
        }
    }

    #[test]
    fn conjugate_vertices_share_diagonal_traces(angles in elliptic()) {
        let conj = conjugate(&angles);
        prop_assume!(enumerate_branches(&conj).is_ok());
        for (from, to) in [(angles, conj), (conj, angles)] {
            for br in enumerate_branches(&from).unwrap() {
                for s in br.sample_parameters(17) {
                    let st = br.state(s).unwrap();
                    let d = diagonals(&from, &st).unwrap();
                    if at_turning_point(&from, d.u, d.v) {
                        continue;
                    }
                    let gap = distance_to_trace(&to, d.u, d.v);
                    prop_assert!(gap < 1e-8, "(u, v) = ({}, {}) is {:e} off the conjugate trace", d.u, d.v, gap);
                }
            }
        }
    }

    #[test]
    fn grashof_iff_both_flanks_of_shortest_fold_flat(angles in elliptic()) {
        let mut reached = [false; 4];
        for br in enumerate_branches(&angles).unwrap() {
            for s in br.sample_parameters(257) {
                let st = br.state(s).unwrap();
                for (r, c) in reached.iter_mut().zip(st.to_array()) {
                    *r |= c.finite().map_or(true, |v| v.abs() > 1e6);
                }
            }
        }
        let arr = angles.to_array();
        let max = arr.iter().cloned().fold(f64::MIN, f64::max);
        let min = arr.iter().cloned().fold(f64::MAX, f64::min);
        let [p, q] = flanking_creases_of_shortest(&angles);
        prop_assert_eq!(max + min < angles.semi_perimeter(), reached[p] && reached[q]);
        // opposite pair sums add to 2σ, so one crease from each opposite pair folds flat
        prop_assert!(reached[0] != reached[2] && reached[1] != reached[3], "{:?}", reached);
    }
}
