//! Requests against the router, in process.

use std::f64::consts::FRAC_PI_2;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use spherilink::SectorAngles;
use spherilink_cli::document::DEFAULT_TOLERANCE;
use spherilink_cli::{sample_document, BranchDocument};
use spherilink_service::{router, StateResponse};
use tower::ServiceExt;

async fn post(path: &str, body: String) -> (StatusCode, Vec<u8>) {
    let req = Request::post(path).header(header::CONTENT_TYPE, "application/json").body(Body::from(body)).unwrap();
    let res = router().oneshot(req).await.unwrap();
    let status = res.status();
    (status, res.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn post_json(path: &str, body: Value) -> (StatusCode, Value) {
    let (status, bytes) = post(path, body.to_string()).await;
    (status, serde_json::from_slice(&bytes).unwrap())
}

fn deg(a: f64, b: f64, g: f64, d: f64) -> Value {
    json!({"alpha": a, "beta": b, "gamma": g, "delta": d, "unit": "deg"})
}

fn with(mut base: Value, extra: Value) -> Value {
    base.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
    base
}

#[tokio::test]
async fn classify_square() {
    let (status, body) = post_json("/classify", deg(90.0, 90.0, 90.0, 90.0)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["type"], "Square");
    assert!(body.get("M").is_none());
}

#[tokio::test]
async fn classify_defaults_to_radians() {
    let body = json!({"alpha": FRAC_PI_2, "beta": FRAC_PI_2, "gamma": FRAC_PI_2, "delta": FRAC_PI_2});
    let (status, body) = post_json("/classify", body).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["type"], "Square");
}

#[tokio::test]
async fn classify_elliptic_carries_modulus() {
    let (status, body) = post_json("/classify", deg(60.0, 90.0, 72.0, 45.0)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["type"], "Elliptic");
    let m = spherilink::modulus_m(&SectorAngles::from_degrees(60.0, 90.0, 72.0, 45.0).unwrap()).unwrap();
    assert_eq!(body["M"].as_f64(), Some(m));
}

#[tokio::test]
async fn invalid_input_is_bad_request() {
    let (status, body) = post_json("/classify", deg(170.0, 10.0, 10.0, 10.0)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(body["error"].as_str().unwrap().contains("alpha < sum of the other three"));
    let (status, _) = post("/classify", "{\"alpha\": 1".into()).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = post_json("/classify", json!({"alpha": 1.0})).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn branches_match_the_cli_document() {
    let (status, bytes) = post("/branches", with(deg(90.0, 90.0, 90.0, 90.0), json!({"n": 5})).to_string()).await;
    assert_eq!(status, StatusCode::OK);
    let doc = BranchDocument::from_json(std::str::from_utf8(&bytes).unwrap()).unwrap();
    assert_eq!(doc.branches.len(), 4);
    let angles = SectorAngles::from_degrees(90.0, 90.0, 90.0, 90.0).unwrap();
    assert_eq!(doc, sample_document(&angles, 5, DEFAULT_TOLERANCE).unwrap());
}

#[tokio::test]
async fn branches_reject_bad_requests() {
    let (status, _) = post_json("/branches", with(deg(60.0, 90.0, 72.0, 45.0), json!({"n": 1}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let near = json!({"alpha": 1.0, "beta": 0.7, "gamma": 1.2, "delta": 1.5000000002, "n": 5});
    let (status, body) = post_json("/branches", near).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["error"].as_str().unwrap().contains("degenerate"));
}

async fn state(body: Value) -> (StatusCode, Value) {
    post_json("/state", body).await
}

#[tokio::test]
async fn rhombus_state_at_unit_x() {
    let (status, body) = state(with(deg(60.0, 60.0, 60.0, 60.0), json!({"branch_id": 1, "s": FRAC_PI_2}))).await;
    assert_eq!(status, StatusCode::OK);
    let r: StateResponse = serde_json::from_value(body).unwrap();
    assert!((r.fold.x.to_f64() - 1.0).abs() < 1e-15);
    assert!((r.fold.y.to_f64() - 0.5).abs() < 1e-15);
    assert!(r.closure_residual < 1e-14);
}

#[tokio::test]
async fn state_errors() {
    let (status, _) = state(with(deg(60.0, 60.0, 60.0, 60.0), json!({"branch_id": 9, "s": 0.0}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, body) = state(with(deg(60.0, 60.0, 60.0, 60.0), json!({"branch_id": 1, "s": 4.0}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["error"].as_str().unwrap().contains("outside the branch domain"));
}

#[tokio::test]
async fn butterfly_cross_state_self_intersects() {
    let (status, body) = state(with(deg(60.0, 120.0, 60.0, 120.0), json!({"branch_id": 3, "s": 1.0}))).await;
    assert_eq!(status, StatusCode::OK);
    let r: StateResponse = serde_json::from_value(body).unwrap();
    assert!(r.self_intersects, "{:?}", r.fold);
    // the two ordinary branches at the same fold angle do not
    for id in [1, 2] {
        let (_, body) = state(with(deg(60.0, 120.0, 60.0, 120.0), json!({"branch_id": id, "s": 1.0}))).await;
        assert_eq!(body["self_intersects"], false);
    }
}

fn norm(p: &[f64; 3]) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

fn angle_between(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0).acos()
}

#[tokio::test]
async fn render_geometry_lies_on_the_unit_sphere() {
    let angles = SectorAngles::from_degrees(60.0, 90.0, 72.0, 45.0).unwrap();
    let sectors = angles.to_array();
    for (id, s) in [(1, -2.0), (1, 0.3), (2, 1.7), (2, -0.01)] {
        let (status, body) = state(with(deg(60.0, 90.0, 72.0, 45.0), json!({"branch_id": id, "s": s}))).await;
        assert_eq!(status, StatusCode::OK);
        let r: StateResponse = serde_json::from_value(body).unwrap();
        for c in &r.creases {
            assert!((norm(c) - 1.0).abs() < 1e-12);
        }
        assert_eq!(r.arcs.len(), 4);
        for (i, arc) in r.arcs.iter().enumerate() {
            for p in &arc.points {
                assert!((norm(p) - 1.0).abs() < 1e-12);
            }
            // arcs run crease to crease and span their sector: β, γ, δ, α
            let sector = sectors[(i + 1) % 4];
            assert!(angle_between(&arc.points[0], &r.creases[i]) < 1e-7);
            assert!(angle_between(arc.points.last().unwrap(), &r.creases[(i + 1) % 4]) < 1e-7);
            assert!((angle_between(&r.creases[i], &r.creases[(i + 1) % 4]) - sector).abs() < 1e-7);
        }
    }
}

#[tokio::test]
async fn state_agrees_with_document_rows() {
    let angles = SectorAngles::from_degrees(60.0, 90.0, 72.0, 45.0).unwrap();
    let doc = sample_document(&angles, 33, DEFAULT_TOLERANCE).unwrap();
    for br in &doc.branches {
        for row in br.samples.iter().step_by(4) {
            let (status, body) = state(with(deg(60.0, 90.0, 72.0, 45.0), json!({"branch_id": br.branch_id, "s": row.s}))).await;
            assert_eq!(status, StatusCode::OK);
            let r: StateResponse = serde_json::from_value(body).unwrap();
            let pairs = [
                (r.fold.x.to_f64(), row.x.to_f64()),
                (r.fold.y.to_f64(), row.y.to_f64()),
                (r.fold.z.to_f64(), row.z.to_f64()),
                (r.fold.w.to_f64(), row.w.to_f64()),
                (r.fold_angles.rho_x, row.rho_x),
                (r.diagonals.u, row.u),
                (r.diagonals.v, row.v),
            ];
            for (a, b) in pairs {
                assert!(a == b || (a - b).abs() < 1e-12 * a.abs().max(1.0), "{a} vs {b}");
            }
            assert_eq!(r.self_intersects, row.self_intersects);
        }
    }
}

#[tokio::test]
async fn identical_requests_give_identical_bytes() {
    let body = with(deg(60.0, 90.0, 72.0, 45.0), json!({"branch_id": 2, "s": 0.77})).to_string();
    let (_, a) = post("/state", body.clone()).await;
    let (_, b) = post("/state", body).await;
    assert_eq!(a, b);
}

#[tokio::test]
async fn cors_preflight_is_answered() {
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/state")
        .header(header::ORIGIN, "http://localhost:5173")
        .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
        .body(Body::empty())
        .unwrap();
    let res = router().oneshot(req).await.unwrap();
    assert_eq!(res.status(), StatusCode::OK);
    assert_eq!(res.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}
