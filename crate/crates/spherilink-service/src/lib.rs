//! Stateless JSON endpoints over the spherilink library.
//!
//! | route | body | reply |
//! |---|---|---|
//! | `POST /classify` | angles | classify report |
//! | `POST /branches` | angles, `n`, `tol` | branch document |
//! | `POST /state` | angles, `branch_id`, `s` | one state with render geometry |
//!
//! Angles are `{"alpha", "beta", "gamma", "delta", "unit"}` with `unit`
//! `"rad"` (default) or `"deg"`. Branch ids are a function of the angles, so
//! `/state` needs no session.

mod state;

pub use state::{state_response, Arc, StateResponse};

use axum::extract::rejection::JsonRejection;
use axum::http::{header, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use spherilink::SectorAngles;
use spherilink_cli::document::DEFAULT_TOLERANCE;
use spherilink_cli::{angles_in, sample_document, AngleUnit, ClassifyReport, DocumentError};
use tower_http::cors::{Any, CorsLayer};

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct AnglesBody {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    #[serde(default)]
    pub unit: AngleUnit,
}

impl AnglesBody {
    fn angles(&self) -> Result<SectorAngles, ApiError> {
        angles_in(self.unit, [self.alpha, self.beta, self.gamma, self.delta]).map_err(ApiError::from)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct BranchesBody {
    #[serde(flatten)]
    pub angles: AnglesBody,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_n() -> usize {
    257
}

fn default_tol() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct StateBody {
    #[serde(flatten)]
    pub angles: AnglesBody,
    pub branch_id: u32,
    pub s: f64,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
}

/// An error reply: status plus a JSON `{"error": ...}` body.
#[derive(Debug)]
pub struct ApiError(StatusCode, String);

impl From<spherilink::Error> for ApiError {
    fn from(e: spherilink::Error) -> Self {
        use spherilink::Error::*;
        let status = match e {
            OutOfRange { .. } | QuadrilateralInequality(_) | NonFinite(_) => StatusCode::BAD_REQUEST,
            NearDegenerate(_) | OutOfDomain { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError(StatusCode::BAD_REQUEST, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(ErrorBody { error: self.1 })).into_response()
    }
}

type Reply<T> = Result<Json<T>, ApiError>;

async fn classify(body: Result<Json<AnglesBody>, JsonRejection>) -> Reply<ClassifyReport> {
    let Json(body) = body?;
    Ok(Json(ClassifyReport::new(&body.angles()?)))
}

async fn branches(body: Result<Json<BranchesBody>, JsonRejection>) -> Reply<spherilink_cli::BranchDocument> {
    let Json(body) = body?;
    let angles = body.angles.angles()?;
    if body.n < 2 {
        return Err(ApiError(StatusCode::BAD_REQUEST, format!("n = {} is below 2", body.n)));
    }
    match sample_document(&angles, body.n, body.tol) {
        Ok(doc) => Ok(Json(doc)),
        Err(DocumentError::Library(e)) => Err(e.into()),
        Err(e) => Err(ApiError(StatusCode::UNPROCESSABLE_ENTITY, e.to_string())),
    }
}

async fn state(body: Result<Json<StateBody>, JsonRejection>) -> Reply<StateResponse> {
    let Json(body) = body?;
    let angles = body.angles.angles()?;
    let branches = spherilink::enumerate_branches(&angles)?;
    let branch = branches
        .iter()
        .find(|b| b.branch_id == body.branch_id)
        .ok_or_else(|| ApiError(StatusCode::NOT_FOUND, format!("no branch {} for these angles", body.branch_id)))?;
    Ok(Json(state_response(&angles, branch, body.s)?))
}

pub fn router() -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::POST, Method::OPTIONS])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/classify", post(classify))
        .route("/branches", post(branches))
        .route("/state", post(state))
        .layer(cors)
}
