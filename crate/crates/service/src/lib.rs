//! Stateless HTTP/JSON front end for the puzzle engine.
//!
//! Every request carries the whole puzzle state, so handlers are pure
//! functions of their body. Failures map to `400` (malformed body), `409`
//! (no solution where one was required) and `422` (search budget exhausted
//! or instance too large).

use std::net::{Ipv4Addr, SocketAddr};

use axum::body::Bytes;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use sortmatch_core::{
    board_violations, build_graph_permutation, construct_solution, count_solutions_with,
    forbidden_witness, nearest_solvable, next_hint, solve_by_toposort, Budget, Error, Hint,
    LabelWord, PermutationPuzzle, RepairResult, SortingPuzzle,
};
use tower_http::cors::CorsLayer;

pub const DEFAULT_PORT: u16 = 8737;

/// Per-request limits.
#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub max_nodes: u64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_nodes: 2_000_000,
        }
    }
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    Conflict(Value),
    Unprocessable(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        match self {
            ApiError::BadRequest(msg) => {
                (StatusCode::BAD_REQUEST, Json(json!({ "error": msg }))).into_response()
            }
            ApiError::Conflict(body) => (StatusCode::CONFLICT, Json(body)).into_response(),
            ApiError::Unprocessable(msg) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                Json(json!({ "error": msg })),
            )
                .into_response(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) | Error::Cancelled | Error::TooLarge(_) => {
                ApiError::Unprocessable(e.to_string())
            }
            other => ApiError::BadRequest(other.to_string()),
        }
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

/// Any syntax or schema problem in the body is a `400`.
fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(e.to_string()))
}

/// A puzzle with an optional partial board (`null` marks an empty cell).
#[derive(Deserialize)]
struct BoardRequest {
    #[serde(flatten)]
    puzzle: PuzzleFields,
    #[serde(default)]
    grid: Option<Vec<Vec<Option<u32>>>>,
}

#[derive(Deserialize)]
struct PuzzleFields {
    n: usize,
    rows: LabelWord,
    cols: LabelWord,
}

impl PuzzleFields {
    fn puzzle(self) -> Result<SortingPuzzle, ApiError> {
        if self.rows.len() != self.n || self.cols.len() != self.n {
            return Err(ApiError::BadRequest(format!(
                "label words must have length n = {}",
                self.n
            )));
        }
        Ok(SortingPuzzle::new(self.rows, self.cols)?)
    }
}

fn repair_json(r: &RepairResult) -> Value {
    json!({
        "cost": r.cost,
        "strategy": r.strategy,
        "target": r.target,
    })
}

async fn check(body: Bytes) -> ApiResult {
    let p: SortingPuzzle = parse(&body)?;
    Ok(Json(match forbidden_witness(&p) {
        Some(w) => json!({ "solvable": false, "witness": w }),
        None => json!({ "solvable": true }),
    }))
}

async fn solve(body: Bytes) -> ApiResult {
    let p: SortingPuzzle = parse(&body)?;
    match construct_solution(&p) {
        Ok(grid) => Ok(Json(json!({ "grid": grid }))),
        Err(Error::Unsolvable) => Err(ApiError::Conflict(json!({
            "error": "unsolvable",
            "witness": forbidden_witness(&p),
        }))),
        Err(e) => Err(e.into()),
    }
}

async fn count(config: ServiceConfig, body: Bytes) -> ApiResult {
    let p: SortingPuzzle = parse(&body)?;
    let budget = Budget::new(config.max_nodes);
    let result = tokio::task::spawn_blocking(move || count_solutions_with(&p, &budget))
        .await
        .map_err(|e| ApiError::Unprocessable(e.to_string()))??;
    Ok(Json(json!({
        "count": result.value.to_string(),
        "method": result.method,
    })))
}

async fn repair(body: Bytes) -> ApiResult {
    let p: SortingPuzzle = parse(&body)?;
    Ok(Json(repair_json(&nearest_solvable(&p))))
}

async fn validate(body: Bytes) -> ApiResult {
    let req: BoardRequest = parse(&body)?;
    let p = req.puzzle.puzzle()?;
    let board = req
        .grid
        .ok_or_else(|| ApiError::BadRequest("missing grid".into()))?;
    let violations = board_violations(&p, &board)?;
    let complete = board.iter().flatten().all(Option::is_some);
    Ok(Json(json!({
        "valid": violations.is_empty(),
        "complete": complete,
        "violations": violations,
    })))
}

async fn hint(body: Bytes) -> ApiResult {
    let req: BoardRequest = parse(&body)?;
    let p = req.puzzle.puzzle()?;
    let board = req.grid.unwrap_or_else(|| vec![vec![None; p.n()]; p.n()]);
    Ok(Json(match next_hint(&p, &board)? {
        Hint::Place {
            cell,
            value,
            forced,
        } => json!({
            "cell": cell,
            "value": value,
            "reason": if forced { "forced" } else { "first-feasible" },
        }),
        Hint::Complete => json!({ "cell": null, "value": null, "reason": "complete" }),
        Hint::NoCompletion => json!({ "cell": null, "value": null, "reason": "no-completion" }),
        Hint::Unsolvable(r) => json!({
            "cell": null,
            "value": null,
            "reason": "unsolvable",
            "repair": repair_json(&r),
        }),
    }))
}

async fn permutation_solve(body: Bytes) -> ApiResult {
    let pp: PermutationPuzzle = parse(&body)?;
    match solve_by_toposort(&build_graph_permutation(&pp)) {
        Ok(grid) => Ok(Json(json!({ "grid": grid }))),
        Err(Error::Cyclic(cycle)) => Err(ApiError::Conflict(json!({
            "error": "unsolvable",
            "cycle": cycle,
        }))),
        Err(e) => Err(e.into()),
    }
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

pub fn router(config: ServiceConfig) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/check", post(check))
        .route("/solve", post(solve))
        .route(
            "/count",
            post(move |body: Bytes| count(config.clone(), body)),
        )
        .route("/repair", post(repair))
        .route("/validate", post(validate))
        .route("/hint", post(hint))
        .route("/permutation/solve", post(permutation_solve))
        .layer(CorsLayer::permissive())
}

/// Serves on `127.0.0.1:port` until the process is stopped.
pub async fn serve(port: u16, config: ServiceConfig) -> std::io::Result<()> {
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}
