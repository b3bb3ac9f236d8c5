//! HTTP endpoints over a [`SessionRegistry`].
//!
//! - `POST /session` opens a session from an [`OpenRequest`].
//! - `POST /session/{id}/move` submits a [`MoveRequest`].
//! - `GET /session/{id}/state`, `/hierarchy` and `/transcript` read it.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::{json, Value};

use crate::error::ProtocolError;
use crate::moves::MoveRequest;
use crate::service::{OpenRequest, SessionRegistry};
use crate::transcript;
use crate::view::{Delta, HierarchyView, MoveOutcome, StateView};

pub struct ApiError(pub ProtocolError);

impl From<ProtocolError> for ApiError {
    fn from(e: ProtocolError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            ProtocolError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ProtocolError::PhaseViolation { .. }
            | ProtocolError::Finished(_)
            | ProtocolError::ProposalOpen(_)
            | ProtocolError::NotIntensional => StatusCode::CONFLICT,
            ProtocolError::RoleViolation { .. } => StatusCode::FORBIDDEN,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        (status, Json(json!({ "error": self.0.to_string() }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;
type Shared = Arc<SessionRegistry>;

fn value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("responses serialize")
}

async fn open_session(
    State(reg): State<Shared>,
    Json(request): Json<OpenRequest>,
) -> ApiResult<(StatusCode, Json<Value>)> {
    let session = request.open()?;
    let state = value(&StateView::of(&session));
    let id = reg.insert(session);
    Ok((StatusCode::CREATED, Json(json!({ "id": id, "state": state }))))
}

async fn submit_move(
    State(reg): State<Shared>,
    Path(id): Path<String>,
    Json(request): Json<MoveRequest>,
) -> ApiResult<Json<Value>> {
    let session = reg.get(&id)?;
    let mut s = session.lock().expect("session lock");
    let (committed, events) = s.submit(request)?;
    Ok(Json(value(&MoveOutcome {
        committed,
        events,
        delta: Delta::of(&s),
    })))
}

async fn state(State(reg): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let session = reg.get(&id)?;
    let s = session.lock().expect("session lock");
    Ok(Json(value(&StateView::of(&s))))
}

async fn hierarchy(State(reg): State<Shared>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let session = reg.get(&id)?;
    let s = session.lock().expect("session lock");
    Ok(Json(value(&HierarchyView::of(&s)?)))
}

async fn transcript_text(
    State(reg): State<Shared>,
    Path(id): Path<String>,
) -> ApiResult<impl IntoResponse> {
    let session = reg.get(&id)?;
    let s = session.lock().expect("session lock");
    Ok((
        [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
        transcript::save(&s),
    ))
}

pub fn router(registry: Shared) -> Router {
    Router::new()
        .route("/session", post(open_session))
        .route("/session/{id}/move", post(submit_move))
        .route("/session/{id}/state", get(state))
        .route("/session/{id}/hierarchy", get(hierarchy))
        .route("/session/{id}/transcript", get(transcript_text))
        .with_state(registry)
}

/// Serves the endpoints until the process is stopped.
pub async fn serve(addr: SocketAddr, registry: Shared) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(registry)).await
}
