//! HTTP+JSON front end for the campaign store.

use std::path::{Component, Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;

use super::model::{Campaign, CampaignConfig};
use super::results::{assignment, campaign_results, export_csv, progress};
use super::store::{RatingSubmission, Store};
use super::ServiceError;
use crate::metrics::bundled_rubric;

pub struct AppContext {
    pub store: Store,
    /// Base directory for relative clip audio paths.
    pub audio_root: PathBuf,
}

type Ctx = State<Arc<AppContext>>;

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let status = match &self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::NotAssigned { .. } | ServiceError::RevisionsDisabled(_) => StatusCode::FORBIDDEN,
            ServiceError::Duplicate
            | ServiceError::Closed(_)
            | ServiceError::NotOpen(_)
            | ServiceError::Conflict(_)
            | ServiceError::NothingToRevise => StatusCode::CONFLICT,
            ServiceError::BadScore(_)
            | ServiceError::BadCategory(_)
            | ServiceError::InsufficientClips { .. }
            | ServiceError::InvalidConfig(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Metrics(_)
            | ServiceError::CorruptLog(_)
            | ServiceError::Io(_)
            | ServiceError::Json(_)
            | ServiceError::Config(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let body = json!({ "error": self.code(), "message": self.to_string() });
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = Result<T, ServiceError>;

pub fn router(ctx: Arc<AppContext>) -> Router {
    Router::new()
        .route("/rubric", get(rubric))
        .route("/campaigns", post(create))
        .route("/campaigns/{id}/open", post(open))
        .route("/campaigns/{id}/close", post(close))
        .route("/campaigns/{id}/assignment", get(get_assignment))
        .route("/campaigns/{id}/progress", get(get_progress))
        .route("/campaigns/{id}/results", get(get_results))
        .route("/campaigns/{id}/export.csv", get(get_export))
        .route("/clips/{id}/audio", get(clip_audio))
        .route("/ratings", post(submit))
        .route("/ratings/revision", post(revise))
        .with_state(ctx)
}

async fn rubric() -> impl IntoResponse {
    Json(bundled_rubric())
}

async fn create(State(ctx): Ctx, Json(cfg): Json<CampaignConfig>) -> ApiResult<(StatusCode, Json<Campaign>)> {
    Ok((StatusCode::CREATED, Json(ctx.store.create_campaign(&cfg)?)))
}

fn status_of(ctx: &AppContext, id: &str) -> ApiResult<Json<serde_json::Value>> {
    let state = ctx.store.read();
    let c = &state.campaign(id)?.campaign;
    Ok(Json(json!({ "campaign_id": c.id, "status": c.status })))
}

async fn open(State(ctx): Ctx, UrlPath(id): UrlPath<String>) -> ApiResult<Json<serde_json::Value>> {
    ctx.store.open_campaign(&id)?;
    status_of(&ctx, &id)
}

async fn close(State(ctx): Ctx, UrlPath(id): UrlPath<String>) -> ApiResult<Json<serde_json::Value>> {
    ctx.store.close_campaign(&id)?;
    status_of(&ctx, &id)
}

#[derive(Deserialize)]
struct EvaluatorQuery {
    evaluator: String,
}

async fn get_assignment(
    State(ctx): Ctx,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<EvaluatorQuery>,
) -> ApiResult<impl IntoResponse> {
    Ok(Json(assignment(&ctx.store.read(), &id, &q.evaluator)?))
}

async fn get_progress(State(ctx): Ctx, UrlPath(id): UrlPath<String>) -> ApiResult<impl IntoResponse> {
    Ok(Json(progress(&ctx.store.read(), &id)?))
}

async fn get_results(State(ctx): Ctx, UrlPath(id): UrlPath<String>) -> ApiResult<impl IntoResponse> {
    Ok(Json(campaign_results(&ctx.store.read(), &id)?))
}

async fn get_export(State(ctx): Ctx, UrlPath(id): UrlPath<String>) -> ApiResult<impl IntoResponse> {
    let bytes = export_csv(&ctx.store.read(), &id)?;
    Ok(([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], bytes))
}

async fn submit(State(ctx): Ctx, Json(s): Json<RatingSubmission>) -> ApiResult<impl IntoResponse> {
    let seq = ctx.store.submit_rating(s)?;
    Ok((StatusCode::CREATED, Json(json!({ "seq": seq }))))
}

async fn revise(State(ctx): Ctx, Json(s): Json<RatingSubmission>) -> ApiResult<impl IntoResponse> {
    let seq = ctx.store.revise_rating(s)?;
    Ok(Json(json!({ "seq": seq })))
}

fn resolve_audio(root: &Path, audio_path: &str) -> Option<PathBuf> {
    let p = Path::new(audio_path);
    if p.components().any(|c| matches!(c, Component::ParentDir)) {
        return None;
    }
    Some(if p.is_absolute() { p.to_owned() } else { root.join(p) })
}

/// The requested range lies outside the resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unsatisfiable;

/// A single `bytes=` range resolved against `len`, as an inclusive pair.
/// `Ok(None)` means the header is absent or not understood and the whole
/// body should be sent.
pub fn parse_range(value: Option<&str>, len: u64) -> Result<Option<(u64, u64)>, Unsatisfiable> {
    let Some(spec) = value.and_then(|v| v.trim().strip_prefix("bytes=")) else {
        return Ok(None);
    };
    if spec.contains(',') {
        return Ok(None);
    }
    let Some((a, b)) = spec.split_once('-') else {
        return Ok(None);
    };
    let (a, b) = (a.trim(), b.trim());
    let range = match (a.is_empty(), b.is_empty()) {
        (true, true) => return Ok(None),
        (true, false) => {
            let Ok(n) = b.parse::<u64>() else { return Ok(None) };
            if n == 0 || len == 0 {
                return Err(Unsatisfiable);
            }
            (len.saturating_sub(n), len - 1)
        }
        (false, _) => {
            let Ok(start) = a.parse::<u64>() else { return Ok(None) };
            let end = if b.is_empty() {
                len.saturating_sub(1)
            } else {
                match b.parse::<u64>() {
                    Ok(e) if e >= start => e.min(len.saturating_sub(1)),
                    _ => return Ok(None),
                }
            };
            if start >= len {
                return Err(Unsatisfiable);
            }
            (start, end)
        }
    };
    Ok(Some(range))
}

async fn clip_audio(State(ctx): Ctx, UrlPath(id): UrlPath<String>, headers: HeaderMap) -> ApiResult<Response> {
    let audio_path = {
        let state = ctx.store.read();
        let found = state
            .campaigns()
            .find_map(|cs| cs.campaign.clip(&id).map(|c| c.audio_path.clone()));
        found.ok_or_else(|| ServiceError::NotFound(format!("clip `{id}`")))?
    };
    let path = resolve_audio(&ctx.audio_root, &audio_path)
        .ok_or_else(|| ServiceError::NotFound(format!("audio for clip `{id}`")))?;
    let bytes = tokio::fs::read(&path)
        .await
        .map_err(|_| ServiceError::NotFound(format!("audio for clip `{id}`")))?;
    let len = bytes.len() as u64;
    let range = headers.get(header::RANGE).and_then(|v| v.to_str().ok());
    let response = match parse_range(range, len) {
        Ok(None) => Response::builder()
            .status(StatusCode::OK)
            .header(header::CONTENT_TYPE, "audio/wav")
            .header(header::ACCEPT_RANGES, "bytes")
            .header(header::CONTENT_LENGTH, len)
            .body(Body::from(bytes)),
        Ok(Some((start, end))) => {
            let part = bytes[start as usize..=end as usize].to_vec();
            Response::builder()
                .status(StatusCode::PARTIAL_CONTENT)
                .header(header::CONTENT_TYPE, "audio/wav")
                .header(header::ACCEPT_RANGES, "bytes")
                .header(header::CONTENT_RANGE, format!("bytes {start}-{end}/{len}"))
                .header(header::CONTENT_LENGTH, part.len())
                .body(Body::from(part))
        }
        Err(Unsatisfiable) => Response::builder()
            .status(StatusCode::RANGE_NOT_SATISFIABLE)
            .header(header::CONTENT_RANGE, format!("bytes */{len}"))
            .body(Body::empty()),
    };
    Ok(response.expect("static response parts are valid"))
}
