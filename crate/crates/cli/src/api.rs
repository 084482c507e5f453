//! HTTP/JSON session service under `/api/v1`.
//!
//! Every handler is a thin wrapper over an engine, store or catalog call.
//! Errors share one body shape: `{code, message, details}`.

use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Multipart, Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use vizadvisor_core::engine::{recommend_auto, EngineError, Prompt, Session, SessionId, TraceStep};
use vizadvisor_core::knowledge::{catalog, glossary, CatalogEntry};
use vizadvisor_core::profiler::{ingest_csv, profile, CsvOptions, ProfileError};
use vizadvisor_core::store::{SessionStore, StoreError};
use vizadvisor_core::tree::DecisionTree;

/// Uploads larger than this are rejected.
pub const MAX_UPLOAD_BYTES: usize = 32 * 1024 * 1024;

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    pub details: Value,
}

impl ApiError {
    fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            details: Value::Null,
        }
    }

    fn with_details(mut self, details: Value) -> Self {
        self.details = details;
        self
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad-request", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "unknown-session", e.to_string())
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let message = e.to_string();
        match e {
            EngineError::InvalidAnswer { node, valid, .. } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "invalid-answer", message)
                    .with_details(json!({"nodeId": node, "valid": valid}))
            }
            EngineError::DontKnowNotAllowed(node) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "dont-know-not-allowed", message)
                    .with_details(json!({"nodeId": node}))
            }
            EngineError::UnknownTask { key, valid } => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "unknown-task", message)
                    .with_details(json!({"task": key, "valid": valid}))
            }
            EngineError::Finished => ApiError::new(StatusCode::CONFLICT, "session-finished", message),
            EngineError::AtRoot => ApiError::new(StatusCode::CONFLICT, "at-root", message),
            EngineError::IncompleteVector { .. } | EngineError::Unfinished(_) => {
                ApiError::new(StatusCode::CONFLICT, "invalid-state", message)
            }
        }
    }
}

impl From<ProfileError> for ApiError {
    fn from(e: ProfileError) -> Self {
        let message = e.to_string();
        match e {
            ProfileError::UnknownColumn(name) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "unknown-column", message)
                    .with_details(json!({"column": name}))
            }
            ProfileError::EmptySelection | ProfileError::AllNull(_) | ProfileError::NotADataFeature(_) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "unusable-columns", message)
            }
            _ => ApiError::new(StatusCode::BAD_REQUEST, "invalid-csv", message),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Clone)]
pub struct AppState {
    store: Arc<SessionStore>,
    catalog: Arc<Vec<CatalogEntry>>,
}

impl AppState {
    pub fn new(tree: Arc<DecisionTree>, ttl: Duration) -> Self {
        AppState {
            catalog: Arc::new(catalog(&tree)),
            store: Arc::new(SessionStore::new(tree, ttl)),
        }
    }

    pub fn store(&self) -> &Arc<SessionStore> {
        &self.store
    }

    fn tree(&self) -> &Arc<DecisionTree> {
        self.store.tree()
    }
}

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/back", post(back))
        .route("/sessions/{id}/dont-know", post(dont_know))
        .route("/sessions/{id}/trace", get(trace))
        .route("/visualizations", get(list_visualizations))
        .route("/visualizations/{id}", get(get_visualization))
        .route("/recommend", post(recommend))
        .route("/tree", get(tree_document))
        .route("/tree/stats", get(tree_stats))
        .route("/glossary", get(get_glossary))
        .fallback(|| async { ApiError::new(StatusCode::NOT_FOUND, "not-found", "no such endpoint") });
    Router::new()
        .nest("/api/v1", api)
        .layer(DefaultBodyLimit::max(MAX_UPLOAD_BYTES))
        .with_state(state)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SessionView {
    session_id: String,
    tree_version: String,
    prompt: Prompt,
}

fn view(session: &Session) -> SessionView {
    SessionView {
        session_id: session.id().to_string(),
        tree_version: session.tree_version().to_owned(),
        prompt: session.prompt(),
    }
}

fn parse_id(raw: &str) -> ApiResult<SessionId> {
    raw.parse()
        .map_err(|_| ApiError::new(StatusCode::NOT_FOUND, "unknown-session", format!("unknown session '{raw}'")))
}

/// Parses an optional JSON body; an empty body means `T::default()`.
fn json_body<T: for<'de> Deserialize<'de> + Default>(body: &Bytes) -> ApiResult<T> {
    if body.iter().all(u8::is_ascii_whitespace) {
        return Ok(T::default());
    }
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct CreateSession {
    tree_version: Option<String>,
}

async fn create_session(State(state): State<AppState>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let request: CreateSession = json_body(&body)?;
    let served = state.tree().version();
    if let Some(wanted) = request.tree_version {
        if wanted != served {
            return Err(ApiError::new(
                StatusCode::CONFLICT,
                "tree-version-mismatch",
                format!("tree version '{wanted}' requested, '{served}' is served"),
            )
            .with_details(json!({"requested": wanted, "served": served})));
        }
    }
    let id = state.store.create();
    let view = state.store.with_session(id, |s| view(s))?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    let id = parse_id(&id)?;
    Ok(Json(state.store.with_session(id, |s| view(s))?))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnswerBody {
    value: Option<String>,
}

fn step(
    state: &AppState,
    id: &str,
    op: impl FnOnce(&mut Session) -> Result<Prompt, EngineError>,
) -> ApiResult<Json<SessionView>> {
    let id = parse_id(id)?;
    let result = state.store.with_session(id, |s| op(s).map(|_| view(s)))?;
    Ok(Json(result?))
}

async fn answer(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<SessionView>> {
    let body: AnswerBody = json_body(&body)?;
    let value = body
        .value
        .ok_or_else(|| ApiError::bad_request("body must be {\"value\": <answer token>}"))?;
    step(&state, &id, |s| s.answer(&value))
}

async fn back(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    step(&state, &id, Session::go_back)
}

async fn dont_know(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionView>> {
    step(&state, &id, Session::dont_know)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct TraceView {
    session_id: String,
    tree_version: String,
    finished: bool,
    trace: Vec<TraceStep>,
    leaf_id: Option<String>,
    visualization: Option<String>,
}

async fn trace(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<TraceView>> {
    let id = parse_id(&id)?;
    let view = state.store.with_session(id, |s| {
        let rec = s.recommendation();
        TraceView {
            session_id: s.id().to_string(),
            tree_version: s.tree_version().to_owned(),
            finished: rec.is_some(),
            trace: s.history().to_vec(),
            leaf_id: rec.as_ref().map(|r| r.leaf_id.clone()),
            visualization: rec.map(|r| r.visualization),
        }
    })?;
    Ok(Json(view))
}

async fn list_visualizations(State(state): State<AppState>) -> Json<Vec<CatalogEntry>> {
    Json(state.catalog.as_ref().clone())
}

async fn get_visualization(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<CatalogEntry>> {
    state
        .catalog
        .iter()
        .find(|e| e.id == id)
        .cloned()
        .map(Json)
        .ok_or_else(|| ApiError::new(StatusCode::NOT_FOUND, "unknown-visualization", format!("unknown visualization '{id}'")))
}

async fn tree_document(State(state): State<AppState>) -> impl IntoResponse {
    (
        [(axum::http::header::CONTENT_TYPE, "application/json")],
        state.tree().to_json(),
    )
}

async fn tree_stats(State(state): State<AppState>) -> Json<Value> {
    let tree = state.tree();
    let stats = tree.stats();
    Json(json!({
        "version": tree.version(),
        "internalNodes": stats.internal_nodes,
        "leaves": stats.leaves,
        "leafReferences": stats.leaf_references,
        "maxDepth": stats.max_depth,
        "pathCount": stats.path_count,
        "fallbackLeaf": tree.fallback_leaf(),
    }))
}

async fn get_glossary() -> Json<std::collections::BTreeMap<String, String>> {
    Json(glossary())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecommendOptions {
    #[serde(default)]
    columns: Vec<String>,
    task: Option<String>,
    delimiter: Option<char>,
}

/// Splits a `columns` form value given either as a JSON array or a comma list.
fn parse_columns(raw: &str) -> Vec<String> {
    let raw = raw.trim();
    if raw.starts_with('[') {
        if let Ok(list) = serde_json::from_str::<Vec<String>>(raw) {
            return list;
        }
    }
    raw.split(',').map(str::trim).filter(|c| !c.is_empty()).map(str::to_owned).collect()
}

/// Multipart upload: a CSV part named `file` (or `data`), plus either an
/// `options` JSON part `{columns, task?, delimiter?}` or plain `columns` /
/// `task` / `delimiter` fields.
async fn recommend(State(state): State<AppState>, mut multipart: Multipart) -> ApiResult<impl IntoResponse> {
    let mut csv: Option<Bytes> = None;
    let mut options = RecommendOptions::default();
    while let Some(field) = multipart
        .next_field()
        .await
        .map_err(|e| ApiError::bad_request(format!("malformed multipart body: {e}")))?
    {
        let name = field.name().unwrap_or_default().to_owned();
        let bytes = field
            .bytes()
            .await
            .map_err(|e| ApiError::bad_request(format!("could not read part '{name}': {e}")))?;
        let text = || String::from_utf8_lossy(&bytes).into_owned();
        match name.as_str() {
            "file" | "data" => csv = Some(bytes.clone()),
            "options" => {
                options = serde_json::from_slice(&bytes)
                    .map_err(|e| ApiError::bad_request(format!("invalid options part: {e}")))?
            }
            "columns" => options.columns = parse_columns(&text()),
            "task" => options.task = Some(text().trim().to_owned()).filter(|t| !t.is_empty()),
            "delimiter" => {
                let t = text();
                let mut chars = t.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => options.delimiter = Some(c),
                    _ => return Err(ApiError::bad_request("delimiter must be a single character")),
                }
            }
            other => return Err(ApiError::bad_request(format!("unexpected part '{other}'"))),
        }
    }
    let csv = csv.ok_or_else(|| ApiError::bad_request("missing CSV part 'file'"))?;
    let mut csv_options = CsvOptions::default();
    if let Some(d) = options.delimiter {
        csv_options.delimiter = u8::try_from(d).map_err(|_| ApiError::bad_request("delimiter must be ASCII"))?;
    }
    let dataset = ingest_csv(&csv, &csv_options)?;
    let columns: Vec<&str> = if options.columns.is_empty() {
        dataset.columns().iter().map(|c| c.name.as_str()).collect()
    } else {
        options.columns.iter().map(String::as_str).collect()
    };
    let data_profile = profile(&dataset, &columns)?;
    let rec = recommend_auto(Arc::clone(state.tree()), &data_profile, options.task.as_deref())?;
    Ok(Json(rec))
}

/// Serves until interrupted, purging idle sessions once a minute.
pub async fn serve(state: AppState, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    let store = Arc::clone(state.store());
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            store.purge_expired();
        }
    });
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
