//! HTTP/JSON service under `/v1`.
//!
//! Datasets are loaded at startup and shared read-only. Each session sits
//! behind its own lock, so requests against one session are serialized
//! while different sessions proceed in parallel.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::sync::Mutex;
use xplore_core::dsl::{parse_expr, parse_script};
use xplore_core::grammar::{compare_grammars, compare_profiles, derive, Skeleton};
use xplore_core::ingest::schema_summary;
use xplore_core::ops::manifest;
use xplore_core::session::{Session, StateId};
use xplore_core::{Dataset, Error, ExplorationSet};

use crate::data::{open_grammar, open_profile};

/// What a second writer to a busy session gets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BusyPolicy {
    /// Wait for the running request to finish.
    #[default]
    Queue,
    /// Answer 409 at once.
    Reject,
}

pub const DEFAULT_PAGE: usize = 50;
const MAX_COMPARE_DEPTH: usize = 6;

pub struct AppState {
    datasets: HashMap<String, Arc<Dataset>>,
    sessions: RwLock<HashMap<u64, Arc<Mutex<Session>>>>,
    next_session: AtomicU64,
    busy: BusyPolicy,
}

impl AppState {
    pub fn new(datasets: impl IntoIterator<Item = (String, Dataset)>, busy: BusyPolicy) -> Arc<AppState> {
        Arc::new(AppState {
            datasets: datasets.into_iter().map(|(k, d)| (k, Arc::new(d))).collect(),
            sessions: RwLock::new(HashMap::new()),
            next_session: AtomicU64::new(1),
            busy,
        })
    }

    fn session(&self, id: u64) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .expect("session table lock")
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("no session {id}")))
    }

    async fn lock(&self, id: u64) -> Result<tokio::sync::OwnedMutexGuard<Session>, ApiError> {
        let s = self.session(id)?;
        match self.busy {
            BusyPolicy::Queue => Ok(s.lock_owned().await),
            BusyPolicy::Reject => s
                .try_lock_owned()
                .map_err(|_| ApiError::new(StatusCode::CONFLICT, format!("session {id} is busy"))),
        }
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let v1 = Router::new()
        .route("/health", get(|| async { Json(json!({ "ok": true })) }))
        .route("/operators", get(|| async { Json(manifest()) }))
        .route("/datasets", get(list_datasets))
        .route("/datasets/{id}/schema", get(dataset_schema))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(session_info).delete(delete_session))
        .route("/sessions/{id}/eval", post(eval))
        .route("/sessions/{id}/trail", get(trail))
        .route("/sessions/{id}/script", get(script))
        .route("/sessions/{id}/replay", post(replay))
        .route("/sessions/{id}/states/{state}/items", get(items))
        .route("/grammar/check", post(grammar_check))
        .route("/grammar/compare", post(grammar_compare))
        .route("/profiles/compare", post(profile_compare))
        .with_state(state);
    Router::new().nest("/v1", v1)
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, msg: impl Into<String>) -> ApiError {
        ApiError { status, body: json!({ "error": msg.into() }) }
    }

    fn not_found(msg: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, msg)
    }

    fn bad(msg: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, msg)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> ApiError {
        let status = match e.root() {
            Error::UnknownState(_) => StatusCode::NOT_FOUND,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError { status, body: error_json(&e) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.to_string() });
    if let Some(span) = e.span() {
        v["span"] = json!(span);
    }
    if let Error::Parse(p) = e.root() {
        v["expected"] = json!(p.expected);
    }
    v
}

async fn list_datasets(State(st): State<Arc<AppState>>) -> Json<Value> {
    let mut ids: Vec<&String> = st.datasets.keys().collect();
    ids.sort();
    Json(json!({ "datasets": ids }))
}

async fn dataset_schema(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let d = st.datasets.get(&id).ok_or_else(|| ApiError::not_found(format!("no dataset {id}")))?;
    Ok(Json(schema_summary(d)).into_response())
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct NewSession {
    dataset_id: String,
    /// A saved session script to restore.
    #[serde(default)]
    script: Option<String>,
}

async fn create_session(State(st): State<Arc<AppState>>, Json(req): Json<NewSession>) -> ApiResult<Value> {
    let d = st.datasets.get(&req.dataset_id).ok_or_else(|| ApiError::not_found(format!("no dataset {}", req.dataset_id)))?;
    let s = match &req.script {
        Some(text) => Session::load(d.clone(), text)?,
        None => Session::new(d.clone()),
    };
    let id = st.next_session.fetch_add(1, Ordering::Relaxed);
    st.sessions.write().expect("session table lock").insert(id, Arc::new(Mutex::new(s)));
    Ok(Json(json!({ "sessionId": id })))
}

async fn session_info(State(st): State<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<Value> {
    let s = st.lock(id).await?;
    Ok(Json(json!({
        "sessionId": id,
        "fingerprint": s.fingerprint(),
        "states": s.len(),
        "names": s.names().iter().collect::<std::collections::BTreeMap<_, _>>(),
    })))
}

async fn delete_session(State(st): State<Arc<AppState>>, Path(id): Path<u64>) -> Result<StatusCode, ApiError> {
    match st.sessions.write().expect("session table lock").remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::not_found(format!("no session {id}"))),
    }
}

#[derive(Deserialize)]
struct EvalRequest {
    script: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EvalResponse {
    state_ids: Vec<StateId>,
    outcomes: Vec<xplore_core::session::Outcome>,
    errors: Vec<Value>,
}

/// Statements run in order and stop at the first failure; earlier
/// statements keep their effect. A script that does not parse changes
/// nothing and answers 400.
async fn eval(State(st): State<Arc<AppState>>, Path(id): Path<u64>, Json(req): Json<EvalRequest>) -> Result<Response, ApiError> {
    let script = parse_script(&req.script).map_err(Error::from)?;
    let mut s = st.lock(id).await?;
    let mut out = EvalResponse { state_ids: Vec::new(), outcomes: Vec::new(), errors: Vec::new() };
    for stmt in &script.stmts {
        match s.eval_stmt(stmt) {
            Ok(o) => {
                out.state_ids.extend(&o.created);
                out.outcomes.push(o);
            }
            Err(e) => {
                out.errors.push(error_json(&e));
                break;
            }
        }
    }
    let status = if out.errors.is_empty() { StatusCode::OK } else { StatusCode::UNPROCESSABLE_ENTITY };
    Ok((status, Json(out)).into_response())
}

async fn trail(State(st): State<Arc<AppState>>, Path(id): Path<u64>) -> Result<Response, ApiError> {
    let s = st.lock(id).await?;
    Ok(Json(s.trail()).into_response())
}

async fn script(State(st): State<Arc<AppState>>, Path(id): Path<u64>) -> ApiResult<Value> {
    let s = st.lock(id).await?;
    Ok(Json(json!({ "script": s.save() })))
}

#[derive(Deserialize)]
struct ReplayRequest {
    states: Vec<StateId>,
    #[serde(default)]
    substitutions: Vec<(StateId, StateId)>,
}

async fn replay(State(st): State<Arc<AppState>>, Path(id): Path<u64>, Json(req): Json<ReplayRequest>) -> ApiResult<Value> {
    let mut s = st.lock(id).await?;
    let ids = s.replay(&req.states, &req.substitutions)?;
    Ok(Json(json!({ "stateIds": ids })))
}

#[derive(Deserialize)]
struct Page {
    offset: Option<usize>,
    limit: Option<usize>,
}

/// One node of a rendered set; `children` follows the set's child order.
#[derive(Serialize)]
pub struct NodeJson {
    pub id: String,
    pub kind: xplore_core::ItemKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub children: Vec<NodeJson>,
}

pub fn node_json(a: &ExplorationSet, n: usize) -> NodeJson {
    let it = a.item(n);
    NodeJson {
        id: it.id().to_string(),
        kind: it.kind(),
        label: it.label().map(str::to_string),
        children: a.children(n).iter().map(|&c| node_json(a, c)).collect(),
    }
}

/// Pages over the level-2 children of a state.
async fn items(
    State(st): State<Arc<AppState>>,
    Path((id, state)): Path<(u64, StateId)>,
    Query(page): Query<Page>,
) -> ApiResult<Value> {
    let s = st.lock(id).await?;
    let a = s.extension(state)?;
    let top = a.children(a.root());
    let offset = page.offset.unwrap_or(0);
    let limit = page.limit.unwrap_or(DEFAULT_PAGE);
    let items: Vec<NodeJson> = top.iter().skip(offset).take(limit).map(|&c| node_json(&a, c)).collect();
    Ok(Json(json!({
        "stateId": state,
        "total": top.len(),
        "offset": offset,
        "limit": limit,
        "items": items,
    })))
}

#[derive(Deserialize)]
struct GrammarCheck {
    grammar: String,
    expr: String,
}

async fn grammar_check(Json(req): Json<GrammarCheck>) -> ApiResult<Value> {
    let g = open_grammar(&req.grammar).map_err(|e| ApiError::bad(format!("{e:#}")))?;
    let e = parse_expr(&req.expr).map_err(Error::from)?;
    let sk = Skeleton::of(&e);
    let d = derive(&g, &sk);
    Ok(Json(json!({
        "grammar": g.name(),
        "skeleton": sk.to_string(),
        "accepted": d.is_some(),
        "derivation": d.map(|d| d.steps()),
        "warnings": sk.lint(),
    })))
}

#[derive(Deserialize)]
struct GrammarCompare {
    a: String,
    b: String,
    depth: Option<usize>,
}

async fn grammar_compare(Json(req): Json<GrammarCompare>) -> Result<Response, ApiError> {
    let depth = req.depth.unwrap_or(4);
    if depth > MAX_COMPARE_DEPTH {
        return Err(ApiError::bad(format!("depth is limited to {MAX_COMPARE_DEPTH}")));
    }
    let a = open_grammar(&req.a).map_err(|e| ApiError::bad(format!("{e:#}")))?;
    let b = open_grammar(&req.b).map_err(|e| ApiError::bad(format!("{e:#}")))?;
    let c = tokio::task::spawn_blocking(move || compare_grammars(&a, &b, depth))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok(Json(c).into_response())
}

#[derive(Deserialize)]
struct ProfileCompare {
    a: String,
    b: String,
}

async fn profile_compare(Json(req): Json<ProfileCompare>) -> ApiResult<Value> {
    let a = open_profile(&req.a).map_err(|e| ApiError::bad(format!("{e:#}")))?;
    let b = open_profile(&req.b).map_err(|e| ApiError::bad(format!("{e:#}")))?;
    let r = compare_profiles(&a, &b);
    Ok(Json(json!({ "report": r, "text": r.to_string() })))
}
