//! HTTP+JSON API over a single persisted household.
//!
//! Writes are serialized behind one lock and applied to a copy of the state,
//! which replaces the live state only after it has been saved. Reads work on
//! the live state under a shared lock.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{FromRequest, Request, State};
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use breakfast_core::creativity::BatchReport;
use breakfast_core::kitchen::{self, HistoryRow, ServePlan, ServeRequest};
use breakfast_core::rules::{self, RuleView};
use breakfast_core::{EpisodicEntry, Error, HouseholdState, ObjectClass, ObjectId, ObjectSpec, StateLock};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

pub const DEFAULT_PORT: u16 = 7420;

pub struct AppState {
    household: RwLock<HouseholdState>,
    store: Option<PathBuf>,
}

impl AppState {
    /// `store` is where every successful mutation is written; `None` keeps state in memory.
    pub fn new(household: HouseholdState, store: Option<PathBuf>) -> Self {
        Self {
            household: RwLock::new(household),
            store,
        }
    }

    pub fn snapshot(&self) -> HouseholdState {
        self.read(|h| h.clone())
    }

    fn read<T>(&self, f: impl FnOnce(&HouseholdState) -> T) -> T {
        let guard = self.household.read().unwrap_or_else(|e| e.into_inner());
        f(&guard)
    }

    fn mutate<T>(&self, f: impl FnOnce(&mut HouseholdState) -> breakfast_core::Result<T>) -> Result<T, ApiError> {
        let mut guard = self.household.write().unwrap_or_else(|e| e.into_inner());
        let mut next = guard.clone();
        let out = f(&mut next)?;
        if let Some(path) = &self.store {
            next.save(path)?;
        }
        *guard = next;
        Ok(out)
    }
}

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    code: String,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
}

impl ApiError {
    fn bad_request(message: String, path: Option<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            code: "BadRequest".into(),
            message,
            path,
        }
    }
}

pub fn status_for(err: &Error) -> StatusCode {
    match err {
        Error::UnknownBreakfast(_) | Error::UnknownEntry(_) => StatusCode::NOT_FOUND,
        Error::DuplicateName(_)
        | Error::DuplicateSetup(_)
        | Error::EmptyMemory
        | Error::AttemptsExhausted(_)
        | Error::Locked(_) => StatusCode::CONFLICT,
        Error::EmptyName
        | Error::UnknownObject(_)
        | Error::NoFoodItem
        | Error::DimensionMismatch { .. }
        | Error::SameItem
        | Error::ClassMismatch(..)
        | Error::NotAFood(_)
        | Error::FoodUnseen(_)
        | Error::InvalidConfig(_) => StatusCode::UNPROCESSABLE_ENTITY,
        Error::Unsatisfiable(_)
        | Error::FactorizationFailure(_)
        | Error::UnsupportedVersion(_)
        | Error::Io(_)
        | Error::Json(_) => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        Self {
            status: status_for(&err),
            code: err.code().into(),
            message: err.to_string(),
            path: None,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = self.status;
        (status, Json(serde_json::json!({ "error": self }))).into_response()
    }
}

/// JSON body whose decode errors report the offending field path.
pub struct Body<T>(pub T);

impl<S, T> FromRequest<S> for Body<T>
where
    S: Send + Sync,
    T: DeserializeOwned,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, Self::Rejection> {
        let bytes = Bytes::from_request(req, state)
            .await
            .map_err(|e| ApiError::bad_request(e.body_text(), None))?;
        let de = &mut serde_json::Deserializer::from_slice(&bytes);
        serde_path_to_error::deserialize(de).map(Body).map_err(|e| {
            let path = e.path().to_string();
            ApiError::bad_request(e.into_inner().to_string(), Some(path))
        })
    }
}

type Shared = State<Arc<AppState>>;
type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewObject {
    pub name: String,
    pub class: ObjectClass,
    #[serde(default)]
    pub graspable: bool,
}

#[derive(Debug, Serialize)]
struct Created<T> {
    id: T,
}

async fn add_object(State(app): Shared, Body(req): Body<NewObject>) -> ApiResult<(StatusCode, Json<Created<ObjectId>>)> {
    let id = app.mutate(|h| h.add_object(&req.name, req.class, req.graspable))?;
    Ok((StatusCode::CREATED, Json(Created { id })))
}

async fn list_catalog(State(app): Shared) -> Json<Vec<ObjectSpec>> {
    Json(app.read(|h| h.catalog().objects().to_vec()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewBreakfast {
    pub name: String,
    pub objects: Vec<String>,
}

#[derive(Debug, Serialize, PartialEq, Eq)]
pub struct EntryView {
    pub id: usize,
    pub name: String,
    pub objects: Vec<String>,
    pub taught_on_day: u64,
    pub eaten_in_window: u32,
}

fn entry_view(h: &HouseholdState, e: &EpisodicEntry) -> EntryView {
    EntryView {
        id: e.id.0,
        name: e.name.clone(),
        objects: h.catalog().decode(&e.lv).unwrap_or_default(),
        taught_on_day: e.taught_on_day,
        eaten_in_window: h.eaten_counts().0.get(e.id.0).copied().unwrap_or(0),
    }
}

fn teach(app: &AppState, req: NewBreakfast) -> ApiResult<(StatusCode, Json<EntryView>)> {
    let view = app.mutate(|h| {
        let id = h.teach(&req.name, &req.objects)?.id;
        Ok(entry_view(h, &h.episodic().entries()[id.0]))
    })?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn add_breakfast(State(app): Shared, Body(req): Body<NewBreakfast>) -> ApiResult<(StatusCode, Json<EntryView>)> {
    teach(&app, req)
}

async fn save_surprise(State(app): Shared, Body(req): Body<NewBreakfast>) -> ApiResult<(StatusCode, Json<EntryView>)> {
    teach(&app, req)
}

async fn list_breakfasts(State(app): Shared) -> Json<Vec<EntryView>> {
    Json(app.read(|h| h.episodic().entries().iter().map(|e| entry_view(h, e)).collect()))
}

async fn serve(State(app): Shared, Body(req): Body<ServeRequest>) -> ApiResult<Json<ServePlan>> {
    Ok(Json(app.mutate(|h| kitchen::serve(h, &req))?))
}

#[derive(Debug, Serialize)]
struct DayView {
    day: u64,
}

async fn advance_day(State(app): Shared) -> ApiResult<Json<DayView>> {
    let day = app.mutate(|h| Ok(h.advance_day()))?;
    Ok(Json(DayView { day }))
}

async fn history(State(app): Shared) -> Json<Vec<HistoryRow>> {
    Json(app.read(kitchen::history))
}

#[derive(Debug, Serialize)]
struct RulesView {
    built_from: usize,
    rules: Vec<RuleView>,
    text: String,
}

async fn get_rules(State(app): Shared) -> ApiResult<Json<RulesView>> {
    let view = app.read(|h| -> breakfast_core::Result<RulesView> {
        let kg = h.knowledge_graph()?;
        Ok(RulesView {
            built_from: kg.built_from,
            rules: rules::rule_views(kg, h.catalog()),
            text: rules::dump(kg, h.catalog()),
        })
    })?;
    Ok(Json(view))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateRequest {
    pub n: usize,
}

async fn simulate(State(app): Shared, Body(req): Body<SimulateRequest>) -> ApiResult<Json<BatchReport>> {
    let report = app.mutate(|h| {
        let stats = h.simulate_batch(req.n)?;
        BatchReport::new(&stats, h.catalog())
    })?;
    Ok(Json(report))
}

#[derive(Debug, Serialize)]
struct StatusView {
    day: u64,
    stm_days: usize,
    objects: usize,
    breakfasts: usize,
    seed: u64,
}

async fn status(State(app): Shared) -> Json<StatusView> {
    Json(app.read(|h| StatusView {
        day: h.day(),
        stm_days: h.stm().capacity_days(),
        objects: h.catalog().len(),
        breakfasts: h.episodic().len(),
        seed: h.rng().seed(),
    }))
}

async fn not_found() -> ApiError {
    ApiError {
        status: StatusCode::NOT_FOUND,
        code: "NotFound".into(),
        message: "no such route".into(),
        path: None,
    }
}

pub fn cors_layer(origin: Option<&str>) -> Result<CorsLayer, String> {
    let allow = match origin {
        None | Some("*") => AllowOrigin::from(Any),
        Some(o) => AllowOrigin::exact(HeaderValue::from_str(o).map_err(|e| format!("bad CORS origin {o:?}: {e}"))?),
    };
    Ok(CorsLayer::new().allow_origin(allow).allow_methods(Any).allow_headers(Any))
}

pub fn router(app: Arc<AppState>, cors: CorsLayer) -> Router {
    Router::new()
        .route("/status", get(status))
        .route("/catalog", get(list_catalog))
        .route("/catalog/objects", post(add_object))
        .route("/breakfasts", get(list_breakfasts).post(add_breakfast))
        .route("/serve", post(serve))
        .route("/surprise/save", post(save_surprise))
        .route("/day/advance", post(advance_day))
        .route("/history", get(history))
        .route("/rules", get(get_rules))
        .route("/simulate", post(simulate))
        .fallback(not_found)
        .with_state(app)
        .layer(cors)
}

#[derive(Clone, Debug)]
pub struct ServerConfig {
    pub addr: SocketAddr,
    pub state_path: PathBuf,
    pub cors_origin: Option<String>,
}

/// Load the household, hold its lock, and serve until Ctrl-C.
pub async fn run(config: ServerConfig) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let _lock = StateLock::acquire(&config.state_path)?;
    let household = HouseholdState::load(&config.state_path)?;
    let app = Arc::new(AppState::new(household, Some(config.state_path.clone())));
    let cors = cors_layer(config.cors_origin.as_deref())?;
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    tracing::info!(addr = %listener.local_addr()?, state = %config.state_path.display(), "serving household");
    axum::serve(listener, router(app, cors))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
