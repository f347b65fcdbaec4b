//! JSON-over-HTTP facade on a [`Store`].
//!
//! Readers take the current store generation and work on it without
//! holding any lock; writers build a modified copy and swap it in, so a
//! request never sees a half-applied ingest or score.

use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use argudas_core::argumentation::{Argument, AttributeReport, Label, SummaryRow};
use argudas_core::ingest::IngestReport;
use argudas_core::model::ModelError;
use argudas_core::schemes::{Confidence, ExpertScore, Scheme, SchemeCatalog, SchemeError};
use argudas_core::store::{Store, StoreError, StoreTotals};
use argudas_core::{GeneId, InterpretationProfile, Mode, Query, Subject, TheilerStage, TissueId};
use axum::body::Bytes;
use axum::extract::{Path, Query as UrlQuery, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};

pub struct AppState {
    store: RwLock<Arc<Store>>,
    writer: Mutex<()>,
    defaults: InterpretationProfile,
    snapshot: Option<PathBuf>,
}

impl AppState {
    /// `snapshot`, when set, is rewritten after every successful change.
    pub fn new(store: Store, defaults: InterpretationProfile, snapshot: Option<PathBuf>) -> Arc<Self> {
        Arc::new(Self {
            store: RwLock::new(Arc::new(store)),
            writer: Mutex::new(()),
            defaults,
            snapshot,
        })
    }

    pub fn current(&self) -> Arc<Store> {
        self.store.read().expect("store lock").clone()
    }

    fn update<T>(&self, change: impl FnOnce(&mut Store) -> Result<T, ApiError>) -> Result<T, ApiError> {
        let _guard = self.writer.lock().expect("writer lock");
        let mut next = (*self.current()).clone();
        let out = change(&mut next)?;
        if let Some(path) = &self.snapshot {
            next.save(path)
                .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "SnapshotWrite", e))?;
        }
        *self.store.write().expect("store lock") = Arc::new(next);
        Ok(out)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/annotations", get(annotations))
        .route("/api/argue", post(argue))
        .route("/api/schemes", get(schemes))
        .route("/api/schemes/report", get(report))
        .route("/api/schemes/{id}/scores", post(score))
        .route("/api/ontologies", get(ontologies))
        .route("/api/ontology/{stage}", get(ontology))
        .route("/api/ingest", post(ingest))
        .with_state(state)
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: &'static str,
    message: String,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, error: &'static str, message: impl ToString) -> Self {
        Self {
            status,
            body: ErrorBody {
                error,
                message: message.to_string(),
            },
        }
    }

    fn bad_request(error: &'static str, message: impl ToString) -> Self {
        Self::new(StatusCode::BAD_REQUEST, error, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<ModelError> for ApiError {
    fn from(e: ModelError) -> Self {
        let kind = match e {
            ModelError::BadStage(_) => "BadStage",
            ModelError::EmptyIdentifier(_) => "EmptyIdentifier",
            ModelError::InvertedInterval { .. } => "InvertedInterval",
            ModelError::UnknownResource(_) => "UnknownResource",
            ModelError::UnknownMode(_) => "UnknownMode",
            ModelError::MissingFilter => "MissingFilter",
        };
        Self::bad_request(kind, e)
    }
}

impl From<SchemeError> for ApiError {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::UnknownScheme(_) => Self::new(StatusCode::NOT_FOUND, "UnknownScheme", e),
            SchemeError::InvalidScore(_) => Self::bad_request("InvalidScore", e),
            _ => Self::bad_request("SchemeError", e),
        }
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn parse_stage(raw: &str) -> Result<TheilerStage, ApiError> {
    let n: i64 = raw
        .trim()
        .parse()
        .map_err(|_| ApiError::bad_request("BadStage", format!("stage {raw:?} is not an integer")))?;
    Ok(TheilerStage::new(n)?)
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request("MalformedBody", e))
}

fn nonempty(raw: Option<String>) -> Option<String> {
    raw.filter(|s| !s.trim().is_empty())
}

#[derive(Debug, Deserialize)]
struct AnnotationParams {
    gene: Option<String>,
    tissue: Option<String>,
    stage: Option<String>,
}

#[derive(Debug, Serialize)]
struct AnnotationsResponse {
    rows: Vec<SummaryRow>,
    totals: StoreTotals,
}

async fn annotations(
    State(state): State<Arc<AppState>>,
    UrlQuery(p): UrlQuery<AnnotationParams>,
) -> ApiResult<AnnotationsResponse> {
    let stage = nonempty(p.stage).map(|s| parse_stage(&s)).transpose()?;
    let gene = nonempty(p.gene).map(GeneId::new).transpose()?;
    let tissue = nonempty(p.tissue).map(TissueId::new).transpose()?;
    let query = Query::new(gene, tissue, stage, state.defaults)?;
    let store = state.current();
    Ok(Json(AnnotationsResponse {
        rows: store.summary(&query),
        totals: store.totals(),
    }))
}

#[derive(Debug, Deserialize)]
struct ArgueRequest {
    gene: String,
    tissue: String,
    stage: i64,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    prefer_direct: Option<bool>,
    #[serde(default)]
    legacy_evaluation: bool,
    #[serde(default)]
    expanded: bool,
}

#[derive(Debug, Serialize)]
struct LabelledArgument {
    #[serde(flatten)]
    argument: Argument,
    status: Label,
}

#[derive(Debug, Serialize)]
struct ArgueResponse {
    subject: Subject,
    #[serde(flatten)]
    report: AttributeReport,
    argument_count: usize,
    attack_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    arguments: Option<Vec<LabelledArgument>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    attacks: Option<Vec<(usize, usize)>>,
}

async fn argue(State(state): State<Arc<AppState>>, body: Bytes) -> Result<Response, ApiError> {
    let req: ArgueRequest = parse_body(&body)?;
    let mode = match req.mode.as_deref() {
        Some(m) => m.parse::<Mode>()?,
        None => state.defaults.mode,
    };
    let profile = InterpretationProfile::new(mode, req.prefer_direct.unwrap_or(state.defaults.prefer_direct));
    let subject = Subject {
        gene: GeneId::new(req.gene)?,
        tissue: TissueId::new(req.tissue)?,
        stage: TheilerStage::new(req.stage)?,
    };
    let store = state.current();
    store
        .check_subject(&subject.tissue, subject.stage)
        .map_err(|e| match e {
            StoreError::UnknownSubject { .. } => ApiError::new(StatusCode::NOT_FOUND, "UnknownTissue", e),
            other => ApiError::bad_request("StoreError", other),
        })?;

    let outcome = store.argue(&Query::for_subject(&subject, profile), req.legacy_evaluation);
    let report = outcome.report;
    let (argument_count, attack_count) = (outcome.arguments.len(), outcome.attacks.len());
    let (arguments, attacks) = match outcome.labels {
        Some(labels) => (
            Some(
                outcome
                    .arguments
                    .into_iter()
                    .map(|a| LabelledArgument {
                        status: labels[&a.id],
                        argument: a,
                    })
                    .collect(),
            ),
            Some(outcome.attacks),
        ),
        None => (None, None),
    };
    let mut value = serde_json::to_value(ArgueResponse {
        subject,
        report,
        argument_count,
        attack_count,
        arguments,
        attacks,
    })
    .expect("argue response serialises");
    if !req.expanded {
        value.as_object_mut().expect("object").remove("annotation_layer");
    }
    Ok(Json(value).into_response())
}

#[derive(Debug, Serialize)]
struct SchemeView<'a> {
    #[serde(flatten)]
    scheme: &'a Scheme,
    confidence: Option<Confidence>,
}

fn scheme_view(scheme: &Scheme) -> SchemeView<'_> {
    SchemeView {
        scheme,
        confidence: scheme.confidence().ok(),
    }
}

async fn schemes(State(state): State<Arc<AppState>>) -> Json<serde_json::Value> {
    let store = state.current();
    let views: Vec<SchemeView> = store.catalog().schemes().iter().map(scheme_view).collect();
    Json(serde_json::to_value(views).expect("schemes serialise"))
}

#[derive(Debug, Deserialize)]
struct ScoreRequest {
    expert: String,
    score: String,
}

async fn score(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<serde_json::Value>, ApiError> {
    let req: ScoreRequest = parse_body(&body)?;
    if req.expert.trim().is_empty() {
        return Err(ApiError::bad_request("EmptyExpert", "expert name is empty"));
    }
    let value: ExpertScore = req.score.parse()?;
    let scheme = state.update(|store| {
        store.record_score(&id, &req.expert, value)?;
        Ok(store.catalog().get(&id).expect("scheme just scored").clone())
    })?;
    Ok(Json(
        serde_json::to_value(scheme_view(&scheme)).expect("scheme serialises"),
    ))
}

/// Both experts when the catalog has exactly two; otherwise they must be named.
pub fn default_experts(catalog: &SchemeCatalog) -> Option<(String, String)> {
    let experts: Vec<&str> = catalog.experts().into_iter().collect();
    match experts[..] {
        [a, b] => Some((a.to_owned(), b.to_owned())),
        _ => None,
    }
}

#[derive(Debug, Deserialize)]
struct ReportParams {
    a: Option<String>,
    b: Option<String>,
}

#[derive(Debug, Serialize)]
struct ReportResponse {
    experts: [String; 2],
    exact: usize,
    similar: usize,
    disagree: usize,
    total: usize,
    broad_agreement_percent: f64,
    summary: String,
}

async fn report(State(state): State<Arc<AppState>>, UrlQuery(p): UrlQuery<ReportParams>) -> ApiResult<ReportResponse> {
    let store = state.current();
    let (a, b) = match (nonempty(p.a), nonempty(p.b)) {
        (Some(a), Some(b)) => (a, b),
        (None, None) => default_experts(store.catalog()).ok_or_else(|| {
            ApiError::bad_request("MissingExperts", "name the two experts to compare with ?a=..&b=..")
        })?,
        _ => return Err(ApiError::bad_request("MissingExperts", "both a and b are required")),
    };
    let r = store.catalog().agreement_report(&a, &b)?;
    Ok(Json(ReportResponse {
        summary: r.to_string(),
        broad_agreement_percent: (r.broad_percent() * 10.0).round() / 10.0,
        experts: [a, b],
        exact: r.exact,
        similar: r.similar,
        disagree: r.disagree,
        total: r.total,
    }))
}

#[derive(Debug, Serialize)]
struct OntologyInfo {
    stage: TheilerStage,
    nodes: usize,
    edges: usize,
}

async fn ontologies(State(state): State<Arc<AppState>>) -> Json<Vec<OntologyInfo>> {
    let store = state.current();
    Json(
        store
            .ontologies()
            .map(|g| OntologyInfo {
                stage: g.stage(),
                nodes: g.node_count(),
                edges: g.edge_count(),
            })
            .collect(),
    )
}

async fn ontology(State(state): State<Arc<AppState>>, Path(stage): Path<String>) -> Result<Response, ApiError> {
    let stage = parse_stage(&stage)?;
    let store = state.current();
    let graph = store.ontology(stage).ok_or_else(|| {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "UnknownStage",
            format!("no anatomy loaded for {stage}"),
        )
    })?;
    Ok(Json(graph.to_document()).into_response())
}

async fn ingest(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<IngestReport> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::bad_request("MalformedBody", e))?;
    let report = state.update(|store| {
        store.ingest(text).map_err(|e| match e {
            StoreError::Ingest(_) => ApiError::bad_request("FileMalformed", e),
            other => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "IngestFailed", other),
        })
    })?;
    Ok(Json(report))
}
