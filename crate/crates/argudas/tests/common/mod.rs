#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use argudas::load::Sources;
use argudas::service::{router, AppState};
use argudas_core::store::Store;
use argudas_core::InterpretationProfile;
use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use tower::ServiceExt;

pub fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data/sample")
        .join(name)
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

pub fn ontology_paths() -> Vec<PathBuf> {
    ["ontology_ts14.json", "ontology_ts15.json", "ontology_ts28.json"]
        .map(sample)
        .to_vec()
}

pub fn sources() -> Sources {
    Sources {
        ontologies: ontology_paths(),
        alignment: Some(sample("alignment.json")),
        thresholds: Some(sample("thresholds.json")),
        schemes: None,
    }
}

pub fn empty_store() -> Store {
    sources().build().unwrap()
}

pub fn sample_store() -> Store {
    let mut s = empty_store();
    argudas::load::ingest(&mut s, &sample("annotations.json")).unwrap();
    s
}

pub fn app(store: Store) -> Router {
    router(AppState::new(store, InterpretationProfile::default(), None))
}

pub async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(|b| Body::from(b.to_owned())).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

pub async fn call_json(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, serde_json::Value) {
    let (status, text) = call(app, method, uri, body).await;
    (
        status,
        serde_json::from_str(&text).unwrap_or(serde_json::Value::String(text)),
    )
}

pub fn shared(state: Arc<AppState>) -> Router {
    router(state)
}
