use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use vizadvisor_cli::api::{router, AppState};
use vizadvisor_core::engine::replay;
use vizadvisor_core::knowledge::seed_tree;

fn app() -> Router {
    router(AppState::new(Arc::new(seed_tree()), Duration::from_secs(3600)))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let res = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, value)
}

async fn new_session(app: &Router) -> String {
    let (status, body) = call(app, Method::POST, "/api/v1/sessions", None).await;
    assert_eq!(status, StatusCode::CREATED);
    body["sessionId"].as_str().unwrap().to_owned()
}

async fn answer(app: &Router, id: &str, value: &str) -> (StatusCode, Value) {
    call(app, Method::POST, &format!("/api/v1/sessions/{id}/answer"), Some(json!({"value": value}))).await
}

#[tokio::test]
async fn create_returns_root_prompt() {
    let app = app();
    let (status, body) = call(&app, Method::POST, "/api/v1/sessions", Some(json!({"treeVersion": "1.0.0"}))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["treeVersion"], "1.0.0");
    let prompt = &body["prompt"];
    assert_eq!(prompt["state"], "question");
    assert_eq!(prompt["nodeId"], "root");
    assert_eq!(prompt["text"], "Do you know what your main task is?");
    assert_eq!(prompt["allowsDontKnow"], true);
    let labels: Vec<&str> = prompt["options"].as_array().unwrap().iter().map(|o| o["label"].as_str().unwrap()).collect();
    assert_eq!(labels, vec!["Yes", "No"]);
}

#[tokio::test]
async fn version_mismatch_conflicts() {
    let (status, body) = call(&app(), Method::POST, "/api/v1/sessions", Some(json!({"treeVersion": "9.9.9"}))).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "tree-version-mismatch");
    assert_eq!(body["details"]["served"], "1.0.0");
}

#[tokio::test]
async fn invalid_answer_lists_valid_tokens() {
    let app = app();
    let id = new_session(&app).await;
    let (status, body) = answer(&app, &id, "maybe").await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "invalid-answer");
    assert_eq!(body["details"]["valid"], json!(["yes", "no", "dont-know"]));
    assert!(body["message"].as_str().unwrap().contains("maybe"));
}

#[tokio::test]
async fn full_walk_back_and_trace() {
    let app = app();
    let id = new_session(&app).await;
    for value in ["yes", "quantities"] {
        let (status, _) = answer(&app, &id, value).await;
        assert_eq!(status, StatusCode::OK);
    }
    let (status, body) = call(&app, Method::POST, &format!("/api/v1/sessions/{id}/back"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["prompt"]["nodeId"], "task-compare");

    for value in ["proportions", "yes"] {
        answer(&app, &id, value).await;
    }
    let (_, body) = call(&app, Method::GET, &format!("/api/v1/sessions/{id}"), None).await;
    assert_eq!(body["prompt"]["state"], "finished");
    assert_eq!(body["prompt"]["recommendation"]["visualization"], "Tree Map");

    let (status, trace) = call(&app, Method::GET, &format!("/api/v1/sessions/{id}/trace"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(trace["finished"], true);
    assert_eq!(trace["leafId"], "tree-map");
    let answers: Vec<&str> = trace["trace"].as_array().unwrap().iter().map(|s| s["answer"].as_str().unwrap()).collect();
    assert_eq!(answers, vec!["yes", "proportions", "yes"]);

    let (status, body) = answer(&app, &id, "yes").await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "session-finished");
}

#[tokio::test]
async fn dont_know_and_back_at_root() {
    let app = app();
    let id = new_session(&app).await;
    let (status, body) = call(&app, Method::POST, &format!("/api/v1/sessions/{id}/back"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert_eq!(body["code"], "at-root");
    let (status, body) = call(&app, Method::POST, &format!("/api/v1/sessions/{id}/dont-know"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["prompt"]["nodeId"], "data-spatial");
}

#[tokio::test]
async fn unknown_session_and_bad_body() {
    let app = app();
    let (status, body) = call(&app, Method::GET, "/api/v1/sessions/not-a-uuid", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown-session");
    let (status, _) = call(
        &app,
        Method::GET,
        "/api/v1/sessions/6b1d2c1e-2f6e-4f57-9b61-1c2b3d4e5f60/trace",
        None,
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let id = new_session(&app).await;
    let req = Request::post(format!("/api/v1/sessions/{id}/answer"))
        .body(Body::from("{not json"))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    assert_eq!(res.status(), StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, Method::POST, &format!("/api/v1/sessions/{id}/answer"), Some(json!({}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn expired_sessions_are_gone() {
    let app = router(AppState::new(Arc::new(seed_tree()), Duration::from_millis(200)));
    let id = new_session(&app).await;
    tokio::time::sleep(Duration::from_millis(400)).await;
    let (status, _) = call(&app, Method::GET, &format!("/api/v1/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn catalog_stats_and_glossary() {
    let app = app();
    let (status, list) = call(&app, Method::GET, "/api/v1/visualizations", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(list.as_array().unwrap().len() >= 29);

    let (status, pie) = call(&app, Method::GET, "/api/v1/visualizations/pie-chart", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(pie["name"], "Pie Chart");
    let (_, table) = call(&app, Method::GET, "/api/v1/visualizations/table", None).await;
    assert_eq!(table["isFallback"], true);
    let (status, body) = call(&app, Method::GET, "/api/v1/visualizations/sankey", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "unknown-visualization");

    let (_, stats) = call(&app, Method::GET, "/api/v1/tree/stats", None).await;
    assert_eq!(stats["version"], "1.0.0");
    assert!(stats["maxDepth"].as_u64().unwrap() <= 12);
    assert_eq!(stats["leaves"], 30);

    let (status, glossary) = call(&app, Method::GET, "/api/v1/glossary", None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(!glossary.as_object().unwrap().is_empty());

    let (status, body) = call(&app, Method::GET, "/api/v1/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["code"], "not-found");
}

fn multipart(parts: &[(&str, Option<&str>, &str)]) -> (String, Vec<u8>) {
    let boundary = "vizadvisor-test-boundary";
    let mut body = Vec::new();
    for (name, filename, content) in parts {
        body.extend_from_slice(format!("--{boundary}\r\n").as_bytes());
        match filename {
            Some(f) => body.extend_from_slice(
                format!("Content-Disposition: form-data; name=\"{name}\"; filename=\"{f}\"\r\nContent-Type: text/csv\r\n\r\n")
                    .as_bytes(),
            ),
            None => body.extend_from_slice(format!("Content-Disposition: form-data; name=\"{name}\"\r\n\r\n").as_bytes()),
        }
        body.extend_from_slice(content.as_bytes());
        body.extend_from_slice(b"\r\n");
    }
    body.extend_from_slice(format!("--{boundary}--\r\n").as_bytes());
    (format!("multipart/form-data; boundary={boundary}"), body)
}

async fn post_recommend(app: &Router, parts: &[(&str, Option<&str>, &str)]) -> (StatusCode, Value) {
    let (content_type, body) = multipart(parts);
    let req = Request::post("/api/v1/recommend")
        .header("content-type", content_type)
        .body(Body::from(body))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap())
}

const QUAKES: &str = "latitude,longitude,magnitude\n35.1,139.2,5.4\n-33.4,-70.6,6.1\n61.2,-149.9,4.8\n";

#[tokio::test]
async fn recommend_from_upload() {
    let app = app();
    let (status, rec) = post_recommend(
        &app,
        &[("file", Some("q.csv"), QUAKES), ("options", None, r#"{"columns": ["latitude", "longitude", "magnitude"]}"#)],
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(rec["leafId"], "proportional-symbol-map");
    assert!(rec["trace"].as_array().unwrap().iter().all(|s| s["source"] == "auto-from-profile"));

    let (status, rec) = post_recommend(
        &app,
        &[("file", Some("q.csv"), QUAKES), ("columns", None, "magnitude"), ("task", None, "analyze.distribution")],
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(rec["visualization"], "Histogram");
}

#[tokio::test]
async fn recommend_errors() {
    let app = app();
    let (status, body) = post_recommend(&app, &[("file", Some("q.csv"), QUAKES), ("columns", None, "depth")]).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "unknown-column");
    assert_eq!(body["details"]["column"], "depth");

    let (status, body) = post_recommend(&app, &[("file", Some("q.csv"), QUAKES), ("task", None, "compare")]).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "unknown-task");

    let (status, body) = post_recommend(&app, &[("file", Some("bad.csv"), "a,b\n1,2,3\n")]).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["code"], "invalid-csv");

    let (status, _) = post_recommend(&app, &[("columns", None, "a")]).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

/// Walks via HTTP and checks the engine, fed the same answers, agrees.
#[tokio::test]
async fn http_walks_match_engine_replay() {
    let app = app();
    let tree = Arc::new(seed_tree());
    let mut seed = 17u64;
    for _ in 0..40 {
        let id = new_session(&app).await;
        let mut answers: Vec<String> = Vec::new();
        loop {
            let (_, body) = call(&app, Method::GET, &format!("/api/v1/sessions/{id}"), None).await;
            let prompt = &body["prompt"];
            if prompt["state"] == "finished" {
                let engine = replay(Arc::clone(&tree), &answers).unwrap().recommendation().unwrap();
                assert_eq!(prompt["recommendation"], serde_json::to_value(&engine).unwrap());
                break;
            }
            let mut tokens: Vec<String> =
                prompt["options"].as_array().unwrap().iter().map(|o| o["value"].as_str().unwrap().to_owned()).collect();
            if prompt["allowsDontKnow"] == true {
                tokens.push("dont-know".into());
            }
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let pick = tokens[(seed >> 33) as usize % tokens.len()].clone();
            let (status, _) = answer(&app, &id, &pick).await;
            assert_eq!(status, StatusCode::OK);
            answers.push(pick);
        }
    }
}
