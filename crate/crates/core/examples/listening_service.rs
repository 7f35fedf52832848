//! Drives the listening-test HTTP API in-process: create and open a
//! two-group campaign, fetch an assignment, submit ratings, then read
//! progress, results and the CSV export.
//!
//! `tinyvox serve --config server.toml` serves the same router over TCP.

use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::{Method, Request};
use serde_json::{json, Value};
use tinyvox::service::{router, AppContext, Store};
use tower::ServiceExt;

async fn call(app: &axum::Router, method: Method, uri: &str, body: Option<Value>) -> (u16, Vec<u8>) {
    let mut req = Request::builder().method(method).uri(uri);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status().as_u16();
    (status, to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec())
}

#[tokio::main]
async fn main() {
    let app = router(Arc::new(AppContext {
        store: Store::in_memory(),
        audio_root: ".".into(),
    }));

    let clips: Vec<Value> = (0..6)
        .map(|i| json!({ "id": format!("clip{i}"), "audio_path": format!("clips/{i}.wav"), "transcript": format!("sentence number {i}") }))
        .collect();
    let cfg = json!({
        "id": "pilot", "phase": 1, "seed": 11, "clips_per_group": 3,
        "groups": [{ "id": "g1", "evaluators": 2 }, { "id": "g2", "evaluators": 1 }],
        "clips": clips,
    });
    let (status, body) = call(&app, Method::POST, "/campaigns", Some(cfg)).await;
    let campaign: Value = serde_json::from_slice(&body).unwrap();
    println!("create -> {status}");
    call(&app, Method::POST, "/campaigns/pilot/open", None).await;

    let evaluator = campaign["groups"][0]["evaluator_ids"][0].as_str().unwrap().to_owned();
    let (_, body) = call(
        &app,
        Method::GET,
        &format!("/campaigns/pilot/assignment?evaluator={evaluator}"),
        None,
    )
    .await;
    let assignment: Value = serde_json::from_slice(&body).unwrap();
    for (i, clip) in assignment["pending"].as_array().unwrap().iter().enumerate() {
        for (cat, score) in [("SI", 4 + i % 2), ("VN", 3 + i % 3)] {
            let r = json!({ "campaign_id": "pilot", "evaluator_id": evaluator, "clip_id": clip["id"], "category": cat, "score": score });
            let (status, _) = call(&app, Method::POST, "/ratings", Some(r)).await;
            println!("rate {} {cat}={score} -> {status}", clip["id"]);
        }
    }

    let bad =
        json!({ "campaign_id": "pilot", "evaluator_id": evaluator, "clip_id": "clip0", "category": "SI", "score": 9 });
    let (status, body) = call(&app, Method::POST, "/ratings", Some(bad)).await;
    println!("score 9 -> {status} {}", String::from_utf8_lossy(&body));

    let (_, body) = call(&app, Method::GET, "/campaigns/pilot/progress", None).await;
    println!("progress {}", String::from_utf8_lossy(&body));
    let (_, body) = call(&app, Method::GET, "/campaigns/pilot/results", None).await;
    let results: Value = serde_json::from_slice(&body).unwrap();
    println!("overall {}", results["overall"]);
    let (_, body) = call(&app, Method::GET, "/campaigns/pilot/export.csv", None).await;
    print!("{}", String::from_utf8_lossy(&body));
}
