#![allow(dead_code)]

use axum::body::{to_bytes, Body};
use axum::http::{Method, Request};
use axum::Router;
use serde_json::{json, Value};
use tower::ServiceExt;

pub struct Reply {
    pub status: u16,
    pub headers: axum::http::HeaderMap,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.body)))
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>, headers: &[(&str, &str)]) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    for (k, v) in headers {
        req = req.header(*k, *v);
    }
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = app.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status().as_u16();
    let headers = resp.headers().clone();
    let body = to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec();
    Reply { status, headers, body }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    call(app, Method::GET, uri, None, &[]).await
}

pub async fn post(app: &Router, uri: &str, body: Value) -> Reply {
    call(app, Method::POST, uri, Some(body), &[]).await
}

/// `groups` groups of `evaluators` evaluators, `per_group` clips each,
/// drawn from a pool of `pool` clips.
pub fn campaign_json(id: &str, phase: u8, groups: usize, evaluators: usize, per_group: usize, pool: usize) -> Value {
    let clips: Vec<Value> = (0..pool)
        .map(|i| json!({ "id": format!("{id}-c{i:03}"), "audio_path": format!("c{i:03}.wav"), "transcript": format!("sentence {i}") }))
        .collect();
    let groups: Vec<Value> = (0..groups)
        .map(|g| json!({ "id": format!("g{g}"), "evaluators": evaluators }))
        .collect();
    json!({ "id": id, "phase": phase, "seed": 5, "clips_per_group": per_group, "groups": groups, "clips": clips })
}

pub fn rating(campaign: &str, evaluator: &str, clip: &str, category: &str, score: i64) -> Value {
    json!({
        "campaign_id": campaign, "evaluator_id": evaluator, "clip_id": clip,
        "category": category, "score": score, "timestamp": "2024-01-01T00:00:00Z"
    })
}
