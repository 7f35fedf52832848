//! Listening-test campaigns: clip allocation to evaluator groups, rating
//! collection over HTTP, progress, results and export.

mod http;
mod model;
mod results;
mod store;

pub use http::{parse_range, router, AppContext, Unsatisfiable};
pub use model::{
    create_campaign, presentation_order, Arm, Assignment, Campaign, CampaignConfig, CampaignStatus, ClipRef, ClipView,
    Group, GroupConfig,
};
pub use results::{
    assignment, campaign_results, export_csv, progress, results_table, CampaignResults, EvaluatorProgress, GroupResult,
    Progress,
};
pub use store::{
    replay_log_file, CampaignState, Event, LogEntry, RatingSubmission, State, StateGuard, Store, StoreOptions,
    LOG_FILE, SNAPSHOT_FILE,
};

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{Category, MetricsError};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("evaluator `{evaluator}` is not assigned clip `{clip}`")]
    NotAssigned { evaluator: String, clip: String },
    #[error("score {0} outside 1..=5")]
    BadScore(i64),
    #[error("category {0} is not part of this campaign's rubric")]
    BadCategory(Category),
    #[error("campaign `{0}` is closed")]
    Closed(String),
    #[error("campaign `{0}` is not open")]
    NotOpen(String),
    #[error("a rating for this evaluator, clip and category already exists")]
    Duplicate,
    #[error("no existing rating to revise")]
    NothingToRevise,
    #[error("campaign `{0}` does not accept revisions")]
    RevisionsDisabled(String),
    #[error("insufficient clips: need {needed}, have {got}")]
    InsufficientClips { needed: usize, got: usize },
    #[error("invalid campaign config: {0}")]
    InvalidConfig(String),
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("corrupt log: {0}")]
    CorruptLog(String),
    #[error("invalid server config: {0}")]
    Config(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ServiceError {
    /// Stable machine-readable code used in HTTP error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::NotFound(_) => "not_found",
            ServiceError::NotAssigned { .. } => "not_assigned",
            ServiceError::BadScore(_) => "bad_score",
            ServiceError::BadCategory(_) => "bad_category",
            ServiceError::Closed(_) => "closed",
            ServiceError::NotOpen(_) => "not_open",
            ServiceError::Duplicate => "duplicate",
            ServiceError::NothingToRevise => "nothing_to_revise",
            ServiceError::RevisionsDisabled(_) => "revisions_disabled",
            ServiceError::InsufficientClips { .. } => "insufficient_clips",
            ServiceError::InvalidConfig(_) => "invalid_config",
            ServiceError::Conflict(_) => "conflict",
            ServiceError::CorruptLog(_) => "corrupt_log",
            ServiceError::Config(_) => "config",
            ServiceError::Metrics(_) => "metrics",
            ServiceError::Io(_) => "io",
            ServiceError::Json(_) => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ServerConfig {
    pub bind: String,
    pub port: u16,
    pub data_dir: PathBuf,
    pub audio_root: PathBuf,
    pub snapshot_every: u64,
    pub fsync: bool,
    /// Created at startup unless a campaign with the same id exists.
    pub campaigns: Vec<CampaignConfig>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            bind: "127.0.0.1".into(),
            port: 8080,
            data_dir: PathBuf::from("tinyvox-data"),
            audio_root: PathBuf::from("."),
            snapshot_every: 100,
            fsync: false,
            campaigns: Vec::new(),
        }
    }
}

impl ServerConfig {
    pub fn load(path: &Path) -> Result<Self, ServiceError> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| ServiceError::Config(format!("{}: {e}", path.display())))
    }

    pub fn addr(&self) -> Result<SocketAddr, ServiceError> {
        format!("{}:{}", self.bind, self.port)
            .parse()
            .map_err(|e| ServiceError::Config(format!("bind address: {e}")))
    }

    /// Opens the store and creates the configured campaigns that are new.
    pub fn build_context(&self) -> Result<Arc<AppContext>, ServiceError> {
        let store = Store::open(
            &self.data_dir,
            StoreOptions {
                snapshot_every: self.snapshot_every,
                fsync: self.fsync,
            },
        )?;
        for c in &self.campaigns {
            let exists = store.read().campaign(&c.id).is_ok();
            if !exists {
                store.create_campaign(c)?;
            }
        }
        Ok(Arc::new(AppContext {
            store,
            audio_root: self.audio_root.clone(),
        }))
    }
}

/// Serves until Ctrl-C.
pub async fn serve(cfg: &ServerConfig) -> Result<(), ServiceError> {
    let ctx = cfg.build_context()?;
    let listener = tokio::net::TcpListener::bind(cfg.addr()?).await?;
    axum::serve(listener, router(ctx))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
