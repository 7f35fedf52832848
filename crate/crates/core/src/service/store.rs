//! Durable campaign state: an append-only JSON-lines event log, periodic
//! snapshots, and the in-memory state obtained by folding the log.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{RwLock, RwLockReadGuard};

use serde::{Deserialize, Serialize};

use super::model::{create_campaign, Campaign, CampaignConfig, CampaignStatus};
use super::ServiceError;
use crate::metrics::{Category, MetricsError, Rating};

pub const LOG_FILE: &str = "events.jsonl";
pub const SNAPSHOT_FILE: &str = "snapshot.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    CampaignCreated { campaign: Campaign },
    CampaignOpened { campaign_id: String },
    CampaignClosed { campaign_id: String },
    RatingSubmitted { campaign_id: String, rating: Rating },
    RatingRevised { campaign_id: String, rating: Rating },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub seq: u64,
    #[serde(flatten)]
    pub event: Event,
}

/// A rating as posted by a client. The server stamps the time when
/// `timestamp` is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingSubmission {
    pub campaign_id: String,
    pub evaluator_id: String,
    pub clip_id: String,
    pub category: Category,
    pub score: i64,
    #[serde(default)]
    pub timestamp: Option<String>,
}

type RatingKey = (String, String, Category);

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignState {
    pub campaign: Campaign,
    ratings: BTreeMap<RatingKey, Rating>,
    /// Accepted revisions; the log keeps every superseded value.
    pub revisions: usize,
}

impl CampaignState {
    /// Current ratings ordered by evaluator, clip and category.
    pub fn ratings(&self) -> impl Iterator<Item = &Rating> {
        self.ratings.values()
    }

    pub fn rating_count(&self) -> usize {
        self.ratings.len()
    }

    pub fn has_rating(&self, evaluator: &str, clip: &str, category: Category) -> bool {
        self.ratings
            .contains_key(&(evaluator.to_owned(), clip.to_owned(), category))
    }
}

/// Everything derivable from the log.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct State {
    pub seq: u64,
    campaigns: BTreeMap<String, CampaignState>,
}

impl State {
    pub fn campaign(&self, id: &str) -> Result<&CampaignState, ServiceError> {
        self.campaigns
            .get(id)
            .ok_or_else(|| ServiceError::NotFound(format!("campaign `{id}`")))
    }

    pub fn campaigns(&self) -> impl Iterator<Item = &CampaignState> {
        self.campaigns.values()
    }

    fn validate_rating(&self, campaign_id: &str, r: &Rating, revision: bool) -> Result<(), ServiceError> {
        let cs = self.campaign(campaign_id)?;
        let c = &cs.campaign;
        match c.status {
            CampaignStatus::Open => {}
            CampaignStatus::Draft => return Err(ServiceError::NotOpen(c.id.clone())),
            CampaignStatus::Closed => return Err(ServiceError::Closed(c.id.clone())),
        }
        if !c.rubric.contains(&r.category) {
            return Err(ServiceError::BadCategory(r.category));
        }
        r.validate().map_err(|e| match e {
            MetricsError::BadScore(s) => ServiceError::BadScore(s),
            other => ServiceError::Metrics(other),
        })?;
        let assigned = c
            .group_of_clip(&r.clip_id)
            .is_some_and(|g| g.evaluator_ids.contains(&r.evaluator_id));
        if !assigned {
            return Err(ServiceError::NotAssigned {
                evaluator: r.evaluator_id.clone(),
                clip: r.clip_id.clone(),
            });
        }
        let exists = cs.has_rating(&r.evaluator_id, &r.clip_id, r.category);
        match (revision, exists) {
            (false, true) => Err(ServiceError::Duplicate),
            (true, _) if !c.allow_revisions => Err(ServiceError::RevisionsDisabled(c.id.clone())),
            (true, false) => Err(ServiceError::NothingToRevise),
            _ => Ok(()),
        }
    }

    /// Checks that `event` is admissible in the current state.
    pub fn validate(&self, event: &Event) -> Result<(), ServiceError> {
        match event {
            Event::CampaignCreated { campaign } => {
                if self.campaigns.contains_key(&campaign.id) {
                    return Err(ServiceError::Conflict(format!("campaign `{}` exists", campaign.id)));
                }
                Ok(())
            }
            Event::CampaignOpened { campaign_id } => {
                let c = &self.campaign(campaign_id)?.campaign;
                match c.status {
                    CampaignStatus::Draft => Ok(()),
                    CampaignStatus::Open => Err(ServiceError::Conflict(format!(
                        "campaign `{campaign_id}` is already open"
                    ))),
                    CampaignStatus::Closed => Err(ServiceError::Closed(campaign_id.clone())),
                }
            }
            Event::CampaignClosed { campaign_id } => match self.campaign(campaign_id)?.campaign.status {
                CampaignStatus::Closed => Err(ServiceError::Closed(campaign_id.clone())),
                _ => Ok(()),
            },
            Event::RatingSubmitted { campaign_id, rating } => self.validate_rating(campaign_id, rating, false),
            Event::RatingRevised { campaign_id, rating } => self.validate_rating(campaign_id, rating, true),
        }
    }

    /// Applies a validated entry.
    fn apply(&mut self, entry: LogEntry) {
        self.seq = entry.seq;
        match entry.event {
            Event::CampaignCreated { campaign } => {
                self.campaigns.insert(
                    campaign.id.clone(),
                    CampaignState {
                        campaign,
                        ratings: BTreeMap::new(),
                        revisions: 0,
                    },
                );
            }
            Event::CampaignOpened { campaign_id } => self.set_status(&campaign_id, CampaignStatus::Open),
            Event::CampaignClosed { campaign_id } => self.set_status(&campaign_id, CampaignStatus::Closed),
            Event::RatingSubmitted { campaign_id, rating } | Event::RatingRevised { campaign_id, rating } => {
                let cs = self.campaigns.get_mut(&campaign_id).expect("validated");
                let key = (rating.evaluator_id.clone(), rating.clip_id.clone(), rating.category);
                if cs.ratings.insert(key, rating).is_some() {
                    cs.revisions += 1;
                }
            }
        }
    }

    fn set_status(&mut self, id: &str, status: CampaignStatus) {
        self.campaigns.get_mut(id).expect("validated").campaign.status = status;
    }

    /// Validates and applies one logged entry during replay.
    pub fn fold(&mut self, entry: LogEntry) -> Result<(), ServiceError> {
        if entry.seq != self.seq + 1 {
            return Err(ServiceError::CorruptLog(format!(
                "expected seq {}, found {}",
                self.seq + 1,
                entry.seq
            )));
        }
        self.validate(&entry.event)
            .map_err(|e| ServiceError::CorruptLog(format!("entry {}: {e}", entry.seq)))?;
        self.apply(entry);
        Ok(())
    }

    /// Folds a complete log from the empty state.
    pub fn replay<R: BufRead>(reader: R) -> Result<State, ServiceError> {
        let mut state = State::default();
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: LogEntry =
                serde_json::from_str(&line).map_err(|e| ServiceError::CorruptLog(format!("line {}: {e}", n + 1)))?;
            state.fold(entry)?;
        }
        Ok(state)
    }
}

#[derive(Serialize, Deserialize)]
struct SnapshotCampaign {
    campaign: Campaign,
    ratings: Vec<Rating>,
    revisions: usize,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    seq: u64,
    campaigns: Vec<SnapshotCampaign>,
}

impl From<&State> for Snapshot {
    fn from(s: &State) -> Self {
        Snapshot {
            seq: s.seq,
            campaigns: s
                .campaigns
                .values()
                .map(|c| SnapshotCampaign {
                    campaign: c.campaign.clone(),
                    ratings: c.ratings.values().cloned().collect(),
                    revisions: c.revisions,
                })
                .collect(),
        }
    }
}

impl From<Snapshot> for State {
    fn from(s: Snapshot) -> Self {
        State {
            seq: s.seq,
            campaigns: s
                .campaigns
                .into_iter()
                .map(|c| {
                    let ratings = c
                        .ratings
                        .into_iter()
                        .map(|r| ((r.evaluator_id.clone(), r.clip_id.clone(), r.category), r))
                        .collect();
                    (
                        c.campaign.id.clone(),
                        CampaignState {
                            campaign: c.campaign,
                            ratings,
                            revisions: c.revisions,
                        },
                    )
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreOptions {
    /// Write a snapshot after every this many events; 0 disables.
    pub snapshot_every: u64,
    /// `fsync` the log after each append.
    pub fsync: bool,
}

impl Default for StoreOptions {
    fn default() -> Self {
        Self {
            snapshot_every: 100,
            fsync: false,
        }
    }
}

struct Persistence {
    dir: PathBuf,
    log: File,
    options: StoreOptions,
}

type Clock = Box<dyn Fn() -> String + Send + Sync>;

fn utc_now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Campaign store. Writers serialize on one lock that covers validation,
/// the log append and the state update; readers share a consistent view.
pub struct Store {
    inner: RwLock<(State, Option<Persistence>)>,
    clock: Clock,
}

impl Store {
    pub fn in_memory() -> Self {
        Self {
            inner: RwLock::new((State::default(), None)),
            clock: Box::new(utc_now),
        }
    }

    /// Opens or creates a store in `dir`: loads the snapshot if present and
    /// replays the newer log entries. A torn final line (no newline) is
    /// truncated away.
    pub fn open(dir: &Path, options: StoreOptions) -> Result<Self, ServiceError> {
        fs::create_dir_all(dir)?;
        let snap_path = dir.join(SNAPSHOT_FILE);
        let mut state = if snap_path.exists() {
            let snap: Snapshot = serde_json::from_slice(&fs::read(&snap_path)?)
                .map_err(|e| ServiceError::CorruptLog(format!("snapshot: {e}")))?;
            State::from(snap)
        } else {
            State::default()
        };

        let log_path = dir.join(LOG_FILE);
        let mut text = String::new();
        if log_path.exists() {
            File::open(&log_path)?.read_to_string(&mut text)?;
        }
        let complete = text.rfind('\n').map_or(0, |i| i + 1);
        for (n, line) in text[..complete].lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let entry: LogEntry =
                serde_json::from_str(line).map_err(|e| ServiceError::CorruptLog(format!("line {}: {e}", n + 1)))?;
            if entry.seq > state.seq {
                state.fold(entry)?;
            }
        }
        let log = OpenOptions::new().create(true).append(true).open(&log_path)?;
        if complete < text.len() {
            log.set_len(complete as u64)?;
        }
        Ok(Self {
            inner: RwLock::new((
                state,
                Some(Persistence {
                    dir: dir.to_owned(),
                    log,
                    options,
                }),
            )),
            clock: Box::new(utc_now),
        })
    }

    pub fn with_clock(mut self, clock: impl Fn() -> String + Send + Sync + 'static) -> Self {
        self.clock = Box::new(clock);
        self
    }

    pub fn read(&self) -> StateGuard<'_> {
        StateGuard(self.inner.read().unwrap_or_else(|e| e.into_inner()))
    }

    /// Validates, logs and applies one event; returns its sequence number.
    pub fn append(&self, event: Event) -> Result<u64, ServiceError> {
        let mut guard = self.inner.write().unwrap_or_else(|e| e.into_inner());
        let (state, persistence) = &mut *guard;
        state.validate(&event)?;
        let entry = LogEntry {
            seq: state.seq + 1,
            event,
        };
        if let Some(p) = persistence {
            let mut line = serde_json::to_vec(&entry)?;
            line.push(b'\n');
            p.log.write_all(&line)?;
            if p.options.fsync {
                p.log.sync_data()?;
            }
        }
        let seq = entry.seq;
        state.apply(entry);
        if let Some(p) = persistence {
            if p.options.snapshot_every > 0 && seq.is_multiple_of(p.options.snapshot_every) {
                write_snapshot(&p.dir, state)?;
            }
        }
        Ok(seq)
    }

    pub fn create_campaign(&self, cfg: &CampaignConfig) -> Result<Campaign, ServiceError> {
        let campaign = create_campaign(cfg)?;
        self.append(Event::CampaignCreated {
            campaign: campaign.clone(),
        })?;
        Ok(campaign)
    }

    pub fn open_campaign(&self, id: &str) -> Result<u64, ServiceError> {
        self.append(Event::CampaignOpened {
            campaign_id: id.to_owned(),
        })
    }

    pub fn close_campaign(&self, id: &str) -> Result<u64, ServiceError> {
        self.append(Event::CampaignClosed {
            campaign_id: id.to_owned(),
        })
    }

    fn to_rating(&self, s: RatingSubmission) -> Result<(String, Rating), ServiceError> {
        let score = u8::try_from(s.score).map_err(|_| ServiceError::BadScore(s.score))?;
        let rating = Rating {
            evaluator_id: s.evaluator_id,
            clip_id: s.clip_id,
            category: s.category,
            score,
            timestamp: s.timestamp.unwrap_or_else(|| (self.clock)()),
        };
        Ok((s.campaign_id, rating))
    }

    pub fn submit_rating(&self, s: RatingSubmission) -> Result<u64, ServiceError> {
        let (campaign_id, rating) = self.to_rating(s)?;
        self.append(Event::RatingSubmitted { campaign_id, rating })
    }

    /// Replaces an existing rating when the campaign allows revisions.
    pub fn revise_rating(&self, s: RatingSubmission) -> Result<u64, ServiceError> {
        let (campaign_id, rating) = self.to_rating(s)?;
        self.append(Event::RatingRevised { campaign_id, rating })
    }
}

/// Read access to the current state.
pub struct StateGuard<'a>(RwLockReadGuard<'a, (State, Option<Persistence>)>);

impl std::ops::Deref for StateGuard<'_> {
    type Target = State;

    fn deref(&self) -> &State {
        &self.0 .0
    }
}

fn write_snapshot(dir: &Path, state: &State) -> Result<(), ServiceError> {
    let tmp = dir.join(format!("{SNAPSHOT_FILE}.tmp"));
    let bytes = serde_json::to_vec(&Snapshot::from(state))?;
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, dir.join(SNAPSHOT_FILE))?;
    Ok(())
}

pub fn replay_log_file(path: &Path) -> Result<State, ServiceError> {
    State::replay(BufReader::new(File::open(path)?))
}
