use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::ServiceError;
use crate::metrics::{bundled_rubric, phase_categories, Category, RubricCategory};

/// Which condition a clip belongs to: synthesized speech or the natural
/// recordings it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arm {
    #[default]
    Synthetic,
    Natural,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClipRef {
    pub id: String,
    pub audio_path: String,
    pub transcript: String,
    #[serde(default)]
    pub speaker_label: String,
    #[serde(default)]
    pub arm: Arm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConfig {
    pub id: String,
    pub evaluators: usize,
    /// Restrict the group to clips with this speaker label.
    #[serde(default)]
    pub speaker: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub id: String,
    pub phase: u8,
    #[serde(default)]
    pub seed: u64,
    /// Synthetic clips drawn per group.
    pub clips_per_group: usize,
    /// Natural clips drawn per group.
    #[serde(default)]
    pub natural_per_group: usize,
    #[serde(default)]
    pub allow_revisions: bool,
    pub groups: Vec<GroupConfig>,
    pub clips: Vec<ClipRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub id: String,
    /// Campaign-issued evaluator tokens.
    pub evaluator_ids: Vec<String>,
    pub clip_ids: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignStatus {
    Draft,
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Campaign {
    pub id: String,
    pub phase: u8,
    pub seed: u64,
    pub groups: Vec<Group>,
    /// Allocated clips only, in allocation order.
    pub clips: Vec<ClipRef>,
    pub rubric: Vec<Category>,
    pub status: CampaignStatus,
    pub allow_revisions: bool,
}

impl Campaign {
    pub fn clip(&self, id: &str) -> Option<&ClipRef> {
        self.clips.iter().find(|c| c.id == id)
    }

    pub fn group_of_evaluator(&self, evaluator: &str) -> Option<&Group> {
        self.groups
            .iter()
            .find(|g| g.evaluator_ids.iter().any(|e| e == evaluator))
    }

    pub fn group_of_clip(&self, clip: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.clip_ids.iter().any(|c| c == clip))
    }

    /// Rubric entries for this campaign's categories, with descriptor text.
    pub fn rubric_details(&self) -> Vec<RubricCategory> {
        bundled_rubric()
            .into_iter()
            .filter(|r| self.rubric.contains(&r.code))
            .collect()
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Groups in config order each draw their clips from the clips not yet
/// taken, filtered by arm and by the group's speaker label when set. Draws
/// are seeded shuffles, so the same config always gives the same campaign.
pub fn create_campaign(cfg: &CampaignConfig) -> Result<Campaign, ServiceError> {
    let rubric = phase_categories(cfg.phase)
        .ok_or_else(|| ServiceError::InvalidConfig(format!("phase must be 1 or 2, got {}", cfg.phase)))?;
    if cfg.id.is_empty() {
        return Err(ServiceError::InvalidConfig("empty campaign id".into()));
    }
    if cfg.groups.is_empty() {
        return Err(ServiceError::InvalidConfig("no groups".into()));
    }
    let mut seen = BTreeSet::new();
    if let Some(dup) = cfg.clips.iter().find(|c| !seen.insert(c.id.as_str())) {
        return Err(ServiceError::InvalidConfig(format!("duplicate clip id `{}`", dup.id)));
    }
    let mut seen = BTreeSet::new();
    if let Some(dup) = cfg.groups.iter().find(|g| !seen.insert(g.id.as_str())) {
        return Err(ServiceError::InvalidConfig(format!("duplicate group id `{}`", dup.id)));
    }
    if cfg.clips_per_group + cfg.natural_per_group == 0 {
        return Err(ServiceError::InvalidConfig("groups would have no clips".into()));
    }
    let needed = cfg.groups.len() * (cfg.clips_per_group + cfg.natural_per_group);
    if cfg.clips.len() < needed {
        return Err(ServiceError::InsufficientClips {
            needed,
            got: cfg.clips.len(),
        });
    }

    let mut rng = Xoshiro256PlusPlus::seed_from_u64(cfg.seed);
    let mut taken = vec![false; cfg.clips.len()];
    let mut groups = Vec::with_capacity(cfg.groups.len());
    let mut clips = Vec::new();
    for g in &cfg.groups {
        let mut clip_ids = Vec::new();
        for (arm, count) in [
            (Arm::Synthetic, cfg.clips_per_group),
            (Arm::Natural, cfg.natural_per_group),
        ] {
            let mut eligible: Vec<usize> = (0..cfg.clips.len())
                .filter(|&i| {
                    let c = &cfg.clips[i];
                    !taken[i] && c.arm == arm && g.speaker.as_ref().is_none_or(|s| *s == c.speaker_label)
                })
                .collect();
            if eligible.len() < count {
                return Err(ServiceError::InsufficientClips {
                    needed: count,
                    got: eligible.len(),
                });
            }
            eligible.shuffle(&mut rng);
            for &i in &eligible[..count] {
                taken[i] = true;
                clip_ids.push(cfg.clips[i].id.clone());
                clips.push(cfg.clips[i].clone());
            }
        }
        if g.evaluators == 0 {
            return Err(ServiceError::InvalidConfig(format!(
                "group `{}` has no evaluators",
                g.id
            )));
        }
        let evaluator_ids = (0..g.evaluators).map(|_| format!("{:016x}", rng.next_u64())).collect();
        groups.push(Group {
            id: g.id.clone(),
            evaluator_ids,
            clip_ids,
        });
    }

    Ok(Campaign {
        id: cfg.id.clone(),
        phase: cfg.phase,
        seed: cfg.seed,
        groups,
        clips,
        rubric,
        status: CampaignStatus::Draft,
        allow_revisions: cfg.allow_revisions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipView {
    pub id: String,
    pub transcript: String,
    pub audio_url: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub campaign_id: String,
    pub evaluator_id: String,
    pub group_id: String,
    pub status: CampaignStatus,
    /// Clips still missing at least one category, in presentation order.
    pub pending: Vec<ClipView>,
    pub completed: Vec<String>,
    pub rubric: Vec<RubricCategory>,
}

/// The evaluator's clip order: a shuffle seeded by the campaign seed and
/// the evaluator token.
pub fn presentation_order(campaign: &Campaign, group: &Group, evaluator: &str) -> Vec<String> {
    let mut order = group.clip_ids.clone();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(campaign.seed ^ fnv1a(evaluator.as_bytes()));
    order.shuffle(&mut rng);
    order
}
