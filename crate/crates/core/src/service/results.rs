use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::model::{presentation_order, Arm, Assignment, CampaignStatus, ClipView};
use super::store::{CampaignState, State};
use super::ServiceError;
use crate::metrics::{
    aggregate_mos, compare_score_sets, mos_grid_table, overall_consistency, write_ratings_csv, Category,
    ComparisonReport, MosResult, MosRow, Rating,
};
use crate::report::Table;

pub fn assignment(state: &State, campaign_id: &str, evaluator: &str) -> Result<Assignment, ServiceError> {
    let cs = state.campaign(campaign_id)?;
    let c = &cs.campaign;
    let group = c
        .group_of_evaluator(evaluator)
        .ok_or_else(|| ServiceError::NotFound(format!("evaluator `{evaluator}`")))?;
    let mut pending = Vec::new();
    let mut completed = Vec::new();
    for clip_id in presentation_order(c, group, evaluator) {
        if c.rubric.iter().all(|&cat| cs.has_rating(evaluator, &clip_id, cat)) {
            completed.push(clip_id);
        } else {
            let clip = c.clip(&clip_id).expect("allocated clip");
            pending.push(ClipView {
                audio_url: format!("/clips/{}/audio", clip.id),
                transcript: clip.transcript.clone(),
                id: clip_id,
            });
        }
    }
    Ok(Assignment {
        campaign_id: c.id.clone(),
        evaluator_id: evaluator.to_owned(),
        group_id: group.id.clone(),
        status: c.status,
        pending,
        completed,
        rubric: c.rubric_details(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatorProgress {
    pub evaluator_id: String,
    pub group_id: String,
    pub completed_clips: usize,
    pub total_clips: usize,
    pub ratings: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub campaign_id: String,
    pub status: CampaignStatus,
    pub expected_ratings: usize,
    pub submitted_ratings: usize,
    pub evaluators: Vec<EvaluatorProgress>,
}

pub fn progress(state: &State, campaign_id: &str) -> Result<Progress, ServiceError> {
    let cs = state.campaign(campaign_id)?;
    let c = &cs.campaign;
    let mut evaluators = Vec::new();
    let mut expected = 0;
    for g in &c.groups {
        expected += g.evaluator_ids.len() * g.clip_ids.len() * c.rubric.len();
        for e in &g.evaluator_ids {
            let done = |clip: &String| c.rubric.iter().all(|&cat| cs.has_rating(e, clip, cat));
            evaluators.push(EvaluatorProgress {
                evaluator_id: e.clone(),
                group_id: g.id.clone(),
                completed_clips: g.clip_ids.iter().filter(|clip| done(clip)).count(),
                total_clips: g.clip_ids.len(),
                ratings: cs.ratings().filter(|r| &r.evaluator_id == e).count(),
            });
        }
    }
    Ok(Progress {
        campaign_id: c.id.clone(),
        status: c.status,
        expected_ratings: expected,
        submitted_ratings: cs.rating_count(),
        evaluators,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupResult {
    pub group_id: String,
    pub results: BTreeMap<Category, MosResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResults {
    pub campaign_id: String,
    pub phase: u8,
    /// Synthetic-arm results per group.
    pub groups: Vec<GroupResult>,
    /// Synthetic-arm results over all groups.
    pub overall: BTreeMap<Category, MosResult>,
    /// Natural-arm results when the campaign has natural clips.
    pub natural: Option<BTreeMap<Category, MosResult>>,
    /// Natural versus synthetic, per category present in both arms.
    pub comparisons: Vec<ComparisonReport>,
    /// Categories left out for lack of ratings, as `scope:CODE`.
    pub omitted: Vec<String>,
}

fn aggregate(
    ratings: &[Rating],
    rubric: &[Category],
    scope: &str,
    omitted: &mut Vec<String>,
) -> BTreeMap<Category, MosResult> {
    let mut out = BTreeMap::new();
    for &cat in rubric {
        match aggregate_mos(ratings, cat) {
            Ok(r) => {
                out.insert(cat, r);
            }
            Err(_) => omitted.push(format!("{scope}:{cat}")),
        }
    }
    if let (Some(sp), Some(mp), Some(ep)) = (out.get(&Category::Sp), out.get(&Category::Mp), out.get(&Category::Ep)) {
        let vc = overall_consistency(sp, mp, ep, Some(ratings));
        out.insert(Category::Vc, vc);
    }
    out
}

fn arm_ratings(cs: &CampaignState, arm: Arm, clip_ids: Option<&[String]>) -> Vec<Rating> {
    let c = &cs.campaign;
    cs.ratings()
        .filter(|r| c.clip(&r.clip_id).is_some_and(|clip| clip.arm == arm))
        .filter(|r| clip_ids.is_none_or(|ids| ids.contains(&r.clip_id)))
        .cloned()
        .collect()
}

pub fn campaign_results(state: &State, campaign_id: &str) -> Result<CampaignResults, ServiceError> {
    let cs = state.campaign(campaign_id)?;
    let c = &cs.campaign;
    let mut omitted = Vec::new();
    let groups = c
        .groups
        .iter()
        .map(|g| GroupResult {
            group_id: g.id.clone(),
            results: aggregate(
                &arm_ratings(cs, Arm::Synthetic, Some(&g.clip_ids)),
                &c.rubric,
                &g.id,
                &mut omitted,
            ),
        })
        .collect();
    let synthetic = arm_ratings(cs, Arm::Synthetic, None);
    let overall = aggregate(&synthetic, &c.rubric, "overall", &mut omitted);

    let has_natural = c.clips.iter().any(|clip| clip.arm == Arm::Natural);
    let (natural, comparisons) = if has_natural {
        let nat_ratings = arm_ratings(cs, Arm::Natural, None);
        let nat = aggregate(&nat_ratings, &c.rubric, "natural", &mut omitted);
        let scores = |rs: &[Rating], cat: Category| -> Vec<f64> {
            rs.iter()
                .filter(|r| r.category == cat)
                .map(|r| f64::from(r.score))
                .collect()
        };
        let mut comps = Vec::new();
        for cat in nat.keys().filter(|k| overall.contains_key(k)) {
            let report = if *cat == Category::Vc {
                ComparisonReport {
                    label_a: "Natural VC".into(),
                    label_b: "Synthetic VC".into(),
                    difference: nat[cat].mean - overall[cat].mean,
                    mos_a: nat[cat].clone(),
                    mos_b: overall[cat].clone(),
                }
            } else {
                let mut r = compare_score_sets(
                    &scores(&nat_ratings, *cat),
                    &scores(&synthetic, *cat),
                    &format!("Natural {cat}"),
                    &format!("Synthetic {cat}"),
                )?;
                r.mos_a.category = Some(*cat);
                r.mos_b.category = Some(*cat);
                r
            };
            comps.push(report);
        }
        (Some(nat), comps)
    } else {
        (None, Vec::new())
    };

    Ok(CampaignResults {
        campaign_id: c.id.clone(),
        phase: c.phase,
        groups,
        overall,
        natural,
        comparisons,
        omitted,
    })
}

/// Group rows with means only, then the overall row (and the natural arm
/// when present) with intervals.
pub fn results_table(r: &CampaignResults) -> Table {
    let mut columns: Vec<Category> = r.overall.keys().copied().collect();
    if let Some(n) = &r.natural {
        columns.extend(n.keys().filter(|k| !r.overall.contains_key(k)));
    }
    columns.sort();
    let mut rows: Vec<MosRow> = r
        .groups
        .iter()
        .map(|g| MosRow {
            label: g.group_id.clone(),
            results: g.results.clone(),
            show_ci: false,
        })
        .collect();
    rows.push(MosRow {
        label: "Overall MOS".into(),
        results: r.overall.clone(),
        show_ci: true,
    });
    if let Some(n) = &r.natural {
        rows.push(MosRow {
            label: "Natural Speech MOS".into(),
            results: n.clone(),
            show_ci: true,
        });
    }
    mos_grid_table("", &columns, &rows)
}

pub fn export_csv(state: &State, campaign_id: &str) -> Result<Vec<u8>, ServiceError> {
    let cs = state.campaign(campaign_id)?;
    let ratings: Vec<Rating> = cs.ratings().cloned().collect();
    let mut buf = Vec::new();
    write_ratings_csv(&mut buf, &ratings)?;
    Ok(buf)
}
