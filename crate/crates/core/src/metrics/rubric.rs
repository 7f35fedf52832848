use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MetricsError;

const BUNDLED_RUBRIC: &str = include_str!("../../data/rubric.json");

/// Listening-test categories. `Vc` (voice consistency) is derived from
/// `Sp`, `Mp` and `Ep` and is never rated directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Category {
    Si,
    Vn,
    Sp,
    Mp,
    Ep,
    Vc,
}

impl Category {
    pub const RATEABLE: [Category; 5] = [Category::Si, Category::Vn, Category::Sp, Category::Mp, Category::Ep];

    pub fn code(self) -> &'static str {
        match self {
            Category::Si => "SI",
            Category::Vn => "VN",
            Category::Sp => "SP",
            Category::Mp => "MP",
            Category::Ep => "EP",
            Category::Vc => "VC",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Si => "Speech Intelligibility",
            Category::Vn => "Voice Naturalness",
            Category::Sp => "Start of phrase & first word quality",
            Category::Mp => "Middle of phrase & central word quality",
            Category::Ep => "End of phrase & last word quality",
            Category::Vc => "Voice Consistency",
        }
    }

    pub fn is_rateable(self) -> bool {
        self != Category::Vc
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Category {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "SI" => Ok(Category::Si),
            "VN" => Ok(Category::Vn),
            "SP" => Ok(Category::Sp),
            "MP" => Ok(Category::Mp),
            "EP" => Ok(Category::Ep),
            "VC" => Ok(Category::Vc),
            _ => Err(MetricsError::UnknownCategory(s.to_owned())),
        }
    }
}

/// Categories rated in a phase: 1 covers SI and VN, 2 adds SP, MP, EP.
pub fn phase_categories(phase: u8) -> Option<Vec<Category>> {
    match phase {
        1 => Some(vec![Category::Si, Category::Vn]),
        2 => Some(Category::RATEABLE.to_vec()),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RubricCategory {
    pub code: Category,
    /// Phase in which the category was introduced.
    pub phase: u8,
    pub name: String,
    /// Score (1 to 5) to descriptor text.
    pub descriptors: BTreeMap<u8, String>,
}

impl RubricCategory {
    pub fn descriptor(&self, score: u8) -> Option<&str> {
        self.descriptors.get(&score).map(String::as_str)
    }
}

fn validate(rubric: &[RubricCategory]) -> Result<(), MetricsError> {
    let mut seen = BTreeSet::new();
    for c in rubric {
        if !c.code.is_rateable() {
            return Err(MetricsError::DerivedCategory(c.code));
        }
        if !seen.insert(c.code) {
            return Err(MetricsError::InvalidRubric(format!("duplicate code {}", c.code)));
        }
        if c.descriptors.keys().copied().ne(1..=5) {
            return Err(MetricsError::InvalidRubric(format!(
                "{} must describe exactly the scores 1 to 5",
                c.code
            )));
        }
    }
    Ok(())
}

pub fn parse_rubric(json: &str) -> Result<Vec<RubricCategory>, MetricsError> {
    let rubric: Vec<RubricCategory> =
        serde_json::from_str(json).map_err(|e| MetricsError::InvalidRubric(e.to_string()))?;
    validate(&rubric)?;
    Ok(rubric)
}

pub fn bundled_rubric() -> Vec<RubricCategory> {
    parse_rubric(BUNDLED_RUBRIC).expect("bundled rubric is valid")
}
