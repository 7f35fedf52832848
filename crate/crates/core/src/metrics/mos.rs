use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::tdist::t975;
use super::{Category, MetricsError, Rating};
use crate::report::{fmt2, fmt_pm, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MosResult {
    /// `None` for plain score sets that are not tied to a rubric category.
    pub category: Option<Category>,
    pub mean: f64,
    /// Half-width of the t-based 95 % interval; `None` when undefined
    /// (a single observation).
    pub ci95_halfwidth: Option<f64>,
    pub n: usize,
    /// The interval was not computed from pooled observations.
    pub approximate: bool,
}

impl MosResult {
    /// `mean ± half` at two decimals, or the bare mean without an interval.
    pub fn display(&self) -> String {
        match self.ci95_halfwidth {
            Some(h) => fmt_pm(self.mean, h),
            None => fmt2(self.mean),
        }
    }
}

/// Mean and t-based 95 % half-width using the sample standard deviation.
pub(crate) fn summarize(scores: &[f64], category: Option<Category>) -> Option<MosResult> {
    let n = scores.len();
    if n == 0 {
        return None;
    }
    let mean = scores.iter().sum::<f64>() / n as f64;
    let half = t975(n - 1).map(|t| {
        let ss: f64 = scores.iter().map(|x| (x - mean).powi(2)).sum();
        let sd = (ss / (n - 1) as f64).sqrt();
        t * sd / (n as f64).sqrt()
    });
    Some(MosResult {
        category,
        mean,
        ci95_halfwidth: half,
        n,
        approximate: false,
    })
}

pub fn aggregate_mos(ratings: &[Rating], category: Category) -> Result<MosResult, MetricsError> {
    let scores: Vec<f64> = ratings
        .iter()
        .filter(|r| r.category == category)
        .map(|r| f64::from(r.score))
        .collect();
    summarize(&scores, Some(category)).ok_or(MetricsError::EmptyCategory(category))
}

/// Voice consistency as the unweighted mean of the three sub-category
/// means. With `pooled` ratings the interval comes from all SP, MP and EP
/// observations together; otherwise it is the mean of the three
/// half-widths and flagged approximate.
pub fn overall_consistency(sp: &MosResult, mp: &MosResult, ep: &MosResult, pooled: Option<&[Rating]>) -> MosResult {
    let parts = [sp, mp, ep];
    let mean = parts.iter().map(|r| r.mean).sum::<f64>() / 3.0;
    let pooled_scores: Vec<f64> = pooled
        .unwrap_or_default()
        .iter()
        .filter(|r| matches!(r.category, Category::Sp | Category::Mp | Category::Ep))
        .map(|r| f64::from(r.score))
        .collect();
    match summarize(&pooled_scores, Some(Category::Vc)) {
        Some(p) => MosResult { mean, ..p },
        None => {
            let half = parts
                .iter()
                .map(|r| r.ci95_halfwidth)
                .sum::<Option<f64>>()
                .map(|s| s / 3.0);
            MosResult {
                category: Some(Category::Vc),
                mean,
                ci95_halfwidth: half,
                n: parts.iter().map(|r| r.n).sum(),
                approximate: true,
            }
        }
    }
}

/// Two-column table of category name and `mean ± half`.
pub fn category_table(results: &[MosResult]) -> Table {
    let mut t = Table::new(["Categories", "MOS"]);
    for r in results {
        let name = r.category.map_or("Scores", Category::name);
        t.push([name.to_owned(), r.display()]);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct MosRow {
    pub label: String,
    pub results: BTreeMap<Category, MosResult>,
    /// Print intervals; otherwise means only.
    pub show_ci: bool,
}

/// One row per label and one column per category code. Missing cells
/// print as `-`.
pub fn mos_grid_table(corner: &str, columns: &[Category], rows: &[MosRow]) -> Table {
    let mut header = vec![corner.to_owned()];
    header.extend(columns.iter().map(|c| c.code().to_owned()));
    let mut t = Table::new(header);
    for row in rows {
        let mut cells = vec![row.label.clone()];
        cells.extend(columns.iter().map(|c| match row.results.get(c) {
            Some(r) if row.show_ci => r.display(),
            Some(r) => fmt2(r.mean),
            None => "-".to_owned(),
        }));
        t.push(cells);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratings(cat: Category, scores: &[i64]) -> Vec<Rating> {
        scores
            .iter()
            .enumerate()
            .map(|(i, &s)| Rating::new(format!("e{i}"), "c", cat, s, "").unwrap())
            .collect()
    }

    #[test]
    fn five_ratings() {
        let r = aggregate_mos(&ratings(Category::Si, &[4, 4, 5, 3, 4]), Category::Si).unwrap();
        assert_eq!(r.mean, 4.0);
        assert!((r.ci95_halfwidth.unwrap() - 0.878).abs() < 1e-3);
        assert_eq!(r.display(), "4.00 ± 0.88");
    }

    #[test]
    fn constant_and_single() {
        let r = aggregate_mos(&ratings(Category::Vn, &[5; 7]), Category::Vn).unwrap();
        assert_eq!((r.mean, r.ci95_halfwidth), (5.0, Some(0.0)));
        let r = aggregate_mos(&ratings(Category::Vn, &[3]), Category::Vn).unwrap();
        assert_eq!((r.mean, r.ci95_halfwidth, r.n), (3.0, None, 1));
        assert!(matches!(
            aggregate_mos(&ratings(Category::Vn, &[3]), Category::Si),
            Err(MetricsError::EmptyCategory(Category::Si))
        ));
    }

    fn result(mean: f64, half: f64) -> MosResult {
        MosResult {
            category: None,
            mean,
            ci95_halfwidth: Some(half),
            n: 10,
            approximate: false,
        }
    }

    #[test]
    fn consistency_from_summaries() {
        let o = overall_consistency(&result(4.07, 0.36), &result(4.18, 0.21), &result(3.62, 0.45), None);
        assert_eq!(fmt2(o.mean), "3.96");
        assert!(o.approximate);
        assert!((o.ci95_halfwidth.unwrap() - 0.34).abs() < 1e-12);
        let m = result(3.3, 0.1);
        assert!((overall_consistency(&m, &m, &m, None).mean - 3.3).abs() < 1e-12);
        let o = overall_consistency(&result(1.0, 0.0), &result(3.0, 0.0), &result(5.0, 0.0), None);
        assert_eq!(o.mean, 3.0);
    }

    #[test]
    fn consistency_pooled() {
        let mut all = ratings(Category::Sp, &[4, 5]);
        all.extend(ratings(Category::Mp, &[3, 3]));
        all.extend(ratings(Category::Ep, &[2, 2]));
        all.extend(ratings(Category::Si, &[1]));
        let sp = aggregate_mos(&all, Category::Sp).unwrap();
        let mp = aggregate_mos(&all, Category::Mp).unwrap();
        let ep = aggregate_mos(&all, Category::Ep).unwrap();
        let o = overall_consistency(&sp, &mp, &ep, Some(&all));
        assert!(!o.approximate);
        assert_eq!(o.n, 6);
        let pooled = summarize(&[4.0, 5.0, 3.0, 3.0, 2.0, 2.0], None).unwrap();
        assert_eq!(o.ci95_halfwidth, pooled.ci95_halfwidth);
        assert!((o.mean - (4.5 + 3.0 + 2.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn grid_layout() {
        let mut results = BTreeMap::new();
        results.insert(Category::Si, result(4.03, 0.3));
        let rows = [
            MosRow {
                label: "013020".into(),
                results: results.clone(),
                show_ci: false,
            },
            MosRow {
                label: "Overall MOS".into(),
                results,
                show_ci: true,
            },
        ];
        let csv = mos_grid_table("", &[Category::Si, Category::Vn], &rows).to_csv();
        assert_eq!(csv, ",SI,VN\n013020,4.03,-\nOverall MOS,4.03 ± 0.30,-\n");
    }
}
