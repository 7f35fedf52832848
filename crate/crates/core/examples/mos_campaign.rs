//! Offline MOS analysis: aggregate a ratings sheet per category, derive the
//! overall voice-consistency score, and compare two published summaries.

use tinyvox::metrics::{
    aggregate_mos, category_table, comparison_from_summaries, comparison_table, overall_consistency, read_ratings_csv,
    Category, ScoreSummary,
};

const SHEET: &str = "\
evaluator_id,clip_id,category,score,timestamp
e1,c1,SI,4,2024-03-01T10:00:00Z
e2,c1,SI,5,2024-03-01T10:02:00Z
e3,c1,SI,4,2024-03-01T10:05:00Z
e1,c1,VN,3,2024-03-01T10:00:00Z
e2,c1,VN,4,2024-03-01T10:02:00Z
e3,c1,VN,3,2024-03-01T10:05:00Z
e1,c1,SP,4,2024-03-01T10:00:00Z
e2,c1,SP,5,2024-03-01T10:02:00Z
e3,c1,SP,4,2024-03-01T10:05:00Z
e1,c1,MP,4,2024-03-01T10:00:00Z
e2,c1,MP,4,2024-03-01T10:02:00Z
e3,c1,MP,5,2024-03-01T10:05:00Z
e1,c1,EP,3,2024-03-01T10:00:00Z
e2,c1,EP,4,2024-03-01T10:02:00Z
e3,c1,EP,3,2024-03-01T10:05:00Z
";

fn main() -> tinyvox::Result<()> {
    let ratings = read_ratings_csv(SHEET.as_bytes())?;
    let mut results = [Category::Si, Category::Vn, Category::Sp, Category::Mp, Category::Ep]
        .into_iter()
        .map(|c| aggregate_mos(&ratings, c))
        .collect::<Result<Vec<_>, _>>()?;
    let vc = overall_consistency(&results[2], &results[3], &results[4], Some(&ratings));
    results.push(vc);
    println!("{}", category_table(&results).to_aligned_text());

    let natural = ScoreSummary {
        label: "Natural".into(),
        n: 50,
        mean: 4.12,
        ci95_halfwidth: Some(0.09),
    };
    let synthetic = ScoreSummary {
        label: "Synthetic".into(),
        n: 50,
        mean: 3.48,
        ci95_halfwidth: Some(0.11),
    };
    print!(
        "{}",
        comparison_table(&comparison_from_summaries(&natural, &synthetic)).to_csv()
    );
    Ok(())
}
