use tinyvox::corpus::parse_transcript;
use tinyvox::text::{normalize_text, NormConfig, PunctuationPolicy};

fn main() {
    let lines = [
        "um the <breath> battery makes it light up",
        "Dr. Jones said it's 21 degrees, e.g. warm!",
        "it's called evapor- evaporation <noise>",
        "we counted 1,250 seeds vs. 999 yesterday",
    ];
    let plain = NormConfig::default();
    let keep = NormConfig {
        punctuation: PunctuationPolicy::KeepSentenceFinal,
        ..NormConfig::default()
    };
    for raw in lines {
        let clean = parse_transcript(raw).clean_text;
        println!(
            "{raw}\n  -> {}\n  -> {}\n",
            normalize_text(&clean, &plain),
            normalize_text(&clean, &keep)
        );
    }
}
