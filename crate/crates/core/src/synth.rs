//! Seeded synthetic charter corpus with planted, measurable structure.
//!
//! Real charter collections cannot be redistributed, so end-to-end checks
//! and benchmarks run against a generated corpus whose signals are known by
//! construction:
//!
//! - three documentary typologies (bull / royal / private), each boosting
//!   its own lemma triple over a shared background; half the charters keep
//!   their label, the rest are left unlabeled for screening;
//! - two regions with mutually exclusive regionalisms (`finagium` in the
//!   east, `tellus` in the west) and coordinates drawn around separated
//!   centroids;
//! - a pivot/target pair (`memoria` / `tempus`) whose adjacency rate rises
//!   linearly over the 800-1299 date range;
//! - orthographic variants (u/v, i/j) resolved by the generated lexicon,
//!   plus square-bracket editorial noise for the cleaner.
//!
//! Everything is a pure function of [`SynthConfig`], charters are split
//! into two source batches with a few planted duplicates and id collisions
//! so that merging has something to do.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::Charter;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub charters: usize,
    pub seed: u64,
    /// Mean tokens per charter (uniform between 0.5x and 1.5x).
    pub mean_tokens: usize,
    pub background_lemmas: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            charters: 2_000,
            seed: 0xCE4A,
            mean_tokens: 200,
            background_lemmas: 800,
        }
    }
}

pub const CLASSES: [&str; 3] = ["bull", "royal", "private"];
pub const CLASS_WORDS: [[&str; 3]; 3] = [
    ["apostolica", "pontifex", "basilica"],
    ["rex", "regnum", "palatium"],
    ["mansus", "heres", "laboratura"],
];
pub const EAST_REGION: &str = "orientalis";
pub const WEST_REGION: &str = "occidentalis";
pub const EAST_LEMMA: &str = "finagium";
pub const WEST_LEMMA: &str = "tellus";
/// East/west centroids (lat, lon) and the meridian separating them.
pub const EAST_CENTER: (f64, f64) = (47.5, 6.5);
pub const WEST_CENTER: (f64, f64) = (47.5, 1.5);
pub const SPLIT_LON: f64 = 4.0;
pub const PIVOT: &str = "memoria";
pub const TARGET: &str = "tempus";
pub const YEAR_RANGE: (i32, i32) = (800, 1300);

/// The generated corpus: JSONL per source batch plus a matching lexicon.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    /// (source name, JSONL content), two batches.
    pub batches: Vec<(String, String)>,
    pub lexicon_tsv: String,
    /// True typology of every charter, including the unlabeled ones.
    pub truth: Vec<(String, String)>,
}

fn background_lemma(i: usize) -> String {
    const ONSETS: [&str; 12] = [
        "b", "c", "d", "f", "g", "l", "m", "n", "p", "r", "s", "t",
    ];
    const NUCLEI: [&str; 6] = ["a", "e", "i", "o", "u", "au"];
    const CODAS: [&str; 8] = ["", "n", "r", "s", "l", "m", "c", "x"];
    let mut word = String::new();
    let mut n = i;
    for _ in 0..3 {
        word.push_str(ONSETS[n % ONSETS.len()]);
        n /= ONSETS.len();
        word.push_str(NUCLEI[n % NUCLEI.len()]);
        n /= NUCLEI.len();
    }
    word.push_str(CODAS[i % CODAS.len()]);
    word
}

/// Inflected surface forms of a lemma, with lookup weights.
fn forms_of(lemma: &str) -> Vec<(String, f64)> {
    vec![
        (lemma.to_string(), 10.0),
        (format!("{lemma}m"), 4.0),
        (format!("{lemma}s"), 3.0),
        (format!("{lemma}rum"), 1.0),
    ]
}

/// Re-spell a form with u->v / i->j variance, the way editions do.
fn archaic_spelling(form: &str, rng: &mut ChaCha8Rng) -> String {
    form.chars()
        .map(|c| match c {
            'u' if rng.gen_bool(0.3) => 'v',
            'i' if rng.gen_bool(0.15) => 'j',
            other => other,
        })
        .collect()
}

pub fn generate(config: &SynthConfig) -> SynthCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let background: Vec<String> = (0..config.background_lemmas).map(background_lemma).collect();
    let mut vocabulary: Vec<String> = background.clone();
    vocabulary.extend(CLASS_WORDS.iter().flatten().map(|s| s.to_string()));
    vocabulary.extend([
        EAST_LEMMA.to_string(),
        WEST_LEMMA.to_string(),
        PIVOT.to_string(),
        TARGET.to_string(),
    ]);

    let mut lexicon = String::new();
    for lemma in &vocabulary {
        for (form, weight) in forms_of(lemma) {
            lexicon.push_str(&format!("{form}\t{lemma}\t{weight}\n"));
        }
    }

    // A Zipf-like background sampler over ranked lemmas.
    let weights: Vec<f64> = (0..background.len())
        .map(|r| 1.0 / (r as f64 + 2.7))
        .collect();
    let total_weight: f64 = weights.iter().sum();
    let mut sample_background = |rng: &mut ChaCha8Rng| -> &str {
        let mut x = rng.gen_range(0.0..total_weight);
        for (i, w) in weights.iter().enumerate() {
            if x < *w {
                return &background[i];
            }
            x -= w;
        }
        &background[0]
    };

    let (year_lo, year_hi) = YEAR_RANGE;
    let span = (year_hi - year_lo) as f64;
    let mut charters: Vec<(Charter, String)> = Vec::with_capacity(config.charters);
    let mut truth = Vec::with_capacity(config.charters);

    for i in 0..config.charters {
        let class_id = i % CLASSES.len();
        let class = CLASSES[class_id];
        let labeled = rng.gen_bool(0.5);
        let year = year_lo + ((i as f64 / config.charters as f64) * span) as i32;
        let year = (year + rng.gen_range(-5..=5)).clamp(year_lo, year_hi - 1);
        let east = rng.gen_bool(0.5);
        let (center, region, regionalism) = if east {
            (EAST_CENTER, EAST_REGION, EAST_LEMMA)
        } else {
            (WEST_CENTER, WEST_REGION, WEST_LEMMA)
        };
        let lat = center.0 + rng.gen_range(-1.2..1.2);
        let lon = center.1 + rng.gen_range(-1.2..1.2);

        let length = rng.gen_range(config.mean_tokens / 2..=config.mean_tokens * 3 / 2);
        let adjacency_rate = 0.05 + 0.9 * ((year - year_lo) as f64 / span);
        let mut words: Vec<String> = Vec::with_capacity(length + 8);
        while words.len() < length {
            let draw: f64 = rng.gen();
            if draw < 0.08 {
                words.push(CLASS_WORDS[class_id][rng.gen_range(0..3)].to_string());
            } else if draw < 0.11 {
                words.push(regionalism.to_string());
            } else if draw < 0.135 {
                // Pivot occurrence; adjacency with the target rises with
                // the year.
                words.push(PIVOT.to_string());
                if rng.gen_bool(adjacency_rate) {
                    words.push(TARGET.to_string());
                } else {
                    words.push(sample_background(&mut rng).to_string());
                }
            } else if draw < 0.145 {
                // Background target occurrences keep f(target) alive in
                // every slice.
                words.push(TARGET.to_string());
            } else {
                words.push(sample_background(&mut rng).to_string());
            }
        }

        // Surface realization: inflection, spelling variance, punctuation,
        // editorial noise.
        let mut text = String::new();
        for (j, lemma) in words.iter().enumerate() {
            let forms = forms_of(lemma);
            let form = &forms[rng.gen_range(0..forms.len())].0;
            let mut surface = archaic_spelling(form, &mut rng);
            if j == 0 {
                let mut chars = surface.chars();
                if let Some(first) = chars.next() {
                    surface = first.to_uppercase().collect::<String>() + chars.as_str();
                }
            }
            if !text.is_empty() {
                text.push(' ');
            }
            text.push_str(&surface);
            if rng.gen_bool(0.04) {
                text.push('.');
            }
        }
        if rng.gen_bool(0.1) {
            text.push_str(" [fol. 1r]");
        }

        let id = format!("ch{i:05}");
        let charter = Charter {
            id: id.clone(),
            source_corpus: String::new(),
            text,
            not_before: year,
            not_after: year + rng.gen_range(0..=2),
            lat: Some(lat),
            lon: Some(lon),
            region: Some(region.to_string()),
            institution: None,
            doc_type: labeled.then(|| class.to_string()),
            language: Some("la".to_string()),
            extra: Default::default(),
        };
        truth.push((id, class.to_string()));
        charters.push((charter, class.to_string()));
    }

    // Two source batches; a handful of exact duplicates and id collisions
    // exercise the merge rules.
    let mut batch_a = String::new();
    let mut batch_b = String::new();
    for (i, (charter, _)) in charters.iter().enumerate() {
        let line = serde_json::to_string(charter).expect("charter serializes");
        if i % 2 == 0 {
            batch_a.push_str(&line);
            batch_a.push('\n');
            if i % 400 == 0 {
                // Same text and dates under another id: a duplicate edition.
                let mut dup = charter.clone();
                dup.id = format!("dup{i:05}");
                batch_b.push_str(&serde_json::to_string(&dup).expect("charter serializes"));
                batch_b.push('\n');
            }
        } else {
            batch_b.push_str(&line);
            batch_b.push('\n');
            if i % 401 == 0 {
                // Same id, different text: a collision to prefix.
                let mut clash = charter.clone();
                clash.text = format!("Alia carta {}", clash.text);
                batch_a.push_str(&serde_json::to_string(&clash).expect("charter serializes"));
                batch_a.push('\n');
            }
        }
    }

    SynthCorpus {
        batches: vec![
            ("cartulary_a".to_string(), batch_a),
            ("cartulary_b".to_string(), batch_b),
        ],
        lexicon_tsv: lexicon,
        truth,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::build_index;
    use crate::ingest::{merge_corpora, read_corpus, CorpusFormat};
    use crate::lemma::load_lexicon;
    use std::io::Write;

    fn build_small() -> (crate::index::Index, SynthCorpus) {
        let config = SynthConfig {
            charters: 120,
            seed: 7,
            mean_tokens: 60,
            background_lemmas: 100,
        };
        let corpus = generate(&config);
        let dir = tempfile::tempdir().unwrap();
        let mut batches = Vec::new();
        for (name, jsonl) in &corpus.batches {
            let path = dir.path().join(format!("{name}.jsonl"));
            let mut f = std::fs::File::create(&path).unwrap();
            f.write_all(jsonl.as_bytes()).unwrap();
            batches.push(read_corpus(&path, CorpusFormat::Jsonl).unwrap());
        }
        let lex_path = dir.path().join("lexicon.tsv");
        std::fs::write(&lex_path, &corpus.lexicon_tsv).unwrap();
        let lexicon = load_lexicon(&lex_path).unwrap();
        let merged = merge_corpora(batches);
        (build_index(&merged, &lexicon), corpus)
    }

    #[test]
    fn generation_is_deterministic() {
        let config = SynthConfig {
            charters: 50,
            seed: 42,
            mean_tokens: 40,
            background_lemmas: 60,
        };
        let a = generate(&config);
        let b = generate(&config);
        assert_eq!(a.batches, b.batches);
        assert_eq!(a.lexicon_tsv, b.lexicon_tsv);
    }

    #[test]
    fn batches_ingest_cleanly_and_merge_dedupes() {
        let (index, corpus) = build_small();
        let generated: usize = corpus.truth.len();
        // Duplicates collapse; collisions add extra records.
        assert!(index.charter_count() >= generated);
        assert!(index.unknown_rate() < 0.05, "unknown rate {}", index.unknown_rate());
        // Folding must map archaic spellings back onto lexicon lemmas.
        assert!(index.lemma_frequency(PIVOT) > 0);
        assert!(index.lemma_frequency(TARGET) > 0);
    }

    #[test]
    fn regionalisms_are_exclusive() {
        let (index, _) = build_small();
        for charter in &index.charters {
            let text_lemmas: std::collections::HashSet<&str> = charter
                .tokens
                .iter()
                .map(|t| index.lemmas.string(t.lemma.0))
                .collect();
            match charter.meta.region.as_deref() {
                Some(EAST_REGION) => assert!(!text_lemmas.contains(WEST_LEMMA)),
                Some(WEST_REGION) => assert!(!text_lemmas.contains(EAST_LEMMA)),
                other => panic!("unexpected region {other:?}"),
            }
        }
    }

    #[test]
    fn labels_cover_all_three_classes() {
        let (index, _) = build_small();
        let mut seen: Vec<&str> = index
            .charters
            .iter()
            .filter_map(|c| c.meta.doc_type.as_deref())
            .collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen, {
            let mut c = CLASSES.to_vec();
            c.sort_unstable();
            c
        });
    }
}
