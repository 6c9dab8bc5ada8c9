#![allow(dead_code)]

use std::fs::File;
use std::path::PathBuf;

use freqbias::frequency::{
    default_stoplist, load_frequency_table, ExtractionMode, FrequencyTable, FrequencyUnit, PredicateExtractor,
    VerbLemmatizer,
};
use freqbias::ingest::{parse_triple_dataset, Label, NLIPair, Predicate, Role, Statement};
use freqbias::wordnet::{load_exceptions_dir, load_verb_graph_dir, VerbSenseGraph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> PathBuf {
    manifest_dir().join("tests/data").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(name)
}

/// Bundled dictionary and frequency resources at the workspace root.
pub fn resource(path: &str) -> PathBuf {
    manifest_dir().join("../../data").join(path)
}

pub fn freq30() -> FrequencyTable {
    let file = File::open(fixture("freq30.tsv")).unwrap();
    load_frequency_table(file, FrequencyUnit::Proportion, "freq30")
        .unwrap()
        .0
}

pub fn toy_graph() -> VerbSenseGraph {
    load_verb_graph_dir(&fixture("toy_wordnet")).unwrap()
}

/// Triple dataset with predicates extracted against the toy dictionary.
pub fn annotated_fixture(name: &str) -> Vec<NLIPair> {
    let mut pairs = parse_triple_dataset(File::open(fixture(name)).unwrap()).unwrap();
    let dir = fixture("toy_wordnet");
    let graph = load_verb_graph_dir(&dir).unwrap();
    let lemmatizer = VerbLemmatizer::new(
        load_exceptions_dir(&dir).unwrap(),
        graph.lemmas().map(str::to_string).collect(),
    );
    PredicateExtractor::new(ExtractionMode::Triple, lemmatizer, default_stoplist())
        .unwrap()
        .annotate(&mut pairs)
        .unwrap();
    pairs
}

pub fn statement(role: Role, predicate: Option<&str>) -> Statement {
    let preds = predicate
        .map(|p| vec![Predicate::from_annotation(p).unwrap()])
        .unwrap_or_default();
    Statement::from_text(role, format!("x {} y", predicate.unwrap_or("relates to")), preds).unwrap()
}

pub fn pair(id: impl Into<String>, prem: Option<&str>, hypo: Option<&str>, label: Label) -> NLIPair {
    NLIPair::new(
        id,
        statement(Role::Premise, prem),
        statement(Role::Hypothesis, hypo),
        label,
    )
    .unwrap()
}

pub const VOCAB: [&str; 12] = [
    "buy", "own", "go", "drive", "talk", "whisper", "kill", "die", "eat", "walk", "zorb", "blick",
];

/// Table over the first ten vocabulary words with random proportions, some
/// equal to each other; `zorb` and `blick` stay out of vocabulary.
pub fn random_table(rng: &mut ChaCha8Rng) -> FrequencyTable {
    let entries: Vec<(&str, f64)> = VOCAB[..10]
        .iter()
        .map(|w| (*w, rng.gen_range(1..=20) as f64 * 1e-4))
        .collect();
    FrequencyTable::from_entries(entries, "random").unwrap()
}

/// Random pairs over [`VOCAB`], including identical predicates, two-token
/// phrases and statements without predicates.
pub fn random_pairs(rng: &mut ChaCha8Rng, n: usize) -> Vec<NLIPair> {
    let pick = |rng: &mut ChaCha8Rng| -> Option<String> {
        match rng.gen_range(0..20) {
            0 => None,
            1 => Some(format!(
                "{} {}",
                VOCAB[rng.gen_range(0..VOCAB.len())],
                VOCAB[rng.gen_range(0..VOCAB.len())]
            )),
            _ => Some(VOCAB[rng.gen_range(0..VOCAB.len())].to_string()),
        }
    };
    (0..n)
        .map(|i| {
            let prem = pick(rng);
            let hypo = if rng.gen_bool(0.1) { prem.clone() } else { pick(rng) };
            let label = if rng.gen_bool(0.5) {
                Label::Entail
            } else {
                Label::NoEntail
            };
            pair(format!("r{i}"), prem.as_deref(), hypo.as_deref(), label)
        })
        .collect()
}

/// Random scored instance with scores on a coarse grid so ties occur.
pub fn random_scores(rng: &mut ChaCha8Rng, need_both_classes: bool) -> Vec<(f64, bool)> {
    loop {
        let n = rng.gen_range(1..=50);
        let grid = rng.gen_range(2..=30);
        let scores: Vec<(f64, bool)> = (0..n)
            .map(|_| (rng.gen_range(0..=grid) as f64 / grid as f64, rng.gen_bool(0.4)))
            .collect();
        let pos = scores.iter().filter(|s| s.1).count();
        if pos > 0 && (!need_both_classes || pos < n) {
            return scores;
        }
    }
}

/// P(pos > neg) + 0.5 * P(pos = neg) over every positive/negative pair.
pub fn roc_oracle(scores: &[(f64, bool)]) -> f64 {
    let mut wins = 0.0;
    let mut total = 0.0;
    for &(sp, gp) in scores {
        for &(sn, gn) in scores {
            if gp && !gn {
                total += 1.0;
                if sp > sn {
                    wins += 1.0;
                } else if sp == sn {
                    wins += 0.5;
                }
            }
        }
    }
    wins / total
}

/// Precision at each positive's rank, where the rank counts items with a
/// higher score or an equal score earlier in the input.
pub fn ap_oracle(scores: &[(f64, bool)]) -> f64 {
    let rank = |i: usize| {
        1 + scores
            .iter()
            .enumerate()
            .filter(|&(j, s)| s.0 > scores[i].0 || (s.0 == scores[i].0 && j < i))
            .count()
    };
    let positives: Vec<usize> = (0..scores.len()).filter(|&i| scores[i].1).collect();
    let sum: f64 = positives
        .iter()
        .map(|&i| {
            let r = rank(i);
            let hits = positives.iter().filter(|&&j| rank(j) <= r).count();
            hits as f64 / r as f64
        })
        .sum();
    sum / positives.len() as f64
}
