mod common;

use freqbias::bias::{bias_record, label_stats, GroupedBiasStats};
use freqbias::eval::{pr_auc, roc_auc};
use freqbias::ingest::Label;
use freqbias::partition::partition_dataset;
use freqbias::prompts::{parse_model_answer, render_training};
use freqbias::wordnet::{extract_hypo_hyper_pairs, is_hypernym_of, VerbSenseGraph, VerbSynset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn streaming_mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut mean, mut n) = (0.0, 0.0);
    for v in values {
        n += 1.0;
        mean += (v - mean) / n;
    }
    mean
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bias_is_antisymmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = random_table(&mut rng);
        for p in random_pairs(&mut rng, 50) {
            if let Ok(r) = bias_record(&p, &table) {
                prop_assert_eq!(r.bias, r.freq_hypo.value() - r.freq_prem.value());
                prop_assert_eq!(bias_record(&p.swapped(), &table).unwrap().bias, -r.bias);
            }
        }
    }

    #[test]
    fn label_stats_match_streaming_mean(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = random_table(&mut rng);
        let pairs = random_pairs(&mut rng, 80);
        let report = label_stats(&pairs, &table).unwrap();
        for s in &report.stats {
            let records: Vec<_> = pairs
                .iter()
                .filter(|p| p.label() == s.label)
                .filter_map(|p| bias_record(p, &table).ok())
                .collect();
            prop_assert_eq!(records.len(), s.n_pairs);
            let prem = streaming_mean(records.iter().map(|r| r.freq_prem.value()));
            let hypo = streaming_mean(records.iter().map(|r| r.freq_hypo.value()));
            prop_assert!((s.mean_prem.value() - prem).abs() <= 1e-9 * prem.abs().max(1e-300));
            prop_assert!((s.mean_hypo.value() - hypo).abs() <= 1e-9 * hypo.abs().max(1e-300));
        }
    }

    #[test]
    fn grouped_verdict_follows_oriented_sign(prem in 0.0..100.0f64, hypo in 0.0..100.0f64, entail: bool, correct: bool) {
        let label = if entail { Label::Entail } else { Label::NoEntail };
        let g = GroupedBiasStats::from_means(label, correct, 1, prem, hypo);
        let oriented = g.oriented_bias.unwrap();
        prop_assert_eq!(oriented, if entail { hypo - prem } else { prem - hypo });
        prop_assert_eq!(g.verdict == Some(freqbias::bias::Consistency::Consistent), oriented > 0.0);
    }

    #[test]
    fn partition_preserves_order_and_covers(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = random_table(&mut rng);
        let pairs = random_pairs(&mut rng, 60);
        let part = partition_dataset(&pairs, &table);
        let position = |id: &str| pairs.iter().position(|p| p.id() == id).unwrap();
        for subset in [&part.cons, &part.adv] {
            let idx: Vec<usize> = subset.iter().map(|p| position(p.id())).collect();
            prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert_eq!(part.cons.len() + part.adv.len() + part.skipped.len(), pairs.len());
    }

    #[test]
    fn auc_matches_oracles(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_scores(&mut rng, true);
        prop_assert!((roc_auc(&s).unwrap() - roc_oracle(&s)).abs() <= 1e-12);
        prop_assert!((pr_auc(&s).unwrap() - ap_oracle(&s)).abs() <= 1e-12);
        let r = roc_auc(&s).unwrap();
        prop_assert!((0.0..=1.0).contains(&r));
    }

    #[test]
    fn training_prompt_round_trips(p in "[A-Za-z][A-Za-z ,.]{0,30}", h in "[A-Za-z][A-Za-z ,.]{0,30}", entail: bool) {
        let label = if entail { Label::Entail } else { Label::NoEntail };
        let r = render_training(&p, &h, label).unwrap();
        prop_assert_eq!(parse_model_answer(r.answer()).unwrap(), (label, true));
    }

    #[test]
    fn hypernymy_is_monotone_in_depth(edges in prop::collection::vec((0u64..12, 0u64..12), 0..30), a in 0u64..12, b in 0u64..12) {
        let graph = random_graph(&edges);
        let (general, specific) = (format!("v{a}"), format!("v{b}"));
        let mut seen = false;
        for depth in 1..14 {
            let now = is_hypernym_of(&graph, &general, &specific, Some(depth));
            prop_assert!(!seen || now, "lost relation at depth {}", depth);
            seen |= now;
        }
        prop_assert_eq!(seen, is_hypernym_of(&graph, &general, &specific, None));
        prop_assert!(!is_hypernym_of(&graph, &general, &general, None));
    }

    #[test]
    fn pair_extraction_ignores_synset_order(edges in prop::collection::vec((0u64..12, 0u64..12), 0..30)) {
        let forward = synsets(&edges);
        let mut backward = forward.clone();
        backward.reverse();
        let a = extract_hypo_hyper_pairs(&VerbSenseGraph::from_synsets(forward).unwrap(), true);
        let b = extract_hypo_hyper_pairs(&VerbSenseGraph::from_synsets(backward).unwrap(), true);
        prop_assert!(a.iter().all(|p| p.hyponym_lemma != p.hypernym_lemma));
        prop_assert_eq!(a, b);
    }
}

/// Twelve synsets `v0..v11`; synset `i` also carries the lemma `shared{i % 3}`
/// so lemmas span several senses.
fn synsets(edges: &[(u64, u64)]) -> Vec<VerbSynset> {
    (0..12u64)
        .map(|i| VerbSynset {
            offset: i,
            lemmas: vec![format!("v{i}"), format!("shared{}", i % 3)],
            hypernym_offsets: edges.iter().filter(|e| e.0 == i).map(|e| e.1).collect(),
        })
        .collect()
}

fn random_graph(edges: &[(u64, u64)]) -> VerbSenseGraph {
    VerbSenseGraph::from_synsets(synsets(edges)).unwrap()
}
