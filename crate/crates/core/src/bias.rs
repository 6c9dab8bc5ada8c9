//! Frequency bias per pair and its aggregates by label and by prediction
//! correctness.
//!
//! The bias of a pair is `Freq(hypothesis) - Freq(premise)` on the display
//! scale. Aggregates skip pairs whose statements have no predicates and
//! report the skipped ids alongside the statistics.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequency::{statement_frequency, FrequencyTable, ScaledFrequency};
use crate::ingest::{Label, NLIPair, PredictionRecord};
use crate::stats;

/// Whether a pair (or a group of pairs) agrees with the frequency bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Consistency {
    Consistent,
    Adversarial,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasRecord {
    pub pair_id: String,
    pub freq_prem: ScaledFrequency,
    pub freq_hypo: ScaledFrequency,
    pub bias: f64,
    pub label: Label,
}

pub fn bias_record(pair: &NLIPair, table: &FrequencyTable) -> Result<BiasRecord> {
    let freq_prem = statement_frequency(table, pair.premise()).map_err(|e| e.for_pair(pair.id()))?;
    let freq_hypo = statement_frequency(table, pair.hypothesis()).map_err(|e| e.for_pair(pair.id()))?;
    Ok(BiasRecord {
        pair_id: pair.id().to_string(),
        freq_prem,
        freq_hypo,
        bias: freq_hypo.value() - freq_prem.value(),
        label: pair.label(),
    })
}

/// Bias records for every computable pair, plus the ids that were skipped.
pub fn bias_records(pairs: &[NLIPair], table: &FrequencyTable) -> (Vec<BiasRecord>, Vec<String>) {
    let mut records = Vec::with_capacity(pairs.len());
    let mut skipped = Vec::new();
    for pair in pairs {
        match bias_record(pair, table) {
            Ok(r) => records.push(r),
            Err(e) => {
                log::debug!("skipping pair: {e}");
                skipped.push(pair.id().to_string());
            }
        }
    }
    (records, skipped)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MoreFrequent {
    Hypothesis,
    Premise,
    Tie,
}

impl MoreFrequent {
    fn of(mean_prem: f64, mean_hypo: f64) -> Self {
        if mean_hypo > mean_prem {
            MoreFrequent::Hypothesis
        } else if mean_prem > mean_hypo {
            MoreFrequent::Premise
        } else {
            MoreFrequent::Tie
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelStats {
    pub label: Label,
    pub n_pairs: usize,
    pub mean_prem: ScaledFrequency,
    pub mean_hypo: ScaledFrequency,
    pub more_frequent: MoreFrequent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelStatsReport {
    pub stats: Vec<LabelStats>,
    pub skipped: Vec<String>,
}

fn means(records: &[&BiasRecord]) -> Option<(f64, f64)> {
    let prem = stats::mean(records.iter().map(|r| r.freq_prem.value()))?;
    let hypo = stats::mean(records.iter().map(|r| r.freq_hypo.value()))?;
    Some((prem, hypo))
}

/// Mean premise and hypothesis frequency per label, Entail first.
pub fn label_stats(pairs: &[NLIPair], table: &FrequencyTable) -> Result<LabelStatsReport> {
    let (records, skipped) = bias_records(pairs, table);
    if records.is_empty() {
        return Err(Error::EmptyStats(format!(
            "none of {} pair(s) had computable frequencies",
            pairs.len()
        )));
    }
    let mut by_label: BTreeMap<Label, Vec<&BiasRecord>> = BTreeMap::new();
    for r in &records {
        by_label.entry(r.label).or_default().push(r);
    }
    let stats = by_label
        .into_iter()
        .filter_map(|(label, group)| {
            let (prem, hypo) = means(&group)?;
            Some(LabelStats {
                label,
                n_pairs: group.len(),
                mean_prem: ScaledFrequency::from_scaled(prem),
                mean_hypo: ScaledFrequency::from_scaled(hypo),
                more_frequent: MoreFrequent::of(prem, hypo),
            })
        })
        .collect();
    Ok(LabelStatsReport { stats, skipped })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupedBiasStats {
    pub label: Label,
    pub correct: bool,
    pub n_pairs: usize,
    pub mean_prem: Option<ScaledFrequency>,
    pub mean_hypo: Option<ScaledFrequency>,
    /// Hypothesis minus premise for Entail groups, premise minus hypothesis
    /// for NoEntail groups.
    pub oriented_bias: Option<f64>,
    pub verdict: Option<Consistency>,
}

impl GroupedBiasStats {
    pub fn from_means(label: Label, correct: bool, n_pairs: usize, mean_prem: f64, mean_hypo: f64) -> Self {
        let oriented = match label {
            Label::Entail => mean_hypo - mean_prem,
            Label::NoEntail => mean_prem - mean_hypo,
        };
        Self {
            label,
            correct,
            n_pairs,
            mean_prem: Some(ScaledFrequency::from_scaled(mean_prem)),
            mean_hypo: Some(ScaledFrequency::from_scaled(mean_hypo)),
            oriented_bias: Some(oriented),
            verdict: Some(if oriented > 0.0 {
                Consistency::Consistent
            } else {
                Consistency::Adversarial
            }),
        }
    }

    fn empty(label: Label, correct: bool) -> Self {
        Self {
            label,
            correct,
            n_pairs: 0,
            mean_prem: None,
            mean_hypo: None,
            oriented_bias: None,
            verdict: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupedStatsReport {
    pub threshold: f64,
    pub groups: Vec<GroupedBiasStats>,
    pub skipped: Vec<String>,
}

/// Predicted label of a record: the explicit label if any, otherwise
/// `score >= threshold` means Entail.
pub fn predicted_label(record: &PredictionRecord, threshold: f64) -> Label {
    record.predicted_label.unwrap_or(if record.score >= threshold {
        Label::Entail
    } else {
        Label::NoEntail
    })
}

/// Looks up the prediction of every pair; fails listing all absent ids.
pub(crate) fn join_predictions<'a>(
    pairs: impl IntoIterator<Item = &'a NLIPair>,
    preds: &'a [PredictionRecord],
) -> Result<Vec<&'a PredictionRecord>> {
    let index: HashMap<&str, &PredictionRecord> = preds.iter().map(|p| (p.pair_id.as_str(), p)).collect();
    let mut joined = Vec::new();
    let mut missing = Vec::new();
    for pair in pairs {
        match index.get(pair.id()) {
            Some(p) => joined.push(*p),
            None => missing.push(pair.id().to_string()),
        }
    }
    if missing.is_empty() {
        Ok(joined)
    } else {
        Err(Error::Join { missing })
    }
}

/// Four groups in fixed order: (Entail, correct), (Entail, incorrect),
/// (NoEntail, correct), (NoEntail, incorrect).
pub fn correctness_grouped_stats(
    pairs: &[NLIPair],
    preds: &[PredictionRecord],
    table: &FrequencyTable,
    threshold: f64,
) -> Result<GroupedStatsReport> {
    let joined = join_predictions(pairs, preds)?;
    let mut groups: BTreeMap<(Label, bool), Vec<BiasRecord>> = BTreeMap::new();
    let mut skipped = Vec::new();
    for (pair, pred) in pairs.iter().zip(joined) {
        match bias_record(pair, table) {
            Ok(record) => {
                let correct = predicted_label(pred, threshold) == pair.label();
                groups.entry((pair.label(), correct)).or_default().push(record);
            }
            Err(_) => skipped.push(pair.id().to_string()),
        }
    }
    let order = [
        (Label::Entail, true),
        (Label::Entail, false),
        (Label::NoEntail, true),
        (Label::NoEntail, false),
    ];
    let groups = order
        .into_iter()
        .map(|(label, correct)| {
            let members: Vec<&BiasRecord> = groups
                .get(&(label, correct))
                .map(|g| g.iter().collect())
                .unwrap_or_default();
            match means(&members) {
                Some((prem, hypo)) => GroupedBiasStats::from_means(label, correct, members.len(), prem, hypo),
                None => GroupedBiasStats::empty(label, correct),
            }
        })
        .collect();
    Ok(GroupedStatsReport {
        threshold,
        groups,
        skipped,
    })
}
