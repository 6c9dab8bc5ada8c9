//! Ranking metrics per subset and the gap between the bias-adversarial and
//! bias-consistent subsets.

use std::cmp::Ordering;

use serde::Serialize;

use crate::bias::join_predictions;
use crate::error::{Error, Result};
use crate::ingest::{NLIPair, PredictionRecord};

/// Which area the gap is computed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum AucVariant {
    #[default]
    Roc,
    Pr,
}

impl std::str::FromStr for AucVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "roc" => Ok(AucVariant::Roc),
            "pr" => Ok(AucVariant::Pr),
            _ => Err(format!("unknown AUC variant {s:?} (expected roc or pr)")),
        }
    }
}

impl std::fmt::Display for AucVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AucVariant::Roc => "roc",
            AucVariant::Pr => "pr",
        })
    }
}

fn check_finite(scores: &[(f64, bool)]) -> Result<()> {
    match scores.iter().find(|(s, _)| !s.is_finite()) {
        Some((s, _)) => Err(Error::Contract(format!("non-finite score {s}"))),
        None => Ok(()),
    }
}

fn class_counts(scores: &[(f64, bool)]) -> (usize, usize) {
    let pos = scores.iter().filter(|(_, g)| *g).count();
    (pos, scores.len() - pos)
}

/// Area under the ROC curve with tied scores counted as half a win, computed
/// from the rank sum of the positives.
pub fn roc_auc(scores: &[(f64, bool)]) -> Result<f64> {
    check_finite(scores)?;
    let (n_pos, n_neg) = class_counts(scores);
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Degenerate(format!(
            "ROC AUC needs both classes, got {n_pos} positive and {n_neg} negative"
        )));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].0.total_cmp(&scores[b].0));

    // Twice the midrank keeps everything in integers.
    let mut pos_rank_sum2: u128 = 0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]].0 == scores[order[start]].0 {
            end += 1;
        }
        let midrank2 = (start + 1 + end) as u128;
        let tied_pos = order[start..end].iter().filter(|&&i| scores[i].1).count() as u128;
        pos_rank_sum2 += midrank2 * tied_pos;
        start = end;
    }
    let (p, n) = (n_pos as u128, n_neg as u128);
    let wins2 = pos_rank_sum2 - p * (p + 1);
    Ok(wins2 as f64 / (2 * p * n) as f64)
}

/// Average precision: mean over positives of the precision at each
/// positive's rank. Scores are ranked descending; ties keep input order.
pub fn pr_auc(scores: &[(f64, bool)]) -> Result<f64> {
    check_finite(scores)?;
    let (n_pos, _) = class_counts(scores);
    if n_pos == 0 {
        return Err(Error::Degenerate(
            "average precision needs at least one positive".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].0.partial_cmp(&scores[a].0).unwrap_or(Ordering::Equal));
    let mut hits = 0usize;
    let mut total = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        if scores[i].1 {
            hits += 1;
            total += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(total / n_pos as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub subset_name: String,
    pub n_pos: usize,
    pub n_neg: usize,
    pub roc_auc: f64,
    pub pr_auc: f64,
}

impl EvalReport {
    pub fn auc(&self, variant: AucVariant) -> f64 {
        match variant {
            AucVariant::Roc => self.roc_auc,
            AucVariant::Pr => self.pr_auc,
        }
    }
}

pub fn evaluate_scores(subset_name: &str, scores: &[(f64, bool)]) -> Result<EvalReport> {
    let named = |e: Error| match e {
        Error::Degenerate(msg) => Error::Degenerate(format!("subset {subset_name}: {msg}")),
        other => other,
    };
    let (n_pos, n_neg) = class_counts(scores);
    Ok(EvalReport {
        subset_name: subset_name.to_string(),
        n_pos,
        n_neg,
        roc_auc: roc_auc(scores).map_err(named)?,
        pr_auc: pr_auc(scores).map_err(named)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub variant: AucVariant,
    pub cons: EvalReport,
    pub adv: EvalReport,
    /// `100 * (adv - cons)` on the selected variant.
    pub delta: f64,
}

impl GapReport {
    pub fn new(cons: EvalReport, adv: EvalReport, variant: AucVariant) -> Self {
        let delta = 100.0 * (adv.auc(variant) - cons.auc(variant));
        Self {
            variant,
            cons,
            adv,
            delta,
        }
    }
}

fn scored(pairs: &[NLIPair], preds: &[PredictionRecord]) -> Result<Vec<(f64, bool)>> {
    let joined = join_predictions(pairs, preds)?;
    Ok(pairs
        .iter()
        .zip(joined)
        .map(|(pair, pred)| (pred.score, pair.label().is_entail()))
        .collect())
}

pub fn evaluate_subsets(
    cons: &[NLIPair],
    adv: &[NLIPair],
    preds: &[PredictionRecord],
    variant: AucVariant,
) -> Result<GapReport> {
    let cons_scores = scored(cons, preds);
    let adv_scores = scored(adv, preds);
    let (cons_scores, adv_scores) = match (cons_scores, adv_scores) {
        (Ok(c), Ok(a)) => (c, a),
        (Err(Error::Join { mut missing }), Err(Error::Join { missing: more })) => {
            missing.extend(more);
            return Err(Error::Join { missing });
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let cons = evaluate_scores("cons", &cons_scores)?;
    let adv = evaluate_scores("adv", &adv_scores)?;
    Ok(GapReport::new(cons, adv, variant))
}
