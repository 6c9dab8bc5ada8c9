//! Splits a dataset into pairs whose gold label agrees with the frequency
//! bias and pairs whose label goes against it.

use serde::Serialize;

use crate::bias::{bias_record, BiasRecord};
use crate::frequency::FrequencyTable;
use crate::ingest::{Label, NLIPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PartitionTag {
    Consistent,
    Adversarial,
}

/// Where zero-bias pairs go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    Adversarial,
    Consistent,
}

impl std::str::FromStr for TieRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "adversarial" | "adv" => Ok(TieRule::Adversarial),
            "consistent" | "cons" => Ok(TieRule::Consistent),
            _ => Err(format!("unknown tie rule {s:?} (expected adversarial or consistent)")),
        }
    }
}

/// Entail pairs are consistent when the hypothesis is strictly more
/// frequent, NoEntail pairs when the premise is.
pub fn classify_consistency(record: &BiasRecord) -> PartitionTag {
    classify_consistency_with(record, TieRule::Adversarial)
}

pub fn classify_consistency_with(record: &BiasRecord, ties: TieRule) -> PartitionTag {
    let agrees = match record.label {
        Label::Entail => record.bias > 0.0,
        Label::NoEntail => record.bias < 0.0,
    };
    if agrees || (record.bias == 0.0 && ties == TieRule::Consistent) {
        PartitionTag::Consistent
    } else {
        PartitionTag::Adversarial
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Partition {
    pub cons: Vec<NLIPair>,
    pub adv: Vec<NLIPair>,
    pub skipped: Vec<String>,
}

pub fn partition_dataset(pairs: &[NLIPair], table: &FrequencyTable) -> Partition {
    partition_dataset_with(pairs, table, TieRule::Adversarial)
}

pub fn partition_dataset_with(pairs: &[NLIPair], table: &FrequencyTable, ties: TieRule) -> Partition {
    let mut out = Partition::default();
    for pair in pairs {
        match bias_record(pair, table) {
            Ok(record) => match classify_consistency_with(&record, ties) {
                PartitionTag::Consistent => out.cons.push(pair.clone()),
                PartitionTag::Adversarial => out.adv.push(pair.clone()),
            },
            Err(e) => {
                log::debug!("partition: {e}");
                out.skipped.push(pair.id().to_string());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::ScaledFrequency;
    use crate::ingest::{Predicate, Role, Statement};

    fn record(label: Label, bias: f64) -> BiasRecord {
        BiasRecord {
            pair_id: "x".into(),
            freq_prem: ScaledFrequency::from_scaled(10.0),
            freq_hypo: ScaledFrequency::from_scaled(10.0 + bias),
            bias,
            label,
        }
    }

    #[test]
    fn sign_rules() {
        assert_eq!(
            classify_consistency(&record(Label::Entail, 14.32)),
            PartitionTag::Consistent
        );
        assert_eq!(
            classify_consistency(&record(Label::Entail, 0.0)),
            PartitionTag::Adversarial
        );
        assert_eq!(
            classify_consistency(&record(Label::Entail, -1.0)),
            PartitionTag::Adversarial
        );
        assert_eq!(
            classify_consistency(&record(Label::NoEntail, -3.0)),
            PartitionTag::Consistent
        );
        assert_eq!(
            classify_consistency(&record(Label::NoEntail, 0.0)),
            PartitionTag::Adversarial
        );
        assert_eq!(
            classify_consistency(&record(Label::NoEntail, 2.0)),
            PartitionTag::Adversarial
        );
    }

    #[test]
    fn tie_rule_override() {
        let r = record(Label::NoEntail, 0.0);
        assert_eq!(
            classify_consistency_with(&r, TieRule::Consistent),
            PartitionTag::Consistent
        );
        assert_eq!("cons".parse::<TieRule>().unwrap(), TieRule::Consistent);
        assert!("maybe".parse::<TieRule>().is_err());
    }

    fn pair(id: &str, prem: &str, hypo: &str) -> NLIPair {
        let stmt = |role, w: &str| {
            let preds = if w.is_empty() {
                vec![]
            } else {
                vec![Predicate::single(w).unwrap()]
            };
            Statement::from_text(role, format!("a {w} b"), preds).unwrap()
        };
        NLIPair::new(
            id,
            stmt(Role::Premise, prem),
            stmt(Role::Hypothesis, hypo),
            Label::Entail,
        )
        .unwrap()
    }

    #[test]
    fn identical_predicates_all_adversarial_and_skips_recorded() {
        let table = FrequencyTable::from_entries([("own", 0.001)], "t").unwrap();
        let pairs = [pair("0", "own", "own"), pair("1", "", "own"), pair("2", "own", "own")];
        let p = partition_dataset(&pairs, &table);
        assert!(p.cons.is_empty());
        assert_eq!(p.adv.iter().map(|p| p.id()).collect::<Vec<_>>(), ["0", "2"]);
        assert_eq!(p.skipped, ["1"]);
    }
}
