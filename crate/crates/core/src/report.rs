//! TSV and JSON serialization of every report. TSV output starts with a
//! `#`-prefixed header row; JSON output carries a `schema_version` field.
//! Numbers are formatted with fixed precision so output is byte-stable.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bias::{BiasRecord, GroupedStatsReport, LabelStatsReport};
use crate::error::{Error, Result};
use crate::eval::{EvalReport, GapReport};
use crate::partition::PartitionTag;
use crate::prompts::RenderedPrompt;
use crate::wordnet::{DirectionReport, PairFrequencySummary};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Tsv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(OutputFormat::Tsv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("unknown output format {s:?} (expected tsv or json)")),
        }
    }
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Tsv => "tsv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    report: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON wrapped with the schema version and the report name.
pub fn to_json<T: Serialize>(report: &str, body: &T) -> Result<String> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        report,
        body,
    };
    let mut out = serde_json::to_string_pretty(&envelope).map_err(|e| Error::Contract(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

fn f4(v: f64) -> String {
    format!("{v:.4}")
}

fn pct(v: f64) -> String {
    format!("{:.1}", 100.0 * v)
}

fn dash<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_else(|| "-".into())
}

fn skipped_line(out: &mut String, skipped: &[String]) {
    let ids = if skipped.is_empty() {
        "-".to_string()
    } else {
        skipped.join(",")
    };
    let _ = writeln!(out, "# skipped\t{}\t{ids}", skipped.len());
}

pub fn label_stats_tsv(report: &LabelStatsReport) -> String {
    let mut out = String::from("# label\tn_pairs\tmean_prem\tmean_hypo\tmore_frequent\n");
    for s in &report.stats {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{:?}",
            s.label,
            s.n_pairs,
            f4(s.mean_prem.value()),
            f4(s.mean_hypo.value()),
            s.more_frequent
        );
    }
    skipped_line(&mut out, &report.skipped);
    out
}

pub fn grouped_stats_tsv(report: &GroupedStatsReport) -> String {
    let mut out = String::from("# label\tcorrect\tn_pairs\tmean_prem\tmean_hypo\toriented_bias\tverdict\n");
    for g in &report.groups {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            g.label,
            g.correct,
            g.n_pairs,
            dash(g.mean_prem, |v| f4(v.value())),
            dash(g.mean_hypo, |v| f4(v.value())),
            dash(g.oriented_bias, f4),
            dash(g.verdict, |v| format!("{v:?}")),
        );
    }
    skipped_line(&mut out, &report.skipped);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasRow {
    #[serde(flatten)]
    pub record: BiasRecord,
    pub tag: PartitionTag,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasReport {
    pub records: Vec<BiasRow>,
    pub skipped: Vec<String>,
}

pub fn bias_tsv(report: &BiasReport) -> String {
    let mut out = String::from("# pair_id\tlabel\tfreq_prem\tfreq_hypo\tbias\ttag\n");
    for row in &report.records {
        let r = &row.record;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{:?}",
            r.pair_id,
            r.label,
            f4(r.freq_prem.value()),
            f4(r.freq_hypo.value()),
            f4(r.bias),
            row.tag
        );
    }
    skipped_line(&mut out, &report.skipped);
    out
}

fn eval_row(out: &mut String, r: &EvalReport) {
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}",
        r.subset_name,
        r.n_pos,
        r.n_neg,
        pct(r.roc_auc),
        pct(r.pr_auc)
    );
}

/// AUC columns are on the ×100 scale with one decimal.
pub fn gap_tsv(report: &GapReport) -> String {
    let mut out = String::from("# subset\tn_pos\tn_neg\troc_auc\tpr_auc\n");
    eval_row(&mut out, &report.cons);
    eval_row(&mut out, &report.adv);
    let _ = writeln!(out, "# delta\t{}\t{:.1}", report.variant, report.delta);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSummary {
    pub n_cons: usize,
    pub n_adv: usize,
    pub skipped: Vec<String>,
    pub files: Vec<String>,
}

pub fn partition_tsv(summary: &PartitionSummary) -> String {
    let mut out = String::from("# subset\tn_pairs\n");
    let _ = writeln!(out, "cons\t{}", summary.n_cons);
    let _ = writeln!(out, "adv\t{}", summary.n_adv);
    let _ = writeln!(out, "skipped\t{}", summary.skipped.len());
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordnetReport {
    pub summary: PairFrequencySummary,
    pub ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<DirectionReport>,
}

pub fn wordnet_tsv(report: &WordnetReport) -> String {
    let s = &report.summary;
    let mut out = String::from("# n_pairs\tn_excluded\tmean_hyponym\tmean_hypernym\tratio\tcoverage\n");
    let _ = writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}",
        s.n_pairs,
        s.n_excluded,
        f4(s.mean_hyponym.value()),
        f4(s.mean_hypernym.value()),
        f4(report.ratio),
        f4(s.coverage)
    );
    if let Some(d) = &report.direction {
        out.push('\n');
        out.push_str("# label\thypernym_in_hypothesis\thypernym_in_premise\n");
        for l in &d.labels {
            let _ = writeln!(
                out,
                "{}\t{}\t{}",
                l.label, l.counts.hypernym_in_hypothesis, l.counts.hypernym_in_premise
            );
        }
        skipped_line(&mut out, &d.skipped);
        let cycles = if d.cycles.is_empty() {
            "-".to_string()
        } else {
            d.cycles.join(",")
        };
        let _ = writeln!(out, "# cycles\t{}\t{cycles}", d.cycles.len());
    }
    out
}

#[derive(Serialize)]
struct PromptLine<'a> {
    id: &'a str,
    kind: crate::prompts::PromptKind,
    text: &'a str,
}

/// One JSON object per line: `{"id", "kind", "text"}`.
pub fn prompts_jsonl<'a>(prompts: impl IntoIterator<Item = (&'a str, &'a RenderedPrompt)>) -> Result<String> {
    let mut out = String::new();
    for (id, p) in prompts {
        let line = PromptLine {
            id,
            kind: p.kind,
            text: &p.text,
        };
        out.push_str(&serde_json::to_string(&line).map_err(|e| Error::Contract(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}
