//! Command-line front end.
//!
//! Every flag may also be set in a flat `key = value` config file passed with
//! `--config`; keys are the long flag names (`-` or `_` separators). Flags
//! given on the command line win over the file.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bias::{bias_records, correctness_grouped_stats, label_stats};
use crate::error::{Error, Result};
use crate::eval::{evaluate_subsets, AucVariant};
use crate::frequency::{
    default_stoplist, load_frequency_table, ExceptionTable, ExtractionMode, FrequencyTable, FrequencyUnit,
    PredicateExtractor, VerbLemmatizer,
};
use crate::ingest::{directional_subset, parse_dataset, parse_predictions, write_dataset, DatasetFormat, NLIPair};
use crate::partition::{classify_consistency_with, partition_dataset_with, TieRule};
use crate::prompts::{render_inference_prompt, render_training_example};
use crate::report::{self, BiasReport, BiasRow, OutputFormat, PartitionSummary, WordnetReport};
use crate::wordnet::{
    count_hypernym_direction, extract_hypo_hyper_pairs, load_exceptions_dir, load_verb_graph_dir,
    pair_frequency_summary, HypernymMode, VerbSenseGraph,
};

#[derive(Debug, Parser)]
#[command(
    name = "freqbias",
    version,
    about = "Predicate-frequency bias diagnostics for NLI datasets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Mean premise and hypothesis frequency per label (and per prediction
    /// correctness when predictions are given).
    Stats,
    /// Per-pair frequencies, bias and partition tag.
    Bias,
    /// Write the bias-consistent and bias-adversarial subsets.
    Partition,
    /// AUC on both subsets and their gap.
    Eval,
    /// Hyponym/hypernym frequency summary and hypernym direction counts.
    Wordnet,
    /// Render training or few-shot inference prompts as JSON lines.
    Prompts,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Stats => "stats",
            Command::Bias => "bias",
            Command::Partition => "partition",
            Command::Eval => "eval",
            Command::Wordnet => "wordnet",
            Command::Prompts => "prompts",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PromptSet {
    Train,
    Inference,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat `key = value` file with defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub dataset: Option<PathBuf>,
    /// triple or sentence
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub freq_table: Option<PathBuf>,
    /// proportion or zipf
    #[arg(long, global = true)]
    pub freq_unit: Option<String>,
    /// Directory holding index.verb, data.verb and verb.exc.
    #[arg(long, global = true)]
    pub dict_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub predictions: Option<PathBuf>,
    /// triple, annotated or lexicon
    #[arg(long, global = true)]
    pub extraction: Option<String>,
    /// File with one stop word per line, replacing the default list.
    #[arg(long, global = true)]
    pub stoplist: Option<PathBuf>,
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub lemmatize: Option<String>,
    /// roc or pr
    #[arg(long, global = true)]
    pub auc: Option<String>,
    /// Where zero-bias pairs go: adversarial or consistent.
    #[arg(long, global = true)]
    pub ties: Option<String>,
    #[arg(long, global = true)]
    pub threshold: Option<String>,
    /// Keep only pairs whose inverse has the opposite label.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub directional: Option<String>,
    /// closure or direct
    #[arg(long, global = true)]
    pub hypernym_mode: Option<String>,
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub include_multiword: Option<String>,
    /// train or inference
    #[arg(long, global = true)]
    pub prompt_set: Option<String>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// tsv or json
    #[arg(long, global = true)]
    pub output_format: Option<String>,
}

impl Flags {
    /// Fills every unset flag from the config entries.
    fn merge_config(&mut self, entries: BTreeMap<String, String>) -> Result<()> {
        for (key, value) in entries {
            let path = || Some(PathBuf::from(&value));
            let text = || Some(value.clone());
            match key.as_str() {
                "dataset" => self.dataset = self.dataset.take().or_else(path),
                "format" => self.format = self.format.take().or_else(text),
                "freq_table" => self.freq_table = self.freq_table.take().or_else(path),
                "freq_unit" => self.freq_unit = self.freq_unit.take().or_else(text),
                "dict_dir" => self.dict_dir = self.dict_dir.take().or_else(path),
                "predictions" => self.predictions = self.predictions.take().or_else(path),
                "extraction" => self.extraction = self.extraction.take().or_else(text),
                "stoplist" => self.stoplist = self.stoplist.take().or_else(path),
                "lemmatize" => self.lemmatize = self.lemmatize.take().or_else(text),
                "auc" => self.auc = self.auc.take().or_else(text),
                "ties" => self.ties = self.ties.take().or_else(text),
                "threshold" => self.threshold = self.threshold.take().or_else(text),
                "directional" => self.directional = self.directional.take().or_else(text),
                "hypernym_mode" => self.hypernym_mode = self.hypernym_mode.take().or_else(text),
                "include_multiword" => self.include_multiword = self.include_multiword.take().or_else(text),
                "prompt_set" => self.prompt_set = self.prompt_set.take().or_else(text),
                "output_dir" => self.output_dir = self.output_dir.take().or_else(path),
                "output_format" => self.output_format = self.output_format.take().or_else(text),
                other => return Err(Error::Config(format!("unknown config key {other:?}"))),
            }
        }
        Ok(())
    }
}

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected `key = value`", idx + 1)))?;
        let key = key.trim().replace('-', "_");
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Error::Config(format!("config line {}: {key} set twice", idx + 1)));
        }
    }
    Ok(out)
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset_path: Option<PathBuf>,
    pub dataset_format: DatasetFormat,
    pub frequency_table_path: Option<PathBuf>,
    pub frequency_unit: FrequencyUnit,
    pub dictionary_dir: Option<PathBuf>,
    pub predictions_path: Option<PathBuf>,
    pub extraction_mode: ExtractionMode,
    pub stoplist_path: Option<PathBuf>,
    pub lemmatize: bool,
    pub auc_variant: AucVariant,
    pub tie_rule: TieRule,
    pub threshold: f64,
    pub directional: bool,
    pub hypernym_mode: HypernymMode,
    pub include_multiword: bool,
    pub prompt_set: PromptSet,
    pub output_dir: Option<PathBuf>,
    pub output_format: OutputFormat,
}

fn choice<T>(flag: &str, value: Option<&str>, default: T, parse: impl Fn(&str) -> Option<T>) -> Result<T> {
    match value {
        None => Ok(default),
        Some(v) => parse(v).ok_or_else(|| Error::Config(format!("--{flag}: invalid value {v:?}"))),
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

impl RunConfig {
    pub fn from_flags(flags: &Flags) -> Result<Self> {
        let dataset_format = choice("format", flags.format.as_deref(), DatasetFormat::Triple, |v| {
            match v.to_ascii_lowercase().as_str() {
                "triple" => Some(DatasetFormat::Triple),
                "sentence" => Some(DatasetFormat::Sentence),
                _ => None,
            }
        })?;
        let default_mode = match dataset_format {
            DatasetFormat::Triple => ExtractionMode::Triple,
            DatasetFormat::Sentence => ExtractionMode::Annotated,
        };
        Ok(Self {
            dataset_path: flags.dataset.clone(),
            dataset_format,
            frequency_table_path: flags.freq_table.clone(),
            frequency_unit: choice(
                "freq-unit",
                flags.freq_unit.as_deref(),
                FrequencyUnit::Proportion,
                |v| match v.to_ascii_lowercase().as_str() {
                    "proportion" => Some(FrequencyUnit::Proportion),
                    "zipf" => Some(FrequencyUnit::Zipf),
                    _ => None,
                },
            )?,
            dictionary_dir: flags.dict_dir.clone(),
            predictions_path: flags.predictions.clone(),
            extraction_mode: choice("extraction", flags.extraction.as_deref(), default_mode, |v| {
                match v.to_ascii_lowercase().as_str() {
                    "triple" => Some(ExtractionMode::Triple),
                    "annotated" => Some(ExtractionMode::Annotated),
                    "lexicon" => Some(ExtractionMode::Lexicon),
                    _ => None,
                }
            })?,
            stoplist_path: flags.stoplist.clone(),
            lemmatize: choice("lemmatize", flags.lemmatize.as_deref(), true, parse_bool)?,
            auc_variant: choice("auc", flags.auc.as_deref(), AucVariant::Roc, |v| v.parse().ok())?,
            tie_rule: choice("ties", flags.ties.as_deref(), TieRule::Adversarial, |v| v.parse().ok())?,
            threshold: choice("threshold", flags.threshold.as_deref(), 0.5, |v| {
                v.parse::<f64>().ok().filter(|t| (0.0..=1.0).contains(t))
            })?,
            directional: choice("directional", flags.directional.as_deref(), false, parse_bool)?,
            hypernym_mode: choice(
                "hypernym-mode",
                flags.hypernym_mode.as_deref(),
                HypernymMode::Closure,
                |v| v.parse().ok(),
            )?,
            include_multiword: choice(
                "include-multiword",
                flags.include_multiword.as_deref(),
                false,
                parse_bool,
            )?,
            prompt_set: choice("prompt-set", flags.prompt_set.as_deref(), PromptSet::Inference, |v| {
                PromptSet::from_str(v, true).ok()
            })?,
            output_dir: flags.output_dir.clone(),
            output_format: choice(
                "output-format",
                flags.output_format.as_deref(),
                OutputFormat::Tsv,
                |v| v.parse().ok(),
            )?,
        })
    }

    /// Checks that the flags a subcommand needs are present and that every
    /// given input path exists, before any work starts.
    pub fn validate(&self, command: Command) -> Result<()> {
        let need = |present: bool, flag: &str| {
            if present {
                Ok(())
            } else {
                Err(Error::Config(format!("{} requires --{flag}", command.name())))
            }
        };
        match command {
            Command::Stats | Command::Bias | Command::Partition => {
                need(self.dataset_path.is_some(), "dataset")?;
                need(self.frequency_table_path.is_some(), "freq-table")?;
            }
            Command::Eval => {
                need(self.dataset_path.is_some(), "dataset")?;
                need(self.frequency_table_path.is_some(), "freq-table")?;
                need(self.predictions_path.is_some(), "predictions")?;
            }
            Command::Wordnet => {
                need(self.dictionary_dir.is_some(), "dict-dir")?;
                need(self.frequency_table_path.is_some(), "freq-table")?;
            }
            Command::Prompts => need(self.dataset_path.is_some(), "dataset")?,
        }
        if self.extraction_mode == ExtractionMode::Lexicon && command != Command::Prompts {
            need(self.dictionary_dir.is_some(), "dict-dir")?;
        }
        for (flag, path) in [
            ("dataset", &self.dataset_path),
            ("freq-table", &self.frequency_table_path),
            ("dict-dir", &self.dictionary_dir),
            ("predictions", &self.predictions_path),
            ("stoplist", &self.stoplist_path),
        ] {
            if let Some(p) = path {
                if !p.exists() {
                    return Err(Error::Config(format!("--{flag}: {} does not exist", p.display())));
                }
            }
        }
        Ok(())
    }
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| Error::io(path, e))
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::Config(format!("missing --{flag}")))
}

struct Inputs {
    graph: Option<VerbSenseGraph>,
    exceptions: ExceptionTable,
    table: Option<FrequencyTable>,
}

impl Inputs {
    fn load(config: &RunConfig) -> Result<Self> {
        let (graph, exceptions) = match &config.dictionary_dir {
            Some(dir) => (Some(load_verb_graph_dir(dir)?), load_exceptions_dir(dir)?),
            None => (None, ExceptionTable::new()),
        };
        let table = match &config.frequency_table_path {
            Some(path) => {
                let tag = path
                    .file_name()
                    .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
                let (table, load) = load_frequency_table(open(path)?, config.frequency_unit, tag)?;
                log::info!(
                    "frequency table: {} entries, {} duplicates",
                    load.entries,
                    load.duplicates
                );
                Some(table)
            }
            None => None,
        };
        Ok(Self {
            graph,
            exceptions,
            table,
        })
    }

    fn table(&self) -> Result<&FrequencyTable> {
        self.table
            .as_ref()
            .ok_or_else(|| Error::Config("missing --freq-table".into()))
    }

    /// Verb lemmas of the dictionary if loaded, otherwise the frequency
    /// table vocabulary.
    fn lexicon(&self) -> HashSet<String> {
        match (&self.graph, &self.table) {
            (Some(g), _) => g.lemmas().map(str::to_string).collect(),
            (None, Some(t)) => t.tokens().map(str::to_string).collect(),
            (None, None) => HashSet::new(),
        }
    }
}

fn read_stoplist(path: &Path) -> Result<HashSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect())
}

fn load_pairs(config: &RunConfig, inputs: &Inputs) -> Result<Vec<NLIPair>> {
    let path = required(&config.dataset_path, "dataset")?;
    let mut pairs = parse_dataset(open(path)?, config.dataset_format)?;
    if config.directional {
        pairs = directional_subset(&pairs);
        log::info!("directional subset: {} pair(s)", pairs.len());
    }
    let stoplist = match &config.stoplist_path {
        Some(p) => read_stoplist(p)?,
        None => default_stoplist(),
    };
    let lemmatizer = VerbLemmatizer::new(inputs.exceptions.clone(), inputs.lexicon());
    let extractor =
        PredicateExtractor::new(config.extraction_mode, lemmatizer, stoplist)?.with_lemmatization(config.lemmatize);
    extractor.annotate(&mut pairs)?;
    Ok(pairs)
}

fn render<T: serde::Serialize>(
    format: OutputFormat,
    name: &str,
    body: &T,
    tsv: impl Fn(&T) -> String,
) -> Result<String> {
    match format {
        OutputFormat::Tsv => Ok(tsv(body)),
        OutputFormat::Json => report::to_json(name, body),
    }
}

fn emit(config: &RunConfig, name: &str, text: &str, extension: &str, out: &mut dyn Write) -> Result<()> {
    match &config.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let path = dir.join(format!("{name}.{extension}"));
            fs::write(&path, text).map_err(|e| Error::io(&path, e))
        }
        None => out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e)),
    }
}

#[derive(serde::Serialize)]
struct StatsBody<'a> {
    label_stats: &'a crate::bias::LabelStatsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    grouped: Option<&'a crate::bias::GroupedStatsReport>,
}

fn subset_path(dir: &Path, stem: &str, tag: &str, ext: &str) -> PathBuf {
    dir.join(format!("{stem}.{tag}.{ext}"))
}

/// Executes one subcommand, writing its report to `out` (or to the output
/// directory when one is configured).
pub fn run(config: &RunConfig, command: Command, out: &mut dyn Write) -> Result<()> {
    config.validate(command)?;
    let inputs = Inputs::load(config)?;
    let format = config.output_format;
    let ext = format.extension();
    match command {
        Command::Stats => {
            let pairs = load_pairs(config, &inputs)?;
            let table = inputs.table()?;
            let stats = label_stats(&pairs, table)?;
            let grouped = match &config.predictions_path {
                Some(p) => {
                    let preds = parse_predictions(open(p)?)?;
                    Some(correctness_grouped_stats(&pairs, &preds, table, config.threshold)?)
                }
                None => None,
            };
            let text = match format {
                OutputFormat::Tsv => {
                    let mut t = report::label_stats_tsv(&stats);
                    if let Some(g) = &grouped {
                        t.push('\n');
                        t.push_str(&report::grouped_stats_tsv(g));
                    }
                    t
                }
                OutputFormat::Json => report::to_json(
                    "stats",
                    &StatsBody {
                        label_stats: &stats,
                        grouped: grouped.as_ref(),
                    },
                )?,
            };
            emit(config, "stats", &text, ext, out)
        }
        Command::Bias => {
            let pairs = load_pairs(config, &inputs)?;
            let (records, skipped) = bias_records(&pairs, inputs.table()?);
            let body = BiasReport {
                records: records
                    .into_iter()
                    .map(|record| BiasRow {
                        tag: classify_consistency_with(&record, config.tie_rule),
                        record,
                    })
                    .collect(),
                skipped,
            };
            emit(
                config,
                "bias",
                &render(format, "bias", &body, report::bias_tsv)?,
                ext,
                out,
            )
        }
        Command::Partition => {
            let pairs = load_pairs(config, &inputs)?;
            let part = partition_dataset_with(&pairs, inputs.table()?, config.tie_rule);
            let dataset = required(&config.dataset_path, "dataset")?;
            let dir = match &config.output_dir {
                Some(d) => d.clone(),
                None => dataset.parent().map(Path::to_path_buf).unwrap_or_default(),
            };
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let stem = dataset
                .file_stem()
                .map_or("dataset".into(), |s| s.to_string_lossy().into_owned());
            let data_ext = dataset.extension().map_or_else(
                || match config.dataset_format {
                    DatasetFormat::Triple => "tsv".to_string(),
                    DatasetFormat::Sentence => "jsonl".to_string(),
                },
                |e| e.to_string_lossy().into_owned(),
            );
            let mut files = Vec::new();
            for (tag, subset) in [("cons", &part.cons), ("adv", &part.adv)] {
                let path = subset_path(&dir, &stem, tag, &data_ext);
                fs::write(&path, write_dataset(subset, config.dataset_format)?).map_err(|e| Error::io(&path, e))?;
                files.push(path);
            }
            let skipped_path = dir.join(format!("{stem}.skipped.txt"));
            let skipped_text: String = part.skipped.iter().map(|id| format!("{id}\n")).collect();
            fs::write(&skipped_path, skipped_text).map_err(|e| Error::io(&skipped_path, e))?;
            files.push(skipped_path);
            let summary = PartitionSummary {
                n_cons: part.cons.len(),
                n_adv: part.adv.len(),
                skipped: part.skipped,
                files: files
                    .iter()
                    .filter_map(|p| p.file_name())
                    .map(|n| n.to_string_lossy().into_owned())
                    .collect(),
            };
            let text = render(format, "partition", &summary, report::partition_tsv)?;
            out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
        }
        Command::Eval => {
            let pairs = load_pairs(config, &inputs)?;
            let part = partition_dataset_with(&pairs, inputs.table()?, config.tie_rule);
            let preds = parse_predictions(open(required(&config.predictions_path, "predictions")?)?)?;
            let gap = evaluate_subsets(&part.cons, &part.adv, &preds, config.auc_variant)?;
            emit(
                config,
                "eval",
                &render(format, "eval", &gap, report::gap_tsv)?,
                ext,
                out,
            )
        }
        Command::Wordnet => {
            let graph = inputs
                .graph
                .as_ref()
                .ok_or_else(|| Error::Config("wordnet requires --dict-dir".into()))?;
            let table = inputs.table()?;
            let pairs = extract_hypo_hyper_pairs(graph, config.include_multiword);
            let summary = pair_frequency_summary(&pairs, table)?;
            let direction = match &config.dataset_path {
                Some(_) => Some(count_hypernym_direction(
                    &load_pairs(config, &inputs)?,
                    graph,
                    config.hypernym_mode,
                )),
                None => None,
            };
            let body = WordnetReport {
                ratio: summary.ratio(),
                summary,
                direction,
            };
            emit(
                config,
                "wordnet",
                &render(format, "wordnet", &body, report::wordnet_tsv)?,
                ext,
                out,
            )
        }
        Command::Prompts => {
            let path = required(&config.dataset_path, "dataset")?;
            let mut pairs = parse_dataset(open(path)?, config.dataset_format)?;
            if config.directional {
                pairs = directional_subset(&pairs);
            }
            let rendered = pairs
                .iter()
                .map(|p| match config.prompt_set {
                    PromptSet::Train => render_training_example(p),
                    PromptSet::Inference => render_inference_prompt(p),
                })
                .collect::<Result<Vec<_>>>()?;
            let text = report::prompts_jsonl(pairs.iter().map(NLIPair::id).zip(rendered.iter()))?;
            emit(config, "prompts", &text, "jsonl", out)
        }
    }
}

/// Resolves flags and config file into a [`RunConfig`].
pub fn resolve(mut flags: Flags) -> Result<RunConfig> {
    if let Some(path) = flags.config.clone() {
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        flags.merge_config(parse_config(&text)?)?;
    }
    RunConfig::from_flags(&flags)
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let one_line = message.split_whitespace().collect::<Vec<_>>().join(" ");
    eprintln!("error[{kind}]: {one_line}");
    ExitCode::from(code)
}

pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            return fail("usage", first, 1);
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match resolve(cli.flags).and_then(|config| run(&config, cli.command, &mut lock)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string(), e.exit_code()),
    }
}
