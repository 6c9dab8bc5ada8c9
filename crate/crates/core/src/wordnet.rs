//! Verb hypernym graph read from WordNet database files, hyponym/hypernym
//! lemma pairs and the frequency and direction analyses built on them.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequency::{predicate_frequency, ExceptionTable, FrequencyTable, ScaledFrequency};
use crate::ingest::{Label, NLIPair, Predicate, Statement};
use crate::stats::CompensatedSum;

pub type Offset = u64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbSynset {
    pub offset: Offset,
    /// Lowercased, multiword lemmas joined by `_`.
    pub lemmas: Vec<String>,
    pub hypernym_offsets: Vec<Offset>,
}

#[derive(Debug, Clone, Default)]
pub struct VerbSenseGraph {
    synsets: BTreeMap<Offset, VerbSynset>,
    lemma_index: BTreeMap<String, Vec<Offset>>,
}

impl VerbSenseGraph {
    /// Builds the graph and its lemma index, rejecting duplicate offsets and
    /// hypernym pointers to synsets that are not present.
    pub fn from_synsets(synsets: impl IntoIterator<Item = VerbSynset>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for s in synsets {
            let offset = s.offset;
            if map.insert(offset, s).is_some() {
                return Err(Error::Integrity(format!("duplicate synset offset {offset:08}")));
            }
        }
        let mut lemma_index: BTreeMap<String, Vec<Offset>> = BTreeMap::new();
        for s in map.values() {
            if let Some(missing) = s.hypernym_offsets.iter().find(|o| !map.contains_key(o)) {
                return Err(Error::Integrity(format!(
                    "synset {:08} points to missing hypernym {missing:08}",
                    s.offset
                )));
            }
            for lemma in &s.lemmas {
                lemma_index.entry(lemma.clone()).or_default().push(s.offset);
            }
        }
        for offsets in lemma_index.values_mut() {
            offsets.sort_unstable();
            offsets.dedup();
        }
        Ok(Self {
            synsets: map,
            lemma_index,
        })
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, offset: Offset) -> Option<&VerbSynset> {
        self.synsets.get(&offset)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &VerbSynset> {
        self.synsets.values()
    }

    pub fn senses(&self, lemma: &str) -> &[Offset] {
        self.lemma_index.get(lemma).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains_lemma(&self, lemma: &str) -> bool {
        self.lemma_index.contains_key(lemma)
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemma_index.keys().map(String::as_str)
    }

    pub fn edge_count(&self) -> usize {
        self.synsets.values().map(|s| s.hypernym_offsets.len()).sum()
    }
}

/// Splits a database file into `(byte offset, line)` records, skipping the
/// license header (lines starting with two spaces) and blank lines.
fn records(bytes: &[u8]) -> impl Iterator<Item = (usize, &[u8])> {
    let mut pos = 0;
    std::iter::from_fn(move || loop {
        if pos >= bytes.len() {
            return None;
        }
        let start = pos;
        let end = bytes[start..]
            .iter()
            .position(|&b| b == b'\n')
            .map_or(bytes.len(), |i| start + i);
        pos = end + 1;
        let mut line = &bytes[start..end];
        if line.last() == Some(&b'\r') {
            line = &line[..line.len() - 1];
        }
        if line.starts_with(b"  ") || line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        return Some((start, line));
    })
}

fn read_all(mut input: impl Read, what: &str) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf).map_err(|e| Error::io(what, e))?;
    Ok(buf)
}

struct Fields<'a> {
    offset: usize,
    inner: std::str::SplitAsciiWhitespace<'a>,
}

impl<'a> Fields<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str> {
        self.inner.next().ok_or_else(|| Error::Record {
            offset: self.offset,
            message: format!("record ends before {what}"),
        })
    }

    fn number<T: TryFrom<u64>>(&mut self, what: &str, radix_hex: bool) -> Result<T> {
        let raw = self.next(what)?;
        let parsed = if radix_hex {
            u64::from_str_radix(raw, 16).ok()
        } else {
            raw.parse::<u64>().ok()
        };
        parsed.and_then(|v| T::try_from(v).ok()).ok_or_else(|| Error::Record {
            offset: self.offset,
            message: format!("bad {what} {raw:?}"),
        })
    }
}

fn line_str(offset: usize, line: &[u8]) -> Result<&str> {
    std::str::from_utf8(line).map_err(|_| Error::Record {
        offset,
        message: "record is not valid UTF-8".into(),
    })
}

fn parse_data_record(offset: usize, line: &[u8]) -> Result<VerbSynset> {
    let text = line_str(offset, line)?;
    let body = text.split_once(" | ").map_or(text, |(b, _)| b);
    let mut f = Fields {
        offset,
        inner: body.split_ascii_whitespace(),
    };
    let synset_offset: Offset = f.number("synset offset", false)?;
    f.next("lexicographer file number")?;
    let ss_type = f.next("synset type")?;
    if ss_type != "v" {
        return Err(Error::Record {
            offset,
            message: format!("synset type {ss_type:?} in a verb data file"),
        });
    }
    let w_cnt: usize = f.number("word count", true)?;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        lemmas.push(f.next("word")?.to_lowercase());
        f.next("lexical id")?;
    }
    let p_cnt: usize = f.number("pointer count", false)?;
    let mut hypernym_offsets = Vec::new();
    for _ in 0..p_cnt {
        let symbol = f.next("pointer symbol")?;
        let target: Offset = f.number("pointer offset", false)?;
        let pos = f.next("pointer part of speech")?;
        f.next("pointer source/target")?;
        if symbol == "@" && pos == "v" {
            hypernym_offsets.push(target);
        }
    }
    Ok(VerbSynset {
        offset: synset_offset,
        lemmas,
        hypernym_offsets,
    })
}

fn parse_index_record(offset: usize, line: &[u8]) -> Result<(String, Vec<Offset>)> {
    let text = line_str(offset, line)?;
    let mut f = Fields {
        offset,
        inner: text.split_ascii_whitespace(),
    };
    let lemma = f.next("lemma")?.to_lowercase();
    f.next("part of speech")?;
    let synset_cnt: usize = f.number("synset count", false)?;
    let p_cnt: usize = f.number("pointer count", false)?;
    for _ in 0..p_cnt {
        f.next("pointer symbol")?;
    }
    f.next("sense count")?;
    f.next("tagged sense count")?;
    let offsets = (0..synset_cnt)
        .map(|_| f.number::<Offset>("synset offset", false))
        .collect::<Result<Vec<_>>>()?;
    Ok((lemma, offsets))
}

/// Reads `index.verb` and `data.verb`. Only `@` pointers to verb synsets
/// become edges. Index entries must refer to synsets of the data file.
pub fn load_verb_graph(index_file: impl Read, data_file: impl Read) -> Result<VerbSenseGraph> {
    let data = read_all(data_file, "<data.verb>")?;
    let synsets = records(&data)
        .map(|(offset, line)| parse_data_record(offset, line))
        .collect::<Result<Vec<_>>>()?;
    let mut graph = VerbSenseGraph::from_synsets(synsets)?;

    let index = read_all(index_file, "<index.verb>")?;
    for (offset, line) in records(&index) {
        let (lemma, offsets) = parse_index_record(offset, line)?;
        if let Some(missing) = offsets.iter().find(|o| !graph.synsets.contains_key(o)) {
            return Err(Error::Integrity(format!(
                "index entry {lemma:?} refers to missing synset {missing:08}"
            )));
        }
        let entry = graph.lemma_index.entry(lemma).or_default();
        entry.extend(offsets);
        entry.sort_unstable();
        entry.dedup();
    }
    Ok(graph)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Loads `index.verb` and `data.verb` from a dictionary directory.
pub fn load_verb_graph_dir(dir: &Path) -> Result<VerbSenseGraph> {
    load_verb_graph(open(&dir.join("index.verb"))?, open(&dir.join("data.verb"))?)
}

/// Loads `verb.exc` from a dictionary directory; a missing file gives an
/// empty table.
pub fn load_exceptions_dir(dir: &Path) -> Result<ExceptionTable> {
    let path = dir.join("verb.exc");
    if !path.exists() {
        log::warn!("{} not found, lemmatizing without exceptions", path.display());
        return Ok(ExceptionTable::new());
    }
    ExceptionTable::parse(open(&path)?)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HypoHyperPair {
    pub hyponym_lemma: String,
    pub hypernym_lemma: String,
}

/// Every (hyponym lemma, hypernym lemma) combination over the direct
/// hypernym edges, sorted and deduplicated, without identical lemmas.
pub fn extract_hypo_hyper_pairs(graph: &VerbSenseGraph, include_multiword: bool) -> Vec<HypoHyperPair> {
    let keep = |l: &&String| include_multiword || !l.contains('_');
    let mut out = BTreeSet::new();
    for synset in graph.synsets() {
        for hyper in synset.hypernym_offsets.iter().filter_map(|o| graph.synset(*o)) {
            for hypo_lemma in synset.lemmas.iter().filter(keep) {
                for hyper_lemma in hyper.lemmas.iter().filter(keep) {
                    if hypo_lemma != hyper_lemma {
                        out.insert(HypoHyperPair {
                            hyponym_lemma: hypo_lemma.clone(),
                            hypernym_lemma: hyper_lemma.clone(),
                        });
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Frequency of a lemma on the display scale; multiword lemmas are scored as
/// phrases over their `_`-separated tokens. `None` when out of vocabulary.
pub fn lemma_frequency(table: &FrequencyTable, lemma: &str) -> Option<ScaledFrequency> {
    let predicate = Predicate::from_annotation(lemma).ok()?;
    if !predicate.tokens().iter().all(|t| table.contains(t)) {
        return None;
    }
    Some(ScaledFrequency::from_proportion(predicate_frequency(table, &predicate)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredHypoHyperPair {
    pub hyponym_lemma: String,
    pub hypernym_lemma: String,
    pub freq_hypo_lemma: ScaledFrequency,
    pub freq_hyper_lemma: ScaledFrequency,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairFrequencySummary {
    pub n_pairs: usize,
    /// Pairs whose lemmas are both out of vocabulary.
    pub n_excluded: usize,
    pub mean_hyponym: ScaledFrequency,
    pub mean_hypernym: ScaledFrequency,
    /// Share of pair sides (two per input pair) found in the table.
    pub coverage: f64,
}

impl PairFrequencySummary {
    pub fn ratio(&self) -> f64 {
        self.mean_hypernym.value() / self.mean_hyponym.value()
    }
}

/// Attaches frequencies to pairs; out-of-vocabulary sides score 0. Pairs with
/// both sides out of vocabulary are dropped.
pub fn score_pairs(pairs: &[HypoHyperPair], table: &FrequencyTable) -> Vec<ScoredHypoHyperPair> {
    pairs
        .iter()
        .filter_map(|p| {
            let hypo = lemma_frequency(table, &p.hyponym_lemma);
            let hyper = lemma_frequency(table, &p.hypernym_lemma);
            if hypo.is_none() && hyper.is_none() {
                return None;
            }
            Some(ScoredHypoHyperPair {
                hyponym_lemma: p.hyponym_lemma.clone(),
                hypernym_lemma: p.hypernym_lemma.clone(),
                freq_hypo_lemma: hypo.unwrap_or_default(),
                freq_hyper_lemma: hyper.unwrap_or_default(),
            })
        })
        .collect()
}

pub fn pair_frequency_summary(pairs: &[HypoHyperPair], table: &FrequencyTable) -> Result<PairFrequencySummary> {
    let known_sides: usize = pairs
        .iter()
        .map(|p| {
            usize::from(lemma_frequency(table, &p.hyponym_lemma).is_some())
                + usize::from(lemma_frequency(table, &p.hypernym_lemma).is_some())
        })
        .sum();
    let scored = score_pairs(pairs, table);
    if scored.is_empty() {
        return Err(Error::EmptyStats(format!(
            "all {} hyponym/hypernym pair(s) are out of vocabulary",
            pairs.len()
        )));
    }
    let n = scored.len() as f64;
    let hypo: CompensatedSum = scored.iter().map(|p| p.freq_hypo_lemma.value()).collect();
    let hyper: CompensatedSum = scored.iter().map(|p| p.freq_hyper_lemma.value()).collect();
    Ok(PairFrequencySummary {
        n_pairs: scored.len(),
        n_excluded: pairs.len() - scored.len(),
        mean_hyponym: ScaledFrequency::from_scaled(hypo.total() / n),
        mean_hypernym: ScaledFrequency::from_scaled(hyper.total() / n),
        coverage: known_sides as f64 / (2 * pairs.len()) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HypernymRelation {
    Hypernym,
    NotHypernym,
    /// At least one lemma is absent from the graph.
    Unknown,
}

/// Whether some sense of `specific` reaches some sense of `general` through
/// one or more hypernym edges, within `max_depth` edges if given.
pub fn hypernym_relation(
    graph: &VerbSenseGraph,
    general: &str,
    specific: &str,
    max_depth: Option<usize>,
) -> HypernymRelation {
    let (targets, starts) = (graph.senses(general), graph.senses(specific));
    if targets.is_empty() || starts.is_empty() {
        return HypernymRelation::Unknown;
    }
    if general == specific {
        return HypernymRelation::NotHypernym;
    }
    let targets: HashSet<Offset> = targets.iter().copied().collect();
    let mut visited: HashSet<Offset> = starts.iter().copied().collect();
    let mut queue: VecDeque<(Offset, usize)> = starts.iter().map(|&o| (o, 0)).collect();
    while let Some((offset, depth)) = queue.pop_front() {
        if max_depth.is_some_and(|m| depth >= m) {
            continue;
        }
        let Some(synset) = graph.synset(offset) else { continue };
        for &next in &synset.hypernym_offsets {
            if targets.contains(&next) {
                return HypernymRelation::Hypernym;
            }
            if visited.insert(next) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    HypernymRelation::NotHypernym
}

pub fn is_hypernym_of(graph: &VerbSenseGraph, general: &str, specific: &str, max_depth: Option<usize>) -> bool {
    hypernym_relation(graph, general, specific, max_depth) == HypernymRelation::Hypernym
}

/// Transitive closure or direct edges only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum HypernymMode {
    #[default]
    Closure,
    Direct,
}

impl HypernymMode {
    fn max_depth(self) -> Option<usize> {
        match self {
            HypernymMode::Closure => None,
            HypernymMode::Direct => Some(1),
        }
    }
}

impl std::str::FromStr for HypernymMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "closure" | "transitive" => Ok(HypernymMode::Closure),
            "direct" => Ok(HypernymMode::Direct),
            _ => Err(format!("unknown hypernym mode {s:?} (expected closure or direct)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct DirectionCounts {
    pub hypernym_in_hypothesis: usize,
    pub hypernym_in_premise: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelDirectionCounts {
    pub label: Label,
    #[serde(flatten)]
    pub counts: DirectionCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionReport {
    pub mode: HypernymMode,
    /// Entail first, then NoEntail; both always present.
    pub labels: Vec<LabelDirectionCounts>,
    /// Pairs whose first predicates are not lemmas of the graph.
    pub skipped: Vec<String>,
    /// Pairs related in both directions, counted as neither.
    pub cycles: Vec<String>,
}

impl DirectionReport {
    pub fn counts(&self, label: Label) -> DirectionCounts {
        self.labels
            .iter()
            .find(|l| l.label == label)
            .map(|l| l.counts)
            .unwrap_or_default()
    }
}

fn first_lemma(statement: &Statement) -> Option<String> {
    statement.predicates().first().map(|p| p.tokens().join("_"))
}

pub fn count_hypernym_direction(pairs: &[NLIPair], graph: &VerbSenseGraph, mode: HypernymMode) -> DirectionReport {
    let mut counts: BTreeMap<Label, DirectionCounts> = [
        (Label::Entail, DirectionCounts::default()),
        (Label::NoEntail, DirectionCounts::default()),
    ]
    .into();
    let mut skipped = Vec::new();
    let mut cycles = Vec::new();
    for pair in pairs {
        let lemmas = first_lemma(pair.premise()).zip(first_lemma(pair.hypothesis()));
        let Some((prem, hypo)) = lemmas.filter(|(p, h)| graph.contains_lemma(p) && graph.contains_lemma(h)) else {
            skipped.push(pair.id().to_string());
            continue;
        };
        let up = is_hypernym_of(graph, &hypo, &prem, mode.max_depth());
        let down = is_hypernym_of(graph, &prem, &hypo, mode.max_depth());
        let entry = counts.entry(pair.label()).or_default();
        match (up, down) {
            (true, false) => entry.hypernym_in_hypothesis += 1,
            (false, true) => entry.hypernym_in_premise += 1,
            (true, true) => {
                log::info!("pair {}: {prem} and {hypo} are hypernyms of each other", pair.id());
                cycles.push(pair.id().to_string());
            }
            (false, false) => {}
        }
    }
    DirectionReport {
        mode,
        labels: counts
            .into_iter()
            .map(|(label, counts)| LabelDirectionCounts { label, counts })
            .collect(),
        skipped,
        cycles,
    }
}
