//! Word-frequency tables and the average predicate frequency of a statement.
//!
//! Frequencies are stored as corpus proportions in `[0, 1]`. The ×1000
//! display scale is applied only when a statement-level value is produced
//! ([`ScaledFrequency`]). Unknown tokens have frequency 0, and a phrase with
//! any unknown token has frequency 0 as well.

mod extract;
mod lemmatize;

use std::collections::HashMap;
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Predicate, Statement};
use crate::stats;

pub use extract::{default_stoplist, extract_predicates, ExtractionMode, PredicateExtractor, AUXILIARIES};
pub use lemmatize::{lemmatize_verb, ExceptionTable, VerbLemmatizer};

/// Multiplier between proportions and reported frequency values.
pub const DISPLAY_SCALE: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    Proportion,
    /// log10 of occurrences per billion tokens.
    Zipf,
}

/// A proportion multiplied by [`DISPLAY_SCALE`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScaledFrequency(f64);

impl ScaledFrequency {
    pub fn from_proportion(proportion: f64) -> Self {
        ScaledFrequency(DISPLAY_SCALE * proportion)
    }

    /// Wraps a value that is already on the display scale.
    pub fn from_scaled(value: f64) -> Self {
        ScaledFrequency(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for ScaledFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub fn zipf_to_proportion(zipf: f64) -> Result<f64> {
    if !(0.0..=9.0).contains(&zipf) {
        return Err(Error::Range {
            what: "zipf value".into(),
            value: zipf,
            min: 0.0,
            max: 9.0,
        });
    }
    Ok(10f64.powf(zipf - 9.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub entries: usize,
    /// Tokens that appeared more than once; the last value was kept.
    pub duplicates: usize,
}

/// Immutable token → proportion map.
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    entries: HashMap<String, f64>,
    source_tag: String,
}

impl FrequencyTable {
    pub fn from_entries<I, S>(entries: I, source_tag: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let mut map = HashMap::new();
        for (token, value) in entries {
            let token = normalize_key(token.as_ref()).map_err(Error::Contract)?;
            check_proportion(value, &token)?;
            map.insert(token, value);
        }
        Ok(Self {
            entries: map,
            source_tag: source_tag.into(),
        })
    }

    pub fn source_tag(&self) -> &str {
        &self.source_tag
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.lookup(token).is_some()
    }

    /// Table vocabulary, in no particular order.
    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn lookup(&self, token: &str) -> Option<f64> {
        if token.chars().any(char::is_uppercase) {
            self.entries.get(&token.to_lowercase()).copied()
        } else {
            self.entries.get(token).copied()
        }
    }
}

fn normalize_key(token: &str) -> std::result::Result<String, String> {
    let key = token.trim().to_lowercase();
    if key.is_empty() || key.chars().any(char::is_whitespace) {
        return Err(format!("token {token:?} is empty or contains whitespace"));
    }
    Ok(key)
}

fn check_proportion(value: f64, token: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::Range {
            what: format!("proportion for {token:?}"),
            value,
            min: 0.0,
            max: 1.0,
        });
    }
    Ok(())
}

/// Reads `token \t value` lines. `#` lines and blank lines are ignored.
pub fn load_frequency_table(
    mut input: impl Read,
    unit: FrequencyUnit,
    source_tag: impl Into<String>,
) -> Result<(FrequencyTable, LoadReport)> {
    let mut text = String::new();
    input
        .read_to_string(&mut text)
        .map_err(|e| Error::io("<frequency table>", e))?;
    let mut entries = HashMap::new();
    let mut report = LoadReport::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(token), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(line_no, "expected `token<TAB>value`"));
        };
        let key = normalize_key(token).map_err(|m| Error::parse(line_no, m))?;
        let number: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("value {value:?} is not a number")))?;
        let proportion = match unit {
            FrequencyUnit::Proportion => {
                check_proportion(number, &key).map_err(|e| at_line(e, line_no))?;
                number
            }
            FrequencyUnit::Zipf => zipf_to_proportion(number).map_err(|e| at_line(e, line_no))?,
        };
        if entries.insert(key, proportion).is_some() {
            report.duplicates += 1;
        }
    }
    report.entries = entries.len();
    if report.duplicates > 0 {
        log::warn!(
            "frequency table: {} duplicate token(s), last value kept",
            report.duplicates
        );
    }
    Ok((
        FrequencyTable {
            entries,
            source_tag: source_tag.into(),
        },
        report,
    ))
}

fn at_line(err: Error, line: usize) -> Error {
    match err {
        Error::Range { what, value, min, max } => Error::Range {
            what: format!("line {line}: {what}"),
            value,
            min,
            max,
        },
        other => other,
    }
}

/// Case-folded lookup; unknown tokens are 0.
pub fn token_frequency(table: &FrequencyTable, token: &str) -> f64 {
    table.lookup(token).unwrap_or(0.0)
}

/// Single token: its frequency. Several tokens: `1 / Σ 1/fᵢ`, which is 0
/// whenever any token is unknown.
pub fn predicate_frequency(table: &FrequencyTable, predicate: &Predicate) -> f64 {
    match predicate.tokens() {
        [single] => token_frequency(table, single),
        tokens => {
            let mut inverse = stats::CompensatedSum::new();
            for token in tokens {
                let f = token_frequency(table, token);
                if f == 0.0 {
                    return 0.0;
                }
                inverse.add(1.0 / f);
            }
            1.0 / inverse.total()
        }
    }
}

/// Mean predicate proportion of a statement, unscaled.
pub fn statement_proportion(table: &FrequencyTable, statement: &Statement) -> Result<f64> {
    stats::mean(statement.predicates().iter().map(|p| predicate_frequency(table, p))).ok_or_else(|| {
        Error::NoPredicates {
            statement: statement.raw_text().to_string(),
        }
    })
}

pub fn statement_frequency(table: &FrequencyTable, statement: &Statement) -> Result<ScaledFrequency> {
    statement_proportion(table, statement).map(ScaledFrequency::from_proportion)
}
