//! Rule-based verb lemmatizer backed by an exception table.

use std::collections::{HashMap, HashSet};
use std::io::Read;

use crate::error::{Error, Result};

/// Irregular forms, read from files in the `inflected lemma [lemma...]`
/// exception-file grammar. Only the first lemma of a line is used.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExceptionTable {
    map: HashMap<String, String>,
}

impl ExceptionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a table from `(inflected, lemma)` pairs. Entries whose
    /// inflected form is itself the lemma of another entry are dropped, so
    /// every lemma in the table maps to itself.
    pub fn from_pairs<I, A, B>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut map: HashMap<String, String> = HashMap::new();
        for (form, lemma) in pairs {
            let form = form.as_ref().to_lowercase();
            let lemma = lemma.as_ref().to_lowercase();
            if form != lemma {
                map.entry(form).or_insert(lemma);
            }
        }
        let targets: HashSet<String> = map.values().cloned().collect();
        let before = map.len();
        map.retain(|form, _| !targets.contains(form));
        if map.len() != before {
            log::debug!("exception table: dropped {} chained entries", before - map.len());
        }
        Self { map }
    }

    pub fn parse(mut input: impl Read) -> Result<Self> {
        let mut text = String::new();
        input
            .read_to_string(&mut text)
            .map_err(|e| Error::io("<exception file>", e))?;
        let mut pairs = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.starts_with("  ") || line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match (words.next(), words.next()) {
                (Some(form), Some(lemma)) => pairs.push((form.to_string(), lemma.to_string())),
                _ => {
                    return Err(Error::parse(
                        idx + 1,
                        "exception line needs an inflected form and a lemma",
                    ))
                }
            }
        }
        Ok(Self::from_pairs(pairs))
    }

    pub fn get(&self, form: &str) -> Option<&str> {
        self.map.get(form).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_map(&self) -> &HashMap<String, String> {
        &self.map
    }
}

/// Exception table plus the set of known verb lemmas used to validate rule
/// candidates.
#[derive(Debug, Clone, Default)]
pub struct VerbLemmatizer {
    exceptions: ExceptionTable,
    lexicon: HashSet<String>,
}

impl VerbLemmatizer {
    pub fn new(exceptions: ExceptionTable, lexicon: HashSet<String>) -> Self {
        Self { exceptions, lexicon }
    }

    pub fn lexicon(&self) -> &HashSet<String> {
        &self.lexicon
    }

    pub fn exceptions(&self) -> &ExceptionTable {
        &self.exceptions
    }

    pub fn lemmatize(&self, token: &str) -> String {
        lemmatize_verb(token, self.exceptions.as_map(), &self.lexicon)
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

/// `stopp` -> `stop`; `None` unless the stem ends in a doubled consonant.
fn undouble(stem: &str) -> Option<String> {
    let mut rev = stem.chars().rev();
    match (rev.next(), rev.next()) {
        (Some(a), Some(b)) if a == b && a.is_alphabetic() && !is_vowel(a) => {
            Some(stem[..stem.len() - a.len_utf8()].to_string())
        }
        _ => None,
    }
}

fn rule_candidates(token: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut push = |s: String| {
        if !s.is_empty() {
            out.push(s);
        }
    };
    if let Some(stem) = token.strip_suffix("ies") {
        push(format!("{stem}y"));
    }
    if let Some(stem) = token.strip_suffix("es") {
        push(stem.to_string());
    }
    if let Some(stem) = token.strip_suffix('s') {
        if !stem.ends_with('s') {
            push(stem.to_string());
        }
    }
    if let Some(stem) = token.strip_suffix("ed") {
        push(stem.to_string());
        push(format!("{stem}e"));
        if let Some(single) = undouble(stem) {
            push(single);
        }
        if let Some(base) = stem.strip_suffix('i') {
            push(format!("{base}y"));
        }
    }
    if let Some(stem) = token.strip_suffix("ing") {
        push(stem.to_string());
        push(format!("{stem}e"));
        if let Some(single) = undouble(stem) {
            push(single);
        }
        if let Some(base) = stem.strip_suffix('y') {
            push(format!("{base}ie"));
        }
    }
    out
}

/// Exception hit wins; a token already in the lexicon is its own lemma;
/// otherwise the suffix rules (-s/-es/-ies, -ed/-d, -ing with e-restoration
/// and de-doubling) propose candidates and the first one found in the
/// lexicon is returned. Candidates that are themselves irregular forms are
/// not accepted. Unvalidated tokens come back unchanged.
pub fn lemmatize_verb(token: &str, exceptions: &HashMap<String, String>, lexicon: &HashSet<String>) -> String {
    if let Some(lemma) = exceptions.get(token) {
        return lemma.clone();
    }
    if lexicon.contains(token) {
        return token.to_string();
    }
    rule_candidates(token)
        .into_iter()
        .find(|c| lexicon.contains(c) && !exceptions.contains_key(c))
        .unwrap_or_else(|| token.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lemmatizer() -> VerbLemmatizer {
        let exc =
            ExceptionTable::parse("bought buy\nwas be\nwent go\nran run\nlaid lay\nlay lie\nsaw see\n".as_bytes())
                .unwrap();
        let lexicon = [
            "buy", "own", "run", "kill", "die", "love", "stop", "carry", "lie", "make", "talk", "be", "close", "pass",
            "lay", "see", "saw", "go",
        ]
        .into_iter()
        .map(String::from)
        .collect();
        VerbLemmatizer::new(exc, lexicon)
    }

    #[test]
    fn exception_table_wins() {
        assert_eq!(lemmatizer().lemmatize("bought"), "buy");
        assert_eq!(lemmatizer().lemmatize("was"), "be");
    }

    #[test]
    fn suffix_rules() {
        let l = lemmatizer();
        for (form, lemma) in [
            ("owns", "own"),
            ("running", "run"),
            ("killed", "kill"),
            ("died", "die"),
            ("loved", "love"),
            ("stopped", "stop"),
            ("carried", "carry"),
            ("carries", "carry"),
            ("lying", "lie"),
            ("making", "make"),
            ("talking", "talk"),
            ("closes", "close"),
            ("passes", "pass"),
            ("being", "be"),
        ] {
            assert_eq!(l.lemmatize(form), lemma, "{form}");
        }
    }

    #[test]
    fn unknown_forms_are_unchanged() {
        assert_eq!(lemmatizer().lemmatize("zorbing"), "zorbing");
        assert_eq!(lemmatize_verb("owns", &HashMap::new(), &HashSet::new()), "owns");
    }

    #[test]
    fn chained_exceptions_are_dropped() {
        let l = lemmatizer();
        assert_eq!(l.exceptions().get("lay"), None);
        assert_eq!(l.lemmatize("laid"), "lay");
        assert_eq!(l.lemmatize("lay"), "lay");
    }

    #[test]
    fn irregular_forms_are_not_rule_outputs() {
        // "saws" -> "saw" would be re-mapped to "see" on a second pass.
        assert_eq!(lemmatizer().lemmatize("saws"), "saws");
    }

    #[test]
    fn parse_reads_first_lemma_and_skips_headers() {
        let t = ExceptionTable::parse("  1 header\nfound find found\n".as_bytes()).unwrap();
        assert_eq!(t.get("found"), Some("find"));
        assert!(ExceptionTable::parse("lonely\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn idempotent_on_lexicon_outputs(token in "[a-z]{1,6}(s|es|ies|ed|d|ing)?") {
            let l = lemmatizer();
            let once = l.lemmatize(&token);
            if l.lexicon().contains(&once) {
                prop_assert_eq!(l.lemmatize(&once), once);
            }
        }
    }
}
