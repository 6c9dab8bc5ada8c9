use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::ingest::{NLIPair, Predicate, Statement};

use super::lemmatize::VerbLemmatizer;

/// Auxiliary forms removed from relation phrases.
pub const AUXILIARIES: &[&str] = &[
    "be", "am", "is", "are", "was", "were", "been", "being", "do", "does", "did", "have", "has", "had", "to", "will",
    "would",
];

/// Prepositions, particles and determiners that relation phrases carry
/// around the verb (`was killed in`, `is the capital of`).
const FUNCTION_WORDS: &[&str] = &[
    "a", "an", "the", "in", "on", "at", "of", "for", "from", "with", "by", "into", "onto", "upon", "about", "as",
    "over", "under", "through", "up", "down", "out", "off", "than", "that", "not", "no", "and", "or", "its", "his",
    "her", "their",
];

pub fn default_stoplist() -> HashSet<String> {
    AUXILIARIES
        .iter()
        .chain(FUNCTION_WORDS)
        .map(|s| s.to_string())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractionMode {
    /// The relation slot of a triple, as one (possibly multi-token) predicate.
    Triple,
    /// Predicates supplied with the dataset.
    Annotated,
    /// Every sentence token whose lemma is a known verb, one predicate each.
    Lexicon,
}

fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\'' || c == '-'))
        .map(|t| t.trim_matches(|c| c == '\'' || c == '-'))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone)]
pub struct PredicateExtractor {
    mode: ExtractionMode,
    lemmatizer: VerbLemmatizer,
    stoplist: HashSet<String>,
    lemmatize: bool,
}

impl PredicateExtractor {
    pub fn new(mode: ExtractionMode, lemmatizer: VerbLemmatizer, stoplist: HashSet<String>) -> Result<Self> {
        if mode == ExtractionMode::Lexicon && lemmatizer.lexicon().is_empty() {
            return Err(Error::Config(
                "lexicon extraction needs a non-empty verb lexicon".into(),
            ));
        }
        Ok(Self {
            mode,
            lemmatizer,
            stoplist,
            lemmatize: true,
        })
    }

    /// Turns lemmatization on or off (on by default).
    pub fn with_lemmatization(mut self, enabled: bool) -> Self {
        self.lemmatize = enabled;
        self
    }

    pub fn mode(&self) -> ExtractionMode {
        self.mode
    }

    fn lemma(&self, token: &str) -> String {
        if self.lemmatize {
            self.lemmatizer.lemmatize(token)
        } else {
            token.to_string()
        }
    }

    /// Extracts predicates from a relation phrase (triple mode), an
    /// annotation string (annotated mode) or a sentence (lexicon mode).
    pub fn extract(&self, source: &str) -> Result<Vec<Predicate>> {
        match self.mode {
            ExtractionMode::Triple => {
                let lemmas: Vec<String> = tokenize(source).iter().map(|t| self.lemma(t)).collect();
                if lemmas.is_empty() {
                    return Ok(Vec::new());
                }
                let content: Vec<String> = lemmas.iter().filter(|l| !self.stoplist.contains(*l)).cloned().collect();
                let tokens = if content.is_empty() { lemmas } else { content };
                Ok(vec![Predicate::new(tokens)?])
            }
            ExtractionMode::Annotated => {
                if source.trim().is_empty() {
                    Ok(Vec::new())
                } else {
                    Ok(vec![Predicate::from_annotation(source)?])
                }
            }
            ExtractionMode::Lexicon => tokenize(source)
                .iter()
                .map(|t| self.lemma(t))
                .filter(|l| self.lemmatizer.lexicon().contains(l) && !self.stoplist.contains(l))
                .map(Predicate::single)
                .collect(),
        }
    }

    pub fn extract_statement(&self, statement: &Statement) -> Result<Vec<Predicate>> {
        match self.mode {
            ExtractionMode::Triple => {
                let relation = statement
                    .relation()
                    .ok_or_else(|| Error::Config("triple extraction needs triple-format statements".into()))?;
                self.extract(relation)
            }
            ExtractionMode::Annotated => Ok(statement.predicates().to_vec()),
            ExtractionMode::Lexicon => self.extract(statement.raw_text()),
        }
    }

    /// Replaces the predicates of every statement with freshly extracted
    /// ones. Statements that yield nothing are left empty and surface later
    /// as skipped pairs.
    pub fn annotate(&self, pairs: &mut [NLIPair]) -> Result<()> {
        for pair in pairs.iter_mut() {
            let premise = self.extract_statement(pair.premise())?;
            let hypothesis = self.extract_statement(pair.hypothesis())?;
            pair.premise_mut().set_predicates(premise);
            pair.hypothesis_mut().set_predicates(hypothesis);
        }
        Ok(())
    }
}

/// One-shot extraction without an exception table.
pub fn extract_predicates(
    source: &str,
    mode: ExtractionMode,
    verb_lexicon: &HashSet<String>,
    stoplist: &HashSet<String>,
) -> Result<Vec<Predicate>> {
    let lemmatizer = VerbLemmatizer::new(Default::default(), verb_lexicon.clone());
    PredicateExtractor::new(mode, lemmatizer, stoplist.clone())?.extract(source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::ExceptionTable;

    fn lexicon(words: &[&str]) -> HashSet<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    fn names(preds: &[Predicate]) -> Vec<String> {
        preds.iter().map(Predicate::text).collect()
    }

    #[test]
    fn triple_relation_drops_auxiliaries_and_prepositions() {
        let exc = ExceptionTable::parse("was be\n".as_bytes()).unwrap();
        let lem = VerbLemmatizer::new(exc, lexicon(&["kill", "be"]));
        let ex = PredicateExtractor::new(ExtractionMode::Triple, lem, default_stoplist()).unwrap();
        assert_eq!(names(&ex.extract("was killed in").unwrap()), ["kill"]);
    }

    #[test]
    fn triple_relation_keeps_multi_token_phrases() {
        let lem = VerbLemmatizer::new(ExceptionTable::new(), lexicon(&["kick", "start"]));
        let ex = PredicateExtractor::new(ExtractionMode::Triple, lem, default_stoplist()).unwrap();
        let preds = ex.extract("Kick Started").unwrap();
        assert_eq!(preds.len(), 1);
        assert_eq!(preds[0].tokens(), ["kick", "start"]);
    }

    #[test]
    fn triple_fallback_when_everything_is_stoplisted() {
        let exc = ExceptionTable::parse("has have\n".as_bytes()).unwrap();
        let lem = VerbLemmatizer::new(exc, lexicon(&["have"]));
        let ex = PredicateExtractor::new(ExtractionMode::Triple, lem, default_stoplist()).unwrap();
        assert_eq!(names(&ex.extract("has").unwrap()), ["have"]);
        assert!(ex.extract(" , ").unwrap().is_empty());
    }

    #[test]
    fn lemmatization_can_be_disabled() {
        let lem = VerbLemmatizer::new(ExceptionTable::new(), lexicon(&["own"]));
        let ex = PredicateExtractor::new(ExtractionMode::Triple, lem, default_stoplist())
            .unwrap()
            .with_lemmatization(false);
        assert_eq!(names(&ex.extract("owns").unwrap()), ["owns"]);
    }

    #[test]
    fn annotated_passthrough() {
        let out = extract_predicates("drive", ExtractionMode::Annotated, &HashSet::new(), &default_stoplist()).unwrap();
        assert_eq!(names(&out), ["drive"]);
    }

    #[test]
    fn lexicon_mode_picks_known_verbs() {
        let out = extract_predicates(
            "Google owns Youtube",
            ExtractionMode::Lexicon,
            &lexicon(&["own"]),
            &default_stoplist(),
        )
        .unwrap();
        assert_eq!(names(&out), ["own"]);
    }

    #[test]
    fn lexicon_mode_requires_a_lexicon() {
        let err = extract_predicates("x", ExtractionMode::Lexicon, &HashSet::new(), &default_stoplist()).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}
