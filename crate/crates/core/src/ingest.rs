//! Dataset and prediction-file parsers.
//!
//! Two dataset layouts are understood:
//!
//! * **triple** files: one pair per line, `premise \t hypothesis \t label [\t id]`,
//!   where each statement is a `subject,relation,object` triple. Lines starting
//!   with `#` are comments.
//! * **sentence** files: one JSON object per line with `premise`, `hypothesis`,
//!   `label`, and optionally `id`, `premise_predicates`, `hypothesis_predicates`.
//!
//! Pair ids default to the zero-based physical line index of the record.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const LABEL_ALIASES: &str = "true, entail, entailment, a | false, no-entail, no_entail, \
     not_entailment, non-entailment, neutral, contradiction, b";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Entail,
    NoEntail,
}

impl Label {
    pub fn is_entail(self) -> bool {
        self == Label::Entail
    }

    /// Spelling used when writing dataset and prediction files.
    pub fn as_file_str(self) -> &'static str {
        match self {
            Label::Entail => "True",
            Label::NoEntail => "False",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Entail => "Entail",
            Label::NoEntail => "NoEntail",
        })
    }
}

/// Maps a raw label string onto the binary label set. Three-way NLI labels
/// collapse to [`Label::NoEntail`].
pub fn normalize_label(raw: &str) -> Result<Label> {
    let folded = raw.trim().to_lowercase();
    match folded.as_str() {
        "true" | "entail" | "entailment" | "a" => Ok(Label::Entail),
        "false" | "no-entail" | "no_entail" | "noentail" | "not_entailment" | "not-entailment" | "non-entailment"
        | "non_entailment" | "neutral" | "contradiction" | "b" => Ok(Label::NoEntail),
        _ => Err(Error::Label { raw: raw.to_string() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Premise,
    Hypothesis,
}

/// A verbal predicate reduced to lowercase lemma tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predicate {
    tokens: Vec<String>,
}

impl Predicate {
    pub fn new<I, S>(tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::Contract("predicate needs at least one token".into()));
        }
        for t in &tokens {
            if t.is_empty() || t.chars().any(char::is_whitespace) || *t != t.to_lowercase() {
                return Err(Error::Contract(format!(
                    "predicate token {t:?} must be non-empty, lowercase, without whitespace"
                )));
            }
        }
        Ok(Self { tokens })
    }

    pub fn single(token: impl Into<String>) -> Result<Self> {
        Self::new([token.into()])
    }

    /// Parses an annotation such as `"drive"`, `"take off"` or `"take_off"`.
    pub fn from_annotation(text: &str) -> Result<Self> {
        let tokens: Vec<String> = text
            .split(|c: char| c.is_whitespace() || c == '_')
            .filter(|t| !t.is_empty())
            .map(str::to_lowercase)
            .collect();
        Self::new(tokens)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Tokens joined with spaces.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens.join(" "))
    }
}

/// `subject,relation,object` as found in triple datasets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub subject: String,
    pub relation: String,
    pub object: String,
}

impl Triple {
    fn parse(field: &str, line: usize, role: Role) -> Result<Self> {
        let parts: Vec<&str> = field.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::parse(
                line,
                format!(
                    "{role:?} triple {field:?} has {} comma-separated parts, expected 3",
                    parts.len()
                ),
            ));
        }
        if parts[1].is_empty() {
            return Err(Error::parse(
                line,
                format!("{role:?} triple has an empty relation slot"),
            ));
        }
        Ok(Triple {
            subject: parts[0].to_string(),
            relation: parts[1].to_string(),
            object: parts[2].to_string(),
        })
    }

    fn sentence(&self) -> String {
        [&self.subject, &self.relation, &self.object]
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    raw_text: String,
    role: Role,
    triple: Option<Triple>,
    predicates: Vec<Predicate>,
}

impl Statement {
    pub fn from_triple(role: Role, triple: Triple) -> Result<Self> {
        if triple.relation.trim().is_empty() {
            return Err(Error::Contract("triple relation must be non-empty".into()));
        }
        Ok(Self {
            raw_text: triple.sentence(),
            role,
            triple: Some(triple),
            predicates: Vec::new(),
        })
    }

    pub fn from_text(role: Role, text: impl Into<String>, predicates: Vec<Predicate>) -> Result<Self> {
        let raw_text = text.into();
        if raw_text.trim().is_empty() {
            return Err(Error::Contract(format!("{role:?} text must be non-empty")));
        }
        Ok(Self {
            raw_text,
            role,
            triple: None,
            predicates,
        })
    }

    pub fn raw_text(&self) -> &str {
        &self.raw_text
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn triple(&self) -> Option<&Triple> {
        self.triple.as_ref()
    }

    /// The relation slot for triple statements.
    pub fn relation(&self) -> Option<&str> {
        self.triple.as_ref().map(|t| t.relation.as_str())
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn set_predicates(&mut self, predicates: Vec<Predicate>) {
        self.predicates = predicates;
    }

    fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NLIPair {
    id: String,
    premise: Statement,
    hypothesis: Statement,
    label: Label,
}

impl NLIPair {
    pub fn new(id: impl Into<String>, premise: Statement, hypothesis: Statement, label: Label) -> Result<Self> {
        if premise.role != Role::Premise || hypothesis.role != Role::Hypothesis {
            return Err(Error::Contract("statement roles do not match their slots".into()));
        }
        Ok(Self {
            id: id.into(),
            premise,
            hypothesis,
            label,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn premise(&self) -> &Statement {
        &self.premise
    }

    pub fn hypothesis(&self) -> &Statement {
        &self.hypothesis
    }

    pub fn premise_mut(&mut self) -> &mut Statement {
        &mut self.premise
    }

    pub fn hypothesis_mut(&mut self) -> &mut Statement {
        &mut self.hypothesis
    }

    pub fn label(&self) -> Label {
        self.label
    }

    /// The same pair with premise and hypothesis exchanged and the label kept.
    pub fn swapped(&self) -> NLIPair {
        NLIPair {
            id: self.id.clone(),
            premise: self.hypothesis.clone().with_role(Role::Premise),
            hypothesis: self.premise.clone().with_role(Role::Hypothesis),
            label: self.label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub pair_id: String,
    pub score: f64,
    pub predicted_label: Option<Label>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Triple,
    Sentence,
}

fn read_utf8(mut input: impl Read) -> Result<String> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes).map_err(|e| Error::io("<input>", e))?;
    String::from_utf8(bytes).map_err(|e| {
        let valid = e.utf8_error().valid_up_to();
        let line = e.as_bytes()[..valid].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::parse(line, "invalid UTF-8")
    })
}

/// Yields `(zero-based index, one-based line number, content)` for every
/// non-blank, non-comment line.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    text.lines().enumerate().filter_map(|(idx, raw)| {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((idx, idx + 1, line))
        }
    })
}

fn check_unique(seen: &mut HashSet<String>, id: &str, line: usize) -> Result<()> {
    if !seen.insert(id.to_string()) {
        return Err(Error::Duplicate {
            line,
            id: id.to_string(),
        });
    }
    Ok(())
}

pub fn parse_triple_dataset(input: impl Read) -> Result<Vec<NLIPair>> {
    let text = read_utf8(input)?;
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line_no, line) in content_lines(&text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(Error::parse(
                line_no,
                format!("expected 3 or 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let premise = Statement::from_triple(Role::Premise, Triple::parse(fields[0], line_no, Role::Premise)?)?;
        let hypothesis =
            Statement::from_triple(Role::Hypothesis, Triple::parse(fields[1], line_no, Role::Hypothesis)?)?;
        let label = normalize_label(fields[2]).map_err(|e| Error::parse(line_no, e.to_string()))?;
        let id = match fields.get(3).map(|s| s.trim()) {
            Some("") => return Err(Error::parse(line_no, "empty id field")),
            Some(id) => id.to_string(),
            None => idx.to_string(),
        };
        check_unique(&mut seen, &id, line_no)?;
        pairs.push(NLIPair::new(id, premise, hypothesis, label)?);
    }
    Ok(pairs)
}

fn required_str<'a>(obj: &'a Map<String, Value>, field: &str, line: usize) -> Result<&'a str> {
    match obj.get(field) {
        Some(Value::String(s)) if !s.trim().is_empty() => Ok(s),
        Some(Value::String(_)) => Err(Error::parse(line, format!("field `{field}` is empty"))),
        Some(_) => Err(Error::parse(line, format!("field `{field}` must be a string"))),
        None => Err(Error::parse(line, format!("missing required field `{field}`"))),
    }
}

fn annotations(obj: &Map<String, Value>, field: &str, line: usize) -> Result<Vec<Predicate>> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => {
                    Predicate::from_annotation(s).map_err(|e| Error::parse(line, format!("field `{field}`: {e}")))
                }
                _ => Err(Error::parse(line, format!("field `{field}` must hold strings"))),
            })
            .collect(),
        Some(_) => Err(Error::parse(line, format!("field `{field}` must be an array"))),
    }
}

pub fn parse_sentence_dataset(input: impl Read) -> Result<Vec<NLIPair>> {
    let text = read_utf8(input)?;
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line_no, line) in content_lines(&text) {
        let value: Value = serde_json::from_str(line).map_err(|e| Error::parse(line_no, e.to_string()))?;
        let Value::Object(obj) = value else {
            return Err(Error::parse(line_no, "record is not a JSON object"));
        };
        let premise_text = required_str(&obj, "premise", line_no)?;
        let hypothesis_text = required_str(&obj, "hypothesis", line_no)?;
        let label = match obj.get("label") {
            Some(Value::String(s)) => normalize_label(s).map_err(|e| Error::parse(line_no, e.to_string()))?,
            Some(Value::Bool(true)) => Label::Entail,
            Some(Value::Bool(false)) => Label::NoEntail,
            Some(_) => return Err(Error::parse(line_no, "field `label` must be a string or boolean")),
            None => return Err(Error::parse(line_no, "missing required field `label`")),
        };
        let id = match obj.get("id") {
            None | Some(Value::Null) => idx.to_string(),
            Some(Value::String(s)) if !s.is_empty() => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            Some(_) => return Err(Error::parse(line_no, "field `id` must be a non-empty string or number")),
        };
        check_unique(&mut seen, &id, line_no)?;
        let premise = Statement::from_text(
            Role::Premise,
            premise_text,
            annotations(&obj, "premise_predicates", line_no)?,
        )?;
        let hypothesis = Statement::from_text(
            Role::Hypothesis,
            hypothesis_text,
            annotations(&obj, "hypothesis_predicates", line_no)?,
        )?;
        pairs.push(NLIPair::new(id, premise, hypothesis, label)?);
    }
    Ok(pairs)
}

pub fn parse_dataset(input: impl Read, format: DatasetFormat) -> Result<Vec<NLIPair>> {
    match format {
        DatasetFormat::Triple => parse_triple_dataset(input),
        DatasetFormat::Sentence => parse_sentence_dataset(input),
    }
}

pub fn parse_predictions(input: impl Read) -> Result<Vec<PredictionRecord>> {
    let text = read_utf8(input)?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (_, line_no, line) in content_lines(&text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                format!("expected 2 or 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let pair_id = fields[0].trim();
        if pair_id.is_empty() {
            return Err(Error::parse(line_no, "empty pair id"));
        }
        let score: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("score {:?} is not a number", fields[1])))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(Error::Range {
                what: format!("line {line_no}: score"),
                value: score,
                min: 0.0,
                max: 1.0,
            });
        }
        let predicted_label = match fields.get(2).map(|s| s.trim()) {
            None | Some("") => None,
            Some(raw) => Some(normalize_label(raw).map_err(|e| Error::parse(line_no, e.to_string()))?),
        };
        check_unique(&mut seen, pair_id, line_no)?;
        records.push(PredictionRecord {
            pair_id: pair_id.to_string(),
            score,
            predicted_label,
        });
    }
    Ok(records)
}

fn check_triple_component(value: &str, id: &str) -> Result<()> {
    if value.contains([',', '\t', '\n', '\r']) || value != value.trim() {
        return Err(Error::Contract(format!(
            "pair {id}: triple component {value:?} cannot be written in triple format"
        )));
    }
    Ok(())
}

/// Writes pairs in triple format with an explicit id column.
pub fn write_triple_dataset(pairs: &[NLIPair]) -> Result<String> {
    let mut out = String::new();
    for pair in pairs {
        let mut fields = Vec::with_capacity(4);
        for stmt in [&pair.premise, &pair.hypothesis] {
            let triple = stmt
                .triple()
                .ok_or_else(|| Error::Contract(format!("pair {} has no triple structure", pair.id)))?;
            for part in [&triple.subject, &triple.relation, &triple.object] {
                check_triple_component(part, &pair.id)?;
            }
            fields.push(format!("{},{},{}", triple.subject, triple.relation, triple.object));
        }
        check_triple_component(&pair.id, &pair.id)?;
        fields.push(pair.label.as_file_str().to_string());
        fields.push(pair.id.clone());
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize)]
struct SentenceRecord<'a> {
    id: &'a str,
    premise: &'a str,
    hypothesis: &'a str,
    label: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    premise_predicates: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    hypothesis_predicates: Vec<String>,
}

/// Writes pairs as one JSON object per line, keeping predicate annotations.
pub fn write_sentence_dataset(pairs: &[NLIPair]) -> Result<String> {
    let mut out = String::new();
    for pair in pairs {
        let record = SentenceRecord {
            id: &pair.id,
            premise: &pair.premise.raw_text,
            hypothesis: &pair.hypothesis.raw_text,
            label: pair.label.as_file_str(),
            premise_predicates: pair.premise.predicates.iter().map(Predicate::text).collect(),
            hypothesis_predicates: pair.hypothesis.predicates.iter().map(Predicate::text).collect(),
        };
        out.push_str(&serde_json::to_string(&record).map_err(|e| Error::Contract(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_dataset(pairs: &[NLIPair], format: DatasetFormat) -> Result<String> {
    match format {
        DatasetFormat::Triple => write_triple_dataset(pairs),
        DatasetFormat::Sentence => write_sentence_dataset(pairs),
    }
}

/// Keeps pairs whose inverse (premise and hypothesis exchanged) is also in
/// the dataset with the opposite label, i.e. entailments that hold in one
/// direction only. Statement texts are compared case-insensitively.
pub fn directional_subset(pairs: &[NLIPair]) -> Vec<NLIPair> {
    let key = |p: &str, h: &str| (p.trim().to_lowercase(), h.trim().to_lowercase());
    let mut labels: HashMap<(String, String), Vec<Label>> = HashMap::new();
    for pair in pairs {
        labels
            .entry(key(pair.premise.raw_text(), pair.hypothesis.raw_text()))
            .or_default()
            .push(pair.label);
    }
    pairs
        .iter()
        .filter(|pair| {
            labels
                .get(&key(pair.hypothesis.raw_text(), pair.premise.raw_text()))
                .is_some_and(|inverse| inverse.iter().any(|&l| l != pair.label))
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triple_line_becomes_entail_pair() {
        let pairs = parse_triple_dataset("google,bought,youtube\tgoogle,owns,youtube\tTrue\n".as_bytes()).unwrap();
        assert_eq!(pairs.len(), 1);
        let pair = &pairs[0];
        assert_eq!(pair.id(), "0");
        assert_eq!(pair.label(), Label::Entail);
        assert_eq!(pair.premise().relation(), Some("bought"));
        assert_eq!(pair.hypothesis().relation(), Some("owns"));
        assert_eq!(pair.premise().raw_text(), "google bought youtube");
        assert_eq!(pair.premise().role(), Role::Premise);
    }

    #[test]
    fn empty_file_is_empty_dataset() {
        assert!(parse_triple_dataset(&b""[..]).unwrap().is_empty());
    }

    #[test]
    fn wrong_field_count_reports_line() {
        let err = parse_triple_dataset("a,b\tTrue\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn empty_relation_is_rejected() {
        let err = parse_triple_dataset("a,,b\ta,c,b\tTrue\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn comments_skip_but_ids_follow_physical_lines() {
        let text = "# header\n\na,x,b\ta,y,b\tFalse\na,y,b\ta,x,b\tTrue\tcustom\n";
        let pairs = parse_triple_dataset(text.as_bytes()).unwrap();
        assert_eq!(pairs[0].id(), "2");
        assert_eq!(pairs[1].id(), "custom");
    }

    #[test]
    fn duplicate_dataset_ids_are_rejected() {
        let text = "a,x,b\ta,y,b\tFalse\t7\na,y,b\ta,x,b\tTrue\t7\n";
        assert!(matches!(
            parse_triple_dataset(text.as_bytes()),
            Err(Error::Duplicate { line: 2, .. })
        ));
    }

    #[test]
    fn sentence_record_parses() {
        let line = r#"{"premise":"John drove to the mall","hypothesis":"John went to the mall","label":"True"}"#;
        let pairs = parse_sentence_dataset(line.as_bytes()).unwrap();
        assert_eq!(pairs[0].label(), Label::Entail);
        assert!(pairs[0].premise().predicates().is_empty());
        assert_eq!(pairs[0].premise().triple(), None);
    }

    #[test]
    fn sentence_annotations_pass_through() {
        let line =
            r#"{"premise":"John drove","hypothesis":"John went","label":"entailment","premise_predicates":["drive"]}"#;
        let pairs = parse_sentence_dataset(line.as_bytes()).unwrap();
        assert_eq!(pairs[0].premise().predicates(), &[Predicate::single("drive").unwrap()]);
    }

    #[test]
    fn sentence_missing_label_names_field_and_line() {
        let text = "\n{\"premise\":\"a\",\"hypothesis\":\"b\"}\n";
        let err = parse_sentence_dataset(text.as_bytes()).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(msg.contains("label"), "{msg}");
    }

    #[test]
    fn three_way_labels_collapse() {
        let text = "{\"premise\":\"a b\",\"hypothesis\":\"c d\",\"label\":\"neutral\"}\n\
                    {\"premise\":\"a b\",\"hypothesis\":\"c d\",\"label\":\"contradiction\"}\n";
        let pairs = parse_sentence_dataset(text.as_bytes()).unwrap();
        assert!(pairs.iter().all(|p| p.label() == Label::NoEntail));
    }

    #[test]
    fn prediction_line_maps_fields() {
        let recs = parse_predictions("0\t0.91\tTrue\n".as_bytes()).unwrap();
        assert_eq!(
            recs,
            vec![PredictionRecord {
                pair_id: "0".into(),
                score: 0.91,
                predicted_label: Some(Label::Entail)
            }]
        );
    }

    #[test]
    fn prediction_score_out_of_range() {
        assert!(matches!(
            parse_predictions("0\t1.5\n".as_bytes()),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            parse_predictions("0\tNaN\n".as_bytes()),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn prediction_duplicate_ids() {
        assert!(matches!(
            parse_predictions("7\t0.1\n7\t0.2\n".as_bytes()),
            Err(Error::Duplicate { line: 2, .. })
        ));
    }

    #[test]
    fn label_aliases() {
        assert_eq!(normalize_label("True").unwrap(), Label::Entail);
        assert_eq!(normalize_label("FALSE").unwrap(), Label::NoEntail);
        assert_eq!(normalize_label("A").unwrap(), Label::Entail);
        assert_eq!(normalize_label("not_entailment").unwrap(), Label::NoEntail);
        let err = normalize_label("maybe").unwrap_err();
        assert!(err.to_string().contains("entailment"));
    }

    #[test]
    fn directional_subset_drops_bidirectional_and_unpaired() {
        let text = "a,x,b\ta,y,b\tTrue\n\
                    a,y,b\ta,x,b\tFalse\n\
                    a,p,b\ta,q,b\tTrue\n\
                    a,q,b\ta,p,b\tTrue\n\
                    a,m,b\ta,n,b\tTrue\n";
        let pairs = parse_triple_dataset(text.as_bytes()).unwrap();
        let ids: Vec<_> = directional_subset(&pairs).iter().map(|p| p.id().to_string()).collect();
        assert_eq!(ids, ["0", "1"]);
    }

    #[test]
    fn swapped_keeps_roles_consistent() {
        let pairs = parse_triple_dataset("a,x,b\tc,y,d\tTrue\n".as_bytes()).unwrap();
        let s = pairs[0].swapped();
        assert_eq!(s.premise().raw_text(), "c y d");
        assert_eq!(s.premise().role(), Role::Premise);
        assert_eq!(s.hypothesis().role(), Role::Hypothesis);
        assert_eq!(s.swapped(), pairs[0]);
    }

    fn component() -> impl Strategy<Value = String> {
        "[A-Za-z][A-Za-z .'-]{0,12}[A-Za-z]"
    }

    proptest! {
        #[test]
        fn triple_round_trip(rows in prop::collection::vec(
            (component(), component(), component(), component(), component(), component(), any::<bool>()),
            0..20,
        )) {
            let text: String = rows.iter().map(|(a, b, c, d, e, f, l)| {
                format!("{a},{b},{c}\t{d},{e},{f}\t{}\n", if *l { "true" } else { "FALSE" })
            }).collect();
            let first = parse_triple_dataset(text.as_bytes()).unwrap();
            let again = parse_triple_dataset(write_triple_dataset(&first).unwrap().as_bytes()).unwrap();
            prop_assert_eq!(first, again);
        }

        #[test]
        fn sentence_round_trip(rows in prop::collection::vec(
            ("[^\\x00-\\x1f]{1,20}", "[^\\x00-\\x1f]{1,20}", any::<bool>(), prop::collection::vec("[a-z]{1,6}( [a-z]{1,6})?", 0..3)),
            0..20,
        )) {
            prop_assume!(rows.iter().all(|(p, h, _, _)| !p.trim().is_empty() && !h.trim().is_empty()));
            let text: String = rows.iter().map(|(p, h, l, preds)| {
                serde_json::json!({"premise": p, "hypothesis": h, "label": l, "premise_predicates": preds}).to_string() + "\n"
            }).collect();
            let first = parse_sentence_dataset(text.as_bytes()).unwrap();
            let again = parse_sentence_dataset(write_sentence_dataset(&first).unwrap().as_bytes()).unwrap();
            prop_assert_eq!(first, again);
        }

        #[test]
        fn label_normalization_is_case_insensitive_and_idempotent(
            alias in prop::sample::select(vec!["true", "entail", "entailment", "a", "false", "no-entail", "not_entailment", "b"]),
            upper in prop::collection::vec(any::<bool>(), 16),
        ) {
            let mixed: String = alias.chars().zip(upper.iter().cycle())
                .map(|(c, &u)| if u { c.to_ascii_uppercase() } else { c }).collect();
            let label = normalize_label(&mixed).unwrap();
            prop_assert_eq!(label, normalize_label(alias).unwrap());
            prop_assert_eq!(normalize_label(label.as_file_str()).unwrap(), label);
        }
    }
}
