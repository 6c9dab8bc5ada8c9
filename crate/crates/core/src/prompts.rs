//! Fine-tuning and few-shot inference prompts, and parsing of model answers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{Label, NLIPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PromptKind {
    TrainPositive,
    TrainNegative,
    Inference,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedPrompt {
    pub text: String,
    pub kind: PromptKind,
    /// Byte index where the answer block starts (the text length for
    /// inference prompts).
    #[serde(skip)]
    pub answer_start: usize,
}

impl RenderedPrompt {
    pub fn question(&self) -> &str {
        &self.text[..self.answer_start]
    }

    pub fn answer(&self) -> &str {
        &self.text[self.answer_start..]
    }
}

const FEW_SHOT: &str = "\
If Google bought Youtube, then Google owns Youtube. Is that true or false?
A) True
B) False
Answer: A) True. Owning is a consequence of buying.
If Google owns Youtube, then Google bought Youtube. Is that true or false?
A) True
B) False
Answer: B) False. Owning does not imply buying, the ownership may come from other means.
If John went to the mall, then John drove to the mall. Is that true or false?
A) True
B) False
Answer: B) False. John may have gone to the mall by other means.
If John drove to the mall, then John went to the mall. Is that true or false?
A) True
B) False
Answer: A) true. Driving is a means of going to the mall.
";

fn statements<'a>(premise: &'a str, hypothesis: &'a str) -> Result<(&'a str, &'a str)> {
    let (prem, hypo) = (premise.trim(), hypothesis.trim());
    if prem.is_empty() {
        return Err(Error::Render("empty premise".into()));
    }
    if hypo.is_empty() {
        return Err(Error::Render("empty hypothesis".into()));
    }
    Ok((prem, hypo))
}

fn tag(pair: &NLIPair) -> impl Fn(Error) -> Error + '_ {
    move |e| e.for_pair(pair.id())
}

pub fn render_training_example(pair: &NLIPair) -> Result<RenderedPrompt> {
    render_training(pair.premise().raw_text(), pair.hypothesis().raw_text(), pair.label()).map_err(tag(pair))
}

pub fn render_inference_prompt(pair: &NLIPair) -> Result<RenderedPrompt> {
    render_inference(pair.premise().raw_text(), pair.hypothesis().raw_text()).map_err(tag(pair))
}

/// Training prompt for raw statement texts.
pub fn render_training(premise: &str, hypothesis: &str, label: Label) -> Result<RenderedPrompt> {
    let (p, h) = statements(premise, hypothesis)?;
    let question = format!("Question: If {p}, then {h}. Is that true or false?\n(A) True; (B) false\n");
    let (answer, kind) = match label {
        Label::Entail => (
            format!("(A) True.\nYes, it is true. {p} entails {h}."),
            PromptKind::TrainPositive,
        ),
        Label::NoEntail => (
            format!("(B) False.\nNo, it is false. {p} does not entail {h}."),
            PromptKind::TrainNegative,
        ),
    };
    Ok(RenderedPrompt {
        answer_start: question.len(),
        text: question + &answer,
        kind,
    })
}

/// Few-shot inference prompt for raw statement texts.
pub fn render_inference(premise: &str, hypothesis: &str) -> Result<RenderedPrompt> {
    let (p, h) = statements(premise, hypothesis)?;
    let text = format!("{FEW_SHOT}If {p}, then {h}. Is that true or false?\nA) True\nB) False\nAnswer:");
    Ok(RenderedPrompt {
        answer_start: text.len(),
        text,
        kind: PromptKind::Inference,
    })
}

/// First position of `needle` in `haystack` (both lowercase) not preceded by
/// a letter or digit.
fn find_marker(haystack: &str, needle: &str) -> Option<usize> {
    haystack
        .match_indices(needle)
        .map(|(i, _)| i)
        .find(|&i| !haystack[..i].chars().next_back().is_some_and(char::is_alphanumeric))
}

/// Reads a label from model output. The first `A) True` / `B) False` marker
/// (with or without the opening parenthesis, any case) is a confident answer;
/// otherwise a leading `true` or `false` is accepted with `confident = false`.
pub fn parse_model_answer(text: &str) -> Result<(Label, bool)> {
    let lower = text.to_lowercase();
    let entail = find_marker(&lower, "a) true");
    let no_entail = find_marker(&lower, "b) false");
    match (entail, no_entail) {
        (Some(a), Some(b)) => return Ok((if a < b { Label::Entail } else { Label::NoEntail }, true)),
        (Some(_), None) => return Ok((Label::Entail, true)),
        (None, Some(_)) => return Ok((Label::NoEntail, true)),
        (None, None) => {}
    }
    let head = lower.trim_start();
    let head = head.strip_prefix("answer:").map_or(head, str::trim_start);
    let word: String = head.chars().take_while(|c| c.is_alphabetic()).collect();
    match word.as_str() {
        "true" => Ok((Label::Entail, false)),
        "false" => Ok((Label::NoEntail, false)),
        _ => Err(Error::Answer(text.chars().take(80).collect())),
    }
}
