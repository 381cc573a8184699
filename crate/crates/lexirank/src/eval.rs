//! Evaluation harness: document classification by average polarity
//! ratio, phrase classification by negative-dominance rules, and
//! intrinsic comparison against a gold lexicon.
//!
//! Corpora are one document per line:
//!
//! ```text
//! <doc-id> <TAB> pos|neg <TAB> <token> <TAB> <token> ...
//! ```
//!
//! where each token is `surface|lemma|pos` or `surface|lemma|pos|synset-id`.
//! Word-level lexicons match tokens on lemma plus part of speech;
//! synset-level lexicons match on the synset annotation (tokens without
//! one never match).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lexicon::{Level, LexiconKey, PolarityLexicon};
use crate::lkb::{normalize_lemma, Pos, SynsetId};
use crate::seedgen::Polarity;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedToken {
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
    pub synset: Option<SynsetId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub label: Polarity,
    pub tokens: Vec<AnnotatedToken>,
}

pub fn read_corpus(path: &Path) -> Result<Vec<Document>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut documents = Vec::new();
    let mut seen = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let mut fields = row.split('\t');
        let id = fields.next().unwrap_or_default();
        if id.is_empty() {
            return Err(Error::format(path, line, "empty document id"));
        }
        let label = fields
            .next()
            .ok_or_else(|| Error::format(path, line, "expected <id><TAB>pos|neg<TAB>tokens"))?;
        let label: Polarity = label.parse().map_err(|e| Error::format(path, line, e))?;
        let tokens = fields
            .map(|field| parse_token(field, path, line))
            .collect::<Result<Vec<_>>>()?;
        if let Some(previous) = seen.insert(id.to_string(), line) {
            return Err(Error::format(
                path,
                line,
                format!("document id {id:?} already used on line {previous}"),
            ));
        }
        documents.push(Document {
            id: id.to_string(),
            label,
            tokens,
        });
    }
    Ok(documents)
}

fn parse_token(field: &str, path: &Path, line: usize) -> Result<AnnotatedToken> {
    let parts: Vec<&str> = field.split('|').collect();
    let (surface, lemma, pos, synset) = match parts.as_slice() {
        [surface, lemma, pos] => (*surface, *lemma, *pos, None),
        [surface, lemma, pos, synset] => (*surface, *lemma, *pos, Some(*synset)),
        _ => {
            return Err(Error::format(
                path,
                line,
                format!("token {field:?} must be surface|lemma|pos or surface|lemma|pos|synset-id"),
            ))
        }
    };
    let lemma = normalize_lemma(lemma);
    if surface.is_empty() || lemma.is_empty() {
        return Err(Error::format(
            path,
            line,
            format!("token {field:?} has an empty surface or lemma"),
        ));
    }
    let pos: Pos = pos.parse().map_err(|e| Error::format(path, line, e))?;
    let synset = synset
        .map(|s| s.parse::<SynsetId>().map_err(|e| Error::format(path, line, e)))
        .transpose()?;
    Ok(AnnotatedToken {
        surface: surface.to_string(),
        lemma,
        pos,
        synset,
    })
}

/// The lexicon polarity of one token, if it matches.
pub fn token_polarity(lexicon: &PolarityLexicon, token: &AnnotatedToken) -> Option<Polarity> {
    let key = match lexicon.level {
        Level::Word => LexiconKey::word(&token.lemma, token.pos),
        Level::Synset => LexiconKey::Synset(token.synset?),
    };
    lexicon.polarity_of(&key)
}

/// Average polarity ratio: matched positive tokens count +1, matched
/// negative tokens −1, everything else 0, divided by the total token
/// count. An empty document scores 0.
pub fn avg_ratio(lexicon: &PolarityLexicon, document: &Document) -> f64 {
    if document.tokens.is_empty() {
        return 0.0;
    }
    let signed: i64 = document
        .tokens
        .iter()
        .map(|token| match token_polarity(lexicon, token) {
            Some(Polarity::Positive) => 1,
            Some(Polarity::Negative) => -1,
            None => 0,
        })
        .sum();
    signed as f64 / document.tokens.len() as f64
}

/// Picks the decision threshold maximizing accuracy on the development
/// documents (severity: score ≥ threshold classifies positive).
/// Candidates are one value below every score, the midpoints between
/// consecutive distinct scores, and one value above every score; ties
/// resolve to the smallest candidate.
pub fn tune_threshold(lexicon: &PolarityLexicon, dev: &[Document]) -> Result<f64> {
    if dev.is_empty() {
        return Err(Error::InvalidConfig(
            "threshold tuning needs a non-empty development set".to_string(),
        ));
    }
    let scored: Vec<(f64, Polarity)> = dev
        .iter()
        .map(|doc| (avg_ratio(lexicon, doc), doc.label))
        .collect();
    let mut distinct: Vec<f64> = scored.iter().map(|(s, _)| *s).collect();
    distinct.sort_unstable_by(|a, b| a.total_cmp(b));
    distinct.dedup();

    let mut candidates = Vec::with_capacity(distinct.len() + 1);
    candidates.push(distinct[0] - 1.0);
    for pair in distinct.windows(2) {
        candidates.push((pair[0] + pair[1]) / 2.0);
    }
    candidates.push(distinct[distinct.len() - 1] + 1.0);

    let mut best = (candidates[0], 0usize);
    for &threshold in &candidates {
        let correct = scored
            .iter()
            .filter(|&&(score, label)| {
                let predicted = if score >= threshold {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                };
                predicted == label
            })
            .count();
        // Strict improvement only: earlier (smaller) candidates win ties.
        if correct > best.1 {
            best = (threshold, correct);
        }
    }
    Ok(best.0)
}

/// Classifies documents by thresholded average ratio and counts the
/// confusion against their gold labels.
pub fn classify_documents(
    lexicon: &PolarityLexicon,
    threshold: f64,
    documents: &[Document],
) -> EvalReport {
    let mut report = EvalReport {
        threshold: Some(threshold),
        ..EvalReport::default()
    };
    for document in documents {
        let predicted = if avg_ratio(lexicon, document) >= threshold {
            Polarity::Positive
        } else {
            Polarity::Negative
        };
        report.count(document.label, Some(predicted));
    }
    report
}

/// Tunes the threshold on `dev`, then evaluates on `test`.
pub fn evaluate_documents(
    lexicon: &PolarityLexicon,
    dev: &[Document],
    test: &[Document],
) -> Result<EvalReport> {
    let threshold = tune_threshold(lexicon, dev)?;
    Ok(classify_documents(lexicon, threshold, test))
}

/// Classifies phrases by negative dominance: any matched negative token
/// makes the phrase negative; otherwise any matched positive token makes
/// it positive; otherwise it stays untagged.
pub fn classify_phrases(lexicon: &PolarityLexicon, phrases: &[Document]) -> EvalReport {
    let mut report = EvalReport::default();
    for phrase in phrases {
        let mut any_positive = false;
        let mut any_negative = false;
        for token in &phrase.tokens {
            match token_polarity(lexicon, token) {
                Some(Polarity::Negative) => any_negative = true,
                Some(Polarity::Positive) => any_positive = true,
                None => {}
            }
        }
        let predicted = if any_negative {
            Some(Polarity::Negative)
        } else if any_positive {
            Some(Polarity::Positive)
        } else {
            None
        };
        report.count(phrase.label, predicted);
    }
    report
}

/// Compares a predicted lexicon against a gold lexicon over their shared
/// keys.
pub fn intrinsic_eval(
    predicted: &PolarityLexicon,
    gold: &PolarityLexicon,
) -> Result<EvalReport> {
    if predicted.level != gold.level {
        return Err(Error::InvalidConfig(format!(
            "cannot compare a {}-level lexicon against {}-level gold",
            predicted.level, gold.level
        )));
    }
    let mut report = EvalReport::default();
    for key in gold.entries.keys() {
        let (Some(gold_polarity), Some(predicted_polarity)) =
            (gold.polarity_of(key), predicted.polarity_of(key))
        else {
            continue;
        };
        report.count(gold_polarity, Some(predicted_polarity));
    }
    if report.total() == 0 {
        return Err(Error::InvalidConfig(
            "predicted and gold lexicons share no keys".to_string(),
        ));
    }
    Ok(report)
}

/// Confusion counts plus derived metrics. `untagged_*` rows only occur
/// for classifiers that may abstain (phrases).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    pub true_pos: u32,
    pub false_pos: u32,
    pub true_neg: u32,
    pub false_neg: u32,
    pub untagged_pos: u32,
    pub untagged_neg: u32,
    pub threshold: Option<f64>,
}

impl EvalReport {
    fn count(&mut self, gold: Polarity, predicted: Option<Polarity>) {
        match (gold, predicted) {
            (Polarity::Positive, Some(Polarity::Positive)) => self.true_pos += 1,
            (Polarity::Positive, Some(Polarity::Negative)) => self.false_neg += 1,
            (Polarity::Negative, Some(Polarity::Positive)) => self.false_pos += 1,
            (Polarity::Negative, Some(Polarity::Negative)) => self.true_neg += 1,
            (Polarity::Positive, None) => self.untagged_pos += 1,
            (Polarity::Negative, None) => self.untagged_neg += 1,
        }
    }

    pub fn total(&self) -> u32 {
        self.true_pos
            + self.false_pos
            + self.true_neg
            + self.false_neg
            + self.untagged_pos
            + self.untagged_neg
    }

    /// Correct predictions over everything, untagged items counting as
    /// wrong.
    pub fn accuracy(&self) -> f64 {
        ratio(self.true_pos + self.true_neg, self.total())
    }

    /// Of the items tagged positive, how many were. Untagged items are
    /// not positive predictions, so they stay out of the denominator.
    pub fn precision_pos(&self) -> f64 {
        ratio(self.true_pos, self.true_pos + self.false_pos)
    }

    /// Of the gold-positive items — tagged or not — how many were tagged
    /// positive.
    pub fn recall_pos(&self) -> f64 {
        ratio(self.true_pos, self.true_pos + self.false_neg + self.untagged_pos)
    }

    pub fn f1_pos(&self) -> f64 {
        f1(self.precision_pos(), self.recall_pos())
    }

    pub fn precision_neg(&self) -> f64 {
        ratio(self.true_neg, self.true_neg + self.false_neg)
    }

    pub fn recall_neg(&self) -> f64 {
        ratio(self.true_neg, self.true_neg + self.false_pos + self.untagged_neg)
    }

    pub fn f1_neg(&self) -> f64 {
        f1(self.precision_neg(), self.recall_neg())
    }

    pub fn macro_f1(&self) -> f64 {
        (self.f1_pos() + self.f1_neg()) / 2.0
    }
}

fn ratio(numerator: u32, denominator: u32) -> f64 {
    if denominator == 0 {
        0.0
    } else {
        numerator as f64 / denominator as f64
    }
}

fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>10} {:>10} {:>10}", "", "gold-pos", "gold-neg")?;
        writeln!(f, "{:>10} {:>10} {:>10}", "pred-pos", self.true_pos, self.false_pos)?;
        writeln!(f, "{:>10} {:>10} {:>10}", "pred-neg", self.false_neg, self.true_neg)?;
        writeln!(
            f,
            "{:>10} {:>10} {:>10}",
            "untagged", self.untagged_pos, self.untagged_neg
        )?;
        writeln!(f)?;
        writeln!(f, "total={}", self.total())?;
        writeln!(f, "accuracy={:.4}", self.accuracy())?;
        writeln!(f, "precision-pos={:.4}", self.precision_pos())?;
        writeln!(f, "recall-pos={:.4}", self.recall_pos())?;
        writeln!(f, "f1-pos={:.4}", self.f1_pos())?;
        writeln!(f, "precision-neg={:.4}", self.precision_neg())?;
        writeln!(f, "recall-neg={:.4}", self.recall_neg())?;
        writeln!(f, "f1-neg={:.4}", self.f1_neg())?;
        writeln!(f, "macro-f1={:.4}", self.macro_f1())?;
        if let Some(threshold) = self.threshold {
            writeln!(f, "threshold={threshold}")?;
        }
        Ok(())
    }
}
