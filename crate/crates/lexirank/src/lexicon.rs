//! Signed polarity lexicons assembled from rank vectors.
//!
//! A lexicon entry is a key (synset id, or lemma#pos at word level) with
//! a signed score: the sum of the positive-side rank runs minus the sum
//! of the negative-side runs. Positive score means positive polarity.
//! Keys whose score is exactly zero carry no signal and are excluded.
//!
//! Two assembly shapes exist:
//!
//! * [`assemble_g1`] runs four propagations over the two one-relation
//!   projections — synonymy and antonymy — and cross-assigns them:
//!   antonyms of negative seeds support the positive side and vice
//!   versa.
//! * [`assemble_single`] runs one propagation per polarity over a single
//!   mixed-relation projection.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lkb::{GraphVariant, LexicalKb, NodeIndex, Pos, PropagationGraph, SynsetId};
use crate::ppv::{make_personalization, pagerank, PpvConfig, RankVector};
use crate::seedgen::{Polarity, SeedSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Synset,
    Word,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Synset => "synset",
            Level::Word => "word",
        }
    }

    /// Single-letter tag used in generated run names.
    pub fn letter(self) -> char {
        match self {
            Level::Synset => 's',
            Level::Word => 'w',
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Level, String> {
        match s {
            "synset" => Ok(Level::Synset),
            "word" => Ok(Level::Word),
            _ => Err(format!("unknown lexicon level {s:?} (expected synset or word)")),
        }
    }
}

/// A word-level lexicon key: lemma plus part of speech.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordKey {
    pub lemma: String,
    pub pos: Pos,
}

impl fmt::Display for WordKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.lemma, self.pos)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LexiconKey {
    Synset(SynsetId),
    Word(WordKey),
}

impl LexiconKey {
    pub fn word(lemma: &str, pos: Pos) -> LexiconKey {
        LexiconKey::Word(WordKey {
            lemma: crate::lkb::normalize_lemma(lemma),
            pos,
        })
    }

    fn parse(level: Level, s: &str) -> std::result::Result<LexiconKey, String> {
        match level {
            Level::Synset => Ok(LexiconKey::Synset(s.parse()?)),
            Level::Word => match s.rsplit_once('#') {
                Some((lemma, pos)) if !lemma.is_empty() => Ok(LexiconKey::Word(WordKey {
                    lemma: crate::lkb::normalize_lemma(lemma),
                    pos: pos.parse()?,
                })),
                _ => Err(format!("expected <lemma>#<pos>, got {s:?}")),
            },
        }
    }
}

impl fmt::Display for LexiconKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexiconKey::Synset(id) => id.fmt(f),
            LexiconKey::Word(key) => key.fmt(f),
        }
    }
}

/// A signed polarity lexicon. Every stored score is nonzero; its sign is
/// the polarity.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarityLexicon {
    pub level: Level,
    pub entries: BTreeMap<LexiconKey, f64>,
    pub metadata: BTreeMap<String, String>,
}

impl PolarityLexicon {
    pub fn polarity_of(&self, key: &LexiconKey) -> Option<Polarity> {
        self.entries.get(key).map(|&score| {
            if score > 0.0 {
                Polarity::Positive
            } else {
                Polarity::Negative
            }
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Combines rank runs into a synset-level lexicon: each node scores the
/// sum of the positive runs minus the sum of the negative runs. Nodes
/// scoring exactly zero (typically untouched by every run) are left out.
pub fn combine(
    nodes: &NodeIndex,
    positive_runs: &[RankVector],
    negative_runs: &[RankVector],
) -> Result<PolarityLexicon> {
    if positive_runs.is_empty() && negative_runs.is_empty() {
        return Err(Error::InvalidConfig(
            "lexicon assembly needs at least one rank vector".to_string(),
        ));
    }
    for run in positive_runs.iter().chain(negative_runs) {
        if run.scores.len() != nodes.len() {
            return Err(Error::InvalidConfig(format!(
                "rank vector has {} scores for a node space of {}",
                run.scores.len(),
                nodes.len()
            )));
        }
    }
    let mut entries = BTreeMap::new();
    for index in 0..nodes.len() {
        let positive: f64 = positive_runs.iter().map(|r| r.scores[index]).sum();
        let negative: f64 = negative_runs.iter().map(|r| r.scores[index]).sum();
        let score = positive - negative;
        if score != 0.0 {
            entries.insert(LexiconKey::Synset(nodes.id(index)), score);
        }
    }
    Ok(PolarityLexicon {
        level: Level::Synset,
        entries,
        metadata: BTreeMap::new(),
    })
}

fn seed_metadata(lexicon: &mut PolarityLexicon, seeds: &SeedSet, config: &PpvConfig) {
    let m = &mut lexicon.metadata;
    m.insert("damping".to_string(), config.damping.to_string());
    m.insert("tolerance".to_string(), format!("{:e}", config.tolerance));
    m.insert("seed-method".to_string(), seeds.method.to_string());
    m.insert("seed-iteration".to_string(), seeds.iteration.to_string());
    m.insert("seed-policy".to_string(), seeds.policy.to_string());
    m.insert("seeds-positive".to_string(), seeds.positive.len().to_string());
    m.insert("seeds-negative".to_string(), seeds.negative.len().to_string());
}

/// Four-run cross-assigned assembly over the synonymy and antonymy
/// projections: the positive side sums ranks propagated from positive
/// seeds through synonymy and from *negative* seeds through antonymy;
/// the negative side mirrors that.
pub fn assemble_g1(
    syn: &PropagationGraph,
    ant: &PropagationGraph,
    seeds: &SeedSet,
    config: &PpvConfig,
) -> Result<PolarityLexicon> {
    if syn.variant() != GraphVariant::G1Syn || ant.variant() != GraphVariant::G1Ant {
        return Err(Error::InvalidConfig(format!(
            "cross-assignment expects the G1SYN and G1ANT projections, got {} and {}",
            syn.variant(),
            ant.variant()
        )));
    }
    if !syn.same_node_space(ant) {
        return Err(Error::InvalidConfig(
            "synonymy and antonymy projections must share one node space".to_string(),
        ));
    }
    let (v_pos_syn, _) = make_personalization(syn, &seeds.positive)?;
    let (v_neg_syn, _) = make_personalization(syn, &seeds.negative)?;
    let (v_pos_ant, _) = make_personalization(ant, &seeds.positive)?;
    let (v_neg_ant, _) = make_personalization(ant, &seeds.negative)?;

    let syn_from_pos = pagerank(syn, &v_pos_syn, config)?;
    let ant_from_neg = pagerank(ant, &v_neg_ant, config)?;
    let syn_from_neg = pagerank(syn, &v_neg_syn, config)?;
    let ant_from_pos = pagerank(ant, &v_pos_ant, config)?;

    let iterations = format!(
        "{},{},{},{}",
        syn_from_pos.iterations,
        ant_from_neg.iterations,
        syn_from_neg.iterations,
        ant_from_pos.iterations
    );
    let mut lexicon = combine(
        syn.nodes(),
        &[syn_from_pos, ant_from_neg],
        &[syn_from_neg, ant_from_pos],
    )?;
    lexicon.metadata.insert("assembly".to_string(), "G1".to_string());
    lexicon.metadata.insert("ppr-iterations".to_string(), iterations);
    seed_metadata(&mut lexicon, seeds, config);
    Ok(lexicon)
}

/// Two-run assembly over one projection: positive seeds vs. negative
/// seeds.
pub fn assemble_single(
    graph: &PropagationGraph,
    seeds: &SeedSet,
    config: &PpvConfig,
) -> Result<PolarityLexicon> {
    let (v_pos, _) = make_personalization(graph, &seeds.positive)?;
    let (v_neg, _) = make_personalization(graph, &seeds.negative)?;
    let from_pos = pagerank(graph, &v_pos, config)?;
    let from_neg = pagerank(graph, &v_neg, config)?;
    let iterations = format!("{},{}", from_pos.iterations, from_neg.iterations);
    let mut lexicon = combine(graph.nodes(), &[from_pos], &[from_neg])?;
    lexicon
        .metadata
        .insert("assembly".to_string(), graph.variant().to_string());
    lexicon.metadata.insert("ppr-iterations".to_string(), iterations);
    seed_metadata(&mut lexicon, seeds, config);
    Ok(lexicon)
}

/// Projects a synset-level lexicon onto words. Each (lemma, pos) pair
/// takes the majority polarity of its scored senses and sums the scores
/// of the winning side; words whose scored senses tie are excluded, and
/// words with no scored sense are absent.
pub fn synset_to_word(lexicon: &PolarityLexicon, kb: &LexicalKb) -> Result<PolarityLexicon> {
    if lexicon.level != Level::Synset {
        return Err(Error::InvalidConfig(
            "word projection expects a synset-level lexicon".to_string(),
        ));
    }
    let mut entries = BTreeMap::new();
    let mut ties = 0u32;

    // Senses are sorted by (lemma, pos, ...) — walk groups.
    let senses = kb.senses();
    let mut start = 0;
    while start < senses.len() {
        let lemma = &senses[start].lemma;
        let pos = senses[start].synset.pos;
        let mut end = start;
        while end < senses.len() && senses[end].lemma == *lemma && senses[end].synset.pos == pos {
            end += 1;
        }

        let mut positive = (0usize, 0.0f64);
        let mut negative = (0usize, 0.0f64);
        for sense in &senses[start..end] {
            if let Some(&score) = lexicon.entries.get(&LexiconKey::Synset(sense.synset)) {
                if score > 0.0 {
                    positive = (positive.0 + 1, positive.1 + score);
                } else {
                    negative = (negative.0 + 1, negative.1 + score);
                }
            }
        }
        match positive.0.cmp(&negative.0) {
            std::cmp::Ordering::Greater => {
                entries.insert(LexiconKey::word(lemma, pos), positive.1);
            }
            std::cmp::Ordering::Less => {
                entries.insert(LexiconKey::word(lemma, pos), negative.1);
            }
            std::cmp::Ordering::Equal => {
                if positive.0 > 0 {
                    ties += 1;
                }
            }
        }
        start = end;
    }

    let mut metadata = lexicon.metadata.clone();
    metadata.insert("converted-from".to_string(), "synset".to_string());
    metadata.insert("ties-excluded".to_string(), ties.to_string());
    Ok(PolarityLexicon {
        level: Level::Word,
        entries,
        metadata,
    })
}

/// Projects a word-level lexicon onto synsets via each word's rank-1
/// sense. Words resolving to no sense are skipped (counted); colliding
/// words sum their scores, and a collision summing to exactly zero is
/// excluded.
pub fn word_to_synset(lexicon: &PolarityLexicon, kb: &LexicalKb) -> Result<PolarityLexicon> {
    if lexicon.level != Level::Word {
        return Err(Error::InvalidConfig(
            "synset projection expects a word-level lexicon".to_string(),
        ));
    }
    let mut sums: BTreeMap<SynsetId, f64> = BTreeMap::new();
    let mut skipped = 0u32;
    for (key, &score) in &lexicon.entries {
        let word = match key {
            LexiconKey::Word(word) => word,
            LexiconKey::Synset(id) => {
                return Err(Error::InvalidConfig(format!(
                    "word-level lexicon contains synset key {id}"
                )))
            }
        };
        match kb.first_sense(&word.lemma, word.pos) {
            Some(sense) => *sums.entry(sense.synset).or_insert(0.0) += score,
            None => skipped += 1,
        }
    }
    let mut zero_excluded = 0u32;
    let mut entries = BTreeMap::new();
    for (synset, score) in sums {
        if score == 0.0 {
            zero_excluded += 1;
        } else {
            entries.insert(LexiconKey::Synset(synset), score);
        }
    }
    let mut metadata = lexicon.metadata.clone();
    metadata.insert("converted-from".to_string(), "word".to_string());
    metadata.insert("skipped-words".to_string(), skipped.to_string());
    metadata.insert("zero-sum-excluded".to_string(), zero_excluded.to_string());
    Ok(PolarityLexicon {
        level: Level::Synset,
        entries,
        metadata,
    })
}

/// Writes a lexicon: `#` metadata lines (`key=value`, sorted, including
/// the level), then one `<key> <TAB> pos|neg <TAB> <score>` line per
/// entry, sorted by key. The score keeps its sign; the label is
/// redundant with it and checked on read.
pub fn write_lexicon(lexicon: &PolarityLexicon, out: &mut dyn Write) -> std::io::Result<()> {
    let mut metadata = lexicon.metadata.clone();
    metadata.insert("level".to_string(), lexicon.level.to_string());
    metadata.insert("entries".to_string(), lexicon.entries.len().to_string());
    for (key, value) in &metadata {
        writeln!(out, "# {key}={value}")?;
    }
    for (key, score) in &lexicon.entries {
        let label = if *score > 0.0 { Polarity::Positive } else { Polarity::Negative };
        writeln!(out, "{key}\t{label}\t{score}")?;
    }
    Ok(())
}

pub fn read_lexicon(path: &Path) -> Result<PolarityLexicon> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut metadata = BTreeMap::new();
    let mut level: Option<Level> = None;
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() {
            continue;
        }
        if let Some(comment) = row.strip_prefix('#') {
            if let Some((key, value)) = comment.trim().split_once('=') {
                let (key, value) = (key.trim().to_string(), value.trim().to_string());
                if key == "level" {
                    level = Some(value.parse().map_err(|e| Error::format(path, line, e))?);
                }
                metadata.insert(key, value);
            }
            continue;
        }
        let fields: Vec<&str> = row.split('\t').collect();
        let (key, label, score) = match fields.as_slice() {
            [key, label, score] => (*key, *label, *score),
            _ => {
                return Err(Error::format(
                    path,
                    line,
                    "expected <key><TAB>pos|neg<TAB><score>",
                ))
            }
        };
        // Without an explicit level header, the first entry's key shape
        // decides: synset ids never contain '#'.
        let level = *level.get_or_insert_with(|| {
            if key.contains('#') {
                Level::Word
            } else {
                Level::Synset
            }
        });
        let key = LexiconKey::parse(level, key).map_err(|e| Error::format(path, line, e))?;
        let label: Polarity = label.parse().map_err(|e| Error::format(path, line, e))?;
        let score: f64 = score
            .parse()
            .map_err(|_| Error::format(path, line, format!("unparseable score {score:?}")))?;
        if !score.is_finite() || score == 0.0 {
            return Err(Error::format(path, line, "score must be finite and nonzero"));
        }
        let sign = if score > 0.0 { Polarity::Positive } else { Polarity::Negative };
        if sign != label {
            return Err(Error::format(
                path,
                line,
                format!("label {label} contradicts score {score}"),
            ));
        }
        if entries.insert(key.clone(), score).is_some() {
            return Err(Error::format(path, line, format!("duplicate key {key}")));
        }
    }
    let level = level.ok_or_else(|| Error::format(path, 0, "lexicon has no entries and no level header"))?;
    metadata.insert("level".to_string(), level.to_string());
    Ok(PolarityLexicon {
        level,
        entries,
        metadata,
    })
}
