//! Polarity seed generation.
//!
//! Two methods produce an initial polarity-labeled synset set:
//!
//! * `ag` starts from the *quality* noun synsets: their attribute-related
//!   adjective synsets are classified positive or negative by marker
//!   lemmas (positive/good/superior vs. negative/bad/inferior).
//! * `tl` starts from a 14-lemma word list (7 positive, 7 negative),
//!   resolving each lemma to its most frequent sense.
//!
//! Either seed set may then be expanded breadth-first over a configurable
//! relation set: each labeled frontier synset proposes its polarity to
//! unlabeled neighbors — flipped across antonym edges — and a synset
//! proposed both polarities in the same step is marked conflicted and
//! never labeled. Previously labeled synsets are never relabeled.
//! [`resolve_conflicts`] turns the raw (possibly overlapping) reach maps
//! into disjoint sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lkb::{LexicalKb, Pos, RelType, SynsetId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "pos",
            Polarity::Negative => "neg",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Polarity, String> {
        match s {
            "pos" => Ok(Polarity::Positive),
            "neg" => Ok(Polarity::Negative),
            _ => Err(format!("unknown polarity {s:?} (expected pos or neg)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeedMethod {
    Ag,
    Tl,
}

impl SeedMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SeedMethod::Ag => "ag",
            SeedMethod::Tl => "tl",
        }
    }
}

impl fmt::Display for SeedMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SeedMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<SeedMethod, String> {
        match s {
            "ag" => Ok(SeedMethod::Ag),
            "tl" => Ok(SeedMethod::Tl),
            _ => Err(format!("unknown seed method {s:?} (expected ag or tl)")),
        }
    }
}

/// What to do with synsets reached with both polarities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConflictPolicy {
    /// Remove the synset from both sides (default: conflicts signal
    /// unreliable polarity).
    Drop,
    /// Keep the polarity assigned at the shallower depth; equal depths
    /// are dropped.
    FirstWins,
}

impl ConflictPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            ConflictPolicy::Drop => "drop",
            ConflictPolicy::FirstWins => "first-wins",
        }
    }
}

impl fmt::Display for ConflictPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConflictPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<ConflictPolicy, String> {
        match s {
            "drop" => Ok(ConflictPolicy::Drop),
            "first-wins" => Ok(ConflictPolicy::FirstWins),
            _ => Err(format!("unknown conflict policy {s:?} (expected drop or first-wins)")),
        }
    }
}

/// A seed lemma with optional part-of-speech pin and a polarity label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedWord {
    pub lemma: String,
    pub pos: Option<Pos>,
    pub polarity: Polarity,
}

impl SeedWord {
    pub fn new(lemma: &str, pos: Option<Pos>, polarity: Polarity) -> Self {
        SeedWord {
            lemma: crate::lkb::normalize_lemma(lemma),
            pos,
            polarity,
        }
    }

    /// Parses `lemma` or `lemma#p` (p one of n, v, a, r).
    pub fn parse(spec: &str, polarity: Polarity) -> std::result::Result<SeedWord, String> {
        match spec.rsplit_once('#') {
            None => Ok(SeedWord::new(spec, None, polarity)),
            Some((lemma, pos)) => {
                let pos: Pos = pos.parse()?;
                Ok(SeedWord::new(lemma, Some(pos), polarity))
            }
        }
    }
}

/// Marker lemmas that classify a quality-attribute adjective as positive.
pub const AG_POSITIVE_MARKERS: [&str; 3] = ["positive", "good", "superior"];
/// Marker lemmas that classify a quality-attribute adjective as negative.
pub const AG_NEGATIVE_MARKERS: [&str; 3] = ["negative", "bad", "inferior"];

const TL_POSITIVE: [&str; 7] = [
    "good", "nice", "excellent", "positive", "fortunate", "correct", "superior",
];
const TL_NEGATIVE: [&str; 7] = [
    "bad", "nasty", "poor", "negative", "unfortunate", "wrong", "inferior",
];

/// The default 14-word seed list (7 positive, 7 negative), pinned to
/// adjective senses.
pub fn default_seed_words() -> Vec<SeedWord> {
    TL_POSITIVE
        .iter()
        .map(|l| SeedWord::new(l, Some(Pos::Adjective), Polarity::Positive))
        .chain(
            TL_NEGATIVE
                .iter()
                .map(|l| SeedWord::new(l, Some(Pos::Adjective), Polarity::Negative)),
        )
        .collect()
}

/// The five relations the word-list method expands across.
pub fn tl_relations() -> BTreeSet<RelType> {
    BTreeSet::from([
        RelType::Antonym,
        RelType::SimilarTo,
        RelType::DerivedFrom,
        RelType::PertainsTo,
        RelType::AlsoSee,
    ])
}

/// Default expansion relations for the attribute method: the five
/// word-list relations plus attribute.
pub fn ag_default_relations() -> BTreeSet<RelType> {
    let mut rels = tl_relations();
    rels.insert(RelType::Attribute);
    rels
}

/// The raw outcome of seed generation plus expansion, before conflict
/// resolution: for each polarity, every synset reached with that polarity
/// and the depth at which it was first reached. A synset proposed both
/// polarities at the same depth appears in both maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSeeds {
    pub method: SeedMethod,
    pub iteration: u32,
    pub relations: BTreeSet<RelType>,
    pub positive: BTreeMap<SynsetId, u32>,
    pub negative: BTreeMap<SynsetId, u32>,
    /// Depth after which expansion stopped growing, when it stabilized
    /// before the requested iteration count.
    pub fixed_point: Option<u32>,
    /// Seed lemmas that resolved to no synset (word-list method with
    /// skipping enabled).
    pub skipped_lemmas: Vec<String>,
    /// Attribute adjectives carrying no marker lemma (attribute method).
    pub unclassified_attributes: u32,
}

impl RawSeeds {
    /// Applies a conflict policy; errors if either polarity side ends up
    /// empty.
    pub fn resolve(&self, policy: ConflictPolicy) -> Result<SeedSet> {
        let (positive, negative) = resolve_conflicts(&self.positive, &self.negative, policy);
        if positive.is_empty() || negative.is_empty() {
            return Err(Error::EmptySeeds(format!(
                "{} seeds at iteration {} left {} positive / {} negative synsets after conflict resolution",
                self.method,
                self.iteration,
                positive.len(),
                negative.len()
            )));
        }
        let reached: BTreeSet<&SynsetId> =
            self.positive.keys().chain(self.negative.keys()).collect();
        let dropped = reached.len() - positive.len() - negative.len();
        Ok(SeedSet {
            method: self.method,
            iteration: self.iteration,
            policy,
            relations: self.relations.clone(),
            positive,
            negative,
            fixed_point: self.fixed_point,
            dropped_conflicts: dropped as u32,
        })
    }
}

/// A conflict-free polarity seed set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedSet {
    pub method: SeedMethod,
    pub iteration: u32,
    pub policy: ConflictPolicy,
    pub relations: BTreeSet<RelType>,
    pub positive: BTreeSet<SynsetId>,
    pub negative: BTreeSet<SynsetId>,
    pub fixed_point: Option<u32>,
    pub dropped_conflicts: u32,
}

/// Resolves overlapping polarity reach maps into disjoint sets.
///
/// `drop` removes synsets present in both maps from both sides.
/// `first-wins` keeps the side with the shallower recorded depth and
/// drops equal-depth ties.
pub fn resolve_conflicts(
    raw_pos: &BTreeMap<SynsetId, u32>,
    raw_neg: &BTreeMap<SynsetId, u32>,
    policy: ConflictPolicy,
) -> (BTreeSet<SynsetId>, BTreeSet<SynsetId>) {
    let mut positive = BTreeSet::new();
    let mut negative = BTreeSet::new();
    for (&id, &depth_pos) in raw_pos {
        match (raw_neg.get(&id), policy) {
            (None, _) => {
                positive.insert(id);
            }
            (Some(_), ConflictPolicy::Drop) => {}
            (Some(&depth_neg), ConflictPolicy::FirstWins) => {
                if depth_pos < depth_neg {
                    positive.insert(id);
                }
            }
        }
    }
    for (&id, &depth_neg) in raw_neg {
        match (raw_pos.get(&id), policy) {
            (None, _) => {
                negative.insert(id);
            }
            (Some(_), ConflictPolicy::Drop) => {}
            (Some(&depth_pos), ConflictPolicy::FirstWins) => {
                if depth_neg < depth_pos {
                    negative.insert(id);
                }
            }
        }
    }
    (positive, negative)
}

/// Attribute-method seeds: classify the quality synsets' attribute
/// adjectives at iteration 0, then expand across `relations`.
pub fn ag_seeds(
    kb: &LexicalKb,
    iterations: u32,
    relations: &BTreeSet<RelType>,
    policy: ConflictPolicy,
) -> Result<SeedSet> {
    ag_seeds_raw(kb, iterations, relations)?.resolve(policy)
}

pub fn ag_seeds_raw(
    kb: &LexicalKb,
    iterations: u32,
    relations: &BTreeSet<RelType>,
) -> Result<RawSeeds> {
    let quality: BTreeSet<SynsetId> = kb
        .senses_of("quality")
        .filter(|s| s.synset.pos == Pos::Noun)
        .map(|s| s.synset)
        .collect();
    if quality.is_empty() {
        return Err(Error::UnsupportedKb(
            "no quality noun synset found for attribute-based seeding".to_string(),
        ));
    }

    // Attribute neighbors of the quality synsets, classified by marker
    // lemmas. Iteration 0 always uses attribute edges, regardless of the
    // expansion relation set.
    let mut initial: BTreeMap<SynsetId, Proposal> = BTreeMap::new();
    let mut unclassified = 0u32;
    let mut saw_attribute = false;
    for rel in kb.relations() {
        if rel.rel_type != RelType::Attribute {
            continue;
        }
        let adjective = if quality.contains(&rel.source) {
            rel.target
        } else if quality.contains(&rel.target) {
            rel.source
        } else {
            continue;
        };
        if adjective.pos != Pos::Adjective {
            continue;
        }
        saw_attribute = true;
        let lemmas = kb.member_lemmas(adjective);
        let is_pos = lemmas.iter().any(|l| AG_POSITIVE_MARKERS.contains(l));
        let is_neg = lemmas.iter().any(|l| AG_NEGATIVE_MARKERS.contains(l));
        match (is_pos, is_neg) {
            (false, false) => unclassified += 1,
            _ => {
                let entry = initial.entry(adjective).or_default();
                entry.positive |= is_pos;
                entry.negative |= is_neg;
            }
        }
    }
    if !saw_attribute {
        return Err(Error::UnsupportedKb(
            "quality noun synsets have no attribute relations".to_string(),
        ));
    }

    let mut raw = expand(kb, initial, iterations, relations);
    raw.method = SeedMethod::Ag;
    raw.unclassified_attributes = unclassified;
    Ok(raw)
}

/// Word-list seeds with the default 14-word list, strict resolution.
pub fn tl_seeds(kb: &LexicalKb, iterations: u32, policy: ConflictPolicy) -> Result<SeedSet> {
    tl_seeds_raw(kb, iterations, &default_seed_words(), false)?.resolve(policy)
}

/// Word-list seeds with a custom list. Each lemma resolves to its rank-1
/// sense — of the pinned part of speech, or of the first part of speech
/// in n, v, a, r order that has one. Unresolvable lemmas are an error
/// unless `skip_unresolved` is set, in which case they are recorded.
pub fn tl_seeds_raw(
    kb: &LexicalKb,
    iterations: u32,
    words: &[SeedWord],
    skip_unresolved: bool,
) -> Result<RawSeeds> {
    let mut initial: BTreeMap<SynsetId, Proposal> = BTreeMap::new();
    let mut skipped = Vec::new();
    for word in words {
        let sense = match word.pos {
            Some(pos) => kb.first_sense(&word.lemma, pos),
            // senses_of is ordered by (pos, rank), so the first entry is
            // the rank-1 sense of the first part of speech present.
            None => kb.senses_of(&word.lemma).next(),
        };
        match sense {
            Some(sense) => {
                let entry = initial.entry(sense.synset).or_default();
                match word.polarity {
                    Polarity::Positive => entry.positive = true,
                    Polarity::Negative => entry.negative = true,
                }
            }
            None if skip_unresolved => skipped.push(word.lemma.clone()),
            None => {
                return Err(Error::SeedLemma {
                    lemma: word.lemma.clone(),
                })
            }
        }
    }

    let mut raw = expand(kb, initial, iterations, &tl_relations());
    raw.method = SeedMethod::Tl;
    raw.skipped_lemmas = skipped;
    Ok(raw)
}

/// Polarities proposed to one synset within a single step.
#[derive(Clone, Copy, Debug, Default)]
struct Proposal {
    positive: bool,
    negative: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Labeled(Polarity),
    Conflicted,
}

/// Breadth-first polarity expansion. `initial` holds the depth-0
/// proposals; each subsequent step lets every synset labeled in the
/// previous step propose to its unlabeled neighbors across the kept
/// relations, flipping polarity on antonym edges. Unanimous proposals
/// label; mixed proposals mark the synset conflicted (it then blocks
/// rather than propagates). Stops early at a fixed point.
fn expand(
    kb: &LexicalKb,
    initial: BTreeMap<SynsetId, Proposal>,
    iterations: u32,
    relations: &BTreeSet<RelType>,
) -> RawSeeds {
    let mut adjacency: HashMap<SynsetId, Vec<(SynsetId, bool)>> = HashMap::new();
    for rel in kb.relations() {
        if !relations.contains(&rel.rel_type) {
            continue;
        }
        let flip = rel.rel_type == RelType::Antonym;
        adjacency.entry(rel.source).or_default().push((rel.target, flip));
        adjacency.entry(rel.target).or_default().push((rel.source, flip));
    }

    let mut states: HashMap<SynsetId, (State, u32)> = HashMap::new();
    let mut frontier: Vec<SynsetId> = Vec::new();
    let mut fixed_point = None;

    let mut proposals = initial;
    for depth in 0..=iterations {
        if depth > 0 {
            proposals = BTreeMap::new();
            for &synset in &frontier {
                let polarity = match states[&synset].0 {
                    State::Labeled(p) => p,
                    State::Conflicted => unreachable!("frontier holds labeled synsets only"),
                };
                for &(neighbor, flip) in adjacency.get(&synset).into_iter().flatten() {
                    if states.contains_key(&neighbor) {
                        continue;
                    }
                    let proposed = if flip { polarity.flip() } else { polarity };
                    let entry = proposals.entry(neighbor).or_default();
                    match proposed {
                        Polarity::Positive => entry.positive = true,
                        Polarity::Negative => entry.negative = true,
                    }
                }
            }
            if proposals.is_empty() {
                fixed_point = Some(depth - 1);
                break;
            }
        }

        frontier = Vec::new();
        for (&synset, proposal) in &proposals {
            let state = match (proposal.positive, proposal.negative) {
                (true, true) => State::Conflicted,
                (true, false) => State::Labeled(Polarity::Positive),
                (false, true) => State::Labeled(Polarity::Negative),
                (false, false) => continue,
            };
            states.insert(synset, (state, depth));
            if matches!(state, State::Labeled(_)) {
                frontier.push(synset);
            }
        }
    }

    let mut positive = BTreeMap::new();
    let mut negative = BTreeMap::new();
    for (&synset, &(state, depth)) in &states {
        match state {
            State::Labeled(Polarity::Positive) => {
                positive.insert(synset, depth);
            }
            State::Labeled(Polarity::Negative) => {
                negative.insert(synset, depth);
            }
            State::Conflicted => {
                positive.insert(synset, depth);
                negative.insert(synset, depth);
            }
        }
    }
    RawSeeds {
        method: SeedMethod::Ag, // overwritten by callers
        iteration: iterations,
        relations: relations.clone(),
        positive,
        negative,
        fixed_point,
        skipped_lemmas: Vec::new(),
        unclassified_attributes: 0,
    }
}

/// Writes a seed set: `#` header lines (`key=value`), then one
/// `<synset-id> <TAB> pos|neg` line per synset, sorted by id.
pub fn write_seeds(seeds: &SeedSet, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "# method={}", seeds.method)?;
    writeln!(out, "# iteration={}", seeds.iteration)?;
    writeln!(out, "# conflict-policy={}", seeds.policy)?;
    let relations: Vec<&str> = seeds.relations.iter().map(|r| r.as_str()).collect();
    writeln!(out, "# relations={}", relations.join(","))?;
    if let Some(depth) = seeds.fixed_point {
        writeln!(out, "# fixed-point={depth}")?;
    }
    writeln!(out, "# dropped-conflicts={}", seeds.dropped_conflicts)?;
    writeln!(out, "# positive={}", seeds.positive.len())?;
    writeln!(out, "# negative={}", seeds.negative.len())?;
    let mut rows: Vec<(SynsetId, Polarity)> = seeds
        .positive
        .iter()
        .map(|&s| (s, Polarity::Positive))
        .chain(seeds.negative.iter().map(|&s| (s, Polarity::Negative)))
        .collect();
    rows.sort_unstable();
    for (id, polarity) in rows {
        writeln!(out, "{id}\t{polarity}")?;
    }
    Ok(())
}

/// A seed file read back from disk: the two synset sets plus the raw
/// header metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedFile {
    pub positive: BTreeSet<SynsetId>,
    pub negative: BTreeSet<SynsetId>,
    pub metadata: BTreeMap<String, String>,
}

pub fn read_seeds(path: &Path) -> Result<SeedFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut file = SeedFile {
        positive: BTreeSet::new(),
        negative: BTreeSet::new(),
        metadata: BTreeMap::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() {
            continue;
        }
        if let Some(comment) = row.strip_prefix('#') {
            if let Some((key, value)) = comment.trim().split_once('=') {
                file.metadata.insert(key.trim().to_string(), value.trim().to_string());
            }
            continue;
        }
        let (id, polarity) = row
            .split_once('\t')
            .ok_or_else(|| Error::format(path, line, "expected <synset-id><TAB>pos|neg"))?;
        let id: SynsetId = id.parse().map_err(|e| Error::format(path, line, e))?;
        let polarity: Polarity = polarity.parse().map_err(|e| Error::format(path, line, e))?;
        let inserted = match polarity {
            Polarity::Positive => file.positive.insert(id),
            Polarity::Negative => file.negative.insert(id),
        };
        if !inserted || file.positive.contains(&id) && file.negative.contains(&id) {
            return Err(Error::format(path, line, format!("duplicate synset {id}")));
        }
    }
    Ok(file)
}
