//! Lexical knowledge bases: synsets, senses, relations, and the undirected
//! graph projections used for propagation.
//!
//! A [`LexicalKb`] is an immutable collection of synsets, sense entries
//! (lemma memberships with frequency ranks) and typed relations between
//! synsets. Two on-disk formats are supported: Princeton WordNet database
//! directories ([`KbFormat::WordnetDb`]) and a simple tab-separated listing
//! ([`KbFormat::TsvGraph`]); see [`parse_lkb`].

mod graph;
mod tsv;
mod wndb;

pub use graph::{GraphVariant, NodeIndex, PropagationGraph};

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Part of speech, in the canonical n < v < a < r order used for sorting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb];

    pub fn as_char(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adjective => 'a',
            Pos::Adverb => 'r',
        }
    }

    /// Maps a part-of-speech character. Accepts the WordNet satellite tag
    /// `s` as an alias for `a`: satellites are ordinary adjective synsets
    /// for every purpose of this crate.
    pub fn from_char(c: char) -> Option<Pos> {
        match c {
            'n' => Some(Pos::Noun),
            'v' => Some(Pos::Verb),
            'a' | 's' => Some(Pos::Adjective),
            'r' => Some(Pos::Adverb),
            _ => None,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Pos, String> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Pos::from_char(c).ok_or_else(|| format!("unknown part of speech {s:?}")),
            _ => Err(format!("unknown part of speech {s:?}")),
        }
    }
}

/// Synset identifier: part of speech plus database offset, rendered
/// canonically as a zero-padded 8-digit offset followed by the pos tag,
/// e.g. `00001740-n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: u32,
}

impl SynsetId {
    pub fn new(pos: Pos, offset: u32) -> Self {
        SynsetId { pos, offset }
    }
}

// Ordered by (pos, offset): the canonical order that also fixes dense node
// index assignment in propagation graphs.
impl Ord for SynsetId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.pos, self.offset).cmp(&(other.pos, other.offset))
    }
}

impl PartialOrd for SynsetId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}-{}", self.offset, self.pos)
    }
}

impl FromStr for SynsetId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<SynsetId, String> {
        let (digits, pos) = s
            .split_once('-')
            .ok_or_else(|| format!("synset id {s:?} is not of the form <offset>-<pos>"))?;
        if digits.is_empty() || digits.len() > 8 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("synset id {s:?} has a malformed offset"));
        }
        let offset: u32 = digits
            .parse()
            .map_err(|_| format!("synset id {s:?} has an out-of-range offset"))?;
        let pos: Pos = pos.parse().map_err(|e| format!("synset id {s:?}: {e}"))?;
        Ok(SynsetId { pos, offset })
    }
}

/// One sense of a lemma: membership of a synset together with the lemma's
/// frequency rank (1 = most frequent sense of that lemma and pos).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SenseEntry {
    pub lemma: String,
    pub synset: SynsetId,
    pub rank: u32,
}

impl SenseEntry {
    /// Canonical sort key: lemma, then pos, then rank. Keeps each
    /// lemma+pos block contiguous and ordered by sense frequency.
    fn sort_key(&self) -> (&str, Pos, u32, u32) {
        (&self.lemma, self.synset.pos, self.rank, self.synset.offset)
    }
}

/// Relation label between synsets. Labels outside the closed enumeration
/// map to [`RelType::Other`] with a warning counter at parse time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelType {
    SynonymVariant,
    Antonym,
    SimilarTo,
    DerivedFrom,
    PertainsTo,
    AlsoSee,
    Attribute,
    Hypernym,
    GlossLink,
    Other,
}

impl RelType {
    pub const ALL: [RelType; 10] = [
        RelType::SynonymVariant,
        RelType::Antonym,
        RelType::SimilarTo,
        RelType::DerivedFrom,
        RelType::PertainsTo,
        RelType::AlsoSee,
        RelType::Attribute,
        RelType::Hypernym,
        RelType::GlossLink,
        RelType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelType::SynonymVariant => "synonym-variant",
            RelType::Antonym => "antonym",
            RelType::SimilarTo => "similar-to",
            RelType::DerivedFrom => "derived-from",
            RelType::PertainsTo => "pertains-to",
            RelType::AlsoSee => "also-see",
            RelType::Attribute => "attribute",
            RelType::Hypernym => "hypernym",
            RelType::GlossLink => "gloss-link",
            RelType::Other => "other",
        }
    }
}

impl fmt::Display for RelType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<RelType, String> {
        RelType::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown relation type {s:?}"))
    }
}

/// A typed link between two synsets. Relations are stored as declared but
/// treated as undirected everywhere they are consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub rel_type: RelType,
    pub source: SynsetId,
    pub target: SynsetId,
}

impl Relation {
    pub fn new(rel_type: RelType, source: SynsetId, target: SynsetId) -> Self {
        Relation {
            rel_type,
            source,
            target,
        }
    }
}

impl Ord for Relation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.source, self.target, self.rel_type).cmp(&(other.source, other.target, other.rel_type))
    }
}

impl PartialOrd for Relation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Source format of a knowledge base.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KbFormat {
    WordnetDb,
    TsvGraph,
}

impl KbFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            KbFormat::WordnetDb => "wordnet-db",
            KbFormat::TsvGraph => "tsv-graph",
        }
    }
}

impl fmt::Display for KbFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KbFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<KbFormat, String> {
        match s {
            "wordnet-db" => Ok(KbFormat::WordnetDb),
            "tsv-graph" => Ok(KbFormat::TsvGraph),
            _ => Err(format!("unknown knowledge base format {s:?}")),
        }
    }
}

/// Where a knowledge base came from: format tag, original path, and a
/// SHA-256 digest of the source bytes, for reproducibility metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub format: KbFormat,
    pub path: String,
    pub digest: String,
}

/// Counters for recoverable oddities found while loading a knowledge base.
/// These never abort a load; hard violations raise [`Error`] instead.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadWarnings {
    /// Relation labels outside the known enumeration, mapped to `other`.
    pub unknown_relation_labels: u64,
    /// Relations whose source and target were the same synset, dropped.
    pub self_loops_dropped: u64,
    /// Data lines that could not be parsed and were skipped.
    pub unparseable_lines: u64,
}

impl LoadWarnings {
    pub fn is_clean(&self) -> bool {
        *self == LoadWarnings::default()
    }
}

/// An immutable lexical knowledge base.
///
/// Construction canonicalizes order (synsets ascending, senses by
/// lemma/pos/rank, relations by endpoints) and validates integrity:
/// every relation endpoint and sense synset must be declared, no relation
/// may be a self-loop, and sense ranks must be distinct per lemma+pos with
/// rank 1 present.
#[derive(Clone, Debug)]
pub struct LexicalKb {
    synsets: Vec<SynsetId>,
    senses: Vec<SenseEntry>,
    relations: Vec<Relation>,
    provenance: Provenance,
    /// lemma → indices into `senses`, each list ordered by (pos, rank).
    lemma_index: HashMap<String, Vec<u32>>,
    /// synset → indices into `senses` for its member lemmas.
    member_index: HashMap<SynsetId, Vec<u32>>,
}

impl LexicalKb {
    pub fn new(
        mut synsets: Vec<SynsetId>,
        mut senses: Vec<SenseEntry>,
        mut relations: Vec<Relation>,
        provenance: Provenance,
    ) -> Result<Self> {
        synsets.sort_unstable();
        synsets.dedup();

        senses.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        relations.sort_unstable();

        let declared: BTreeSet<SynsetId> = synsets.iter().copied().collect();

        let missing: Vec<String> = relations
            .iter()
            .flat_map(|r| [r.source, r.target])
            .chain(senses.iter().map(|s| s.synset))
            .filter(|id| !declared.contains(id))
            .map(|id| id.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::integrity(
                "relation or sense references an undeclared synset",
                missing,
            ));
        }

        let loops: Vec<String> = relations
            .iter()
            .filter(|r| r.source == r.target)
            .map(|r| format!("{} {} {}", r.source, r.rel_type, r.target))
            .collect();
        if !loops.is_empty() {
            return Err(Error::integrity("self-loop relation", loops));
        }

        // Per lemma+pos: no duplicate synset memberships, distinct ranks,
        // and rank 1 present.
        let mut rank_offenders = Vec::new();
        let mut i = 0;
        while i < senses.len() {
            let lemma = &senses[i].lemma;
            let pos = senses[i].synset.pos;
            let mut j = i;
            let mut seen_synsets = BTreeSet::new();
            let mut seen_ranks = BTreeSet::new();
            let mut min_rank = u32::MAX;
            while j < senses.len() && senses[j].lemma == *lemma && senses[j].synset.pos == pos {
                if !seen_synsets.insert(senses[j].synset) {
                    rank_offenders.push(format!("{lemma}#{pos}: duplicate membership of {}", senses[j].synset));
                }
                if !seen_ranks.insert(senses[j].rank) {
                    rank_offenders.push(format!("{lemma}#{pos}: duplicate sense rank {}", senses[j].rank));
                }
                min_rank = min_rank.min(senses[j].rank);
                j += 1;
            }
            if min_rank != 1 {
                rank_offenders.push(format!("{lemma}#{pos}: no rank-1 sense (lowest is {min_rank})"));
            }
            i = j;
        }
        if !rank_offenders.is_empty() {
            return Err(Error::integrity("bad sense ranks", rank_offenders));
        }

        let mut lemma_index: HashMap<String, Vec<u32>> = HashMap::new();
        let mut member_index: HashMap<SynsetId, Vec<u32>> = HashMap::new();
        for (idx, sense) in senses.iter().enumerate() {
            lemma_index
                .entry(sense.lemma.clone())
                .or_default()
                .push(idx as u32);
            member_index.entry(sense.synset).or_default().push(idx as u32);
        }

        Ok(LexicalKb {
            synsets,
            senses,
            relations,
            provenance,
            lemma_index,
            member_index,
        })
    }

    /// All synsets in ascending (pos, offset) order.
    pub fn synsets(&self) -> &[SynsetId] {
        &self.synsets
    }

    /// All senses in canonical (lemma, pos, rank) order.
    pub fn senses(&self) -> &[SenseEntry] {
        &self.senses
    }

    /// All relations in canonical (source, target, type) order.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn num_synsets(&self) -> usize {
        self.synsets.len()
    }

    pub fn contains(&self, id: SynsetId) -> bool {
        self.synsets.binary_search(&id).is_ok()
    }

    /// Senses of `lemma` across all parts of speech, ordered by (pos, rank).
    pub fn senses_of(&self, lemma: &str) -> impl Iterator<Item = &SenseEntry> {
        self.lemma_index
            .get(lemma)
            .into_iter()
            .flatten()
            .map(|&i| &self.senses[i as usize])
    }

    /// The rank-1 (most frequent) sense of `lemma` with part of speech `pos`.
    pub fn first_sense(&self, lemma: &str, pos: Pos) -> Option<&SenseEntry> {
        // Senses per lemma are ordered by (pos, rank), so the first hit for
        // the requested pos is the lowest-ranked one.
        self.senses_of(lemma).find(|s| s.synset.pos == pos)
    }

    /// Member senses of a synset.
    pub fn members(&self, id: SynsetId) -> impl Iterator<Item = &SenseEntry> {
        self.member_index
            .get(&id)
            .into_iter()
            .flatten()
            .map(|&i| &self.senses[i as usize])
    }

    /// Deduplicated, sorted member lemmas of a synset.
    pub fn member_lemmas(&self, id: SynsetId) -> Vec<&str> {
        let mut lemmas: Vec<&str> = self.members(id).map(|s| s.lemma.as_str()).collect();
        lemmas.sort_unstable();
        lemmas.dedup();
        lemmas
    }

    pub fn relation_count(&self, rel_type: RelType) -> usize {
        self.relations.iter().filter(|r| r.rel_type == rel_type).count()
    }

    /// Builds the undirected propagation graph for a variant. All variants
    /// share the node space of every synset in the KB.
    pub fn build_graph(&self, variant: GraphVariant) -> PropagationGraph {
        PropagationGraph::build(self, variant)
    }

    /// As [`build_graph`](Self::build_graph) but sharing an existing node
    /// index, so several variants can be checked for node-space identity
    /// by pointer.
    pub fn build_graph_with(&self, variant: GraphVariant, nodes: Arc<NodeIndex>) -> PropagationGraph {
        PropagationGraph::build_with(self, variant, nodes)
    }
}

/// Normalizes a lemma: lowercased, spaces replaced by underscores.
pub(crate) fn normalize_lemma(raw: &str) -> String {
    raw.trim().to_lowercase().replace(' ', "_")
}

/// Parses a knowledge base from disk.
///
/// * `wordnet-db`: `path` is a WordNet database directory holding
///   `data.noun`, `data.verb`, `data.adj`, `data.adv` and `index.sense`.
/// * `tsv-graph`: `path` is a single tab-separated file; see [`self`]
///   module docs and `write_tsv` for the schema.
///
/// Returns the knowledge base together with counters for recoverable
/// problems (unknown relation labels, dropped self-loops, skipped lines).
pub fn parse_lkb(path: &Path, format: KbFormat) -> Result<(LexicalKb, LoadWarnings)> {
    match format {
        KbFormat::WordnetDb => wndb::parse(path),
        KbFormat::TsvGraph => tsv::parse(path),
    }
}

/// Serializes a knowledge base in the tsv-graph format. The output is
/// canonical: loading it back yields a `LexicalKb` with identical synsets,
/// senses and relations.
pub fn write_tsv(kb: &LexicalKb, out: &mut dyn Write) -> std::io::Result<()> {
    tsv::write(kb, out)
}

/// SHA-256 digest of a file's bytes, as lowercase hex.
pub fn file_digest(path: &Path) -> Result<String> {
    let mut file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex_string(&hasher.finalize()))
}

pub(crate) fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Placeholder provenance for knowledge bases assembled in tests.
#[cfg(test)]
pub(crate) fn test_provenance() -> Provenance {
    Provenance {
        format: KbFormat::TsvGraph,
        path: "<test>".to_string(),
        digest: "0".repeat(64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj(offset: u32) -> SynsetId {
        SynsetId::new(Pos::Adjective, offset)
    }

    #[test]
    fn synset_id_renders_zero_padded() {
        assert_eq!(SynsetId::new(Pos::Noun, 1740).to_string(), "00001740-n");
        assert_eq!(adj(0).to_string(), "00000000-a");
    }

    #[test]
    fn synset_id_round_trips_through_display() {
        let id = SynsetId::new(Pos::Adverb, 123);
        assert_eq!(id.to_string().parse::<SynsetId>().unwrap(), id);
    }

    #[test]
    fn synset_id_rejects_malformed_strings() {
        for bad in ["", "123", "-a", "123456789-n", "12ab-n", "0001740-x", "1-n-v"] {
            assert!(bad.parse::<SynsetId>().is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn synset_id_accepts_unpadded_offsets() {
        assert_eq!(
            "42-v".parse::<SynsetId>().unwrap(),
            SynsetId::new(Pos::Verb, 42)
        );
    }

    #[test]
    fn synset_ordering_is_pos_major() {
        let noun = SynsetId::new(Pos::Noun, 999);
        let verb = SynsetId::new(Pos::Verb, 1);
        let adjective = adj(1);
        let adverb = SynsetId::new(Pos::Adverb, 0);
        assert!(noun < verb && verb < adjective && adjective < adverb);
    }

    #[test]
    fn satellite_pos_char_maps_to_adjective() {
        assert_eq!(Pos::from_char('s'), Some(Pos::Adjective));
    }

    #[test]
    fn rel_type_round_trips_through_str() {
        for rel in RelType::ALL {
            assert_eq!(rel.as_str().parse::<RelType>().unwrap(), rel);
        }
        assert!("hyponym-ish".parse::<RelType>().is_err());
    }

    #[test]
    fn normalize_lemma_lowercases_and_joins() {
        assert_eq!(normalize_lemma("Middle Ages"), "middle_ages");
        assert_eq!(normalize_lemma("good"), "good");
    }

    #[test]
    fn kb_rejects_undeclared_relation_endpoint() {
        let err = LexicalKb::new(
            vec![adj(1)],
            vec![],
            vec![Relation::new(RelType::Antonym, adj(1), adj(2))],
            test_provenance(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Integrity { .. }), "{err:?}");
    }

    #[test]
    fn kb_rejects_self_loop_relation() {
        let err = LexicalKb::new(
            vec![adj(1)],
            vec![],
            vec![Relation::new(RelType::SimilarTo, adj(1), adj(1))],
            test_provenance(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Integrity { .. }), "{err:?}");
    }

    #[test]
    fn kb_rejects_duplicate_sense_rank() {
        let sense = |offset, rank| SenseEntry {
            lemma: "good".to_string(),
            synset: adj(offset),
            rank,
        };
        let err = LexicalKb::new(
            vec![adj(1), adj(2)],
            vec![sense(1, 1), sense(2, 1)],
            vec![],
            test_provenance(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Integrity { .. }), "{err:?}");
    }

    #[test]
    fn kb_rejects_missing_rank_one() {
        let err = LexicalKb::new(
            vec![adj(1)],
            vec![SenseEntry {
                lemma: "good".to_string(),
                synset: adj(1),
                rank: 2,
            }],
            vec![],
            test_provenance(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Integrity { .. }), "{err:?}");
    }

    #[test]
    fn first_sense_picks_lowest_rank_for_pos() {
        let sense = |lemma: &str, pos, offset, rank| SenseEntry {
            lemma: lemma.to_string(),
            synset: SynsetId::new(pos, offset),
            rank,
        };
        let kb = LexicalKb::new(
            vec![
                SynsetId::new(Pos::Noun, 5),
                adj(1),
                adj(2),
            ],
            vec![
                sense("fine", Pos::Adjective, 2, 2),
                sense("fine", Pos::Adjective, 1, 1),
                sense("fine", Pos::Noun, 5, 1),
            ],
            vec![],
            test_provenance(),
        )
        .unwrap();
        assert_eq!(kb.first_sense("fine", Pos::Adjective).unwrap().synset, adj(1));
        assert_eq!(
            kb.first_sense("fine", Pos::Noun).unwrap().synset,
            SynsetId::new(Pos::Noun, 5)
        );
        assert!(kb.first_sense("fine", Pos::Verb).is_none());
        assert!(kb.first_sense("absent", Pos::Noun).is_none());
    }

    #[test]
    fn member_lemmas_are_sorted_and_deduped() {
        let sense = |lemma: &str, rank| SenseEntry {
            lemma: lemma.to_string(),
            synset: adj(1),
            rank,
        };
        let kb = LexicalKb::new(
            vec![adj(1)],
            vec![sense("zesty", 1), sense("bright", 1)],
            vec![],
            test_provenance(),
        )
        .unwrap();
        assert_eq!(kb.member_lemmas(adj(1)), vec!["bright", "zesty"]);
    }
}
