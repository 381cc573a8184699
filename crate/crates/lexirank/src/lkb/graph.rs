//! Undirected graph projections of a knowledge base.
//!
//! Every projection shares one node space — all synsets of the KB, densely
//! indexed in (pos, offset) order — and differs only in which relation
//! types contribute edges. Relations are undirected here; multiple
//! relations between the same pair collapse to a single edge, since the
//! propagation operator is defined by link existence, not multiplicity.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{LexicalKb, RelType, SynsetId};

/// The five graph projections.
///
/// * `G1SYN` — synonymy: synonym-variant and similar-to edges;
/// * `G1ANT` — antonymy: antonym edges only;
/// * `G2` — every relation;
/// * `G3` — every relation except antonym;
/// * `G4` — every relation except antonym and gloss-link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphVariant {
    G1Syn,
    G1Ant,
    G2,
    G3,
    G4,
}

impl GraphVariant {
    pub const ALL: [GraphVariant; 5] = [
        GraphVariant::G1Syn,
        GraphVariant::G1Ant,
        GraphVariant::G2,
        GraphVariant::G3,
        GraphVariant::G4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphVariant::G1Syn => "G1SYN",
            GraphVariant::G1Ant => "G1ANT",
            GraphVariant::G2 => "G2",
            GraphVariant::G3 => "G3",
            GraphVariant::G4 => "G4",
        }
    }

    /// Whether a relation of this type contributes an edge.
    pub fn keeps(self, rel_type: RelType) -> bool {
        match self {
            GraphVariant::G1Syn => {
                matches!(rel_type, RelType::SynonymVariant | RelType::SimilarTo)
            }
            GraphVariant::G1Ant => rel_type == RelType::Antonym,
            GraphVariant::G2 => true,
            GraphVariant::G3 => rel_type != RelType::Antonym,
            GraphVariant::G4 => {
                rel_type != RelType::Antonym && rel_type != RelType::GlossLink
            }
        }
    }
}

impl fmt::Display for GraphVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<GraphVariant, String> {
        GraphVariant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown graph variant {s:?}"))
    }
}

/// Bijection between synset ids and dense indices `0..N`, in ascending
/// (pos, offset) order.
#[derive(Debug)]
pub struct NodeIndex {
    ids: Vec<SynsetId>,
    lookup: HashMap<SynsetId, u32>,
}

impl NodeIndex {
    pub fn from_kb(kb: &LexicalKb) -> Self {
        let ids = kb.synsets().to_vec(); // already sorted and unique
        let lookup = ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as u32))
            .collect();
        NodeIndex { ids, lookup }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, index: usize) -> SynsetId {
        self.ids[index]
    }

    pub fn index_of(&self, id: SynsetId) -> Option<usize> {
        self.lookup.get(&id).map(|&i| i as usize)
    }

    pub fn ids(&self) -> &[SynsetId] {
        &self.ids
    }
}

impl PartialEq for NodeIndex {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
    }
}

impl Eq for NodeIndex {}

/// An immutable undirected graph over a knowledge base's synsets, in
/// compressed sparse row form with sorted neighbor lists.
#[derive(Debug)]
pub struct PropagationGraph {
    variant: GraphVariant,
    nodes: Arc<NodeIndex>,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl PropagationGraph {
    pub(super) fn build(kb: &LexicalKb, variant: GraphVariant) -> Self {
        Self::build_with(kb, variant, Arc::new(NodeIndex::from_kb(kb)))
    }

    pub(super) fn build_with(
        kb: &LexicalKb,
        variant: GraphVariant,
        nodes: Arc<NodeIndex>,
    ) -> Self {
        let n = nodes.len();
        // Normalized to (low, high); the set both dedups and fixes order.
        let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
        for rel in kb.relations() {
            if !variant.keeps(rel.rel_type) {
                continue;
            }
            let a = nodes
                .index_of(rel.source)
                .expect("relation endpoints are declared synsets") as u32;
            let b = nodes
                .index_of(rel.target)
                .expect("relation endpoints are declared synsets") as u32;
            edges.insert((a.min(b), a.max(b)));
        }

        let mut degree = vec![0usize; n];
        for &(a, b) in &edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        // Iterating pairs in ascending order keeps every neighbor list
        // sorted: a node first receives its smaller partners, then its
        // larger ones, each group ascending.
        for &(a, b) in &edges {
            neighbors[cursor[a as usize]] = b;
            cursor[a as usize] += 1;
            neighbors[cursor[b as usize]] = a;
            cursor[b as usize] += 1;
        }

        PropagationGraph {
            variant,
            nodes,
            offsets,
            neighbors,
        }
    }

    pub fn variant(&self) -> GraphVariant {
        self.variant
    }

    pub fn nodes(&self) -> &Arc<NodeIndex> {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    /// Whether two graphs are defined over the same synset↔index mapping.
    pub fn same_node_space(&self, other: &PropagationGraph) -> bool {
        Arc::ptr_eq(&self.nodes, &other.nodes) || self.nodes == other.nodes
    }

    /// All undirected edges as (low, high) index pairs, ascending.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.num_nodes()).flat_map(move |i| {
            self.neighbors(i)
                .iter()
                .filter(move |&&j| j > i as u32)
                .map(move |&j| (i as u32, j))
        })
    }
}
