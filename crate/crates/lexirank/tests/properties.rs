//! Randomized invariants: things that must hold for *every* knowledge
//! base, not just the curated fixtures.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use lexirank::eval::{avg_ratio, classify_phrases};
use lexirank::lexicon::{assemble_g1, assemble_single, Level, PolarityLexicon};
use lexirank::lkb::write_tsv;
use lexirank::ppv::{make_personalization, pagerank};
use lexirank::seedgen::{read_seeds, resolve_conflicts, tl_seeds_raw, write_seeds};
use lexirank::{
    AnnotatedToken, ConflictPolicy, Document, GraphVariant, KbFormat, LexiconKey, Polarity, Pos,
    PpvConfig, Provenance, RelType, Relation, SeedMethod, SeedSet, SeedWord, SenseEntry, SynsetId,
};

fn prov() -> Provenance {
    Provenance {
        format: KbFormat::TsvGraph,
        path: "<generated>".to_string(),
        digest: "0".repeat(64),
    }
}

fn adj(offset: u32) -> SynsetId {
    SynsetId::new(Pos::Adjective, offset)
}

fn arb_rel_type() -> impl Strategy<Value = RelType> {
    prop::sample::select(RelType::ALL.to_vec())
}

/// A random knowledge base over adjective synsets 1..=n: one private
/// lemma per synset, an optional lemma shared across several synsets,
/// and random typed edges (self-loops discarded).
fn arb_kb() -> impl Strategy<Value = lexirank::LexicalKb> {
    (2u32..16).prop_flat_map(|n| {
        let edges = proptest::collection::vec((arb_rel_type(), 1..=n, 1..=n), 0..(3 * n as usize));
        let shared = proptest::collection::vec(any::<bool>(), n as usize);
        (Just(n), edges, shared).prop_map(|(n, edges, shared)| build_kb(n, edges, shared))
    })
}

fn build_kb(n: u32, edges: Vec<(RelType, u32, u32)>, shared: Vec<bool>) -> lexirank::LexicalKb {
    let synsets: Vec<SynsetId> = (1..=n).map(adj).collect();
    let mut senses: Vec<SenseEntry> = (1..=n)
        .map(|i| SenseEntry {
            lemma: format!("w{i}"),
            synset: adj(i),
            rank: 1,
        })
        .collect();
    let mut next_rank = 1;
    for (index, include) in shared.iter().enumerate() {
        if *include {
            senses.push(SenseEntry {
                lemma: "shared".to_string(),
                synset: adj(index as u32 + 1),
                rank: next_rank,
            });
            next_rank += 1;
        }
    }
    // A pair of synsets is either similarity-linked or antonymous, never
    // both (as in a real lexicon); drop whichever edge arrives second.
    let mut syn_pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut ant_pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    let relations: Vec<Relation> = edges
        .into_iter()
        .filter(|(_, a, b)| a != b)
        .filter(|(rel, a, b)| {
            let pair = (*a.min(b), *a.max(b));
            match rel {
                RelType::Antonym => {
                    if syn_pairs.contains(&pair) {
                        return false;
                    }
                    ant_pairs.insert(pair);
                    true
                }
                RelType::SynonymVariant | RelType::SimilarTo => {
                    if ant_pairs.contains(&pair) {
                        return false;
                    }
                    syn_pairs.insert(pair);
                    true
                }
                _ => true,
            }
        })
        .map(|(rel, a, b)| Relation::new(rel, adj(a), adj(b)))
        .collect();
    lexirank::LexicalKb::new(synsets, senses, relations, prov()).unwrap()
}

fn edge_set(kb: &lexirank::LexicalKb, variant: GraphVariant) -> BTreeSet<(u32, u32)> {
    kb.build_graph(variant).edge_pairs().collect()
}

/// Disjoint nonempty seed sides from a per-node assignment (0 = none,
/// 1 = positive, 2 = negative), patched to guarantee nonemptiness.
fn seed_set(kb: &lexirank::LexicalKb, assignment: &[u8]) -> SeedSet {
    let mut positive = BTreeSet::new();
    let mut negative = BTreeSet::new();
    for (index, &tag) in assignment.iter().enumerate().take(kb.num_synsets()) {
        match tag % 3 {
            1 => {
                positive.insert(kb.synsets()[index]);
            }
            2 => {
                negative.insert(kb.synsets()[index]);
            }
            _ => {}
        }
    }
    negative.retain(|id| !positive.contains(id));
    if positive.is_empty() {
        // Take a free node, or steal one when every node is negative
        // (n >= 2 keeps the donor side nonempty).
        match kb.synsets().iter().find(|id| !negative.contains(id)) {
            Some(id) => {
                positive.insert(*id);
            }
            None => {
                let moved = *negative.iter().next().unwrap();
                negative.remove(&moved);
                positive.insert(moved);
            }
        }
    }
    if negative.is_empty() {
        match kb.synsets().iter().find(|id| !positive.contains(id)) {
            Some(id) => {
                negative.insert(*id);
            }
            None => {
                let moved = *positive.iter().next_back().unwrap();
                positive.remove(&moved);
                negative.insert(moved);
            }
        }
    }
    SeedSet {
        method: SeedMethod::Tl,
        iteration: 0,
        policy: ConflictPolicy::Drop,
        relations: BTreeSet::new(),
        positive,
        negative,
        fixed_point: None,
        dropped_conflicts: 0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_variants_nest(kb in arb_kb()) {
        let g2 = edge_set(&kb, GraphVariant::G2);
        let g3 = edge_set(&kb, GraphVariant::G3);
        let g4 = edge_set(&kb, GraphVariant::G4);
        let syn = edge_set(&kb, GraphVariant::G1Syn);
        let ant = edge_set(&kb, GraphVariant::G1Ant);
        prop_assert!(g4.is_subset(&g3));
        prop_assert!(g3.is_subset(&g2));
        prop_assert!(syn.is_disjoint(&ant));
        prop_assert!(syn.union(&ant).all(|e| g2.contains(e)));
    }

    #[test]
    fn tsv_serialization_round_trips(kb in arb_kb()) {
        let mut buf = Vec::new();
        write_tsv(&kb, &mut buf).unwrap();
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(file.path(), &buf).unwrap();
        let (reloaded, warnings) = lexirank::parse_lkb(file.path(), KbFormat::TsvGraph).unwrap();
        prop_assert_eq!(reloaded.synsets(), kb.synsets());
        prop_assert_eq!(reloaded.senses(), kb.senses());
        prop_assert_eq!(reloaded.relations(), kb.relations());
        prop_assert_eq!(warnings.unknown_relation_labels, 0);
    }

    #[test]
    fn declaration_order_does_not_matter(kb in arb_kb(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut relations = kb.relations().to_vec();
        relations.shuffle(&mut rng);
        let mut senses = kb.senses().to_vec();
        senses.shuffle(&mut rng);
        let shuffled = lexirank::LexicalKb::new(
            kb.synsets().iter().rev().copied().collect(),
            senses,
            relations,
            prov(),
        ).unwrap();
        prop_assert_eq!(shuffled.synsets(), kb.synsets());
        prop_assert_eq!(shuffled.senses(), kb.senses());
        prop_assert_eq!(shuffled.relations(), kb.relations());
        let a: Vec<(u32, u32)> = kb.build_graph(GraphVariant::G2).edge_pairs().collect();
        let b: Vec<(u32, u32)> = shuffled.build_graph(GraphVariant::G2).edge_pairs().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn seed_expansion_grows_monotonically(kb in arb_kb(), depth in 0u32..4) {
        let words = [
            SeedWord::new("w1", None, Polarity::Positive),
            SeedWord::new("w2", None, Polarity::Negative),
        ];
        let shallow = tl_seeds_raw(&kb, depth, &words, false).unwrap();
        let deeper = tl_seeds_raw(&kb, depth + 1, &words, false).unwrap();
        let reached_shallow: BTreeSet<SynsetId> =
            shallow.positive.keys().chain(shallow.negative.keys()).copied().collect();
        let reached_deeper: BTreeSet<SynsetId> =
            deeper.positive.keys().chain(deeper.negative.keys()).copied().collect();
        prop_assert!(reached_shallow.is_subset(&reached_deeper));
        // Labels never flip between iterations: a synset positive-only at
        // depth k stays positive-only at k+1, and likewise for negative.
        for (id, d) in &shallow.positive {
            if !shallow.negative.contains_key(id) {
                prop_assert_eq!(deeper.positive.get(id), Some(d));
                prop_assert!(!deeper.negative.contains_key(id));
            }
        }
        for (id, d) in &shallow.negative {
            if !shallow.positive.contains_key(id) {
                prop_assert_eq!(deeper.negative.get(id), Some(d));
                prop_assert!(!deeper.positive.contains_key(id));
            }
        }
    }

    #[test]
    fn resolved_seed_sides_are_disjoint_subsets(
        pos in proptest::collection::btree_map(1u32..40, 0u32..4, 0..12),
        neg in proptest::collection::btree_map(1u32..40, 0u32..4, 0..12),
        first_wins in any::<bool>(),
    ) {
        let raw_pos: BTreeMap<SynsetId, u32> = pos.iter().map(|(&o, &d)| (adj(o), d)).collect();
        let raw_neg: BTreeMap<SynsetId, u32> = neg.iter().map(|(&o, &d)| (adj(o), d)).collect();
        let policy = if first_wins { ConflictPolicy::FirstWins } else { ConflictPolicy::Drop };
        let (out_pos, out_neg) = resolve_conflicts(&raw_pos, &raw_neg, policy);
        prop_assert!(out_pos.is_disjoint(&out_neg));
        prop_assert!(out_pos.iter().all(|id| raw_pos.contains_key(id)));
        prop_assert!(out_neg.iter().all(|id| raw_neg.contains_key(id)));
        if policy == ConflictPolicy::Drop {
            // Exactly the non-overlapping keys survive.
            let partitioned = raw_pos
                .keys()
                .all(|id| out_pos.contains(id) != raw_neg.contains_key(id));
            prop_assert!(partitioned);
        } else {
            for (id, depth_pos) in &raw_pos {
                if let Some(depth_neg) = raw_neg.get(id) {
                    prop_assert_eq!(out_pos.contains(id), depth_pos < depth_neg);
                    prop_assert_eq!(out_neg.contains(id), depth_neg < depth_pos);
                }
            }
        }
    }

    #[test]
    fn pagerank_outputs_a_distribution(
        kb in arb_kb(),
        assignment in proptest::collection::vec(0u8..3, 16),
    ) {
        let seeds = seed_set(&kb, &assignment);
        let graph = kb.build_graph(GraphVariant::G2);
        let (v, _) = make_personalization(&graph, &seeds.positive).unwrap();
        let ranks = pagerank(&graph, &v, &PpvConfig::default()).unwrap();
        prop_assert!(ranks.converged);
        prop_assert!(ranks.residual <= 1e-9);
        prop_assert!(ranks.scores.iter().all(|&s| s >= 0.0));
        let total: f64 = ranks.scores.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9, "sum = {total}");
        // Every seed node keeps at least its teleport share.
        for (index, &weight) in v.as_slice().iter().enumerate() {
            if weight > 0.0 {
                prop_assert!(ranks.scores[index] >= 0.15 * weight - 1e-12);
            }
        }
    }

    #[test]
    fn seed_swap_negates_lexicons(
        kb in arb_kb(),
        assignment in proptest::collection::vec(0u8..3, 16),
        tight in any::<bool>(),
    ) {
        let config = if tight {
            PpvConfig { tolerance: 1e-12, max_iterations: 400, ..PpvConfig::default() }
        } else {
            PpvConfig::default()
        };
        let seeds = seed_set(&kb, &assignment);
        let swapped = SeedSet {
            positive: seeds.negative.clone(),
            negative: seeds.positive.clone(),
            ..seeds.clone()
        };
        let syn = kb.build_graph(GraphVariant::G1Syn);
        let ant = kb.build_graph(GraphVariant::G1Ant);
        let normal = assemble_g1(&syn, &ant, &seeds, &config).unwrap();
        let mirrored = assemble_g1(&syn, &ant, &swapped, &config).unwrap();
        prop_assert_eq!(normal.entries.len(), mirrored.entries.len());
        for (key, score) in &normal.entries {
            prop_assert_eq!(mirrored.entries[key].to_bits(), (-score).to_bits());
        }

        let g3 = kb.build_graph(GraphVariant::G3);
        let normal = assemble_single(&g3, &seeds, &config).unwrap();
        let mirrored = assemble_single(&g3, &swapped, &config).unwrap();
        prop_assert_eq!(normal.entries.len(), mirrored.entries.len());
        for (key, score) in &normal.entries {
            prop_assert_eq!(mirrored.entries[key].to_bits(), (-score).to_bits());
        }
    }

    #[test]
    fn seed_files_round_trip_for_any_seed_set(
        kb in arb_kb(),
        assignment in proptest::collection::vec(0u8..3, 16),
    ) {
        let seeds = seed_set(&kb, &assignment);
        let mut buf = Vec::new();
        write_seeds(&seeds, &mut buf).unwrap();
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(file.path(), &buf).unwrap();
        let reloaded = read_seeds(file.path()).unwrap();
        prop_assert_eq!(&reloaded.positive, &seeds.positive);
        prop_assert_eq!(&reloaded.negative, &seeds.negative);
    }

    #[test]
    fn avg_ratio_is_bounded_and_scale_invariant(
        lemmas in proptest::collection::vec((1u32..10, any::<bool>()), 1..8),
        doc_lemmas in proptest::collection::vec(1u32..14, 0..12),
    ) {
        let mut entries = BTreeMap::new();
        for (offset, positive) in lemmas {
            let score = if positive { 0.25 } else { -0.25 };
            entries.insert(LexiconKey::word(&format!("w{offset}"), Pos::Adjective), score);
        }
        let lexicon = PolarityLexicon {
            level: Level::Word,
            entries: entries.clone(),
            metadata: BTreeMap::new(),
        };
        let scaled = PolarityLexicon {
            level: Level::Word,
            entries: entries.into_iter().map(|(k, s)| (k, s * 3.0)).collect(),
            metadata: BTreeMap::new(),
        };
        let doc = Document {
            id: "d".to_string(),
            label: Polarity::Positive,
            tokens: doc_lemmas
                .iter()
                .map(|offset| AnnotatedToken {
                    surface: format!("w{offset}"),
                    lemma: format!("w{offset}"),
                    pos: Pos::Adjective,
                    synset: None,
                })
                .collect(),
        };
        let score = avg_ratio(&lexicon, &doc);
        prop_assert!((-1.0..=1.0).contains(&score), "score = {score}");
        prop_assert_eq!(score.to_bits(), avg_ratio(&scaled, &doc).to_bits());
    }

    #[test]
    fn phrase_rules_ignore_token_order(
        lemmas in proptest::collection::vec((1u32..10, any::<bool>()), 1..8),
        doc_lemmas in proptest::collection::vec(1u32..14, 1..10),
        rotation in 0usize..10,
    ) {
        let mut entries = BTreeMap::new();
        for (offset, positive) in lemmas {
            let score = if positive { 0.25 } else { -0.25 };
            entries.insert(LexiconKey::word(&format!("w{offset}"), Pos::Adjective), score);
        }
        let lexicon = PolarityLexicon {
            level: Level::Word,
            entries,
            metadata: BTreeMap::new(),
        };
        let tokens: Vec<AnnotatedToken> = doc_lemmas
            .iter()
            .map(|offset| AnnotatedToken {
                surface: format!("w{offset}"),
                lemma: format!("w{offset}"),
                pos: Pos::Adjective,
                synset: None,
            })
            .collect();
        let mut rotated = tokens.clone();
        rotated.rotate_left(rotation % tokens.len());
        let doc = |tokens| Document { id: "d".to_string(), label: Polarity::Positive, tokens };
        let before = classify_phrases(&lexicon, &[doc(tokens)]);
        let after = classify_phrases(&lexicon, &[doc(rotated)]);
        prop_assert_eq!(before, after);
    }
}
