//! Acceptance suite: ten end-to-end checks covering the numerical core,
//! the seeding base cases, structural graph guarantees, the
//! hand-computed toy pipeline, the evaluation harness, and the
//! performance envelope. Each check prints one `[criterion N] PASS`
//! line (visible with `cargo test -- --nocapture`).
//!
//! Checks defined against a full WordNet 3.0 installation run against
//! one when `LEXIRANK_DATA` points at a WordNet database directory;
//! without it they fall back to the committed miniature database, to
//! generated knowledge bases of the same shape, or to a generated
//! database at the same ≈118K-synset scale.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use lexirank::eval::{
    avg_ratio, classify_phrases, evaluate_documents, intrinsic_eval, read_corpus, token_polarity,
    tune_threshold,
};
use lexirank::lexicon::{assemble_g1, assemble_single, read_lexicon};
use lexirank::lkb::parse_lkb;
use lexirank::ppv::{make_personalization, pagerank};
use lexirank::seedgen::{
    ag_default_relations, ag_seeds, tl_seeds, AG_NEGATIVE_MARKERS, AG_POSITIVE_MARKERS,
};
use lexirank::{
    AnnotatedToken, ConflictPolicy, Document, GraphVariant, KbFormat, Level, LexicalKb,
    LexiconKey, PersonalizationVector, Polarity, PolarityLexicon, Pos, PpvConfig,
    PropagationGraph, Provenance, RelType, Relation, SeedMethod, SeedSet, SenseEntry, SynsetId,
};
use lexirank_cli::pipeline::{run_job, run_sweep, AssemblyVariant, JobSpec, SweepSpec};

// --- shared fixtures and generators ---------------------------------------

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../lexirank/tests/fixtures")
        .join(name)
}

fn own_fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn toy8() -> LexicalKb {
    parse_lkb(&fixture("toy8.tsv"), KbFormat::TsvGraph).unwrap().0
}

/// The full WordNet database named by `LEXIRANK_DATA` when that points
/// at a directory, else the committed six-adjective miniature database
/// mirroring the same quality-attribute structure. The flag reports
/// which one was used.
fn wordnet_or_mini() -> (LexicalKb, bool) {
    if let Ok(root) = std::env::var("LEXIRANK_DATA") {
        let path = PathBuf::from(&root);
        if path.is_dir() {
            let (kb, _) = parse_lkb(&path, KbFormat::WordnetDb)
                .expect("LEXIRANK_DATA does not parse as a WordNet database directory");
            return (kb, true);
        }
    }
    let (kb, warnings) = parse_lkb(&fixture("mini-wndb"), KbFormat::WordnetDb).unwrap();
    assert!(warnings.is_clean());
    (kb, false)
}

fn generated_provenance(tag: &str) -> Provenance {
    Provenance {
        format: KbFormat::TsvGraph,
        path: format!("generated:{tag}"),
        digest: tag.to_string(),
    }
}

fn adj(offset: u32) -> SynsetId {
    SynsetId::new(Pos::Adjective, offset)
}

fn noun(offset: u32) -> SynsetId {
    SynsetId::new(Pos::Noun, offset)
}

/// A knowledge base whose G1SYN projection is an arbitrary undirected
/// graph: `n` adjective synsets, each unordered pair linked with
/// probability `p`.
fn adjective_kb(rng: &mut ChaCha8Rng, n: usize, p: f64) -> LexicalKb {
    let synsets: Vec<SynsetId> = (1..=n as u32).map(adj).collect();
    let senses: Vec<SenseEntry> = synsets
        .iter()
        .map(|&synset| SenseEntry {
            lemma: format!("w{}", synset.offset),
            synset,
            rank: 1,
        })
        .collect();
    let mut relations = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                relations.push(Relation::new(RelType::SimilarTo, synsets[i], synsets[j]));
            }
        }
    }
    LexicalKb::new(synsets, senses, relations, generated_provenance("adjective-graph")).unwrap()
}

/// A small knowledge base with mixed parts of speech and relation types.
/// No unordered pair carries both a synonymy-camp edge (similar-to or
/// synonym-variant) and an antonym edge, matching real lexicons.
fn random_toy_kb(rng: &mut ChaCha8Rng) -> LexicalKb {
    let n_adj = rng.gen_range(4..=14u32);
    let n_noun = rng.gen_range(1..=6u32);
    let n_adv = rng.gen_range(0..=3u32);
    let mut synsets: Vec<SynsetId> = (1..=n_adj).map(adj).collect();
    synsets.extend((1..=n_noun).map(noun));
    synsets.extend((1..=n_adv).map(|o| SynsetId::new(Pos::Adverb, o)));
    let senses: Vec<SenseEntry> = synsets
        .iter()
        .map(|&synset| SenseEntry {
            lemma: format!("w_{}_{}", synset.pos, synset.offset),
            synset,
            rank: 1,
        })
        .collect();

    let mut syn_pairs: BTreeSet<(SynsetId, SynsetId)> = BTreeSet::new();
    let mut ant_pairs: BTreeSet<(SynsetId, SynsetId)> = BTreeSet::new();
    let mut relations = Vec::new();
    let draws = rng.gen_range(0..=(3 * synsets.len()));
    for _ in 0..draws {
        let a = synsets[rng.gen_range(0..synsets.len())];
        let b = synsets[rng.gen_range(0..synsets.len())];
        if a == b {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        let rel = match rng.gen_range(0..8u8) {
            0 | 1 => RelType::SimilarTo,
            2 => RelType::SynonymVariant,
            3 => RelType::Antonym,
            4 => RelType::Hypernym,
            5 => RelType::DerivedFrom,
            6 => RelType::Attribute,
            _ => RelType::GlossLink,
        };
        match rel {
            RelType::Antonym => {
                if syn_pairs.contains(&pair) {
                    continue;
                }
                ant_pairs.insert(pair);
            }
            RelType::SimilarTo | RelType::SynonymVariant => {
                if ant_pairs.contains(&pair) {
                    continue;
                }
                syn_pairs.insert(pair);
            }
            _ => {}
        }
        relations.push(Relation::new(rel, a, b));
    }
    LexicalKb::new(synsets, senses, relations, generated_provenance("toy")).unwrap()
}

/// A random personalization vector: some entries zeroed, the rest
/// uniform draws, normalized to unit mass.
fn random_personalization(rng: &mut ChaCha8Rng, n: usize) -> (PersonalizationVector, Vec<f64>) {
    loop {
        let mut weights: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen::<f64>() })
            .collect();
        let total: f64 = weights.iter().sum();
        if total > 0.0 {
            for w in &mut weights {
                *w /= total;
            }
            let vector = PersonalizationVector::new(weights.clone()).unwrap();
            return (vector, weights);
        }
    }
}

/// One application of the propagation update: `c·(M·x) + (1−c)·v`, with
/// the mass of degree-zero nodes redistributed along `v`.
fn patched_step(graph: &PropagationGraph, v: &[f64], damping: f64, x: &[f64]) -> Vec<f64> {
    let n = graph.num_nodes();
    let mut next = vec![0.0; n];
    let mut dangling = 0.0;
    for i in 0..n {
        let degree = graph.degree(i);
        if degree == 0 {
            dangling += x[i];
        } else {
            let share = x[i] / degree as f64;
            for &j in graph.neighbors(i) {
                next[j as usize] += share;
            }
        }
    }
    for j in 0..n {
        next[j] = damping * (next[j] + dangling * v[j]) + (1.0 - damping) * v[j];
    }
    next
}

/// Solves `(I − cM)·x = (1−c)·v` directly by Gaussian elimination with
/// partial pivoting, `M` being the same dangling-patched transition
/// matrix the power iteration uses.
fn dense_solve(graph: &PropagationGraph, v: &[f64], damping: f64) -> Vec<f64> {
    let n = graph.num_nodes();
    let mut a = vec![vec![0.0f64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for j in 0..n {
        let degree = graph.degree(j);
        if degree == 0 {
            for (i, row) in a.iter_mut().enumerate() {
                row[j] -= damping * v[i];
            }
        } else {
            let share = damping / degree as f64;
            for &i in graph.neighbors(j) {
                a[i as usize][j] -= share;
            }
        }
    }
    let mut b: Vec<f64> = v.iter().map(|w| (1.0 - damping) * w).collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        let lead = a[col][col];
        for row in (col + 1)..n {
            let factor = a[row][col] / lead;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                let head = a[col][k];
                a[row][k] -= factor * head;
            }
            b[row] -= factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut sum = b[col];
        for k in (col + 1)..n {
            sum -= a[col][k] * b[k];
        }
        b[col] = sum / a[col][col];
    }
    b
}

fn toy8_seeds(kb: &LexicalKb) -> SeedSet {
    ag_seeds(kb, 1, &ag_default_relations(), ConflictPolicy::Drop).unwrap()
}

fn assemble(
    kb: &LexicalKb,
    variant: AssemblyVariant,
    seeds: &SeedSet,
    config: &PpvConfig,
) -> PolarityLexicon {
    match variant.single_projection() {
        None => {
            let syn = kb.build_graph(GraphVariant::G1Syn);
            let ant = kb.build_graph_with(GraphVariant::G1Ant, syn.nodes().clone());
            assemble_g1(&syn, &ant, seeds, config).unwrap()
        }
        Some(projection) => {
            assemble_single(&kb.build_graph(projection), seeds, config).unwrap()
        }
    }
}

// --- criterion 1 -----------------------------------------------------------

#[test]
fn criterion_01_power_iteration_matches_the_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let config = PpvConfig {
        damping: 0.85,
        tolerance: 1e-9,
        max_iterations: 500,
        accept_partial: false,
    };
    let started = Instant::now();
    let mut worst = 0.0f64;
    for round in 0..100 {
        let n = rng.gen_range(1..=50usize);
        let p = if round % 10 == 0 {
            0.0
        } else {
            rng.gen_range(0.02..0.5)
        };
        let kb = adjective_kb(&mut rng, n, p);
        let graph = kb.build_graph(GraphVariant::G1Syn);
        let (personalization, v) = random_personalization(&mut rng, n);
        let ranks = pagerank(&graph, &personalization, &config).unwrap();
        assert!(ranks.converged, "round {round} did not converge");
        let direct = dense_solve(&graph, &v, config.damping);
        for i in 0..n {
            let diff = (ranks.scores[i] - direct[i]).abs();
            worst = worst.max(diff);
            assert!(
                diff <= 1e-8,
                "round {round}, node {i}: power {} vs direct {} (diff {diff:e})",
                ranks.scores[i],
                direct[i]
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "100 graphs took {elapsed:?}, budget is 5s"
    );
    println!(
        "[criterion 1] PASS: 100 random graphs within 1e-8 per entry of the dense solve \
         (worst {worst:.3e}) in {elapsed:.2?}"
    );
}

// --- criterion 2 -----------------------------------------------------------

#[test]
fn criterion_02_residual_and_mass_hold_on_every_rank_vector() {
    let config = PpvConfig::default();
    let mut checked = 0u32;
    let mut isolated_seen = false;

    let mut check = |graph: &PropagationGraph, personalization: &PersonalizationVector| {
        let v = personalization.as_slice().to_vec();
        let ranks = pagerank(graph, personalization, &config).unwrap();
        assert!(ranks.converged);
        let mass: f64 = ranks.scores.iter().sum();
        assert!(
            (mass - 1.0).abs() <= 1e-9,
            "scores sum to {mass} on a {}-node {}",
            graph.num_nodes(),
            graph.variant()
        );
        let next = patched_step(graph, &v, config.damping, &ranks.scores);
        let residual: f64 = next
            .iter()
            .zip(&ranks.scores)
            .map(|(a, b)| (a - b).abs())
            .sum();
        assert!(
            residual <= 1e-9,
            "fixed-point residual {residual:e} on a {}-node {}",
            graph.num_nodes(),
            graph.variant()
        );
        checked += 1;
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0xC2);
    for round in 0..40 {
        let n = rng.gen_range(1..=50usize);
        let p = if round % 8 == 0 {
            0.0
        } else {
            rng.gen_range(0.02..0.25)
        };
        let kb = adjective_kb(&mut rng, n, p);
        let graph = kb.build_graph(GraphVariant::G1Syn);
        isolated_seen |= (0..n).any(|i| graph.degree(i) == 0);
        if round % 2 == 0 {
            let (personalization, _) = random_personalization(&mut rng, n);
            check(&graph, &personalization);
        } else {
            let picks: BTreeSet<SynsetId> = (0..rng.gen_range(1..=n))
                .map(|_| graph.nodes().id(rng.gen_range(0..n)))
                .collect();
            let (personalization, _) = make_personalization(&graph, &picks).unwrap();
            check(&graph, &personalization);
        }
    }
    assert!(isolated_seen, "the random batch never produced an isolated node");

    for kb in [toy8(), wordnet_or_mini().0] {
        let seeds = ag_seeds(&kb, 1, &ag_default_relations(), ConflictPolicy::Drop).unwrap();
        for variant in GraphVariant::ALL {
            let graph = kb.build_graph(variant);
            for side in [&seeds.positive, &seeds.negative] {
                let (personalization, _) = make_personalization(&graph, side).unwrap();
                check(&graph, &personalization);
            }
        }
    }
    println!(
        "[criterion 2] PASS: residual <= 1e-9 and unit mass on {checked} rank vectors, \
         isolated nodes included"
    );
}

// --- criterion 3 -----------------------------------------------------------

#[test]
fn criterion_03_attribute_walk_base_case_names_the_six_marker_synsets() {
    let (kb, real) = wordnet_or_mini();
    let seeds = ag_seeds(&kb, 0, &ag_default_relations(), ConflictPolicy::Drop).unwrap();
    assert_eq!(seeds.positive.len(), 3, "positive side: {:?}", seeds.positive);
    assert_eq!(seeds.negative.len(), 3, "negative side: {:?}", seeds.negative);
    for &synset in seeds.positive.iter().chain(&seeds.negative) {
        assert_eq!(synset.pos, Pos::Adjective, "{synset} is not an adjective");
    }
    for marker in AG_POSITIVE_MARKERS {
        assert!(
            seeds
                .positive
                .iter()
                .any(|&s| kb.member_lemmas(s).contains(&marker)),
            "no positive seed carries the lemma {marker:?}"
        );
    }
    for marker in AG_NEGATIVE_MARKERS {
        assert!(
            seeds
                .negative
                .iter()
                .any(|&s| kb.member_lemmas(s).contains(&marker)),
            "no negative seed carries the lemma {marker:?}"
        );
    }
    if !real {
        let ids = |side: &BTreeSet<SynsetId>| -> Vec<String> {
            side.iter().map(ToString::to_string).collect()
        };
        assert_eq!(ids(&seeds.positive), ["00001000-a", "00003000-a", "00005000-a"]);
        assert_eq!(ids(&seeds.negative), ["00002000-a", "00004000-a", "00006000-a"]);
    }
    println!(
        "[criterion 3] PASS: iteration 0 yields exactly 3+3 marker adjective synsets ({})",
        if real { "WordNet 3.0" } else { "miniature database" }
    );
}

// --- criterion 4 -----------------------------------------------------------

fn swapped(seeds: &SeedSet) -> SeedSet {
    SeedSet {
        positive: seeds.negative.clone(),
        negative: seeds.positive.clone(),
        ..seeds.clone()
    }
}

fn assert_antisymmetric(normal: &PolarityLexicon, mirrored: &PolarityLexicon, label: &str) {
    assert_eq!(normal.len(), mirrored.len(), "{label}: entry counts differ");
    for (key, &score) in &normal.entries {
        let counterpart = mirrored
            .entries
            .get(key)
            .unwrap_or_else(|| panic!("{label}: {key} missing after the swap"));
        assert_eq!(*counterpart, -score, "{label}: {key} is not exactly negated");
    }
    let members = |lexicon: &PolarityLexicon, polarity: Polarity| -> BTreeSet<LexiconKey> {
        lexicon
            .entries
            .iter()
            .filter(|(_, &score)| match polarity {
                Polarity::Positive => score > 0.0,
                Polarity::Negative => score < 0.0,
            })
            .map(|(key, _)| key.clone())
            .collect()
    };
    assert_eq!(
        members(normal, Polarity::Positive),
        members(mirrored, Polarity::Negative),
        "{label}: positive membership does not become the negative membership"
    );
    assert_eq!(
        members(normal, Polarity::Negative),
        members(mirrored, Polarity::Positive),
        "{label}: negative membership does not become the positive membership"
    );
}

#[test]
fn criterion_04_seed_swap_negates_every_lexicon() {
    let config = PpvConfig::default();

    let kb = toy8();
    let seeds = toy8_seeds(&kb);
    for variant in AssemblyVariant::ALL {
        let normal = assemble(&kb, variant, &seeds, &config);
        let mirrored = assemble(&kb, variant, &swapped(&seeds), &config);
        assert!(!normal.is_empty());
        assert_antisymmetric(&normal, &mirrored, &format!("toy fixture, {variant}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
    for round in 0..20 {
        let kb = random_toy_kb(&mut rng);
        let ids = kb.synsets().to_vec();
        let mut shuffled = ids.clone();
        shuffled.shuffle(&mut rng);
        let take_pos = rng.gen_range(1..=3.min(shuffled.len() - 1));
        let take_neg = rng.gen_range(1..=3.min(shuffled.len() - take_pos));
        let seeds = SeedSet {
            method: SeedMethod::Ag,
            iteration: 0,
            policy: ConflictPolicy::Drop,
            relations: ag_default_relations(),
            positive: shuffled[..take_pos].iter().copied().collect(),
            negative: shuffled[take_pos..take_pos + take_neg].iter().copied().collect(),
            fixed_point: None,
            dropped_conflicts: 0,
        };
        let variant = AssemblyVariant::ALL[round % AssemblyVariant::ALL.len()];
        let normal = assemble(&kb, variant, &seeds, &config);
        let mirrored = assemble(&kb, variant, &swapped(&seeds), &config);
        assert_antisymmetric(
            &normal,
            &mirrored,
            &format!("random KB {round} ({} synsets), {variant}", ids.len()),
        );
    }
    println!(
        "[criterion 4] PASS: seed swaps negate every score and swap memberships on the toy \
         fixture (all assemblies) and 20 random knowledge bases"
    );
}

// --- criterion 5 -----------------------------------------------------------

fn edge_set(graph: &PropagationGraph) -> BTreeSet<(SynsetId, SynsetId)> {
    graph
        .edge_pairs()
        .map(|(a, b)| {
            let a = graph.nodes().id(a as usize);
            let b = graph.nodes().id(b as usize);
            (a.min(b), a.max(b))
        })
        .collect()
}

fn assert_variant_containment(kb: &LexicalKb, label: &str) {
    let g2 = edge_set(&kb.build_graph(GraphVariant::G2));
    let g3 = edge_set(&kb.build_graph(GraphVariant::G3));
    let g4 = edge_set(&kb.build_graph(GraphVariant::G4));
    let syn = edge_set(&kb.build_graph(GraphVariant::G1Syn));
    let ant = edge_set(&kb.build_graph(GraphVariant::G1Ant));
    assert!(g4.is_subset(&g3), "{label}: G4 has edges outside G3");
    assert!(g3.is_subset(&g2), "{label}: G3 has edges outside G2");
    assert!(
        syn.is_disjoint(&ant),
        "{label}: G1SYN and G1ANT share edges: {:?}",
        syn.intersection(&ant).take(3).collect::<Vec<_>>()
    );
}

#[test]
fn criterion_05_graph_variants_nest_and_polar_projections_are_disjoint() {
    let (kb, real) = wordnet_or_mini();
    assert_variant_containment(&kb, "lexical database");
    assert_variant_containment(&toy8(), "toy fixture");
    let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
    for round in 0..100 {
        let kb = random_toy_kb(&mut rng);
        assert_variant_containment(&kb, &format!("random KB {round}"));
    }
    println!(
        "[criterion 5] PASS: G4 ⊆ G3 ⊆ G2 and G1SYN ∩ G1ANT = ∅ on {} plus the toy fixture \
         and 100 random knowledge bases",
        if real { "WordNet 3.0" } else { "the miniature database" }
    );
}

// --- criterion 6 -----------------------------------------------------------

#[test]
fn criterion_06_toy_pipeline_reproduces_the_hand_computed_lexicon() {
    let kb = toy8();
    let tight = PpvConfig {
        damping: 0.85,
        tolerance: 1e-13,
        max_iterations: 500,
        accept_partial: false,
    };
    let job = JobSpec {
        method: SeedMethod::Ag,
        iteration: 1,
        variant: AssemblyVariant::G1,
        level: Level::Synset,
    };
    let lexicon = run_job(&kb, &job, ConflictPolicy::Drop, &tight).unwrap();
    let expected = read_lexicon(&own_fixture("toy8_g1_lexicon.tsv")).unwrap();

    assert_eq!(
        lexicon.entries.keys().collect::<Vec<_>>(),
        expected.entries.keys().collect::<Vec<_>>(),
        "key sets differ"
    );
    let mut worst = 0.0f64;
    for (key, &want) in &expected.entries {
        let got = lexicon.entries[key];
        let relative = (got - want).abs() / want.abs();
        worst = worst.max(relative);
        assert!(
            relative <= 5e-10,
            "{key}: {got} vs hand-computed {want} (relative {relative:e})"
        );
    }
    let quality: SynsetId = "00000001-n".parse().unwrap();
    assert!(
        !lexicon.entries.contains_key(&LexiconKey::Synset(quality)),
        "the untouched quality synset must stay excluded"
    );
    println!(
        "[criterion 6] PASS: toy pipeline matches the hand-computed lexicon to 10 significant \
         digits (worst relative error {worst:.3e})"
    );
}

// --- criterion 7 -----------------------------------------------------------

/// Independent exhaustive threshold scan: evaluates every candidate
/// (one below the minimum, all midpoints of adjacent distinct scores,
/// one above the maximum) and returns the smallest candidate of maximal
/// dev accuracy under the `score >= threshold → positive` rule.
fn exhaustive_threshold(lexicon: &PolarityLexicon, dev: &[Document]) -> f64 {
    let scored: Vec<(f64, Polarity)> = dev
        .iter()
        .map(|doc| (avg_ratio(lexicon, doc), doc.label))
        .collect();
    let mut distinct: Vec<f64> = scored.iter().map(|&(s, _)| s).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut candidates = vec![distinct[0] - 1.0];
    candidates.extend(distinct.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    candidates.push(distinct[distinct.len() - 1] + 1.0);

    let accuracy_at = |threshold: f64| -> usize {
        scored
            .iter()
            .filter(|&&(score, label)| {
                let predicted = if score >= threshold {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                };
                predicted == label
            })
            .count()
    };
    let mut best = (candidates[0], accuracy_at(candidates[0]));
    for &candidate in &candidates[1..] {
        let correct = accuracy_at(candidate);
        if correct > best.1 {
            best = (candidate, correct);
        }
    }
    best.0
}

fn synthetic_document(id: &str, label: Polarity, lemmas: &[&str]) -> Document {
    Document {
        id: id.to_string(),
        label,
        tokens: lemmas
            .iter()
            .map(|lemma| AnnotatedToken {
                surface: lemma.to_string(),
                lemma: lemma.to_string(),
                pos: Pos::Adjective,
                synset: None,
            })
            .collect(),
    }
}

#[test]
fn criterion_07_average_ratio_tuning_matches_hand_computation() {
    let lexicon = read_lexicon(&fixture("eval_lexicon.tsv")).unwrap();
    let dev = read_corpus(&fixture("corpus_dev6.tsv")).unwrap();
    assert_eq!(dev.len(), 6);
    let hand = [0.6, 0.2, 0.5, -0.4, 0.0, -0.25];
    for (doc, want) in dev.iter().zip(hand) {
        assert_eq!(
            avg_ratio(&lexicon, doc),
            want,
            "document {} does not match the hand computation exactly",
            doc.id
        );
    }

    let tuned = tune_threshold(&lexicon, &dev).unwrap();
    let oracle = exhaustive_threshold(&lexicon, &dev);
    assert_eq!(tuned, oracle, "tuning disagrees with the exhaustive scan");
    assert_eq!(tuned, 0.1, "midpoint of 0.0 and 0.2");

    // A corpus built purely from the lexicon's own words must classify
    // perfectly.
    let positive_words: [&str; 2] = ["good", "great"];
    let negative_words: [&str; 2] = ["bad", "awful"];
    let mut dev_docs = Vec::new();
    let mut test_docs = Vec::new();
    for i in 0..2usize {
        dev_docs.push(synthetic_document(
            &format!("dp{i}"),
            Polarity::Positive,
            &positive_words[..=i],
        ));
        dev_docs.push(synthetic_document(
            &format!("dn{i}"),
            Polarity::Negative,
            &negative_words[..=i],
        ));
    }
    for i in 0..5usize {
        test_docs.push(synthetic_document(
            &format!("tp{i}"),
            Polarity::Positive,
            &vec![positive_words[i % 2]; i + 1],
        ));
        test_docs.push(synthetic_document(
            &format!("tn{i}"),
            Polarity::Negative,
            &vec![negative_words[i % 2]; i + 1],
        ));
    }
    let report = evaluate_documents(&lexicon, &dev_docs, &test_docs).unwrap();
    assert_eq!(report.accuracy(), 1.0, "synthetic corpus must classify perfectly");
    assert_eq!(report.untagged_pos + report.untagged_neg, 0);
    assert_eq!(report.total(), 10);
    println!(
        "[criterion 7] PASS: exact average ratios, tuning equal to the exhaustive scan \
         (threshold {tuned}), synthetic corpus at accuracy 1.0"
    );
}

// --- criterion 8 -----------------------------------------------------------

#[test]
fn criterion_08_phrase_rules_conform_on_the_committed_fixture() {
    let lexicon = read_lexicon(&fixture("eval_lexicon.tsv")).unwrap();
    let phrases = read_corpus(&fixture("phrases30.tsv")).unwrap();
    assert_eq!(phrases.len(), 30);

    let report = classify_phrases(&lexicon, &phrases);
    assert_eq!(
        (
            report.true_pos,
            report.false_pos,
            report.true_neg,
            report.false_neg,
            report.untagged_pos,
            report.untagged_neg,
        ),
        (9, 2, 10, 4, 3, 2),
        "confusion counts differ from the designed fixture"
    );

    // The fixture must exercise all four phrase shapes.
    let (mut all_neg, mut mixed, mut all_pos, mut unmatched) = (0u32, 0u32, 0u32, 0u32);
    for phrase in &phrases {
        let tags: Vec<Polarity> = phrase
            .tokens
            .iter()
            .filter_map(|token| token_polarity(&lexicon, token))
            .collect();
        let positives = tags.iter().filter(|&&p| p == Polarity::Positive).count();
        let negatives = tags.len() - positives;
        match (positives, negatives) {
            (0, 0) => unmatched += 1,
            (0, _) => all_neg += 1,
            (_, 0) => all_pos += 1,
            _ => mixed += 1,
        }
    }
    assert!(
        all_neg > 0 && mixed > 0 && all_pos > 0 && unmatched > 0,
        "fixture shape coverage: {all_neg} all-negative, {mixed} mixed, {all_pos} positive-only, \
         {unmatched} no-match"
    );

    // Token order must not matter.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    for round in 0..5 {
        let mut reordered = phrases.clone();
        for phrase in &mut reordered {
            phrase.tokens.shuffle(&mut rng);
        }
        assert_eq!(
            classify_phrases(&lexicon, &reordered),
            report,
            "classification changed under permutation {round}"
        );
    }
    println!(
        "[criterion 8] PASS: phrase rules match the designed confusion (9,2,10,4 + 3,2 untagged) \
         and are order-invariant across 5 permutations"
    );
}

// --- criterion 9 -----------------------------------------------------------

#[test]
fn criterion_09_intrinsic_evaluation_brackets_and_hand_count() {
    let gold = read_lexicon(&fixture("gold10.tsv")).unwrap();

    let identity = intrinsic_eval(&gold, &gold).unwrap();
    assert_eq!(identity.accuracy(), 1.0);
    assert_eq!(identity.total(), 10);

    let mut flipped = gold.clone();
    flipped.entries = flipped.entries.into_iter().map(|(k, s)| (k, -s)).collect();
    let zero = intrinsic_eval(&flipped, &gold).unwrap();
    assert_eq!(zero.accuracy(), 0.0);
    assert_eq!(zero.total(), 10);

    let predicted = read_lexicon(&fixture("pred10.tsv")).unwrap();
    let partial = intrinsic_eval(&predicted, &gold).unwrap();
    assert_eq!(
        (
            partial.true_pos,
            partial.false_pos,
            partial.true_neg,
            partial.false_neg,
        ),
        (5, 1, 2, 2),
        "hand-counted overlap differs"
    );
    assert_eq!(partial.accuracy(), 0.7);
    println!(
        "[criterion 9] PASS: identity 1.0, flipped 0.0, partial overlap at the hand-counted 0.7"
    );
}

// --- criterion 10 ----------------------------------------------------------

/// The 14 word-list lemmas, pinned to the first adjective offsets of the
/// generated database so the quality nouns can reference six of them.
const SCALE_MARKERS: [&str; 14] = [
    "good",
    "nice",
    "excellent",
    "positive",
    "fortunate",
    "correct",
    "superior",
    "bad",
    "nasty",
    "poor",
    "negative",
    "unfortunate",
    "wrong",
    "inferior",
];

/// A generated knowledge base at full WordNet 3.0 scale: the same synset
/// counts per part of speech, hypernym trees over nouns and verbs, and
/// random similarity/antonymy/derivation structure, with the marker
/// lemmas and quality-attribute edges both seeding methods need.
fn wordnet_scale_kb() -> (LexicalKb, bool) {
    if let Ok(root) = std::env::var("LEXIRANK_DATA") {
        let path = PathBuf::from(&root);
        if path.is_dir() {
            let (kb, _) = parse_lkb(&path, KbFormat::WordnetDb)
                .expect("LEXIRANK_DATA does not parse as a WordNet database directory");
            return (kb, true);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x118C);
    const N_NOUN: u32 = 82_115;
    const N_VERB: u32 = 13_767;
    const N_ADJ: u32 = 18_156;
    const N_ADV: u32 = 3_621;

    let mut synsets = Vec::with_capacity((N_NOUN + N_VERB + N_ADJ + N_ADV) as usize);
    let mut senses = Vec::with_capacity(synsets.capacity());
    for (pos, count) in [
        (Pos::Noun, N_NOUN),
        (Pos::Verb, N_VERB),
        (Pos::Adjective, N_ADJ),
        (Pos::Adverb, N_ADV),
    ] {
        for offset in 1..=count {
            let synset = SynsetId::new(pos, offset);
            synsets.push(synset);
            let lemma = if pos == Pos::Adjective && offset as usize <= SCALE_MARKERS.len() {
                SCALE_MARKERS[offset as usize - 1].to_string()
            } else if pos == Pos::Noun && offset <= 2 {
                "quality".to_string()
            } else {
                format!("{}{offset}", pos.as_char())
            };
            // The two quality nouns are two senses of one lemma.
            let rank = if pos == Pos::Noun && offset <= 2 { offset } else { 1 };
            senses.push(SenseEntry { lemma, synset, rank });
        }
    }

    let mut relations = Vec::new();
    // quality¹ carries the good/bad and positive/negative attribute
    // pairs; quality² carries superior/inferior.
    for (quality, attribute) in [(1, 1), (1, 8), (1, 4), (1, 11), (2, 7), (2, 14)] {
        relations.push(Relation::new(RelType::Attribute, noun(quality), adj(attribute)));
    }
    // The seven marker antonym pairs, positive lemma i vs negative lemma i+7.
    let mut ant_pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    for i in 1..=7 {
        relations.push(Relation::new(RelType::Antonym, adj(i), adj(i + 7)));
        ant_pairs.insert((i, i + 7));
    }
    // Hypernym trees keep nouns and verbs connected like a taxonomy.
    for offset in 2..=N_NOUN {
        relations.push(Relation::new(
            RelType::Hypernym,
            noun(offset),
            noun(rng.gen_range(1..offset)),
        ));
    }
    for offset in 2..=N_VERB {
        relations.push(Relation::new(
            RelType::Hypernym,
            SynsetId::new(Pos::Verb, offset),
            SynsetId::new(Pos::Verb, rng.gen_range(1..offset)),
        ));
    }
    // Random adjective similarity and antonymy, keeping each unordered
    // pair in a single camp.
    let mut syn_pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    let adj_pair = |rng: &mut ChaCha8Rng| -> Option<(u32, u32)> {
        let a = rng.gen_range(1..=N_ADJ);
        let b = rng.gen_range(1..=N_ADJ);
        (a != b).then(|| (a.min(b), a.max(b)))
    };
    while syn_pairs.len() < 21_000 {
        if let Some(pair) = adj_pair(&mut rng) {
            if !ant_pairs.contains(&pair) && syn_pairs.insert(pair) {
                relations.push(Relation::new(RelType::SimilarTo, adj(pair.0), adj(pair.1)));
            }
        }
    }
    while ant_pairs.len() < 8_000 {
        if let Some(pair) = adj_pair(&mut rng) {
            if !syn_pairs.contains(&pair) && ant_pairs.insert(pair) {
                relations.push(Relation::new(RelType::Antonym, adj(pair.0), adj(pair.1)));
            }
        }
    }
    for _ in 0..25_000 {
        relations.push(Relation::new(
            RelType::DerivedFrom,
            adj(rng.gen_range(1..=N_ADJ)),
            noun(rng.gen_range(1..=N_NOUN)),
        ));
    }
    for offset in 1..=N_ADV {
        relations.push(Relation::new(
            RelType::PertainsTo,
            SynsetId::new(Pos::Adverb, offset),
            adj(rng.gen_range(1..=N_ADJ)),
        ));
    }
    for _ in 0..3_000 {
        if let Some(pair) = adj_pair(&mut rng) {
            relations.push(Relation::new(RelType::AlsoSee, adj(pair.0), adj(pair.1)));
        }
    }

    let kb = LexicalKb::new(synsets, senses, relations, generated_provenance("wordnet-scale"))
        .unwrap();
    (kb, false)
}

#[test]
fn criterion_10_performance_envelope_at_wordnet_scale() {
    let (kb, real) = wordnet_scale_kb();
    assert!(
        kb.num_synsets() > 110_000,
        "scale target missed: {} synsets",
        kb.num_synsets()
    );
    let config = PpvConfig::default();

    // One propagation over the densest projection.
    let graph = kb.build_graph(GraphVariant::G2);
    let seeds = tl_seeds(&kb, 0, ConflictPolicy::Drop).unwrap();
    let (personalization, _) = make_personalization(&graph, &seeds.positive).unwrap();
    let started = Instant::now();
    let ranks = pagerank(&graph, &personalization, &config).unwrap();
    let single = started.elapsed();
    assert!(ranks.converged);
    assert!(
        single.as_secs_f64() < 60.0,
        "single propagation took {single:?}, budget is 60s"
    );

    // A 16-job sweep: 2 methods x 2 seed depths x 2 assemblies x 2 levels.
    let spec = SweepSpec {
        methods: vec![SeedMethod::Ag, SeedMethod::Tl],
        iterations: vec![0, 1],
        variants: vec![AssemblyVariant::G1, AssemblyVariant::G3],
        levels: vec![Level::Synset, Level::Word],
        policy: ConflictPolicy::Drop,
        ppv: config,
    };
    assert_eq!(spec.job_count(), 16);
    let out = tempfile::tempdir().unwrap();
    let started = Instant::now();
    let report = run_sweep(&kb, &spec, None, out.path(), None).unwrap();
    let sweep = started.elapsed();
    assert_eq!(report.rows.len(), 16);
    for row in &report.rows {
        assert!(
            row.outcome.is_ok(),
            "job {} failed: {:?}",
            row.job.name(),
            row.outcome.as_ref().err()
        );
    }
    assert!(
        sweep.as_secs_f64() < 600.0,
        "16-job sweep took {sweep:?}, budget is 10 minutes"
    );
    println!(
        "[criterion 10] PASS: propagation over {} nodes ({} edges) in {single:.2?} (<60s); \
         16-job sweep in {sweep:.2?} (<10min) on {}",
        graph.num_nodes(),
        graph.num_edges(),
        if real { "WordNet 3.0" } else { "a generated database at the same scale" }
    );
}
