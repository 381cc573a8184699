//! Personalized PageRank over propagation graphs.
//!
//! Solves `r = c·M·r + (1−c)·v` by power iteration, where `M` is the
//! column-stochastic transition matrix of the (undirected) propagation
//! graph, `c` the damping factor, and `v` a personalization vector
//! concentrated on seed synsets. Isolated nodes have no outgoing
//! transitions; their rank mass is redistributed according to `v`, which
//! keeps the iteration stochastic (every iterate sums to 1).
//!
//! Iteration starts from `r₀ = v` and stops once the L1 distance between
//! consecutive iterates drops to the configured tolerance. Because the
//! update is a `c`-contraction in L1, the returned (post-update) iterate
//! is within `c·tol/(1−c)` of the fixed point.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lkb::{NodeIndex, PropagationGraph, SynsetId};

/// Tolerated deviation of a personalization vector's total mass from 1.
const MASS_EPSILON: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PpvConfig {
    /// Damping factor `c` in (0, 1): the probability of following an edge
    /// rather than teleporting back to the seeds.
    pub damping: f64,
    /// L1 convergence threshold between consecutive iterates.
    pub tolerance: f64,
    /// Iteration cap; exceeding it without converging is an error unless
    /// `accept_partial` is set.
    pub max_iterations: u32,
    /// Return the best iterate (marked unconverged) instead of failing
    /// when the cap is hit.
    pub accept_partial: bool,
}

impl Default for PpvConfig {
    fn default() -> Self {
        PpvConfig {
            damping: 0.85,
            tolerance: 1e-9,
            max_iterations: 200,
            accept_partial: false,
        }
    }
}

impl PpvConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "damping factor must lie strictly between 0 and 1, got {}",
                self.damping
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig(
                "max iterations must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// A validated teleport distribution: non-negative entries summing to 1,
/// with at least one strictly positive entry.
#[derive(Clone, Debug, PartialEq)]
pub struct PersonalizationVector(Vec<f64>);

impl PersonalizationVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidConfig(format!(
                "personalization weights must be finite and non-negative, got {w}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_EPSILON {
            return Err(Error::InvalidConfig(format!(
                "personalization weights must sum to 1, got {total}"
            )));
        }
        Ok(PersonalizationVector(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Spreads unit mass uniformly over the seed synsets present in the
/// graph's node space. Returns the vector and how many seeds were
/// present; seeds outside the node space are ignored, but at least one
/// must map.
pub fn make_personalization(
    graph: &PropagationGraph,
    seeds: &BTreeSet<SynsetId>,
) -> Result<(PersonalizationVector, usize)> {
    let nodes = graph.nodes();
    let mapped: Vec<usize> = seeds.iter().filter_map(|&s| nodes.index_of(s)).collect();
    if mapped.is_empty() {
        return Err(Error::EmptySeeds(
            "no seed synset is present in the graph node space".to_string(),
        ));
    }
    let mut weights = vec![0.0; nodes.len()];
    let share = 1.0 / mapped.len() as f64;
    for index in &mapped {
        weights[*index] = share;
    }
    Ok((PersonalizationVector(weights), mapped.len()))
}

/// The outcome of a power iteration run.
#[derive(Clone, Debug, PartialEq)]
pub struct RankVector {
    /// One score per graph node, indexed like the graph's node space.
    pub scores: Vec<f64>,
    /// Update steps performed.
    pub iterations: u32,
    /// L1 distance between the last two iterates.
    pub residual: f64,
    /// Whether the residual reached the configured tolerance.
    pub converged: bool,
}

/// Runs personalized PageRank to convergence.
///
/// An edgeless graph short-circuits: every node teleports, so the fixed
/// point is the personalization vector itself, returned exactly.
pub fn pagerank(
    graph: &PropagationGraph,
    personalization: &PersonalizationVector,
    config: &PpvConfig,
) -> Result<RankVector> {
    config.validate()?;
    let n = graph.num_nodes();
    if personalization.len() != n {
        return Err(Error::InvalidConfig(format!(
            "personalization vector has {} entries for a graph with {} nodes",
            personalization.len(),
            n
        )));
    }
    let v = personalization.as_slice();
    if graph.num_edges() == 0 {
        return Ok(RankVector {
            scores: v.to_vec(),
            iterations: 0,
            residual: 0.0,
            converged: true,
        });
    }

    let c = config.damping;
    let mut current = v.to_vec();
    let mut next = vec![0.0; n];
    let mut share = vec![0.0; n];
    let mut residual = f64::INFINITY;

    for iteration in 1..=config.max_iterations {
        // Mass leaving each node along edges; isolated nodes contribute to
        // the teleport term instead.
        let mut dangling = 0.0;
        for i in 0..n {
            let degree = graph.degree(i);
            if degree == 0 {
                share[i] = 0.0;
                dangling += current[i];
            } else {
                share[i] = current[i] / degree as f64;
            }
        }
        for (j, slot) in next.iter_mut().enumerate() {
            let incoming: f64 = graph.neighbors(j).iter().map(|&i| share[i as usize]).sum();
            *slot = c * (incoming + dangling * v[j]) + (1.0 - c) * v[j];
        }
        residual = current
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut current, &mut next);
        if residual <= config.tolerance {
            return Ok(RankVector {
                scores: current,
                iterations: iteration,
                residual,
                converged: true,
            });
        }
    }

    if config.accept_partial {
        return Ok(RankVector {
            scores: current,
            iterations: config.max_iterations,
            residual,
            converged: false,
        });
    }
    Err(Error::NonConvergence {
        iterations: config.max_iterations,
        residual,
        tolerance: config.tolerance,
    })
}

/// Writes a rank vector: `#` metadata lines (`key=value`, sorted), then
/// one `<synset-id> <TAB> <score>` line per node in id order, with scores
/// in full-precision scientific notation.
pub fn write_ranks(
    out: &mut dyn Write,
    nodes: &NodeIndex,
    ranks: &RankVector,
    metadata: &BTreeMap<String, String>,
) -> std::io::Result<()> {
    debug_assert_eq!(nodes.len(), ranks.scores.len());
    for (key, value) in metadata {
        writeln!(out, "# {key}={value}")?;
    }
    writeln!(out, "# converged={}", ranks.converged)?;
    writeln!(out, "# iterations={}", ranks.iterations)?;
    writeln!(out, "# residual={:e}", ranks.residual)?;
    for (index, score) in ranks.scores.iter().enumerate() {
        // 17 significant digits round-trip an f64 exactly.
        writeln!(out, "{}\t{score:.16e}", nodes.id(index))?;
    }
    Ok(())
}

/// A rank file read back from disk.
#[derive(Clone, Debug, PartialEq)]
pub struct RankFile {
    /// Synset/score rows in file order (id-sorted when written by
    /// [`write_ranks`]).
    pub entries: Vec<(SynsetId, f64)>,
    pub metadata: BTreeMap<String, String>,
}

pub fn read_ranks(path: &Path) -> Result<RankFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    let mut metadata = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() {
            continue;
        }
        if let Some(comment) = row.strip_prefix('#') {
            if let Some((key, value)) = comment.trim().split_once('=') {
                metadata.insert(key.trim().to_string(), value.trim().to_string());
            }
            continue;
        }
        let (id, score) = row
            .split_once('\t')
            .ok_or_else(|| Error::format(path, line, "expected <synset-id><TAB><score>"))?;
        let id: SynsetId = id.parse().map_err(|e| Error::format(path, line, e))?;
        let score: f64 = score
            .parse()
            .map_err(|_| Error::format(path, line, format!("unparseable score {score:?}")))?;
        entries.push((id, score));
    }
    Ok(RankFile { entries, metadata })
}
