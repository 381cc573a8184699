//! The tsv-graph knowledge base format.
//!
//! UTF-8, tab-separated, `#` comment lines, three record kinds:
//!
//! ```text
//! S <TAB> <synset-id> <TAB> <lemma1,lemma2,...>     synset + member lemmas
//! R <TAB> <lemma> <TAB> <synset-id> <TAB> <rank>    explicit sense rank
//! E <TAB> <synset-id> <TAB> <rel-type> <TAB> <synset-id>   relation
//! ```
//!
//! Sense ranks: a lemma+pos with no `R` lines gets implicit ranks 1..k in
//! `S`-line declaration order. Once any `R` line exists for a lemma+pos,
//! every `S`-declared membership of that lemma+pos must be ranked
//! explicitly (mixing is an integrity error). An `R` line implies
//! membership even without a matching `S` lemma list.
//!
//! Malformed lines are hard errors with a line number: this format is
//! produced by this crate, so leniency would only hide bugs.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{
    hex_string, normalize_lemma, KbFormat, LexicalKb, LoadWarnings, Pos, Provenance, RelType,
    Relation, SenseEntry, SynsetId,
};
use crate::error::{Error, Result};

pub(super) fn parse(path: &Path) -> Result<(LexicalKb, LoadWarnings)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let digest = hex_string(&Sha256::digest(text.as_bytes()));
    let mut warnings = LoadWarnings::default();

    let mut synsets: Vec<SynsetId> = Vec::new();
    let mut declared: HashSet<SynsetId> = HashSet::new();
    // S-line memberships in declaration order, for implicit ranks.
    let mut member_order: BTreeMap<(String, Pos), Vec<SynsetId>> = BTreeMap::new();
    let mut member_seen: HashSet<(String, SynsetId)> = HashSet::new();
    let mut explicit: BTreeMap<(String, Pos), BTreeMap<SynsetId, u32>> = BTreeMap::new();
    let mut relations: Vec<Relation> = Vec::new();

    let parse_id = |field: &str, line: usize| -> Result<SynsetId> {
        field
            .parse::<SynsetId>()
            .map_err(|e| Error::format(path, line, e))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = row.split('\t').collect();
        match (fields[0], fields.len()) {
            ("S", 3) => {
                let id = parse_id(fields[1], line)?;
                if declared.insert(id) {
                    synsets.push(id);
                }
                if fields[2].is_empty() {
                    continue; // synset declared with no member lemmas
                }
                for lemma_raw in fields[2].split(',') {
                    let lemma = normalize_lemma(lemma_raw);
                    if lemma.is_empty() {
                        return Err(Error::format(path, line, "empty lemma in member list"));
                    }
                    if member_seen.insert((lemma.clone(), id)) {
                        member_order.entry((lemma, id.pos)).or_default().push(id);
                    }
                }
            }
            ("R", 4) => {
                let lemma = normalize_lemma(fields[1]);
                if lemma.is_empty() {
                    return Err(Error::format(path, line, "empty lemma in rank line"));
                }
                let id = parse_id(fields[2], line)?;
                let rank: u32 = fields[3]
                    .parse()
                    .ok()
                    .filter(|&r| r >= 1)
                    .ok_or_else(|| {
                        Error::format(path, line, format!("sense rank {:?} is not a positive integer", fields[3]))
                    })?;
                let ranks = explicit.entry((lemma.clone(), id.pos)).or_default();
                if let Some(&existing) = ranks.get(&id) {
                    if existing != rank {
                        return Err(Error::format(
                            path,
                            line,
                            format!("conflicting ranks {existing} and {rank} for {lemma} in {id}"),
                        ));
                    }
                } else {
                    ranks.insert(id, rank);
                }
            }
            ("E", 4) => {
                let source = parse_id(fields[1], line)?;
                let target = parse_id(fields[3], line)?;
                let rel_type = fields[2].parse::<RelType>().unwrap_or_else(|_| {
                    warnings.unknown_relation_labels += 1;
                    RelType::Other
                });
                if source == target {
                    warnings.self_loops_dropped += 1;
                    continue;
                }
                relations.push(Relation::new(rel_type, source, target));
            }
            _ => {
                return Err(Error::format(
                    path,
                    line,
                    format!("unrecognized line starting with {:?}", fields[0]),
                ));
            }
        }
    }

    if synsets.is_empty() {
        return Err(Error::format(path, 0, "no synsets declared"));
    }

    // Assemble senses: explicit ranks win; implicit ranks follow S order.
    let mut senses: Vec<SenseEntry> = Vec::new();
    let mut mixed: Vec<String> = Vec::new();
    for ((lemma, pos), members) in &member_order {
        match explicit.get(&(lemma.clone(), *pos)) {
            None => {
                for (i, &synset) in members.iter().enumerate() {
                    senses.push(SenseEntry {
                        lemma: lemma.clone(),
                        synset,
                        rank: (i + 1) as u32,
                    });
                }
            }
            Some(ranks) => {
                for &synset in members {
                    if !ranks.contains_key(&synset) {
                        mixed.push(format!("{lemma}#{pos}: {synset} listed without an explicit rank"));
                    }
                }
            }
        }
    }
    if !mixed.is_empty() {
        return Err(Error::integrity(
            "lemma mixes implicit and explicit sense ranks",
            mixed,
        ));
    }
    for ((lemma, _pos), ranks) in &explicit {
        for (&synset, &rank) in ranks {
            senses.push(SenseEntry {
                lemma: lemma.clone(),
                synset,
                rank,
            });
        }
    }

    let provenance = Provenance {
        format: KbFormat::TsvGraph,
        path: path.display().to_string(),
        digest,
    };
    LexicalKb::new(synsets, senses, relations, provenance).map(|kb| (kb, warnings))
}

pub(super) fn write(kb: &LexicalKb, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "# tsv-graph knowledge base")?;
    writeln!(
        out,
        "# synsets={} senses={} relations={}",
        kb.synsets().len(),
        kb.senses().len(),
        kb.relations().len()
    )?;
    for &id in kb.synsets() {
        writeln!(out, "S\t{}\t{}", id, kb.member_lemmas(id).join(","))?;
    }
    // All ranks written explicitly so a reload never depends on line order.
    for sense in kb.senses() {
        writeln!(out, "R\t{}\t{}\t{}", sense.lemma, sense.synset, sense.rank)?;
    }
    for rel in kb.relations() {
        writeln!(out, "E\t{}\t{}\t{}", rel.source, rel.rel_type, rel.target)?;
    }
    Ok(())
}
