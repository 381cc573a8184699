//! Princeton WordNet database-directory format.
//!
//! Reads the `data.{noun,verb,adj,adv}` synset files and `index.sense`,
//! following the wndb field grammar: each data line is
//!
//! ```text
//! offset lex_filenum ss_type w_cnt (word lex_id)+ p_cnt ptr* [frames] | gloss
//! ```
//!
//! with `w_cnt` in hex, `p_cnt` in decimal, and each pointer being
//! `symbol offset pos source/target`. Satellite synsets (`ss_type` `s`)
//! are ordinary adjectives here. Sense membership and frequency ranks come
//! from `index.sense` (`lemma%ss_type:... offset sense_number tag_cnt`),
//! which is authoritative for both.
//!
//! WordNet encodes synonymy implicitly through shared membership, so after
//! loading, a `synonym-variant` relation is materialized for every pair of
//! synsets that share a lemma+pos — one edge per unordered pair. Pointer
//! symbols documented by WordNet but not in our enumeration (member/part
//! holonyms, domain links, and so on) map to `other` silently; symbols
//! outside the documentation map to `other` and are counted.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{
    hex_string, normalize_lemma, KbFormat, LexicalKb, LoadWarnings, Pos, Provenance, RelType,
    Relation, SenseEntry, SynsetId,
};
use crate::error::{Error, Result};

const DATA_FILES: [(&str, Pos); 4] = [
    ("data.noun", Pos::Noun),
    ("data.verb", Pos::Verb),
    ("data.adj", Pos::Adjective),
    ("data.adv", Pos::Adverb),
];
const SENSE_FILE: &str = "index.sense";

pub(super) fn parse(dir: &Path) -> Result<(LexicalKb, LoadWarnings)> {
    let meta = std::fs::metadata(dir).map_err(|e| Error::io(dir, e))?;
    if !meta.is_dir() {
        return Err(Error::format(
            dir,
            0,
            "wordnet-db input must be a database directory",
        ));
    }

    let mut warnings = LoadWarnings::default();
    let mut hasher = Sha256::new();
    let mut synsets: Vec<SynsetId> = Vec::new();
    let mut relations: Vec<Relation> = Vec::new();
    let mut senses: Vec<SenseEntry> = Vec::new();

    for (name, pos) in DATA_FILES {
        let path = dir.join(name);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        hasher.update(text.as_bytes());
        for row in text.lines() {
            // License header lines begin with a space; data lines with an
            // offset digit.
            if row.is_empty() || row.starts_with(' ') {
                continue;
            }
            match parse_data_line(row, pos, &mut warnings) {
                Some((id, rels)) => {
                    synsets.push(id);
                    relations.extend(rels);
                }
                None => warnings.unparseable_lines += 1,
            }
        }
    }

    let sense_path = dir.join(SENSE_FILE);
    let sense_text = std::fs::read_to_string(&sense_path).map_err(|e| Error::io(&sense_path, e))?;
    hasher.update(sense_text.as_bytes());
    for row in sense_text.lines() {
        if row.is_empty() {
            continue;
        }
        match parse_sense_line(row) {
            Some(sense) => senses.push(sense),
            None => warnings.unparseable_lines += 1,
        }
    }

    if synsets.is_empty() {
        return Err(Error::format(dir, 0, "no synsets parsed from data files"));
    }

    // Drop self-loops before construction; the constructor treats any that
    // remain as integrity violations.
    let before = relations.len();
    relations.retain(|r| r.source != r.target);
    warnings.self_loops_dropped += (before - relations.len()) as u64;

    relations.extend(co_membership_edges(&senses));

    let provenance = Provenance {
        format: KbFormat::WordnetDb,
        path: dir.display().to_string(),
        digest: hex_string(&hasher.finalize()),
    };
    LexicalKb::new(synsets, senses, relations, provenance).map(|kb| (kb, warnings))
}

/// One `synonym-variant` relation per unordered pair of synsets sharing a
/// lemma+pos.
fn co_membership_edges(senses: &[SenseEntry]) -> Vec<Relation> {
    let mut by_lemma: BTreeMap<(&str, Pos), Vec<SynsetId>> = BTreeMap::new();
    for sense in senses {
        by_lemma
            .entry((sense.lemma.as_str(), sense.synset.pos))
            .or_default()
            .push(sense.synset);
    }
    let mut pairs: BTreeSet<(SynsetId, SynsetId)> = BTreeSet::new();
    for (_, mut members) in by_lemma {
        members.sort_unstable();
        members.dedup();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                pairs.insert((members[i], members[j]));
            }
        }
    }
    pairs
        .into_iter()
        .map(|(a, b)| Relation::new(RelType::SynonymVariant, a, b))
        .collect()
}

fn parse_data_line(
    row: &str,
    file_pos: Pos,
    warnings: &mut LoadWarnings,
) -> Option<(SynsetId, Vec<Relation>)> {
    let head = row.split('|').next().unwrap_or("");
    let mut tokens = head.split_whitespace();

    let offset: u32 = tokens.next()?.parse().ok()?;
    let _lex_filenum = tokens.next()?;
    let ss_type = single_char(tokens.next()?)?;
    let pos = Pos::from_char(ss_type)?;
    if pos != file_pos {
        return None;
    }
    let source = SynsetId::new(pos, offset);

    let w_cnt = usize::from_str_radix(tokens.next()?, 16).ok()?;
    if w_cnt == 0 {
        return None;
    }
    for _ in 0..w_cnt {
        tokens.next()?; // word (membership comes from index.sense)
        tokens.next()?; // lex_id
    }

    let p_cnt: usize = tokens.next()?.parse().ok()?;
    let mut relations = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        let symbol = tokens.next()?;
        let tgt_offset: u32 = tokens.next()?.parse().ok()?;
        let tgt_pos = Pos::from_char(single_char(tokens.next()?)?)?;
        let _source_target = tokens.next()?;
        let target = SynsetId::new(tgt_pos, tgt_offset);
        relations.push(map_pointer(symbol, file_pos, source, target, warnings));
    }
    // Verb frame fields may follow; they carry no relation content.

    Some((source, relations))
}

/// Maps a wndb pointer symbol to a relation. `~`/`~i` are the hyponym
/// inverses of `@`/`@i`, so their endpoints are swapped to keep a single
/// hypernym orientation. `\` is pertainym on adjectives but
/// "derived from adjective" on adverbs.
fn map_pointer(
    symbol: &str,
    file_pos: Pos,
    source: SynsetId,
    target: SynsetId,
    warnings: &mut LoadWarnings,
) -> Relation {
    let rel_type = match symbol {
        "!" => RelType::Antonym,
        "&" => RelType::SimilarTo,
        "+" => RelType::DerivedFrom,
        "\\" => {
            if file_pos == Pos::Adverb {
                RelType::DerivedFrom
            } else {
                RelType::PertainsTo
            }
        }
        "^" => RelType::AlsoSee,
        "=" => RelType::Attribute,
        "@" | "@i" => RelType::Hypernym,
        "~" | "~i" => return Relation::new(RelType::Hypernym, target, source),
        // Documented symbols with no counterpart in our enumeration:
        // holonyms/meronyms, domain links, verb groups, participles,
        // entailment, cause.
        "#m" | "#s" | "#p" | "%m" | "%s" | "%p" | ";c" | ";r" | ";u" | "-c" | "-r" | "-u"
        | "*" | ">" | "$" | "<" => RelType::Other,
        _ => {
            warnings.unknown_relation_labels += 1;
            RelType::Other
        }
    };
    Relation::new(rel_type, source, target)
}

fn parse_sense_line(row: &str) -> Option<SenseEntry> {
    let mut tokens = row.split_whitespace();
    let key = tokens.next()?;
    let offset: u32 = tokens.next()?.parse().ok()?;
    let rank: u32 = tokens.next()?.parse().ok().filter(|&r| r >= 1)?;

    let (lemma_raw, rest) = key.split_once('%')?;
    let pos = match rest.chars().next()? {
        '1' => Pos::Noun,
        '2' => Pos::Verb,
        '3' | '5' => Pos::Adjective, // 5 = adjective satellite
        '4' => Pos::Adverb,
        _ => return None,
    };
    Some(SenseEntry {
        lemma: normalize_lemma(lemma_raw),
        synset: SynsetId::new(pos, offset),
        rank,
    })
}

fn single_char(token: &str) -> Option<char> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}
