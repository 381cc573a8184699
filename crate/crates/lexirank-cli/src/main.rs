//! `lexirank`: induce polarity lexicons from a lexical knowledge base
//! and evaluate them on labeled corpora.
//!
//! Exit codes: 0 success, 1 usage error, 2 input/format error,
//! 3 numerical non-convergence.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use lexirank::eval::{classify_phrases, evaluate_documents, intrinsic_eval, read_corpus};
use lexirank::lexicon::{read_lexicon, synset_to_word, word_to_synset, write_lexicon};
use lexirank::lkb::write_tsv;
use lexirank::ppv::{make_personalization, pagerank, write_ranks};
use lexirank::seedgen::{read_seeds, write_seeds};
use lexirank::{
    ConflictPolicy, Error, GraphVariant, KbFormat, LexicalKb, Level, LoadWarnings, Polarity,
    PolarityLexicon, PpvConfig, RelType, SeedMethod,
};
use lexirank_cli::pipeline::{
    self, AssemblyVariant, PipelineConfig, PipelineError, PipelineResult, SweepSpec,
};

/// Induce and evaluate polarity lexicons from a lexical knowledge base.
///
/// A knowledge base (a WordNet-style database directory or a
/// tab-separated graph file) is projected onto undirected graphs; seed
/// synsets of known polarity are propagated over them with personalized
/// PageRank; the propagated ranks combine into signed lexicons at the
/// synset or word level, which the eval commands score against labeled
/// documents, phrases, or gold word lists.
#[derive(Parser)]
#[command(name = "lexirank", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a knowledge base, report its shape, optionally re-serialize it
    Parse(ParseCmd),
    /// Build one graph projection and report or export its edges
    Graph(GraphCmd),
    /// Generate a polarity seed set
    Seeds(SeedsCmd),
    /// Propagate one seed side over one projection (personalized PageRank)
    Propagate(PropagateCmd),
    /// Run the full pipeline to a signed lexicon file
    Lexicon(LexiconCmd),
    /// Convert a lexicon between synset and word level
    Convert(ConvertCmd),
    /// Tune a threshold on dev documents and score test documents
    EvalDocs(EvalDocsCmd),
    /// Classify phrases by negative dominance and score them
    EvalPhrases(EvalPhrasesCmd),
    /// Compare a lexicon against a gold lexicon over shared keys
    EvalIntrinsic(EvalIntrinsicCmd),
    /// Run a configuration grid and rank the resulting lexicons
    Sweep(SweepCmd),
}

#[derive(Args)]
struct KbArgs {
    /// Knowledge base: a WordNet-style database directory or a
    /// tab-separated graph file
    #[arg(long, value_name = "PATH", env = "LEXIRANK_DATA")]
    kb: PathBuf,
    /// Knowledge base format (wordnet-db or tsv-graph); inferred from
    /// the path when omitted: directories parse as wordnet-db, files as
    /// tsv-graph
    #[arg(long, value_name = "FORMAT", value_parser = KbFormat::from_str)]
    format: Option<KbFormat>,
}

impl KbArgs {
    fn load(&self) -> PipelineResult<(LexicalKb, LoadWarnings)> {
        let loaded = pipeline::load_kb(&self.kb, self.format)?;
        report_warnings(&loaded.1);
        Ok(loaded)
    }
}

fn report_warnings(warnings: &LoadWarnings) {
    if !warnings.is_clean() {
        eprintln!(
            "load warnings: {} unknown relation labels, {} self-loops dropped, {} unparseable lines",
            warnings.unknown_relation_labels,
            warnings.self_loops_dropped,
            warnings.unparseable_lines
        );
    }
}

#[derive(Args, Clone, Copy)]
struct PpvArgs {
    /// Damping factor in (0, 1)
    #[arg(long, value_name = "C", default_value_t = PpvConfig::default().damping)]
    damping: f64,
    /// L1 convergence tolerance
    #[arg(long, value_name = "EPS", default_value_t = PpvConfig::default().tolerance)]
    tolerance: f64,
    /// Power-iteration cap
    #[arg(long = "max-iter", value_name = "N", default_value_t = PpvConfig::default().max_iterations)]
    max_iterations: u32,
    /// Keep partial ranks when the iteration cap is hit instead of
    /// failing with exit code 3
    #[arg(long)]
    accept_partial: bool,
}

impl PpvArgs {
    fn config(&self) -> PpvConfig {
        PpvConfig {
            damping: self.damping,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            accept_partial: self.accept_partial,
        }
    }
}

#[derive(Args, Clone)]
struct SeedGenArgs {
    /// Seeding method: ag (attribute walk from quality nouns) or tl
    /// (14-word list resolved through first senses)
    #[arg(long, value_parser = SeedMethod::from_str)]
    method: SeedMethod,
    /// Expansion depth over the seed relations
    #[arg(long, value_name = "N", default_value_t = 0)]
    iterations: u32,
    /// Synsets reached at both polarities: drop, or first-wins (keep
    /// the shallower side)
    #[arg(long = "conflict-policy", value_parser = ConflictPolicy::from_str, default_value = "drop")]
    conflict_policy: ConflictPolicy,
    /// Custom seed words (tl only): one `lemma[#pos] <TAB> pos|neg` row
    /// per line
    #[arg(long = "seed-words", value_name = "FILE")]
    seed_words: Option<PathBuf>,
    /// Expansion relation set (ag only), comma-separated relation names
    #[arg(long, value_name = "LIST", value_parser = RelationList::from_str)]
    relations: Option<RelationList>,
    /// Skip seed lemmas missing from the knowledge base instead of
    /// failing
    #[arg(long = "skip-missing-seeds")]
    skip_missing_seeds: bool,
}

impl SeedGenArgs {
    fn seed_words(&self) -> PipelineResult<Option<Vec<lexirank::SeedWord>>> {
        match &self.seed_words {
            Some(path) => stage(
                "seeds",
                path.display(),
                pipeline::read_seed_words(path).map(Some),
            ),
            None => Ok(None),
        }
    }
}

#[derive(Args)]
struct ParseCmd {
    #[command(flatten)]
    kb: KbArgs,
    /// Re-serialize the knowledge base as a normalized tab-separated
    /// graph file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphCmd {
    #[command(flatten)]
    kb: KbArgs,
    /// Projection: G1SYN, G1ANT, G2, G3, or G4
    #[arg(long, value_parser = GraphVariant::from_str)]
    variant: GraphVariant,
    /// Write the edge list (`<synset-id> <TAB> <synset-id>` rows)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeedsCmd {
    #[command(flatten)]
    kb: KbArgs,
    #[command(flatten)]
    gen: SeedGenArgs,
    /// Seed file destination (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PropagateCmd {
    #[command(flatten)]
    kb: KbArgs,
    /// Projection: G1SYN, G1ANT, G2, G3, or G4
    #[arg(long, value_parser = GraphVariant::from_str)]
    variant: GraphVariant,
    /// Seed file (as written by `lexirank seeds`)
    #[arg(long, value_name = "FILE")]
    seeds: PathBuf,
    /// Which seed side to personalize on
    #[arg(long, value_parser = Polarity::from_str)]
    polarity: Polarity,
    #[command(flatten)]
    ppv: PpvArgs,
    /// Rank file destination (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LexiconCmd {
    #[command(flatten)]
    kb: KbArgs,
    /// Assembly: G1 (cross-assigned synonymy/antonymy pair), or a
    /// two-run assembly over G2, G3, or G4
    #[arg(long, value_parser = AssemblyVariant::from_str)]
    variant: AssemblyVariant,
    /// Precomputed seed file; its headers supply method and iteration
    #[arg(long, value_name = "FILE", conflicts_with_all = ["method", "iterations", "seed_words", "relations", "skip_missing_seeds"])]
    seeds: Option<PathBuf>,
    /// Seeding method (required without --seeds)
    #[arg(long, value_parser = SeedMethod::from_str, required_unless_present = "seeds")]
    method: Option<SeedMethod>,
    /// Expansion depth over the seed relations
    #[arg(long, value_name = "N", default_value_t = 0)]
    iterations: u32,
    /// Synsets reached at both polarities: drop, or first-wins
    #[arg(long = "conflict-policy", value_parser = ConflictPolicy::from_str, default_value = "drop")]
    conflict_policy: ConflictPolicy,
    /// Custom seed words (tl only)
    #[arg(long = "seed-words", value_name = "FILE")]
    seed_words: Option<PathBuf>,
    /// Expansion relation set (ag only)
    #[arg(long, value_name = "LIST", value_parser = RelationList::from_str)]
    relations: Option<RelationList>,
    /// Skip seed lemmas missing from the knowledge base
    #[arg(long = "skip-missing-seeds")]
    skip_missing_seeds: bool,
    /// Lexicon level: synset (s) or word (w)
    #[arg(long, value_parser = parse_level, default_value = "synset")]
    level: Level,
    #[command(flatten)]
    ppv: PpvArgs,
    /// Lexicon file destination
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct ConvertCmd {
    /// Lexicon file to convert
    #[arg(value_name = "LEXICON")]
    lexicon: PathBuf,
    #[command(flatten)]
    kb: KbArgs,
    /// Target level: synset (s) or word (w)
    #[arg(long, value_parser = parse_level)]
    level: Level,
    /// Converted lexicon destination (stdout when omitted)
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalDocsCmd {
    /// Lexicon file to evaluate
    #[arg(value_name = "LEXICON")]
    lexicon: PathBuf,
    /// Development corpus (threshold tuning)
    #[arg(long, value_name = "FILE")]
    dev: PathBuf,
    /// Test corpus
    #[arg(long, value_name = "FILE")]
    test: PathBuf,
    /// Also write the report to a file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalPhrasesCmd {
    /// Lexicon file to evaluate
    #[arg(value_name = "LEXICON")]
    lexicon: PathBuf,
    /// Phrase corpus
    #[arg(long, value_name = "FILE")]
    test: PathBuf,
    /// Also write the report to a file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalIntrinsicCmd {
    /// Gold lexicon
    #[arg(value_name = "GOLD")]
    gold: PathBuf,
    /// Predicted lexicon (must be the same level as the gold one)
    #[arg(value_name = "PREDICTED")]
    predicted: PathBuf,
    /// Also write the report to a file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    kb: KbArgs,
    /// Seed methods, comma-separated (ag, tl)
    #[arg(long = "method", value_name = "LIST", value_parser = MethodList::from_str, default_value = "ag,tl")]
    methods: MethodList,
    /// Iterations: a number, an inclusive range (0-4), or a comma list
    #[arg(long = "iterations", value_name = "SPEC", value_parser = IterationList::from_str)]
    iterations: IterationList,
    /// Assemblies, comma-separated (G1, G2, G3, G4)
    #[arg(long = "variant", value_name = "LIST", value_parser = VariantList::from_str, default_value = "G1,G2,G3,G4")]
    variants: VariantList,
    /// Lexicon levels, comma-separated (synset/s, word/w)
    #[arg(long = "level", value_name = "LIST", value_parser = LevelList::from_str, default_value = "synset,word")]
    levels: LevelList,
    /// Synsets reached at both polarities: drop, or first-wins
    #[arg(long = "conflict-policy", value_parser = ConflictPolicy::from_str, default_value = "drop")]
    conflict_policy: ConflictPolicy,
    /// Development corpus; with --test, every lexicon is
    /// threshold-tuned and scored
    #[arg(long, value_name = "FILE", requires = "test")]
    dev: Option<PathBuf>,
    /// Test corpus
    #[arg(long, value_name = "FILE", requires = "dev")]
    test: Option<PathBuf>,
    /// Worker limit (default: all available cores)
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    #[command(flatten)]
    ppv: PpvArgs,
    /// Output directory for the lexicons and the ranked report
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

fn parse_level(token: &str) -> Result<Level, String> {
    match token {
        "s" => Ok(Level::Synset),
        "w" => Ok(Level::Word),
        other => other.parse(),
    }
}

macro_rules! list_arg {
    ($name:ident, $item:ty, $parse:path) => {
        #[derive(Clone, Debug)]
        struct $name(Vec<$item>);

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                $parse(s).map($name)
            }
        }
    };
}

list_arg!(MethodList, SeedMethod, pipeline::parse_methods);
list_arg!(IterationList, u32, pipeline::parse_iterations);
list_arg!(VariantList, AssemblyVariant, pipeline::parse_variants);
list_arg!(LevelList, Level, pipeline::parse_levels);

#[derive(Clone, Debug)]
struct RelationList(BTreeSet<RelType>);

impl FromStr for RelationList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut set = BTreeSet::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                return Err(format!("empty element in relation list {s:?}"));
            }
            set.insert(part.parse::<RelType>()?);
        }
        Ok(RelationList(set))
    }
}

fn main() {
    // Die quietly when a downstream pipe closes (e.g. `lexirank ... | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests print to stdout and succeed;
            // everything else is a usage error.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err.source {
                Error::NonConvergence { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn dispatch(command: Command) -> PipelineResult<()> {
    match command {
        Command::Parse(cmd) => cmd_parse(cmd),
        Command::Graph(cmd) => cmd_graph(cmd),
        Command::Seeds(cmd) => cmd_seeds(cmd),
        Command::Propagate(cmd) => cmd_propagate(cmd),
        Command::Lexicon(cmd) => cmd_lexicon(cmd),
        Command::Convert(cmd) => cmd_convert(cmd),
        Command::EvalDocs(cmd) => cmd_eval_docs(cmd),
        Command::EvalPhrases(cmd) => cmd_eval_phrases(cmd),
        Command::EvalIntrinsic(cmd) => cmd_eval_intrinsic(cmd),
        Command::Sweep(cmd) => cmd_sweep(cmd),
    }
}

fn stage<T>(
    name: &'static str,
    context: impl fmt::Display,
    result: lexirank::Result<T>,
) -> PipelineResult<T> {
    result.map_err(|source| PipelineError {
        stage: name,
        context: context.to_string(),
        source,
    })
}

fn io_error(path: &PathBuf, source: std::io::Error) -> Error {
    Error::Io {
        path: path.clone(),
        source,
    }
}

/// Writes bytes to the given file, or to stdout when no file is given.
fn write_output(out: Option<&PathBuf>, bytes: &[u8]) -> PipelineResult<()> {
    match out {
        Some(path) => stage(
            "write",
            path.display(),
            fs::write(path, bytes).map_err(|e| io_error(path, e)),
        ),
        None => stage(
            "write",
            "stdout",
            std::io::stdout().write_all(bytes).map_err(|e| Error::Io {
                path: PathBuf::from("-"),
                source: e,
            }),
        ),
    }
}

fn cmd_parse(cmd: ParseCmd) -> PipelineResult<()> {
    let (kb, _) = cmd.kb.load()?;
    let provenance = kb.provenance();
    println!(
        "kb={} format={} digest={}",
        provenance.path, provenance.format, provenance.digest
    );
    println!(
        "synsets={} senses={} relations={}",
        kb.num_synsets(),
        kb.senses().len(),
        kb.relations().len()
    );
    let counts: Vec<String> = RelType::ALL
        .iter()
        .filter_map(|&rel| {
            let count = kb.relation_count(rel);
            (count > 0).then(|| format!("{rel}={count}"))
        })
        .collect();
    println!("relation-counts: {}", counts.join(" "));
    if let Some(out) = &cmd.out {
        let mut buf = Vec::new();
        stage(
            "write",
            out.display(),
            write_tsv(&kb, &mut buf).map_err(|e| io_error(out, e)),
        )?;
        write_output(Some(out), &buf)?;
        eprintln!("wrote normalized graph to {}", out.display());
    }
    Ok(())
}

fn cmd_graph(cmd: GraphCmd) -> PipelineResult<()> {
    let (kb, _) = cmd.kb.load()?;
    let graph = kb.build_graph(cmd.variant);
    let isolated = (0..graph.num_nodes())
        .filter(|&node| graph.degree(node) == 0)
        .count();
    println!(
        "variant={} nodes={} edges={} isolated={}",
        graph.variant(),
        graph.num_nodes(),
        graph.num_edges(),
        isolated
    );
    if let Some(out) = &cmd.out {
        let mut buf = Vec::new();
        let _ = writeln!(buf, "# variant={}", graph.variant());
        let _ = writeln!(buf, "# nodes={}", graph.num_nodes());
        let _ = writeln!(buf, "# edges={}", graph.num_edges());
        for (a, b) in graph.edge_pairs() {
            let _ = writeln!(
                buf,
                "{}\t{}",
                graph.nodes().id(a as usize),
                graph.nodes().id(b as usize)
            );
        }
        write_output(Some(out), &buf)?;
        eprintln!("wrote edge list to {}", out.display());
    }
    Ok(())
}

fn cmd_seeds(cmd: SeedsCmd) -> PipelineResult<()> {
    let (kb, _) = cmd.kb.load()?;
    let words = cmd.gen.seed_words()?;
    let context = format!(
        "method={} iterations={} policy={}",
        cmd.gen.method, cmd.gen.iterations, cmd.gen.conflict_policy
    );
    let seeds = stage(
        "seeds",
        &context,
        pipeline::generate_seeds(
            &kb,
            cmd.gen.method,
            cmd.gen.iterations,
            cmd.gen.conflict_policy,
            cmd.gen.relations.as_ref().map(|list| &list.0),
            words.as_deref(),
            cmd.gen.skip_missing_seeds,
        ),
    )?;
    let mut buf = Vec::new();
    stage(
        "write",
        &context,
        write_seeds(&seeds, &mut buf).map_err(|e| Error::Io {
            path: PathBuf::from("-"),
            source: e,
        }),
    )?;
    write_output(cmd.out.as_ref(), &buf)?;
    eprintln!(
        "seeds: {} positive, {} negative, {} conflicts dropped{}",
        seeds.positive.len(),
        seeds.negative.len(),
        seeds.dropped_conflicts,
        match seeds.fixed_point {
            Some(depth) => format!(", fixed point at depth {depth}"),
            None => String::new(),
        }
    );
    Ok(())
}

fn cmd_propagate(cmd: PropagateCmd) -> PipelineResult<()> {
    let (kb, _) = cmd.kb.load()?;
    let graph = kb.build_graph(cmd.variant);
    let context = format!(
        "variant={} polarity={} seeds={}",
        cmd.variant,
        cmd.polarity,
        cmd.seeds.display()
    );
    let file = stage("seeds", &context, read_seeds(&cmd.seeds))?;
    let side = match cmd.polarity {
        Polarity::Positive => &file.positive,
        Polarity::Negative => &file.negative,
    };
    let (personalization, mapped) =
        stage("propagate", &context, make_personalization(&graph, side))?;
    if mapped < side.len() {
        eprintln!(
            "note: {} of {} seed synsets are not in this knowledge base",
            side.len() - mapped,
            side.len()
        );
    }
    let config = cmd.ppv.config();
    let ranks = stage("propagate", &context, pagerank(&graph, &personalization, &config))?;

    let provenance = kb.provenance();
    let mut metadata = BTreeMap::new();
    metadata.insert("damping".to_string(), config.damping.to_string());
    metadata.insert("tolerance".to_string(), format!("{:e}", config.tolerance));
    metadata.insert("variant".to_string(), cmd.variant.to_string());
    metadata.insert("polarity".to_string(), cmd.polarity.to_string());
    metadata.insert("seed-count".to_string(), mapped.to_string());
    metadata.insert("seeds-file".to_string(), cmd.seeds.display().to_string());
    metadata.insert("kb-digest".to_string(), provenance.digest.clone());
    metadata.insert("kb-path".to_string(), provenance.path.clone());
    let mut buf = Vec::new();
    stage(
        "write",
        &context,
        write_ranks(&mut buf, graph.nodes(), &ranks, &metadata).map_err(|e| Error::Io {
            path: PathBuf::from("-"),
            source: e,
        }),
    )?;
    write_output(cmd.out.as_ref(), &buf)?;
    eprintln!(
        "converged={} iterations={} residual={:e}",
        ranks.converged, ranks.iterations, ranks.residual
    );
    Ok(())
}

fn cmd_lexicon(cmd: LexiconCmd) -> PipelineResult<()> {
    let words = match &cmd.seed_words {
        Some(path) => stage(
            "seeds",
            path.display(),
            pipeline::read_seed_words(path).map(Some),
        )?,
        None => None,
    };
    let config = PipelineConfig {
        kb_path: cmd.kb.kb.clone(),
        format: cmd.kb.format,
        method: cmd.method,
        iterations: cmd.iterations,
        variant: cmd.variant,
        level: cmd.level,
        policy: cmd.conflict_policy,
        ppv: cmd.ppv.config(),
        seeds_file: cmd.seeds.clone(),
        seed_words: words,
        relations: cmd.relations.map(|list| list.0),
        skip_missing_seeds: cmd.skip_missing_seeds,
        out: cmd.out.clone(),
    };
    let outcome = pipeline::run_pipeline(&config)?;
    for line in &outcome.log {
        eprintln!("{line}");
    }
    println!(
        "{} entries={} out={}",
        outcome.job,
        outcome.entries,
        outcome.lexicon_path.display()
    );
    Ok(())
}

fn cmd_convert(cmd: ConvertCmd) -> PipelineResult<()> {
    let (kb, _) = cmd.kb.load()?;
    let context = format!("{} -> {}", cmd.lexicon.display(), cmd.level);
    let lexicon = stage("convert", &context, read_lexicon(&cmd.lexicon))?;
    let converted = match (lexicon.level, cmd.level) {
        (Level::Synset, Level::Word) => stage("convert", &context, synset_to_word(&lexicon, &kb))?,
        (Level::Word, Level::Synset) => stage("convert", &context, word_to_synset(&lexicon, &kb))?,
        _ => lexicon,
    };
    let mut buf = Vec::new();
    stage(
        "write",
        &context,
        write_lexicon(&converted, &mut buf).map_err(|e| Error::Io {
            path: PathBuf::from("-"),
            source: e,
        }),
    )?;
    write_output(cmd.out.as_ref(), &buf)?;
    eprintln!("{} entries at {} level", converted.len(), converted.level);
    Ok(())
}

fn read_lexicon_stage(path: &PathBuf) -> PipelineResult<PolarityLexicon> {
    stage("eval", path.display(), read_lexicon(path))
}

fn emit_report(report: &lexirank::EvalReport, out: Option<&PathBuf>) -> PipelineResult<()> {
    let text = report.to_string();
    print!("{text}");
    if let Some(path) = out {
        stage(
            "write",
            path.display(),
            fs::write(path, &text).map_err(|e| io_error(path, e)),
        )?;
    }
    Ok(())
}

fn cmd_eval_docs(cmd: EvalDocsCmd) -> PipelineResult<()> {
    let lexicon = read_lexicon_stage(&cmd.lexicon)?;
    let dev = stage("eval", cmd.dev.display(), read_corpus(&cmd.dev))?;
    let test = stage("eval", cmd.test.display(), read_corpus(&cmd.test))?;
    let report = stage(
        "eval",
        cmd.lexicon.display(),
        evaluate_documents(&lexicon, &dev, &test),
    )?;
    emit_report(&report, cmd.out.as_ref())
}

fn cmd_eval_phrases(cmd: EvalPhrasesCmd) -> PipelineResult<()> {
    let lexicon = read_lexicon_stage(&cmd.lexicon)?;
    let phrases = stage("eval", cmd.test.display(), read_corpus(&cmd.test))?;
    let report = classify_phrases(&lexicon, &phrases);
    emit_report(&report, cmd.out.as_ref())
}

fn cmd_eval_intrinsic(cmd: EvalIntrinsicCmd) -> PipelineResult<()> {
    let gold = read_lexicon_stage(&cmd.gold)?;
    let predicted = read_lexicon_stage(&cmd.predicted)?;
    let report = stage(
        "eval",
        format!("{} vs {}", cmd.predicted.display(), cmd.gold.display()),
        intrinsic_eval(&predicted, &gold),
    )?;
    emit_report(&report, cmd.out.as_ref())
}

fn cmd_sweep(cmd: SweepCmd) -> PipelineResult<()> {
    let (kb, _) = cmd.kb.load()?;
    let spec = SweepSpec {
        methods: cmd.methods.0,
        iterations: cmd.iterations.0,
        variants: cmd.variants.0,
        levels: cmd.levels.0,
        policy: cmd.conflict_policy,
        ppv: cmd.ppv.config(),
    };
    stage("sweep", "spec", spec.validate())?;
    eprintln!(
        "sweep: {} jobs ({} methods x {} iterations x {} assemblies x {} levels)",
        spec.job_count(),
        spec.methods.len(),
        spec.iterations.len(),
        spec.variants.len(),
        spec.levels.len()
    );
    let corpora = match (&cmd.dev, &cmd.test) {
        (Some(dev), Some(test)) => Some((
            stage("eval", dev.display(), read_corpus(dev))?,
            stage("eval", test.display(), read_corpus(test))?,
        )),
        _ => None,
    };
    let report = pipeline::run_sweep(
        &kb,
        &spec,
        corpora.as_ref().map(|(dev, test)| (dev.as_slice(), test.as_slice())),
        &cmd.out,
        cmd.jobs,
    )?;
    let text = report.to_string();
    print!("{text}");
    let report_path = cmd.out.join("report.txt");
    stage(
        "write",
        report_path.display(),
        fs::write(&report_path, &text).map_err(|e| io_error(&report_path, e)),
    )?;
    eprintln!("report written to {}", report_path.display());
    Ok(())
}
