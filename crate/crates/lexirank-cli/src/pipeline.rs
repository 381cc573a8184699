//! Single-configuration pipeline runs and configuration sweeps.
//!
//! A *job* is one point in the configuration grid: seed method ×
//! expansion iteration × graph assembly × lexicon level, named in the
//! `ag_s04_G1` style (method, level letter, zero-padded iteration,
//! assembly). [`run_job`] executes one job against an in-memory
//! knowledge base, [`run_pipeline`] is the file-to-file wrapper behind
//! the `lexicon` subcommand, and [`run_sweep`] executes a whole grid
//! concurrently, optionally scoring every produced lexicon on a
//! dev/test corpus pair and ranking the results by macro-F1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use lexirank::eval::evaluate_documents;
use lexirank::lexicon::{assemble_g1, assemble_single, synset_to_word, write_lexicon};
use lexirank::seedgen::{
    ag_default_relations, ag_seeds, default_seed_words, read_seeds, tl_seeds_raw, SeedFile,
};
use lexirank::{
    parse_lkb, ConflictPolicy, Document, Error, EvalReport, GraphVariant, KbFormat, LexicalKb,
    Level, LoadWarnings, Polarity, PolarityLexicon, PpvConfig, PropagationGraph, RelType,
    SeedMethod, SeedSet, SeedWord,
};

/// An error from one pipeline stage, carrying the stage name and enough
/// configuration context to identify the failing run.
#[derive(Debug)]
pub struct PipelineError {
    pub stage: &'static str,
    pub context: String,
    pub source: Error,
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.stage, self.context, self.source)
    }
}

impl std::error::Error for PipelineError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

pub type PipelineResult<T> = std::result::Result<T, PipelineError>;

fn stage<T>(
    stage: &'static str,
    context: impl fmt::Display,
    result: lexirank::Result<T>,
) -> PipelineResult<T> {
    result.map_err(|source| PipelineError {
        stage,
        context: context.to_string(),
        source,
    })
}

/// Which assembly produces the lexicon: `G1` is the four-run
/// cross-assignment over the synonymy/antonymy projection pair;
/// `G2`–`G4` are two-run assemblies over a single projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AssemblyVariant {
    G1,
    G2,
    G3,
    G4,
}

impl AssemblyVariant {
    pub const ALL: [AssemblyVariant; 4] = [
        AssemblyVariant::G1,
        AssemblyVariant::G2,
        AssemblyVariant::G3,
        AssemblyVariant::G4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AssemblyVariant::G1 => "G1",
            AssemblyVariant::G2 => "G2",
            AssemblyVariant::G3 => "G3",
            AssemblyVariant::G4 => "G4",
        }
    }

    /// The single projection behind this assembly, or `None` for the
    /// cross-assigned `G1` pair.
    pub fn single_projection(self) -> Option<GraphVariant> {
        match self {
            AssemblyVariant::G1 => None,
            AssemblyVariant::G2 => Some(GraphVariant::G2),
            AssemblyVariant::G3 => Some(GraphVariant::G3),
            AssemblyVariant::G4 => Some(GraphVariant::G4),
        }
    }
}

impl fmt::Display for AssemblyVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssemblyVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<AssemblyVariant, String> {
        AssemblyVariant::ALL
            .into_iter()
            .find(|v| v.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown assembly variant {s:?} (expected G1, G2, G3, or G4)"))
    }
}

/// One point of the configuration grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub method: SeedMethod,
    pub iteration: u32,
    pub variant: AssemblyVariant,
    pub level: Level,
}

impl JobSpec {
    /// `ag_s04_G1` style name: method, level letter, zero-padded seed
    /// iteration, assembly.
    pub fn name(&self) -> String {
        format!(
            "{}_{}{:02}_{}",
            self.method,
            self.level.letter(),
            self.iteration,
            self.variant
        )
    }
}

impl fmt::Display for JobSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Loads a knowledge base, inferring the format from the path when not
/// given: directories parse as WordNet-style databases, files as
/// tab-separated graphs.
pub fn load_kb(
    path: &Path,
    format: Option<KbFormat>,
) -> PipelineResult<(LexicalKb, LoadWarnings)> {
    let format = format.unwrap_or(if path.is_dir() {
        KbFormat::WordnetDb
    } else {
        KbFormat::TsvGraph
    });
    stage("parse", path.display(), parse_lkb(path, format))
}

/// Generates a seed set for a method. `relations` overrides the
/// expansion relation set (attribute-walk seeding only; the word-list
/// walk always uses its fixed five relations), `seed_words` overrides
/// the 14-word default list (word-list seeding only).
pub fn generate_seeds(
    kb: &LexicalKb,
    method: SeedMethod,
    iterations: u32,
    policy: ConflictPolicy,
    relations: Option<&BTreeSet<RelType>>,
    seed_words: Option<&[SeedWord]>,
    skip_missing: bool,
) -> lexirank::Result<SeedSet> {
    match method {
        SeedMethod::Ag => {
            let default;
            let relations = match relations {
                Some(set) => set,
                None => {
                    default = ag_default_relations();
                    &default
                }
            };
            ag_seeds(kb, iterations, relations, policy)
        }
        SeedMethod::Tl => {
            let default;
            let words = match seed_words {
                Some(list) => list,
                None => {
                    default = default_seed_words();
                    &default
                }
            };
            tl_seeds_raw(kb, iterations, words, skip_missing)?.resolve(policy)
        }
    }
}

/// Reconstructs a [`SeedSet`] from a seed file written by
/// `write_seeds`, whose header lines carry the generation parameters.
pub fn seed_set_from_file(file: &SeedFile) -> lexirank::Result<SeedSet> {
    fn required<'a>(file: &'a SeedFile, key: &str) -> lexirank::Result<&'a str> {
        file.metadata.get(key).map(String::as_str).ok_or_else(|| {
            Error::InvalidConfig(format!("seed file is missing the {key}= header line"))
        })
    }
    let method: SeedMethod = required(file, "method")?
        .parse()
        .map_err(Error::InvalidConfig)?;
    let iteration: u32 = required(file, "iteration")?
        .parse()
        .map_err(|_| Error::InvalidConfig("unparseable iteration= header".to_string()))?;
    let policy: ConflictPolicy = required(file, "conflict-policy")?
        .parse()
        .map_err(Error::InvalidConfig)?;
    let mut relations = BTreeSet::new();
    for token in required(file, "relations")?.split(',') {
        let token = token.trim();
        if !token.is_empty() {
            relations.insert(token.parse::<RelType>().map_err(Error::InvalidConfig)?);
        }
    }
    let fixed_point = match file.metadata.get("fixed-point") {
        Some(value) => Some(value.parse::<u32>().map_err(|_| {
            Error::InvalidConfig("unparseable fixed-point= header".to_string())
        })?),
        None => None,
    };
    let dropped_conflicts = match file.metadata.get("dropped-conflicts") {
        Some(value) => value.parse::<u32>().map_err(|_| {
            Error::InvalidConfig("unparseable dropped-conflicts= header".to_string())
        })?,
        None => 0,
    };
    if file.positive.is_empty() {
        return Err(Error::EmptySeeds("seed file has no positive rows".to_string()));
    }
    if file.negative.is_empty() {
        return Err(Error::EmptySeeds("seed file has no negative rows".to_string()));
    }
    Ok(SeedSet {
        method,
        iteration,
        policy,
        relations,
        positive: file.positive.clone(),
        negative: file.negative.clone(),
        fixed_point,
        dropped_conflicts,
    })
}

/// Reads a seed word list: one `lemma[#pos] <TAB> pos|neg` row per
/// line, `#`-prefixed lines and blank lines ignored.
pub fn read_seed_words(path: &Path) -> lexirank::Result<Vec<SeedWord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut words = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let (spec, polarity) = row.split_once('\t').ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            line,
            message: "expected <lemma[#pos]> <TAB> pos|neg".to_string(),
        })?;
        let polarity: Polarity = polarity.trim().parse().map_err(|e: String| Error::Format {
            path: path.to_path_buf(),
            line,
            message: e,
        })?;
        let word = SeedWord::parse(spec.trim(), polarity).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            line,
            message: e,
        })?;
        words.push(word);
    }
    if words.is_empty() {
        return Err(Error::EmptySeeds(format!(
            "seed word file {} has no entries",
            path.display()
        )));
    }
    Ok(words)
}

/// The projection graphs one assembly needs, shareable across jobs.
enum Assembly {
    Cross {
        syn: PropagationGraph,
        ant: PropagationGraph,
    },
    Single(PropagationGraph),
}

fn build_assembly(kb: &LexicalKb, variant: AssemblyVariant) -> Assembly {
    match variant.single_projection() {
        None => {
            let syn = kb.build_graph(GraphVariant::G1Syn);
            let ant = kb.build_graph_with(GraphVariant::G1Ant, syn.nodes().clone());
            Assembly::Cross { syn, ant }
        }
        Some(projection) => Assembly::Single(kb.build_graph(projection)),
    }
}

fn assemble_on(
    assembly: &Assembly,
    seeds: &SeedSet,
    ppv: &PpvConfig,
) -> lexirank::Result<PolarityLexicon> {
    match assembly {
        Assembly::Cross { syn, ant } => assemble_g1(syn, ant, seeds, ppv),
        Assembly::Single(graph) => assemble_single(graph, seeds, ppv),
    }
}

fn stamp_provenance(lexicon: &mut PolarityLexicon, kb: &LexicalKb, job: &JobSpec) {
    let provenance = kb.provenance();
    let m = &mut lexicon.metadata;
    m.insert("job".to_string(), job.name());
    m.insert("kb-digest".to_string(), provenance.digest.clone());
    m.insert("kb-format".to_string(), provenance.format.to_string());
    m.insert("kb-path".to_string(), provenance.path.clone());
}

/// Builds the lexicon for one assembly/level from an existing seed set.
pub fn build_lexicon(
    kb: &LexicalKb,
    variant: AssemblyVariant,
    level: Level,
    seeds: &SeedSet,
    ppv: &PpvConfig,
) -> lexirank::Result<PolarityLexicon> {
    let assembly = build_assembly(kb, variant);
    let lexicon = assemble_on(&assembly, seeds, ppv)?;
    match level {
        Level::Synset => Ok(lexicon),
        Level::Word => synset_to_word(&lexicon, kb),
    }
}

/// Runs one grid job end to end (seeds, propagation, assembly, level
/// conversion) against an in-memory knowledge base.
pub fn run_job(
    kb: &LexicalKb,
    job: &JobSpec,
    policy: ConflictPolicy,
    ppv: &PpvConfig,
) -> lexirank::Result<PolarityLexicon> {
    let seeds = generate_seeds(kb, job.method, job.iteration, policy, None, None, false)?;
    let mut lexicon = build_lexicon(kb, job.variant, job.level, &seeds, ppv)?;
    stamp_provenance(&mut lexicon, kb, job);
    Ok(lexicon)
}

/// A full single-run configuration: where the knowledge base lives,
/// which job to run on it, and where the lexicon goes. When
/// `seeds_file` is set the seed method and iteration come from that
/// file's headers and `method` may stay `None`.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub kb_path: PathBuf,
    pub format: Option<KbFormat>,
    /// Seed method; required unless `seeds_file` provides one.
    pub method: Option<SeedMethod>,
    pub iterations: u32,
    pub variant: AssemblyVariant,
    pub level: Level,
    pub policy: ConflictPolicy,
    pub ppv: PpvConfig,
    /// Use a precomputed seed file instead of generating seeds.
    pub seeds_file: Option<PathBuf>,
    /// Custom seed word list (word-list method only).
    pub seed_words: Option<Vec<SeedWord>>,
    /// Custom expansion relation set (attribute-walk method only).
    pub relations: Option<BTreeSet<RelType>>,
    /// Record unresolvable seed lemmas instead of failing.
    pub skip_missing_seeds: bool,
    pub out: PathBuf,
}

impl PipelineConfig {
    /// One-line echo of the configuration, used in error context.
    pub fn echo(&self) -> String {
        let seeds = match (&self.seeds_file, self.method) {
            (Some(path), _) => format!("seeds={}", path.display()),
            (None, Some(method)) => format!("method={} iterations={}", method, self.iterations),
            (None, None) => "method=?".to_string(),
        };
        format!(
            "{} level={} {} kb={} policy={} damping={} tolerance={:e}",
            self.variant,
            self.level,
            seeds,
            self.kb_path.display(),
            self.policy,
            self.ppv.damping,
            self.ppv.tolerance
        )
    }
}

/// What a pipeline run produced, plus human-readable progress lines.
#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub job: String,
    pub lexicon_path: PathBuf,
    pub entries: usize,
    pub log: Vec<String>,
}

/// Runs one configuration file-to-file: load the knowledge base,
/// obtain seeds, propagate and assemble, convert level, write the
/// lexicon. Every stage failure names the stage and echoes the
/// configuration.
pub fn run_pipeline(config: &PipelineConfig) -> PipelineResult<PipelineOutcome> {
    let echo = config.echo();
    let mut log = Vec::new();

    let (kb, warnings) = load_kb(&config.kb_path, config.format)?;
    log.push(format!(
        "loaded {} synsets, {} senses, {} relations from {}",
        kb.num_synsets(),
        kb.senses().len(),
        kb.relations().len(),
        config.kb_path.display()
    ));
    if !warnings.is_clean() {
        log.push(format!(
            "load warnings: {} unknown relation labels, {} self-loops dropped, {} unparseable lines",
            warnings.unknown_relation_labels,
            warnings.self_loops_dropped,
            warnings.unparseable_lines
        ));
    }

    let seeds = match (&config.seeds_file, config.method) {
        (Some(path), _) => {
            let file = stage("seeds", &echo, read_seeds(path))?;
            stage("seeds", &echo, seed_set_from_file(&file))?
        }
        (None, Some(method)) => stage(
            "seeds",
            &echo,
            generate_seeds(
                &kb,
                method,
                config.iterations,
                config.policy,
                config.relations.as_ref(),
                config.seed_words.as_deref(),
                config.skip_missing_seeds,
            ),
        )?,
        (None, None) => {
            return Err(PipelineError {
                stage: "seeds",
                context: echo,
                source: Error::InvalidConfig(
                    "a seed method or a seed file is required".to_string(),
                ),
            })
        }
    };
    log.push(format!(
        "seeds: {} positive, {} negative, {} conflicts dropped{}",
        seeds.positive.len(),
        seeds.negative.len(),
        seeds.dropped_conflicts,
        match seeds.fixed_point {
            Some(depth) => format!(", fixed point at depth {depth}"),
            None => String::new(),
        }
    ));

    let job = JobSpec {
        method: seeds.method,
        iteration: seeds.iteration,
        variant: config.variant,
        level: config.level,
    };
    let mut lexicon = stage(
        "propagate",
        &echo,
        build_lexicon(&kb, config.variant, config.level, &seeds, &config.ppv),
    )?;
    stamp_provenance(&mut lexicon, &kb, &job);
    if let Some(iterations) = lexicon.metadata.get("ppr-iterations") {
        log.push(format!("propagation iterations: {iterations}"));
    }

    stage(
        "write",
        &echo,
        write_lexicon_file(&lexicon, &config.out),
    )?;
    log.push(format!(
        "wrote {} {}-level entries to {}",
        lexicon.len(),
        lexicon.level,
        config.out.display()
    ));

    Ok(PipelineOutcome {
        job: job.name(),
        lexicon_path: config.out.clone(),
        entries: lexicon.len(),
        log,
    })
}

fn write_lexicon_file(lexicon: &PolarityLexicon, path: &Path) -> lexirank::Result<()> {
    let mut buf = Vec::new();
    write_lexicon(lexicon, &mut buf).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    fs::write(path, buf).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// The configuration grid for a sweep. Every dimension must be
/// non-empty and duplicate-free; the job count is the product of the
/// dimension sizes.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub methods: Vec<SeedMethod>,
    pub iterations: Vec<u32>,
    pub variants: Vec<AssemblyVariant>,
    pub levels: Vec<Level>,
    pub policy: ConflictPolicy,
    pub ppv: PpvConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> lexirank::Result<()> {
        fn check_dimension<T: PartialEq + fmt::Debug>(
            name: &str,
            values: &[T],
        ) -> lexirank::Result<()> {
            if values.is_empty() {
                return Err(Error::InvalidConfig(format!(
                    "sweep dimension {name} is empty"
                )));
            }
            for (index, value) in values.iter().enumerate() {
                if values[..index].contains(value) {
                    return Err(Error::InvalidConfig(format!(
                        "sweep dimension {name} repeats {value:?}"
                    )));
                }
            }
            Ok(())
        }
        check_dimension("methods", &self.methods)?;
        check_dimension("iterations", &self.iterations)?;
        check_dimension("variants", &self.variants)?;
        check_dimension("levels", &self.levels)?;
        self.ppv.validate()
    }

    pub fn job_count(&self) -> usize {
        self.methods.len() * self.iterations.len() * self.variants.len() * self.levels.len()
    }

    /// The grid in deterministic method → iteration → variant → level
    /// order.
    pub fn jobs(&self) -> Vec<JobSpec> {
        let mut jobs = Vec::with_capacity(self.job_count());
        for &method in &self.methods {
            for &iteration in &self.iterations {
                for &variant in &self.variants {
                    for &level in &self.levels {
                        jobs.push(JobSpec {
                            method,
                            iteration,
                            variant,
                            level,
                        });
                    }
                }
            }
        }
        jobs
    }
}

/// What one sweep job produced.
#[derive(Clone, Debug)]
pub struct SweepJobOutcome {
    pub lexicon_path: PathBuf,
    pub entries: usize,
    pub seeds_positive: usize,
    pub seeds_negative: usize,
    /// Test-set report (threshold tuned on dev), when a corpus pair was
    /// given.
    pub report: Option<EvalReport>,
}

/// One row of the sweep result table: the job, and either its outcome
/// or the error message that stopped it.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub job: JobSpec,
    pub outcome: std::result::Result<SweepJobOutcome, String>,
}

impl SweepRow {
    fn macro_f1(&self) -> Option<f64> {
        match &self.outcome {
            Ok(outcome) => outcome.report.as_ref().map(EvalReport::macro_f1),
            Err(_) => None,
        }
    }
}

/// All sweep rows, ranked: evaluated jobs by descending macro-F1 (name
/// breaks ties), unevaluated jobs by name, failures last.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub job_count: usize,
    pub evaluated: bool,
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# jobs={}", self.job_count)?;
        writeln!(f, "# evaluated={}", self.evaluated)?;
        let name_width = self
            .rows
            .iter()
            .map(|row| row.job.name().len())
            .chain(["config".len()])
            .max()
            .unwrap_or(6);
        if self.evaluated {
            writeln!(
                f,
                "{:name_width$}  {:>7}  {:>6}  {:>6}  {:>10}  {:>6}  {:>6}  {:>6}  {:>6}",
                "config", "entries", "seeds+", "seeds-", "threshold", "acc", "f1+", "f1-", "macroF1"
            )?;
        } else {
            writeln!(
                f,
                "{:name_width$}  {:>7}  {:>6}  {:>6}",
                "config", "entries", "seeds+", "seeds-"
            )?;
        }
        for row in &self.rows {
            let name = row.job.name();
            match &row.outcome {
                Ok(outcome) => match &outcome.report {
                    Some(report) => {
                        let threshold = report
                            .threshold
                            .map(|t| format!("{t:.6}"))
                            .unwrap_or_else(|| "-".to_string());
                        writeln!(
                            f,
                            "{:name_width$}  {:>7}  {:>6}  {:>6}  {:>10}  {:>6.4}  {:>6.4}  {:>6.4}  {:>6.4}",
                            name,
                            outcome.entries,
                            outcome.seeds_positive,
                            outcome.seeds_negative,
                            threshold,
                            report.accuracy(),
                            report.f1_pos(),
                            report.f1_neg(),
                            report.macro_f1()
                        )?;
                    }
                    None => writeln!(
                        f,
                        "{:name_width$}  {:>7}  {:>6}  {:>6}",
                        name, outcome.entries, outcome.seeds_positive, outcome.seeds_negative
                    )?,
                },
                Err(message) => {
                    writeln!(f, "{name:name_width$}  FAILED: {message}")?;
                }
            }
        }
        Ok(())
    }
}

/// Executes every job of the grid over one shared knowledge base, with
/// job-level parallelism bounded by `workers` (`None` = all available
/// cores). Each job writes its lexicon to `out_dir/<name>.lexicon.tsv`.
/// Individual job failures become table rows; the sweep itself only
/// fails on setup problems (invalid spec, unwritable output
/// directory).
pub fn run_sweep(
    kb: &LexicalKb,
    spec: &SweepSpec,
    eval: Option<(&[Document], &[Document])>,
    out_dir: &Path,
    workers: Option<usize>,
) -> PipelineResult<SweepReport> {
    stage("sweep", "spec", spec.validate())?;
    stage(
        "sweep",
        out_dir.display(),
        fs::create_dir_all(out_dir).map_err(|e| Error::Io {
            path: out_dir.to_path_buf(),
            source: e,
        }),
    )?;

    // Seeds depend only on (method, iteration): compute each pair once,
    // up front, and share across variants and levels.
    let mut seed_cache: BTreeMap<(SeedMethod, u32), std::result::Result<SeedSet, String>> =
        BTreeMap::new();
    for &method in &spec.methods {
        for &iteration in &spec.iterations {
            seed_cache.entry((method, iteration)).or_insert_with(|| {
                generate_seeds(kb, method, iteration, spec.policy, None, None, false)
                    .map_err(|e| format!("seeds: {e}"))
            });
        }
    }

    // Projections depend only on the assembly variant; build each once.
    let mut assemblies: BTreeMap<AssemblyVariant, Assembly> = BTreeMap::new();
    for &variant in &spec.variants {
        assemblies
            .entry(variant)
            .or_insert_with(|| build_assembly(kb, variant));
    }

    let jobs = spec.jobs();
    let pool = stage(
        "sweep",
        "worker pool",
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers.unwrap_or(0))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot build worker pool: {e}"))),
    )?;

    let mut rows: Vec<SweepRow> = pool.install(|| {
        jobs.par_iter()
            .map(|job| SweepRow {
                job: *job,
                outcome: execute_sweep_job(
                    kb,
                    &assemblies[&job.variant],
                    &seed_cache[&(job.method, job.iteration)],
                    job,
                    &spec.ppv,
                    eval,
                    out_dir,
                ),
            })
            .collect()
    });

    // Rank: evaluated rows by descending macro-F1 (name breaks ties),
    // unevaluated successes by name, failures last.
    rows.sort_by(|a, b| {
        let key = |row: &SweepRow| match (&row.outcome, row.macro_f1()) {
            (Ok(_), Some(_)) => 0,
            (Ok(_), None) => 1,
            (Err(_), _) => 2,
        };
        key(a)
            .cmp(&key(b))
            .then_with(|| match (a.macro_f1(), b.macro_f1()) {
                (Some(fa), Some(fb)) => fb.total_cmp(&fa),
                _ => std::cmp::Ordering::Equal,
            })
            .then_with(|| a.job.name().cmp(&b.job.name()))
    });

    Ok(SweepReport {
        job_count: jobs.len(),
        evaluated: eval.is_some(),
        rows,
    })
}

fn execute_sweep_job(
    kb: &LexicalKb,
    assembly: &Assembly,
    seeds: &std::result::Result<SeedSet, String>,
    job: &JobSpec,
    ppv: &PpvConfig,
    eval: Option<(&[Document], &[Document])>,
    out_dir: &Path,
) -> std::result::Result<SweepJobOutcome, String> {
    let seeds = seeds.as_ref().map_err(Clone::clone)?;
    let mut lexicon = assemble_on(assembly, seeds, ppv)
        .map_err(|e| format!("propagate: {e}"))?;
    if job.level == Level::Word {
        lexicon = synset_to_word(&lexicon, kb).map_err(|e| format!("convert: {e}"))?;
    }
    stamp_provenance(&mut lexicon, kb, job);

    let lexicon_path = out_dir.join(format!("{}.lexicon.tsv", job.name()));
    write_lexicon_file(&lexicon, &lexicon_path).map_err(|e| format!("write: {e}"))?;

    let report = match eval {
        Some((dev, test)) => Some(
            evaluate_documents(&lexicon, dev, test).map_err(|e| format!("eval: {e}"))?,
        ),
        None => None,
    };

    Ok(SweepJobOutcome {
        lexicon_path,
        entries: lexicon.len(),
        seeds_positive: seeds.positive.len(),
        seeds_negative: seeds.negative.len(),
        report,
    })
}

/// Parses an iteration argument: a number, an inclusive range (`0-4`
/// or `0..4`), or a comma-separated mix; values are sorted and
/// deduplicated.
pub fn parse_iterations(spec: &str) -> std::result::Result<Vec<u32>, String> {
    let mut out = BTreeSet::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(format!("empty element in iteration list {spec:?}"));
        }
        let bounds = part
            .split_once("..")
            .or_else(|| part.split_once('-'));
        match bounds {
            Some((low, high)) => {
                let low: u32 = low
                    .trim()
                    .parse()
                    .map_err(|_| format!("unparseable iteration bound in {part:?}"))?;
                let high: u32 = high
                    .trim()
                    .parse()
                    .map_err(|_| format!("unparseable iteration bound in {part:?}"))?;
                if low > high {
                    return Err(format!("empty iteration range {part:?}"));
                }
                out.extend(low..=high);
            }
            None => {
                out.insert(
                    part.parse()
                        .map_err(|_| format!("unparseable iteration {part:?}"))?,
                );
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn parse_comma_list<T, F>(
    spec: &str,
    what: &str,
    parse: F,
) -> std::result::Result<Vec<T>, String>
where
    T: Ord,
    F: Fn(&str) -> std::result::Result<T, String>,
{
    let mut out = BTreeSet::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(format!("empty element in {what} list {spec:?}"));
        }
        out.insert(parse(part)?);
    }
    Ok(out.into_iter().collect())
}

/// Parses a comma-separated method list (`ag`, `tl`).
pub fn parse_methods(spec: &str) -> std::result::Result<Vec<SeedMethod>, String> {
    parse_comma_list(spec, "method", str::parse)
}

/// Parses a comma-separated assembly list (`G1`–`G4`).
pub fn parse_variants(spec: &str) -> std::result::Result<Vec<AssemblyVariant>, String> {
    parse_comma_list(spec, "variant", str::parse)
}

/// Parses a comma-separated level list (`synset`/`s`, `word`/`w`).
pub fn parse_levels(spec: &str) -> std::result::Result<Vec<Level>, String> {
    parse_comma_list(spec, "level", |token| match token {
        "s" => Ok(Level::Synset),
        "w" => Ok(Level::Word),
        other => other.parse(),
    })
}
