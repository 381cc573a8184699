//! Orchestration layer for the `lexirank` binary: single pipeline runs
//! (knowledge base → seeds → propagation → lexicon file) and
//! configuration sweeps over the method × iteration × assembly × level
//! grid, with job-level parallelism and macro-F1-ranked result tables.

pub mod pipeline;

pub use pipeline::{
    build_lexicon, generate_seeds, load_kb, parse_iterations, parse_levels, parse_methods,
    parse_variants, read_seed_words, run_job, run_pipeline, run_sweep, seed_set_from_file,
    AssemblyVariant, JobSpec, PipelineConfig, PipelineError, PipelineOutcome, PipelineResult,
    SweepJobOutcome, SweepReport, SweepRow, SweepSpec,
};
