//! Error type shared across the crate.
//!
//! Errors fall into three families that callers (in particular the CLI)
//! treat differently:
//!
//! * input problems — missing files, malformed content, integrity
//!   violations, unusable knowledge bases;
//! * configuration problems — parameter values or input combinations that
//!   cannot be computed with;
//! * numerical problems — power iteration failing to converge.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A file or directory could not be read or written.
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A line of an input file does not follow its format.
    #[error("{path}:{line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Cross-reference checks on a knowledge base failed (for example a
    /// relation endpoint that is not a declared synset). `offenders` lists
    /// at most the first ten violations out of `total`.
    #[error("integrity check failed: {message} ({total} total, showing {n}): {offenders:?}", n = offenders.len())]
    Integrity {
        message: String,
        offenders: Vec<String>,
        total: usize,
    },

    /// The knowledge base lacks structure a seed method requires (for
    /// example no quality noun synsets with attribute relations).
    #[error("knowledge base not usable for this operation: {0}")]
    UnsupportedKb(String),

    /// A seed lemma could not be resolved to any synset.
    #[error("seed lemma not found in knowledge base: {lemma:?}")]
    SeedLemma { lemma: String },

    /// A seed polarity side ended up empty.
    #[error("no usable seeds: {0}")]
    EmptySeeds(String),

    /// Parameter values or input combinations that cannot be computed with
    /// (mismatched node spaces, level mismatches, out-of-range numerics).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Power iteration did not reach the requested tolerance.
    #[error(
        "no convergence after {iterations} iterations: residual {residual:e} > tolerance {tolerance:e}"
    )]
    NonConvergence {
        iterations: u32,
        residual: f64,
        tolerance: f64,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Builds an integrity error from the full offender list, keeping only
    /// the first ten for display.
    pub(crate) fn integrity(message: impl Into<String>, offenders: Vec<String>) -> Self {
        let total = offenders.len();
        let mut shown = offenders;
        shown.truncate(10);
        Error::Integrity {
            message: message.into(),
            offenders: shown,
            total,
        }
    }
}
