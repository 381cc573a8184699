//! lexirank induces positive/negative polarity lexicons from a lexical
//! knowledge base (a WordNet-style database) in three stages:
//!
//! 1. **Seeds** ([`seedgen`]): collect synsets of known polarity, either
//!    from the *quality* attribute structure (`ag`) or from a 14-word
//!    list resolved through most-frequent senses (`tl`), optionally
//!    expanded a few steps across selected relations (antonymy flips
//!    polarity).
//! 2. **Propagation** ([`ppv`]): spread each seed set over an undirected
//!    graph projection of the KB ([`lkb::GraphVariant`]) with personalized
//!    PageRank.
//! 3. **Combination** ([`lexicon`]): per synset, sum the positive-side
//!    ranks and subtract the negative-side ranks; the sign decides
//!    membership. Synset lexicons convert to word lexicons and back.
//!
//! The [`eval`] module scores lexicons on labeled documents (average
//! polarity ratio with a tuned threshold), on phrases (negative-dominance
//! rules), and against gold word lists.

pub mod error;
pub mod eval;
pub mod lexicon;
pub mod lkb;
pub mod ppv;
pub mod seedgen;

pub use error::{Error, Result};
pub use eval::{AnnotatedToken, Document, EvalReport};
pub use lexicon::{Level, LexiconKey, PolarityLexicon, WordKey};
pub use lkb::{
    parse_lkb, GraphVariant, KbFormat, LexicalKb, LoadWarnings, NodeIndex, Pos, PropagationGraph,
    Provenance, RelType, Relation, SenseEntry, SynsetId,
};
pub use ppv::{PersonalizationVector, PpvConfig, RankVector};
pub use seedgen::{ConflictPolicy, Polarity, RawSeeds, SeedMethod, SeedSet, SeedWord};
