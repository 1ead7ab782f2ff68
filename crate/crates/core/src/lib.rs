//! Non-overlapping q-gram frequencies of grammar-compressed texts.
//!
//! A text is given as a straight-line program ([`Slp`]). [`count_qgrams`]
//! reports, for every q-gram of the text, the largest number of pairwise
//! non-overlapping occurrences, working on the grammar and `O(q)`-symbol
//! contexts of each rule rather than on the expanded text. [`oracle_count`]
//! computes the same report by expansion and is used to check it.

pub mod builders;
pub mod covers;
mod dp;
pub mod error;
pub mod occdp;
pub mod oracle;
pub mod pipeline;
pub mod slp;
pub mod textalg;

pub use builders::{build_balanced, build_pairs, fibonacci};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use oracle::{exhaustive_nocc, oracle_count};
pub use pipeline::{count_qgrams, FreqReport};
pub use slp::{compute_meta, expand, parse_slp, Meta, Rule, Slp, Symbol};
pub use textalg::Cover;
