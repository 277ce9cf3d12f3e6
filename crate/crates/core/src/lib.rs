//! Unification-grammar machinery that runs without `std`.
//!
//! The crate has four layers:
//!
//! * [`dag`]: acyclic feature structures with coreference by node sharing,
//!   together with unification, subsumption, extraction, embedding and
//!   restriction.
//! * [`grammar`]: a small PATR-style grammar format and the compilation of
//!   each rule into a rule dag whose constituents hang off numbered arcs.
//! * [`precompile`]: the left-corner reachability table. Left-recursive
//!   propagation loops are cut by restrictors that are computed per
//!   propagation path, so only the features that actually drive a loop are
//!   dropped from top-down predictions.
//! * [`parser`] and [`stats`]: a left-corner chart parser that filters rule
//!   applications through the table, and the edge-count comparison between
//!   bottom-up, category-only and fully filtered parsing.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod dag;
pub mod grammar;
pub mod parser;
pub mod precompile;
pub mod stats;

pub use dag::{Atom, Constraint, DagBuilder, Feature, FeatureDag, Path, Restrictor};
pub use grammar::{load_grammar, Category, Grammar, GrammarError, LexEntry, Rule, RuleId};
pub use parser::{parse, ParseError, ParseOptions, ParseResult, ParseStats};
pub use precompile::{
    compile_table, CompileError, CompileOptions, CompileReport, Compiled, Insertion,
    PathKey, ReachabilityTable, RestrictorLedger, TableEntry,
};
pub use stats::{stats_compare, ComparisonReport, Mode};
