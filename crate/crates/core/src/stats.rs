//! Edge counts for the three parsing modes over a corpus.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::grammar::Grammar;
use crate::parser::{parse, ParseError, ParseOptions, ParseStats};
use crate::precompile::{compile_table, CompileError, CompileOptions, Compiled, ReachabilityTable};
use crate::dag::Restrictor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// No top-down filtering.
    BottomUp,
    /// Filtering on categories only.
    CategoryOnly,
    /// Filtering with the table and its per-path restrictors.
    Filtered,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::BottomUp, Mode::CategoryOnly, Mode::Filtered];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::BottomUp => "bottom-up",
            Mode::CategoryOnly => "category-only",
            Mode::Filtered => "filtered",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| alloc::format!("unknown mode {s:?}"))
    }
}

/// The table that runs with every feature except `cat` restricted.
pub fn category_table(grammar: &Grammar) -> Result<Compiled, CompileError> {
    let options = CompileOptions {
        static_restrictor: Some(Restrictor::all_but_category(&grammar.features)),
        ..CompileOptions::default()
    };
    compile_table(grammar, &options)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeRun {
    pub mode: Mode,
    pub outcome: Result<(ParseStats, usize), ParseError>,
}

impl ModeRun {
    pub fn edges_entered(&self) -> Option<usize> {
        self.outcome.as_ref().ok().map(|(s, _)| s.edges_entered)
    }

    pub fn parses(&self) -> Option<usize> {
        self.outcome.as_ref().ok().map(|&(_, n)| n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceComparison {
    pub tokens: Vec<String>,
    /// One run per mode, in [`Mode::ALL`] order.
    pub runs: Vec<ModeRun>,
}

impl SentenceComparison {
    pub fn run(&self, mode: Mode) -> &ModeRun {
        self.runs.iter().find(|r| r.mode == mode).expect("every mode is run")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub sentences: Vec<SentenceComparison>,
}

impl ComparisonReport {
    /// Edges entered over all sentences that parsed without error in every
    /// mode.
    pub fn total_edges(&self, mode: Mode) -> usize {
        self.complete().map(|s| s.run(mode).edges_entered().unwrap_or(0)).sum()
    }

    /// Percentage of `base` edges that `mode` avoids.
    pub fn reduction(&self, mode: Mode, base: Mode) -> Option<f64> {
        let b = self.total_edges(base);
        (b > 0).then(|| 100.0 * (b as f64 - self.total_edges(mode) as f64) / b as f64)
    }

    pub fn errors(&self) -> usize {
        self.sentences.len() - self.complete().count()
    }

    fn complete(&self) -> impl Iterator<Item = &SentenceComparison> {
        self.sentences.iter().filter(|s| s.runs.iter().all(|r| r.outcome.is_ok()))
    }
}

/// Parses every sentence in each mode. `compiled` is the full table; the
/// category table is built here.
pub fn stats_compare<S: AsRef<str>>(
    grammar: &Grammar,
    compiled: &Compiled,
    corpus: &[Vec<S>],
    options: &ParseOptions,
) -> Result<ComparisonReport, CompileError> {
    let categories = category_table(grammar)?;
    let table_for = |mode: Mode| -> Option<&ReachabilityTable> {
        match mode {
            Mode::BottomUp => None,
            Mode::CategoryOnly => Some(&categories.table),
            Mode::Filtered => Some(&compiled.table),
        }
    };
    let sentences = corpus
        .iter()
        .map(|tokens| SentenceComparison {
            tokens: tokens.iter().map(|t| t.as_ref().into()).collect(),
            runs: Mode::ALL
                .into_iter()
                .map(|mode| ModeRun {
                    mode,
                    outcome: parse(grammar, table_for(mode), tokens, options)
                        .map(|r| (r.stats, r.parses.len())),
                })
                .collect(),
        })
        .collect();
    Ok(ComparisonReport { sentences })
}
