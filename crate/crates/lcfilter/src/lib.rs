//! File handling, text and JSON output, and the command-line front end for
//! [`lcfilter_core`].

pub mod cli;
pub mod render;

use std::fs;
use std::io;
use std::path::Path;

pub use lcfilter_core as core;
use lcfilter_core::{load_grammar, Grammar, GrammarError};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Grammar { path: String, source: GrammarError },
}

pub fn read_grammar(path: &Path) -> Result<Grammar, LoadError> {
    let text = read(path)?;
    load_grammar(&text).map_err(|source| LoadError::Grammar { path: path.display().to_string(), source })
}

/// One sentence per non-blank line, split on whitespace. Lines starting
/// with `#` are skipped.
pub fn read_corpus(path: &Path) -> Result<Vec<Vec<String>>, LoadError> {
    Ok(parse_corpus(&read(path)?))
}

pub fn parse_corpus(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect()
}

fn read(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}
