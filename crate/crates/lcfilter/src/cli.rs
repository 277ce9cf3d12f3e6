//! Command-line front end.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcfilter_core::stats::category_table;
use lcfilter_core::{
    compile_table, parse, stats_compare, CompileError, CompileOptions, Compiled, Grammar, Mode, ParseError,
    ParseOptions,
};

use crate::{read_corpus, read_grammar, render, LoadError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NO_PARSE: u8 = 1;
pub const EXIT_GRAMMAR: u8 = 2;
pub const EXIT_PARSE_ERROR: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_GUARD: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "lcfilter", version, about = "Left-corner parsing with a precompiled reachability filter")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile the reachability table and print it with the restrictors and the compile report.
    Compile(CompileArgs),
    /// Print only the table entries.
    DumpTable(DumpArgs),
    /// Parse one sentence.
    Parse(ParseArgs),
    /// Parse a corpus in every mode and compare edge counts.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write output to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Redo passes allowed per cycle resolution [default: features x rules x 4].
    #[arg(long)]
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    pub grammar: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DumpArgs {
    pub grammar: PathBuf,
    /// Which table to dump.
    #[arg(long, value_enum, default_value_t = ModeArg::Filtered)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    pub grammar: PathBuf,
    /// The sentence, one token per argument or whitespace-separated.
    #[arg(required = true, num_args = 1..)]
    pub sentence: Vec<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Filtered)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub grammar: PathBuf,
    /// One sentence per line, whitespace-tokenised.
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    BottomUp,
    CategoryOnly,
    Filtered,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::BottomUp => Mode::BottomUp,
            ModeArg::CategoryOnly => Mode::CategoryOnly,
            ModeArg::Filtered => Mode::Filtered,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// A failure that ends the command, with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Failure {
        let code = match e {
            LoadError::Io { .. } => EXIT_IO,
            LoadError::Grammar { .. } => EXIT_GRAMMAR,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Failure {
        let code = match e {
            CompileError::NonTermination { .. } => EXIT_GUARD,
            CompileError::Step(_) => EXIT_GRAMMAR,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Runs a parsed command line. Results go to `out` (or the `--out` file),
/// diagnostics and timing to `err`. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let started = Instant::now();
    let result = match cli.command {
        Command::Compile(a) => compile(&a).and_then(|text| emit(&a.common, text, out).map(|()| EXIT_OK)),
        Command::DumpTable(a) => dump(&a).and_then(|text| emit(&a.common, text, out).map(|()| EXIT_OK)),
        Command::Parse(a) => {
            parse_sentence(&a).and_then(|(text, code)| emit(&a.common, text, out).map(|()| code))
        }
        Command::Compare(a) => compare(&a).and_then(|text| emit(&a.common, text, out).map(|()| EXIT_OK)),
    };
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    };
    let _ = writeln!(err, "elapsed {:.3}s", started.elapsed().as_secs_f64());
    code
}

fn options(common: &Common) -> CompileOptions {
    CompileOptions { max_iterations: common.max_iterations, ..CompileOptions::default() }
}

fn table_for(grammar: &Grammar, mode: Mode, common: &Common) -> Result<Option<Compiled>, Failure> {
    Ok(match mode {
        Mode::BottomUp => None,
        Mode::CategoryOnly => Some(category_table(grammar)?),
        Mode::Filtered => Some(compile_table(grammar, &options(common))?),
    })
}

fn compile(a: &CompileArgs) -> Result<String, Failure> {
    let grammar = read_grammar(&a.grammar)?;
    let compiled = compile_table(&grammar, &options(&a.common))?;
    Ok(render::compiled(&compiled))
}

fn dump(a: &DumpArgs) -> Result<String, Failure> {
    let grammar = read_grammar(&a.grammar)?;
    match table_for(&grammar, a.mode.into(), &a.common)? {
        Some(c) => Ok(render::table(&c.table)),
        None => Err(Failure { code: EXIT_GRAMMAR, message: "bottom-up parsing uses no table".into() }),
    }
}

fn parse_sentence(a: &ParseArgs) -> Result<(String, u8), Failure> {
    let grammar = read_grammar(&a.grammar)?;
    let mode = Mode::from(a.mode);
    let compiled = table_for(&grammar, mode, &a.common)?;
    let tokens: Vec<&str> = a.sentence.iter().flat_map(|s| s.split_whitespace()).collect();
    match parse(&grammar, compiled.as_ref().map(|c| &c.table), &tokens, &ParseOptions::default()) {
        Ok(result) => {
            let code = if result.parses.is_empty() { EXIT_NO_PARSE } else { EXIT_OK };
            Ok((render::parse_result(&result, mode), code))
        }
        Err(e @ (ParseError::UnknownToken { .. } | ParseError::EdgeLimit { .. })) => {
            Err(Failure { code: EXIT_PARSE_ERROR, message: e.to_string() })
        }
    }
}

fn compare(a: &CompareArgs) -> Result<String, Failure> {
    let grammar = read_grammar(&a.grammar)?;
    let corpus = read_corpus(&a.corpus)?;
    let compiled = compile_table(&grammar, &options(&a.common))?;
    let report = stats_compare(&grammar, &compiled, &corpus, &ParseOptions::default())?;
    Ok(match a.format {
        Format::Text => render::comparison(&report),
        Format::Structured => render::comparison_records(&report),
    })
}

fn emit(common: &Common, text: String, out: &mut dyn Write) -> Result<(), Failure> {
    let io_failure = |path: &Path, e: io::Error| Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) };
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}
