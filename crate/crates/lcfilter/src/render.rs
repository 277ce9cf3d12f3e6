//! Deterministic text and JSON renderings.
//!
//! Nothing here depends on timing or hash order, so the same inputs always
//! produce byte-identical output.

use std::fmt::Write;

use lcfilter_core::precompile::{CompileReport, DetectionEvent};
use lcfilter_core::stats::ModeRun;
use lcfilter_core::{ComparisonReport, Compiled, FeatureDag, Mode, ParseResult, ReachabilityTable, RestrictorLedger};
use serde::Serialize;

/// One block per entry: goal and rule chain, the restrictor in force, then
/// the sorted constraints.
pub fn table(table: &ReachabilityTable) -> String {
    let mut out = String::new();
    for (i, e) in table.sorted_entries().into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let chain: Vec<&str> = e.chain.iter().map(|r| r.as_str()).collect();
        writeln!(out, "entry {} [{}]", e.goal, chain.join(",")).unwrap();
        writeln!(out, "  restrictor {}", e.restrictor).unwrap();
        for c in e.dag.constraints() {
            writeln!(out, "  {c}").unwrap();
        }
    }
    out
}

pub fn ledger(ledger: &RestrictorLedger) -> String {
    let mut out = String::new();
    for (key, r) in ledger.iter() {
        writeln!(out, "{key} {r}").unwrap();
    }
    out
}

fn event(e: &DetectionEvent) -> String {
    match &e.detection {
        None => format!("{} {}: nothing left to restrict", e.key, e.relation),
        Some(d) => {
            let mut line = format!("{} {}: {} by {}", e.key, e.relation, d.feature, d.rule);
            if !d.path.is_empty() {
                write!(line, " at {}", d.path).unwrap();
            }
            if let Some(t) = &d.trigger {
                write!(line, " from {t}").unwrap();
            }
            if !e.added {
                line.push_str(" (already restricted)");
            }
            line
        }
    }
}

pub fn report(report: &CompileReport) -> String {
    let mut out = String::new();
    writeln!(out, "resolutions {}", report.resolutions).unwrap();
    writeln!(out, "iterations {} (most for one cycle {}, limit {})", report.iterations, report.max_resolution_iterations, report.guard).unwrap();
    writeln!(out, "propagation steps {}", report.expansions).unwrap();
    writeln!(out, "detections {} (fallback {})", report.events.len(), report.fallbacks().count()).unwrap();
    for e in &report.events {
        writeln!(out, "  {}", event(e)).unwrap();
    }
    out
}

pub fn compiled(c: &Compiled) -> String {
    format!(
        "# table ({} entries)\n{}\n# restrictors\n{}\n# report\n{}",
        c.table.len(),
        table(&c.table),
        ledger(&c.ledger),
        report(&c.report)
    )
}

pub fn dag(d: &FeatureDag) -> String {
    d.constraints().iter().map(|c| format!("  {c}\n")).collect()
}

pub fn parse_result(result: &ParseResult, mode: Mode) -> String {
    let mut out = String::new();
    for (i, d) in result.parses.iter().enumerate() {
        writeln!(out, "parse {}", i + 1).unwrap();
        out.push_str(&dag(d));
    }
    let s = result.stats;
    writeln!(
        out,
        "{} parse(s), mode {mode}: {} edges entered, {} filtered, {} unifications",
        result.parses.len(),
        s.edges_entered,
        s.edges_filtered,
        s.unifications_attempted
    )
    .unwrap();
    out
}

fn cell(run: &ModeRun) -> String {
    match &run.outcome {
        Ok((stats, _)) => stats.edges_entered.to_string(),
        Err(_) => "error".into(),
    }
}

fn percent(p: Option<f64>) -> String {
    p.map_or_else(|| "n/a".into(), |p| format!("{p:.1}%"))
}

/// Edges entered per sentence and mode, totals, and the reductions of the
/// filtered mode.
pub fn comparison(report: &ComparisonReport) -> String {
    let width = report.sentences.iter().map(|s| s.tokens.join(" ").len()).max().unwrap_or(0).max(8);
    let mut out = String::new();
    write!(out, "{:width$}", "sentence").unwrap();
    for m in Mode::ALL {
        write!(out, "  {:>13}", m.as_str()).unwrap();
    }
    writeln!(out, "  {:>6}", "parses").unwrap();
    for s in &report.sentences {
        write!(out, "{:width$}", s.tokens.join(" ")).unwrap();
        for m in Mode::ALL {
            write!(out, "  {:>13}", cell(s.run(m))).unwrap();
        }
        let counts: Vec<Option<usize>> = Mode::ALL.iter().map(|&m| s.run(m).parses()).collect();
        let parses = match counts[0] {
            Some(n) if counts.iter().all(|c| *c == Some(n)) => n.to_string(),
            _ => counts.iter().map(|c| c.map_or("-".into(), |n| n.to_string())).collect::<Vec<_>>().join("/"),
        };
        writeln!(out, "  {parses:>6}").unwrap();
    }
    write!(out, "{:width$}", "total").unwrap();
    for m in Mode::ALL {
        write!(out, "  {:>13}", report.total_edges(m)).unwrap();
    }
    out.push('\n');
    for (_, s) in report.sentences.iter().enumerate().filter(|(_, s)| s.runs.iter().any(|r| r.outcome.is_err())) {
        for r in &s.runs {
            if let Err(e) = &r.outcome {
                writeln!(out, "error: {:?} ({}): {e}", s.tokens.join(" "), r.mode).unwrap();
            }
        }
    }
    writeln!(
        out,
        "filtered vs category-only: {} fewer edges",
        percent(report.reduction(Mode::Filtered, Mode::CategoryOnly))
    )
    .unwrap();
    writeln!(out, "filtered vs bottom-up: {} fewer edges", percent(report.reduction(Mode::Filtered, Mode::BottomUp)))
        .unwrap();
    out
}

#[derive(Serialize)]
struct Record<'a> {
    tokens: &'a [String],
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges_entered: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parses: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

/// JSON lines, one record per sentence and mode.
pub fn comparison_records(report: &ComparisonReport) -> String {
    let mut out = String::new();
    for s in &report.sentences {
        for run in &s.runs {
            let record = Record {
                tokens: &s.tokens,
                mode: run.mode.as_str(),
                edges_entered: run.edges_entered(),
                parses: run.parses(),
                error: run.outcome.as_ref().err().map(ToString::to_string),
            };
            out.push_str(&serde_json::to_string(&record).expect("records serialise"));
            out.push('\n');
        }
    }
    out
}
