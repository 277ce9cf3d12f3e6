//! Left-corner chart parsing with optional top-down filtering.
//!
//! Tokens are consumed left to right. A completed constituent either
//! finishes the next daughter of an active edge that ends where it starts,
//! or is taken as the left corner of a new rule. Without a table every such
//! rule is tried. With a table, the rule must be reachable from some goal at
//! that position: a table entry for the goal's category has to unify with
//! the goal's (restricted) features and with the rule instantiated by the
//! corner.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::dag::{Feature, FeatureDag, Path};
use crate::grammar::Grammar;
use crate::precompile::{lc_path, ReachabilityTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Abort once this many edges have been entered.
    pub max_edges: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { max_edges: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseStats {
    /// Edges accepted into the chart, lexical edges included.
    pub edges_entered: usize,
    /// Rule applications refused by the table.
    pub edges_filtered: usize,
    pub unifications_attempted: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseResult {
    /// Distinct dags of complete constituents of the start category
    /// spanning the whole input, in canonical order.
    pub parses: Vec<FeatureDag>,
    pub stats: ParseStats,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unknown token {form:?} at position {position}")]
    UnknownToken { form: String, position: usize },
    #[error("more than {limit} edges")]
    EdgeLimit { limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeState {
    Passive,
    /// Daughters `1..next` are found; `next` is wanted.
    Active { rule: usize, next: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub start: usize,
    pub end: usize,
    pub state: EdgeState,
    /// The constituent for a passive edge, the partly instantiated rule dag
    /// for an active one.
    pub dag: FeatureDag,
}

struct Chart<'a> {
    grammar: &'a Grammar,
    table: Option<&'a ReachabilityTable>,
    options: ParseOptions,
    edges: Vec<Edge>,
    seen: BTreeSet<Edge>,
    passive_from: Vec<Vec<usize>>,
    active_to: Vec<Vec<usize>>,
    /// Goal dags wanted at each position, deduplicated.
    goals: Vec<BTreeSet<FeatureDag>>,
    agenda: VecDeque<usize>,
    stats: ParseStats,
}

/// Parses `tokens`. `table` switches on top-down filtering.
pub fn parse<S: AsRef<str>>(
    grammar: &Grammar,
    table: Option<&ReachabilityTable>,
    tokens: &[S],
    options: &ParseOptions,
) -> Result<ParseResult, ParseError> {
    let mut words = Vec::with_capacity(tokens.len());
    for (position, t) in tokens.iter().enumerate() {
        let form = t.as_ref();
        match grammar.lexicon.get(form) {
            Some(entries) => words.push(entries),
            None => return Err(ParseError::UnknownToken { form: form.into(), position }),
        }
    }
    let n = tokens.len();
    let mut chart = Chart {
        grammar,
        table,
        options: *options,
        edges: Vec::new(),
        seen: BTreeSet::new(),
        passive_from: alloc::vec![Vec::new(); n + 1],
        active_to: alloc::vec![Vec::new(); n + 1],
        goals: alloc::vec![BTreeSet::new(); n + 1],
        agenda: VecDeque::new(),
        stats: ParseStats::default(),
    };
    chart.goals[0].insert(category_dag(grammar));

    for (i, entries) in words.iter().enumerate() {
        for entry in entries.iter() {
            chart.add(Edge { start: i, end: i + 1, state: EdgeState::Passive, dag: entry.dag.clone() })?;
        }
        while let Some(id) = chart.agenda.pop_front() {
            chart.process(id)?;
        }
    }

    let mut parses: Vec<FeatureDag> = chart
        .passive_from
        .first()
        .into_iter()
        .flatten()
        .map(|&id| &chart.edges[id])
        .filter(|e| e.end == n && e.dag.category() == Some(&grammar.start))
        .map(|e| e.dag.clone())
        .collect();
    parses.sort();
    parses.dedup();
    Ok(ParseResult { parses, stats: chart.stats })
}

fn category_dag(grammar: &Grammar) -> FeatureDag {
    FeatureDag::atom(grammar.start.clone()).embed(&Path::from(alloc::vec![Feature::category()]))
}

fn daughter(k: usize) -> Path {
    Path::from(alloc::vec![Feature::numbered(k)])
}

impl Chart<'_> {
    fn add(&mut self, edge: Edge) -> Result<(), ParseError> {
        if self.seen.contains(&edge) {
            return Ok(());
        }
        self.stats.edges_entered += 1;
        if self.stats.edges_entered > self.options.max_edges {
            return Err(ParseError::EdgeLimit { limit: self.options.max_edges });
        }
        let id = self.edges.len();
        match edge.state {
            EdgeState::Passive => self.passive_from[edge.start].push(id),
            EdgeState::Active { next, .. } => {
                self.active_to[edge.end].push(id);
                if self.table.is_some() {
                    if let Some(goal) = edge.dag.extract(&daughter(next)) {
                        self.goals[edge.end].insert(goal);
                    }
                }
            }
        }
        self.seen.insert(edge.clone());
        self.edges.push(edge);
        self.agenda.push_back(id);
        Ok(())
    }

    fn process(&mut self, id: usize) -> Result<(), ParseError> {
        let edge = self.edges[id].clone();
        match edge.state {
            EdgeState::Passive => {
                let actives = self.active_to[edge.start].clone();
                for a in actives {
                    let active = self.edges[a].clone();
                    self.complete(&active, &edge)?;
                }
                self.predict(&edge)?;
            }
            EdgeState::Active { .. } => {
                let passives = self.passive_from[edge.end].clone();
                for p in passives {
                    let passive = self.edges[p].clone();
                    self.complete(&edge, &passive)?;
                }
            }
        }
        Ok(())
    }

    fn complete(&mut self, active: &Edge, passive: &Edge) -> Result<(), ParseError> {
        let EdgeState::Active { rule, next } = active.state else { unreachable!() };
        if self.grammar.rules[rule].rhs[next - 1] != *passive.dag.category().expect("constituents have a category")
        {
            return Ok(());
        }
        self.stats.unifications_attempted += 1;
        if let Some(dag) = active.dag.unify(&passive.dag.embed(&daughter(next))) {
            self.advance(active.start, passive.end, rule, next, dag)?;
        }
        Ok(())
    }

    fn predict(&mut self, corner: &Edge) -> Result<(), ParseError> {
        let category = corner.dag.category().expect("constituents have a category").clone();
        let candidates: Vec<usize> = self.grammar.rules_with_left_corner(&category).collect();
        let embedded = corner.dag.embed(&daughter(1));
        for r in candidates {
            self.stats.unifications_attempted += 1;
            let Some(dag) = self.grammar.rules[r].dag().unify(&embedded) else { continue };
            if !self.reachable(corner.start, r, &dag) {
                self.stats.edges_filtered += 1;
                continue;
            }
            self.advance(corner.start, corner.end, r, 1, dag)?;
        }
        Ok(())
    }

    /// Whether some goal at `position` licenses rule `r` instantiated as
    /// `dag`.
    fn reachable(&mut self, position: usize, r: usize, dag: &FeatureDag) -> bool {
        let Some(table) = self.table else { return true };
        let lhs = &self.grammar.rules[r].lhs;
        let under_lc = dag.embed(&lc_path());
        for goal in &self.goals[position] {
            let Some(category) = goal.category() else { continue };
            for entry in table.row(category) {
                if &self.grammar.rules[entry.rule].lhs != lhs {
                    continue;
                }
                self.stats.unifications_attempted += 1;
                let fits = entry
                    .dag
                    .unify(&goal.restrict(&entry.restrictor))
                    .and_then(|d| d.unify(&under_lc))
                    .is_some();
                if fits {
                    return true;
                }
            }
        }
        false
    }

    fn advance(&mut self, start: usize, end: usize, rule: usize, found: usize, dag: FeatureDag) -> Result<(), ParseError> {
        if found == self.grammar.rules[rule].arity() {
            let dag = dag.without_constituents();
            self.add(Edge { start, end, state: EdgeState::Passive, dag })
        } else {
            self.add(Edge { start, end, state: EdgeState::Active { rule, next: found + 1 }, dag })
        }
    }
}
