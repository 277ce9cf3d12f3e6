//! Compilation of the left-corner reachability table.
//!
//! Each table dag has the goal's features at the root and a rule dag under
//! `lc`; sharing between the two records which goal constraints reach that
//! rule. Propagation follows left corners downward one rule at a time. When
//! a path returns to a rule it has already used, the dag found there is
//! compared with the one from the earlier visit, and features are added to
//! the path's restrictor until the earlier dag covers every later one.

mod detect;
mod step;
mod table;

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use crate::dag::{FeatureDag, Restrictor};
use crate::grammar::{Category, Grammar, RuleId};

pub use detect::{detect, detect_with, Detection, DetectionRule};
pub use step::{left_corner_category, promote, propagate_step, seed_entry, StepError};
pub use table::{Insertion, PathKey, ReachabilityTable, RestrictorLedger, TableEntry};

pub(crate) use step::lc_path;

#[derive(Clone, Debug, Default)]
pub struct CompileOptions {
    /// Iteration bound for resolving one cycle. Defaults to
    /// `|features| × |rules| × 4`.
    pub max_iterations: Option<usize>,
    /// Features removed on every propagation step, in addition to the
    /// per-path restrictors. With every feature but `cat` this yields the
    /// plain category table.
    pub static_restrictor: Option<Restrictor>,
}

/// How the later dag on a cycle relates to the earlier one when it is not
/// covered by it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Incompatible,
    /// Compatible, but neither subsumes the other.
    Unordered,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Incompatible => "incompatible",
            Relation::Unordered => "unordered",
        })
    }
}

#[derive(Clone, Debug)]
pub struct DetectionEvent {
    pub key: PathKey,
    pub relation: Relation,
    /// `None` when nothing is left to restrict.
    pub detection: Option<Detection>,
    /// Whether the ledger entry for `key` grew.
    pub added: bool,
}

#[derive(Clone, Debug, Default)]
pub struct CompileReport {
    pub events: Vec<DetectionEvent>,
    /// Cycles where the earlier dag did not cover the later one.
    pub resolutions: usize,
    /// Redo passes over all resolutions.
    pub iterations: usize,
    /// The most redo passes any single resolution needed.
    pub max_resolution_iterations: usize,
    /// Propagation steps attempted.
    pub expansions: usize,
    /// The iteration bound in force.
    pub guard: usize,
}

impl CompileReport {
    pub fn fallbacks(&self) -> impl Iterator<Item = &DetectionEvent> {
        self.events.iter().filter(|e| e.detection.as_ref().is_some_and(|d| d.rule.is_fallback()))
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub table: ReachabilityTable,
    pub ledger: RestrictorLedger,
    pub report: CompileReport,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("no fixpoint for path {key} after {iterations} iterations (limit {limit})")]
    NonTermination { key: PathKey, iterations: usize, limit: usize },
    #[error(transparent)]
    Step(#[from] StepError),
}

/// Builds the reachability table for every category that is a left-hand
/// side or a left corner.
pub fn compile_table(grammar: &Grammar, options: &CompileOptions) -> Result<Compiled, CompileError> {
    let guard = options
        .max_iterations
        .unwrap_or(grammar.features.len() * grammar.rules.len() * 4)
        .max(1);
    let mut c = Compiler {
        grammar,
        fixed: options.static_restrictor.clone().unwrap_or_default(),
        nodes: BTreeMap::new(),
        queue: VecDeque::new(),
        compiled: Compiled {
            table: ReachabilityTable::new(),
            ledger: RestrictorLedger::new(),
            report: CompileReport { guard, ..CompileReport::default() },
        },
    };
    c.seed();
    while let Some((goal, path)) = c.queue.pop_front() {
        c.expand(&goal, &path)?;
    }
    Ok(c.compiled)
}

type NodeKey = (Category, Vec<usize>);

struct Compiler<'g> {
    grammar: &'g Grammar,
    fixed: Restrictor,
    /// Current dag for every non-repeating rule path from a goal.
    nodes: BTreeMap<NodeKey, FeatureDag>,
    queue: VecDeque<NodeKey>,
    compiled: Compiled,
}

impl Compiler<'_> {
    fn seed(&mut self) {
        for goal in self.grammar.goal_categories() {
            for r in self.grammar.rules_with_lhs(&goal) {
                let Some(dag) = seed_entry(&goal, self.grammar.rules[r].dag(), &self.fixed) else {
                    continue;
                };
                self.record(&goal, &[r], dag.clone(), self.fixed.clone());
                self.nodes.insert((goal.clone(), alloc::vec![r]), dag);
                self.queue.push_back((goal.clone(), alloc::vec![r]));
            }
        }
    }

    fn expand(&mut self, goal: &Category, path: &[usize]) -> Result<(), CompileError> {
        let Some(dag) = self.nodes.get(&(goal.clone(), path.to_vec())).cloned() else {
            return Ok(());
        };
        let last = *path.last().expect("paths are never empty");
        let corner = self.grammar.rules[last].left_corner().clone();
        let candidates: Vec<usize> = self.grammar.rules_with_lhs(&corner).collect();
        for r in candidates {
            match path.iter().position(|&p| p == r) {
                Some(i) => self.close_cycle(goal, path, i, r, &dag)?,
                None => self.extend(goal, path, r, &dag)?,
            }
        }
        Ok(())
    }

    fn extend(&mut self, goal: &Category, path: &[usize], r: usize, dag: &FeatureDag) -> Result<(), CompileError> {
        let Some(child) = self.step(dag, r, &self.fixed.clone())? else {
            return Ok(());
        };
        let mut child_path = path.to_vec();
        child_path.push(r);
        let key = (goal.clone(), child_path);
        if self.nodes.get(&key).is_some_and(|old| old.subsumes(&child)) {
            return Ok(());
        }
        self.record(goal, &key.1, child.clone(), self.fixed.clone());
        self.nodes.insert(key.clone(), child);
        self.queue.push_back(key);
        Ok(())
    }

    /// `path` leads back to rule `r`, first used at `path[i]`.
    fn close_cycle(
        &mut self,
        goal: &Category,
        path: &[usize],
        i: usize,
        r: usize,
        dag: &FeatureDag,
    ) -> Result<(), CompileError> {
        let key = PathKey { goal: goal.clone(), chain: self.ids(path) };
        let restrictor = self.restrictor(&key);
        let Some(later) = self.step(dag, r, &restrictor)? else {
            return Ok(());
        };
        let mut cycle_path = path.to_vec();
        cycle_path.push(r);
        self.record(goal, &cycle_path, later.clone(), restrictor);

        let anchor = (goal.clone(), path[..=i].to_vec());
        let earlier = self.nodes[&anchor].clone();
        if earlier.subsumes(&later) {
            return Ok(());
        }

        self.compiled.report.resolutions += 1;
        let mut cycle: Vec<usize> = path[i + 1..].to_vec();
        cycle.push(r);
        let mut current = earlier.clone();
        let mut b = later;
        let mut passes = 0;
        loop {
            if !current.subsumes(&b) {
                if b.subsumes(&current) {
                    current = b;
                } else {
                    let relation = if current.unify(&b).is_none() {
                        Relation::Incompatible
                    } else {
                        Relation::Unordered
                    };
                    self.detect(&key, relation, &current, &b);
                }
            }
            passes += 1;
            self.compiled.report.iterations += 1;
            if passes > self.compiled.report.guard {
                return Err(CompileError::NonTermination {
                    key,
                    iterations: passes,
                    limit: self.compiled.report.guard,
                });
            }
            let restrictor = self.restrictor(&key);
            let Some(redo) = self.redo(&current, &cycle, &restrictor)? else {
                break;
            };
            self.record(goal, &cycle_path, redo.clone(), restrictor);
            if current.subsumes(&redo) {
                break;
            }
            b = redo;
        }
        self.compiled.report.max_resolution_iterations =
            self.compiled.report.max_resolution_iterations.max(passes);

        if current != earlier {
            self.record(goal, &anchor.1, current.clone(), self.restrictor(&key));
            self.nodes.insert(anchor.clone(), current);
            self.queue.push_back(anchor);
        }
        Ok(())
    }

    fn detect(&mut self, key: &PathKey, relation: Relation, a: &FeatureDag, b: &FeatureDag) {
        let exclude = self.restrictor(key);
        let detection = detect_with(a, b, &exclude, self.grammar.restrictable_features());
        let added = match &detection {
            Some(d) => self.compiled.ledger.add(key, d.feature.clone()),
            None => false,
        };
        self.compiled.report.events.push(DetectionEvent { key: key.clone(), relation, detection, added });
    }

    /// Applies the rules of `cycle` in turn, restricting at every step.
    fn redo(
        &mut self,
        from: &FeatureDag,
        cycle: &[usize],
        restrictor: &Restrictor,
    ) -> Result<Option<FeatureDag>, CompileError> {
        let mut dag = from.clone();
        for &r in cycle {
            match self.step(&dag, r, restrictor)? {
                Some(next) => dag = next,
                None => return Ok(None),
            }
        }
        Ok(Some(dag))
    }

    fn step(&mut self, dag: &FeatureDag, r: usize, restrictor: &Restrictor) -> Result<Option<FeatureDag>, CompileError> {
        self.compiled.report.expansions += 1;
        Ok(propagate_step(dag, self.grammar.rules[r].dag(), restrictor)?)
    }

    fn restrictor(&self, key: &PathKey) -> Restrictor {
        match self.compiled.ledger.get(key) {
            Some(r) => self.fixed.union(r),
            None => self.fixed.clone(),
        }
    }

    fn ids(&self, path: &[usize]) -> Vec<RuleId> {
        path.iter().map(|&r| self.grammar.rules[r].id.clone()).collect()
    }

    fn record(&mut self, goal: &Category, path: &[usize], dag: FeatureDag, restrictor: Restrictor) {
        let rule = *path.last().expect("paths are never empty");
        let entry = TableEntry { goal: goal.clone(), chain: self.ids(path), rule, dag, restrictor };
        self.compiled.table.insert(entry);
    }
}
