use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::dag::{Feature, FeatureDag, Restrictor};
use crate::grammar::{Category, RuleId};

/// Identifies a propagation path: the goal and the rules applied down the
/// left-corner chain, each at most once. A path that would repeat a rule is
/// a cycle and is keyed by the chain up to the repetition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathKey {
    pub goal: Category,
    pub chain: Vec<RuleId>,
}

impl fmt::Display for PathKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},[", self.goal)?;
        for (i, id) in self.chain.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        f.write_str("])")
    }
}

impl fmt::Debug for PathKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Per-path restrictors. They only ever grow.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct RestrictorLedger(BTreeMap<PathKey, Restrictor>);

impl RestrictorLedger {
    pub fn new() -> Self {
        RestrictorLedger::default()
    }

    pub fn get(&self, key: &PathKey) -> Option<&Restrictor> {
        self.0.get(key)
    }

    pub fn restrictor(&self, key: &PathKey) -> Restrictor {
        self.0.get(key).cloned().unwrap_or_default()
    }

    /// Returns `true` if the feature was new for this path.
    pub fn add(&mut self, key: &PathKey, feature: Feature) -> bool {
        self.0.entry(key.clone()).or_default().insert(feature)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PathKey, &Restrictor)> {
        self.0.iter().filter(|(_, r)| !r.is_empty())
    }

    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableEntry {
    pub goal: Category,
    /// Rules applied from the goal down; the last one sits under `<lc>`.
    pub chain: Vec<RuleId>,
    /// Index of the rule under `<lc>`.
    pub rule: usize,
    pub dag: FeatureDag,
    /// The restriction in force when the dag was produced. The parser
    /// applies it to goal features before consulting the entry.
    pub restrictor: Restrictor,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Insertion {
    Inserted,
    Redundant,
    /// Inserted, and these strictly more specific entries were dropped.
    Replaced(Vec<TableEntry>),
}

/// Goal category → entries. Within a row no dag subsumes another.
#[derive(Clone, Default, Debug)]
pub struct ReachabilityTable {
    rows: BTreeMap<Category, Vec<TableEntry>>,
}

impl ReachabilityTable {
    pub fn new() -> Self {
        ReachabilityTable::default()
    }

    pub fn insert(&mut self, entry: TableEntry) -> Insertion {
        let row = self.rows.entry(entry.goal.clone()).or_default();
        if row.iter().any(|e| e.dag.subsumes(&entry.dag)) {
            return Insertion::Redundant;
        }
        let (dropped, kept): (Vec<_>, Vec<_>) =
            core::mem::take(row).into_iter().partition(|e| entry.dag.subsumes(&e.dag));
        *row = kept;
        row.push(entry);
        if dropped.is_empty() {
            Insertion::Inserted
        } else {
            Insertion::Replaced(dropped)
        }
    }

    pub fn row(&self, goal: &Category) -> &[TableEntry] {
        self.rows.get(goal).map_or(&[], Vec::as_slice)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Category, &[TableEntry])> {
        self.rows.iter().map(|(c, r)| (c, r.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.rows.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries of every row, sorted for stable output.
    pub fn sorted_entries(&self) -> Vec<&TableEntry> {
        let mut out: Vec<&TableEntry> = self.rows.values().flatten().collect();
        out.sort_by(|a, b| {
            (&a.goal, &a.chain, a.dag.constraints()).cmp(&(&b.goal, &b.chain, b.dag.constraints()))
        });
        out
    }
}
