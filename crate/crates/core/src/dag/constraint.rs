use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::{Atom, FeatureDag, Node, Path};

/// One equation of a dag's canonical decomposition.
///
/// For every node reached through several arcs, the shortlex-least path to
/// it is equated with the path through each other incoming arc. Atoms are
/// values, so every incoming arc of an atom yields a [`Constraint::Constant`]
/// instead. An empty leaf reached through a single arc is recorded with
/// [`Constraint::Defined`]; without it the decomposition would not determine
/// the dag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    Equal(Path, Path),
    Constant(Path, Atom),
    Defined(Path),
}

impl Constraint {
    pub fn path(&self) -> &Path {
        match self {
            Constraint::Equal(p, _) | Constraint::Constant(p, _) | Constraint::Defined(p) => p,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Constraint::Constant(..) => 0,
            Constraint::Equal(..) => 1,
            Constraint::Defined(_) => 2,
        }
    }
}

impl Ord for Constraint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.path()
            .cmp(other.path())
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| match (self, other) {
                (Constraint::Equal(_, a), Constraint::Equal(_, b)) => a.cmp(b),
                (Constraint::Constant(_, a), Constraint::Constant(_, b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Constraint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Equal(p, q) => write!(f, "{p} = {q}"),
            Constraint::Constant(p, a) => write!(f, "{p} = {a}"),
            Constraint::Defined(p) => write!(f, "{p} = []"),
        }
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(super) fn constraints_of(dag: &FeatureDag) -> Vec<Constraint> {
    let least = dag.least_paths();
    let mut incoming = alloc::vec![0usize; dag.node_count()];
    let mut out = Vec::new();
    for (parent, node) in dag.nodes.iter().enumerate() {
        let Node::Complex(arcs) = node else { continue };
        for (feature, &child) in arcs {
            incoming[child] += 1;
            let via = least[parent].child(feature);
            match &dag.nodes[child] {
                Node::Atom(a) => out.push(Constraint::Constant(via, a.clone())),
                Node::Complex(_) => {
                    if via != least[child] {
                        out.push(Constraint::Equal(least[child].clone(), via));
                    }
                }
            }
        }
    }
    for (id, node) in dag.nodes.iter().enumerate() {
        if id != FeatureDag::ROOT && node.is_empty() && incoming[id] == 1 {
            out.push(Constraint::Defined(least[id].clone()));
        }
    }
    out.sort();
    out.dedup();
    out
}
