//! Feature structures as rooted acyclic graphs.
//!
//! A [`FeatureDag`] is always held in canonical form: nodes are numbered in
//! preorder from the root (arcs visited in label order), only reachable nodes
//! are kept, and each distinct atom is a single node. Two dags are therefore
//! isomorphic exactly when they compare equal, and `Eq`/`Ord`/`Hash` can be
//! used for deduplication.

mod constraint;
mod path;
mod restrictor;
mod symbol;
mod work;

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

pub use constraint::Constraint;
pub use path::Path;
pub use restrictor::Restrictor;
pub use symbol::{Atom, Feature, CATEGORY, LEFT_CORNER};
pub use work::{Clash, DagBuilder};

pub(crate) use work::Work;

pub type NodeId = usize;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Node {
    Atom(Atom),
    /// A complex node; with no arcs it is the fully underspecified value.
    Complex(BTreeMap<Feature, NodeId>),
}

impl Node {
    pub fn arcs(&self) -> Option<&BTreeMap<Feature, NodeId>> {
        match self {
            Node::Complex(arcs) => Some(arcs),
            Node::Atom(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Node::Complex(arcs) if arcs.is_empty())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureDag {
    nodes: Vec<Node>,
}

impl Default for FeatureDag {
    fn default() -> Self {
        FeatureDag::empty()
    }
}

impl FeatureDag {
    pub const ROOT: NodeId = 0;

    /// The dag with no information at all; it subsumes every dag.
    pub fn empty() -> Self {
        FeatureDag { nodes: alloc::vec![Node::Complex(BTreeMap::new())] }
    }

    pub fn atom(atom: Atom) -> Self {
        FeatureDag { nodes: alloc::vec![Node::Atom(atom)] }
    }

    /// Rebuilds a dag from equations. `None` if they are inconsistent.
    pub fn from_constraints<'a>(constraints: impl IntoIterator<Item = &'a Constraint>) -> Option<Self> {
        let mut b = DagBuilder::new();
        for c in constraints {
            let ok = match c {
                Constraint::Equal(p, q) => b.equate(p, q),
                Constraint::Constant(p, a) => b.constant(p, a.clone()),
                Constraint::Defined(p) => b.define(p),
            };
            ok.ok()?;
        }
        b.build().ok()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes[Self::ROOT].is_empty()
    }

    pub fn walk(&self, path: &Path) -> Option<NodeId> {
        let mut cur = Self::ROOT;
        for feature in path {
            cur = *self.nodes[cur].arcs()?.get(feature)?;
        }
        Some(cur)
    }

    pub fn is_defined(&self, path: &Path) -> bool {
        self.walk(path).is_some()
    }

    pub fn atom_at(&self, path: &Path) -> Option<&Atom> {
        match &self.nodes[self.walk(path)?] {
            Node::Atom(a) => Some(a),
            Node::Complex(_) => None,
        }
    }

    /// The category constant at the root, if any.
    pub fn category(&self) -> Option<&Atom> {
        let id = *self.nodes[Self::ROOT].arcs()?.get(&Feature::category())?;
        match &self.nodes[id] {
            Node::Atom(a) => Some(a),
            Node::Complex(_) => None,
        }
    }

    /// The subdag under `path`, keeping sharing internal to it.
    pub fn extract(&self, path: &Path) -> Option<FeatureDag> {
        let id = self.walk(path)?;
        Some(self.compact_from(id, &|_, _| true))
    }

    /// The dag whose only content is `self` placed under `path`.
    pub fn embed(&self, path: &Path) -> FeatureDag {
        let mut nodes = Vec::with_capacity(path.len() + self.nodes.len());
        for (i, feature) in path.iter().enumerate() {
            let mut arcs = BTreeMap::new();
            arcs.insert(feature.clone(), i + 1);
            nodes.push(Node::Complex(arcs));
        }
        let offset = path.len();
        for node in &self.nodes {
            nodes.push(match node {
                Node::Atom(a) => Node::Atom(a.clone()),
                Node::Complex(arcs) => {
                    Node::Complex(arcs.iter().map(|(f, c)| (f.clone(), c + offset)).collect())
                }
            });
        }
        // A chain prefix keeps preorder numbering, so this is already canonical.
        FeatureDag { nodes }
    }

    /// Removes every arc labelled with a restricted feature, at any depth,
    /// along with whatever becomes unreachable.
    pub fn restrict(&self, restrictor: &Restrictor) -> FeatureDag {
        if restrictor.is_empty() {
            return self.clone();
        }
        self.compact_from(Self::ROOT, &|_, f| !restrictor.contains(f))
    }

    /// Removes all numbered arcs, leaving the constituent at the root.
    pub fn without_constituents(&self) -> FeatureDag {
        self.compact_from(Self::ROOT, &|_, f| !f.is_numbered())
    }

    fn compact_from(&self, id: NodeId, keep: &dyn Fn(NodeId, &Feature) -> bool) -> FeatureDag {
        work::compact(self, id, keep).expect("canonical dags are acyclic")
    }

    /// `self ⊔ other`, or `None` when the two are incompatible.
    pub fn unify(&self, other: &FeatureDag) -> Option<FeatureDag> {
        let mut w = Work::new();
        let a = w.import(self);
        let b = w.import(other);
        w.merge(a, b).ok()?;
        w.finish(a).ok()
    }

    /// True when `self` is at least as general as `other`: every path,
    /// constant and coreference of `self` is present in `other`.
    pub fn subsumes(&self, other: &FeatureDag) -> bool {
        let mut image: Vec<Option<NodeId>> = alloc::vec![None; self.nodes.len()];
        let mut stack = alloc::vec![(Self::ROOT, Self::ROOT)];
        while let Some((a, b)) = stack.pop() {
            if let Some(mapped) = image[a] {
                if mapped != b {
                    return false;
                }
                continue;
            }
            image[a] = Some(b);
            match (&self.nodes[a], &other.nodes[b]) {
                (Node::Atom(x), Node::Atom(y)) => {
                    if x != y {
                        return false;
                    }
                }
                (Node::Atom(_), Node::Complex(_)) => return false,
                (Node::Complex(arcs), _) if arcs.is_empty() => {}
                (Node::Complex(_), Node::Atom(_)) => return false,
                (Node::Complex(mine), Node::Complex(theirs)) => {
                    for (feature, child) in mine {
                        match theirs.get(feature) {
                            Some(&target) => stack.push((*child, target)),
                            None => return false,
                        }
                    }
                }
            }
        }
        true
    }

    /// Mutual subsumption; equivalent to `==` on canonical dags.
    pub fn equivalent(&self, other: &FeatureDag) -> bool {
        self.subsumes(other) && other.subsumes(self)
    }

    /// Shortlex-least path to every node, indexed by node id.
    pub fn least_paths(&self) -> Vec<Path> {
        let mut least: Vec<Option<Path>> = alloc::vec![None; self.nodes.len()];
        least[Self::ROOT] = Some(Path::empty());
        let mut queue = VecDeque::from([Self::ROOT]);
        while let Some(id) = queue.pop_front() {
            if let Node::Complex(arcs) = &self.nodes[id] {
                let base = least[id].clone().unwrap_or_default();
                for (feature, &child) in arcs {
                    if least[child].is_none() {
                        least[child] = Some(base.child(feature));
                        queue.push_back(child);
                    }
                }
            }
        }
        least.into_iter().map(|p| p.expect("every node is reachable")).collect()
    }

    /// Every defined path, including the empty one, in shortlex order.
    pub fn paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![(Self::ROOT, Path::empty())];
        while let Some((id, path)) = stack.pop() {
            if let Node::Complex(arcs) = &self.nodes[id] {
                for (feature, &child) in arcs {
                    stack.push((child, path.child(feature)));
                }
            }
            out.push(path);
        }
        out.sort();
        out
    }

    /// Every arc label in the dag.
    pub fn labels(&self) -> BTreeSet<Feature> {
        self.nodes
            .iter()
            .filter_map(Node::arcs)
            .flat_map(|arcs| arcs.keys().cloned())
            .collect()
    }

    /// Canonical constraint set; see [`Constraint`].
    pub fn constraints(&self) -> Vec<Constraint> {
        constraint::constraints_of(self)
    }

    /// Whether `constraint` holds in `self`.
    pub fn entails(&self, constraint: &Constraint) -> bool {
        match constraint {
            Constraint::Equal(p, q) => match (self.walk(p), self.walk(q)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
            Constraint::Constant(p, atom) => self.atom_at(p) == Some(atom),
            Constraint::Defined(p) => self.is_defined(p),
        }
    }

    fn in_degrees(&self) -> Vec<usize> {
        let mut degree = alloc::vec![0; self.nodes.len()];
        for arcs in self.nodes.iter().filter_map(Node::arcs) {
            for &child in arcs.values() {
                degree[child] += 1;
            }
        }
        degree
    }
}

impl fmt::Display for FeatureDag {
    /// Bracketed notation; shared complex nodes get a `#n` tag at their first
    /// occurrence and appear as bare `#n` afterwards.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degree = self.in_degrees();
        let mut tags: BTreeMap<NodeId, usize> = BTreeMap::new();
        self.write_node(f, Self::ROOT, &degree, &mut tags)
    }
}

impl FeatureDag {
    fn write_node(
        &self,
        f: &mut fmt::Formatter<'_>,
        id: NodeId,
        degree: &[usize],
        tags: &mut BTreeMap<NodeId, usize>,
    ) -> fmt::Result {
        match &self.nodes[id] {
            Node::Atom(a) => write!(f, "{a}"),
            Node::Complex(arcs) => {
                if degree[id] > 1 {
                    if let Some(tag) = tags.get(&id) {
                        return write!(f, "#{tag}");
                    }
                    let tag = tags.len() + 1;
                    tags.insert(id, tag);
                    write!(f, "#{tag}")?;
                }
                f.write_str("[")?;
                for (i, (feature, &child)) in arcs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{feature}: ")?;
                    self.write_node(f, child, degree, tags)?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for FeatureDag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
