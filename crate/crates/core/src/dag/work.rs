//! Mutable union-find workspace behind unification, rule compilation and
//! promotion, plus the canonical compaction every finished dag goes through.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::mem;

use super::{Atom, Feature, FeatureDag, Node, NodeId, Path};

/// Two constants met, or a constant met a complex node, or sharing closed a
/// cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Clash;

pub(crate) trait Source {
    fn resolve(&self, id: NodeId) -> NodeId;
    fn node(&self, id: NodeId) -> &Node;
}

impl Source for FeatureDag {
    fn resolve(&self, id: NodeId) -> NodeId {
        id
    }

    fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }
}

/// Copies the part of `src` reachable from `root` into canonical form:
/// preorder numbering with arcs visited in label order and one node per
/// distinct atom. `keep` decides per (source node, label) whether an arc
/// survives. Fails if the reachable graph has a cycle.
pub(crate) fn compact<S: Source>(
    src: &S,
    root: NodeId,
    keep: &dyn Fn(NodeId, &Feature) -> bool,
) -> Result<FeatureDag, Clash> {
    let mut c = Compactor {
        src,
        keep,
        seen: BTreeMap::new(),
        atoms: BTreeMap::new(),
        nodes: Vec::new(),
    };
    c.visit(root)?;
    Ok(FeatureDag { nodes: c.nodes })
}

enum Seen {
    Open,
    Done(NodeId),
}

struct Compactor<'a, S> {
    src: &'a S,
    keep: &'a dyn Fn(NodeId, &Feature) -> bool,
    seen: BTreeMap<NodeId, Seen>,
    atoms: BTreeMap<Atom, NodeId>,
    nodes: Vec<Node>,
}

impl<S: Source> Compactor<'_, S> {
    fn visit(&mut self, id: NodeId) -> Result<NodeId, Clash> {
        let id = self.src.resolve(id);
        match self.seen.get(&id) {
            Some(Seen::Done(n)) => return Ok(*n),
            Some(Seen::Open) => return Err(Clash),
            None => {}
        }
        match self.src.node(id) {
            Node::Atom(atom) => {
                let n = match self.atoms.get(atom) {
                    Some(&n) => n,
                    None => {
                        let n = self.nodes.len();
                        self.nodes.push(Node::Atom(atom.clone()));
                        self.atoms.insert(atom.clone(), n);
                        n
                    }
                };
                self.seen.insert(id, Seen::Done(n));
                Ok(n)
            }
            Node::Complex(arcs) => {
                let arcs: Vec<(Feature, NodeId)> = arcs
                    .iter()
                    .filter(|(f, _)| (self.keep)(id, f))
                    .map(|(f, c)| (f.clone(), *c))
                    .collect();
                let n = self.nodes.len();
                self.nodes.push(Node::Complex(BTreeMap::new()));
                self.seen.insert(id, Seen::Open);
                let mut out = BTreeMap::new();
                for (f, child) in arcs {
                    out.insert(f, self.visit(child)?);
                }
                self.nodes[n] = Node::Complex(out);
                self.seen.insert(id, Seen::Done(n));
                Ok(n)
            }
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct Work {
    parent: Vec<NodeId>,
    nodes: Vec<Node>,
}

impl Source for Work {
    fn resolve(&self, mut id: NodeId) -> NodeId {
        while self.parent[id] != id {
            id = self.parent[id];
        }
        id
    }

    fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }
}

impl Work {
    pub(crate) fn new() -> Self {
        Work::default()
    }

    pub(crate) fn add(&mut self, node: Node) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(node);
        self.parent.push(id);
        id
    }

    pub(crate) fn add_empty(&mut self) -> NodeId {
        self.add(Node::Complex(BTreeMap::new()))
    }

    /// Copies `dag` in and returns the id of its root.
    pub(crate) fn import(&mut self, dag: &FeatureDag) -> NodeId {
        let offset = self.nodes.len();
        for node in &dag.nodes {
            let node = match node {
                Node::Atom(a) => Node::Atom(a.clone()),
                Node::Complex(arcs) => {
                    Node::Complex(arcs.iter().map(|(f, c)| (f.clone(), c + offset)).collect())
                }
            };
            self.add(node);
        }
        offset
    }

    fn find(&mut self, id: NodeId) -> NodeId {
        let root = self.resolve(id);
        let mut cur = id;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn arcs_mut(&mut self, id: NodeId) -> Option<&mut BTreeMap<Feature, NodeId>> {
        let id = self.find(id);
        match &mut self.nodes[id] {
            Node::Complex(arcs) => Some(arcs),
            Node::Atom(_) => None,
        }
    }

    /// Follows `path`, creating empty nodes for missing arcs.
    pub(crate) fn ensure(&mut self, from: NodeId, path: &Path) -> Result<NodeId, Clash> {
        let mut cur = self.find(from);
        for feature in path {
            let next = match &self.nodes[cur] {
                Node::Atom(_) => return Err(Clash),
                Node::Complex(arcs) => arcs.get(feature).copied(),
            };
            cur = match next {
                Some(n) => self.find(n),
                None => {
                    let n = self.add_empty();
                    if let Node::Complex(arcs) = &mut self.nodes[cur] {
                        arcs.insert(feature.clone(), n);
                    }
                    n
                }
            };
        }
        Ok(cur)
    }

    pub(crate) fn merge(&mut self, a: NodeId, b: NodeId) -> Result<(), Clash> {
        let mut pending = alloc::vec![(a, b)];
        while let Some((a, b)) = pending.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            match (&self.nodes[a], &self.nodes[b]) {
                (Node::Atom(x), Node::Atom(y)) => {
                    if x != y {
                        return Err(Clash);
                    }
                    self.parent[b] = a;
                }
                (Node::Atom(_), Node::Complex(arcs)) => {
                    if !arcs.is_empty() {
                        return Err(Clash);
                    }
                    self.parent[b] = a;
                }
                (Node::Complex(arcs), Node::Atom(_)) => {
                    if !arcs.is_empty() {
                        return Err(Clash);
                    }
                    self.parent[a] = b;
                }
                (Node::Complex(_), Node::Complex(_)) => {
                    let moved = match &mut self.nodes[b] {
                        Node::Complex(arcs) => mem::take(arcs),
                        Node::Atom(_) => unreachable!(),
                    };
                    self.parent[b] = a;
                    if let Node::Complex(into) = &mut self.nodes[a] {
                        for (feature, child) in moved {
                            match into.get(&feature) {
                                Some(&existing) => pending.push((existing, child)),
                                None => {
                                    into.insert(feature, child);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn set_atom(&mut self, id: NodeId, atom: Atom) -> Result<(), Clash> {
        let n = self.add(Node::Atom(atom));
        self.merge(id, n)
    }

    pub(crate) fn finish(&self, root: NodeId) -> Result<FeatureDag, Clash> {
        compact(self, root, &|_, _| true)
    }

    pub(crate) fn finish_with(
        &self,
        root: NodeId,
        keep: &dyn Fn(NodeId, &Feature) -> bool,
    ) -> Result<FeatureDag, Clash> {
        compact(self, root, keep)
    }
}

/// Incremental construction of a dag from path equations.
///
/// ```
/// use lcfilter_core::{Atom, DagBuilder, Path};
///
/// let mut b = DagBuilder::new();
/// b.equate(&Path::parse("a"), &Path::parse("b")).unwrap();
/// b.constant(&Path::parse("a c"), Atom::new("x")).unwrap();
/// let dag = b.build().unwrap();
/// assert_eq!(dag.atom_at(&Path::parse("b c")).map(|a| a.as_str()), Some("x"));
/// ```
#[derive(Debug)]
pub struct DagBuilder {
    work: Work,
    root: NodeId,
}

impl Default for DagBuilder {
    fn default() -> Self {
        DagBuilder::new()
    }
}

impl DagBuilder {
    pub fn new() -> Self {
        let mut work = Work::new();
        let root = work.add_empty();
        DagBuilder { work, root }
    }

    /// Starts from a copy of an existing dag.
    pub fn from_dag(dag: &FeatureDag) -> Self {
        let mut work = Work::new();
        let root = work.import(dag);
        DagBuilder { work, root }
    }

    pub fn define(&mut self, path: &Path) -> Result<(), Clash> {
        self.work.ensure(self.root, path).map(|_| ())
    }

    pub fn constant(&mut self, path: &Path, atom: Atom) -> Result<(), Clash> {
        let n = self.work.ensure(self.root, path)?;
        self.work.set_atom(n, atom)
    }

    pub fn equate(&mut self, left: &Path, right: &Path) -> Result<(), Clash> {
        let l = self.work.ensure(self.root, left)?;
        let r = self.work.ensure(self.root, right)?;
        self.work.merge(l, r)
    }

    /// Unifies `dag` in at `path`.
    pub fn graft(&mut self, path: &Path, dag: &FeatureDag) -> Result<(), Clash> {
        let at = self.work.ensure(self.root, path)?;
        let other = self.work.import(dag);
        self.work.merge(at, other)
    }

    pub fn build(self) -> Result<FeatureDag, Clash> {
        self.work.finish(self.root)
    }
}
