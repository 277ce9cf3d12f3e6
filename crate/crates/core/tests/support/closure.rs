//! Feature structures as sets of facts about paths, closed under the
//! coreference congruence by naive fixpoint iteration. This shares no code
//! with the graph implementation and serves as its reference.

use std::collections::{BTreeMap, BTreeSet};

use lcfilter_core::{Atom, Constraint, FeatureDag, Path};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub defined: BTreeSet<Path>,
    /// Reflexive, symmetric and transitive.
    pub equal: BTreeSet<(Path, Path)>,
    pub atoms: BTreeMap<Path, Atom>,
}

impl Theory {
    /// The closure of `constraints`, or `None` if they are inconsistent or
    /// force a cycle.
    pub fn close<'a>(constraints: impl IntoIterator<Item = &'a Constraint>) -> Option<Theory> {
        let mut t = Theory::default();
        t.defined.insert(Path::empty());
        for c in constraints {
            match c {
                Constraint::Equal(p, q) => {
                    t.defined.insert(p.clone());
                    t.defined.insert(q.clone());
                    t.equal.insert((p.clone(), q.clone()));
                }
                Constraint::Constant(p, a) => {
                    t.defined.insert(p.clone());
                    if t.atoms.insert(p.clone(), a.clone()).is_some_and(|b| &b != a) {
                        return None;
                    }
                }
                Constraint::Defined(p) => {
                    t.defined.insert(p.clone());
                }
            }
        }
        loop {
            let before = t.clone();
            t.saturate()?;
            if before == t {
                return Some(t);
            }
        }
    }

    fn saturate(&mut self) -> Option<()> {
        for p in self.defined.clone() {
            let mut prefix = Path::empty();
            for f in p.iter() {
                self.defined.insert(prefix.clone());
                prefix.push(f.clone());
            }
        }
        // Atoms are values: paths with the same atom reach the same node.
        let atoms: Vec<(Path, Atom)> = self.atoms.iter().map(|(p, a)| (p.clone(), a.clone())).collect();
        for (p, a) in &atoms {
            if let Some((q, _)) = atoms.iter().find(|(_, b)| b == a) {
                self.equal.insert((p.clone(), q.clone()));
            }
        }
        let classes = self.classes();
        for class in &classes {
            for p in class {
                // A path equal to one of its own extensions is a cycle.
                if class.iter().any(|q| q.len() > p.len() && q.starts_with(p)) {
                    return None;
                }
            }
            let values: BTreeSet<Atom> = class.iter().filter_map(|p| self.atoms.get(p).cloned()).collect();
            if values.len() > 1 {
                return None;
            }
            if let Some(a) = values.into_iter().next() {
                for p in class {
                    self.atoms.insert(p.clone(), a.clone());
                }
            }
            for p in class {
                for ext in self.defined.clone() {
                    let Some(s) = ext.strip_prefix(p) else { continue };
                    if s.is_empty() {
                        continue;
                    }
                    for q in class {
                        let moved = q.concat(&s);
                        self.defined.insert(moved.clone());
                        self.equal.insert((ext.clone(), moved));
                    }
                }
            }
        }
        for p in self.atoms.keys() {
            if self.defined.iter().any(|d| d.len() > p.len() && d.starts_with(p)) {
                return None;
            }
        }
        self.equal = self
            .classes()
            .iter()
            .flat_map(|c| c.iter().flat_map(move |p| c.iter().map(move |q| (p.clone(), q.clone()))))
            .collect();
        Some(())
    }

    /// Defined paths grouped by the equalities recorded so far.
    fn classes(&self) -> Vec<BTreeSet<Path>> {
        let mut rep: BTreeMap<Path, Path> = self.defined.iter().map(|p| (p.clone(), p.clone())).collect();
        fn find(rep: &BTreeMap<Path, Path>, p: &Path) -> Path {
            let mut cur = p.clone();
            while rep[&cur] != cur {
                cur = rep[&cur].clone();
            }
            cur
        }
        for (p, q) in &self.equal {
            let (a, b) = (find(&rep, p), find(&rep, q));
            if a != b {
                rep.insert(a, b);
            }
        }
        let mut groups: BTreeMap<Path, BTreeSet<Path>> = BTreeMap::new();
        for p in &self.defined {
            groups.entry(find(&rep, p)).or_default().insert(p.clone());
        }
        groups.into_values().collect()
    }

    /// Everything a canonical dag says about its paths.
    pub fn of(dag: &FeatureDag) -> Theory {
        let mut t = Theory::default();
        let mut paths = dag.paths();
        paths.push(Path::empty());
        for p in &paths {
            t.defined.insert(p.clone());
            if let Some(a) = dag.atom_at(p) {
                t.atoms.insert(p.clone(), a.clone());
            }
            for q in &paths {
                if dag.walk(p) == dag.walk(q) {
                    t.equal.insert((p.clone(), q.clone()));
                }
            }
        }
        t
    }

    pub fn includes(&self, other: &Theory) -> bool {
        other.defined.is_subset(&self.defined)
            && other.equal.is_subset(&self.equal)
            && other.atoms.iter().all(|(p, a)| self.atoms.get(p) == Some(a))
    }

    /// The facts about paths below `prefix`, re-rooted there.
    pub fn below(&self, prefix: &Path) -> Option<Theory> {
        if !self.defined.contains(prefix) {
            return None;
        }
        let strip = |p: &Path| p.strip_prefix(prefix);
        Some(Theory {
            defined: self.defined.iter().filter_map(strip).collect(),
            equal: self.equal.iter().filter_map(|(p, q)| Some((strip(p)?, strip(q)?))).collect(),
            atoms: self.atoms.iter().filter_map(|(p, a)| Some((strip(p)?, a.clone()))).collect(),
        })
    }
}
