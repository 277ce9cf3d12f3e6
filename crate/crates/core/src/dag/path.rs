use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::Feature;

/// A sequence of features, ordered shortest-first and then
/// lexicographically by feature name.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Path(Vec<Feature>);

impl Path {
    pub fn empty() -> Self {
        Path(Vec::new())
    }

    /// Builds a path from whitespace-separated feature names.
    pub fn parse(names: &str) -> Self {
        names.split_whitespace().map(Feature::new).collect()
    }

    pub fn features(&self) -> &[Feature] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<&Feature> {
        self.0.last()
    }

    pub fn contains(&self, feature: &Feature) -> bool {
        self.0.contains(feature)
    }

    pub fn starts_with(&self, prefix: &Path) -> bool {
        self.0.starts_with(&prefix.0)
    }

    /// The remainder of `self` after `prefix`, if `prefix` is a prefix.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|rest| Path(rest.to_vec()))
    }

    pub fn push(&mut self, feature: Feature) {
        self.0.push(feature);
    }

    /// `self · feature`
    pub fn child(&self, feature: &Feature) -> Path {
        let mut out = self.clone();
        out.push(feature.clone());
        out
    }

    /// `self · other`
    pub fn concat(&self, other: &Path) -> Path {
        let mut out = self.clone();
        out.0.extend(other.0.iter().cloned());
        out
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Feature> {
        self.0.iter()
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Feature> for Path {
    fn from_iter<I: IntoIterator<Item = Feature>>(iter: I) -> Self {
        Path(iter.into_iter().collect())
    }
}

impl From<Vec<Feature>> for Path {
    fn from(features: Vec<Feature>) -> Self {
        Path(features)
    }
}

impl<'a> IntoIterator for &'a Path {
    type Item = &'a Feature;
    type IntoIter = core::slice::Iter<'a, Feature>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, feature) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{feature}")?;
        }
        f.write_str(">")
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
