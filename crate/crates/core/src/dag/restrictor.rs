use alloc::collections::{btree_set, BTreeSet};
use core::fmt;

use super::Feature;

/// Features to be removed by restriction.
///
/// The category feature and the structural labels (`lc`, numbered arcs) are
/// refused on insertion, so a restrictor can never cut a dag loose from its
/// category or from the rule layout.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Restrictor(BTreeSet<Feature>);

impl Restrictor {
    pub fn new() -> Self {
        Restrictor::default()
    }

    /// Returns `true` if the feature was added.
    pub fn insert(&mut self, feature: Feature) -> bool {
        if feature.is_category() || feature.is_structural() {
            return false;
        }
        self.0.insert(feature)
    }

    pub fn contains(&self, feature: &Feature) -> bool {
        self.0.contains(feature)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Feature> {
        self.0.iter()
    }

    pub fn union(&self, other: &Restrictor) -> Restrictor {
        Restrictor(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_superset(&self, other: &Restrictor) -> bool {
        self.0.is_superset(&other.0)
    }

    /// Every restrictable feature of `vocabulary`: the restrictor that
    /// leaves only the category backbone.
    pub fn all_but_category<'a>(vocabulary: impl IntoIterator<Item = &'a Feature>) -> Self {
        vocabulary.into_iter().cloned().collect()
    }
}

impl FromIterator<Feature> for Restrictor {
    fn from_iter<I: IntoIterator<Item = Feature>>(iter: I) -> Self {
        let mut out = Restrictor::new();
        for feature in iter {
            out.insert(feature);
        }
        out
    }
}

impl<'a> IntoIterator for &'a Restrictor {
    type Item = &'a Feature;
    type IntoIter = btree_set::Iter<'a, Feature>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Restrictor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, feature) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{feature}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Restrictor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
