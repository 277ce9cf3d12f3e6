//! Choosing which feature to restrict when a propagation loop is suspected.
//!
//! Two dags from successive visits to the same rule are compared
//! constraint by constraint. Each constraint of the earlier dag that the
//! later one does not satisfy is tested against five patterns, and the last
//! feature of the path a pattern selects is the one to restrict. Patterns are
//! tried in order; within a pattern, constraints are tried in canonical
//! order, and the first usable feature wins.

use core::fmt;

use crate::dag::{Constraint, Feature, FeatureDag, Path, Restrictor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DetectionRule {
    /// `p1 = p2` is missing but `p1·p3 = p2·p3` holds: select `p3`.
    SharedExtension,
    /// `p1 = p2` where the two values clash, or neither path exists: select
    /// the path without `lc` (or `p1`).
    Clash,
    /// `p1 = p2` where only one path exists: select the missing one.
    MissingPath,
    /// `p = c` where `p` holds another constant or is missing: select `p`.
    ConstantConflict,
    /// `p = c` where `p` has grown structure `p·q = d`: select `q`.
    ConstantBelow,
    /// No pattern applied: the longest path that only the later dag has.
    FallbackNewPath,
    /// Nothing else applied: the first unrestricted feature of the grammar.
    FallbackVocabulary,
}

impl DetectionRule {
    pub fn is_fallback(self) -> bool {
        matches!(self, DetectionRule::FallbackNewPath | DetectionRule::FallbackVocabulary)
    }
}

impl fmt::Display for DetectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectionRule::SharedExtension => "case 1",
            DetectionRule::Clash => "case 2",
            DetectionRule::MissingPath => "case 3",
            DetectionRule::ConstantConflict => "case 4",
            DetectionRule::ConstantBelow => "case 5",
            DetectionRule::FallbackNewPath => "fallback (new path)",
            DetectionRule::FallbackVocabulary => "fallback (vocabulary)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub feature: Feature,
    /// The selected path; empty for vocabulary fallback.
    pub path: Path,
    pub rule: DetectionRule,
    /// The constraint of the earlier dag that triggered the selection.
    pub trigger: Option<Constraint>,
}

const PATTERNS: [DetectionRule; 5] = [
    DetectionRule::SharedExtension,
    DetectionRule::Clash,
    DetectionRule::MissingPath,
    DetectionRule::ConstantConflict,
    DetectionRule::ConstantBelow,
];

/// The features implicated when `later` is not subsumed by `earlier`. At
/// most one feature is returned; `cat` never is.
pub fn detect(earlier: &FeatureDag, later: &FeatureDag) -> Restrictor {
    detect_with(earlier, later, &Restrictor::new(), core::iter::empty())
        .map(|d| [d.feature].into_iter().collect())
        .unwrap_or_default()
}

/// Like [`detect`], but skips features in `exclude` and falls back on
/// `vocabulary` when nothing else yields a new feature.
pub fn detect_with<'a>(
    earlier: &FeatureDag,
    later: &FeatureDag,
    exclude: &Restrictor,
    vocabulary: impl IntoIterator<Item = &'a Feature>,
) -> Option<Detection> {
    let usable = |f: &Feature| !f.is_category() && !f.is_structural() && !exclude.contains(f);
    let unmet: alloc::vec::Vec<Constraint> =
        earlier.constraints().into_iter().filter(|c| !later.entails(c)).collect();

    for rule in PATTERNS {
        for x in &unmet {
            let Some(path) = select(rule, x, later) else { continue };
            if let Some(feature) = path.last().filter(|f| usable(f)) {
                return Some(Detection { feature: feature.clone(), path, rule, trigger: Some(x.clone()) });
            }
        }
    }

    let mut fresh: alloc::vec::Vec<Path> =
        later.paths().into_iter().filter(|p| !earlier.is_defined(p)).collect();
    fresh.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    for path in fresh {
        if let Some(feature) = path.last().filter(|f| usable(f)) {
            return Some(Detection {
                feature: feature.clone(),
                path,
                rule: DetectionRule::FallbackNewPath,
                trigger: None,
            });
        }
    }

    vocabulary.into_iter().find(|f| usable(f)).map(|feature| Detection {
        feature: feature.clone(),
        path: Path::empty(),
        rule: DetectionRule::FallbackVocabulary,
        trigger: None,
    })
}

fn select(rule: DetectionRule, x: &Constraint, y: &FeatureDag) -> Option<Path> {
    match (rule, x) {
        (DetectionRule::SharedExtension, Constraint::Equal(p1, p2)) => {
            y.walk(p2)?;
            y.extract(p1)?
                .paths()
                .into_iter()
                .filter(|p3| !p3.is_empty())
                .find(|p3| {
                    let l = y.walk(&p1.concat(p3));
                    l.is_some() && l == y.walk(&p2.concat(p3))
                })
        }
        (DetectionRule::Clash, Constraint::Equal(p1, p2)) => {
            let clash = match (y.extract(p1), y.extract(p2)) {
                (Some(a), Some(b)) => a.unify(&b).is_none(),
                (None, None) => true,
                _ => false,
            };
            clash.then(|| prefer_outside_lc(p1, p2).clone())
        }
        (DetectionRule::MissingPath, Constraint::Equal(p1, p2)) => {
            match (y.is_defined(p1), y.is_defined(p2)) {
                (false, true) => Some(p1.clone()),
                (true, false) => Some(p2.clone()),
                _ => None,
            }
        }
        (DetectionRule::ConstantConflict, Constraint::Constant(p, c)) => {
            let conflict = match y.walk(p) {
                None => true,
                Some(_) => y.atom_at(p).is_some_and(|d| d != c),
            };
            conflict.then(|| p.clone())
        }
        (DetectionRule::ConstantBelow, Constraint::Constant(p, _)) => {
            let below = y.extract(p)?;
            below.paths().into_iter().find(|q| !q.is_empty() && below.atom_at(q).is_some())
        }
        _ => None,
    }
}

fn prefer_outside_lc<'a>(p1: &'a Path, p2: &'a Path) -> &'a Path {
    let lc = Feature::left_corner();
    if !p1.contains(&lc) || p2.contains(&lc) {
        p1
    } else {
        p2
    }
}
