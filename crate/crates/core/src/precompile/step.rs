use alloc::vec;

use crate::dag::{Feature, FeatureDag, Path, Restrictor, Work};
use crate::grammar::Category;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("dag has no <lc 1> constituent")]
    MissingLeftCorner,
    #[error("left corner is {found:?} but the rule rewrites {expected}")]
    CategoryMismatch { expected: Category, found: Option<Category> },
}

pub(crate) fn lc_path() -> Path {
    Path::from(vec![Feature::left_corner()])
}

pub(crate) fn corner_path() -> Path {
    Path::from(vec![Feature::left_corner(), Feature::numbered(1)])
}

/// The category of the constituent under `<lc 1>`.
pub fn left_corner_category(dag: &FeatureDag) -> Option<&Category> {
    let mut p = corner_path();
    p.push(Feature::category());
    dag.atom_at(&p)
}

/// Moves the left-corner daughter up: the root keeps its own arcs, `lc` now
/// points at what used to be under `<lc 1>`, and the old rule node with its
/// other daughters is dropped. Sharing between the root's features and the
/// promoted daughter survives, which is how constraints travel downward.
pub fn promote(dag: &FeatureDag) -> Result<FeatureDag, StepError> {
    let corner = dag.walk(&corner_path()).ok_or(StepError::MissingLeftCorner)?;
    let mut w = Work::new();
    let root = w.import(dag);
    if let Some(arcs) = w.arcs_mut(root) {
        arcs.insert(Feature::left_corner(), root + corner);
    }
    Ok(w.finish(root).expect("promotion cannot introduce a cycle"))
}

/// One top-down propagation step: `restrict(promote(d), r) ⊔ embed(R, <lc>)`.
/// `Ok(None)` means the rule cannot be reached along this path.
pub fn propagate_step(
    dag: &FeatureDag,
    rule_dag: &FeatureDag,
    restrictor: &Restrictor,
) -> Result<Option<FeatureDag>, StepError> {
    let expected = rule_dag.category().cloned().ok_or(StepError::MissingLeftCorner)?;
    let found = left_corner_category(dag);
    if found != Some(&expected) {
        if dag.walk(&corner_path()).is_none() {
            return Err(StepError::MissingLeftCorner);
        }
        return Err(StepError::CategoryMismatch { expected, found: found.cloned() });
    }
    let promoted = promote(dag)?.restrict(restrictor);
    Ok(promoted.unify(&rule_dag.embed(&lc_path())))
}

/// The first table dag for `goal` rewritten by a rule whose left-hand side
/// is `goal`: the root carries the rule's left-hand-side features (shared
/// with `<lc>`), and `<lc>` is the rule dag.
pub fn seed_entry(goal: &Category, rule_dag: &FeatureDag, restrictor: &Restrictor) -> Option<FeatureDag> {
    if rule_dag.category() != Some(goal) {
        return None;
    }
    let mut w = Work::new();
    let rule = w.import(rule_dag);
    let root = w.add_empty();
    let shared: alloc::vec::Vec<_> = rule_dag
        .node(FeatureDag::ROOT)
        .arcs()?
        .iter()
        .filter(|(f, _)| !f.is_numbered())
        .map(|(f, &c)| (f.clone(), rule + c))
        .collect();
    let arcs = w.arcs_mut(root)?;
    arcs.extend(shared);
    arcs.insert(Feature::left_corner(), rule);
    // The same shape promotion produces: daughters stripped from <lc>.
    let bare = w.finish_with(root, &|node, f| !(node == rule && f.is_numbered())).ok()?;
    bare.restrict(restrictor).unify(&rule_dag.embed(&lc_path()))
}
