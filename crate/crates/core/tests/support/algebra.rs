//! Algebraic laws of the feature-structure operations, runnable through a
//! [`TestRunner`] with any number of cases.

use lcfilter_core::{Feature, FeatureDag, Path, Restrictor};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use super::closure::Theory;
use super::{dag_strategy, restrictor_strategy};

fn path() -> impl Strategy<Value = Path> {
    prop::collection::vec(prop::sample::select(&["f", "g", "lc", "1"][..]), 0..4)
        .prop_map(|v| v.into_iter().map(Feature::new).collect())
}

type Law = fn(&mut TestRunner) -> Result<(), String>;

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub const LAWS: &[(&str, Law)] = &[
    ("unify is commutative", unify_is_commutative),
    ("unify is associative", unify_is_associative),
    ("unify is idempotent", unify_is_idempotent),
    ("unify is the least upper bound", unify_is_the_least_upper_bound),
    ("unify agrees with congruence closure", unify_agrees_with_congruence_closure),
    ("subsumption is a partial order", subsumption_is_a_partial_order),
    ("subsumption agrees with fact inclusion", subsumption_agrees_with_fact_inclusion),
    ("extract undoes embed", extract_undoes_embed),
    ("extract agrees with closure", extract_agrees_with_closure),
    ("restrict generalises monotonically", restrict_generalises_monotonically),
    ("restrict composes", restrict_composes),
    ("constraints round trip", constraints_round_trip),
];

/// Runs the law called `name` on `cases` random inputs.
pub fn check(name: &str, cases: u32) -> Result<(), String> {
    let (_, law) = LAWS.iter().find(|(n, _)| *n == name).expect("known law");
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    law(&mut runner)
}

fn unify_is_commutative(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), dag_strategy()), |(a, b)| {
        prop_assert_eq!(a.unify(&b), b.unify(&a));
        Ok(())
    }))
}

fn unify_is_associative(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), dag_strategy(), dag_strategy()), |(a, b, c)| {
        let left = a.unify(&b).and_then(|ab| ab.unify(&c));
        let right = b.unify(&c).and_then(|bc| a.unify(&bc));
        prop_assert_eq!(left, right);
        Ok(())
    }))
}

fn unify_is_idempotent(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&dag_strategy(), |a| {
        prop_assert_eq!(a.unify(&a), Some(a));
        Ok(())
    }))
}

fn unify_is_the_least_upper_bound(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), dag_strategy(), dag_strategy()), |(a, b, c)| {
        match a.unify(&b) {
            Some(u) => {
                prop_assert!(a.subsumes(&u));
                prop_assert!(b.subsumes(&u));
                if a.subsumes(&c) && b.subsumes(&c) {
                    prop_assert!(u.subsumes(&c));
                }
                // Any common extension is an extension of the join.
                if let Some(upper) = c.unify(&a).and_then(|ca| ca.unify(&b)) {
                    prop_assert!(u.subsumes(&upper));
                }
            }
            None => {
                // Nothing extends both.
                prop_assert!(!(a.subsumes(&c) && b.subsumes(&c)));
            }
        }
        Ok(())
    }))
}

fn unify_agrees_with_congruence_closure(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), dag_strategy()), |(a, b)| {
        let facts: Vec<_> = a.constraints().into_iter().chain(b.constraints()).collect();
        let expected = Theory::close(&facts);
        let actual = a.unify(&b).map(|u| Theory::of(&u));
        prop_assert_eq!(actual, expected);
        Ok(())
    }))
}

fn subsumption_is_a_partial_order(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), dag_strategy(), dag_strategy()), |(a, b, c)| {
        prop_assert!(a.subsumes(&a));
        if a.subsumes(&b) && b.subsumes(&a) {
            prop_assert_eq!(&a, &b);
        }
        if a.subsumes(&b) && b.subsumes(&c) {
            prop_assert!(a.subsumes(&c));
        }
        // A chain that is guaranteed to exercise transitivity.
        if let Some(ab) = a.unify(&b) {
            if let Some(abc) = ab.unify(&c) {
                prop_assert!(a.subsumes(&ab) && ab.subsumes(&abc) && a.subsumes(&abc));
            }
        }
        Ok(())
    }))
}

fn subsumption_agrees_with_fact_inclusion(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), dag_strategy()), |(a, b)| {
        prop_assert_eq!(a.subsumes(&b), Theory::of(&b).includes(&Theory::of(&a)));
        Ok(())
    }))
}

fn extract_undoes_embed(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), path()), |(d, p)| {
        prop_assert_eq!(d.embed(&p).extract(&p), Some(d.clone()));
        prop_assert_eq!(d.embed(&Path::empty()), d);
        Ok(())
    }))
}

fn extract_agrees_with_closure(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), path()), |(d, p)| {
        let expected = Theory::of(&d).below(&p);
        prop_assert_eq!(d.extract(&p).map(|e| Theory::of(&e)), expected);
        Ok(())
    }))
}

fn restrict_generalises_monotonically(r: &mut TestRunner) -> Result<(), String> {
    let inputs = (dag_strategy(), dag_strategy(), restrictor_strategy(), restrictor_strategy());
    report(r.run(&inputs, |(a, b, r1, r2)| {
        prop_assert!(a.restrict(&r1).subsumes(&a));
        let bigger = r1.union(&r2);
        prop_assert!(a.restrict(&bigger).subsumes(&a.restrict(&r1)));
        if let Some(ab) = a.unify(&b) {
            prop_assert!(a.restrict(&r1).subsumes(&ab.restrict(&r1)));
        }
        Ok(())
    }))
}

fn restrict_composes(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&(dag_strategy(), restrictor_strategy(), restrictor_strategy()), |(d, r1, r2)| {
        prop_assert_eq!(d.restrict(&r1).restrict(&r2), d.restrict(&r1.union(&r2)));
        prop_assert_eq!(d.restrict(&Restrictor::new()), d.clone());
        Ok(())
    }))
}

fn constraints_round_trip(r: &mut TestRunner) -> Result<(), String> {
    report(r.run(&dag_strategy(), |d| {
        let cs = d.constraints();
        prop_assert_eq!(FeatureDag::from_constraints(&cs), Some(d.clone()));
        prop_assert!(cs.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(cs.iter().all(|c| d.entails(c)));
        Ok(())
    }))
}
