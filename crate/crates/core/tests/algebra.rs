mod support;

use support::algebra::check;

const CASES: u32 = 1000;

macro_rules! laws {
    ($($test:ident => $name:literal,)*) => {$(
        #[test]
        fn $test() {
            if let Err(e) = check($name, CASES) {
                panic!("{e}");
            }
        }
    )*};
}

laws! {
    unify_is_commutative => "unify is commutative",
    unify_is_associative => "unify is associative",
    unify_is_idempotent => "unify is idempotent",
    unify_is_the_least_upper_bound => "unify is the least upper bound",
    unify_agrees_with_congruence_closure => "unify agrees with congruence closure",
    subsumption_is_a_partial_order => "subsumption is a partial order",
    subsumption_agrees_with_fact_inclusion => "subsumption agrees with fact inclusion",
    extract_undoes_embed => "extract undoes embed",
    extract_agrees_with_closure => "extract agrees with closure",
    restrict_generalises_monotonically => "restrict generalises monotonically",
    restrict_composes => "restrict composes",
    constraints_round_trip => "constraints round trip",
}

#[test]
fn every_law_has_a_test() {
    assert_eq!(support::algebra::LAWS.len(), 12);
}
