//! Generators and reference implementations shared by the property suites.
#![allow(dead_code)]

pub mod algebra;
pub mod closure;

use lcfilter_core::precompile::{propagate_step, seed_entry};
use lcfilter_core::{
    Atom, Category, Constraint, Feature, FeatureDag, Grammar, GrammarError, LexEntry, Path, ReachabilityTable, Rule, RuleId,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FEATURES: [&str; 3] = ["f", "g", "h"];
const ATOMS: [&str; 2] = ["a", "b"];

fn path_strategy(max_len: usize) -> impl Strategy<Value = Path> {
    prop::collection::vec(prop::sample::select(&FEATURES[..]), 1..=max_len)
        .prop_map(|names| names.into_iter().map(Feature::new).collect())
}

pub fn constraint_strategy() -> impl Strategy<Value = Constraint> {
    prop_oneof![
        2 => (path_strategy(3), path_strategy(3)).prop_map(|(p, q)| Constraint::Equal(p, q)),
        3 => (path_strategy(3), prop::sample::select(&ATOMS[..])).prop_map(|(p, a)| Constraint::Constant(p, Atom::new(a))),
        1 => path_strategy(3).prop_map(Constraint::Defined),
    ]
}

/// Folds constraints into a dag, skipping any that would clash.
pub fn dag_from(constraints: &[Constraint]) -> FeatureDag {
    constraints.iter().fold(FeatureDag::empty(), |d, c| {
        FeatureDag::from_constraints([c]).and_then(|e| d.unify(&e)).unwrap_or(d)
    })
}

/// Small dags over three features and two atoms, sharing included.
pub fn dag_strategy() -> impl Strategy<Value = FeatureDag> {
    prop::collection::vec(constraint_strategy(), 0..6).prop_map(|cs| dag_from(&cs))
}

pub fn restrictor_strategy() -> impl Strategy<Value = lcfilter_core::Restrictor> {
    prop::sample::subsequence(&FEATURES[..], 0..=FEATURES.len())
        .prop_map(|fs| fs.into_iter().map(Feature::new).collect())
}

const CATEGORIES: [&str; 4] = ["S", "A", "B", "D"];
const GRAMMAR_FEATURES: [&str; 5] = ["f", "g", "h", "k", "m"];
const VALUES: [&str; 2] = ["x", "y"];

#[derive(Clone, Copy, Debug)]
pub struct GrammarShape {
    /// Keep the grammar parseable: no unary cycles, and the left-recursive
    /// cycle consumes input on every pass.
    pub parseable: bool,
}

/// A random grammar with at most six rules and five non-`cat` features,
/// containing a direct or indirect left-recursive cycle whose equations
/// lengthen a feature path on every pass.
pub fn random_grammar(seed: u64, shape: GrammarShape) -> Grammar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_cats = rng.gen_range(2..=CATEGORIES.len());
    let cats = &CATEGORIES[..n_cats];
    let n_feats = rng.gen_range(1..=GRAMMAR_FEATURES.len());
    let feats = &GRAMMAR_FEATURES[..n_feats];

    let mut rules: Vec<(usize, Vec<usize>, Vec<Constraint>)> = Vec::new();
    let min_arity = if shape.parseable { 2 } else { 1 };
    let tail = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        let extra = rng.gen_range(min_arity - 1..=2);
        (0..extra).map(|_| rng.gen_range(0..n_cats)).collect()
    };
    let growing = |rng: &mut ChaCha8Rng| -> Constraint {
        let p = random_path(rng, feats, 1);
        let q = random_path(rng, feats, 1);
        let long = p.concat(&q);
        if rng.gen_bool(0.5) {
            Constraint::Equal(long, Path::from(vec![Feature::numbered(1)]).concat(&p))
        } else {
            Constraint::Equal(p, Path::from(vec![Feature::numbered(1)]).concat(&long))
        }
    };
    if rng.gen_bool(0.5) {
        let mut rhs = vec![0];
        rhs.extend(tail(&mut rng));
        rules.push((0, rhs, vec![growing(&mut rng)]));
    } else {
        let other = rng.gen_range(1..n_cats);
        let mut rhs = vec![other];
        rhs.extend(tail(&mut rng));
        rules.push((0, rhs, vec![growing(&mut rng)]));
        let mut rhs = vec![0];
        rhs.extend(tail(&mut rng));
        let eq = random_share(&mut rng, feats, rhs.len());
        rules.push((other, rhs, vec![eq]));
    }
    let total = rng.gen_range(rules.len()..=6);
    while rules.len() < total {
        let lhs = rng.gen_range(0..n_cats);
        let arity = rng.gen_range(1..=3);
        let mut rhs: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..n_cats)).collect();
        if shape.parseable && arity == 1 && rhs[0] <= lhs {
            // Unary rules only point to later categories, so they never cycle.
            if lhs + 1 >= n_cats {
                rhs.push(rng.gen_range(0..n_cats));
            } else {
                rhs[0] = rng.gen_range(lhs + 1..n_cats);
            }
        }
        if !shape.parseable && arity == 1 && rhs[0] == lhs {
            rhs.push(rng.gen_range(0..n_cats));
        }
        let n_eq = rng.gen_range(0..=3);
        let eqs = (0..n_eq)
            .map(|_| {
                if rng.gen_bool(0.6) {
                    random_share(&mut rng, feats, rhs.len())
                } else {
                    let who = rng.gen_range(0..=rhs.len());
                    let mut p = if who == 0 { Path::empty() } else { Path::from(vec![Feature::numbered(who)]) };
                    p = p.concat(&random_path(&mut rng, feats, 2));
                    Constraint::Constant(p, Atom::new(VALUES.choose(&mut rng).unwrap()))
                }
            })
            .collect();
        rules.push((lhs, rhs, eqs));
    }

    let mut lexicon = Vec::new();
    for cat in cats {
        for w in 0..rng.gen_range(1..=2) {
            let form = format!("{}{}", cat.to_lowercase(), w);
            let eqs: Vec<Constraint> = (0..rng.gen_range(0..=2))
                .map(|_| {
                    Constraint::Constant(random_path(&mut rng, feats, 2), Atom::new(VALUES.choose(&mut rng).unwrap()))
                })
                .collect();
            lexicon.push(lex_entry(&form, cat, eqs));
        }
    }

    let rules = rules
        .into_iter()
        .enumerate()
        .map(|(i, (lhs, rhs, eqs))| {
            build_rule(&format!("r{i}"), cats[lhs], rhs.iter().map(|&c| cats[c]).collect(), eqs)
        })
        .collect();
    Grammar::new(Atom::new(cats[0]), rules, lexicon).expect("generated grammars are valid")
}

fn random_path(rng: &mut ChaCha8Rng, feats: &[&str], max: usize) -> Path {
    let len = rng.gen_range(1..=max);
    (0..len).map(|_| Feature::new(feats.choose(rng).unwrap())).collect()
}

fn random_share(rng: &mut ChaCha8Rng, feats: &[&str], arity: usize) -> Constraint {
    let d = rng.gen_range(1..=arity);
    let p = random_path(rng, feats, 2);
    let q = random_path(rng, feats, 2);
    Constraint::Equal(p, Path::from(vec![Feature::numbered(d)]).concat(&q))
}

/// Drops equations from the end until the rule is consistent.
fn build_rule(id: &str, lhs: &str, rhs: Vec<&str>, mut eqs: Vec<Constraint>) -> Rule {
    loop {
        let rhs_atoms = rhs.iter().map(|c| Atom::new(c)).collect();
        match Rule::new(RuleId::new(id), Atom::new(lhs), rhs_atoms, eqs.clone()) {
            Ok(rule) => return rule,
            Err(GrammarError::InconsistentEquations { .. }) => {
                eqs.pop();
            }
            Err(e) => panic!("{e}"),
        }
    }
}

fn lex_entry(form: &str, cat: &str, mut eqs: Vec<Constraint>) -> LexEntry {
    loop {
        match LexEntry::new(form, Atom::new(cat), &eqs) {
            Ok(e) => return e,
            Err(_) => {
                eqs.pop();
            }
        }
    }
}

/// Up to eight tokens: half the time a random word string, otherwise the
/// yield of a random left-to-right expansion of the start category.
pub fn random_sentence(grammar: &Grammar, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<&String> = grammar.lexicon.keys().collect();
    if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=8);
        return (0..n).map(|_| (*words.choose(&mut rng).unwrap()).clone()).collect();
    }
    let mut frontier = vec![grammar.start.clone()];
    for _ in 0..6 {
        let i = rng.gen_range(0..frontier.len());
        let expansions: Vec<&Rule> = grammar.rules.iter().filter(|r| r.lhs == frontier[i]).collect();
        if let Some(rule) = expansions.choose(&mut rng) {
            if frontier.len() - 1 + rule.rhs.len() <= 8 {
                frontier.splice(i..=i, rule.rhs.iter().cloned());
            }
        }
    }
    frontier
        .iter()
        .map(|cat| {
            let forms: Vec<&String> = grammar
                .lexicon
                .iter()
                .filter(|(_, es)| es.iter().any(|e| &e.category == cat))
                .map(|(f, _)| f)
                .collect();
            (*forms.choose(&mut rng).expect("every category has a word")).clone()
        })
        .collect()
}

/// Every unrestricted propagation along a left-corner rule chain of length
/// at most `depth` from each goal, with the chain that produced it.
pub fn unrolled(grammar: &Grammar, depth: usize) -> Vec<(Category, Vec<usize>, FeatureDag)> {
    let mut out = Vec::new();
    let mut frontier = Vec::new();
    for goal in grammar.goal_categories() {
        for r in grammar.rules_with_lhs(&goal) {
            if let Some(d) = seed_entry(&goal, grammar.rules[r].dag(), &Default::default()) {
                frontier.push((goal.clone(), vec![r], d));
            }
        }
    }
    for _ in 1..depth {
        let mut next = Vec::new();
        for (goal, chain, d) in &frontier {
            let corner = grammar.rules[*chain.last().unwrap()].left_corner();
            for r in grammar.rules_with_lhs(corner) {
                if let Some(e) = propagate_step(d, grammar.rules[r].dag(), &Default::default()).unwrap() {
                    let mut c = chain.clone();
                    c.push(r);
                    next.push((goal.clone(), c, e));
                }
            }
        }
        out.append(&mut frontier);
        frontier = next;
    }
    out.append(&mut frontier);
    out
}

pub fn covered(table: &ReachabilityTable, goal: &Category, dag: &FeatureDag) -> bool {
    table.row(goal).iter().any(|e| e.dag.subsumes(dag))
}
