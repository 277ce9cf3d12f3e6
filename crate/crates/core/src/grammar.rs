//! Grammar rules, the lexicon, and the textual grammar format.
//!
//! ```text
//! start NP
//! rule r1: NP0 -> NP1 POS NP2
//!   <NP0 head> = <NP2 head>
//!   <NP0 head sem owner> = <NP1 head sem>
//! lex Kris: NP  <head sem pred> = kris
//! lex 's: POS
//! ```
//!
//! Constituent labels are category names with optional trailing digits; the
//! digits only tell repeated categories apart. Rule equations start with a
//! label, lexical equations are relative to the word itself. `#` starts a
//! comment.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use crate::dag::{Atom, Constraint, DagBuilder, Feature, FeatureDag, Path};

/// Category symbols are the values of the `cat` feature.
pub type Category = Atom;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(Arc<str>);

impl RuleId {
    pub fn new(id: &str) -> Self {
        RuleId(Arc::from(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: rule {rule} mentions undeclared constituent {label}")]
    UndeclaredConstituent { line: usize, rule: String, label: String },
    #[error("line {line}: duplicate rule id {id}")]
    DuplicateRuleId { line: usize, id: String },
    #[error("{what} has inconsistent equations")]
    InconsistentEquations { what: String },
    #[error("invalid grammar: {0}")]
    Validation(String),
}

/// A production with its equations, compiled into a rule dag: the root is
/// the left-hand side and arcs `1`..`n` lead to the right-hand side
/// constituents.
#[derive(Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: RuleId,
    pub lhs: Category,
    pub rhs: Vec<Category>,
    /// Equations over rule-dag paths (`<head>` for the left-hand side,
    /// `<2 head>` for the second daughter).
    pub equations: Vec<Constraint>,
    dag: FeatureDag,
}

impl Rule {
    pub fn new(
        id: RuleId,
        lhs: Category,
        rhs: Vec<Category>,
        equations: Vec<Constraint>,
    ) -> Result<Rule, GrammarError> {
        if rhs.is_empty() {
            return Err(GrammarError::Validation(format!("rule {id} has an empty right-hand side")));
        }
        let mut rule = Rule { id, lhs, rhs, equations, dag: FeatureDag::empty() };
        rule.dag = rule_to_dag(&rule)?;
        Ok(rule)
    }

    pub fn dag(&self) -> &FeatureDag {
        &self.dag
    }

    pub fn left_corner(&self) -> &Category {
        &self.rhs[0]
    }

    pub fn arity(&self) -> usize {
        self.rhs.len()
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} ->", self.id, self.lhs)?;
        for c in &self.rhs {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

/// Builds the rule dag: categories on the root and on each numbered
/// daughter, then every equation installed as sharing or a constant.
pub fn rule_to_dag(rule: &Rule) -> Result<FeatureDag, GrammarError> {
    let cat = Path::from(vec![Feature::category()]);
    let mut b = DagBuilder::new();
    let inconsistent = || GrammarError::InconsistentEquations { what: format!("rule {}", rule.id) };
    b.constant(&cat, rule.lhs.clone()).map_err(|_| inconsistent())?;
    for (i, c) in rule.rhs.iter().enumerate() {
        let daughter = Path::from(vec![Feature::numbered(i + 1)]);
        b.constant(&daughter.concat(&cat), c.clone()).map_err(|_| inconsistent())?;
    }
    for eq in &rule.equations {
        let ok = match eq {
            Constraint::Equal(p, q) => b.equate(p, q),
            Constraint::Constant(p, a) => b.constant(p, a.clone()),
            Constraint::Defined(p) => b.define(p),
        };
        ok.map_err(|_| inconsistent())?;
    }
    b.build().map_err(|_| inconsistent())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LexEntry {
    pub form: String,
    pub category: Category,
    pub dag: FeatureDag,
}

impl LexEntry {
    pub fn new(form: &str, category: Category, equations: &[Constraint]) -> Result<Self, GrammarError> {
        let mut b = DagBuilder::new();
        let inconsistent = || GrammarError::InconsistentEquations { what: format!("lexical entry {form}") };
        b.constant(&Path::from(vec![Feature::category()]), category.clone())
            .map_err(|_| inconsistent())?;
        for eq in equations {
            let ok = match eq {
                Constraint::Equal(p, q) => b.equate(p, q),
                Constraint::Constant(p, a) => b.constant(p, a.clone()),
                Constraint::Defined(p) => b.define(p),
            };
            ok.map_err(|_| inconsistent())?;
        }
        let dag = b.build().map_err(|_| inconsistent())?;
        Ok(LexEntry { form: form.to_string(), category, dag })
    }
}

#[derive(Clone, Debug)]
pub struct Grammar {
    pub start: Category,
    pub rules: Vec<Rule>,
    pub lexicon: BTreeMap<String, Vec<LexEntry>>,
    /// Every non-structural feature name used by a rule or lexical entry,
    /// `cat` included. Fixed once the grammar is built.
    pub features: BTreeSet<Feature>,
}

impl Grammar {
    pub fn new(start: Category, rules: Vec<Rule>, lexicon: Vec<LexEntry>) -> Result<Grammar, GrammarError> {
        if rules.is_empty() {
            return Err(GrammarError::Validation("a grammar needs at least one rule".into()));
        }
        let mut ids = BTreeSet::new();
        for rule in &rules {
            if !ids.insert(rule.id.clone()) {
                return Err(GrammarError::DuplicateRuleId { line: 0, id: rule.id.to_string() });
            }
            if rule.rhs.len() == 1 && rule.rhs[0] == rule.lhs && rule.equations.is_empty() {
                return Err(GrammarError::Validation(format!(
                    "rule {} rewrites {} to itself with no equations",
                    rule.id, rule.lhs
                )));
            }
        }
        let mut features: BTreeSet<Feature> = BTreeSet::new();
        features.insert(Feature::category());
        for dag in rules.iter().map(Rule::dag).chain(lexicon.iter().map(|e| &e.dag)) {
            features.extend(dag.labels().into_iter().filter(|f| !f.is_structural()));
        }
        let mut lex: BTreeMap<String, Vec<LexEntry>> = BTreeMap::new();
        for entry in lexicon {
            lex.entry(entry.form.clone()).or_default().push(entry);
        }
        Ok(Grammar { start, rules, lexicon: lex, features })
    }

    pub fn rule_index(&self, id: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.id.as_str() == id)
    }

    pub fn rules_with_lhs<'a>(&'a self, category: &'a Category) -> impl Iterator<Item = usize> + 'a {
        self.rules.iter().enumerate().filter(move |(_, r)| &r.lhs == category).map(|(i, _)| i)
    }

    pub fn rules_with_left_corner<'a>(&'a self, category: &'a Category) -> impl Iterator<Item = usize> + 'a {
        self.rules.iter().enumerate().filter(move |(_, r)| r.left_corner() == category).map(|(i, _)| i)
    }

    /// Categories that get a row in the reachability table: every
    /// left-hand side and every left corner.
    pub fn goal_categories(&self) -> BTreeSet<Category> {
        self.rules.iter().flat_map(|r| [r.lhs.clone(), r.left_corner().clone()]).collect()
    }

    /// Features a restrictor may contain.
    pub fn restrictable_features(&self) -> impl Iterator<Item = &Feature> {
        self.features.iter().filter(|f| !f.is_category())
    }
}

/// Parses grammar text; see the module documentation for the format.
pub fn load_grammar(text: &str) -> Result<Grammar, GrammarError> {
    let mut loader = Loader::default();
    for (index, raw) in text.lines().enumerate() {
        loader.line(index + 1, raw)?;
    }
    loader.finish()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Path(Vec<String>),
    Eq,
    Arrow,
    Colon,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax { line, column, message: message.into() }
}

fn tokenize(line: usize, text: &str) -> Result<Vec<(usize, Tok)>, GrammarError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '<' {
            let close = chars[i..].iter().position(|&c| c == '>').map(|p| p + i);
            let Some(close) = close else {
                return Err(syntax(line, column, "unterminated path"));
            };
            let inner: String = chars[i + 1..close].iter().collect();
            let names: Vec<String> = inner.split_whitespace().map(String::from).collect();
            if names.is_empty() {
                return Err(syntax(line, column, "empty path"));
            }
            out.push((column, Tok::Path(names)));
            i = close + 1;
        } else if c == '>' {
            return Err(syntax(line, column, "unexpected '>'"));
        } else if c == '=' {
            out.push((column, Tok::Eq));
            i += 1;
        } else if c == ':' {
            out.push((column, Tok::Colon));
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((column, Tok::Arrow));
            i += 2;
        } else {
            let start = i;
            while i < chars.len() {
                let c = chars[i];
                if c.is_whitespace() || matches!(c, '<' | '>' | '=' | ':') {
                    break;
                }
                if c == '-' && chars.get(i + 1) == Some(&'>') {
                    break;
                }
                i += 1;
            }
            out.push((column, Tok::Word(chars[start..i].iter().collect())));
        }
    }
    Ok(out)
}

/// `NP0` → `NP`; a label that is all digits keeps them.
fn label_category(label: &str) -> &str {
    let stem = label.trim_end_matches(|c: char| c.is_ascii_digit());
    if stem.is_empty() {
        label
    } else {
        stem
    }
}

struct RuleBlock {
    line: usize,
    id: String,
    lhs: String,
    labels: Vec<String>,
    rhs: Vec<String>,
    equations: Vec<Constraint>,
}

struct LexBlock {
    form: String,
    category: String,
    equations: Vec<Constraint>,
}

enum Block {
    Rule(RuleBlock),
    Lex(LexBlock),
}

#[derive(Default)]
struct Loader {
    start: Option<String>,
    rules: Vec<Rule>,
    rule_ids: BTreeSet<String>,
    lexicon: Vec<LexEntry>,
    open: Option<Block>,
}

impl Loader {
    fn line(&mut self, line: usize, raw: &str) -> Result<(), GrammarError> {
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            return Ok(());
        }
        let tokens = tokenize(line, text)?;
        if text.starts_with(char::is_whitespace) {
            return match self.open.as_mut() {
                Some(block) => parse_equations(line, block, &tokens),
                None => Err(syntax(line, tokens[0].0, "equation outside of a rule or lexical entry")),
            };
        }
        self.close()?;
        let (column, keyword) = match &tokens[0] {
            (column, Tok::Word(w)) => (*column, w.as_str()),
            (column, _) => return Err(syntax(line, *column, "expected 'start', 'rule' or 'lex'")),
        };
        match keyword {
            "start" => match tokens.as_slice() {
                [_, (_, Tok::Word(c))] => {
                    self.start = Some(c.clone());
                    Ok(())
                }
                _ => Err(syntax(line, column, "expected 'start CATEGORY'")),
            },
            "rule" => self.rule_header(line, &tokens),
            "lex" => self.lex_header(line, &tokens),
            other => Err(syntax(line, column, format!("unknown keyword '{other}'"))),
        }
    }

    fn rule_header(&mut self, line: usize, tokens: &[(usize, Tok)]) -> Result<(), GrammarError> {
        let at = |i: usize| tokens.get(i).map_or(1, |t| t.0);
        let Some((_, Tok::Word(id))) = tokens.get(1) else {
            return Err(syntax(line, at(1), "expected a rule id"));
        };
        if !matches!(tokens.get(2), Some((_, Tok::Colon))) {
            return Err(syntax(line, at(2), "expected ':' after the rule id"));
        }
        let Some((_, Tok::Word(lhs))) = tokens.get(3) else {
            return Err(syntax(line, at(3), "expected a left-hand side"));
        };
        if !matches!(tokens.get(4), Some((_, Tok::Arrow))) {
            return Err(syntax(line, at(4), "expected '->'"));
        }
        let mut rhs = Vec::new();
        let mut i = 5;
        while let Some((_, Tok::Word(w))) = tokens.get(i) {
            rhs.push(w.clone());
            i += 1;
        }
        if rhs.is_empty() {
            return Err(syntax(line, at(5), "a rule needs at least one right-hand side constituent"));
        }
        if !self.rule_ids.insert(id.clone()) {
            return Err(GrammarError::DuplicateRuleId { line, id: id.clone() });
        }
        let mut labels = vec![lhs.clone()];
        labels.extend(rhs.iter().cloned());
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label) {
                return Err(GrammarError::Validation(format!(
                    "line {line}: rule {id} uses constituent label {label} twice; add digits to tell them apart"
                )));
            }
        }
        let mut block = Block::Rule(RuleBlock {
            line,
            id: id.clone(),
            lhs: lhs.clone(),
            labels,
            rhs,
            equations: Vec::new(),
        });
        parse_equations(line, &mut block, &tokens[i..])?;
        self.open = Some(block);
        Ok(())
    }

    fn lex_header(&mut self, line: usize, tokens: &[(usize, Tok)]) -> Result<(), GrammarError> {
        let at = |i: usize| tokens.get(i).map_or(1, |t| t.0);
        let Some((_, Tok::Word(form))) = tokens.get(1) else {
            return Err(syntax(line, at(1), "expected a word form"));
        };
        if !matches!(tokens.get(2), Some((_, Tok::Colon))) {
            return Err(syntax(line, at(2), "expected ':' after the word form"));
        }
        let Some((_, Tok::Word(category))) = tokens.get(3) else {
            return Err(syntax(line, at(3), "expected a category"));
        };
        let mut block = Block::Lex(LexBlock {
            form: form.clone(),
            category: category.clone(),
            equations: Vec::new(),
        });
        parse_equations(line, &mut block, &tokens[4..])?;
        self.open = Some(block);
        Ok(())
    }

    fn close(&mut self) -> Result<(), GrammarError> {
        match self.open.take() {
            None => Ok(()),
            Some(Block::Rule(block)) => {
                let rhs = block.rhs.iter().map(|l| Atom::new(label_category(l))).collect();
                let rule = Rule::new(
                    RuleId::new(&block.id),
                    Atom::new(label_category(&block.lhs)),
                    rhs,
                    block.equations,
                )
                .map_err(|e| match e {
                    GrammarError::InconsistentEquations { what } => {
                        GrammarError::InconsistentEquations { what: format!("{what} (line {})", block.line) }
                    }
                    e => e,
                })?;
                self.rules.push(rule);
                Ok(())
            }
            Some(Block::Lex(block)) => {
                let entry = LexEntry::new(&block.form, Atom::new(&block.category), &block.equations)?;
                self.lexicon.push(entry);
                Ok(())
            }
        }
    }

    fn finish(mut self) -> Result<Grammar, GrammarError> {
        self.close()?;
        let start = match self.start {
            Some(s) => Atom::new(&s),
            None => match self.rules.first() {
                Some(r) => r.lhs.clone(),
                None => return Err(GrammarError::Validation("a grammar needs at least one rule".into())),
            },
        };
        Grammar::new(start, self.rules, self.lexicon)
    }
}

fn parse_equations(line: usize, block: &mut Block, tokens: &[(usize, Tok)]) -> Result<(), GrammarError> {
    let mut i = 0;
    while i < tokens.len() {
        let (column, tok) = &tokens[i];
        let Tok::Path(left) = tok else {
            return Err(syntax(line, *column, "expected a path like <label feature ...>"));
        };
        let left = resolve(line, block, left)?;
        match tokens.get(i + 1) {
            Some((_, Tok::Eq)) => {}
            Some((column, _)) => return Err(syntax(line, *column, "expected '='")),
            None => return Err(syntax(line, column + 1, "expected '=' after the path")),
        }
        let equation = match tokens.get(i + 2) {
            Some((_, Tok::Path(right))) => Constraint::Equal(left, resolve(line, block, right)?),
            Some((_, Tok::Word(value))) => Constraint::Constant(left, Atom::new(value)),
            Some((column, _)) => return Err(syntax(line, *column, "expected a path or a constant")),
            None => return Err(syntax(line, column + 1, "missing right-hand side of equation")),
        };
        match block {
            Block::Rule(r) => r.equations.push(equation),
            Block::Lex(l) => l.equations.push(equation),
        }
        i += 3;
    }
    Ok(())
}

fn resolve(line: usize, block: &Block, names: &[String]) -> Result<Path, GrammarError> {
    match block {
        Block::Lex(_) => Ok(names.iter().map(|n| Feature::new(n)).collect()),
        Block::Rule(rule) => {
            let label = &names[0];
            let Some(position) = rule.labels.iter().position(|l| l == label) else {
                return Err(GrammarError::UndeclaredConstituent {
                    line,
                    rule: rule.id.clone(),
                    label: label.clone(),
                });
            };
            let mut path = Path::empty();
            if position > 0 {
                path.push(Feature::numbered(position));
            }
            for name in &names[1..] {
                path.push(Feature::new(name));
            }
            Ok(path)
        }
    }
}
