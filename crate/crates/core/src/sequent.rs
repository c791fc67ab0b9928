//! Three-sided sequent calculi DF/TTm and CC/TTm with backward proof search.
//!
//! A sequent `Γ | Δ | Σ` holds at a valuation when some member of Γ is 0, some
//! member of Δ is 1/2, or some member of Σ is 1. Search inverts one rule at a
//! time, removing the principal formula; every rule is invertible, so a
//! saturated open branch refutes the root.

use crate::semantics::{eval, SemanticsError, TruthValue, Valuation};
use crate::syntax::{normalize_for_calculus, Formula};
use crate::Calculus;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

use TruthValue::{Half, One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Gamma,
    Delta,
    Sigma,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::Gamma, Position::Delta, Position::Sigma];

    /// The value a member at this position is "thought of as having".
    pub fn value(self) -> TruthValue {
        match self {
            Position::Gamma => Zero,
            Position::Delta => Half,
            Position::Sigma => One,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub gamma: BTreeSet<Formula>,
    pub delta: BTreeSet<Formula>,
    pub sigma: BTreeSet<Formula>,
}

impl Sequent {
    pub fn new<I, J, K>(gamma: I, delta: J, sigma: K) -> Sequent
    where
        I: IntoIterator<Item = Formula>,
        J: IntoIterator<Item = Formula>,
        K: IntoIterator<Item = Formula>,
    {
        Sequent {
            gamma: gamma.into_iter().collect(),
            delta: delta.into_iter().collect(),
            sigma: sigma.into_iter().collect(),
        }
    }

    /// Parses `a, b | c | d`. Sides are split on ` | ` with spaces, so
    /// disjunctions inside a side must be written without them or in parentheses.
    pub fn parse(text: &str) -> Result<Sequent, String> {
        let sides: Vec<&str> = text.split(" | ").collect();
        if sides.len() != 3 {
            return Err(format!("expected three sides separated by ` | `, found {}", sides.len()));
        }
        let side = |s: &str| -> Result<BTreeSet<Formula>, String> {
            s.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty() && *x != "∅")
                .map(|x| x.parse::<Formula>().map_err(|e| e.to_string()))
                .collect()
        };
        Ok(Sequent { gamma: side(sides[0])?, delta: side(sides[1])?, sigma: side(sides[2])? })
    }

    pub fn side(&self, pos: Position) -> &BTreeSet<Formula> {
        match pos {
            Position::Gamma => &self.gamma,
            Position::Delta => &self.delta,
            Position::Sigma => &self.sigma,
        }
    }

    fn side_mut(&mut self, pos: Position) -> &mut BTreeSet<Formula> {
        match pos {
            Position::Gamma => &mut self.gamma,
            Position::Delta => &mut self.delta,
            Position::Sigma => &mut self.sigma,
        }
    }

    fn with(&self, adds: &[(Position, &Formula)]) -> Sequent {
        let mut s = self.clone();
        for (pos, f) in adds {
            s.side_mut(*pos).insert((*f).clone());
        }
        s
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        for f in self.gamma.iter().chain(&self.delta).chain(&self.sigma) {
            f.collect_atoms(&mut set);
        }
        set.into_iter().collect()
    }

    pub fn union(&self, other: &Sequent) -> Sequent {
        Sequent {
            gamma: self.gamma.union(&other.gamma).cloned().collect(),
            delta: self.delta.union(&other.delta).cloned().collect(),
            sigma: self.sigma.union(&other.sigma).cloned().collect(),
        }
    }

    fn normalized(&self) -> Sequent {
        let n = |s: &BTreeSet<Formula>| s.iter().map(normalize_for_calculus).collect();
        Sequent { gamma: n(&self.gamma), delta: n(&self.delta), sigma: n(&self.sigma) }
    }

    pub fn to_json(&self) -> Value {
        let side = |s: &BTreeSet<Formula>| s.iter().map(|f| f.to_string()).collect::<Vec<_>>();
        json!({ "gamma": side(&self.gamma), "delta": side(&self.delta), "sigma": side(&self.sigma) })
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &BTreeSet<Formula>| {
            if s.is_empty() {
                "∅".to_string()
            } else {
                s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
            }
        };
        write!(f, "{} | {} | {}", side(&self.gamma), side(&self.delta), side(&self.sigma))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    SRef,
    /// ⊥ in Γ.
    Bot0,
    /// ⊤ in Σ.
    Top1,
    Neg0,
    NegHalf,
    Neg1,
    And0,
    AndHalf,
    And1,
    Cond0,
    CondHalf,
    Cond1,
    /// Drops ⊤ from Γ or Δ, or ⊥ from Δ or Σ; such members are never witnessed.
    WeakenConst,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::SRef => "SRef",
            Rule::Bot0 => "bot-0",
            Rule::Top1 => "top-1",
            Rule::Neg0 => "neg-0",
            Rule::NegHalf => "neg-1/2",
            Rule::Neg1 => "neg-1",
            Rule::And0 => "and-0",
            Rule::AndHalf => "and-1/2",
            Rule::And1 => "and-1",
            Rule::Cond0 => "cond-0",
            Rule::CondHalf => "cond-1/2",
            Rule::Cond1 => "cond-1",
            Rule::WeakenConst => "weaken-const",
        }
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, Rule::SRef | Rule::Bot0 | Rule::Top1)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequentError {
    #[error("`{0}` does not occur in position {1:?}")]
    NotPresent(Formula, Position),
    #[error("no rule has `{0}` as principal in position {1:?}")]
    Atomic(Formula, Position),
    #[error("disjunction `{0}` must be normalized before expansion")]
    Disjunction(Formula),
    #[error("`{0}` occurs in all three positions of the union sequent")]
    TripleOccurrence(Formula),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// The axiom that closes `s`, if any: a formula in all three positions, ⊥ in
/// Γ, or ⊤ in Σ.
pub fn axiom(s: &Sequent) -> Option<Rule> {
    if s.gamma.iter().any(|f| s.delta.contains(f) && s.sigma.contains(f)) {
        Some(Rule::SRef)
    } else if s.gamma.contains(&Formula::Bot) {
        Some(Rule::Bot0)
    } else if s.sigma.contains(&Formula::Top) {
        Some(Rule::Top1)
    } else {
        None
    }
}

pub fn is_axiom(s: &Sequent) -> bool {
    axiom(s).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub rule: Rule,
    pub premises: Vec<Sequent>,
}

/// The premises of the rule introducing `principal` at `pos`, with the
/// principal itself removed.
pub fn expand_sequent(s: &Sequent, principal: &Formula, pos: Position, calc: Calculus) -> Result<Expansion, SequentError> {
    if !s.side(pos).contains(principal) {
        return Err(SequentError::NotPresent(principal.clone(), pos));
    }
    let mut base = s.clone();
    base.side_mut(pos).remove(principal);
    use Position::{Delta as D, Gamma as G, Sigma as S};
    let one = |rule, adds: &[(Position, &Formula)]| Expansion { rule, premises: vec![base.with(adds)] };
    let many = |rule, sets: &[&[(Position, &Formula)]]| Expansion {
        rule,
        premises: sets.iter().map(|adds| base.with(adds)).collect(),
    };
    let atomic = || Err(SequentError::Atomic(principal.clone(), pos));
    Ok(match (principal, pos) {
        (Formula::Top, G | D) | (Formula::Bot, D | S) => one(Rule::WeakenConst, &[]),
        (Formula::Atom(_) | Formula::Top | Formula::Bot, _) => return atomic(),
        (Formula::Or(..), _) => return Err(SequentError::Disjunction(principal.clone())),
        (Formula::Not(a), G) => one(Rule::Neg0, &[(S, a)]),
        (Formula::Not(a), D) => one(Rule::NegHalf, &[(D, a)]),
        (Formula::Not(a), S) => one(Rule::Neg1, &[(G, a)]),
        (Formula::And(a, b), G) => one(Rule::And0, &[(G, a), (G, b)]),
        (Formula::And(a, b), D) => many(Rule::AndHalf, &[&[(D, a), (S, a)], &[(D, b), (S, b)], &[(D, a), (D, b)]]),
        (Formula::And(a, b), S) => many(Rule::And1, &[&[(S, a)], &[(S, b)]]),
        (Formula::Cond(a, b), G) => match calc {
            Calculus::Cc => many(Rule::Cond0, &[&[(D, a), (S, a)], &[(G, b)]]),
            Calculus::Df => many(Rule::Cond0, &[&[(S, a)], &[(G, b)]]),
        },
        (Formula::Cond(a, b), D) => match calc {
            Calculus::Cc => one(Rule::CondHalf, &[(G, a), (D, b)]),
            Calculus::Df => one(Rule::CondHalf, &[(G, a), (D, a), (D, b)]),
        },
        (Formula::Cond(a, b), S) => match calc {
            Calculus::Cc => many(Rule::Cond1, &[&[(D, a), (S, a)], &[(S, b)]]),
            Calculus::Df => many(Rule::Cond1, &[&[(S, a)], &[(S, b)]]),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Axiom(Rule),
    /// Nothing left to decompose and no axiom applies.
    Stuck,
    Inference { rule: Rule, principal: Formula, position: Position },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchNode {
    pub sequent: Sequent,
    pub step: Step,
    pub premises: Vec<SearchNode>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTree {
    pub root: SearchNode,
    pub calculus: Calculus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Derivation(SearchTree),
    Countermodel { valuation: Valuation, union: Sequent, tree: SearchTree },
}

impl SearchOutcome {
    pub fn is_derivation(&self) -> bool {
        matches!(self, SearchOutcome::Derivation(_))
    }

    pub fn countermodel(&self) -> Option<&Valuation> {
        match self {
            SearchOutcome::Derivation(_) => None,
            SearchOutcome::Countermodel { valuation, .. } => Some(valuation),
        }
    }

    pub fn tree(&self) -> &SearchTree {
        match self {
            SearchOutcome::Derivation(t) | SearchOutcome::Countermodel { tree: t, .. } => t,
        }
    }
}

/// Occurrences a rule can act on.
fn candidates(s: &Sequent) -> Vec<(Formula, Position)> {
    let mut out = Vec::new();
    for pos in Position::ALL {
        for f in s.side(pos) {
            let weakenable = matches!((f, pos), (Formula::Top, Position::Gamma | Position::Delta))
                || matches!((f, pos), (Formula::Bot, Position::Delta | Position::Sigma));
            if !f.is_atomic() || weakenable {
                out.push((f.clone(), pos));
            }
        }
    }
    out
}

/// Highest complexity first, then Γ before Δ before Σ, then by printed form.
pub fn default_principal(s: &Sequent) -> Option<(Formula, Position)> {
    candidates(s)
        .into_iter()
        .map(|(f, pos)| (std::cmp::Reverse(f.complexity()), pos, f.to_string(), f))
        .min()
        .map(|(_, pos, _, f)| (f, pos))
}

/// Chooses the principal occurrence at each step; `None` defers to
/// [`default_principal`].
pub type Strategy<'a> = &'a dyn Fn(&Sequent) -> Option<(Formula, Position)>;

fn grow(s: Sequent, calc: Calculus, strategy: Strategy<'_>) -> SearchNode {
    if let Some(rule) = axiom(&s) {
        return SearchNode { sequent: s, step: Step::Axiom(rule), premises: vec![] };
    }
    let chosen = strategy(&s)
        .filter(|(f, pos)| candidates(&s).contains(&(f.clone(), *pos)))
        .or_else(|| default_principal(&s));
    let Some((principal, position)) = chosen else {
        return SearchNode { sequent: s, step: Step::Stuck, premises: vec![] };
    };
    let exp = expand_sequent(&s, &principal, position, calc).expect("candidate occurrence");
    let premises = exp.premises.into_iter().map(|p| grow(p, calc, strategy)).collect();
    SearchNode { sequent: s, step: Step::Inference { rule: exp.rule, principal, position }, premises }
}

pub fn search(s: &Sequent, calc: Calculus) -> Result<SearchOutcome, SequentError> {
    search_with_strategy(s, calc, &|_| None)
}

pub fn search_with_strategy(s: &Sequent, calc: Calculus, strategy: Strategy<'_>) -> Result<SearchOutcome, SequentError> {
    let root = s.normalized();
    let tree = SearchTree { root: grow(root.clone(), calc, strategy), calculus: calc };
    let Some(branch) = tree.open_branch() else {
        return Ok(SearchOutcome::Derivation(tree));
    };
    let union = branch.iter().fold(Sequent::default(), |acc, n| acc.union(&n.sequent));
    let valuation = extract_countermodel(&union, &root.atoms())?;
    for node in &branch {
        assert!(
            !sequent_satisfied(&valuation, &node.sequent, calc)?,
            "countermodel {valuation} satisfies {} on the open branch",
            node.sequent
        );
    }
    Ok(SearchOutcome::Countermodel { valuation, union, tree })
}

/// Gives each atom the first value in 0, 1/2, 1 that its occurrences in the
/// union do not forbid; atoms that never occur get 1/2.
pub fn extract_countermodel(union: &Sequent, universe: &[String]) -> Result<Valuation, SequentError> {
    if let Some(f) = union.gamma.iter().find(|f| union.delta.contains(*f) && union.sigma.contains(*f)) {
        return Err(SequentError::TripleOccurrence(f.clone()));
    }
    let mut atoms: BTreeSet<String> = universe.iter().cloned().collect();
    atoms.extend(union.atoms());
    let mut v = Valuation::new();
    for p in atoms {
        let f = Formula::Atom(p.clone());
        let forbidden: Vec<TruthValue> =
            Position::ALL.iter().filter(|pos| union.side(**pos).contains(&f)).map(|pos| pos.value()).collect();
        let value = if forbidden.is_empty() {
            Half
        } else {
            *TruthValue::ALL.iter().find(|x| !forbidden.contains(x)).expect("not in all three positions")
        };
        v.set(&p, value);
    }
    Ok(v)
}

pub fn sequent_satisfied(v: &Valuation, s: &Sequent, calc: Calculus) -> Result<bool, SemanticsError> {
    let cfg = calc.config();
    for pos in Position::ALL {
        for f in s.side(pos) {
            if eval(f, v, cfg)? == pos.value() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Searches `premises | conclusions | conclusions`.
pub fn derives(premises: &[Formula], conclusions: &[Formula], calc: Calculus) -> Result<SearchOutcome, SequentError> {
    let s = Sequent::new(premises.iter().cloned(), conclusions.iter().cloned(), conclusions.iter().cloned());
    search(&s, calc)
}

impl SearchNode {
    pub fn is_leaf(&self) -> bool {
        self.premises.is_empty()
    }

    pub fn rule(&self) -> Option<Rule> {
        match &self.step {
            Step::Axiom(r) => Some(*r),
            Step::Inference { rule, .. } => Some(*rule),
            Step::Stuck => None,
        }
    }
}

impl SearchTree {
    pub fn is_derivation(&self) -> bool {
        self.open_branch().is_none()
    }

    /// Root-to-leaf path ending in the first stuck leaf, depth first.
    pub fn open_branch(&self) -> Option<Vec<&SearchNode>> {
        fn walk<'a>(n: &'a SearchNode, path: &mut Vec<&'a SearchNode>) -> bool {
            path.push(n);
            if n.step == Step::Stuck || n.premises.iter().any(|c| walk(c, path)) {
                return true;
            }
            path.pop();
            false
        }
        let mut path = Vec::new();
        walk(&self.root, &mut path).then_some(path)
    }

    pub fn leaves(&self) -> Vec<&SearchNode> {
        fn walk<'a>(n: &'a SearchNode, out: &mut Vec<&'a SearchNode>) {
            if n.is_leaf() {
                out.push(n);
            }
            for c in &n.premises {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Rule names in pre-order.
    pub fn rules(&self) -> Vec<&'static str> {
        fn walk(n: &SearchNode, out: &mut Vec<&'static str>) {
            out.push(n.rule().map_or("stuck", Rule::name));
            for c in &n.premises {
                walk(c, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Nested rule shape, e.g. `neg-0[cond-1/2[SRef]]`.
    pub fn shape(&self) -> String {
        fn walk(n: &SearchNode) -> String {
            let name = n.rule().map_or("stuck", Rule::name);
            if n.premises.is_empty() {
                name.to_string()
            } else {
                let inner: Vec<_> = n.premises.iter().map(walk).collect();
                format!("{name}[{}]", inner.join(", "))
            }
        }
        walk(&self.root)
    }

    /// Flat node list in pre-order; `premises` holds node ids.
    pub fn to_json(&self) -> Value {
        fn walk(n: &SearchNode, nodes: &mut Vec<Value>) -> usize {
            let id = nodes.len();
            nodes.push(Value::Null);
            let premises: Vec<usize> = n.premises.iter().map(|c| walk(c, nodes)).collect();
            let (rule, principal, position) = match &n.step {
                Step::Axiom(r) => (Value::from(r.name()), Value::Null, Value::Null),
                Step::Stuck => (Value::Null, Value::Null, Value::Null),
                Step::Inference { rule, principal, position } => {
                    (Value::from(rule.name()), Value::from(principal.to_string()), json!(position))
                }
            };
            nodes[id] = json!({
                "id": id,
                "sequent": n.sequent.to_json(),
                "text": n.sequent.to_string(),
                "rule": rule,
                "principal": principal,
                "position": position,
                "premises": premises,
            });
            id
        }
        let mut nodes = Vec::new();
        walk(&self.root, &mut nodes);
        json!({ "calculus": self.calculus, "root": 0, "nodes": nodes })
    }

    /// Premises side by side above a bar, conclusion centred below, rule name
    /// to the right of the bar.
    pub fn render_text(&self) -> String {
        let block = render_block(&self.root);
        let lines: Vec<&str> = block.lines.iter().map(|l| l.trim_end()).collect();
        lines.join("\n") + "\n"
    }
}

struct Block {
    lines: Vec<String>,
    width: usize,
    /// Column span of the bottom line's sequent.
    anchor: (usize, usize),
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, w: usize) -> String {
    format!("{s}{}", " ".repeat(w.saturating_sub(width(s))))
}

fn render_block(n: &SearchNode) -> Block {
    const GAP: usize = 3;
    let conclusion = n.sequent.to_string();
    let cw = width(&conclusion);
    let label = n.rule().map_or("?", Rule::name);
    let blocks: Vec<Block> = n.premises.iter().map(render_block).collect();
    let height = blocks.iter().map(|b| b.lines.len()).max().unwrap_or(0);
    let mut above = vec![String::new(); height];
    let (mut s0, mut s1, mut x) = (0, cw, 0);
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            x += GAP;
        }
        let shift = height - b.lines.len();
        for (row, line) in above.iter_mut().enumerate() {
            let cell = if row >= shift { b.lines[row - shift].as_str() } else { "" };
            *line = format!("{}{}", pad(line, x), pad(cell, b.width));
        }
        if i == 0 {
            s0 = x + b.anchor.0;
        }
        s1 = x + b.anchor.1;
        x += b.width;
    }
    let mut start = (s0 + s1) as isize / 2 - cw as isize / 2;
    let shift = if start < 0 { (-start) as usize } else { 0 };
    start += shift as isize;
    let start = start as usize;
    let (s0, s1) = (s0 + shift, s1 + shift);
    let bar_start = s0.min(start);
    let bar_end = s1.max(start + cw);
    let mut lines: Vec<String> = above.into_iter().map(|l| format!("{}{l}", " ".repeat(shift))).collect();
    lines.push(format!("{}{} {label}", " ".repeat(bar_start), "─".repeat(bar_end - bar_start)));
    lines.push(format!("{}{conclusion}", " ".repeat(start)));
    let total = lines.iter().map(|l| width(l)).max().unwrap_or(0);
    let lines = lines.into_iter().map(|l| pad(&l, total)).collect();
    Block { lines, width: total, anchor: (start, start + cw) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn seq(s: &str) -> Sequent {
        Sequent::parse(s).unwrap()
    }

    #[test]
    fn axioms() {
        assert_eq!(axiom(&seq("p | p, q | p")), Some(Rule::SRef));
        assert_eq!(axiom(&seq("p | q | r")), None);
        assert_eq!(axiom(&seq("F | ∅ | ∅")), Some(Rule::Bot0));
        assert_eq!(axiom(&seq("∅ | ∅ | T")), Some(Rule::Top1));
    }

    #[test]
    fn expansion_arity() {
        let s = seq("∅ | p & q | ∅");
        let e = expand_sequent(&s, &parse("p & q").unwrap(), Position::Delta, Calculus::Cc).unwrap();
        assert_eq!(e.rule, Rule::AndHalf);
        assert_eq!(e.premises, vec![seq("∅ | p | p"), seq("∅ | q | q"), seq("∅ | p, q | ∅")]);
        let s = seq("∅ | p -> q | ∅");
        let e = expand_sequent(&s, &parse("p -> q").unwrap(), Position::Delta, Calculus::Df).unwrap();
        assert_eq!(e.premises, vec![seq("p | p, q | ∅")]);
        assert!(matches!(
            expand_sequent(&s, &parse("p").unwrap(), Position::Delta, Calculus::Df),
            Err(SequentError::NotPresent(..))
        ));
    }

    #[test]
    fn adjunction_is_derivable() {
        let out = search(&seq("p, q | p & q | p & q"), Calculus::Cc).unwrap();
        assert!(out.is_derivation());
    }

    #[test]
    fn countermodel_picks() {
        let u: Vec<String> = vec!["p".into(), "q".into(), "r".into()];
        let v = extract_countermodel(&seq("p | q | r"), &u).unwrap();
        assert_eq!(v.to_string(), "{p:1/2, q:0, r:0}");
        assert_eq!(extract_countermodel(&seq("∅ | p | ∅"), &[]).unwrap().to_string(), "{p:0}");
        assert_eq!(extract_countermodel(&seq("p | p | ∅"), &[]).unwrap().to_string(), "{p:1}");
        assert!(extract_countermodel(&seq("p | p | p"), &[]).is_err());
    }

    #[test]
    fn constants_are_pruned() {
        let out = search(&seq("T | F | p"), Calculus::Df).unwrap();
        assert_eq!(out.countermodel().unwrap().to_string(), "{p:0}");
        assert_eq!(out.tree().rules(), vec!["weaken-const", "weaken-const", "stuck"]);
    }
}
