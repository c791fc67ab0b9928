//! Tableau calculi DF/TTt and CC/TTt.
//!
//! Each node carries the whole label list of its branch position. A child is
//! obtained by replacing the leftmost compound label with one alternative of
//! its rule, so printed trees look like the hand-drawn ones: the expanded label
//! disappears and its components take its place.

use crate::exec::{self, Execution};
use crate::semantics::{eval, LogicConfig, TruthValue, Valuation};
use crate::syntax::{normalize_for_calculus, Formula};
use crate::Calculus;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

use TruthValue::{Half, One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Label {
    pub formula: Formula,
    pub value: TruthValue,
}

impl Label {
    pub fn new(formula: Formula, value: TruthValue) -> Label {
        Label { formula, value }
    }

    /// Constants whose value contradicts every evaluation.
    fn is_absurd_constant(&self) -> bool {
        matches!((&self.formula, self.value), (Formula::Bot, One | Half) | (Formula::Top, Zero | Half))
    }

    fn is_expandable(&self) -> bool {
        !self.formula.is_atomic()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.formula, self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("no rule applies to `{0}`")]
    Atomic(Label),
    #[error("{found} premises exceeds the limit of {limit}")]
    TooManyPremises { found: usize, limit: usize },
    #[error("the branch is closed")]
    ClosedBranch,
    #[error("the quasi-evaluation disagrees with the completed valuation on `{0}`")]
    Incompatible(Formula),
    #[error("disjunction `{0}` must be normalized before expansion")]
    Disjunction(Formula),
}

fn l(f: &Formula, v: TruthValue) -> Label {
    Label::new(f.clone(), v)
}

/// The branch alternatives of the rule for `label`. Constants with an
/// impossible value yield no alternatives, which closes the branch.
pub fn expand_label(label: &Label, calc: Calculus) -> Result<Vec<Vec<Label>>, TableauError> {
    if label.is_absurd_constant() {
        return Ok(vec![]);
    }
    let v = label.value;
    Ok(match &label.formula {
        Formula::Atom(_) | Formula::Top | Formula::Bot => return Err(TableauError::Atomic(label.clone())),
        Formula::Or(..) => return Err(TableauError::Disjunction(label.formula.clone())),
        Formula::Not(a) => vec![vec![l(a, v.neg())]],
        Formula::And(a, b) => match v {
            One => vec![vec![l(a, One), l(b, One)]],
            Zero => vec![vec![l(a, Zero)], vec![l(b, Zero)]],
            Half => vec![
                vec![l(a, One), l(b, Half)],
                vec![l(a, Half), l(b, Half)],
                vec![l(a, Half), l(b, One)],
            ],
        },
        Formula::Cond(a, b) => match (calc, v) {
            (Calculus::Cc, One) => vec![vec![l(a, One), l(b, One)], vec![l(a, Half), l(b, One)]],
            (Calculus::Cc, Zero) => vec![vec![l(a, One), l(b, Zero)], vec![l(a, Half), l(b, Zero)]],
            (Calculus::Cc, Half) => vec![vec![l(a, Zero)], vec![l(b, Half)]],
            (Calculus::Df, One) => vec![vec![l(a, One), l(b, One)]],
            (Calculus::Df, Zero) => vec![vec![l(a, One), l(b, Zero)]],
            (Calculus::Df, Half) => vec![vec![l(a, Zero)], vec![l(a, Half)], vec![l(b, Half)]],
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableauNode {
    pub labels: Vec<Label>,
    pub closed: bool,
    pub children: Vec<TableauNode>,
}

impl TableauNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn to_json(&self) -> Value {
        json!({
            "labels": self.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "closed": self.closed,
            "children": self.children.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    pub root: TableauNode,
    pub calculus: Calculus,
}

fn grow(labels: Vec<Label>, mut seen: HashMap<Formula, TruthValue>, calc: Calculus) -> TableauNode {
    let mut closed = false;
    for lab in &labels {
        if lab.is_absurd_constant() {
            closed = true;
        }
        match seen.get(&lab.formula) {
            Some(v) if *v != lab.value => closed = true,
            _ => {
                seen.insert(lab.formula.clone(), lab.value);
            }
        }
    }
    let target = labels.iter().position(Label::is_expandable);
    let Some(i) = target.filter(|_| !closed) else {
        return TableauNode { labels, closed, children: vec![] };
    };
    let alternatives = expand_label(&labels[i], calc).expect("compound label");
    let children = alternatives
        .into_iter()
        .map(|alt| {
            let mut next = labels[..i].to_vec();
            next.extend(alt);
            next.extend_from_slice(&labels[i + 1..]);
            grow(next, seen.clone(), calc)
        })
        .collect();
    TableauNode { labels, closed: false, children }
}

/// Fully expands a tableau from the given root labels. Disjunctions are
/// rewritten away first.
pub fn build_tableau(root_labels: &[Label], calc: Calculus) -> Tableau {
    let labels = root_labels
        .iter()
        .map(|lab| Label::new(normalize_for_calculus(&lab.formula), lab.value))
        .collect();
    Tableau { root: grow(labels, HashMap::new(), calc), calculus: calc }
}

impl Tableau {
    pub fn is_closed(&self) -> bool {
        fn all_closed(n: &TableauNode) -> bool {
            if n.is_leaf() {
                n.closed
            } else {
                n.children.iter().all(all_closed)
            }
        }
        all_closed(&self.root)
    }

    /// Root-to-leaf path of the first open leaf, depth first.
    pub fn open_branch(&self) -> Option<Vec<&TableauNode>> {
        fn walk<'a>(n: &'a TableauNode, path: &mut Vec<&'a TableauNode>) -> bool {
            path.push(n);
            if n.is_leaf() {
                if !n.closed {
                    return true;
                }
            } else if n.children.iter().any(|c| walk(c, path)) {
                return true;
            }
            path.pop();
            false
        }
        let mut path = Vec::new();
        walk(&self.root, &mut path).then_some(path)
    }

    pub fn leaf_count(&self) -> usize {
        fn count(n: &TableauNode) -> usize {
            if n.is_leaf() {
                1
            } else {
                n.children.iter().map(count).sum()
            }
        }
        count(&self.root)
    }

    pub fn node_count(&self) -> usize {
        fn count(n: &TableauNode) -> usize {
            1 + n.children.iter().map(count).sum::<usize>()
        }
        count(&self.root)
    }

    pub fn to_json(&self) -> Value {
        self.root.to_json()
    }

    /// Indented outline, one node per line; closed leaves are marked `×`,
    /// open ones `○`.
    pub fn render_text(&self) -> String {
        fn walk(n: &TableauNode, depth: usize, out: &mut String) {
            let labels: Vec<_> = n.labels.iter().map(|l| l.to_string()).collect();
            let mark = match (n.is_leaf(), n.closed) {
                (true, true) => "  ×",
                (true, false) => "  ○",
                _ => "",
            };
            out.push_str(&format!("{}{}{}\n", "  ".repeat(depth), labels.join(" ; "), mark));
            for c in &n.children {
                walk(c, depth + 1, out);
            }
        }
        let mut out = String::new();
        walk(&self.root, 0, &mut out);
        out
    }
}

/// Partial, table-compatible assignment of values to formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiEvaluation {
    pub calculus: Calculus,
    pub values: BTreeMap<Formula, TruthValue>,
}

impl QuasiEvaluation {
    pub fn new(calculus: Calculus, values: impl IntoIterator<Item = (Formula, TruthValue)>) -> QuasiEvaluation {
        QuasiEvaluation { calculus, values: values.into_iter().collect() }
    }

    pub fn get(&self, f: &Formula) -> Option<TruthValue> {
        self.values.get(f).copied()
    }

    /// Each assigned compound can take its value for some choice of its
    /// unassigned immediate parts.
    pub fn is_compatible(&self) -> bool {
        let cfg = self.calculus.config();
        let options = |f: &Formula| -> Vec<TruthValue> {
            match self.get(f) {
                Some(v) => vec![v],
                None => TruthValue::ALL.to_vec(),
            }
        };
        self.values.iter().all(|(f, v)| match f {
            Formula::Atom(_) => true,
            Formula::Top => *v == One,
            Formula::Bot => *v == Zero,
            Formula::Not(a) => options(a).iter().any(|x| x.neg() == *v),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Cond(a, b) => {
                let op = |x, y| match f {
                    Formula::And(..) => cfg.and(x, y),
                    Formula::Or(..) => cfg.or(x, y),
                    _ => cfg.cond(x, y),
                };
                options(a).iter().any(|x| options(b).iter().any(|y| op(*x, *y) == *v))
            }
        })
    }
}

/// Collects every label on a branch.
pub fn induced_quasi_evaluation(branch: &[&TableauNode], calc: Calculus) -> Result<QuasiEvaluation, TableauError> {
    let mut values = BTreeMap::new();
    for node in branch {
        if node.closed {
            return Err(TableauError::ClosedBranch);
        }
        for lab in &node.labels {
            if lab.is_absurd_constant() {
                return Err(TableauError::ClosedBranch);
            }
            if let Some(old) = values.insert(lab.formula.clone(), lab.value) {
                if old != lab.value {
                    return Err(TableauError::ClosedBranch);
                }
            }
        }
    }
    Ok(QuasiEvaluation { calculus: calc, values })
}

/// Extends `q` to a total valuation on `universe`, filling unmentioned atoms
/// with 1/2, and checks that the extension agrees with `q` everywhere.
pub fn complete_valuation(q: &QuasiEvaluation, universe: &[String]) -> Result<Valuation, TableauError> {
    let mut v = Valuation::uniform(universe, Half);
    for (f, val) in &q.values {
        if let Formula::Atom(p) = f {
            v.set(p, *val);
        }
    }
    let cfg: LogicConfig = q.calculus.config();
    for (f, val) in &q.values {
        if eval(f, &v, cfg).ok() != Some(*val) {
            return Err(TableauError::Incompatible(f.clone()));
        }
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deduction {
    /// Every root tableau closed, in root enumeration order.
    Derivable { tableaux: Vec<Tableau> },
    Open { tableau: Tableau, branch: Vec<Label>, valuation: Valuation },
}

impl Deduction {
    pub fn is_derivable(&self) -> bool {
        matches!(self, Deduction::Derivable { .. })
    }

    pub fn countermodel(&self) -> Option<&Valuation> {
        match self {
            Deduction::Derivable { .. } => None,
            Deduction::Open { valuation, .. } => Some(valuation),
        }
    }
}

pub const DEFAULT_PREMISE_LIMIT: usize = 16;

/// Root label lists for a deduction: each premise at 1/2 or 1 (first premise
/// most significant, 1/2 before 1), the conclusion at 0.
pub fn root_labels(premises: &[Formula], conclusion: &Formula) -> Vec<Vec<Label>> {
    let k = premises.len();
    (0..1usize << k)
        .map(|mask| {
            let mut labels: Vec<Label> = premises
                .iter()
                .enumerate()
                .map(|(i, p)| Label::new(p.clone(), if mask >> (k - 1 - i) & 1 == 1 { One } else { Half }))
                .collect();
            labels.push(Label::new(conclusion.clone(), Zero));
            labels
        })
        .collect()
}

pub fn deduce(premises: &[Formula], conclusion: &Formula, calc: Calculus) -> Result<Deduction, TableauError> {
    deduce_with(premises, conclusion, calc, DEFAULT_PREMISE_LIMIT, Execution::default())
}

pub fn deduce_with(
    premises: &[Formula],
    conclusion: &Formula,
    calc: Calculus,
    premise_limit: usize,
    execution: Execution,
) -> Result<Deduction, TableauError> {
    if premises.len() > premise_limit {
        return Err(TableauError::TooManyPremises { found: premises.len(), limit: premise_limit });
    }
    let roots = root_labels(premises, conclusion);
    let tableaux = exec::map(&roots, execution, |r| build_tableau(r, calc));
    let Some(open) = tableaux.iter().find(|t| !t.is_closed()) else {
        return Ok(Deduction::Derivable { tableaux });
    };
    let path = open.open_branch().expect("open tableau has an open branch");
    let q = induced_quasi_evaluation(&path, calc)?;
    let mut universe = BTreeSet::new();
    for f in premises.iter().chain(std::iter::once(conclusion)) {
        universe.extend(f.atoms());
    }
    let universe: Vec<String> = universe.into_iter().collect();
    let valuation = complete_valuation(&q, &universe)?;
    let mut branch: Vec<Label> = Vec::new();
    for l in path.iter().flat_map(|n| n.labels.iter()) {
        if !branch.contains(l) {
            branch.push(l.clone());
        }
    }
    Ok(Deduction::Open { tableau: open.clone(), branch, valuation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn lab(s: &str, v: TruthValue) -> Label {
        Label::new(parse(s).unwrap(), v)
    }

    #[test]
    fn constants_close() {
        let t = build_tableau(&[lab("F", Half)], Calculus::Cc);
        assert!(t.is_closed());
        let t = build_tableau(&[lab("F", Zero), lab("T", One)], Calculus::Cc);
        assert!(!t.is_closed());
        assert_eq!(t.node_count(), 1);
    }

    #[test]
    fn closure_sees_expanded_ancestors() {
        // ~p:1 becomes p:0; the ~p label itself is gone from the leaf but
        // still clashes with ~p:0 elsewhere on the branch.
        let t = build_tableau(&[lab("~p", One), lab("~~p", Half)], Calculus::Df);
        assert!(t.is_closed());
    }

    #[test]
    fn atomic_labels_have_no_rule() {
        assert!(matches!(expand_label(&lab("p", One), Calculus::Cc), Err(TableauError::Atomic(_))));
        assert_eq!(expand_label(&lab("T", Zero), Calculus::Cc), Ok(vec![]));
    }

    #[test]
    fn root_order() {
        let r = root_labels(&[parse("a").unwrap(), parse("b").unwrap()], &parse("c").unwrap());
        let values: Vec<Vec<TruthValue>> = r.iter().map(|ls| ls.iter().map(|l| l.value).collect()).collect();
        assert_eq!(
            values,
            vec![vec![Half, Half, Zero], vec![Half, One, Zero], vec![One, Half, Zero], vec![One, One, Zero]]
        );
    }
}
