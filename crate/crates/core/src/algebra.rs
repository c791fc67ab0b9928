//! Finite algebras: the lattice hierarchy up to de Finetti and Cooper-Cantwell
//! algebras, algebraic consequence, and the equivalence/congruence probes that
//! decide whether a Lindenbaum-Tarski quotient is well defined.

use crate::exec::{self, Execution};
use crate::semantics::{entails, eval, Conditional, Connectives, Inference, LogicConfig, Scheme, SemanticsError, TruthValue, Valuation};
use crate::syntax::Formula;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

type Table = Vec<Vec<usize>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub carrier: Vec<String>,
    pub meet: Table,
    pub join: Table,
    pub neg: Vec<usize>,
    pub cond: Table,
    pub pseudo: Option<Table>,
    pub zero: Option<usize>,
    pub one: Option<usize>,
    pub half: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("not a lattice: the two order characterizations disagree at ({0}, {1})")]
    NotLattice(String, String),
    #[error("not a partial order: {0}")]
    NotOrder(String),
    #[error("no maximum c with {0} ⊓ c ⊑ {1}")]
    NoPseudocomplement(String, String),
    #[error("{0}")]
    Malformed(String),
    #[error("{size}^{atoms} assignments exceeds the limit of {limit}")]
    TooLarge { size: usize, atoms: usize, limit: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("this check needs Strong Kleene connectives")]
    NeedsKleene,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

fn table3(f: impl Fn(TruthValue, TruthValue) -> TruthValue) -> Table {
    TruthValue::ALL
        .iter()
        .map(|a| TruthValue::ALL.iter().map(|b| f(*a, *b).index()).collect())
        .collect()
}

fn three_element(conditional: Conditional) -> FiniteAlgebra {
    let cfg = LogicConfig::kleene(conditional);
    FiniteAlgebra {
        carrier: TruthValue::ALL.iter().map(|v| v.to_string()).collect(),
        meet: table3(|a, b| a.min(b)),
        join: table3(|a, b| a.max(b)),
        neg: TruthValue::ALL.iter().map(|v| v.neg().index()).collect(),
        cond: table3(|a, b| cfg.cond(a, b)),
        pseudo: None,
        zero: Some(0),
        one: Some(2),
        half: Some(1),
    }
}

/// {0, 1/2, 1} with min, max, and the de Finetti conditional.
pub fn canonical_df3() -> FiniteAlgebra {
    three_element(Conditional::DF)
}

/// {0, 1/2, 1} with min, max, and the Cooper-Cantwell conditional.
pub fn canonical_cc3() -> FiniteAlgebra {
    three_element(Conditional::CC)
}

/// The two-element Boolean algebra; its conditional is material.
pub fn boolean2() -> FiniteAlgebra {
    FiniteAlgebra {
        carrier: vec!["0".into(), "1".into()],
        meet: vec![vec![0, 0], vec![0, 1]],
        join: vec![vec![0, 1], vec![1, 1]],
        neg: vec![1, 0],
        cond: vec![vec![1, 1], vec![0, 1]],
        pseudo: None,
        zero: Some(0),
        one: Some(1),
        half: None,
    }
}

/// a ⊑ b, as a matrix over carrier indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order {
    pub leq: Vec<Vec<bool>>,
}

impl Order {
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }
}

impl FiniteAlgebra {
    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.carrier.iter().position(|c| c == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.carrier[i]
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.size();
        let bad = |what: &str| Err(AlgebraError::Malformed(format!("{what} table is not total over a {n}-element carrier")));
        let square = |t: &Table| t.len() == n && t.iter().all(|r| r.len() == n && r.iter().all(|x| *x < n));
        if n == 0 {
            return Err(AlgebraError::Malformed("empty carrier".into()));
        }
        for (name, t) in [("meet", &self.meet), ("join", &self.join), ("cond", &self.cond)] {
            if !square(t) {
                return bad(name);
            }
        }
        if let Some(p) = &self.pseudo {
            if !square(p) {
                return bad("pseudo");
            }
        }
        if self.neg.len() != n || self.neg.iter().any(|x| *x >= n) {
            return bad("neg");
        }
        let distinct: BTreeSet<_> = self.carrier.iter().collect();
        if distinct.len() != n {
            return Err(AlgebraError::Malformed("carrier elements must be distinct".into()));
        }
        Ok(())
    }

    /// Parses the plain-text description: `carrier:`, `meet:`, `join:`,
    /// `neg:`, `cond:`, and optionally `pseudo:`, `zero:`, `one:`, `half:`.
    /// Binary tables are row-major over the carrier order.
    pub fn parse(text: &str) -> Result<FiniteAlgebra, AlgebraError> {
        let mut sections: Vec<(String, usize, Vec<(usize, String)>)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = match line.split_once(':') {
                Some((h, r)) if is_section(h.trim()) => (Some(h.trim().to_string()), r.trim()),
                _ => (None, line),
            };
            if let Some(h) = head {
                sections.push((h, n + 1, Vec::new()));
            }
            let Some(current) = sections.last_mut() else {
                return Err(AlgebraError::Parse { line: n + 1, message: "expected a section header such as `carrier:`".into() });
            };
            for tok in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                current.2.push((n + 1, tok.to_string()));
            }
        }
        let find = |name: &str| sections.iter().find(|s| s.0 == name);
        let required = |name: &str| {
            find(name).ok_or_else(|| AlgebraError::Parse { line: text.lines().count(), message: format!("missing `{name}:` section") })
        };
        let carrier: Vec<String> = required("carrier")?.2.iter().map(|(_, t)| t.clone()).collect();
        let index = |(line, tok): &(usize, String)| {
            carrier
                .iter()
                .position(|c| c == tok)
                .ok_or_else(|| AlgebraError::Parse { line: *line, message: format!("`{tok}` is not in the carrier") })
        };
        let n = carrier.len();
        let vector = |name: &str, want: usize| -> Result<Option<Vec<usize>>, AlgebraError> {
            let Some((_, line, toks)) = find(name) else { return Ok(None) };
            if toks.len() != want {
                return Err(AlgebraError::Parse {
                    line: *line,
                    message: format!("`{name}` needs {want} entries, found {}", toks.len()),
                });
            }
            toks.iter().map(index).collect::<Result<Vec<_>, _>>().map(Some)
        };
        let matrix = |name: &str| -> Result<Option<Table>, AlgebraError> {
            Ok(vector(name, n * n)?.map(|flat| flat.chunks(n).map(|c| c.to_vec()).collect()))
        };
        let need = |name: &str, t: Option<Table>| {
            t.ok_or_else(|| AlgebraError::Parse { line: text.lines().count(), message: format!("missing `{name}:` section") })
        };
        let single = |name: &str| -> Result<Option<usize>, AlgebraError> { Ok(vector(name, 1)?.map(|v| v[0])) };
        let alg = FiniteAlgebra {
            meet: need("meet", matrix("meet")?)?,
            join: need("join", matrix("join")?)?,
            cond: need("cond", matrix("cond")?)?,
            neg: vector("neg", n)?.ok_or_else(|| AlgebraError::Parse { line: text.lines().count(), message: "missing `neg:` section".into() })?,
            pseudo: matrix("pseudo")?,
            zero: single("zero")?,
            one: single("one")?,
            half: single("half")?,
            carrier,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// The text form accepted by [`FiniteAlgebra::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("carrier: {}\n", self.carrier.join(" "));
        let row = |r: &Vec<usize>| r.iter().map(|x| self.name(*x)).collect::<Vec<_>>().join(" ");
        let mut table = |name: &str, t: &Table| {
            out.push_str(&format!("{name}:\n"));
            for r in t {
                out.push_str(&format!("  {}\n", row(r)));
            }
        };
        table("meet", &self.meet);
        table("join", &self.join);
        table("cond", &self.cond);
        if let Some(p) = &self.pseudo {
            table("pseudo", p);
        }
        out.push_str(&format!("neg: {}\n", row(&self.neg)));
        for (name, e) in [("zero", self.zero), ("one", self.one), ("half", self.half)] {
            if let Some(e) = e {
                out.push_str(&format!("{name}: {}\n", self.name(e)));
            }
        }
        out
    }
}

fn is_section(h: &str) -> bool {
    matches!(h, "carrier" | "meet" | "join" | "neg" | "cond" | "pseudo" | "zero" | "one" | "half")
}

/// a ⊑ b iff a ⊓ b = a iff a ⊔ b = b; checks the two agree and form a
/// partial order.
pub fn induced_order(a: &FiniteAlgebra) -> Result<Order, AlgebraError> {
    a.validate()?;
    let n = a.size();
    let mut leq = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            let by_meet = a.meet[x][y] == x;
            let by_join = a.join[x][y] == y;
            if by_meet != by_join {
                return Err(AlgebraError::NotLattice(a.name(x).into(), a.name(y).into()));
            }
            leq[x][y] = by_meet;
        }
    }
    for x in 0..n {
        if !leq[x][x] {
            return Err(AlgebraError::NotOrder(format!("{} is not below itself", a.name(x))));
        }
        for y in 0..n {
            if x != y && leq[x][y] && leq[y][x] {
                return Err(AlgebraError::NotOrder(format!("{} and {} are below each other", a.name(x), a.name(y))));
            }
            for z in 0..n {
                if leq[x][y] && leq[y][z] && !leq[x][z] {
                    return Err(AlgebraError::NotOrder(format!(
                        "{} ⊑ {} ⊑ {} but not {} ⊑ {}",
                        a.name(x), a.name(y), a.name(z), a.name(x), a.name(z)
                    )));
                }
            }
        }
    }
    Ok(Order { leq })
}

fn rpc(a: &FiniteAlgebra, order: &Order, x: usize, y: usize) -> Option<usize> {
    let n = a.size();
    let below: Vec<usize> = (0..n).filter(|c| order.le(a.meet[x][*c], y)).collect();
    below.iter().copied().find(|m| below.iter().all(|c| order.le(*c, *m)))
}

/// The maximum c with x ⊓ c ⊑ y. A supplied `pseudo` table is ignored here;
/// [`check_class`] cross-checks it.
pub fn relative_pseudocomplement(a: &FiniteAlgebra, x: usize, y: usize) -> Result<usize, AlgebraError> {
    let order = induced_order(a)?;
    rpc(a, &order, x, y).ok_or_else(|| AlgebraError::NoPseudocomplement(a.name(x).into(), a.name(y).into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Class {
    Lattice,
    Bounded,
    Distributive,
    Involutive,
    DeMorgan,
    Kleene,
    RelPseudo,
    L3,
    DeFinetti,
    CooperCantwell,
    LP,
}

impl Class {
    pub const ALL: [Class; 11] = [
        Class::Lattice,
        Class::Bounded,
        Class::Distributive,
        Class::Involutive,
        Class::DeMorgan,
        Class::Kleene,
        Class::RelPseudo,
        Class::L3,
        Class::DeFinetti,
        Class::CooperCantwell,
        Class::LP,
    ];

    fn parents(self) -> &'static [Class] {
        match self {
            Class::Lattice => &[],
            Class::Bounded | Class::Distributive | Class::Involutive | Class::RelPseudo => &[Class::Lattice],
            Class::DeMorgan => &[Class::Bounded, Class::Distributive, Class::Involutive],
            Class::Kleene => &[Class::DeMorgan],
            Class::L3 => &[Class::Kleene, Class::RelPseudo],
            Class::DeFinetti | Class::CooperCantwell => &[Class::L3],
            Class::LP => &[Class::Kleene],
        }
    }

    /// This class and everything it presupposes, in `Class::ALL` order.
    pub fn closure(self) -> Vec<Class> {
        let mut set = BTreeSet::new();
        let mut todo = vec![self];
        while let Some(c) = todo.pop() {
            if set.insert(c) {
                todo.extend_from_slice(c.parents());
            }
        }
        set.into_iter().collect()
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Class {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        Class::ALL
            .iter()
            .copied()
            .find(|c| c.to_string().to_ascii_lowercase() == key || (key == "l3" && *c == Class::L3))
            .ok_or_else(|| format!("unknown algebra class `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Holds { witness: Option<String> },
    Counterexample { elements: Vec<String> },
    NoWitness { reason: String },
}

impl Outcome {
    pub fn holds(&self) -> bool {
        matches!(self, Outcome::Holds { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomResult {
    pub class: Class,
    pub axiom: &'static str,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub class: Class,
    pub results: Vec<AxiomResult>,
}

impl ClassReport {
    pub fn holds(&self) -> bool {
        self.results.iter().all(|r| r.outcome.holds())
    }

    /// Whether every axiom attributed to `class` itself holds.
    pub fn class_holds(&self, class: Class) -> bool {
        self.results.iter().filter(|r| r.class == class).all(|r| r.outcome.holds())
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomResult> {
        self.results.iter().filter(|r| !r.outcome.holds())
    }
}

/// Everything an axiom instance may refer to.
struct Ctx<'a> {
    a: &'a FiniteAlgebra,
    order: Option<Order>,
    zero: Option<usize>,
    one: Option<usize>,
    rpc: Option<Table>,
}

impl Ctx<'_> {
    fn le(&self, x: usize, y: usize) -> bool {
        self.order.as_ref().is_some_and(|o| o.le(x, y))
    }
    fn m(&self, x: usize, y: usize) -> usize {
        self.a.meet[x][y]
    }
    fn j(&self, x: usize, y: usize) -> usize {
        self.a.join[x][y]
    }
    fn n(&self, x: usize) -> usize {
        self.a.neg[x]
    }
    fn r(&self, x: usize, y: usize) -> usize {
        self.rpc.as_ref().expect("pseudocomplements computed")[x][y]
    }
}

struct Axiom {
    class: Class,
    name: &'static str,
    arity: usize,
    check: fn(&Ctx, &[usize]) -> bool,
}

const AXIOMS: &[Axiom] = &[
    Axiom { class: Class::Lattice, name: "meet commutes", arity: 2, check: |c, v| c.m(v[0], v[1]) == c.m(v[1], v[0]) },
    Axiom { class: Class::Lattice, name: "join commutes", arity: 2, check: |c, v| c.j(v[0], v[1]) == c.j(v[1], v[0]) },
    Axiom {
        class: Class::Lattice,
        name: "meet associates",
        arity: 3,
        check: |c, v| c.m(v[0], c.m(v[1], v[2])) == c.m(c.m(v[0], v[1]), v[2]),
    },
    Axiom {
        class: Class::Lattice,
        name: "join associates",
        arity: 3,
        check: |c, v| c.j(v[0], c.j(v[1], v[2])) == c.j(c.j(v[0], v[1]), v[2]),
    },
    Axiom { class: Class::Lattice, name: "a ⊔ (b ⊓ a) = a", arity: 2, check: |c, v| c.j(v[0], c.m(v[1], v[0])) == v[0] },
    Axiom { class: Class::Lattice, name: "a ⊓ (b ⊔ a) = a", arity: 2, check: |c, v| c.m(v[0], c.j(v[1], v[0])) == v[0] },
    Axiom {
        class: Class::Lattice,
        name: "a ⊓ b = a iff a ⊔ b = b",
        arity: 2,
        check: |c, v| (c.m(v[0], v[1]) == v[0]) == (c.j(v[0], v[1]) == v[1]),
    },
    Axiom { class: Class::Bounded, name: "a ⊔ 0 = a", arity: 1, check: |c, v| c.zero.is_some_and(|z| c.j(v[0], z) == v[0]) },
    Axiom { class: Class::Bounded, name: "a ⊓ 1 = a", arity: 1, check: |c, v| c.one.is_some_and(|o| c.m(v[0], o) == v[0]) },
    Axiom {
        class: Class::Distributive,
        name: "a ⊓ (b ⊔ c) = (a ⊓ b) ⊔ (a ⊓ c)",
        arity: 3,
        check: |c, v| c.m(v[0], c.j(v[1], v[2])) == c.j(c.m(v[0], v[1]), c.m(v[0], v[2])),
    },
    Axiom {
        class: Class::Distributive,
        name: "a ⊔ (b ⊓ c) = (a ⊔ b) ⊓ (a ⊔ c)",
        arity: 3,
        check: |c, v| c.j(v[0], c.m(v[1], v[2])) == c.m(c.j(v[0], v[1]), c.j(v[0], v[2])),
    },
    Axiom {
        class: Class::Involutive,
        name: "a ⊑ b implies -b ⊑ -a",
        arity: 2,
        check: |c, v| !c.le(v[0], v[1]) || c.le(c.n(v[1]), c.n(v[0])),
    },
    Axiom { class: Class::Involutive, name: "--a = a", arity: 1, check: |c, v| c.n(c.n(v[0])) == v[0] },
    Axiom {
        class: Class::DeMorgan,
        name: "-(a ⊓ b) = -a ⊔ -b",
        arity: 2,
        check: |c, v| c.n(c.m(v[0], v[1])) == c.j(c.n(v[0]), c.n(v[1])),
    },
    Axiom {
        class: Class::DeMorgan,
        name: "-(a ⊔ b) = -a ⊓ -b",
        arity: 2,
        check: |c, v| c.n(c.j(v[0], v[1])) == c.m(c.n(v[0]), c.n(v[1])),
    },
    Axiom {
        class: Class::Kleene,
        name: "a ⊓ -a ⊑ b ⊔ -b",
        arity: 2,
        check: |c, v| c.le(c.m(v[0], c.n(v[0])), c.j(v[1], c.n(v[1]))),
    },
    Axiom {
        class: Class::L3,
        name: "(a ↣ 0) ⊔ (-a ↣ a) = 1",
        arity: 1,
        check: |c, v| match (c.zero, c.one, &c.rpc) {
            (Some(z), Some(o), Some(_)) => c.j(c.r(v[0], z), c.r(c.n(v[0]), v[0])) == o,
            _ => false,
        },
    },
];

fn tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(arity as u32)).map(move |mut i| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        t
    })
}

fn find_element(a: &FiniteAlgebra, given: Option<usize>, ok: impl Fn(usize) -> bool) -> Option<usize> {
    match given {
        Some(e) => Some(e),
        None => (0..a.size()).find(|e| ok(*e)),
    }
}

fn context(a: &FiniteAlgebra) -> Ctx<'_> {
    let order = induced_order(a).ok();
    let le = |x: usize, y: usize| order.as_ref().is_some_and(|o| o.le(x, y));
    let zero = find_element(a, a.zero, |e| (0..a.size()).all(|x| le(e, x)));
    let one = find_element(a, a.one, |e| (0..a.size()).all(|x| le(x, e)));
    let rpc = order.as_ref().and_then(|o| {
        (0..a.size())
            .map(|x| (0..a.size()).map(|y| rpc(a, o, x, y)).collect::<Option<Vec<_>>>())
            .collect::<Option<Table>>()
    });
    Ctx { a, order, zero, one, rpc }
}

fn names(a: &FiniteAlgebra, t: &[usize]) -> Vec<String> {
    t.iter().map(|x| a.name(*x).to_string()).collect()
}

fn check_axiom(ctx: &Ctx, ax: &Axiom) -> Outcome {
    if ctx.order.is_none() && ax.class != Class::Lattice {
        return Outcome::NoWitness { reason: "the meet and join tables do not induce a partial order".into() };
    }
    match tuples(ctx.a.size(), ax.arity).find(|t| !(ax.check)(ctx, t)) {
        None => Outcome::Holds { witness: None },
        Some(t) => Outcome::Counterexample { elements: names(ctx.a, &t) },
    }
}

/// Half-element candidates: the supplied one, or every negation fixpoint.
fn half_candidates(a: &FiniteAlgebra) -> Vec<usize> {
    match a.half {
        Some(h) => vec![h],
        None => (0..a.size()).filter(|h| a.neg[*h] == *h).collect(),
    }
}

/// Checks `cond(a, b) = op(h, a, b)` for a negation-fixed h.
fn check_half_operation(ctx: &Ctx, op: impl Fn(&Ctx, usize, usize, usize) -> Option<usize>) -> (Outcome, Outcome) {
    let a = ctx.a;
    let candidates = half_candidates(a);
    let fixed: Vec<usize> = candidates.iter().copied().filter(|h| a.neg[*h] == *h).collect();
    let fix_outcome = match (a.half, fixed.first()) {
        (_, Some(h)) => Outcome::Holds { witness: Some(a.name(*h).to_string()) },
        (Some(h), None) => Outcome::Counterexample { elements: vec![a.name(h).to_string()] },
        (None, None) => Outcome::NoWitness { reason: "no element h with -h = h".into() },
    };
    if fixed.is_empty() {
        let reason = "no negation-fixed element to build the conditional from".to_string();
        return (fix_outcome, Outcome::NoWitness { reason });
    }
    let mut first_failure = None;
    for h in &fixed {
        let bad = tuples(a.size(), 2).find(|t| op(ctx, *h, t[0], t[1]) != Some(a.cond[t[0]][t[1]]));
        match bad {
            None => return (fix_outcome, Outcome::Holds { witness: Some(format!("1/2 = {}", a.name(*h))) }),
            Some(t) if first_failure.is_none() => first_failure = Some(t),
            Some(_) => {}
        }
    }
    let t = first_failure.expect("some candidate failed");
    (fix_outcome, Outcome::Counterexample { elements: names(a, &t) })
}

fn check_lp(ctx: &Ctx) -> Outcome {
    let a = ctx.a;
    let n = a.size();
    let is_filter = |set: &[bool]| -> bool {
        let members: Vec<usize> = (0..n).filter(|x| set[*x]).collect();
        members.len() < n
            && members.iter().all(|x| (0..n).all(|y| !ctx.le(*x, y) || set[y]))
            && members.iter().all(|x| members.iter().all(|y| set[ctx.m(*x, *y)]))
            && members.iter().any(|c| set[a.neg[*c]])
    };
    let show = |set: &[bool]| {
        let ms: Vec<&str> = (0..n).filter(|x| set[*x]).map(|x| a.name(x)).collect();
        format!("filter {{{}}}", ms.join(", "))
    };
    if n <= 6 {
        for mask in 1..(1usize << n) {
            let set: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            if is_filter(&set) {
                return Outcome::Holds { witness: Some(show(&set)) };
            }
        }
        return Outcome::NoWitness { reason: "no inconsistent proper filter".into() };
    }
    for h in half_candidates(a) {
        let set: Vec<bool> = (0..n).map(|x| ctx.le(h, x)).collect();
        if is_filter(&set) {
            return Outcome::Holds { witness: Some(show(&set)) };
        }
    }
    Outcome::NoWitness { reason: "the principal filter of 1/2 is not an inconsistent proper filter".into() }
}

/// Exhaustively checks every axiom of `class` and of the classes it presupposes.
pub fn check_class(a: &FiniteAlgebra, class: Class) -> ClassReport {
    let ctx = context(a);
    let mut results = Vec::new();
    for c in class.closure() {
        let push = |results: &mut Vec<AxiomResult>, axiom, outcome| results.push(AxiomResult { class: c, axiom, outcome });
        for ax in AXIOMS.iter().filter(|ax| ax.class == c) {
            push(&mut results, ax.name, check_axiom(&ctx, ax));
        }
        match c {
            Class::Bounded => {
                if ctx.zero.is_none() || ctx.one.is_none() {
                    push(&mut results, "0 and 1 exist", Outcome::NoWitness { reason: "no bottom or top element".into() });
                }
            }
            Class::RelPseudo => {
                let outcome = if ctx.order.is_none() {
                    Outcome::NoWitness { reason: "no partial order".into() }
                } else if let Some(r) = &ctx.rpc {
                    match a.pseudo.as_ref().and_then(|p| tuples(a.size(), 2).find(|t| p[t[0]][t[1]] != r[t[0]][t[1]])) {
                        Some(t) => Outcome::Counterexample { elements: names(a, &t) },
                        None => Outcome::Holds { witness: None },
                    }
                } else {
                    let o = ctx.order.as_ref().expect("order");
                    let t = tuples(a.size(), 2).find(|t| rpc(a, o, t[0], t[1]).is_none()).expect("a missing maximum");
                    Outcome::Counterexample { elements: names(a, &t) }
                };
                push(&mut results, "x ⊓ c ⊑ y iff c ⊑ x ↣ y", outcome);
            }
            Class::DeFinetti => {
                let (fix, op) = check_half_operation(&ctx, |c, h, x, y| Some(c.j(c.m(h, c.n(x)), c.m(x, y))));
                push(&mut results, "-1/2 = 1/2", fix);
                push(&mut results, "a ⇝ b = (1/2 ⊓ -a) ⊔ (a ⊓ b)", op);
            }
            Class::CooperCantwell => {
                let (fix, op) = check_half_operation(&ctx, |c, h, x, y| {
                    let w = c.rpc.as_ref()?[c.n(x)][h];
                    Some(c.j(c.n(w), c.m(w, y)))
                });
                push(&mut results, "-1/2 = 1/2", fix);
                push(&mut results, "a ▷ b = -w(a) ⊔ (w(a) ⊓ b), w(a) = -a ↣ 1/2", op);
            }
            Class::LP => push(&mut results, "inconsistent proper filter", check_lp(&ctx)),
            _ => {}
        }
    }
    ClassReport { class, results }
}

/// True when the tuple falsifies the named quantified axiom. Lets reports be
/// re-verified independently of how they were produced.
pub fn falsifies(a: &FiniteAlgebra, axiom: &str, elements: &[String]) -> Option<bool> {
    let ctx = context(a);
    let ax = AXIOMS.iter().find(|ax| ax.name == axiom)?;
    let t: Vec<usize> = elements.iter().map(|e| a.element(e)).collect::<Option<_>>()?;
    (t.len() == ax.arity).then(|| !(ax.check)(&ctx, &t))
}

/// e(A ⇝ B) computed homomorphically; ⊤ and ⊥ go to the top and bottom.
pub fn algebra_eval(a: &FiniteAlgebra, f: &Formula, e: &BTreeMap<String, usize>) -> Result<usize, AlgebraError> {
    let ctx = context(a);
    eval_in(&ctx, f, e)
}

fn eval_in(ctx: &Ctx, f: &Formula, e: &BTreeMap<String, usize>) -> Result<usize, AlgebraError> {
    let missing = |what: &str| AlgebraError::Malformed(format!("the algebra has no {what} element"));
    Ok(match f {
        Formula::Atom(p) => *e.get(p).ok_or_else(|| SemanticsError::UnboundAtom(p.clone()))?,
        Formula::Top => ctx.one.ok_or_else(|| missing("top"))?,
        Formula::Bot => ctx.zero.ok_or_else(|| missing("bottom"))?,
        Formula::Not(x) => ctx.n(eval_in(ctx, x, e)?),
        Formula::And(x, y) => ctx.m(eval_in(ctx, x, e)?, eval_in(ctx, y, e)?),
        Formula::Or(x, y) => ctx.j(eval_in(ctx, x, e)?, eval_in(ctx, y, e)?),
        Formula::Cond(x, y) => ctx.a.cond[eval_in(ctx, x, e)?][eval_in(ctx, y, e)?],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AlgebraVerdict {
    Valid,
    /// Atom to element name.
    Countermodel(BTreeMap<String, String>),
}

impl AlgebraVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, AlgebraVerdict::Valid)
    }
}

pub const ASSIGNMENT_LIMIT: usize = 1 << 22;

/// D-consequence: every assignment that sends all premises into `designated`
/// sends some conclusion there too.
pub fn algebra_entails(inf: &Inference, a: &FiniteAlgebra, designated: &[usize]) -> Result<AlgebraVerdict, AlgebraError> {
    induced_order(a)?;
    let ctx = context(a);
    let universe = inf.atoms();
    let n = a.size();
    let total = n.checked_pow(universe.len() as u32).filter(|t| *t <= ASSIGNMENT_LIMIT);
    let Some(total) = total else {
        return Err(AlgebraError::TooLarge { size: n, atoms: universe.len(), limit: ASSIGNMENT_LIMIT });
    };
    let good: BTreeSet<usize> = designated.iter().copied().collect();
    for t in tuples(n, universe.len()).take(total) {
        let e: BTreeMap<String, usize> = universe.iter().cloned().zip(t).collect();
        let mut prem_ok = true;
        for p in &inf.premises {
            if !good.contains(&eval_in(&ctx, p, &e)?) {
                prem_ok = false;
                break;
            }
        }
        if !prem_ok {
            continue;
        }
        let mut conc_ok = false;
        for c in &inf.conclusions {
            if good.contains(&eval_in(&ctx, c, &e)?) {
                conc_ok = true;
                break;
            }
        }
        if !conc_ok {
            return Ok(AlgebraVerdict::Countermodel(e.into_iter().map(|(k, v)| (k, a.name(v).to_string())).collect()));
        }
    }
    Ok(AlgebraVerdict::Valid)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityReport {
    pub config: LogicConfig,
    /// Valuations of A, B, C making A↔B and B↔C designated but not A↔C.
    pub counterexamples: Vec<Valuation>,
}

impl TransitivityReport {
    pub fn transitive(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Tests A↔B, B↔C ⊨TT A↔C over all 27 valuations of three atoms.
pub fn check_equiv_transitivity(cfg: LogicConfig) -> Result<TransitivityReport, AlgebraError> {
    if cfg.connectives != Connectives::Kleene {
        return Err(AlgebraError::NeedsKleene);
    }
    let (a, b, c) = (Formula::atom("A"), Formula::atom("B"), Formula::atom("C"));
    let inf = Inference::new(
        vec![Formula::iff(a.clone(), b.clone()), Formula::iff(b, c.clone())],
        Formula::iff(a, c),
    );
    let counterexamples = crate::semantics::countermodels(&inf, cfg, Scheme::TT)?;
    Ok(TransitivityReport { config: cfg, counterexamples })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    Neg,
    And,
    Or,
    Cond,
}

impl Connective {
    pub const ALL: [Connective; 4] = [Connective::Neg, Connective::And, Connective::Or, Connective::Cond];
}

impl FromStr for Connective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "neg" | "not" => Ok(Connective::Neg),
            "and" => Ok(Connective::And),
            "or" => Ok(Connective::Or),
            "cond" => Ok(Connective::Cond),
            other => Err(format!("unknown connective `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceFailure {
    pub left: Formula,
    pub right: Formula,
    pub context_left: Formula,
    pub context_right: Formula,
    pub countermodel: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub config: LogicConfig,
    pub connective: Connective,
    pub pairs_checked: usize,
    pub instances_checked: usize,
    pub failure: Option<CongruenceFailure>,
}

impl CongruenceReport {
    pub fn passes(&self) -> bool {
        self.failure.is_none()
    }
}

fn f(s: &str) -> Formula {
    s.parse().expect("built-in formula")
}

/// Hand-picked candidate pairs, the (⊤, ⊥ → ⊤) witness first.
pub fn witness_battery() -> Vec<(Formula, Formula)> {
    [
        ("T", "F -> T"),
        ("p", "~~p"),
        ("p & q", "q & p"),
        ("p | q", "q | p"),
        ("~(p & q)", "~p | ~q"),
        ("~(p | q)", "~p & ~q"),
        ("p -> q -> r", "p & q -> r"),
        ("~(p -> q)", "p -> ~q"),
        ("p -> q", "~p | q"),
        ("p -> p", "T"),
        ("p & (q | r)", "p & q | p & r"),
        ("F", "~T"),
    ]
    .iter()
    .map(|(a, b)| (f(a), f(b)))
    .collect()
}

fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    let atoms = ["p", "q", "r"];
    if depth == 0 || rng.random_bool(0.3) {
        return Formula::atom(atoms[rng.random_range(0..atoms.len())]);
    }
    match rng.random_range(0..4) {
        0 => Formula::not(random_formula(rng, depth - 1)),
        1 => Formula::and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        2 => Formula::or(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
        _ => Formula::cond(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
    }
}

/// `count` pairs built from equivalence schemas (double negation, commutativity,
/// De Morgan, Import-Export, commutation with negation), each certified by the
/// oracle to have a TT-valid biconditional under `cfg`.
pub fn random_equivalent_pairs(cfg: LogicConfig, count: usize, seed: u64) -> Vec<(Formula, Formula)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < count * 50 {
        attempts += 1;
        let (x, y, z) = (random_formula(&mut rng, 2), random_formula(&mut rng, 2), random_formula(&mut rng, 1));
        let pair = match rng.random_range(0..7) {
            0 => (Formula::not(Formula::not(x.clone())), x),
            1 => (Formula::and(x.clone(), y.clone()), Formula::and(y, x)),
            2 => (Formula::or(x.clone(), y.clone()), Formula::or(y, x)),
            3 => (Formula::not(Formula::and(x.clone(), y.clone())), Formula::or(Formula::not(x), Formula::not(y))),
            4 => (Formula::not(Formula::or(x.clone(), y.clone())), Formula::and(Formula::not(x), Formula::not(y))),
            5 => (
                Formula::cond(x.clone(), Formula::cond(y.clone(), z.clone())),
                Formula::cond(Formula::and(x, y), z),
            ),
            _ => (Formula::not(Formula::cond(x.clone(), y.clone())), Formula::cond(x, Formula::not(y))),
        };
        if provably_equivalent(&pair.0, &pair.1, cfg).unwrap_or(false) {
            out.push(pair);
        }
    }
    out
}

fn provably_equivalent(a: &Formula, b: &Formula, cfg: LogicConfig) -> Result<bool, SemanticsError> {
    Ok(entails(&Inference::new(vec![], Formula::iff(a.clone(), b.clone())), cfg, Scheme::TT)?.is_valid())
}

/// One-hole contexts for `connective`, with a fixed stock of side formulas.
pub fn contexts(connective: Connective, hole: &Formula) -> Vec<Formula> {
    let sides = ["p", "q", "T", "F", "F -> T", "~p"].map(f);
    let h = hole.clone();
    match connective {
        Connective::Neg => vec![Formula::not(h)],
        Connective::And => sides.iter().flat_map(|s| [Formula::and(h.clone(), s.clone()), Formula::and(s.clone(), h.clone())]).collect(),
        Connective::Or => sides.iter().flat_map(|s| [Formula::or(h.clone(), s.clone()), Formula::or(s.clone(), h.clone())]).collect(),
        Connective::Cond => sides.iter().flat_map(|s| [Formula::cond(h.clone(), s.clone()), Formula::cond(s.clone(), h.clone())]).collect(),
    }
}

pub const RANDOM_PAIRS: usize = 200;
const PAIR_SEED: u64 = 0x5eed_0f_df;

/// Does ⊨ A↔B carry over to ⊨ s(A)↔s(B) for the one-hole contexts s of
/// `connective`? Checked over the witness battery plus certified random pairs.
pub fn check_congruence(cfg: LogicConfig, connective: Connective) -> Result<CongruenceReport, AlgebraError> {
    check_congruence_with(cfg, connective, RANDOM_PAIRS, Execution::default())
}

pub fn check_congruence_with(
    cfg: LogicConfig,
    connective: Connective,
    random_pairs: usize,
    execution: Execution,
) -> Result<CongruenceReport, AlgebraError> {
    if cfg.connectives != Connectives::Kleene {
        return Err(AlgebraError::NeedsKleene);
    }
    let mut pairs = Vec::new();
    for (a, b) in witness_battery() {
        if provably_equivalent(&a, &b, cfg)? {
            pairs.push((a, b));
        }
    }
    pairs.extend(random_equivalent_pairs(cfg, random_pairs, PAIR_SEED));
    let outcomes = exec::map(&pairs, execution, |(a, b)| -> Result<(usize, Option<CongruenceFailure>), SemanticsError> {
        let (ls, rs) = (contexts(connective, a), contexts(connective, b));
        for (cl, cr) in ls.iter().zip(&rs) {
            let inf = Inference::new(vec![], Formula::iff(cl.clone(), cr.clone()));
            if let Some(v) = entails(&inf, cfg, Scheme::TT)?.countermodel() {
                return Ok((ls.len(), Some(CongruenceFailure {
                    left: a.clone(),
                    right: b.clone(),
                    context_left: cl.clone(),
                    context_right: cr.clone(),
                    countermodel: v.clone(),
                })));
            }
        }
        Ok((ls.len(), None))
    });
    let mut instances = 0;
    let mut checked = 0;
    for o in outcomes {
        let (n, failure) = o?;
        instances += n;
        checked += 1;
        if failure.is_some() {
            return Ok(CongruenceReport { config: cfg, connective, pairs_checked: checked, instances_checked: instances, failure });
        }
    }
    Ok(CongruenceReport { config: cfg, connective, pairs_checked: checked, instances_checked: instances, failure: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraizabilityCase {
    pub b: String,
    pub c: String,
    /// e(B) = e(C).
    pub identity: bool,
    /// Value of E ↔ [(E ↔ ⊤) ∨ (E ↔ (⊥ → ⊤))] with E = B ↔ C.
    pub translation: String,
    pub translation_designated: bool,
    /// Whether E and the bracketed right-hand side take the same value.
    pub equation_holds: bool,
}

/// Evaluates the candidate translation on canonical_df3 for
/// (e(B), e(C)) = (1, 1/2), (1, 1), (1, 0).
pub fn algebraizability_counterexample_check() -> Vec<AlgebraizabilityCase> {
    let a = canonical_df3();
    let e_formula = f("B <-> C");
    let rhs = Formula::or(Formula::iff(e_formula.clone(), Formula::Top), Formula::iff(e_formula.clone(), f("F -> T")));
    let translation = Formula::iff(e_formula.clone(), rhs.clone());
    let designated = [1usize, 2];
    [(2usize, 1usize), (2, 2), (2, 0)]
        .iter()
        .map(|(b, c)| {
            let e: BTreeMap<String, usize> = [("B".to_string(), *b), ("C".to_string(), *c)].into_iter().collect();
            let value = algebra_eval(&a, &translation, &e).expect("closed evaluation");
            let lhs = algebra_eval(&a, &e_formula, &e).expect("closed evaluation");
            let right = algebra_eval(&a, &rhs, &e).expect("closed evaluation");
            AlgebraizabilityCase {
                b: a.name(*b).into(),
                c: a.name(*c).into(),
                identity: b == c,
                translation: a.name(value).into(),
                translation_designated: designated.contains(&value),
                equation_holds: lhs == right,
            }
        })
        .collect()
}

/// Maps element names of a three-element algebra back to truth values.
pub fn as_valuation(assignment: &BTreeMap<String, String>) -> Option<Valuation> {
    assignment.iter().map(|(k, v)| v.parse::<TruthValue>().ok().map(|t| (k.clone(), t))).collect()
}

/// Checks `eval` on the three-element algebra agrees with the truth tables.
pub fn agrees_with_tables(a: &FiniteAlgebra, f: &Formula, v: &Valuation, cfg: LogicConfig) -> Result<bool, AlgebraError> {
    let e: BTreeMap<String, usize> =
        v.iter().map(|(k, t)| (k.clone(), a.element(&t.to_string()).unwrap_or(usize::MAX))).collect();
    let ours = a.name(algebra_eval(a, f, &e)?).to_string();
    Ok(ours == eval(f, v, cfg)?.to_string())
}
