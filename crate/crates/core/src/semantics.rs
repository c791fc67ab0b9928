//! Truth-table semantics over {0, 1/2, 1}.
//!
//! Everything here is decided by brute force, which is why the provers are
//! tested against it.

use crate::exec::{self, Execution};
use crate::syntax::Formula;
use num_rational::BigRational;
use num_traits::{One as _, ToPrimitive, Zero as _};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruthValue {
    Zero,
    Half,
    One,
}

use TruthValue::{Half, One, Zero as Nil};

impl TruthValue {
    /// Enumeration order: 0, 1/2, 1.
    pub const ALL: [TruthValue; 3] = [Nil, Half, One];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> TruthValue {
        TruthValue::ALL[i]
    }

    pub fn neg(self) -> TruthValue {
        match self {
            Nil => One,
            Half => Half,
            One => Nil,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Nil => 0.0,
            Half => 0.5,
            One => 1.0,
        }
    }

    /// Member of S = {1}.
    pub fn is_strict(self) -> bool {
        self == One
    }

    /// Member of T = {1/2, 1}.
    pub fn is_tolerant(self) -> bool {
        self != Nil
    }

    pub fn is_classical(self) -> bool {
        self != Half
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Nil => "0",
            Half => "1/2",
            One => "1",
        })
    }
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a truth value: `{0}` (use 0, 1/2 or 1)")]
pub struct BadValue(pub String);

impl FromStr for TruthValue {
    type Err = BadValue;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" | "0.0" => Ok(Nil),
            "1/2" | "0.5" | ".5" | "½" => Ok(Half),
            "1" | "1.0" => Ok(One),
            other => Err(BadValue(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Conditional {
    DF,
    CC,
    F,
    J1,
    J2,
    MAT,
}

impl Conditional {
    pub const ALL: [Conditional; 6] = [
        Conditional::DF,
        Conditional::CC,
        Conditional::F,
        Conditional::J1,
        Conditional::J2,
        Conditional::MAT,
    ];
    pub const JEFFREY: [Conditional; 4] =
        [Conditional::CC, Conditional::F, Conditional::J1, Conditional::J2];

    /// The 3x3 table indexed `[antecedent][consequent]` in value order 0, 1/2, 1.
    /// `None` for MAT, which is defined from the other connectives.
    pub fn table(self) -> Option<[[TruthValue; 3]; 3]> {
        // Every tabled conditional is 1/2 on a false antecedent and copies the
        // consequent on a true one; only the middle row varies.
        let middle = match self {
            Conditional::DF => [Half, Half, Half],
            Conditional::CC => [Nil, Half, One],
            Conditional::F => [Nil, Half, Half],
            Conditional::J1 => [Nil, One, Half],
            Conditional::J2 => [Nil, One, One],
            Conditional::MAT => return None,
        };
        Some([[Half, Half, Half], middle, [Nil, Half, One]])
    }

    pub fn is_jeffrey(self) -> bool {
        Conditional::JEFFREY.contains(&self)
    }
}

impl fmt::Display for Conditional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Conditional {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "df" => Ok(Conditional::DF),
            "cc" => Ok(Conditional::CC),
            "f" => Ok(Conditional::F),
            "j1" => Ok(Conditional::J1),
            "j2" => Ok(Conditional::J2),
            "mat" => Ok(Conditional::MAT),
            other => Err(format!("unknown conditional `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Connectives {
    Kleene,
    CooperQuasi,
}

impl Connectives {
    pub fn and(self, a: TruthValue, b: TruthValue) -> TruthValue {
        match self {
            Connectives::Kleene => a.min(b),
            Connectives::CooperQuasi => match (a, b) {
                (Nil, _) | (_, Nil) => Nil,
                (Half, Half) => Half,
                _ => One,
            },
        }
    }

    pub fn or(self, a: TruthValue, b: TruthValue) -> TruthValue {
        match self {
            Connectives::Kleene => a.max(b),
            Connectives::CooperQuasi => match (a, b) {
                (One, _) | (_, One) => One,
                (Half, Half) => Half,
                _ => Nil,
            },
        }
    }
}

impl FromStr for Connectives {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "kleene" | "sk" => Ok(Connectives::Kleene),
            "cooper" | "quasi" => Ok(Connectives::CooperQuasi),
            other => Err(format!("unknown connective suite `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LogicConfig {
    pub conditional: Conditional,
    pub connectives: Connectives,
}

impl LogicConfig {
    pub const fn kleene(conditional: Conditional) -> LogicConfig {
        LogicConfig { conditional, connectives: Connectives::Kleene }
    }

    pub const fn quasi(conditional: Conditional) -> LogicConfig {
        LogicConfig { conditional, connectives: Connectives::CooperQuasi }
    }

    pub fn not(self, a: TruthValue) -> TruthValue {
        a.neg()
    }

    pub fn and(self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.connectives.and(a, b)
    }

    pub fn or(self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.connectives.or(a, b)
    }

    pub fn cond(self, a: TruthValue, b: TruthValue) -> TruthValue {
        match self.conditional.table() {
            Some(t) => t[a.index()][b.index()],
            None => self.or(a.neg(), b),
        }
    }
}

impl fmt::Display for LogicConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.connectives {
            Connectives::Kleene => write!(f, "{}", self.conditional),
            Connectives::CooperQuasi => write!(f, "{}/quasi", self.conditional),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    SS,
    TT,
    ST,
    TS,
    SSandTT,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::SS, Scheme::TT, Scheme::ST, Scheme::TS, Scheme::SSandTT];

    /// Does `premises`/`conclusions` refute the scheme at this point? For
    /// `SSandTT` a point refutes if it refutes either component.
    fn refutes(self, premises: &[TruthValue], conclusions: &[TruthValue]) -> bool {
        let simple = |prem: fn(TruthValue) -> bool, conc: fn(TruthValue) -> bool| {
            premises.iter().all(|v| prem(*v)) && !conclusions.iter().any(|v| conc(*v))
        };
        match self {
            Scheme::SS => simple(TruthValue::is_strict, TruthValue::is_strict),
            Scheme::TT => simple(TruthValue::is_tolerant, TruthValue::is_tolerant),
            Scheme::ST => simple(TruthValue::is_strict, TruthValue::is_tolerant),
            Scheme::TS => simple(TruthValue::is_tolerant, TruthValue::is_strict),
            Scheme::SSandTT => {
                Scheme::SS.refutes(premises, conclusions) || Scheme::TT.refutes(premises, conclusions)
            }
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::SSandTT => "SS∩TT",
            other => return write!(f, "{other:?}"),
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ss" => Ok(Scheme::SS),
            "tt" => Ok(Scheme::TT),
            "st" => Ok(Scheme::ST),
            "ts" => Ok(Scheme::TS),
            "ss&tt" | "ssandtt" | "ss+tt" | "ss∩tt" => Ok(Scheme::SSandTT),
            other => Err(format!("unknown validity scheme `{other}`")),
        }
    }
}

/// Total assignment of truth values to a finite set of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(BTreeMap<String, TruthValue>);

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn uniform(atoms: &[String], v: TruthValue) -> Valuation {
        Valuation(atoms.iter().map(|a| (a.clone(), v)).collect())
    }

    pub fn get(&self, atom: &str) -> Option<TruthValue> {
        self.0.get(atom).copied()
    }

    pub fn set(&mut self, atom: &str, v: TruthValue) {
        self.0.insert(atom.to_string(), v);
    }

    pub fn with(mut self, atom: &str, v: TruthValue) -> Valuation {
        self.set(atom, v);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, TruthValue)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Values of the universe's atoms at point `index` of the enumeration
    /// (first atom most significant, values 0 < 1/2 < 1).
    pub fn nth(universe: &[String], index: usize) -> Valuation {
        let digits = digits(universe.len(), index);
        Valuation(universe.iter().cloned().zip(digits).collect())
    }

    /// Parses `p=1,q=0.5` or `p=1/2`.
    pub fn parse_assignment(text: &str) -> Result<Valuation, String> {
        let mut v = Valuation::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) =
                part.split_once('=').ok_or_else(|| format!("expected atom=value, found `{part}`"))?;
            let value: TruthValue = value.parse().map_err(|e: BadValue| e.to_string())?;
            v.set(name.trim(), value);
        }
        Ok(v)
    }
}

impl FromIterator<(String, TruthValue)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (String, TruthValue)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{v}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.0.iter().map(|(k, v)| (k, v.to_string())))
    }
}

fn digits(n: usize, mut index: usize) -> Vec<TruthValue> {
    let mut out = vec![Nil; n];
    for slot in out.iter_mut().rev() {
        *slot = TruthValue::from_index(index % 3);
        index /= 3;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("atom `{0}` has no value")]
    UnboundAtom(String),
    #[error("{found} atoms exceeds the limit of {limit}")]
    TooManyAtoms { found: usize, limit: usize },
    #[error("multiple conclusions are only defined for TT, not {0}")]
    MultiConclusion(Scheme),
    #[error("an inference needs at least one conclusion")]
    NoConclusion,
    #[error("assertability undefined: the formula has no classical value in any world of positive weight")]
    UndefinedAssertability,
}

/// Formula with atoms replaced by positions in a fixed universe.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Atom(usize),
    Const(TruthValue),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Cond(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub(crate) fn new(f: &Formula, universe: &[String]) -> Result<Compiled, SemanticsError> {
        let bin = |a: &Formula, b: &Formula| -> Result<(Box<Compiled>, Box<Compiled>), SemanticsError> {
            Ok((Box::new(Compiled::new(a, universe)?), Box::new(Compiled::new(b, universe)?)))
        };
        Ok(match f {
            Formula::Atom(p) => Compiled::Atom(
                universe
                    .binary_search(p)
                    .map_err(|_| SemanticsError::UnboundAtom(p.clone()))?,
            ),
            Formula::Top => Compiled::Const(One),
            Formula::Bot => Compiled::Const(Nil),
            Formula::Not(a) => Compiled::Not(Box::new(Compiled::new(a, universe)?)),
            Formula::And(a, b) => {
                let (a, b) = bin(a, b)?;
                Compiled::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b)?;
                Compiled::Or(a, b)
            }
            Formula::Cond(a, b) => {
                let (a, b) = bin(a, b)?;
                Compiled::Cond(a, b)
            }
        })
    }

    pub(crate) fn eval(&self, point: &[TruthValue], cfg: LogicConfig) -> TruthValue {
        match self {
            Compiled::Atom(i) => point[*i],
            Compiled::Const(v) => *v,
            Compiled::Not(a) => a.eval(point, cfg).neg(),
            Compiled::And(a, b) => cfg.and(a.eval(point, cfg), b.eval(point, cfg)),
            Compiled::Or(a, b) => cfg.or(a.eval(point, cfg), b.eval(point, cfg)),
            Compiled::Cond(a, b) => cfg.cond(a.eval(point, cfg), b.eval(point, cfg)),
        }
    }
}

pub fn eval(f: &Formula, v: &Valuation, cfg: LogicConfig) -> Result<TruthValue, SemanticsError> {
    Ok(match f {
        Formula::Atom(p) => v.get(p).ok_or_else(|| SemanticsError::UnboundAtom(p.clone()))?,
        Formula::Top => One,
        Formula::Bot => Nil,
        Formula::Not(a) => eval(a, v, cfg)?.neg(),
        Formula::And(a, b) => cfg.and(eval(a, v, cfg)?, eval(b, v, cfg)?),
        Formula::Or(a, b) => cfg.or(eval(a, v, cfg)?, eval(b, v, cfg)?),
        Formula::Cond(a, b) => cfg.cond(eval(a, v, cfg)?, eval(b, v, cfg)?),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Inference {
    pub premises: Vec<Formula>,
    pub conclusions: Vec<Formula>,
}

impl Inference {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Inference {
        Inference { premises, conclusions: vec![conclusion] }
    }

    pub fn multi(premises: Vec<Formula>, conclusions: Vec<Formula>) -> Inference {
        Inference { premises, conclusions }
    }

    /// Parses premises and conclusions from text.
    pub fn parse(premises: &[&str], conclusions: &[&str]) -> Result<Inference, crate::syntax::ParseError> {
        Ok(Inference {
            premises: premises.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
            conclusions: conclusions.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        })
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        for f in self.premises.iter().chain(&self.conclusions) {
            f.collect_atoms(&mut set);
        }
        set.into_iter().collect()
    }

    /// Evaluates the inference at `v` under `scheme`: true when `v` is a
    /// countermodel.
    pub fn refuted_by(&self, v: &Valuation, cfg: LogicConfig, scheme: Scheme) -> Result<bool, SemanticsError> {
        let prem = self.premises.iter().map(|f| eval(f, v, cfg)).collect::<Result<Vec<_>, _>>()?;
        let conc = self.conclusions.iter().map(|f| eval(f, v, cfg)).collect::<Result<Vec<_>, _>>()?;
        Ok(scheme.refutes(&prem, &conc))
    }
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |fs: &[Formula]| fs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        if self.premises.is_empty() {
            write!(f, "⊢ {}", join(&self.conclusions))
        } else {
            write!(f, "{} ⊢ {}", join(&self.premises), join(&self.conclusions))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    Countermodel(Valuation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn countermodel(&self) -> Option<&Valuation> {
        match self {
            Verdict::Valid => None,
            Verdict::Countermodel(v) => Some(v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub atom_limit: usize,
    pub exec: Execution,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { atom_limit: 12, exec: Execution::default() }
    }
}

pub fn entails(inf: &Inference, cfg: LogicConfig, scheme: Scheme) -> Result<Verdict, SemanticsError> {
    entails_with(inf, cfg, scheme, Limits::default())
}

pub fn entails_with(
    inf: &Inference,
    cfg: LogicConfig,
    scheme: Scheme,
    limits: Limits,
) -> Result<Verdict, SemanticsError> {
    if inf.conclusions.is_empty() {
        return Err(SemanticsError::NoConclusion);
    }
    if inf.conclusions.len() > 1 && scheme != Scheme::TT {
        return Err(SemanticsError::MultiConclusion(scheme));
    }
    let universe = inf.atoms();
    if universe.len() > limits.atom_limit {
        return Err(SemanticsError::TooManyAtoms { found: universe.len(), limit: limits.atom_limit });
    }
    let compile = |fs: &[Formula]| fs.iter().map(|f| Compiled::new(f, &universe)).collect::<Result<Vec<_>, _>>();
    let premises = compile(&inf.premises)?;
    let conclusions = compile(&inf.conclusions)?;
    let total = 3usize.pow(universe.len() as u32);
    let hit = exec::find_first(total, limits.exec, |i| {
        let point = digits(universe.len(), i);
        let prem: Vec<_> = premises.iter().map(|c| c.eval(&point, cfg)).collect();
        let conc: Vec<_> = conclusions.iter().map(|c| c.eval(&point, cfg)).collect();
        scheme.refutes(&prem, &conc).then_some(i)
    });
    Ok(match hit {
        None => Verdict::Valid,
        Some(i) => Verdict::Countermodel(Valuation::nth(&universe, i)),
    })
}

/// All countermodels in enumeration order.
pub fn countermodels(inf: &Inference, cfg: LogicConfig, scheme: Scheme) -> Result<Vec<Valuation>, SemanticsError> {
    let universe = inf.atoms();
    if universe.len() > Limits::default().atom_limit {
        return Err(SemanticsError::TooManyAtoms { found: universe.len(), limit: Limits::default().atom_limit });
    }
    let mut out = Vec::new();
    for i in 0..3usize.pow(universe.len() as u32) {
        let v = Valuation::nth(&universe, i);
        if inf.refuted_by(&v, cfg, scheme)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Pointwise identity of truth tables.
pub fn equivalent(a: &Formula, b: &Formula, cfg: LogicConfig) -> Result<bool, SemanticsError> {
    Ok(distinguishing(a, b, cfg)?.is_none())
}

/// First valuation on which `a` and `b` take different values.
pub fn distinguishing(a: &Formula, b: &Formula, cfg: LogicConfig) -> Result<Option<Valuation>, SemanticsError> {
    let mut set = BTreeSet::new();
    a.collect_atoms(&mut set);
    b.collect_atoms(&mut set);
    let universe: Vec<String> = set.into_iter().collect();
    let limits = Limits::default();
    if universe.len() > limits.atom_limit {
        return Err(SemanticsError::TooManyAtoms { found: universe.len(), limit: limits.atom_limit });
    }
    let (ca, cb) = (Compiled::new(a, &universe)?, Compiled::new(b, &universe)?);
    let hit = exec::find_first(3usize.pow(universe.len() as u32), limits.exec, |i| {
        let point = digits(universe.len(), i);
        (ca.eval(&point, cfg) != cb.eval(&point, cfg)).then_some(i)
    });
    Ok(hit.map(|i| Valuation::nth(&universe, i)))
}

/// Outcome of testing both halves of the Deduction Theorem on one instance
/// `Γ, A / B`. Each flag is true when that implication holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeductionCheck {
    /// Γ, A ⊨ B implies Γ ⊨ A → B.
    pub introduction: bool,
    /// Γ ⊨ A → B implies Γ, A ⊨ B.
    pub elimination: bool,
}

pub fn deduction_theorem(
    gamma: &[Formula],
    a: &Formula,
    b: &Formula,
    cfg: LogicConfig,
    scheme: Scheme,
) -> Result<DeductionCheck, SemanticsError> {
    let mut with_a = gamma.to_vec();
    with_a.push(a.clone());
    let lhs = entails(&Inference::new(with_a, b.clone()), cfg, scheme)?.is_valid();
    let rhs = entails(&Inference::new(gamma.to_vec(), Formula::cond(a.clone(), b.clone())), cfg, scheme)?.is_valid();
    Ok(DeductionCheck { introduction: !lhs || rhs, elimination: !rhs || lhs })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    Exact(BigRational),
    Float(f64),
}

impl Weight {
    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Weight::Float(x) => *x,
        }
    }

    /// Decimal or fraction literals become exact rationals; anything else
    /// that Rust reads as a float stays a float.
    pub fn parse(text: &str) -> Option<Weight> {
        let t = text.trim();
        if let Some(r) = parse_exact(t) {
            return Some(Weight::Exact(r));
        }
        t.parse::<f64>().ok().filter(|x| x.is_finite()).map(Weight::Float)
    }
}

fn parse_exact(t: &str) -> Option<BigRational> {
    if let Some((n, d)) = t.split_once('/') {
        let n: BigRational = parse_exact(n)?;
        let d: BigRational = parse_exact(d)?;
        return (!d.is_zero()).then(|| n / d);
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: num_rational::BigRational = BigRational::from_integer(digits.parse().ok()?);
    let denom = BigRational::from_integer(num_traits::pow(10u32.into(), frac.len()));
    Some(numer / denom)
}

/// A classical world: each atom true or false.
pub type World = BTreeMap<String, bool>;

#[derive(Clone, Debug, PartialEq)]
pub struct WorldDistribution {
    worlds: Vec<(World, Weight)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DistributionError {
    pub line: usize,
    pub message: String,
}

const WEIGHT_TOLERANCE: f64 = 1e-12;

impl WorldDistribution {
    /// Checks that weights are non-negative and sum to 1.
    pub fn new(worlds: Vec<(World, Weight)>) -> Result<WorldDistribution, DistributionError> {
        let err = |message: String| Err(DistributionError { line: 0, message });
        if worlds.iter().all(|(_, w)| matches!(w, Weight::Exact(_))) {
            let mut sum = BigRational::zero();
            for (_, w) in &worlds {
                if let Weight::Exact(r) = w {
                    if r < &BigRational::zero() {
                        return err(format!("negative weight {r}"));
                    }
                    sum += r;
                }
            }
            if !sum.is_one() {
                return err(format!("weights sum to {sum}, not 1"));
            }
        } else {
            let mut sum = 0.0;
            for (_, w) in &worlds {
                let x = w.to_f64();
                if x < 0.0 {
                    return err(format!("negative weight {x}"));
                }
                sum += x;
            }
            if (sum - 1.0).abs() > WEIGHT_TOLERANCE {
                return err(format!("weights sum to {sum}, not 1"));
            }
        }
        Ok(WorldDistribution { worlds })
    }

    pub fn from_f64(worlds: Vec<(World, f64)>) -> Result<WorldDistribution, DistributionError> {
        WorldDistribution::new(worlds.into_iter().map(|(w, x)| (w, Weight::Float(x))).collect())
    }

    pub fn is_exact(&self) -> bool {
        self.worlds.iter().all(|(_, w)| matches!(w, Weight::Exact(_)))
    }

    pub fn worlds(&self) -> &[(World, Weight)] {
        &self.worlds
    }

    /// One world per line: `a=1,c=0 0.3`. `#` starts a comment.
    pub fn parse(text: &str) -> Result<WorldDistribution, DistributionError> {
        let mut worlds = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |message: String| DistributionError { line: n + 1, message };
            let (assign, weight) = line
                .rsplit_once(char::is_whitespace)
                .ok_or_else(|| fail("expected `atom=0/1,... weight`".into()))?;
            let weight = Weight::parse(weight).ok_or_else(|| fail(format!("bad weight `{weight}`")))?;
            let mut world = World::new();
            for part in assign.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (atom, bit) = part.split_once('=').ok_or_else(|| fail(format!("expected atom=0/1, found `{part}`")))?;
                let bit = match bit.trim() {
                    "1" => true,
                    "0" => false,
                    other => return Err(fail(format!("world values must be 0 or 1, found `{other}`"))),
                };
                world.insert(atom.trim().to_string(), bit);
            }
            worlds.push((world, weight));
        }
        WorldDistribution::new(worlds).map_err(|mut e| {
            e.line = text.lines().count();
            e
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assertability {
    pub value: f64,
    pub exact: Option<BigRational>,
}

/// Probability of truth given a classical value:
/// Pr(x = 1) / Pr(x ∈ {0, 1}).
pub fn assertability(x: &Formula, d: &WorldDistribution, cfg: LogicConfig) -> Result<Assertability, SemanticsError> {
    let mut values = Vec::with_capacity(d.worlds.len());
    for (world, w) in &d.worlds {
        let v: Valuation = world.iter().map(|(k, b)| (k.clone(), if *b { One } else { Nil })).collect();
        values.push((eval(x, &v, cfg)?, w));
    }
    if d.is_exact() {
        let (mut num, mut den) = (BigRational::zero(), BigRational::zero());
        for (val, w) in &values {
            if let Weight::Exact(r) = w {
                if val.is_classical() {
                    den += r;
                }
                if *val == One {
                    num += r;
                }
            }
        }
        if den.is_zero() {
            return Err(SemanticsError::UndefinedAssertability);
        }
        let q = num / den;
        return Ok(Assertability { value: q.to_f64().unwrap_or(f64::NAN), exact: Some(q) });
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (val, w) in &values {
        let x = w.to_f64();
        if val.is_classical() {
            den += x;
        }
        if *val == One {
            num += x;
        }
    }
    if den <= WEIGHT_TOLERANCE {
        return Err(SemanticsError::UndefinedAssertability);
    }
    Ok(Assertability { value: num / den, exact: None })
}
