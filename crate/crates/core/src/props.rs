//! The validity matrices: the trilemma for the de Finetti conditional, the
//! commutation table for the Jeffrey conditionals, and a checklist of
//! principles across both connective suites.

use crate::semantics::{
    countermodels, deduction_theorem, distinguishing, entails, eval, Conditional, Inference, LogicConfig, Scheme, SemanticsError, TruthValue,
    Valuation, Verdict,
};
use crate::syntax::Formula;
use serde::Serialize;
use std::fmt::{self, Write as _};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Cell {
    Valid,
    Invalid { instance: String, witness: Valuation },
}

impl Cell {
    pub fn is_valid(&self) -> bool {
        matches!(self, Cell::Valid)
    }

    pub fn mark(&self) -> &'static str {
        if self.is_valid() {
            "✓"
        } else {
            "×"
        }
    }

    fn from_verdict(inf: &Inference, v: Verdict) -> Cell {
        match v {
            Verdict::Valid => Cell::Valid,
            Verdict::Countermodel(witness) => Cell::Invalid { instance: inf.to_string(), witness },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrix {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Cell>)>,
}

impl Matrix {
    pub fn cell(&self, row: &str, column: &str) -> Option<&Cell> {
        let c = self.columns.iter().position(|x| x == column)?;
        self.rows.iter().find(|(r, _)| r == row).map(|(_, cells)| &cells[c])
    }

    pub fn marks(&self) -> Vec<(String, String)> {
        self.rows.iter().map(|(r, cells)| (r.clone(), cells.iter().map(Cell::mark).collect())).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.rows.iter().map(|(r, _)| r.chars().count()).max().unwrap_or(0).max(self.title.chars().count());
        let widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count().max(1)).collect();
        write!(f, "{:<w$}", self.title)?;
        for c in &self.columns {
            write!(f, " | {c}")?;
        }
        writeln!(f)?;
        for (r, cells) in &self.rows {
            write!(f, "{r:<w$}")?;
            for (cell, cw) in cells.iter().zip(&widths) {
                write!(f, " | {:<cw$}", cell.mark())?;
            }
            writeln!(f)?;
        }
        let mut notes = String::new();
        for (r, cells) in &self.rows {
            for (cell, c) in cells.iter().zip(&self.columns) {
                if let Cell::Invalid { instance, witness } = cell {
                    let _ = writeln!(notes, "  × {r} / {c}: {instance} fails at {witness}");
                }
            }
        }
        write!(f, "{notes}")
    }
}

fn f(s: &str) -> Formula {
    s.parse().expect("built-in formula")
}

fn inf(premises: &[&str], conclusion: &str) -> Inference {
    Inference::new(premises.iter().map(|p| f(p)).collect(), f(conclusion))
}

fn check(i: &Inference, cfg: LogicConfig, scheme: Scheme) -> Result<Cell, SemanticsError> {
    Ok(Cell::from_verdict(i, entails(i, cfg, scheme)?))
}

pub const TRILEMMA_COLUMNS: [&str; 3] = ["MP", "Identity", "→ ⊨ ←"];

/// Modus Ponens, the Identity Law, and entailment of the converse, for the
/// de Finetti conditional under each scheme.
pub fn trilemma() -> Result<Matrix, SemanticsError> {
    let cfg = LogicConfig::kleene(Conditional::DF);
    let principles = [inf(&["A", "A -> B"], "B"), inf(&[], "A -> A"), inf(&["A -> B"], "B -> A")];
    let mut rows = Vec::new();
    for scheme in Scheme::ALL {
        let cells = principles.iter().map(|p| check(p, cfg, scheme)).collect::<Result<_, _>>()?;
        rows.push((scheme.to_string(), cells));
    }
    Ok(Matrix { title: "DF".into(), columns: TRILEMMA_COLUMNS.map(String::from).to_vec(), rows })
}

pub const COMMUTATION_COLUMNS: [&str; 2] = ["¬(A→B) ⊨ A→¬B", "A→¬B ⊨ ¬(A→B)"];

/// Both directions of commutation with negation under TT, per Jeffrey conditional.
pub fn commutation() -> Result<Matrix, SemanticsError> {
    let directions = [inf(&["~(A -> B)"], "A -> ~B"), inf(&["A -> ~B"], "~(A -> B)")];
    let mut rows = Vec::new();
    for c in Conditional::JEFFREY {
        let cfg = LogicConfig::kleene(c);
        let cells = directions.iter().map(|d| check(d, cfg, Scheme::TT)).collect::<Result<_, _>>()?;
        rows.push((c.to_string(), cells));
    }
    Ok(Matrix { title: "TT".into(), columns: COMMUTATION_COLUMNS.map(String::from).to_vec(), rows })
}

/// The configurations compared in the checklist.
pub fn checklist_configs() -> [LogicConfig; 4] {
    [
        LogicConfig::kleene(Conditional::DF),
        LogicConfig::kleene(Conditional::CC),
        LogicConfig::quasi(Conditional::DF),
        LogicConfig::quasi(Conditional::CC),
    ]
}

/// Small formulas used to search for Deduction Theorem failures.
fn deduction_pool() -> Vec<Formula> {
    crate::corpus::formulas(&["A", "B"], 1)
}

/// Searches Γ, A ⊨ B ⇔ Γ ⊨ A → B over Γ of size ≤ 1 from a small pool and
/// reports the first failing instance.
pub fn deduction_cell(cfg: LogicConfig, scheme: Scheme) -> Result<Cell, SemanticsError> {
    let pool = deduction_pool();
    let mut gammas = vec![vec![]];
    gammas.extend(pool.iter().map(|g| vec![g.clone()]));
    for gamma in &gammas {
        for a in &pool {
            for b in &pool {
                let dt = deduction_theorem(gamma, a, b, cfg, scheme)?;
                if dt.introduction && dt.elimination {
                    continue;
                }
                let mut with_a = gamma.clone();
                with_a.push(a.clone());
                let left = Inference::new(with_a, b.clone());
                let right = Inference::new(gamma.clone(), Formula::cond(a.clone(), b.clone()));
                let (holds, fails) = if dt.introduction { (right, left) } else { (left, right) };
                let witness = entails(&fails, cfg, scheme)?.countermodel().cloned().expect("failing side has a countermodel");
                return Ok(Cell::Invalid { instance: format!("{holds} but not {fails}"), witness });
            }
        }
    }
    Ok(Cell::Valid)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeductionFailure {
    pub gamma: Vec<Formula>,
    pub a: Formula,
    pub b: Formula,
    pub introduction: bool,
    pub elimination: bool,
    /// Refutes the failing side, with v(A) and v(B) as below.
    pub witness: Valuation,
    pub value_a: TruthValue,
    pub value_b: TruthValue,
}

/// The standard failure of the Deduction Theorem outside TT: under SS and ST,
/// A = p ∧ ¬p entails anything yet A → q fails where v(A) = 1/2, v(B) = 0;
/// under TS and SS∩TT, p entails ⊤ yet p → ⊤ fails where v(A) = 0, v(B) = 1.
/// `None` when the instance does not fail for this configuration.
pub fn deduction_failure(cfg: LogicConfig, scheme: Scheme) -> Result<Option<DeductionFailure>, SemanticsError> {
    let (a, b, va, vb) = match scheme {
        Scheme::SS | Scheme::ST => (f("p & ~p"), f("q"), TruthValue::Half, TruthValue::Zero),
        Scheme::TS | Scheme::SSandTT => (f("p"), Formula::Top, TruthValue::Zero, TruthValue::One),
        Scheme::TT => (f("p & ~p"), f("q"), TruthValue::Half, TruthValue::Zero),
    };
    let dt = deduction_theorem(&[], &a, &b, cfg, scheme)?;
    if dt.introduction && dt.elimination {
        return Ok(None);
    }
    let failing = if dt.introduction {
        Inference::new(vec![a.clone()], b.clone())
    } else {
        Inference::new(vec![], Formula::cond(a.clone(), b.clone()))
    };
    for v in countermodels(&failing, cfg, scheme)? {
        if eval(&a, &v, cfg)? == va && eval(&b, &v, cfg)? == vb {
            let (introduction, elimination) = (dt.introduction, dt.elimination);
            return Ok(Some(DeductionFailure { gamma: vec![], a, b, introduction, elimination, witness: v, value_a: va, value_b: vb }));
        }
    }
    Ok(None)
}

fn equivalence_cell(a: &str, b: &str, cfg: LogicConfig) -> Result<Cell, SemanticsError> {
    let (x, y) = (f(a), f(b));
    Ok(match distinguishing(&x, &y, cfg)? {
        None => Cell::Valid,
        Some(witness) => Cell::Invalid { instance: format!("{x} ≡ {y}"), witness },
    })
}

pub const CHECKLIST_ROWS: [&str; 10] = [
    "Deduction Theorem",
    "Import-Export",
    "Contraposition",
    "Aristotle",
    "Boethius",
    "CEM",
    "Linearity",
    "Disjunctive Syllogism",
    "Modus Ponens",
    "Identity",
];

/// TT-validity of each principle under the four configurations. Import-Export
/// is checked as sameness of value.
pub fn checklist() -> Result<Matrix, SemanticsError> {
    let configs = checklist_configs();
    let mut rows = Vec::new();
    for row in CHECKLIST_ROWS {
        let mut cells = Vec::new();
        for cfg in configs {
            let tt = |i: Inference| check(&i, cfg, Scheme::TT);
            cells.push(match row {
                "Deduction Theorem" => deduction_cell(cfg, Scheme::TT)?,
                "Import-Export" => equivalence_cell("A -> (B -> C)", "A & B -> C", cfg)?,
                "Contraposition" => tt(inf(&["A -> B"], "~B -> ~A"))?,
                "Aristotle" => tt(inf(&[], "~(~A -> A)"))?,
                "Boethius" => tt(inf(&[], "(A -> C) -> ~(A -> ~C)"))?,
                "CEM" => tt(inf(&[], "(A -> B) | (A -> ~B)"))?,
                "Linearity" => tt(inf(&[], "(A -> B) | (B -> A)"))?,
                "Disjunctive Syllogism" => tt(inf(&["~A", "A | B"], "B"))?,
                "Modus Ponens" => tt(inf(&["A", "A -> B"], "B"))?,
                _ => tt(inf(&[], "A -> A"))?,
            });
        }
        rows.push((row.to_string(), cells));
    }
    Ok(Matrix { title: "TT".into(), columns: configs.iter().map(|c| c.to_string()).collect(), rows })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub trilemma: Matrix,
    pub commutation: Matrix,
    pub checklist: Matrix,
}

pub fn report() -> Result<Report, SemanticsError> {
    Ok(Report { trilemma: trilemma()?, commutation: commutation()?, checklist: checklist()? })
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Trilemma")?;
        writeln!(f, "{}", self.trilemma)?;
        writeln!(f, "Commutation")?;
        writeln!(f, "{}", self.commutation)?;
        writeln!(f, "Checklist")?;
        write!(f, "{}", self.checklist)
    }
}
