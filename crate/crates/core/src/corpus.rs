//! Formula and inference generators, and the cross-check of both proof
//! engines against the truth-table oracle.

use crate::exec::{self, Execution};
use crate::semantics::{entails, Inference, Scheme, TruthValue, Valuation};
use crate::sequent::{derives, sequent_satisfied, SearchOutcome};
use crate::syntax::Formula;
use crate::tableau::deduce;
use crate::Calculus;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Every formula over `atoms` built from ¬, ∧, ∨, → with depth at most
/// `depth`, shallowest first.
pub fn formulas(atoms: &[&str], depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = atoms.iter().map(|a| Formula::atom(a)).collect();
    let mut newest = all.clone();
    for _ in 0..depth {
        let mut next: Vec<Formula> = newest.iter().map(|a| Formula::not(a.clone())).collect();
        for a in &all {
            for b in &all {
                if newest.contains(a) || newest.contains(b) {
                    next.push(Formula::and(a.clone(), b.clone()));
                    next.push(Formula::or(a.clone(), b.clone()));
                    next.push(Formula::cond(a.clone(), b.clone()));
                }
            }
        }
        all.extend(next.iter().cloned());
        newest = next;
    }
    all
}

/// The exhaustive part of the cross-check corpus: every formula over {p, q}
/// of depth ≤ 2 as a theorem, and as premise or conclusion against every
/// formula of depth ≤ 1.
pub fn exhaustive_inferences() -> Vec<Inference> {
    let big = formulas(&["p", "q"], 2);
    let small = formulas(&["p", "q"], 1);
    let mut out: Vec<Inference> = big.iter().map(|f| Inference::new(vec![], f.clone())).collect();
    for a in &big {
        for b in &small {
            out.push(Inference::new(vec![a.clone()], b.clone()));
            out.push(Inference::new(vec![b.clone()], a.clone()));
        }
    }
    out
}

/// A random formula of depth ≤ `depth` over `atoms`; constants appear rarely.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..20) {
            0 => Formula::Top,
            1 => Formula::Bot,
            _ => Formula::atom(atoms[rng.random_range(0..atoms.len())]),
        };
    }
    let sub = |rng: &mut _| random_formula(rng, atoms, depth - 1);
    match rng.random_range(0..4) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::cond(sub(rng), sub(rng)),
    }
}

pub const RANDOM_SEED: u64 = 20_240_601;

/// `count` inferences over {p, q, r}, formulas of depth ≤ 3, at most two
/// premises, one conclusion.
pub fn random_inferences(count: usize, seed: u64) -> Vec<Inference> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = ["p", "q", "r"];
    (0..count)
        .map(|_| {
            let k = rng.random_range(0..=2);
            let premises = (0..k).map(|_| random_formula(&mut rng, &atoms, 3)).collect();
            Inference::new(premises, random_formula(&mut rng, &atoms, 3))
        })
        .collect()
}

/// The full cross-check corpus.
pub fn standard_corpus() -> Vec<Inference> {
    let mut all = exhaustive_inferences();
    all.extend(random_inferences(500, RANDOM_SEED));
    all
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub calculus: Calculus,
    pub inference: String,
    pub problem: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub calculus: Calculus,
    pub checked: usize,
    pub valid: usize,
    pub discrepancies: Vec<Discrepancy>,
}

fn all_valuations(atoms: &[String]) -> impl Iterator<Item = Valuation> + '_ {
    (0..3usize.pow(atoms.len() as u32)).map(|i| Valuation::nth(atoms, i))
}

/// Runs the oracle, the tableau and the sequent search on one single-conclusion
/// inference and lists every way they disagree or emit an unsound object.
/// Returns whether the oracle found it valid.
pub fn cross_check_one(inf: &Inference, calc: Calculus) -> (bool, Vec<String>) {
    let cfg = calc.config();
    let mut problems = Vec::new();
    let oracle = match entails(inf, cfg, Scheme::TT) {
        Ok(v) => v,
        Err(e) => return (false, vec![format!("oracle error: {e}")]),
    };
    let valid = oracle.is_valid();
    let conclusion = &inf.conclusions[0];
    let refutes = |v: &Valuation| inf.refuted_by(v, cfg, Scheme::TT).unwrap_or(false);

    match deduce(&inf.premises, conclusion, calc) {
        Err(e) => problems.push(format!("tableau error: {e}")),
        Ok(d) => {
            if d.is_derivable() != valid {
                problems.push(format!("tableau says derivable={}, oracle says valid={valid}", d.is_derivable()));
            }
            if let Some(v) = d.countermodel() {
                if !refutes(v) {
                    problems.push(format!("tableau countermodel {v} does not refute"));
                }
            }
        }
    }

    match derives(&inf.premises, &inf.conclusions, calc) {
        Err(e) => problems.push(format!("sequent error: {e}")),
        Ok(out) => {
            if out.is_derivation() != valid {
                problems.push(format!("sequent says derivation={}, oracle says valid={valid}", out.is_derivation()));
            }
            match &out {
                SearchOutcome::Countermodel { valuation, .. } => {
                    if !refutes(valuation) {
                        problems.push(format!("sequent countermodel {valuation} does not refute"));
                    }
                }
                SearchOutcome::Derivation(tree) => {
                    let root = &tree.root.sequent;
                    let atoms = root.atoms();
                    let failing = all_valuations(&atoms).find(|v| !sequent_satisfied(v, root, calc).unwrap_or(false));
                    if let Some(v) = failing {
                        problems.push(format!("derived root {root} fails at {v}"));
                    }
                }
            }
        }
    }
    (valid, problems)
}

pub fn cross_check(inferences: &[Inference], calc: Calculus, execution: Execution) -> CrossCheck {
    let results = exec::map(inferences, execution, |inf| cross_check_one(inf, calc));
    let mut discrepancies = Vec::new();
    let mut valid = 0;
    for (inf, (ok, problems)) in inferences.iter().zip(results) {
        valid += usize::from(ok);
        for problem in problems {
            discrepancies.push(Discrepancy { calculus: calc, inference: inf.to_string(), problem });
        }
    }
    CrossCheck { calculus: calc, checked: inferences.len(), valid, discrepancies }
}

/// Splits an inference into Deduction Theorem instances (Γ, A, B): the last
/// premise as A, or the antecedent of a conditional conclusion.
pub fn deduction_instances(inf: &Inference) -> Vec<(Vec<Formula>, Formula, Formula)> {
    let mut out = Vec::new();
    let conclusion = &inf.conclusions[0];
    if let Some((last, gamma)) = inf.premises.split_last() {
        out.push((gamma.to_vec(), last.clone(), conclusion.clone()));
    }
    if let Formula::Cond(a, b) = conclusion {
        let mut gamma = inf.premises.clone();
        gamma.truncate(1);
        out.push((gamma, (**a).clone(), (**b).clone()));
    }
    out
}

/// Every value a formula can take, as a sanity check on generators.
pub fn range(f: &Formula, calc: Calculus) -> Vec<TruthValue> {
    let atoms = f.atoms();
    let mut seen: Vec<TruthValue> = all_valuations(&atoms)
        .filter_map(|v| crate::semantics::eval(f, &v, calc.config()).ok())
        .collect();
    seen.sort();
    seen.dedup();
    seen
}
