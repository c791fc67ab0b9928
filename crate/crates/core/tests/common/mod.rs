#![allow(dead_code)]

use proptest::prelude::*;
use trivalent_core::{Conditional, Connectives, Formula, LogicConfig, Scheme};

pub const H: u8 = 1;

/// Conditional tables in units of 1/2, written out by hand. MAT is the
/// Kleene ¬a ∨ b.
pub fn cond_table(c: Conditional) -> [[u8; 3]; 3] {
    let middle = match c {
        Conditional::DF => [1, 1, 1],
        Conditional::CC => [0, 1, 2],
        Conditional::F => [0, 1, 1],
        Conditional::J1 => [0, 2, 1],
        Conditional::J2 => [0, 2, 2],
        Conditional::MAT => [1, 1, 2],
    };
    match c {
        Conditional::MAT => [[2, 2, 2], middle, [0, 1, 2]],
        _ => [[1, 1, 1], middle, [0, 1, 2]],
    }
}

pub fn and(conn: Connectives, a: u8, b: u8) -> u8 {
    match conn {
        Connectives::Kleene => a.min(b),
        Connectives::CooperQuasi if a == 0 || b == 0 => 0,
        Connectives::CooperQuasi if a == 1 && b == 1 => 1,
        Connectives::CooperQuasi => 2,
    }
}

pub fn or(conn: Connectives, a: u8, b: u8) -> u8 {
    match conn {
        Connectives::Kleene => a.max(b),
        Connectives::CooperQuasi if a == 2 || b == 2 => 2,
        Connectives::CooperQuasi if a == 1 && b == 1 => 1,
        Connectives::CooperQuasi => 0,
    }
}

/// Independent evaluator; atoms are looked up by name in `names`/`vals`.
pub fn value(f: &Formula, names: &[String], vals: &[u8], cfg: LogicConfig) -> u8 {
    match f {
        Formula::Atom(p) => vals[names.iter().position(|n| n == p).expect("atom in universe")],
        Formula::Top => 2,
        Formula::Bot => 0,
        Formula::Not(a) => 2 - value(a, names, vals, cfg),
        Formula::And(a, b) => and(cfg.connectives, value(a, names, vals, cfg), value(b, names, vals, cfg)),
        Formula::Or(a, b) => or(cfg.connectives, value(a, names, vals, cfg), value(b, names, vals, cfg)),
        Formula::Cond(a, b) => {
            let (x, y) = (value(a, names, vals, cfg), value(b, names, vals, cfg));
            match cfg.conditional {
                Conditional::MAT => or(cfg.connectives, 2 - x, y),
                c => cond_table(c)[x as usize][y as usize],
            }
        }
    }
}

fn refutes(scheme: Scheme, premises: &[u8], conclusions: &[u8]) -> bool {
    let ok = |v: u8, strict: bool| if strict { v == 2 } else { v >= 1 };
    let one = |ps: bool, cs: bool| premises.iter().all(|v| ok(*v, ps)) && !conclusions.iter().any(|v| ok(*v, cs));
    match scheme {
        Scheme::SS => one(true, true),
        Scheme::TT => one(false, false),
        Scheme::ST => one(true, false),
        Scheme::TS => one(false, true),
        Scheme::SSandTT => one(true, true) || one(false, false),
    }
}

/// Brute-force validity over every assignment to the atoms.
pub fn brute_valid(premises: &[Formula], conclusions: &[Formula], cfg: LogicConfig, scheme: Scheme) -> bool {
    let mut names: Vec<String> = premises.iter().chain(conclusions).flat_map(|f| f.atoms()).collect();
    names.sort();
    names.dedup();
    let n = names.len();
    (0..3usize.pow(n as u32)).all(|mut i| {
        let mut vals = vec![0u8; n];
        for slot in vals.iter_mut().rev() {
            *slot = (i % 3) as u8;
            i /= 3;
        }
        let ps: Vec<u8> = premises.iter().map(|f| value(f, &names, &vals, cfg)).collect();
        let cs: Vec<u8> = conclusions.iter().map(|f| value(f, &names, &vals, cfg)).collect();
        !refutes(scheme, &ps, &cs)
    })
}

pub fn formula(atoms: &'static [&'static str], depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        8 => proptest::sample::select(atoms).prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::cond(a, b)),
        ]
    })
}

pub fn conditional() -> impl Strategy<Value = Conditional> {
    proptest::sample::select(Conditional::ALL.to_vec())
}

pub fn config() -> impl Strategy<Value = LogicConfig> {
    (conditional(), proptest::bool::ANY).prop_map(|(c, quasi)| if quasi { LogicConfig::quasi(c) } else { LogicConfig::kleene(c) })
}

pub fn scheme() -> impl Strategy<Value = Scheme> {
    proptest::sample::select(Scheme::ALL.to_vec())
}
