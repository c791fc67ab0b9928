//! Trivalent logics of indicative conditionals.
//!
//! The de Finetti (DF) and Cooper-Cantwell (CC) conditionals and their
//! Jeffrey-style relatives, evaluated over {0, 1/2, 1}, with a brute-force
//! semantic oracle, the tableau calculi DF/TTt and CC/TTt, the three-sided
//! sequent calculi DF/TTm and CC/TTm, and a checker for the finite algebras
//! that model them.

pub mod algebra;
pub mod corpus;
pub mod exec;
pub mod props;
pub mod semantics;
pub mod sequent;
pub mod syntax;
pub mod tableau;

pub use semantics::{
    entails, equivalent, eval, Conditional, Connectives, Inference, LogicConfig, Scheme,
    TruthValue, Valuation, Verdict,
};
pub use syntax::{parse, Formula};

use serde::Serialize;
use std::fmt;

/// The two proof-theoretic systems: one tableau calculus and one sequent
/// calculus for each of DF/TT and CC/TT.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Calculus {
    Df,
    Cc,
}

impl Calculus {
    pub const ALL: [Calculus; 2] = [Calculus::Df, Calculus::Cc];

    /// The semantic configuration the calculus is sound and complete for.
    pub fn config(self) -> LogicConfig {
        match self {
            Calculus::Df => LogicConfig::kleene(Conditional::DF),
            Calculus::Cc => LogicConfig::kleene(Conditional::CC),
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Df => "DF",
            Calculus::Cc => "CC",
        })
    }
}
