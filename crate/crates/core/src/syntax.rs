//! Formulas of the conditional language: parsing, printing, normalization.
//!
//! Grammar, loosest first:
//!
//! ```text
//! expr  := cond (("<->" | "=>") cond)*
//! cond  := disj ("->" cond)?
//! disj  := conj ("|" conj)*
//! conj  := unary ("&" unary)*
//! unary := "~" unary | "T" | "F" | ident | "(" expr ")"
//! ```
//!
//! `a <-> b` is read as `(a -> b) & (b -> a)` and `a => b` as `~a | b`;
//! neither survives parsing.

use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Cond(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn cond(a: Formula, b: Formula) -> Formula {
        Formula::Cond(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::cond(a.clone(), b.clone()), Formula::cond(b, a))
    }

    pub fn material(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// Atoms, constants.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Top | Formula::Bot)
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        self.collect_atoms(&mut set);
        set.into_iter().collect()
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(p) => {
                out.insert(p.clone());
            }
            Formula::Top | Formula::Bot => {}
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Cond(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Number of connective occurrences.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::Not(a) => 1 + a.complexity(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Cond(a, b) => {
                1 + a.complexity() + b.complexity()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Cond(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn contains_or(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => false,
            Formula::Or(..) => true,
            Formula::Not(a) => a.contains_or(),
            Formula::And(a, b) | Formula::Cond(a, b) => a.contains_or() || b.contains_or(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot | Formula::Not(_) => 4,
            Formula::And(..) => 3,
            Formula::Or(..) => 2,
            Formula::Cond(..) => 1,
        }
    }
}

pub fn atoms(f: &Formula) -> Vec<String> {
    f.atoms()
}

pub fn complexity(f: &Formula) -> usize {
    f.complexity()
}

/// Rewrites every `a | b` as `~(~a & ~b)`. The calculi have no rules for
/// disjunction, and under Strong Kleene tables the rewrite is value-preserving.
pub fn normalize_for_calculus(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) | Formula::Top | Formula::Bot => f.clone(),
        Formula::Not(a) => Formula::not(normalize_for_calculus(a)),
        Formula::And(a, b) => Formula::and(normalize_for_calculus(a), normalize_for_calculus(b)),
        Formula::Cond(a, b) => Formula::cond(normalize_for_calculus(a), normalize_for_calculus(b)),
        Formula::Or(a, b) => Formula::not(Formula::and(
            Formula::not(normalize_for_calculus(a)),
            Formula::not(normalize_for_calculus(b)),
        )),
    }
}

pub fn render(f: &Formula) -> String {
    f.to_string()
}

fn write_operand(f: &mut fmt::Formatter<'_>, sub: &Formula, min: u8) -> fmt::Result {
    if sub.precedence() < min {
        write!(f, "({sub})")
    } else {
        write!(f, "{sub}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p) => f.write_str(p),
            Formula::Top => f.write_str("T"),
            Formula::Bot => f.write_str("F"),
            Formula::Not(a) => {
                f.write_str("~")?;
                write_operand(f, a, 4)
            }
            // & and | associate left; -> associates right.
            Formula::And(a, b) => {
                write_operand(f, a, 3)?;
                f.write_str(" & ")?;
                write_operand(f, b, 4)
            }
            Formula::Or(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str(" | ")?;
                write_operand(f, b, 3)
            }
            Formula::Cond(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str(" -> ")?;
                write_operand(f, b, 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", .expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Arrow,
    Iff,
    Material,
    LParen,
    RParen,
    Top,
    Bot,
    Ident(String),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Material => "`=>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Top => "`T`".into(),
            Tok::Bot => "`F`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'=' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Material
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "T" => Tok::Top,
                    "F" => Tok::Bot,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    offset: start,
                    expected: vec!["a formula or connective".into()],
                    found: format!("unknown character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let (offset, tok) = &self.toks[self.pos];
        Err(ParseError {
            offset: *offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: tok.describe(),
        })
    }

    fn expr(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.cond()?;
        loop {
            match self.peek() {
                Tok::Iff => {
                    self.bump();
                    let right = self.cond()?;
                    left = Formula::iff(left, right);
                }
                Tok::Material => {
                    self.bump();
                    let right = self.cond()?;
                    left = Formula::material(left, right);
                }
                _ => return Ok(left),
            }
        }
    }

    fn cond(&mut self) -> Result<Formula, ParseError> {
        let left = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.cond()?;
            return Ok(Formula::cond(left, right));
        }
        Ok(left)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            left = Formula::or(left, self.conj()?);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.fail(&["`)`", "a binary connective"]);
                }
                self.bump();
                Ok(inner)
            }
            _ => self.fail(&["`~`", "`(`", "`T`", "`F`", "identifier"]),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["a binary connective", "end of input"]);
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("p -> q -> r"), Formula::cond(p("p"), p("q -> r")));
        assert_eq!(p("p & q | r"), Formula::or(p("p & q"), p("r")));
        assert_eq!(p("~p & q"), Formula::and(p("~p"), p("q")));
        assert_eq!(p("p | q -> r"), Formula::cond(p("p | q"), p("r")));
        assert_eq!(p("p => q"), Formula::or(p("~p"), p("q")));
        assert_eq!(p("p <-> q -> r"), Formula::iff(p("p"), p("q -> r")));
    }

    #[test]
    fn error_offsets() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.expected.iter().any(|s| s == "identifier"));
        let e = parse("(p -> q").unwrap_err();
        assert_eq!(e.offset, 7);
        assert_eq!(parse("p $ q").unwrap_err().offset, 2);
        assert_eq!(parse("p q").unwrap_err().offset, 2);
    }

    #[test]
    fn render_minimal_parens() {
        for s in ["p -> q", "~(p -> q)", "(p -> q) -> r", "p & (q & r)", "~~p", "(p | q) & r", "T & F"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn identifiers() {
        assert_eq!(p("Top_1"), Formula::atom("Top_1"));
        assert_eq!(p("TF"), Formula::atom("TF"));
        assert_eq!(p("_x"), Formula::atom("_x"));
    }
}
