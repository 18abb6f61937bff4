//! Propositional formulas as members of an inductive type.
//!
//! The interpreter is `print ∘ value ∘ parse`. As a syntax framework the
//! object language is the set of canonical formula strings, the syntax
//! language is the set of formula trees, quotation is `parse` and
//! evaluation is `print`.
//!
//! Concrete grammar: atoms `true`, `false` and identifiers (a letter, then
//! letters or digits); `~` binds tightest, then `&`, then `|`; both binary
//! operators associate to the left. Canonical text has single spaces
//! around binary operators and the fewest parentheses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::framework::{Features, SyntaxFramework};
use crate::quasi::Subexpressions;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Var(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

#[allow(clippy::should_implement_trait)]
impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    fn constant(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }

    fn as_constant(&self) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            _ => None,
        }
    }

    /// Variable names occurring in the formula, sorted and deduplicated.
    pub fn variables(&self) -> Vec<String> {
        fn walk(f: &Formula, out: &mut Vec<String>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Var(v) => out.push(v.clone()),
                Formula::Neg(a) => walk(a, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Whether every variable name belongs to the identifier class.
    pub fn well_formed(&self) -> bool {
        match self {
            Formula::True | Formula::False => true,
            Formula::Var(v) => is_identifier(v),
            Formula::Neg(a) => a.well_formed(),
            Formula::And(a, b) | Formula::Or(a, b) => a.well_formed() && b.well_formed(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
        && s != "true"
        && s != "false"
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn at(out: &mut fmt::Formatter<'_>, g: &Formula, min: u8) -> fmt::Result {
            if g.precedence() < min {
                write!(out, "(")?;
                write_formula(out, g)?;
                write!(out, ")")
            } else {
                write_formula(out, g)
            }
        }
        fn write_formula(out: &mut fmt::Formatter<'_>, g: &Formula) -> fmt::Result {
            match g {
                Formula::True => out.write_str("true"),
                Formula::False => out.write_str("false"),
                Formula::Var(v) => out.write_str(v),
                Formula::Neg(a) => {
                    out.write_str("~")?;
                    at(out, a, 3)
                }
                Formula::And(a, b) => {
                    at(out, a, 2)?;
                    out.write_str(" & ")?;
                    at(out, b, 3)
                }
                Formula::Or(a, b) => {
                    at(out, a, 1)?;
                    out.write_str(" | ")?;
                    at(out, b, 2)
                }
            }
        }
        write_formula(f, self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat('|') {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('&') {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat('~') {
            return Ok(Formula::neg(self.unary()?));
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.disjunction()?;
                if !self.eat(')') {
                    return self.error("expected `)`");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let len =
                    self.src[start..].find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(self.src.len() - start);
                self.pos += len;
                Ok(match &self.src[start..self.pos] {
                    "true" => Formula::True,
                    "false" => Formula::False,
                    name => Formula::var(name),
                })
            }
            Some(c) => self.error(format!("unexpected `{c}`")),
            None => self.error("unexpected end of input"),
        }
    }
}

pub fn parse(s: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { src: s, pos: 0 };
    let f = p.disjunction()?;
    if let Some(c) = p.peek() {
        return p.error(format!("trailing `{c}`"));
    }
    Ok(f)
}

pub fn print(f: &Formula) -> String {
    f.to_string()
}

/// Whether `s` is in the canonical language: it parses and prints back to
/// itself.
pub fn is_canonical(s: &str) -> bool {
    parse(s).is_ok_and(|f| print(&f) == s)
}

/// A partial map from variable names to truth values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment(BTreeMap<String, bool>);

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn with(mut self, name: &str, value: bool) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn set(&mut self, name: &str, value: bool) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.0.get(name).copied()
    }

    /// Whether `self` agrees with `other` wherever `other` is defined.
    pub fn extends(&self, other: &Assignment) -> bool {
        other.0.iter().all(|(k, v)| self.0.get(k) == Some(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed assignment `{0}`; expected entries like p=T,q=F")]
pub struct AssignmentError(pub String);

impl FromStr for Assignment {
    type Err = AssignmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Assignment::new();
        for entry in s.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (name, value) = entry.split_once('=').ok_or_else(|| AssignmentError(entry.to_string()))?;
            let name = name.trim();
            if !is_identifier(name) {
                return Err(AssignmentError(entry.to_string()));
            }
            let value = match value.trim() {
                "T" | "t" | "true" | "1" => true,
                "F" | "f" | "false" | "0" => false,
                _ => return Err(AssignmentError(entry.to_string())),
            };
            out.set(name, value);
        }
        Ok(out)
    }
}

/// Substitutes mapped variables and simplifies bottom-up, once.
///
/// Rules: constant folding, `x&T→x`, `x&F→F`, `x|F→x`, `x|T→T` (either
/// side) and `~~x→x`. The result is a constant when every variable is
/// mapped and otherwise mentions only unmapped variables.
pub fn value(f: &Formula, phi: &Assignment) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Var(v) => match phi.get(v) {
            Some(b) => Formula::constant(b),
            None => f.clone(),
        },
        Formula::Neg(a) => match value(a, phi) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Neg(inner) => *inner,
            other => Formula::neg(other),
        },
        Formula::And(a, b) => {
            let (a, b) = (value(a, phi), value(b, phi));
            match (a.as_constant(), b.as_constant()) {
                (Some(false), _) | (_, Some(false)) => Formula::False,
                (Some(true), _) => b,
                (_, Some(true)) => a,
                _ => Formula::and(a, b),
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (value(a, phi), value(b, phi));
            match (a.as_constant(), b.as_constant()) {
                (Some(true), _) | (_, Some(true)) => Formula::True,
                (Some(false), _) => b,
                (_, Some(false)) => a,
                _ => Formula::or(a, b),
            }
        }
    }
}

/// `print(value(parse(s), φ))`.
pub fn interpret(s: &str, phi: &Assignment) -> Result<String, ParseError> {
    Ok(print(&value(&parse(s)?, phi)))
}

/// Truth value with unmapped variables read as `default`.
pub fn truth(f: &Formula, phi: &Assignment, default: bool) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Var(v) => phi.get(v).unwrap_or(default),
        Formula::Neg(a) => !truth(a, phi, default),
        Formula::And(a, b) => truth(a, phi, default) && truth(b, phi, default),
        Formula::Or(a, b) => truth(a, phi, default) || truth(b, phi, default),
    }
}

impl Subexpressions for Formula {
    fn children(&self) -> Vec<Self> {
        match self {
            Formula::True | Formula::False | Formula::Var(_) => Vec::new(),
            Formula::Neg(a) => vec![(**a).clone()],
            Formula::And(a, b) | Formula::Or(a, b) => vec![(**a).clone(), (**b).clone()],
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        let child = Box::new(child);
        Some(match (self, index) {
            (Formula::Neg(_), 0) => Formula::Neg(child),
            (Formula::And(_, b), 0) => Formula::And(child, b.clone()),
            (Formula::And(a, _), 1) => Formula::And(a.clone(), child),
            (Formula::Or(_, b), 0) => Formula::Or(child, b.clone()),
            (Formula::Or(a, _), 1) => Formula::Or(a.clone(), child),
            _ => return None,
        })
    }
}

/// `L = L_prop ∪ L_form`: formula strings and formula trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropExpr {
    Text(String),
    Tree(Formula),
}

impl fmt::Display for PropExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropExpr::Text(s) => write!(f, "{s:?}"),
            PropExpr::Tree(t) => write!(f, "{t:?}"),
        }
    }
}

impl Subexpressions for PropExpr {
    fn children(&self) -> Vec<Self> {
        match self {
            PropExpr::Text(s) => match parse(s) {
                Ok(f) => f.children().into_iter().map(|c| PropExpr::Text(print(&c))).collect(),
                Err(_) => Vec::new(),
            },
            PropExpr::Tree(t) => t.children().into_iter().map(PropExpr::Tree).collect(),
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        match (self, child) {
            (PropExpr::Text(s), PropExpr::Text(c)) => {
                let tree = parse(s).ok()?.with_child(index, parse(&c).ok()?)?;
                Some(PropExpr::Text(print(&tree)))
            }
            (PropExpr::Tree(t), PropExpr::Tree(c)) => t.with_child(index, c).map(PropExpr::Tree),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PropValue {
    Truth(bool),
    Tree(Formula),
}

/// `F = (D_form, P, L_form, parse, print)` relative to an assignment φ;
/// unmapped variables are false.
#[derive(Debug, Clone, Default)]
pub struct PropFramework {
    pub assignment: Assignment,
}

impl PropFramework {
    pub fn new(assignment: Assignment) -> Self {
        PropFramework { assignment }
    }
}

impl SyntaxFramework for PropFramework {
    type Expr = PropExpr;
    type Value = PropValue;

    fn id(&self) -> &str {
        "prop"
    }

    fn features(&self) -> Features {
        Features { syn_surjective: true, eval_total: true, ..Features::default() }
    }

    fn in_language(&self, e: &PropExpr) -> bool {
        self.in_object(e) || self.in_syntax(e)
    }

    fn in_object(&self, e: &PropExpr) -> bool {
        matches!(e, PropExpr::Text(s) if is_canonical(s))
    }

    fn in_syntax(&self, e: &PropExpr) -> bool {
        matches!(e, PropExpr::Tree(t) if t.well_formed())
    }

    fn semantic(&self, e: &PropExpr) -> PropValue {
        match e {
            PropExpr::Text(s) => {
                let f = parse(s).expect("object-language strings parse");
                PropValue::Truth(truth(&f, &self.assignment, false))
            }
            PropExpr::Tree(t) => PropValue::Tree(t.clone()),
        }
    }

    fn syntactic(&self, e: &PropExpr) -> PropValue {
        match e {
            PropExpr::Text(s) => PropValue::Tree(parse(s).expect("object-language strings parse")),
            PropExpr::Tree(_) => panic!("syntactic value requested outside L_obj"),
        }
    }

    fn decode(&self, v: &PropValue) -> Option<PropExpr> {
        match v {
            PropValue::Tree(t) if t.well_formed() => {
                let s = print(t);
                (parse(&s).as_ref() == Ok(t)).then_some(PropExpr::Text(s))
            }
            _ => None,
        }
    }

    fn quotation(&self, e: &PropExpr) -> PropExpr {
        match e {
            PropExpr::Text(s) => PropExpr::Tree(parse(s).expect("object-language strings parse")),
            PropExpr::Tree(_) => panic!("quotation requested outside L_obj"),
        }
    }

    fn evaluation(&self, e: &PropExpr) -> Option<PropExpr> {
        match e {
            PropExpr::Tree(t) => Some(PropExpr::Text(print(t))),
            PropExpr::Text(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework;

    fn p() -> Formula {
        Formula::var("p")
    }

    /// Brute-force truth-table oracle, independent of `value`.
    fn table(f: &Formula, phi: &Assignment) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Var(v) => phi.get(v).expect("total assignment"),
            Formula::Neg(a) => !table(a, phi),
            Formula::And(a, b) => table(a, phi) & table(b, phi),
            Formula::Or(a, b) => table(a, phi) | table(b, phi),
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("p & true").unwrap(), Formula::and(p(), Formula::True));
        assert_eq!(parse("true").unwrap(), Formula::True);
        let err = parse("p & (").unwrap_err();
        assert_eq!(err.offset, 5);
        assert!(parse("p q").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn print_examples() {
        assert_eq!(print(&p()), "p");
        assert_eq!(print(&Formula::and(p(), Formula::True)), "p & true");
        assert_eq!(print(&Formula::neg(Formula::True)), "~true");
        let nested = Formula::and(p(), Formula::and(Formula::var("q"), Formula::var("r")));
        assert_eq!(print(&nested), "p & (q & r)");
        let mixed = Formula::neg(Formula::or(p(), Formula::and(Formula::var("q"), p())));
        assert_eq!(print(&mixed), "~(p | q & p)");
    }

    #[test]
    fn canonical_strings() {
        assert!(is_canonical("p & true"));
        assert!(!is_canonical("p&true"));
        assert!(!is_canonical("(p)"));
        assert!(!is_canonical("p & ("));
    }

    #[test]
    fn value_examples() {
        let empty = Assignment::new();
        assert_eq!(value(&Formula::and(p(), Formula::True), &empty), p());
        assert_eq!(value(&Formula::True, &Assignment::new().with("p", false)), Formula::True);
        let q_false = Assignment::new().with("q", false);
        assert_eq!(value(&Formula::or(Formula::var("q"), Formula::False), &q_false), Formula::False);
        let double = Formula::neg(Formula::neg(Formula::neg(p())));
        assert_eq!(value(&double, &empty), Formula::neg(p()));
    }

    #[test]
    fn interpret_examples() {
        let empty = Assignment::new();
        assert_eq!(interpret("p & true", &empty).unwrap(), "p");
        // Oracle: T ∨ F = T.
        assert_eq!(interpret("true | false", &empty).unwrap(), "true");
        let p_true = Assignment::new().with("p", true);
        assert_eq!(interpret("~~p", &p_true).unwrap(), "true");
        assert!(interpret("p & (", &empty).is_err());
    }

    #[test]
    fn sem_value_examples() {
        let inst = PropFramework::new(Assignment::new().with("p", true));
        let v = framework::sem_value(&inst, &PropExpr::Text("true".into())).unwrap();
        assert_eq!(v, PropValue::Truth(true));
        // Truth-table oracle over p ∈ {T}: T ∧ T = T.
        let e = PropExpr::Text("p & true".into());
        let expected = table(&parse("p & true").unwrap(), &inst.assignment);
        assert_eq!(framework::sem_value(&inst, &e).unwrap(), PropValue::Truth(expected));
        assert!(framework::sem_value(&inst, &PropExpr::Text("p &".into())).is_err());
    }

    #[test]
    fn worked_pipeline() {
        let inst = PropFramework::default();
        let e = PropExpr::Text("p & true".into());
        let q = framework::quote(&inst, &e).unwrap();
        assert_eq!(q, PropExpr::Tree(Formula::and(p(), Formula::True)));
        let PropExpr::Tree(f) = &q else { unreachable!() };
        let f2 = value(f, &Assignment::new());
        assert_eq!(f2, p());
        assert_eq!(print(&f2), "p");
        assert_eq!(framework::eval(&inst, &q).unwrap(), Some(e));
    }

    #[test]
    fn membership_errors() {
        let inst = PropFramework::default();
        let tree = PropExpr::Tree(Formula::True);
        assert!(framework::quote(&inst, &tree).is_err());
        assert!(framework::eval(&inst, &PropExpr::Text("true".into())).is_err());
        assert!(framework::syn_value(&inst, &PropExpr::Text("(true)".into())).is_err());
    }

    #[test]
    fn assignment_text() {
        let a: Assignment = "p=T, q=F".parse().unwrap();
        assert_eq!(a.get("p"), Some(true));
        assert_eq!(a.get("q"), Some(false));
        assert_eq!(a.get("r"), None);
        assert!("p".parse::<Assignment>().is_err());
        assert!("p=maybe".parse::<Assignment>().is_err());
    }

    #[test]
    fn truth_table_small() {
        let f = parse("~(p | q) & (p | ~q)").unwrap();
        for (pv, qv) in [(false, false), (false, true), (true, false), (true, true)] {
            let phi = Assignment::new().with("p", pv).with("q", qv);
            let expected = !(pv || qv) && (pv || !qv);
            assert_eq!(table(&f, &phi), expected);
            assert_eq!(value(&f, &phi), Formula::constant(expected));
        }
    }
}
