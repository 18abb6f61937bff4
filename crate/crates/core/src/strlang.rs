//! Expressions as strings.
//!
//! Object expressions are propositional formulas, represented by their
//! canonical strings over a fixed alphabet. The syntax language is the
//! sort `String` of a small term language with symbol constants, `nil`,
//! `cons`, `head` and `tail`. Quotation spells a formula as a right-nested
//! cons chain; evaluation parses the denoted string back.
//!
//! Term text: `nil`, `cons(t, t)`, `head(t)`, `tail(t)` and symbol
//! constants written as a quoted character, e.g. `'p'` or `' '`.

use std::fmt;

use thiserror::Error;

use crate::framework::{Features, SyntaxFramework};
use crate::prop::{self, Formula};
use crate::quasi::Subexpressions;

/// The object alphabet: ASCII letters and digits, space and `~&|()`.
pub fn in_alphabet(c: char) -> bool {
    c.is_ascii_alphanumeric() || " ~&|()".contains(c)
}

/// The alphabet in its fixed order.
pub fn alphabet() -> Vec<char> {
    ('a'..='z').chain('A'..='Z').chain('0'..='9').chain(" ~&|()".chars()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StrTerm {
    Sym(char),
    Nil,
    Cons(Box<StrTerm>, Box<StrTerm>),
    Head(Box<StrTerm>),
    Tail(Box<StrTerm>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Symbol,
    String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrError {
    #[error("sort mismatch in `{term}`: expected {expected:?}")]
    Sort { term: String, expected: Sort },
    #[error("symbol {0:?} is outside the alphabet")]
    Alphabet(char),
    #[error("term parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("`{0}` is not in the object language")]
    NotObject(String),
}

impl StrTerm {
    pub fn sym(c: char) -> Result<StrTerm, StrError> {
        if in_alphabet(c) {
            Ok(StrTerm::Sym(c))
        } else {
            Err(StrError::Alphabet(c))
        }
    }

    pub fn cons(head: StrTerm, tail: StrTerm) -> StrTerm {
        StrTerm::Cons(Box::new(head), Box::new(tail))
    }

    pub fn head(t: StrTerm) -> StrTerm {
        StrTerm::Head(Box::new(t))
    }

    pub fn tail(t: StrTerm) -> StrTerm {
        StrTerm::Tail(Box::new(t))
    }

    /// The right-nested cons chain spelling `s`.
    pub fn spell(s: &str) -> Result<StrTerm, StrError> {
        let mut acc = StrTerm::Nil;
        for c in s.chars().rev() {
            acc = StrTerm::cons(StrTerm::sym(c)?, acc);
        }
        Ok(acc)
    }

    pub fn sort(&self) -> Result<Sort, StrError> {
        let expect = |t: &StrTerm, want: Sort| -> Result<(), StrError> {
            if t.sort()? == want {
                Ok(())
            } else {
                Err(StrError::Sort { term: t.to_string(), expected: want })
            }
        };
        match self {
            StrTerm::Sym(c) => {
                if in_alphabet(*c) {
                    Ok(Sort::Symbol)
                } else {
                    Err(StrError::Alphabet(*c))
                }
            }
            StrTerm::Nil => Ok(Sort::String),
            StrTerm::Cons(a, s) => {
                expect(a, Sort::Symbol)?;
                expect(s, Sort::String)?;
                Ok(Sort::String)
            }
            StrTerm::Head(s) => {
                expect(s, Sort::String)?;
                Ok(Sort::Symbol)
            }
            StrTerm::Tail(s) => {
                expect(s, Sort::String)?;
                Ok(Sort::String)
            }
        }
    }

    /// Cons-chain depth, counting the final `nil`.
    pub fn chain_depth(&self) -> usize {
        match self {
            StrTerm::Cons(_, rest) => 1 + rest.chain_depth(),
            _ => 0,
        }
    }
}

impl fmt::Display for StrTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrTerm::Sym(c) => write!(f, "'{c}'"),
            StrTerm::Nil => f.write_str("nil"),
            StrTerm::Cons(a, s) => write!(f, "cons({a}, {s})"),
            StrTerm::Head(s) => write!(f, "head({s})"),
            StrTerm::Tail(s) => write!(f, "tail({s})"),
        }
    }
}

pub fn parse_term(src: &str) -> Result<StrTerm, StrError> {
    struct P<'a> {
        chars: Vec<(usize, char)>,
        i: usize,
        src: &'a str,
    }
    impl P<'_> {
        fn offset(&self) -> usize {
            self.chars.get(self.i).map_or(self.src.len(), |(o, _)| *o)
        }
        fn fail<T>(&self, msg: &str) -> Result<T, StrError> {
            Err(StrError::Parse { offset: self.offset(), message: msg.to_string() })
        }
        fn ws(&mut self) {
            while self.chars.get(self.i).is_some_and(|(_, c)| c.is_whitespace()) {
                self.i += 1;
            }
        }
        fn expect(&mut self, c: char) -> Result<(), StrError> {
            self.ws();
            if self.chars.get(self.i).map(|p| p.1) == Some(c) {
                self.i += 1;
                Ok(())
            } else {
                self.fail(&format!("expected `{c}`"))
            }
        }
        fn word(&mut self) -> String {
            let mut w = String::new();
            while let Some((_, c)) = self.chars.get(self.i) {
                if !c.is_ascii_alphabetic() {
                    break;
                }
                w.push(*c);
                self.i += 1;
            }
            w
        }
        fn term(&mut self) -> Result<StrTerm, StrError> {
            self.ws();
            if self.chars.get(self.i).map(|p| p.1) == Some('\'') {
                let Some((_, c)) = self.chars.get(self.i + 1).copied() else {
                    return self.fail("unterminated symbol");
                };
                if self.chars.get(self.i + 2).map(|p| p.1) != Some('\'') {
                    return self.fail("unterminated symbol");
                }
                self.i += 3;
                return StrTerm::sym(c);
            }
            let start = self.i;
            let w = self.word();
            match w.as_str() {
                "nil" => Ok(StrTerm::Nil),
                "cons" => {
                    self.expect('(')?;
                    let a = self.term()?;
                    self.expect(',')?;
                    let s = self.term()?;
                    self.expect(')')?;
                    Ok(StrTerm::cons(a, s))
                }
                "head" | "tail" => {
                    self.expect('(')?;
                    let s = self.term()?;
                    self.expect(')')?;
                    Ok(if w == "head" { StrTerm::head(s) } else { StrTerm::tail(s) })
                }
                _ => {
                    self.i = start;
                    self.fail("expected a term")
                }
            }
        }
    }
    let mut p = P { chars: src.char_indices().collect(), i: 0, src };
    let t = p.term()?;
    p.ws();
    if p.i != p.chars.len() {
        return p.fail("trailing input");
    }
    Ok(t)
}

/// What a well-sorted term denotes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Denotation {
    Symbol(char),
    Str(String),
}

/// Evaluates a term; absent for `head`/`tail` of the empty string.
pub fn term_value(t: &StrTerm) -> Result<Option<Denotation>, StrError> {
    t.sort()?;
    Ok(denote(t))
}

fn denote(t: &StrTerm) -> Option<Denotation> {
    match t {
        StrTerm::Sym(c) => Some(Denotation::Symbol(*c)),
        StrTerm::Nil => Some(Denotation::Str(String::new())),
        StrTerm::Cons(a, s) => match (denote(a)?, denote(s)?) {
            (Denotation::Symbol(c), Denotation::Str(rest)) => {
                let mut out = String::with_capacity(rest.len() + 1);
                out.push(c);
                out.push_str(&rest);
                Some(Denotation::Str(out))
            }
            _ => None,
        },
        StrTerm::Head(s) => match denote(s)? {
            Denotation::Str(st) => st.chars().next().map(Denotation::Symbol),
            Denotation::Symbol(_) => None,
        },
        StrTerm::Tail(s) => match denote(s)? {
            Denotation::Str(st) => {
                let mut chars = st.chars();
                chars.next()?;
                Some(Denotation::Str(chars.as_str().to_string()))
            }
            Denotation::Symbol(_) => None,
        },
    }
}

/// `S(e)`: the canonical string of a formula.
pub fn string_rep(e: &Formula) -> Result<String, StrError> {
    if !e.well_formed() {
        return Err(StrError::NotObject(format!("{e:?}")));
    }
    Ok(prop::print(e))
}

pub fn quote_str(e: &Formula) -> Result<StrTerm, StrError> {
    StrTerm::spell(&string_rep(e)?)
}

/// `E(t)`: the formula whose canonical string `t` denotes, if any.
pub fn eval_str(t: &StrTerm) -> Result<Option<Formula>, StrError> {
    if t.sort()? != Sort::String {
        return Err(StrError::Sort { term: t.to_string(), expected: Sort::String });
    }
    Ok(match denote(t) {
        Some(Denotation::Str(s)) => decode_string(&s),
        _ => None,
    })
}

fn decode_string(s: &str) -> Option<Formula> {
    let f = prop::parse(s).ok()?;
    (prop::print(&f) == s).then_some(f)
}

/// `L`: formulas and well-sorted terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StrExpr {
    Formula(Formula),
    Term(StrTerm),
}

impl fmt::Display for StrExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrExpr::Formula(g) => write!(f, "{g}"),
            StrExpr::Term(t) => write!(f, "{t}"),
        }
    }
}

impl Subexpressions for StrTerm {
    fn children(&self) -> Vec<Self> {
        match self {
            StrTerm::Sym(_) | StrTerm::Nil => Vec::new(),
            StrTerm::Cons(a, s) => vec![(**a).clone(), (**s).clone()],
            StrTerm::Head(s) | StrTerm::Tail(s) => vec![(**s).clone()],
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        let child = Box::new(child);
        Some(match (self, index) {
            (StrTerm::Cons(_, s), 0) => StrTerm::Cons(child, s.clone()),
            (StrTerm::Cons(a, _), 1) => StrTerm::Cons(a.clone(), child),
            (StrTerm::Head(_), 0) => StrTerm::Head(child),
            (StrTerm::Tail(_), 0) => StrTerm::Tail(child),
            _ => return None,
        })
    }
}

impl Subexpressions for StrExpr {
    fn children(&self) -> Vec<Self> {
        match self {
            StrExpr::Formula(f) => f.children().into_iter().map(StrExpr::Formula).collect(),
            StrExpr::Term(t) => t.children().into_iter().map(StrExpr::Term).collect(),
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        match (self, child) {
            (StrExpr::Formula(f), StrExpr::Formula(c)) => f.with_child(index, c).map(StrExpr::Formula),
            (StrExpr::Term(t), StrExpr::Term(c)) => t.with_child(index, c).map(StrExpr::Term),
            _ => None,
        }
    }
}

/// `D`: truth values, symbols, strings, and ⊥ for `head`/`tail` of `nil`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StrValue {
    Truth(bool),
    Symbol(char),
    Str(String),
    Undefined,
}

/// `F = (D₂, S, L₂, Q, E)`. Formula variables are read as false.
#[derive(Debug, Clone, Copy, Default)]
pub struct StrFramework;

impl SyntaxFramework for StrFramework {
    type Expr = StrExpr;
    type Value = StrValue;

    fn id(&self) -> &str {
        "strlang"
    }

    fn features(&self) -> Features {
        Features::default()
    }

    fn in_language(&self, e: &StrExpr) -> bool {
        match e {
            StrExpr::Formula(f) => f.well_formed(),
            StrExpr::Term(t) => t.sort().is_ok(),
        }
    }

    fn in_object(&self, e: &StrExpr) -> bool {
        matches!(e, StrExpr::Formula(f) if f.well_formed())
    }

    /// String-sorted terms that denote a string.
    fn in_syntax(&self, e: &StrExpr) -> bool {
        matches!(e, StrExpr::Term(t)
            if t.sort() == Ok(Sort::String) && denote(t).is_some())
    }

    fn semantic(&self, e: &StrExpr) -> StrValue {
        match e {
            StrExpr::Formula(f) => StrValue::Truth(prop::truth(f, &prop::Assignment::new(), false)),
            StrExpr::Term(t) => match denote(t) {
                Some(Denotation::Symbol(c)) => StrValue::Symbol(c),
                Some(Denotation::Str(s)) => StrValue::Str(s),
                None => StrValue::Undefined,
            },
        }
    }

    fn syntactic(&self, e: &StrExpr) -> StrValue {
        match e {
            StrExpr::Formula(f) => StrValue::Str(prop::print(f)),
            StrExpr::Term(_) => panic!("syntactic value requested outside L_obj"),
        }
    }

    fn decode(&self, v: &StrValue) -> Option<StrExpr> {
        match v {
            StrValue::Str(s) => decode_string(s).map(StrExpr::Formula),
            _ => None,
        }
    }

    fn quotation(&self, e: &StrExpr) -> StrExpr {
        match e {
            StrExpr::Formula(f) => StrExpr::Term(quote_str(f).expect("object formulas spell")),
            StrExpr::Term(_) => panic!("quotation requested outside L_obj"),
        }
    }

    fn evaluation(&self, e: &StrExpr) -> Option<StrExpr> {
        match e {
            StrExpr::Term(t) => eval_str(t).ok().flatten().map(StrExpr::Formula),
            StrExpr::Formula(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework;

    fn sym(c: char) -> StrTerm {
        StrTerm::sym(c).unwrap()
    }

    #[test]
    fn four_symbol_quotation_shape() {
        // "p & q" has five symbols; "~~~p" has four, like f(x).
        let f = prop::parse("~~~p").unwrap();
        let q = quote_str(&f).unwrap();
        let expected = StrTerm::cons(
            sym('~'),
            StrTerm::cons(sym('~'), StrTerm::cons(sym('~'), StrTerm::cons(sym('p'), StrTerm::Nil))),
        );
        assert_eq!(q, expected);
        assert_eq!(q.chain_depth(), 4);
        assert_eq!(q.to_string(), "cons('~', cons('~', cons('~', cons('p', nil))))");
    }

    #[test]
    fn string_rep_examples() {
        assert_eq!(string_rep(&Formula::var("p")).unwrap(), "p");
        assert_eq!(string_rep(&Formula::and(Formula::var("p"), Formula::True)).unwrap(), "p & true");
    }

    #[test]
    fn term_value_examples() {
        assert_eq!(term_value(&StrTerm::Nil).unwrap(), Some(Denotation::Str(String::new())));
        assert_eq!(term_value(&StrTerm::cons(sym('p'), StrTerm::Nil)).unwrap(), Some(Denotation::Str("p".into())));
        assert_eq!(term_value(&StrTerm::head(StrTerm::Nil)).unwrap(), None);
        assert_eq!(term_value(&StrTerm::tail(StrTerm::Nil)).unwrap(), None);
        let bad = StrTerm::cons(StrTerm::Nil, StrTerm::Nil);
        assert!(matches!(term_value(&bad), Err(StrError::Sort { .. })));
        assert!(StrTerm::sym('#').is_err());
    }

    #[test]
    fn eval_examples() {
        let f = prop::parse("p & (q | ~r)").unwrap();
        assert_eq!(eval_str(&quote_str(&f).unwrap()).unwrap(), Some(f));
        assert_eq!(eval_str(&StrTerm::spell("p & (").unwrap()).unwrap(), None);
        assert_eq!(eval_str(&StrTerm::spell("true").unwrap()).unwrap(), Some(Formula::True));
        assert!(eval_str(&sym('p')).is_err());
        // head(cons('p', nil)) is Symbol-sorted.
        assert!(eval_str(&StrTerm::head(StrTerm::spell("p").unwrap())).is_err());
    }

    #[test]
    fn term_text_round_trip() {
        let t = StrTerm::tail(StrTerm::cons(sym(' '), StrTerm::spell("(p)").unwrap()));
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        assert!(parse_term("cons('p')").is_err());
        assert!(parse_term("cons('p', nil) x").is_err());
        assert!(parse_term("'#'").is_err());
    }

    #[test]
    fn framework_membership() {
        let inst = StrFramework;
        let undefined = StrExpr::Term(StrTerm::tail(StrTerm::Nil));
        assert!(inst.in_language(&undefined));
        assert!(!inst.in_syntax(&undefined));
        assert_eq!(framework::sem_value(&inst, &undefined).unwrap(), StrValue::Undefined);
        let q = framework::quote(&inst, &StrExpr::Formula(Formula::var("p"))).unwrap();
        assert_eq!(framework::direct_eval(&inst, &q).unwrap(), Some(StrExpr::Formula(Formula::var("p"))));
    }

    #[test]
    fn alphabet_is_fixed() {
        let a = alphabet();
        assert_eq!(a.len(), 26 + 26 + 10 + 6);
        assert!(a.iter().all(|c| in_alphabet(*c)));
    }
}
