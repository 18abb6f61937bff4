//! Ring expressions, their inductive polynomial mirror and normalization.
//!
//! `pquote` lifts a ring expression constructor-for-constructor into
//! [`Poly`], `interp_p` maps back, and [`normalize`] brings a polynomial
//! to an ordered sum of unique monomials over the integers.
//!
//! Monomials are ordered graded-lexicographically: higher total degree
//! first, ties broken by comparing exponents variable by variable from
//! `x0` upward, larger exponent first. So `x0² > x0·x1 > x1² > x0 > x1 > 1`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::framework::{Features, SyntaxFramework};
use crate::quasi::Subexpressions;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingExpr {
    Const(BigInt),
    Var(u32),
    Add(Box<RingExpr>, Box<RingExpr>),
    Mul(Box<RingExpr>, Box<RingExpr>),
    Neg(Box<RingExpr>),
}

#[allow(clippy::should_implement_trait)]
impl RingExpr {
    pub fn constant(n: i64) -> Self {
        RingExpr::Const(BigInt::from(n))
    }
    pub fn add(a: RingExpr, b: RingExpr) -> Self {
        RingExpr::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: RingExpr, b: RingExpr) -> Self {
        RingExpr::Mul(Box::new(a), Box::new(b))
    }
    pub fn neg(a: RingExpr) -> Self {
        RingExpr::Neg(Box::new(a))
    }

    pub fn variables(&self) -> Vec<u32> {
        fn walk(e: &RingExpr, out: &mut Vec<u32>) {
            match e {
                RingExpr::Const(_) => {}
                RingExpr::Var(i) => {
                    if !out.contains(i) {
                        out.push(*i);
                    }
                }
                RingExpr::Add(a, b) | RingExpr::Mul(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                RingExpr::Neg(a) => walk(a, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out
    }

    /// Upper bound on the total degree.
    pub fn degree(&self) -> u32 {
        match self {
            RingExpr::Const(_) => 0,
            RingExpr::Var(_) => 1,
            RingExpr::Add(a, b) => a.degree().max(b.degree()),
            RingExpr::Mul(a, b) => a.degree() + b.degree(),
            RingExpr::Neg(a) => a.degree(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Poly {
    Pvar(u32),
    Pconst(BigInt),
    Pplus(Box<Poly>, Box<Poly>),
    Pmult(Box<Poly>, Box<Poly>),
    Popp(Box<Poly>),
}

impl Poly {
    pub fn plus(a: Poly, b: Poly) -> Self {
        Poly::Pplus(Box::new(a), Box::new(b))
    }
    pub fn mult(a: Poly, b: Poly) -> Self {
        Poly::Pmult(Box::new(a), Box::new(b))
    }
    pub fn opp(a: Poly) -> Self {
        Poly::Popp(Box::new(a))
    }
}

pub fn pquote(e: &RingExpr) -> Poly {
    match e {
        RingExpr::Const(c) => Poly::Pconst(c.clone()),
        RingExpr::Var(i) => Poly::Pvar(*i),
        RingExpr::Add(a, b) => Poly::plus(pquote(a), pquote(b)),
        RingExpr::Mul(a, b) => Poly::mult(pquote(a), pquote(b)),
        RingExpr::Neg(a) => Poly::opp(pquote(a)),
    }
}

pub fn interp_p(p: &Poly) -> RingExpr {
    match p {
        Poly::Pconst(c) => RingExpr::Const(c.clone()),
        Poly::Pvar(i) => RingExpr::Var(*i),
        Poly::Pplus(a, b) => RingExpr::add(interp_p(a), interp_p(b)),
        Poly::Pmult(a, b) => RingExpr::mul(interp_p(a), interp_p(b)),
        Poly::Popp(a) => RingExpr::neg(interp_p(a)),
    }
}

/// Sparse exponent vector: strictly increasing variable indices with
/// positive exponents.
pub type Exponents = Vec<(u32, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub coeff: BigInt,
    pub exps: Exponents,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|(_, e)| e).sum()
    }
}

/// The monomial order; `Less` sorts first.
pub fn monomial_order(a: &Exponents, b: &Exponents) -> Ordering {
    let deg = |x: &Exponents| x.iter().map(|(_, e)| *e).sum::<u32>();
    deg(b).cmp(&deg(a)).then_with(|| {
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va != vb {
                        // The operand mentioning the smaller variable has the
                        // larger exponent there.
                        return va.cmp(&vb);
                    }
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    })
}

fn mul_exps(a: &Exponents, b: &Exponents) -> Exponents {
    let mut m: BTreeMap<u32, u32> = a.iter().copied().collect();
    for &(v, e) in b {
        *m.entry(v).or_insert(0) += e;
    }
    m.into_iter().collect()
}

/// Ordered sum of unique monomials with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NormalPoly {
    monomials: Vec<Monomial>,
}

impl NormalPoly {
    fn from_map(map: HashMap<Exponents, BigInt>) -> Self {
        let mut monomials: Vec<Monomial> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(exps, coeff)| Monomial { coeff, exps }).collect();
        monomials.sort_by(|a, b| monomial_order(&a.exps, &b.exps));
        NormalPoly { monomials }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Right-nested `Pplus` of monomials, each a `Pmult` chain of its
    /// coefficient (omitted when 1) and variables; zero is `Pconst 0`.
    pub fn to_poly(&self) -> Poly {
        let mono = |m: &Monomial| {
            let mut factors: Vec<Poly> = Vec::new();
            if !m.coeff.is_one() || m.exps.is_empty() {
                factors.push(Poly::Pconst(m.coeff.clone()));
            }
            for &(v, e) in &m.exps {
                factors.extend(std::iter::repeat_n(Poly::Pvar(v), e as usize));
            }
            let last = factors.pop().expect("at least one factor");
            factors.into_iter().rev().fold(last, |acc, f| Poly::mult(f, acc))
        };
        let Some((last, rest)) = self.monomials.split_last() else {
            return Poly::Pconst(BigInt::zero());
        };
        rest.iter().rev().fold(mono(last), |acc, m| Poly::plus(mono(m), acc))
    }

    /// Strictly ordered, no zero coefficients, no empty-exponent duplicates.
    pub fn is_canonical(&self) -> bool {
        self.monomials.iter().all(|m| !m.coeff.is_zero() && m.exps.iter().all(|(_, e)| *e > 0))
            && self.monomials.windows(2).all(|w| monomial_order(&w[0].exps, &w[1].exps) == Ordering::Less)
    }

    pub fn eval(&self, phi: &dyn Fn(u32) -> Option<BigInt>) -> Result<BigInt, RingError> {
        let mut total = BigInt::zero();
        for m in &self.monomials {
            let mut term = m.coeff.clone();
            for &(v, e) in &m.exps {
                let x = phi(v).ok_or(RingError::Unassigned(v))?;
                term *= num_traits::pow(x, e as usize);
            }
            total += term;
        }
        Ok(total)
    }
}

pub fn normalize(p: &Poly) -> NormalPoly {
    fn go(p: &Poly) -> HashMap<Exponents, BigInt> {
        match p {
            Poly::Pvar(v) => HashMap::from([(vec![(*v, 1)], BigInt::one())]),
            Poly::Pconst(c) => HashMap::from([(Vec::new(), c.clone())]),
            Poly::Pplus(a, b) => {
                let mut m = go(a);
                for (k, c) in go(b) {
                    *m.entry(k).or_insert_with(BigInt::zero) += c;
                }
                m
            }
            Poly::Pmult(a, b) => {
                let (ma, mb) = (go(a), go(b));
                let mut m = HashMap::new();
                for (ka, ca) in &ma {
                    for (kb, cb) in &mb {
                        *m.entry(mul_exps(ka, kb)).or_insert_with(BigInt::zero) += ca * cb;
                    }
                }
                m.retain(|_, c: &mut BigInt| !c.is_zero());
                m
            }
            Poly::Popp(a) => go(a).into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
    NormalPoly::from_map(go(p))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("variable x{0} has no assigned value")]
    Unassigned(u32),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub fn eval_ring(e: &RingExpr, phi: &dyn Fn(u32) -> Option<BigInt>) -> Result<BigInt, RingError> {
    Ok(match e {
        RingExpr::Const(c) => c.clone(),
        RingExpr::Var(v) => phi(*v).ok_or(RingError::Unassigned(*v))?,
        RingExpr::Add(a, b) => eval_ring(a, phi)? + eval_ring(b, phi)?,
        RingExpr::Mul(a, b) => eval_ring(a, phi)? * eval_ring(b, phi)?,
        RingExpr::Neg(a) => -eval_ring(a, phi)?,
    })
}

/// An assignment from a slice: `x_i ↦ values[i]`.
pub fn assignment(values: &[i64]) -> impl Fn(u32) -> Option<BigInt> + '_ {
    move |i| values.get(i as usize).map(|v| BigInt::from(*v))
}

impl fmt::Display for NormalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            let mag = m.coeff.abs();
            match (i, m.coeff.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || m.exps.is_empty() {
                parts.push(mag.to_string());
            }
            for &(v, e) in &m.exps {
                parts.push(if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") });
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

fn prec(e: &RingExpr) -> u8 {
    match e {
        RingExpr::Add(..) => 1,
        RingExpr::Mul(..) => 2,
        _ => 3,
    }
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn at(f: &mut fmt::Formatter<'_>, e: &RingExpr, min: u8) -> fmt::Result {
            if prec(e) < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            RingExpr::Const(c) => write!(f, "{c}"),
            RingExpr::Var(v) => write!(f, "x{v}"),
            RingExpr::Add(a, b) => {
                at(f, a, 1)?;
                match &**b {
                    RingExpr::Neg(inner) => {
                        f.write_str(" - ")?;
                        at(f, inner, 2)
                    }
                    _ => {
                        f.write_str(" + ")?;
                        at(f, b, 2)
                    }
                }
            }
            RingExpr::Mul(a, b) => {
                at(f, a, 2)?;
                f.write_str(" * ")?;
                at(f, b, 3)
            }
            RingExpr::Neg(a) => {
                f.write_str("-")?;
                match &**a {
                    RingExpr::Const(c) if !c.is_negative() => write!(f, "({c})"),
                    _ => at(f, a, 3),
                }
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Poly::Pvar(v) => write!(f, "Pvar {v}"),
            Poly::Pconst(c) => write!(f, "Pconst {c}"),
            Poly::Pplus(a, b) => write!(f, "Pplus({a}, {b})"),
            Poly::Pmult(a, b) => write!(f, "Pmult({a}, {b})"),
            Poly::Popp(a) => write!(f, "Popp({a})"),
        }
    }
}

/// Parses `+`, binary and unary `-`, `*`, `^` with a natural exponent,
/// integers, `x0`, `x1`, … and parentheses. `a - b` reads as `a + -b`.
pub fn parse(src: &str) -> Result<RingExpr, RingError> {
    let mut p = RingParser { src: src.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.ws();
    if p.pos < p.src.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(e)
}

struct RingParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl RingParser<'_> {
    fn fail<T>(&self, message: &str) -> Result<T, RingError> {
        Err(RingError::Parse { offset: self.pos, message: message.to_string() })
    }

    fn ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&str> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (start < self.pos).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn sum(&mut self) -> Result<RingExpr, RingError> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = RingExpr::add(acc, self.product()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = RingExpr::add(acc, RingExpr::neg(self.product()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<RingExpr, RingError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = RingExpr::mul(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RingExpr, RingError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                let n: BigInt = self.digits().expect("digit present").parse().expect("digits");
                return self.power(RingExpr::Const(-n));
            }
            return Ok(RingExpr::neg(self.unary()?));
        }
        let base = self.atom()?;
        self.power(base)
    }

    fn power(&mut self, base: RingExpr) -> Result<RingExpr, RingError> {
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.ws();
        let Some(n) = self.digits().and_then(|d| d.parse::<u32>().ok()) else {
            return self.fail("expected a natural exponent");
        };
        Ok(match n {
            0 => RingExpr::constant(1),
            _ => (1..n).fold(base.clone(), |acc, _| RingExpr::mul(acc, base.clone())),
        })
    }

    fn atom(&mut self) -> Result<RingExpr, RingError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                match self.digits().and_then(|d| d.parse::<u32>().ok()) {
                    Some(v) => Ok(RingExpr::Var(v)),
                    None => self.fail("expected a variable index"),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                Ok(RingExpr::Const(self.digits().expect("digit present").parse().expect("digits")))
            }
            _ => self.fail("expected an integer, variable or `(`"),
        }
    }
}

/// Either side of the framework: ring expressions are the object
/// language, polynomial trees the syntax language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSyntax {
    Expr(RingExpr),
    Poly(Poly),
}

impl fmt::Display for RingSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSyntax::Expr(e) => write!(f, "{e}"),
            RingSyntax::Poly(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingValue {
    /// A polynomial function, by its normal form.
    Function(NormalPoly),
    /// A polynomial tree denotes itself.
    Tree(Poly),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RingFramework;

impl SyntaxFramework for RingFramework {
    type Expr = RingSyntax;
    type Value = RingValue;

    fn id(&self) -> &str {
        "ring"
    }

    fn features(&self) -> Features {
        Features { syn_surjective: true, eval_total: true, ..Features::default() }
    }

    fn in_language(&self, _: &RingSyntax) -> bool {
        true
    }

    fn in_object(&self, e: &RingSyntax) -> bool {
        matches!(e, RingSyntax::Expr(_))
    }

    fn in_syntax(&self, e: &RingSyntax) -> bool {
        matches!(e, RingSyntax::Poly(_))
    }

    fn semantic(&self, e: &RingSyntax) -> RingValue {
        match e {
            RingSyntax::Expr(e) => RingValue::Function(normalize(&pquote(e))),
            RingSyntax::Poly(p) => RingValue::Tree(p.clone()),
        }
    }

    fn syntactic(&self, e: &RingSyntax) -> RingValue {
        match e {
            RingSyntax::Expr(e) => RingValue::Tree(pquote(e)),
            RingSyntax::Poly(p) => RingValue::Tree(p.clone()),
        }
    }

    fn decode(&self, v: &RingValue) -> Option<RingSyntax> {
        match v {
            RingValue::Tree(p) => Some(RingSyntax::Expr(interp_p(p))),
            RingValue::Function(_) => None,
        }
    }

    fn quotation(&self, e: &RingSyntax) -> RingSyntax {
        match e {
            RingSyntax::Expr(e) => RingSyntax::Poly(pquote(e)),
            RingSyntax::Poly(p) => RingSyntax::Poly(p.clone()),
        }
    }

    fn evaluation(&self, e: &RingSyntax) -> Option<RingSyntax> {
        match e {
            RingSyntax::Poly(p) => Some(RingSyntax::Expr(interp_p(p))),
            RingSyntax::Expr(_) => None,
        }
    }
}

impl Subexpressions for RingExpr {
    fn children(&self) -> Vec<Self> {
        match self {
            RingExpr::Const(_) | RingExpr::Var(_) => Vec::new(),
            RingExpr::Add(a, b) | RingExpr::Mul(a, b) => vec![(**a).clone(), (**b).clone()],
            RingExpr::Neg(a) => vec![(**a).clone()],
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        let c = Box::new(child);
        Some(match (self, index) {
            (RingExpr::Add(_, b), 0) => RingExpr::Add(c, b.clone()),
            (RingExpr::Add(a, _), 1) => RingExpr::Add(a.clone(), c),
            (RingExpr::Mul(_, b), 0) => RingExpr::Mul(c, b.clone()),
            (RingExpr::Mul(a, _), 1) => RingExpr::Mul(a.clone(), c),
            (RingExpr::Neg(_), 0) => RingExpr::Neg(c),
            _ => return None,
        })
    }
}

impl Subexpressions for Poly {
    fn children(&self) -> Vec<Self> {
        match self {
            Poly::Pconst(_) | Poly::Pvar(_) => Vec::new(),
            Poly::Pplus(a, b) | Poly::Pmult(a, b) => vec![(**a).clone(), (**b).clone()],
            Poly::Popp(a) => vec![(**a).clone()],
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        let c = Box::new(child);
        Some(match (self, index) {
            (Poly::Pplus(_, b), 0) => Poly::Pplus(c, b.clone()),
            (Poly::Pplus(a, _), 1) => Poly::Pplus(a.clone(), c),
            (Poly::Pmult(_, b), 0) => Poly::Pmult(c, b.clone()),
            (Poly::Pmult(a, _), 1) => Poly::Pmult(a.clone(), c),
            (Poly::Popp(_), 0) => Poly::Popp(c),
            _ => return None,
        })
    }
}

impl Subexpressions for RingSyntax {
    fn children(&self) -> Vec<Self> {
        match self {
            RingSyntax::Expr(e) => e.children().into_iter().map(RingSyntax::Expr).collect(),
            RingSyntax::Poly(p) => p.children().into_iter().map(RingSyntax::Poly).collect(),
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        match (self, child) {
            (RingSyntax::Expr(e), RingSyntax::Expr(c)) => e.with_child(index, c).map(RingSyntax::Expr),
            (RingSyntax::Poly(p), RingSyntax::Poly(c)) => p.with_child(index, c).map(RingSyntax::Poly),
            _ => None,
        }
    }
}
