//! Gödel numbering for first-order arithmetic.
//!
//! Expressions are serialized to a prefix token string over a fixed table
//! of [`RADIX`] symbols and the string is read as a bijective base-`RADIX`
//! numeral (digits `1..=RADIX`, most significant first). Every positive
//! integer spells exactly one token string, so decoding is a parse that
//! fails exactly on integers whose digit string is not a well-sorted
//! expression.
//!
//! Three frameworks share the encoding:
//! - [`Mode::Meta`]: quotation maps `e` to a term denoting `G(e)`,
//!   evaluation decodes the value of a term and is partial.
//! - [`Mode::Restricted`]: the syntax language is cut down to terms whose
//!   value is a code, and evaluation becomes total.
//! - [`Mode::BuiltIn`]: the language gains a `quote` operator with
//!   `V(quote(e)) = G(e)`.
//!
//! Variables are valued at 0 everywhere, quantifiers included: `∀x. φ`
//! denotes the value of `φ` under that assignment. This keeps `V` total and
//! computable; it is not the standard model.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::framework::{Features, SyntaxFramework};
use crate::quasi::Subexpressions;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithExpr {
    Zero,
    Succ(Box<ArithExpr>),
    Plus(Box<ArithExpr>, Box<ArithExpr>),
    Times(Box<ArithExpr>, Box<ArithExpr>),
    Var(u32),
    Eq(Box<ArithExpr>, Box<ArithExpr>),
    Not(Box<ArithExpr>),
    And(Box<ArithExpr>, Box<ArithExpr>),
    ForAll(u32, Box<ArithExpr>),
    /// The built-in quotation operator of the extended language.
    Quote(Box<ArithExpr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Term,
    Formula,
}

#[allow(clippy::should_implement_trait)]
impl ArithExpr {
    pub fn succ(t: ArithExpr) -> Self {
        ArithExpr::Succ(Box::new(t))
    }
    pub fn plus(a: ArithExpr, b: ArithExpr) -> Self {
        ArithExpr::Plus(Box::new(a), Box::new(b))
    }
    pub fn times(a: ArithExpr, b: ArithExpr) -> Self {
        ArithExpr::Times(Box::new(a), Box::new(b))
    }
    pub fn eq(a: ArithExpr, b: ArithExpr) -> Self {
        ArithExpr::Eq(Box::new(a), Box::new(b))
    }
    pub fn not(f: ArithExpr) -> Self {
        ArithExpr::Not(Box::new(f))
    }
    pub fn and(a: ArithExpr, b: ArithExpr) -> Self {
        ArithExpr::And(Box::new(a), Box::new(b))
    }
    pub fn forall(v: u32, f: ArithExpr) -> Self {
        ArithExpr::ForAll(v, Box::new(f))
    }
    pub fn quote(e: ArithExpr) -> Self {
        ArithExpr::Quote(Box::new(e))
    }

    /// The sort of a well-sorted expression; absent when ill-sorted.
    pub fn sort(&self) -> Option<Sort> {
        use ArithExpr::*;
        let term = |t: &ArithExpr| t.sort() == Some(Sort::Term);
        let formula = |f: &ArithExpr| f.sort() == Some(Sort::Formula);
        match self {
            Zero | Var(_) => Some(Sort::Term),
            Succ(t) => term(t).then_some(Sort::Term),
            Plus(a, b) | Times(a, b) => (term(a) && term(b)).then_some(Sort::Term),
            Quote(e) => e.sort().map(|_| Sort::Term),
            Eq(a, b) => (term(a) && term(b)).then_some(Sort::Formula),
            Not(f) => formula(f).then_some(Sort::Formula),
            And(a, b) => (formula(a) && formula(b)).then_some(Sort::Formula),
            ForAll(_, f) => formula(f).then_some(Sort::Formula),
        }
    }

    pub fn is_term(&self) -> bool {
        self.sort() == Some(Sort::Term)
    }

    pub fn contains_quote(&self) -> bool {
        use ArithExpr::*;
        match self {
            Zero | Var(_) => false,
            Quote(_) => true,
            Succ(a) | Not(a) | ForAll(_, a) => a.contains_quote(),
            Plus(a, b) | Times(a, b) | Eq(a, b) | And(a, b) => a.contains_quote() || b.contains_quote(),
        }
    }

    /// Whether no variable occurs free. Quoted expressions are data and do
    /// not contribute free variables.
    pub fn is_closed(&self) -> bool {
        fn walk(e: &ArithExpr, bound: &mut Vec<u32>) -> bool {
            use ArithExpr::*;
            match e {
                Zero | Quote(_) => true,
                Var(v) => bound.contains(v),
                Succ(a) | Not(a) => walk(a, bound),
                Plus(a, b) | Times(a, b) | Eq(a, b) | And(a, b) => walk(a, bound) && walk(b, bound),
                ForAll(v, f) => {
                    bound.push(*v);
                    let ok = walk(f, bound);
                    bound.pop();
                    ok
                }
            }
        }
        walk(self, &mut Vec::new())
    }

    /// `Some(n)` when the expression is the unary numeral `Sⁿ(0)`.
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        while let ArithExpr::Succ(inner) = cur {
            n += 1;
            cur = inner;
        }
        (*cur == ArithExpr::Zero).then_some(n)
    }
}

// Iterative drop so long numerals do not exhaust the stack.
impl Drop for ArithExpr {
    fn drop(&mut self) {
        let mut stack: Vec<Box<ArithExpr>> = Vec::new();
        let take = |e: &mut ArithExpr, stack: &mut Vec<Box<ArithExpr>>| {
            use ArithExpr::*;
            let placeholder = || Box::new(Zero);
            match e {
                Succ(a) | Not(a) | ForAll(_, a) | Quote(a) => stack.push(std::mem::replace(a, placeholder())),
                Plus(a, b) | Times(a, b) | Eq(a, b) | And(a, b) => {
                    stack.push(std::mem::replace(a, placeholder()));
                    stack.push(std::mem::replace(b, placeholder()));
                }
                Zero | Var(_) => {}
            }
        };
        take(self, &mut stack);
        while let Some(mut e) = stack.pop() {
            take(&mut e, &mut stack);
        }
    }
}

/// The symbol table, in digit order: symbol `i` is digit `i + 1`.
pub const SYMBOLS: [(char, &str); 11] = [
    ('0', "zero"),
    ('S', "successor"),
    ('+', "addition"),
    ('*', "multiplication"),
    ('x', "variable"),
    ('\'', "variable index tick"),
    ('=', "equality"),
    ('~', "negation"),
    ('&', "conjunction"),
    ('A', "universal quantifier"),
    ('q', "quote"),
];

pub const RADIX: u32 = SYMBOLS.len() as u32;

fn digit(symbol: char) -> u8 {
    SYMBOLS.iter().position(|(c, _)| *c == symbol).expect("symbol in table") as u8 + 1
}

/// The prefix token string, as digits `1..=RADIX`.
pub fn digits(e: &ArithExpr) -> Vec<u8> {
    fn var(v: u32, out: &mut Vec<u8>) {
        out.push(digit('x'));
        out.extend(std::iter::repeat_n(digit('\''), v as usize));
    }
    fn walk(e: &ArithExpr, out: &mut Vec<u8>) {
        use ArithExpr::*;
        let binary = |sym: char, a: &ArithExpr, b: &ArithExpr, out: &mut Vec<u8>| {
            out.push(digit(sym));
            walk(a, out);
            walk(b, out);
        };
        match e {
            Zero => out.push(digit('0')),
            Succ(a) => {
                out.push(digit('S'));
                walk(a, out);
            }
            Plus(a, b) => binary('+', a, b, out),
            Times(a, b) => binary('*', a, b, out),
            Var(v) => var(*v, out),
            Eq(a, b) => binary('=', a, b, out),
            Not(a) => {
                out.push(digit('~'));
                walk(a, out);
            }
            And(a, b) => binary('&', a, b, out),
            ForAll(v, f) => {
                out.push(digit('A'));
                var(*v, out);
                walk(f, out);
            }
            Quote(a) => {
                out.push(digit('q'));
                walk(a, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(e, &mut out);
    out
}

/// The token string as text, e.g. `=S0x'`.
pub fn token_string(e: &ArithExpr) -> String {
    digits(e).into_iter().map(|d| SYMBOLS[d as usize - 1].0).collect()
}

/// Reads a digit string as a bijective base-`RADIX` numeral.
pub fn from_digits(ds: &[u8]) -> BigUint {
    let mut n = BigUint::zero();
    for &d in ds {
        n = n * RADIX + d as u32;
    }
    n
}

/// Inverse of [`from_digits`]; empty for 0.
pub fn to_digits(n: &BigUint) -> Vec<u8> {
    let mut out = Vec::new();
    let mut n = n.clone();
    let k = BigUint::from(RADIX);
    while !n.is_zero() {
        let mut d = (&n % &k).to_u32().expect("digit fits");
        if d == 0 {
            d = RADIX;
        }
        n = (n - d) / &k;
        out.push(d as u8);
    }
    out.reverse();
    out
}

/// `G*(e)`.
pub fn encode(e: &ArithExpr) -> BigUint {
    from_digits(&digits(e))
}

/// `G*⁻¹(n)`: the unique well-sorted expression with code `n`.
pub fn decode(n: &BigUint) -> Option<ArithExpr> {
    let ds = to_digits(n);
    let mut i = 0;
    let e = parse_tokens(&ds, &mut i)?;
    (i == ds.len()).then_some(e)
}

fn symbol_at(ds: &[u8], i: usize) -> Option<char> {
    ds.get(i).map(|d| SYMBOLS[*d as usize - 1].0)
}

fn parse_var(ds: &[u8], i: &mut usize) -> Option<u32> {
    if symbol_at(ds, *i)? != 'x' {
        return None;
    }
    *i += 1;
    let mut v = 0u32;
    while symbol_at(ds, *i) == Some('\'') {
        v = v.checked_add(1)?;
        *i += 1;
    }
    Some(v)
}

fn parse_sorted(ds: &[u8], i: &mut usize, want: Sort) -> Option<ArithExpr> {
    let e = parse_tokens(ds, i)?;
    (e.sort() == Some(want)).then_some(e)
}

fn parse_tokens(ds: &[u8], i: &mut usize) -> Option<ArithExpr> {
    use ArithExpr::*;
    let sym = symbol_at(ds, *i)?;
    if sym == 'x' {
        return parse_var(ds, i).map(Var);
    }
    *i += 1;
    let term = |i: &mut usize| parse_sorted(ds, i, Sort::Term).map(Box::new);
    let formula = |i: &mut usize| parse_sorted(ds, i, Sort::Formula).map(Box::new);
    Some(match sym {
        '0' => Zero,
        'S' => Succ(term(i)?),
        '+' => Plus(term(i)?, term(i)?),
        '*' => Times(term(i)?, term(i)?),
        '=' => Eq(term(i)?, term(i)?),
        '~' => Not(formula(i)?),
        '&' => And(formula(i)?, formula(i)?),
        'A' => {
            let v = parse_var(ds, i)?;
            ForAll(v, formula(i)?)
        }
        'q' => Quote(Box::new(parse_tokens(ds, i)?)),
        _ => return None,
    })
}

/// `Sⁿ(0)`.
pub fn numeral(n: u64) -> ArithExpr {
    let mut t = ArithExpr::Zero;
    for _ in 0..n {
        t = ArithExpr::succ(t);
    }
    t
}

/// A term of size `O(log n)` denoting `n`, built by binary Horner steps
/// `2·t` and `2·t + 1` from `S(0)`.
pub fn compact_numeral(n: &BigUint) -> ArithExpr {
    if n.is_zero() {
        return ArithExpr::Zero;
    }
    let two = || numeral(2);
    let bits = n.bits();
    let mut t = numeral(1);
    for b in (0..bits - 1).rev() {
        t = ArithExpr::times(two(), t);
        if n.bit(b) {
            t = ArithExpr::succ(t);
        }
    }
    t
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArithValue {
    Nat(BigUint),
    Truth(bool),
}

/// `V*`, with every variable valued at 0. Assumes a well-sorted input.
pub fn value(e: &ArithExpr) -> ArithValue {
    match e {
        ArithExpr::Eq(..) | ArithExpr::Not(_) | ArithExpr::And(..) | ArithExpr::ForAll(..) => {
            ArithValue::Truth(truth(e))
        }
        _ => ArithValue::Nat(nat(e)),
    }
}

fn nat(t: &ArithExpr) -> BigUint {
    use ArithExpr::*;
    match t {
        Zero | Var(_) => BigUint::zero(),
        Succ(_) => {
            let mut n = 0u64;
            let mut cur = t;
            while let Succ(inner) = cur {
                n += 1;
                cur = inner;
            }
            nat(cur) + n
        }
        Plus(a, b) => nat(a) + nat(b),
        Times(a, b) => nat(a) * nat(b),
        Quote(e) => encode(e),
        _ => panic!("formula in term position"),
    }
}

fn truth(f: &ArithExpr) -> bool {
    use ArithExpr::*;
    match f {
        Eq(a, b) => nat(a) == nat(b),
        Not(a) => !truth(a),
        And(a, b) => truth(a) && truth(b),
        ForAll(_, body) => truth(body),
        _ => panic!("term in formula position"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoedelError {
    #[error("`{0}` is not a term")]
    NotATerm(String),
    #[error("`{0}` is not closed")]
    Open(String),
    #[error("`{0}` is not well-sorted")]
    IllSorted(String),
    #[error("numeral {0} exceeds the unary numeral limit")]
    TooLarge(BigUint),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// Largest value materialized as a unary numeral.
pub const MAX_UNARY_NUMERAL: u64 = 1_000_000;

/// `add(t₁, t₂) = numeral(V(t₁) + V(t₂))` for closed terms.
pub fn add_transformer(t1: &ArithExpr, t2: &ArithExpr) -> Result<ArithExpr, GoedelError> {
    for t in [t1, t2] {
        if !t.is_term() {
            return Err(GoedelError::NotATerm(t.to_string()));
        }
        if !t.is_closed() {
            return Err(GoedelError::Open(t.to_string()));
        }
    }
    let sum = nat(t1) + nat(t2);
    match sum.to_u64() {
        Some(n) if n <= MAX_UNARY_NUMERAL => Ok(numeral(n)),
        _ => Err(GoedelError::TooLarge(sum)),
    }
}

/// `G(Sⁿ(0))` in closed form: `2k(kⁿ − 1)/(k − 1) + 1`.
pub fn numeral_code(n: &BigUint) -> BigUint {
    let k = BigUint::from(RADIX);
    let n = n.to_u32().expect("numeral length fits in u32");
    let kn = num_traits::pow(k.clone(), n as usize);
    BigUint::from(2u32) * &k * (kn - 1u32) / (&k - 1u32) + 1u32
}

/// Inverse of [`numeral_code`].
pub fn numeral_of_code(code: &BigUint) -> Option<BigUint> {
    let k = BigUint::from(RADIX);
    if code.is_zero() {
        return None;
    }
    let r: BigUint = (code - 1u32) * (&k - 1u32);
    let denom = BigUint::from(2u32) * &k;
    if !(&r % &denom).is_zero() {
        return None;
    }
    let mut m: BigUint = r / denom + 1u32;
    let mut n = BigUint::zero();
    while (&m % &k).is_zero() {
        m /= &k;
        n += 1u32;
    }
    m.is_one().then_some(n)
}

/// `f_add` on codes: the code of `numeral(a + b)` from the codes of
/// `numeral(a)` and `numeral(b)`, by arithmetic on the codes alone.
pub fn add_codes(c1: &BigUint, c2: &BigUint) -> Option<BigUint> {
    Some(numeral_code(&(numeral_of_code(c1)? + numeral_of_code(c2)?)))
}

/// `e_add(q₁, q₂)`: a syntax-language term denoting `f_add(V(q₁), V(q₂))`.
pub fn add_lifted(q1: &ArithExpr, q2: &ArithExpr) -> Option<ArithExpr> {
    let (ArithValue::Nat(c1), ArithValue::Nat(c2)) = (value(q1), value(q2)) else {
        return None;
    };
    add_codes(&c1, &c2).map(|c| compact_numeral(&c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Meta,
    Restricted,
    BuiltIn,
}

#[derive(Debug, Clone, Copy)]
pub struct GoedelFramework {
    pub mode: Mode,
}

impl GoedelFramework {
    pub fn meta() -> Self {
        GoedelFramework { mode: Mode::Meta }
    }
    pub fn restricted() -> Self {
        GoedelFramework { mode: Mode::Restricted }
    }
    pub fn built_in() -> Self {
        GoedelFramework { mode: Mode::BuiltIn }
    }

    fn allows_quote(&self) -> bool {
        self.mode == Mode::BuiltIn
    }

    /// `Q` (meta) or `Q*` (built-in).
    pub fn quote_num(&self, e: &ArithExpr) -> ArithExpr {
        match self.mode {
            Mode::BuiltIn => ArithExpr::quote(e.clone()),
            Mode::Meta | Mode::Restricted => compact_numeral(&encode(e)),
        }
    }

    /// `E(t) = G⁻¹(V(t))`, restricted to this framework's language.
    pub fn eval_num(&self, t: &ArithExpr) -> Result<Option<ArithExpr>, GoedelError> {
        if !t.is_term() {
            return Err(GoedelError::NotATerm(t.to_string()));
        }
        Ok(self.decode_nat(&nat(t)))
    }

    fn decode_nat(&self, n: &BigUint) -> Option<ArithExpr> {
        decode(n).filter(|e| self.allows_quote() || !e.contains_quote())
    }

    /// Membership in `L′_t`: a term whose value is the code of an
    /// expression of `L`.
    pub fn in_restricted_terms(t: &ArithExpr) -> bool {
        t.is_term() && !t.contains_quote() && decode(&nat(t)).is_some_and(|e| !e.contains_quote())
    }
}

impl SyntaxFramework for GoedelFramework {
    type Expr = ArithExpr;
    type Value = ArithValue;

    fn id(&self) -> &str {
        match self.mode {
            Mode::Meta => "goedel",
            Mode::Restricted => "goedel-restricted",
            Mode::BuiltIn => "goedel-builtin",
        }
    }

    fn features(&self) -> Features {
        Features {
            built_in_quotation: self.mode == Mode::BuiltIn,
            eval_total: self.mode == Mode::Restricted,
            ..Features::default()
        }
    }

    fn in_language(&self, e: &ArithExpr) -> bool {
        e.sort().is_some() && (self.allows_quote() || !e.contains_quote())
    }

    fn in_object(&self, e: &ArithExpr) -> bool {
        self.in_language(e)
    }

    fn in_syntax(&self, e: &ArithExpr) -> bool {
        match self.mode {
            Mode::Restricted => Self::in_restricted_terms(e),
            _ => self.in_language(e) && e.is_term(),
        }
    }

    fn semantic(&self, e: &ArithExpr) -> ArithValue {
        value(e)
    }

    fn syntactic(&self, e: &ArithExpr) -> ArithValue {
        ArithValue::Nat(encode(e))
    }

    fn decode(&self, v: &ArithValue) -> Option<ArithExpr> {
        match v {
            ArithValue::Nat(n) => self.decode_nat(n),
            ArithValue::Truth(_) => None,
        }
    }

    fn quotation(&self, e: &ArithExpr) -> ArithExpr {
        self.quote_num(e)
    }

    fn evaluation(&self, e: &ArithExpr) -> Option<ArithExpr> {
        if !self.in_syntax(e) {
            return None;
        }
        self.eval_num(e).ok().flatten()
    }
}

impl Subexpressions for ArithExpr {
    fn children(&self) -> Vec<Self> {
        use ArithExpr::*;
        match self {
            Zero | Var(_) => Vec::new(),
            Succ(a) | Not(a) | ForAll(_, a) | Quote(a) => vec![(**a).clone()],
            Plus(a, b) | Times(a, b) | Eq(a, b) | And(a, b) => vec![(**a).clone(), (**b).clone()],
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        use ArithExpr::*;
        let c = Box::new(child);
        Some(match (self, index) {
            (Succ(_), 0) => Succ(c),
            (Not(_), 0) => Not(c),
            (ForAll(v, _), 0) => ForAll(*v, c),
            (Quote(_), 0) => Quote(c),
            (Plus(_, b), 0) => Plus(c, b.clone()),
            (Plus(a, _), 1) => Plus(a.clone(), c),
            (Times(_, b), 0) => Times(c, b.clone()),
            (Times(a, _), 1) => Times(a.clone(), c),
            (Eq(_, b), 0) => Eq(c, b.clone()),
            (Eq(a, _), 1) => Eq(a.clone(), c),
            (And(_, b), 0) => And(c, b.clone()),
            (And(a, _), 1) => And(a.clone(), c),
            _ => return None,
        })
    }
}

fn term_prec(e: &ArithExpr) -> u8 {
    match e {
        ArithExpr::Plus(..) => 1,
        ArithExpr::Times(..) => 2,
        _ => 3,
    }
}

impl fmt::Display for ArithExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term_at(f: &mut fmt::Formatter<'_>, e: &ArithExpr, min: u8) -> fmt::Result {
            if term_prec(e) < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        fn formula_operand(f: &mut fmt::Formatter<'_>, e: &ArithExpr, left_of_and: bool) -> fmt::Result {
            let wrap = match e {
                ArithExpr::ForAll(..) => true,
                ArithExpr::And(..) => !left_of_and,
                ArithExpr::Eq(..) => !left_of_and,
                _ => false,
            };
            if wrap {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        use ArithExpr::*;
        match self {
            Zero => f.write_str("0"),
            Succ(a) => write!(f, "S({a})"),
            Plus(a, b) => {
                term_at(f, a, 1)?;
                f.write_str(" + ")?;
                term_at(f, b, 2)
            }
            Times(a, b) => {
                term_at(f, a, 2)?;
                f.write_str(" * ")?;
                term_at(f, b, 3)
            }
            Var(v) => write!(f, "x{v}"),
            Quote(e) => write!(f, "quote({e})"),
            Eq(a, b) => write!(f, "{a} = {b}"),
            Not(a) => {
                f.write_str("~")?;
                formula_operand(f, a, false)
            }
            And(a, b) => {
                formula_operand(f, a, true)?;
                f.write_str(" & ")?;
                match **b {
                    Eq(..) | Not(_) => write!(f, "{b}"),
                    _ => write!(f, "({b})"),
                }
            }
            ForAll(v, body) => write!(f, "forall x{v}. {body}"),
        }
    }
}

/// Parses the human syntax: terms `0`, decimal numerals, `S(t)`, `t + t`,
/// `t * t`, `x0`, `quote(e)`; formulas `t = t`, `~φ`, `φ & φ`,
/// `forall x0. φ`, with parentheses for grouping.
pub fn parse(src: &str) -> Result<ArithExpr, GoedelError> {
    let mut p = ArithParser { src: src.as_bytes(), pos: 0, furthest: (0, String::new()) };
    for want in [Sort::Formula, Sort::Term] {
        p.pos = 0;
        let parsed = match want {
            Sort::Formula => p.formula(),
            Sort::Term => p.term(),
        };
        if let Some(e) = parsed {
            p.ws();
            if p.pos == p.src.len() {
                return Ok(e);
            }
            p.note("trailing input");
        }
    }
    let (offset, message) = p.furthest;
    Err(GoedelError::Parse { offset, message })
}

struct ArithParser<'a> {
    src: &'a [u8],
    pos: usize,
    furthest: (usize, String),
}

impl ArithParser<'_> {
    fn note(&mut self, msg: &str) {
        if self.pos >= self.furthest.0 {
            self.furthest = (self.pos, msg.to_string());
        }
    }

    fn ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Option<()> {
        if self.eat(s) {
            Some(())
        } else {
            self.note(&format!("expected `{s}`"));
            None
        }
    }

    fn number(&mut self) -> Option<u64> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn var(&mut self) -> Option<u32> {
        let save = self.pos;
        if self.eat("x") {
            if let Some(n) = self.number() {
                return u32::try_from(n).ok();
            }
        }
        self.pos = save;
        self.note("expected a variable like x0");
        None
    }

    fn formula(&mut self) -> Option<ArithExpr> {
        let mut acc = self.unary()?;
        loop {
            let save = self.pos;
            if !self.eat("&") {
                break;
            }
            match self.unary() {
                Some(rhs) => acc = ArithExpr::and(acc, rhs),
                None => {
                    self.pos = save;
                    return None;
                }
            }
        }
        Some(acc)
    }

    fn unary(&mut self) -> Option<ArithExpr> {
        if self.eat("~") {
            return Some(ArithExpr::not(self.unary()?));
        }
        if self.eat("forall") {
            let v = self.var()?;
            self.expect(".")?;
            return Some(ArithExpr::forall(v, self.formula()?));
        }
        let save = self.pos;
        if let Some(lhs) = self.term() {
            if self.eat("=") {
                if let Some(rhs) = self.term() {
                    return Some(ArithExpr::eq(lhs, rhs));
                }
            } else {
                self.note("expected `=`");
            }
        }
        self.pos = save;
        if self.eat("(") {
            let inner = self.formula()?;
            self.expect(")")?;
            return Some(inner);
        }
        None
    }

    fn term(&mut self) -> Option<ArithExpr> {
        let mut acc = self.product()?;
        while self.eat("+") {
            acc = ArithExpr::plus(acc, self.product()?);
        }
        Some(acc)
    }

    fn product(&mut self) -> Option<ArithExpr> {
        let mut acc = self.atom()?;
        while self.eat("*") {
            acc = ArithExpr::times(acc, self.atom()?);
        }
        Some(acc)
    }

    fn atom(&mut self) -> Option<ArithExpr> {
        self.ws();
        let save = self.pos;
        if let Some(n) = self.number() {
            if n > MAX_UNARY_NUMERAL {
                self.pos = save;
                self.note("numeral literal too large");
                return None;
            }
            return Some(numeral(n));
        }
        if self.eat("S(") {
            let t = self.term()?;
            self.expect(")")?;
            return Some(ArithExpr::succ(t));
        }
        if self.eat("quote(") {
            let e = {
                let inner = self.pos;
                let f = self.formula().filter(|_| {
                    self.ws();
                    self.src.get(self.pos) == Some(&b')')
                });
                match f {
                    Some(f) => f,
                    None => {
                        self.pos = inner;
                        self.term()?
                    }
                }
            };
            self.expect(")")?;
            return Some(ArithExpr::quote(e));
        }
        if self.src.get(self.pos) == Some(&b'x') {
            return self.var().map(ArithExpr::Var);
        }
        if self.eat("(") {
            let t = self.term()?;
            if self.expect(")").is_none() {
                self.pos = save;
                return None;
            }
            return Some(t);
        }
        self.note("expected a term");
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework;

    /// Independent bijective base-k reference: enumerate digit strings in
    /// shortlex order and count.
    fn shortlex_rank(ds: &[u8]) -> u128 {
        let k = RADIX as u128;
        let shorter: u128 = (1..ds.len() as u32).map(|l| k.pow(l)).sum();
        let mut within = 0u128;
        for &d in ds {
            within = within * k + (d as u128 - 1);
        }
        shorter + within + 1
    }

    #[test]
    fn encoding_agrees_with_shortlex_rank() {
        let samples = [
            ArithExpr::Zero,
            numeral(3),
            ArithExpr::eq(ArithExpr::Var(1), numeral(1)),
            ArithExpr::forall(2, ArithExpr::not(ArithExpr::eq(ArithExpr::Zero, ArithExpr::Var(2)))),
        ];
        for e in samples {
            let ds = digits(&e);
            assert_eq!(encode(&e), BigUint::from(shortlex_rank(&ds)), "{e}");
        }
    }

    #[test]
    fn hand_computed_codes() {
        // "0" is digit 1.
        assert_eq!(encode(&ArithExpr::Zero), BigUint::from(1u32));
        // "S0" is digits [2, 1]: 2·11 + 1.
        assert_eq!(encode(&numeral(1)), BigUint::from(23u32));
        // "=0x" is digits [7, 1, 5]: (7·11 + 1)·11 + 5.
        let e = ArithExpr::eq(ArithExpr::Zero, ArithExpr::Var(0));
        assert_eq!(token_string(&e), "=0x");
        assert_eq!(encode(&e), BigUint::from(863u32));
    }

    #[test]
    fn decode_basics() {
        assert_eq!(decode(&BigUint::zero()), None);
        assert_eq!(decode(&BigUint::from(1u32)), Some(ArithExpr::Zero));
        // Digit 2 alone spells "S", which is incomplete.
        assert_eq!(decode(&BigUint::from(2u32)), None);
        assert_eq!(decode(&BigUint::from(863u32)), Some(ArithExpr::eq(ArithExpr::Zero, ArithExpr::Var(0))));
    }

    #[test]
    fn smallest_non_code_is_two() {
        let first = (1u32..1_000_000).find(|n| decode(&BigUint::from(*n)).is_none());
        assert_eq!(first, Some(2));
    }

    #[test]
    fn codes_below_ten_thousand_round_trip() {
        let mut count = 0;
        for n in 1u32..10_000 {
            let n = BigUint::from(n);
            if let Some(e) = decode(&n) {
                assert_eq!(encode(&e), n);
                count += 1;
            }
        }
        assert!(count > 10);
    }

    #[test]
    fn digits_round_trip() {
        for n in 1u32..5000 {
            let n = BigUint::from(n);
            assert_eq!(from_digits(&to_digits(&n)), n);
        }
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral(0), ArithExpr::Zero);
        assert_eq!(numeral(3), ArithExpr::succ(ArithExpr::succ(ArithExpr::succ(ArithExpr::Zero))));
        for k in 0..=100u64 {
            assert_eq!(value(&numeral(k)), ArithValue::Nat(BigUint::from(k)));
            assert_eq!(value(&compact_numeral(&BigUint::from(k))), ArithValue::Nat(BigUint::from(k)));
        }
        let big = BigUint::from(10u32).pow(30);
        assert_eq!(value(&compact_numeral(&big)), ArithValue::Nat(big));
    }

    #[test]
    fn numeral_codes_closed_form() {
        for n in 0..40u64 {
            let code = encode(&numeral(n));
            assert_eq!(numeral_code(&BigUint::from(n)), code);
            assert_eq!(numeral_of_code(&code), Some(BigUint::from(n)));
        }
        assert_eq!(numeral_of_code(&encode(&ArithExpr::Var(0))), None);
    }

    #[test]
    fn add_examples() {
        assert_eq!(add_transformer(&numeral(2), &numeral(3)).unwrap(), numeral(5));
        let t = ArithExpr::times(numeral(2), ArithExpr::plus(numeral(1), numeral(3)));
        assert_eq!(add_transformer(&numeral(0), &t).unwrap(), numeral(8));
        assert!(matches!(add_transformer(&ArithExpr::Var(0), &numeral(1)), Err(GoedelError::Open(_))));
        let f = ArithExpr::eq(ArithExpr::Zero, ArithExpr::Zero);
        assert!(matches!(add_transformer(&f, &numeral(1)), Err(GoedelError::NotATerm(_))));
    }

    #[test]
    fn lifted_add_matches_evaluation_sum() {
        let inst = GoedelFramework::meta();
        let (q2, q3) = (inst.quote_num(&numeral(2)), inst.quote_num(&numeral(3)));
        let lifted = add_lifted(&q2, &q3).unwrap();
        assert_eq!(value(&lifted), value(&inst.quote_num(&numeral(5))));
        // E(e_add(e₁, e₂)) = E(e₁) + E(e₂), compared by value.
        let lhs = inst.eval_num(&lifted).unwrap().unwrap();
        let rhs = ArithExpr::plus(inst.eval_num(&q2).unwrap().unwrap(), inst.eval_num(&q3).unwrap().unwrap());
        assert_eq!(value(&lhs), value(&rhs));
    }

    #[test]
    fn quote_num_denotes_code() {
        let inst = GoedelFramework::meta();
        let q = framework::quote(&inst, &ArithExpr::Zero).unwrap();
        assert_eq!(framework::sem_value(&inst, &q).unwrap(), ArithValue::Nat(encode(&ArithExpr::Zero)));
        let b = GoedelFramework::built_in();
        assert!(b.features().built_in_quotation);
        assert!(!inst.features().built_in_quotation);
        let bq = framework::quote(&b, &ArithExpr::Zero).unwrap();
        assert_eq!(bq, ArithExpr::quote(ArithExpr::Zero));
        assert_eq!(value(&bq), ArithValue::Nat(BigUint::from(1u32)));
    }

    #[test]
    fn eval_partiality() {
        let inst = GoedelFramework::meta();
        assert_eq!(inst.eval_num(&numeral(2)).unwrap(), None);
        assert_eq!(framework::direct_eval(&inst, &numeral(2)).unwrap(), None);
        assert_eq!(inst.eval_num(&numeral(1)).unwrap(), Some(ArithExpr::Zero));
        let f = ArithExpr::eq(ArithExpr::Zero, ArithExpr::Zero);
        assert!(inst.eval_num(&f).is_err());
        // Codes of quote-bearing expressions are not in the meta language.
        let q = ArithExpr::quote(ArithExpr::Zero);
        assert_eq!(inst.eval_num(&compact_numeral(&encode(&q))).unwrap(), None);
        assert_eq!(GoedelFramework::built_in().eval_num(&compact_numeral(&encode(&q))).unwrap(), Some(q));
    }

    #[test]
    fn restricted_membership() {
        assert!(GoedelFramework::in_restricted_terms(&numeral(1)));
        assert!(!GoedelFramework::in_restricted_terms(&numeral(2)));
        let inst = GoedelFramework::restricted();
        assert!(framework::eval(&inst, &numeral(2)).is_err());
        assert_eq!(framework::eval(&inst, &numeral(1)).unwrap(), Some(ArithExpr::Zero));
    }

    #[test]
    fn semantics_with_default_assignment() {
        let f = ArithExpr::forall(0, ArithExpr::eq(ArithExpr::Var(0), ArithExpr::Zero));
        assert_eq!(value(&f), ArithValue::Truth(true));
        let g = ArithExpr::not(ArithExpr::eq(
            ArithExpr::plus(numeral(2), numeral(2)),
            ArithExpr::times(numeral(2), numeral(2)),
        ));
        assert_eq!(value(&g), ArithValue::Truth(false));
    }

    #[test]
    fn text_round_trip() {
        let cases = [
            "0",
            "S(S(0))",
            "x0 + x1 * x2",
            "(x0 + x1) * x2",
            "x0 + (x1 + x2)",
            "~(x0 = 0)",
            "x0 = 0 & ~(x1 = S(0)) & (forall x2. x2 = x2)",
            "forall x1. x1 = 0 & 0 = 0",
            "quote(forall x0. x0 = 0)",
            "quote(x3) * 0",
        ];
        for c in cases {
            let e = parse(c).unwrap_or_else(|err| panic!("{c}: {err}"));
            assert_eq!(e.to_string(), c);
            assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
        assert_eq!(parse("3").unwrap(), numeral(3));
        assert_eq!(
            parse("x0 = 0 & (x1 = 0 & x2 = 0)").unwrap(),
            ArithExpr::and(
                ArithExpr::eq(ArithExpr::Var(0), ArithExpr::Zero),
                ArithExpr::and(
                    ArithExpr::eq(ArithExpr::Var(1), ArithExpr::Zero),
                    ArithExpr::eq(ArithExpr::Var(2), ArithExpr::Zero)
                )
            )
        );
        assert!(parse("x0 +").is_err());
        assert!(parse("= 0").is_err());
    }

    #[test]
    fn deep_numeral_drops() {
        let n = numeral(200_000);
        assert_eq!(n.as_numeral(), Some(200_000));
        drop(n);
    }
}
