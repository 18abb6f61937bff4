//! Untyped lambda calculus with Mogensen's representation schema and
//! self-interpreter.
//!
//! Terms are named; substitution renames binders to avoid capture, picking
//! fresh names by numbered suffixes (`x` → `x1`, `x2`, …) that avoid every
//! name in scope. Reduction is normal order and bounded by a step count
//! (`fuel`) and a budget on nodes built, both of which make the result
//! absent when exceeded.
//!
//! Deep terms recurse deeply; long-running callers should use
//! [`on_big_stack`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::framework::{Features, SyntaxFramework};
use crate::quasi::Subexpressions;

pub type Name = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    App(Arc<Term>, Arc<Term>),
    Abs(Name, Arc<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn abs(x: &str, body: Term) -> Term {
        Term::Abs(x.into(), Arc::new(body))
    }

    /// `λx₁ … xₙ. body`.
    pub fn abs_many(xs: &[&str], body: Term) -> Term {
        xs.iter().rev().fold(body, |b, x| Term::abs(x, b))
    }

    /// `f a₁ … aₙ`.
    pub fn apply(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(f, a) => 1 + f.size() + a.size(),
            Term::Abs(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        fn walk(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match t {
                Term::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                Term::App(f, a) => {
                    walk(f, bound, out);
                    walk(a, bound, out);
                }
                Term::Abs(x, b) => {
                    bound.push(x.clone());
                    walk(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::App(f, a) => f.is_free(x) || a.is_free(x),
            Term::Abs(y, b) => &**y != x && b.is_free(x),
        }
    }

    /// Every name occurring in the term, bound or free.
    pub fn names(&self) -> BTreeSet<Name> {
        fn walk(t: &Term, out: &mut BTreeSet<Name>) {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::App(f, a) => {
                    walk(f, out);
                    walk(a, out);
                }
                Term::Abs(x, b) => {
                    out.insert(x.clone());
                    walk(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// No subterm of shape `(λx. M) N`.
    pub fn is_normal(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::App(f, a) => !matches!(**f, Term::Abs(..)) && f.is_normal() && a.is_normal(),
            Term::Abs(_, b) => b.is_normal(),
        }
    }
}

impl Drop for Term {
    fn drop(&mut self) {
        fn detach(t: &mut Term, stack: &mut Vec<Term>) {
            let leaf = || Arc::new(Term::Var(Name::from("")));
            let mut push = |a: &mut Arc<Term>| {
                if let Some(inner) = Arc::into_inner(std::mem::replace(a, leaf())) {
                    stack.push(inner);
                }
            };
            match t {
                Term::Var(_) => {}
                Term::App(f, a) => {
                    push(f);
                    push(a);
                }
                Term::Abs(_, b) => push(b),
            }
        }
        if matches!(self, Term::Var(_)) {
            return;
        }
        let mut stack = Vec::new();
        detach(self, &mut stack);
        while let Some(mut t) = stack.pop() {
            detach(&mut t, &mut stack);
        }
    }
}

/// `base`, then `base1`, `base2`, … (trailing digits of `base` dropped),
/// the first one not in `avoid`.
pub fn fresh(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(stem) {
        return stem.into();
    }
    (1u64..).map(|i| format!("{stem}{i}")).find(|n| !avoid.contains(n.as_str())).expect("unbounded supply").into()
}

fn rename_free(t: &Term, from: &str, to: &Name) -> Term {
    match t {
        Term::Var(x) if &**x == from => Term::Var(to.clone()),
        Term::Var(_) => t.clone(),
        Term::App(f, a) => Term::app(rename_free(f, from, to), rename_free(a, from, to)),
        Term::Abs(y, _) if &**y == from => t.clone(),
        Term::Abs(y, b) => Term::Abs(y.clone(), Arc::new(rename_free(b, from, to))),
    }
}

/// Capture-avoiding `t[x := s]`.
pub fn subst(t: &Term, x: &str, s: &Term) -> Term {
    let fv = s.free_vars();
    let mut budget = u64::MAX;
    subst_counted(t, x, s, &fv, &mut budget).expect("unbounded budget")
}

fn subst_counted(t: &Term, x: &str, s: &Term, fv_s: &BTreeSet<Name>, budget: &mut u64) -> Option<Term> {
    if !t.is_free(x) {
        return Some(t.clone());
    }
    *budget = budget.checked_sub(1)?;
    Some(match t {
        Term::Var(_) => s.clone(),
        Term::App(f, a) => {
            Term::App(Arc::new(subst_counted(f, x, s, fv_s, budget)?), Arc::new(subst_counted(a, x, s, fv_s, budget)?))
        }
        Term::Abs(y, b) => {
            if fv_s.contains(y) {
                let mut avoid = fv_s.clone();
                avoid.extend(b.names());
                avoid.insert(x.into());
                let z = fresh(y, &avoid);
                let renamed = rename_free(b, y, &z);
                Term::Abs(z, Arc::new(subst_counted(&renamed, x, s, fv_s, budget)?))
            } else {
                Term::Abs(y.clone(), Arc::new(subst_counted(b, x, s, fv_s, budget)?))
            }
        }
    })
}

pub const DEFAULT_FUEL: u64 = 100_000;
/// Default cap on term nodes built during one normalization.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Normal-order reducer state.
#[derive(Debug, Clone)]
pub struct Reducer {
    pub fuel: u64,
    pub budget: u64,
    pub steps: u64,
}

impl Reducer {
    pub fn new(fuel: u64) -> Self {
        Reducer { fuel, budget: DEFAULT_BUDGET, steps: 0 }
    }

    fn beta(&mut self, body: &Term, x: &str, arg: &Term) -> Option<Term> {
        self.fuel = self.fuel.checked_sub(1)?;
        self.steps += 1;
        subst_counted(body, x, arg, &arg.free_vars(), &mut self.budget)
    }

    /// Weak head normal form by contracting head redexes.
    pub fn whnf(&mut self, t: &Term) -> Option<Term> {
        let mut head = t.clone();
        let mut args: Vec<Arc<Term>> = Vec::new();
        loop {
            match head {
                Term::App(ref f, ref a) => {
                    args.push(a.clone());
                    head = (**f).clone();
                }
                Term::Abs(ref x, ref b) if !args.is_empty() => {
                    let a = args.pop().expect("nonempty");
                    head = self.beta(b, x, &a)?;
                }
                _ => break,
            }
        }
        Some(args.into_iter().rev().fold(head, |f, a| Term::App(Arc::new(f), a)))
    }

    /// Leftmost-outermost normal form.
    pub fn nf(&mut self, t: &Term) -> Option<Term> {
        let w = self.whnf(t)?;
        match &w {
            Term::Abs(x, b) => Some(Term::Abs(x.clone(), Arc::new(self.nf(b)?))),
            _ => {
                let mut args = Vec::new();
                let mut head = &w;
                while let Term::App(f, a) = head {
                    args.push(a.clone());
                    head = f;
                }
                let head = head.clone();
                let mut out = head;
                for a in args.into_iter().rev() {
                    out = Term::app(out, self.nf(&a)?);
                }
                Some(out)
            }
        }
    }
}

/// `β`-normal form with at most `fuel` contractions.
pub fn beta_nf(t: &Term, fuel: u64) -> Option<Term> {
    Reducer::new(fuel).nf(t)
}

/// Runs `f` on a thread with a large stack.
pub fn on_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(1 << 30)
            .spawn_scoped(s, f)
            .expect("spawn reducer thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

/// Locally nameless form used for alpha-equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DeBruijn {
    Free(Name),
    Bound(usize),
    App(Box<DeBruijn>, Box<DeBruijn>),
    Abs(Box<DeBruijn>),
}

pub fn de_bruijn(t: &Term) -> DeBruijn {
    fn walk(t: &Term, bound: &mut Vec<Name>) -> DeBruijn {
        match t {
            Term::Var(x) => match bound.iter().rev().position(|b| b == x) {
                Some(i) => DeBruijn::Bound(i),
                None => DeBruijn::Free(x.clone()),
            },
            Term::App(f, a) => DeBruijn::App(Box::new(walk(f, bound)), Box::new(walk(a, bound))),
            Term::Abs(x, b) => {
                bound.push(x.clone());
                let body = walk(b, bound);
                bound.pop();
                DeBruijn::Abs(Box::new(body))
            }
        }
    }
    walk(t, &mut Vec::new())
}

pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    de_bruijn(t1) == de_bruijn(t2)
}

/// Names for the schema variables `a, b, c`, none occurring in `t`.
fn schema_names(t: &Term) -> [Name; 3] {
    let mut avoid = t.names();
    ["a", "b", "c"].map(|n| {
        let name = fresh(n, &avoid);
        avoid.insert(name.clone());
        name
    })
}

/// `⟨t⟩`:
/// `⟨x⟩ = λabc. a x`, `⟨M N⟩ = λabc. b ⟨M⟩ ⟨N⟩`, `⟨λx. M⟩ = λabc. c (λx. ⟨M⟩)`.
pub fn rep(t: &Term) -> Term {
    let [a, b, c] = schema_names(t);
    fn go(t: &Term, abc: &[Name; 3]) -> Term {
        let [a, b, c] = abc;
        let body = match t {
            Term::Var(_) => Term::app(Term::Var(a.clone()), t.clone()),
            Term::App(m, n) => Term::apply(Term::Var(b.clone()), [go(m, abc), go(n, abc)]),
            Term::Abs(x, m) => Term::app(Term::Var(c.clone()), Term::Abs(x.clone(), Arc::new(go(m, abc)))),
        };
        Term::Abs(a.clone(), Arc::new(Term::Abs(b.clone(), Arc::new(Term::Abs(c.clone(), Arc::new(body))))))
    }
    go(t, &[a, b, c])
}

/// Inverse of [`rep`] up to alpha-equivalence; absent when `t` is not a
/// representation.
pub fn unrep(t: &Term) -> Option<Term> {
    let Term::Abs(a, t1) = t else { return None };
    let Term::Abs(b, t2) = &**t1 else { return None };
    let Term::Abs(c, body) = &**t2 else { return None };
    if a == b || b == c || a == c {
        return None;
    }
    let schema = |n: &Name| n == a || n == b || n == c;
    let clean = |m: &Term| !(m.is_free(a) || m.is_free(b) || m.is_free(c));
    match &**body {
        Term::App(f, x) => match (&**f, &**x) {
            (Term::Var(fa), Term::Var(v)) if fa == a && !schema(v) => Some(Term::Var(v.clone())),
            (Term::Var(fc), Term::Abs(v, m)) if fc == c && !schema(v) && clean(m) => {
                Some(Term::Abs(v.clone(), Arc::new(unrep(m)?)))
            }
            (Term::App(g, m), n) => match &**g {
                Term::Var(gb) if gb == b && clean(m) && clean(n) => Some(Term::app(unrep(m)?, unrep(n)?)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// `Y = λf. (λx. f (x x)) (λx. f (x x))`.
pub fn y_combinator() -> Term {
    let half = Term::abs("x", Term::app(Term::var("f"), Term::app(Term::var("x"), Term::var("x"))));
    Term::abs("f", Term::app(half.clone(), half))
}

/// `E = Y λe. λm. m (λx. x) (λm n. (e m) (e n)) (λm. λv. e (m v))`.
pub fn self_interp_term() -> Term {
    let v = Term::var;
    let body = Term::abs_many(
        &["e", "m"],
        Term::apply(
            v("m"),
            [
                Term::abs("x", v("x")),
                Term::abs_many(&["m", "n"], Term::app(Term::app(v("e"), v("m")), Term::app(v("e"), v("n")))),
                Term::abs_many(&["m", "v"], Term::app(v("e"), Term::app(v("m"), v("v")))),
            ],
        ),
    );
    Term::app(y_combinator(), body)
}

/// `nf(E ⟨t⟩)`.
pub fn run_self_interp(t: &Term, fuel: u64) -> Option<Term> {
    beta_nf(&Term::app(self_interp_term(), rep(t)), fuel)
}

pub fn church(n: u32) -> Term {
    let mut body = Term::var("x");
    for _ in 0..n {
        body = Term::app(Term::var("f"), body);
    }
    Term::abs_many(&["f", "x"], body)
}

/// `Some(n)` when `t` is alpha-equal to Church numeral `n`.
pub fn church_value(t: &Term) -> Option<u32> {
    let Term::Abs(f, t1) = t else { return None };
    let Term::Abs(x, body) = &**t1 else { return None };
    if f == x {
        return None;
    }
    let mut n = 0;
    let mut cur = &**body;
    loop {
        match cur {
            Term::Var(y) if y == x => return Some(n),
            Term::App(g, a) if matches!(&**g, Term::Var(h) if h == f) => {
                n += 1;
                cur = a;
            }
            _ => return None,
        }
    }
}

/// The fixed self-interpretation corpus, by name.
pub fn corpus() -> Vec<(String, Term)> {
    let p = |s: &str| parse_term(s).expect("corpus term parses");
    let mut out = vec![
        ("identity".to_string(), p("\\x. x")),
        ("K".to_string(), p("\\x y. x")),
        ("S".to_string(), p("\\x y z. x z (y z)")),
    ];
    for n in 0..=5 {
        out.push((format!("church{n}"), church(n)));
    }
    out.push(("pair".to_string(), p("\\a b f. f a b")));
    out.push(("fst".to_string(), p("\\p. p (\\x y. x)")));
    out.push(("snd".to_string(), p("\\p. p (\\x y. y)")));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct LambdaParseError {
    pub offset: usize,
    pub message: String,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && c != 'λ' || c == '_'
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ') || c == '_' || c == '\''
}

/// Parses `\x. M`, `λx. M`, `\x y. M`, left-associative application and
/// parentheses.
pub fn parse_term(src: &str) -> Result<Term, LambdaParseError> {
    let mut p = LamParser { src, pos: 0 };
    let t = p.term()?;
    p.ws();
    if p.pos < src.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(t)
}

struct LamParser<'a> {
    src: &'a str,
    pos: usize,
}

impl LamParser<'_> {
    fn fail<T>(&self, message: &str) -> Result<T, LambdaParseError> {
        Err(LambdaParseError { offset: self.pos, message: message.to_string() })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn ident(&mut self) -> Option<Name> {
        self.ws();
        let start = self.pos;
        if !self.peek().is_some_and(is_ident_start) {
            return None;
        }
        while let Some(c) = self.peek().filter(|c| is_ident_char(*c)) {
            self.pos += c.len_utf8();
        }
        Some(self.src[start..self.pos].into())
    }

    fn term(&mut self) -> Result<Term, LambdaParseError> {
        self.ws();
        if matches!(self.peek(), Some('\\' | 'λ')) {
            return self.lambda();
        }
        let mut acc = match self.atom()? {
            Some(a) => a,
            None => return self.fail("expected a term"),
        };
        loop {
            self.ws();
            if matches!(self.peek(), Some('\\' | 'λ')) {
                return Ok(Term::app(acc, self.lambda()?));
            }
            match self.atom()? {
                Some(a) => acc = Term::app(acc, a),
                None => return Ok(acc),
            }
        }
    }

    fn lambda(&mut self) -> Result<Term, LambdaParseError> {
        let c = self.peek().expect("checked by caller");
        self.pos += c.len_utf8();
        let mut binders = Vec::new();
        while let Some(x) = self.ident() {
            binders.push(x);
        }
        if binders.is_empty() {
            return self.fail("expected a binder");
        }
        self.ws();
        if self.peek() != Some('.') {
            return self.fail("expected `.`");
        }
        self.pos += 1;
        let body = self.term()?;
        Ok(binders.into_iter().rev().fold(body, |b, x| Term::Abs(x, Arc::new(b))))
    }

    fn atom(&mut self) -> Result<Option<Term>, LambdaParseError> {
        self.ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                self.ws();
                if self.peek() != Some(')') {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                Ok(Some(t))
            }
            _ => Ok(self.ident().map(Term::Var)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Abs(..) => {
                f.write_str("\\")?;
                let mut cur = self;
                let mut first = true;
                while let Term::Abs(x, b) = cur {
                    if !first {
                        f.write_str(" ")?;
                    }
                    f.write_str(x)?;
                    first = false;
                    cur = b;
                }
                write!(f, ". {cur}")
            }
            Term::App(g, a) => {
                match **g {
                    Term::Abs(..) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match **a {
                    Term::Var(_) => write!(f, " {a}"),
                    _ => write!(f, " ({a})"),
                }
            }
        }
    }
}

/// A term compared and hashed up to alpha-equivalence.
#[derive(Debug, Clone)]
pub struct AlphaTerm(pub Term);

impl PartialEq for AlphaTerm {
    fn eq(&self, other: &Self) -> bool {
        alpha_eq(&self.0, &other.0)
    }
}

impl Eq for AlphaTerm {}

impl Hash for AlphaTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        de_bruijn(&self.0).hash(state)
    }
}

impl fmt::Display for AlphaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Term> for AlphaTerm {
    fn from(t: Term) -> Self {
        AlphaTerm(t)
    }
}

impl Subexpressions for AlphaTerm {
    fn children(&self) -> Vec<Self> {
        match &self.0 {
            Term::Var(_) => Vec::new(),
            Term::App(f, a) => vec![AlphaTerm((**f).clone()), AlphaTerm((**a).clone())],
            Term::Abs(_, b) => vec![AlphaTerm((**b).clone())],
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        let c = Arc::new(child.0);
        Some(AlphaTerm(match (&self.0, index) {
            (Term::App(_, a), 0) => Term::App(c, a.clone()),
            (Term::App(f, _), 1) => Term::App(f.clone(), c),
            (Term::Abs(x, _), 0) => Term::Abs(x.clone(), c),
            _ => return None,
        }))
    }
}

/// The Mogensen framework: `V` is `β`-normalization (absent when no normal
/// form is reached), `V_syn = Q = ⟨·⟩`, `L_syn` is the normal forms and
/// `E(M) = E_term M` on representations.
#[derive(Debug, Clone)]
pub struct LambdaFramework {
    pub fuel: u64,
    interp: Term,
}

impl LambdaFramework {
    pub fn new(fuel: u64) -> Self {
        LambdaFramework { fuel, interp: self_interp_term() }
    }
}

impl Default for LambdaFramework {
    fn default() -> Self {
        LambdaFramework::new(DEFAULT_FUEL)
    }
}

impl SyntaxFramework for LambdaFramework {
    type Expr = AlphaTerm;
    type Value = Option<AlphaTerm>;

    fn id(&self) -> &str {
        "lambda"
    }

    fn features(&self) -> Features {
        Features { built_in_evaluation: true, ..Features::default() }
    }

    fn in_language(&self, _: &AlphaTerm) -> bool {
        true
    }

    fn in_object(&self, _: &AlphaTerm) -> bool {
        true
    }

    fn in_syntax(&self, e: &AlphaTerm) -> bool {
        e.0.is_normal()
    }

    fn semantic(&self, e: &AlphaTerm) -> Option<AlphaTerm> {
        beta_nf(&e.0, self.fuel).map(AlphaTerm)
    }

    fn syntactic(&self, e: &AlphaTerm) -> Option<AlphaTerm> {
        Some(AlphaTerm(rep(&e.0)))
    }

    fn decode(&self, v: &Option<AlphaTerm>) -> Option<AlphaTerm> {
        unrep(&v.as_ref()?.0).map(AlphaTerm)
    }

    fn quotation(&self, e: &AlphaTerm) -> AlphaTerm {
        AlphaTerm(rep(&e.0))
    }

    fn evaluation(&self, e: &AlphaTerm) -> Option<AlphaTerm> {
        if !e.0.is_normal() {
            return None;
        }
        unrep(&e.0)?;
        Some(AlphaTerm(Term::app(self.interp.clone(), e.0.clone())))
    }
}

/// Memoized normal forms, for callers that normalize the same term often.
#[derive(Debug, Default)]
pub struct NfCache {
    fuel: u64,
    map: HashMap<AlphaTerm, Option<Term>>,
}

impl NfCache {
    pub fn new(fuel: u64) -> Self {
        NfCache { fuel, map: HashMap::new() }
    }

    pub fn nf(&mut self, t: &Term) -> Option<Term> {
        let key = AlphaTerm(t.clone());
        if let Some(hit) = self.map.get(&key) {
            return hit.clone();
        }
        let r = beta_nf(t, self.fuel);
        self.map.insert(key, r.clone());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse_term(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    /// Church numeral value by applying to a successor counter: counts how
    /// many times `f` is applied in `nf(t s z)` with fresh free `s`, `z`.
    fn count_applications(t: &Term) -> Option<u32> {
        let probe = Term::apply(t.clone(), [Term::var("s#"), Term::var("z#")]);
        let mut cur = beta_nf(&probe, DEFAULT_FUEL)?;
        let mut n = 0;
        loop {
            match cur {
                Term::Var(ref z) if &**z == "z#" => return Some(n),
                Term::App(ref f, ref a) if matches!(&**f, Term::Var(s) if &**s == "s#") => {
                    n += 1;
                    let next = (**a).clone();
                    cur = next;
                }
                _ => return None,
            }
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("\\x. x"), Term::abs("x", Term::var("x")));
        assert_eq!(p("λx. x"), Term::abs("x", Term::var("x")));
        assert_eq!(p("f x y"), Term::app(Term::app(Term::var("f"), Term::var("x")), Term::var("y")));
        assert!(parse_term("\\x").is_err());
        assert!(parse_term("(x").is_err());
        assert!(parse_term("").is_err());
        assert_eq!(p("\\x y. x"), Term::abs("x", Term::abs("y", Term::var("x"))));
    }

    #[test]
    fn print_round_trip() {
        for s in ["\\x. x", "f x y", "f (g x)", "(\\x. x) y", "\\f x. f (f x)", "x (\\y. y)", "(\\x. x x) (\\x. x x)"] {
            let t = p(s);
            assert_eq!(t.to_string(), s);
            assert_eq!(p(&t.to_string()), t);
        }
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(beta_nf(&p("(\\x. x) y"), 10), Some(p("y")));
        let omega = p("(\\x. x x) (\\x. x x)");
        assert_eq!(beta_nf(&omega, 1000), None);
        let four = beta_nf(&Term::app(church(2), church(2)), DEFAULT_FUEL).unwrap();
        assert!(alpha_eq(&four, &church(4)));
        assert_eq!(count_applications(&four), Some(4));
        // K x Ω needs normal order.
        assert_eq!(beta_nf(&Term::apply(p("\\x y. x"), [p("z"), omega]), 100), Some(p("z")));
    }

    #[test]
    fn church_arithmetic_oracle() {
        let plus = p("\\m n f x. m f (n f x)");
        let times = p("\\m n f. m (n f)");
        for a in 0..4 {
            for b in 0..4 {
                let sum = beta_nf(&Term::apply(plus.clone(), [church(a), church(b)]), DEFAULT_FUEL).unwrap();
                assert_eq!(count_applications(&sum), Some(a + b));
                assert_eq!(church_value(&sum), Some(a + b));
                let prod = beta_nf(&Term::apply(times.clone(), [church(a), church(b)]), DEFAULT_FUEL).unwrap();
                assert_eq!(count_applications(&prod), Some(a * b));
            }
        }
    }

    #[test]
    fn capture_avoidance() {
        // (λx. λy. x) y  →  λy1. y, not λy. y.
        let r = beta_nf(&p("(\\x. \\y. x) y"), 10).unwrap();
        assert!(alpha_eq(&r, &p("\\z. y")));
        assert_eq!(r, p("\\y1. y"));
        let s = subst(&p("\\y. x y1 y"), "x", &p("y"));
        assert!(alpha_eq(&s, &p("\\w. y y1 w")));
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&p("\\x. x"), &p("\\y. y")));
        assert!(!alpha_eq(&p("\\x. \\y. x"), &p("\\x. \\y. y")));
        let t = p("\\x. f x (\\y. y x)");
        assert!(alpha_eq(&t, &t));
        assert!(!alpha_eq(&p("x"), &p("y")));
    }

    #[test]
    fn rep_examples() {
        assert_eq!(rep(&p("x")), p("\\a b c. a x"));
        assert_eq!(rep(&p("m n")), p("\\a b c. b (\\a b c. a m) (\\a b c. a n)"));
        assert_eq!(rep(&p("\\x. x")), p("\\a b c. c (\\x. \\a b c. a x)"));
        let clash = p("\\a. a b");
        let r = rep(&clash);
        assert!(r.is_normal());
        assert!(!r.names().is_empty());
        let [a, b, c] = schema_names(&clash);
        assert_eq!([&*a, &*b, &*c], ["a1", "b1", "c"]);
        assert!(alpha_eq(&unrep(&r).unwrap(), &clash));
    }

    #[test]
    fn unrep_inverts_rep() {
        for (_, t) in corpus() {
            assert!(alpha_eq(&unrep(&rep(&t)).unwrap(), &t));
        }
        assert_eq!(unrep(&p("\\x. x")), None);
    }

    #[test]
    fn self_interpreter_examples() {
        let e = self_interp_term();
        assert!(e.is_closed());
        let id = run_self_interp(&p("\\x. x"), DEFAULT_FUEL).unwrap();
        assert!(alpha_eq(&id, &p("\\x. x")));
        let y = run_self_interp(&p("(\\x. x) y"), DEFAULT_FUEL).unwrap();
        assert!(alpha_eq(&y, &p("y")));
        let three = run_self_interp(&church(3), DEFAULT_FUEL).unwrap();
        assert!(alpha_eq(&three, &church(3)));
        assert_eq!(run_self_interp(&p("(\\x. x x) (\\x. x x)"), 2000), None);
    }

    #[test]
    fn corpus_self_interprets() {
        on_big_stack(|| {
            for (name, t) in corpus() {
                let direct = beta_nf(&t, DEFAULT_FUEL).unwrap();
                let via = run_self_interp(&t, DEFAULT_FUEL).unwrap_or_else(|| panic!("{name}"));
                assert!(alpha_eq(&direct, &via), "{name}");
            }
        });
    }

    #[test]
    fn deterministic_reduction() {
        let t = Term::apply(p("\\m n f x. m f (n f x)"), [church(2), church(3)]);
        let mut r1 = Reducer::new(DEFAULT_FUEL);
        let mut r2 = Reducer::new(DEFAULT_FUEL);
        assert_eq!(r1.nf(&t), r2.nf(&t));
        assert_eq!(r1.steps, r2.steps);
    }

    #[test]
    fn fresh_names() {
        let avoid: BTreeSet<Name> = ["x", "x1", "x2"].into_iter().map(Name::from).collect();
        assert_eq!(&*fresh("x", &avoid), "x3");
        assert_eq!(&*fresh("x1", &avoid), "x3");
        assert_eq!(&*fresh("y", &avoid), "y");
    }
}
