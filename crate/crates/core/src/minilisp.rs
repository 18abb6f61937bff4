//! A pure Lisp over S-expressions with built-in `quote` and `eval`.
//!
//! Every S-expression represents its own syntax, so `V_syn` is the
//! identity, `Q(e) = (quote e)` and `E(e) = (eval e)`. The interpreter has
//! no mutable state: closures are ordinary S-expressions
//! `(lambda (params) body)` whose free variables were replaced by quoted
//! values when the lambda form was evaluated, and `eval` always runs its
//! argument's value in the empty environment.
//!
//! Interpretation is fuel-bounded; errors, fuel exhaustion and excessive
//! nesting all yield bottom.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::framework::{Features, SyntaxFramework};
use crate::quasi::{MarkedExpr, Position, Subexpressions};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SExpr {
    Num(i64),
    Sym(String),
    Nil,
    Pair(Arc<SExpr>, Arc<SExpr>),
}

impl SExpr {
    pub fn sym(name: &str) -> SExpr {
        SExpr::Sym(name.to_string())
    }

    pub fn cons(head: SExpr, tail: SExpr) -> SExpr {
        SExpr::Pair(Arc::new(head), Arc::new(tail))
    }

    pub fn list(items: impl IntoIterator<Item = SExpr>) -> SExpr {
        let items: Vec<SExpr> = items.into_iter().collect();
        items.into_iter().rev().fold(SExpr::Nil, |tail, head| SExpr::cons(head, tail))
    }

    /// The elements of a proper list; absent for atoms other than `()` and
    /// for dotted lists.
    pub fn as_list(&self) -> Option<Vec<SExpr>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                SExpr::Nil => return Some(out),
                SExpr::Pair(h, t) => {
                    out.push((**h).clone());
                    cur = t;
                }
                _ => return None,
            }
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            SExpr::Sym(s) => Some(s),
            _ => None,
        }
    }

    /// `(tag x)` for a given tag symbol.
    fn tagged(&self, tag: &str) -> Option<&SExpr> {
        if let SExpr::Pair(h, t) = self {
            if h.as_sym() == Some(tag) {
                if let SExpr::Pair(x, rest) = &**t {
                    if **rest == SExpr::Nil {
                        return Some(x);
                    }
                }
            }
        }
        None
    }

    fn truthy(&self) -> bool {
        *self != SExpr::Nil
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Num(n) => write!(f, "{n}"),
            SExpr::Sym(s) => f.write_str(s),
            SExpr::Nil => f.write_str("()"),
            SExpr::Pair(h, t) => {
                write!(f, "({h}")?;
                let mut cur = &**t;
                loop {
                    match cur {
                        SExpr::Nil => break,
                        SExpr::Pair(h, t) => {
                            write!(f, " {h}")?;
                            cur = t;
                        }
                        atom => {
                            write!(f, " . {atom}")?;
                            break;
                        }
                    }
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("read error at offset {offset}: {message}")]
pub struct ReadError {
    pub offset: usize,
    pub message: String,
}

/// Reads exactly one S-expression. `'x`, `` `x `` and `,x` read as
/// `(quote x)`, `(quasiquote x)` and `(unquote x)`; a comma outside every
/// backquote is rejected. `nil` reads as `()`.
pub fn read(src: &str) -> Result<SExpr, ReadError> {
    let mut r = Reader { src, pos: 0, backquotes: 0 };
    let e = r.expr()?;
    r.ws();
    if r.pos < src.len() {
        return r.fail("unexpected trailing input");
    }
    Ok(e)
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
    backquotes: usize,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '\'' | '`' | ',' | ';')
}

impl Reader<'_> {
    fn fail<T>(&self, message: &str) -> Result<T, ReadError> {
        Err(ReadError { offset: self.pos, message: message.to_string() })
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if c == ';' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
            } else {
                break;
            }
        }
    }

    fn expr(&mut self) -> Result<SExpr, ReadError> {
        self.ws();
        let Some(c) = self.peek() else {
            return self.fail("unexpected end of input");
        };
        match c {
            '(' => {
                self.pos += 1;
                self.list_tail()
            }
            ')' => self.fail("unexpected `)`"),
            '\'' => {
                self.pos += 1;
                Ok(SExpr::list([SExpr::sym("quote"), self.expr()?]))
            }
            '`' => {
                self.pos += 1;
                self.backquotes += 1;
                let inner = self.expr();
                self.backquotes -= 1;
                Ok(SExpr::list([SExpr::sym("quasiquote"), inner?]))
            }
            ',' => {
                if self.backquotes == 0 {
                    return self.fail("comma outside backquote");
                }
                self.pos += 1;
                self.backquotes -= 1;
                let inner = self.expr();
                self.backquotes += 1;
                Ok(SExpr::list([SExpr::sym("unquote"), inner?]))
            }
            _ => Ok(self.atom()),
        }
    }

    fn list_tail(&mut self) -> Result<SExpr, ReadError> {
        let mut items = Vec::new();
        loop {
            self.ws();
            match self.peek() {
                None => return self.fail("unbalanced `(`"),
                Some(')') => {
                    self.pos += 1;
                    return Ok(SExpr::list(items));
                }
                Some('.') if !items.is_empty() && self.lone_dot() => {
                    self.pos += 1;
                    let tail = self.expr()?;
                    self.ws();
                    if self.peek() != Some(')') {
                        return self.fail("expected `)` after dotted tail");
                    }
                    self.pos += 1;
                    return Ok(items.into_iter().rev().fold(tail, |t, h| SExpr::cons(h, t)));
                }
                Some(_) => items.push(self.expr()?),
            }
        }
    }

    fn lone_dot(&self) -> bool {
        self.src[self.pos + 1..].chars().next().is_none_or(is_delimiter)
    }

    fn atom(&mut self) -> SExpr {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_delimiter(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        let text = &self.src[start..self.pos];
        if let Ok(n) = text.parse::<i64>() {
            return SExpr::Num(n);
        }
        if text == "nil" {
            return SExpr::Nil;
        }
        SExpr::Sym(text.to_string())
    }
}

/// `V(e)`: a value or bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LispResult {
    Value(SExpr),
    Bottom,
}

impl LispResult {
    pub fn value(&self) -> Option<&SExpr> {
        match self {
            LispResult::Value(v) => Some(v),
            LispResult::Bottom => None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        *self == LispResult::Bottom
    }
}

impl From<Option<SExpr>> for LispResult {
    fn from(v: Option<SExpr>) -> Self {
        v.map_or(LispResult::Bottom, LispResult::Value)
    }
}

impl fmt::Display for LispResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LispResult::Value(v) => write!(f, "{v}"),
            LispResult::Bottom => f.write_str("⊥"),
        }
    }
}

pub const DEFAULT_FUEL: u64 = 100_000;
pub const MAX_DEPTH: usize = 400;

pub const SPECIAL_FORMS: [&str; 7] = ["quote", "eval", "if", "lambda", "let", "quasiquote", "unquote"];
pub const BUILTINS: [&str; 8] = ["+", "-", "*", "=", "cons", "car", "cdr", "list"];

pub fn is_builtin(name: &str) -> bool {
    BUILTINS.contains(&name)
}

pub fn interp(e: &SExpr) -> LispResult {
    interp_with_fuel(e, DEFAULT_FUEL)
}

pub fn interp_with_fuel(e: &SExpr, fuel: u64) -> LispResult {
    Machine { fuel, depth: 0 }.eval(e, &[]).into()
}

type Env = [(String, SExpr)];

struct Machine {
    fuel: u64,
    depth: usize,
}

fn lookup<'e>(env: &'e Env, name: &str) -> Option<&'e SExpr> {
    env.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
}

fn without<'n>(env: &Env, names: impl IntoIterator<Item = &'n str> + Clone) -> Vec<(String, SExpr)> {
    env.iter().filter(|(n, _)| !names.clone().into_iter().any(|m| m == n)).cloned().collect()
}

fn param_names(params: &SExpr) -> Option<Vec<String>> {
    params.as_list()?.into_iter().map(|p| p.as_sym().map(str::to_string)).collect()
}

fn let_bindings(bindings: &SExpr) -> Option<Vec<(String, SExpr)>> {
    bindings
        .as_list()?
        .into_iter()
        .map(|b| match b.as_list()?.as_slice() {
            [SExpr::Sym(name), init] => Some((name.clone(), init.clone())),
            _ => None,
        })
        .collect()
}

/// Replaces free occurrences of bound variables with quoted values.
fn close_over(e: &SExpr, env: &Env) -> SExpr {
    if env.is_empty() {
        return e.clone();
    }
    if let SExpr::Sym(s) = e {
        return match lookup(env, s) {
            Some(v) => SExpr::list([SExpr::sym("quote"), v.clone()]),
            None => e.clone(),
        };
    }
    let Some(items) = e.as_list() else {
        return match e {
            SExpr::Pair(h, t) => SExpr::cons(close_over(h, env), close_over(t, env)),
            _ => e.clone(),
        };
    };
    match (items.first().and_then(SExpr::as_sym), items.as_slice()) {
        (Some("quote"), _) => e.clone(),
        (Some("lambda"), [head, params, body]) => {
            let Some(names) = param_names(params) else { return e.clone() };
            let inner = without(env, names.iter().map(String::as_str));
            SExpr::list([head.clone(), params.clone(), close_over(body, &inner)])
        }
        (Some("let"), [head, bindings, body]) => {
            let Some(bs) = let_bindings(bindings) else { return e.clone() };
            let closed = SExpr::list(bs.iter().map(|(n, init)| SExpr::list([SExpr::sym(n), close_over(init, env)])));
            let inner = without(env, bs.iter().map(|(n, _)| n.as_str()));
            SExpr::list([head.clone(), closed, close_over(body, &inner)])
        }
        (Some("quasiquote"), [head, template]) => SExpr::list([head.clone(), close_over_template(template, env)]),
        _ => SExpr::list(items.iter().map(|x| close_over(x, env))),
    }
}

fn close_over_template(t: &SExpr, env: &Env) -> SExpr {
    if let Some(x) = t.tagged("unquote") {
        return SExpr::list([SExpr::sym("unquote"), close_over(x, env)]);
    }
    match t {
        SExpr::Pair(h, rest) => SExpr::cons(close_over_template(h, env), close_over_template(rest, env)),
        _ => t.clone(),
    }
}

impl Machine {
    fn eval(&mut self, e: &SExpr, env: &Env) -> Option<SExpr> {
        if self.fuel == 0 || self.depth >= MAX_DEPTH {
            return None;
        }
        self.fuel -= 1;
        self.depth += 1;
        let r = self.step(e, env);
        self.depth -= 1;
        r
    }

    fn step(&mut self, e: &SExpr, env: &Env) -> Option<SExpr> {
        match e {
            SExpr::Num(_) | SExpr::Nil => Some(e.clone()),
            SExpr::Sym(s) => match lookup(env, s) {
                Some(v) => Some(v.clone()),
                None if s == "t" || is_builtin(s) => Some(e.clone()),
                None => None,
            },
            SExpr::Pair(..) => {
                let items = e.as_list()?;
                let (head, args) = items.split_first()?;
                match head.as_sym() {
                    Some("quote") => match args {
                        [x] => Some(x.clone()),
                        _ => None,
                    },
                    Some("eval") => match args {
                        [x] => {
                            let code = self.eval(x, env)?;
                            self.eval(&code, &[])
                        }
                        _ => None,
                    },
                    Some("if") => match args {
                        [c, a, b] => {
                            if self.eval(c, env)?.truthy() {
                                self.eval(a, env)
                            } else {
                                self.eval(b, env)
                            }
                        }
                        _ => None,
                    },
                    Some("lambda") => match args {
                        [params, body] => {
                            let names = param_names(params)?;
                            let inner = without(env, names.iter().map(String::as_str));
                            Some(SExpr::list([head.clone(), params.clone(), close_over(body, &inner)]))
                        }
                        _ => None,
                    },
                    Some("let") => match args {
                        [bindings, body] => {
                            let mut inner = env.to_vec();
                            for (name, init) in let_bindings(bindings)? {
                                let v = self.eval(&init, env)?;
                                inner.push((name, v));
                            }
                            self.eval(body, &inner)
                        }
                        _ => None,
                    },
                    Some("quasiquote") => match args {
                        [template] => self.fill(template, env),
                        _ => None,
                    },
                    Some("unquote") => None,
                    _ => {
                        let f = self.eval(head, env)?;
                        let vals = args.iter().map(|a| self.eval(a, env)).collect::<Option<Vec<_>>>()?;
                        self.apply(&f, &vals)
                    }
                }
            }
        }
    }

    /// The backquote template walk: each `(unquote x)` is replaced by the
    /// value of `x`.
    fn fill(&mut self, t: &SExpr, env: &Env) -> Option<SExpr> {
        if let Some(x) = t.tagged("unquote") {
            return self.eval(x, env);
        }
        if t.tagged("quasiquote").is_some() {
            return None;
        }
        match t {
            SExpr::Pair(h, rest) => Some(SExpr::cons(self.fill(h, env)?, self.fill(rest, env)?)),
            _ => Some(t.clone()),
        }
    }

    fn apply(&mut self, f: &SExpr, args: &[SExpr]) -> Option<SExpr> {
        if let SExpr::Sym(name) = f {
            return builtin(name, args);
        }
        match f.as_list()?.as_slice() {
            [SExpr::Sym(l), params, body] if l == "lambda" => {
                let names = param_names(params)?;
                if names.len() != args.len() {
                    return None;
                }
                let env: Vec<(String, SExpr)> = names.into_iter().zip(args.iter().cloned()).collect();
                self.eval(body, &env)
            }
            _ => None,
        }
    }
}

fn nums(args: &[SExpr]) -> Option<Vec<i64>> {
    args.iter()
        .map(|a| match a {
            SExpr::Num(n) => Some(*n),
            _ => None,
        })
        .collect()
}

fn builtin(name: &str, args: &[SExpr]) -> Option<SExpr> {
    let truth = |b: bool| if b { SExpr::sym("t") } else { SExpr::Nil };
    match (name, args) {
        ("+", _) => nums(args)?.into_iter().try_fold(0i64, i64::checked_add).map(SExpr::Num),
        ("*", _) => nums(args)?.into_iter().try_fold(1i64, i64::checked_mul).map(SExpr::Num),
        ("-", [_]) => nums(args)?[0].checked_neg().map(SExpr::Num),
        ("-", [_, ..]) => {
            let ns = nums(args)?;
            ns[1..].iter().try_fold(ns[0], |acc, n| acc.checked_sub(*n)).map(SExpr::Num)
        }
        ("=", [a, b]) => Some(truth(a == b)),
        ("cons", [a, b]) => Some(SExpr::cons(a.clone(), b.clone())),
        ("car", [SExpr::Pair(h, _)]) => Some((**h).clone()),
        ("cdr", [SExpr::Pair(_, t)]) => Some((**t).clone()),
        ("list", _) => Some(SExpr::list(args.iter().cloned())),
        _ => None,
    }
}

/// `(quote e)`.
pub fn quote_of(e: &SExpr) -> SExpr {
    SExpr::list([SExpr::sym("quote"), e.clone()])
}

/// `(eval e)`.
pub fn eval_of(e: &SExpr) -> SExpr {
    SExpr::list([SExpr::sym("eval"), e.clone()])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LispError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error("`{0}` is not a backquote expression")]
    NotBackquote(String),
    #[error("nested backquote is not supported: `{0}`")]
    NestedBackquote(String),
    #[error("`{0}` has bottom as its value")]
    Bottom(String),
}

/// The placeholder left at each comma-marked position.
pub const HOLE: &str = "HOLE";

/// Turns `` `e `` into the marked expression `e⟨(p₁,e₁),…⟩`: each `,eᵢ`
/// becomes a [`HOLE`] at position `pᵢ` with splice expression `eᵢ`.
pub fn expand_backquote(e: &SExpr) -> Result<MarkedExpr<SExpr>, LispError> {
    let template = e.tagged("quasiquote").ok_or_else(|| LispError::NotBackquote(e.to_string()))?;
    let mut marks = Vec::new();
    let base = strip_commas(template, Position::root(), &mut marks)
        .ok_or_else(|| LispError::NestedBackquote(e.to_string()))?;
    Ok(MarkedExpr { base, marks })
}

fn strip_commas(t: &SExpr, at: Position, marks: &mut Vec<(Position, SExpr)>) -> Option<SExpr> {
    if let Some(x) = t.tagged("unquote") {
        marks.push((at, x.clone()));
        return Some(SExpr::sym(HOLE));
    }
    if t.tagged("quasiquote").is_some() {
        return None;
    }
    let children = t.children();
    let mut out = t.clone();
    for (i, c) in children.iter().enumerate() {
        out = out.with_child(i, strip_commas(c, at.child(i), marks)?)?;
    }
    Some(out)
}

/// The interpreter's own backquote semantics.
pub fn interp_backquote(e: &SExpr) -> LispResult {
    interp(e)
}

/// The list elements for a proper list, `[car, cdr]` for a dotted pair and
/// nothing for atoms.
impl Subexpressions for SExpr {
    fn children(&self) -> Vec<Self> {
        match self {
            SExpr::Pair(h, t) => self.as_list().unwrap_or_else(|| vec![(**h).clone(), (**t).clone()]),
            _ => Vec::new(),
        }
    }

    fn with_child(&self, index: usize, child: Self) -> Option<Self> {
        match self {
            SExpr::Pair(h, t) => match self.as_list() {
                Some(mut items) => {
                    *items.get_mut(index)? = child;
                    Some(SExpr::list(items))
                }
                None => match index {
                    0 => Some(SExpr::Pair(Arc::new(child), t.clone())),
                    1 => Some(SExpr::Pair(h.clone(), Arc::new(child))),
                    _ => None,
                },
            },
            _ => None,
        }
    }
}

/// The replete Lisp framework.
#[derive(Debug, Clone, Copy)]
pub struct LispFramework {
    pub fuel: u64,
}

impl Default for LispFramework {
    fn default() -> Self {
        LispFramework { fuel: DEFAULT_FUEL }
    }
}

impl SyntaxFramework for LispFramework {
    type Expr = SExpr;
    type Value = LispResult;

    fn id(&self) -> &str {
        "minilisp"
    }

    fn features(&self) -> Features {
        Features {
            built_in_quotation: true,
            built_in_evaluation: true,
            replete: true,
            syn_surjective: true,
            eval_total: true,
        }
    }

    fn in_language(&self, _: &SExpr) -> bool {
        true
    }

    fn in_object(&self, _: &SExpr) -> bool {
        true
    }

    fn in_syntax(&self, e: &SExpr) -> bool {
        !self.semantic(e).is_bottom()
    }

    fn semantic(&self, e: &SExpr) -> LispResult {
        interp_with_fuel(e, self.fuel)
    }

    fn syntactic(&self, e: &SExpr) -> LispResult {
        LispResult::Value(e.clone())
    }

    fn decode(&self, v: &LispResult) -> Option<SExpr> {
        v.value().cloned()
    }

    fn quotation(&self, e: &SExpr) -> SExpr {
        quote_of(e)
    }

    fn evaluation(&self, e: &SExpr) -> Option<SExpr> {
        self.in_syntax(e).then(|| eval_of(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework;
    use crate::quasi;

    fn r(s: &str) -> SExpr {
        read(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    fn v(s: &str) -> LispResult {
        interp(&r(s))
    }

    fn val(s: &str) -> LispResult {
        LispResult::Value(r(s))
    }

    #[test]
    fn reader_examples() {
        assert_eq!(r("(+ 1 2)"), SExpr::list([SExpr::sym("+"), SExpr::Num(1), SExpr::Num(2)]));
        assert_eq!(r("'x"), SExpr::list([SExpr::sym("quote"), SExpr::sym("x")]));
        assert!(read("(").is_err());
        assert!(read(")").is_err());
        assert!(read(",x").is_err());
        assert_eq!(read("(a b").unwrap_err().offset, 4);
        assert_eq!(r("(a . b)"), SExpr::cons(SExpr::sym("a"), SExpr::sym("b")));
        assert_eq!(r("nil"), SExpr::Nil);
        assert_eq!(r("-7"), SExpr::Num(-7));
        assert_eq!(r("-"), SExpr::sym("-"));
    }

    #[test]
    fn print_read_round_trip() {
        for s in ["(+ 1 2)", "(a (b . c) ())", "(quote (unquote x))", "((lambda (x) x) 3)", "(1 2 . 3)"] {
            let e = r(s);
            assert_eq!(e.to_string(), s);
            assert_eq!(r(&e.to_string()), e);
        }
    }

    #[test]
    fn interp_examples() {
        assert_eq!(v("(+ 2 3)"), LispResult::Value(SExpr::Num(5)));
        assert_eq!(v("(quote (+ 1 2))"), val("(+ 1 2)"));
        assert_eq!(v("(eval (quote (+ 2 3)))"), LispResult::Value(SExpr::Num(5)));
        assert_eq!(v("(car (quote ()))"), LispResult::Bottom);
        assert_eq!(v("(f)"), LispResult::Bottom);
        assert_eq!(v("(eval 7)"), LispResult::Value(SExpr::Num(7)));
        assert_eq!(v("(if (= 1 1) 'yes 'no)"), val("yes"));
        assert_eq!(v("(if () 'yes 'no)"), val("no"));
        assert_eq!(v("(let ((x 2) (y 3)) (* x y))"), LispResult::Value(SExpr::Num(6)));
        assert_eq!(v("((lambda (x y) (- x y)) 10 4)"), LispResult::Value(SExpr::Num(6)));
        assert_eq!(v("(cdr (cons 1 2))"), LispResult::Value(SExpr::Num(2)));
        assert_eq!(v("(list 1 'a)"), val("(1 a)"));
        assert_eq!(v("(- 5)"), LispResult::Value(SExpr::Num(-5)));
        assert_eq!(v("(+)"), LispResult::Value(SExpr::Num(0)));
        assert_eq!(v("(+ 1 'a)"), LispResult::Bottom);
        assert_eq!(v("(* 9223372036854775807 2)"), LispResult::Bottom);
    }

    #[test]
    fn closures_are_plain_data() {
        assert_eq!(v("(lambda (x) x)"), val("(lambda (x) x)"));
        assert_eq!(v("(let ((y 1)) (lambda (x) (+ x y)))"), val("(lambda (x) (+ x (quote 1)))"));
        assert_eq!(v("(let ((y 1)) ((lambda (y) y) 5))"), LispResult::Value(SExpr::Num(5)));
        assert_eq!(v("(let ((f (let ((n 10)) (lambda (x) (+ x n))))) (f 1))"), LispResult::Value(SExpr::Num(11)));
        // Lexical, not dynamic, scoping.
        assert_eq!(v("(let ((f (lambda (x) n))) (let ((n 1)) (f 0)))"), LispResult::Bottom);
    }

    #[test]
    fn eval_runs_in_empty_environment() {
        assert_eq!(v("(let ((x 1)) (eval 'x))"), LispResult::Bottom);
        assert_eq!(v("(let ((x 1)) (eval x))"), LispResult::Value(SExpr::Num(1)));
        assert_eq!(v("(eval (list '+ 1 2))"), LispResult::Value(SExpr::Num(3)));
    }

    #[test]
    fn divergence_is_bottom() {
        assert_eq!(v("((lambda (x) (x x)) (lambda (x) (x x)))"), LispResult::Bottom);
        assert_eq!(interp_with_fuel(&r("(+ 1 2)"), 1), LispResult::Bottom);
        assert_eq!(interp_with_fuel(&r("(+ 1 2)"), 4), LispResult::Value(SExpr::Num(3)));
    }

    #[test]
    fn quote_and_eval_forms() {
        assert_eq!(quote_of(&r("x")), r("(quote x)"));
        assert_eq!(interp(&quote_of(&r("(f)"))), val("(f)"));
        let e = eval_of(&r("(quote (+ 2 3))"));
        assert_eq!(e, r("(eval (quote (+ 2 3)))"));
        assert_eq!(interp(&e), LispResult::Value(SExpr::Num(5)));
        let inst = LispFramework::default();
        assert!(framework::eval(&inst, &r("(f)")).is_err());
    }

    #[test]
    fn e_differs_from_direct_eval() {
        let inst = LispFramework::default();
        let s = r("(quote (+ 1 2))");
        let e = framework::eval(&inst, &s).unwrap().unwrap();
        let direct = framework::direct_eval(&inst, &s).unwrap().unwrap();
        assert_eq!(direct, r("(+ 1 2)"));
        assert_eq!(e, r("(eval (quote (+ 1 2)))"));
        assert_ne!(e, direct);
        assert_eq!(interp(&e), interp(&direct));
    }

    #[test]
    fn backquote_examples() {
        let bq = r("`(+ 2 ,(+ 3 1))");
        let m = expand_backquote(&bq).unwrap();
        assert_eq!(m.base, r("(+ 2 HOLE)"));
        assert_eq!(m.marks, vec![(Position(vec![2]), r("(+ 3 1)"))]);
        assert_eq!(interp_backquote(&bq), val("(+ 2 4)"));
        let inst = LispFramework::default();
        let q = quasi::quasiquote(&inst, &m).unwrap().unwrap();
        assert_eq!(q, r("(quote (+ 2 4))"));
        assert_eq!(interp(&q), val("(+ 2 4)"));

        let plain = r("`x");
        assert!(expand_backquote(&plain).unwrap().marks.is_empty());
        assert_eq!(interp_backquote(&plain), val("x"));

        let root = expand_backquote(&r("`,x")).unwrap();
        assert_eq!(root.base, SExpr::sym(HOLE));
        assert_eq!(root.marks, vec![(Position::root(), r("x"))]);

        assert_eq!(interp_backquote(&r("`(list ,(car (quote (a b))))")), val("(list a)"));
        assert!(matches!(expand_backquote(&r("`(a `b)")), Err(LispError::NestedBackquote(_))));
        assert!(matches!(expand_backquote(&r("(a b)")), Err(LispError::NotBackquote(_))));
    }

    #[test]
    fn splice_of_quoted_code() {
        let inst = LispFramework::default();
        let m = MarkedExpr { base: r("(+ 2 HOLE)"), marks: vec![(Position(vec![2]), r("(quote (+ 3 1))"))] };
        assert_eq!(quasi::splice(&inst, &m).unwrap(), Some(r("(+ 2 (+ 3 1))")));
        assert_eq!(quasi::quasiquote(&inst, &m).unwrap(), Some(r("(quote (+ 2 (+ 3 1)))")));
    }

    #[test]
    fn positions_are_list_elements() {
        assert_eq!(quasi::positions(&r("(+ 2 (+ 3 1))")).len(), 7);
    }
}
