//! Size-bounded random generators, one per instance.
//!
//! Every generator takes a node budget and returns an expression with at
//! most that many nodes (counted as [`crate::quasi::size`] counts them).
//! The chance of stopping at a leaf grows geometrically with depth.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::goedel::ArithExpr;
use crate::lambda::{self, Term};
use crate::minilisp::SExpr;
use crate::prop::Formula;
use crate::ring::RingExpr;

pub type GenRng = ChaCha8Rng;

/// Per-level factor on the probability of continuing to grow.
pub const DECAY: f64 = 0.85;

enum Shape {
    Leaf,
    Unary(usize),
    Binary(usize, usize),
}

fn stop_early(rng: &mut GenRng, depth: u32) -> bool {
    rng.gen_bool(1.0 - DECAY.powi(depth as i32))
}

fn shape(rng: &mut GenRng, budget: usize, depth: u32, unary: u32, binary: u32) -> Shape {
    if budget <= 1 || stop_early(rng, depth) {
        return Shape::Leaf;
    }
    let binary = if budget >= 3 { binary } else { 0 };
    let total = unary + binary;
    if total == 0 {
        return Shape::Leaf;
    }
    if rng.gen_range(0..total) < unary {
        Shape::Unary(budget - 1)
    } else {
        let left = rng.gen_range(1..=budget - 2);
        Shape::Binary(left, budget - 1 - left)
    }
}

/// A target size in `1..=max_size`.
fn target(rng: &mut GenRng, max_size: usize) -> usize {
    rng.gen_range(1..=max_size.max(1))
}

/// Splits `total` into `parts` sizes, each at least 1, summing to at most
/// `total`. Requires `total >= parts`.
fn split(rng: &mut GenRng, total: usize, parts: usize) -> Vec<usize> {
    let mut out = vec![1; parts];
    let extra = rng.gen_range(0..=total - parts);
    for _ in 0..extra {
        let i = rng.gen_range(0..parts);
        out[i] += 1;
    }
    out
}

pub const PROP_VARS: [&str; 4] = ["p", "q", "r", "s"];

fn formula_at(rng: &mut GenRng, budget: usize, depth: u32) -> Formula {
    match shape(rng, budget, depth, 1, 2) {
        Shape::Leaf => match rng.gen_range(0..6) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::var(PROP_VARS.choose(rng).expect("nonempty")),
        },
        Shape::Unary(b) => Formula::neg(formula_at(rng, b, depth + 1)),
        Shape::Binary(l, r) => {
            let a = formula_at(rng, l, depth + 1);
            let b = formula_at(rng, r, depth + 1);
            if rng.gen_bool(0.5) {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
    }
}

pub fn formula(rng: &mut GenRng, max_size: usize) -> Formula {
    let budget = target(rng, max_size);
    formula_at(rng, budget, 0)
}

pub const ARITH_VARS: u32 = 3;

fn arith_term(rng: &mut GenRng, budget: usize, depth: u32, quotes: bool) -> ArithExpr {
    match shape(rng, budget, depth, 2, 2) {
        Shape::Leaf => {
            if rng.gen_bool(0.6) {
                ArithExpr::Zero
            } else {
                ArithExpr::Var(rng.gen_range(0..ARITH_VARS))
            }
        }
        Shape::Unary(b) => {
            if quotes && rng.gen_bool(0.35) {
                ArithExpr::quote(arith_any(rng, b, depth + 1, quotes))
            } else {
                ArithExpr::succ(arith_term(rng, b, depth + 1, quotes))
            }
        }
        Shape::Binary(l, r) => {
            let a = arith_term(rng, l, depth + 1, quotes);
            let b = arith_term(rng, r, depth + 1, quotes);
            if rng.gen_bool(0.5) {
                ArithExpr::plus(a, b)
            } else {
                ArithExpr::times(a, b)
            }
        }
    }
}

/// A formula of at most `budget` nodes; requires `budget >= 3`.
fn arith_formula(rng: &mut GenRng, budget: usize, depth: u32, quotes: bool) -> ArithExpr {
    let mut options = vec![0];
    if budget >= 4 && !stop_early(rng, depth) {
        options.extend([1, 2]);
        if budget >= 7 {
            options.push(3);
        }
    }
    match *options.choose(rng).expect("nonempty") {
        0 => {
            let l = rng.gen_range(1..=budget - 2);
            let r = rng.gen_range(1..=budget - 1 - l);
            ArithExpr::eq(arith_term(rng, l, depth + 1, quotes), arith_term(rng, r, depth + 1, quotes))
        }
        1 => ArithExpr::not(arith_formula(rng, budget - 1, depth + 1, quotes)),
        2 => ArithExpr::forall(rng.gen_range(0..ARITH_VARS), arith_formula(rng, budget - 1, depth + 1, quotes)),
        _ => {
            let l = rng.gen_range(3..=budget - 4);
            let a = arith_formula(rng, l, depth + 1, quotes);
            let b = arith_formula(rng, budget - 1 - l, depth + 1, quotes);
            ArithExpr::and(a, b)
        }
    }
}

fn arith_any(rng: &mut GenRng, budget: usize, depth: u32, quotes: bool) -> ArithExpr {
    if budget >= 3 && rng.gen_bool(0.5) {
        arith_formula(rng, budget, depth, quotes)
    } else {
        arith_term(rng, budget, depth, quotes)
    }
}

/// A well-sorted arithmetic expression; `quotes` enables the built-in
/// `quote` operator.
pub fn arith(rng: &mut GenRng, max_size: usize, quotes: bool) -> ArithExpr {
    let budget = target(rng, max_size);
    arith_any(rng, budget, 0, quotes)
}

pub fn arith_term_only(rng: &mut GenRng, max_size: usize, quotes: bool) -> ArithExpr {
    let budget = target(rng, max_size);
    arith_term(rng, budget, 0, quotes)
}

const LISP_FREE_SYMBOLS: [&str; 3] = ["foo", "bar", "baz"];
const LISP_VARS: [&str; 4] = ["x", "y", "z", "n"];
const LISP_DATA_SYMBOLS: [&str; 5] = ["a", "b", "c", "quote", "+"];

fn sym(s: &str) -> SExpr {
    SExpr::sym(s)
}

fn lisp_leaf(rng: &mut GenRng, scope: &[String]) -> SExpr {
    match rng.gen_range(0..12) {
        0..=4 => SExpr::Num(rng.gen_range(-5..=20)),
        5 | 6 if !scope.is_empty() => SExpr::Sym(scope.choose(rng).expect("nonempty").clone()),
        7 => SExpr::Nil,
        8 => sym("t"),
        9 => sym(LISP_FREE_SYMBOLS.choose(rng).expect("nonempty")),
        10 => sym(["+", "*", "car", "list"].choose(rng).expect("nonempty")),
        _ => SExpr::Num(rng.gen_range(0..=9)),
    }
}

/// Arbitrary S-expression data.
fn datum(rng: &mut GenRng, budget: usize, depth: u32) -> SExpr {
    if budget <= 1 || stop_early(rng, depth) || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => SExpr::Num(rng.gen_range(-3..=9)),
            1 => SExpr::Nil,
            _ => sym(LISP_DATA_SYMBOLS.choose(rng).expect("nonempty")),
        };
    }
    let n = rng.gen_range(1..=(budget - 1).min(4));
    let sizes = split(rng, budget - 1, n);
    SExpr::list(sizes.into_iter().map(|b| datum(rng, b, depth + 1)))
}

fn lisp_at(rng: &mut GenRng, budget: usize, depth: u32, scope: &mut Vec<String>) -> SExpr {
    if budget <= 2 || stop_early(rng, depth) {
        return lisp_leaf(rng, scope);
    }
    let mut forms = vec![0, 1, 2];
    if budget >= 4 {
        forms.extend([3, 3, 4]);
    }
    if budget >= 5 {
        forms.push(5);
    }
    if budget >= 7 {
        forms.extend([6, 7]);
    }
    match *forms.choose(rng).expect("nonempty") {
        0 => SExpr::list([sym("quote"), datum(rng, budget - 2, depth + 1)]),
        1 => {
            let op = *["car", "cdr", "-", "eval"].choose(rng).expect("nonempty");
            let arg = if op == "eval" && rng.gen_bool(0.6) && budget >= 5 {
                let mut empty = Vec::new();
                SExpr::list([sym("quote"), lisp_at(rng, budget - 4, depth + 2, &mut empty)])
            } else {
                lisp_at(rng, budget - 2, depth + 1, scope)
            };
            SExpr::list([sym(op), arg])
        }
        2 => SExpr::list([sym("quasiquote"), template(rng, budget - 2, depth + 1, scope)]),
        3 => {
            let op = *["+", "-", "*", "=", "cons", "list"].choose(rng).expect("nonempty");
            let sizes = split(rng, budget - 2, 2);
            let a = lisp_at(rng, sizes[0], depth + 1, scope);
            let b = lisp_at(rng, sizes[1], depth + 1, scope);
            SExpr::list([sym(op), a, b])
        }
        4 => {
            let op = *["list", "+"].choose(rng).expect("nonempty");
            SExpr::list([sym(op), lisp_at(rng, budget - 2, depth + 1, scope)])
        }
        5 => {
            let sizes = split(rng, budget - 2, 3);
            let parts: Vec<SExpr> = sizes.into_iter().map(|b| lisp_at(rng, b, depth + 1, scope)).collect();
            SExpr::list([sym("if")].into_iter().chain(parts))
        }
        6 => {
            let var = LISP_VARS.choose(rng).expect("nonempty").to_string();
            let sizes = split(rng, budget - 5, 2);
            let init = lisp_at(rng, sizes[0], depth + 1, scope);
            scope.push(var.clone());
            let body = lisp_at(rng, sizes[1], depth + 1, scope);
            scope.pop();
            SExpr::list([sym("let"), SExpr::list([SExpr::list([sym(&var), init])]), body])
        }
        _ => {
            let var = LISP_VARS.choose(rng).expect("nonempty").to_string();
            let sizes = split(rng, budget - 5, 2);
            scope.push(var.clone());
            let body = lisp_at(rng, sizes[0], depth + 1, scope);
            scope.pop();
            let arg = lisp_at(rng, sizes[1], depth + 1, scope);
            let lam = SExpr::list([sym("lambda"), SExpr::list([sym(&var)]), body]);
            SExpr::list([lam, arg])
        }
    }
}

/// A backquote template: data with `(unquote e)` holes, never a nested
/// backquote.
fn template(rng: &mut GenRng, budget: usize, depth: u32, scope: &mut Vec<String>) -> SExpr {
    if budget >= 3 && rng.gen_bool(0.3) {
        return SExpr::list([sym("unquote"), lisp_at(rng, budget - 2, depth + 1, scope)]);
    }
    if budget <= 1 || stop_early(rng, depth) || rng.gen_bool(0.25) {
        return datum(rng, 1, depth);
    }
    let n = rng.gen_range(1..=(budget - 1).min(4));
    let sizes = split(rng, budget - 1, n);
    SExpr::list(sizes.into_iter().map(|b| template(rng, b, depth + 1, scope)))
}

/// A closed S-expression program (which may still have bottom as value).
pub fn lisp(rng: &mut GenRng, max_size: usize) -> SExpr {
    let budget = target(rng, max_size);
    lisp_at(rng, budget, 0, &mut Vec::new())
}

/// `` `template `` with at most `max_size` nodes.
pub fn backquote(rng: &mut GenRng, max_size: usize) -> SExpr {
    let budget = target(rng, max_size.max(3));
    SExpr::list([sym("quasiquote"), template(rng, budget.max(3) - 2, 1, &mut Vec::new())])
}

const LAMBDA_BINDERS: [&str; 8] = ["x", "y", "z", "f", "a", "b", "c", "m"];
const LAMBDA_FREE: [&str; 3] = ["u", "v", "w"];

fn lambda_at(rng: &mut GenRng, budget: usize, depth: u32, scope: &mut Vec<String>) -> Term {
    match shape(rng, budget, depth, 2, 3) {
        Shape::Leaf => {
            if !scope.is_empty() && rng.gen_bool(0.85) {
                Term::var(scope.choose(rng).expect("nonempty"))
            } else {
                Term::var(LAMBDA_FREE.choose(rng).expect("nonempty"))
            }
        }
        Shape::Unary(b) => {
            let x = LAMBDA_BINDERS.choose(rng).expect("nonempty").to_string();
            scope.push(x.clone());
            let body = lambda_at(rng, b, depth + 1, scope);
            scope.pop();
            Term::abs(&x, body)
        }
        Shape::Binary(l, r) => {
            let f = lambda_at(rng, l, depth + 1, scope);
            let a = lambda_at(rng, r, depth + 1, scope);
            Term::app(f, a)
        }
    }
}

pub fn lambda_any(rng: &mut GenRng, max_size: usize) -> Term {
    let budget = target(rng, max_size);
    lambda_at(rng, budget, 0, &mut Vec::new())
}

/// Step bound a generated term must normalize within.
pub const LAMBDA_GEN_FUEL: u64 = 2_000;
/// Bound on the normal form size of a generated term.
pub const LAMBDA_GEN_NF_SIZE: usize = 400;

/// A term normalizing within [`LAMBDA_GEN_FUEL`] steps.
pub fn lambda_normalizing(rng: &mut GenRng, max_size: usize) -> Term {
    for _ in 0..200 {
        let t = lambda_any(rng, max_size);
        let mut r = lambda::Reducer::new(LAMBDA_GEN_FUEL);
        r.budget = 200_000;
        if r.nf(&t).is_some_and(|n| n.size() <= LAMBDA_GEN_NF_SIZE) {
            return t;
        }
    }
    Term::abs("x", Term::var("x"))
}

fn ring_at(rng: &mut GenRng, budget: usize, depth: u32, vars: u32) -> RingExpr {
    match shape(rng, budget, depth, 1, 4) {
        Shape::Leaf => {
            if vars > 0 && rng.gen_bool(0.55) {
                RingExpr::Var(rng.gen_range(0..vars))
            } else {
                RingExpr::constant(rng.gen_range(-5..=5))
            }
        }
        Shape::Unary(b) => RingExpr::neg(ring_at(rng, b, depth + 1, vars)),
        Shape::Binary(l, r) => {
            let a = ring_at(rng, l, depth + 1, vars);
            let b = ring_at(rng, r, depth + 1, vars);
            if rng.gen_bool(0.5) {
                RingExpr::add(a, b)
            } else {
                RingExpr::mul(a, b)
            }
        }
    }
}

/// A ring expression over `x0..x{vars-1}` whose degree bound is at most
/// `max_degree`.
pub fn ring(rng: &mut GenRng, max_size: usize, vars: u32, max_degree: u32) -> RingExpr {
    for _ in 0..100 {
        let budget = target(rng, max_size);
        let e = ring_at(rng, budget, 0, vars);
        if e.degree() <= max_degree {
            return e;
        }
    }
    RingExpr::constant(rng.gen_range(-5..=5))
}
