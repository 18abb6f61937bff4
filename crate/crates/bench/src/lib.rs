//! Fixed inputs shared by the benchmarks.

use quosyn::goedel::{self, ArithExpr};
use quosyn::lambda::{self, Term};
use quosyn::ring::{self, RingExpr};

/// `(x0 + x1 + 1)^n` as a product of `n` copies.
pub fn ring_power(n: usize) -> RingExpr {
    let base = ring::parse("x0 + x1 + 1").expect("literal");
    (1..n).fold(base.clone(), |acc, _| RingExpr::mul(acc, base.clone()))
}

/// `n/2 + n/2 = n` over unary numerals.
pub fn arith_chain(n: u64) -> ArithExpr {
    ArithExpr::eq(ArithExpr::plus(goedel::numeral(n / 2), goedel::numeral(n / 2)), goedel::numeral(n))
}

/// `church(n) church(2)`, which normalizes to `church(2^n)`.
pub fn church_power(n: u32) -> Term {
    Term::app(lambda::church(n), lambda::church(2))
}
