//! Per-instance suites: the framework axioms plus each instance's own
//! properties.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{empty_report, gen, gen_expr, side_rng, trial_seed, AnyExpr, GenConfig, HarnessError, InstanceId};
use crate::framework::{
    check_framework_seeded, check_transformer, CheckReport, Features, PropertyRecord, Seeded, SyntaxFramework,
    TransformerSpec,
};
use crate::goedel::{self, ArithExpr, GoedelFramework};
use crate::lambda::{self, AlphaTerm, LambdaFramework};
use crate::minilisp::{self, LispFramework, LispResult, SExpr};
use crate::prop::{self, Assignment, Formula, PropExpr, PropFramework};
use crate::quasi::{self, size, Subexpressions};
use crate::ring::{self, RingExpr, RingFramework, RingSyntax};
use crate::strlang::{self, Denotation, StrExpr, StrFramework, StrTerm};

/// Stack size for suite worker threads; lambda reduction recurses deeply.
const SUITE_STACK: usize = 256 << 20;

pub const SYNTACTIC_DISQUOTATION: &str = "syntactic_disquotation";

/// Runs the full property list for `cfg.instance`.
pub fn run_suite(cfg: &GenConfig) -> Result<CheckReport, HarnessError> {
    cfg.validate()?;
    if cfg.trials == 0 {
        return Ok(empty_report(cfg.instance));
    }
    let pool = rayon::ThreadPoolBuilder::new().stack_size(SUITE_STACK).build().expect("suite thread pool");
    Ok(pool.install(|| match cfg.instance {
        InstanceId::Prop => prop_suite(cfg),
        InstanceId::Strlang => strlang_suite(cfg),
        InstanceId::Goedel => goedel_suite(cfg),
        InstanceId::Minilisp => minilisp_suite(cfg),
        InstanceId::Lambda => lambda_suite(cfg),
        InstanceId::Ring => ring_suite(cfg),
    }))
}

/// Samples for every trial, in trial order.
fn samples<E: Send>(cfg: &GenConfig, pick: impl Fn(AnyExpr) -> E + Sync) -> Vec<Seeded<E>> {
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg.seed, i);
            let e = gen_expr(&GenConfig { seed, ..*cfg }).expect("validated config");
            Seeded { seed, expr: pick(e) }
        })
        .collect()
}

/// One trial per sample; `check` returns a description of the failure.
fn property<E: Sync>(
    name: &str,
    cfg: &GenConfig,
    samples: &[Seeded<E>],
    check: impl Fn(usize, &Seeded<E>) -> Result<(), String> + Sync,
) -> PropertyRecord {
    let verdicts: Vec<Result<(), String>> = samples.par_iter().enumerate().map(|(i, s)| check(i, s)).collect();
    let mut rec = PropertyRecord::new(name, cfg.seed);
    for (s, v) in samples.iter().zip(verdicts) {
        match v {
            Ok(()) => rec.record(true, s.seed, String::new),
            Err(w) => rec.record(false, s.seed, || w),
        }
    }
    rec
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T, ctx: impl std::fmt::Display) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{ctx}: got {got:?}, expected {want:?}"))
    }
}

/// `E(Q(e)) = e` as expressions.
fn syntactic_disquotation<F: SyntaxFramework>(
    inst: &F,
    cfg: &GenConfig,
    samples: &[Seeded<F::Expr>],
) -> PropertyRecord {
    property(SYNTACTIC_DISQUOTATION, cfg, samples, |_, s| {
        let back = inst.evaluation(&inst.quotation(&s.expr));
        expect_eq(back.as_ref(), Some(&s.expr), &s.expr)
    })
}

fn prop_samples(cfg: &GenConfig) -> Vec<Seeded<PropExpr>> {
    samples(cfg, |e| match e {
        AnyExpr::Prop(f) => PropExpr::Text(prop::print(&f)),
        _ => unreachable!("prop generator"),
    })
}

/// Reference truth-table evaluation.
fn table(f: &Formula, phi: &Assignment) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Var(v) => phi.get(v).unwrap_or(false),
        Formula::Neg(a) => !table(a, phi),
        Formula::And(a, b) => table(a, phi) && table(b, phi),
        Formula::Or(a, b) => table(a, phi) || table(b, phi),
    }
}

fn prop_suite(cfg: &GenConfig) -> CheckReport {
    let inst = PropFramework::default();
    let xs = prop_samples(cfg);
    let mut report = check_framework_seeded(&inst, &xs, cfg.seed);
    report.properties.push(syntactic_disquotation(&inst, cfg, &xs));
    report.properties.push(property("print_parse_round_trip", cfg, &xs, |_, s| {
        let PropExpr::Text(text) = &s.expr else { unreachable!() };
        let reprinted = prop::parse(text).map(|f| prop::print(&f)).map_err(|e| e.to_string())?;
        expect_eq(&reprinted, text, text)
    }));
    report.properties.push(property("value_soundness", cfg, &xs, |i, s| {
        let PropExpr::Text(text) = &s.expr else { unreachable!() };
        let f = prop::parse(text).map_err(|e| e.to_string())?;
        let mut rng = side_rng(cfg.seed, i as u64, 1);
        let mut total = Assignment::new();
        let mut partial = Assignment::new();
        for v in gen::PROP_VARS {
            let b = rng.gen_bool(0.5);
            total.set(v, b);
            if rng.gen_bool(0.5) {
                partial.set(v, b);
            }
        }
        let constant = if table(&f, &total) { Formula::True } else { Formula::False };
        expect_eq(prop::value(&f, &total), constant, format!("{text} under {total:?}"))?;
        let residual = prop::value(&f, &partial);
        expect_eq(table(&residual, &total), table(&f, &total), format!("{text} under {partial:?}"))
    }));
    report
}

fn strlang_samples(cfg: &GenConfig) -> Vec<Seeded<StrExpr>> {
    samples(cfg, |e| match e {
        AnyExpr::Strlang(f) => StrExpr::Formula(f),
        _ => unreachable!("strlang generator"),
    })
}

fn strlang_suite(cfg: &GenConfig) -> CheckReport {
    let inst = StrFramework;
    let xs = strlang_samples(cfg);
    let mut report = check_framework_seeded(&inst, &xs, cfg.seed);
    report.properties.push(syntactic_disquotation(&inst, cfg, &xs));
    report.properties.push(property("quotation_string_form", cfg, &xs, |_, s| {
        let StrExpr::Formula(f) = &s.expr else { unreachable!() };
        let rep = strlang::string_rep(f).map_err(|e| e.to_string())?;
        let quoted = strlang::quote_str(f).map_err(|e| e.to_string())?;
        let denoted = strlang::term_value(&quoted).map_err(|e| e.to_string())?;
        expect_eq(denoted, Some(Denotation::Str(rep)), f)
    }));
    report.properties.push(property("head_tail_laws", cfg, &xs, |_, s| {
        let StrExpr::Formula(f) = &s.expr else { unreachable!() };
        let rep = strlang::string_rep(f).map_err(|e| e.to_string())?;
        let quoted = strlang::quote_str(f).map_err(|e| e.to_string())?;
        let mut chars = rep.chars();
        let first = chars.next().ok_or("empty string representation")?;
        let head = strlang::term_value(&StrTerm::head(quoted.clone())).map_err(|e| e.to_string())?;
        let tail = strlang::term_value(&StrTerm::tail(quoted)).map_err(|e| e.to_string())?;
        expect_eq(head, Some(Denotation::Symbol(first)), f)?;
        expect_eq(tail, Some(Denotation::Str(chars.collect())), f)
    }));
    report
}

fn goedel_samples(cfg: &GenConfig) -> Vec<Seeded<ArithExpr>> {
    samples(cfg, |e| match e {
        AnyExpr::Goedel(a) => a,
        _ => unreachable!("goedel generator"),
    })
}

/// The add transformer over numerals with its code-level lifting.
pub fn add_transformer_spec() -> TransformerSpec<'static, ArithExpr> {
    TransformerSpec {
        name: "add".to_string(),
        arity: 2,
        accepts: Box::new(|e: &ArithExpr| e.as_numeral().is_some()),
        transform: Box::new(|args: &[ArithExpr]| {
            goedel::add_transformer(&args[0], &args[1]).expect("numeral sums stay small")
        }),
        lifted: Box::new(|qs: &[ArithExpr]| goedel::add_lifted(&qs[0], &qs[1])),
    }
}

/// Random numeral pairs for the add transformer.
pub fn numeral_pairs(seed: u64, count: usize, max: u64) -> Vec<Vec<ArithExpr>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| vec![goedel::numeral(rng.gen_range(0..=max)), goedel::numeral(rng.gen_range(0..=max))]).collect()
}

/// Smallest positive integer below `bound` that is not a code.
pub fn first_non_code(bound: u64) -> Option<u64> {
    (1..bound).find(|n| goedel::decode(&num_bigint::BigUint::from(*n)).is_none())
}

fn goedel_suite(cfg: &GenConfig) -> CheckReport {
    let meta = GoedelFramework::meta();
    let xs = goedel_samples(cfg);
    let mut report = check_framework_seeded(&meta, &xs, cfg.seed);
    report.properties.push(syntactic_disquotation(&meta, cfg, &xs));
    report.properties.push(property("code_round_trip", cfg, &xs, |_, s| {
        expect_eq(goedel::decode(&goedel::encode(&s.expr)).as_ref(), Some(&s.expr), &s.expr)
    }));
    report.properties.push(property("monotone_size", cfg, &xs, |i, s| {
        let longer = if s.expr.is_term() { ArithExpr::succ(s.expr.clone()) } else { ArithExpr::not(s.expr.clone()) };
        if goedel::encode(&longer) <= goedel::encode(&s.expr) {
            return Err(format!("{longer} does not code above {}", s.expr));
        }
        let other = &xs[(i + 1) % xs.len()].expr;
        let (la, lb) = (goedel::digits(&s.expr).len(), goedel::digits(other).len());
        let (ca, cb) = (goedel::encode(&s.expr), goedel::encode(other));
        if la < lb && ca >= cb || la > lb && ca <= cb {
            return Err(format!("{} and {other} code out of length order", s.expr));
        }
        Ok(())
    }));

    let mut partial = PropertyRecord::new("decode_partiality", cfg.seed);
    let witness = first_non_code(1_000_000);
    let ok = witness.is_some_and(|n| meta.eval_num(&goedel::numeral(n)) == Ok(None));
    partial.record(ok, cfg.seed, || "every natural below 10^6 decodes".to_string());
    report.properties.push(partial);

    let restricted = GoedelFramework::restricted();
    let mut sub = check_framework_seeded(&restricted, &xs, cfg.seed);
    sub.properties.push(syntactic_disquotation(&restricted, cfg, &xs));
    report.absorb("restricted", sub);

    let built_in = GoedelFramework::built_in();
    let quoted: Vec<Seeded<ArithExpr>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = side_rng(cfg.seed, i, 2);
            Seeded { seed: trial_seed(cfg.seed, i), expr: gen::arith(&mut rng, cfg.max_size, true) }
        })
        .collect();
    let mut sub = check_framework_seeded(&built_in, &quoted, cfg.seed);
    let mut eval_partial = PropertyRecord::new("eval_partial", cfg.seed);
    let two = goedel::numeral(2);
    eval_partial.record(built_in.in_syntax(&two) && built_in.evaluation(&two).is_none(), cfg.seed, || {
        "built-in evaluation is defined on numeral 2".to_string()
    });
    sub.properties.push(eval_partial);
    report.absorb("builtin", sub);

    let pairs = numeral_pairs(cfg.seed, cfg.trials, 100);
    let add = check_transformer(&meta, &add_transformer_spec(), &pairs).expect("numeral pairs are valid input");
    report.absorb("", add);
    report
}

fn lisp_samples(cfg: &GenConfig) -> Vec<Seeded<SExpr>> {
    samples(cfg, |e| match e {
        AnyExpr::Minilisp(x) => x,
        _ => unreachable!("minilisp generator"),
    })
}

/// A generated backquote with at least one splice, all of whose splice
/// expressions have values.
pub fn defined_backquote(rng: &mut ChaCha8Rng, max_size: usize) -> Option<SExpr> {
    (0..200).find_map(|_| {
        let b = gen::backquote(rng, max_size);
        let m = minilisp::expand_backquote(&b).ok()?;
        (!m.marks.is_empty() && m.marks.iter().all(|(_, e)| !minilisp::interp(e).is_bottom())).then_some(b)
    })
}

/// `V*(`e) = V(Q̄(m))` for the marked expression of `` `e ``.
pub fn backquote_agrees(inst: &LispFramework, b: &SExpr) -> Result<(), String> {
    let m = minilisp::expand_backquote(b).map_err(|e| e.to_string())?;
    let direct = minilisp::interp_backquote(b);
    let via = match quasi::quasiquote(inst, &m).map_err(|e| e.to_string())? {
        Some(q) => inst.semantic(&q),
        None => LispResult::Bottom,
    };
    expect_eq(via, direct, b)
}

fn minilisp_suite(cfg: &GenConfig) -> CheckReport {
    let inst = LispFramework::default();
    let xs = lisp_samples(cfg);
    let mut report = check_framework_seeded(&inst, &xs, cfg.seed);
    report.properties.push(property("purity", cfg, &xs, |_, s| {
        expect_eq(minilisp::interp(&s.expr), minilisp::interp(&s.expr), &s.expr)
    }));
    let bqs: Vec<Seeded<SExpr>> = (0..cfg.trials as u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = side_rng(cfg.seed, i, 3);
            defined_backquote(&mut rng, cfg.max_size).map(|b| Seeded { seed: trial_seed(cfg.seed, i), expr: b })
        })
        .collect();
    report.properties.push(property("backquote_equivalence", cfg, &bqs, |_, s| backquote_agrees(&inst, &s.expr)));
    report
}

fn lambda_samples(cfg: &GenConfig) -> Vec<Seeded<AlphaTerm>> {
    samples(cfg, |e| match e {
        AnyExpr::Lambda(t) => AlphaTerm(t),
        _ => unreachable!("lambda generator"),
    })
}

/// `nf(E⟨t⟩)` and `nf(t)` are alpha-equal.
pub fn self_interprets(t: &lambda::Term, fuel: u64) -> Result<(), String> {
    let direct = lambda::beta_nf(t, fuel).ok_or_else(|| format!("{t} has no normal form within fuel"))?;
    let via = lambda::run_self_interp(t, fuel).ok_or_else(|| format!("E<{t}> has no normal form within fuel"))?;
    if lambda::alpha_eq(&direct, &via) {
        Ok(())
    } else {
        Err(format!("{t}: {via} is not alpha-equal to {direct}"))
    }
}

fn lambda_suite(cfg: &GenConfig) -> CheckReport {
    let inst = LambdaFramework::default();
    let xs = lambda_samples(cfg);
    let mut report = check_framework_seeded(&inst, &xs, cfg.seed);
    let corpus: Vec<Seeded<AlphaTerm>> = lambda::corpus()
        .into_iter()
        .map(|(_, t)| Seeded { seed: cfg.seed, expr: AlphaTerm(t) })
        .chain(xs.iter().cloned())
        .collect();
    report
        .properties
        .push(property("self_interpretation", cfg, &corpus, |_, s| self_interprets(&s.expr.0, lambda::DEFAULT_FUEL)));
    report.properties.push(property("rep_schema", cfg, &xs, |_, s| {
        let r = lambda::rep(&s.expr.0);
        if !r.is_normal() {
            return Err(format!("rep of {} has a redex", s.expr));
        }
        match lambda::unrep(&r) {
            Some(back) if lambda::alpha_eq(&back, &s.expr.0) => Ok(()),
            _ => Err(format!("rep of {} does not decode back", s.expr)),
        }
    }));
    report
}

fn ring_samples(cfg: &GenConfig) -> Vec<Seeded<RingSyntax>> {
    samples(cfg, |e| match e {
        AnyExpr::Ring(r) => RingSyntax::Expr(r),
        _ => unreachable!("ring generator"),
    })
}

/// Swaps the operands of every sum and product.
pub fn mirror(e: &RingExpr) -> RingExpr {
    match e {
        RingExpr::Add(a, b) => RingExpr::add(mirror(b), mirror(a)),
        RingExpr::Mul(a, b) => RingExpr::mul(mirror(b), mirror(a)),
        RingExpr::Neg(a) => RingExpr::neg(mirror(a)),
        _ => e.clone(),
    }
}

/// Evaluation agrees with the normal form's re-interpretation at
/// `points` random assignments in `[-10, 10]`.
pub fn preserves_semantics(e: &RingExpr, rng: &mut ChaCha8Rng, points: usize) -> Result<(), String> {
    let back = ring::interp_p(&ring::normalize(&ring::pquote(e)).to_poly());
    for _ in 0..points {
        let vals: Vec<i64> = (0..super::RING_VARS).map(|_| rng.gen_range(-10..=10)).collect();
        let phi = ring::assignment(&vals);
        let want = ring::eval_ring(e, &phi).map_err(|err| err.to_string())?;
        let got = ring::eval_ring(&back, &phi).map_err(|err| err.to_string())?;
        if got != want {
            return Err(format!("{e} at {vals:?}: normal form gives {got}, expression gives {want}"));
        }
    }
    Ok(())
}

pub fn normalize_idempotent(e: &RingExpr) -> Result<(), String> {
    let once = ring::normalize(&ring::pquote(e));
    let twice = ring::normalize(&once.to_poly());
    if !once.is_canonical() {
        return Err(format!("{e}: {once} is not canonical"));
    }
    expect_eq(twice, once, e)
}

fn ring_suite(cfg: &GenConfig) -> CheckReport {
    let inst = RingFramework;
    let xs = ring_samples(cfg);
    let mut report = check_framework_seeded(&inst, &xs, cfg.seed);
    report.properties.push(syntactic_disquotation(&inst, cfg, &xs));
    let expr = |s: &Seeded<RingSyntax>| match &s.expr {
        RingSyntax::Expr(e) => e.clone(),
        RingSyntax::Poly(_) => unreachable!("samples are expressions"),
    };
    report.properties.push(property("semantic_preservation", cfg, &xs, |i, s| {
        preserves_semantics(&expr(s), &mut side_rng(cfg.seed, i as u64, 4), 50)
    }));
    report.properties.push(property("normalize_idempotent", cfg, &xs, |_, s| normalize_idempotent(&expr(s))));
    report.properties.push(property("canonical_equality", cfg, &xs, |i, s| {
        let e = expr(s);
        let n = ring::normalize(&ring::pquote(&e));
        expect_eq(ring::normalize(&ring::pquote(&mirror(&e))), n.clone(), &e)?;
        let other = expr(&xs[(i + 1) % xs.len()]);
        let m = ring::normalize(&ring::pquote(&other));
        let agree = grid_agree(&e, &other);
        if agree != (n == m) {
            return Err(format!("{e} and {other}: grid agreement {agree} but normal forms equal {}", n == m));
        }
        Ok(())
    }));
    report
}

/// Whether two expressions agree on the grid `{0..=d}^k`, `d` the larger
/// degree bound and `k` the number of variables.
pub fn grid_agree(a: &RingExpr, b: &RingExpr) -> bool {
    let mut vars = a.variables();
    vars.extend(b.variables());
    vars.sort_unstable();
    vars.dedup();
    let d = a.degree().max(b.degree()) as i64;
    let width = vars.iter().max().map_or(0, |v| *v as usize + 1);
    let mut point = vec![0i64; width];
    loop {
        let agree = {
            let phi = ring::assignment(&point);
            ring::eval_ring(a, &phi) == ring::eval_ring(b, &phi)
        };
        if !agree {
            return false;
        }
        let mut k = 0;
        loop {
            let Some(&v) = vars.get(k) else { return true };
            let slot = &mut point[v as usize];
            if *slot < d {
                *slot += 1;
                break;
            }
            *slot = 0;
            k += 1;
        }
    }
}

/// Delegates to an instance but quotes the first child of every
/// expression with at least three nodes instead of the expression itself.
struct CorruptQuote<'a, F> {
    inner: &'a F,
}

impl<F> SyntaxFramework for CorruptQuote<'_, F>
where
    F: SyntaxFramework,
    F::Expr: Subexpressions,
{
    type Expr = F::Expr;
    type Value = F::Value;

    fn id(&self) -> &str {
        self.inner.id()
    }
    fn features(&self) -> Features {
        self.inner.features()
    }
    fn in_language(&self, e: &F::Expr) -> bool {
        self.inner.in_language(e)
    }
    fn in_object(&self, e: &F::Expr) -> bool {
        self.inner.in_object(e)
    }
    fn in_syntax(&self, e: &F::Expr) -> bool {
        self.inner.in_syntax(e)
    }
    fn semantic(&self, e: &F::Expr) -> F::Value {
        self.inner.semantic(e)
    }
    fn syntactic(&self, e: &F::Expr) -> F::Value {
        self.inner.syntactic(e)
    }
    fn decode(&self, v: &F::Value) -> Option<F::Expr> {
        self.inner.decode(v)
    }
    fn quotation(&self, e: &F::Expr) -> F::Expr {
        match e.children().into_iter().next() {
            Some(c) if size(e) >= 3 && self.inner.in_object(&c) => self.inner.quotation(&c),
            _ => self.inner.quotation(e),
        }
    }
    fn evaluation(&self, e: &F::Expr) -> Option<F::Expr> {
        self.inner.evaluation(e)
    }
}

/// The framework axioms against a deliberately broken quotation, to show
/// the suite catches it.
pub fn mutation_report(cfg: &GenConfig) -> Result<CheckReport, HarnessError> {
    cfg.validate()?;
    if cfg.trials == 0 {
        return Ok(empty_report(cfg.instance));
    }
    let pool = rayon::ThreadPoolBuilder::new().stack_size(SUITE_STACK).build().expect("suite thread pool");
    Ok(pool.install(|| match cfg.instance {
        InstanceId::Prop => {
            check_framework_seeded(&CorruptQuote { inner: &PropFramework::default() }, &prop_samples(cfg), cfg.seed)
        }
        InstanceId::Strlang => {
            check_framework_seeded(&CorruptQuote { inner: &StrFramework }, &strlang_samples(cfg), cfg.seed)
        }
        InstanceId::Goedel => {
            check_framework_seeded(&CorruptQuote { inner: &GoedelFramework::meta() }, &goedel_samples(cfg), cfg.seed)
        }
        InstanceId::Minilisp => {
            check_framework_seeded(&CorruptQuote { inner: &LispFramework::default() }, &lisp_samples(cfg), cfg.seed)
        }
        InstanceId::Lambda => {
            check_framework_seeded(&CorruptQuote { inner: &LambdaFramework::default() }, &lambda_samples(cfg), cfg.seed)
        }
        InstanceId::Ring => {
            check_framework_seeded(&CorruptQuote { inner: &RingFramework }, &ring_samples(cfg), cfg.seed)
        }
    }))
}
