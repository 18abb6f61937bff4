//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use quosyn::framework::{check_transformer, props, SyntaxFramework};
use quosyn::goedel::{self, GoedelFramework};
use quosyn::harness::suite::{
    add_transformer_spec, backquote_agrees, defined_backquote, first_non_code, normalize_idempotent, numeral_pairs,
    preserves_semantics, self_interprets, SYNTACTIC_DISQUOTATION,
};
use quosyn::harness::{
    gen, gen_expr, run_suite, trial_seed, AnyExpr, GenConfig, InstanceId, RING_MAX_DEGREE, RING_VARS,
};
use quosyn::lambda;
use quosyn::minilisp::{self, LispFramework, SExpr};
use quosyn::prop::{self, Assignment};
use quosyn::quasi::quasiquote;
use quosyn::strlang::{self, StrTerm};

const SEED: u64 = 20_251_016;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Verdict {
    let mut timings = Vec::new();
    for instance in InstanceId::ALL {
        let cfg = GenConfig::new(instance).with_trials(1000).with_max_size(20).with_seed(SEED);
        let start = Instant::now();
        let report = run_suite(&cfg).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        for name in [props::QUOTATION_AXIOM, props::EVALUATION_AXIOM, props::DISQUOTATION] {
            let rec = report.property(name).ok_or_else(|| format!("{instance}: no {name} property"))?;
            // The evaluation axiom is also checked on samples already in the
            // syntax language, so it may run more than once per sample.
            let enough = if name == props::EVALUATION_AXIOM { rec.trials >= 1000 } else { rec.trials == 1000 };
            ensure(rec.passed() && enough, || {
                format!("{instance}.{name}: {}/{} {:?}", rec.passes, rec.trials, rec.counterexample)
            })?;
        }
        ensure(elapsed < Duration::from_secs(60), || format!("{instance} took {elapsed:?}"))?;
        timings.push(format!("{instance} {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(timings.join(", "))
}

fn criterion_2() -> Verdict {
    let out = prop::interpret("p & true", &Assignment::new()).map_err(|e| e.to_string())?;
    let value = prop::value(&prop::parse("p & true").map_err(|e| e.to_string())?, &Assignment::new());
    ensure(value == prop::Formula::var("p") && out == "p", || format!("prop pipeline gave {value:?} / {out:?}"))?;

    let f = prop::parse("~~~p").map_err(|e| e.to_string())?;
    let q = strlang::quote_str(&f).map_err(|e| e.to_string())?;
    let expected = StrTerm::cons(
        StrTerm::Sym('~'),
        StrTerm::cons(
            StrTerm::Sym('~'),
            StrTerm::cons(StrTerm::Sym('~'), StrTerm::cons(StrTerm::Sym('p'), StrTerm::Nil)),
        ),
    );
    ensure(q == expected, || format!("quotation of ~~~p is {q}"))?;

    let b = minilisp::read("`(+ 2 ,(+ 3 1))").map_err(|e| e.to_string())?;
    let got = minilisp::interp_backquote(&b);
    let want = minilisp::read("(+ 2 4)").map_err(|e| e.to_string())?;
    ensure(got.value() == Some(&want), || format!("backquote gave {got}"))?;

    let five = goedel::add_transformer(&goedel::numeral(2), &goedel::numeral(3)).map_err(|e| e.to_string())?;
    ensure(five == goedel::numeral(5), || format!("add(2, 3) gave {five}"))?;
    Ok(format!("p & true -> {out}; ~~~p -> {q}; {b} -> {got}; add(2, 3) -> {five}"))
}

fn criterion_3() -> Verdict {
    let mut notes = Vec::new();
    for (instance, name) in [
        (InstanceId::Strlang, SYNTACTIC_DISQUOTATION.to_string()),
        (InstanceId::Goedel, SYNTACTIC_DISQUOTATION.to_string()),
        (InstanceId::Goedel, format!("restricted.{SYNTACTIC_DISQUOTATION}")),
        (InstanceId::Prop, SYNTACTIC_DISQUOTATION.to_string()),
        (InstanceId::Ring, SYNTACTIC_DISQUOTATION.to_string()),
    ] {
        let report =
            run_suite(&GenConfig::new(instance).with_trials(1000).with_seed(SEED ^ 3)).map_err(|e| e.to_string())?;
        let rec = report.property(&name).ok_or_else(|| format!("{instance}: no {name}"))?;
        ensure(rec.passed() && rec.trials == 1000, || {
            format!("{instance}.{name}: {}/{} {:?}", rec.passes, rec.trials, rec.counterexample)
        })?;
        notes.push(format!("{instance}.{name} {}/{}", rec.passes, rec.trials));
    }
    Ok(notes.join(", "))
}

fn criterion_4() -> Verdict {
    let meta = GoedelFramework::meta();
    let n = first_non_code(1_000_000).ok_or("every natural below 10^6 decodes")?;
    ensure(goedel::decode(&BigUint::from(n)).is_none(), || format!("{n} decodes"))?;
    let e = meta.eval_num(&goedel::numeral(n)).map_err(|e| e.to_string())?;
    ensure(e.is_none(), || format!("eval_num on numeral {n} is defined"))?;

    let restricted = GoedelFramework::restricted();
    let terms: Vec<(goedel::ArithExpr, goedel::ArithExpr)> = (0..1000)
        .map(|i| {
            let cfg = GenConfig::new(InstanceId::Goedel).with_seed(trial_seed(SEED ^ 4, i));
            let AnyExpr::Goedel(e) = gen_expr(&cfg).expect("config") else { unreachable!() };
            (restricted.quote_num(&e), e)
        })
        .collect();
    for (t, e) in &terms {
        ensure(GoedelFramework::in_restricted_terms(t), || format!("{t} is not a restricted term"))?;
        let back = restricted.evaluation(t);
        ensure(back.as_ref() == Some(e), || format!("evaluation of {t} gave {back:?}"))?;
    }
    Ok(format!("first non-code {n}; restricted evaluation total on {} terms", terms.len()))
}

fn criterion_5() -> Verdict {
    let inst = LispFramework::default();
    let checked = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let cfg = GenConfig::new(InstanceId::Minilisp).with_seed(trial_seed(SEED ^ 5, i));
            let AnyExpr::Minilisp(e) = gen_expr(&cfg).expect("config") else { unreachable!() };
            let via = inst.evaluation(&inst.quotation(&e)).ok_or_else(|| format!("E(Q({e})) undefined"))?;
            ensure(via != e, || format!("E(Q({e})) is {e} itself"))?;
            ensure(via == minilisp::eval_of(&minilisp::quote_of(&e)), || format!("E(Q({e})) is {via}"))?;
            let (a, b) = (minilisp::interp(&via), minilisp::interp(&e));
            ensure(a == b, || format!("{via} gives {a} but {e} gives {b}"))
        })
        .collect::<Result<Vec<()>, String>>()?
        .len();
    Ok(format!("{checked} expressions, all syntactically distinct and value-equal"))
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let mut terms: Vec<lambda::Term> = lambda::corpus().into_iter().map(|(_, t)| t).collect();
    let corpus_len = terms.len();
    terms.extend((0..50).map(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(SEED ^ 6, i));
        gen::lambda_normalizing(&mut rng, 20)
    }));
    terms
        .par_iter()
        .map(|t| lambda::on_big_stack(|| self_interprets(t, 100_000)))
        .collect::<Result<Vec<()>, String>>()?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{corpus_len} corpus + 50 generated terms in {:.1}s", elapsed.as_secs_f64()))
}

fn criterion_7() -> Verdict {
    let inst = LispFramework::default();
    let samples: Vec<SExpr> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(SEED ^ 7, i));
            defined_backquote(&mut rng, 20).ok_or_else(|| format!("no defined backquote for trial {i}"))
        })
        .collect::<Result<_, String>>()?;
    samples.par_iter().map(|b| backquote_agrees(&inst, b)).collect::<Result<Vec<()>, String>>()?;
    let nontrivial =
        samples.iter().filter(|b| minilisp::expand_backquote(b).is_ok_and(|m| !m.marks.is_empty())).count();
    ensure(nontrivial > 0, || "no sample has a splice".to_string())?;
    // One hand-checked case alongside the generated ones.
    let m = minilisp::expand_backquote(&minilisp::read("`(a ,(car '(b c)))").map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let q = quasiquote(&inst, &m).map_err(|e| e.to_string())?;
    ensure(q.as_ref().map(ToString::to_string).as_deref() == Some("(quote (a b))"), || format!("{q:?}"))?;
    Ok(format!("500 backquotes, {nontrivial} with splices"))
}

fn criterion_8() -> Verdict {
    let exprs: Vec<_> = (0..500u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(SEED ^ 8, i));
            gen::ring(&mut rng, 20, RING_VARS, RING_MAX_DEGREE)
        })
        .collect();
    exprs
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            ensure(e.variables().len() <= 4 && e.degree() <= 5, || format!("{e} is out of range"))?;
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(SEED ^ 88, i as u64));
            preserves_semantics(e, &mut rng, 50)?;
            normalize_idempotent(e)
        })
        .collect::<Result<Vec<()>, String>>()?;
    Ok("500 expressions x 50 assignments, idempotent".to_string())
}

fn criterion_9() -> Verdict {
    let pairs = numeral_pairs(SEED ^ 9, 500, 200);
    let report =
        check_transformer(&GoedelFramework::meta(), &add_transformer_spec(), &pairs).map_err(|e| e.to_string())?;
    let rec = report.properties.first().ok_or("empty transformer report")?;
    ensure(rec.passed() && rec.trials == 500, || format!("{}/{} {:?}", rec.passes, rec.trials, rec.counterexample))?;
    Ok(format!("{} {}/{}", rec.name, rec.passes, rec.trials))
}

fn criterion_10() -> Verdict {
    for instance in InstanceId::ALL {
        let cfg = GenConfig::new(instance).with_trials(300).with_seed(SEED ^ 10);
        let a = run_suite(&cfg).map_err(|e| e.to_string())?.to_json();
        let b = run_suite(&cfg).map_err(|e| e.to_string())?.to_json();
        ensure(a == b, || format!("{instance}: reports differ"))?;
    }
    Ok("identical JSON for all six instances".to_string())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("axiom suites", criterion_1),
        ("worked examples", criterion_2),
        ("universal disquotation", criterion_3),
        ("evaluation partiality", criterion_4),
        ("built-in E differs from direct E*", criterion_5),
        ("self-interpretation", criterion_6),
        ("backquote equivalence", criterion_7),
        ("ring semantic preservation", criterion_8),
        ("transformer specification", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
