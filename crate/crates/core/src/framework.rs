//! The syntax framework abstraction.
//!
//! An instance bundles an interpreted language `(L, D_sem, V_sem)`, an
//! object language `L_obj ⊆ L` with a syntax representation
//! `(D_syn, V_syn)`, a syntax language `L_syn ⊆ L`, a quotation function
//! `Q: L_obj → L_syn` and a possibly partial evaluation function
//! `E: L_syn → L_obj`.
//!
//! `D_syn ⊆ D_sem`, so both valuations share the instance's `Value` type.
//! The free functions in this module are the checked entry points: they
//! enforce membership before calling into the instance and report
//! contract violations as [`FrameworkError`]. Undefined evaluation is an
//! absent result, never an error.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quasi::{size, Subexpressions};

/// Static facts an instance declares about itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Features {
    /// `Q(e)` is the syntactic result of applying a `quote` operator of `L`.
    pub built_in_quotation: bool,
    /// `E(e)` is the syntactic result of applying an `eval` operator of `L`.
    pub built_in_evaluation: bool,
    /// `L_obj = L` and both operators are built in.
    pub replete: bool,
    /// `V_syn` is onto `D_syn`, so direct evaluation is total on `L_syn`.
    pub syn_surjective: bool,
    /// `E` is claimed total on `L_syn`.
    pub eval_total: bool,
}

/// A syntax framework over an interpreted language.
///
/// The raw methods assume their membership preconditions; callers outside
/// the instance go through [`sem_value`], [`quote`], [`eval`] and friends.
pub trait SyntaxFramework: Sync {
    type Expr: Clone + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync;
    type Value: Clone + Eq + Hash + fmt::Debug + Send + Sync;

    fn id(&self) -> &str;
    fn features(&self) -> Features;

    /// Membership in the full language `L`.
    fn in_language(&self, e: &Self::Expr) -> bool;
    /// Membership in `L_obj`.
    fn in_object(&self, e: &Self::Expr) -> bool;
    /// Membership in `L_syn`.
    fn in_syntax(&self, e: &Self::Expr) -> bool;

    /// `V_sem`, total on `L`.
    fn semantic(&self, e: &Self::Expr) -> Self::Value;
    /// `V_syn`, total and injective on `L_obj`.
    fn syntactic(&self, e: &Self::Expr) -> Self::Value;
    /// `V_syn⁻¹`: absent exactly when `v` is outside the image of `L_obj`.
    fn decode(&self, v: &Self::Value) -> Option<Self::Expr>;

    /// `Q`.
    fn quotation(&self, e: &Self::Expr) -> Self::Expr;
    /// `E`.
    fn evaluation(&self, e: &Self::Expr) -> Option<Self::Expr>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("{instance}: `{expr}` is not in the full language")]
    NotInLanguage { instance: String, expr: String },
    #[error("{instance}: `{expr}` is not in the object language")]
    NotInObject { instance: String, expr: String },
    #[error("{instance}: `{expr}` is not in the syntax language")]
    NotInSyntax { instance: String, expr: String },
    #[error("transformer expects {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("`{expr}` is outside the transformer's input language")]
    OutsideInput { expr: String },
}

fn not_in_language<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> FrameworkError {
    FrameworkError::NotInLanguage { instance: inst.id().to_string(), expr: e.to_string() }
}

fn require_object<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> Result<(), FrameworkError> {
    if inst.in_object(e) {
        Ok(())
    } else {
        Err(FrameworkError::NotInObject { instance: inst.id().to_string(), expr: e.to_string() })
    }
}

fn require_syntax<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> Result<(), FrameworkError> {
    if inst.in_syntax(e) {
        Ok(())
    } else {
        Err(FrameworkError::NotInSyntax { instance: inst.id().to_string(), expr: e.to_string() })
    }
}

pub fn sem_value<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> Result<F::Value, FrameworkError> {
    if !inst.in_language(e) {
        return Err(not_in_language(inst, e));
    }
    Ok(inst.semantic(e))
}

pub fn syn_value<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> Result<F::Value, FrameworkError> {
    require_object(inst, e)?;
    Ok(inst.syntactic(e))
}

pub fn quote<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> Result<F::Expr, FrameworkError> {
    require_object(inst, e)?;
    Ok(inst.quotation(e))
}

pub fn eval<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> Result<Option<F::Expr>, FrameworkError> {
    require_syntax(inst, e)?;
    Ok(inst.evaluation(e))
}

/// `E*(e) = V_syn⁻¹(V_sem(e))`.
pub fn direct_eval<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> Result<Option<F::Expr>, FrameworkError> {
    require_syntax(inst, e)?;
    Ok(inst.decode(&inst.semantic(e)))
}

pub type Transform<'a, E> = Box<dyn Fn(&[E]) -> E + Send + Sync + 'a>;
pub type Lifted<'a, E> = Box<dyn Fn(&[E]) -> Option<E> + Send + Sync + 'a>;

/// An n-ary transformer `T` over `L_obj` together with its lifted operator
/// `e_T` over `L_syn`.
pub struct TransformerSpec<'a, E> {
    pub name: String,
    pub arity: usize,
    /// Input sublanguage of `T`.
    pub accepts: Box<dyn Fn(&E) -> bool + Send + Sync + 'a>,
    pub transform: Transform<'a, E>,
    /// `e_T`; absent when its arguments are outside the lifted domain.
    pub lifted: Lifted<'a, E>,
}

/// One property's tally inside a [`CheckReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub name: String,
    pub trials: u64,
    pub passes: u64,
    pub counterexample: Option<String>,
    pub seed: u64,
}

impl PropertyRecord {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        PropertyRecord { name: name.into(), trials: 0, passes: 0, counterexample: None, seed }
    }

    /// Records one trial. The first failure fixes the counterexample and
    /// its seed.
    pub fn record(&mut self, ok: bool, seed: u64, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if ok {
            self.passes += 1;
        } else if self.counterexample.is_none() {
            self.counterexample = Some(witness());
            self.seed = seed;
        }
    }

    pub fn passed(&self) -> bool {
        self.passes == self.trials
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub instance: String,
    pub properties: Vec<PropertyRecord>,
}

impl CheckReport {
    pub fn new(instance: impl Into<String>) -> Self {
        CheckReport { instance: instance.into(), properties: Vec::new() }
    }

    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyRecord::passed)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyRecord> {
        self.properties.iter().find(|p| p.name == name)
    }

    /// Appends `other`'s properties, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut p in other.properties {
            if !prefix.is_empty() {
                p.name = format!("{prefix}.{}", p.name);
            }
            self.properties.push(p);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instance {}", self.instance)?;
        for p in &self.properties {
            let mark = if p.passed() { "ok  " } else { "FAIL" };
            write!(f, "  {mark} {:<40} {}/{}", p.name, p.passes, p.trials)?;
            if let Some(cx) = &p.counterexample {
                write!(f, "  seed={} counterexample: {cx}", p.seed)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Property names emitted by [`check_framework`].
pub mod props {
    pub const QUOTATION_AXIOM: &str = "quotation_axiom";
    pub const EVALUATION_AXIOM: &str = "evaluation_axiom";
    pub const DISQUOTATION: &str = "disquotation";
    pub const DIRECT_AGREEMENT: &str = "direct_eval_agreement";
    pub const QUOTE_INJECTIVE: &str = "quotation_injective";
    pub const SYN_INJECTIVE: &str = "syn_value_injective";
    pub const BUILT_IN_SEPARATION: &str = "built_in_separation";
    pub const SURJECTIVE_TOTALITY: &str = "direct_eval_total";
    pub const EVAL_TOTAL: &str = "evaluation_total";
}

/// Per-sample verdicts; `None` means the property did not apply.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SampleOutcome {
    pub quotation: Option<bool>,
    /// (checks run, checks passed) over `Q(e)` and, when `e ∈ L_syn`, `e`.
    pub evaluation: (u8, u8),
    pub disquotation: Option<bool>,
    pub direct: (u8, u8),
    pub separation: Option<bool>,
    pub surjective: (u8, u8),
    pub eval_total: (u8, u8),
}

impl SampleOutcome {
    pub fn fails(&self, property: &str) -> bool {
        let pair_fails = |(run, ok): (u8, u8)| ok < run;
        match property {
            props::QUOTATION_AXIOM => self.quotation == Some(false),
            props::EVALUATION_AXIOM => pair_fails(self.evaluation),
            props::DISQUOTATION => self.disquotation == Some(false),
            props::DIRECT_AGREEMENT => pair_fails(self.direct),
            props::BUILT_IN_SEPARATION => self.separation == Some(false),
            props::SURJECTIVE_TOTALITY => pair_fails(self.surjective),
            props::EVAL_TOTAL => pair_fails(self.eval_total),
            _ => false,
        }
    }
}

fn tally(pair: &mut (u8, u8), ok: bool) {
    pair.0 += 1;
    if ok {
        pair.1 += 1;
    }
}

/// Checks the Evaluation Axiom, agreement with direct evaluation and the
/// totality claims on one syntax-language expression.
fn check_syntax_expr<F: SyntaxFramework>(
    inst: &F,
    s: &F::Expr,
    value_of_s: &F::Value,
    out: &mut SampleOutcome,
) -> Option<F::Value> {
    let feats = inst.features();
    let evaluated = inst.evaluation(s);
    let direct = inst.decode(value_of_s);
    if feats.syn_surjective {
        tally(&mut out.surjective, direct.is_some());
    }
    if feats.eval_total {
        tally(&mut out.eval_total, evaluated.is_some());
    }
    let evaluated = evaluated?;
    let in_obj = inst.in_object(&evaluated);
    let v_eval = inst.semantic(&evaluated);
    let v_direct = direct.as_ref().map(|d| inst.semantic(d));
    tally(&mut out.evaluation, in_obj && v_direct.as_ref() == Some(&v_eval));
    if let Some(vd) = &v_direct {
        tally(&mut out.direct, *vd == v_eval);
    }
    Some(v_eval)
}

/// Runs every per-sample property on one object-language expression.
pub fn sample_outcome<F: SyntaxFramework>(inst: &F, e: &F::Expr) -> SampleOutcome {
    let mut out = SampleOutcome::default();
    if !inst.in_object(e) {
        out.quotation = Some(false);
        return out;
    }
    let q = inst.quotation(e);
    let vq = inst.semantic(&q);
    let in_syn = inst.in_syntax(&q);
    out.quotation = Some(in_syn && vq == inst.syntactic(e));
    if !in_syn {
        return out;
    }
    let v_e = inst.semantic(e);
    if let Some(v_eq) = check_syntax_expr(inst, &q, &vq, &mut out) {
        out.disquotation = Some(v_eq == v_e);
    }
    if inst.in_syntax(e) {
        check_syntax_expr(inst, e, &v_e, &mut out);
    }
    let feats = inst.features();
    if feats.built_in_quotation && feats.built_in_evaluation {
        if let Some(eq) = inst.evaluation(&q) {
            out.separation = Some(eq != *e && inst.semantic(&eq) == v_e);
        }
    }
    out
}

/// A sample tagged with the seed that generated it.
#[derive(Debug, Clone)]
pub struct Seeded<E> {
    pub seed: u64,
    pub expr: E,
}

/// Shrinks a counterexample for `property` before it is reported.
fn shrink_witness<F>(inst: &F, e: &F::Expr, property: &str) -> String
where
    F: SyntaxFramework,
    F::Expr: Subexpressions,
{
    let small = crate::harness::minimize(inst, e, |c| sample_outcome(inst, c).fails(property));
    if size(&small) < size(e) {
        format!("{small} (shrunk from {e})")
    } else {
        e.to_string()
    }
}

/// The axiom suite over seeded samples. Failures are recorded, not thrown.
pub fn check_framework_seeded<F>(inst: &F, samples: &[Seeded<F::Expr>], seed: u64) -> CheckReport
where
    F: SyntaxFramework,
    F::Expr: Subexpressions,
{
    let feats = inst.features();
    let outcomes: Vec<SampleOutcome> = samples.par_iter().map(|s| sample_outcome(inst, &s.expr)).collect();

    let mut quotation = PropertyRecord::new(props::QUOTATION_AXIOM, seed);
    let mut evaluation = PropertyRecord::new(props::EVALUATION_AXIOM, seed);
    let mut disquotation = PropertyRecord::new(props::DISQUOTATION, seed);
    let mut direct = PropertyRecord::new(props::DIRECT_AGREEMENT, seed);
    let mut separation = PropertyRecord::new(props::BUILT_IN_SEPARATION, seed);
    let mut surjective = PropertyRecord::new(props::SURJECTIVE_TOTALITY, seed);
    let mut total = PropertyRecord::new(props::EVAL_TOTAL, seed);

    let pairs = |rec: &mut PropertyRecord, (run, ok): (u8, u8), s: &Seeded<F::Expr>| {
        let name = rec.name.clone();
        for i in 0..run {
            rec.record(i < ok, s.seed, || shrink_witness(inst, &s.expr, &name));
        }
    };
    for (s, o) in samples.iter().zip(&outcomes) {
        if let Some(ok) = o.quotation {
            quotation.record(ok, s.seed, || shrink_witness(inst, &s.expr, props::QUOTATION_AXIOM));
        }
        pairs(&mut evaluation, o.evaluation, s);
        if let Some(ok) = o.disquotation {
            disquotation.record(ok, s.seed, || shrink_witness(inst, &s.expr, props::DISQUOTATION));
        }
        pairs(&mut direct, o.direct, s);
        if let Some(ok) = o.separation {
            separation.record(ok, s.seed, || shrink_witness(inst, &s.expr, props::BUILT_IN_SEPARATION));
        }
        pairs(&mut surjective, o.surjective, s);
        pairs(&mut total, o.eval_total, s);
    }

    let (quote_inj, syn_inj) = check_injectivity(inst, samples, seed);

    let mut report = CheckReport::new(inst.id());
    report.properties.extend([quotation, evaluation, disquotation, direct, quote_inj, syn_inj]);
    if feats.built_in_quotation && feats.built_in_evaluation {
        report.properties.push(separation);
    }
    if feats.syn_surjective {
        report.properties.push(surjective);
    }
    if feats.eval_total {
        report.properties.push(total);
    }
    report
}

/// Pairwise injectivity of `Q` and `V_syn` over the sample set. Each sample
/// is one trial; it fails when it collides with a distinct earlier sample.
fn check_injectivity<F: SyntaxFramework>(
    inst: &F,
    samples: &[Seeded<F::Expr>],
    seed: u64,
) -> (PropertyRecord, PropertyRecord) {
    let mut quote_inj = PropertyRecord::new(props::QUOTE_INJECTIVE, seed);
    let mut syn_inj = PropertyRecord::new(props::SYN_INJECTIVE, seed);
    let images: Vec<Option<(F::Expr, F::Value)>> = samples
        .par_iter()
        .map(|s| inst.in_object(&s.expr).then(|| (inst.quotation(&s.expr), inst.syntactic(&s.expr))))
        .collect();
    let mut seen_q: HashMap<&F::Expr, &F::Expr> = HashMap::new();
    let mut seen_v: HashMap<&F::Value, &F::Expr> = HashMap::new();
    for (s, img) in samples.iter().zip(&images) {
        let Some((q, v)) = img else { continue };
        let clash = |prev: Option<&&F::Expr>| prev.is_some_and(|p| **p != s.expr);
        let q_clash = clash(seen_q.get(q));
        quote_inj.record(!q_clash, s.seed, || format!("{} and {} share a quotation", seen_q[q], s.expr));
        let v_clash = clash(seen_v.get(v));
        syn_inj.record(!v_clash, s.seed, || format!("{} and {} share a syntactic value", seen_v[v], s.expr));
        seen_q.entry(q).or_insert(&s.expr);
        seen_v.entry(v).or_insert(&s.expr);
    }
    (quote_inj, syn_inj)
}

/// [`check_framework_seeded`] over unseeded samples; each sample's seed is
/// its index.
pub fn check_framework<F>(inst: &F, samples: &[F::Expr]) -> CheckReport
where
    F: SyntaxFramework,
    F::Expr: Subexpressions,
{
    let seeded: Vec<_> = samples.iter().enumerate().map(|(i, e)| Seeded { seed: i as u64, expr: e.clone() }).collect();
    check_framework_seeded(inst, &seeded, 0)
}

pub const TRANSFORMER_SPEC: &str = "transformer_specification";

/// Checks `V(e_T(Q(e₁),…,Q(eₙ))) = V(Q(T(e₁,…,eₙ)))` on every tuple.
pub fn check_transformer<F: SyntaxFramework>(
    inst: &F,
    spec: &TransformerSpec<'_, F::Expr>,
    samples: &[Vec<F::Expr>],
) -> Result<CheckReport, FrameworkError> {
    for tuple in samples {
        if tuple.len() != spec.arity {
            return Err(FrameworkError::Arity { expected: spec.arity, got: tuple.len() });
        }
        if let Some(bad) = tuple.iter().find(|e| !(spec.accepts)(e) || !inst.in_object(e)) {
            return Err(FrameworkError::OutsideInput { expr: bad.to_string() });
        }
    }
    let verdicts: Vec<bool> = samples
        .par_iter()
        .map(|tuple| {
            let quoted: Vec<F::Expr> = tuple.iter().map(|e| inst.quotation(e)).collect();
            let image = (spec.transform)(tuple);
            if !inst.in_object(&image) {
                return false;
            }
            let expected = inst.semantic(&inst.quotation(&image));
            match (spec.lifted)(&quoted) {
                Some(lifted) => inst.in_syntax(&lifted) && inst.semantic(&lifted) == expected,
                None => false,
            }
        })
        .collect();
    let mut rec = PropertyRecord::new(format!("{}.{TRANSFORMER_SPEC}", spec.name), 0);
    for (i, (tuple, ok)) in samples.iter().zip(verdicts).enumerate() {
        rec.record(ok, i as u64, || {
            let args: Vec<String> = tuple.iter().map(ToString::to_string).collect();
            format!("({})", args.join(", "))
        });
    }
    let mut report = CheckReport::new(inst.id());
    report.properties.push(rec);
    Ok(report)
}
