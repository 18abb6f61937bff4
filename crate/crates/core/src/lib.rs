//! Syntax frameworks: quotation, evaluation and quasiquotation across six
//! small object languages, with a seeded property harness.

pub mod framework;
pub mod goedel;
pub mod harness;
pub mod lambda;
pub mod minilisp;
pub mod prop;
pub mod quasi;
pub mod ring;
pub mod strlang;

pub use framework::{
    check_framework, check_framework_seeded, check_transformer, direct_eval, eval, quote, sem_value, syn_value,
    CheckReport, Features, FrameworkError, PropertyRecord, Seeded, SyntaxFramework, TransformerSpec,
};
pub use harness::{gen_expr, minimize, mutation_report, run_suite, trial_seed, GenConfig, HarnessError, InstanceId};
pub use quasi::{quasiquote, splice, MarkedExpr, Position, QuasiError, Subexpressions};
