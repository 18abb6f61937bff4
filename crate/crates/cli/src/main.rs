use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Value};

use quosyn::goedel::{self, SYMBOLS};
use quosyn::harness::{mutation_report, run_suite, GenConfig, InstanceId};
use quosyn::lambda;
use quosyn::minilisp::{self, LispFramework, LispResult};
use quosyn::prop::{self, Assignment};
use quosyn::quasi::{quasiquote, splice};
use quosyn::ring;
use quosyn::strlang;
use quosyn::SyntaxFramework;

#[derive(Parser, Debug)]
#[command(name = "quosyn", version, about = "Quotation, evaluation and quasiquotation across small object languages")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the property harness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Step limit for the Lisp and lambda interpreters.
    #[arg(long, global = true)]
    fuel: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the property suite for one instance, or `all`.
    Check(CheckArgs),
    /// Read one S-expression per line and print its value or ⊥.
    Repl,
    /// Propositional formulas.
    #[command(subcommand)]
    Prop(PropCommand),
    /// Formulas quoted as strings.
    #[command(subcommand)]
    Str(StrCommand),
    /// Gödel numbering of arithmetic.
    #[command(subcommand)]
    Goedel(GoedelCommand),
    /// Lambda terms and their self-interpreter.
    #[command(subcommand)]
    Lambda(LambdaCommand),
    /// Commutative ring expressions.
    #[command(subcommand)]
    Ring(RingCommand),
    /// Expand and evaluate a Lisp backquote expression.
    Qq {
        /// A backquote expression, e.g. "`(a ,(+ 1 2))".
        expr: String,
    },
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// prop, strlang, goedel, minilisp, lambda, ring or all.
    instance: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 20)]
    max_size: usize,
    /// Check a deliberately broken quotation instead; failures are expected.
    #[arg(long)]
    mutate: bool,
}

#[derive(Subcommand, Debug)]
enum PropCommand {
    /// Partially evaluate a formula under an assignment.
    Eval {
        formula: String,
        /// Entries like p=T,q=F.
        #[arg(long, default_value = "")]
        assign: String,
    },
}

#[derive(Subcommand, Debug)]
enum StrCommand {
    /// Print the cons chain quoting a formula.
    Quote { formula: String },
    /// Recover the formula a cons term denotes.
    Eval { term: String },
}

#[derive(Subcommand, Debug)]
enum GoedelCommand {
    /// Print the code of an expression.
    Encode { expr: String },
    /// Print the expression with a given code.
    Decode { code: String },
    /// Print the symbol table.
    Table,
}

#[derive(Subcommand, Debug)]
enum LambdaCommand {
    /// Normal form.
    Nf { term: String },
    /// Representation as a normal-form term.
    Rep { term: String },
    /// Normal form computed by the self-interpreter.
    Selfinterp { term: String },
}

#[derive(Subcommand, Debug)]
enum RingCommand {
    /// Print the ordered monomial sum.
    Normalize { expr: String },
}

/// What a command produced: text, its JSON form, and whether it passed.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn value(input: &str, result: String) -> Output {
        Output { json: json!({ "input": input, "result": result }), text: result, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Command::Repl = cli.command {
        return repl(cli.fuel.unwrap_or(minilisp::DEFAULT_FUEL));
    }
    match lambda::on_big_stack(|| run(&cli)) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                println!("{}", out.text.trim_end());
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            eprintln!("usage: quosyn <check|repl|prop|str|goedel|lambda|ring|qq> ...; see quosyn --help");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, String> {
    let fuel = cli.fuel;
    match &cli.command {
        Command::Check(args) => check(args, cli.seed.unwrap_or(0)),
        Command::Repl => unreachable!("handled before dispatch"),
        Command::Prop(PropCommand::Eval { formula, assign }) => {
            let phi: Assignment = assign.parse().map_err(|e| format!("{e}"))?;
            let out = prop::interpret(formula, &phi).map_err(|e| e.to_string())?;
            Ok(Output::value(formula, out))
        }
        Command::Str(StrCommand::Quote { formula }) => {
            let f = prop::parse(formula).map_err(|e| e.to_string())?;
            let t = strlang::quote_str(&f).map_err(|e| e.to_string())?;
            Ok(Output::value(formula, t.to_string()))
        }
        Command::Str(StrCommand::Eval { term }) => {
            let t = strlang::parse_term(term).map_err(|e| e.to_string())?;
            let out = strlang::eval_str(&t).map_err(|e| e.to_string())?;
            Ok(Output::value(term, out.map_or_else(|| "undefined".to_string(), |f| prop::print(&f))))
        }
        Command::Goedel(GoedelCommand::Encode { expr }) => {
            let e = goedel::parse(expr).map_err(|e| e.to_string())?;
            let code = goedel::encode(&e);
            Ok(Output {
                text: code.to_string(),
                json: json!({ "input": expr, "tokens": goedel::token_string(&e), "code": code.to_string() }),
                ok: true,
            })
        }
        Command::Goedel(GoedelCommand::Decode { code }) => {
            let n: BigUint = code.trim().parse().map_err(|_| format!("`{code}` is not a natural number"))?;
            let out = goedel::decode(&n).map_or_else(|| "undefined".to_string(), |e| e.to_string());
            Ok(Output::value(code, out))
        }
        Command::Goedel(GoedelCommand::Table) => {
            let rows: Vec<(usize, char, &str)> =
                SYMBOLS.iter().enumerate().map(|(i, (c, meaning))| (i + 1, *c, *meaning)).collect();
            let text = rows.iter().map(|(d, c, m)| format!("{d:>2}  {c}  {m}\n")).collect();
            let json = rows.iter().map(|(d, c, m)| json!({ "digit": d, "symbol": c, "meaning": m })).collect();
            Ok(Output { text, json: Value::Array(json), ok: true })
        }
        Command::Lambda(cmd) => lambda_command(cmd, fuel.unwrap_or(lambda::DEFAULT_FUEL)),
        Command::Ring(RingCommand::Normalize { expr }) => {
            let e = ring::parse(expr).map_err(|e| e.to_string())?;
            Ok(Output::value(expr, ring::normalize(&ring::pquote(&e)).to_string()))
        }
        Command::Qq { expr } => qq(expr, fuel.unwrap_or(minilisp::DEFAULT_FUEL)),
    }
}

fn lambda_command(cmd: &LambdaCommand, fuel: u64) -> Result<Output, String> {
    let (src, out) = match cmd {
        LambdaCommand::Nf { term } => {
            let t = lambda::parse_term(term).map_err(|e| e.to_string())?;
            (term, lambda::beta_nf(&t, fuel))
        }
        LambdaCommand::Rep { term } => {
            let t = lambda::parse_term(term).map_err(|e| e.to_string())?;
            (term, Some(lambda::rep(&t)))
        }
        LambdaCommand::Selfinterp { term } => {
            let t = lambda::parse_term(term).map_err(|e| e.to_string())?;
            (term, lambda::run_self_interp(&t, fuel))
        }
    };
    Ok(Output::value(src, out.map_or_else(|| "⊥".to_string(), |t| t.to_string())))
}

fn qq(src: &str, fuel: u64) -> Result<Output, String> {
    let e = minilisp::read(src).map_err(|e| e.to_string())?;
    let m = minilisp::expand_backquote(&e).map_err(|e| e.to_string())?;
    let inst = LispFramework { fuel };
    let spliced = splice(&inst, &m).map_err(|e| e.to_string())?;
    let quoted = quasiquote(&inst, &m).map_err(|e| e.to_string())?;
    let value = match &quoted {
        Some(q) => inst.semantic(q),
        None => LispResult::Bottom,
    };
    let show = |x: &Option<minilisp::SExpr>| x.as_ref().map_or_else(|| "⊥".to_string(), ToString::to_string);
    let marks: Vec<Value> =
        m.marks.iter().map(|(p, s)| json!({ "position": p.to_string(), "expr": s.to_string() })).collect();
    Ok(Output {
        text: format!(
            "marked:    {m}\nspliced:   {}\nquoted:    {}\nvalue:     {value}\n",
            show(&spliced),
            show(&quoted)
        ),
        json: json!({
            "input": src,
            "base": m.base.to_string(),
            "marks": marks,
            "spliced": spliced.map(|s| s.to_string()),
            "quoted": quoted.map(|q| q.to_string()),
            "value": value.to_string(),
        }),
        ok: true,
    })
}

fn check(args: &CheckArgs, seed: u64) -> Result<Output, String> {
    let instances: Vec<InstanceId> = if args.instance == "all" {
        InstanceId::ALL.to_vec()
    } else {
        vec![args.instance.parse().map_err(|e| format!("{e}"))?]
    };
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut ok = true;
    for instance in instances {
        let cfg = GenConfig::new(instance).with_trials(args.trials).with_seed(seed).with_max_size(args.max_size);
        let report = if args.mutate { mutation_report(&cfg) } else { run_suite(&cfg) }.map_err(|e| e.to_string())?;
        ok &= report.all_passed();
        text.push_str(&format!("{report}\n"));
        reports.push(serde_json::from_str::<Value>(&report.to_json()).expect("report json"));
    }
    let json = if reports.len() == 1 { reports.pop().expect("one report") } else { Value::Array(reports) };
    Ok(Output { text, json, ok })
}

fn repl(fuel: u64) -> ExitCode {
    let stdin = io::stdin();
    let mut stdout = io::stdout().lock();
    for line in stdin.lock().lines() {
        let Ok(line) = line else { return ExitCode::from(2) };
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let shown = match minilisp::read(line) {
            Ok(e) => lambda::on_big_stack(|| minilisp::interp_with_fuel(&e, fuel)).to_string(),
            Err(e) => format!("error: {e}"),
        };
        if writeln!(stdout, "{shown}").is_err() {
            return ExitCode::from(2);
        }
    }
    ExitCode::SUCCESS
}
