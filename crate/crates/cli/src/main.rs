//! `qhiggs`: list builtin suites, verify suites, and inspect operators.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qhiggs_core::dsl::{
    builtin_suite, builtin_suites, parse_expr, parse_suite_named, Binder, Expr, Mode, Suite,
};
use qhiggs_core::fock::{
    render_vector, BasisState, Fock, Margin, ModeConfig, Outcome, SparseOperator,
};
use qhiggs_core::scalar::Scalar;
use qhiggs_core::verify::{self, SampleCount, VerifyConfig};

const EXIT_FAIL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "qhiggs", version, about = "Exact verification of q-deformed operator identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List builtin suites with their mode counts and relation counts.
    Suites,
    /// Verify every relation of a suite.
    Verify(VerifyArgs),
    /// Print the column table of a named generator.
    Show(ShowArgs),
    /// Evaluate an expression, optionally on one basis state.
    Eval(EvalArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// `builtin:<name>` or a path to a .qsuite file.
    #[arg(long)]
    suite: String,
    /// Per-mode cutoff; defaults to 4 for suites with 4 or more modes, else 8.
    #[arg(long)]
    cutoff: Option<u32>,
    /// `auto` or a uniform margin, for relations without `@margin`.
    #[arg(long, default_value = "auto", value_parser = parse_margin)]
    margin: Margin,
    /// Mode for relations without `@mode`.
    #[arg(long, default_value = "exact", value_parser = parse_mode)]
    mode: Mode,
    /// `auto` (the degree bound) or a fixed count per relation.
    #[arg(long, default_value = "auto", value_parser = parse_samples)]
    samples: SampleCount,
    /// Seed for sample points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Conjugate all oscillators by a random diagonal with this seed.
    #[arg(long)]
    gauge_seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<String>,
    /// Print nothing on success.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long, default_value_t = 4)]
    modes: usize,
    /// Defaults to 4 for 4 or more modes, else 8.
    #[arg(long)]
    cutoff: Option<u32>,
}

#[derive(Args)]
struct ShowArgs {
    /// A generator name such as `L(1,2)` or `K1`.
    #[arg(long)]
    op: String,
    #[command(flatten)]
    space: SpaceArgs,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    expr: String,
    /// Occupations `n1,n2,...` to apply the operator to.
    #[arg(long)]
    state: Option<String>,
    #[command(flatten)]
    space: SpaceArgs,
}

fn parse_margin(s: &str) -> Result<Margin, String> {
    if s == "auto" {
        return Ok(Margin::Auto);
    }
    s.parse::<u32>()
        .map(Margin::Fixed)
        .map_err(|_| format!("expected `auto` or a nonnegative integer, got `{s}`"))
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn parse_samples(s: &str) -> Result<SampleCount, String> {
    if s == "auto" {
        return Ok(SampleCount::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(SampleCount::Fixed(n)),
        _ => Err(format!("expected `auto` or a positive integer, got `{s}`")),
    }
}

fn default_cutoff(modes: usize) -> u32 {
    if modes >= 4 {
        4
    } else {
        8
    }
}

/// A diagnostic for standard error plus an exit code.
struct Failure(u8, String);

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_USAGE, msg.to_string())
}

fn load_suite(arg: &str) -> Result<Suite, Failure> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin_suite(name).ok_or_else(|| {
            usage(format!("unknown builtin suite `{name}`; see `qhiggs suites`"))
        });
    }
    let path = Path::new(arg);
    let src = fs::read_to_string(path).map_err(|e| usage(format!("{arg}: {e}")))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("suite");
    parse_suite_named(&src, stem).map_err(|e| usage(format!("{arg}: {e}")))
}

fn space(args: &SpaceArgs) -> Result<ModeConfig, Failure> {
    let cutoff = args.cutoff.unwrap_or_else(|| default_cutoff(args.modes));
    ModeConfig::new(args.modes, cutoff).map_err(usage)
}

fn cmd_suites() -> Result<u8, Failure> {
    let suites = builtin_suites();
    let width = suites.iter().map(|s| s.name.len()).max().unwrap_or(0);
    println!("{:<width$}  modes  relations", "suite");
    for s in suites {
        println!("{:<width$}  {:>5}  {:>9}", s.name, s.modes, s.relations.len());
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let suite = load_suite(&args.suite)?;
    let cutoff = args.cutoff.unwrap_or_else(|| default_cutoff(suite.modes));
    let config = ModeConfig::new(suite.modes, cutoff).map_err(usage)?;
    let mut cfg = VerifyConfig::new(cutoff);
    cfg.margin = args.margin;
    cfg.mode = args.mode;
    cfg.samples = args.samples;
    cfg.seed = args.seed;
    cfg.gauge_seed = args.gauge_seed;
    let report = verify::run(&suite, &cfg, config).map_err(usage)?;
    if let Some(path) = &args.report {
        let mut json = report.to_json();
        json.push('\n');
        fs::write(path, json).map_err(|e| usage(format!("{path}: {e}")))?;
    }
    let outcome = report.outcome();
    if !args.quiet || outcome != Outcome::Pass {
        print!("{}", report.to_text());
    }
    Ok(match outcome {
        Outcome::Pass => 0,
        Outcome::Fail => EXIT_FAIL,
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn bind_exact(expr: &Expr, config: ModeConfig) -> Result<SparseOperator<Scalar>, Failure> {
    let fock = Fock::exact(config);
    let mut binder = Binder::new(&fock, None).map_err(usage)?;
    binder.operator(expr).map_err(usage)
}

fn cmd_show(args: ShowArgs) -> Result<u8, Failure> {
    let expr = parse_expr(&args.op).map_err(|e| usage(format!("--op: {e}")))?;
    if !matches!(expr, Expr::Name { .. }) {
        return Err(usage(format!("--op: `{}` is not a generator name", args.op)));
    }
    let config = space(&args.space)?;
    let op = bind_exact(&expr, config)?;
    println!("# {}  modes {}  cutoff {}", args.op, config.modes(), config.cutoff());
    print!("{}", op.render());
    Ok(0)
}

fn cmd_eval(args: EvalArgs) -> Result<u8, Failure> {
    let expr = parse_expr(&args.expr).map_err(|e| usage(format!("--expr: {e}")))?;
    let config = space(&args.space)?;
    let state = match &args.state {
        None => None,
        Some(s) => {
            let occ: Result<Vec<u32>, _> = s.split(',').map(|x| x.trim().parse::<u32>()).collect();
            let occ = occ.map_err(|_| usage(format!("--state: expected `n1,n2,...`, got `{s}`")))?;
            let st = BasisState(occ);
            config.encode(&st).map_err(|e| usage(format!("--state: {e}")))?;
            Some(st)
        }
    };
    let op = bind_exact(&expr, config)?;
    match state {
        Some(st) => {
            let image = op.apply(&st).map_err(usage)?;
            let j = config.encode(&st).map_err(usage)?;
            let mark = if op.is_tainted(j) { "  [tainted]" } else { "" };
            println!("{}{mark}", render_vector(&image));
        }
        None => print!("{}", op.render()),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Suites => cmd_suites(),
        Command::Verify(a) => cmd_verify(a),
        Command::Show(a) => cmd_show(a),
        Command::Eval(a) => cmd_eval(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
