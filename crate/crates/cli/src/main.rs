mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use reflectice::identities::{canonical_order, catalogue, suite};
use reflectice::symfunc::{o_lambda, sp_lambda};
use reflectice::{lattice, Budget, Kind, Mutation, Partition, Sign};
use serde_json::{json, Value};

use config::{int_list, IntList, load_params, param_point, required_scalar, spectral_list, sym_params, CliError, CliResult};

const SCHEMA: &str = "1";

#[derive(Parser)]
#[command(name = "reflectice", version, about = "Exact computations and identity checks for reflecting-boundary free-fermionic six-vertex models")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Wavefunction at the given particle positions.
    ComputeWavefunction(PointArgs),
    /// Dual wavefunction at the given hole positions.
    ComputeDual(PointArgs),
    /// Domain-wall boundary partition function (N = M).
    ComputeDwbp(PointArgs),
    /// Generalized symplectic Schur function.
    ComputeSp(SymArgs),
    /// Generalized Whittaker function.
    ComputeWhittaker(SymArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// List identity ids with descriptions.
    ListIdentities,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    #[value(name = "I", alias = "1")]
    I,
    #[value(name = "II", alias = "2")]
    II,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::I => Kind::I,
            KindArg::II => Kind::II,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, value_enum, default_value = "I")]
    kind: KindArg,
    /// Number of sites.
    #[arg(long = "M")]
    m: usize,
    /// Number of particles; defaults to the length of --positions.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Comma-separated increasing positions in 1..=M.
    #[arg(long, value_parser = int_list)]
    positions: Option<IntList>,
    /// JSON file or inline JSON object with t/z (type I) or u/w (type II), alpha, gamma.
    #[arg(long)]
    params: Option<String>,
}

#[derive(Args)]
struct SymArgs {
    /// Comma-separated weakly decreasing parts.
    #[arg(long, value_parser = int_list)]
    lambda: IntList,
    /// Number of variables; defaults to the length of --lambda.
    #[arg(long = "N")]
    n: Option<usize>,
    /// JSON with z (and u for Whittaker functions), alpha, gamma.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, env = "REFLECTICE_SEED")]
    seed: u64,
    #[arg(long = "max-M", default_value_t = Budget::default().max_m)]
    max_m: usize,
    #[arg(long = "max-N", default_value_t = Budget::default().max_n)]
    max_n: usize,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Corrupt one local weight, e.g. l-gamma:2:3 (1-based row and column).
    #[arg(long)]
    mutate: Option<String>,
}

fn value_json(v: &reflectice::Scalar) -> Value {
    Value::String(v.to_string())
}

fn compute_point(which: &str, args: &PointArgs) -> CliResult<Value> {
    let kind = Kind::from(args.kind);
    let params = load_params(args.params.as_deref())?;
    let point = param_point(&params, kind, args.m)?;
    let positions = match which {
        "compute-dwbp" => (1..=args.m).collect(),
        _ => args.positions.clone().map(|p| p.0).ok_or_else(|| CliError::Config("--positions is required".into()))?,
    };
    let n = args.n.unwrap_or(positions.len());
    if n != positions.len() {
        return Err(CliError::Precondition(format!("N = {n} but {} positions given", positions.len())));
    }
    if point.n != n {
        return Err(CliError::Precondition(format!("N = {n} but {} spectral parameters given", point.n)));
    }
    let value = match which {
        "compute-wavefunction" => lattice::wavefunction(kind, &point, &positions)?,
        "compute-dual" => lattice::dual_wavefunction(kind, &point, &positions)?,
        _ => lattice::dwbp(kind, &point)?,
    };
    let key = if which == "compute-dual" { "holes" } else { "positions" };
    Ok(json!({
        "schema": SCHEMA,
        "command": which,
        "kind": kind,
        "M": args.m,
        "N": n,
        key: positions,
        "params": point,
        "value": value_json(&value),
    }))
}

fn compute_sym(which: &str, args: &SymArgs) -> CliResult<Value> {
    let lambda = Partition::new(args.lambda.0.clone())?;
    let params = load_params(args.params.as_deref())?;
    let zs = spectral_list(&params, "z")?;
    let n = args.n.unwrap_or(lambda.len());
    let lambda = if lambda.len() < n {
        let mut parts = lambda.parts().to_vec();
        parts.resize(n, 0);
        Partition::new(parts)?
    } else {
        lambda
    };
    if lambda.len() != n || zs.len() != n {
        return Err(CliError::Precondition(format!(
            "N = {n} needs {n} parts and {n} values of z, got {} and {}",
            lambda.len(),
            zs.len()
        )));
    }
    let mut out = json!({
        "schema": SCHEMA,
        "command": which,
        "N": n,
        "lambda": lambda,
        "z": zs,
    });
    let value = if which == "compute-sp" {
        let p = sym_params(&params, 0, &lambda)?;
        let v = sp_lambda(&zs, &p, &lambda)?;
        out["alpha"] = json!(p.alpha);
        out["gamma"] = json!(p.gamma);
        v
    } else {
        let u = required_scalar(&params, "u")?;
        let sign = match args.sign {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        };
        let p = sym_params(&params, 1, &lambda)?;
        let v = o_lambda(&zs, &u, &p, &lambda, sign)?;
        out["u"] = json!(u);
        out["sign"] = json!(match args.sign {
            SignArg::Plus => "plus",
            SignArg::Minus => "minus",
        });
        out["alpha"] = json!(p.alpha);
        out["gamma"] = json!(p.gamma);
        v
    };
    out["value"] = value_json(&value);
    Ok(out)
}

fn verify(args: &VerifyArgs) -> CliResult<(Value, bool)> {
    let mutation = match &args.mutate {
        Some(s) => Some(s.parse::<Mutation>().map_err(|_| CliError::Config(format!("invalid mutation {s:?}")))?),
        None => None,
    };
    if args.max_m == 0 || args.max_n == 0 {
        return Err(CliError::Precondition("budget must allow at least one site and one particle".into()));
    }
    if args.max_m > lattice::MAX_SITES {
        return Err(CliError::Precondition(format!("max-M is limited to {}", lattice::MAX_SITES)));
    }
    let budget = Budget { max_m: args.max_m, max_n: args.max_n };
    let tasks = suite(args.seed, budget, mutation);
    let run = || tasks.par_iter().flat_map_iter(|t| t.run()).collect::<Vec<_>>();
    let reports = match args.jobs {
        Some(0) => return Err(CliError::Precondition("--jobs must be positive".into())),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::Precondition(e.to_string()))?
            .install(run),
        None => run(),
    };
    let reports = canonical_order(reports);
    let passed = reports.iter().all(|r| r.all_passed);
    let out = json!({
        "schema": SCHEMA,
        "command": "verify",
        "seed": args.seed,
        "budget": budget,
        "mutation": mutation.map(|m| m.to_string()),
        "all_passed": passed,
        "reports": reports,
    });
    Ok((out, passed))
}

fn list_identities() -> Value {
    let ids: Vec<Value> = catalogue().into_iter().map(|(id, d)| json!({ "id": id, "description": d })).collect();
    json!({ "schema": SCHEMA, "command": "list-identities", "identities": ids })
}

fn emit(value: &Value, output: Option<&str>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Config(format!("cannot write {path}: {e}"))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Config(format!("cannot write output: {e}"))),
    }
}

fn run(cli: &Cli) -> CliResult<bool> {
    let (value, ok) = match &cli.command {
        Command::ComputeWavefunction(a) => (compute_point("compute-wavefunction", a)?, true),
        Command::ComputeDual(a) => (compute_point("compute-dual", a)?, true),
        Command::ComputeDwbp(a) => (compute_point("compute-dwbp", a)?, true),
        Command::ComputeSp(a) => (compute_sym("compute-sp", a)?, true),
        Command::ComputeWhittaker(a) => (compute_sym("compute-whittaker", a)?, true),
        Command::Verify(a) => verify(a)?,
        Command::ListIdentities => (list_identities(), true),
    };
    emit(&value, cli.output.as_deref())?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
