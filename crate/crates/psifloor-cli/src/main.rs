use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use psifloor::arith::{IntSeq, Rational, SeqBase};
use psifloor::diagram::{enumerate_diagrams, enumerate_diagrams_relative};

use psifloor_cli::runner::{Engine, Method, Request};
use psifloor_cli::{cache, trace, verify};

/// Sequences are comma-separated entry lists. `k` is indexed from 0
/// (Psi-power multiplicities), `alpha` and `beta` from 1 (tangency orders
/// with the fixed line). The empty string is the zero sequence. Omitting
/// `--beta` requests the absolute invariant, computed through its
/// specialization `alpha = ()`, `beta = (d)`.
#[derive(Parser)]
#[command(name = "psifloor", version, about = "Exact rational plane descendant invariants, by floor-diagram enumeration and by recursion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a single invariant
    Compute(ComputeArgs),
    /// Tabulate the point-condition counts N_d for d = 1..max-d
    Table(TableArgs),
    /// Run the worked-example fixture suite
    Verify(VerifyArgs),
    /// Compute one key along both paths and compare them
    Crosscheck(KeyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Floor,
    Recursion,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Args)]
struct KeyArgs {
    /// Curve degree (>= 1)
    #[arg(long)]
    d: u32,
    /// Psi-power multiplicities, indexed from 0 (e.g. "1,0,0,0,2")
    #[arg(long)]
    k: String,
    /// Fixed tangency multiplicities, indexed from 1 (default: none)
    #[arg(long)]
    alpha: Option<String>,
    /// Free tangency multiplicities, indexed from 1 (default: absolute
    /// invariant via beta = (d))
    #[arg(long)]
    beta: Option<String>,
    /// Worker threads for the enumeration path
    #[arg(long, default_value_t = 1)]
    parallelism: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Result cache path (overridden by PSIFLOOR_CACHE)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    key: KeyArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Recursion)]
    method: MethodArg,
    /// Print the marked-point variant (tilde) instead of N
    #[arg(long)]
    tilde: bool,
    /// Emit per-diagram evaluation records (enumeration methods only)
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=8))]
    max_d: u32,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Result cache path (overridden by PSIFLOOR_CACHE)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only run fixtures whose name contains this substring
    #[arg(long, default_value = "")]
    filter: String,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Compute(args) => cmd_compute(args),
        Command::Table(args) => cmd_table(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Crosscheck(args) => cmd_crosscheck(args),
    }
    .unwrap_or_else(|failure| failure)
}

/// Domain/parse problems exit 2; verification/crosscheck failures exit 1.
type CmdResult = Result<ExitCode, ExitCode>;

fn domain_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_seq(text: Option<&str>, base: SeqBase) -> Result<Option<IntSeq>, ExitCode> {
    match text {
        None => Ok(None),
        Some(t) => IntSeq::parse(t, base).map(Some).map_err(domain_error),
    }
}

fn resolve(args: &KeyArgs) -> Result<Request, ExitCode> {
    let k = IntSeq::parse(&args.k, SeqBase::Zero).map_err(domain_error)?;
    let alpha = parse_seq(args.alpha.as_deref(), SeqBase::One)?;
    let beta = parse_seq(args.beta.as_deref(), SeqBase::One)?;
    Request::resolve(args.d, k, alpha, beta).map_err(domain_error)
}

fn cache_path(args: &KeyArgs) -> Option<PathBuf> {
    std::env::var_os("PSIFLOOR_CACHE").map(PathBuf::from).or_else(|| args.cache.clone())
}

fn load_cache(engine: &mut Engine, path: &Option<PathBuf>) -> Result<(), ExitCode> {
    if let Some(p) = path {
        if p.exists() {
            cache::load(engine, p).map_err(domain_error)?;
        }
    }
    Ok(())
}

fn save_cache(engine: &Engine, path: &Option<PathBuf>) -> Result<(), ExitCode> {
    if let Some(p) = path {
        cache::save(engine, p).map_err(domain_error)?;
    }
    Ok(())
}

fn seq_json(s: &IntSeq) -> serde_json::Value {
    json!(s.entries())
}

fn result_json(req: &Request, n: &Rational, method: &str) -> serde_json::Value {
    json!({
        "d": req.key.degree,
        "k": seq_json(&req.key.psi),
        "alpha": seq_json(&req.key.alpha),
        "beta": seq_json(&req.key.beta),
        "absolute": req.absolute,
        "N": n.to_string(),
        "tilde": req.tilde(n).to_string(),
        "method": method,
    })
}

fn emit_traces(req: &Request) -> Result<(), ExitCode> {
    let key = &req.key;
    if req.absolute {
        let diagrams = enumerate_diagrams(key.degree, &key.psi).map_err(domain_error)?;
        for d in &diagrams {
            println!("{}", trace::absolute_trace_json(d));
        }
    } else {
        let diagrams = enumerate_diagrams_relative(key.degree, &key.psi, key.beta.size())
            .map_err(domain_error)?;
        for d in &diagrams {
            for record in trace::relative_trace_json(d, &key.alpha, &key.beta) {
                println!("{record}");
            }
        }
    }
    Ok(())
}

fn cmd_compute(args: ComputeArgs) -> CmdResult {
    let req = resolve(&args.key)?;
    let path = cache_path(&args.key);
    let mut engine = Engine::new();
    load_cache(&mut engine, &path)?;
    let method = match args.method {
        MethodArg::Floor => Method::Floor,
        MethodArg::Recursion => Method::Recursion,
        MethodArg::Both => Method::Both,
    };
    if args.trace && method != Method::Recursion {
        emit_traces(&req)?;
    }
    if method == Method::Both {
        let (floor, recursion) =
            engine.crosscheck(&req, args.key.parallelism).map_err(domain_error)?;
        save_cache(&engine, &path)?;
        let pass = floor == recursion;
        report_crosscheck(&req, &floor, &recursion, args.key.format);
        return if pass { Ok(ExitCode::SUCCESS) } else { Err(ExitCode::from(1)) };
    }
    let computation = engine.compute(&req, method, args.key.parallelism).map_err(domain_error)?;
    save_cache(&engine, &path)?;
    let shown = if args.tilde { req.tilde(&computation.value_n) } else { computation.value_n.clone() };
    match args.key.format {
        Format::Plain => println!("{shown}"),
        Format::Json => println!(
            "{}",
            result_json(&req, &computation.value_n, &computation.method.to_string())
        ),
        Format::Csv => {
            println!("d,k,alpha,beta,N,tilde,method");
            println!(
                "{},\"{}\",\"{}\",\"{}\",{},{},{}",
                req.key.degree,
                req.key.psi,
                req.key.alpha,
                req.key.beta,
                computation.value_n,
                req.tilde(&computation.value_n),
                computation.method
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_crosscheck(req: &Request, floor: &Rational, recursion: &Rational, format: Format) {
    let pass = floor == recursion;
    match format {
        Format::Json => println!(
            "{}",
            json!({
                "d": req.key.degree,
                "k": seq_json(&req.key.psi),
                "alpha": seq_json(&req.key.alpha),
                "beta": seq_json(&req.key.beta),
                "floor": floor.to_string(),
                "recursion": recursion.to_string(),
                "pass": pass,
            })
        ),
        _ => {
            println!("enumeration: {floor}");
            println!("recursion:   {recursion}");
            println!("{}", if pass { "PASS" } else { "FAIL" });
        }
    }
}

fn cmd_crosscheck(args: KeyArgs) -> CmdResult {
    let req = resolve(&args)?;
    let path = cache_path(&args);
    let mut engine = Engine::new();
    load_cache(&mut engine, &path)?;
    let (floor, recursion) = engine.crosscheck(&req, args.parallelism).map_err(domain_error)?;
    save_cache(&engine, &path)?;
    report_crosscheck(&req, &floor, &recursion, args.format);
    if floor == recursion {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(ExitCode::from(1))
    }
}

fn cmd_table(args: TableArgs) -> CmdResult {
    let path = std::env::var_os("PSIFLOOR_CACHE")
        .map(PathBuf::from)
        .or_else(|| args.cache.clone());
    let mut engine = Engine::new();
    load_cache(&mut engine, &path)?;
    let mut rows = Vec::new();
    for d in 1..=args.max_d {
        let k = IntSeq::new(SeqBase::Zero, &[3 * d as u64 - 1]);
        let req = Request::resolve(d, k.clone(), None, None).map_err(domain_error)?;
        let c = engine.compute(&req, Method::Recursion, 1).map_err(domain_error)?;
        rows.push((d, k, c.value_n));
    }
    save_cache(&engine, &path)?;
    match args.format {
        Format::Plain => {
            for (d, k, n) in &rows {
                println!("d={d} k={k} N={n}");
            }
        }
        Format::Csv => {
            println!("d,k,N");
            for (d, k, n) in &rows {
                println!("{d},\"{k}\",{n}");
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(d, k, n)| json!({"d": d, "k": seq_json(k), "N": n.to_string()}))
                .collect();
            println!("{}", json!(items));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let (results, all_pass) = verify::run(&args.filter);
    if results.is_empty() {
        eprintln!("warning: no fixtures match filter {:?}; vacuous pass", args.filter);
        return Ok(ExitCode::SUCCESS);
    }
    for f in &results {
        match &f.outcome {
            Ok(detail) => println!("PASS {}: {detail}", f.name),
            Err(detail) => println!("FAIL {}: {detail}", f.name),
        }
    }
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(ExitCode::from(1))
    }
}
