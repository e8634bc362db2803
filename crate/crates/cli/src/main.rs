use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use critedge::corpus::{parse_graph6, stream_graph6, write_graph6};
use critedge::families::{basic, book, snk, snk_clique_size, theta, turan, BasicKind};
use critedge::patterns::{booksize, find};
use critedge::search::hill_climb;
use critedge::spectral::{spectral_radius, DEFAULT_TOL};
use critedge::verify::{
    run_target, Source, Target, TargetArgs, Verdict, VerificationReport, VerifyOptions,
    TOOL_VERSION,
};
use critedge::{Error, Graph, PatternSpec};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

/// Spectral Turán-type toolkit: spectral radius, books and theta graphs,
/// exhaustive verification and heuristic search.
#[derive(Parser)]
#[command(name = "critedge", version)]
struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified spectral radius of each input graph.
    Rho {
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// graph6 string, or `-` to read lines from standard input.
        input: String,
    },
    /// Largest book of each input graph.
    Booksize { input: String },
    /// Whether each input graph contains a pattern.
    Contains {
        #[arg(long)]
        pattern: PatternSpec,
        input: String,
    },
    /// Writes named graphs as graph6 lines.
    Gen(GenArgs),
    /// Runs a verification target and prints its report.
    Verify(VerifyArgs),
    /// Hill-climbs towards large spectral radius among pattern-free graphs.
    Search(SearchArgs),
    /// Decodes a graph6 corpus, re-encoding the valid records.
    Convert {
        /// Only report per-line diagnostics.
        #[arg(long)]
        check: bool,
        file: String,
    },
    /// Merges shard reports of one scan into a single report.
    Merge {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GenArgs {
    /// Turán graph T(N,K).
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    turan: Option<Vec<usize>>,
    /// Book B_Q.
    #[arg(long, value_name = "Q")]
    book: Option<usize>,
    /// Theta graph with path lengths L1,L2,L3.
    #[arg(long, value_delimiter = ',', value_name = "L1,L2,L3")]
    theta: Option<Vec<usize>>,
    /// S(N,k) with the default clique size.
    #[arg(long, value_name = "N")]
    snk: Option<usize>,
    /// Cycle C_T.
    #[arg(long, value_name = "T")]
    cycle: Option<usize>,
    /// Path on K vertices.
    #[arg(long, value_name = "K")]
    path: Option<usize>,
}

#[derive(Args)]
struct OutputArgs {
    /// Also write the JSON document to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write a one-row CSV summary to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    target: Target,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    divisor: Option<f64>,
    #[arg(long)]
    pattern: Option<PatternSpec>,
    #[arg(long)]
    x_max: Option<usize>,
    #[arg(long)]
    y_max: Option<usize>,
    /// Assert ρ(S(n,k)) > n/2 (snk target; default from order 62).
    #[arg(long)]
    assert_rho: Option<bool>,
    /// Scan a graph6 file (or `-`) instead of enumerating.
    #[arg(long)]
    stream: Option<String>,
    #[arg(long, default_value_t = 1)]
    shards: u64,
    #[arg(long, default_value_t = 0)]
    shard: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Run every graph through the full check.
    #[arg(long)]
    no_prefilter: bool,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    pattern: PatternSpec,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    restarts: usize,
    #[arg(long)]
    seed: u64,
    /// Move evaluations allowed per restart.
    #[arg(long)]
    budget: Option<u64>,
    /// Also write the JSON document to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::OrderCap(_) | Error::IterationCap(_)) => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("thread pool")?;
    }
    match cli.command {
        Command::Rho { tol, input } => per_graph("rho", json!({ "tol": tol }), &input, |g| {
            let rho = spectral_radius(g, tol)?;
            Ok(json!({
                "n": g.order(),
                "e": g.edge_count(),
                "rho": { "value": rho.value, "lower": rho.lower, "upper": rho.upper },
            }))
        }),
        Command::Booksize { input } => per_graph("booksize", json!({}), &input, |g| {
            Ok(json!({ "booksize": booksize(g) }))
        }),
        Command::Contains { pattern, input } => {
            let pattern = pattern.validate()?;
            let params = json!({ "pattern": pattern.to_string() });
            per_graph("contains", params, &input, |g| {
                let w = find(g, pattern);
                let mut doc = json!({ "pattern": pattern.to_string(), "contains": w.is_some() });
                if let Some(w) = w {
                    doc["witness"] = json!({ "vertices": w.vertices, "edges": w.edges });
                }
                Ok(doc)
            })
        }
        Command::Gen(args) => {
            let g = generate(&args)?;
            println!("{}", write_graph6(&g));
            Ok(0)
        }
        Command::Verify(args) => verify(args),
        Command::Search(args) => search(args),
        Command::Convert { check, file } => convert(check, &file),
        Command::Merge { reports, out } => {
            let mut merged: Option<VerificationReport> = None;
            for path in &reports {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let r = VerificationReport::from_json(&text)
                    .with_context(|| format!("parsing {}", path.display()))?;
                merged = Some(match merged {
                    None => r,
                    Some(m) => m.merge(&r)?,
                });
            }
            let report = merged.expect("at least one report");
            emit_report(&report, &out)?;
            Ok(exit_for(&report))
        }
    }
}

/// Reads the graphs named by `input`: one graph6 string, or standard input.
fn read_inputs(input: &str) -> anyhow::Result<Vec<Graph>> {
    if input != "-" {
        return Ok(vec![parse_graph6(input.trim().as_bytes())?]);
    }
    let mut graphs = Vec::new();
    for (i, line) in io::stdin().lock().lines().enumerate() {
        let line = line.context("reading standard input")?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let g = parse_graph6(line.as_bytes()).with_context(|| format!("line {}", i + 1))?;
        graphs.push(g);
    }
    Ok(graphs)
}

/// Prints one enveloped JSON document per input graph.
fn per_graph(
    target: &str,
    params: Value,
    input: &str,
    f: impl Fn(&Graph) -> critedge::Result<Value>,
) -> anyhow::Result<u8> {
    let graphs = read_inputs(input)?;
    let mut out = io::stdout().lock();
    for g in &graphs {
        let start = Instant::now();
        let body = f(g)?;
        let mut doc = envelope(target, params.clone());
        doc.insert("g6".into(), write_graph6(g).into());
        if let Value::Object(fields) = body {
            doc.extend(fields);
        }
        doc.insert("elapsed".into(), start.elapsed().as_secs_f64().into());
        writeln!(out, "{}", Value::Object(doc))?;
    }
    Ok(0)
}

fn envelope(target: &str, params: Value) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("tool_version".into(), TOOL_VERSION.into());
    doc.insert("target".into(), target.into());
    doc.insert("params".into(), params);
    doc
}

fn generate(args: &GenArgs) -> anyhow::Result<Graph> {
    let g = if let Some(nk) = &args.turan {
        turan(nk[0], nk[1])?
    } else if let Some(q) = args.book {
        book(q)?
    } else if let Some(ls) = &args.theta {
        if ls.len() != 3 {
            bail!(Error::InvalidArgument("--theta takes three lengths".into()));
        }
        theta(ls)?
    } else if let Some(n) = args.snk {
        snk(n, snk_clique_size(n))?
    } else if let Some(t) = args.cycle {
        basic(BasicKind::Cycle, t)?
    } else if let Some(k) = args.path {
        basic(BasicKind::Path, k)?
    } else {
        unreachable!("clap requires one generator")
    };
    Ok(g)
}

fn verify(args: VerifyArgs) -> anyhow::Result<u8> {
    let opts = VerifyOptions {
        tol: args.tol,
        source: match args.stream {
            Some(path) => Source::Stream(path),
            None => Source::Enumerate,
        },
        shards: args.shards,
        shard: args.shard,
        prefilter: !args.no_prefilter,
    };
    let targs = TargetArgs {
        n: args.n,
        r: args.r,
        k: args.k,
        divisor: args.divisor,
        pattern: args.pattern,
        x_max: args.x_max,
        y_max: args.y_max,
        assert_rho: args.assert_rho,
    };
    let report = run_target(args.target, &targs, &opts)?;
    emit_report(&report, &args.out)?;
    Ok(exit_for(&report))
}

fn emit_report(report: &VerificationReport, out: &OutputArgs) -> anyhow::Result<()> {
    let text = report.to_json();
    println!("{text}");
    if let Some(path) = &out.json {
        fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &out.csv {
        let file = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
        report.write_csv(file)?;
    }
    Ok(())
}

fn exit_for(report: &VerificationReport) -> u8 {
    match report.verdict {
        Verdict::Violated if !report.report_only() => EXIT_VIOLATION,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
        _ => 0,
    }
}

fn search(args: SearchArgs) -> anyhow::Result<u8> {
    let start = Instant::now();
    let result = hill_climb(args.n, args.pattern, args.restarts, args.seed, args.budget)?;
    let params = json!({
        "n": args.n,
        "pattern": args.pattern.to_string(),
        "restarts": args.restarts,
        "seed": args.seed,
        "budget": args.budget,
    });
    let mut doc = envelope("search", params);
    if let Value::Object(fields) = serde_json::to_value(&result)? {
        doc.extend(fields);
    }
    doc.insert("elapsed".into(), start.elapsed().as_secs_f64().into());
    let text = Value::Object(doc).to_string();
    println!("{text}");
    if let Some(path) = &args.json {
        fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if result.budget_exhausted {
        EXIT_RESOURCE
    } else {
        0
    })
}

fn convert(check: bool, file: &str) -> anyhow::Result<u8> {
    let start = Instant::now();
    let mut stream = stream_graph6(file)?;
    let mut out = io::stdout().lock();
    let mut valid = 0u64;
    for rec in stream.by_ref() {
        let rec = rec?;
        valid += 1;
        if !check {
            writeln!(out, "{}", write_graph6(&rec.graph))?;
        }
    }
    let diags: Vec<String> = stream
        .take_diagnostics()
        .iter()
        .map(|d| d.to_string())
        .collect();
    if check {
        for d in &diags {
            writeln!(out, "{d}")?;
        }
        let mut doc = envelope("convert", json!({ "file": file }));
        doc.insert("valid".into(), valid.into());
        doc.insert("malformed".into(), diags.len().into());
        doc.insert("elapsed".into(), start.elapsed().as_secs_f64().into());
        writeln!(out, "{}", Value::Object(doc))?;
    } else {
        for d in &diags {
            eprintln!("{d}");
        }
    }
    Ok(if diags.is_empty() { 0 } else { EXIT_USAGE })
}
