//! Command line front end.
//!
//! Exit codes: `solve` uses 0 for a packing and 1 for a hitting set, so
//! scripts can branch on the dichotomy without parsing JSON; every other
//! subcommand uses 0 for success. Errors of any kind exit with 2 and a
//! message on stderr. The `COARSE_EP_LIMITS` environment variable, read as
//! `max_vertices,max_cycles`, overrides the exhaustive baseline's limits.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use coarse_ep::generate::{corpus, disjoint_cycles, grid, random_gnm, subdivision};
use coarse_ep::graph::{parse_edge_list, to_edge_list, Graph};
use coarse_ep::oracle::{enumerate_cycles, max_d_packing, min_ball_hitting, OracleLimits};
use coarse_ep::selftest::{acceptance_scale, par_map, run_suite, SelftestConfig};
use coarse_ep::solver::{solve, verify, Certificate};

#[derive(Parser)]
#[command(
    name = "coarse-ep",
    version,
    about = "Packs far-apart cycles or covers all cycles with few balls, with verified certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the dichotomy: exit 0 with a packing or 1 with a hitting set.
    Solve(SolveArgs),
    /// Re-check a certificate against its graph from first principles.
    Verify(VerifyArgs),
    /// Exhaustive baseline queries for small graphs.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Write a deterministic instance in edge-list format.
    Generate(GenerateArgs),
    /// Run the named property suite, one pass/fail line per property.
    Selftest(SelftestArgs),
    /// Solve a generated corpus and emit one CSV row per instance.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file in edge-list format; `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
    /// How many far-apart cycles to look for.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    /// Required pairwise distance between packed cycles (strict).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    /// Where to write the certificate JSON; standard output by default.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file in edge-list format; `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
    /// Certificate JSON produced by `solve`.
    #[arg(long)]
    certificate: PathBuf,
    /// Expected pair count; defaults to the certificate's own.
    #[arg(long)]
    k: Option<usize>,
    /// Expected gap; defaults to the certificate's own.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Maximum number of cycles pairwise more than d apart.
    MaxPacking {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Minimum vertices whose radius-r balls leave the graph cycle-free.
    MinHitting {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        radius: usize,
    },
    /// List every simple cycle, one canonical sequence per line.
    Cycles {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Grid,
    RandomGnm,
    DisjointCycles,
    Subdivision,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator family.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Comma-separated parameters: grid rows,cols; random-gnm n,m;
    /// disjoint-cycles count,len,gap; subdivision n,m,t.
    #[arg(long)]
    params: String,
    /// PRNG seed for the random families (ChaCha8).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the edge list; standard output by default.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run at full acceptance scale instead of the quick default.
    #[arg(long)]
    full: bool,
    /// Corpus seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Number of corpus instances to solve.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Corpus seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Where to write the CSV; standard output by default.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Solve(args) => run_solve(args),
        Command::Verify(args) => run_verify(args),
        Command::Oracle(cmd) => run_oracle(cmd),
        Command::Generate(args) => run_generate(args),
        Command::Selftest(args) => run_selftest(args),
        Command::Bench(args) => run_bench(args),
    }
}

fn read_graph(path: &PathBuf) -> Result<Graph, String> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading standard input: {e}"))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?
    };
    parse_edge_list(&text).map_err(|e| format!("parsing {}: {e}", path.display()))
}

fn write_out(target: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match target {
        Some(path) => fs::write(path, content).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Baseline limits, optionally overridden by `COARSE_EP_LIMITS`.
fn limits_from_env() -> Result<OracleLimits, String> {
    let Ok(raw) = std::env::var("COARSE_EP_LIMITS") else {
        return Ok(OracleLimits::default());
    };
    let parts: Vec<&str> = raw.split(',').collect();
    let [vertices, cycles] = parts.as_slice() else {
        return Err(format!("COARSE_EP_LIMITS must be `max_vertices,max_cycles`, got `{raw}`"));
    };
    let max_vertices = vertices
        .trim()
        .parse()
        .map_err(|e| format!("COARSE_EP_LIMITS vertices: {e}"))?;
    let max_cycles = cycles
        .trim()
        .parse()
        .map_err(|e| format!("COARSE_EP_LIMITS cycles: {e}"))?;
    Ok(OracleLimits { max_vertices, max_cycles })
}

fn run_solve(args: SolveArgs) -> Result<ExitCode, String> {
    let g = read_graph(&args.input)?;
    let cert = solve(&g, args.k as usize, args.d as usize).map_err(|e| e.to_string())?;
    let mut text = serde_json::to_string_pretty(&cert).map_err(|e| e.to_string())?;
    text.push('\n');
    write_out(&args.output, &text)?;
    match cert {
        Certificate::Packing { ref cycles, .. } => {
            eprintln!("packing: {} cycles pairwise more than {} apart", cycles.len(), args.d);
            Ok(ExitCode::SUCCESS)
        }
        Certificate::Hitting { ref x, radius, .. } => {
            eprintln!("hitting: {} centers at radius {radius}", x.len());
            Ok(ExitCode::from(1))
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let g = read_graph(&args.input)?;
    let text = fs::read_to_string(&args.certificate)
        .map_err(|e| format!("reading {}: {e}", args.certificate.display()))?;
    let cert: Certificate = serde_json::from_str(&text)
        .map_err(|e| format!("parsing {}: {e}", args.certificate.display()))?;
    let (cert_k, cert_d) = match &cert {
        Certificate::Packing { k, d, .. } | Certificate::Hitting { k, d, .. } => (*k, *d),
    };
    let k = args.k.unwrap_or(cert_k);
    let d = args.d.unwrap_or(cert_d);
    verify(&g, &cert, k, d)?;
    println!("certificate is valid for k = {k}, d = {d}");
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(cmd: OracleCommand) -> Result<ExitCode, String> {
    let limits = limits_from_env()?;
    match cmd {
        OracleCommand::MaxPacking { graph, d } => {
            let g = read_graph(&graph)?;
            let best = max_d_packing(&g, d, &limits).map_err(|e| e.to_string())?;
            println!("{best}");
        }
        OracleCommand::MinHitting { graph, radius } => {
            let g = read_graph(&graph)?;
            let best = min_ball_hitting(&g, radius, &limits).map_err(|e| e.to_string())?;
            println!("{best}");
        }
        OracleCommand::Cycles { graph } => {
            let g = read_graph(&graph)?;
            for c in enumerate_cycles(&g, &limits).map_err(|e| e.to_string())? {
                let text: Vec<String> = c.vertices().iter().map(usize::to_string).collect();
                println!("{}", text.join(" "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_params(raw: &str, arity: usize, shape: &str) -> Result<Vec<usize>, String> {
    let values: Result<Vec<usize>, _> = raw.split(',').map(|p| p.trim().parse()).collect();
    let values = values.map_err(|e| format!("params `{raw}`: {e}"))?;
    if values.len() != arity {
        return Err(format!("expected {arity} parameters ({shape}), got {}", values.len()));
    }
    Ok(values)
}

fn run_generate(args: GenerateArgs) -> Result<ExitCode, String> {
    let g = match args.kind {
        Kind::Grid => {
            let p = parse_params(&args.params, 2, "rows,cols")?;
            grid(p[0], p[1]).map_err(|e| e.to_string())?
        }
        Kind::RandomGnm => {
            let p = parse_params(&args.params, 2, "n,m")?;
            random_gnm(p[0], p[1], args.seed).map_err(|e| e.to_string())?
        }
        Kind::DisjointCycles => {
            let p = parse_params(&args.params, 3, "count,len,gap")?;
            disjoint_cycles(p[0], p[1], p[2]).map_err(|e| e.to_string())?
        }
        Kind::Subdivision => {
            let p = parse_params(&args.params, 3, "n,m,t")?;
            subdivision(p[0], p[1], p[2], args.seed).map_err(|e| e.to_string())?
        }
    };
    write_out(&args.output, &to_edge_list(&g))?;
    Ok(ExitCode::SUCCESS)
}

fn run_selftest(args: SelftestArgs) -> Result<ExitCode, String> {
    let mut config = if args.full { acceptance_scale() } else { SelftestConfig::default() };
    config.seed = args.seed;
    if let Some(workers) = args.workers {
        config.workers = workers.max(1);
    }
    config.limits = limits_from_env()?;
    let reports = run_suite(&config);
    let mut all_ok = true;
    for report in &reports {
        match &report.outcome {
            Ok(detail) => println!("PASS {}: {detail}", report.name),
            Err(reason) => {
                all_ok = false;
                println!("FAIL {}: {reason}", report.name);
            }
        }
    }
    println!(
        "{} of {} properties passed",
        reports.iter().filter(|r| r.passed()).count(),
        reports.len()
    );
    if all_ok {
        Ok(ExitCode::SUCCESS)
    } else {
        Err("self-test failed".into())
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn run_bench(args: BenchArgs) -> Result<ExitCode, String> {
    let instances = corpus(args.count, args.seed);
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .max(1);
    // Each worker owns its instances; rows are merged by corpus index.
    let rows: Vec<Result<String, String>> = par_map(instances.len(), workers, |i| {
        let inst = &instances[i];
        let started = Instant::now();
        let cert = solve(&inst.graph, inst.k, inst.d).map_err(|e| format!("{}: {e}", inst.name))?;
        let elapsed = started.elapsed().as_millis();
        let (outcome, x_size) = match &cert {
            Certificate::Packing { .. } => ("packing", String::new()),
            Certificate::Hitting { x, .. } => ("hitting", x.len().to_string()),
        };
        Ok(format!(
            "{},{},{},{},{},{},{},{}",
            csv_escape(&inst.name),
            inst.graph.n(),
            inst.graph.m(),
            inst.k,
            inst.d,
            outcome,
            x_size,
            elapsed
        ))
    });
    let mut out = String::from("instance,n,m,k,d,outcome,|X|,runtime_ms\n");
    for row in rows {
        out.push_str(&row?);
        out.push('\n');
    }
    write_out(&args.output, &out)?;
    Ok(ExitCode::SUCCESS)
}
