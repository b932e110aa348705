use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use bic_bench::gen::{read_edges, read_queries, sample_queries, vertices_seen, write_queries, StreamGen};
use bic_bench::{run_reader, write_results, EngineKind, RunConfig};
use bic_core::{oracle_all_windows, Origin, WindowSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bic-bench", version, about = "Sliding-window connectivity benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an engine over a stream and report metrics.
    Run(RunArgs),
    /// Write a seeded random edge stream.
    GenStream(GenStreamArgs),
    /// Sample a query workload from the vertices of a stream.
    GenQueries(GenQueriesArgs),
    /// Write ground-truth per-window results by brute force.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OriginArg {
    Zero,
    FirstEdge,
}

impl From<OriginArg> for Origin {
    fn from(o: OriginArg) -> Self {
        match o {
            OriginArg::Zero => Origin::Zero,
            OriginArg::FirstEdge => Origin::FirstEdge,
        }
    }
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long)]
    stream: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    /// Window size, in timestamp units.
    #[arg(long = "window")]
    alpha: u64,
    /// Slide interval, in timestamp units.
    #[arg(long = "slide")]
    beta: u64,
    #[arg(long, value_enum, default_value = "zero")]
    origin: OriginArg,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, value_enum, default_value = "bic")]
    engine: EngineKind,
    /// Metrics JSON; printed to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Per-window results as JSON lines.
    #[arg(long)]
    results: Option<PathBuf>,
}

#[derive(Args)]
struct GenStreamArgs {
    #[arg(long)]
    vertices: u64,
    #[arg(long)]
    edges: u64,
    #[arg(long, default_value_t = 100)]
    edges_per_ts: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stream file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenQueriesArgs {
    #[arg(long)]
    stream: PathBuf,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Query file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long)]
    results: PathBuf,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(f))
}

fn create(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

impl WindowArgs {
    fn spec(&self) -> Result<WindowSpec> {
        Ok(WindowSpec::new(self.alpha, self.beta)?)
    }

    fn workload(&self) -> Result<Vec<(u64, u64)>> {
        read_queries(open(&self.queries)?).with_context(|| format!("reading {}", self.queries.display()))
    }
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = RunConfig {
        spec: args.window.spec()?,
        origin: args.window.origin.into(),
        engine: args.engine,
    };
    let workload = args.window.workload()?;
    let out = run_reader(&cfg, open(&args.window.stream)?, workload)
        .with_context(|| format!("processing {}", args.window.stream.display()))?;
    if let Some(p) = &args.results {
        write_results(&out.results, create(Some(p))?)?;
    }
    let mut w = create(args.output.as_deref())?;
    serde_json::to_writer_pretty(&mut w, &out.metrics)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let spec = args.window.spec()?;
    let workload = args.window.workload()?;
    let edges = read_edges(open(&args.window.stream)?)
        .with_context(|| format!("reading {}", args.window.stream.display()))?;
    if let Some(bad) = edges.windows(2).position(|w| w[1].ts < w[0].ts) {
        anyhow::bail!("edge {} has a decreasing timestamp", bad + 2);
    }
    let origin: Origin = args.window.origin.into();
    if let (Origin::Zero, Some(first)) = (origin, edges.first()) {
        anyhow::ensure!(first.ts >= spec.origin(), "timestamp {} precedes origin", first.ts);
    }
    let results = oracle_all_windows(&edges, &spec, origin, &workload);
    write_results(&results, create(Some(&args.results))?)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => run(a),
        Command::GenStream(a) => {
            let g = StreamGen {
                vertices: a.vertices,
                edges: a.edges,
                edges_per_ts: a.edges_per_ts,
                seed: a.seed,
            };
            anyhow::ensure!(g.vertices > 0 && g.edges_per_ts > 0, "counts must be positive");
            g.write(create(a.output.as_deref())?)?;
            Ok(())
        }
        Command::GenQueries(a) => {
            let edges = read_edges(open(&a.stream)?)
                .with_context(|| format!("reading {}", a.stream.display()))?;
            let qs = sample_queries(&vertices_seen(&edges), a.count, a.seed);
            write_queries(&qs, create(a.output.as_deref())?)?;
            Ok(())
        }
        Command::Oracle(a) => oracle(a),
    }
}
