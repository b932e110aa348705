//! Drives an engine over a stream while timing every window evaluation.

use std::io::{BufRead, Write};
use std::time::Instant;

use anyhow::Context;
use bic_core::{
    ingest, ingest_edges, BicEngine, DfsEngine, IngestReport, MemoryCounters, Origin, RwcEngine,
    SlideIndex, SlideSink, StreamError, StreamingEdge, VertexId, WindowEngine, WindowResult,
    WindowSpec,
};

use crate::metrics::{median_memory, Metrics};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EngineKind {
    Bic,
    Rwc,
    Dfs,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Bic => "bic",
            EngineKind::Rwc => "rwc",
            EngineKind::Dfs => "dfs",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub spec: WindowSpec,
    pub origin: Origin,
    pub engine: EngineKind,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub metrics: Metrics,
    pub results: Vec<WindowResult>,
    /// Union-find hops spent in each window's evaluation call.
    pub window_steps: Vec<u64>,
    /// Edges held by the engine when each window was evaluated.
    pub window_edges: Vec<u64>,
    pub report: IngestReport,
}

struct Timed<E> {
    engine: E,
    results: Vec<WindowResult>,
    latencies: Vec<u64>,
    memory: Vec<MemoryCounters>,
    window_steps: Vec<u64>,
    window_edges: Vec<u64>,
}

impl<E: WindowEngine> SlideSink for Timed<E> {
    fn edge(&mut self, edge: StreamingEdge, slide: SlideIndex) {
        self.engine.insert(edge, slide);
    }

    fn slide_closed(&mut self, slide: SlideIndex, end_of_stream: bool) {
        let mem = self.engine.memory();
        let steps = self.engine.steps();
        let start = Instant::now();
        let out = self.engine.end_slide(slide, end_of_stream);
        let elapsed = start.elapsed().as_nanos() as u64;
        if let Some(r) = out {
            self.latencies.push(elapsed);
            self.memory.push(mem);
            self.window_steps.push(self.engine.steps() - steps);
            self.window_edges.push(mem.chunk_edges_stored);
            self.results.push(r);
        }
    }
}

fn drive<E, F>(engine: E, name: &str, feed: F) -> Result<RunOutput, StreamError>
where
    E: WindowEngine,
    F: FnOnce(&mut Timed<E>) -> Result<IngestReport, StreamError>,
{
    let mut sink = Timed {
        engine,
        results: Vec::new(),
        latencies: Vec::new(),
        memory: Vec::new(),
        window_steps: Vec::new(),
        window_edges: Vec::new(),
    };
    let start = Instant::now();
    let report = feed(&mut sink)?;
    let wall = start.elapsed().as_nanos() as u64;
    let metrics = Metrics::new(
        name,
        report.edges,
        wall,
        sink.latencies,
        sink.engine.steps(),
        median_memory(&sink.memory),
    );
    Ok(RunOutput {
        metrics,
        results: sink.results,
        window_steps: sink.window_steps,
        window_edges: sink.window_edges,
        report,
    })
}

fn dispatch<F>(cfg: &RunConfig, workload: Vec<(VertexId, VertexId)>, feed: F) -> Result<RunOutput, StreamError>
where
    F: FeedFn,
{
    let name = cfg.engine.name();
    match cfg.engine {
        EngineKind::Bic => drive(BicEngine::new(&cfg.spec, workload), name, |s| feed.feed(s)),
        EngineKind::Rwc => drive(RwcEngine::new(&cfg.spec, workload), name, |s| feed.feed(s)),
        EngineKind::Dfs => drive(DfsEngine::new(&cfg.spec, workload), name, |s| feed.feed(s)),
    }
}

/// Source of edges usable with any sink type.
trait FeedFn {
    fn feed<S: SlideSink>(self, sink: &mut S) -> Result<IngestReport, StreamError>;
}

struct FromSlice<'a> {
    edges: &'a [StreamingEdge],
    spec: WindowSpec,
    origin: Origin,
}

impl FeedFn for FromSlice<'_> {
    fn feed<S: SlideSink>(self, sink: &mut S) -> Result<IngestReport, StreamError> {
        ingest_edges(self.edges.iter().copied(), self.spec, self.origin, sink)
    }
}

struct FromReader<R> {
    source: R,
    spec: WindowSpec,
    origin: Origin,
}

impl<R: BufRead> FeedFn for FromReader<R> {
    fn feed<S: SlideSink>(self, sink: &mut S) -> Result<IngestReport, StreamError> {
        ingest(self.source, self.spec, self.origin, sink)
    }
}

/// Runs over edges already in memory; wall time excludes parsing.
pub fn run_edges(
    cfg: &RunConfig,
    edges: &[StreamingEdge],
    workload: Vec<(VertexId, VertexId)>,
) -> Result<RunOutput, StreamError> {
    let feed = FromSlice { edges, spec: cfg.spec, origin: cfg.origin };
    dispatch(cfg, workload, feed)
}

/// Runs over a text stream; wall time includes parsing.
pub fn run_reader<R: BufRead>(
    cfg: &RunConfig,
    source: R,
    workload: Vec<(VertexId, VertexId)>,
) -> Result<RunOutput, StreamError> {
    let feed = FromReader { source, spec: cfg.spec, origin: cfg.origin };
    dispatch(cfg, workload, feed)
}

/// One JSON object per line, in window order.
pub fn write_results<W: Write>(results: &[WindowResult], mut out: W) -> anyhow::Result<()> {
    for r in results {
        serde_json::to_writer(&mut out, r).context("serializing window result")?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn results_jsonl(results: &[WindowResult]) -> String {
    let mut buf = Vec::new();
    write_results(results, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("JSON is UTF-8")
}
