//! Stream data model: timestamped edges, slide/chunk arithmetic and ingestion.
//!
//! A window is `chunk_size` consecutive slide intervals. Slide `k` holds the
//! timestamps in `[origin + k*beta, origin + (k+1)*beta)`. Chunks partition the
//! slide axis into non-overlapping runs of `chunk_size` slides.

use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u64;
pub type Timestamp = u64;

/// An undirected edge `(u, v)` stamped with its arrival time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamingEdge {
    pub u: VertexId,
    pub v: VertexId,
    pub ts: Timestamp,
}

impl StreamingEdge {
    pub fn new(u: VertexId, v: VertexId, ts: Timestamp) -> Self {
        Self { u, v, ts }
    }
}

/// Global, zero-based slide number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlideIndex(pub u64);

impl fmt::Display for SlideIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Position of a slide inside the chunk grid: `chunk` is 1-based, `offset`
/// lies in `0..chunk_size`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChunkCoord {
    pub chunk: u64,
    pub offset: usize,
}

impl ChunkCoord {
    pub fn to_slide(self, chunk_size: usize) -> SlideIndex {
        SlideIndex((self.chunk - 1) * chunk_size as u64 + self.offset as u64)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("slide interval must be positive")]
    ZeroSlide,
    #[error("window size {alpha} is not a multiple of slide interval {beta}")]
    NotMultiple { alpha: u64, beta: u64 },
    #[error("window size {alpha} with slide {beta} gives {chunk_size} slide(s) per window; at least 2 are required")]
    ChunkTooSmall {
        alpha: u64,
        beta: u64,
        chunk_size: u64,
    },
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("line {line}: timestamp {ts} precedes {bound}")]
    Ordering { line: u64, ts: Timestamp, bound: Timestamp },
    #[error("reading stream: {0}")]
    Io(#[from] std::io::Error),
}

/// Sliding-window geometry: window size `alpha`, slide `beta`, both in time
/// units, with `alpha = chunk_size * beta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    alpha: u64,
    beta: u64,
    chunk_size: usize,
    origin: Timestamp,
}

impl WindowSpec {
    pub fn new(alpha: u64, beta: u64) -> Result<Self, ConfigError> {
        if beta == 0 {
            return Err(ConfigError::ZeroSlide);
        }
        if alpha % beta != 0 {
            return Err(ConfigError::NotMultiple { alpha, beta });
        }
        let chunk_size = alpha / beta;
        if chunk_size < 2 {
            return Err(ConfigError::ChunkTooSmall {
                alpha,
                beta,
                chunk_size,
            });
        }
        Ok(Self {
            alpha,
            beta,
            chunk_size: chunk_size as usize,
            origin: 0,
        })
    }

    pub fn with_origin(mut self, origin: Timestamp) -> Self {
        self.origin = origin;
        self
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    pub fn origin(&self) -> Timestamp {
        self.origin
    }

    /// Slide holding timestamp `ts`; `None` when `ts` precedes the origin.
    pub fn slide_of(&self, ts: Timestamp) -> Option<SlideIndex> {
        ts.checked_sub(self.origin).map(|d| SlideIndex(d / self.beta))
    }

    pub fn chunk_coord(&self, slide: SlideIndex) -> ChunkCoord {
        let c = self.chunk_size as u64;
        ChunkCoord {
            chunk: slide.0 / c + 1,
            offset: (slide.0 % c) as usize,
        }
    }

    /// First slide of the window that ends at `last`, if that window is full.
    pub fn window_ending_at(&self, last: SlideIndex) -> Option<SlideIndex> {
        (last.0 + 1)
            .checked_sub(self.chunk_size as u64)
            .map(SlideIndex)
    }
}

/// Where slide 0 starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Origin {
    /// Slide 0 begins at the configured origin of the WindowSpec (0 unless overridden).
    #[default]
    Zero,
    /// Slide 0 begins at the first edge's timestamp.
    FirstEdge,
}

/// Edges of the currently open chunk, bucketed by slide offset.
#[derive(Clone, Debug, Default)]
pub struct ChunkStore {
    slides: Vec<Vec<(VertexId, VertexId)>>,
    edges: usize,
}

impl ChunkStore {
    pub fn new(chunk_size: usize) -> Self {
        Self {
            slides: vec![Vec::new(); chunk_size],
            edges: 0,
        }
    }

    pub fn chunk_size(&self) -> usize {
        self.slides.len()
    }

    pub fn push(&mut self, offset: usize, u: VertexId, v: VertexId) {
        self.slides[offset].push((u, v));
        self.edges += 1;
    }

    pub fn slide(&self, offset: usize) -> &[(VertexId, VertexId)] {
        &self.slides[offset]
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn clear(&mut self) {
        for s in &mut self.slides {
            s.clear();
        }
        self.edges = 0;
    }
}

/// Outcome of parsing one stream line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Line {
    Edge(StreamingEdge),
    Skip,
}

fn parse_field(tok: Option<&str>, name: &str, line: u64) -> Result<u64, StreamError> {
    let tok = tok.ok_or_else(|| StreamError::Parse {
        line,
        reason: format!("missing field `{name}`"),
    })?;
    tok.parse::<u64>().map_err(|e| StreamError::Parse {
        line,
        reason: format!("field `{name}` = {tok:?}: {e}"),
    })
}

/// Parses `<u> <v> <ts>`; blank and `#` lines are skipped.
pub fn parse_edge(text: &str, line: u64) -> Result<Line, StreamError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(Line::Skip);
    }
    let mut toks = trimmed.split_whitespace();
    let u = parse_field(toks.next(), "u", line)?;
    let v = parse_field(toks.next(), "v", line)?;
    let ts = parse_field(toks.next(), "ts", line)?;
    if let Some(extra) = toks.next() {
        return Err(StreamError::Parse {
            line,
            reason: format!("unexpected trailing token {extra:?}"),
        });
    }
    Ok(Line::Edge(StreamingEdge { u, v, ts }))
}

/// Receiver of ingestion events.
///
/// `slide_closed` is raised for every slide in increasing order, including
/// empty ones, before any edge of a later slide is delivered. The final close
/// at end of stream carries `end_of_stream = true`.
pub trait SlideSink {
    fn edge(&mut self, edge: StreamingEdge, slide: SlideIndex);
    fn slide_closed(&mut self, slide: SlideIndex, end_of_stream: bool);
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub edges: u64,
    pub skipped_lines: u64,
    /// Number of slides closed, i.e. `last_slide + 1` for a non-empty stream.
    pub slides: u64,
    pub origin: Timestamp,
}

/// Push-style slide clock; drives a [`SlideSink`] from edges in arrival order.
pub struct Ingestor<'a, S: SlideSink> {
    spec: WindowSpec,
    origin_mode: Origin,
    sink: &'a mut S,
    resolved: Option<WindowSpec>,
    next_to_close: u64,
    last_ts: Option<Timestamp>,
    report: IngestReport,
}

impl<'a, S: SlideSink> Ingestor<'a, S> {
    pub fn new(spec: WindowSpec, origin_mode: Origin, sink: &'a mut S) -> Self {
        Self {
            spec,
            origin_mode,
            sink,
            resolved: None,
            next_to_close: 0,
            last_ts: None,
            report: IngestReport {
                origin: spec.origin(),
                ..IngestReport::default()
            },
        }
    }

    /// Spec with the origin fixed, once the first edge has been seen.
    pub fn spec(&self) -> Option<&WindowSpec> {
        self.resolved.as_ref()
    }

    /// `line` is only used for diagnostics.
    pub fn push(&mut self, edge: StreamingEdge, line: u64) -> Result<(), StreamError> {
        if let Some(prev) = self.last_ts {
            if edge.ts < prev {
                return Err(StreamError::Ordering {
                    line,
                    ts: edge.ts,
                    bound: prev,
                });
            }
        }
        let spec = *self.resolved.get_or_insert_with(|| match self.origin_mode {
            Origin::Zero => self.spec,
            Origin::FirstEdge => self.spec.with_origin(edge.ts),
        });
        self.report.origin = spec.origin();
        let slide = spec.slide_of(edge.ts).ok_or(StreamError::Ordering {
            line,
            ts: edge.ts,
            bound: spec.origin(),
        })?;
        while self.next_to_close < slide.0 {
            self.sink.slide_closed(SlideIndex(self.next_to_close), false);
            self.next_to_close += 1;
        }
        self.last_ts = Some(edge.ts);
        self.report.edges += 1;
        self.sink.edge(edge, slide);
        Ok(())
    }

    pub fn skip_line(&mut self) {
        self.report.skipped_lines += 1;
    }

    /// Closes every slide up to and including the last edge's slide.
    pub fn finish(mut self) -> IngestReport {
        let mut report = self.report;
        if let (Some(spec), Some(ts)) = (self.resolved, self.last_ts) {
            let last = spec.slide_of(ts).expect("validated on push").0;
            while self.next_to_close <= last {
                let done = self.next_to_close == last;
                self.sink.slide_closed(SlideIndex(self.next_to_close), done);
                self.next_to_close += 1;
            }
            report.slides = last + 1;
        }
        report
    }
}

/// Reads a text edge stream and drives `sink` with edges and slide closes.
pub fn ingest<R: BufRead, S: SlideSink>(
    source: R,
    spec: WindowSpec,
    origin: Origin,
    sink: &mut S,
) -> Result<IngestReport, StreamError> {
    let mut ing = Ingestor::new(spec, origin, sink);
    for (i, text) in source.lines().enumerate() {
        let line = i as u64 + 1;
        match parse_edge(&text?, line)? {
            Line::Edge(e) => ing.push(e, line)?,
            Line::Skip => ing.skip_line(),
        }
    }
    Ok(ing.finish())
}

/// Same as [`ingest`] for edges already in memory.
pub fn ingest_edges<I, S>(
    edges: I,
    spec: WindowSpec,
    origin: Origin,
    sink: &mut S,
) -> Result<IngestReport, StreamError>
where
    I: IntoIterator<Item = StreamingEdge>,
    S: SlideSink,
{
    let mut ing = Ingestor::new(spec, origin, sink);
    for (i, e) in edges.into_iter().enumerate() {
        ing.push(e, i as u64 + 1)?;
    }
    Ok(ing.finish())
}
