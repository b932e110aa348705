//! Recompute-per-window (RWC) and per-query DFS engines, plus the brute-force
//! oracle over a fully materialized stream.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::engine::{MemoryCounters, WindowEngine, WindowResult};
use crate::stream::{Origin, SlideIndex, StreamingEdge, VertexId, WindowSpec};
use crate::union_find::UnionFind;

/// Answers every query with a union-find built from scratch over `edges`.
pub fn rwc_evaluate_window<'a, I>(
    edges: I,
    workload: &[(VertexId, VertexId)],
    start: SlideIndex,
) -> WindowResult
where
    I: IntoIterator<Item = &'a (VertexId, VertexId)>,
{
    let mut uf = UnionFind::new();
    rwc_answer(&mut uf, edges, workload, start)
}

fn rwc_answer<'a, I>(
    uf: &mut UnionFind,
    edges: I,
    workload: &[(VertexId, VertexId)],
    start: SlideIndex,
) -> WindowResult
where
    I: IntoIterator<Item = &'a (VertexId, VertexId)>,
{
    uf.clear();
    for &(u, v) in edges {
        uf.union(u, v);
    }
    WindowResult {
        window_start_slide: start,
        results: workload.iter().map(|&(u, v)| uf.same_set(u, v)).collect(),
    }
}

/// Undirected adjacency lists.
pub type Adjacency = FxHashMap<VertexId, Vec<VertexId>>;

pub fn adjacency<'a, I>(edges: I) -> Adjacency
where
    I: IntoIterator<Item = &'a (VertexId, VertexId)>,
{
    let mut adj = Adjacency::default();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        if u != v {
            adj.entry(v).or_default().push(u);
        }
    }
    adj
}

/// Iterative DFS from `u`; `true` iff `v` is reached. A vertex with no
/// incident edge is connected to nothing, itself included.
pub fn dfs_query(adj: &Adjacency, u: VertexId, v: VertexId) -> bool {
    if !adj.contains_key(&u) || !adj.contains_key(&v) {
        return false;
    }
    if u == v {
        return true;
    }
    let mut seen = FxHashSet::default();
    let mut stack = vec![u];
    seen.insert(u);
    while let Some(x) = stack.pop() {
        for &y in &adj[&x] {
            if y == v {
                return true;
            }
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    false
}

/// Per-slide edge lists of the last `chunk_size` slides.
#[derive(Clone, Debug)]
struct SlideRing {
    chunk_size: usize,
    slides: VecDeque<Vec<(VertexId, VertexId)>>,
    edges: usize,
}

impl SlideRing {
    fn new(chunk_size: usize) -> Self {
        Self {
            chunk_size,
            slides: VecDeque::from(vec![Vec::new()]),
            edges: 0,
        }
    }

    fn push(&mut self, u: VertexId, v: VertexId) {
        self.slides.back_mut().expect("ring is never empty").push((u, v));
        self.edges += 1;
    }

    /// Window start if the slide just ended completes a full window.
    fn window_start(&self, slide: SlideIndex) -> Option<SlideIndex> {
        (slide.0 + 1).checked_sub(self.chunk_size as u64).map(SlideIndex)
    }

    fn edges(&self) -> impl Iterator<Item = &(VertexId, VertexId)> + '_ {
        self.slides.iter().flatten()
    }

    /// Opens the next slide, evicting the oldest once the ring is full.
    fn advance(&mut self) {
        if self.slides.len() == self.chunk_size {
            let mut old = self.slides.pop_front().expect("ring is never empty");
            self.edges -= old.len();
            old.clear();
            self.slides.push_back(old);
        } else {
            self.slides.push_back(Vec::new());
        }
    }
}

/// Rebuilds a union-find over the whole window at every window end.
#[derive(Clone, Debug)]
pub struct RwcEngine {
    ring: SlideRing,
    workload: Vec<(VertexId, VertexId)>,
    uf: UnionFind,
}

impl RwcEngine {
    pub fn new(spec: &WindowSpec, workload: Vec<(VertexId, VertexId)>) -> Self {
        Self {
            ring: SlideRing::new(spec.chunk_size()),
            workload,
            uf: UnionFind::new(),
        }
    }
}

impl WindowEngine for RwcEngine {
    fn insert(&mut self, edge: StreamingEdge, _slide: SlideIndex) {
        self.ring.push(edge.u, edge.v);
    }

    fn end_slide(&mut self, slide: SlideIndex, _end_of_stream: bool) -> Option<WindowResult> {
        let out = self
            .ring
            .window_start(slide)
            .map(|start| rwc_answer(&mut self.uf, self.ring.edges(), &self.workload, start));
        self.ring.advance();
        out
    }

    fn memory(&self) -> MemoryCounters {
        MemoryCounters {
            forward_nodes: self.uf.len() as u64,
            chunk_edges_stored: self.ring.edges as u64,
            ..MemoryCounters::default()
        }
    }

    fn steps(&self) -> u64 {
        self.uf.steps()
    }
}

/// Runs one DFS per query per window.
#[derive(Clone, Debug)]
pub struct DfsEngine {
    ring: SlideRing,
    workload: Vec<(VertexId, VertexId)>,
}

impl DfsEngine {
    pub fn new(spec: &WindowSpec, workload: Vec<(VertexId, VertexId)>) -> Self {
        Self {
            ring: SlideRing::new(spec.chunk_size()),
            workload,
        }
    }
}

impl WindowEngine for DfsEngine {
    fn insert(&mut self, edge: StreamingEdge, _slide: SlideIndex) {
        self.ring.push(edge.u, edge.v);
    }

    fn end_slide(&mut self, slide: SlideIndex, _end_of_stream: bool) -> Option<WindowResult> {
        let out = self.ring.window_start(slide).map(|start| {
            let adj = adjacency(self.ring.edges());
            WindowResult {
                window_start_slide: start,
                results: self
                    .workload
                    .iter()
                    .map(|&(u, v)| dfs_query(&adj, u, v))
                    .collect(),
            }
        });
        self.ring.advance();
        out
    }

    fn memory(&self) -> MemoryCounters {
        MemoryCounters {
            chunk_edges_stored: self.ring.edges as u64,
            ..MemoryCounters::default()
        }
    }

    fn steps(&self) -> u64 {
        0
    }
}

/// Ground truth for every full window of an in-memory stream.
///
/// Edges must be in non-decreasing timestamp order and not precede the origin.
pub fn oracle_all_windows(
    edges: &[StreamingEdge],
    spec: &WindowSpec,
    origin: Origin,
    workload: &[(VertexId, VertexId)],
) -> Vec<WindowResult> {
    let Some(first) = edges.first() else {
        return Vec::new();
    };
    let origin_ts = match origin {
        Origin::Zero => spec.origin(),
        Origin::FirstEdge => first.ts,
    };
    let beta = spec.beta();
    let c = spec.chunk_size() as u64;
    let slide_of = |e: &StreamingEdge| (e.ts - origin_ts) / beta;
    let last = slide_of(edges.last().expect("non-empty"));
    let pairs: Vec<(VertexId, VertexId)> = edges.iter().map(|e| (e.u, e.v)).collect();
    let mut out = Vec::new();
    for start in 0..(last + 2).saturating_sub(c) {
        let lo = edges.partition_point(|e| slide_of(e) < start);
        let hi = edges.partition_point(|e| slide_of(e) < start + c);
        out.push(rwc_evaluate_window(&pairs[lo..hi], workload, SlideIndex(start)));
    }
    out
}
