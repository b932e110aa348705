//! Window engine combining per-chunk forward and backward buffers.
//!
//! While chunk `i+1` is open, a window ending at its offset `t < |c|-1`
//! covers slides `t+1..|c|-1` of chunk `i` plus slides `0..=t` of chunk
//! `i+1`. The first part is snapshot `j = t+1` of the backward structure of
//! chunk `i`, the second part is the forward union-find as it stands. A
//! window ending at offset `|c|-1` is the whole open chunk and is answered
//! from the forward buffer alone.

use serde::{Deserialize, Serialize};

use crate::backward::{BackwardAuft, IntervalEdge};
use crate::bfbg::{Bfbg, BfbgNode, Reachability};
use crate::stream::{SlideIndex, SlideSink, StreamingEdge, VertexId, WindowSpec, ChunkStore};
use crate::union_find::UnionFind;

/// Answers for one window, in workload order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowResult {
    pub window_start_slide: SlideIndex,
    pub results: Vec<bool>,
}

/// Logical structure sizes at one point in time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryCounters {
    pub forward_nodes: u64,
    pub auft_nodes: u64,
    pub auft_uftes: u64,
    pub bfbg_nodes: u64,
    pub bfbg_edges: u64,
    pub bfbg_intervals: u64,
    pub chunk_edges_stored: u64,
}

/// Common interface of the windowed connectivity engines.
///
/// Edges arrive through `insert`; `end_slide` is called once per slide in
/// increasing order and returns the result of the window ending at that
/// slide, if it is full.
pub trait WindowEngine {
    fn insert(&mut self, edge: StreamingEdge, slide: SlideIndex);
    fn end_slide(&mut self, slide: SlideIndex, end_of_stream: bool) -> Option<WindowResult>;
    fn memory(&self) -> MemoryCounters;
    /// Total union-find hops performed so far.
    fn steps(&self) -> u64;
}

/// Runs an engine as a [`SlideSink`] and keeps every window result.
#[derive(Debug)]
pub struct Collector<E> {
    pub engine: E,
    pub results: Vec<WindowResult>,
}

impl<E> Collector<E> {
    pub fn new(engine: E) -> Self {
        Self {
            engine,
            results: Vec::new(),
        }
    }
}

impl<E: WindowEngine> SlideSink for Collector<E> {
    fn edge(&mut self, edge: StreamingEdge, slide: SlideIndex) {
        self.engine.insert(edge, slide);
    }

    fn slide_closed(&mut self, slide: SlideIndex, end_of_stream: bool) {
        if let Some(r) = self.engine.end_slide(slide, end_of_stream) {
            self.results.push(r);
        }
    }
}

#[derive(Clone, Debug)]
pub struct BicEngine {
    chunk_size: usize,
    workload: Vec<(VertexId, VertexId)>,
    forward: UnionFind,
    open_chunk: ChunkStore,
    prev_backward: Option<BackwardAuft>,
    bfbg: Bfbg,
    /// Per forward slot: registered as an inter-vertex, or known to be
    /// absent from the paired backward buffer for every remaining snapshot.
    settled: Vec<bool>,
    retired_steps: u64,
    scratch: Vec<IntervalEdge>,
}

impl BicEngine {
    pub fn new(spec: &WindowSpec, workload: Vec<(VertexId, VertexId)>) -> Self {
        Self {
            chunk_size: spec.chunk_size(),
            workload,
            forward: UnionFind::new(),
            open_chunk: ChunkStore::new(spec.chunk_size()),
            prev_backward: None,
            bfbg: Bfbg::new(),
            settled: Vec::new(),
            retired_steps: 0,
            scratch: Vec::new(),
        }
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    pub fn workload(&self) -> &[(VertexId, VertexId)] {
        &self.workload
    }

    pub fn forward(&self) -> &UnionFind {
        &self.forward
    }

    pub fn prev_backward(&self) -> Option<&BackwardAuft> {
        self.prev_backward.as_ref()
    }

    pub fn bfbg(&self) -> &Bfbg {
        &self.bfbg
    }

    /// Adds an edge of the open chunk at slide offset `offset`.
    pub fn process_edge(&mut self, u: VertexId, v: VertexId, offset: usize) {
        let (su, sv, link) = self.forward.union_slots(u, v);
        if let Some(link) = link {
            self.bfbg.move_forward_root(link.child_root, link.parent_root);
        }
        if self.prev_backward.is_some() && offset + 2 <= self.chunk_size {
            self.process_vertex_slot(u, su, offset + 1);
            if sv != su {
                self.process_vertex_slot(v, sv, offset + 1);
            }
        }
        self.open_chunk.push(offset, u, v);
    }

    /// Registers `v` as an inter-vertex at snapshot `j` if it is in both
    /// buffers and has not been registered yet.
    pub fn process_vertex(&mut self, v: VertexId, j: usize) {
        if let Some(s) = self.forward.slot(v) {
            self.process_vertex_slot(v, s, j);
        }
    }

    fn process_vertex_slot(&mut self, v: VertexId, s: u32, j: usize) {
        let s = s as usize;
        if s >= self.settled.len() {
            self.settled.resize(s + 1, false);
        }
        if self.settled[s] {
            return;
        }
        let Some(b) = &self.prev_backward else {
            return;
        };
        // membership only shrinks as j grows, so a miss now is final
        self.settled[s] = true;
        if !b.contains_at(v, j) {
            return;
        }
        let vf = self.forward.find_slot(s as u32);
        self.scratch.clear();
        b.edges_and_intervals_into(j, v, vf, &mut self.scratch)
            .expect("membership checked above");
        for &e in &self.scratch {
            self.bfbg.insert(e);
        }
    }

    /// Connectivity of `u` and `v` in the window pairing backward snapshot
    /// `j` with the current forward buffer; `j = 0` means forward only.
    pub fn query(&self, u: VertexId, v: VertexId, j: usize) -> bool {
        self.query_inner(u, v, j, None)
    }

    fn query_inner(&self, u: VertexId, v: VertexId, j: usize, cache: Option<&mut Reachability>) -> bool {
        let fu = self.forward.find(u);
        let fv = self.forward.find(v);
        if fu.is_some() && fu == fv {
            return true;
        }
        let b = match (&self.prev_backward, j) {
            (Some(b), 1..) => b,
            _ => return false,
        };
        let bu = b.root_at(u, j);
        let bv = b.root_at(v, j);
        if bu.is_some() && bu == bv {
            return true;
        }
        let side = |f: Option<VertexId>, b: Option<VertexId>| {
            f.map(BfbgNode::Forward).or(b.map(BfbgNode::Backward))
        };
        match (side(fu, bu), side(fv, bv), cache) {
            (Some(ru), Some(rv), Some(c)) => self.bfbg.connected_cached(ru, rv, c),
            (Some(ru), Some(rv), None) => self.bfbg.connected(ru, rv, j),
            _ => false,
        }
    }

    /// Answers the whole workload. BFBG components are traversed at most
    /// once per window.
    pub fn evaluate_window(&self, start: SlideIndex, j: usize) -> WindowResult {
        let mut cache = Reachability::new(j);
        WindowResult {
            window_start_slide: start,
            results: self
                .workload
                .iter()
                .map(|&(u, v)| self.query_inner(u, v, j, Some(&mut cache)))
                .collect(),
        }
    }

    /// Answers the window spanning the open chunk, then turns the chunk into
    /// the next backward buffer unless `build` is false.
    pub fn close_chunk(&mut self, start: SlideIndex, build: bool) -> WindowResult {
        let result = self.evaluate_window(start, 0);
        if let Some(b) = self.prev_backward.take() {
            self.retired_steps += b.steps();
        }
        if build {
            self.prev_backward = Some(BackwardAuft::build(&self.open_chunk));
        }
        self.forward.clear();
        self.bfbg.clear();
        self.settled.clear();
        self.open_chunk.clear();
        result
    }
}

impl WindowEngine for BicEngine {
    fn insert(&mut self, edge: StreamingEdge, slide: SlideIndex) {
        let offset = (slide.0 % self.chunk_size as u64) as usize;
        self.process_edge(edge.u, edge.v, offset);
    }

    fn end_slide(&mut self, slide: SlideIndex, end_of_stream: bool) -> Option<WindowResult> {
        let c = self.chunk_size as u64;
        let t = (slide.0 % c) as usize;
        let start = SlideIndex((slide.0 + 1).checked_sub(c)?);
        if t + 1 == self.chunk_size {
            // a backward buffer built at end of stream would never be read
            Some(self.close_chunk(start, !end_of_stream))
        } else {
            Some(self.evaluate_window(start, t + 1))
        }
    }

    fn memory(&self) -> MemoryCounters {
        let stats = self.bfbg.stats();
        let (auft_nodes, auft_uftes) = self
            .prev_backward
            .as_ref()
            .map_or((0, 0), |b| (b.vertex_count() as u64, b.ufte_count() as u64));
        MemoryCounters {
            forward_nodes: self.forward.len() as u64,
            auft_nodes,
            auft_uftes,
            bfbg_nodes: (stats.backward_nodes + stats.forward_nodes) as u64,
            bfbg_edges: stats.edges as u64,
            bfbg_intervals: stats.intervals as u64,
            chunk_edges_stored: self.open_chunk.edge_count() as u64,
        }
    }

    fn steps(&self) -> u64 {
        self.retired_steps
            + self.forward.steps()
            + self.prev_backward.as_ref().map_or(0, |b| b.steps())
    }
}
