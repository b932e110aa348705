//! Backward buffers stored as one snapshot-isolated, augmented union-find
//! forest (AUFT) per chunk.
//!
//! The forest is built by scanning the chunk's slides from the last offset
//! down to offset 1. Each tree edge (UFTE) is labeled with the offset at which
//! it was inserted, so the tree of snapshot `b[j]` (slides `j..chunk_size-1`)
//! is exactly the set of UFTEs labeled `>= j`. Along any root-ward path labels
//! never increase, hence a find at snapshot `j` simply stops at the first
//! UFTE labeled below `j`.
//!
//! On top of that, every vertex carries the largest snapshot that contains it
//! (its *vertex label*) and the range of snapshots in which it is a root (its
//! *root interval*). Those two annotations let
//! [`BackwardAuft::edges_and_intervals`] list all roots of a vertex over every
//! snapshot `>= j` with a single walk.
//!
//! Offset 0 is never scanned: no window pairs with `b[0]`, the window covering
//! the whole chunk is answered from the forward buffer.

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stream::{ChunkStore, VertexId};
use crate::union_find::{links_under, StepCounter};

/// Inclusive range of snapshot indexes `[start, end]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SnapshotInterval {
    pub start: usize,
    pub end: usize,
}

impl SnapshotInterval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "empty interval [{start}, {end}]");
        Self { start, end }
    }

    pub fn contains(&self, j: usize) -> bool {
        self.start <= j && j <= self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }
}

impl fmt::Display for SnapshotInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// Connection between a backward root and a forward root, valid for the
/// snapshots in `interval`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntervalEdge {
    pub backward_root: VertexId,
    pub forward_root: VertexId,
    pub interval: SnapshotInterval,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum AuftError {
    #[error("snapshot {snapshot} outside 1..={max}")]
    SnapshotOutOfRange { snapshot: usize, max: usize },
    #[error("vertex {vertex} is not in snapshot {snapshot}")]
    NotInSnapshot { vertex: VertexId, snapshot: usize },
}

#[derive(Clone, Debug, Default)]
pub struct BackwardAuft {
    chunk_size: usize,
    slot_of: FxHashMap<VertexId, u32>,
    ids: Vec<VertexId>,
    parent: Vec<u32>,
    /// Snapshot label of the UFTE `(slot, parent)`; meaningless for roots.
    up_label: Vec<u32>,
    vertex_label: Vec<u32>,
    /// Root interval as `(start, end)`; `start > end` encodes "never a root".
    interval: Vec<(u32, u32)>,
    size: Vec<u32>,
    uftes: usize,
    steps: StepCounter,
}

impl BackwardAuft {
    /// Runs the backward scan over a completed chunk.
    pub fn build(chunk: &ChunkStore) -> Self {
        let mut b = Self {
            chunk_size: chunk.chunk_size(),
            ..Self::default()
        };
        for j in (1..chunk.chunk_size()).rev() {
            for &(u, v) in chunk.slide(j) {
                b.insert_edge(u, v, j as u32);
            }
        }
        b
    }

    /// A vertex enters as a singleton root, so its root interval starts as
    /// `[1, j]`; if it is linked under another root at the same offset the
    /// interval becomes empty.
    fn label_vertex(&mut self, v: VertexId, j: u32) -> u32 {
        if let Some(&s) = self.slot_of.get(&v) {
            return s;
        }
        let s = self.ids.len() as u32;
        self.slot_of.insert(v, s);
        self.ids.push(v);
        self.parent.push(s);
        self.up_label.push(0);
        self.vertex_label.push(j);
        self.interval.push((1, j));
        self.size.push(1);
        s
    }

    fn full_root(&self, mut s: u32) -> u32 {
        let mut visited = 1;
        while self.parent[s as usize] != s {
            s = self.parent[s as usize];
            visited += 1;
        }
        self.steps.add(visited);
        s
    }

    fn insert_edge(&mut self, u: VertexId, v: VertexId, j: u32) {
        let su = self.label_vertex(u, j);
        let sv = self.label_vertex(v, j);
        let ru = self.full_root(su);
        let rv = self.full_root(sv);
        if ru == rv {
            return;
        }
        let (child, parent) = if links_under(
            self.ids[ru as usize],
            self.size[ru as usize],
            self.ids[rv as usize],
            self.size[rv as usize],
        ) {
            (ru, rv)
        } else {
            (rv, ru)
        };
        self.parent[child as usize] = parent;
        self.up_label[child as usize] = j;
        self.size[parent as usize] += self.size[child as usize];
        // the demoted root stops being a root at snapshot j
        self.interval[child as usize].0 = j + 1;
        self.uftes += 1;
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    /// Vertices appearing in slides `1..chunk_size`.
    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    /// Stored tree edges, i.e. vertices minus components of `b[1]`.
    pub fn ufte_count(&self) -> usize {
        self.uftes
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    /// Largest snapshot index whose snapshot contains `v`.
    pub fn vertex_label(&self, v: VertexId) -> Option<usize> {
        self.slot_of
            .get(&v)
            .map(|&s| self.vertex_label[s as usize] as usize)
    }

    /// Snapshots in which `v` is a root; `None` if it never is.
    pub fn root_interval(&self, v: VertexId) -> Option<SnapshotInterval> {
        let s = *self.slot_of.get(&v)?;
        let (a, b) = self.interval[s as usize];
        (a <= b).then(|| SnapshotInterval::new(a as usize, b as usize))
    }

    /// Parent of `v` together with the label of the connecting UFTE.
    pub fn parent(&self, v: VertexId) -> Option<(VertexId, usize)> {
        let s = *self.slot_of.get(&v)? as usize;
        (self.parent[s] as usize != s)
            .then(|| (self.ids[self.parent[s] as usize], self.up_label[s] as usize))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ids.iter().copied()
    }

    pub fn contains_at(&self, v: VertexId, j: usize) -> bool {
        self.slot_of
            .get(&v)
            .is_some_and(|&s| self.vertex_label[s as usize] as usize >= j)
    }

    /// Root of `v` in snapshot `b[j]`; `None` if `v` is not in that snapshot.
    pub fn root_at(&self, v: VertexId, j: usize) -> Option<VertexId> {
        let s = *self.slot_of.get(&v)?;
        if (self.vertex_label[s as usize] as usize) < j {
            return None;
        }
        Some(self.ids[self.root_slot_at(s, j as u32) as usize])
    }

    #[inline]
    fn root_slot_at(&self, mut s: u32, j: u32) -> u32 {
        let mut visited = 1;
        loop {
            let p = self.parent[s as usize];
            if p == s || self.up_label[s as usize] < j {
                break;
            }
            s = p;
            visited += 1;
        }
        self.steps.add(visited);
        s
    }

    /// All `(root, snapshots)` pairs of `v` over snapshots `>= j`, tagged with
    /// the forward root `forward_root`.
    ///
    /// The emitted intervals are disjoint and cover exactly the snapshots
    /// `j..=vertex_label(v)`.
    pub fn edges_and_intervals(
        &self,
        j: usize,
        v: VertexId,
        forward_root: VertexId,
    ) -> Result<Vec<IntervalEdge>, AuftError> {
        let mut out = Vec::new();
        self.edges_and_intervals_into(j, v, forward_root, &mut out)?;
        Ok(out)
    }

    /// Appending variant of [`edges_and_intervals`](Self::edges_and_intervals).
    pub fn edges_and_intervals_into(
        &self,
        j: usize,
        v: VertexId,
        forward_root: VertexId,
        out: &mut Vec<IntervalEdge>,
    ) -> Result<(), AuftError> {
        let max = self.chunk_size.saturating_sub(1);
        if j == 0 || j > max {
            return Err(AuftError::SnapshotOutOfRange { snapshot: j, max });
        }
        let not_in = AuftError::NotInSnapshot {
            vertex: v,
            snapshot: j,
        };
        let mut s = *self.slot_of.get(&v).ok_or(not_in)?;
        let label = self.vertex_label[s as usize] as usize;
        if label < j {
            return Err(not_in);
        }
        let j32 = j as u32;
        let mut upper = label;
        let mut visited = 1;
        loop {
            let (start, end) = self.interval[s as usize];
            let p = self.parent[s as usize];
            let root_here = p == s || self.up_label[s as usize] < j32;
            // the root at b[j] owns every snapshot from j up to where the
            // previous vertex on the path took over
            let lo = if root_here { j } else { start as usize };
            let hi = upper.min(end as usize);
            if start <= end && lo <= hi {
                out.push(IntervalEdge {
                    backward_root: self.ids[s as usize],
                    forward_root,
                    interval: SnapshotInterval::new(lo, hi),
                });
            }
            if root_here {
                break;
            }
            upper = upper.min(start as usize - 1);
            s = p;
            visited += 1;
        }
        self.steps.add(visited);
        Ok(())
    }

    /// Checks label monotonicity, annotation consistency and the UFTE count.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut roots = 0;
        for s in 0..self.ids.len() {
            let v = self.ids[s];
            let p = self.parent[s] as usize;
            let (start, end) = self.interval[s];
            if end != self.vertex_label[s] {
                return Err(format!("vertex {v}: interval end {end} != label {}", self.vertex_label[s]));
            }
            if p == s {
                roots += 1;
                if start != 1 {
                    return Err(format!("root {v}: interval starts at {start}"));
                }
                continue;
            }
            let l = self.up_label[s];
            if start != l + 1 {
                return Err(format!("vertex {v}: interval start {start} but linked at {l}"));
            }
            if l > self.vertex_label[s] || l > self.vertex_label[p] {
                return Err(format!("UFTE ({v}, {}) labeled {l} before an endpoint exists", self.ids[p]));
            }
            if self.parent[p] as usize != p && self.up_label[p] > l {
                return Err(format!(
                    "labels increase along path at {v}: {l} then {}",
                    self.up_label[p]
                ));
            }
        }
        if self.uftes != self.ids.len() - roots {
            return Err(format!("{} UFTEs for {} vertices in {roots} trees", self.uftes, self.ids.len()));
        }
        Ok(())
    }
}
