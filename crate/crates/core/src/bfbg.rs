//! Backward-forward bipartite graph.
//!
//! Vertices are roots of the paired backward buffer (`b_i`) and forward buffer
//! (`f_{i+1}`). An edge `(x_b, y_f)` labeled with snapshot intervals records
//! that some vertex present in both buffers has root `x` in `b_i[j]` and root
//! `y` in the forward buffer, for every `j` in those intervals. Two roots are
//! connected across buffers at snapshot `j` iff they are reachable through
//! edges whose intervals contain `j`.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::backward::{IntervalEdge, SnapshotInterval};
use crate::stream::VertexId;

/// Sorted, pairwise disjoint and non-adjacent snapshot intervals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalSet(SmallVec<[SnapshotInterval; 2]>);

impl IntervalSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn as_slice(&self) -> &[SnapshotInterval] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `iv`, merging it with every overlapping or adjacent interval.
    pub fn insert(&mut self, iv: SnapshotInterval) {
        // first interval that could touch iv: end + 1 >= iv.start
        let lo = self.0.partition_point(|x| x.end + 1 < iv.start);
        // one past the last interval that could touch iv: start <= iv.end + 1
        let hi = self.0.partition_point(|x| x.start <= iv.end + 1);
        if lo == hi {
            self.0.insert(lo, iv);
            return;
        }
        let merged = SnapshotInterval::new(
            iv.start.min(self.0[lo].start),
            iv.end.max(self.0[hi - 1].end),
        );
        self.0[lo] = merged;
        self.0.drain(lo + 1..hi);
    }

    pub fn merge(&mut self, other: IntervalSet) {
        if self.0.is_empty() {
            *self = other;
            return;
        }
        for iv in other.0 {
            self.insert(iv);
        }
    }

    /// Binary-search stab.
    pub fn contains(&self, j: usize) -> bool {
        let i = self.0.partition_point(|x| x.end < j);
        i < self.0.len() && self.0[i].start <= j
    }

    pub fn is_well_formed(&self) -> bool {
        self.0.iter().all(|x| x.start <= x.end)
            && self.0.windows(2).all(|w| w[0].end + 1 < w[1].start)
    }
}

/// A BFBG vertex: a root on either side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BfbgNode {
    Backward(VertexId),
    Forward(VertexId),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfbgStats {
    pub backward_nodes: usize,
    pub forward_nodes: usize,
    pub edges: usize,
    pub intervals: usize,
}

/// Component labels at one snapshot, filled lazily by
/// [`Bfbg::connected_cached`].
#[derive(Clone, Debug, Default)]
pub struct Reachability {
    j: usize,
    /// Per node slot; 0 means not labeled yet.
    label: Vec<u32>,
    next: u32,
}

impl Reachability {
    pub fn new(j: usize) -> Self {
        Self {
            j,
            label: Vec::new(),
            next: 1,
        }
    }

    pub fn snapshot(&self) -> usize {
        self.j
    }
}

#[derive(Clone, Debug)]
struct EdgeRec {
    b: u32,
    f: u32,
    set: IntervalSet,
    live: bool,
}

/// Nodes live in dense slots. Each slot keeps the ids of its incident edges;
/// edges folded into another edge by a root move are marked dead and skipped
/// rather than unlinked from the backward side.
#[derive(Clone, Debug, Default)]
pub struct Bfbg {
    slot_of: FxHashMap<BfbgNode, u32>,
    nodes: Vec<BfbgNode>,
    adj: Vec<Vec<u32>>,
    edges: Vec<EdgeRec>,
    edge_of: FxHashMap<(u32, u32), u32>,
    backward_nodes: usize,
    forward_nodes: usize,
    intervals: usize,
}

impl Bfbg {
    pub fn new() -> Self {
        Self::default()
    }

    fn slot(&mut self, n: BfbgNode) -> u32 {
        if let Some(&s) = self.slot_of.get(&n) {
            return s;
        }
        let s = self.nodes.len() as u32;
        self.slot_of.insert(n, s);
        self.nodes.push(n);
        self.adj.push(Vec::new());
        match n {
            BfbgNode::Backward(_) => self.backward_nodes += 1,
            BfbgNode::Forward(_) => self.forward_nodes += 1,
        }
        s
    }

    pub fn insert(&mut self, e: IntervalEdge) {
        let b = self.slot(BfbgNode::Backward(e.backward_root));
        let f = self.slot(BfbgNode::Forward(e.forward_root));
        if let Some(&id) = self.edge_of.get(&(b, f)) {
            let set = &mut self.edges[id as usize].set;
            let before = set.len();
            set.insert(e.interval);
            self.intervals = self.intervals + set.len() - before;
            return;
        }
        let id = self.edges.len() as u32;
        let mut set = IntervalSet::new();
        set.insert(e.interval);
        self.edges.push(EdgeRec { b, f, set, live: true });
        self.edge_of.insert((b, f), id);
        self.adj[b as usize].push(id);
        self.adj[f as usize].push(id);
        self.intervals += 1;
    }

    /// Re-targets every edge `(x, old)` to `(x, new)` after `old` was linked
    /// under `new` in the forward buffer.
    pub fn move_forward_root(&mut self, old: VertexId, new: VertexId) {
        if old == new {
            return;
        }
        let Some(old_slot) = self.slot_of.remove(&BfbgNode::Forward(old)) else {
            return;
        };
        self.forward_nodes -= 1;
        let new_slot = self.slot(BfbgNode::Forward(new));
        let moved = std::mem::take(&mut self.adj[old_slot as usize]);
        for id in moved {
            let rec = &mut self.edges[id as usize];
            if !rec.live {
                continue;
            }
            let b = rec.b;
            self.edge_of.remove(&(b, old_slot));
            match self.edge_of.get(&(b, new_slot)) {
                Some(&target) => {
                    let set = std::mem::take(&mut rec.set);
                    rec.live = false;
                    self.intervals -= set.len();
                    let dst = &mut self.edges[target as usize].set;
                    let before = dst.len();
                    dst.merge(set);
                    self.intervals = self.intervals + dst.len() - before;
                }
                None => {
                    rec.f = new_slot;
                    self.edge_of.insert((b, new_slot), id);
                    self.adj[new_slot as usize].push(id);
                }
            }
        }
    }

    pub fn contains_node(&self, n: BfbgNode) -> bool {
        self.slot_of.contains_key(&n)
    }

    pub fn intervals(&self, backward_root: VertexId, forward_root: VertexId) -> Option<&IntervalSet> {
        let b = *self.slot_of.get(&BfbgNode::Backward(backward_root))?;
        let f = *self.slot_of.get(&BfbgNode::Forward(forward_root))?;
        let id = *self.edge_of.get(&(b, f))?;
        Some(&self.edges[id as usize].set)
    }

    /// Live edges as `(backward_root, forward_root, intervals)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, &IntervalSet)> + '_ {
        self.edges.iter().filter(|e| e.live).map(|e| {
            let id = |s: u32| match self.nodes[s as usize] {
                BfbgNode::Backward(v) | BfbgNode::Forward(v) => v,
            };
            (id(e.b), id(e.f), &e.set)
        })
    }

    /// Neighbor slots of `s` over live edges containing `j`.
    #[inline]
    fn neighbors(&self, s: u32, j: usize) -> impl Iterator<Item = u32> + '_ {
        self.adj[s as usize].iter().filter_map(move |&id| {
            let e = &self.edges[id as usize];
            (e.live && e.set.contains(j)).then(|| if e.b == s { e.f } else { e.b })
        })
    }

    /// BFS from `from` over edges live at snapshot `j`.
    pub fn connected(&self, from: BfbgNode, to: BfbgNode, j: usize) -> bool {
        if from == to {
            return true;
        }
        let (Some(&a), Some(&z)) = (self.slot_of.get(&from), self.slot_of.get(&to)) else {
            return false;
        };
        let mut seen = FxHashSet::default();
        let mut queue = VecDeque::from([a]);
        seen.insert(a);
        while let Some(s) = queue.pop_front() {
            for m in self.neighbors(s, j) {
                if m == z {
                    return true;
                }
                if seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        false
    }

    /// Same answer as [`connected`](Self::connected), but each component
    /// reached is traversed once per `cache`. The cache is only valid while
    /// the graph is unchanged and for the snapshot it was created with.
    pub fn connected_cached(&self, from: BfbgNode, to: BfbgNode, cache: &mut Reachability) -> bool {
        if from == to {
            return true;
        }
        let (Some(&a), Some(&z)) = (self.slot_of.get(&from), self.slot_of.get(&to)) else {
            return false;
        };
        if cache.label.len() < self.nodes.len() {
            cache.label.resize(self.nodes.len(), 0);
        }
        if cache.label[a as usize] == 0 {
            let id = cache.next;
            cache.next += 1;
            cache.label[a as usize] = id;
            let mut queue = VecDeque::from([a]);
            while let Some(s) = queue.pop_front() {
                for m in self.neighbors(s, cache.j) {
                    if cache.label[m as usize] == 0 {
                        cache.label[m as usize] = id;
                        queue.push_back(m);
                    }
                }
            }
        }
        cache.label[a as usize] == cache.label[z as usize]
    }

    pub fn stats(&self) -> BfbgStats {
        BfbgStats {
            backward_nodes: self.backward_nodes,
            forward_nodes: self.forward_nodes,
            edges: self.edge_of.len(),
            intervals: self.intervals,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.edge_of.is_empty()
    }

    pub fn clear(&mut self) {
        self.slot_of.clear();
        self.nodes.clear();
        self.adj.clear();
        self.edges.clear();
        self.edge_of.clear();
        self.backward_nodes = 0;
        self.forward_nodes = 0;
        self.intervals = 0;
    }

    /// Checks interval-list shape, the snapshot range, node sides and the
    /// agreement of the edge index with the adjacency lists and counters.
    pub fn check_invariants(&self, max_snapshot: usize) -> Result<(), String> {
        let mut total = 0;
        let mut live = 0;
        for (id, e) in self.edges.iter().enumerate() {
            if !e.live {
                continue;
            }
            live += 1;
            let (b, f) = (self.nodes[e.b as usize], self.nodes[e.f as usize]);
            let set = e.set.as_slice();
            if set.is_empty() || !e.set.is_well_formed() {
                return Err(format!("edge ({b:?}, {f:?}): malformed intervals {set:?}"));
            }
            if set[0].start < 1 || set[set.len() - 1].end > max_snapshot {
                return Err(format!("edge ({b:?}, {f:?}): intervals {set:?} outside 1..={max_snapshot}"));
            }
            if !matches!(b, BfbgNode::Backward(_)) || !matches!(f, BfbgNode::Forward(_)) {
                return Err(format!("edge ({b:?}, {f:?}) joins the wrong sides"));
            }
            if self.slot_of.get(&b) != Some(&e.b) || self.slot_of.get(&f) != Some(&e.f) {
                return Err(format!("edge ({b:?}, {f:?}) touches a removed node"));
            }
            if self.edge_of.get(&(e.b, e.f)) != Some(&(id as u32)) {
                return Err(format!("edge ({b:?}, {f:?}) missing from the edge index"));
            }
            let id = id as u32;
            if !self.adj[e.b as usize].contains(&id) || !self.adj[e.f as usize].contains(&id) {
                return Err(format!("edge ({b:?}, {f:?}) missing from adjacency"));
            }
            total += set.len();
        }
        if live != self.edge_of.len() {
            return Err(format!("{live} live edges but {} indexed", self.edge_of.len()));
        }
        if total != self.intervals {
            return Err(format!("interval count {} but {total} stored", self.intervals));
        }
        let (mut nb, mut nf) = (0, 0);
        for n in self.slot_of.keys() {
            match n {
                BfbgNode::Backward(_) => nb += 1,
                BfbgNode::Forward(_) => nf += 1,
            }
        }
        if (nb, nf) != (self.backward_nodes, self.forward_nodes) {
            return Err("node counters out of sync".into());
        }
        Ok(())
    }
}
