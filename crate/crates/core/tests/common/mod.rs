//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use bic_core::{
    BackwardAuft, BfbgNode, BicEngine, ChunkStore, SlideIndex, StreamingEdge, VertexId,
    WindowEngine, WindowSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Plain union-by-size with the "larger id becomes the child" tie-break,
/// kept separate from the library implementation.
#[derive(Default, Clone, Debug)]
pub struct NaiveUf {
    parent: HashMap<VertexId, VertexId>,
    size: HashMap<VertexId, usize>,
}

impl NaiveUf {
    pub fn add(&mut self, v: VertexId) {
        self.parent.entry(v).or_insert(v);
        self.size.entry(v).or_insert(1);
    }

    pub fn find(&self, v: VertexId) -> Option<VertexId> {
        let mut x = *self.parent.get(&v)?;
        while self.parent[&x] != x {
            x = self.parent[&x];
        }
        Some(x)
    }

    pub fn union(&mut self, u: VertexId, v: VertexId) {
        self.add(u);
        self.add(v);
        let (a, b) = (self.find(u).unwrap(), self.find(v).unwrap());
        if a == b {
            return;
        }
        let (sa, sb) = (self.size[&a], self.size[&b]);
        let (child, parent) = if sa < sb || (sa == sb && a > b) { (a, b) } else { (b, a) };
        self.parent.insert(child, parent);
        *self.size.get_mut(&parent).unwrap() += self.size[&child];
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.parent.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }
}

/// `b[j]` rebuilt from scratch: offsets `|c|-1` down to `j`.
pub fn naive_backward(chunk: &ChunkStore, j: usize) -> NaiveUf {
    let mut uf = NaiveUf::default();
    for t in (j..chunk.chunk_size()).rev() {
        for &(u, v) in chunk.slide(t) {
            uf.union(u, v);
        }
    }
    uf
}

/// `f[t]` rebuilt from scratch: offsets `0..=t` in arrival order.
pub fn naive_forward(chunk: &ChunkStore, t: usize) -> NaiveUf {
    let mut uf = NaiveUf::default();
    for s in 0..=t {
        for &(u, v) in chunk.slide(s) {
            uf.union(u, v);
        }
    }
    uf
}

/// Connected-component label (smallest member id) per vertex, by DFS.
pub fn dfs_components(edges: &[(VertexId, VertexId)]) -> HashMap<VertexId, VertexId> {
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut label = HashMap::new();
    let mut keys: Vec<_> = adj.keys().copied().collect();
    keys.sort_unstable();
    for s in keys {
        if label.contains_key(&s) {
            continue;
        }
        let mut stack = vec![s];
        label.insert(s, s);
        while let Some(x) = stack.pop() {
            for &y in &adj[&x] {
                if !label.contains_key(&y) {
                    label.insert(y, s);
                    stack.push(y);
                }
            }
        }
    }
    label
}

pub fn random_chunk(rng: &mut ChaCha8Rng, chunk_size: usize, max_edges: usize) -> ChunkStore {
    let m = rng.random_range(0..=max_edges);
    // from dense to sparse
    let n = rng.random_range(2..=(2 * m as u64).clamp(2, 600));
    random_chunk_over(rng, chunk_size, m, n)
}

pub fn random_chunk_over(rng: &mut ChaCha8Rng, chunk_size: usize, m: usize, n: u64) -> ChunkStore {
    let mut offsets: Vec<usize> = (0..m).map(|_| rng.random_range(0..chunk_size)).collect();
    offsets.sort_unstable();
    let mut chunk = ChunkStore::new(chunk_size);
    for t in offsets {
        let u = rng.random_range(1..=n);
        // a few self-loops
        let v = if rng.random_bool(0.05) { u } else { rng.random_range(1..=n) };
        chunk.push(t, u, v);
    }
    chunk
}

/// Number of `(v, j)` pairs where the structure disagrees with a rebuild.
pub fn auft_mismatches(chunk: &ChunkStore) -> usize {
    let b = BackwardAuft::build(chunk);
    let c = chunk.chunk_size();
    let all: BTreeSet<VertexId> = (0..c)
        .flat_map(|t| chunk.slide(t).iter().flat_map(|&(u, v)| [u, v]))
        .chain([0, u64::MAX])
        .collect();
    let mut bad = 0;
    for j in 1..c {
        let naive = naive_backward(chunk, j);
        for &v in &all {
            let want = naive.find(v);
            if b.contains_at(v, j) != want.is_some() || b.root_at(v, j) != want {
                bad += 1;
            }
        }
    }
    bad
}

/// Interval edges of `v` from snapshot `j` on must name `v`'s root at every
/// snapshot where `v` exists, exactly once.
pub fn interval_mismatches(chunk: &ChunkStore) -> usize {
    let b = BackwardAuft::build(chunk);
    let c = chunk.chunk_size();
    let mut bad = 0;
    let naives: Vec<NaiveUf> = (0..c).map(|k| naive_backward(chunk, k)).collect();
    let vs: Vec<VertexId> = b.vertices().collect();
    for j in 1..c {
        for &v in &vs {
            if !b.contains_at(v, j) {
                if b.edges_and_intervals(j, v, 0).is_ok() {
                    bad += 1;
                }
                continue;
            }
            let es = b.edges_and_intervals(j, v, 7).unwrap();
            let mut owner: BTreeMap<usize, VertexId> = BTreeMap::new();
            for e in &es {
                if e.forward_root != 7 || e.interval.start > e.interval.end {
                    bad += 1;
                }
                for k in e.interval.start..=e.interval.end {
                    if owner.insert(k, e.backward_root).is_some() {
                        bad += 1;
                    }
                }
            }
            let expect: BTreeMap<usize, VertexId> = (j..c)
                .filter(|&k| b.contains_at(v, k))
                .map(|k| (k, naives[k].find(v).unwrap()))
                .collect();
            if owner != expect {
                bad += 1;
            }
        }
    }
    bad
}

/// Feeds `older` then `newer` through a fresh engine and, at every snapshot
/// `j` of the pair, compares BFBG reachability between all roots with the
/// transitive closure over explicitly materialized inter-vertices.
pub fn bfbg_mismatches(older: &ChunkStore, newer: &ChunkStore) -> usize {
    let c = older.chunk_size();
    let spec = WindowSpec::new(c as u64, 1).unwrap();
    let mut eng = BicEngine::new(&spec, Vec::new());
    for t in 0..c {
        for &(u, v) in older.slide(t) {
            eng.insert(StreamingEdge::new(u, v, t as u64), SlideIndex(t as u64));
        }
        eng.end_slide(SlideIndex(t as u64), false);
    }
    let mut bad = 0;
    for t in 0..c - 1 {
        let s = (c + t) as u64;
        for &(u, v) in newer.slide(t) {
            eng.insert(StreamingEdge::new(u, v, s), SlideIndex(s));
        }
        let j = t + 1;
        let back = naive_backward(older, j);
        let fwd = naive_forward(newer, t);
        // bipartite closure over inter-vertices
        let mut adj: HashMap<BfbgNode, Vec<BfbgNode>> = HashMap::new();
        for w in fwd.vertices() {
            if let Some(rb) = back.find(w) {
                let (x, y) = (BfbgNode::Backward(rb), BfbgNode::Forward(fwd.find(w).unwrap()));
                adj.entry(x).or_default().push(y);
                adj.entry(y).or_default().push(x);
            }
        }
        let nodes: BTreeSet<BfbgNode> = back
            .vertices()
            .map(|v| BfbgNode::Backward(back.find(v).unwrap()))
            .chain(fwd.vertices().map(|v| BfbgNode::Forward(fwd.find(v).unwrap())))
            .collect();
        for &x in &nodes {
            let mut seen = HashSet::from([x]);
            let mut stack = vec![x];
            while let Some(n) = stack.pop() {
                for &m in adj.get(&n).into_iter().flatten() {
                    if seen.insert(m) {
                        stack.push(m);
                    }
                }
            }
            for &y in &nodes {
                if eng.bfbg().connected(x, y, j) != seen.contains(&y) {
                    bad += 1;
                }
            }
        }
        if eng.bfbg().check_invariants(c - 1).is_err() {
            bad += 1;
        }
        eng.end_slide(SlideIndex(s), false);
    }
    bad
}

/// Seeded stream whose timestamps carry `edges_per_ts` edges on average.
pub fn random_stream(rng: &mut ChaCha8Rng, n: u64, m: usize, edges_per_ts: usize) -> Vec<StreamingEdge> {
    let span = m.div_ceil(edges_per_ts).max(1) as u64;
    let base = rng.random_range(0..1000u64);
    let mut ts: Vec<u64> = (0..m).map(|_| base + rng.random_range(0..span)).collect();
    ts.sort_unstable();
    ts.into_iter()
        .map(|t| {
            let u = rng.random_range(1..=n);
            let v = if rng.random_bool(0.02) { u } else { rng.random_range(1..=n) };
            StreamingEdge::new(u, v, t)
        })
        .collect()
}

/// Mostly in-range pairs, some reflexive, some naming unseen vertices.
pub fn random_workload(rng: &mut ChaCha8Rng, n: u64, count: usize) -> Vec<(VertexId, VertexId)> {
    (0..count)
        .map(|_| {
            let u = rng.random_range(1..=n + 2);
            match rng.random_range(0..10) {
                0 => (u, u),
                _ => (u, rng.random_range(1..=n + 2)),
            }
        })
        .collect()
}

/// Every `(α, β)` with `α / β = chunk_size` for a few slide widths.
pub fn specs_for(chunk_size: usize) -> Vec<WindowSpec> {
    [1u64, 2, 5]
        .iter()
        .map(|&beta| WindowSpec::new(beta * chunk_size as u64, beta).unwrap())
        .collect()
}
