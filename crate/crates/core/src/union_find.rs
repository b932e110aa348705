//! Union-by-size disjoint sets keyed by sparse vertex ids.
//!
//! Every link makes the root of the smaller tree a child of the larger one;
//! on equal sizes the larger vertex id becomes the child. This keeps every
//! root-ward path within `floor(log2(size)) + 1` vertices and makes replays
//! deterministic.

use std::sync::atomic::{AtomicU64, Ordering};

use rustc_hash::FxHashMap;

use crate::stream::VertexId;

/// Counts vertices visited by find walks.
///
/// One unit is charged per vertex on the walk, so a find on a root costs 1.
/// Updates are plain load/store pairs: concurrent readers may lose increments,
/// which is acceptable for a diagnostic counter.
#[derive(Debug, Default)]
pub struct StepCounter(AtomicU64);

impl StepCounter {
    #[inline]
    pub fn add(&self, n: u64) {
        let c = self.0.load(Ordering::Relaxed);
        self.0.store(c + n, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}

impl Clone for StepCounter {
    fn clone(&self) -> Self {
        Self(AtomicU64::new(self.get()))
    }
}

/// Returned by [`UnionFind::union`] when two distinct trees were linked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkEvent {
    pub child_root: VertexId,
    pub parent_root: VertexId,
}

/// Whether root `a` becomes the child when linked with root `b`.
#[inline]
pub(crate) fn links_under(a: VertexId, size_a: u32, b: VertexId, size_b: u32) -> bool {
    size_a < size_b || (size_a == size_b && a > b)
}

#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    slot_of: FxHashMap<VertexId, u32>,
    ids: Vec<VertexId>,
    parent: Vec<u32>,
    size: Vec<u32>,
    roots: usize,
    compress: bool,
    steps: StepCounter,
}

impl UnionFind {
    pub fn new() -> Self {
        Self::default()
    }

    /// Path compression only rewrites non-root parents, so roots and sizes
    /// are identical with or without it.
    pub fn with_path_compression() -> Self {
        Self {
            compress: true,
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.slot_of.contains_key(&v)
    }

    pub fn component_count(&self) -> usize {
        self.roots
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    /// Registers `v` as a singleton if absent.
    pub fn insert(&mut self, v: VertexId) -> u32 {
        if let Some(&s) = self.slot_of.get(&v) {
            return s;
        }
        let s = self.ids.len() as u32;
        self.slot_of.insert(v, s);
        self.ids.push(v);
        self.parent.push(s);
        self.size.push(1);
        self.roots += 1;
        s
    }

    #[inline]
    fn root_slot(&self, mut s: u32) -> u32 {
        let mut visited = 1;
        while self.parent[s as usize] != s {
            s = self.parent[s as usize];
            visited += 1;
        }
        self.steps.add(visited);
        s
    }

    fn root_slot_mut(&mut self, s: u32) -> u32 {
        let root = self.root_slot(s);
        if self.compress {
            let mut cur = s;
            while self.parent[cur as usize] != root {
                let next = self.parent[cur as usize];
                self.parent[cur as usize] = root;
                cur = next;
            }
        }
        root
    }

    /// Root of `v`'s tree, or `None` if `v` was never inserted.
    pub fn find(&self, v: VertexId) -> Option<VertexId> {
        let s = *self.slot_of.get(&v)?;
        Some(self.ids[self.root_slot(s) as usize])
    }

    /// Like [`find`](Self::find) but compresses the walked path when enabled.
    pub fn find_mut(&mut self, v: VertexId) -> Option<VertexId> {
        let s = *self.slot_of.get(&v)?;
        let r = self.root_slot_mut(s);
        Some(self.ids[r as usize])
    }

    pub fn same_set(&self, u: VertexId, v: VertexId) -> bool {
        match (self.find(u), self.find(v)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    /// Inserts the undirected edge `(u, v)`, auto-registering both endpoints.
    pub fn union(&mut self, u: VertexId, v: VertexId) -> Option<LinkEvent> {
        self.union_slots(u, v).2
    }

    /// [`union`](Self::union) that also returns the slots of `u` and `v`.
    pub(crate) fn union_slots(&mut self, u: VertexId, v: VertexId) -> (u32, u32, Option<LinkEvent>) {
        let su = self.insert(u);
        let sv = self.insert(v);
        if su == sv {
            return (su, sv, None);
        }
        let ru = self.root_slot_mut(su);
        let rv = self.root_slot_mut(sv);
        if ru == rv {
            return (su, sv, None);
        }
        let ru_child = links_under(
            self.ids[ru as usize],
            self.size[ru as usize],
            self.ids[rv as usize],
            self.size[rv as usize],
        );
        let (child, parent) = if ru_child { (ru, rv) } else { (rv, ru) };
        self.parent[child as usize] = parent;
        self.size[parent as usize] += self.size[child as usize];
        self.roots -= 1;
        let link = LinkEvent {
            child_root: self.ids[child as usize],
            parent_root: self.ids[parent as usize],
        };
        (su, sv, Some(link))
    }

    pub(crate) fn slot(&self, v: VertexId) -> Option<u32> {
        self.slot_of.get(&v).copied()
    }

    /// Root of the vertex stored in slot `s`.
    pub(crate) fn find_slot(&self, s: u32) -> VertexId {
        self.ids[self.root_slot(s) as usize]
    }

    pub fn parent_of(&self, v: VertexId) -> Option<VertexId> {
        let s = *self.slot_of.get(&v)?;
        Some(self.ids[self.parent[s as usize] as usize])
    }

    /// Size of the tree rooted at `root`; `None` if `root` is absent or not a root.
    pub fn tree_size(&self, root: VertexId) -> Option<usize> {
        let s = *self.slot_of.get(&root)?;
        (self.parent[s as usize] == s).then(|| self.size[s as usize] as usize)
    }

    /// Number of parent links between `v` and its root.
    pub fn depth(&self, v: VertexId) -> Option<usize> {
        let mut s = *self.slot_of.get(&v)?;
        let mut d = 0;
        while self.parent[s as usize] != s {
            s = self.parent[s as usize];
            d += 1;
        }
        Some(d)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ids.iter().copied()
    }

    pub fn roots(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ids
            .iter()
            .enumerate()
            .filter(|&(s, _)| self.parent[s] == s as u32)
            .map(|(_, &v)| v)
    }

    /// Drops all vertices, keeping allocations. The step counter is kept.
    pub fn clear(&mut self) {
        self.slot_of.clear();
        self.ids.clear();
        self.parent.clear();
        self.size.clear();
        self.roots = 0;
    }

    /// Checks the size bookkeeping and the union-by-size depth bound.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut counted = vec![0u32; self.ids.len()];
        for s in 0..self.ids.len() as u32 {
            let r = {
                let mut c = s;
                while self.parent[c as usize] != c {
                    c = self.parent[c as usize];
                }
                c
            };
            counted[r as usize] += 1;
        }
        let mut roots = 0;
        for (s, &v) in self.ids.iter().enumerate() {
            if self.parent[s] as usize != s {
                continue;
            }
            roots += 1;
            if counted[s] != self.size[s] {
                return Err(format!("root {v}: size {} but {} members", self.size[s], counted[s]));
            }
        }
        if roots != self.roots {
            return Err(format!("root count {} but {} roots", self.roots, roots));
        }
        for (s, &v) in self.ids.iter().enumerate() {
            let d = self.depth(v).unwrap();
            let root = self.root_slot(s as u32) as usize;
            let bound = (self.size[root] as f64).log2().floor() as usize + 1;
            if d + 1 > bound {
                return Err(format!("vertex {v}: path of {} vertices exceeds bound {bound}", d + 1));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::{BTreeMap, BTreeSet};

    /// Component labels by iterative DFS; label = smallest vertex in component.
    fn dfs_components(edges: &[(u64, u64)]) -> BTreeMap<u64, u64> {
        let mut adj: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(u, v) in edges {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let mut label = BTreeMap::new();
        for &start in adj.keys() {
            if label.contains_key(&start) {
                continue;
            }
            let mut stack = vec![start];
            label.insert(start, start);
            while let Some(x) = stack.pop() {
                for &y in &adj[&x] {
                    if !label.contains_key(&y) {
                        label.insert(y, start);
                        stack.push(y);
                    }
                }
            }
        }
        label
    }

    #[test]
    fn singleton_and_absent() {
        let mut uf = UnionFind::new();
        assert!(!uf.contains(1));
        assert_eq!(uf.find(1), None);
        uf.insert(7);
        assert_eq!(uf.find(7), Some(7));
        assert_eq!(uf.component_count(), 1);
    }

    #[test]
    fn union_self_is_noop() {
        let mut uf = UnionFind::new();
        assert_eq!(uf.union(4, 4), None);
        assert!(uf.contains(4));
        assert_eq!(uf.component_count(), 1);
    }

    #[test]
    fn tie_break_larger_id_becomes_child() {
        let mut uf = UnionFind::new();
        let ev = uf.union(9, 5).unwrap();
        assert_eq!(ev, LinkEvent { child_root: 9, parent_root: 5 });
        let mut uf = UnionFind::new();
        assert_eq!(uf.union(5, 9).unwrap().child_root, 9);
    }

    #[test]
    fn smaller_tree_becomes_child() {
        let mut uf = UnionFind::new();
        uf.union(1, 2);
        uf.union(1, 3);
        let ev = uf.union(0, 3).unwrap();
        assert_eq!(ev, LinkEvent { child_root: 0, parent_root: 1 });
        assert_eq!(uf.tree_size(1), Some(4));
        assert_eq!(uf.component_count(), 1);
        assert!(uf.contains(1));
    }

    #[test]
    fn forward_buffer_of_second_chunk() {
        // f_2 of the running example, letters A=1 .. O=15.
        let (a, b, c, d, g, i, k, l, m, n, o) = (1, 2, 3, 4, 7, 9, 11, 12, 13, 14, 15);
        let mut uf = UnionFind::new();
        for (u, v) in [(a, d), (d, i), (k, n), (k, o)] {
            uf.union(u, v);
        }
        assert_eq!(uf.union(a, i), None);
        for (u, v) in [(c, k), (b, c), (l, m), (k, l), (g, a)] {
            uf.union(u, v);
        }
        assert_eq!(uf.find(i), Some(a));
        assert_eq!(uf.find(l), Some(k));
        let ev = uf.union(i, l).unwrap();
        assert_eq!(ev, LinkEvent { child_root: a, parent_root: k });
    }

    #[test]
    fn compression_preserves_roots() {
        let mut plain = UnionFind::new();
        let mut comp = UnionFind::with_path_compression();
        let edges: Vec<(u64, u64)> = (0..200u64).map(|i| (i * 7 % 61, i * 13 % 59)).collect();
        for &(u, v) in &edges {
            assert_eq!(plain.union(u, v), comp.union(u, v));
        }
        for v in plain.vertices().collect::<Vec<_>>() {
            assert_eq!(plain.find(v), comp.find_mut(v));
        }
    }

    fn edge_seq() -> impl Strategy<Value = Vec<(u64, u64)>> {
        proptest::collection::vec((0u64..50, 0u64..50), 0..150)
    }

    proptest! {
        #[test]
        fn partition_matches_dfs(edges in edge_seq()) {
            let mut uf = UnionFind::new();
            for &(u, v) in &edges {
                uf.union(u, v);
            }
            let comps = dfs_components(&edges);
            prop_assert_eq!(uf.len(), comps.len());
            let distinct: BTreeSet<_> = comps.values().collect();
            prop_assert_eq!(uf.component_count(), distinct.len());
            for (&x, &lx) in &comps {
                for (&y, &ly) in &comps {
                    prop_assert_eq!(uf.same_set(x, y), lx == ly);
                }
            }
            uf.check_invariants().map_err(TestCaseError::fail)?;
        }

        #[test]
        fn replay_is_deterministic(edges in edge_seq()) {
            let mut a = UnionFind::new();
            let mut b = UnionFind::new();
            for &(u, v) in &edges {
                prop_assert_eq!(a.union(u, v), b.union(u, v));
            }
            for v in a.vertices() {
                prop_assert_eq!(a.parent_of(v), b.parent_of(v));
            }
        }

        #[test]
        fn links_join_roots_smaller_under_larger(edges in edge_seq()) {
            let mut uf = UnionFind::new();
            for &(u, v) in &edges {
                let before = uf.clone();
                if let Some(ev) = uf.union(u, v) {
                    prop_assert_ne!(ev.child_root, ev.parent_root);
                    let cs = before.tree_size(ev.child_root).unwrap_or(1);
                    let ps = before.tree_size(ev.parent_root).unwrap_or(1);
                    prop_assert!(cs < ps || (cs == ps && ev.child_root > ev.parent_root));
                }
            }
        }
    }
}
