//! Seeded stream and query-workload generators.

use std::io::{self, BufRead, Write};

use bic_core::{parse_edge, Line, StreamError, StreamingEdge, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StreamGen {
    pub vertices: u64,
    pub edges: u64,
    pub edges_per_ts: u64,
    pub seed: u64,
}

impl StreamGen {
    /// Number of distinct timestamps the edges are spread over.
    pub fn timestamps(&self) -> u64 {
        self.edges.div_ceil(self.edges_per_ts.max(1)).max(1)
    }

    /// Every edge draws a timestamp uniformly from `0..timestamps()`, so the
    /// per-timestamp counts are multinomial with mean `edges_per_ts`.
    pub fn edges(&self) -> Vec<StreamingEdge> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let span = self.timestamps();
        let mut per_ts = vec![0u32; span as usize];
        for _ in 0..self.edges {
            per_ts[rng.random_range(0..span) as usize] += 1;
        }
        let n = self.vertices.max(1);
        let mut out = Vec::with_capacity(self.edges as usize);
        for (ts, &k) in per_ts.iter().enumerate() {
            for _ in 0..k {
                let u = rng.random_range(0..n);
                let v = rng.random_range(0..n);
                out.push(StreamingEdge::new(u, v, ts as u64));
            }
        }
        out
    }

    pub fn write<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "# vertices={} edges={} edges_per_ts={} seed={}",
            self.vertices, self.edges, self.edges_per_ts, self.seed
        )?;
        for e in self.edges() {
            writeln!(out, "{} {} {}", e.u, e.v, e.ts)?;
        }
        out.flush()
    }
}

/// Distinct endpoints in order of first appearance.
pub fn vertices_seen<'a, I>(edges: I) -> Vec<VertexId>
where
    I: IntoIterator<Item = &'a StreamingEdge>,
{
    let mut seen = FxHashSet::default();
    let mut order = Vec::new();
    for e in edges {
        for x in [e.u, e.v] {
            if seen.insert(x) {
                order.push(x);
            }
        }
    }
    order
}

/// `count` pairs drawn uniformly with replacement from `vertices`.
pub fn sample_queries(vertices: &[VertexId], count: usize, seed: u64) -> Vec<(VertexId, VertexId)> {
    if vertices.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u = vertices[rng.random_range(0..vertices.len())];
            let v = vertices[rng.random_range(0..vertices.len())];
            (u, v)
        })
        .collect()
}

pub fn read_edges<R: BufRead>(source: R) -> Result<Vec<StreamingEdge>, StreamError> {
    let mut out = Vec::new();
    for (i, text) in source.lines().enumerate() {
        if let Line::Edge(e) = parse_edge(&text?, i as u64 + 1)? {
            out.push(e);
        }
    }
    Ok(out)
}

pub fn write_queries<W: Write>(queries: &[(VertexId, VertexId)], mut out: W) -> io::Result<()> {
    for (u, v) in queries {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

/// Parses `<u> <v>` lines; blank and `#` lines are skipped.
pub fn read_queries<R: BufRead>(source: R) -> Result<Vec<(VertexId, VertexId)>, StreamError> {
    let mut out = Vec::new();
    for (i, text) in source.lines().enumerate() {
        let text = text?;
        let line = i as u64 + 1;
        let t = text.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = |reason: String| StreamError::Parse { line, reason };
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(bad(format!("expected `<u> <v>`, got {t:?}")));
        }
        let parse = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("{s:?}: {e}")));
        out.push((parse(toks[0])?, parse(toks[1])?));
    }
    Ok(out)
}
