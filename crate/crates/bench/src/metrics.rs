//! Run metrics: throughput, per-window latency percentiles and median
//! structure sizes.

use bic_core::MemoryCounters;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PercentileError {
    #[error("no samples")]
    Empty,
    #[error("percentile {0} outside (0, 1]")]
    OutOfRange(f64),
}

/// Nearest-rank percentile: the element at index `ceil(p * n) - 1` of the
/// sorted samples.
pub fn percentile(samples: &[u64], p: f64) -> Result<u64, PercentileError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(PercentileError::OutOfRange(p));
    }
    if samples.is_empty() {
        return Err(PercentileError::Empty);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    Ok(sorted[nearest_rank(sorted.len(), p) - 1])
}

fn nearest_rank(n: usize, p: f64) -> usize {
    // guard against 0.95 * 100 = 95.00000000000001
    let raw = p * n as f64;
    let rounded = raw.round();
    let rank = if (raw - rounded).abs() < 1e-9 { rounded } else { raw.ceil() };
    (rank as usize).clamp(1, n)
}

/// Per-field lower median.
pub fn median_memory(samples: &[MemoryCounters]) -> MemoryCounters {
    fn med(mut v: Vec<u64>) -> u64 {
        if v.is_empty() {
            return 0;
        }
        v.sort_unstable();
        v[(v.len() - 1) / 2]
    }
    let field = |f: fn(&MemoryCounters) -> u64| med(samples.iter().map(f).collect());
    MemoryCounters {
        forward_nodes: field(|m| m.forward_nodes),
        auft_nodes: field(|m| m.auft_nodes),
        auft_uftes: field(|m| m.auft_uftes),
        bfbg_nodes: field(|m| m.bfbg_nodes),
        bfbg_edges: field(|m| m.bfbg_edges),
        bfbg_intervals: field(|m| m.bfbg_intervals),
        chunk_edges_stored: field(|m| m.chunk_edges_stored),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub engine: String,
    pub total_edges: u64,
    pub windows: u64,
    pub wall_time_ns: u64,
    /// Edges per second.
    pub throughput: f64,
    pub latency_samples_ns: Vec<u64>,
    pub p50_ns: u64,
    pub p95_ns: u64,
    pub p99_ns: u64,
    /// Union-find hops over the whole run.
    pub steps: u64,
    pub memory_counters: MemoryCounters,
}

impl Metrics {
    pub fn new(
        engine: &str,
        total_edges: u64,
        wall_time_ns: u64,
        latency_samples_ns: Vec<u64>,
        steps: u64,
        memory_counters: MemoryCounters,
    ) -> Self {
        let pct = |p| percentile(&latency_samples_ns, p).unwrap_or(0);
        let secs = wall_time_ns as f64 / 1e9;
        Self {
            engine: engine.to_string(),
            total_edges,
            windows: latency_samples_ns.len() as u64,
            wall_time_ns,
            throughput: if secs > 0.0 { total_edges as f64 / secs } else { 0.0 },
            p50_ns: pct(0.5),
            p95_ns: pct(0.95),
            p99_ns: pct(0.99),
            latency_samples_ns,
            steps,
            memory_counters,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nearest_rank_examples() {
        let hundred: Vec<u64> = (1..=100).rev().collect();
        assert_eq!(percentile(&hundred, 0.95), Ok(95));
        assert_eq!(percentile(&hundred, 0.99), Ok(99));
        assert_eq!(percentile(&hundred, 1.0), Ok(100));
        assert_eq!(percentile(&[42], 0.01), Ok(42));
        assert_eq!(percentile(&[42], 0.99), Ok(42));
        let ten: Vec<u64> = (1..=10).collect();
        assert_eq!(percentile(&ten, 0.99), Ok(10));
        assert_eq!(percentile(&ten, 0.5), Ok(5));
        assert_eq!(percentile(&[], 0.5), Err(PercentileError::Empty));
        assert_eq!(percentile(&ten, 0.0), Err(PercentileError::OutOfRange(0.0)));
        assert!(percentile(&ten, 1.5).is_err());
    }

    #[test]
    fn median_of_counters() {
        let m = |x| MemoryCounters {
            forward_nodes: x,
            bfbg_edges: 10 - x,
            ..MemoryCounters::default()
        };
        let got = median_memory(&[m(1), m(7), m(3)]);
        assert_eq!(got.forward_nodes, 3);
        assert_eq!(got.bfbg_edges, 7);
        assert_eq!(median_memory(&[]), MemoryCounters::default());
    }

    proptest! {
        #[test]
        fn percentile_is_a_sample_with_enough_mass_below(
            samples in proptest::collection::vec(0u64..1000, 1..200),
            p in 0.001f64..=1.0,
        ) {
            let x = percentile(&samples, p).unwrap();
            let at_most = samples.iter().filter(|&&s| s <= x).count() as f64;
            let below = samples.iter().filter(|&&s| s < x).count() as f64;
            let n = samples.len() as f64;
            prop_assert!(at_most >= (p * n).ceil() - 1e-6);
            prop_assert!(below < (p * n).ceil() + 1e-6);
        }

        #[test]
        fn metrics_json_round_trip(
            samples in proptest::collection::vec(any::<u64>(), 0..50),
            edges in any::<u64>(),
            wall in 1u64..u64::MAX,
            steps in any::<u64>(),
            mem in any::<[u64; 7]>(),
        ) {
            let mc = MemoryCounters {
                forward_nodes: mem[0],
                auft_nodes: mem[1],
                auft_uftes: mem[2],
                bfbg_nodes: mem[3],
                bfbg_edges: mem[4],
                bfbg_intervals: mem[5],
                chunk_edges_stored: mem[6],
            };
            let m = Metrics::new("bic", edges, wall, samples, steps, mc);
            let text = serde_json::to_string(&m).unwrap();
            let back: Metrics = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
