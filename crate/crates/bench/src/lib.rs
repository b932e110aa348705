//! Generators, runner and metrics for benchmarking the window engines.

pub mod gen;
pub mod metrics;
pub mod runner;

pub use metrics::{median_memory, percentile, Metrics, PercentileError};
pub use runner::{results_jsonl, run_edges, run_reader, write_results, EngineKind, RunConfig, RunOutput};
