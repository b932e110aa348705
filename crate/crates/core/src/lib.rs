//! Sliding-window connectivity over streaming graphs.
//!
//! Each chunk of `|c|` slides gets a forward union-find built as edges arrive
//! and, once the chunk closes, a backward structure that answers finds for
//! every suffix of the chunk. A window straddling two chunks is answered by
//! combining a suffix of the older chunk with a prefix of the newer one.

pub mod backward;
pub mod baselines;
pub mod bfbg;
pub mod engine;
pub mod stream;
pub mod union_find;

pub use backward::{AuftError, BackwardAuft, IntervalEdge, SnapshotInterval};
pub use baselines::{adjacency, dfs_query, Adjacency, oracle_all_windows, rwc_evaluate_window, DfsEngine, RwcEngine};
pub use bfbg::{Bfbg, BfbgNode, BfbgStats, IntervalSet, Reachability};
pub use engine::{BicEngine, Collector, MemoryCounters, WindowEngine, WindowResult};
pub use stream::{
    ingest, ingest_edges, parse_edge, ChunkCoord, ChunkStore, ConfigError, IngestReport, Ingestor,
    Line, Origin, SlideIndex, SlideSink, StreamError, StreamingEdge, Timestamp, VertexId,
    WindowSpec,
};
pub use union_find::{LinkEvent, StepCounter, UnionFind};
