//! Problem files, built-in fixtures and trace export.

pub mod fixtures;
pub mod sdpa;
pub mod trace;

pub use fixtures::{fixture, fixtures, Fixture, FixtureProblem, KnownSolution};
pub use sdpa::{parse_sdpa_sparse, read_sdpa_sparse, write_sdpa_sparse, ParsedSdpa};
pub use trace::{emit_trace_csv, write_trace_csv, Projection, TRACE_HEADER};
