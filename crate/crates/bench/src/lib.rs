//! Benchmark-only crate; see `benches/counters.rs`.
