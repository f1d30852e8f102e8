//! Criterion benchmarks for the odgrid engines; see `benches/engines.rs`.
