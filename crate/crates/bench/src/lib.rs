//! Criterion benchmarks for the triad model; see `benches/`.
