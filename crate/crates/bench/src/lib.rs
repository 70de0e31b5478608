//! Criterion benchmarks for `entangle-core`; see `benches/`.
