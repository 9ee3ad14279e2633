//! Criterion benchmarks for `nctorus`; see `benches/`.
