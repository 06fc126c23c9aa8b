//! Criterion benchmarks for the infovalue kernels live in `benches/`.
