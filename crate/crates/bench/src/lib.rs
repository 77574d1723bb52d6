//! Criterion benchmarks for the ksub solvers live in `benches/`.
