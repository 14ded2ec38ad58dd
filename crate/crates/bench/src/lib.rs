//! Criterion benchmarks of the `cfield` kernels; see `benches/kernels.rs`.
