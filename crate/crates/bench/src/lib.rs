//! Criterion benchmarks for floquet-core live in `benches/`.
