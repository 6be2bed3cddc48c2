//! Criterion benchmarks for `sphereperc-core`. See `benches/`.
