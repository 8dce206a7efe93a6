//! Benchmarks for the hessmap pipeline live in `benches/`.
