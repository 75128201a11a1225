//! Criterion benchmarks for `frmod-core`; see `benches/`.
