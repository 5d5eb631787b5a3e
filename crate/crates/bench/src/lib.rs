//! Criterion benchmarks for table enumeration and character computation live under `benches/`.
