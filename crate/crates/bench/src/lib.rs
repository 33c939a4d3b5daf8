//! Criterion benchmarks for the sumset and convolution kernels; see `benches/`.
