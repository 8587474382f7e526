//! Benchmark-only package; the measurements live in `benches/workbench.rs`.
