//! Acceptance run (`tests/acceptance.rs`) and criterion benchmarks (`benches/engine.rs`).
