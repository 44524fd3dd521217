//! Holds the `acceptance` test target; see `tests/acceptance.rs`.
//!
//! The package exists so the suite runs after every other test binary in
//! `cargo test --workspace`.
