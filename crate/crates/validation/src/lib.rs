//! Acceptance checks for `secrecy-sor-core` and the `secrecy-sor` binary.
//!
//! Everything lives in `tests/acceptance.rs`; run it with
//! `cargo test -p secrecy-sor-validation --test acceptance`. It sits in its
//! own package so that a failing check does not keep cargo from running the
//! other crates' suites.
