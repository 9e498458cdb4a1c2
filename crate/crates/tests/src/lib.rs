//! End-to-end acceptance checks for the workspace.
//!
//! The checks live in `tests/acceptance.rs`, which prints one PASS or FAIL
//! line per criterion. Run them with `cargo test -p lightcone-tests`.
