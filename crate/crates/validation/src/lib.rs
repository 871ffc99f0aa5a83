//! Acceptance checks for nervekit live in `tests/acceptance.rs`; run them with
//! `cargo test -p nervekit-validation --test acceptance`.
