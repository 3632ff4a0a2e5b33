//! Acceptance checks for the workspace live in `tests/acceptance.rs`. They
//! run as a separate package so every other test binary has reported before
//! the acceptance summary.
