//! Empty library; the checks live in `tests/acceptance.rs`.
