//! Solve configuration parsing (TOML).
