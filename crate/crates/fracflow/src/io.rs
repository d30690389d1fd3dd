//! Field and ensemble file I/O.
