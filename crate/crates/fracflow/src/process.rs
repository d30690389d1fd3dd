//! Monte Carlo process constructions.
