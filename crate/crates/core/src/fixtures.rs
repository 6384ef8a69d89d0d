//! Builtin data files, embedded at compile time from the workspace
//! `fixtures/` directory.

/// Ten catalog quartics and their known points.
pub const CATALOG: &str = include_str!("../../../fixtures/catalog.txt");

/// Elliptic curves attached to the catalog.
pub const ELLIPTIC: &str = include_str!("../../../fixtures/elliptic.txt");

/// Intersection data of the special fiber of C5 at 3.
pub const C5_P3_MATRIX: &str = include_str!("../../../fixtures/c5_p3.mat");

/// Reconstructed intersection data of the special fiber of C5 at 2.
pub const C5_P2_MATRIX: &str = include_str!("../../../fixtures/c5_p2.mat");

/// Sieve constraints of the C5 elimination chain, in order.
pub const SIEVE_P2: &str = include_str!("../../../fixtures/sieve/c5_p2.sieve");
pub const SIEVE_P23: &str = include_str!("../../../fixtures/sieve/c5_p23.sieve");
pub const SIEVE_P3: &str = include_str!("../../../fixtures/sieve/c5_p3.sieve");
pub const SIEVE_P97: &str = include_str!("../../../fixtures/sieve/c5_p97.sieve");
pub const SIEVE_P13: &str = include_str!("../../../fixtures/sieve/c5_p13.sieve");
