//! Shared inputs for the benchmarks.

use gfe_core::twists::{catalog, x_e7_quartic};
use gfe_core::{EllipticCoeffs, TernaryForm};

/// A catalog quartic by label.
pub fn curve(label: &str) -> TernaryForm {
    catalog().get(label).expect("catalog label").form.clone()
}

/// `X_E(7)` for `Y^2 = X^3 + aX + b`.
pub fn twist(a: i64, b: i64) -> TernaryForm {
    x_e7_quartic(&EllipticCoeffs::new(a.into(), b.into()).expect("nonsingular curve"))
}
