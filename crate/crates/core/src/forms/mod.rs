//! Exact arithmetic foundation: ternary forms over the rationals, dense
//! univariate polynomials with resultants, and integer matrix normal forms.

mod matrix;
mod parse;
mod ternary;
mod unipoly;

pub use matrix::{hermite_normal_form, hnf_kernel_basis, smith_normal_form, solve_in_hnf, IntMatrix, Smith};
pub use ternary::{Axis, Elimination, Exp, TernaryForm};
pub use unipoly::{bareiss_det, format_bipoly, parse_bipoly, resultant, BiPoly, Ring, UniPoly};

/// `lhs (op) rhs` with degree checking for addition and subtraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(lhs: &TernaryForm, rhs: &TernaryForm, op: PolyOp) -> crate::Result<TernaryForm> {
    match op {
        PolyOp::Add => lhs.checked_add(rhs),
        PolyOp::Sub => lhs.checked_sub(rhs),
        PolyOp::Mul => Ok(lhs * rhs),
    }
}

/// `g mod f`, zero exactly when `f | g`.
pub fn reduce_mod_form(g: &TernaryForm, f: &TernaryForm, how: Elimination) -> crate::Result<TernaryForm> {
    g.reduce_mod(f, how)
}
