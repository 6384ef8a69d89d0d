//! Exact arithmetic toolkit for the primitive solutions of `x^2 + y^3 = z^7`.
//!
//! The crate is organised around the pipeline that turns twists of the Klein
//! quartic into solutions of the generalized Fermat equation:
//!
//! * [`forms`] – exact ternary forms, univariate resultants and integer
//!   matrix normal forms.
//! * [`covariants`] – the invariant `Ψ0` and the covariants `Ψ6`, `Ψ14`,
//!   `Ψ21` of a ternary quartic, the syzygy certificate and the j-map.
//! * [`twists`] – the curve catalog and twist constructions.
//! * [`localtest`] – the p-adic residue-class local solubility test.
//! * [`solutions`] – recovery of primitive solutions from curve points.
//! * [`zeta`] – point counts over finite fields and Jacobian orders.
//! * [`models`] – component groups from intersection matrices.
//! * [`sieve`] – the Mordell–Weil sieve constraint combinator.

pub mod arith;
pub mod covariants;
mod error;
pub mod fixtures;
pub mod forms;
pub mod localtest;
pub mod models;
pub mod sieve;
pub mod solutions;
pub mod twists;
pub mod zeta;

pub use covariants::{CovariantSet, JValue};
pub use error::{Error, Result};
pub use forms::{Axis, IntMatrix, TernaryForm, UniPoly};
pub use localtest::{LocalVerdict, ResidueClass, ValuationBounds};
pub use models::{ComponentGroup, IntersectionData};
pub use sieve::{SieveConstraint, SieveState};
pub use solutions::{PrimitiveSolution, ProjPoint, Recovery, SepticCurve};
pub use twists::{Case1Twist, CurveCatalog, EllipticCoeffs};
pub use zeta::{Fq, LPolynomial};
