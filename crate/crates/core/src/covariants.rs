//! The invariant `Ψ0` and covariants `Ψ6`, `Ψ14`, `Ψ21` of a ternary quartic.
//!
//! Normalizations: `Ψ6 = -1/54 · Hessian`, `Ψ14 = 1/9 · (bordered Hessian
//! with ∇Ψ6)`, `Ψ21 = 1/14 · Jacobian(F, Ψ6, Ψ14)` and
//! `Ψ0 = 1/5184 · D^4 (F(x1,y1,z1) F(x2,y2,z2) F(x3,y3,z3))` where `D` is the
//! 3x3 determinant of partial-derivative operators. With these choices a twist
//! `F` of the Klein quartic satisfies
//!
//! ```text
//! Ψ21^2 - Ψ14^3 ≡ -1728 Ψ0 Ψ6^7   (mod F)
//! ```
//!
//! and the map to the j-line is `Ψ14^3 / (Ψ0 Ψ6^7)`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::forms::{resultant, Axis, BiPoly, Elimination, Exp, TernaryForm, UniPoly};
use crate::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn require_degree(f: &TernaryForm, d: u32) -> Result<()> {
    if f.degree() != d {
        return Err(Error::WrongDegree { expected: d, found: f.degree() });
    }
    Ok(())
}

fn det3(m: &[[TernaryForm; 3]; 3]) -> TernaryForm {
    let minor = |a: &TernaryForm, b: &TernaryForm, c: &TernaryForm, d: &TernaryForm| &(a * d) - &(b * c);
    let t0 = &m[0][0] * &minor(&m[1][1], &m[1][2], &m[2][1], &m[2][2]);
    let t1 = &m[0][1] * &minor(&m[1][0], &m[1][2], &m[2][0], &m[2][2]);
    let t2 = &m[0][2] * &minor(&m[1][0], &m[1][1], &m[2][0], &m[2][1]);
    &(&t0 - &t1) + &t2
}

fn second_partials(f: &TernaryForm) -> [[TernaryForm; 3]; 3] {
    let g = f.gradient();
    [0, 1, 2].map(|i| Axis::ALL.map(|a| g[i].partial(a)))
}

/// `Ψ6(F) = -1/54 · det(∂²F)`.
pub fn hessian_covariant(f: &TernaryForm) -> Result<TernaryForm> {
    require_degree(f, 4)?;
    let h = det3(&second_partials(f));
    let h = if h.is_zero() { TernaryForm::zero(6) } else { h };
    Ok(h.scale(&BigRational::new((-1).into(), 54.into())))
}

/// `Ψ14(F) = 1/9 · det [[∂²F, ∇Ψ6], [∇Ψ6ᵀ, 0]]`.
pub fn psi14(f: &TernaryForm, psi6: &TernaryForm) -> Result<TernaryForm> {
    require_degree(f, 4)?;
    require_degree(psi6, 6)?;
    let h = second_partials(f);
    let g = psi6.gradient();
    // expansion along the last row; the corner entry is zero
    let mut total = TernaryForm::zero(14);
    for col in 0..3 {
        // minor deleting row 3 and column `col`: rows 0..3 of [h | g]
        let cols: Vec<usize> = (0..4).filter(|&c| c != col).collect();
        let entry = |r: usize, c: usize| if c < 3 { h[r][c].clone() } else { g[r].clone() };
        let minor = det3(&[0, 1, 2].map(|r| [0, 1, 2].map(|k| entry(r, cols[k]))));
        let sign = if (3 + col) % 2 == 0 { 1 } else { -1 };
        let term = (&g[col] * &minor).scale_int(sign);
        if !term.is_zero() {
            total = &total + &term;
        }
    }
    Ok(total.scale(&BigRational::new(1.into(), 9.into())))
}

/// `Ψ21(F) = 1/14 · det [∇F; ∇Ψ6; ∇Ψ14]`.
pub fn psi21(f: &TernaryForm, psi6: &TernaryForm, psi14: &TernaryForm) -> Result<TernaryForm> {
    require_degree(f, 4)?;
    require_degree(psi6, 6)?;
    require_degree(psi14, 14)?;
    let j = det3(&[f.gradient(), psi6.gradient(), psi14.gradient()]);
    let j = if j.is_zero() { TernaryForm::zero(21) } else { j };
    Ok(j.scale(&BigRational::new(1.into(), 14.into())))
}

/// Index of a quartic monomial in [`quartic_monomials`].
fn quartic_monomials() -> &'static [Exp; 15] {
    static MONOS: OnceLock<[Exp; 15]> = OnceLock::new();
    MONOS.get_or_init(|| {
        let mut out = [[0; 3]; 15];
        let mut k = 0;
        for i in (0..=4).rev() {
            for j in (0..=4 - i).rev() {
                out[k] = [i, j, 4 - i - j];
                k += 1;
            }
        }
        out
    })
}

/// `Ψ0` as an explicit cubic polynomial in the 15 quartic coefficients,
/// obtained once by expanding `D^4` over all 6^4 products of permutation
/// terms.
fn psi0_polynomial() -> &'static [([usize; 3], BigRational)] {
    static POLY: OnceLock<Vec<([usize; 3], BigRational)>> = OnceLock::new();
    POLY.get_or_init(|| {
        const PERMS: [([usize; 3], i64); 6] =
            [([0, 1, 2], 1), ([0, 2, 1], -1), ([1, 0, 2], -1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([2, 1, 0], -1)];
        let monos = quartic_monomials();
        let index = |e: &Exp| monos.iter().position(|m| m == e).unwrap();
        let fact = [1i64, 1, 2, 6, 24];
        let mut acc: std::collections::BTreeMap<[usize; 3], i64> = Default::default();
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    for d in 0..6 {
                        let seq = [PERMS[a], PERMS[b], PERMS[c], PERMS[d]];
                        let sign: i64 = seq.iter().map(|p| p.1).product();
                        // derivative multi-index applied to each of the three copies
                        let mut alpha = [[0u32; 3]; 3];
                        for (perm, _) in &seq {
                            for copy in 0..3 {
                                alpha[copy][perm[copy]] += 1;
                            }
                        }
                        // ∂^α x^α = α!, other monomials die
                        let weight: i64 =
                            alpha.iter().map(|e| e.iter().map(|&k| fact[k as usize]).product::<i64>()).product();
                        let mut key = [index(&alpha[0]), index(&alpha[1]), index(&alpha[2])];
                        key.sort();
                        *acc.entry(key).or_default() += sign * weight;
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, v)| *v != 0).map(|(k, v)| (k, BigRational::new(v.into(), 5184.into()))).collect()
    })
}

/// The degree-3 invariant `Ψ0(F)`.
pub fn psi0(f: &TernaryForm) -> Result<BigRational> {
    require_degree(f, 4)?;
    let coeffs: Vec<BigRational> = quartic_monomials().iter().map(|e| f.coeff(e)).collect();
    Ok(psi0_polynomial()
        .iter()
        .fold(BigRational::zero(), |acc, (k, c)| acc + c * &coeffs[k[0]] * &coeffs[k[1]] * &coeffs[k[2]]))
}

/// Value of the j-map at a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum JValue {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for JValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JValue::Finite(q) => f.write_str(&crate::arith::rational_to_string(q)),
            JValue::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for JValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(JValue::Infinity);
        }
        s.parse::<BigRational>().map(JValue::Finite).map_err(|_| Error::Parse(format!("bad j-value '{s}'")))
    }
}

/// `Ψ0` together with `Ψ6`, `Ψ14`, `Ψ21` of one quartic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovariantSet {
    pub source: TernaryForm,
    pub psi0: BigRational,
    pub psi6: TernaryForm,
    pub psi14: TernaryForm,
    pub psi21: TernaryForm,
}

impl CovariantSet {
    pub fn new(f: &TernaryForm) -> Result<Self> {
        let psi0 = psi0(f)?;
        let psi6 = hessian_covariant(f)?;
        let psi14 = psi14(f, &psi6)?;
        let psi21 = psi21(f, &psi6, &psi14)?;
        Ok(CovariantSet { source: f.clone(), psi0, psi6, psi14, psi21 })
    }

    /// `Ψ21² − Ψ14³ + 1728·Ψ0·Ψ6⁷` reduced modulo the source quartic.
    pub fn syzygy_residue(&self) -> TernaryForm {
        let lhs = &self.psi21.pow(2) - &self.psi14.pow(3);
        let rhs = self.psi6.pow(7).scale(&(&self.psi0 * rat(1728)));
        let total = &lhs + &rhs;
        total.reduce_mod(&self.source, Elimination::Auto).expect("nonzero quartic modulus")
    }

    /// Syzygy holds and `Ψ0 ≠ 0`.
    pub fn is_klein_twist(&self) -> bool {
        !self.psi0.is_zero() && self.syzygy_residue().is_zero()
    }

    /// Values `(Ψ6(P), Ψ14(P), Ψ21(P))`.
    pub fn eval(&self, pt: &[BigInt; 3]) -> [BigRational; 3] {
        [self.psi6.eval_int(pt), self.psi14.eval_int(pt), self.psi21.eval_int(pt)]
    }

    /// `Ψ14(P)³ / (Ψ0·Ψ6(P)⁷)`.
    pub fn j_at(&self, pt: &[BigInt; 3]) -> Result<JValue> {
        if self.psi0.is_zero() {
            return Err(Error::VanishingInvariant);
        }
        if !self.source.eval_int(pt).is_zero() {
            return Err(Error::NotOnCurve(format!("({}:{}:{})", pt[0], pt[1], pt[2])));
        }
        let [p6, p14, p21] = self.eval(pt);
        let vanishing = [&p6, &p14, &p21].iter().filter(|v| v.is_zero()).count();
        if vanishing > 1 {
            return Err(Error::Internal("two covariants vanish at one curve point".into()));
        }
        if p6.is_zero() {
            return Ok(JValue::Infinity);
        }
        let num = num_traits::pow(p14, 3);
        let den = &self.psi0 * num_traits::pow(p6, 7);
        Ok(JValue::Finite(num / den))
    }
}

/// True iff `Ψ21² − Ψ14³ + 1728Ψ0Ψ6⁷ ≡ 0 (mod f)`.
pub fn syzygy_check(f: &TernaryForm) -> bool {
    CovariantSet::new(f).map(|c| c.syzygy_residue().is_zero()).unwrap_or(false)
}

/// j-map value of a point on `f`.
pub fn j_invariant(f: &TernaryForm, pt: &[BigInt; 3]) -> Result<JValue> {
    CovariantSet::new(f)?.j_at(pt)
}

fn dehomogenize(f: &TernaryForm) -> BiPoly {
    let terms = f.dehomogenize_z();
    let dv = terms.keys().map(|k| k.1 as usize).max().unwrap_or(0);
    let mut rows: Vec<Vec<BigRational>> = vec![Vec::new(); dv + 1];
    for ((i, j), c) in terms {
        let row = &mut rows[j as usize];
        if row.len() <= i as usize {
            row.resize(i as usize + 1, BigRational::zero());
        }
        row[i as usize] = c;
    }
    UniPoly::new(rows.into_iter().map(UniPoly::new).collect())
}

/// Resultant in `v` of `f(u, v, 1)` and its Hessian `Ψ6(u, v, 1)`; its roots
/// are the `u`-coordinates of the affine flexes.
pub fn flex_resultant(f: &TernaryForm) -> Result<UniPoly<BigRational>> {
    let hess = hessian_covariant(f)?;
    let df = dehomogenize(f);
    let dh = dehomogenize(&hess);
    let constant_lead = |p: &BiPoly| p.leading().is_some_and(|c| c.degree() == Some(0));
    if !constant_lead(&df) && !constant_lead(&dh) {
        return Err(Error::DegenerateChart(
            "leading coefficients in v of the quartic and its Hessian both depend on u".into(),
        ));
    }
    let r = resultant(&df, &dh)?;
    if r.is_zero() {
        return Err(Error::DegenerateChart("the quartic and its Hessian share a component".into()));
    }
    Ok(r)
}

/// Monic version of a rational polynomial.
pub fn monic(p: &UniPoly<BigRational>) -> UniPoly<BigRational> {
    match p.leading() {
        Some(l) => p.scale(&(BigRational::one() / l)),
        None => p.clone(),
    }
}
