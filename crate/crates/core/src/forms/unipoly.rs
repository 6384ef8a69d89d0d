use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::parse::{parse_sparse, write_sparse};
use crate::{Error, Result};

/// Commutative ring with exact division, enough for fraction-free
/// elimination.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / rhs` when the quotient is known to exist in the ring.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!Zero::is_zero(rhs)).then(|| self / rhs)
    }
}

/// Dense univariate polynomial; `coeffs[i]` multiplies `t^i`.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is
/// the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k];
        v.push(c);
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn eval(&self, t: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc.mul(t).add(c))
    }
}

impl UniPoly<BigRational> {
    /// Euclidean division, `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroInput("polynomial divisor"))?;
        let lead = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![<BigRational as Zero>::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn divides(&self, other: &Self) -> bool {
        matches!(other.div_rem(self), Ok((_, r)) if r.is_zero())
    }

    pub fn from_int(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        match a.leading().cloned() {
            Some(l) => a.scale(&(<BigRational as One>::one() / l)),
            None => a,
        }
    }
}

impl<R: Ring> Ring for UniPoly<R> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect())
    }
    fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }
    fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }
    /// Long division over a field-like coefficient ring; `None` unless exact.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lead = d.leading()?.clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return if r.iter().all(|c| c.is_zero()) { Some(Self::zero()) } else { None };
        }
        let mut q = vec![R::zero(); r.len() - dd];
        for k in (0..r.len() - dd).rev() {
            let top = r[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let c = top.div_exact(&lead)?;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] = r[k + i].sub(&c.mul(dc));
            }
            q[k] = c;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(Self::new(q))
        } else {
            None
        }
    }
}

impl<R: Ring> Add for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn add(self, rhs: Self) -> UniPoly<R> {
        Ring::add(self, rhs)
    }
}

impl<R: Ring> Sub for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn sub(self, rhs: Self) -> UniPoly<R> {
        Ring::sub(self, rhs)
    }
}

impl<R: Ring> Mul for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn mul(self, rhs: Self) -> UniPoly<R> {
        Ring::mul(self, rhs)
    }
}

impl<R: Ring> Neg for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn neg(self) -> UniPoly<R> {
        Ring::neg(self)
    }
}

/// Determinant by fraction-free Bareiss elimination.
pub fn bareiss_det<R: Ring>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::one();
    }
    let mut sign_flip = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = R::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

/// Sylvester resultant of two polynomials over `R`.
pub fn resultant<R: Ring>(f: &UniPoly<R>, g: &UniPoly<R>) -> Result<R> {
    let m = f.degree().ok_or(Error::ZeroInput("resultant operand"))?;
    let n = g.degree().ok_or(Error::ZeroInput("resultant operand"))?;
    if m == 0 && n == 0 {
        return Ok(R::one());
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![R::zero(); size];
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![R::zero(); size];
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    Ok(bareiss_det(rows))
}

/// Polynomial in `v` whose coefficients are polynomials in `u`.
pub type BiPoly = UniPoly<UniPoly<BigRational>>;

impl fmt::Display for UniPoly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Vec<u32>, BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !Zero::is_zero(*c))
            .map(|(i, c)| (vec![i as u32], c.clone()))
            .collect();
        write_sparse(f, &terms, &["u"])
    }
}

impl<R: Ring> fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl FromStr for UniPoly<BigRational> {
    type Err = Error;

    /// Parses a polynomial in `u`.
    fn from_str(s: &str) -> Result<Self> {
        let terms = parse_sparse(s, &["u"])?;
        let deg = terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
        let mut v = vec![<BigRational as Zero>::zero(); deg + 1];
        for (e, c) in terms {
            v[e[0] as usize] = c;
        }
        Ok(Self::new(v))
    }
}

/// Parses a polynomial in `u, v` as a polynomial in `v` over `Q[u]`.
pub fn parse_bipoly(s: &str) -> Result<BiPoly> {
    let terms = parse_sparse(s, &["u", "v"])?;
    let dv = terms.keys().map(|e| e[1] as usize).max().unwrap_or(0);
    let mut rows: Vec<Vec<BigRational>> = vec![Vec::new(); dv + 1];
    for (e, c) in terms {
        let row = &mut rows[e[1] as usize];
        if row.len() <= e[0] as usize {
            row.resize(e[0] as usize + 1, <BigRational as Zero>::zero());
        }
        row[e[0] as usize] = c;
    }
    Ok(UniPoly::new(rows.into_iter().map(UniPoly::new).collect()))
}

/// Prints a polynomial in `v` over `Q[u]` in the `u v` text format.
pub fn format_bipoly(p: &BiPoly) -> String {
    struct Show<'a>(&'a BiPoly);
    impl fmt::Display for Show<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let mut terms = Vec::new();
            for (j, cu) in self.0.coeffs().iter().enumerate().rev() {
                for (i, c) in cu.coeffs().iter().enumerate().rev() {
                    if !Zero::is_zero(c) {
                        terms.push((vec![i as u32, j as u32], c.clone()));
                    }
                }
            }
            terms.sort_by(|a, b| b.0.cmp(&a.0));
            write_sparse(f, &terms, &["u", "v"])
        }
    }
    Show(p).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> UniPoly<BigRational> {
        s.parse().unwrap()
    }

    #[test]
    fn linear_resultant() {
        let r = resultant(&q("u - 1"), &q("u + 1")).unwrap();
        assert_eq!(r, BigRational::from_integer(2.into()));
    }

    #[test]
    fn common_root_resultant() {
        let r = resultant(&q("u^2"), &q("u")).unwrap();
        assert!(Zero::is_zero(&r));
    }

    #[test]
    fn zero_operand_is_an_error() {
        assert!(resultant(&UniPoly::<BigRational>::zero(), &q("u")).is_err());
    }

    #[test]
    fn bivariate_resultant_eliminates_v() {
        // res_v(v - u, v + u) = 2u
        let f = parse_bipoly("v - u").unwrap();
        let g = parse_bipoly("v + u").unwrap();
        assert_eq!(resultant(&f, &g).unwrap(), q("2u"));
        // res_v(v^2 - u, v - 1) = 1 - u
        let f = parse_bipoly("v^2 - u").unwrap();
        let g = parse_bipoly("v - 1").unwrap();
        assert_eq!(resultant(&f, &g).unwrap(), q("1 - u"));
    }

    #[test]
    fn division() {
        let (quo, rem) = q("u^3 - 1").div_rem(&q("u - 1")).unwrap();
        assert_eq!(quo, q("u^2 + u + 1"));
        assert!(rem.is_zero());
        assert!(q("u^2 + u + 1").divides(&q("u^3 - 1")));
        assert_eq!(q("u^2 - 1").gcd(&q("2u + 2")), q("u + 1"));
    }

    #[test]
    fn text_round_trip() {
        let p = q("7u^6 - u^3 + 1");
        assert_eq!(p.to_string().parse::<UniPoly<BigRational>>().unwrap(), p);
        let b = parse_bipoly("3u^2v^2 - 3uv + v^3 + 7u^3 - 1").unwrap();
        assert_eq!(parse_bipoly(&format_bipoly(&b)).unwrap(), b);
    }
}
