use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::parse::{parse_sparse, write_sparse};
use crate::{Error, Result};

/// Exponent triple `(i, j, k)` of the monomial `x^i y^j z^k`.
pub type Exp = [u32; 3];

/// One of the three homogeneous coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["x", "y", "z"][self.index()])
    }
}

/// How [`TernaryForm::reduce_mod`] eliminates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elimination {
    /// Cancel against the pure power of this axis; fails if there is none.
    Axis(Axis),
    /// Multivariate division under grevlex with `x > y > z`.
    Grevlex,
    /// First axis with a pure power, otherwise grevlex.
    Auto,
}

/// Homogeneous polynomial in `x, y, z` with exact rational coefficients.
///
/// Terms are kept in a sorted map with no zero coefficients, so structural
/// equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    degree: u32,
    terms: BTreeMap<Exp, BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl TernaryForm {
    pub fn zero(degree: u32) -> Self {
        TernaryForm { degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn monomial(c: BigRational, e: Exp) -> Self {
        let mut f = Self::zero(e.iter().sum());
        if !c.is_zero() {
            f.terms.insert(e, c);
        }
        f
    }

    /// The coordinate form `x`, `y` or `z`.
    pub fn var(axis: Axis) -> Self {
        let mut e = [0; 3];
        e[axis.index()] = 1;
        Self::monomial(BigRational::one(), e)
    }

    /// Builds a form from `(coefficient, exponent)` pairs; all exponents must
    /// share one total degree.
    pub fn from_terms<I, C>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, Exp)>,
        C: Into<BigRational>,
    {
        let mut degree = None;
        let mut out = BTreeMap::new();
        for (c, e) in terms {
            let d: u32 = e.iter().sum();
            match degree {
                None => degree = Some(d),
                Some(d0) if d0 != d => return Err(Error::DegreeMismatch(d0, d)),
                _ => {}
            }
            accumulate(&mut out, e, c.into());
        }
        Ok(TernaryForm { degree: degree.unwrap_or(0), terms: out })
    }

    pub fn from_int_terms(terms: &[(i64, Exp)]) -> Result<Self> {
        Self::from_terms(terms.iter().map(|&(c, e)| (rat(c), e)))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// gcd of the numerators (content of an integral form).
    pub fn content(&self) -> BigInt {
        crate::arith::bigint_gcd_all(self.terms.values().map(|c| c.numer()))
    }

    /// Coefficients scaled to integers, paired with the scale factor used.
    pub fn integral_scaling(&self) -> (BigInt, BTreeMap<Exp, BigInt>) {
        let l = self.denominator_lcm();
        let lr = BigRational::from_integer(l.clone());
        let terms = self.terms.iter().map(|(e, c)| (*e, (c * &lr).to_integer())).collect();
        (l, terms)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, false)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &Self, negate: bool) -> Result<Self> {
        let degree = if self.is_zero() {
            rhs.degree
        } else if rhs.is_zero() || rhs.degree == self.degree {
            self.degree
        } else {
            return Err(Error::DegreeMismatch(self.degree, rhs.degree));
        };
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            accumulate(&mut terms, *e, if negate { -c } else { c.clone() });
        }
        Ok(TernaryForm { degree, terms })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        TernaryForm { degree: self.degree, terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect() }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&rat(c))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Partial derivative; the result has degree one less (zero stays degree 0).
    pub fn partial(&self, axis: Axis) -> Self {
        let i = axis.index();
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            accumulate(&mut out.terms, e2, c * rat(e[i] as i64));
        }
        out
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.partial(Axis::X), self.partial(Axis::Y), self.partial(Axis::Z)]
    }

    pub fn eval(&self, pt: &[BigRational; 3]) -> BigRational {
        let pows: Vec<Vec<BigRational>> = pt.iter().map(|v| powers(v, self.degree)).collect();
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            acc + c * &pows[0][e[0] as usize] * &pows[1][e[1] as usize] * &pows[2][e[2] as usize]
        })
    }

    pub fn eval_int(&self, pt: &[BigInt; 3]) -> BigRational {
        let (l, terms) = self.integral_scaling();
        let pows: Vec<Vec<BigInt>> = pt
            .iter()
            .map(|v| {
                let mut out = vec![BigInt::one()];
                for k in 0..self.degree as usize {
                    let next = &out[k] * v;
                    out.push(next);
                }
                out
            })
            .collect();
        let sum: BigInt = terms
            .iter()
            .map(|(e, c)| c * &pows[0][e[0] as usize] * &pows[1][e[1] as usize] * &pows[2][e[2] as usize])
            .sum();
        BigRational::new(sum, l)
    }

    /// `F^g(v) = F(g v)`: substitutes `x_i -> sum_j g[i][j] x_j`.
    pub fn linear_substitute(&self, g: &[[BigRational; 3]; 3]) -> Self {
        let images: Vec<TernaryForm> = (0..3)
            .map(|i| {
                TernaryForm::from_terms((0..3).map(|j| {
                    let mut e = [0; 3];
                    e[j] = 1;
                    (g[i][j].clone(), e)
                }))
                .expect("linear forms share degree 1")
            })
            .map(|f| if f.is_zero() { TernaryForm::zero(1) } else { f })
            .collect();
        let pows: Vec<Vec<TernaryForm>> = images.iter().map(|l| form_powers(l, self.degree)).collect();
        let mut out = TernaryForm::zero(self.degree);
        for (e, c) in &self.terms {
            let t = &(&pows[0][e[0] as usize] * &pows[1][e[1] as usize]) * &pows[2][e[2] as usize];
            out = &out + &t.scale(c);
        }
        out
    }

    /// Renames coordinates: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        TernaryForm {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = [0; 3];
                    for i in 0..3 {
                        e2[perm[i]] = e[i];
                    }
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Coefficient of the pure power of `axis` of full degree, if nonzero.
    pub fn pure_power_coeff(&self, axis: Axis) -> Option<&BigRational> {
        let mut e = [0; 3];
        e[axis.index()] = self.degree;
        self.terms.get(&e)
    }

    /// Remainder of `self` modulo the principal ideal `(f)`.
    ///
    /// With a pure power `c * axis^d` in `f` the remainder has axis degree
    /// below `d`; under grevlex no remaining term is divisible by the leading
    /// monomial of `f`. In both cases the remainder is the unique normal form,
    /// so it vanishes exactly when `f` divides `self`.
    pub fn reduce_mod(&self, f: &Self, how: Elimination) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroInput("reduce_mod_form modulus"));
        }
        match how {
            Elimination::Axis(axis) => self.reduce_along(f, axis),
            Elimination::Grevlex => Ok(self.reduce_grevlex(f)),
            Elimination::Auto => match Axis::ALL.iter().find(|a| f.pure_power_coeff(**a).is_some()) {
                Some(&axis) => self.reduce_along(f, axis),
                None => Ok(self.reduce_grevlex(f)),
            },
        }
    }

    fn reduce_along(&self, f: &Self, axis: Axis) -> Result<Self> {
        let lead = f.pure_power_coeff(axis).ok_or(Error::NoEliminationTerm(axis))?.clone();
        let i = axis.index();
        let d = f.degree;
        let mut g = self.clone();
        loop {
            let next =
                g.terms.iter().filter(|(e, _)| e[i] >= d).max_by_key(|(e, _)| e[i]).map(|(e, c)| (*e, c.clone()));
            let Some((e, c)) = next else { break };
            let mut shift = e;
            shift[i] -= d;
            g.sub_shifted(f, shift, &(c / &lead));
        }
        Ok(g)
    }

    fn reduce_grevlex(&self, f: &Self) -> Self {
        let (lead_exp, lead_coeff) =
            f.terms.iter().max_by(|a, b| grevlex(a.0, b.0)).map(|(e, c)| (*e, c.clone())).expect("nonzero modulus");
        let mut p = self.clone();
        let mut rem = TernaryForm::zero(self.degree);
        while let Some((e, c)) = p.terms.iter().max_by(|a, b| grevlex(a.0, b.0)).map(|(e, c)| (*e, c.clone())) {
            if (0..3).all(|k| e[k] >= lead_exp[k]) {
                let shift = [0, 1, 2].map(|k| e[k] - lead_exp[k]);
                p.sub_shifted(f, shift, &(c / &lead_coeff));
            } else {
                p.terms.remove(&e);
                rem.terms.insert(e, c);
            }
        }
        rem
    }

    /// `self -= c * mono(shift) * f` in place.
    fn sub_shifted(&mut self, f: &Self, shift: Exp, c: &BigRational) {
        for (e, a) in &f.terms {
            let e2 = [e[0] + shift[0], e[1] + shift[1], e[2] + shift[2]];
            accumulate(&mut self.terms, e2, -(a * c));
        }
    }

    /// Dehomogenizes at `z = 1`, giving coefficients indexed by `(deg_x, deg_y)`.
    pub fn dehomogenize_z(&self) -> BTreeMap<(u32, u32), BigRational> {
        self.terms.iter().map(|(e, c)| ((e[0], e[1]), c.clone())).collect()
    }
}

/// grevlex with `x > y > z` on exponent triples.
pub(crate) fn grevlex(a: &Exp, b: &Exp) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for k in (0..3).rev() {
            if a[k] != b[k] {
                return b[k].cmp(&a[k]);
            }
        }
        Ordering::Equal
    })
}

fn accumulate(terms: &mut BTreeMap<Exp, BigRational>, e: Exp, c: BigRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(e) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn powers(v: &BigRational, n: u32) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(BigRational::one());
    for k in 0..n as usize {
        out.push(&out[k] * v);
    }
    out
}

fn form_powers(l: &TernaryForm, n: u32) -> Vec<TernaryForm> {
    let mut out = vec![TernaryForm::one()];
    for k in 0..n as usize {
        out.push(&out[k] * l);
    }
    out
}

impl Add for &TernaryForm {
    type Output = TernaryForm;
    /// Panics on a degree mismatch; see [`TernaryForm::checked_add`].
    fn add(self, rhs: Self) -> TernaryForm {
        self.checked_add(rhs).expect("adding forms of different degree")
    }
}

impl Sub for &TernaryForm {
    type Output = TernaryForm;
    fn sub(self, rhs: Self) -> TernaryForm {
        self.checked_sub(rhs).expect("subtracting forms of different degree")
    }
}

impl Mul for &TernaryForm {
    type Output = TernaryForm;
    fn mul(self, rhs: Self) -> TernaryForm {
        // multiply integer numerators and divide once per output term
        let (l1, a) = self.integral_scaling();
        let (l2, b) = rhs.integral_scaling();
        let mut acc: BTreeMap<Exp, BigInt> = BTreeMap::new();
        for (e1, c1) in &a {
            for (e2, c2) in &b {
                *acc.entry([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]]).or_default() += c1 * c2;
            }
        }
        let den = l1 * l2;
        let terms =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e, BigRational::new(c, den.clone()))).collect();
        TernaryForm { degree: self.degree + rhs.degree, terms }
    }
}

impl Neg for &TernaryForm {
    type Output = TernaryForm;
    fn neg(self) -> TernaryForm {
        TernaryForm { degree: self.degree, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Vec<u32>, BigRational)> =
            self.terms.iter().rev().map(|(e, c)| (e.to_vec(), c.clone())).collect();
        write_sparse(f, &terms, &["x", "y", "z"])
    }
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryForm(deg {}: {})", self.degree, self)
    }
}

impl FromStr for TernaryForm {
    type Err = Error;

    /// Parses text like `6*x^3*y + y^3*z + z^3*x`. A bare `0` needs an explicit
    /// degree and parses as degree 0.
    fn from_str(s: &str) -> Result<Self> {
        let terms = parse_sparse(s, &["x", "y", "z"])?;
        TernaryForm::from_terms(terms.into_iter().map(|(e, c)| (c, [e[0], e[1], e[2]])))
    }
}
