//! Primitive solutions of `x² + y³ = z⁷` from rational points on twists.
//!
//! A point `P` on a twist `F = 0` yields the triple
//!
//! ```text
//! a = (1728 Ψ0)³ Ψ21(P),  b = -(1728 Ψ0)² Ψ14(P),  c = -1728 Ψ0 Ψ6(P)
//! ```
//!
//! which satisfies `a² + b³ = c⁷` by the syzygy. It can be scaled to a
//! primitive solution exactly when `min(v_p(a)/21, v_p(b)/14, v_p(c)/6)` is an
//! integer for every prime `p`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{exact_root, factor_bigint, valuation};
use crate::covariants::CovariantSet;
use crate::forms::{Axis, Elimination, TernaryForm};
use crate::twists::{catalog, EllipticCoeffs};
use crate::{Error, Result};

/// A point of the projective plane with coprime integer coordinates whose
/// first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: [BigInt; 3],
}

impl ProjPoint {
    pub fn new(x: BigInt, y: BigInt, z: BigInt) -> Result<Self> {
        let g = x.gcd(&y).gcd(&z);
        if g.is_zero() {
            return Err(Error::ZeroInput("projective point (0:0:0)"));
        }
        let mut coords = [x / &g, y / &g, z / &g];
        if coords.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            coords = coords.map(|c| -c);
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Result<Self> {
        Self::new(x.into(), y.into(), z.into())
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.coords
    }

    /// Reduction mod `p` as a canonical point of `P²(F_p)`: the first
    /// coordinate that is a unit is scaled to 1.
    pub fn reduce_mod(&self, p: u64) -> [u64; 3] {
        let pb = BigInt::from(p);
        let r = self.coords.clone().map(|c| c.mod_floor(&pb).to_u64().unwrap());
        normalize_fp(r, p)
    }
}

/// Scales a nonzero vector over `F_p` so its first nonzero entry is 1.
pub fn normalize_fp(v: [u64; 3], p: u64) -> [u64; 3] {
    let lead = v.iter().copied().find(|&c| c != 0).expect("primitive point has a unit coordinate");
    let inv = BigInt::from(lead).modpow(&BigInt::from(p - 2), &BigInt::from(p)).to_u64().unwrap();
    v.map(|c| ((c as u128 * inv as u128) % p as u128) as u64)
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl FromStr for ProjPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected x:y:z, got '{s}'")));
        }
        let c: Vec<BigInt> = parts
            .iter()
            .map(|p| p.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coordinate '{p}'"))))
            .collect::<Result<_>>()?;
        ProjPoint::new(c[0].clone(), c[1].clone(), c[2].clone())
    }
}

/// Integers `(a, b, c)` with `a² + b³ = c⁷` and `gcd(a, b, c) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimitiveSolution {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl PrimitiveSolution {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if !verify_solution(&a, &b, &c) {
            return Err(Error::Precondition(format!("({a}, {b}, {c}) is not a primitive solution")));
        }
        Ok(PrimitiveSolution { a, b, c })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// `(-a, b, c)`.
    pub fn conjugate(&self) -> Self {
        PrimitiveSolution { a: -&self.a, b: self.b.clone(), c: self.c.clone() }
    }
}

impl fmt::Display for PrimitiveSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

impl FromStr for PrimitiveSolution {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|p| !p.is_empty()).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three integers, got '{s}'")));
        }
        let v: Vec<BigInt> = parts
            .iter()
            .map(|p| p.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer '{p}'"))))
            .collect::<Result<_>>()?;
        PrimitiveSolution::new(v[0].clone(), v[1].clone(), v[2].clone())
    }
}

/// `a² + b³ = c⁷` and `gcd(a, b, c) = 1`.
pub fn verify_solution(a: &BigInt, b: &BigInt, c: &BigInt) -> bool {
    a * a + b * b * b == num_traits::pow(c.clone(), 7) && a.gcd(b).gcd(c).is_one()
}

/// Outcome of [`recover_solution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recovery {
    Solution(PrimitiveSolution),
    /// The triple cannot be scaled to be primitive at this prime.
    NoPrimitiveScaling {
        prime: BigInt,
    },
}

impl Recovery {
    pub fn solution(&self) -> Option<&PrimitiveSolution> {
        match self {
            Recovery::Solution(s) => Some(s),
            Recovery::NoPrimitiveScaling { .. } => None,
        }
    }
}

impl fmt::Display for Recovery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recovery::Solution(s) => s.fmt(f),
            Recovery::NoPrimitiveScaling { prime } => write!(f, "no primitive scaling (obstruction at p = {prime})"),
        }
    }
}

/// Unscaled `(a, b, c)` of a curve point.
pub fn solution_triple(cov: &CovariantSet, pt: &ProjPoint) -> Result<[BigRational; 3]> {
    if cov.psi0.is_zero() {
        return Err(Error::VanishingInvariant);
    }
    if !cov.source.eval_int(pt.coords()).is_zero() {
        return Err(Error::NotOnCurve(pt.to_string()));
    }
    let [p6, p14, p21] = cov.eval(pt.coords());
    if [&p6, &p14, &p21].iter().filter(|v| v.is_zero()).count() > 1 {
        return Err(Error::Internal(format!("two covariants vanish at {pt}")));
    }
    let t = &cov.psi0 * BigRational::from_integer(1728.into());
    let t2 = &t * &t;
    let a = &t2 * &t * p21;
    let b = -(t2 * p14);
    let c = -(t * p6);
    Ok([a, b, c])
}

/// Primitive solution attached to a point, using precomputed covariants.
pub fn recover_with(cov: &CovariantSet, pt: &ProjPoint) -> Result<Recovery> {
    let [a, b, c] = solution_triple(cov, pt)?;
    // primes to examine: denominators and common factors of the numerators
    let mut primes: BTreeSet<BigInt> = BTreeSet::new();
    for q in [&a, &b, &c] {
        primes.extend(factor_bigint(q.denom()).into_iter().map(|(p, _)| p));
    }
    let g = a.numer().gcd(b.numer()).gcd(c.numer());
    if g.is_zero() {
        return Err(Error::Internal("covariant triple vanishes".into()));
    }
    primes.extend(factor_bigint(&g).into_iter().map(|(p, _)| p));

    let mut lambda = BigRational::one();
    for p in &primes {
        let pu = p.to_u64().ok_or_else(|| Error::Internal("prime factor exceeds u64".into()))?;
        let m = [(&a, 21i64), (&b, 14), (&c, 6)]
            .into_iter()
            .filter_map(|(q, w)| valuation(q, pu).map(|v| BigRational::new(v.into(), w.into())))
            .min()
            .expect("not all three vanish");
        if !m.is_integer() {
            return Ok(Recovery::NoPrimitiveScaling { prime: p.clone() });
        }
        let e = m.to_integer().to_i64().unwrap();
        let pr = BigRational::from_integer(p.clone());
        lambda *= if e >= 0 {
            num_traits::pow(pr, e as usize)
        } else {
            BigRational::one() / num_traits::pow(pr, (-e) as usize)
        };
    }
    let scale = |q: &BigRational, k: usize| -> BigInt {
        let s = q / num_traits::pow(lambda.clone(), k);
        debug_assert!(s.is_integer());
        s.to_integer()
    };
    let (mut sa, sb, sc) = (scale(&a, 21), scale(&b, 14), scale(&c, 6));
    if sa.is_negative() {
        sa = -sa;
    }
    PrimitiveSolution::new(sa, sb, sc).map(Recovery::Solution)
}

/// Primitive solution attached to a point of a Klein twist, normalized so
/// that `a >= 0`; `(-a, b, c)` is the companion solution.
pub fn recover_solution(f: &TernaryForm, pt: &ProjPoint) -> Result<Recovery> {
    recover_with(&CovariantSet::new(f)?, pt)
}

/// The curve `Y² = X³ + 3bX - 2a` of a solution and its j-invariant
/// `1728 b³ / c⁷`.
pub fn elliptic_from_solution(s: &PrimitiveSolution) -> Result<(EllipticCoeffs, BigRational)> {
    if s.b.is_zero() || s.c.is_zero() {
        return Err(Error::Precondition("elliptic curve needs b and c nonzero".into()));
    }
    let e = EllipticCoeffs::new(3 * &s.b, -2 * &s.a)?;
    let c4 = BigInt::from(-144) * &s.b;
    let delta = BigInt::from(-1728) * num_traits::pow(s.c.clone(), 7);
    let j = BigRational::new(num_traits::pow(c4, 3), delta);
    debug_assert_eq!(j, BigRational::new(1728 * num_traits::pow(s.b.clone(), 3), num_traits::pow(s.c.clone(), 7)));
    debug_assert_eq!(Some(j.clone()), e.j_invariant());
    Ok((e, j))
}

fn small_coeffs(f: &TernaryForm) -> Result<Vec<(i128, [u32; 3])>> {
    if !f.is_integral() {
        return Err(Error::Precondition("point search needs integer coefficients".into()));
    }
    f.terms()
        .map(|(e, c)| {
            c.to_integer()
                .to_i64()
                .map(|v| (v as i128, *e))
                .ok_or_else(|| Error::Precondition("coefficient too large for point search".into()))
        })
        .collect()
}

/// Canonical points with `max(|x|, |y|, |z|) <= bound` on `f = 0`, in
/// increasing order, optionally restricted by `filter`.
pub fn point_search(
    f: &TernaryForm,
    bound: u64,
    filter: Option<&(dyn Fn(&ProjPoint) -> bool + Sync)>,
) -> Result<Vec<ProjPoint>> {
    if bound == 0 {
        return Err(Error::Precondition("search bound must be at least 1".into()));
    }
    if bound > 1_000_000 {
        return Err(Error::Precondition("search bound above 10^6 is not supported".into()));
    }
    let terms = small_coeffs(f)?;
    let b = bound as i64;
    // coefficients of f(x, y, z) as a polynomial in z
    let zpoly = |x: i128, y: i128| -> Vec<i128> {
        let mut out = vec![0i128; f.degree() as usize + 1];
        for (c, e) in &terms {
            out[e[2] as usize] += c * x.pow(e[0]) * y.pow(e[1]);
        }
        out
    };
    let eval = |poly: &[i128], z: i128| poly.iter().rev().fold(0i128, |acc, c| acc * z + c);
    let mut found: Vec<ProjPoint> = (0..=b)
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut local = Vec::new();
            let ys: Vec<i64> = if x == 0 { (0..=b).collect() } else { (-b..=b).collect() };
            for y in ys {
                let poly = zpoly(x as i128, y as i128);
                let zs: Vec<i64> = if x == 0 && y == 0 { vec![1] } else { (-b..=b).collect() };
                for z in zs {
                    if x.gcd(&y).gcd(&z) != 1 || eval(&poly, z as i128) != 0 {
                        continue;
                    }
                    let pt = ProjPoint::from_i64(x, y, z).unwrap();
                    if filter.is_none_or(|keep| keep(&pt)) {
                        local.push(pt);
                    }
                }
            }
            local.into_iter()
        })
        .collect();
    found.sort();
    Ok(found)
}

/// Filter keeping the points whose reductions mod 2 and mod 3 lie in the
/// admissible classes of the local test.
pub fn subset_filter(f: &TernaryForm, max_depth: u32) -> Result<impl Fn(&ProjPoint) -> bool + Sync> {
    let mut allowed = Vec::new();
    for p in [2u64, 3] {
        let verdict = crate::localtest::local_test(f, p, max_depth)?;
        if verdict.max_depth_reached {
            return Err(Error::Precondition(format!("local test at p = {p} is inconclusive")));
        }
        allowed.push((p, verdict.reductions()));
    }
    Ok(move |pt: &ProjPoint| allowed.iter().all(|(p, set)| set.contains(&pt.reduce_mod(*p))))
}

/// Every solution recovered from the catalog points, with both signs of `a`.
pub fn reproduce_theorem() -> Result<BTreeSet<PrimitiveSolution>> {
    let mut out = BTreeSet::new();
    for curve in catalog().curves() {
        let cov = CovariantSet::new(&curve.form)?;
        for row in &curve.points {
            if let Recovery::Solution(s) = recover_with(&cov, &row.point)? {
                out.insert(s.conjugate());
                out.insert(s);
            }
        }
    }
    Ok(out)
}

/// Checks `u⁷ ≡ v²(Av − w)w⁴ (mod x³y + y³z + A z³x)` for
/// `(u, v, w) = (xyz, −z³, x²y)`.
pub fn fermat_cover_identity(a: i64) -> Result<bool> {
    if a == 0 {
        return Err(Error::Precondition("A must be nonzero".into()));
    }
    let f = TernaryForm::from_int_terms(&[(1, [3, 1, 0]), (1, [0, 3, 1]), (a, [1, 0, 3])])?;
    let (x, y, z) = (TernaryForm::var(Axis::X), TernaryForm::var(Axis::Y), TernaryForm::var(Axis::Z));
    let u = &(&x * &y) * &z;
    let v = -&z.pow(3);
    let w = &x.pow(2) * &y;
    let inner = &v.scale_int(a) - &w;
    let rhs = &(&v.pow(2) * &inner) * &w.pow(4);
    let expr = &u.pow(7) - &rhs;
    Ok(expr.reduce_mod(&f, Elimination::Auto)?.is_zero())
}

/// The curve `c1 X⁷ + c2 Y⁷ + c3 Z⁷ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SepticCurve {
    coeffs: [BigInt; 3],
}

impl SepticCurve {
    pub fn new(c1: BigInt, c2: BigInt, c3: BigInt) -> Result<Self> {
        for c in [&c1, &c2, &c3] {
            if c.is_zero() {
                return Err(Error::Precondition("septic coefficients must be nonzero".into()));
            }
            if factor_bigint(c).iter().any(|(_, e)| *e >= 7) {
                return Err(Error::Precondition(format!("coefficient {c} is divisible by a seventh power")));
            }
        }
        Ok(SepticCurve { coeffs: [c1, c2, c3] })
    }

    pub fn coeffs(&self) -> &[BigInt; 3] {
        &self.coeffs
    }

    pub fn eval(&self, pt: &[BigInt; 3]) -> BigInt {
        self.coeffs.iter().zip(pt).map(|(c, x)| c * num_traits::pow(x.clone(), 7)).sum()
    }
}

impl fmt::Display for SepticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coeffs;
        write!(f, "{a}X^7 + {b}Y^7 + {c}Z^7")
    }
}

/// Primitive points with coordinates bounded by `bound`, solving for `Z`
/// by an exact seventh root.
pub fn septic_search(curve: &SepticCurve, bound: u64) -> Result<Vec<ProjPoint>> {
    if bound == 0 {
        return Err(Error::Precondition("search bound must be at least 1".into()));
    }
    let b = bound as i64;
    let [c1, c2, c3] = curve.coeffs.clone();
    let mut found: Vec<ProjPoint> = (-b..=b)
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut local = Vec::new();
            for y in -b..=b {
                let t = -(&c1 * num_traits::pow(BigInt::from(x), 7) + &c2 * num_traits::pow(BigInt::from(y), 7));
                let (q, r) = t.div_rem(&c3);
                if !r.is_zero() {
                    continue;
                }
                if let Some(z) = exact_root(&q, 7) {
                    if z.abs() <= BigInt::from(b) && !(x == 0 && y == 0 && z.is_zero()) {
                        if let Ok(pt) = ProjPoint::new(x.into(), y.into(), z) {
                            local.push(pt);
                        }
                    }
                }
            }
            local.into_iter()
        })
        .collect();
    found.sort();
    found.dedup();
    Ok(found)
}

/// The thirteen septic curves whose only rational points have coordinates
/// in `{-1, 0, 1}`.
pub fn septic_family() -> Vec<SepticCurve> {
    const LIST: [[i64; 3]; 13] = [
        [1, 1, 12],
        [1, 1, 18],
        [1, 1, 48],
        [1, 1, 144],
        [1, 1, 162],
        [1, 1, 324],
        [1, 2, 3],
        [1, 2, 81],
        [1, 3, 4],
        [1, 3, 16],
        [1, 4, 9],
        [1, 9, 16],
        [1, 16, 81],
    ];
    LIST.iter().map(|c| SepticCurve::new(c[0].into(), c[1].into(), c[2].into()).unwrap()).collect()
}
