//! Twists of the Klein quartic: the diagonal family `a x³y + b y³z + c z³x`,
//! the quartics `X_E(7)` and `X_E⁻(7)` attached to an elliptic curve, and the
//! catalog of the ten curves that pass the local test.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith::{factor_bigint, parse_factored};
use crate::covariants::JValue;
use crate::fixtures;
use crate::forms::TernaryForm;
use crate::solutions::{PrimitiveSolution, ProjPoint};
use crate::{Error, Result};

/// The curve `a x³y + b y³z + c z³x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Case1Twist {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl Case1Twist {
    pub fn form(&self) -> TernaryForm {
        TernaryForm::from_int_terms(&[
            (self.a as i64, [3, 1, 0]),
            (self.b as i64, [0, 3, 1]),
            (self.c as i64, [1, 0, 3]),
        ])
        .expect("quartic monomials")
    }
}

impl fmt::Display for Case1Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

fn square_factor(n: u64) -> Option<u64> {
    crate::arith::factor_u64(n).into_iter().find(|&(_, e)| e >= 2).map(|(p, _)| p)
}

/// Normal form of `a x³y + b y³z + c z³x`: squarefree coefficients without a
/// common factor, cyclically rotated to the lexicographically largest
/// triple (so `a >= b` and `a >= c`).
///
/// If `p² | a`, scaling by `p` and substituting `x -> x/p` gives
/// `(a/p², bp, c)`; `b` and `c` are handled cyclically. Each step divides
/// `abc` by `p`.
pub fn case1_reduce(a: u64, b: u64, c: u64) -> Result<Case1Twist> {
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::Precondition("twist coefficients must be positive".into()));
    }
    let mut t = [a, b, c];
    loop {
        let step = (0..3).find_map(|i| square_factor(t[i]).map(|p| (i, p)));
        let Some((i, p)) = step else { break };
        t[i] /= p * p;
        t[(i + 1) % 3] =
            t[(i + 1) % 3].checked_mul(p).ok_or_else(|| Error::Precondition("twist coefficients overflow".into()))?;
    }
    let g = t[0].gcd(&t[1]).gcd(&t[2]);
    let t = t.map(|v| v / g);
    // x -> y -> z -> x sends (a, b, c) to (c, a, b)
    let best = [t, [t[2], t[0], t[1]], [t[1], t[2], t[0]]].into_iter().max().unwrap();
    Ok(Case1Twist { a: best[0], b: best[1], c: best[2] })
}

/// The diagonal twists `a x³y + y³z + z³x` for `a = 2^i 3^j 7^k`,
/// `0 <= i, j, k <= 6`, reduced and deduplicated. Twists over cyclic cubic
/// fields are not produced here.
pub fn enumerate_case1() -> BTreeSet<Case1Twist> {
    let mut out = BTreeSet::new();
    for i in 0..7u32 {
        for j in 0..7u32 {
            for k in 0..7u32 {
                let a = 2u64.pow(i) * 3u64.pow(j) * 7u64.pow(k);
                out.insert(case1_reduce(a, 1, 1).expect("positive input"));
            }
        }
    }
    out
}

/// Short Weierstrass coefficients of `Y² = X³ + aX + b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllipticCoeffs {
    pub a: BigInt,
    pub b: BigInt,
}

impl EllipticCoeffs {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        let e = EllipticCoeffs { a, b };
        if e.discriminant().is_zero() {
            return Err(Error::Precondition(format!(
                "singular curve: 4a^3 + 27b^2 = 0 for (a, b) = ({}, {})",
                e.a, e.b
            )));
        }
        Ok(e)
    }

    /// The model `Y² = X³ − 27c4·X − 54c6` of a general Weierstrass equation.
    pub fn from_ainvariants(ai: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = ai.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let c4 = &b2 * &b2 - 24 * &b4;
        let b2_cubed: BigInt = &b2 * &b2 * &b2;
        let c6 = -b2_cubed + 36 * &b2 * &b4 - 216 * &b6;
        Self::new(BigInt::from(-27) * c4, BigInt::from(-54) * c6)?.minimal()
    }

    /// Removes factors `u` with `u⁴ | a` and `u⁶ | b`.
    pub fn minimal(&self) -> Result<Self> {
        let g = self.a.gcd(&self.b);
        let mut u = BigInt::from(1);
        for (p, _) in factor_bigint(&g) {
            loop {
                let u4 = num_traits::pow(&u * &p, 4);
                let u6 = num_traits::pow(&u * &p, 6);
                if (&self.a % &u4).is_zero() && (&self.b % &u6).is_zero() {
                    u *= &p;
                } else {
                    break;
                }
            }
        }
        Self::new(&self.a / num_traits::pow(u.clone(), 4), &self.b / num_traits::pow(u, 6))
    }

    /// `4a³ + 27b²`.
    pub fn discriminant(&self) -> BigInt {
        4 * num_traits::pow(self.a.clone(), 3) + 27 * &self.b * &self.b
    }

    /// `1728 · 4a³ / (4a³ + 27b²)`.
    pub fn j_invariant(&self) -> Option<BigRational> {
        let d = self.discriminant();
        (!d.is_zero()).then(|| BigRational::new(1728 * 4 * num_traits::pow(self.a.clone(), 3), d))
    }
}

impl fmt::Display for EllipticCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y^2 = X^3 + ({})X + ({})", self.a, self.b)
    }
}

fn build(terms: Vec<(BigInt, [u32; 3])>) -> TernaryForm {
    TernaryForm::from_terms(terms.into_iter().map(|(c, e)| (BigRational::from_integer(c), e))).expect("quartic")
}

/// `X_E(7)`:
/// `a x⁴ + 7b x³z + 3x²y² − 3a² x²z² − 6b xyz² − 5ab xz³ + 2y³z + 3a y²z² + 2a² yz³ − 4b² z⁴`.
pub fn x_e7_quartic(e: &EllipticCoeffs) -> TernaryForm {
    let (a, b) = (&e.a, &e.b);
    let a2 = a * a;
    let n = |k: i64| BigInt::from(k);
    build(vec![
        (a.clone(), [4, 0, 0]),
        (7 * b, [3, 0, 1]),
        (n(3), [2, 2, 0]),
        (-3 * &a2, [2, 0, 2]),
        (-6 * b, [1, 1, 2]),
        (-5 * a * b, [1, 0, 3]),
        (n(2), [0, 3, 1]),
        (3 * a, [0, 2, 2]),
        (2 * &a2, [0, 1, 3]),
        (-4 * b * b, [0, 0, 4]),
    ])
}

/// `X_E⁻(7)`, the quartic obtained from `X_E(7)` by the contravariant of
/// degree 4, as a polynomial in `a`, `b`.
pub fn x_e7_minus_quartic(e: &EllipticCoeffs) -> TernaryForm {
    let (a, b) = (&e.a, &e.b);
    let a2 = a * a;
    let a3 = &a2 * a;
    let b2 = b * b;
    build(vec![
        (-&a2, [4, 0, 0]),
        (a * (3 * &a3 + 19 * &b2), [0, 4, 0]),
        (BigInt::from(3), [0, 0, 4]),
        (6 * &a2, [0, 2, 2]),
        (6 * a, [2, 0, 2]),
        (-6 * (&a3 + 6 * &b2), [2, 2, 0]),
        (-12 * a * b, [1, 2, 1]),
        (18 * b, [1, 1, 2]),
        (2 * a * b, [3, 1, 0]),
        (-12 * b, [3, 0, 1]),
        (-2 * (4 * &a3 + 21 * &b2), [0, 3, 1]),
        (2 * &a2 * b, [1, 3, 0]),
        (-8 * a, [0, 1, 3]),
    ])
}

/// One row of the known-points table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogPoint {
    pub point: ProjPoint,
    pub j: JValue,
    pub cremona: Option<String>,
    /// Listed with `a >= 0`; `None` is the no-solution marker.
    pub solution: Option<PrimitiveSolution>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogCurve {
    pub label: String,
    pub rank: u32,
    pub form: TernaryForm,
    pub points: Vec<CatalogPoint>,
}

/// The ten quartics `C1 … C10` with their known rational points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveCatalog {
    curves: Vec<CatalogCurve>,
}

impl CurveCatalog {
    pub fn curves(&self) -> &[CatalogCurve] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Case-insensitive lookup by label (`C5`, `c5`).
    pub fn get(&self, label: &str) -> Option<&CatalogCurve> {
        self.curves.iter().find(|c| c.label.eq_ignore_ascii_case(label))
    }
}

fn parse_j(s: &str) -> Result<JValue> {
    if s == "inf" {
        return Ok(JValue::Infinity);
    }
    parse_factored(s).map(JValue::Finite)
}

impl FromStr for CurveCatalog {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        match lines.next() {
            Some(h) if h.starts_with("# gfe-catalog v1") => {}
            _ => return Err(Error::Parse("missing catalog header '# gfe-catalog v1'".into())),
        }
        let mut curves: Vec<CatalogCurve> = Vec::new();
        for line in lines.filter(|l| !l.starts_with('#')) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.first().copied() {
                Some("curve") if fields.len() >= 4 => {
                    let rank = fields[2].parse().map_err(|_| Error::Parse(format!("bad rank in '{line}'")))?;
                    let form: TernaryForm = fields[3..].join(" ").parse()?;
                    curves.push(CatalogCurve { label: fields[1].to_string(), rank, form, points: Vec::new() });
                }
                Some("point") if fields.len() == 6 => {
                    let curve = curves
                        .iter_mut()
                        .find(|c| c.label == fields[1])
                        .ok_or_else(|| Error::Parse(format!("point for unknown curve in '{line}'")))?;
                    let point: ProjPoint = fields[2].parse()?;
                    if !curve.form.eval_int(point.coords()).is_zero() {
                        return Err(Error::NotOnCurve(format!("{point} on {}", curve.label)));
                    }
                    let cremona = (fields[4] != "-").then(|| fields[4].to_string());
                    let solution = match fields[5] {
                        "-" => None,
                        s => Some(s.parse()?),
                    };
                    curve.points.push(CatalogPoint { point, j: parse_j(fields[3])?, cremona, solution });
                }
                _ => return Err(Error::Parse(format!("bad catalog line '{line}'"))),
            }
        }
        Ok(CurveCatalog { curves })
    }
}

/// The builtin catalog.
pub fn catalog() -> &'static CurveCatalog {
    static CATALOG: OnceLock<CurveCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| fixtures::CATALOG.parse().expect("builtin catalog parses"))
}

/// A curve of the elliptic fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticRecord {
    pub label: String,
    pub ainvariants: [i64; 5],
    pub coeffs: EllipticCoeffs,
    /// Check tags from the fixture (`verified:C4`, `j:…`, `support`).
    pub checks: Vec<String>,
}

pub fn parse_elliptic_fixture(text: &str) -> Result<Vec<EllipticRecord>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    match lines.next() {
        Some(h) if h.starts_with("# gfe-elliptic v1") => {}
        _ => return Err(Error::Parse("missing header '# gfe-elliptic v1'".into())),
    }
    lines
        .filter(|l| !l.starts_with('#'))
        .map(|line| {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() < 6 {
                return Err(Error::Parse(format!("bad elliptic record '{line}'")));
            }
            let mut ai = [0i64; 5];
            for (slot, s) in ai.iter_mut().zip(&f[1..6]) {
                *slot = s.parse().map_err(|_| Error::Parse(format!("bad a-invariant '{s}'")))?;
            }
            Ok(EllipticRecord {
                label: f[0].to_string(),
                ainvariants: ai,
                coeffs: EllipticCoeffs::from_ainvariants(ai)?,
                checks: f[6..].iter().map(|s| s.to_string()).collect(),
            })
        })
        .collect()
}

/// The builtin elliptic curve fixture.
pub fn elliptic_fixture() -> &'static [EllipticRecord] {
    static DATA: OnceLock<Vec<EllipticRecord>> = OnceLock::new();
    DATA.get_or_init(|| parse_elliptic_fixture(fixtures::ELLIPTIC).expect("builtin elliptic fixture parses"))
}

/// `true` when all prime factors of `n` lie in `primes`.
pub fn supported_on(n: &BigInt, primes: &[u64]) -> bool {
    !n.is_zero() && factor_bigint(&n.abs()).iter().all(|(p, _)| primes.iter().any(|q| *p == BigInt::from(*q)))
}
