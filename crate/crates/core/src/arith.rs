//! Integer helpers: p-adic valuations, primality, factorization.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// `v_p(n)`, or `None` for `n = 0`.
pub fn valuation_int(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q)`, or `None` for `q = 0`.
pub fn valuation(q: &BigRational, p: u64) -> Option<i64> {
    let num = valuation_int(q.numer(), p)? as i64;
    let den = valuation_int(q.denom(), p).unwrap_or(0) as i64;
    Some(num - den)
}

pub fn valuation_u64(mut n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a machine integer by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factor_u64(n).iter().all(|&(_, e)| e == 1)
}

/// Probabilistic primality (deterministic bases; exact below 3.3e24).
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y, mut g) = (BigUint::from(2u32), BigUint::from(2u32), one.clone());
        while g == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            g = diff.gcd(n);
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

/// Full factorization of `|n|` (trial division, then Pollard rho).
pub fn factor_bigint(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.magnitude().clone();
    let mut primes: Vec<BigUint> = Vec::new();
    if n.is_zero() {
        return Vec::new();
    }
    let mut p = 2u32;
    while p < 10_000 {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            n /= &bp;
            primes.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            primes.push(m);
            continue;
        }
        let d = pollard_brent(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        let q = BigInt::from_biguint(Sign::Plus, q);
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Exact integer k-th root if `n` is a perfect k-th power.
pub fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return exact_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a rational written as a signed product of integer powers, e.g.
/// `-13^3*221173^3*2^-2*3^-1`. Plain `p/q` literals are accepted too.
pub fn parse_factored(s: &str) -> Result<BigRational> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(q) = t.parse::<BigRational>() {
        return Ok(q);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(&t)),
    };
    if body.is_empty() {
        return Err(Error::Parse(format!("bad rational '{s}'")));
    }
    let mut acc = BigRational::one();
    for factor in body.split('*') {
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b, e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?),
            None => (factor, 1),
        };
        let base: BigInt = base.parse().map_err(|_| Error::Parse(format!("bad factor '{factor}'")))?;
        if base.is_zero() && exp < 0 {
            return Err(Error::Parse("zero to a negative power".into()));
        }
        let pow = num_traits::pow(base, exp.unsigned_abs() as usize);
        acc = if exp < 0 { acc / BigRational::from_integer(pow) } else { acc * BigRational::from_integer(pow) };
    }
    Ok(if neg { -acc } else { acc })
}

/// The small primes below `bound`.
pub fn primes_below(bound: u64) -> Vec<u64> {
    (2..bound).filter(|&n| is_prime_u64(n)).collect()
}

pub(crate) fn bigint_gcd_all<'a>(items: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    items.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factored_rationals() {
        let q = parse_factored("-7^4*2^-1*3^-1").unwrap();
        assert_eq!(q, BigRational::new((-2401).into(), 6.into()));
        assert_eq!(parse_factored("2^3*3*547^3").unwrap(), BigRational::from_integer((24 * 547i64.pow(3)).into()));
        assert_eq!(parse_factored("-3/4").unwrap(), BigRational::new((-3).into(), 4.into()));
        assert!(parse_factored("2^x").is_err());
        assert!(parse_factored("-").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation_int(&BigInt::from(1728), 2), Some(6));
        assert_eq!(valuation_int(&BigInt::from(-1728), 3), Some(3));
        assert_eq!(valuation_int(&BigInt::zero(), 3), None);
        let q = BigRational::new(BigInt::from(9), BigInt::from(8));
        assert_eq!(valuation(&q, 2), Some(-3));
        assert_eq!(valuation(&q, 3), Some(2));
    }

    #[test]
    fn factoring() {
        let n = BigInt::from(15312283u64) * BigInt::from(1_000_000_007u64) * BigInt::from(8);
        let f = factor_bigint(&n);
        let back: BigInt = f.iter().map(|(p, e)| num_traits::pow(p.clone(), *e as usize)).product();
        assert_eq!(back, n);
        assert!(f.iter().all(|(p, _)| is_probable_prime(p.magnitude())));
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_squarefree(42) && !is_squarefree(12));
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&BigInt::from(-128), 7), Some(BigInt::from(-2)));
        assert_eq!(exact_root(&BigInt::from(129), 7), None);
    }
}
