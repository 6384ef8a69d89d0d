//! Text format for sparse polynomials: `+ - * ^`, named variables, integer or
//! `p/q` literals. Whitespace is insignificant and `*` may be omitted.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Parses into a map from exponent vectors (one slot per variable) to
/// nonzero coefficients.
pub(crate) fn parse_sparse(s: &str, vars: &[&str]) -> Result<BTreeMap<Vec<u32>, BigRational>> {
    let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut pos = 0;
    let mut out: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    let mut first = true;
    while pos < chars.len() {
        let mut sign = BigRational::one();
        match chars[pos] {
            '+' => pos += 1,
            '-' => {
                sign = -sign;
                pos += 1;
            }
            _ if !first => return Err(Error::Parse(format!("expected '+' or '-' at position {pos}"))),
            _ => {}
        }
        first = false;
        let (coeff, exps) = parse_term(&chars, &mut pos, vars)?;
        let c = sign * coeff;
        let entry = out.entry(exps.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            out.remove(&exps);
        }
    }
    Ok(out)
}

fn parse_term(chars: &[char], pos: &mut usize, vars: &[&str]) -> Result<(BigRational, Vec<u32>)> {
    let mut coeff = BigRational::one();
    let mut exps = vec![0u32; vars.len()];
    let mut factors = 0;
    loop {
        if *pos >= chars.len() || chars[*pos] == '+' || chars[*pos] == '-' {
            break;
        }
        if chars[*pos] == '*' {
            if factors == 0 {
                return Err(Error::Parse(format!("unexpected '*' at position {}", *pos)));
            }
            *pos += 1;
        }
        if *pos >= chars.len() {
            return Err(Error::Parse("dangling '*'".into()));
        }
        let c = chars[*pos];
        if c.is_ascii_digit() {
            let n = parse_uint(chars, pos)?;
            let mut lit = BigRational::from_integer(n);
            if *pos < chars.len() && chars[*pos] == '/' {
                *pos += 1;
                let d = parse_uint(chars, pos)?;
                if d.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                lit = BigRational::new(lit.to_integer(), d);
            }
            coeff *= lit;
        } else if c.is_ascii_alphabetic() {
            let idx = vars
                .iter()
                .position(|v| v.len() == 1 && v.starts_with(c))
                .ok_or_else(|| Error::Parse(format!("unknown variable '{c}'")))?;
            *pos += 1;
            let mut e = 1u32;
            if *pos < chars.len() && chars[*pos] == '^' {
                *pos += 1;
                let n = parse_uint(chars, pos)?;
                e = u32::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?;
            }
            exps[idx] += e;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
        factors += 1;
    }
    if factors == 0 {
        return Err(Error::Parse("empty term".into()));
    }
    Ok((coeff, exps))
}

fn parse_uint(chars: &[char], pos: &mut usize) -> Result<BigInt> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::Parse(format!("expected a number at position {start}")));
    }
    let s: String = chars[start..*pos].iter().collect();
    s.parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))
}

/// Writes `terms` in the given order; an empty list prints `0`.
pub(crate) fn write_sparse(
    f: &mut fmt::Formatter<'_>,
    terms: &[(Vec<u32>, BigRational)],
    vars: &[&str],
) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let a = c.abs();
        let monomial: Vec<String> = e
            .iter()
            .zip(vars)
            .filter(|(k, _)| **k > 0)
            .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
            .collect();
        let coeff = crate::arith::rational_to_string(&a);
        if monomial.is_empty() {
            f.write_str(&coeff)?;
        } else if a.is_one() {
            f.write_str(&monomial.join("*"))?;
        } else {
            write!(f, "{}*{}", coeff, monomial.join("*"))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_implicit_products() {
        let m = parse_sparse("1/2 x^2y - 3*x*x*y + 5", &["x", "y"]).unwrap();
        assert_eq!(m[&vec![2, 1]], BigRational::new((-5).into(), 2.into()));
        assert_eq!(m[&vec![0, 0]], BigRational::from_integer(5.into()));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_sparse("x + w", &["x", "y"]).is_err());
        assert!(parse_sparse("x ++ y", &["x", "y"]).is_err());
        assert!(parse_sparse("", &["x"]).is_err());
        assert!(parse_sparse("1/0 x", &["x"]).is_err());
        assert!(parse_sparse("x^", &["x"]).is_err());
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let m = parse_sparse("x - x", &["x"]).unwrap();
        assert!(m.is_empty());
    }
}
