//! Component groups of Néron models from the intersection data of a regular
//! special fiber.
//!
//! With multiplicity vector `m` and intersection matrix `M`, the component
//! group is `ker(m) / rowspan(M)`, where `m` is read as a linear form on
//! `Z^n`. Each row of `M` lies in `ker(m)` because `M m = 0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::forms::{hermite_normal_form, hnf_kernel_basis, smith_normal_form, solve_in_hnf, IntMatrix};
use crate::{Error, Result};

/// Components, multiplicities and the intersection matrix of a fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionData {
    pub labels: Vec<String>,
    pub mult: Vec<BigInt>,
    pub matrix: IntMatrix,
}

impl IntersectionData {
    pub fn new(labels: Vec<String>, mult: Vec<BigInt>, matrix: IntMatrix) -> Result<Self> {
        let n = mult.len();
        if n == 0 || matrix.rows() != n || matrix.cols() != n || labels.len() != n {
            return Err(Error::Inconsistent("labels, multiplicities and matrix must all have size n".into()));
        }
        if mult.iter().any(|m| !m.is_positive()) {
            return Err(Error::Inconsistent("multiplicities must be positive".into()));
        }
        Ok(IntersectionData { labels, mult, matrix })
    }

    pub fn len(&self) -> usize {
        self.mult.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Relabels so that new component `i` is old component `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Precondition("not a permutation".into()));
        }
        let rows = perm.iter().map(|&i| perm.iter().map(|&j| self.matrix[(i, j)].clone()).collect()).collect();
        Self::new(
            perm.iter().map(|&i| self.labels[i].clone()).collect(),
            perm.iter().map(|&i| self.mult[i].clone()).collect(),
            IntMatrix::from_big_rows(rows, n)?,
        )
    }

    /// Divisor supported on one component.
    pub fn unit_divisor(&self, label: &str) -> Option<Vec<BigInt>> {
        let i = self.index_of(label)?;
        Some((0..self.len()).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
    }
}

/// Parses the matrix file format: `n`, an optional `labels …` line, the
/// multiplicities, then `n` rows. Lines starting with `#` are comments.
impl FromStr for IntersectionData {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut labels = None;
        let mut lines = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            if let Some(rest) = line.strip_prefix("labels") {
                labels = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            } else {
                lines.push(line);
            }
        }
        let ints = |line: &str| -> Result<Vec<BigInt>> {
            line.split_whitespace()
                .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer '{t}'"))))
                .collect()
        };
        let n: usize = lines
            .first()
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| Error::Parse("first line must be the number of components".into()))?;
        if lines.len() != n + 2 {
            return Err(Error::Parse(format!("expected {} data lines after n, found {}", n + 1, lines.len() - 1)));
        }
        let mult = ints(lines[1])?;
        if mult.len() != n {
            return Err(Error::Parse(format!("expected {n} multiplicities")));
        }
        let rows = lines[2..].iter().map(|l| ints(l)).collect::<Result<Vec<_>>>()?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("every row needs {n} entries")));
        }
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("V{i}")).collect());
        IntersectionData::new(labels, mult, IntMatrix::from_big_rows(rows, n)?)
    }
}

/// Finite abelian group `Z/d1 x Z/d2 x …` with `d1 | d2 | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGroup {
    pub invariant_factors: Vec<BigInt>,
}

impl ComponentGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for ComponentGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// Symmetric and every row orthogonal to the multiplicities.
pub fn validate_fiber(data: &IntersectionData) -> bool {
    data.matrix.is_symmetric() && data.matrix.mul_vec(&data.mult).iter().all(Zero::is_zero)
}

fn relation_matrix(data: &IntersectionData) -> Result<(IntMatrix, IntMatrix)> {
    if !validate_fiber(data) {
        return Err(Error::Inconsistent("intersection matrix is not symmetric or M*m != 0".into()));
    }
    let kernel = hnf_kernel_basis(&data.mult)?;
    let rows = data
        .matrix
        .row_vecs()
        .into_iter()
        .map(|r| solve_in_hnf(&kernel, &r).ok_or_else(|| Error::Internal("row outside the kernel".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok((kernel.clone(), IntMatrix::from_big_rows(rows, kernel.rows())?))
}

/// `ker(m) / rowspan(M)`; fails if the quotient is infinite (disconnected
/// dual graph).
pub fn component_group(data: &IntersectionData) -> Result<ComponentGroup> {
    let (kernel, rel) = relation_matrix(data)?;
    if kernel.rows() == 0 {
        return Ok(ComponentGroup { invariant_factors: Vec::new() });
    }
    let snf = smith_normal_form(&rel);
    let rank = snf.diag.iter().filter(|d| !d.is_zero()).count();
    if rank < kernel.rows() {
        return Err(Error::Inconsistent(format!(
            "component group has free rank {}; the dual graph is disconnected",
            kernel.rows() - rank
        )));
    }
    Ok(ComponentGroup { invariant_factors: snf.diag.into_iter().filter(|d| !d.is_one()).collect() })
}

/// Whether a degree-zero divisor (`m · d = 0`) is trivial in the component
/// group, i.e. lies in the row span of the intersection matrix.
pub fn is_principal(data: &IntersectionData, divisor: &[BigInt]) -> Result<bool> {
    if divisor.len() != data.len() {
        return Err(Error::Precondition("divisor has the wrong length".into()));
    }
    let deg: BigInt = divisor.iter().zip(&data.mult).map(|(a, b)| a * b).sum();
    if !deg.is_zero() {
        return Err(Error::Precondition("divisor is not orthogonal to the multiplicities".into()));
    }
    let span = hermite_normal_form(&data.matrix);
    Ok(solve_in_hnf(&span, divisor).is_some())
}

/// The cycle of `n` multiplicity-one components (Kodaira type `I_n`).
pub fn cycle_fiber(n: usize) -> Result<IntersectionData> {
    if n < 2 {
        return Err(Error::Precondition("a cycle needs at least two components".into()));
    }
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = BigInt::from(-2);
        row[(i + 1) % n] += 1;
        row[(i + n - 1) % n] += 1;
    }
    IntersectionData::new(
        (0..n).map(|i| format!("T{i}")).collect(),
        vec![BigInt::one(); n],
        IntMatrix::from_big_rows(rows, n)?,
    )
}
