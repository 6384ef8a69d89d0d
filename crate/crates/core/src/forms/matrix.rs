use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Dense matrix of arbitrary-precision integers, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Inconsistent("ragged matrix rows".into()));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() })
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Inconsistent("ragged matrix rows".into()));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Inconsistent(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Determinant by cofactor-free Bareiss elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Inconsistent("determinant of a non-square matrix".into()));
        }
        let rows: Vec<Vec<num_rational::BigRational>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect())
            .collect();
        Ok(super::unipoly::bareiss_det(rows).to_integer())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(src, j)] * k;
            self[(dst, j)] += t;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self[(i, src)] * k;
            self[(i, dst)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = -&self[(i, j)];
            self[(i, j)] = t;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of [`smith_normal_form`]: `u * m * v = diag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    /// Diagonal entries `d1 | d2 | ...`, nonnegative, length `min(rows, cols)`.
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.diag.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let n = r.min(c);
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if !a[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, n);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let nq = -q;
                a.add_row(i, t, &nq);
                u.add_row(i, t, &nq);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let nq = -q;
                a.add_col(j, t, &nq);
                v.add_col(j, t, &nq);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&a[(t, t)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v, n)
}

fn finish(a: IntMatrix, u: IntMatrix, v: IntMatrix, n: usize) -> Smith {
    let diag = (0..n).map(|i| a[(i, i)].abs()).collect::<Vec<_>>();
    let mut u = u;
    for i in 0..n {
        if a[(i, i)].is_negative() {
            u.negate_row(i);
        }
    }
    Smith { diag, u, v }
}

/// Row-style Hermite normal form of the row lattice, zero rows dropped.
/// Pivots are positive and entries above each pivot are reduced into
/// `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut pivot_row = 0;
    for j in 0..a.cols {
        if pivot_row == a.rows {
            break;
        }
        loop {
            let nz: Vec<usize> = (pivot_row..a.rows).filter(|&i| !a[(i, j)].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| a[(i, j)].abs()).unwrap();
            a.swap_rows(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..a.rows {
                let q = a[(i, j)].div_floor(&a[(pivot_row, j)]);
                a.add_row(i, pivot_row, &-q);
                if !a[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                if a[(pivot_row, j)].is_negative() {
                    a.negate_row(pivot_row);
                }
                for i in 0..pivot_row {
                    let q = a[(i, j)].div_floor(&a[(pivot_row, j)]);
                    a.add_row(i, pivot_row, &-q);
                }
                pivot_row += 1;
                break;
            }
        }
    }
    let rows: Vec<Vec<BigInt>> = (0..pivot_row).map(|i| a.row(i).to_vec()).collect();
    IntMatrix::from_big_rows(rows, a.cols).expect("consistent width")
}

/// A Z-basis (in Hermite normal form) of `{x : v . x = 0}`.
pub fn hnf_kernel_basis(v: &[BigInt]) -> Result<IntMatrix> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroInput("kernel of the zero vector"));
    }
    let n = v.len();
    // column operations on the 1 x n row, mirrored on the identity
    let mut row = IntMatrix::from_big_rows(vec![v.to_vec()], n)?;
    let mut basis = IntMatrix::identity(n);
    loop {
        let nz: Vec<usize> = (0..n).filter(|&j| !row[(0, j)].is_zero()).collect();
        if nz.len() <= 1 {
            let keep = nz[0];
            row.swap_cols(0, keep);
            basis.swap_cols(0, keep);
            break;
        }
        let p = *nz.iter().min_by_key(|&&j| row[(0, j)].abs()).unwrap();
        for &j in &nz {
            if j != p {
                let q = -row[(0, j)].div_floor(&row[(0, p)]);
                row.add_col(j, p, &q);
                basis.add_col(j, p, &q);
            }
        }
    }
    let kernel: Vec<Vec<BigInt>> = (1..n).map(|j| (0..n).map(|i| basis[(i, j)].clone()).collect()).collect();
    let k = IntMatrix::from_big_rows(kernel, n)?;
    Ok(hermite_normal_form(&k))
}

/// Coordinates of `x` in the row basis `h` (which must be in Hermite normal
/// form), or `None` when `x` is not in the row lattice.
pub fn solve_in_hnf(h: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = x.to_vec();
    let mut coords = Vec::with_capacity(h.rows());
    for i in 0..h.rows() {
        let j = (0..h.cols()).find(|&j| !h[(i, j)].is_zero())?;
        let (q, r) = rest[j].div_rem(&h[(i, j)]);
        if !r.is_zero() {
            return None;
        }
        for (k, hk) in h.row(i).iter().enumerate() {
            rest[k] -= &q * hk;
        }
        coords.push(q);
    }
    rest.iter().all(|x| x.is_zero()).then_some(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_smith(m: &IntMatrix) -> Vec<BigInt> {
        let s = smith_normal_form(m);
        let prod = s.u.mul(m).unwrap().mul(&s.v).unwrap();
        assert_eq!(prod, s.diagonal_matrix());
        assert!(s.u.det().unwrap().abs().is_one());
        assert!(s.v.det().unwrap().abs().is_one());
        for w in s.diag.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && w[1].is_multiple_of(&w[0]));
        }
        s.diag
    }

    #[test]
    fn identity_snf() {
        assert_eq!(check_smith(&IntMatrix::identity(3)), big(&[1, 1, 1]));
    }

    #[test]
    fn gcd_lcm_snf() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(check_smith(&m), big(&[1, 6]));
    }

    #[test]
    fn rectangular_snf() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16], vec![0, 0, 0]]).unwrap();
        assert_eq!(check_smith(&m), big(&[2, 6, 12]));
    }

    #[test]
    fn kernel_bases() {
        assert_eq!(hnf_kernel_basis(&big(&[1])).unwrap().rows(), 0);
        let k = hnf_kernel_basis(&big(&[1, 1])).unwrap();
        assert_eq!(k.row_vecs(), vec![big(&[1, -1])]);
        let v = big(&[1, 1, 1, 2]);
        let k = hnf_kernel_basis(&v).unwrap();
        assert_eq!(k.rows(), 3);
        for r in k.row_vecs() {
            assert!(r.iter().zip(&v).map(|(a, b)| a * b).sum::<BigInt>().is_zero());
        }
        assert!(hnf_kernel_basis(&big(&[0, 0])).is_err());
    }

    #[test]
    fn solve_in_basis() {
        let k = hnf_kernel_basis(&big(&[2, 3, 5])).unwrap();
        let x = big(&[3, -2, 0]);
        let c = solve_in_hnf(&k, &x).unwrap();
        let back: Vec<BigInt> = (0..3).map(|j| c.iter().enumerate().map(|(i, ci)| ci * &k[(i, j)]).sum()).collect();
        assert_eq!(back, x);
        assert!(solve_in_hnf(&k, &big(&[1, 0, 0])).is_none());
    }
}
