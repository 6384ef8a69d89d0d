//! p-adic local solubility test for twists of the Klein quartic.
//!
//! `P²(Q_p)` is covered by residue classes `(1 : a + p^k u : b + p^l v)`
//! (up to a permutation of coordinates) with `u, v` ranging over `Z_p`.
//! On a class the covariants become polynomials in `u, v`, and the smallest
//! coefficient valuation bounds `v_p` of the covariant from below. A point
//! `P` yields a `p`-primitive solution exactly when
//!
//! ```text
//! min( (v(Ψ21(P)) + 3w)/21, (v(Ψ14(P)) + 2w)/14, (v(Ψ6(P)) + w)/6 )
//! ```
//!
//! is an integer, where `w = v_p(1728 Ψ0)`. These weights follow from
//! `a = (1728Ψ0)³Ψ21`, `b = −(1728Ψ0)²Ψ14`, `c = −1728Ψ0Ψ6`, so `Ψ21` is
//! paired with `3w` and `/21`, `Ψ14` with `2w` and `/14`, `Ψ6` with `w`
//! and `/6`.
//!
//! Classes are split until the minimum is attained by a covariant whose
//! valuation is constant on the class; the class is then admissible when
//! that minimum is an integer and the class holds a `Q_p`-point of the
//! curve.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{is_prime_u64, valuation, valuation_int};
use crate::covariants::CovariantSet;
use crate::forms::{Axis, TernaryForm};
use crate::solutions::normalize_fp;
use crate::{Error, Result};

/// Default bound on the depth of class subdivision.
pub const DEFAULT_MAX_DEPTH: u32 = 30;

/// Budget of nodes for one Hensel search.
const HENSEL_NODE_BUDGET: usize = 200_000;

/// `{(1 : a + p^k u : b + p^l v)}` with the `1` in position `unit_axis` and
/// the two free coordinates in increasing axis order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueClass {
    pub unit_axis: Axis,
    pub center: (BigInt, BigInt),
    pub depths: (u32, u32),
    pub prime: u64,
}

impl ResidueClass {
    /// `(1 : Z_p : Z_p)`, `(pZ_p : 1 : Z_p)` and `(pZ_p : pZ_p : 1)`.
    pub fn initial(p: u64) -> [ResidueClass; 3] {
        let zero = || (BigInt::zero(), BigInt::zero());
        [
            ResidueClass { unit_axis: Axis::X, center: zero(), depths: (0, 0), prime: p },
            ResidueClass { unit_axis: Axis::Y, center: zero(), depths: (1, 0), prime: p },
            ResidueClass { unit_axis: Axis::Z, center: zero(), depths: (1, 1), prime: p },
        ]
    }

    /// Axes of the free coordinates `(u, v)`.
    pub fn free_axes(&self) -> (Axis, Axis) {
        match self.unit_axis {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::X, Axis::Z),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn depth(&self) -> u32 {
        self.depths.0.max(self.depths.1)
    }

    /// The `p` subclasses obtained by fixing one more digit of `u`
    /// (`which = 0`) or `v` (`which = 1`).
    pub fn split(&self, which: usize) -> Vec<ResidueClass> {
        let p = BigInt::from(self.prime);
        (0..self.prime)
            .map(|t| {
                let mut c = self.clone();
                let (center, depth) =
                    if which == 0 { (&mut c.center.0, &mut c.depths.0) } else { (&mut c.center.1, &mut c.depths.1) };
                *center += p.pow(*depth) * t;
                *depth += 1;
                c
            })
            .collect()
    }

    /// Point of `P²(F_p)` every member reduces to; `None` while a free
    /// coordinate is still unconstrained mod `p`.
    pub fn reduction(&self) -> Option<[u64; 3]> {
        if self.depths.0 == 0 || self.depths.1 == 0 {
            return None;
        }
        let p = BigInt::from(self.prime);
        let (ua, va) = self.free_axes();
        let mut v = [0u64; 3];
        v[self.unit_axis.index()] = 1;
        v[ua.index()] = self.center.0.mod_floor(&p).to_u64().unwrap();
        v[va.index()] = self.center.1.mod_floor(&p).to_u64().unwrap();
        Some(normalize_fp(v, self.prime))
    }

    /// Whether a rational point lies in the class.
    pub fn contains(&self, pt: &[BigInt; 3]) -> bool {
        let p = self.prime;
        let vals: Vec<Option<i64>> = pt.iter().map(|c| valuation_int(c, p).map(i64::from)).collect();
        let Some(vu) = vals[self.unit_axis.index()] else { return false };
        // the unit coordinate has least valuation, strictly less than earlier axes
        let fits = (0..3).all(|i| match vals[i] {
            None => true,
            Some(v) if i < self.unit_axis.index() => v > vu,
            Some(v) => v >= vu,
        });
        let unit = BigRational::from_integer(pt[self.unit_axis.index()].clone());
        let (ua, va) = self.free_axes();
        let near = |a: Axis, center: &BigInt, k: u32| {
            let diff =
                BigRational::from_integer(pt[a.index()].clone()) / &unit - BigRational::from_integer(center.clone());
            valuation(&diff, p).is_none_or(|v| v >= k as i64)
        };
        fits && near(ua, &self.center.0, self.depths.0) && near(va, &self.center.1, self.depths.1)
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (ua, va) = self.free_axes();
        let mut parts = [String::new(), String::new(), String::new()];
        parts[self.unit_axis.index()] = "1".into();
        let p = self.prime;
        let show = |c: &BigInt, k: u32| match k {
            0 => "*".to_string(),
            _ => format!("{c}+{p}^{k}Z"),
        };
        parts[ua.index()] = show(&self.center.0, self.depths.0);
        parts[va.index()] = show(&self.center.1, self.depths.1);
        write!(f, "({})", parts.join(":"))
    }
}

/// A form restricted to a residue class: `g = p^-offset · Σ c_ij u^i v^j`
/// with integer `c_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedPoly {
    /// `grid[i][j]` is the coefficient of `u^i v^j`.
    pub grid: Vec<Vec<BigInt>>,
    /// Valuation of the rational factor in front of the integer grid.
    pub offset: i64,
    prime: u64,
}

impl RestrictedPoly {
    fn from_form(g: &TernaryForm, unit: Axis, p: u64) -> Self {
        let d = g.degree() as usize;
        let (l, terms) = g.integral_scaling();
        let (ua, va) = match unit {
            Axis::X => (1, 2),
            Axis::Y => (0, 2),
            Axis::Z => (0, 1),
        };
        let mut grid = vec![vec![BigInt::zero(); d + 1]; d + 1];
        for (e, c) in terms {
            grid[e[ua] as usize][e[va] as usize] += c;
        }
        let offset = -(valuation_int(&l, p).unwrap_or(0) as i64);
        RestrictedPoly { grid, offset, prime: p }
    }

    /// Substitutes `u -> t + s·u` (`which = 0`) or `v -> t + s·v`.
    fn shift_scale(&mut self, which: usize, t: &BigInt, s: &BigInt) {
        let n = self.grid.len();
        let get = |g: &Vec<Vec<BigInt>>, a: usize, b: usize| if which == 0 { g[a][b].clone() } else { g[b][a].clone() };
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for other in 0..n {
            // Taylor shift of the column by t (synthetic division)
            let mut col: Vec<BigInt> = (0..n).map(|i| get(&self.grid, i, other)).collect();
            if !t.is_zero() {
                for i in 0..n {
                    for j in (i..n - 1).rev() {
                        let add = t * &col[j + 1];
                        col[j] += add;
                    }
                }
            }
            let mut power = BigInt::one();
            for (i, c) in col.into_iter().enumerate() {
                let v = c * &power;
                if which == 0 {
                    out[i][other] = v;
                } else {
                    out[other][i] = v;
                }
                power *= s;
            }
        }
        self.grid = out;
    }

    fn val(&self, c: &BigInt) -> Option<i64> {
        valuation_int(c, self.prime).map(|v| v as i64 + self.offset)
    }

    /// `v_p` of the coefficient of `u^i v^j`; `None` if it is zero.
    pub fn coeff_valuation(&self, i: usize, j: usize) -> Option<i64> {
        self.grid.get(i).and_then(|r| r.get(j)).and_then(|c| self.val(c))
    }

    /// Smallest coefficient valuation; `None` for the zero polynomial.
    pub fn min_valuation(&self) -> Option<i64> {
        self.grid.iter().flatten().filter_map(|c| self.val(c)).min()
    }

    /// Constant term nonzero with valuation strictly below every other
    /// coefficient, so `v_p` is constant on the class.
    pub fn constant_is_exact(&self) -> bool {
        let Some(c0) = self.coeff_valuation(0, 0) else { return false };
        self.monomials().all(|(i, j, v)| (i, j) == (0, 0) || v > c0)
    }

    fn monomials(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.grid
            .iter()
            .enumerate()
            .flat_map(move |(i, row)| row.iter().enumerate().filter_map(move |(j, c)| self.val(c).map(|v| (i, j, v))))
    }

    /// Variables occurring in a non-constant monomial whose valuation does
    /// not exceed the constant term's.
    fn blocking_variables(&self) -> [bool; 2] {
        let c0 = self.coeff_valuation(0, 0).unwrap_or(i64::MAX);
        let mut vars = [false; 2];
        for (i, j, v) in self.monomials() {
            if (i, j) != (0, 0) && v <= c0 {
                vars[0] |= i > 0;
                vars[1] |= j > 0;
            }
        }
        vars
    }

    fn eval(grid: &[Vec<BigInt>], u: &BigInt, v: &BigInt) -> BigInt {
        grid.iter().rev().fold(BigInt::zero(), |acc, row| {
            let inner = row.iter().rev().fold(BigInt::zero(), |a, c| a * v + c);
            acc * u + inner
        })
    }
}

/// Exact substitution of the class parametrization into `g`.
pub fn restrict_to_class(g: &TernaryForm, rc: &ResidueClass) -> RestrictedPoly {
    let mut r = RestrictedPoly::from_form(g, rc.unit_axis, rc.prime);
    let p = BigInt::from(rc.prime);
    r.shift_scale(0, &rc.center.0, &p.pow(rc.depths.0));
    r.shift_scale(1, &rc.center.1, &p.pow(rc.depths.1));
    r
}

/// Lower bounds for `v_p(Ψ6)`, `v_p(Ψ14)`, `v_p(Ψ21)` on a class, with
/// flags telling whether each bound is attained everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationBounds {
    pub w6: i64,
    pub w14: i64,
    pub w21: i64,
    pub exact6: bool,
    pub exact14: bool,
    pub exact21: bool,
    /// `v_p(1728 Ψ0)`.
    pub w: i64,
}

impl ValuationBounds {
    fn from_polys(polys: &[RestrictedPoly; 3], w: i64) -> Result<Self> {
        let bound = |r: &RestrictedPoly| {
            r.min_valuation().ok_or_else(|| Error::Internal("covariant vanishes identically".into()))
        };
        Ok(ValuationBounds {
            w6: bound(&polys[0])?,
            w14: bound(&polys[1])?,
            w21: bound(&polys[2])?,
            exact6: polys[0].constant_is_exact(),
            exact14: polys[1].constant_is_exact(),
            exact21: polys[2].constant_is_exact(),
            w,
        })
    }

    /// Lower bounds `[(W6+w)/6, (W14+2w)/14, (W21+3w)/21]` for the weighted
    /// valuations of `c`, `b`, `a`.
    pub fn weighted(&self) -> [BigRational; 3] {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        [r(self.w6 + self.w, 6), r(self.w14 + 2 * self.w, 14), r(self.w21 + 3 * self.w, 21)]
    }

    pub fn exact(&self) -> [bool; 3] {
        [self.exact6, self.exact14, self.exact21]
    }

    /// The minimum of the weighted valuations, when it is determined on the
    /// whole class.
    pub fn decided_minimum(&self) -> Option<BigRational> {
        let ws = self.weighted();
        let m = ws.iter().min().unwrap().clone();
        (0..3).any(|i| self.exact()[i] && ws[i] == m).then_some(m)
    }
}

fn check_input(f: &TernaryForm, p: u64) -> Result<CovariantSet> {
    if !is_prime_u64(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if f.degree() != 4 {
        return Err(Error::WrongDegree { expected: 4, found: f.degree() });
    }
    if !f.is_integral() {
        return Err(Error::Precondition("the local test needs an integral quartic".into()));
    }
    let cov = CovariantSet::new(f)?;
    if cov.psi0.is_zero() {
        return Err(Error::VanishingInvariant);
    }
    Ok(cov)
}

fn w_of(cov: &CovariantSet, p: u64) -> i64 {
    valuation(&(&cov.psi0 * BigRational::from_integer(1728.into())), p).expect("nonzero Ψ0")
}

pub fn class_bounds(f: &TernaryForm, rc: &ResidueClass) -> Result<ValuationBounds> {
    let cov = check_input(f, rc.prime)?;
    let polys = [&cov.psi6, &cov.psi14, &cov.psi21].map(|g| restrict_to_class(g, rc));
    ValuationBounds::from_polys(&polys, w_of(&cov, rc.prime))
}

/// Whether the class contains a `Q_p`-point of `f`. `None` when the search
/// hits its precision or size limit.
pub fn hensel_point_exists(f: &TernaryForm, rc: &ResidueClass, max_depth: u32) -> Option<bool> {
    hensel_search(&restrict_to_class(f, rc), max_depth)
}

fn derivative(grid: &[Vec<BigInt>], which: usize) -> Vec<Vec<BigInt>> {
    let n = grid.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let (e, src) =
                if which == 0 { (i + 1, grid.get(i + 1).map(|r| &r[j])) } else { (j + 1, grid[i].get(j + 1)) };
            if let Some(c) = src {
                out[i][j] = c * e;
            }
        }
    }
    out
}

fn hensel_search(g: &RestrictedPoly, max_depth: u32) -> Option<bool> {
    let p = g.prime;
    let pb = BigInt::from(p);
    let Some(m) = g.grid.iter().flatten().filter_map(|c| valuation_int(c, p)).min() else {
        return Some(true); // F vanishes on the whole class
    };
    let scale = pb.pow(m);
    let grid: Vec<Vec<BigInt>> = g.grid.iter().map(|r| r.iter().map(|c| c / &scale).collect()).collect();
    let (du, dv) = (derivative(&grid, 0), derivative(&grid, 1));
    let vp = |x: &BigInt| valuation_int(x, p).map(i64::from).unwrap_or(i64::MAX);
    let mut stack = vec![(BigInt::zero(), BigInt::zero(), 0u32)];
    let mut nodes = 0usize;
    let mut inconclusive = false;
    while let Some((u, v, n)) = stack.pop() {
        nodes += 1;
        if nodes > HENSEL_NODE_BUDGET {
            return None;
        }
        let val = RestrictedPoly::eval(&grid, &u, &v);
        if val.is_zero() {
            return Some(true);
        }
        let dmin = vp(&RestrictedPoly::eval(&du, &u, &v)).min(vp(&RestrictedPoly::eval(&dv, &u, &v)));
        if dmin < i64::MAX && vp(&val) > 2 * dmin {
            return Some(true);
        }
        if n >= max_depth {
            inconclusive = true;
            continue;
        }
        let step = pb.pow(n);
        let target = pb.pow(n + 1);
        for s in 0..p {
            for t in 0..p {
                let (cu, cv) = (&u + &step * s, &v + &step * t);
                if RestrictedPoly::eval(&grid, &cu, &cv).is_multiple_of(&target) {
                    stack.push((cu, cv, n + 1));
                }
            }
        }
    }
    if inconclusive {
        None
    } else {
        Some(false)
    }
}

/// Outcome of the local test at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVerdict {
    pub prime: u64,
    pub passes: bool,
    /// Classes containing a curve point whose solution is `p`-primitive,
    /// sorted.
    pub admissible_classes: Vec<ResidueClass>,
    /// Some class could not be decided within the depth limit.
    pub max_depth_reached: bool,
    /// Undecided classes, sorted.
    pub undecided: Vec<ResidueClass>,
}

impl LocalVerdict {
    /// Points of `P²(F_p)` that admissible classes reduce to.
    pub fn reductions(&self) -> BTreeSet<[u64; 3]> {
        self.admissible_classes.iter().filter_map(ResidueClass::reduction).collect()
    }

    pub fn label(&self) -> &'static str {
        match (self.passes, self.max_depth_reached) {
            (true, _) => "pass",
            (false, true) => "inconclusive",
            (false, false) => "fail",
        }
    }
}

impl fmt::Display for LocalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.prime, self.label())?;
        for c in &self.admissible_classes {
            write!(f, "\n{} {} admissible", self.prime, c)?;
        }
        for c in &self.undecided {
            write!(f, "\n{} {} undecided", self.prime, c)?;
        }
        Ok(())
    }
}

struct Node {
    class: ResidueClass,
    /// Restrictions of F, Ψ6, Ψ14, Ψ21.
    polys: [RestrictedPoly; 4],
}

enum Step {
    Discard,
    Admissible(ResidueClass),
    Undecided(ResidueClass),
    Split(Vec<Node>),
}

fn split_node(node: &Node, vars: [bool; 2]) -> Vec<Node> {
    let p = BigInt::from(node.class.prime);
    let mut out = vec![Node { class: node.class.clone(), polys: node.polys.clone() }];
    for (which, &go) in vars.iter().enumerate() {
        if !go {
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|n| {
                let p = p.clone();
                n.class.split(which).into_iter().enumerate().map(move |(t, class)| {
                    let mut polys = n.polys.clone();
                    for r in &mut polys {
                        r.shift_scale(which, &BigInt::from(t), &p);
                    }
                    Node { class, polys }
                })
            })
            .collect();
    }
    out
}

fn process(node: Node, w: i64, max_depth: u32) -> Result<Step> {
    let f = &node.polys[0];
    if f.constant_is_exact() {
        return Ok(Step::Discard);
    }
    let cov: [RestrictedPoly; 3] = [node.polys[1].clone(), node.polys[2].clone(), node.polys[3].clone()];
    let bounds = ValuationBounds::from_polys(&cov, w)?;
    let class = &node.class;
    let unpinned = [class.depths.0 == 0, class.depths.1 == 0];
    let vars = match bounds.decided_minimum() {
        Some(m) if !unpinned.contains(&true) => {
            if !m.is_integer() {
                return Ok(Step::Discard);
            }
            return Ok(match hensel_search(f, max_depth) {
                Some(true) => Step::Admissible(node.class),
                Some(false) => Step::Discard,
                None => Step::Undecided(node.class),
            });
        }
        Some(_) => unpinned,
        None => {
            let ws = bounds.weighted();
            let best_exact = (0..3).filter(|&i| bounds.exact()[i]).map(|i| ws[i].clone()).min();
            let mut vars = [false; 2];
            for i in 0..3 {
                if !bounds.exact()[i] && best_exact.as_ref().is_none_or(|b| ws[i].cmp(b) != Ordering::Greater) {
                    let b = cov[i].blocking_variables();
                    vars[0] |= b[0];
                    vars[1] |= b[1];
                }
            }
            if vars == [false, false] {
                [true, true]
            } else {
                vars
            }
        }
    };
    if class.depth() >= max_depth {
        return Ok(Step::Undecided(node.class));
    }
    Ok(Step::Split(split_node(&node, vars)))
}

/// Runs the residue-class test at `p`. Classes are refined breadth first;
/// each generation is processed in parallel and the results are merged
/// into sorted lists, so the verdict does not depend on scheduling.
pub fn local_test(f: &TernaryForm, p: u64, max_depth: u32) -> Result<LocalVerdict> {
    let cov = check_input(f, p)?;
    let w = w_of(&cov, p);
    let forms = [f, &cov.psi6, &cov.psi14, &cov.psi21];
    let mut frontier: Vec<Node> = ResidueClass::initial(p)
        .into_iter()
        .map(|class| Node { polys: forms.map(|g| restrict_to_class(g, &class)), class })
        .collect();
    let mut admissible = Vec::new();
    let mut undecided = Vec::new();
    while !frontier.is_empty() {
        let steps = frontier.into_par_iter().map(|n| process(n, w, max_depth)).collect::<Result<Vec<_>>>()?;
        frontier = Vec::new();
        for s in steps {
            match s {
                Step::Discard => {}
                Step::Admissible(c) => admissible.push(c),
                Step::Undecided(c) => undecided.push(c),
                Step::Split(children) => frontier.extend(children),
            }
        }
    }
    admissible.sort();
    undecided.sort();
    Ok(LocalVerdict {
        prime: p,
        passes: !admissible.is_empty(),
        max_depth_reached: !undecided.is_empty(),
        admissible_classes: admissible,
        undecided,
    })
}

/// Newton iteration in one coordinate until `f ≡ 0 mod p^target`, given
/// `v(∂f) = d` and `v(f) > 2d` at the start.
fn newton_lift(
    f: &TernaryForm,
    df: &TernaryForm,
    pt: &mut [BigInt; 3],
    axis: usize,
    p: u64,
    d: u32,
    target: u32,
) -> Option<()> {
    let pb = BigInt::from(p);
    let modulus = pb.pow(target + d);
    let pd = pb.pow(d);
    for _ in 0..64 {
        let fv = f.eval_int(pt).to_integer();
        if fv.is_zero() || valuation_int(&fv, p)? >= target {
            return Some(());
        }
        let dv = df.eval_int(pt).to_integer();
        if valuation_int(&dv, p)? != d {
            return None;
        }
        let unit = (&dv / &pd).mod_floor(&modulus);
        let inv = unit.modinv(&modulus)?;
        let step = (&fv / &pd * inv).mod_floor(&modulus);
        pt[axis] = (&pt[axis] - step).mod_floor(&modulus);
    }
    None
}

/// Independent cross-check of [`LocalVerdict::reductions`]: scans all
/// points mod `p^precision`, keeps simple zeros, lifts them by Newton's
/// method to high precision, evaluates the covariants there and tests the
/// primitivity condition directly. Points whose covariant valuations are not determined at this
/// precision are skipped, so the result can only be a subset of the true
/// set of reductions.
pub fn brute_force_reductions(f: &TernaryForm, p: u64, precision: u32) -> Result<BTreeSet<[u64; 3]>> {
    let cov = check_input(f, p)?;
    let w = w_of(&cov, p);
    let q = p.pow(precision);
    let qb = BigInt::from(q);
    let grad = f.gradient();
    let charts: Vec<(usize, u64, u64)> = vec![(0, 1, 1), (1, p, 1), (2, p, p)];
    let lift = 4 * precision + 40;
    // is the point a witness: a simple zero mod p^precision whose lift
    // gives an integral weighted minimum
    let witness = |mut pt: [BigInt; 3], unit: usize| -> Option<()> {
        let free: Vec<usize> = (0..3).filter(|&i| i != unit).collect();
        let fv = f.eval_int(&pt).to_integer();
        if !fv.is_multiple_of(&qb) {
            return None;
        }
        // an exact zero is itself a curve point; otherwise ask
        // for a simple zero in a free coordinate and lift it
        let exact = fv.is_zero();
        let d = if exact {
            0
        } else {
            let (d, axis) = free.iter().filter_map(|&i| valuation(&grad[i].eval_int(&pt), p).map(|v| (v, i))).min()?;
            if 2 * d >= precision as i64 {
                return None;
            }
            newton_lift(f, &grad[axis], &mut pt, axis, p, d as u32, lift)?;
            d
        };
        let vals = cov.eval(&pt);
        let forms = [&cov.psi6, &cov.psi14, &cov.psi21];
        let weights = [(1, 6), (2, 14), (3, 21)];
        let mut known = Vec::new();
        let mut floor = None::<BigRational>;
        for ((val, g), (k, j)) in vals.iter().zip(forms).zip(weights) {
            // the lifted point is within p^(lift - d) of the curve point, which
            // moves g by that times its smallest coefficient valuation
            let reliable = if exact {
                i64::MAX
            } else {
                lift as i64 - d + g.terms().filter_map(|(_, c)| valuation(c, p)).min().unwrap_or(0).min(0)
            };
            match valuation(val, p) {
                Some(v) if v < reliable => known.push(BigRational::new((v + k * w).into(), j.into())),
                None if exact => {}
                _ => {
                    let lb = BigRational::new((reliable + k * w).into(), j.into());
                    floor = Some(floor.map_or(lb.clone(), |f: BigRational| f.min(lb)));
                }
            }
        }
        let m = known.iter().min()?.clone();
        if floor.is_some_and(|fl| fl <= m) || !m.is_integer() {
            return None;
        }
        Some(())
    };
    let mut out = BTreeSet::new();
    let side = q / p;
    for (unit, su, sv) in charts {
        let free: Vec<usize> = (0..3).filter(|&i| i != unit).collect();
        // residues mod p of the free coordinates in this chart
        let r1: Vec<u64> = if su == 1 { (0..p).collect() } else { vec![0] };
        let r2: Vec<u64> = if sv == 1 { (0..p).collect() } else { vec![0] };
        let coord = |r: u64, s: u64, k: u64| if s == 1 { r + p * k } else { p * k };
        for &a0 in &r1 {
            for &b0 in &r2 {
                let hit = (0..side * side).into_par_iter().find_any(|&idx| {
                    let mut pt = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                    pt[unit] = BigInt::one();
                    pt[free[0]] = BigInt::from(coord(a0, su, idx / side));
                    pt[free[1]] = BigInt::from(coord(b0, sv, idx % side));
                    witness(pt, unit).is_some()
                });
                if hit.is_some() {
                    let mut r = [0u64; 3];
                    r[unit] = 1;
                    r[free[0]] = a0;
                    r[free[1]] = b0;
                    out.insert(normalize_fp(r, p));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twists::catalog;

    fn c5() -> TernaryForm {
        catalog().get("C5").unwrap().form.clone()
    }

    #[test]
    fn identity_chart() {
        let f: TernaryForm = "x^3*y + y^3*z + z^3*x".parse().unwrap();
        let rc = &ResidueClass::initial(2)[0];
        let r = restrict_to_class(&f, rc);
        // F(1, u, v) = u + u^3 v + v^3
        assert_eq!(r.grid[1][0], BigInt::from(1));
        assert_eq!(r.grid[3][1], BigInt::from(1));
        assert_eq!(r.grid[0][3], BigInt::from(1));
        assert_eq!(r.grid.iter().flatten().filter(|c| !c.is_zero()).count(), 3);
    }

    #[test]
    fn depth_bump_scales_by_degree() {
        let f = c5();
        let mut rc = ResidueClass::initial(3)[0].clone();
        let before = restrict_to_class(&f, &rc);
        rc.depths.0 = 1;
        let after = restrict_to_class(&f, &rc);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(after.grid[i][j], &before.grid[i][j] * BigInt::from(3).pow(i as u32));
            }
        }
    }

    #[test]
    fn incremental_split_matches_direct_restriction() {
        let f = c5();
        let root = ResidueClass::initial(3)[1].clone();
        let node = Node {
            polys: [f.clone(), f.clone(), f.clone(), f.clone()].map(|g| restrict_to_class(&g, &root)),
            class: root,
        };
        for child in split_node(&node, [true, true]) {
            assert_eq!(child.polys[0], restrict_to_class(&f, &child.class));
        }
    }

    #[test]
    fn c5_reduces_to_line_times_cubic_mod_3() {
        let f = c5();
        let line: TernaryForm = "x - z".parse().unwrap();
        // the cubic has a cusp at (0:1:0), so y occurs at most linearly
        let cubic: TernaryForm = "x^2*y + x^2*z + x*y*z + x*z^2 + y*z^2".parse().unwrap();
        let g = &line * &cubic;
        let diff = &f - &g;
        assert!(diff.terms().all(|(_, c)| c.to_integer().is_multiple_of(&BigInt::from(3))));
    }

    #[test]
    fn w_for_c5_at_three() {
        let b = class_bounds(&c5(), &ResidueClass::initial(3)[0]).unwrap();
        assert_eq!(b.w, 4);
    }

    #[test]
    fn scaling_shifts_valuations() {
        let f = c5();
        let rc = &ResidueClass::initial(3)[0];
        let (b1, b3) = (class_bounds(&f, rc).unwrap(), class_bounds(&f.scale_int(3), rc).unwrap());
        assert_eq!((b3.w - b1.w, b3.w6 - b1.w6, b3.w14 - b1.w14, b3.w21 - b1.w21), (3, 3, 8, 12));
    }

    #[test]
    fn bounds_match_brute_force_minimum() {
        let f = catalog().get("C1").unwrap().form.clone();
        let rc = &ResidueClass::initial(2)[0];
        let cov = CovariantSet::new(&f).unwrap();
        let b = class_bounds(&f, rc).unwrap();
        for (g, w) in [(&cov.psi6, b.w6), (&cov.psi14, b.w14), (&cov.psi21, b.w21)] {
            // minimum over the coefficients of g(1, u, v) computed term by term
            // g(1, u, v) has the same coefficients as g
            let direct = g.terms().filter_map(|(_, c)| valuation(c, 2)).min().unwrap();
            assert_eq!(w, direct);
        }
    }

    #[test]
    fn unit_value_has_no_zero() {
        let f: TernaryForm = "x^3*y + y^3*z + z^3*x".parse().unwrap();
        let rc = ResidueClass { unit_axis: Axis::X, center: (1.into(), 1.into()), depths: (1, 1), prime: 2 };
        // F(1,1,1) = 3 is a unit: the restriction is a unit plus 2·(…)
        assert!(restrict_to_class(&f, &rc).constant_is_exact());
        assert_eq!(hensel_point_exists(&f, &rc, 10), Some(false));
    }

    #[test]
    fn c5_point_at_three_lifts() {
        let rc = ResidueClass { unit_axis: Axis::Y, center: (0.into(), 0.into()), depths: (1, 1), prime: 3 };
        assert_eq!(hensel_point_exists(&c5(), &rc, 10), Some(true));
    }

    #[test]
    fn c5_local_conditions() {
        let v3 = local_test(&c5(), 3, DEFAULT_MAX_DEPTH).unwrap();
        assert!(v3.passes && !v3.max_depth_reached);
        assert_eq!(v3.reductions(), BTreeSet::from([[0, 1, 0]]));
        let v2 = local_test(&c5(), 2, DEFAULT_MAX_DEPTH).unwrap();
        assert!(v2.passes && !v2.max_depth_reached);
        assert_eq!(v2.reductions(), BTreeSet::from([[1, 0, 0], [1, 1, 1]]));
    }

    #[test]
    fn class_membership() {
        let rc = ResidueClass { unit_axis: Axis::Y, center: (3.into(), 1.into()), depths: (2, 1), prime: 3 };
        assert!(rc.contains(&[BigInt::from(3), BigInt::from(1), BigInt::from(4)]));
        assert!(rc.contains(&[BigInt::from(-6), BigInt::from(-2), BigInt::from(1)]));
        assert!(!rc.contains(&[BigInt::from(1), BigInt::from(1), BigInt::from(1)]));
        assert_eq!(rc.reduction(), Some([0, 1, 1]));
        assert_eq!(rc.to_string(), "(3+3^2Z:1:1+3^1Z)");
    }

    #[test]
    fn rejects_bad_input() {
        let f: TernaryForm = "x^3*y + y^3*z + z^3*x".parse().unwrap();
        assert!(local_test(&f, 4, 5).is_err());
        assert!(local_test(&"x^2 + y^2 + z^2".parse().unwrap(), 2, 5).is_err());
    }
}
