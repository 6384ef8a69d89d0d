//! Residue constraints on the coefficients `(n1, n2, n3)` of a sieve.
//!
//! A constraint is an explicit set of allowed residue triples modulo a
//! componentwise modulus. Combining two constraints lifts both to the
//! componentwise lcm and intersects.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::fixtures;
use crate::{Error, Result};

pub type Residue = [u64; 3];

fn reduce(r: &Residue, m: &Residue) -> Residue {
    [r[0] % m[0], r[1] % m[1], r[2] % m[2]]
}

fn all_residues(m: Residue) -> impl Iterator<Item = Residue> {
    (0..m[0]).flat_map(move |a| (0..m[1]).flat_map(move |b| (0..m[2]).map(move |c| [a, b, c])))
}

/// Residue triples allowed modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConstraint {
    modulus: Residue,
    allowed: BTreeSet<Residue>,
    pub provenance: String,
    /// Machine-readable notes on trusted, unverified inputs.
    pub caveats: Vec<String>,
}

impl SieveConstraint {
    pub fn new(modulus: Residue, allowed: impl IntoIterator<Item = Residue>, provenance: &str) -> Result<Self> {
        if modulus.contains(&0) {
            return Err(Error::Precondition("moduli must be positive".into()));
        }
        let allowed = allowed.into_iter().map(|r| reduce(&r, &modulus)).collect();
        Ok(SieveConstraint { modulus, allowed, provenance: provenance.to_string(), caveats: Vec::new() })
    }

    pub fn full(modulus: Residue) -> Result<Self> {
        Self::new(modulus, all_residues(modulus), "no condition")
    }

    pub fn modulus(&self) -> Residue {
        self.modulus
    }

    pub fn allowed(&self) -> &BTreeSet<Residue> {
        &self.allowed
    }

    pub fn contains(&self, n: &Residue) -> bool {
        self.allowed.contains(&reduce(n, &self.modulus))
    }

    /// The same condition restated modulo a componentwise multiple.
    pub fn lift(&self, to: Residue) -> Result<Self> {
        if (0..3).any(|i| to[i] == 0 || !to[i].is_multiple_of(self.modulus[i])) {
            return Err(Error::Precondition("lift target must be a multiple of the modulus".into()));
        }
        let mut out = self.clone();
        out.modulus = to;
        out.allowed = all_residues(to).filter(|r| self.contains(r)).collect();
        Ok(out)
    }

    /// Image of the allowed set modulo a componentwise divisor.
    pub fn reduce_to(&self, to: Residue) -> Result<Self> {
        if (0..3).any(|i| to[i] == 0 || !self.modulus[i].is_multiple_of(to[i])) {
            return Err(Error::Precondition("reduction target must divide the modulus".into()));
        }
        let mut out = self.clone();
        out.modulus = to;
        out.allowed = self.allowed.iter().map(|r| reduce(r, &to)).collect();
        Ok(out)
    }
}

/// `{n mod m : Σ coeffs[i] n_i ∈ targets (mod m)}`.
pub fn linear_constraint(coeffs: [i64; 3], targets: &[i64], modulus: u64) -> Result<SieveConstraint> {
    let coeffs = coeffs.map(|c| vec![c]);
    let targets: Vec<Vec<i64>> = targets.iter().map(|&t| vec![t]).collect();
    vector_linear_constraint(&coeffs, &targets, modulus)
}

/// Vector-valued version: `coeffs[i]` is the image of the i-th generator in
/// `(Z/m)^d`, and `Σ n_i coeffs[i]` must equal one of the target vectors.
/// Needed when the condition lives in a group like `Z/4 x Z/4` and cannot be
/// split into independent scalar conditions.
pub fn vector_linear_constraint(coeffs: &[Vec<i64>; 3], targets: &[Vec<i64>], modulus: u64) -> Result<SieveConstraint> {
    if modulus < 2 {
        return Err(Error::Precondition("modulus must be at least 2".into()));
    }
    let d = coeffs[0].len();
    if d == 0 || coeffs.iter().any(|c| c.len() != d) || targets.iter().any(|t| t.len() != d) {
        return Err(Error::Precondition("coefficient and target vectors must share one dimension".into()));
    }
    let m = modulus as i64;
    let norm = |v: &[i64]| v.iter().map(|x| x.mod_floor(&m)).collect::<Vec<_>>();
    let targets: BTreeSet<Vec<i64>> = targets.iter().map(|t| norm(t)).collect();
    let allowed = all_residues([modulus; 3]).filter(|n| {
        let img: Vec<i64> = (0..d).map(|k| (0..3).map(|i| coeffs[i][k] * n[i] as i64).sum()).collect();
        targets.contains(&norm(&img))
    });
    SieveConstraint::new([modulus; 3], allowed, "linear condition")
}

impl fmt::Display for SieveConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "provenance {}", self.provenance)?;
        for c in &self.caveats {
            writeln!(f, "caveat {c}")?;
        }
        writeln!(f, "mod {} {} {}", self.modulus[0], self.modulus[1], self.modulus[2])?;
        for r in &self.allowed {
            writeln!(f, "{} {} {}", r[0], r[1], r[2])?;
        }
        Ok(())
    }
}

fn parse_vec(s: &str) -> Result<Vec<i64>> {
    s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer '{t}'")))).collect()
}

fn parse_linear(rest: &str) -> Result<SieveConstraint> {
    // c1 c2 c3 mod m targets t...
    let toks: Vec<&str> = rest.split_whitespace().collect();
    if toks.len() < 6 || toks[3] != "mod" || toks[5] != "targets" {
        return Err(Error::Parse(format!("expected 'linear c1 c2 c3 mod m targets ...', got 'linear {rest}'")));
    }
    let coeffs = [parse_vec(toks[0])?, parse_vec(toks[1])?, parse_vec(toks[2])?];
    let m: u64 = toks[4].parse().map_err(|_| Error::Parse(format!("bad modulus '{}'", toks[4])))?;
    let targets = toks[6..].iter().map(|t| parse_vec(t)).collect::<Result<Vec<_>>>()?;
    if targets.is_empty() {
        return Err(Error::Parse("linear constraint without targets".into()));
    }
    vector_linear_constraint(&coeffs, &targets, m)
}

/// Constraint file: optional `provenance`/`caveat` lines, then either
/// `mod m1 m2 m3` followed by residue triples (optionally preceded by
/// `complement` to list excluded triples instead), or a single
/// `linear c1 c2 c3 mod m targets t…` line. Coefficients and targets may be
/// comma-separated vectors.
impl FromStr for SieveConstraint {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut provenance = String::from("unspecified");
        let mut caveats = Vec::new();
        let mut modulus: Option<Residue> = None;
        let mut linear: Option<SieveConstraint> = None;
        let mut complement = false;
        let mut triples = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "provenance" => provenance = rest.trim().to_string(),
                "caveat" => caveats.push(rest.trim().to_string()),
                "complement" => complement = true,
                "linear" => linear = Some(parse_linear(rest)?),
                "mod" => {
                    let v = parse_vec(&rest.split_whitespace().collect::<Vec<_>>().join(","))?;
                    if v.len() != 3 || v.iter().any(|&x| x <= 0) {
                        return Err(Error::Parse(format!("bad modulus line '{line}'")));
                    }
                    modulus = Some([v[0] as u64, v[1] as u64, v[2] as u64]);
                }
                _ => {
                    let v = parse_vec(
                        &line
                            .split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|t| !t.is_empty())
                            .collect::<Vec<_>>()
                            .join(","),
                    )?;
                    let m = modulus.ok_or_else(|| Error::Parse("residue before 'mod' line".into()))?;
                    if v.len() != 3 || (0..3).any(|i| v[i] < 0 || v[i] as u64 >= m[i]) {
                        return Err(Error::Parse(format!("bad residue line '{line}'")));
                    }
                    triples.push([v[0] as u64, v[1] as u64, v[2] as u64]);
                }
            }
        }
        let mut c = match (linear, modulus) {
            (Some(c), None) if triples.is_empty() => c,
            (None, Some(m)) if complement => {
                let excluded: BTreeSet<Residue> = triples.into_iter().collect();
                SieveConstraint::new(m, all_residues(m).filter(|r| !excluded.contains(r)), "")?
            }
            (None, Some(m)) => SieveConstraint::new(m, triples, "")?,
            _ => return Err(Error::Parse("a constraint needs exactly one of 'mod' or 'linear'".into())),
        };
        c.provenance = provenance;
        c.caveats = caveats;
        Ok(c)
    }
}

/// Survivors of the constraints applied so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveState {
    modulus: Residue,
    survivors: BTreeSet<Residue>,
}

impl Default for SieveState {
    fn default() -> Self {
        Self::new()
    }
}

impl SieveState {
    /// No constraints: every triple survives modulo `(1, 1, 1)`.
    pub fn new() -> Self {
        SieveState { modulus: [1, 1, 1], survivors: BTreeSet::from([[0, 0, 0]]) }
    }

    pub fn modulus(&self) -> Residue {
        self.modulus
    }

    pub fn survivors(&self) -> &BTreeSet<Residue> {
        &self.survivors
    }

    pub fn is_empty(&self) -> bool {
        self.survivors.is_empty()
    }

    /// Survivors reduced modulo a componentwise divisor of the modulus.
    pub fn reduced(&self, to: Residue) -> Result<BTreeSet<Residue>> {
        if (0..3).any(|i| to[i] == 0 || !self.modulus[i].is_multiple_of(to[i])) {
            return Err(Error::Precondition("reduction target must divide the modulus".into()));
        }
        Ok(self.survivors.iter().map(|r| reduce(r, &to)).collect())
    }
}

impl fmt::Display for SieveState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.modulus;
        write!(f, "mod {a} {b} {c}: ")?;
        if self.survivors.is_empty() {
            return f.write_str("(none)");
        }
        let items: Vec<String> = self.survivors.iter().map(|r| format!("({},{},{})", r[0], r[1], r[2])).collect();
        f.write_str(&items.join(" "))
    }
}

/// Intersection of the state with a constraint at the componentwise lcm.
pub fn combine(state: &SieveState, c: &SieveConstraint) -> SieveState {
    let m = state.modulus;
    let l: Residue = [0, 1, 2].map(|i| m[i].lcm(&c.modulus[i]));
    let steps = [0, 1, 2].map(|i| l[i] / m[i]);
    let mut survivors = BTreeSet::new();
    for s in &state.survivors {
        for k in all_residues(steps) {
            let r = [0, 1, 2].map(|i| s[i] + k[i] * m[i]);
            if c.contains(&r) {
                survivors.insert(r);
            }
        }
    }
    SieveState { modulus: l, survivors }
}

/// One step of [`run_c5_chain_steps`].
#[derive(Debug, Clone)]
pub struct ChainStep {
    pub name: &'static str,
    pub constraint: SieveConstraint,
    pub state: SieveState,
}

/// The elimination chain for C5: conditions at 2, 23, 3, 97, 13 in that
/// order. Assumes the index of the sieve subgroup in the Mordell–Weil group
/// is prime to 14 (not recomputed here). The 23, 97 and 13 inputs are
/// published data; see their `caveats`.
pub fn run_c5_chain_steps() -> Result<Vec<ChainStep>> {
    let inputs: [(&'static str, &str); 5] = [
        ("2", fixtures::SIEVE_P2),
        ("23", fixtures::SIEVE_P23),
        ("3", fixtures::SIEVE_P3),
        ("97", fixtures::SIEVE_P97),
        ("13", fixtures::SIEVE_P13),
    ];
    let mut state = SieveState::new();
    let mut out = Vec::new();
    for (name, text) in inputs {
        let constraint: SieveConstraint = text.parse()?;
        state = combine(&state, &constraint);
        out.push(ChainStep { name, constraint, state: state.clone() });
    }
    Ok(out)
}

/// Final state of the C5 chain; empty means no point of the subset exists
/// (conditional on the published inputs).
pub fn run_c5_chain() -> Result<SieveState> {
    Ok(run_c5_chain_steps()?.pop().expect("five steps").state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_chain_is_everything() {
        let s = SieveState::new();
        assert_eq!(s.modulus(), [1, 1, 1]);
        assert_eq!(s.survivors().len(), 1);
    }

    #[test]
    fn scalar_linear_condition() {
        let c = linear_constraint([1, 0, 3], &[1], 7).unwrap();
        assert_eq!(c.allowed().len(), 49);
        assert!(c.allowed().iter().all(|n| (n[0] + 3 * n[2]) % 7 == 1));
        assert_eq!(linear_constraint([0, 0, 0], &[0], 5).unwrap().allowed().len(), 125);
        assert!(linear_constraint([1, 1, 1], &[0], 1).is_err());
    }

    #[test]
    fn vector_condition_at_two() {
        let c: SieveConstraint = fixtures::SIEVE_P2.parse().unwrap();
        // direct enumeration of the 64 triples
        let mut expect = BTreeSet::new();
        for n in all_residues([4, 4, 4]) {
            let img = ((n[2]) % 4, (3 * n[0] + 3 * n[1] + 2 * n[2]) % 4);
            if [(0, 0), (1, 0), (1, 2)].contains(&img) {
                expect.insert(n);
            }
        }
        assert_eq!(c.allowed(), &expect);
        assert_eq!(expect.len(), 12);
    }

    #[test]
    fn lift_then_reduce() {
        let c = linear_constraint([2, 1, 0], &[3], 5).unwrap();
        let back = c.lift([10, 15, 5]).unwrap().reduce_to([5, 5, 5]).unwrap();
        assert_eq!(back.allowed(), c.allowed());
        assert!(c.lift([7, 5, 5]).is_err());
    }

    #[test]
    fn file_format() {
        let c: SieveConstraint = "mod 2 2 2\ncomplement\n0 0 0\n".parse().unwrap();
        assert_eq!(c.allowed().len(), 7);
        assert!("0 0 0\n".parse::<SieveConstraint>().is_err());
        assert!("mod 2 2 2\n0 0 5\n".parse::<SieveConstraint>().is_err());
        let round: SieveConstraint = c.to_string().parse().unwrap();
        assert_eq!(round.allowed(), c.allowed());
    }
}
