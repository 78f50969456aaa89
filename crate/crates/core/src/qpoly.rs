//! Exact polynomials in `q` and congruence-conditioned families of them.
//!
//! A [`CondPoly`] assigns a polynomial to each pair (twist, residue of `q`
//! modulo a fixed modulus). Cells may be absent: the set of present cells is
//! the domain. Binary operations refine both operands to the lcm of their
//! moduli and require equal domains.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::root_system::Twist;

/// A polynomial in `q` with exact rational coefficients, lowest degree first.
///
/// Counts are integer-valued on their branch even when a coefficient is not
/// an integer, e.g. `(q^7 + 3q^4)/2` on odd `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^k`
    pub fn monomial(c: i64, k: u32) -> Self {
        Self::monomial_big(BigRational::from_integer(BigInt::from(c)), k)
    }

    pub fn monomial_big(c: BigRational, k: u32) -> Self {
        let mut coeffs = vec![BigRational::zero(); k as usize + 1];
        coeffs[k as usize] = c;
        Poly::from_coeffs(coeffs)
    }

    /// `q^k`
    pub fn q_pow(k: u32) -> Self {
        Self::monomial(1, k)
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, q: &BigInt) -> BigRational {
        let q = BigRational::from_integer(q.clone());
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &q + c)
    }

    pub fn eval_u64(&self, q: u64) -> BigRational {
        self.eval(&BigInt::from(q))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let dd = divisor.degree()?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n < dd + 1 {
            return self.is_zero().then(Poly::zero);
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let c = &rem[i + dd] / &lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &c * d;
            }
            quot[i] = c;
        }
        rem.iter()
            .all(|c| c.is_zero())
            .then(|| Poly::from_coeffs(quot))
    }

    /// True when the polynomial takes integer values at every `q ≡ r (mod m)`.
    ///
    /// A degree-`d` polynomial in `k` that is integral at `k = 0..=d` is
    /// integral on all of `Z`, so `d + 1` samples of `r + m k` suffice.
    pub fn integer_valued_on(&self, residue: u64, modulus: u64) -> bool {
        let d = self.degree().unwrap_or(0) as u64;
        (0..=d).all(|k| self.eval_u64(residue + modulus * k).is_integer())
    }

    /// Graded comparison used for display order: degree first, then
    /// coefficients from the top down.
    pub fn graded_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    fn combine(&self, other: &Poly, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|k| f(&self.coeff(k), &other.coeff(k)))
                .collect(),
        )
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |a, b| &a + &b)
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let var = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            if k == 0 {
                write!(f, "{}", fmt_coeff(&mag))?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}*{var}", fmt_coeff(&mag))?;
            }
        }
        Ok(())
    }
}

/// Outcome of comparing two [`CondPoly`] values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    /// Polynomials differ on a shared cell.
    Differ(Witness),
    /// A cell is present in one operand only.
    DomainMismatch(Witness),
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Comparison::Equal => None,
            Comparison::Differ(w) | Comparison::DomainMismatch(w) => Some(w),
        }
    }
}

/// A point where two families disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub twist: Twist,
    pub residue: u64,
    pub modulus: u64,
    /// Smallest prime power in the class where the values differ, if one
    /// exists below the search bound.
    pub q: Option<u64>,
    pub left: Option<String>,
    pub right: Option<String>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "twist {}, q ≡ {} mod {}", self.twist, self.residue, self.modulus)?;
        if let Some(q) = self.q {
            write!(f, " (q = {q})")?;
        }
        write!(
            f,
            ": {} vs {}",
            self.left.as_deref().unwrap_or("<absent>"),
            self.right.as_deref().unwrap_or("<absent>")
        )
    }
}

const WITNESS_SEARCH_BOUND: u64 = 1 << 20;

/// A polynomial per (twist, residue of `q` mod `modulus`) cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondPoly {
    modulus: u64,
    cells: BTreeMap<(Twist, u64), Poly>,
}

/// One displayed branch: a polynomial with the cells it covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub modulus: u64,
    pub residues: BTreeSet<u64>,
    /// `None` when the branch applies to both twists.
    pub twist: Option<Twist>,
    pub poly: Poly,
}

impl CondPoly {
    /// The same polynomial on every residue for the given twists.
    pub fn uniform(poly: Poly, twists: &[Twist]) -> Self {
        let cells = twists.iter().map(|&t| ((t, 0), poly.clone())).collect();
        CondPoly { modulus: 1, cells }
    }

    /// Builds cells from `f(residue, twist)`; `None` leaves the cell out.
    pub fn build(
        modulus: u64,
        twists: &[Twist],
        mut f: impl FnMut(u64, Twist) -> Option<Poly>,
    ) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let mut cells = BTreeMap::new();
        for &t in twists {
            for r in 0..modulus {
                if let Some(p) = f(r, t) {
                    cells.insert((t, r), p);
                }
            }
        }
        CondPoly { modulus, cells }.normalized()
    }

    /// Fallible variant of [`CondPoly::build`].
    pub fn try_build(
        modulus: u64,
        twists: &[Twist],
        mut f: impl FnMut(u64, Twist) -> Result<Option<Poly>>,
    ) -> Result<Self> {
        let mut cells = BTreeMap::new();
        for &t in twists {
            for r in 0..modulus {
                if let Some(p) = f(r, t)? {
                    cells.insert((t, r), p);
                }
            }
        }
        Ok(CondPoly { modulus, cells }.normalized())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn cells(&self) -> &BTreeMap<(Twist, u64), Poly> {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn twists(&self) -> BTreeSet<Twist> {
        self.cells.keys().map(|(t, _)| *t).collect()
    }

    /// The polynomial governing `q` under `twist`, if `q` lies in the domain.
    pub fn poly_at(&self, q: u64, twist: Twist) -> Option<&Poly> {
        self.cells.get(&(twist, q % self.modulus))
    }

    pub fn contains(&self, q: u64, twist: Twist) -> bool {
        self.poly_at(q, twist).is_some()
    }

    /// Re-expresses the family over a multiple of the current modulus.
    pub fn refine(&self, modulus: u64) -> CondPoly {
        assert!(
            modulus % self.modulus == 0,
            "refinement modulus {modulus} is not a multiple of {}",
            self.modulus
        );
        let mut cells = BTreeMap::new();
        for (&(t, r), p) in &self.cells {
            let mut s = r;
            while s < modulus {
                cells.insert((t, s), p.clone());
                s += self.modulus;
            }
        }
        CondPoly { modulus, cells }
    }

    /// Coarsens to the smallest modulus that represents the same family.
    pub fn normalized(&self) -> CondPoly {
        let twists: BTreeSet<Twist> = self.twists();
        for d in arith::divisors(self.modulus) {
            let ok = twists.iter().all(|&t| {
                (0..self.modulus).all(|r| self.cells.get(&(t, r)) == self.cells.get(&(t, r % d)))
            });
            if ok {
                let cells = self
                    .cells
                    .iter()
                    .filter(|((_, r), _)| *r < d)
                    .map(|(k, p)| (*k, p.clone()))
                    .collect();
                return CondPoly { modulus: d, cells };
            }
        }
        self.clone()
    }

    fn aligned(&self, other: &CondPoly) -> (CondPoly, CondPoly) {
        let m = arith::lcm(self.modulus, other.modulus);
        (self.refine(m), other.refine(m))
    }

    /// Applies `f` cellwise on the common refinement; domains must agree.
    pub fn zip_with(&self, other: &CondPoly, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<CondPoly> {
        let (a, b) = self.aligned(other);
        if let Some(&(twist, residue)) = a
            .cells
            .keys()
            .find(|k| !b.cells.contains_key(k))
            .or_else(|| b.cells.keys().find(|k| !a.cells.contains_key(k)))
        {
            return Err(Error::DomainMismatch { twist, residue, modulus: a.modulus });
        }
        let cells = a
            .cells
            .iter()
            .map(|(k, p)| (*k, f(p, &b.cells[k])))
            .collect();
        Ok(CondPoly { modulus: a.modulus, cells }.normalized())
    }

    pub fn add(&self, other: &CondPoly) -> Result<CondPoly> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CondPoly) -> Result<CondPoly> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &CondPoly) -> Result<CondPoly> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scalar_mul(&self, c: &BigRational) -> CondPoly {
        self.map(|p| p.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> CondPoly {
        let cells = self.cells.iter().map(|(k, p)| (*k, f(p))).collect();
        CondPoly { modulus: self.modulus, cells }.normalized()
    }

    /// Restricts to the cells present in both operands.
    pub fn intersect_domain(&self, other: &CondPoly) -> CondPoly {
        let (a, b) = self.aligned(other);
        let cells = a
            .cells
            .into_iter()
            .filter(|(k, _)| b.cells.contains_key(k))
            .collect();
        CondPoly { modulus: a.modulus, cells }.normalized()
    }

    /// Keeps the cells accepted by `keep(residue, twist)` at the current modulus.
    pub fn filter(&self, mut keep: impl FnMut(u64, Twist) -> bool) -> CondPoly {
        let cells = self
            .cells
            .iter()
            .filter(|((t, r), _)| keep(*r, *t))
            .map(|(k, p)| (*k, p.clone()))
            .collect();
        CondPoly { modulus: self.modulus, cells }.normalized()
    }

    /// Merges two families with disjoint domains.
    pub fn union(&self, other: &CondPoly) -> Result<CondPoly> {
        let (mut a, b) = self.aligned(other);
        for (k, p) in b.cells {
            if a.cells.contains_key(&k) {
                return Err(Error::DomainMismatch { twist: k.0, residue: k.1, modulus: a.modulus });
            }
            a.cells.insert(k, p);
        }
        Ok(a.normalized())
    }

    pub fn compare(&self, other: &CondPoly) -> Comparison {
        let (a, b) = self.aligned(other);
        let keys: BTreeSet<_> = a.cells.keys().chain(b.cells.keys()).copied().collect();
        for (twist, residue) in keys {
            let (pa, pb) = (a.cells.get(&(twist, residue)), b.cells.get(&(twist, residue)));
            if pa == pb {
                continue;
            }
            let q = witness_q(residue, a.modulus, pa, pb);
            let value = |p: Option<&Poly>| {
                p.map(|p| match q {
                    Some(q) => format!("{} = {}", p, p.eval_u64(q)),
                    None => p.to_string(),
                })
            };
            let w = Witness {
                twist,
                residue,
                modulus: a.modulus,
                q,
                left: value(pa),
                right: value(pb),
            };
            return if pa.is_some() && pb.is_some() {
                Comparison::Differ(w)
            } else {
                Comparison::DomainMismatch(w)
            };
        }
        Comparison::Equal
    }

    /// Branchwise identity after refinement; on failure, a witness.
    pub fn equal(&self, other: &CondPoly) -> std::result::Result<(), Witness> {
        match self.compare(other) {
            Comparison::Equal => Ok(()),
            Comparison::Differ(w) | Comparison::DomainMismatch(w) => Err(w),
        }
    }

    /// Exact value at `q` for the given twist.
    pub fn evaluate(&self, q: u64, twist: Twist) -> Result<BigInt> {
        let p = self.poly_at(q, twist).ok_or(Error::NoBranch { q, twist })?;
        let v = p.eval_u64(q);
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::NonInteger(format!("{p} at q = {q} gives {v}")))
        }
    }

    /// True when every cell's polynomial is integral on its residue class.
    pub fn integer_valued(&self) -> bool {
        self.cells
            .iter()
            .all(|(&(_, r), p)| p.integer_valued_on(r, self.modulus))
    }

    /// Groups cells with identical polynomials, largest polynomial first.
    pub fn branches(&self) -> Vec<Branch> {
        let n = self.normalized();
        let mut by_poly: Vec<(Poly, BTreeMap<Twist, BTreeSet<u64>>)> = Vec::new();
        for (&(t, r), p) in &n.cells {
            match by_poly.iter_mut().find(|(q, _)| q == p) {
                Some((_, m)) => {
                    m.entry(t).or_default().insert(r);
                }
                None => {
                    let mut m = BTreeMap::new();
                    m.insert(t, BTreeSet::from([r]));
                    by_poly.push((p.clone(), m));
                }
            }
        }
        by_poly.sort_by(|a, b| b.0.graded_cmp(&a.0));
        let mut out = Vec::new();
        for (poly, per_twist) in by_poly {
            let sets: Vec<_> = per_twist.values().collect();
            if per_twist.len() == 2 && sets[0] == sets[1] {
                out.push(Branch {
                    modulus: n.modulus,
                    residues: sets[0].clone(),
                    twist: None,
                    poly: poly.clone(),
                });
            } else {
                for (t, residues) in per_twist {
                    out.push(Branch { modulus: n.modulus, residues, twist: Some(t), poly: poly.clone() });
                }
            }
        }
        out
    }

    fn condition_text(&self, b: &Branch) -> Option<String> {
        let twists = self.twists();
        let full_residues = b.residues.len() as u64 == b.modulus;
        let covers_twists = b.twist.is_none() || twists.len() == 1;
        if full_residues && covers_twists {
            return None;
        }
        let mut parts = Vec::new();
        if let (Some(t), true) = (b.twist, twists.len() == 2) {
            parts.push(format!("ε = {t}"));
        }
        if !full_residues {
            parts.push(residue_text(&b.residues, b.modulus));
        }
        Some(parts.join(", "))
    }

    /// Cell count of the domain at the current modulus.
    pub fn domain_size(&self) -> usize {
        self.cells.len()
    }
}

pub fn residue_text(residues: &BTreeSet<u64>, modulus: u64) -> String {
    if modulus == 2 {
        return if residues.contains(&1) { "q odd".into() } else { "q even".into() };
    }
    let list: Vec<String> = residues.iter().map(|r| r.to_string()).collect();
    format!("q ≡ {} mod {modulus}", list.join(","))
}

fn witness_q(residue: u64, modulus: u64, a: Option<&Poly>, b: Option<&Poly>) -> Option<u64> {
    let mut q = residue;
    while q <= WITNESS_SEARCH_BOUND {
        if q >= 2 && arith::prime_power(q).is_some() {
            match (a, b) {
                (Some(a), Some(b)) => {
                    if a.eval_u64(q) != b.eval_u64(q) {
                        return Some(q);
                    }
                }
                _ => return Some(q),
            }
        }
        q += modulus;
    }
    None
}

impl fmt::Display for CondPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "<empty>");
        }
        let parts: Vec<String> = self
            .branches()
            .iter()
            .map(|b| match self.condition_text(b) {
                Some(c) => format!("{} [{c}]", b.poly),
                None => b.poly.to_string(),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// JSON form of one branch: `{mod, residues, eps, coeffs}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    #[serde(rename = "mod")]
    pub modulus: u64,
    pub residues: Vec<u64>,
    /// `"+"`, `"-"` or `"any"`.
    pub eps: String,
    /// Coefficients from degree 0 upward, as exact decimal or `a/b` strings.
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondPolyJson {
    pub branches: Vec<BranchJson>,
}

impl From<&CondPoly> for CondPolyJson {
    fn from(c: &CondPoly) -> Self {
        let branches = c
            .branches()
            .into_iter()
            .map(|b| BranchJson {
                modulus: b.modulus,
                residues: b.residues.into_iter().collect(),
                eps: b.twist.map_or_else(|| "any".to_string(), |t| t.to_string()),
                coeffs: b.poly.coeffs().iter().map(fmt_coeff).collect(),
            })
            .collect();
        CondPolyJson { branches }
    }
}

fn parse_coeff(s: &str) -> Result<BigRational> {
    let bad = || Error::Unsupported(format!("malformed coefficient {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl TryFrom<CondPolyJson> for CondPoly {
    type Error = Error;

    fn try_from(j: CondPolyJson) -> Result<CondPoly> {
        let modulus = j.branches.iter().fold(1, |m, b| arith::lcm(m, b.modulus.max(1)));
        let mut cells = BTreeMap::new();
        for b in &j.branches {
            let poly = Poly::from_coeffs(b.coeffs.iter().map(|c| parse_coeff(c)).collect::<Result<_>>()?);
            let twists: Vec<Twist> = match b.eps.as_str() {
                "any" => Twist::BOTH.to_vec(),
                s => vec![s.parse()?],
            };
            for &t in &twists {
                for &r in &b.residues {
                    let mut s = r % b.modulus;
                    while s < modulus {
                        if cells.insert((t, s), poly.clone()).is_some() {
                            return Err(Error::DomainMismatch { twist: t, residue: s, modulus });
                        }
                        s += b.modulus;
                    }
                }
            }
        }
        Ok(CondPoly { modulus, cells }.normalized())
    }
}

impl Serialize for CondPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CondPolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CondPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CondPolyJson::deserialize(d)?;
        CondPoly::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// Converts a small exact count to `u64`, if it fits.
pub fn to_u64(v: &BigInt) -> Option<u64> {
    v.to_u64()
}

/// `gcd` of an integer-valued residue expression, used by branch builders.
pub fn gcd_with_shift(n: u64, residue: u64, shift: i64) -> u64 {
    let r = arith::sub_mod(residue, shift, n.max(1));
    if r == 0 {
        n
    } else {
        r.gcd(&n)
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.coeffs.iter().map(fmt_coeff).collect();
        coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|c| parse_coeff(c))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Poly::from_coeffs(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: u32) -> Poly {
        Poly::q_pow(k)
    }

    #[test]
    fn display_matches_canonical_rendering() {
        let p = &q(6) + &Poly::monomial(8, 2);
        assert_eq!(p.to_string(), "q^6 + 8*q^2");
        assert_eq!((&q(1) - &Poly::one()).to_string(), "q - 1");
        assert_eq!(Poly::zero().to_string(), "0");
        let half = q(7).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(half.to_string(), "1/2*q^7");
    }

    #[test]
    fn refinement_to_lcm() {
        let a = CondPoly::build(2, &[Twist::Split], |r, _| Some(Poly::constant(r as i64)));
        let b = CondPoly::build(3, &[Twist::Split], |r, _| Some(Poly::constant(10 * r as i64)));
        let s = a.add(&b).unwrap();
        assert_eq!(s.modulus(), 6);
        assert_eq!(s.evaluate(5, Twist::Split).unwrap(), BigInt::from(1 + 20));
    }

    #[test]
    fn self_difference_is_zero() {
        let a = CondPoly::build(4, &Twist::BOTH, |r, _| Some(&q(3) + &Poly::constant(r as i64)));
        let z = a.sub(&a).unwrap();
        assert!(z.cells().values().all(Poly::is_zero));
        assert_eq!(z.modulus(), 1);
    }

    #[test]
    fn comparison_reports_witness() {
        let a = CondPoly::uniform(&q(1) + &Poly::constant(3), &[Twist::Split]);
        let b = CondPoly::uniform(&q(1) + &Poly::constant(1), &[Twist::Split]);
        let w = a.equal(&b).unwrap_err();
        assert_eq!(w.q, Some(2));
        assert!(a.equal(&a.clone()).is_ok());
    }

    #[test]
    fn parity_rendering() {
        let c = CondPoly::build(2, &[Twist::Split], |r, _| {
            Some(if r == 1 { &q(3) + &q(1) } else { q(3) })
        });
        assert_eq!(c.to_string(), "q^3 + q [q odd]; q^3 [q even]");
    }

    #[test]
    fn json_round_trip() {
        let c = CondPoly::build(4, &Twist::BOTH, |r, t| {
            (r != 0).then(|| &q(5) + &Poly::monomial(r as i64 + t.sign(), 1))
        });
        let j = serde_json::to_string(&c).unwrap();
        let back: CondPoly = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn exact_division() {
        let p = &(&q(1) - &Poly::one()) * &q(1);
        assert_eq!(p.div_exact(&(&q(1) - &Poly::one())), Some(q(1)));
        assert_eq!(q(2).div_exact(&(&q(1) + &Poly::one())), None);
    }

    #[test]
    fn integer_valued_detection() {
        let half = &(&q(7) + &Poly::monomial(3, 4)).scale(&BigRational::new(1.into(), 2.into())) + &Poly::zero();
        assert!(half.integer_valued_on(1, 2));
        assert!(!half.integer_valued_on(0, 2) || half.eval_u64(2).is_integer());
    }
}
