//! Component group of the center of the simply connected group, its subgroup
//! lattice, isogeny types, and the orders of `H^1(F, Z(G))`.
//!
//! The fundamental group is realised as `Z^n / rowspan(A)` where `A` is the
//! Cartan matrix: a coweight `w` is recorded by `t_j = <w, alpha_j>`, and the
//! simple coroots are the rows of `A`. Elements are indexed abstractly:
//!
//! * cyclic of order `N`: index `k` stands for `k * w_g` with `w_g` a
//!   fundamental coweight of order `N`;
//! * Klein four (type `D_{2m}`): index `a + 2b` stands for
//!   `a * w_{n-1} + b * w_n`. The order-2 subgroups are `c1 = <w_{n-1}>`,
//!   `c2 = <w_n>` and `c3 = <w_1>`, the kernel of `Spin -> SO`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::qpoly::{CondPoly, Poly};
use crate::root_system::{self, Series, Twist};

/// Abstract shape of the fundamental group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FundShape {
    Cyclic(u32),
    Klein,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundGroup {
    pub series: Series,
    pub rank: usize,
    pub shape: FundShape,
    /// Coweight coordinates of the generators: one vector for the cyclic
    /// case, two for the Klein case.
    generators: Vec<Vec<i64>>,
}

/// A subgroup stored as a bitmask over element indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Subgroup(u32);

impl Subgroup {
    pub fn trivial() -> Self {
        Subgroup(1)
    }

    pub fn from_mask(mask: u32) -> Self {
        Subgroup(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, element: u32) -> bool {
        self.0 >> element & 1 == 1
    }

    pub fn order(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_subgroup_of(self, other: Subgroup) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        (0..32).filter(move |&e| self.contains(e))
    }
}

/// Integer row echelon form of a lattice given by generators.
#[derive(Clone, Debug)]
pub(crate) struct Lattice {
    rows: Vec<(usize, Vec<i64>)>,
}

impl Lattice {
    pub(crate) fn new(generators: Vec<Vec<i64>>, dim: usize) -> Self {
        let mut pending: Vec<Vec<i64>> = generators;
        let mut rows = Vec::new();
        for col in 0..dim {
            loop {
                let mut nz: Vec<usize> = (0..pending.len()).filter(|&i| pending[i][col] != 0).collect();
                if nz.len() <= 1 {
                    if let Some(&i) = nz.first() {
                        let mut r = pending.swap_remove(i);
                        if r[col] < 0 {
                            r.iter_mut().for_each(|x| *x = -*x);
                        }
                        rows.push((col, r));
                    }
                    break;
                }
                nz.sort_by_key(|&i| pending[i][col].abs());
                let piv = nz[0];
                let p = pending[piv].clone();
                for &i in &nz[1..] {
                    let f = pending[i][col] / p[col];
                    for (x, y) in pending[i].iter_mut().zip(&p) {
                        *x -= f * y;
                    }
                }
            }
            pending.retain(|r| r.iter().any(|&x| x != 0));
        }
        Lattice { rows }
    }

    pub(crate) fn contains(&self, v: &[i64]) -> bool {
        let mut v = v.to_vec();
        for (col, r) in &self.rows {
            if v[*col] % r[*col] != 0 {
                return false;
            }
            let f = v[*col] / r[*col];
            for (x, y) in v.iter_mut().zip(r) {
                *x -= f * y;
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn scaled_sum(parts: &[(i64, &Vec<i64>)], n: usize) -> Vec<i64> {
    let mut out = vec![0; n];
    for (k, v) in parts {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += k * x;
        }
    }
    out
}

/// The fundamental group of the simple simply connected group of this type.
pub fn fundamental_group(series: Series, rank: usize) -> Result<FundGroup> {
    let cartan = root_system::cartan_matrix(series, rank)?;
    let n = rank;
    let coroots = Lattice::new(cartan.clone(), n);
    let order_of = |v: &Vec<i64>| -> u32 {
        (1..=64u32)
            .find(|&k| coroots.contains(&v.iter().map(|x| x * k as i64).collect::<Vec<_>>()))
            .expect("fundamental group has order at most 64")
    };
    if series == Series::D && n % 2 == 0 {
        return Ok(FundGroup {
            series,
            rank,
            shape: FundShape::Klein,
            generators: vec![unit(n, n - 2), unit(n, n - 1)],
        });
    }
    let order = determinant(&cartan).unsigned_abs() as u32;
    let gen = (0..n)
        .map(|i| unit(n, i))
        .find(|v| order_of(v) == order)
        .expect("a fundamental coweight generates a cyclic fundamental group");
    Ok(FundGroup { series, rank, shape: FundShape::Cyclic(order), generators: vec![gen] })
}

fn determinant(m: &[Vec<i64>]) -> i64 {
    // Bareiss fraction-free elimination.
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

impl FundGroup {
    pub fn order(&self) -> u32 {
        match self.shape {
            FundShape::Cyclic(n) => n,
            FundShape::Klein => 4,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.shape, FundShape::Cyclic(_))
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.shape {
            FundShape::Cyclic(n) => (a + b) % n,
            FundShape::Klein => a ^ b,
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match self.shape {
            FundShape::Cyclic(n) => (n - a) % n,
            FundShape::Klein => a,
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn full(&self) -> Subgroup {
        Subgroup((1u32 << self.order()) - 1)
    }

    /// Smallest subgroup containing the given elements.
    pub fn generated_by(&self, elements: &[u32]) -> Subgroup {
        let mut mask = 1u32;
        loop {
            let mut next = mask;
            for a in Subgroup(mask).elements() {
                for &g in elements {
                    next |= 1 << self.add(a, g);
                }
            }
            if next == mask {
                return Subgroup(mask);
            }
            mask = next;
        }
    }

    pub fn join(&self, a: Subgroup, b: Subgroup) -> Subgroup {
        let gens: Vec<u32> = a.elements().chain(b.elements()).collect();
        self.generated_by(&gens)
    }

    /// Cyclic subgroup of the given order; `None` if the group is not cyclic
    /// or the order does not divide.
    pub fn cyclic_subgroup(&self, order: u32) -> Option<Subgroup> {
        match self.shape {
            FundShape::Cyclic(n) if n % order == 0 => Some(self.generated_by(&[n / order % n])),
            _ => None,
        }
    }

    /// Coweight coordinates of an element.
    pub fn coweight(&self, element: u32) -> Vec<i64> {
        let n = self.rank;
        match self.shape {
            FundShape::Cyclic(_) => scaled_sum(&[(element as i64, &self.generators[0])], n),
            FundShape::Klein => scaled_sum(
                &[
                    ((element & 1) as i64, &self.generators[0]),
                    ((element >> 1) as i64, &self.generators[1]),
                ],
                n,
            ),
        }
    }

    pub fn label(&self, k: Subgroup) -> String {
        if k.order() == 1 {
            return "1".into();
        }
        match self.shape {
            FundShape::Cyclic(_) => format!("μ{}", k.order()),
            FundShape::Klein => match k.mask() {
                0b0011 => "c1".into(),
                0b0101 => "c2".into(),
                0b1001 => "c3".into(),
                _ => "μ2×μ2".into(),
            },
        }
    }

    /// Inverse of [`FundGroup::label`]; also accepts `full` and plain orders.
    pub fn parse_label(&self, s: &str) -> Result<Subgroup> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("full") || t.eq_ignore_ascii_case("z") {
            return Ok(self.full());
        }
        let lattice = subgroup_lattice(self);
        lattice
            .subgroups
            .iter()
            .copied()
            .find(|&k| {
                self.label(k) == t
                    || (self.is_cyclic() && t.trim_start_matches("mu").trim_start_matches('μ') == k.order().to_string())
            })
            .ok_or_else(|| Error::UnknownKernel(format!("{t} in {}", self.describe())))
    }

    pub fn describe(&self) -> String {
        match self.shape {
            FundShape::Cyclic(1) => "trivial".into(),
            FundShape::Cyclic(n) => format!("μ{n}"),
            FundShape::Klein => "μ2×μ2".into(),
        }
    }

    /// Order of the fixed points of Frobenius on `Fund / e`.
    ///
    /// Cyclic quotients: `gcd(|Q|, q - ε)`. Klein quotients: all of `Q` for
    /// odd `q`, trivial for even `q` (where `p = 2` is bad anyway).
    pub fn fixed_quotient_order(&self, e: Subgroup, twist: Twist, q: u64) -> u64 {
        let quotient = (self.order() / e.order()) as u64;
        match self.shape {
            FundShape::Cyclic(_) => arith::gcd(quotient, arith::sub_mod(q, twist.sign(), quotient)),
            FundShape::Klein => {
                if q % 2 == 1 {
                    quotient
                } else {
                    1
                }
            }
        }
    }

    /// Modulus governing every congruence condition on this group.
    pub fn modulus(&self) -> u64 {
        match self.shape {
            FundShape::Cyclic(n) => n as u64,
            FundShape::Klein => 2,
        }
    }
}

/// All subgroups with inclusion data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupLattice {
    /// Sorted by order, then mask.
    pub subgroups: Vec<Subgroup>,
    /// Indices of the maximal proper subgroups of each entry.
    pub maximal: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    pub fn index_of(&self, k: Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|&x| x == k)
    }

    /// Möbius function `mu(a, b)` of the lattice; zero unless `a <= b`.
    pub fn mobius(&self, a: Subgroup, b: Subgroup) -> i64 {
        if !a.is_subgroup_of(b) {
            return 0;
        }
        if a == b {
            return 1;
        }
        -self
            .subgroups
            .iter()
            .filter(|&&c| a.is_subgroup_of(c) && c.is_subgroup_of(b) && c != b)
            .map(|&c| self.mobius(a, c))
            .sum::<i64>()
    }
}

pub fn subgroup_lattice(fund: &FundGroup) -> SubgroupLattice {
    let n = fund.order();
    let mut subgroups: Vec<Subgroup> = (0..n).map(|g| fund.generated_by(&[g])).collect();
    // Every subgroup of these groups is generated by at most two elements.
    for a in 0..n {
        for b in 0..n {
            subgroups.push(fund.generated_by(&[a, b]));
        }
    }
    subgroups.sort_by_key(|k| (k.order(), k.mask()));
    subgroups.dedup();
    let maximal = subgroups
        .iter()
        .map(|&k| {
            (0..subgroups.len())
                .filter(|&i| {
                    let h = subgroups[i];
                    h != k
                        && h.is_subgroup_of(k)
                        && !subgroups.iter().any(|&m| m != k && m != h && h.is_subgroup_of(m) && m.is_subgroup_of(k))
                })
                .collect()
        })
        .collect();
    SubgroupLattice { subgroups, maximal }
}

/// Isogeny type: which central subgroup of the simply connected group is
/// divided out.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Isogeny {
    SimplyConnected,
    Adjoint,
    /// `SO_{2n}` in type `D`.
    SpecialOrthogonal,
    /// Half-spin group in type `D_{2m}`.
    HalfSpin,
    /// `G_r` in type `A_n`: kernel of order `r`.
    Quotient(u32),
    /// Companion with connected center (e.g. `GL_n`, `GU_n`); the caller
    /// supplies `|Z(G)^F|`.
    ConnectedCenter { center_order: Poly },
}

impl Isogeny {
    pub fn is_connected_center(&self) -> bool {
        matches!(self, Isogeny::ConnectedCenter { .. })
    }

    /// Names accepted by [`Isogeny::from_str`].
    pub const NAMES: &'static str = "sc, adjoint, SO, HS, r=<k>, gl";
}

impl fmt::Display for Isogeny {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Isogeny::SimplyConnected => f.write_str("sc"),
            Isogeny::Adjoint => f.write_str("adjoint"),
            Isogeny::SpecialOrthogonal => f.write_str("SO"),
            Isogeny::HalfSpin => f.write_str("HS"),
            Isogeny::Quotient(r) => write!(f, "r={r}"),
            Isogeny::ConnectedCenter { center_order } => write!(f, "connected(|Z^F| = {center_order})"),
        }
    }
}

impl FromStr for Isogeny {
    type Err = Error;

    /// `gl` yields a placeholder center order of `q - 1`; use
    /// [`GroupSpec::connected_center`] to get the twist-correct companion.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.as_str();
        Ok(match t {
            "sc" | "simply-connected" | "simplyconnected" | "simply_connected" => Isogeny::SimplyConnected,
            "ad" | "adjoint" => Isogeny::Adjoint,
            "so" => Isogeny::SpecialOrthogonal,
            "hs" | "half-spin" | "halfspin" => Isogeny::HalfSpin,
            "gl" | "connected" => Isogeny::ConnectedCenter { center_order: Poly::from_ints(&[-1, 1]) },
            _ => {
                let r = t
                    .strip_prefix("r=")
                    .or_else(|| t.strip_prefix('r'))
                    .and_then(|x| x.parse::<u32>().ok())
                    .ok_or_else(|| {
                        Error::Unsupported(format!("unknown isogeny {s:?}; valid: {}", Isogeny::NAMES))
                    })?;
                Isogeny::Quotient(r)
            }
        })
    }
}

/// A finite reductive group datum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub series: Series,
    pub rank: usize,
    pub isogeny: Isogeny,
    pub twist: Twist,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
}

impl GroupSpec {
    /// Validates and canonicalises the datum.
    pub fn new(series: Series, rank: usize, isogeny: Isogeny, twist: Twist) -> Result<Self> {
        series.check_rank(rank)?;
        root_system::frobenius_orbits(series, rank, twist)?;
        let fund = fundamental_group(series, rank)?;
        let n = fund.order();
        let bad = || Error::InvalidIsogeny { series, isogeny: isogeny.to_string() };
        let isogeny = match (&isogeny, series) {
            (Isogeny::Quotient(r), Series::A) => {
                if *r == 0 || n % r != 0 {
                    return Err(bad());
                }
                match *r {
                    1 => Isogeny::SimplyConnected,
                    r if r == n => Isogeny::Adjoint,
                    r => Isogeny::Quotient(r),
                }
            }
            (Isogeny::Quotient(_), _) => return Err(bad()),
            (Isogeny::SpecialOrthogonal, Series::B) => Isogeny::Adjoint,
            (Isogeny::SpecialOrthogonal, Series::D) => Isogeny::SpecialOrthogonal,
            (Isogeny::SpecialOrthogonal, _) => return Err(bad()),
            (Isogeny::HalfSpin, Series::D) if rank % 2 == 0 => {
                if twist == Twist::NonSplit {
                    return Err(Error::UnsupportedTwist {
                        context: format!("HS{}", 2 * rank),
                        reason: "the non-split Frobenius swaps the two half-spin kernels".into(),
                    });
                }
                Isogeny::HalfSpin
            }
            (Isogeny::HalfSpin, _) => return Err(bad()),
            (Isogeny::ConnectedCenter { .. }, Series::A) => isogeny.clone(),
            (Isogeny::ConnectedCenter { .. }, _) => return Err(bad()),
            (Isogeny::Adjoint, _) if n == 1 => Isogeny::SimplyConnected,
            _ => isogeny.clone(),
        };
        Ok(GroupSpec { series, rank, isogeny, twist, q: None })
    }

    pub fn sc(series: Series, rank: usize, twist: Twist) -> Result<Self> {
        Self::new(series, rank, Isogeny::SimplyConnected, twist)
    }

    pub fn adjoint(series: Series, rank: usize, twist: Twist) -> Result<Self> {
        Self::new(series, rank, Isogeny::Adjoint, twist)
    }

    /// `GL_{n+1}` (split) or `GU_{n+1}` (non-split): center of order `q - ε`.
    pub fn connected_center(rank: usize, twist: Twist) -> Result<Self> {
        let center_order = Poly::from_ints(&[-twist.sign(), 1]);
        Self::new(Series::A, rank, Isogeny::ConnectedCenter { center_order }, twist)
    }

    pub fn with_q(mut self, q: u64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn fund(&self) -> FundGroup {
        fundamental_group(self.series, self.rank).expect("validated at construction")
    }

    /// The isogeny kernel `K_G` inside the fundamental group. Groups with
    /// connected center behave as if the whole group were divided out.
    pub fn kernel(&self) -> Subgroup {
        let fund = self.fund();
        match &self.isogeny {
            Isogeny::SimplyConnected => Subgroup::trivial(),
            Isogeny::Adjoint | Isogeny::ConnectedCenter { .. } => fund.full(),
            Isogeny::Quotient(r) => fund.cyclic_subgroup(*r).expect("validated divisor"),
            Isogeny::SpecialOrthogonal => match fund.shape {
                FundShape::Klein => Subgroup::from_mask(0b1001),
                FundShape::Cyclic(n) => fund.cyclic_subgroup(2.min(n)).expect("order 4"),
            },
            Isogeny::HalfSpin => Subgroup::from_mask(0b0011),
        }
    }

    /// Order of the component group `Z(G)/Z(G)°` before taking fixed points.
    pub fn center_component_order(&self) -> u32 {
        self.fund().order() / self.kernel().order()
    }

    /// Semisimple rank.
    pub fn ss_rank(&self) -> usize {
        self.rank
    }

    pub fn is_simply_connected(&self) -> bool {
        self.kernel() == Subgroup::trivial()
    }

    /// Conventional name, e.g. `^-A_2^3`, `SO_10^+`, `HS_8`, `E7 sc`.
    pub fn name(&self) -> String {
        let tw = if self.twist == Twist::NonSplit { "^-" } else { "" };
        let n = self.rank;
        let base = match self.series {
            Series::E6 | Series::E7 | Series::E8 | Series::F4 | Series::G2 => format!("{tw}{}", self.series),
            s => format!("{tw}{s}_{n}"),
        };
        match &self.isogeny {
            Isogeny::SimplyConnected => format!("{base} sc"),
            Isogeny::Adjoint => format!("{base} adjoint"),
            Isogeny::Quotient(r) => format!("{tw}A_{n}^{r}"),
            Isogeny::SpecialOrthogonal => format!("SO_{}^{}", 2 * n, self.twist),
            Isogeny::HalfSpin => format!("HS_{}", 2 * n),
            Isogeny::ConnectedCenter { .. } => {
                let g = if self.twist == Twist::Split { "GL" } else { "GU" };
                format!("{g}_{}", n + 1)
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        if let Some(q) = self.q {
            write!(f, " at q = {q}")?;
        }
        Ok(())
    }
}

/// Checks `q` for evaluation: a prime power whose prime is good for the type.
pub fn check_q(spec: &GroupSpec, q: u64) -> Result<u64> {
    let (p, _) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if !root_system::is_good_prime(spec.series, spec.rank, p)? {
        return Err(Error::BadPrime { p, series: spec.series });
    }
    Ok(p)
}

/// Preimage in the fundamental group of the Lang image on `Z(G)`, for `q`
/// in the residue class `residue`. `H^1(F, Z(G))` is the quotient by it.
pub fn lang_preimage(spec: &GroupSpec, residue: u64) -> Subgroup {
    let fund = spec.fund();
    let kernel = spec.kernel();
    match fund.shape {
        FundShape::Cyclic(n) => {
            let m = fund.fixed_quotient_order(kernel, spec.twist, residue);
            fund.cyclic_subgroup(n / m as u32).expect("divisor of the order")
        }
        FundShape::Klein => {
            if residue % 2 == 1 {
                kernel
            } else {
                fund.full()
            }
        }
    }
}

/// `|H^1(F, Z(G))|` for `q` in the residue class `residue`.
pub fn h1_order_at_residue(spec: &GroupSpec, residue: u64) -> u64 {
    let fund = spec.fund();
    (fund.order() / lang_preimage(spec, residue).order()) as u64
}

/// `|H^1(F, Z(G))|` as a function of `q` mod the center's modulus.
pub fn h1_order(spec: &GroupSpec) -> CondPoly {
    let fund = spec.fund();
    let m = fund.modulus();
    CondPoly::build(m, &[spec.twist], |r, _| {
        arith::realizable_residue(r, m).then(|| Poly::constant(h1_order_at_residue(spec, r) as i64))
    })
}

/// `|H^1(F, Z(G))|` at a concrete `q`. Only `p = 2` in type `D` is refused
/// here; other bad primes are refused by the counting formulas.
pub fn h1_order_at(spec: &GroupSpec, q: u64) -> Result<u64> {
    let (p, _) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if spec.series == Series::D && p == 2 {
        return Err(Error::BadPrime { p, series: spec.series });
    }
    Ok(h1_order_at_residue(spec, q % spec.fund().modulus()))
}

/// `(|Z(G)^F|, |Z(G)°^F|)`.
pub fn center_fixed_orders(spec: &GroupSpec) -> (CondPoly, CondPoly) {
    let tw = [spec.twist];
    match &spec.isogeny {
        Isogeny::ConnectedCenter { center_order } => {
            let c = CondPoly::uniform(center_order.clone(), &tw);
            (c.clone(), c)
        }
        _ => (h1_order(spec), CondPoly::uniform(Poly::one(), &tw)),
    }
}

/// `|Z(G)°^F|` as a polynomial (1 for semisimple groups).
pub fn connected_center_order(spec: &GroupSpec) -> Poly {
    match &spec.isogeny {
        Isogeny::ConnectedCenter { center_order } => center_order.clone(),
        _ => Poly::one(),
    }
}
