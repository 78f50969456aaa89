//! Root data for the simple types.
//!
//! Simple roots use Bourbaki numbering (1-based in prose, 0-based in code).
//! Cartan entries follow `a[i][j] = <alpha_i^vee, alpha_j>`, so for `B_n` the
//! short root is `alpha_n` and `a[n][n-1] = -2`; for `G2` the short root is
//! `alpha_1`.
//!
//! Positive roots are produced by closure under root strings; nothing beyond
//! the Cartan matrix is tabulated.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl Series {
    pub const ALL: [Series; 9] = [
        Series::A,
        Series::B,
        Series::C,
        Series::D,
        Series::E6,
        Series::E7,
        Series::E8,
        Series::F4,
        Series::G2,
    ];

    /// Rank of the exceptional series, `None` for the classical ones.
    pub fn fixed_rank(self) -> Option<usize> {
        match self {
            Series::E6 => Some(6),
            Series::E7 => Some(7),
            Series::E8 => Some(8),
            Series::F4 => Some(4),
            Series::G2 => Some(2),
            _ => None,
        }
    }

    pub fn min_rank(self) -> usize {
        match self {
            Series::A => 1,
            Series::B | Series::C => 2,
            Series::D => 4,
            s => s.fixed_rank().unwrap_or(1),
        }
    }

    pub fn check_rank(self, rank: usize) -> Result<()> {
        let ok = match self.fixed_rank() {
            Some(r) => rank == r,
            None => rank >= self.min_rank(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidRank { series: self, rank })
        }
    }

    /// Ranks `1..=max_rank` that are valid for this series.
    pub fn ranks_up_to(self, max_rank: usize) -> Vec<usize> {
        match self.fixed_rank() {
            Some(r) => {
                if r <= max_rank {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            None => (self.min_rank()..=max_rank).collect(),
        }
    }

    pub fn is_exceptional(self) -> bool {
        self.fixed_rank().is_some()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::E6 => "E6",
            Series::E7 => "E7",
            Series::E8 => "E8",
            Series::F4 => "F4",
            Series::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Series::ALL
            .into_iter()
            .find(|x| x.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "unknown series {s:?}; expected one of A, B, C, D, E6, E7, E8, F4, G2"
                ))
            })
    }
}

/// Split (`+`) or non-split (`-`) Frobenius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Twist {
    Split,
    NonSplit,
}

impl Twist {
    pub const BOTH: [Twist; 2] = [Twist::Split, Twist::NonSplit];

    /// `+1` or `-1`.
    pub fn sign(self) -> i64 {
        match self {
            Twist::Split => 1,
            Twist::NonSplit => -1,
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Twist::Split => "+",
            Twist::NonSplit => "-",
        })
    }
}

impl FromStr for Twist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "+" | "+1" | "1" | "split" => Ok(Twist::Split),
            "-" | "-1" | "nonsplit" | "non-split" => Ok(Twist::NonSplit),
            other => Err(Error::Unsupported(format!(
                "unknown twist {other:?}; expected + or -"
            ))),
        }
    }
}

impl Serialize for Twist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Twist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub type CartanMatrix = Vec<Vec<i64>>;

fn chain(n: usize) -> CartanMatrix {
    let mut a = vec![vec![0; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    a
}

fn connect(a: &mut CartanMatrix, i: usize, j: usize) {
    a[i][j] = -1;
    a[j][i] = -1;
}

/// Cartan matrix in Bourbaki numbering.
pub fn cartan_matrix(series: Series, rank: usize) -> Result<CartanMatrix> {
    series.check_rank(rank)?;
    let n = rank;
    let a = match series {
        Series::A => chain(n),
        Series::B => {
            let mut a = chain(n);
            a[n - 1][n - 2] = -2;
            a
        }
        Series::C => {
            let mut a = chain(n);
            a[n - 2][n - 1] = -2;
            a
        }
        Series::D => {
            let mut a = chain(n - 1);
            for row in a.iter_mut() {
                row.push(0);
            }
            a.push(vec![0; n]);
            a[n - 1][n - 1] = 2;
            connect(&mut a, n - 3, n - 1);
            a
        }
        Series::E6 | Series::E7 | Series::E8 => {
            // 1-3-4-5-6(-7-8) with 2 attached to 4.
            let mut a = vec![vec![0; n]; n];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = 2;
            }
            connect(&mut a, 0, 2);
            connect(&mut a, 1, 3);
            for i in 2..n - 1 {
                connect(&mut a, i, i + 1);
            }
            a
        }
        Series::F4 => {
            let mut a = chain(4);
            a[2][1] = -2;
            a
        }
        Series::G2 => vec![vec![2, -3], vec![-1, 2]],
    };
    Ok(a)
}

/// Positive roots, highest root and Cartan data of a simple type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub series: Series,
    pub rank: usize,
    pub cartan: CartanMatrix,
    /// Positive roots as coefficient vectors over the simple roots, sorted by
    /// height and then lexicographically.
    pub positive_roots: Vec<Vec<i64>>,
    pub highest_root: Vec<i64>,
}

impl RootSystem {
    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        (0..self.rank)
            .map(|i| {
                let mut v = vec![0; self.rank];
                v[i] = 1;
                v
            })
            .collect()
    }

    /// All roots, positive then negative.
    pub fn roots(&self) -> Vec<Vec<i64>> {
        let neg = self
            .positive_roots
            .iter()
            .map(|r| r.iter().map(|c| -c).collect());
        self.positive_roots.iter().cloned().chain(neg).collect()
    }

    pub fn coxeter_number(&self) -> usize {
        2 * self.positive_roots.len() / self.rank
    }

    /// `<beta, alpha_i^vee>` for a root given by coefficients.
    fn pairing(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter().zip(&self.cartan[i]).map(|(c, a)| c * a).sum()
    }
}

/// Generates the positive system by root-string closure.
pub fn build_root_system(series: Series, rank: usize) -> Result<RootSystem> {
    let cartan = cartan_matrix(series, rank)?;
    let n = rank;
    let mut stub = RootSystem {
        series,
        rank,
        cartan,
        positive_roots: Vec::new(),
        highest_root: Vec::new(),
    };
    let mut all: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut layer: Vec<Vec<i64>> = stub.simple_roots();
    all.extend(layer.iter().cloned());
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for beta in &layer {
            for i in 0..n {
                // Length of the string below beta in direction alpha_i.
                let mut down = 0;
                let mut probe = beta.clone();
                loop {
                    probe[i] -= 1;
                    if all.contains(&probe) {
                        down += 1;
                    } else {
                        break;
                    }
                }
                let up = down - stub.pairing(beta, i);
                if up > 0 {
                    let mut gamma = beta.clone();
                    gamma[i] += 1;
                    if !all.contains(&gamma) {
                        next.insert(gamma);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next.into_iter().collect();
    }
    let mut roots: Vec<Vec<i64>> = all.into_iter().collect();
    roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    stub.highest_root = roots.last().cloned().unwrap_or_default();
    stub.positive_roots = roots;
    Ok(stub)
}

/// Primes dividing some highest-root coefficient.
pub fn bad_primes(series: Series, rank: usize) -> Result<Vec<u64>> {
    let rs = build_root_system(series, rank)?;
    let mut out: BTreeSet<u64> = BTreeSet::new();
    for &c in &rs.highest_root {
        let mut c = c as u64;
        let mut d = 2;
        while c > 1 {
            while c % d == 0 {
                out.insert(d);
                c /= d;
            }
            d += 1;
        }
    }
    Ok(out.into_iter().collect())
}

/// True when `p` divides no highest-root coefficient.
pub fn is_good_prime(series: Series, rank: usize, p: u64) -> Result<bool> {
    Ok(!bad_primes(series, rank)?.contains(&p))
}

/// Frobenius data: the diagram automorphism and its orbits on the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDatum {
    pub twist: Twist,
    /// Image of each simple root index.
    pub automorphism: Vec<usize>,
    /// Orbits in increasing order of their smallest member.
    pub orbits: Vec<Vec<usize>>,
}

impl TwistDatum {
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

/// The order-2 diagram symmetry, if the type has one in scope.
pub fn diagram_automorphism(series: Series, rank: usize) -> Result<Option<Vec<usize>>> {
    series.check_rank(rank)?;
    let n = rank;
    Ok(match series {
        Series::A if n >= 2 => Some((0..n).map(|i| n - 1 - i).collect()),
        Series::D => {
            let mut p: Vec<usize> = (0..n).collect();
            p.swap(n - 2, n - 1);
            Some(p)
        }
        Series::E6 => Some(vec![5, 1, 4, 3, 2, 0]),
        _ => None,
    })
}

pub fn frobenius_orbits(series: Series, rank: usize, twist: Twist) -> Result<TwistDatum> {
    let automorphism = match twist {
        Twist::Split => {
            series.check_rank(rank)?;
            (0..rank).collect()
        }
        Twist::NonSplit => diagram_automorphism(series, rank)?.ok_or_else(|| {
            Error::UnsupportedTwist {
                context: format!("{series}{rank}"),
                reason: "the Dynkin diagram has no order-2 symmetry".into(),
            }
        })?,
    };
    let mut seen = vec![false; rank];
    let mut orbits = Vec::new();
    for i in 0..rank {
        if seen[i] {
            continue;
        }
        let mut orbit = vec![i];
        seen[i] = true;
        let mut j = automorphism[i];
        while j != i {
            seen[j] = true;
            orbit.push(j);
            j = automorphism[j];
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(TwistDatum { twist, automorphism, orbits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_root_counts() {
        let cases = [
            (Series::A, 4, 10),
            (Series::B, 3, 9),
            (Series::C, 3, 9),
            (Series::D, 5, 20),
            (Series::E6, 6, 36),
            (Series::E7, 7, 63),
            (Series::E8, 8, 120),
            (Series::F4, 4, 24),
            (Series::G2, 2, 6),
        ];
        for (s, n, count) in cases {
            assert_eq!(build_root_system(s, n).unwrap().positive_roots.len(), count, "{s}{n}");
        }
    }

    #[test]
    fn highest_roots() {
        let hr = |s, n| build_root_system(s, n).unwrap().highest_root;
        assert_eq!(hr(Series::G2, 2), vec![3, 2]);
        assert_eq!(hr(Series::B, 4), vec![1, 2, 2, 2]);
        assert_eq!(hr(Series::C, 4), vec![2, 2, 2, 1]);
        assert_eq!(hr(Series::E8, 8), vec![2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(hr(Series::F4, 4), vec![2, 3, 4, 2]);
    }

    #[test]
    fn twist_parsing() {
        assert_eq!("-".parse::<Twist>().unwrap(), Twist::NonSplit);
        assert_eq!("+1".parse::<Twist>().unwrap(), Twist::Split);
        assert!("x".parse::<Twist>().is_err());
    }

    #[test]
    fn e6_orbits() {
        let t = frobenius_orbits(Series::E6, 6, Twist::NonSplit).unwrap();
        let mut sizes = t.orbit_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2]);
    }
}
