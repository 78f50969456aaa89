//! Burnside–Dixon character tables over a prime field `F_l` with
//! `l ≡ 1 mod exp(G)`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::classes::{conjugacy_classes, ConjugacyClasses};
use super::group::FiniteGroup;
use crate::arith;
use crate::error::{Error, Result};

/// Largest group whose character table will be computed.
pub const DIXON_CAP: u32 = 10_000;

pub(crate) fn mod_pow(mut base: u64, mut e: u64, l: u64) -> u64 {
    let mut out = 1 % l;
    base %= l;
    while e > 0 {
        if e & 1 == 1 {
            out = out * base % l;
        }
        base = base * base % l;
        e >>= 1;
    }
    out
}

fn mod_inv(a: u64, l: u64) -> u64 {
    mod_pow(a, l - 2, l)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime `l ≡ 1 mod exponent` with `l > 2 sqrt(order)`.
pub fn dixon_prime(exponent: u64, order: u64) -> Result<u64> {
    let bound = 2.0 * (order as f64).sqrt();
    (1u64..)
        .map(|t| t * exponent + 1)
        .take_while(|&l| l < 1 << 31)
        .find(|&l| l as f64 > bound && arith::is_prime(l))
        .ok_or(Error::NoDixonPrime(exponent))
}

/// A primitive `exponent`-th root of unity mod `l`.
fn root_of_unity(exponent: u64, l: u64) -> u64 {
    let factors = prime_factors(l - 1);
    let generator = (2..l)
        .find(|&g| factors.iter().all(|&f| mod_pow(g, (l - 1) / f, l) != 1))
        .unwrap_or(1);
    mod_pow(generator, (l - 1) / exponent, l)
}

/// Row-reduces in place and returns the pivot columns.
fn rref(rows: &mut Vec<Vec<u64>>, l: u64) -> Vec<usize> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..width {
        let Some(found) = (top..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(top, found);
        let s = mod_inv(rows[top][col], l);
        for x in rows[top].iter_mut() {
            *x = *x * s % l;
        }
        for r in 0..rows.len() {
            if r != top && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..width {
                    rows[r][c] = (rows[r][c] + l - f * rows[top][c] % l) % l;
                }
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots
}

/// Basis of the null space of a square matrix.
fn null_space(mat: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    let n = mat.len();
    let mut rows = mat.to_vec();
    let pivots = rref(&mut rows, l);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; n];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (l - rows[r][free]) % l;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial, low coefficients first, via Hessenberg form.
fn charpoly(mat: &[Vec<u64>], l: u64) -> Vec<u64> {
    let n = mat.len();
    let mut h = mat.to_vec();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let t_inv = mod_inv(h[m][m - 1], l);
        for i in m + 1..n {
            let u = h[i][m - 1] * t_inv % l;
            if u == 0 {
                continue;
            }
            for j in 0..n {
                h[i][j] = (h[i][j] + l - u * h[m][j] % l) % l;
            }
            for j in 0..n {
                h[j][m] = (h[j][m] + u * h[j][i]) % l;
            }
        }
    }
    // p[m] is the characteristic polynomial of the leading m×m block.
    let mut p: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &p[m - 1];
        let mut next = vec![0; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % l;
            next[k] = (next[k] + l - h[m - 1][m - 1] * c % l) % l;
        }
        let mut t = 1;
        for i in 1..m {
            t = t * h[m - i][m - i - 1] % l;
            let f = t * h[m - i - 1][m - 1] % l;
            for (k, &c) in p[m - i - 1].iter().enumerate() {
                next[k] = (next[k] + l - f * c % l) % l;
            }
        }
        p.push(next);
    }
    p.pop().unwrap_or_default()
}

fn poly_eval(p: &[u64], x: u64, l: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| (acc * x + c) % l)
}

/// Simultaneous eigenvectors of commuting matrices, split one matrix at a
/// time.
fn common_eigenvectors(mats: &[Vec<Vec<u64>>], dim: usize, l: u64) -> Result<Vec<Vec<u64>>> {
    let identity: Vec<Vec<u64>> = (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
    let mut spaces = vec![identity];
    for m in mats {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for mut basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let pivots = rref(&mut basis, l);
            let d = basis.len();
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| {
                    (0..dim)
                        .map(|j| (0..dim).fold(0, |acc, k| (acc + m[j][k] * b[k]) % l))
                        .collect()
                })
                .collect();
            // restricted[r][c]: coefficient of basis[r] in m * basis[c]
            let restricted: Vec<Vec<u64>> = (0..d).map(|r| (0..d).map(|c| images[c][pivots[r]]).collect()).collect();
            let cp = charpoly(&restricted, l);
            let mut found = 0;
            for lambda in 0..l {
                if poly_eval(&cp, lambda, l) != 0 {
                    continue;
                }
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|r| (0..d).map(|c| if r == c { (restricted[r][c] + l - lambda) % l } else { restricted[r][c] }).collect())
                    .collect();
                let kernel = null_space(&shifted, l);
                found += kernel.len();
                let sub: Vec<Vec<u64>> = kernel
                    .iter()
                    .map(|y| {
                        (0..dim)
                            .map(|j| (0..d).fold(0, |acc, r| (acc + y[r] * basis[r][j]) % l))
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == d {
                    break;
                }
            }
            if found != d {
                return Err(Error::Inconsistent("class matrix is not diagonalisable over F_l".into()));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return Err(Error::Inconsistent("class matrices do not separate the characters".into()));
    }
    Ok(spaces.into_iter().map(|mut s| s.remove(0)).collect())
}

/// Exponents `a` with `χ(z)/χ(1) = ζ^a` for each central element, where
/// `ζ = exp(2πi / exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CentralCharacter(pub Vec<u64>);

impl CentralCharacter {
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CharTable {
    pub group: String,
    pub order: u32,
    #[serde(skip)]
    pub classes: ConjugacyClasses,
    pub exponent: u64,
    pub dixon_prime: u64,
    /// Primitive `exponent`-th root of unity mod the Dixon prime, read as
    /// `exp(2πi / exponent)`.
    pub root: u64,
    pub degrees: Vec<u32>,
    /// `values[chi][class]` mod the Dixon prime.
    pub values: Vec<Vec<u64>>,
    /// Element indices of the center.
    pub center: Vec<u32>,
    pub central_characters: Vec<CentralCharacter>,
    /// `lifted[chi][class][a]`: multiplicity of `ζ_o^a` among the
    /// eigenvalues, `o` the order of the class; present when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifted: Option<Vec<Vec<Vec<u32>>>>,
}

pub fn character_table(g: &FiniteGroup, lift: bool) -> Result<CharTable> {
    if g.order() > DIXON_CAP {
        return Err(Error::SizeCap {
            name: g.name.clone(),
            q: g.q,
            order: g.order() as u128,
            cap: DIXON_CAP as u128,
        });
    }
    let classes = conjugacy_classes(g);
    let k = classes.len();
    let order = g.order() as u64;
    let exponent = classes.element_orders.iter().fold(1, |acc, &o| arith::lcm(acc, o as u64));
    let l = dixon_prime(exponent, order)?;
    let root = root_of_unity(exponent, l);

    // a[i][j][t] = #{x in C_i : x^-1 g_t in C_j}
    let mut structure = vec![vec![vec![0u64; k]; k]; k];
    for (t, &gt) in classes.reps.iter().enumerate() {
        for x in 0..g.order() {
            let i = classes.class_of[x as usize] as usize;
            let j = classes.class_of[g.mul(g.inv(x), gt) as usize] as usize;
            structure[i][j][t] += 1;
        }
    }
    let mats: Vec<Vec<Vec<u64>>> = structure
        .iter()
        .skip(1)
        .map(|ai| ai.iter().map(|row| row.iter().map(|&x| x % l).collect()).collect())
        .collect();
    let vectors = common_eigenvectors(&mats, k, l)?;
    if vectors.len() != k {
        return Err(Error::Inconsistent(format!("{} characters for {k} classes", vectors.len())));
    }

    let inverse = classes.inverse_classes(g);
    let sizes: Vec<u64> = classes.sizes.iter().map(|&s| s as u64).collect();
    let sqrt_order = (order as f64).sqrt().floor() as u64 + 1;
    let mut rows = Vec::with_capacity(k);
    for w in vectors {
        let s0 = mod_inv(w[0], l);
        let omega: Vec<u64> = w.iter().map(|&x| x * s0 % l).collect();
        let norm = (0..k).fold(0, |acc, t| {
            (acc + omega[t] * omega[inverse[t] as usize] % l * mod_inv(sizes[t] % l, l)) % l
        });
        if norm == 0 {
            return Err(Error::Inconsistent("vanishing character norm".into()));
        }
        let d_sq = order % l * mod_inv(norm, l) % l;
        let degree = (1..=sqrt_order)
            .find(|&d| d * d % l == d_sq)
            .ok_or_else(|| Error::Inconsistent("no integral degree".into()))?;
        let values: Vec<u64> = (0..k).map(|t| omega[t] * degree % l * mod_inv(sizes[t] % l, l) % l).collect();
        rows.push((degree as u32, values));
    }

    let center: Vec<u32> = (0..g.order()).filter(|&x| classes.sizes[classes.class_of[x as usize] as usize] == 1).collect();
    let log_table: BTreeMap<u64, u64> = (0..exponent).map(|a| (mod_pow(root, a, l), a)).collect();
    let mut entries = Vec::with_capacity(k);
    for (degree, values) in rows {
        let d_inv = mod_inv(degree as u64, l);
        let exps = center
            .iter()
            .map(|&z| {
                let ratio = values[classes.class_of[z as usize] as usize] * d_inv % l;
                log_table
                    .get(&ratio)
                    .copied()
                    .ok_or_else(|| Error::Inconsistent("central value is not a root of unity".into()))
            })
            .collect::<Result<Vec<u64>>>()?;
        entries.push((degree, CentralCharacter(exps), values));
    }
    entries.sort();

    let table = CharTable {
        group: g.name.clone(),
        order: g.order(),
        exponent,
        dixon_prime: l,
        root,
        degrees: entries.iter().map(|e| e.0).collect(),
        central_characters: entries.iter().map(|e| e.1.clone()).collect(),
        values: entries.into_iter().map(|e| e.2).collect(),
        center,
        lifted: None,
        classes,
    };
    table.check(g)?;
    if lift {
        let lifted = table.lift(g)?;
        let out = CharTable { lifted: Some(lifted), ..table };
        out.check_lifted()?;
        return Ok(out);
    }
    Ok(table)
}

impl CharTable {
    /// `Σ d² = |G|` and both orthogonality relations mod the Dixon prime.
    fn check(&self, g: &FiniteGroup) -> Result<()> {
        let l = self.dixon_prime;
        let k = self.classes.len();
        let order = self.order as u64;
        let sum_sq: u64 = self.degrees.iter().map(|&d| (d as u64).pow(2)).sum();
        if sum_sq != order {
            return Err(Error::Inconsistent(format!("sum of squared degrees {sum_sq} != {order}")));
        }
        let inverse = self.classes.inverse_classes(g);
        for a in 0..k {
            for b in 0..k {
                let s = (0..k).fold(0, |acc, t| {
                    (acc + self.classes.sizes[t] as u64 * self.values[a][t] % l * self.values[b][inverse[t] as usize]) % l
                });
                let expected = if a == b { order % l } else { 0 };
                if s != expected {
                    return Err(Error::Inconsistent(format!("row orthogonality fails for characters {a}, {b}")));
                }
                let c = (0..k).fold(0, |acc, chi| (acc + self.values[chi][a] * self.values[chi][inverse[b] as usize]) % l);
                let expected = if a == b { (order / self.classes.sizes[a] as u64) % l } else { 0 };
                if c != expected {
                    return Err(Error::Inconsistent(format!("column orthogonality fails for classes {a}, {b}")));
                }
            }
        }
        if self.classes.sizes.iter().any(|&s| self.order % s != 0) {
            return Err(Error::Inconsistent("class size does not divide the order".into()));
        }
        Ok(())
    }

    /// Eigenvalue multiplicities from the values on powers of each class.
    fn lift(&self, g: &FiniteGroup) -> Result<Vec<Vec<Vec<u32>>>> {
        let l = self.dixon_prime;
        let k = self.classes.len();
        let powers: Vec<Vec<u32>> = (0..k)
            .map(|t| {
                let o = self.classes.element_orders[t] as u64;
                let rep = self.classes.reps[t];
                let mut out = Vec::with_capacity(o as usize);
                let mut x = g.identity();
                for _ in 0..o {
                    out.push(self.classes.class_of[x as usize]);
                    x = g.mul(x, rep);
                }
                out
            })
            .collect();
        let mut lifted = Vec::with_capacity(k);
        for (chi, values) in self.values.iter().enumerate() {
            let degree = self.degrees[chi];
            let mut row = Vec::with_capacity(k);
            for t in 0..k {
                let o = self.classes.element_orders[t] as u64;
                let zeta_inv = mod_inv(mod_pow(self.root, self.exponent / o, l), l);
                let o_inv = mod_inv(o % l, l);
                let mults = (0..o)
                    .map(|a| {
                        let step = mod_pow(zeta_inv, a, l);
                        let mut s = 0;
                        let mut w = 1;
                        for j in 0..o as usize {
                            s = (s + values[powers[t][j] as usize] * w) % l;
                            w = w * step % l;
                        }
                        let m = s * o_inv % l;
                        u32::try_from(m).ok().filter(|&m| m <= degree).ok_or_else(|| {
                            Error::Inconsistent(format!("lifted multiplicity {m} exceeds degree {degree}"))
                        })
                    })
                    .collect::<Result<Vec<u32>>>()?;
                if mults.iter().sum::<u32>() != degree {
                    return Err(Error::Inconsistent("lifted multiplicities do not sum to the degree".into()));
                }
                row.push(mults);
            }
            lifted.push(row);
        }
        Ok(lifted)
    }

    /// Complex value of a lifted entry.
    pub fn complex_value(&self, chi: usize, class: usize) -> Option<(f64, f64)> {
        let mults = &self.lifted.as_ref()?[chi][class];
        let o = mults.len() as f64;
        Some(mults.iter().enumerate().fold((0.0, 0.0), |(re, im), (a, &m)| {
            let angle = std::f64::consts::TAU * a as f64 / o;
            (re + m as f64 * angle.cos(), im + m as f64 * angle.sin())
        }))
    }

    fn check_lifted(&self) -> Result<()> {
        let k = self.classes.len();
        let order = self.order as f64;
        for a in 0..k {
            for b in 0..k {
                let (mut re, mut im) = (0.0, 0.0);
                for t in 0..k {
                    let (xr, xi) = self.complex_value(a, t).unwrap_or_default();
                    let (yr, yi) = self.complex_value(b, t).unwrap_or_default();
                    let size = self.classes.sizes[t] as f64;
                    re += size * (xr * yr + xi * yi);
                    im += size * (xi * yr - xr * yi);
                }
                let expected = if a == b { order } else { 0.0 };
                if (re - expected).abs() > 1e-6 * order || im.abs() > 1e-6 * order {
                    return Err(Error::Inconsistent(format!("lifted orthogonality fails for {a}, {b}")));
                }
            }
        }
        Ok(())
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Distinct central characters, trivial first.
    pub fn central_character_list(&self) -> Vec<CentralCharacter> {
        let mut list = self.central_characters.clone();
        list.sort();
        list.dedup();
        list
    }

    /// Irreducibles of degree prime to `p`, optionally only those lying over
    /// the `nu`-th central character of [`CharTable::central_character_list`].
    pub fn pprime_count(&self, p: u64, nu: Option<usize>) -> Result<usize> {
        let target = match nu {
            None => None,
            Some(i) => {
                let list = self.central_character_list();
                Some(list.get(i).cloned().ok_or_else(|| {
                    Error::NotCentralCharacter(format!(
                        "index {i}; {} has {} central characters",
                        self.group,
                        list.len()
                    ))
                })?)
            }
        };
        Ok((0..self.degrees.len())
            .filter(|&chi| arith::gcd(self.degrees[chi] as u64, p) == 1)
            .filter(|&chi| target.as_ref().is_none_or(|t| self.central_characters[chi] == *t))
            .count())
    }

    /// Counts of `p'`-degree irreducibles grouped by the restriction of
    /// their central character to `elements`, which must be central.
    /// Groups are ordered by restriction, the trivial one first.
    pub fn pprime_counts_over(&self, p: u64, elements: &[u32]) -> Result<Vec<usize>> {
        let positions = elements
            .iter()
            .map(|z| {
                self.center.iter().position(|c| c == z).ok_or_else(|| {
                    Error::NotCentralCharacter(format!("element {z} is not central in {}", self.group))
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut counts: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        for (chi, cc) in self.central_characters.iter().enumerate() {
            let key: Vec<u64> = positions.iter().map(|&i| cc.0[i]).collect();
            let entry = counts.entry(key).or_insert(0);
            if arith::gcd(self.degrees[chi] as u64, p) == 1 {
                *entry += 1;
            }
        }
        Ok(counts.into_values().collect())
    }

    /// Regression snapshot `{group, order, classCount, degrees, pprimeCounts}`.
    pub fn snapshot(&self, p: u64) -> Snapshot {
        let pprime_counts = (0..self.central_character_list().len())
            .map(|nu| (nu.to_string(), self.pprime_count(p, Some(nu)).unwrap_or(0)))
            .collect();
        Snapshot {
            group: self.group.clone(),
            order: self.order,
            class_count: self.class_count(),
            degrees: self.degrees.clone(),
            pprime_counts,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Snapshot {
    pub group: String,
    pub order: u32,
    pub class_count: usize,
    pub degrees: Vec<u32>,
    pub pprime_counts: BTreeMap<String, usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::group::{build_group, GroupName};

    #[test]
    fn charpoly_of_companion() {
        // x^2 - 3x + 2 over F_7
        let m = vec![vec![0, 5], vec![1, 3]];
        assert_eq!(charpoly(&m, 7), vec![2, 4, 1]);
    }

    #[test]
    fn sl2_3_degrees() {
        let g = build_group(GroupName::Sl2, 3).unwrap();
        let t = character_table(&g, true).unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(t.pprime_count(3, None).unwrap(), 6);
        assert_eq!(t.pprime_count(3, Some(1)).unwrap(), 3);
        assert!(t.pprime_count(3, Some(2)).is_err());
    }

    #[test]
    fn abelian_group_is_linear() {
        let g = build_group(GroupName::BorelSl2, 3).unwrap();
        let t = character_table(&g, false).unwrap();
        assert_eq!(t.degrees, vec![1; 6]);
    }
}
