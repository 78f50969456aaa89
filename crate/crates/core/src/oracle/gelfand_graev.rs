//! Gelfand–Graev characters of `SL_2(q)` by explicit induction from the
//! upper unitriangular subgroup.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::classes::{conjugacy_classes, ConjugacyClasses};
use super::dixon::{mod_pow, CharTable};
use super::group::{build_group, FiniteGroup, GroupName};
use crate::error::{Error, Result};

/// Largest `q` accepted.
pub const MAX_Q: u64 = 9;

/// Element of the group ring `Q[C_p]`, mapped onto `Q(ζ_p)` by `x ↦ ζ_p`.
#[derive(Clone, Debug, PartialEq)]
struct Cyclotomic(Vec<BigRational>);

impl Cyclotomic {
    fn zero(p: usize) -> Self {
        Cyclotomic(vec![BigRational::zero(); p])
    }

    fn add_assign(&mut self, other: &Cyclotomic) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let p = self.0.len();
        let mut out = Cyclotomic::zero(p);
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out.0[(i + j) % p] += a * b;
            }
        }
        out
    }

    fn scale(&self, c: &BigRational) -> Cyclotomic {
        Cyclotomic(self.0.iter().map(|a| a * c).collect())
    }

    fn conj(&self) -> Cyclotomic {
        let p = self.0.len();
        Cyclotomic((0..p).map(|i| self.0[(p - i) % p].clone()).collect())
    }

    /// The rational value, if the element lies in `Q`. Uses
    /// `1 + ζ + ... + ζ^{p-1} = 0`.
    fn to_rational(&self) -> Option<BigRational> {
        let rest = &self.0[1..];
        let first = rest.first()?;
        rest.iter().all(|c| c == first).then(|| &self.0[0] - first)
    }
}

/// Inner products `⟨Γ_z1, Γ_z2⟩` over the two orbit labels; label 0 is the
/// orbit of squares, label 1 the non-squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GgMatrix {
    pub q: u64,
    pub matrix: [[i64; 2]; 2],
}

impl GgMatrix {
    pub fn is_symmetric(&self) -> bool {
        self.matrix[0][1] == self.matrix[1][0]
    }

    pub fn row_sums(&self) -> [i64; 2] {
        [self.matrix[0][0] + self.matrix[0][1], self.matrix[1][0] + self.matrix[1][1]]
    }
}

/// Induced class functions, kept as `Σ_{u ∈ U ∩ C} ψ(u)` per class
/// together with the scaling `|G| / (|U| |C|)`.
pub struct GelfandGraev {
    pub group: FiniteGroup,
    pub classes: ConjugacyClasses,
    p: usize,
    /// `sums[z][class]`: exponent counts of `ζ_p` over `U ∩ class`.
    sums: [Vec<Vec<i64>>; 2],
}

impl GelfandGraev {
    pub fn new(q: u64) -> Result<Self> {
        if q % 2 == 0 {
            return Err(Error::Unsupported(format!(
                "q = {q} is even; the Gelfand-Graev oracle needs q odd (two regular orbits)"
            )));
        }
        if q > MAX_Q {
            return Err(Error::Unsupported(format!("q = {q} above {MAX_Q} for the Gelfand-Graev oracle")));
        }
        let group = build_group(GroupName::Sl2, q)?;
        let classes = conjugacy_classes(&group);
        let field = group.ring.field.clone();
        let p = field.characteristic() as usize;
        let labels = [1, field.generator()];
        let mut sums = [vec![vec![0i64; p]; classes.len()], vec![vec![0i64; p]; classes.len()]];
        for b in field.elements() {
            let u = group
                .lookup(&[1, b, 0, 0, 1, 0, 0, 0, 0])
                .ok_or_else(|| Error::Inconsistent("unipotent element missing".into()))?;
            let class = classes.class_of[u as usize] as usize;
            for (z, &a) in labels.iter().enumerate() {
                sums[z][class][field.trace(field.mul(a, b)) as usize] += 1;
            }
        }
        Ok(GelfandGraev { group, classes, p, sums })
    }

    fn scale(&self, class: usize) -> BigRational {
        let q = self.group.q as i64;
        BigRational::new(
            BigInt::from(self.group.order()),
            BigInt::from(q) * BigInt::from(self.classes.sizes[class]),
        )
    }

    fn value(&self, z: usize, class: usize) -> Cyclotomic {
        let raw = Cyclotomic(self.sums[z][class].iter().map(|&c| BigRational::from_integer(c.into())).collect());
        raw.scale(&self.scale(class))
    }

    /// Exact `⟨Γ_z1, Γ_z2⟩`.
    pub fn inner_product(&self, z1: usize, z2: usize) -> Result<i64> {
        let mut total = Cyclotomic::zero(self.p);
        for class in 0..self.classes.len() {
            let term = self.value(z1, class).mul(&self.value(z2, class).conj());
            total.add_assign(&term.scale(&BigRational::from_integer(self.classes.sizes[class].into())));
        }
        let value = total
            .to_rational()
            .ok_or_else(|| Error::Inconsistent("inner product is not rational".into()))?
            / BigRational::from_integer(self.group.order().into());
        if !value.is_integer() {
            return Err(Error::Inconsistent(format!("inner product {value} is not an integer")));
        }
        value.to_integer().to_i64().ok_or_else(|| Error::Inconsistent("inner product overflow".into()))
    }

    pub fn matrix(&self) -> Result<GgMatrix> {
        let mut matrix = [[0; 2]; 2];
        for (z1, row) in matrix.iter_mut().enumerate() {
            for (z2, entry) in row.iter_mut().enumerate() {
                *entry = self.inner_product(z1, z2)?;
            }
        }
        Ok(GgMatrix { q: self.group.q, matrix })
    }

    /// Multiplicity of each irreducible of `table` in `Γ_z`, computed mod
    /// the Dixon prime. `table` must belong to the same group.
    pub fn multiplicities(&self, table: &CharTable, z: usize) -> Result<Vec<u64>> {
        let l = table.dixon_prime;
        if table.order != self.group.order() || table.classes.reps != self.classes.reps {
            return Err(Error::Inconsistent("character table of a different group".into()));
        }
        let zeta = mod_pow(table.root, table.exponent / self.p as u64, l);
        let inverse = self.classes.inverse_classes(&self.group);
        let to_mod = |r: &BigRational| -> u64 {
            let l_big = BigInt::from(l);
            let num = ((r.numer() % &l_big) + &l_big) % &l_big;
            let den = ((r.denom() % &l_big) + &l_big) % &l_big;
            let num = num.to_u64().unwrap_or(0);
            let den = den.to_u64().unwrap_or(1);
            num * mod_pow(den, l - 2, l) % l
        };
        let gamma: Vec<u64> = (0..self.classes.len())
            .map(|class| {
                let s = self.sums[z][class]
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (e, &c)| (acc + (c as u64 % l) * mod_pow(zeta, e as u64, l)) % l);
                s * to_mod(&self.scale(class)) % l
            })
            .collect();
        let order_inv = mod_pow(self.group.order() as u64 % l, l - 2, l);
        Ok(table
            .values
            .iter()
            .map(|chi| {
                let s = (0..self.classes.len()).fold(0, |acc, t| {
                    (acc + self.classes.sizes[t] as u64 * gamma[t] % l * chi[inverse[t] as usize]) % l
                });
                s * order_inv % l
            })
            .collect())
    }
}

/// The `2 × 2` inner-product matrix for `SL_2(q)`, `q` odd.
pub fn gelfand_graev_bf(q: u64) -> Result<GgMatrix> {
    GelfandGraev::new(q)?.matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dixon::character_table;
    use num_traits::One;

    #[test]
    fn q3_matrix() {
        let m = gelfand_graev_bf(3).unwrap();
        assert_eq!(m.matrix, [[4, 2], [2, 4]]);
    }

    #[test]
    fn q3_multiplicity_free() {
        let gg = GelfandGraev::new(3).unwrap();
        let table = character_table(&gg.group, false).unwrap();
        for z in 0..2 {
            let mult = gg.multiplicities(&table, z).unwrap();
            assert!(mult.iter().all(|&m| m <= 1), "{mult:?}");
            assert_eq!(mult.iter().sum::<u64>(), 4);
            let degree: u64 = mult.iter().zip(&table.degrees).map(|(m, d)| m * *d as u64).sum();
            assert_eq!(degree, 8);
        }
    }

    #[test]
    fn even_q_is_refused() {
        assert!(gelfand_graev_bf(4).is_err());
    }

    #[test]
    fn cyclotomic_rational_part() {
        let one = Cyclotomic(vec![BigRational::one(), BigRational::zero(), BigRational::zero()]);
        assert_eq!(one.to_rational(), Some(BigRational::one()));
    }
}
