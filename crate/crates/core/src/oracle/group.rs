//! Explicit small matrix groups over finite fields.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::field::{Elem, Field};
use crate::arith;
use crate::error::{Error, Result};

/// Largest group the oracle will enumerate.
pub const ORDER_CAP: u128 = 1_000_000;

/// A square matrix of size at most 3, entries row-major.
pub type Mat = [Elem; 9];

/// Matrix arithmetic over a fixed field and dimension.
#[derive(Clone, Debug)]
pub struct MatrixRing {
    pub field: Arc<Field>,
    pub dim: usize,
}

impl MatrixRing {
    pub fn identity(&self) -> Mat {
        let mut m = [0; 9];
        for i in 0..self.dim {
            m[i * 3 + i] = 1;
        }
        m
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let f = &self.field;
        let mut c = [0; 9];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut s = 0;
                for k in 0..self.dim {
                    s = f.add(s, f.mul(a[i * 3 + k], b[k * 3 + j]));
                }
                c[i * 3 + j] = s;
            }
        }
        c
    }

    pub fn det(&self, a: &Mat) -> Elem {
        let f = &self.field;
        match self.dim {
            1 => a[0],
            2 => f.sub(f.mul(a[0], a[4]), f.mul(a[1], a[3])),
            _ => {
                let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
                    f.sub(f.mul(a[r1 * 3 + c1], a[r2 * 3 + c2]), f.mul(a[r1 * 3 + c2], a[r2 * 3 + c1]))
                };
                let t0 = f.mul(a[0], minor(1, 2, 1, 2));
                let t1 = f.mul(a[1], minor(1, 2, 0, 2));
                let t2 = f.mul(a[2], minor(1, 2, 0, 1));
                f.add(f.sub(t0, t1), t2)
            }
        }
    }

    /// Inverse via the adjugate; the matrix must be invertible.
    pub fn inverse(&self, a: &Mat) -> Mat {
        let f = &self.field;
        let d_inv = f.inv(self.det(a));
        let mut out = [0; 9];
        match self.dim {
            1 => out[0] = d_inv,
            2 => {
                out[0] = f.mul(a[4], d_inv);
                out[1] = f.mul(f.neg(a[1]), d_inv);
                out[3] = f.mul(f.neg(a[3]), d_inv);
                out[4] = f.mul(a[0], d_inv);
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor of (j, i)
                        let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                        let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                        let m = f.sub(
                            f.mul(a[rows[0] * 3 + cols[0]], a[rows[1] * 3 + cols[1]]),
                            f.mul(a[rows[0] * 3 + cols[1]], a[rows[1] * 3 + cols[0]]),
                        );
                        let signed = if (i + j) % 2 == 0 { m } else { f.neg(m) };
                        out[i * 3 + j] = f.mul(signed, d_inv);
                    }
                }
            }
        }
        out
    }

    /// Scales so that the first nonzero entry is one.
    pub fn normalize(&self, a: &Mat) -> Mat {
        let f = &self.field;
        let lead = (0..9).map(|i| a[i]).find(|&x| x != 0).unwrap_or(1);
        let s = f.inv(lead);
        let mut out = *a;
        for x in out.iter_mut() {
            *x = f.mul(*x, s);
        }
        out
    }

    /// All matrices of the ring's dimension.
    fn all(&self) -> impl Iterator<Item = Mat> + '_ {
        let q = self.field.order() as u64;
        let cells = self.dim * self.dim;
        (0..q.pow(cells as u32)).map(move |code| {
            let mut m = [0; 9];
            let mut c = code;
            for idx in 0..cells {
                let (i, j) = (idx / self.dim, idx % self.dim);
                m[i * 3 + j] = (c % q) as Elem;
                c /= q;
            }
            m
        })
    }
}

/// The groups the oracle can build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupName {
    Gl1,
    Sl2,
    Gl2,
    Pgl2,
    Sl3,
    Pgl3,
    Su3,
    Gu3,
    Pgu3,
    BorelSl2,
    BorelGl2,
    USl2,
    BorelSl3,
    USl3,
    BorelSu3,
}

impl GroupName {
    pub const ALL: [GroupName; 15] = [
        GroupName::Gl1,
        GroupName::Sl2,
        GroupName::Gl2,
        GroupName::Pgl2,
        GroupName::Sl3,
        GroupName::Pgl3,
        GroupName::Su3,
        GroupName::Gu3,
        GroupName::Pgu3,
        GroupName::BorelSl2,
        GroupName::BorelGl2,
        GroupName::USl2,
        GroupName::BorelSl3,
        GroupName::USl3,
        GroupName::BorelSu3,
    ];

    /// Order from the classical formula.
    pub fn order_formula(self, q: u64) -> u128 {
        let q = q as u128;
        let sl2 = q * (q * q - 1);
        let sl3 = q.pow(3) * (q * q - 1) * (q.pow(3) - 1);
        let su3 = q.pow(3) * (q * q - 1) * (q.pow(3) + 1);
        match self {
            GroupName::Gl1 => q - 1,
            GroupName::Sl2 | GroupName::Pgl2 => sl2,
            GroupName::Gl2 => sl2 * (q - 1),
            GroupName::Sl3 | GroupName::Pgl3 => sl3,
            GroupName::Su3 | GroupName::Pgu3 => su3,
            GroupName::Gu3 => su3 * (q + 1),
            GroupName::BorelSl2 => q * (q - 1),
            GroupName::BorelGl2 => q * (q - 1) * (q - 1),
            GroupName::USl2 => q,
            GroupName::BorelSl3 => q.pow(3) * (q - 1) * (q - 1),
            GroupName::USl3 => q.pow(3),
            GroupName::BorelSu3 => q.pow(3) * (q * q - 1),
        }
    }

    fn dim(self) -> usize {
        match self {
            GroupName::Gl1 => 1,
            GroupName::Sl2 | GroupName::Gl2 | GroupName::Pgl2 | GroupName::BorelSl2 | GroupName::BorelGl2 => 2,
            GroupName::USl2 => 2,
            _ => 3,
        }
    }

    fn is_unitary(self) -> bool {
        matches!(self, GroupName::Su3 | GroupName::Gu3 | GroupName::Pgu3 | GroupName::BorelSu3)
    }

    fn is_projective(self) -> bool {
        matches!(self, GroupName::Pgl2 | GroupName::Pgl3 | GroupName::Pgu3)
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupName::Gl1 => "GL1",
            GroupName::Sl2 => "SL2",
            GroupName::Gl2 => "GL2",
            GroupName::Pgl2 => "PGL2",
            GroupName::Sl3 => "SL3",
            GroupName::Pgl3 => "PGL3",
            GroupName::Su3 => "SU3",
            GroupName::Gu3 => "GU3",
            GroupName::Pgu3 => "PGU3",
            GroupName::BorelSl2 => "Borel(SL2)",
            GroupName::BorelGl2 => "Borel(GL2)",
            GroupName::USl2 => "U(SL2)",
            GroupName::BorelSl3 => "Borel(SL3)",
            GroupName::USl3 => "U(SL3)",
            GroupName::BorelSu3 => "Borel(SU3)",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_uppercase();
        GroupName::ALL
            .into_iter()
            .find(|g| g.to_string().to_ascii_uppercase() == key)
            .ok_or_else(|| {
                let names: Vec<String> = GroupName::ALL.iter().map(|g| g.to_string()).collect();
                Error::UnknownGroup(format!("{s}; valid: {}", names.join(", ")))
            })
    }
}

/// An explicitly enumerated group with hashed element lookup.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub q: u64,
    /// Characteristic of the defining field.
    pub p: u64,
    pub ring: MatrixRing,
    pub projective: bool,
    elements: Vec<Mat>,
    index: HashMap<Mat, u32>,
    inverses: Vec<u32>,
}

impl FiniteGroup {
    /// Wraps an element list closed under products; the identity becomes
    /// element 0.
    pub fn from_elements(
        name: impl Into<String>,
        q: u64,
        ring: MatrixRing,
        projective: bool,
        mut elements: Vec<Mat>,
    ) -> Result<FiniteGroup> {
        let id = ring.identity();
        elements.sort_unstable();
        elements.dedup();
        let pos = elements
            .iter()
            .position(|m| *m == id)
            .ok_or_else(|| Error::Inconsistent("identity missing".into()))?;
        elements.swap(0, pos);
        let index: HashMap<Mat, u32> = elements.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        let p = ring.field.characteristic() as u64;
        let mut g = FiniteGroup {
            name: name.into(),
            q,
            p,
            ring,
            projective,
            elements,
            index,
            inverses: Vec::new(),
        };
        let inverses = (0..g.order())
            .map(|i| {
                let inv = g.canon(&g.ring.inverse(&g.elements[i as usize]));
                g.lookup(&inv).ok_or_else(|| Error::Inconsistent(format!("{}: not closed under inverse", g.name)))
            })
            .collect::<Result<Vec<u32>>>()?;
        g.inverses = inverses;
        Ok(g)
    }

    fn canon(&self, m: &Mat) -> Mat {
        if self.projective {
            self.ring.normalize(m)
        } else {
            *m
        }
    }

    pub fn order(&self) -> u32 {
        self.elements.len() as u32
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn element(&self, i: u32) -> &Mat {
        &self.elements[i as usize]
    }

    pub fn lookup(&self, m: &Mat) -> Option<u32> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let m = self.canon(&self.ring.mul(&self.elements[a as usize], &self.elements[b as usize]));
        self.index[&m]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut out = 0;
        for _ in 0..e {
            out = self.mul(out, a);
        }
        out
    }

    /// Checks closure under products on a sample of pairs and all products
    /// with a generating set.
    pub fn check_closure(&self, generators: &[u32]) -> Result<()> {
        for a in 0..self.order() {
            for &g in generators {
                let m = self.canon(&self.ring.mul(&self.elements[a as usize], &self.elements[g as usize]));
                if self.lookup(&m).is_none() {
                    return Err(Error::Inconsistent(format!("{}: not closed", self.name)));
                }
            }
        }
        Ok(())
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order() as usize];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut out = vec![0u32];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// A small generating set, chosen greedily in a fixed stride order.
    pub fn generators(&self) -> Vec<u32> {
        let n = self.order();
        if n == 1 {
            return Vec::new();
        }
        let stride = (1..n).rev().find(|s| arith::gcd(*s as u64, n as u64) == 1 && *s * 7 < n * 5).unwrap_or(1);
        let mut gens = Vec::new();
        let mut inside = vec![false; n as usize];
        inside[0] = true;
        let mut size = 1;
        let mut x = 0u32;
        for _ in 0..n {
            x = (x + stride) % n;
            if inside[x as usize] {
                continue;
            }
            gens.push(x);
            let sub = self.closure(&gens);
            size = sub.len();
            for &y in &sub {
                inside[y as usize] = true;
            }
            if size == n as usize {
                break;
            }
        }
        debug_assert_eq!(size, n as usize);
        gens
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements represented by scalar matrices.
    pub fn scalars(&self) -> Vec<u32> {
        let dim = self.ring.dim;
        (0..self.order())
            .filter(|&x| {
                let m = &self.elements[x as usize];
                (0..dim).all(|i| (0..dim).all(|j| if i == j { m[i * 3 + i] == m[0] } else { m[i * 3 + j] == 0 }))
            })
            .collect()
    }

    /// Elements commuting with everything.
    pub fn center(&self) -> Vec<u32> {
        let gens = self.generators();
        (0..self.order())
            .filter(|&z| gens.iter().all(|&g| self.mul(g, z) == self.mul(z, g)))
            .collect()
    }
}

/// `<u, v> = conj(u1) v3 + conj(u2) v2 + conj(u3) v1` over `F_{q^2}`, with
/// `conj(x) = x^q` read from `conj`.
fn hermitian(f: &Field, conj: &[Elem], u: [Elem; 3], v: [Elem; 3]) -> Elem {
    let c = |x: Elem| conj[x as usize];
    f.add(f.add(f.mul(c(u[0]), v[2]), f.mul(c(u[1]), v[1])), f.mul(c(u[2]), v[0]))
}

/// Elements of `GU_3(q)` for the antidiagonal form, built column by column:
/// an isotropic pair `(c1, c3)` with `<c1, c3> = 1`, then `c2` a unit vector
/// spanning their orthogonal complement.
fn unitary_elements(ring: &MatrixRing, q: u64) -> Vec<Mat> {
    let f = &ring.field;
    let n = f.order() as u64;
    let conj: Vec<Elem> = f.elements().map(|x| f.pow(x, q)).collect();
    let isotropic: Vec<[Elem; 3]> = (1..n.pow(3))
        .map(|c| [(c % n) as Elem, (c / n % n) as Elem, (c / n / n) as Elem])
        .filter(|&v| hermitian(f, &conj, v, v) == 0)
        .collect();
    let mut out = Vec::new();
    for &c1 in &isotropic {
        // x is orthogonal to u iff a(u) . x = 0
        let a = [conj[c1[2] as usize], conj[c1[1] as usize], conj[c1[0] as usize]];
        for &c3 in &isotropic {
            if hermitian(f, &conj, c1, c3) != 1 {
                continue;
            }
            let b = [conj[c3[2] as usize], conj[c3[1] as usize], conj[c3[0] as usize]];
            let cross = |i: usize, j: usize| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
            let v = [cross(1, 2), cross(2, 0), cross(0, 1)];
            let norm = hermitian(f, &conj, v, v);
            for lambda in f.elements().filter(|&x| x != 0) {
                if f.mul(f.mul(conj[lambda as usize], lambda), norm) != 1 {
                    continue;
                }
                let mut m = [0; 9];
                for i in 0..3 {
                    m[i * 3] = c1[i];
                    m[i * 3 + 1] = f.mul(lambda, v[i]);
                    m[i * 3 + 2] = c3[i];
                }
                out.push(m);
            }
        }
    }
    out
}

fn is_upper(ring: &MatrixRing, m: &Mat) -> bool {
    (0..ring.dim).all(|i| (0..i).all(|j| m[i * 3 + j] == 0))
}

fn is_unipotent_upper(ring: &MatrixRing, m: &Mat) -> bool {
    is_upper(ring, m) && (0..ring.dim).all(|i| m[i * 3 + i] == 1)
}

/// Builds a named group over `F_q` (over `F_{q^2}` for the unitary ones).
pub fn build_group(name: GroupName, q: u64) -> Result<FiniteGroup> {
    arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let order = name.order_formula(q);
    if order > ORDER_CAP {
        return Err(Error::SizeCap { name: name.to_string(), q, order, cap: ORDER_CAP });
    }
    let field_order = if name.is_unitary() { q * q } else { q };
    let ring = MatrixRing { field: Arc::new(Field::new(field_order)?), dim: name.dim() };
    let r = &ring;
    let elements: Vec<Mat> = match name {
        GroupName::Gl1 | GroupName::Gl2 => r.all().filter(|m| r.det(m) != 0).collect(),
        GroupName::Sl2 | GroupName::Sl3 => r.all().filter(|m| r.det(m) == 1).collect(),
        GroupName::Pgl2 | GroupName::Pgl3 => {
            r.all().filter(|m| r.det(m) != 0).map(|m| r.normalize(&m)).collect()
        }
        GroupName::BorelSl2 | GroupName::BorelSl3 => {
            r.all().filter(|m| is_upper(r, m) && r.det(m) == 1).collect()
        }
        GroupName::BorelGl2 => r.all().filter(|m| is_upper(r, m) && r.det(m) != 0).collect(),
        GroupName::USl2 | GroupName::USl3 => r.all().filter(|m| is_unipotent_upper(r, m)).collect(),
        GroupName::Gu3 => unitary_elements(r, q),
        GroupName::Su3 => unitary_elements(r, q).into_iter().filter(|m| r.det(m) == 1).collect(),
        GroupName::Pgu3 => unitary_elements(r, q).into_iter().map(|m| r.normalize(&m)).collect(),
        GroupName::BorelSu3 => unitary_elements(r, q)
            .into_iter()
            .filter(|m| r.det(m) == 1 && is_upper(r, m))
            .collect(),
    };
    let g = FiniteGroup::from_elements(format!("{name}({q})"), q, ring, name.is_projective(), elements)?;
    if g.order() as u128 != order {
        return Err(Error::Inconsistent(format!(
            "{name}({q}) enumerated {} elements, order formula gives {order}",
            g.order()
        )));
    }
    let gens = g.generators();
    g.check_closure(&gens)?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_formulas() {
        for (name, q) in [
            (GroupName::Sl2, 3),
            (GroupName::Pgl2, 5),
            (GroupName::Sl3, 2),
            (GroupName::Su3, 2),
            (GroupName::Pgu3, 2),
            (GroupName::BorelSu3, 3),
            (GroupName::Gl1, 7),
        ] {
            let g = build_group(name, q).unwrap();
            assert_eq!(g.order() as u128, name.order_formula(q), "{name}({q})");
        }
    }

    #[test]
    fn names_round_trip() {
        for g in GroupName::ALL {
            assert_eq!(g.to_string().parse::<GroupName>().unwrap(), g);
        }
        assert!("Sp4".parse::<GroupName>().is_err());
    }

    #[test]
    fn borel_of_sl2_3_is_abelian() {
        let b = build_group(GroupName::BorelSl2, 3).unwrap();
        assert_eq!(b.order(), 6);
        assert!(b.is_abelian());
    }
}
