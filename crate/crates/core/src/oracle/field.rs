//! Finite fields `F_q` for `q <= 81`, with addition and multiplication tables.
//!
//! An element is its coefficient vector over `F_p` in the polynomial basis,
//! packed as a base-`p` integer, so `0` is zero and `1` is one.

use crate::arith;
use crate::error::{Error, Result};

pub const MAX_FIELD_ORDER: u64 = 81;

pub type Elem = u8;

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    degree: u32,
    order: u32,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    /// A multiplicative generator.
    generator: Elem,
}

fn digits(x: u32, p: u32, k: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(k as usize);
    let mut x = x;
    for _ in 0..k {
        v.push(x % p);
        x /= p;
    }
    v
}

fn pack(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Product of two polynomials over `F_p` reduced by the monic `modulus`
/// (given by its lower coefficients).
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len();
    let mut prod = vec![0u32; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        // x^k = -sum modulus[i] x^i
        for (i, &m) in modulus.iter().enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + p * p - c * m % p) % p;
        }
    }
    prod.truncate(k);
    prod
}

impl Field {
    pub fn new(q: u64) -> Result<Field> {
        let (p, degree) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::Unsupported(format!("field order {q} above {MAX_FIELD_ORDER}")));
        }
        let (p, order) = (p as u32, q as u32);
        let k = degree;
        let (modulus, generator) = primitive_data(p, k, order)
            .ok_or_else(|| Error::Inconsistent(format!("no primitive element in F_{q}")))?;
        let n = order as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..order {
            let da = digits(a, p, k);
            for b in 0..order {
                let db = digits(b, p, k);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * order + b) as usize] = pack(&s, p) as Elem;
                mul[(a * order + b) as usize] = pack(&poly_mul_mod(&da, &db, &modulus, p), p) as Elem;
            }
        }
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * n + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        Ok(Field { p, degree: k, order, add, mul, neg, inv, generator: generator as Elem })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(|x| x as Elem)
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.order as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.order as usize + b as usize]
    }

    /// Multiplicative inverse; `inv(0)` is `0`.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        let mut out = 1;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(out, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        out
    }

    /// The image of an integer.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.pow(a, (self.order as u64 - 1) / 2) == 1 || self.p == 2
    }

    /// Absolute trace to the prime field, as an integer in `0..p`.
    pub fn trace(&self, a: Elem) -> u32 {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.degree {
            t = self.add(t, x);
            x = self.pow(x, self.p as u64);
        }
        t as u32
    }
}

fn has_full_order(start: &[u32], modulus: &[u32], p: u32, order: u32) -> bool {
    let mut one = vec![0; start.len()];
    one[0] = 1;
    let mut cur = start.to_vec();
    for _ in 1..order - 1 {
        if cur == one {
            return false;
        }
        cur = poly_mul_mod(&cur, start, modulus, p);
    }
    cur == one
}

/// A monic modulus (lower coefficients) for which the returned element
/// generates the multiplicative group.
fn primitive_data(p: u32, k: u32, order: u32) -> Option<(Vec<u32>, u32)> {
    if k == 1 {
        // Constants never need reducing; the modulus is `x`.
        let g = (1..p).find(|&g| p == 2 || has_full_order(&[g], &[0], p, order))?;
        return Some((vec![0], g));
    }
    let x: Vec<u32> = digits(p, p, k);
    (0..p.pow(k))
        .map(|code| digits(code, p, k))
        .filter(|m| m[0] != 0)
        .find(|m| has_full_order(&x, m, p, order))
        .map(|m| (m, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 81] {
            let f = Field::new(q).unwrap();
            let g = f.generator();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u64, q - 1, "generator of F_{q}");
            for a in f.elements() {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements().step_by(3) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn traces_and_squares() {
        let f = Field::new(9).unwrap();
        let squares = f.elements().filter(|&a| a != 0 && f.is_square(a)).count();
        assert_eq!(squares, 4);
        assert!(f.elements().all(|a| f.trace(a) < 3));
        assert_eq!(f.elements().filter(|&a| f.trace(a) == 0).count(), 3);
    }
}
