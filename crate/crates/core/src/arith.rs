//! Small integer helpers shared by the symbolic and brute-force sides.

use num_bigint::BigInt;
use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, k)` with `n = p^k`, or `None` if `n` is not a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

/// Prime powers `q >= 2` in increasing order, up to `bound`.
pub fn prime_powers(bound: u64) -> impl Iterator<Item = u64> {
    (2..=bound).filter(|&n| prime_power(n).is_some())
}

/// `(a - b) mod m` for unsigned residues.
pub fn sub_mod(a: u64, b: i64, m: u64) -> u64 {
    let m_i = m as i128;
    ((a as i128 - b as i128).rem_euclid(m_i)) as u64
}

/// True when some prime power is congruent to `residue` mod `modulus`.
pub fn realizable_residue(residue: u64, modulus: u64) -> bool {
    let r = residue % modulus;
    let g = gcd(r, modulus);
    if g == 1 {
        return true;
    }
    match prime_power(g) {
        Some((p, _)) => powers_mod(p, modulus).any(|x| x == r),
        None => false,
    }
}

/// `p^k mod m` for `k >= 1`, until the sequence starts repeating.
fn powers_mod(p: u64, m: u64) -> impl Iterator<Item = u64> {
    let mut seen = std::collections::HashSet::new();
    let mut x = 1 % m;
    std::iter::from_fn(move || {
        x = x * (p % m) % m;
        seen.insert(x).then_some(x)
    })
}

/// Up to `count` prime powers `q ≡ residue mod modulus`, smallest first,
/// whose prime is not in `excluded`. Exponents are unbounded, so the values
/// may exceed `u64`.
pub fn sample_prime_powers(residue: u64, modulus: u64, count: usize, excluded: &[u64]) -> Vec<BigInt> {
    let r = residue % modulus;
    let g = gcd(r, modulus);
    if g > 1 {
        let Some((p, _)) = prime_power(g) else { return Vec::new() };
        if excluded.contains(&p) || !realizable_residue(r, modulus) {
            return Vec::new();
        }
        let big_p = BigInt::from(p);
        let m = BigInt::from(modulus);
        let target = BigInt::from(r);
        let mut out = Vec::new();
        let mut q = BigInt::from(1);
        // The residues of p^k are eventually periodic with period below `modulus`.
        for _ in 0..(count as u64 + 2) * modulus + 64 {
            q *= &big_p;
            if &q % &m == target {
                out.push(q.clone());
                if out.len() == count {
                    break;
                }
            }
        }
        return out;
    }
    (2u64..)
        .filter(|&n| n % modulus == r)
        .filter(|&n| prime_power(n).is_some_and(|(p, _)| !excluded.contains(&p)))
        .take(count)
        .map(BigInt::from)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(sub_mod(1, -1, 4), 2);
        assert_eq!(sub_mod(0, 1, 3), 2);
    }
}
