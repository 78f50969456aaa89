use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use mckay_core::arith;
use mckay_core::center_lattice::{h1_order_at_residue, GroupSpec};
use mckay_core::counting;
use mckay_core::qpoly::{CondPoly, Poly};
use mckay_core::root_system::bad_primes;

fn grid() -> &'static [GroupSpec] {
    static GRID: OnceLock<Vec<GroupSpec>> = OnceLock::new();
    GRID.get_or_init(|| counting::spec_grid(8))
}

fn scalar(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Realizable residues for the group's twist, the full symbolic domain.
fn full_domain(spec: &GroupSpec) -> Vec<u64> {
    let m = spec.fund().modulus();
    (0..m).filter(|&r| arith::realizable_residue(r, m)).collect()
}

fn domain_of(c: &CondPoly, spec: &GroupSpec) -> Vec<u64> {
    let m = spec.fund().modulus();
    let fine = c.refine(m);
    (0..m).filter(|&r| fine.contains(r, spec.twist)).collect()
}

#[test]
fn sum_rule() {
    for spec in grid() {
        let fund = spec.fund();
        let expected = CondPoly::uniform(
            &Poly::q_pow(spec.rank as u32).scale(&scalar(fund.order() as i64))
                * &mckay_core::center_lattice::connected_center_order(spec),
            &[spec.twist],
        );
        for z in 0..fund.order() {
            let mut total: Option<CondPoly> = None;
            for z2 in 0..fund.order() {
                let g = counting::gg_inner_product(spec, z, z2).unwrap();
                total = Some(match total {
                    None => g,
                    Some(t) => t.add(&g).unwrap(),
                });
            }
            let total = total.unwrap();
            let expected = expected.intersect_domain(&total);
            assert!(total.equal(&expected).is_ok(), "{} z = {z}", spec.name());
        }
    }
}

#[test]
fn td_identities() {
    let mut checked = 0;
    for spec in grid() {
        let Ok(td) = counting::td_counts(spec) else { continue };
        checked += 1;
        let lhs = td.one.add(&td.ell.mul(&td.ell_part).unwrap()).unwrap();
        assert!(lhs.equal(&td.classes).is_ok(), "{}: T1 + l Tl != S", spec.name());
        let lhs = td.one.add(&td.ell_part).unwrap();
        assert!(lhs.equal(&td.total).is_ok(), "{}: T1 + Tl != T", spec.name());
        let ell_plus_one = td.ell.map(|p| p + &Poly::one());
        let chars = ell_plus_one.mul(&td.classes).unwrap().sub(&td.ell.mul(&td.total).unwrap()).unwrap();
        assert!(chars.equal(&counting::semisimple_char_count(spec).unwrap()).is_ok(), "{}", spec.name());
        let classes = counting::semisimple_class_count(&mckay_core::levi_min::dual_spec(spec).unwrap()).unwrap();
        assert!(td.classes.equal(&classes.intersect_domain(&td.classes)).is_ok(), "{}", spec.name());
    }
    assert!(checked > 60);
}

#[test]
fn domains_cover_the_declared_cases() {
    for spec in grid() {
        let full = full_domain(spec);
        assert_eq!(domain_of(&counting::semisimple_class_count(spec).unwrap(), spec), full, "{}", spec.name());
        assert_eq!(domain_of(&counting::borel_pprime_count(spec).unwrap(), spec), full, "{}", spec.name());
        assert_eq!(domain_of(&counting::gg_inner_product(spec, 0, 0).unwrap(), spec), full, "{}", spec.name());
        let prime_cells: Vec<u64> = full
            .iter()
            .copied()
            .filter(|&r| {
                let ell = h1_order_at_residue(spec, r);
                ell == 1 || arith::is_prime(ell)
            })
            .collect();
        match counting::semisimple_char_count(spec) {
            Ok(c) => assert_eq!(domain_of(&c, spec), prime_cells, "{}", spec.name()),
            Err(e) => {
                assert!(prime_cells.is_empty(), "{}: {e}", spec.name());
                assert!(e.is_refusal());
            }
        }
    }
}

fn assert_positive_at_samples(spec: &GroupSpec, what: &str, c: &CondPoly, allow_zero: bool) -> usize {
    let bad = bad_primes(spec.series, spec.rank).unwrap();
    let m = c.modulus();
    let mut evaluated = 0;
    for (&(twist, r), p) in c.cells() {
        assert_eq!(twist, spec.twist);
        for q in arith::sample_prime_powers(r, m, 50, &bad) {
            let v = p.eval(&q);
            assert!(v.is_integer(), "{} {what}: {p} at q = {q} is {v}", spec.name());
            assert!(v.is_positive() || (allow_zero && v.is_zero()), "{} {what}: {p} at q = {q} is {v}", spec.name());
            evaluated += 1;
        }
    }
    evaluated
}

#[test]
fn positivity_at_sampled_prime_powers() {
    let mut evaluated = 0;
    for spec in grid() {
        let s = spec;
        evaluated += assert_positive_at_samples(s, "classes", &counting::semisimple_class_count(s).unwrap(), false);
        evaluated += assert_positive_at_samples(s, "borel", &counting::borel_pprime_count(s).unwrap(), false);
        evaluated += assert_positive_at_samples(s, "gg", &counting::gg_inner_product(s, 0, 0).unwrap(), false);
        if let Ok(c) = counting::borel_pprime_lattice(s) {
            evaluated += assert_positive_at_samples(s, "lattice", &c, false);
        }
        if let Ok(c) = counting::semisimple_char_count(s) {
            evaluated += assert_positive_at_samples(s, "chars", &c, false);
            evaluated += assert_positive_at_samples(s, "relative", &counting::relative_count(s, 0).unwrap(), false);
        }
        if let Ok(td) = counting::td_counts(s) {
            evaluated += assert_positive_at_samples(s, "td one", &td.one, false);
            evaluated += assert_positive_at_samples(s, "td ell", &td.ell_part, true);
        }
    }
    assert!(evaluated > 10_000);
}

#[test]
fn sampler_hits_the_residue() {
    let qs = arith::sample_prime_powers(3, 4, 50, &[]);
    assert_eq!(qs.len(), 50);
    assert!(qs.iter().all(|q| q % 4u32 == BigInt::from(3)));
    let twos = arith::sample_prime_powers(0, 4, 50, &[]);
    assert_eq!(twos.len(), 50);
    assert!(arith::sample_prime_powers(6, 8, 5, &[]).is_empty());
    assert!(arith::sample_prime_powers(0, 2, 5, &[2]).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gg_depends_only_on_the_difference(idx in 0usize..10_000, a in 0u32..4, b in 0u32..4, shift in 0u32..4) {
        let spec = &grid()[idx % grid().len()];
        let fund = spec.fund();
        let n = fund.order();
        let (z1, z2, s) = (a % n, b % n, shift % n);
        let base = counting::gg_inner_product(spec, z1, z2).unwrap();
        let moved = counting::gg_inner_product(spec, fund.add(z1, s), fund.add(z2, s)).unwrap();
        prop_assert!(base.equal(&moved).is_ok());
        let swapped = counting::gg_inner_product(spec, z2, z1).unwrap();
        prop_assert!(base.equal(&swapped).is_ok());
    }

    #[test]
    fn relative_counts_ignore_nu(idx in 0usize..10_000, nu in 0u32..4) {
        let spec = &grid()[idx % grid().len()];
        let n = spec.fund().order();
        if let Ok(base) = counting::relative_count(spec, 0) {
            let other = counting::relative_count(spec, nu % n).unwrap();
            prop_assert!(base.equal(&other).is_ok());
        }
    }

    #[test]
    fn evaluation_refuses_bad_input(idx in 0usize..10_000, q in 2u64..200) {
        let spec = &grid()[idx % grid().len()];
        let c = counting::semisimple_class_count(spec).unwrap();
        match arith::prime_power(q) {
            None => prop_assert!(counting::evaluate(spec, &c, q).is_err()),
            Some((p, _)) => {
                let bad = bad_primes(spec.series, spec.rank).unwrap();
                let result = counting::evaluate(spec, &c, q);
                if bad.contains(&p) {
                    prop_assert!(result.is_err());
                } else {
                    prop_assert!(result.unwrap() > BigInt::zero());
                }
            }
        }
    }
}
