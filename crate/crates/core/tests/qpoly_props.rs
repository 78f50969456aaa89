use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use mckay_core::qpoly::{CondPoly, Poly};
use mckay_core::root_system::Twist;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-20i64..20, 0..6).prop_map(|c| Poly::from_ints(&c))
}

fn twist() -> impl Strategy<Value = Twist> {
    prop_oneof![Just(Twist::Split), Just(Twist::NonSplit)]
}

/// A family over modulus 1..=6 with some cells missing.
fn cond_poly() -> impl Strategy<Value = CondPoly> {
    (1u64..=6, prop::collection::vec(prop::option::of(poly()), 12)).prop_map(|(m, cells)| {
        CondPoly::build(m, &Twist::BOTH, |r, t| {
            let idx = r as usize + if t == Twist::Split { 0 } else { 6 };
            cells[idx].clone()
        })
    })
}

proptest! {
    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), q in 2u64..200) {
        let qb = BigInt::from(q);
        prop_assert_eq!((&a * &b).eval(&qb), a.eval(&qb) * b.eval(&qb));
        prop_assert_eq!((&a + &b).eval(&qb), a.eval(&qb) + b.eval(&qb));
    }

    #[test]
    fn exact_division_round_trips(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let prod = &a * &b;
        prop_assert_eq!(prod.div_exact(&b), Some(a));
    }

    #[test]
    fn poly_json_round_trip(a in poly()) {
        let json = serde_json::to_string(&a).unwrap();
        let back: Poly = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn scaling_keeps_rationals_exact(a in poly(), n in 1i64..9, d in 1i64..9) {
        let c = BigRational::new(n.into(), d.into());
        let back = a.scale(&c).scale(&(BigRational::from_integer(1.into()) / &c));
        prop_assert_eq!(back, a);
    }

    #[test]
    fn refinement_preserves_the_family(c in cond_poly(), k in 1u64..4, q in 2u64..500, t in twist()) {
        let fine = c.refine(c.modulus() * k);
        prop_assert_eq!(fine.poly_at(q, t), c.poly_at(q, t));
        prop_assert_eq!(fine.normalized(), c.normalized());
        prop_assert!(c.equal(&fine).is_ok());
    }

    #[test]
    fn branches_partition_the_domain(c in cond_poly()) {
        let n = c.normalized();
        let mut seen = std::collections::BTreeSet::new();
        for b in n.branches() {
            prop_assert_eq!(b.modulus, n.modulus());
            let twists = b.twist.map(|t| vec![t]).unwrap_or(Twist::BOTH.to_vec());
            for t in twists {
                for &r in &b.residues {
                    prop_assert!(seen.insert((t, r)), "cell ({}, {}) in two branches", t, r);
                    prop_assert_eq!(n.cells().get(&(t, r)), Some(&b.poly));
                }
            }
        }
        prop_assert_eq!(seen.len(), n.cells().len());
    }

    #[test]
    fn cellwise_arithmetic(a in cond_poly(), b in cond_poly(), q in 2u64..500, t in twist()) {
        let (a, b) = (a.intersect_domain(&b), b.intersect_domain(&a));
        let sum = a.add(&b).unwrap();
        match (a.poly_at(q, t), b.poly_at(q, t)) {
            (Some(x), Some(y)) => prop_assert_eq!(sum.poly_at(q, t), Some(&(x + y))),
            _ => prop_assert!(!sum.contains(q, t)),
        }
        prop_assert!(sum.sub(&b).unwrap().equal(&a).is_ok());
    }

    #[test]
    fn union_of_disjoint_pieces(c in cond_poly()) {
        let odd = c.refine(c.modulus() * 2).filter(|r, _| r % 2 == 1);
        let even = c.refine(c.modulus() * 2).filter(|r, _| r % 2 == 0);
        prop_assert!(odd.union(&even).unwrap().equal(&c).is_ok());
        if !odd.is_empty() {
            prop_assert!(odd.union(&odd).is_err());
        }
    }

    #[test]
    fn cond_poly_json_round_trip(c in cond_poly()) {
        let json = serde_json::to_string(&c).unwrap();
        let back: CondPoly = serde_json::from_str(&json).unwrap();
        prop_assert!(back.equal(&c).is_ok());
    }

    #[test]
    fn comparison_finds_a_witness(c in cond_poly(), bump in 1i64..5) {
        prop_assume!(!c.is_empty());
        let other = c.map(|p| p + &Poly::constant(bump));
        let w = c.equal(&other).unwrap_err();
        prop_assert!(c.contains(w.residue, w.twist));
    }
}
