use mckay_core::center_lattice::GroupSpec;
use mckay_core::counting::{self, tables};
use mckay_core::error::Error;
use mckay_core::{Isogeny, Poly, Series, Twist};

fn grid() -> Vec<GroupSpec> {
    counting::spec_grid(8)
}

#[test]
fn class_counts_match_transcription() {
    let mut failures = Vec::new();
    let specs = tables::class_table_specs(8);
    assert!(specs.len() > 60, "only {} specs", specs.len());
    for spec in specs {
        let theorem = counting::semisimple_class_count(&spec).unwrap();
        let table = tables::semisimple_class_count_table(&spec).unwrap();
        if let Err(w) = theorem.equal(&table) {
            failures.push(format!("{}: {w}", spec.name()));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn char_counts_match_transcription() {
    let mut failures = Vec::new();
    for spec in tables::char_table_specs(8) {
        let table = tables::semisimple_char_count_table(&spec).unwrap();
        let theorem = counting::semisimple_char_count(&spec).unwrap();
        if theorem.intersect_domain(&table).domain_size() != table.domain_size() {
            failures.push(format!("{}: tabulated branch outside the prime-order domain", spec.name()));
            continue;
        }
        if let Err(w) = theorem.intersect_domain(&table).equal(&table) {
            failures.push(format!("{}: {w}", spec.name()));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn borel_routes_agree() {
    let mut failures = Vec::new();
    for spec in grid() {
        let direct = counting::borel_pprime_count(&spec).unwrap();
        match counting::borel_pprime_lattice(&spec) {
            Ok(lattice) => {
                if let Err(w) = direct.equal(&lattice) {
                    failures.push(format!("{}: {w}", spec.name()));
                }
            }
            Err(Error::UnsupportedTwist { .. }) => {
                assert!(spec.series == Series::D && spec.twist == Twist::NonSplit, "{}", spec.name());
            }
            Err(e) => failures.push(format!("{}: {e}", spec.name())),
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn prime_closed_form_is_the_lattice_specialisation() {
    let mut failures = Vec::new();
    for spec in grid() {
        let Ok(closed) = counting::borel_prime_closed_form(&spec) else { continue };
        let Ok(lattice) = counting::borel_pprime_lattice(&spec) else { continue };
        if let Err(w) = closed.equal(&lattice.intersect_domain(&closed)) {
            failures.push(format!("{}: {w}", spec.name()));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn mckay_holds_on_prime_branches() {
    let mut failures = Vec::new();
    let mut verified = 0;
    for spec in grid() {
        let report = counting::mckay_verify(&spec).unwrap();
        match report.verdict {
            counting::Verdict::Equal => verified += 1,
            counting::Verdict::OutOfScope => {}
            counting::Verdict::Mismatch => failures.push(format!("{}: {:?}", spec.name(), report.witness)),
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(verified > 50);
}

#[test]
fn connected_center_borel() {
    let gl = GroupSpec::connected_center(1, Twist::Split).unwrap();
    let c = counting::borel_pprime_count(&gl).unwrap();
    assert_eq!(c.evaluate(3, Twist::Split).unwrap(), 6.into());
    let expected = Poly::from_ints(&[0, -1, 1]);
    assert_eq!(c.poly_at(3, Twist::Split), Some(&expected));
    let _ = Isogeny::Adjoint;
}
