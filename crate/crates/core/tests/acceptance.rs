//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits non-zero only when a criterion outside `KNOWN_RED` fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_traits::Signed;

use mckay_core::arith;
use mckay_core::center_lattice::{h1_order_at_residue, subgroup_lattice, GroupSpec};
use mckay_core::counting::{self, tables, Verdict};
use mckay_core::levi_min::{dual_spec, lmin_rank};
use mckay_core::oracle::classes::{conjugacy_classes, semisimple_class_count_bf};
use mckay_core::oracle::dixon::character_table;
use mckay_core::oracle::gelfand_graev::gelfand_graev_bf;
use mckay_core::oracle::group::{build_group, GroupName};
use mckay_core::qpoly::{CondPoly, Poly};
use mckay_core::root_system::{bad_primes, Series, Twist};

/// The printed `D_{2n}` Borel form disagrees with Möbius inversion on the
/// Klein lattice; criterion 3 stays red on that sub-check.
const KNOWN_RED: &[usize] = &[3];

const MAX_RANK: usize = 8;

type Criterion = (&'static str, fn() -> Verdicts);

struct Verdicts {
    ok: bool,
    notes: Vec<String>,
}

impl Verdicts {
    fn new() -> Self {
        Verdicts { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, cond: bool, note: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(note.into());
        }
    }

    fn info(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

fn class_transcription() -> Verdicts {
    let mut v = Verdicts::new();
    let specs = tables::class_table_specs(MAX_RANK);
    for spec in &specs {
        let theorem = counting::semisimple_class_count(spec).unwrap();
        let table = tables::semisimple_class_count_table(spec).unwrap();
        if let Err(w) = theorem.equal(&table) {
            v.check(false, format!("{}: {w}", spec.name()));
        }
    }
    v.check(specs.len() > 60, format!("only {} specs", specs.len()));
    v.info(format!("{} specs", specs.len()));
    v
}

fn char_transcription() -> Verdicts {
    let mut v = Verdicts::new();
    let specs = tables::char_table_specs(MAX_RANK);
    let mut quotients = 0;
    for spec in &specs {
        let table = tables::semisimple_char_count_table(spec).unwrap();
        let theorem = counting::semisimple_char_count(spec).unwrap().intersect_domain(&table);
        v.check(theorem.domain_size() == table.domain_size(), format!("{}: branch outside the domain", spec.name()));
        if let Err(w) = theorem.equal(&table) {
            v.check(false, format!("{}: {w}", spec.name()));
        }
        if matches!(spec.isogeny, mckay_core::Isogeny::Quotient(_)) {
            quotients += 1;
        }
    }
    v.check(quotients > 0, "no intermediate type A specs");
    v.info(format!("{} specs, {quotients} intermediate type A", specs.len()));
    v
}

fn odd_cells(c: &CondPoly, twist: Twist) -> Vec<(u64, Poly)> {
    c.cells()
        .iter()
        .filter(|(&(t, r), _)| t == twist && r % 2 == 1)
        .map(|(&(_, r), p)| (r, p.clone()))
        .collect()
}

fn mckay_and_borel_forms() -> Verdicts {
    let mut v = Verdicts::new();
    let mut equal = 0;
    for spec in counting::spec_grid(MAX_RANK) {
        let report = counting::mckay_verify(&spec).unwrap();
        match report.verdict {
            Verdict::Equal => equal += 1,
            Verdict::OutOfScope => {}
            Verdict::Mismatch => v.check(false, format!("{}: mismatch {:?}", spec.name(), report.witness)),
        }
        if let (Ok(closed), Ok(lattice)) =
            (counting::borel_prime_closed_form(&spec), counting::borel_pprime_lattice(&spec))
        {
            if let Err(w) = closed.equal(&lattice.intersect_domain(&closed)) {
                v.check(false, format!("{}: closed form vs lattice {w}", spec.name()));
            }
        }
    }
    v.check(equal > 50, format!("only {equal} specs verified"));
    v.info(format!("{equal} specs Equal"));

    let mut printed_bad = BTreeSet::new();
    for n in 2..=6u32 {
        let spec = GroupSpec::sc(Series::D, 2 * n as usize, Twist::Split).unwrap();
        let lattice = counting::borel_pprime_lattice(&spec).unwrap();
        let literal = counting::borel_maximal_subtraction(&spec).unwrap();
        let cells = odd_cells(&lattice, Twist::Split);
        v.check(!cells.is_empty(), format!("D{}: no odd cells", 2 * n));
        for (r, p) in cells {
            v.check(p == counting::borel_d_even(n), format!("D{} r={r}: lattice {p} vs corrected form", 2 * n));
            if p != counting::borel_d_even_printed(n) {
                printed_bad.insert(2 * n);
            }
            let lit = literal.poly_at(r, Twist::Split);
            v.check(
                lit == Some(&counting::borel_d_even_printed(n)),
                format!("D{} r={r}: maximal subtraction {lit:?} is not the printed form", 2 * n),
            );
        }
    }
    if !printed_bad.is_empty() {
        v.check(
            false,
            format!(
                "printed D_2n form (last coefficient 4) disagrees with the lattice count (6) for D{:?}: \
                 Möbius value on the Klein lattice is 2, not the 1 implied by maximal subtraction",
                printed_bad
            ),
        );
    }

    let mut odd_cells_checked = 0;
    for n in 2..=6u32 {
        for twist in Twist::BOTH {
            let spec = GroupSpec::sc(Series::D, 2 * n as usize + 1, twist).unwrap();
            let lattice = counting::borel_pprime_lattice(&spec).unwrap();
            for (&(t, r), p) in lattice.cells() {
                if h1_order_at_residue(&spec, r) != 4 {
                    continue;
                }
                odd_cells_checked += 1;
                v.check(
                    t == twist && *p == counting::borel_d_odd(n),
                    format!("{} r={r}: {p} vs D_2n+1 form", spec.name()),
                );
            }
        }
    }
    v.check(odd_cells_checked >= 10, format!("only {odd_cells_checked} D_2n+1 cells"));
    v
}

fn oracle_classes() -> Verdicts {
    let mut v = Verdicts::new();
    let cases = [
        (GroupName::Sl2, 3, 3),
        (GroupName::Sl2, 5, 5),
        (GroupName::Pgl2, 3, 4),
        (GroupName::Pgl2, 5, 6),
        (GroupName::Sl3, 2, 4),
        (GroupName::Sl3, 3, 9),
        (GroupName::Su3, 2, 4),
        (GroupName::Pgu3, 2, 6),
    ];
    for (name, q, expected) in cases {
        let g = build_group(name, q).unwrap();
        let bf = semisimple_class_count_bf(&conjugacy_classes(&g), g.p);
        v.check(bf == expected, format!("{name}({q}): oracle {bf}, expected {expected}"));
        let (spec, _) = mckay_core::oracle::compare::group_spec(name).unwrap();
        let formula = counting::evaluate(&spec, &counting::semisimple_class_count(&spec).unwrap(), q).unwrap();
        v.check(formula == expected.into(), format!("{name}({q}): formula {formula}, expected {expected}"));
    }
    v
}

fn oracle_pprime() -> Verdicts {
    let mut v = Verdicts::new();
    let cases = [
        (GroupName::Sl2, 3, 6),
        (GroupName::Sl2, 5, 8),
        (GroupName::Sl3, 2, 4),
        (GroupName::BorelSl2, 3, 6),
        (GroupName::BorelSl2, 5, 8),
        (GroupName::USl3, 2, 4),
        (GroupName::BorelSl3, 2, 4),
    ];
    for (name, q, expected) in cases {
        let g = build_group(name, q).unwrap();
        let count = character_table(&g, false).unwrap().pprime_count(g.p, None).unwrap();
        v.check(count == expected, format!("{name}({q}): oracle {count}, expected {expected}"));
    }
    for (q, each) in [(3u64, 3usize), (5, 4)] {
        let g = build_group(GroupName::Sl2, q).unwrap();
        let per_nu = character_table(&g, false).unwrap().pprime_counts_over(g.p, &g.scalars()).unwrap();
        v.check(per_nu == vec![each; 2], format!("SL2({q}) per central character {per_nu:?}"));
        let spec = GroupSpec::sc(Series::A, 1, Twist::Split).unwrap();
        for nu in 0..2 {
            let rel = counting::evaluate(&spec, &counting::relative_count(&spec, nu).unwrap(), q).unwrap();
            v.check(rel == each.into(), format!("SL2({q}) relative count {rel} for nu = {nu}"));
        }
    }
    v
}

fn gelfand_graev() -> Verdicts {
    let mut v = Verdicts::new();
    let spec = GroupSpec::sc(Series::A, 1, Twist::Split).unwrap();
    for q in [3u64, 5, 7] {
        let m = gelfand_graev_bf(q).unwrap();
        let (d, o) = (q as i64 + 1, q as i64 - 1);
        v.check(m.matrix == [[d, o], [o, d]], format!("q = {q}: {:?}", m.matrix));
        v.check(m.row_sums() == [2 * q as i64; 2], format!("q = {q}: row sums {:?}", m.row_sums()));
        for z1 in 0..2u32 {
            for z2 in 0..2u32 {
                let symbolic = counting::gg_inner_product(&spec, z1, z2).unwrap();
                let value = counting::evaluate(&spec, &symbolic, q).unwrap();
                v.check(
                    value == m.matrix[z1 as usize][z2 as usize].into(),
                    format!("q = {q} <{z1},{z2}>: symbolic {value}"),
                );
            }
        }
    }
    v
}

fn properties() -> Verdicts {
    let mut v = Verdicts::new();
    let grid = counting::spec_grid(MAX_RANK);
    let mut evaluated = 0usize;
    for spec in &grid {
        let name = spec.name();
        let classes = counting::semisimple_class_count(spec).unwrap();
        let normal = classes.normalized();
        let mut seen = BTreeSet::new();
        for b in normal.branches() {
            let twists = b.twist.map(|t| vec![t]).unwrap_or(Twist::BOTH.to_vec());
            for t in twists {
                for &r in &b.residues {
                    v.check(seen.insert((t, r)), format!("{name}: cell ({t}, {r}) in two branches"));
                }
            }
        }
        v.check(seen.len() == normal.cells().len(), format!("{name}: branches miss cells"));

        let dual = dual_spec(spec).unwrap();
        v.check(dual_spec(&dual).unwrap() == *spec, format!("{name}: duality is not an involution"));

        if let Ok(td) = counting::td_counts(spec) {
            let lhs = td.one.add(&td.ell.mul(&td.ell_part).unwrap()).unwrap();
            v.check(lhs.equal(&td.classes).is_ok(), format!("{name}: T1 + l Tl != S"));
            let lhs = td.one.add(&td.ell_part).unwrap();
            v.check(lhs.equal(&td.total).is_ok(), format!("{name}: T1 + Tl != T"));
        }

        let bad = bad_primes(spec.series, spec.rank).unwrap();
        for count in [classes, counting::borel_pprime_count(spec).unwrap()] {
            let m = count.modulus();
            for (&(_, r), p) in count.cells() {
                for q in arith::sample_prime_powers(r, m, 50, &bad) {
                    let x = p.eval(&q);
                    v.check(x.is_integer() && x.is_positive(), format!("{name}: {p} at q = {q} is {x}"));
                    evaluated += 1;
                }
            }
        }
    }

    for series in Series::ALL {
        for rank in series.ranks_up_to(12) {
            let fund = mckay_core::center_lattice::fundamental_group(series, rank).unwrap();
            let lattice = subgroup_lattice(&fund);
            for &a in &lattice.subgroups {
                for &b in lattice.subgroups.iter().filter(|&&b| a.is_subgroup_of(b)) {
                    let (ra, rb) = (lmin_rank(series, rank, a).unwrap(), lmin_rank(series, rank, b).unwrap());
                    v.check(ra.ss_rank >= rb.ss_rank, format!("{series}{rank}: minimal Levi rank not antitone"));
                }
            }
        }
    }
    v.check(evaluated > 5_000, format!("only {evaluated} evaluations"));
    v.info(format!("{} specs, {evaluated} positive evaluations", grid.len()));
    v
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("semisimple class counts equal the transcribed class table", class_transcription),
        ("semisimple character counts equal the transcribed character table", char_transcription),
        ("McKay equality on prime branches and closed Borel forms", mckay_and_borel_forms),
        ("oracle semisimple class counts on small groups", oracle_classes),
        ("oracle p' character counts for groups and Borel subgroups", oracle_pprime),
        ("Gelfand-Graev inner products for SL2", gelfand_graev),
        ("structural properties over the grid", properties),
    ];
    let mut unexpected = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let v = run();
        let status = if v.ok { "PASS" } else { "FAIL" };
        let notes = if v.notes.is_empty() { String::new() } else { format!(" | {}", v.notes.join("; ")) };
        println!("{status} [{id}] {title} ({:.1}s){notes}", start.elapsed().as_secs_f64());
        if !v.ok && !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no unexpected failures (known red: {KNOWN_RED:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures in {unexpected:?}");
        ExitCode::FAILURE
    }
}
