//! Closed forms transcribed row by row, kept independent of the
//! character-sum route so the two can be compared.
//!
//! Exponents such as `⌊n/2⌋` are resolved for the concrete rank.

use serde::{Deserialize, Serialize};

use super::{over_residues, semisimple_char_count, semisimple_class_count, spec_grid};
use crate::arith;
use crate::center_lattice::{GroupSpec, Isogeny};
use crate::error::{Error, Result};
use crate::qpoly::{residue_text, CondPoly, Poly};
use crate::root_system::Series;

fn q(k: usize) -> Poly {
    Poly::q_pow(k as u32)
}

fn c_q(c: i64, k: usize) -> Poly {
    Poly::monomial(c, k as u32)
}

fn sum(parts: &[Poly]) -> Poly {
    parts.iter().cloned().sum()
}

/// `gcd(k, q - ε)` for `q` in the residue class `r` modulo a multiple of `k`.
fn gcd_shift(k: u64, r: u64, sign: i64) -> u64 {
    arith::gcd(k, arith::sub_mod(r, sign, k))
}

/// Order of the isogeny kernel in type `A`.
fn a_kernel_order(spec: &GroupSpec) -> u64 {
    let n1 = spec.rank as u64 + 1;
    match spec.isogeny {
        Isogeny::SimplyConnected => 1,
        Isogeny::Adjoint => n1,
        Isogeny::Quotient(r) => r as u64,
        _ => 0,
    }
}

/// Number of semisimple classes as printed for each isogeny type.
pub fn semisimple_class_count_table(spec: &GroupSpec) -> Result<CondPoly> {
    let n = spec.rank;
    let eps = spec.twist.sign();
    let not_in_table = || Error::NotInTable(format!("{} in the semisimple class table", spec.name()));
    if spec.isogeny.is_connected_center() {
        return Err(not_in_table());
    }
    if spec.isogeny == Isogeny::SimplyConnected {
        return over_residues(spec, |_| Ok(Some(q(n))));
    }
    let odd_extra = |extra: Poly| {
        over_residues(spec, |r| Ok(Some(if r % 2 == 1 { &q(n) + &extra } else { q(n) })))
    };
    match (spec.series, &spec.isogeny) {
        (Series::A, _) => {
            let kernel = a_kernel_order(spec);
            let n1 = n as u64 + 1;
            over_residues(spec, |r| {
                let m = gcd_shift(kernel, r, eps);
                Ok(Some(
                    arith::divisors(m)
                        .into_iter()
                        .map(|d| c_q(arith::euler_phi(d) as i64, (n1 / d - 1) as usize))
                        .sum(),
                ))
            })
        }
        (Series::B, Isogeny::Adjoint) => odd_extra(q(n - 1)),
        (Series::C, Isogeny::Adjoint) => odd_extra(q(n / 2)),
        (Series::D, Isogeny::Adjoint) if n % 2 == 1 => {
            let k = (n - 1) / 2;
            over_residues(spec, |r| {
                Ok(Some(if r % 2 == 0 {
                    q(n)
                } else if arith::sub_mod(r, eps, 4) == 0 {
                    sum(&[q(n), c_q(2, k - 1), q(n - 2)])
                } else {
                    &q(n) + &q(n - 2)
                }))
            })
        }
        (Series::D, Isogeny::SpecialOrthogonal) if n % 2 == 1 => odd_extra(q(n - 2)),
        (Series::D, Isogeny::Adjoint) => odd_extra(&c_q(2, n / 2) + &q(n - 2)),
        (Series::D, Isogeny::SpecialOrthogonal) => odd_extra(q(n - 2)),
        (Series::D, Isogeny::HalfSpin) => odd_extra(q(n / 2)),
        (Series::E6, Isogeny::Adjoint) => over_residues(spec, |r| {
            Ok(Some(if arith::sub_mod(r, eps, 3) == 0 { &q(6) + &c_q(2, 2) } else { q(6) }))
        }),
        (Series::E7, Isogeny::Adjoint) => odd_extra(q(4)),
        _ => Err(not_in_table()),
    }
}

/// Number of semisimple characters as printed, on the tabulated branches
/// only (where `|Z(G)^F|` has prime order).
pub fn semisimple_char_count_table(spec: &GroupSpec) -> Result<CondPoly> {
    let n = spec.rank;
    let eps = spec.twist.sign();
    let not_in_table = || Error::NotInTable(format!("{} in the semisimple character table", spec.name()));
    let on_odd = |p: Poly| over_residues(spec, |r| Ok((r % 2 == 1).then(|| p.clone())));
    match (spec.series, &spec.isogeny) {
        (Series::A, Isogeny::SimplyConnected | Isogeny::Adjoint | Isogeny::Quotient(_)) => {
            let n1 = n as u64 + 1;
            let center = n1 / a_kernel_order(spec);
            over_residues(spec, |r| {
                let m = gcd_shift(center, r, eps);
                Ok(arith::is_prime(m).then(|| &q(n) + &c_q((m * m - 1) as i64, (n1 / m - 1) as usize)))
            })
        }
        (Series::B, Isogeny::SimplyConnected) => on_odd(&q(n) + &c_q(3, n / 2)),
        (Series::C, Isogeny::SimplyConnected) => on_odd(&q(n) + &c_q(3, n - 1)),
        (Series::D, Isogeny::SimplyConnected) if n % 2 == 1 => over_residues(spec, |r| {
            Ok((arith::sub_mod(r, -eps, 4) == 0).then(|| &q(n) + &c_q(3, n - 2)))
        }),
        (Series::D, Isogeny::SpecialOrthogonal) => on_odd(&q(n) + &c_q(3, n - 2)),
        (Series::D, Isogeny::HalfSpin) => on_odd(&q(n) + &c_q(3, n / 2)),
        (Series::E6, Isogeny::SimplyConnected) => {
            over_residues(spec, |r| Ok((arith::sub_mod(r, eps, 3) == 0).then(|| &q(6) + &c_q(8, 2))))
        }
        (Series::E7, Isogeny::SimplyConnected) => on_odd(&q(7) + &c_q(3, 4)),
        _ => Err(not_in_table()),
    }
}

/// Specs covered by the class table: every isogeny type in the grid.
pub fn class_table_specs(max_rank: usize) -> Vec<GroupSpec> {
    spec_grid(max_rank)
        .into_iter()
        .filter(|s| semisimple_class_count_table(s).is_ok())
        .collect()
}

/// Specs covered by the character table.
pub fn char_table_specs(max_rank: usize) -> Vec<GroupSpec> {
    spec_grid(max_rank)
        .into_iter()
        .filter(|s| semisimple_char_count_table(s).map(|c| !c.is_empty()).unwrap_or(false))
        .collect()
}

/// One line of an emitted table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableLine {
    pub group: String,
    pub series: Series,
    pub rank: usize,
    pub isogeny: String,
    pub twist: String,
    pub condition: String,
    pub count: String,
}

/// Which table to regenerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    Classes,
    Characters,
}

impl std::str::FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "classes" => Ok(Table::Classes),
            "4" | "characters" | "chars" => Ok(Table::Characters),
            other => Err(Error::Unsupported(format!("unknown table {other:?}; valid: 1, 4"))),
        }
    }
}

/// Regenerates a table from the character-sum route, restricted to the
/// tabulated branches.
pub fn emit_table(which: Table, max_rank: usize) -> Result<Vec<TableLine>> {
    let specs = match which {
        Table::Classes => class_table_specs(max_rank),
        Table::Characters => char_table_specs(max_rank),
    };
    let mut out = Vec::new();
    for spec in specs {
        let count = match which {
            Table::Classes => semisimple_class_count(&spec)?,
            Table::Characters => {
                let domain = semisimple_char_count_table(&spec)?;
                semisimple_char_count(&spec)?.intersect_domain(&domain)
            }
        };
        for b in count.branches() {
            let condition = if b.residues.len() as u64 == b.modulus {
                "any".to_string()
            } else {
                residue_text(&b.residues, b.modulus)
            };
            out.push(TableLine {
                group: spec.name(),
                series: spec.series,
                rank: spec.rank,
                isogeny: spec.isogeny.to_string(),
                twist: b.twist.unwrap_or(spec.twist).to_string(),
                condition,
                count: b.poly.to_string(),
            });
        }
    }
    Ok(out)
}
