//! Oracle counts against the symbolic formulas evaluated at `q`.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::classes::{conjugacy_classes, semisimple_class_count_bf};
use super::dixon::{character_table, CharTable, DIXON_CAP};
use super::gelfand_graev::{gelfand_graev_bf, MAX_Q};
use super::group::{build_group, FiniteGroup, GroupName};
use crate::center_lattice::{check_q, GroupSpec};
use crate::counting;
use crate::error::{Error, Result};
use crate::qpoly::CondPoly;
use crate::root_system::{Series, Twist};

/// The reductive datum realised by a named construction, with the name of
/// its Borel subgroup when the oracle can build it.
pub fn group_spec(name: GroupName) -> Option<(GroupSpec, Option<GroupName>)> {
    use GroupName::*;
    let (spec, borel) = match name {
        Sl2 => (GroupSpec::sc(Series::A, 1, Twist::Split), Some(BorelSl2)),
        Pgl2 => (GroupSpec::adjoint(Series::A, 1, Twist::Split), None),
        Gl2 => (GroupSpec::connected_center(1, Twist::Split), Some(BorelGl2)),
        Sl3 => (GroupSpec::sc(Series::A, 2, Twist::Split), Some(BorelSl3)),
        Pgl3 => (GroupSpec::adjoint(Series::A, 2, Twist::Split), None),
        Su3 => (GroupSpec::sc(Series::A, 2, Twist::NonSplit), Some(BorelSu3)),
        Pgu3 => (GroupSpec::adjoint(Series::A, 2, Twist::NonSplit), None),
        Gu3 => (GroupSpec::connected_center(2, Twist::NonSplit), None),
        Gl1 | BorelSl2 | BorelGl2 | USl2 | BorelSl3 | USl3 | BorelSu3 => return None,
    };
    spec.ok().map(|s| (s, borel))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn compare(name: impl Into<String>, oracle: impl fmt::Display, formula: impl fmt::Display) -> Check {
        let (oracle, formula) = (oracle.to_string(), formula.to_string());
        let outcome = if oracle == formula { Outcome::Pass } else { Outcome::Fail };
        Check { name: name.into(), oracle: Some(oracle), formula: Some(formula), outcome, note: None }
    }

    fn skipped(name: impl Into<String>, note: impl Into<String>) -> Check {
        Check { name: name.into(), oracle: None, formula: None, outcome: Outcome::Skipped, note: Some(note.into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareReport {
    pub group: String,
    pub q: u64,
    pub order: u32,
    pub spec: GroupSpec,
    pub checks: Vec<Check>,
}

impl CompareReport {
    /// No check failed (skipped checks are allowed).
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }
}

/// Evaluates a formula, turning a refusal into a skipped check.
fn formula_at(spec: &GroupSpec, count: Result<CondPoly>, q: u64) -> std::result::Result<BigInt, String> {
    let count = count.map_err(|e| e.to_string())?;
    counting::evaluate(spec, &count, q).map_err(|e| e.to_string())
}

fn table_if_small(g: &FiniteGroup) -> Result<Option<CharTable>> {
    if g.order() > DIXON_CAP {
        return Ok(None);
    }
    character_table(g, false).map(Some)
}

pub fn compare(name: GroupName, q: u64) -> Result<CompareReport> {
    let (spec, borel) =
        group_spec(name).ok_or_else(|| Error::Unsupported(format!("{name} has no reductive datum to compare")))?;
    let p = check_q(&spec, q)?;
    let g = build_group(name, q)?;
    let mut checks = Vec::new();

    let classes = conjugacy_classes(&g);
    let bf = semisimple_class_count_bf(&classes, p);
    checks.push(match formula_at(&spec, counting::semisimple_class_count(&spec), q) {
        Ok(v) => Check::compare("semisimple classes", bf, v),
        Err(e) => Check::skipped("semisimple classes", e),
    });

    let table = table_if_small(&g)?;
    match &table {
        None => checks.push(Check::skipped("p' characters", format!("|G| above the character table cap {DIXON_CAP}"))),
        Some(t) => {
            let bf = t.pprime_count(p, None)?;
            checks.push(match formula_at(&spec, counting::semisimple_char_count(&spec), q) {
                Ok(v) => Check::compare("p' characters", bf, v),
                Err(e) => Check::skipped("p' characters", e),
            });
            let per_nu = t.pprime_counts_over(p, &g.scalars())?;
            for (nu, bf) in per_nu.iter().enumerate() {
                let label = format!("p' characters over nu = {nu}");
                checks.push(match formula_at(&spec, counting::relative_count(&spec, nu as u32), q) {
                    Ok(v) => Check::compare(label, bf, v),
                    Err(e) => Check::skipped(label, e),
                });
            }
        }
    }

    if let Some(bname) = borel {
        let b = build_group(bname, q)?;
        match table_if_small(&b)? {
            None => checks.push(Check::skipped("Borel p' characters", "Borel subgroup above the cap")),
            Some(t) => {
                let bf = t.pprime_count(p, None)?;
                checks.push(match formula_at(&spec, counting::borel_pprime_count(&spec), q) {
                    Ok(v) => Check::compare("Borel p' characters", bf, v),
                    Err(e) => Check::skipped("Borel p' characters", e),
                });
                let per_nu = t.pprime_counts_over(p, &b.scalars())?;
                for (nu, bf) in per_nu.iter().enumerate() {
                    let label = format!("Borel p' characters over nu = {nu}");
                    checks.push(match formula_at(&spec, counting::borel_relative_count(&spec, nu as u32), q) {
                        Ok(v) => Check::compare(label, bf, v),
                        Err(e) => Check::skipped(label, e),
                    });
                }
            }
        }
    }

    if name == GroupName::Sl2 && q % 2 == 1 && q <= MAX_Q {
        let m = gelfand_graev_bf(q)?;
        for z1 in 0..2 {
            for z2 in 0..2 {
                let label = format!("Gelfand-Graev <{z1},{z2}>");
                checks.push(match formula_at(&spec, counting::gg_inner_product(&spec, z1, z2), q) {
                    Ok(v) => Check::compare(label, m.matrix[z1 as usize][z2 as usize], v),
                    Err(e) => Check::skipped(label, e),
                });
            }
        }
    }

    Ok(CompareReport { group: format!("{name}({q})"), q, order: g.order(), spec, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_3_agrees() {
        let report = compare(GroupName::Sl2, 3).unwrap();
        assert!(report.all_pass(), "{report:#?}");
        assert!(report.checks.iter().all(|c| c.outcome == Outcome::Pass), "{report:#?}");
    }
}
