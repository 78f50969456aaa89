use std::fmt;

use serde::{Deserialize, Serialize};

use crate::center_lattice::GroupSpec;
use crate::qpoly::{CondPoly, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Classes,
    SsChars,
    Borel,
    GgInner,
    Relative,
    H1,
    TdTotal,
    TdOne,
    TdEll,
}

/// Which formula produced a count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Sum over characters of `H^1` with cuspidal Levi ranks.
    Theorem,
    /// Transcribed closed form.
    Table,
    /// Sum over `F`-stable subsets of simple-root orbits.
    Direct,
    /// Grouped by kernels with Möbius inversion.
    Lattice,
    /// Prime-order closed form.
    ClosedForm,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Route::Theorem => "theorem",
            Route::Table => "table",
            Route::Direct => "direct",
            Route::Lattice => "lattice",
            Route::ClosedForm => "closed_form",
        };
        f.write_str(s)
    }
}

/// A count together with the data needed to interpret it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CountReport {
    pub spec: GroupSpec,
    pub kind: Kind,
    pub route: Route,
    #[serde(flatten)]
    pub result: CondPoly,
    pub side_conditions: Vec<String>,
}

impl CountReport {
    pub fn new(spec: &GroupSpec, kind: Kind, route: Route, result: CondPoly) -> Self {
        CountReport {
            spec: spec.clone(),
            kind,
            route,
            result,
            side_conditions: super::side_conditions(spec),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Mismatch,
    /// No branch lies inside the hypotheses; not a failure.
    OutOfScope,
}

/// Per-central-character comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelativeCheck {
    pub g_side: CondPoly,
    pub b_side: CondPoly,
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct McKayReport {
    pub spec: GroupSpec,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_side: Option<CondPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_side: Option<CondPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative: Option<RelativeCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl McKayReport {
    pub fn equal(&self) -> bool {
        self.verdict == Verdict::Equal
    }
}
