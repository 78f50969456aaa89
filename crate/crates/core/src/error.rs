use thiserror::Error;

use crate::root_system::{Series, Twist};

/// Errors raised anywhere in the crate.
///
/// Variants are split into refusals (the input falls outside the supported
/// hypotheses) and internal inconsistencies, see [`Error::is_refusal`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank {rank} is not valid for series {series}")]
    InvalidRank { series: Series, rank: usize },

    #[error("unsupported twist for {context}: {reason} (hypothesis: supported twist)")]
    UnsupportedTwist { context: String, reason: String },

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("p = {p} is a bad prime for type {series} (hypothesis: p good)")]
    BadPrime { p: u64, series: Series },

    #[error("|H^1(F, Z(G))| = {order} is neither trivial nor prime (hypothesis: trivial or prime order)")]
    CompositeH1 { order: u64 },

    #[error("isogeny type {isogeny} is not available for series {series}")]
    InvalidIsogeny { series: Series, isogeny: String },

    #[error("unknown kernel subgroup: {0}")]
    UnknownKernel(String),

    #[error("no tabulated closed form for {0}")]
    NotInTable(String),

    #[error("domain mismatch at q = {residue} mod {modulus}, twist {twist}")]
    DomainMismatch { twist: Twist, residue: u64, modulus: u64 },

    #[error("q = {q} with twist {twist} lies in no branch")]
    NoBranch { q: u64, twist: Twist },

    #[error("non-integral value: {0}")]
    NonInteger(String),

    #[error("label {label} is outside the center of order {order}")]
    InvalidLabel { label: u32, order: u32 },

    #[error("group {name} at q = {q} has order {order}, above the cap {cap}")]
    SizeCap { name: String, q: u64, order: u128, cap: u128 },

    #[error("unknown group name {0}")]
    UnknownGroup(String),

    #[error("no Dixon prime below 2^31 for exponent {0}")]
    NoDixonPrime(u64),

    #[error("character table inconsistency: {0}")]
    Inconsistent(String),

    #[error("not a character of the center: {0}")]
    NotCentralCharacter(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl Error {
    /// True when the error reports input outside the supported hypotheses,
    /// as opposed to an internal inconsistency.
    pub fn is_refusal(&self) -> bool {
        !matches!(self, Error::Inconsistent(_) | Error::NonInteger(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
