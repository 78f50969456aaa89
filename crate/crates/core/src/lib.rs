//! Exact counts of semisimple classes, semisimple characters and Borel
//! `p'`-characters of finite reductive groups in defining characteristic,
//! as polynomials in `q` with congruence conditions, together with a
//! brute-force oracle on small matrix groups.

pub mod arith;
pub mod center_lattice;
pub mod counting;
pub mod error;
pub mod levi_min;
pub mod oracle;
pub mod qpoly;
pub mod root_system;

pub use center_lattice::{GroupSpec, Isogeny};
pub use error::{Error, Result};
pub use qpoly::{CondPoly, Poly};
pub use root_system::{Series, Twist};
