//! Brute-force ground truth on explicit small matrix groups.

pub mod classes;
pub mod dixon;
pub mod field;
pub mod group;
pub mod gelfand_graev;
pub mod compare;
