//! Exact incidence geometry over fields finitely generated over the
//! rationals.
//!
//! The crate builds field towers from transcendental and algebraic
//! generators, represents elements canonically so that equality (and
//! hence point-line incidence) is decidable exactly, and provides
//! counting, extremal-family, sum-product, specialization and curve
//! tooling on top, together with a JSON configuration format and a
//! command line front end.

pub mod config;
pub mod curves;
pub mod extremal;
pub mod geometry;
pub mod incidence;
pub mod specialize;
pub mod sumproduct;
pub mod tower;

pub use tower::{
    parse_element, towers_eq, FieldElement, FieldError, GeneratorKind, GeneratorSpec, Rational,
    Tower, TowerDescriptor,
};
