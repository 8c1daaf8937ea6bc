//! Orthogonal polynomial systems on an interval and on the unit triangle,
//! including extended Jacobi polynomials with negative integer parameters,
//! Sobolev inner products whose partial sums commute with differentiation,
//! and a convergence-measurement harness with a CLI front end.

pub mod approx;
pub mod bundle;
pub mod config;
pub mod dd;
pub mod jacobi;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod sobolev1d;
pub mod sobolev2d;
pub mod triangle;
pub mod verify;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("undefined coefficient: {0}")]
    UndefinedCoefficient(String),
    #[error("identity not applicable: {0}")]
    IdentityNotApplicable(String),
    #[error("insufficient bundle order: need {need}, have {have}")]
    InsufficientBundleOrder { need: u32, have: u32 },
    #[error("case not in catalog: {0}")]
    UncataloguedCase(String),
    #[error("form is only positive semidefinite: {0}")]
    SemidefiniteForm(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
