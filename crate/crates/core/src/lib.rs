//! Fourth levels `s₄(K_p)` of the completions of biquadratic fields
//! `K = Q(√m, √n)` at the primes above 2.
//!
//! The pipeline is: [`numberfield`] builds an integral basis with exact
//! structure constants, [`finring`] does arithmetic in `O_K/(2^a)`,
//! [`factor2`] finds the primes above 2, [`level`] evaluates the closed
//! formulas, and [`oracle`] recomputes every level by exhaustive search in
//! `O_K/p^N`.

#![allow(clippy::needless_range_loop)]

pub mod factor2;
pub mod finring;
pub mod level;
pub mod numberfield;
pub mod oracle;

use thiserror::Error;

pub use factor2::{factor_order, factor_two, Factorization, PrimeAboveTwo, Shape};
pub use level::{level_e4_f1, level_from_ef, level_main2, LevelResult, Route, E4F1_SUBCASES};
pub use numberfield::{make_field, BiquadraticField, Pattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] numberfield::FieldError),
    #[error(transparent)]
    Factor(#[from] factor2::FactorError),
    #[error(transparent)]
    Level(#[from] level::LevelError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}
