//! Computational free Szegő theory on the free monoid: moment families of
//! nc measures, multi-Toeplitz kernels, Verblunsky coefficients, orthogonal
//! nc polynomials, Christoffel approximates and determinantal-zero tests on
//! the row-ball.

pub mod christoffel;
pub mod error;
pub mod freemonoid;
pub mod io;
pub mod linalg;
pub mod moments;
pub mod opuc;
pub mod orthopoly;
pub mod szego;
pub mod tuple;
pub mod verblunsky;
pub mod zeros;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
