//! Exact computation of Jack characters and the quantities built from them.
//!
//! Everything here works over the rationals: character values are Laurent
//! polynomials in `A` (with `alpha = A^2`), expansions are taken in the linear
//! basis `gamma^p Ch_mu`, and every verification compares exact values.
//!
//! The crate is organised bottom-up:
//!
//! * [`combinatorics`] – integer partitions, set-partitions, non-crossing partitions.
//! * [`algebra`] – rationals, Laurent polynomials, univariate polynomials, exact
//!   linear solving and interpolation.
//! * [`jack`] – Jack symmetric functions in the power-sum basis.
//! * [`characters`] – normalized Jack characters and the (K2)-(K4) checks.
//! * [`basis`] – expansions in the `gamma^p Ch_mu` basis, structure coefficients and
//!   the disjoint product.
//! * [`cumulants`] – set-partition cumulants and the degree/positivity scans.
//! * [`rows`] – row functions, the separate product and difference operators.
//! * [`free`] – transition measures, free cumulants and Kerov-Lassalle polynomials.
//! * [`symgroup`] – brute-force symmetric group algebra used as an `alpha = 1` oracle.

pub mod algebra;
pub mod basis;
pub mod characters;
pub mod combinatorics;
pub mod cumulants;
mod error;
pub mod free;
pub mod jack;
mod report;
pub mod rows;
pub mod symgroup;

pub use algebra::{DeltaPoly, GammaPoly, LaurentScalar, Polynomial, Rational};
pub use basis::{ChExpansion, EvaluableFunction};
pub use combinatorics::{Partition, SetPartition};
pub use error::{Error, Result};
pub use report::{Report, Violation};
