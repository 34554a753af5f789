//! Arithmetic objects behind GL(3) Voronoi formulas with level and
//! nebentypus, together with exact verifiers for their finite identities.
//!
//! * [`arith`]: factorization, divisors, Möbius, inverses, unit groups.
//! * [`characters`]: Dirichlet characters, conductors, Gauss sums.
//! * [`expsums`]: Kloosterman and Ramanujan sums, character averages.
//! * [`hecke`]: coefficient families satisfying the Hecke relations.
//! * [`formal`]: sparse formal double Dirichlet series in `X^{-w} Y^{-s}`.
//! * [`identities`]: coefficient-level checks of the series identities.
//! * [`special`]: log-gamma, K-Bessel, gamma factors.
//! * [`quad`]: adaptive Gauss–Kronrod quadrature and Wynn acceleration.

pub mod arith;
pub mod characters;
pub mod error;
pub mod expsums;
pub mod formal;
pub mod hecke;
pub mod identities;
pub mod quad;
pub mod special;

pub use characters::DirichletCharacter;
pub use error::{Error, Result};
pub use formal::{DirichletMonomial, FormalSeries, Key, Window};
pub use hecke::{CoefficientSource, HeckeCoefficientModel, ModelOptions, Ramified};
pub use identities::IdentityCase;
pub use num_complex::Complex64;
pub use special::GammaData;
