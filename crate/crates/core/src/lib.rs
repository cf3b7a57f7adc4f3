//! Bergman kernels of the generalized Hartogs triangles
//! `H_γ = { |z1|^γ < |z2| < 1 }` for `γ = k` and `γ = 1/k`, together with
//! independent machinery for checking them: an orthonormal monomial series,
//! Monte Carlo quadrature of the reproducing property, proper-map and
//! biholomorphism transformation identities, and exact polynomial arithmetic
//! for the numerator coefficients.

pub mod analysis;
pub mod cli;
pub mod domain;
pub mod error;
pub mod kernel;
pub mod oracle;
pub mod polycoeff;
pub mod report;
pub mod transform;

pub use domain::{BoundaryPath, DomainKind, DomainSpec, Exponent, PathKind, Point2C};
pub use error::{Error, Result};
pub use kernel::{KernelArgs, KernelValue, ThinDenominator};
pub use polycoeff::IntPoly;
