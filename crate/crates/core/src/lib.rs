//! Alternative Jacobi polynomials on `[0, 1]`, orthogonal exponential
//! polynomials on `[0, inf)`, Gauss-type quadratures built from their zeros,
//! and the discretely almost orthogonal Z-function systems on `[0, 1]`.
//!
//! Polynomial routines are generic over [`Scalar`]: with [`Rational`]
//! parameters every identity holds with exact equality, with `f64` they hold
//! to rounding.
//!
//! ```
//! use altpoly::alt_jacobi::{ajp_coefficients, ajp_norm_h, PolyParams};
//! use altpoly::quad::weighted_inner_product;
//! use altpoly::Rational;
//!
//! let q = |n: i64| Rational::from_integer(n.into());
//! let p = PolyParams::new(q(1), q(2), 4, 1);
//! let poly = ajp_coefficients(&p)?;
//! let h = weighted_inner_product(&poly, &poly, &q(1), &q(2))?;
//! assert_eq!(h, ajp_norm_h(&p)?);
//! # Ok::<(), altpoly::AltError>(())
//! ```

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alt_jacobi;
pub mod error;
pub mod exppoly;
pub mod marginal;
pub mod poly;
pub mod quad;
pub mod roots;
pub mod scalar;
pub mod table;
pub mod verify;
pub mod zfun;

pub use alt_jacobi::PolyParams;
pub use error::{AltError, Result};
pub use poly::DensePoly;
pub use scalar::{ExactValue, Rational, Scalar};
