//! Exact polynomial arithmetic: integer and rational univariate polynomials,
//! factorization over `Q`, binary forms on `P¹` and sparse forms on `P²`.

mod binary;
mod factor;
mod form;
mod intpoly;
mod modp;

pub use binary::{BinaryFactorization, BinaryForm};
pub use factor::{factor, factor_squarefree, Factorization};
pub use form::Form;
pub use intpoly::{gcd, squarefree_decomposition, IntPoly};
