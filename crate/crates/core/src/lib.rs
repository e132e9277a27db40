//! Exact least interpolation on embedded manifold germs.
//!
//! The numerical core is generic over an exact [`Field`]; the aliases below fix
//! it to Gaussian rationals, which is what the parametrisation layer and the
//! command-line tool use.

pub mod artin;
pub mod error;
pub mod frontend;
pub mod invariants;
pub mod jet;
pub mod least;
pub mod linalg;
pub mod monomial;
pub mod pairing;
pub mod poly;
pub mod pushforward;
pub mod scalar;
pub mod wronskian;

pub use error::{Error, Result};
pub use jet::OrderValue;
pub use monomial::MultiIndex;
pub use num_traits::{One, Zero};
pub use scalar::{Field, GaussianRational, Rational};

/// The coefficient field used by the parametrisation layer.
pub type Scalar = GaussianRational;
pub type Poly = poly::Polynomial<Scalar>;
pub type Jet = jet::Jet<Scalar>;
