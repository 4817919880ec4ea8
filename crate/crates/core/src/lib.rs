//! Incidence bialgebras of monoidal complete decomposition spaces.
//!
//! The crate builds finite truncations of decomposition spaces (nerves of
//! categories, hereditary interval families, monotone surjections, finite
//! sets and surjections), assembles their incidence bialgebras over exact
//! rationals, and computes the weak antipode `S = S_even - S_odd`, the
//! Möbius function `ζ∘S` and the connected quotient Hopf algebra. Every
//! identity is checked twice: by explicit span bijections on set-level data
//! and by exact matrix arithmetic after homotopy cardinality.

pub mod error;
pub mod linalg;
pub mod rational;
pub mod bialgebra;
pub mod builders;
pub mod simplicial;
pub mod spans;

pub use error::{Error, Result};
pub use rational::Rational;
