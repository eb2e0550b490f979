//! Exact computer algebra for edge contraction of quivers with potential.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is computed over
//! the rationals with arbitrary precision, or over small prime fields where
//! representations are enumerated.
//!
//! Module map:
//! - [`quiver`]: quivers, dimension and framing vectors, Euler forms.
//! - [`path`]: the path algebra, cyclic words, potentials, cyclic derivatives,
//!   substitution and removal of the trivial (quadratic) part.
//! - [`contraction`]: edge contraction of quivers with potential and of
//!   representations, plus the Higgsing variant.
//! - [`mutation`]: premutation and mutation at a vertex, and the comparison of
//!   `mu_+ mu_- mu_+` (or `mu_- mu_+ mu_-`) with mutation of the contraction.
//! - [`shuffle`]: the shuffle algebra, the contraction map on it and the
//!   spherical subalgebra.
//! - [`hopf`]: action ratios, small-rank coproduct/antipode, residue pairing
//!   and the Drinfeld double cross relation under contraction.
//! - [`scattering`]: quantum torus, walls, path-ordered products, King
//!   stability by enumeration and the stability-space embedding.
//! - [`preprojective`]: triple quivers, cut relations and ADHM elimination.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod contraction;
pub mod error;
pub mod field;
pub mod hopf;
pub mod linalg;
pub mod mutation;
pub mod path;
pub mod poly;
pub mod preprojective;
pub mod quiver;
pub mod scattering;
pub mod shuffle;

pub use error::{Error, ErrorKind, Result};

/// Exact rational scalars used for every coefficient.
pub type Rational = num_rational::BigRational;

/// Small conveniences for building rationals.
pub mod rational {
    use super::Rational;
    use alloc::string::String;
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};

    pub fn int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    pub fn frac(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn zero() -> Rational {
        Rational::zero()
    }

    pub fn one() -> Rational {
        Rational::one()
    }

    /// `p/q` in lowest terms, or `p` when the denominator is one.
    pub fn format(r: &Rational) -> String {
        use alloc::string::ToString;
        if r.is_integer() {
            r.numer().to_string()
        } else {
            alloc::format!("{}/{}", r.numer(), r.denom())
        }
    }

    /// Absolute value with its sign split off: `(negative, |r|)`.
    pub fn split_sign(r: &Rational) -> (bool, Rational) {
        (r.is_negative(), r.abs())
    }
}
