//! Exact coefficient rings.
//!
//! [`Polynomial`] is the workhorse: every component function of a form,
//! vector field or tensor lives here. [`ExpPoly`] adjoins formal
//! exponentials `p * exp(q)` and is only needed for the gluing machinery in
//! [`crate::cover`].

mod exppoly;
mod matrix;
mod parse;
mod poly;
mod rational;

use std::fmt::Debug;

use num_traits::One;

pub use exppoly::ExpPoly;
pub use matrix::PolyMatrix;
pub use parse::parse_rational;
pub use poly::{Monomial, Polynomial};
pub use rational::Rational;

/// Shorthand for an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Shorthand for `num / den`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub(crate) fn sign(odd: bool) -> Rational {
    if odd {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// Commutative coefficient ring with partial derivatives in `nvars` commuting
/// variables.
///
/// The method names avoid the `std::ops` names so that implementors can also
/// provide operator overloads without ambiguity.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero(nvars: usize) -> Self;
    fn from_rational(nvars: usize, r: &Rational) -> Self;
    fn nvars(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, r: &Rational) -> Self;
    /// Partial derivative along `axis` (0-based). Panics when out of range.
    fn partial(&self, axis: usize) -> Self;

    fn one(nvars: usize) -> Self {
        Self::from_rational(nvars, &Rational::one())
    }

    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
}

impl Coeff for Polynomial {
    fn zero(nvars: usize) -> Self {
        Polynomial::zero(nvars)
    }
    fn from_rational(nvars: usize, r: &Rational) -> Self {
        Polynomial::constant(nvars, r.clone())
    }
    fn nvars(&self) -> usize {
        self.nvars()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn partial(&self, axis: usize) -> Self {
        self.derivative(axis)
    }
}

impl Coeff for ExpPoly {
    fn zero(nvars: usize) -> Self {
        ExpPoly::zero(nvars)
    }
    fn from_rational(nvars: usize, r: &Rational) -> Self {
        ExpPoly::from(Polynomial::constant(nvars, r.clone()))
    }
    fn nvars(&self) -> usize {
        self.nvars()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn partial(&self, axis: usize) -> Self {
        self.derivative(axis)
    }
}
