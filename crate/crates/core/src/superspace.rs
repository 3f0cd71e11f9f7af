//! Generalized forms as functions on superspace.
//!
//! A generalized form becomes a Grassmann polynomial in odd generators
//! `ζ¹..ζⁿ, μ` (in that order) with polynomial coefficients: `dx^α ↦ ζ^α`,
//! `m ↦ μ`. The exterior derivative is the odd vector field
//! `ζ^α ∂_α + ε ∂_μ` and interior products are odd derivatives in `ζ`.
//! Odd derivatives act from the left: `∂/∂g` on a sorted monomial picks up
//! the parity of the generators standing before `g`.
//!
//! Everything here is computed independently of [`crate::gform`] and
//! [`crate::gvector`] so the two representations can check each other.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::exterior::{basis_indices, bits_below, merge_sign, OrdinaryForm, VectorField, MAX_DIM};
use crate::gform::{check_epsilon, GenForm};
use crate::gvector::GenVectorField;
use crate::ring::{Polynomial, Rational};

/// Bitmask over generators; bit `k < n` is `ζ^{k+1}`, bit `n` is `μ`.
pub type SuperMask = u32;

#[derive(Clone, PartialEq, Eq)]
pub struct SuperFunction {
    nvars: usize,
    epsilon: Rational,
    terms: BTreeMap<SuperMask, Polynomial>,
}

impl SuperFunction {
    pub fn zero(nvars: usize, epsilon: Rational) -> Self {
        assert!(nvars < MAX_DIM, "dimension {nvars} exceeds {MAX_DIM}");
        SuperFunction { nvars, epsilon, terms: BTreeMap::new() }
    }

    pub fn monomial(nvars: usize, mask: SuperMask, c: Polynomial, epsilon: Rational) -> Self {
        assert_eq!(c.nvars(), nvars, "coefficient dimension");
        assert!(mask >> (nvars + 1) == 0, "generator outside ζ¹..ζⁿ, μ");
        let mut out = Self::zero(nvars, epsilon);
        out.accumulate(mask, c);
        out
    }

    pub fn scalar(c: Polynomial, epsilon: Rational) -> Self {
        Self::monomial(c.nvars(), 0, c, epsilon)
    }

    /// `ζ^{axis+1}`.
    pub fn zeta(nvars: usize, axis: usize, epsilon: Rational) -> Self {
        Self::monomial(nvars, 1 << axis, Polynomial::one(nvars), epsilon)
    }

    pub fn mu(nvars: usize, epsilon: Rational) -> Self {
        Self::monomial(nvars, 1 << nvars, Polynomial::one(nvars), epsilon)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (SuperMask, &Polynomial)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    fn mu_bit(&self) -> SuperMask {
        1 << self.nvars
    }

    fn empty_like(&self) -> Self {
        SuperFunction { nvars: self.nvars, epsilon: self.epsilon.clone(), terms: BTreeMap::new() }
    }

    fn accumulate(&mut self, mask: SuperMask, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.accumulate(*m, c.scale(r));
        }
        out
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.accumulate(*m, c * f);
        }
        out
    }

    fn check(&self, other: &Self) -> Result<()> {
        check_dim(self.nvars, other.nvars)?;
        check_epsilon(&self.epsilon, &other.epsilon)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, c.clone());
        }
        Ok(out)
    }

    /// Grassmann product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.empty_like();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(odd) = merge_sign(*ma, *mb) {
                    let c = ca * cb;
                    out.accumulate(ma | mb, if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Componentwise `∂/∂x^{axis+1}`.
    pub fn partial_x(&self, axis: usize) -> Self {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            out.accumulate(*m, c.derivative(axis));
        }
        out
    }

    /// Left derivative with respect to generator `gen` (`gen == n` is `μ`).
    pub fn odd_derivative(&self, generator: usize) -> Self {
        assert!(generator <= self.nvars, "generator out of range");
        let bit = 1 << generator;
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            if m & bit != 0 {
                let odd = bits_below(*m, generator) % 2 == 1;
                out.accumulate(m & !bit, if odd { -c } else { c.clone() });
            }
        }
        out
    }

    /// `(ζ^α ∂_α + ε ∂_μ) f`.
    pub fn d(&self) -> Self {
        let mut out = self.empty_like();
        for axis in 0..self.nvars {
            out = &out + &(&Self::zeta(self.nvars, axis, self.epsilon.clone()) * &self.partial_x(axis));
        }
        if !self.epsilon.is_zero() {
            out = &out + &self.odd_derivative(self.nvars).scale(&self.epsilon);
        }
        out
    }

    /// `v^ρ ∂/∂ζ^ρ`.
    pub fn interior_ordinary(&self, v: &VectorField) -> Result<Self> {
        check_dim(self.nvars, v.nvars())?;
        let mut out = self.empty_like();
        for rho in 0..self.nvars {
            out = &out + &self.odd_derivative(rho).mul_poly(v.component(rho));
        }
        Ok(out)
    }

    /// The even coefficient `v^ρ + v^ρ_σ ζ^σ μ`.
    fn field_coefficient(&self, v: &GenVectorField, rho: usize) -> Self {
        let n = self.nvars;
        let mut a = Self::scalar(v.v().component(rho).clone(), self.epsilon.clone());
        for sigma in 0..n {
            a.accumulate((1 << sigma) | self.mu_bit(), v.vt().get(rho, sigma).clone());
        }
        a
    }

    fn check_field(&self, v: &GenVectorField) -> Result<()> {
        check_dim(self.nvars, v.nvars())?;
        check_epsilon(&self.epsilon, v.epsilon())
    }

    /// `(v^ρ + v^ρ_σ ζ^σ μ) ∂/∂ζ^ρ`.
    pub fn interior(&self, v: &GenVectorField) -> Result<Self> {
        self.check_field(v)?;
        let mut out = self.empty_like();
        for rho in 0..self.nvars {
            out = &out + &(&self.field_coefficient(v, rho) * &self.odd_derivative(rho));
        }
        Ok(out)
    }

    /// Supercommutator `d ∘ i_V + i_V ∘ d`.
    pub fn lie(&self, v: &GenVectorField) -> Result<Self> {
        Ok(&self.interior(v)?.d() + &self.d().interior(v)?)
    }

    /// The even vector field
    /// `v^α ∂_α + ∂_β v^α ζ^β ∂_{ζ^α} - ε v^α_β ζ^β ∂_{ζ^α} + v^α_β ζ^β μ ∂_α
    /// + ∂_γ v^α_β ζ^γ ζ^β μ ∂_{ζ^α}` applied term by term.
    pub fn lie_expanded(&self, v: &GenVectorField) -> Result<Self> {
        self.check_field(v)?;
        let n = self.nvars;
        let eps = self.epsilon.clone();
        let z = |k: usize| Self::zeta(n, k, eps.clone());
        let mu = Self::mu(n, eps.clone());
        let mut out = self.empty_like();
        for alpha in 0..n {
            let dx_f = self.partial_x(alpha);
            let dz_f = self.odd_derivative(alpha);
            out = &out + &dx_f.mul_poly(v.v().component(alpha));
            for beta in 0..n {
                let zb = z(beta);
                let vab = v.vt().get(alpha, beta);
                out = &out + &(&zb * &dz_f).mul_poly(&v.v().component(alpha).derivative(beta));
                out = &out - &(&zb * &dz_f).mul_poly(vab).scale(&eps);
                out = &out + &(&(&zb * &mu) * &dx_f).mul_poly(vab);
                for gamma in 0..n {
                    let coeff = vab.derivative(gamma);
                    if !coeff.is_zero() {
                        out = &out + &(&(&(&z(gamma) * &zb) * &mu) * &dz_f).mul_poly(&coeff);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `v^α ∂_α + ∂_β v^α ζ^β ∂_{ζ^α}`, the Lie derivative along an ordinary
    /// vector field.
    pub fn lie_ordinary(&self, v: &VectorField) -> Result<Self> {
        check_dim(self.nvars, v.nvars())?;
        let n = self.nvars;
        let mut out = self.empty_like();
        for alpha in 0..n {
            out = &out + &self.partial_x(alpha).mul_poly(v.component(alpha));
            let dz_f = self.odd_derivative(alpha);
            for beta in 0..n {
                let c = v.component(alpha).derivative(beta);
                if !c.is_zero() {
                    out = &out + &(&Self::zeta(n, beta, self.epsilon.clone()) * &dz_f).mul_poly(&c);
                }
            }
        }
        Ok(out)
    }

    /// Pull back along `phi`; `ζ^a ↦ dφ^a`, `μ ↦ μ`.
    pub fn pullback(&self, phi: &[Polynomial]) -> Result<Self> {
        check_dim(self.nvars, phi.len())?;
        let src = phi.first().map_or(0, Polynomial::nvars);
        let mut images = Vec::with_capacity(self.nvars + 1);
        for f in phi {
            check_dim(src, f.nvars())?;
            let mut img = Self::zero(src, self.epsilon.clone());
            for b in 0..src {
                img.accumulate(1 << b, f.derivative(b));
            }
            images.push(img);
        }
        images.push(Self::mu(src, self.epsilon.clone()));
        let mut out = Self::zero(src, self.epsilon.clone());
        for (m, c) in &self.terms {
            let mut t = Self::scalar(c.substitute(phi)?, self.epsilon.clone());
            for g in basis_indices(*m) {
                t = &t * &images[g];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Generalized degree of each term (`|I|` without `μ`, `|I| - 1` with).
    fn term_degree(&self, mask: SuperMask) -> i32 {
        let ones = mask.count_ones() as i32;
        if mask & self.mu_bit() != 0 {
            ones - 2
        } else {
            ones
        }
    }

    /// The generalized form this function represents. Fails on zero (whose
    /// degree is ambiguous) and on terms of mixed degree.
    pub fn to_form(&self) -> Result<GenForm> {
        let mut degrees = self.terms.keys().map(|m| self.term_degree(*m));
        let first = degrees.next().ok_or(Error::AmbiguousDegree)?;
        if let Some(second) = degrees.find(|d| *d != first) {
            return Err(Error::Inhomogeneous { first, second });
        }
        self.to_form_of_degree(first)
    }

    /// As [`SuperFunction::to_form`] with the degree supplied, so zero maps to
    /// the zero form of that degree.
    pub fn to_form_of_degree(&self, degree: i32) -> Result<GenForm> {
        let mu = self.mu_bit();
        let mut body = Vec::new();
        let mut soul = Vec::new();
        for (m, c) in &self.terms {
            let found = self.term_degree(*m);
            if found != degree {
                return Err(Error::Inhomogeneous { first: degree, second: found });
            }
            if m & mu != 0 {
                soul.push((basis_indices(m & !mu), c.clone()));
            } else {
                body.push((basis_indices(*m), c.clone()));
            }
        }
        let body = OrdinaryForm::from_components(self.nvars, degree, body)?;
        let soul = OrdinaryForm::from_components(self.nvars, degree + 1, soul)?;
        GenForm::new(body, soul, self.epsilon.clone())
    }
}

/// The superspace image of a generalized form: `α + α' m ↦ α(ζ) + α'(ζ) μ`.
pub fn to_super(a: &GenForm) -> SuperFunction {
    let n = a.nvars();
    let mut out = SuperFunction::zero(n, a.epsilon().clone());
    for (idx, c) in a.body().components() {
        out.accumulate(crate::exterior::basis_from_indices(&idx), c.clone());
    }
    for (idx, c) in a.soul().components() {
        out.accumulate(crate::exterior::basis_from_indices(&idx) | (1 << n), c.clone());
    }
    out
}

/// Inverse of [`to_super`]; rejects zero and inhomogeneous input.
pub fn from_super(f: &SuperFunction) -> Result<GenForm> {
    f.to_form()
}

/// Inverse of [`to_super`] for a known degree.
pub fn from_super_of_degree(f: &SuperFunction, degree: i32) -> Result<GenForm> {
    f.to_form_of_degree(degree)
}

impl Add for &SuperFunction {
    type Output = SuperFunction;
    fn add(self, rhs: Self) -> SuperFunction {
        self.try_add(rhs).expect("sum of incompatible superfunctions")
    }
}

impl Sub for &SuperFunction {
    type Output = SuperFunction;
    fn sub(self, rhs: Self) -> SuperFunction {
        self.try_add(&-rhs).expect("difference of incompatible superfunctions")
    }
}

impl Neg for &SuperFunction {
    type Output = SuperFunction;
    fn neg(self) -> SuperFunction {
        SuperFunction {
            nvars: self.nvars,
            epsilon: self.epsilon.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Mul for &SuperFunction {
    type Output = SuperFunction;
    fn mul(self, rhs: Self) -> SuperFunction {
        self.try_mul(rhs).expect("product of incompatible superfunctions")
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *m == 0 {
                write!(f, "({c})")?;
                continue;
            }
            write!(f, "({c}) *")?;
            for g in basis_indices(*m) {
                if g == self.nvars {
                    f.write_str(" mu")?;
                } else {
                    write!(f, " z{}", g + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperFunction[n={}, eps={}]({})", self.nvars, self.epsilon, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Tensor11;
    use crate::ring::int;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    #[test]
    fn dictionary_examples() {
        let e = int(1);
        assert_eq!(to_super(&GenForm::m(3, e.clone())), SuperFunction::mu(3, e.clone()));
        let a = GenForm::ordinary(OrdinaryForm::scalar(p("x1", 2)).wedge(&OrdinaryForm::dx(2, 1)), e.clone());
        let f = to_super(&a);
        assert_eq!(f, SuperFunction::monomial(2, 0b10, p("x1", 2), e.clone()));
        assert_eq!(from_super(&f).unwrap(), a);
        assert_eq!(from_super(&SuperFunction::mu(2, e.clone())).unwrap(), GenForm::m(2, e.clone()));
        let mixed = &SuperFunction::monomial(2, 0b001, p("x2", 2), e.clone())
            + &SuperFunction::monomial(2, 0b111, p("1", 2), e.clone());
        let g = from_super(&mixed).unwrap();
        assert_eq!(g.degree(), 1);
        assert_eq!(g.soul(), &OrdinaryForm::basis(2, &[0, 1]));
    }

    #[test]
    fn inhomogeneous_and_zero_are_rejected() {
        let e = int(0);
        let f = &SuperFunction::scalar(p("1", 2), e.clone()) + &SuperFunction::zeta(2, 0, e.clone());
        assert!(matches!(from_super(&f), Err(Error::Inhomogeneous { .. })));
        assert!(matches!(from_super(&SuperFunction::zero(2, e.clone())), Err(Error::AmbiguousDegree)));
        assert!(from_super_of_degree(&SuperFunction::zero(2, e), 1).unwrap().is_zero());
    }

    #[test]
    fn derivative_examples() {
        let e = int(2);
        assert_eq!(SuperFunction::mu(2, e.clone()).d(), SuperFunction::scalar(p("2", 2), e.clone()));
        assert_eq!(SuperFunction::scalar(p("x1", 2), e.clone()).d(), SuperFunction::zeta(2, 0, e.clone()));
        let f = &SuperFunction::monomial(2, 0b101, p("x1*x2", 2), e.clone())
            + &SuperFunction::monomial(2, 0b011, p("x2^2", 2), e.clone());
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn left_derivative_signs() {
        let e = int(1);
        let f = SuperFunction::monomial(2, 0b011, p("1", 2), e.clone());
        assert_eq!(f.odd_derivative(0), SuperFunction::zeta(2, 1, e.clone()));
        assert_eq!(f.odd_derivative(1), -&SuperFunction::zeta(2, 0, e));
    }

    #[test]
    fn interior_examples() {
        let e = int(1);
        let v = GenVectorField::ordinary(VectorField::coordinate(2, 0), e.clone());
        let f = SuperFunction::monomial(2, 0b011, p("1", 2), e.clone());
        assert_eq!(f.interior(&v).unwrap(), SuperFunction::zeta(2, 1, e.clone()));
        // v^1_2 = 1: i_V ζ¹ = ζ² μ
        let vt = Tensor11::from_fn(2, |r, c| if (r, c) == (0, 1) { p("1", 2) } else { Polynomial::zero(2) });
        let w = GenVectorField::pure(vt, e.clone());
        let out = SuperFunction::zeta(2, 0, e.clone()).interior(&w).unwrap();
        assert_eq!(out, SuperFunction::monomial(2, 0b110, p("1", 2), e.clone()));
        assert!(SuperFunction::scalar(p("1", 2), e).interior(&w).unwrap().is_zero());
    }

    #[test]
    fn lie_examples() {
        let e = int(1);
        let v = GenVectorField::ordinary(VectorField::coordinate(2, 0), e.clone());
        let f = SuperFunction::monomial(2, 0b10, p("x1", 2), e.clone());
        assert_eq!(f.lie(&v).unwrap(), SuperFunction::zeta(2, 1, e.clone()));
        let vt = Tensor11::from_fn(2, |r, c| p(if r == c { "x2" } else { "x1" }, 2));
        let w = GenVectorField::pure(vt, e.clone());
        assert!(SuperFunction::scalar(p("1", 2), e.clone()).lie(&w).unwrap().is_zero());
        let g = &SuperFunction::monomial(2, 0b001, p("x1*x2", 2), e.clone())
            + &SuperFunction::monomial(2, 0b110, p("x1^2", 2), e.clone());
        assert_eq!(g.lie(&w).unwrap(), g.lie_expanded(&w).unwrap());
    }

    #[test]
    fn debug_text() {
        let f = SuperFunction::monomial(3, 0b1101, p("2*x1", 3), int(1));
        assert_eq!(f.to_string(), "(2*x1) * z1 z3 mu");
    }
}
