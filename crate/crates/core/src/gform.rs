//! Type N=1 generalized forms `a = α + α' m`.
//!
//! `m` is the basis minus one-form: `α m = (-1)^p m α`, `m² = 0` and
//! `dm = ε` for a rational constant `ε` carried on every value. A
//! generalized p-form has a body `α` of degree p and a soul `α'` of degree
//! p+1, with `-1 <= p <= n`; outside that range both parts vanish.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::exterior::{OrdinaryForm, VectorField};
use crate::ring::{sign, Polynomial, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct GenForm {
    degree: i32,
    body: OrdinaryForm,
    soul: OrdinaryForm,
    epsilon: Rational,
}

pub(crate) fn check_epsilon(a: &Rational, b: &Rational) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::EpsilonMismatch { left: a.to_string(), right: b.to_string() })
    }
}

impl GenForm {
    /// Assemble `body + soul m`; the soul must have degree one higher than the
    /// body.
    pub fn new(body: OrdinaryForm, soul: OrdinaryForm, epsilon: Rational) -> Result<Self> {
        check_dim(body.nvars(), soul.nvars())?;
        if soul.degree() != body.degree() + 1 {
            return Err(Error::DegreeMismatch { expected: body.degree() + 1, found: soul.degree() });
        }
        Ok(GenForm { degree: body.degree(), body, soul, epsilon })
    }

    pub fn zero(nvars: usize, degree: i32, epsilon: Rational) -> Self {
        GenForm {
            degree,
            body: OrdinaryForm::zero(nvars, degree),
            soul: OrdinaryForm::zero(nvars, degree + 1),
            epsilon,
        }
    }

    /// The basis minus one-form `m`.
    pub fn m(nvars: usize, epsilon: Rational) -> Self {
        Self::soul_only(OrdinaryForm::scalar(Polynomial::one(nvars)), epsilon)
    }

    /// An ordinary form viewed as a generalized form.
    pub fn ordinary(body: OrdinaryForm, epsilon: Rational) -> Self {
        let soul = OrdinaryForm::zero(body.nvars(), body.degree() + 1);
        GenForm { degree: body.degree(), body, soul, epsilon }
    }

    /// `soul * m`, a generalized form of degree `soul.degree() - 1`.
    pub fn soul_only(soul: OrdinaryForm, epsilon: Rational) -> Self {
        let body = OrdinaryForm::zero(soul.nvars(), soul.degree() - 1);
        GenForm { degree: soul.degree() - 1, body, soul, epsilon }
    }

    pub fn scalar(f: Polynomial, epsilon: Rational) -> Self {
        Self::ordinary(OrdinaryForm::scalar(f), epsilon)
    }

    pub fn constant(nvars: usize, r: &Rational, epsilon: Rational) -> Self {
        Self::scalar(Polynomial::constant(nvars, r.clone()), epsilon)
    }

    pub fn nvars(&self) -> usize {
        self.body.nvars()
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn body(&self) -> &OrdinaryForm {
        &self.body
    }

    pub fn soul(&self) -> &OrdinaryForm {
        &self.soul
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero() && self.soul.is_zero()
    }

    /// Same components, different `dm`.
    pub fn with_epsilon(&self, epsilon: Rational) -> Self {
        GenForm { epsilon, ..self.clone() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GenForm { body: self.body.scale(r), soul: self.soul.scale(r), ..self.clone() }
    }

    pub fn mul_scalar(&self, f: &Polynomial) -> Self {
        GenForm { body: self.body.mul_scalar(f), soul: self.soul.mul_scalar(f), ..self.clone() }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        check_dim(self.nvars(), other.nvars())?;
        check_epsilon(&self.epsilon, &other.epsilon)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(GenForm {
            degree: self.degree,
            body: self.body.try_add(&other.body)?,
            soul: self.soul.try_add(&other.soul)?,
            epsilon: self.epsilon.clone(),
        })
    }

    /// Product `(α + α'm)(β + β'm) = αβ + (αβ' + (-1)^q α'β) m`.
    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let q = other.degree;
        let body = self.body.wedge(&other.body);
        let mixed = self.soul.wedge(&other.body);
        let soul = &self.body.wedge(&other.soul) + &mixed.scale(&sign(q.rem_euclid(2) == 1));
        Ok(GenForm { degree: self.degree + other.degree, body, soul, epsilon: self.epsilon.clone() })
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("product of incompatible generalized forms")
    }

    /// `d(α + α'm) = [dα + (-1)^{p+1} ε α'] + dα' m`.
    pub fn d(&self) -> Self {
        let p = self.degree;
        let mut body = self.body.d();
        if !self.epsilon.is_zero() {
            let shift = self.soul.scale(&(&self.epsilon * sign((p + 1).rem_euclid(2) == 1)));
            body = &body + &shift;
        }
        GenForm { degree: p + 1, body, soul: self.soul.d(), epsilon: self.epsilon.clone() }
    }

    /// Some `b` with `d b = self`, or `None` when `self` is not exact.
    ///
    /// For `ε ≠ 0` every closed form is exact with `b = (-1)^p ε⁻¹ α m`; for
    /// `ε = 0` the radial homotopy is applied to body and soul separately.
    pub fn primitive(&self) -> Option<GenForm> {
        if !self.d().is_zero() {
            return None;
        }
        let p = self.degree;
        let candidate = if self.epsilon.is_zero() {
            GenForm {
                degree: p - 1,
                body: self.body.homotopy(),
                soul: self.soul.homotopy(),
                epsilon: self.epsilon.clone(),
            }
        } else {
            let c = sign(p.rem_euclid(2) == 1) / &self.epsilon;
            Self::soul_only(self.body.scale(&c), self.epsilon.clone())
        };
        (candidate.d() == *self).then_some(candidate)
    }

    /// Pull back along `phi` (target coordinates as polynomials in the source
    /// coordinates). `m` pulls back to `m`.
    pub fn pullback(&self, phi: &[Polynomial]) -> Result<Self> {
        Ok(GenForm {
            degree: self.degree,
            body: self.body.pullback(phi)?,
            soul: self.soul.pullback(phi)?,
            epsilon: self.epsilon.clone(),
        })
    }

    pub fn try_interior(&self, v: &VectorField) -> Result<Self> {
        check_dim(self.nvars(), v.nvars())?;
        Ok(self.interior(v))
    }

    /// `i_v a = i_v α + (i_v α') m` for an ordinary vector field.
    pub fn interior(&self, v: &VectorField) -> Self {
        GenForm {
            degree: self.degree - 1,
            body: self.body.interior(v),
            soul: self.soul.interior(v),
            epsilon: self.epsilon.clone(),
        }
    }

    /// `£_v = i_v d + d i_v`.
    pub fn lie(&self, v: &VectorField) -> Self {
        &self.d().interior(v) + &self.interior(v).d()
    }

    pub fn try_lie(&self, v: &VectorField) -> Result<Self> {
        check_dim(self.nvars(), v.nvars())?;
        Ok(self.lie(v))
    }

    /// Componentwise Lie derivative `£_v α + (£_v α') m`; agrees with
    /// [`GenForm::lie`] for every ordinary `v`.
    pub fn lie_componentwise(&self, v: &VectorField) -> Self {
        GenForm { body: self.body.lie(v), soul: self.soul.lie(v), ..self.clone() }
    }

    /// Componentwise partial derivative of body and soul coefficients.
    pub fn partial_components(&self, axis: usize) -> Self {
        GenForm { body: self.body.partial_components(axis), soul: self.soul.partial_components(axis), ..self.clone() }
    }

    /// Contraction with `∂/∂x^{axis+1}`.
    pub fn interior_coordinate(&self, axis: usize) -> Self {
        GenForm {
            degree: self.degree - 1,
            body: self.body.interior_coordinate(axis),
            soul: self.soul.interior_coordinate(axis),
            epsilon: self.epsilon.clone(),
        }
    }
}

impl Add for &GenForm {
    type Output = GenForm;
    fn add(self, rhs: Self) -> GenForm {
        self.try_add(rhs).expect("sum of incompatible generalized forms")
    }
}

impl Sub for &GenForm {
    type Output = GenForm;
    fn sub(self, rhs: Self) -> GenForm {
        self.try_add(&-rhs).expect("difference of incompatible generalized forms")
    }
}

impl Neg for &GenForm {
    type Output = GenForm;
    fn neg(self) -> GenForm {
        GenForm { body: -&self.body, soul: -&self.soul, ..self.clone() }
    }
}

impl fmt::Display for GenForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + [{}] m", self.body, self.soul)
    }
}

impl fmt::Debug for GenForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenForm[n={}, p={}, eps={}]({})", self.nvars(), self.degree, self.epsilon, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    fn dx(n: usize, k: usize) -> OrdinaryForm {
        OrdinaryForm::dx(n, k)
    }

    fn f0(s: &str, n: usize) -> OrdinaryForm {
        OrdinaryForm::scalar(p(s, n))
    }

    #[test]
    fn m_squares_to_zero() {
        let m = GenForm::m(2, int(1));
        let mm = m.wedge(&m);
        assert!(mm.is_zero());
        assert_eq!(mm.degree(), -2);
    }

    #[test]
    fn one_form_times_m() {
        let a = GenForm::ordinary(dx(2, 0), int(1));
        let prod = a.wedge(&GenForm::m(2, int(1)));
        assert_eq!(prod.degree(), 0);
        assert!(prod.body().is_zero());
        assert_eq!(prod.soul(), &dx(2, 0));
        // m dx^1 = -dx^1 m
        let rev = GenForm::m(2, int(1)).wedge(&a);
        assert_eq!(rev, -&prod);
    }

    #[test]
    fn unit_is_neutral() {
        let a = GenForm::new(f0("x1", 2).wedge(&dx(2, 1)), dx(2, 0).wedge(&dx(2, 1)), int(2)).unwrap();
        let one = GenForm::constant(2, &int(1), int(2));
        assert_eq!(a.wedge(&one), a);
        assert_eq!(one.wedge(&a), a);
    }

    #[test]
    fn dm_is_epsilon() {
        let d = GenForm::m(3, int(5)).d();
        assert_eq!(d, GenForm::constant(3, &int(5), int(5)));
    }

    #[test]
    fn derivative_of_zero_form() {
        let a = GenForm::new(f0("x1", 2), f0("x2", 2).wedge(&dx(2, 0)), int(1)).unwrap();
        let da = a.d();
        assert_eq!(da.body(), &f0("1 - x2", 2).wedge(&dx(2, 0)));
        assert_eq!(da.soul(), &dx(2, 1).wedge(&dx(2, 0)));
        assert!(da.d().is_zero());
    }

    #[test]
    fn pullback_examples() {
        let m = GenForm::m(2, int(1));
        let phi = [p("x1", 1), p("x1^2", 1)];
        assert_eq!(m.pullback(&phi).unwrap(), GenForm::m(1, int(1)));
        let a = GenForm::soul_only(dx(2, 1), int(1));
        let pulled = a.pullback(&phi).unwrap();
        assert_eq!(pulled.soul(), &f0("2*x1", 1).wedge(&dx(1, 0)));
        let id = [p("x1", 2), p("x2", 2)];
        let b = GenForm::new(f0("x1*x2", 2), dx(2, 1), int(0)).unwrap();
        assert_eq!(b.pullback(&id).unwrap(), b);
        assert!(b.pullback(&phi[..1]).is_err());
    }

    #[test]
    fn interior_examples() {
        let v = VectorField::new(vec![p("x2", 2), p("1", 2)]).unwrap();
        assert!(GenForm::m(2, int(1)).interior(&v).is_zero());
        let a = GenForm::new(f0("x2", 2), f0("x1", 2).wedge(&dx(2, 0)), int(1)).unwrap();
        let out = a.interior(&VectorField::coordinate(2, 0));
        assert_eq!(out, GenForm::soul_only(f0("x1", 2), int(1)));
    }

    #[test]
    fn lie_examples() {
        let v = VectorField::new(vec![p("x2", 2), p("x1^2", 2)]).unwrap();
        let m = GenForm::m(2, int(3));
        assert!(m.lie(&v).is_zero());
        let a = GenForm::new(f0("x1", 2), f0("x1", 2).wedge(&dx(2, 1)), int(1)).unwrap();
        let out = a.lie(&VectorField::coordinate(2, 0));
        let expected = GenForm::new(f0("1", 2), dx(2, 1), int(1)).unwrap();
        assert_eq!(out, expected);
        assert_eq!(a.lie(&v), a.lie_componentwise(&v));
    }

    #[test]
    fn mismatches_are_errors() {
        let a = GenForm::m(2, int(1));
        assert!(matches!(a.try_wedge(&GenForm::m(2, int(2))), Err(Error::EpsilonMismatch { .. })));
        assert!(matches!(a.try_wedge(&GenForm::m(3, int(1))), Err(Error::DimensionMismatch { .. })));
        assert!(GenForm::new(dx(2, 0), dx(2, 1), int(1)).is_err());
    }
}
