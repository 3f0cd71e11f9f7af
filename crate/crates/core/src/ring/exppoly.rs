use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Polynomial, Rational};
use crate::error::{check_dim, Result};

/// Finite sums `sum_i p_i * exp(q_i)` with polynomial `p_i`, `q_i`.
///
/// Terms with the same exponent `q` are merged and distinct exponents are
/// treated as independent, so equality is syntactic. This is a formal-ring
/// convention, not an analytic statement. Constants inside `q` stay inside
/// `q`: `r * e^s` is the single term `(r, s)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpPoly {
    nvars: usize,
    terms: BTreeMap<Polynomial, Polynomial>,
}

impl ExpPoly {
    pub fn zero(nvars: usize) -> Self {
        ExpPoly { nvars, terms: BTreeMap::new() }
    }

    /// `p * exp(q)`.
    pub fn term(p: Polynomial, q: Polynomial) -> Self {
        assert_eq!(p.nvars(), q.nvars(), "ExpPoly term variable count");
        let mut out = ExpPoly::zero(p.nvars());
        out.add_term(q, p);
        out
    }

    /// `exp(q)`.
    pub fn exp(q: Polynomial) -> Self {
        let n = q.nvars();
        Self::term(Polynomial::one(n), q)
    }

    /// The constant `r * e^s`.
    pub fn exp_constant(nvars: usize, r: Rational, s: Rational) -> Self {
        Self::term(Polynomial::constant(nvars, r), Polynomial::constant(nvars, s))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&Polynomial, &Polynomial)> {
        self.terms.iter()
    }

    /// The plain polynomial, if every exponent is zero.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        match self.terms.len() {
            0 => Some(Polynomial::zero(self.nvars)),
            1 => {
                let (q, p) = self.terms.iter().next().expect("one term");
                q.is_zero().then(|| p.clone())
            }
            _ => None,
        }
    }

    /// `Some((r, s))` when this is the constant `r * e^s` (including `0`).
    pub fn as_exp_constant(&self) -> Option<(Rational, Rational)> {
        use num_traits::Zero;
        match self.terms.len() {
            0 => Some((Rational::zero(), Rational::zero())),
            1 => {
                let (q, p) = self.terms.iter().next().expect("one term");
                (q.is_constant() && p.is_constant()).then(|| (p.constant_term(), q.constant_term()))
            }
            _ => None,
        }
    }

    fn add_term(&mut self, q: Polynomial, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(q) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = ExpPoly::zero(self.nvars);
        for (q, p) in &self.terms {
            out.add_term(q.clone(), p.scale(r));
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        Ok(self * other)
    }

    /// `d/dx_axis (p e^q) = (dp + p dq) e^q`.
    pub fn derivative(&self, axis: usize) -> Self {
        let mut out = ExpPoly::zero(self.nvars);
        for (q, p) in &self.terms {
            let c = &p.derivative(axis) + &(p * &q.derivative(axis));
            out.add_term(q.clone(), c);
        }
        out
    }

    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.nvars {
            return Err(crate::Error::AxisOutOfRange { axis, dim: self.nvars });
        }
        Ok(self.derivative(axis))
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        check_dim(self.nvars, point.len())?;
        let mut acc = 0.0;
        for (q, p) in &self.terms {
            acc += p.eval(point)? * q.eval(point)?.exp();
        }
        Ok(acc)
    }
}

impl From<Polynomial> for ExpPoly {
    fn from(p: Polynomial) -> Self {
        let n = p.nvars();
        ExpPoly::term(p, Polynomial::zero(n))
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (q, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if q.is_zero() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})*exp({q})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpPoly[{}]({})", self.nvars, self)
    }
}

impl<'a> Add<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &'a ExpPoly) -> ExpPoly {
        assert_eq!(self.nvars, rhs.nvars, "ExpPoly variable count mismatch");
        let mut out = self.clone();
        for (q, p) in &rhs.terms {
            out.add_term(q.clone(), p.clone());
        }
        out
    }
}

impl<'a> Sub<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &'a ExpPoly) -> ExpPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ExpPoly> for &'a ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &'a ExpPoly) -> ExpPoly {
        assert_eq!(self.nvars, rhs.nvars, "ExpPoly variable count mismatch");
        let mut out = ExpPoly::zero(self.nvars);
        for (qa, pa) in &self.terms {
            for (qb, pb) in &rhs.terms {
                out.add_term(qa + qb, pa * pb);
            }
        }
        out
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(q, p)| (q.clone(), -p)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, Coeff};

    fn x1() -> Polynomial {
        Polynomial::var(1, 0)
    }

    #[test]
    fn exponents_add_under_multiplication() {
        let a = ExpPoly::term(Polynomial::constant(1, int(2)), x1());
        let b = ExpPoly::term(Polynomial::constant(1, int(3)), -x1());
        let prod = &a * &b;
        assert_eq!(prod, ExpPoly::from(Polynomial::constant(1, int(6))));
        assert_eq!(prod.as_polynomial(), Some(Polynomial::constant(1, int(6))));
        // floating cross-check at a few rational points
        for x in [0.5_f64, -1.25, 3.0] {
            let lhs = a.eval(&[x]).unwrap() * b.eval(&[x]).unwrap();
            assert!((lhs - 6.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chain_rule_for_exponential() {
        let e = ExpPoly::exp(-x1());
        let de = e.derivative(0);
        assert_eq!(de, -&e);
        let h = 1e-6;
        let fd = (e.eval(&[1.0 + h]).unwrap() - e.eval(&[1.0 - h]).unwrap()) / (2.0 * h);
        assert!((fd - de.eval(&[1.0]).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn constants_keep_their_exponent() {
        let c = ExpPoly::exp_constant(2, int(5), int(3));
        assert_eq!(c.as_exp_constant(), Some((int(5), int(3))));
        assert!(c.derivative(1).is_zero());
        assert_eq!(ExpPoly::zero(2).as_exp_constant(), Some((int(0), int(0))));
    }

    #[test]
    fn cancellation_removes_terms() {
        let e = ExpPoly::exp(x1());
        assert!((&e - &e).is_zero());
        assert_eq!(Coeff::plus(&e, &e.negated()), ExpPoly::zero(1));
    }
}
