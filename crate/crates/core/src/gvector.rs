//! Generalized form-valued vector fields `V = (v^ρ + v^ρ_σ dx^σ m) ∂_ρ`.
//!
//! A field is an ordinary vector field `v` plus a (1,1)-tensor `vt`; the
//! pure part `V₁` has `v = 0`. Every operator is available through its
//! definition and through at least one closed-form expansion so the two can
//! be compared.

use std::fmt;
use std::ops::{Add, Sub};

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::exterior::{OrdinaryForm, Tensor11, VectorField};
use crate::gform::{check_epsilon, GenForm};
use crate::ring::{frac, int, sign, Polynomial, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct GenVectorField {
    epsilon: Rational,
    v: VectorField,
    vt: Tensor11,
}

impl GenVectorField {
    pub fn new(v: VectorField, vt: Tensor11, epsilon: Rational) -> Result<Self> {
        check_dim(v.nvars(), vt.nvars())?;
        Ok(GenVectorField { epsilon, v, vt })
    }

    pub fn zero(nvars: usize, epsilon: Rational) -> Self {
        GenVectorField { epsilon, v: VectorField::zero(nvars), vt: Tensor11::zero(nvars) }
    }

    pub fn ordinary(v: VectorField, epsilon: Rational) -> Self {
        let n = v.nvars();
        GenVectorField { epsilon, v, vt: Tensor11::zero(n) }
    }

    pub fn pure(vt: Tensor11, epsilon: Rational) -> Self {
        let n = vt.nvars();
        GenVectorField { epsilon, v: VectorField::zero(n), vt }
    }

    /// The generalized vector field `(v, v0)` with `v^α_β = δ^α_β v0`.
    pub fn embed(v: VectorField, v0: &Polynomial, epsilon: Rational) -> Result<Self> {
        check_dim(v.nvars(), v0.nvars())?;
        let vt = Tensor11::scalar(v.nvars(), v0);
        Ok(GenVectorField { epsilon, v, vt })
    }

    /// `v + (i_v Ξ^α) m ∂_α` for an ordinary vector-valued two-form `Ξ`.
    pub fn from_two_form(v: VectorField, xi: &[OrdinaryForm], epsilon: Rational) -> Result<Self> {
        let n = v.nvars();
        check_dim(n, xi.len())?;
        let mut rows = Vec::with_capacity(n);
        for x in xi {
            check_dim(n, x.nvars())?;
            if x.degree() != 2 {
                return Err(Error::DegreeMismatch { expected: 2, found: x.degree() });
            }
            let contracted = x.interior(&v);
            rows.push((0..n).map(|b| contracted.component(&[b])).collect());
        }
        Ok(GenVectorField { epsilon, v, vt: Tensor11::new(rows)? })
    }

    pub fn nvars(&self) -> usize {
        self.v.nvars()
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn v(&self) -> &VectorField {
        &self.v
    }

    pub fn vt(&self) -> &Tensor11 {
        &self.vt
    }

    pub fn is_ordinary(&self) -> bool {
        self.vt.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero() && self.vt.is_zero()
    }

    pub fn ordinary_part(&self) -> Self {
        Self::ordinary(self.v.clone(), self.epsilon.clone())
    }

    pub fn pure_part(&self) -> Self {
        Self::pure(self.vt.clone(), self.epsilon.clone())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GenVectorField { epsilon: self.epsilon.clone(), v: self.v.scale(r), vt: self.vt.scale(r) }
    }

    /// The generalized zero-form `v^ρ + (v^ρ_σ dx^σ) m`.
    pub fn component(&self, rho: usize) -> GenForm {
        GenForm::new(
            OrdinaryForm::scalar(self.v.component(rho).clone()),
            self.vt.row_form(rho),
            self.epsilon.clone(),
        )
        .expect("component degrees are consistent")
    }

    fn check_form(&self, a: &GenForm) -> Result<()> {
        check_dim(self.nvars(), a.nvars())?;
        check_epsilon(&self.epsilon, a.epsilon())
    }

    fn check_field(&self, w: &GenVectorField) -> Result<()> {
        check_dim(self.nvars(), w.nvars())?;
        check_epsilon(&self.epsilon, &w.epsilon)
    }

    pub fn try_interior(&self, a: &GenForm) -> Result<GenForm> {
        self.check_form(a)?;
        Ok(self.interior(a))
    }

    /// `i_V r = v^ρ i_{∂ρ} r` with generalized zero-form components.
    pub fn interior(&self, a: &GenForm) -> GenForm {
        let mut acc = GenForm::zero(a.nvars(), a.degree() - 1, a.epsilon().clone());
        for rho in 0..self.nvars() {
            let part = a.interior_coordinate(rho);
            if !part.is_zero() {
                acc = &acc + &self.component(rho).wedge(&part);
            }
        }
        acc
    }

    /// `γ = (-1)^{p-1} v^α_β dx^β ∧ i_α ρ` for an ordinary p-form `ρ`.
    pub fn gamma(&self, rho: &OrdinaryForm) -> OrdinaryForm {
        let p = rho.degree();
        let mut acc = OrdinaryForm::zero(rho.nvars(), p);
        for alpha in 0..self.nvars() {
            acc = &acc + &self.vt.row_form(alpha).wedge(&rho.interior_coordinate(alpha));
        }
        acc.scale(&sign((p - 1).rem_euclid(2) == 1))
    }

    /// `i_v ρ + (i_v σ + γ) m`, computed on body and soul directly.
    pub fn interior_expanded(&self, a: &GenForm) -> GenForm {
        let body = a.body().interior(&self.v);
        let soul = &a.soul().interior(&self.v) + &self.gamma(a.body());
        GenForm::new(body, soul, a.epsilon().clone()).expect("interior degrees")
    }

    pub fn try_lie(&self, a: &GenForm) -> Result<GenForm> {
        self.check_form(a)?;
        Ok(self.lie(a))
    }

    /// `£_V = d ∘ i_V + i_V ∘ d`.
    pub fn lie(&self, a: &GenForm) -> GenForm {
        &self.interior(a).d() + &self.interior(&a.d())
    }

    /// `(v^α ∂_α + d(v^α) i_α) r` with generalized components `v^α`.
    pub fn lie_components(&self, a: &GenForm) -> GenForm {
        let mut acc = GenForm::zero(a.nvars(), a.degree(), a.epsilon().clone());
        for alpha in 0..self.nvars() {
            let c = self.component(alpha);
            acc = &acc + &c.wedge(&a.partial_components(alpha));
            acc = &acc + &c.d().wedge(&a.interior_coordinate(alpha));
        }
        acc
    }

    /// Closed form of `£_V (ρ + σ m)` for every degree:
    ///
    /// body `£_v ρ - ε v^α_β dx^β i_α ρ`, soul `£_v σ + (-1)^p v^α_β dx^β ∂_α ρ
    /// + (-1)^p dx^β d(v^α_β) i_α ρ - ε v^α_β dx^β i_α σ`.
    pub fn lie_expanded(&self, a: &GenForm) -> GenForm {
        let p = a.degree();
        let (rho, sigma) = (a.body(), a.soul());
        let eps = &self.epsilon;
        let s = sign(p.rem_euclid(2) == 1);
        let mut body = rho.lie(&self.v);
        let mut soul = sigma.lie(&self.v);
        for alpha in 0..self.nvars() {
            let row = self.vt.row_form(alpha);
            if row.is_zero() {
                continue;
            }
            let i_rho = rho.interior_coordinate(alpha);
            body = &body - &row.wedge(&i_rho).scale(eps);
            soul = &soul + &row.wedge(&rho.partial_components(alpha)).scale(&s);
            soul = &soul - &row.d().wedge(&i_rho).scale(&s);
            soul = &soul - &row.wedge(&sigma.interior_coordinate(alpha)).scale(eps);
        }
        GenForm::new(body, soul, a.epsilon().clone()).expect("Lie derivative preserves degree")
    }

    pub fn try_bracket(&self, w: &GenVectorField) -> Result<GenVectorField> {
        self.check_field(w)?;
        Ok(self.bracket(w))
    }

    /// Component formula for `[V, W]`; the ordinary part is `[v, w]`.
    pub fn bracket(&self, w: &GenVectorField) -> GenVectorField {
        let n = self.nvars();
        let eps = &self.epsilon;
        let (v, vt, wv, wt) = (&self.v, &self.vt, &w.v, &w.vt);
        let soul = Tensor11::from_fn(n, |g, a| {
            let mut acc = Polynomial::zero(n);
            for b in 0..n {
                acc += &(v.component(b) * &wt.get(g, a).derivative(b));
                acc -= &(wv.component(b) * &vt.get(g, a).derivative(b));
                acc += &(wt.get(g, b) * &v.component(b).derivative(a));
                acc -= &(vt.get(g, b) * &wv.component(b).derivative(a));
                acc += &(vt.get(b, a) * &wv.component(g).derivative(b));
                acc -= &(wt.get(b, a) * &v.component(g).derivative(b));
                if !eps.is_zero() {
                    acc += &(vt.get(g, b) * wt.get(b, a)).scale(eps);
                    acc -= &(wt.get(g, b) * vt.get(b, a)).scale(eps);
                }
            }
            acc
        });
        GenVectorField { epsilon: eps.clone(), v: v.bracket(wv), vt: soul }
    }
}

impl Add for &GenVectorField {
    type Output = GenVectorField;
    fn add(self, rhs: Self) -> GenVectorField {
        self.check_field(rhs).expect("sum of incompatible vector fields");
        GenVectorField { epsilon: self.epsilon.clone(), v: &self.v + &rhs.v, vt: &self.vt + &rhs.vt }
    }
}

impl Sub for &GenVectorField {
    type Output = GenVectorField;
    fn sub(self, rhs: Self) -> GenVectorField {
        self + &rhs.scale(&int(-1))
    }
}

impl fmt::Debug for GenVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenVectorField[eps={}]({:?}, {:?})", self.epsilon, self.v, self.vt)
    }
}

/// `(i_W ∘ i_V + i_V ∘ i_W) r`, by composition.
pub fn anticommutator(v: &GenVectorField, w: &GenVectorField, a: &GenForm) -> Result<GenForm> {
    v.check_field(w)?;
    v.check_form(a)?;
    Ok(&w.interior(&v.interior(a)) + &v.interior(&w.interior(a)))
}

/// `(-1)^{p-1} [v^α_β w^β + w^α_β v^β] (i_α ρ) m`.
pub fn anticommutator_closed(v: &GenVectorField, w: &GenVectorField, a: &GenForm) -> Result<GenForm> {
    v.check_field(w)?;
    v.check_form(a)?;
    let n = v.nvars();
    let rho = a.body();
    let mut soul = OrdinaryForm::zero(n, rho.degree() - 1);
    for alpha in 0..n {
        let mut c = Polynomial::zero(n);
        for b in 0..n {
            c += &(v.vt.get(alpha, b) * w.v.component(b));
            c += &(w.vt.get(alpha, b) * v.v.component(b));
        }
        if !c.is_zero() {
            soul = &soul + &rho.interior_coordinate(alpha).mul_scalar(&c);
        }
    }
    let soul = soul.scale(&sign((a.degree() - 1).rem_euclid(2) == 1));
    Ok(GenForm::soul_only(soul, a.epsilon().clone()))
}

/// The ε-independent part `d₀` of the exterior derivative.
pub fn d0(a: &GenForm) -> GenForm {
    a.with_epsilon(Rational::zero()).d().with_epsilon(a.epsilon().clone())
}

/// `d₁(α + α'm) = (-1)^{p+1} α'`, so that `d₁ m = 1` and `d₁ α = 0`.
pub fn d1(a: &GenForm) -> GenForm {
    let body = a.soul().scale(&sign((a.degree() + 1).rem_euclid(2) == 1));
    GenForm::ordinary(body, a.epsilon().clone())
}

/// `(d₀ a, d₁ a)` with `d a = d₀ a + ε d₁ a`.
pub fn d_split(a: &GenForm) -> (GenForm, GenForm) {
    (d0(a), d1(a))
}

/// `£_V r - (d₀ ∘ i_{V₁} + i_{V₁} ∘ d₀) r` for `V` with `v^α_β = δ^α_β v0`.
pub fn modified_lie(v: &GenVectorField, a: &GenForm) -> Result<GenForm> {
    v.check_form(a)?;
    if v.vt.as_scalar().is_none() {
        return Err(Error::invalid("modified Lie derivative needs v^a_b = delta^a_b v0"));
    }
    let pure = v.pure_part();
    let cartan = &d0(&pure.interior(a)) + &pure.interior(&d0(a));
    Ok(&v.lie(a) - &cartan)
}

/// Left multiplication by `i`, `j`, `k` on the quaternions in the basis
/// `(1, i, j, k)`.
pub fn left_quaternion_matrices() -> [[[i64; 4]; 4]; 3] {
    [
        [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
        [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
        [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    ]
}

/// Totally antisymmetric symbol on `{0, 1, 2}`.
pub fn levi_civita3(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

fn mat_mul(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut out = [[0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

/// `J_i J_j = ε_{ijk} J_k` for `i ≠ j` and `J_i² = -1`.
pub fn quaternion_relations_hold(j: &[[[i64; 4]; 4]; 3]) -> bool {
    (0..3).all(|a| {
        (0..3).all(|b| {
            let prod = mat_mul(&j[a], &j[b]);
            let expected: [[i64; 4]; 4] = if a == b {
                std::array::from_fn(|r| std::array::from_fn(|c| if r == c { -1 } else { 0 }))
            } else {
                std::array::from_fn(|r| {
                    std::array::from_fn(|c| (0..3).map(|k| levi_civita3(a, b, k) * j[k][r][c]).sum())
                })
            };
            prod == expected
        })
    })
}

/// The pure fields `V_i = J_i / (2ε)` on ℝ⁴, or `J_i / 2` when `ε = 0`.
pub fn quaternion_fields(epsilon: &Rational) -> [GenVectorField; 3] {
    let scale = if epsilon.is_zero() { frac(1, 2) } else { (int(2) * epsilon).recip() };
    let mats = left_quaternion_matrices();
    std::array::from_fn(|i| {
        let vt = Tensor11::from_fn(4, |r, c| Polynomial::constant(4, int(mats[i][r][c]) * &scale));
        GenVectorField::pure(vt, epsilon.clone())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    fn f0(s: &str, n: usize) -> OrdinaryForm {
        OrdinaryForm::scalar(p(s, n))
    }

    fn tensor(n: usize, entries: &[(usize, usize, &str)]) -> Tensor11 {
        Tensor11::from_fn(n, |r, c| {
            entries.iter().find(|e| e.0 == r && e.1 == c).map_or(Polynomial::zero(n), |e| p(e.2, n))
        })
    }

    #[test]
    fn interior_of_minus_one_form_vanishes() {
        let v = GenVectorField::new(VectorField::coordinate(2, 0), tensor(2, &[(0, 1, "x1")]), int(1)).unwrap();
        assert!(v.interior(&GenForm::m(2, int(1))).is_zero());
    }

    #[test]
    fn interior_of_zero_form() {
        let v = GenVectorField::ordinary(VectorField::coordinate(2, 0), int(1));
        let a = GenForm::new(f0("x2", 2), f0("x1", 2).wedge(&OrdinaryForm::dx(2, 0)), int(1)).unwrap();
        assert_eq!(v.interior(&a), GenForm::soul_only(f0("x1", 2), int(1)));
    }

    #[test]
    fn interior_of_one_form_by_pure_field() {
        // v^2_1 = 1: i_V dx^1 = 0, i_V dx^2 = dx^1 m
        let v = GenVectorField::pure(tensor(2, &[(1, 0, "1")]), int(1));
        let a = GenForm::ordinary(OrdinaryForm::dx(2, 0), int(1));
        assert!(v.interior(&a).is_zero());
        let b = GenForm::ordinary(OrdinaryForm::dx(2, 1), int(1));
        let out = v.interior(&b);
        assert_eq!(out, GenForm::soul_only(OrdinaryForm::dx(2, 0), int(1)));
        assert_eq!(out, v.interior_expanded(&b));
    }

    #[test]
    fn anticommutator_example() {
        let v = GenVectorField::pure(tensor(1, &[(0, 0, "1")]), int(1));
        let w = GenVectorField::ordinary(VectorField::coordinate(1, 0), int(1));
        let a = GenForm::ordinary(OrdinaryForm::dx(1, 0), int(1));
        let composed = anticommutator(&v, &w, &a).unwrap();
        assert_eq!(composed, GenForm::m(1, int(1)));
        assert_eq!(composed, anticommutator_closed(&v, &w, &a).unwrap());
    }

    #[test]
    fn lie_of_soul_only_form() {
        let v = GenVectorField::new(
            VectorField::new(vec![p("x2", 2), p("1", 2)]).unwrap(),
            tensor(2, &[(0, 1, "x1"), (1, 1, "2")]),
            int(1),
        )
        .unwrap();
        let a = GenForm::soul_only(f0("x1*x2", 2), int(1));
        let expected = GenForm::soul_only(f0("x2^2 + x1", 2), int(1));
        assert_eq!(v.lie(&a), expected);
        assert_eq!(v.lie_expanded(&a), expected);
    }

    #[test]
    fn lie_of_zero_form_by_pure_field() {
        let v = GenVectorField::pure(tensor(2, &[(0, 1, "1")]), int(1));
        let a = GenForm::scalar(p("x1", 2), int(1));
        let expected = GenForm::soul_only(OrdinaryForm::dx(2, 1), int(1));
        assert_eq!(v.lie(&a), expected);
        assert_eq!(v.lie_expanded(&a), expected);
        assert_eq!(v.lie_components(&a), expected);
    }

    #[test]
    fn split_derivative() {
        let m = GenForm::m(2, int(3));
        assert_eq!(d1(&m), GenForm::constant(2, &int(1), int(3)));
        assert!(d1(&GenForm::ordinary(OrdinaryForm::dx(2, 0), int(3))).is_zero());
        let a = GenForm::new(f0("x1*x2", 2), f0("x2", 2).wedge(&OrdinaryForm::dx(2, 0)), int(3)).unwrap();
        let (z, o) = d_split(&a);
        assert_eq!(&z + &o.scale(&int(3)), a.d());
    }

    #[test]
    fn modified_lie_rejects_general_tensor() {
        let v = GenVectorField::pure(tensor(2, &[(0, 1, "1")]), int(1));
        assert!(modified_lie(&v, &GenForm::m(2, int(1))).is_err());
        let w = GenVectorField::embed(VectorField::coordinate(2, 1), &Polynomial::zero(2), int(1)).unwrap();
        let a = GenForm::scalar(p("x2^2", 2), int(1));
        assert_eq!(modified_lie(&w, &a).unwrap(), a.lie(w.v()));
    }

    #[test]
    fn quaternion_algebra() {
        let j = left_quaternion_matrices();
        assert!(quaternion_relations_hold(&j));
        let mut broken = j;
        broken[2][0][3] = 1;
        assert!(!quaternion_relations_hold(&broken));
    }

    #[test]
    fn so3_brackets() {
        for eps in [int(1), int(-2), frac(1, 2)] {
            let v = quaternion_fields(&eps);
            for i in 0..3 {
                for j in 0..3 {
                    let mut expected = GenVectorField::zero(4, eps.clone());
                    for (k, vk) in v.iter().enumerate() {
                        expected = &expected + &vk.scale(&int(levi_civita3(i, j, k)));
                    }
                    assert_eq!(v[i].bracket(&v[j]), expected, "eps={eps} i={i} j={j}");
                }
            }
        }
        let v = quaternion_fields(&int(0));
        assert!(v[0].bracket(&v[1]).is_zero());
    }
}
