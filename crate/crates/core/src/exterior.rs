//! Ordinary exterior calculus on a single global chart of R^n.
//!
//! A p-form is stored on the strictly increasing basis `dx^{i1}...dx^{ip}`
//! (`i1 < ... < ip`), each basis element encoded as a bitmask. Components
//! therefore carry no redundant antisymmetric copies and equality is exact.
//! Forms whose degree is negative or exceeds `n` are the zero form.
//!
//! Operator-style methods (`wedge`, `+`, `-`) panic on mismatched dimension
//! the way slice indexing does; `try_*` variants report it as an error.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{check_dim, Error, Result};
use crate::ring::{sign, Coeff, Polynomial, Rational};

/// Bitmask over `dx^1..dx^n`; bit `k` stands for `dx^{k+1}`.
pub type Basis = u32;

pub const MAX_DIM: usize = 24;

pub(crate) fn basis_indices(mask: Basis) -> Vec<usize> {
    (0..32).filter(|k| mask & (1 << k) != 0).collect()
}

pub(crate) fn basis_from_indices(indices: &[usize]) -> Basis {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

/// Number of set bits of `mask` strictly below bit `k`.
pub(crate) fn bits_below(mask: Basis, k: usize) -> u32 {
    (mask & ((1u32 << k) - 1)).count_ones()
}

/// Sign of `dx^a ∧ dx^b` relative to the sorted merge, or `None` when a
/// differential repeats.
pub(crate) fn merge_sign(a: Basis, b: Basis) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        // elements of a sitting above j must hop over it
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(swaps % 2 == 1)
}

/// An ordinary differential form of fixed degree with coefficients in `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct OrdinaryForm<C = Polynomial> {
    nvars: usize,
    degree: i32,
    comps: BTreeMap<Basis, C>,
}

impl<C: Coeff> OrdinaryForm<C> {
    pub fn zero(nvars: usize, degree: i32) -> Self {
        assert!(nvars <= MAX_DIM, "dimension {nvars} exceeds {MAX_DIM}");
        OrdinaryForm { nvars, degree, comps: BTreeMap::new() }
    }

    /// A zero-form (function).
    pub fn scalar(c: C) -> Self {
        let mut f = Self::zero(c.nvars(), 0);
        f.insert(0, c);
        f
    }

    pub fn constant(nvars: usize, r: &Rational) -> Self {
        Self::scalar(C::from_rational(nvars, r))
    }

    /// `dx^{axis+1}`.
    pub fn dx(nvars: usize, axis: usize) -> Self {
        Self::basis(nvars, &[axis])
    }

    /// `dx^{i1} ∧ ... ∧ dx^{ip}` for 0-based indices in any order; repeated
    /// indices give the zero form.
    pub fn basis(nvars: usize, indices: &[usize]) -> Self {
        assert!(indices.iter().all(|&i| i < nvars), "basis index out of range");
        let mut mask: Basis = 0;
        let mut odd = false;
        for &i in indices {
            match merge_sign(mask, 1 << i) {
                None => return Self::zero(nvars, indices.len() as i32),
                Some(s) => {
                    odd ^= s;
                    mask |= 1 << i;
                }
            }
        }
        let mut f = Self::zero(nvars, indices.len() as i32);
        f.insert(mask, C::from_rational(nvars, &sign(odd)));
        f
    }

    /// Build from `(strictly increasing 0-based indices, coefficient)` pairs.
    pub fn from_components(nvars: usize, degree: i32, comps: impl IntoIterator<Item = (Vec<usize>, C)>) -> Result<Self> {
        let mut f = Self::zero(nvars, degree);
        for (idx, c) in comps {
            check_dim(nvars, c.nvars())?;
            if idx.len() as i32 != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: idx.len() as i32 });
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= nvars) {
                return Err(Error::invalid(format!("index tuple {idx:?} must be strictly increasing within 0..{nvars}")));
            }
            let mask = basis_from_indices(&idx);
            let sum = match f.comps.remove(&mask) {
                Some(old) => old.plus(&c),
                None => c,
            };
            f.insert(mask, sum);
        }
        Ok(f)
    }

    fn in_range(&self) -> bool {
        self.degree >= 0 && self.degree as usize <= self.nvars
    }

    fn insert(&mut self, mask: Basis, c: C) {
        if !c.is_zero() && self.in_range() {
            self.comps.insert(mask, c);
        }
    }

    fn accumulate(&mut self, mask: Basis, c: C) {
        if c.is_zero() || !self.in_range() {
            return;
        }
        match self.comps.remove(&mask) {
            Some(old) => {
                let s = old.plus(&c);
                self.insert(mask, s);
            }
            None => {
                self.comps.insert(mask, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Coefficient on `dx^{i1}...dx^{ip}` (0-based, strictly increasing).
    pub fn component(&self, indices: &[usize]) -> C {
        self.comps.get(&basis_from_indices(indices)).cloned().unwrap_or_else(|| C::zero(self.nvars))
    }

    /// Antisymmetric tensor component `ω_{i1...ip}` for indices in any order.
    pub fn tensor_component(&self, indices: &[usize]) -> C {
        let mut mask: Basis = 0;
        let mut odd = false;
        for &i in indices {
            match merge_sign(mask, 1 << i) {
                None => return C::zero(self.nvars),
                Some(s) => {
                    odd ^= s;
                    mask |= 1 << i;
                }
            }
        }
        match self.comps.get(&mask) {
            Some(c) if odd => c.negated(),
            Some(c) => c.clone(),
            None => C::zero(self.nvars),
        }
    }

    pub(crate) fn raw(&self) -> impl Iterator<Item = (Basis, &C)> {
        self.comps.iter().map(|(&m, c)| (m, c))
    }

    /// Nonzero components as `(indices, coefficient)`, in lexicographic order
    /// of the index tuple.
    pub fn components(&self) -> Vec<(Vec<usize>, &C)> {
        let mut out: Vec<_> = self.comps.iter().map(|(&m, c)| (basis_indices(m), c)).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// The coefficient of a zero-form.
    pub fn as_scalar(&self) -> C {
        if self.degree == 0 {
            self.component(&[])
        } else {
            C::zero(self.nvars)
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> OrdinaryForm<D> {
        let mut out = OrdinaryForm::zero(self.nvars, self.degree);
        for (&m, c) in &self.comps {
            out.insert(m, f(c));
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scaled(r))
    }

    /// Multiply every component by a function.
    pub fn mul_scalar(&self, f: &C) -> Self {
        assert_eq!(self.nvars, f.nvars(), "dimension mismatch");
        self.map_coeffs(|c| c.times(f))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        if self.degree != other.degree && !(self.is_zero() && other.is_zero()) {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (&m, c) in &other.comps {
            out.accumulate(m, c.clone());
        }
        Ok(out)
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars, other.nvars)?;
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (&ma, ca) in &self.comps {
            for (&mb, cb) in &other.comps {
                if let Some(odd) = merge_sign(ma, mb) {
                    let c = ca.times(cb);
                    out.accumulate(ma | mb, if odd { c.negated() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior product; degree `p + q`, zero once it exceeds `n`.
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("wedge of forms with different dimensions")
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.nvars, self.degree + 1);
        for (&m, c) in &self.comps {
            for k in 0..self.nvars {
                if m & (1 << k) != 0 {
                    continue;
                }
                let dc = c.partial(k);
                if dc.is_zero() {
                    continue;
                }
                let odd = bits_below(m, k) % 2 == 1;
                out.accumulate(m | (1 << k), if odd { dc.negated() } else { dc });
            }
        }
        out
    }

    /// Componentwise partial derivative (not a tensorial operation).
    pub fn partial_components(&self, axis: usize) -> Self {
        self.map_coeffs(|c| c.partial(axis))
    }

    /// Contraction with the coordinate field `d/dx^{axis+1}`.
    pub fn interior_coordinate(&self, axis: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.degree - 1);
        for (&m, c) in &self.comps {
            if m & (1 << axis) == 0 {
                continue;
            }
            let odd = bits_below(m, axis) % 2 == 1;
            out.accumulate(m & !(1 << axis), if odd { c.negated() } else { c.clone() });
        }
        out
    }

    /// Contraction with a vector field given by its components.
    pub fn interior_with(&self, v: &[C]) -> Self {
        assert_eq!(v.len(), self.nvars, "vector field dimension");
        let mut out = Self::zero(self.nvars, self.degree - 1);
        for (&m, c) in &self.comps {
            for (k, vk) in v.iter().enumerate() {
                if m & (1 << k) == 0 || vk.is_zero() {
                    continue;
                }
                let t = c.times(vk);
                let odd = bits_below(m, k) % 2 == 1;
                out.accumulate(m & !(1 << k), if odd { t.negated() } else { t });
            }
        }
        out
    }
}

impl<C: Coeff> Add for &OrdinaryForm<C> {
    type Output = OrdinaryForm<C>;
    fn add(self, rhs: Self) -> OrdinaryForm<C> {
        self.try_add(rhs).expect("sum of incompatible forms")
    }
}

impl<C: Coeff> Sub for &OrdinaryForm<C> {
    type Output = OrdinaryForm<C>;
    fn sub(self, rhs: Self) -> OrdinaryForm<C> {
        self.try_add(&-rhs).expect("difference of incompatible forms")
    }
}

impl<C: Coeff> Neg for &OrdinaryForm<C> {
    type Output = OrdinaryForm<C>;
    fn neg(self) -> OrdinaryForm<C> {
        self.map_coeffs(|c| c.negated())
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for OrdinaryForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return f.write_str("0");
        }
        for (i, (idx, c)) in self.components().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for k in idx {
                write!(f, " dx{}", k + 1)?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff + fmt::Display> fmt::Debug for OrdinaryForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[n={}, p={}]({})", self.nvars, self.degree, self)
    }
}

impl OrdinaryForm<Polynomial> {
    pub fn try_interior(&self, v: &VectorField) -> Result<Self> {
        check_dim(self.nvars, v.nvars())?;
        Ok(self.interior_with(v.components()))
    }

    /// `i_v`; degree drops by one and every zero-form maps to zero.
    pub fn interior(&self, v: &VectorField) -> Self {
        self.try_interior(v).expect("interior product with mismatched dimension")
    }

    /// `£_v = d i_v + i_v d`.
    pub fn lie(&self, v: &VectorField) -> Self {
        &self.interior(v).d() + &self.d().interior(v)
    }

    pub fn try_lie(&self, v: &VectorField) -> Result<Self> {
        check_dim(self.nvars, v.nvars())?;
        Ok(self.lie(v))
    }

    /// Coordinate formula `v^a ∂_a ρ + (∂_b v^a) dx^b ∧ i_{∂_a} ρ`.
    pub fn lie_coordinate(&self, v: &VectorField) -> Self {
        assert_eq!(self.nvars, v.nvars(), "dimension mismatch");
        let n = self.nvars;
        let mut out = Self::zero(n, self.degree);
        for a in 0..n {
            let va = &v.components()[a];
            if va.is_zero() {
                continue;
            }
            out = &out + &self.partial_components(a).mul_scalar(va);
            let dva = OrdinaryForm::scalar(va.clone()).d();
            out = &out + &dva.wedge(&self.interior_coordinate(a));
        }
        out
    }

    /// Pull back along `phi`: `phi[i]` is the i-th target coordinate written as
    /// a polynomial in the source coordinates.
    pub fn pullback(&self, phi: &[Polynomial]) -> Result<Self> {
        check_dim(self.nvars, phi.len())?;
        let source = phi.first().map(|p| p.nvars()).unwrap_or(0);
        for p in phi {
            check_dim(source, p.nvars())?;
        }
        let dphi: Vec<OrdinaryForm> = phi.iter().map(|p| OrdinaryForm::scalar(p.clone()).d()).collect();
        let mut out = OrdinaryForm::zero(source, self.degree);
        for (m, c) in self.raw() {
            let mut term = OrdinaryForm::scalar(c.substitute(phi)?);
            for k in basis_indices(m) {
                term = term.wedge(&dphi[k]);
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Radial homotopy operator `H` of the Poincaré lemma on R^n (star-shaped
    /// about the origin): `dH + Hd = 1` on forms of positive degree and
    /// `H d f = f - f(0)` on functions.
    pub fn homotopy(&self) -> Self {
        let n = self.nvars;
        let p = self.degree;
        let mut out = Self::zero(n, p - 1);
        if p <= 0 {
            return out;
        }
        for (&m, c) in &self.comps {
            let idx = basis_indices(m);
            for (pos, &k) in idx.iter().enumerate() {
                let mut acc = Polynomial::zero(n);
                for (e, coef) in c.terms() {
                    let deg: u32 = e.iter().sum();
                    let mut e2 = e.clone();
                    e2[k] += 1;
                    let w = coef / Rational::from_integer(deg as i64 + p as i64);
                    acc += &Polynomial::monomial(n, e2, w);
                }
                let odd = pos % 2 == 1;
                out.accumulate(m & !(1 << k), if odd { -acc } else { acc });
            }
        }
        out
    }
}

/// Ordinary vector field `v^a ∂_a`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    comps: Vec<Polynomial>,
}

impl VectorField {
    pub fn new(comps: Vec<Polynomial>) -> Result<Self> {
        let n = comps.len();
        for c in &comps {
            check_dim(n, c.nvars())?;
        }
        Ok(VectorField { comps })
    }

    pub fn zero(nvars: usize) -> Self {
        VectorField { comps: vec![Polynomial::zero(nvars); nvars] }
    }

    /// `∂/∂x^{axis+1}`.
    pub fn coordinate(nvars: usize, axis: usize) -> Self {
        let mut v = Self::zero(nvars);
        v.comps[axis] = Polynomial::one(nvars);
        v
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }

    pub fn component(&self, axis: usize) -> &Polynomial {
        &self.comps[axis]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        VectorField { comps: self.comps.iter().map(|c| c.scale(r)).collect() }
    }

    /// Directional derivative `v(f) = v^a ∂_a f`.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero(self.nvars());
        for (a, va) in self.comps.iter().enumerate() {
            if !va.is_zero() {
                acc += &(va * &f.derivative(a));
            }
        }
        acc
    }

    pub fn try_bracket(&self, w: &VectorField) -> Result<VectorField> {
        check_dim(self.nvars(), w.nvars())?;
        Ok(self.bracket(w))
    }

    /// Lie bracket `[v,w]^c = v(w^c) - w(v^c)`.
    pub fn bracket(&self, w: &VectorField) -> VectorField {
        assert_eq!(self.nvars(), w.nvars(), "dimension mismatch");
        VectorField { comps: (0..self.nvars()).map(|c| &self.apply(&w.comps[c]) - &w.apply(&self.comps[c])).collect() }
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: Self) -> VectorField {
        assert_eq!(self.nvars(), rhs.nvars(), "dimension mismatch");
        VectorField { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: Self) -> VectorField {
        assert_eq!(self.nvars(), rhs.nvars(), "dimension mismatch");
        VectorField { comps: self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect() }
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "VectorField({})", parts.join(", "))
    }
}

/// (1,1)-tensor field `t^r_s ∂_r ⊗ dx^s`, stored as `rows[r][s]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor11 {
    rows: Vec<Vec<Polynomial>>,
}

impl Tensor11 {
    pub fn new(rows: Vec<Vec<Polynomial>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            check_dim(n, r.len())?;
            for c in r {
                check_dim(n, c.nvars())?;
            }
        }
        Ok(Tensor11 { rows })
    }

    pub fn zero(nvars: usize) -> Self {
        Tensor11 { rows: vec![vec![Polynomial::zero(nvars); nvars]; nvars] }
    }

    /// `f * identity`.
    pub fn scalar(nvars: usize, f: &Polynomial) -> Self {
        let mut t = Self::zero(nvars);
        for i in 0..nvars {
            t.rows[i][i] = f.clone();
        }
        t
    }

    pub fn from_fn(nvars: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        Tensor11 { rows: (0..nvars).map(|r| (0..nvars).map(|s| f(r, s)).collect()).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.rows.len()
    }

    /// Component `t^{upper}_{lower}`.
    pub fn get(&self, upper: usize, lower: usize) -> &Polynomial {
        &self.rows[upper][lower]
    }

    pub fn rows(&self) -> &[Vec<Polynomial>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Polynomial::is_zero)
    }

    /// `Some(f)` when the tensor is `f * identity`.
    pub fn as_scalar(&self) -> Option<Polynomial> {
        let n = self.nvars();
        let f = if n == 0 { return Some(Polynomial::zero(0)) } else { self.rows[0][0].clone() };
        (*self == Tensor11::scalar(n, &f)).then_some(f)
    }

    /// The one-form `t^r_s dx^s` for fixed `r`.
    pub fn row_form(&self, upper: usize) -> OrdinaryForm {
        let n = self.nvars();
        OrdinaryForm::from_components(n, 1, (0..n).map(|s| (vec![s], self.rows[upper][s].clone())))
            .expect("row of a valid tensor")
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Tensor11::from_fn(self.nvars(), |a, b| self.rows[a][b].scale(r))
    }
}

impl Add for &Tensor11 {
    type Output = Tensor11;
    fn add(self, rhs: Self) -> Tensor11 {
        Tensor11::from_fn(self.nvars(), |a, b| &self.rows[a][b] + &rhs.rows[a][b])
    }
}

impl fmt::Debug for Tensor11 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")).collect();
        write!(f, "Tensor11[{}]", rows.join("; "))
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
    fn merge_sign_counts_transpositions() {
        assert_eq!(merge_sign(0b001, 0b010), Some(false));
        assert_eq!(merge_sign(0b010, 0b001), Some(true));
        assert_eq!(merge_sign(0b110, 0b001), Some(false));
        assert_eq!(merge_sign(0b101, 0b010), Some(true));
        assert_eq!(merge_sign(0b011, 0b010), None);
    }

    #[test]
    fn wedge_examples() {
        let w = dx(3, 0).wedge(&dx(3, 1));
        assert_eq!(w.component(&[0, 1]), Polynomial::one(3));
        assert!(dx(3, 0).wedge(&dx(3, 0)).is_zero());
        let a = f0("x2", 3).wedge(&dx(3, 0));
        let b = dx(3, 1).wedge(&dx(3, 2));
        let c = a.wedge(&b);
        assert_eq!(c.degree(), 3);
        assert_eq!(c.component(&[0, 1, 2]), p("x2", 3));
        // graded commutativity on a 1-form and a 2-form: no sign
        assert_eq!(b.wedge(&a), c);
    }

    #[test]
    fn basis_reorders_with_sign() {
        let b: OrdinaryForm = OrdinaryForm::basis(3, &[2, 0]);
        assert_eq!(b.component(&[0, 2]), Polynomial::constant(3, int(-1)));
        assert!(OrdinaryForm::<Polynomial>::basis(3, &[1, 1]).is_zero());
    }

    #[test]
    fn degree_above_dimension_is_zero() {
        let top = dx(2, 0).wedge(&dx(2, 1));
        assert!(top.wedge(&dx(2, 0)).is_zero());
        assert!(top.d().is_zero());
        assert_eq!(top.d().degree(), 3);
    }

    #[test]
    fn exterior_derivative_examples() {
        let d = f0("x1*x2", 2).d();
        assert_eq!(d.component(&[0]), p("x2", 2));
        assert_eq!(d.component(&[1]), p("x1", 2));
        let one = f0("x2", 2).wedge(&dx(2, 0));
        assert_eq!(one.d().component(&[0, 1]), p("-1", 2));
        let vol = dx(3, 0).wedge(&dx(3, 1)).wedge(&dx(3, 2));
        assert!(vol.d().is_zero());
    }

    #[test]
    fn interior_examples() {
        let e1 = VectorField::coordinate(2, 0);
        let e2 = VectorField::coordinate(2, 1);
        assert_eq!(dx(2, 0).wedge(&dx(2, 1)).interior(&e1), dx(2, 1));
        assert!(dx(2, 0).interior(&e2).is_zero());
        let v = VectorField::new(vec![p("x2", 3), p("0", 3), p("0", 3)]).unwrap();
        let a = f0("x1", 3).wedge(&dx(3, 0)).wedge(&dx(3, 2));
        assert_eq!(a.interior(&v), f0("x1*x2", 3).wedge(&dx(3, 2)));
        assert!(f0("x1", 3).interior(&v).is_zero());
        assert!(f0("1", 2).try_interior(&VectorField::zero(3)).is_err());
    }

    #[test]
    fn lie_examples() {
        let e1 = VectorField::coordinate(2, 0);
        assert_eq!(f0("x1", 2).wedge(&dx(2, 1)).lie(&e1), dx(2, 1));
        let v = VectorField::new(vec![p("x1", 2), p("0", 2)]).unwrap();
        assert_eq!(dx(2, 0).lie(&v), dx(2, 0));
        let f = f0("x1^2*x2 + x2", 2);
        let w = VectorField::new(vec![p("x2", 2), p("3*x1", 2)]).unwrap();
        assert_eq!(f.lie(&w), f.d().interior(&w));
        assert_eq!(f.lie(&w), f.lie_coordinate(&w));
    }

    #[test]
    fn bracket_examples() {
        let e1 = VectorField::coordinate(2, 0);
        let e2 = VectorField::coordinate(2, 1);
        assert!(e1.bracket(&e2).is_zero());
        let v = VectorField::new(vec![p("0", 2), p("x1", 2)]).unwrap();
        assert_eq!(v.bracket(&e1), VectorField::new(vec![p("0", 2), p("-1", 2)]).unwrap());
        assert!(v.bracket(&v).is_zero());
        assert!(v.try_bracket(&VectorField::zero(3)).is_err());
    }

    #[test]
    fn pullback_along_a_curve() {
        // phi(t) = (t, t^2); phi^*(x2 dx1 + dx2) = t^2 dt + 2t dt
        let a = &f0("x2", 2).wedge(&dx(2, 0)) + &dx(2, 1);
        let out = a.pullback(&[p("x1", 1), p("x1^2", 1)]).unwrap();
        assert_eq!(out.component(&[0]), p("x1^2 + 2*x1", 1));
    }

    #[test]
    fn homotopy_inverts_d_on_closed_forms() {
        let a = &f0("x1^2*x2 + 3*x3", 3).wedge(&dx(3, 0)) + &f0("x2*x3", 3).wedge(&dx(3, 2));
        let h = a.homotopy();
        assert_eq!(&h.d() + &a.d().homotopy(), a);
        let f = f0("x1*x2 + 5", 3);
        assert_eq!(f.d().homotopy(), f0("x1*x2", 3));
    }
}
