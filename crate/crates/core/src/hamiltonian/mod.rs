//! Generalized symplectic forms and Hamiltonian vector fields.
//!
//! Coordinates on ℝ^{2l} are ordered `(q^1..q^l, p_1..p_l)`. A generalized
//! symplectic form is a closed generalized two-form `s = Ω + Υ m` with `Ω`
//! non-degenerate; `V_H` is Hamiltonian for `H = h + k m` when
//! `i_{V_H} s = -dH`.

mod oscillator;

pub use oscillator::{
    closed_form, integrate_field, integrate_hamilton, order_estimate, rk4, OscillatorParams, OscillatorSummary,
    Trajectory,
};


use crate::error::{check_dim, Error, Result};
use crate::exterior::{OrdinaryForm, Tensor11, VectorField};
use crate::gform::{check_epsilon, GenForm};
use crate::gvector::GenVectorField;
use crate::ring::{frac, int, PolyMatrix, Polynomial, Rational};

/// A validated generalized symplectic form together with `Ω^{αβ}`,
/// normalized by `Ω^{αγ} Ω_{βγ} = δ^α_β`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSymplectic {
    s: GenForm,
    omega_inv: PolyMatrix,
}

fn omega_matrix(omega: &OrdinaryForm) -> PolyMatrix {
    PolyMatrix::from_fn(omega.nvars(), omega.nvars(), |a, b| omega.tensor_component(&[a, b]))
}

impl GenSymplectic {
    pub fn validate(s: GenForm, omega_inv: PolyMatrix) -> Result<Self> {
        let n = s.nvars();
        if s.degree() != 2 {
            return Err(Error::DegreeMismatch { expected: 2, found: s.degree() });
        }
        if !n.is_multiple_of(2) {
            return Err(Error::invalid(format!("symplectic forms need even dimension, got {n}")));
        }
        check_dim(n, omega_inv.size())?;
        check_dim(n, omega_inv.nvars())?;
        if !s.d().is_zero() {
            return Err(Error::invalid("generalized two-form is not closed (needs dΩ = εΥ and dΥ = 0)"));
        }
        // Ω^{αγ} Ω_{βγ} = δ^α_β, i.e. Ω^{-1}_conv · Ωᵀ = 1
        let omega_t = omega_matrix(s.body()).transpose();
        if !omega_inv.mul(&omega_t)?.is_identity() {
            return Err(Error::invalid("supplied inverse does not satisfy Ω^{ac} Ω_{bc} = δ^a_b"));
        }
        Ok(GenSymplectic { s, omega_inv })
    }

    /// Validate, computing `Ω^{αβ}` exactly when `det Ω` is a nonzero constant.
    pub fn with_computed_inverse(s: GenForm) -> Result<Self> {
        let inv = omega_matrix(s.body())
            .transpose()
            .inverse()
            .ok_or_else(|| Error::invalid("Ω has no polynomial inverse (determinant must be a nonzero constant)"))?;
        Self::validate(s, inv)
    }

    /// `Ω = Σ dp_a ∧ dq^a` with `Υ = 0`.
    pub fn standard(l: usize, epsilon: Rational) -> Self {
        Self::with_computed_inverse(GenForm::ordinary(standard_omega(l), epsilon)).expect("standard form is symplectic")
    }

    pub fn form(&self) -> &GenForm {
        &self.s
    }

    pub fn omega_inv(&self) -> &PolyMatrix {
        &self.omega_inv
    }

    pub fn nvars(&self) -> usize {
        self.s.nvars()
    }

    pub fn epsilon(&self) -> &Rational {
        self.s.epsilon()
    }

    /// `Ω_{αβ}` as a matrix.
    pub fn omega(&self) -> PolyMatrix {
        omega_matrix(self.s.body())
    }

    fn check_h(&self, h: &GenForm) -> Result<()> {
        check_dim(self.nvars(), h.nvars())?;
        check_epsilon(self.epsilon(), h.epsilon())?;
        if h.degree() != 0 {
            return Err(Error::DegreeMismatch { expected: 0, found: h.degree() });
        }
        Ok(())
    }

    /// `i_V s + dH`; zero exactly when `V` is Hamiltonian for `H`.
    pub fn residual(&self, v: &GenVectorField, h: &GenForm) -> Result<GenForm> {
        self.check_h(h)?;
        v.try_interior(&self.s)?.try_add(&h.d())
    }

    /// Pure fields with `i_W s = 0`.
    pub fn is_kernel_field(&self, w: &GenVectorField) -> bool {
        w.v().is_zero() && w.try_interior(&self.s).is_ok_and(|r| r.is_zero())
    }

    /// The kernel field `W^α_β = S_{βγ} Ω^{αγ}` built from a symmetric `S`.
    /// With `Υ`-free souls this parametrizes every kernel field.
    pub fn kernel_field(&self, sym: &PolyMatrix) -> Result<GenVectorField> {
        let n = self.nvars();
        check_dim(n, sym.size())?;
        if !sym.is_symmetric() {
            return Err(Error::invalid("kernel fields are parametrized by symmetric matrices"));
        }
        let vt = Tensor11::from_fn(n, |a, b| {
            let mut acc = Polynomial::zero(n);
            for g in 0..n {
                acc += &(sym.get(b, g) * self.omega_inv.get(a, g));
            }
            acc
        });
        Ok(GenVectorField::pure(vt, self.epsilon().clone()))
    }

    fn ordinary_part(&self, h: &GenForm) -> VectorField {
        let n = self.nvars();
        let eps = self.epsilon();
        let hb = h.body().as_scalar();
        let k = h.soul();
        let target: Vec<Polynomial> = (0..n).map(|b| &k.component(&[b]).scale(eps) - &hb.derivative(b)).collect();
        VectorField::new(
            (0..n)
                .map(|a| {
                    let mut acc = Polynomial::zero(n);
                    for (b, t) in target.iter().enumerate() {
                        acc += &(self.omega_inv.get(a, b) * t);
                    }
                    acc
                })
                .collect(),
        )
        .expect("square field")
    }

    /// Component formulas `v^α = Ω^{αβ}(ε k_β - h_{,β})` and
    /// `v^α_β = Ω^{γα}(k_{[β,γ]} - ½ v^μ Υ_{μβγ})`, where
    /// `k_{[β,γ]} = ½(∂_γ k_β - ∂_β k_γ)`.
    pub fn hamiltonian_vf_components(&self, h: &GenForm) -> Result<GenVectorField> {
        self.check_h(h)?;
        let n = self.nvars();
        let v = self.ordinary_part(h);
        let k = h.soul();
        let upsilon = self.s.soul();
        let half = frac(1, 2);
        let skew = |b: usize, g: usize| {
            (&k.component(&[b]).derivative(g) - &k.component(&[g]).derivative(b)).scale(&half)
        };
        let vt = Tensor11::from_fn(n, |a, b| {
            let mut acc = Polynomial::zero(n);
            for g in 0..n {
                let mut inner = skew(b, g);
                for mu in 0..n {
                    let u = upsilon.tensor_component(&[mu, b, g]);
                    if !u.is_zero() {
                        inner -= &(v.component(mu) * &u).scale(&half);
                    }
                }
                acc += &(self.omega_inv.get(g, a) * &inner);
            }
            acc
        });
        GenVectorField::new(v, vt, self.epsilon().clone())
    }

    /// The same solution obtained at the level of forms: the soul equation
    /// `γ(Ω) = -dk - i_v Υ` is solved with an antisymmetric `v^α_β Ω_{αγ}`.
    pub fn hamiltonian_vf_forms(&self, h: &GenForm) -> Result<GenVectorField> {
        self.check_h(h)?;
        let n = self.nvars();
        let v = self.ordinary_part(h);
        let target = &(-&h.d()).soul().clone() - &self.s.soul().interior(&v);
        let half = frac(-1, 2);
        let vt = Tensor11::from_fn(n, |a, b| {
            let mut acc = Polynomial::zero(n);
            for g in 0..n {
                acc += &(&target.tensor_component(&[b, g]) * self.omega_inv.get(a, g)).scale(&half);
            }
            acc
        });
        GenVectorField::new(v, vt, self.epsilon().clone())
    }

    /// `V_H` with zero kernel component. The defining relation is re-checked;
    /// if the component formulas leave a residual the form-level solution is
    /// used instead.
    pub fn hamiltonian_vf(&self, h: &GenForm) -> Result<GenVectorField> {
        let v = self.hamiltonian_vf_components(h)?;
        if self.residual(&v, h)?.is_zero() {
            return Ok(v);
        }
        let v = self.hamiltonian_vf_forms(h)?;
        if self.residual(&v, h)?.is_zero() {
            return Ok(v);
        }
        Err(Error::invalid("no Hamiltonian vector field satisfies i_V s = -dH"))
    }

    /// For Hamiltonian `V`, `W`: a generalized zero-form `K` with
    /// `i_{[V,W]} s = -dK`, or an error when `i_{[V,W]} s` is not exact.
    pub fn bracket_hamiltonian(&self, v: &GenVectorField, w: &GenVectorField) -> Result<GenForm> {
        let contracted = v.try_bracket(w)?.try_interior(&self.s)?;
        let k = contracted.primitive().ok_or_else(|| Error::invalid("i_[V,W] s is not exact"))?;
        Ok(-&k)
    }

    /// The simplified case `s = Ω`, `v^α_β = δ^α_β v0`. Checks `dk = 2 v0 Ω`
    /// (and `v0` constant when `n > 2`), then returns `V_H`, which must be the
    /// embedded field with that `v0`.
    pub fn simplified_case(&self, h: &GenForm, v0: &Polynomial) -> Result<GenVectorField> {
        self.check_h(h)?;
        let n = self.nvars();
        if !self.s.soul().is_zero() {
            return Err(Error::invalid("simplified case needs s = Ω with no soul"));
        }
        if n > 2 && !v0.is_constant() {
            return Err(Error::invalid("v0 must be constant in dimension greater than two"));
        }
        let two_v0_omega = self.s.body().mul_scalar(&v0.scale(&int(2)));
        if h.soul().d() != two_v0_omega {
            return Err(Error::invalid("simplified case requires dk = 2 v0 Ω"));
        }
        let v = self.hamiltonian_vf(h)?;
        if v.vt() != &Tensor11::scalar(n, v0) {
            return Err(Error::invalid("Hamiltonian field is not of the embedded form"));
        }
        Ok(v)
    }
}

/// `Ω = Σ_a dp_a ∧ dq^a` on ℝ^{2l}.
pub fn standard_omega(l: usize) -> OrdinaryForm {
    let n = 2 * l;
    let mut omega = OrdinaryForm::zero(n, 2);
    for a in 0..l {
        omega = &omega + &OrdinaryForm::basis(n, &[l + a, a]);
    }
    omega
}

/// `H + d(l m) = (h + ε l) + (k + dl) m`.
pub fn gauge_shift(h: &GenForm, l: &Polynomial) -> Result<GenForm> {
    let lm = GenForm::soul_only(OrdinaryForm::scalar(l.clone()), h.epsilon().clone());
    h.try_add(&lm.d())
}

/// `h = Σ_a ½((q^a)² + p_a²)`.
pub fn oscillator_hamiltonian(l: usize) -> Polynomial {
    let n = 2 * l;
    let mut h = Polynomial::zero(n);
    for i in 0..n {
        h += &Polynomial::var(n, i).pow(2).scale(&frac(1, 2));
    }
    h
}

/// The symplectic-coordinates problem: `s = Σ dp_a dq^a`, `H = h + k m` with
/// `k = 2 v0 p_a dq^a` and constant `v0`.
pub fn symplectic_problem(l: usize, epsilon: &Rational, v0: &Rational, h: &Polynomial) -> (GenSymplectic, GenForm) {
    let n = 2 * l;
    let s = GenSymplectic::standard(l, epsilon.clone());
    let mut k = OrdinaryForm::zero(n, 1);
    for a in 0..l {
        let pa = Polynomial::var(n, l + a).scale(&(int(2) * v0));
        k = &k + &OrdinaryForm::dx(n, a).mul_scalar(&pa);
    }
    let hh = GenForm::new(OrdinaryForm::scalar(h.clone()), k, epsilon.clone()).expect("zero-form");
    (s, hh)
}

/// The closed form of `V_H` for [`symplectic_problem`]:
/// `∂h/∂p_a ∂_{q^a} - (∂h/∂q^a - 2ε v0 p_a) ∂_{p_a} - m v0 (dq^a ∂_{q^a} + dp_a ∂_{p_a})`.
pub fn symplectic_field(l: usize, epsilon: &Rational, v0: &Rational, h: &Polynomial) -> GenVectorField {
    let n = 2 * l;
    let c = int(2) * epsilon * v0;
    let mut comps = vec![Polynomial::zero(n); n];
    for a in 0..l {
        comps[a] = h.derivative(l + a);
        comps[l + a] = &Polynomial::var(n, l + a).scale(&c) - &h.derivative(a);
    }
    let v = VectorField::new(comps).expect("square field");
    // -m v0 dx = +v0 dx m for a one-form
    let vt = Tensor11::scalar(n, &Polynomial::constant(n, v0.clone()));
    GenVectorField::new(v, vt, epsilon.clone()).expect("consistent dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, n).unwrap()
    }

    #[test]
    fn standard_form_is_valid() {
        for eps in [int(0), int(1)] {
            let s = GenSymplectic::standard(1, eps);
            assert_eq!(s.omega().get(0, 1), &p("-1", 2));
            assert_eq!(s.omega_inv().get(0, 1), &p("-1", 2));
        }
    }

    #[test]
    fn bad_soul_is_rejected() {
        let omega = standard_omega(2);
        let upsilon = OrdinaryForm::basis(4, &[0, 1, 2]);
        let s = GenForm::new(omega, upsilon, int(1)).unwrap();
        assert!(GenSymplectic::with_computed_inverse(s).is_err());
        let odd = GenForm::ordinary(OrdinaryForm::basis(3, &[0, 1]), int(0));
        assert!(GenSymplectic::with_computed_inverse(odd).is_err());
    }

    #[test]
    fn classical_oscillator_field() {
        let s = GenSymplectic::standard(1, int(0));
        let h = GenForm::scalar(oscillator_hamiltonian(1), int(0));
        let v = s.hamiltonian_vf(&h).unwrap();
        assert_eq!(v.v(), &VectorField::new(vec![p("x2", 2), p("-x1", 2)]).unwrap());
        assert!(v.vt().is_zero());
        let c = GenForm::constant(2, &int(3), int(0));
        assert!(s.hamiltonian_vf(&c).unwrap().is_zero());
    }

    #[test]
    fn kernel_fields() {
        let s = GenSymplectic::standard(1, int(1));
        assert!(s.is_kernel_field(&GenVectorField::zero(2, int(1))));
        assert!(!s.is_kernel_field(&GenVectorField::ordinary(VectorField::coordinate(2, 0), int(1))));
        let sym = PolyMatrix::new(2, vec![vec![p("x1", 2), p("1", 2)], vec![p("1", 2), p("0", 2)]]).unwrap();
        let w = s.kernel_field(&sym).unwrap();
        assert!(!w.is_zero());
        assert!(s.is_kernel_field(&w));
        let diag = Tensor11::from_fn(2, |r, c| match (r, c) {
            (0, 0) => p("1", 2),
            (1, 1) => p("-1", 2),
            _ => Polynomial::zero(2),
        });
        assert!(s.is_kernel_field(&GenVectorField::pure(diag, int(1))));
    }

    #[test]
    fn symplectic_coordinates_demo() {
        for (eps, v0) in [(int(1), frac(1, 2)), (int(-2), int(1)), (int(0), int(3))] {
            let h = oscillator_hamiltonian(2);
            let (s, hh) = symplectic_problem(2, &eps, &v0, &h);
            let v = s.simplified_case(&hh, &Polynomial::constant(4, v0.clone())).unwrap();
            assert_eq!(v, symplectic_field(2, &eps, &v0, &h));
        }
    }

    #[test]
    fn simplified_case_preconditions() {
        let (s, hh) = symplectic_problem(2, &int(1), &int(1), &oscillator_hamiltonian(2));
        assert!(s.simplified_case(&hh, &Polynomial::constant(4, int(2))).is_err());
        assert!(s.simplified_case(&hh, &p("x1", 4)).is_err());
    }

    #[test]
    fn gauge_shift_components() {
        let eps = int(2);
        let h = GenForm::new(OrdinaryForm::scalar(p("x1*x2", 2)), OrdinaryForm::dx(2, 0), eps.clone()).unwrap();
        let l = p("x2^2", 2);
        let shifted = gauge_shift(&h, &l).unwrap();
        assert_eq!(shifted.body().as_scalar(), p("x1*x2 + 2*x2^2", 2));
        assert_eq!(shifted.soul(), &(h.soul() + &OrdinaryForm::scalar(l).d()));
        let s = GenSymplectic::standard(1, eps);
        let v = s.hamiltonian_vf(&h).unwrap();
        assert!(s.residual(&v, &shifted).unwrap().is_zero());
    }
}
