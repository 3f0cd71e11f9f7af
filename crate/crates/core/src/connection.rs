//! Generalized affine connections, curvature and metrics.
//!
//! A connection is an `n×n` matrix of generalized one-forms
//! `A^μ_ν = α^μ_ν + β^μ_ν m`; a metric is a symmetric matrix of generalized
//! zero-forms `g_{μν} = γ_{μν} + χ_{μν} m`. Matrix products use the
//! generalized wedge product entrywise, `(AB)^μ_ν = A^μ_ρ B^ρ_ν`.
//!
//! Each quantity has a direct path (generalized-form arithmetic) and an
//! expanded path (ordinary forms `α`, `β`, `γ`, `χ`), so the two can be
//! compared exactly.

use std::fmt;

use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::exterior::{OrdinaryForm, VectorField};
use crate::gform::{check_epsilon, GenForm};
use crate::gvector::GenVectorField;
use crate::ring::{frac, int, sign, PolyMatrix, Polynomial, Rational};

/// Square matrix of ordinary forms, `rows[μ][ν]`.
pub type FormRows = Vec<Vec<OrdinaryForm>>;

fn rows_product(nvars: usize, a: &FormRows, b: &FormRows) -> FormRows {
    let n = a.len();
    let deg = a.first().and_then(|r| r.first()).map_or(0, OrdinaryForm::degree)
        + b.first().and_then(|r| r.first()).map_or(0, OrdinaryForm::degree);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = OrdinaryForm::zero(nvars, deg);
                    for k in 0..n {
                        acc = &acc + &a[i][k].wedge(&b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn rows_zip(a: &FormRows, b: &FormRows, f: impl Fn(&OrdinaryForm, &OrdinaryForm) -> OrdinaryForm) -> FormRows {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| f(x, y)).collect()).collect()
}

fn rows_map(a: &FormRows, f: impl Fn(&OrdinaryForm) -> OrdinaryForm) -> FormRows {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

fn rows_is_zero(a: &FormRows) -> bool {
    a.iter().flatten().all(OrdinaryForm::is_zero)
}

/// `P ↦ M P` for a polynomial matrix acting on the upper index.
fn poly_left(m: &PolyMatrix, a: &FormRows) -> FormRows {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = OrdinaryForm::zero(a[0][0].nvars(), a[0][0].degree());
                    for k in 0..n {
                        acc = &acc + &a[k][j].mul_scalar(m.get(i, k));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn transpose_rows(a: &FormRows) -> FormRows {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

/// Square matrix of generalized forms of one common degree.
#[derive(Clone, PartialEq, Eq)]
pub struct FormMatrix {
    nvars: usize,
    degree: i32,
    epsilon: Rational,
    rows: Vec<Vec<GenForm>>,
}

impl FormMatrix {
    pub fn new(rows: Vec<Vec<GenForm>>) -> Result<Self> {
        let first = rows
            .first()
            .and_then(|r| r.first())
            .ok_or_else(|| Error::invalid("matrix must have at least one entry"))?
            .clone();
        for r in &rows {
            check_dim(rows.len(), r.len())?;
            for e in r {
                check_dim(first.nvars(), e.nvars())?;
                check_epsilon(first.epsilon(), e.epsilon())?;
                if e.degree() != first.degree() {
                    return Err(Error::DegreeMismatch { expected: first.degree(), found: e.degree() });
                }
            }
        }
        Ok(FormMatrix { nvars: first.nvars(), degree: first.degree(), epsilon: first.epsilon().clone(), rows })
    }

    pub fn from_fn(size: usize, f: impl FnMut(usize, usize) -> GenForm) -> Result<Self> {
        let mut f = f;
        Self::new((0..size).map(|i| (0..size).map(|j| f(i, j)).collect()).collect())
    }

    pub fn zero(nvars: usize, size: usize, degree: i32, epsilon: &Rational) -> Self {
        Self::from_fn(size, |_, _| GenForm::zero(nvars, degree, epsilon.clone())).expect("uniform entries")
    }

    /// Polynomial matrix as generalized zero-forms.
    pub fn from_polys(m: &PolyMatrix, epsilon: &Rational) -> Self {
        Self::from_fn(m.size(), |i, j| GenForm::scalar(m.get(i, j).clone(), epsilon.clone())).expect("uniform entries")
    }

    /// `body + soul m` entrywise.
    pub fn from_parts(body: &FormRows, soul: &FormRows, epsilon: &Rational) -> Result<Self> {
        check_dim(body.len(), soul.len())?;
        let mut rows = Vec::with_capacity(body.len());
        for (rb, rs) in body.iter().zip(soul) {
            check_dim(rb.len(), rs.len())?;
            rows.push(
                rb.iter().zip(rs).map(|(b, s)| GenForm::new(b.clone(), s.clone(), epsilon.clone())).collect::<Result<Vec<_>>>()?,
            );
        }
        Self::new(rows)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn get(&self, i: usize, j: usize) -> &GenForm {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<GenForm>] {
        &self.rows
    }

    pub fn body(&self) -> FormRows {
        self.rows.iter().map(|r| r.iter().map(|e| e.body().clone()).collect()).collect()
    }

    pub fn soul(&self) -> FormRows {
        self.rows.iter().map(|r| r.iter().map(|e| e.soul().clone()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(GenForm::is_zero)
    }

    fn map(&self, f: impl Fn(&GenForm) -> GenForm) -> Self {
        Self::new(self.rows.iter().map(|r| r.iter().map(&f).collect()).collect()).expect("map keeps uniform degree")
    }

    pub fn d(&self) -> Self {
        self.map(GenForm::d)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|e| e.scale(r))
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        Self::from_fn(n, |i, j| self.rows[j][i].clone()).expect("same entries")
    }

    fn check(&self, other: &Self) -> Result<()> {
        check_dim(self.size(), other.size())?;
        check_dim(self.nvars, other.nvars)?;
        check_epsilon(&self.epsilon, &other.epsilon)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.size();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            rows.push((0..n).map(|j| self.rows[i][j].try_add(&other.rows[i][j])).collect::<Result<Vec<_>>>()?);
        }
        Self::new(rows)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&int(-1)))
    }

    /// Matrix product with the generalized wedge product on entries.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.size();
        Self::from_fn(n, |i, j| {
            let mut acc = GenForm::zero(self.nvars, self.degree + other.degree, self.epsilon.clone());
            for k in 0..n {
                acc = &acc + &self.rows[i][k].wedge(&other.rows[k][j]);
            }
            acc
        })
    }
}

impl fmt::Debug for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormMatrix[n={}, p={}, eps={}]", self.nvars, self.degree, self.epsilon)?;
        for (i, r) in self.rows.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                if !e.is_zero() {
                    writeln!(f, "  ({}, {}): {}", i + 1, j + 1, e)?;
                }
            }
        }
        Ok(())
    }
}

/// Which of the two integrability conditions `𝓕 = -εβ`, `Dβ = 0` fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessCertificate {
    pub flat: bool,
    /// `(μ, ν)` entries (0-based) where `𝓕 + εβ ≠ 0`.
    pub body_failures: Vec<(usize, usize)>,
    /// `(μ, ν)` entries where `Dβ ≠ 0`.
    pub soul_failures: Vec<(usize, usize)>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct GenConnection {
    a: FormMatrix,
}

impl GenConnection {
    pub fn new(a: FormMatrix) -> Result<Self> {
        check_dim(a.size(), a.nvars())?;
        if a.degree() != 1 {
            return Err(Error::DegreeMismatch { expected: 1, found: a.degree() });
        }
        Ok(GenConnection { a })
    }

    /// `A = α + β m` from one-forms `α` and two-forms `β`.
    pub fn from_parts(alpha: &FormRows, beta: &FormRows, epsilon: &Rational) -> Result<Self> {
        Self::new(FormMatrix::from_parts(alpha, beta, epsilon)?)
    }

    pub fn zero(nvars: usize, epsilon: &Rational) -> Self {
        GenConnection { a: FormMatrix::zero(nvars, nvars, 1, epsilon) }
    }

    pub fn matrix(&self) -> &FormMatrix {
        &self.a
    }

    pub fn nvars(&self) -> usize {
        self.a.nvars()
    }

    pub fn epsilon(&self) -> &Rational {
        self.a.epsilon()
    }

    pub fn alpha(&self) -> FormRows {
        self.a.body()
    }

    pub fn beta(&self) -> FormRows {
        self.a.soul()
    }

    /// `F = dA + A A`.
    pub fn curvature(&self) -> FormMatrix {
        self.a.d().try_add(&self.a.try_mul(&self.a).expect("square")).expect("degree two")
    }

    /// Ordinary curvature `𝓕 = dα + α α`.
    pub fn ordinary_curvature(&self) -> FormRows {
        let alpha = self.alpha();
        let n = self.nvars();
        rows_zip(&rows_map(&alpha, OrdinaryForm::d), &rows_product(n, &alpha, &alpha), |x, y| x + y)
    }

    /// `Dβ = dβ + α β - β α`.
    pub fn d_beta(&self) -> FormRows {
        let (alpha, beta) = (self.alpha(), self.beta());
        let n = self.nvars();
        let ab = rows_product(n, &alpha, &beta);
        let ba = rows_product(n, &beta, &alpha);
        rows_zip(&rows_zip(&rows_map(&beta, OrdinaryForm::d), &ab, |x, y| x + y), &ba, |x, y| x - y)
    }

    /// `F = (𝓕 + εβ) + Dβ m`.
    pub fn curvature_expanded(&self) -> FormMatrix {
        let eps = self.epsilon();
        let body = rows_zip(&self.ordinary_curvature(), &self.beta(), |f, b| f + &b.scale(eps));
        FormMatrix::from_parts(&body, &self.d_beta(), eps).expect("consistent degrees")
    }

    /// `A' = G⁻¹ dG + G⁻¹ A G`, with `G⁻¹` supplied and checked.
    pub fn transform(&self, g: &PolyMatrix, g_inv: &PolyMatrix) -> Result<GenConnection> {
        check_dim(self.nvars(), g.size())?;
        g.check_inverse(g_inv)?;
        let eps = self.epsilon();
        let gm = FormMatrix::from_polys(g, eps);
        let gi = FormMatrix::from_polys(g_inv, eps);
        let shifted = gi.try_mul(&gm.d())?.try_add(&gi.try_mul(&self.a)?.try_mul(&gm)?)?;
        GenConnection::new(shifted)
    }

    /// `DP = dP + A P + (-1)^{p+1} P A` for a (1,1)-valued generalized p-form.
    pub fn cov_ext_d(&self, p: &FormMatrix) -> Result<FormMatrix> {
        let s = sign((p.degree() + 1).rem_euclid(2) == 1);
        p.d().try_add(&self.a.try_mul(p)?)?.try_add(&p.try_mul(&self.a)?.scale(&s))
    }

    /// `dF + A F - F A`; zero for every connection.
    pub fn bianchi_residual(&self) -> FormMatrix {
        let f = self.curvature();
        f.d()
            .try_add(&self.a.try_mul(&f).expect("square"))
            .and_then(|x| x.try_sub(&f.try_mul(&self.a).expect("square")))
            .expect("degree three")
    }

    fn check_field(&self, v: &GenVectorField) -> Result<()> {
        check_dim(self.nvars(), v.nvars())?;
        check_epsilon(self.epsilon(), v.epsilon())
    }

    /// `Dv^μ = dv^μ + A^μ_ν v^ν` with generalized zero-form components.
    pub fn cov_deriv(&self, v: &GenVectorField) -> Result<Vec<GenForm>> {
        self.check_field(v)?;
        let n = self.nvars();
        Ok((0..n)
            .map(|mu| {
                let mut acc = v.component(mu).d();
                for nu in 0..n {
                    acc = &acc + &self.a.get(mu, nu).wedge(&v.component(nu));
                }
                acc
            })
            .collect())
    }

    /// `Dv^μ - ε σ^μ + [Dσ^μ + β^μ_ν v^ν] m` with `σ^μ = v^μ_ν dx^ν` and `D`
    /// the ordinary covariant exterior derivative of `α`.
    pub fn cov_deriv_expanded(&self, v: &GenVectorField) -> Result<Vec<GenForm>> {
        self.check_field(v)?;
        let n = self.nvars();
        let (alpha, beta) = (self.alpha(), self.beta());
        let eps = self.epsilon();
        let sigma: Vec<OrdinaryForm> = (0..n).map(|mu| v.vt().row_form(mu)).collect();
        (0..n)
            .map(|mu| {
                let mut body = OrdinaryForm::scalar(v.v().component(mu).clone()).d();
                let mut soul = sigma[mu].d();
                for nu in 0..n {
                    body = &body + &alpha[mu][nu].mul_scalar(v.v().component(nu));
                    soul = &soul + &alpha[mu][nu].wedge(&sigma[nu]);
                    soul = &soul + &beta[mu][nu].mul_scalar(v.v().component(nu));
                }
                body = &body - &sigma[mu].scale(eps);
                GenForm::new(body, soul, eps.clone())
            })
            .collect()
    }

    /// `∇_W V = i_W(Dv^α) ∂_α`.
    pub fn cov_deriv_along(&self, w: &GenVectorField, v: &GenVectorField) -> Result<GenVectorField> {
        let dv = self.cov_deriv(v)?;
        let n = self.nvars();
        let mut comps = Vec::with_capacity(n);
        let mut rows = Vec::with_capacity(n);
        for form in &dv {
            let c = w.try_interior(form)?;
            if c.degree() != 0 {
                return Err(Error::DegreeMismatch { expected: 0, found: c.degree() });
            }
            comps.push(c.body().as_scalar());
            rows.push((0..n).map(|b| c.soul().component(&[b])).collect());
        }
        GenVectorField::new(VectorField::new(comps)?, crate::exterior::Tensor11::new(rows)?, self.epsilon().clone())
    }

    pub fn flatness(&self) -> FlatnessCertificate {
        let f = self.curvature_expanded();
        let n = self.nvars();
        let mut body_failures = Vec::new();
        let mut soul_failures = Vec::new();
        for mu in 0..n {
            for nu in 0..n {
                if !f.get(mu, nu).body().is_zero() {
                    body_failures.push((mu, nu));
                }
                if !f.get(mu, nu).soul().is_zero() {
                    soul_failures.push((mu, nu));
                }
            }
        }
        let flat = body_failures.is_empty() && soul_failures.is_empty();
        debug_assert_eq!(flat, self.curvature().is_zero());
        FlatnessCertificate { flat, body_failures, soul_failures }
    }

    /// Torsion `T^μ = α^μ_ν ∧ dx^ν` of the ordinary part.
    pub fn torsion(&self) -> Vec<OrdinaryForm> {
        torsion(&self.alpha())
    }

    fn check_metric(&self, g: &GenMetric) -> Result<()> {
        check_dim(self.nvars(), g.nvars())?;
        check_epsilon(self.epsilon(), g.epsilon())
    }

    /// `Q_{μν} = dg_{μν} - g_{μλ} A^λ_ν - g_{λν} A^λ_μ`.
    pub fn nonmetricity(&self, g: &GenMetric) -> Result<FormMatrix> {
        self.check_metric(g)?;
        let n = self.nvars();
        let gm = &g.g;
        FormMatrix::from_fn(n, |mu, nu| {
            let mut acc = gm.get(mu, nu).d();
            for l in 0..n {
                acc = &acc - &gm.get(mu, l).wedge(self.a.get(l, nu));
                acc = &acc - &gm.get(l, nu).wedge(self.a.get(l, mu));
            }
            acc
        })
    }

    /// `Q = (q - εχ) + [Dχ - (β_{μν} + β_{νμ})] m` with `β_{μν} = γ_{μλ} β^λ_ν`.
    pub fn nonmetricity_expanded(&self, g: &GenMetric) -> Result<FormMatrix> {
        self.check_metric(g)?;
        let eps = self.epsilon();
        let alpha = self.alpha();
        let chi = g.chi();
        let q = ordinary_nonmetricity(g.gamma(), &alpha);
        let body = rows_zip(&q, &chi, |a, c| a - &c.scale(eps));
        let dchi = cov_d_metric_form(&alpha, &chi);
        let beta_low = poly_left(g.gamma(), &self.beta());
        let n = self.nvars();
        let soul: FormRows = (0..n)
            .map(|mu| (0..n).map(|nu| &(&dchi[mu][nu] - &beta_low[mu][nu]) - &beta_low[nu][mu]).collect())
            .collect();
        FormMatrix::from_parts(&body, &soul, eps)
    }
}

impl fmt::Debug for GenConnection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenConnection {:?}", self.a)
    }
}

/// `T^μ = α^μ_ν ∧ dx^ν`.
pub fn torsion(alpha: &FormRows) -> Vec<OrdinaryForm> {
    let n = alpha.len();
    (0..n)
        .map(|mu| {
            let mut acc = OrdinaryForm::zero(n, 2);
            for nu in 0..n {
                acc = &acc + &alpha[mu][nu].wedge(&OrdinaryForm::dx(n, nu));
            }
            acc
        })
        .collect()
}

/// Ordinary non-metricity `q_{μν} = dγ_{μν} - γ_{μλ} α^λ_ν - γ_{λν} α^λ_μ`.
pub fn ordinary_nonmetricity(gamma: &PolyMatrix, alpha: &FormRows) -> FormRows {
    let n = gamma.size();
    (0..n)
        .map(|mu| {
            (0..n)
                .map(|nu| {
                    let mut acc = OrdinaryForm::scalar(gamma.get(mu, nu).clone()).d();
                    for l in 0..n {
                        acc = &acc - &alpha[l][nu].mul_scalar(gamma.get(mu, l));
                        acc = &acc - &alpha[l][mu].mul_scalar(gamma.get(l, nu));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `Dχ_{μν} = dχ_{μν} - α^λ_μ ∧ χ_{λν} - α^λ_ν ∧ χ_{μλ}` for a (0,2)-valued form.
pub fn cov_d_metric_form(alpha: &FormRows, chi: &FormRows) -> FormRows {
    let n = alpha.len();
    (0..n)
        .map(|mu| {
            (0..n)
                .map(|nu| {
                    let mut acc = chi[mu][nu].d();
                    for l in 0..n {
                        acc = &acc - &alpha[l][mu].wedge(&chi[l][nu]);
                        acc = &acc - &alpha[l][nu].wedge(&chi[mu][l]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Levi-Civita one-forms `α^μ_ν = Γ^μ_{νρ} dx^ρ` of `γ`, with
/// `Γ^μ_{νρ} = ½ γ^{μσ}(∂_ν γ_{σρ} + ∂_ρ γ_{σν} - ∂_σ γ_{νρ})`.
pub fn levi_civita(gamma: &PolyMatrix, gamma_inv: &PolyMatrix) -> Result<FormRows> {
    let n = gamma.size();
    check_dim(n, gamma.nvars())?;
    gamma.check_inverse(gamma_inv)?;
    let half = frac(1, 2);
    Ok((0..n)
        .map(|mu| {
            (0..n)
                .map(|nu| {
                    let comps = (0..n).map(|rho| {
                        let mut c = Polynomial::zero(n);
                        for s in 0..n {
                            let lowered = &(&gamma.get(s, rho).derivative(nu) + &gamma.get(s, nu).derivative(rho))
                                - &gamma.get(nu, rho).derivative(s);
                            c += &(gamma_inv.get(mu, s) * &lowered);
                        }
                        (vec![rho], c.scale(&half))
                    });
                    OrdinaryForm::from_components(n, 1, comps).expect("one-form components")
                })
                .collect()
        })
        .collect())
}

/// One-forms `α^μ_ν = Γ^μ_{νρ} dx^ρ` from Christoffel symbols `gamma[μ][ν][ρ]`.
/// Symmetric `Γ` in `ν, ρ` gives a torsion-free connection.
pub fn connection_forms(christoffel: &[Vec<Vec<Polynomial>>]) -> FormRows {
    let n = christoffel.len();
    (0..n)
        .map(|mu| {
            (0..n)
                .map(|nu| {
                    OrdinaryForm::from_components(n, 1, (0..n).map(|rho| (vec![rho], christoffel[mu][nu][rho].clone())))
                        .expect("one-form components")
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct GenMetric {
    g: FormMatrix,
    gamma: PolyMatrix,
    gamma_inv: PolyMatrix,
}

impl GenMetric {
    /// `g = γ + χ m` with symmetric `γ` (polynomial, with supplied inverse)
    /// and symmetric one-forms `χ`.
    pub fn new(gamma: PolyMatrix, gamma_inv: PolyMatrix, chi: &FormRows, epsilon: &Rational) -> Result<Self> {
        let n = gamma.size();
        check_dim(n, gamma.nvars())?;
        check_dim(n, chi.len())?;
        if !gamma.is_symmetric() {
            return Err(Error::invalid("metric body γ must be symmetric"));
        }
        for mu in 0..n {
            check_dim(n, chi[mu].len())?;
            for nu in 0..n {
                if chi[mu][nu].degree() != 1 {
                    return Err(Error::DegreeMismatch { expected: 1, found: chi[mu][nu].degree() });
                }
                if chi[mu][nu] != chi[nu][mu] {
                    return Err(Error::invalid("metric soul χ must be symmetric"));
                }
            }
        }
        gamma.check_inverse(&gamma_inv)?;
        let body: FormRows = (0..n).map(|i| (0..n).map(|j| OrdinaryForm::scalar(gamma.get(i, j).clone())).collect()).collect();
        let g = FormMatrix::from_parts(&body, chi, epsilon)?;
        Ok(GenMetric { g, gamma, gamma_inv })
    }

    /// As [`GenMetric::new`], computing `γ⁻¹` when `det γ` is a nonzero constant.
    pub fn with_computed_inverse(gamma: PolyMatrix, chi: &FormRows, epsilon: &Rational) -> Result<Self> {
        let inv = gamma.inverse().ok_or_else(|| Error::invalid("γ has no polynomial inverse"))?;
        Self::new(gamma, inv, chi, epsilon)
    }

    /// An ordinary metric `g = γ`.
    pub fn ordinary(gamma: PolyMatrix, epsilon: &Rational) -> Result<Self> {
        let n = gamma.size();
        Self::with_computed_inverse(gamma, &zero_rows(n, 1), epsilon)
    }

    pub fn nvars(&self) -> usize {
        self.g.nvars()
    }

    pub fn epsilon(&self) -> &Rational {
        self.g.epsilon()
    }

    pub fn matrix(&self) -> &FormMatrix {
        &self.g
    }

    pub fn gamma(&self) -> &PolyMatrix {
        &self.gamma
    }

    pub fn gamma_inv(&self) -> &PolyMatrix {
        &self.gamma_inv
    }

    pub fn chi(&self) -> FormRows {
        self.g.soul()
    }

    /// `χ^{μν} = γ^{μρ} γ^{νσ} χ_{ρσ}`.
    pub fn chi_raised(&self) -> FormRows {
        let chi = self.chi();
        poly_left(&self.gamma_inv, &transpose_rows(&poly_left(&self.gamma_inv, &transpose_rows(&chi))))
    }

    /// `g^{μν} = γ^{μν} - χ^{μν} m`.
    pub fn inverse(&self) -> FormMatrix {
        let n = self.nvars();
        let body: FormRows =
            (0..n).map(|i| (0..n).map(|j| OrdinaryForm::scalar(self.gamma_inv.get(i, j).clone())).collect()).collect();
        let soul = rows_map(&self.chi_raised(), |c| c.scale(&int(-1)));
        FormMatrix::from_parts(&body, &soul, self.epsilon()).expect("consistent degrees")
    }
}

impl fmt::Debug for GenMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenMetric {:?}", self.g)
    }
}

/// `γ = Uᵀ U` with `U` unipotent upper bidiagonal, `U_{i,i+1} = x_{i+1}`.
/// `det γ = 1`, so `γ⁻¹` is polynomial. For two variables this is
/// `[[1, x1], [x1, 1 + x1²]]`.
pub fn unimodular_metric(nvars: usize) -> PolyMatrix {
    let u = PolyMatrix::from_fn(nvars, nvars, |i, j| {
        if i == j {
            Polynomial::constant(nvars, int(1))
        } else if j == i + 1 {
            Polynomial::var(nvars, i)
        } else {
            Polynomial::zero(nvars)
        }
    });
    u.transpose().mul(&u).expect("square")
}

pub fn zero_rows(n: usize, degree: i32) -> FormRows {
    vec![vec![OrdinaryForm::zero(n, degree); n]; n]
}

fn check_torsion_free(alpha: &FormRows) -> Result<()> {
    if torsion(alpha).iter().all(OrdinaryForm::is_zero) {
        Ok(())
    } else {
        Err(Error::invalid("ordinary connection α has nonzero torsion"))
    }
}

fn check_antisymmetric(b: &FormRows) -> Result<()> {
    let n = b.len();
    for mu in 0..n {
        for nu in 0..n {
            if b[mu][nu] != -&b[nu][mu] {
                return Err(Error::invalid("β̃ must be antisymmetric in its lowered indices"));
            }
        }
    }
    Ok(())
}

/// The `ε = 0` metric connection `A = α + γ^{μλ}(β̃_{λν} + ½ Dχ_{λν}) m` for
/// a torsion-free `α` with `q = 0` and an antisymmetric two-form `β̃_{λν}`
/// (`None` for the canonical choice `β̃ = 0`). Fails unless `Q = 0`.
pub fn metric_connection_eps0(g: &GenMetric, alpha: &FormRows, beta_antisym: Option<&FormRows>) -> Result<GenConnection> {
    let n = g.nvars();
    if !g.epsilon().is_zero() {
        return Err(Error::invalid("this construction needs ε = 0"));
    }
    check_dim(n, alpha.len())?;
    check_torsion_free(alpha)?;
    if !rows_is_zero(&ordinary_nonmetricity(g.gamma(), alpha)) {
        return Err(Error::invalid("α is not a metric connection for γ"));
    }
    let half_dchi = rows_map(&cov_d_metric_form(alpha, &g.chi()), |f| f.scale(&frac(1, 2)));
    let lowered = match beta_antisym {
        Some(b) => {
            check_antisymmetric(b)?;
            rows_zip(b, &half_dchi, |x, y| x + y)
        }
        None => half_dchi,
    };
    let beta = poly_left(g.gamma_inv(), &lowered);
    let conn = GenConnection::from_parts(alpha, &beta, g.epsilon())?;
    if !conn.nonmetricity(g)?.is_zero() {
        return Err(Error::invalid("constructed connection has nonzero non-metricity"));
    }
    Ok(conn)
}

/// Lowered ordinary curvature `𝓕_{μν} = γ_{μλ} 𝓕^λ_ν`.
pub fn lowered_curvature(gamma: &PolyMatrix, alpha: &FormRows) -> FormRows {
    let n = gamma.size();
    let f = rows_zip(&rows_map(alpha, OrdinaryForm::d), &rows_product(n, alpha, alpha), |x, y| x + y);
    poly_left(gamma, &f)
}

/// The `ε ≠ 0` construction: `g = γ + ε⁻¹ q m` and
/// `A = α + [β̃ - (1/2ε) γ^{μκ}(𝓕_{κν} + 𝓕_{νκ})] m` with `β̃^μ_ν = γ^{μκ} β̃_{κν}`.
/// Fails unless `α` is torsion-free and the result has `Q = 0`.
pub fn metric_connection_eps(
    gamma: &PolyMatrix,
    gamma_inv: &PolyMatrix,
    alpha: &FormRows,
    beta_antisym: Option<&FormRows>,
    epsilon: &Rational,
) -> Result<(GenMetric, GenConnection)> {
    if epsilon.is_zero() {
        return Err(Error::invalid("this construction needs ε ≠ 0"));
    }
    let n = gamma.size();
    check_dim(n, alpha.len())?;
    check_torsion_free(alpha)?;
    let inv_eps = epsilon.recip();
    let chi = rows_map(&ordinary_nonmetricity(gamma, alpha), |q| q.scale(&inv_eps));
    let g = GenMetric::new(gamma.clone(), gamma_inv.clone(), &chi, epsilon)?;
    let fl = lowered_curvature(gamma, alpha);
    let coef = -(&inv_eps * frac(1, 2));
    let mut lowered: FormRows =
        (0..n).map(|k| (0..n).map(|nu| (&fl[k][nu] + &fl[nu][k]).scale(&coef)).collect()).collect();
    if let Some(b) = beta_antisym {
        check_antisymmetric(b)?;
        lowered = rows_zip(b, &lowered, |x, y| x + y);
    }
    let beta = poly_left(gamma_inv, &lowered);
    let conn = GenConnection::from_parts(alpha, &beta, epsilon)?;
    if !conn.nonmetricity(&g)?.is_zero() {
        return Err(Error::invalid("constructed connection has nonzero non-metricity"));
    }
    Ok((g, conn))
}

/// The `ε = 0` curvature formula `F = 𝓕 + ½(𝓕^μ_λ χ^λ_ν - χ^μ_λ 𝓕^λ_ν) m`
/// with `χ^μ_ν = γ^{μλ} χ_{λν}`.
pub fn case_i_curvature_formula(g: &GenMetric, alpha: &FormRows) -> FormMatrix {
    let n = g.nvars();
    let f = rows_zip(&rows_map(alpha, OrdinaryForm::d), &rows_product(n, alpha, alpha), |x, y| x + y);
    let chi_mixed = poly_left(g.gamma_inv(), &g.chi());
    let comm = rows_zip(&rows_product(n, &f, &chi_mixed), &rows_product(n, &chi_mixed, &f), |x, y| x - y);
    let soul = rows_map(&comm, |c| c.scale(&frac(1, 2)));
    FormMatrix::from_parts(&f, &soul, g.epsilon()).expect("consistent degrees")
}

/// The `ε ≠ 0` curvature formula
/// `F = ½(𝓕^μ_ν - 𝓕_ν^μ) - (1/2ε)(q_{νλ} 𝓕^{λμ} + s q^{μλ} 𝓕_{νλ}) m`,
/// where `𝓕_ν^μ = γ^{μκ} 𝓕_{νκ}`, `𝓕^{λμ} = 𝓕^λ_κ γ^{κμ}`,
/// `q^{μλ} = γ^{μa} γ^{λb} q_{ab}` and `s = ±1` selects the sign between the
/// two soul terms.
pub fn case_ii_curvature_formula(g: &GenMetric, alpha: &FormRows, s: i64) -> FormMatrix {
    let n = g.nvars();
    let eps = g.epsilon();
    let gi = g.gamma_inv();
    let f = rows_zip(&rows_map(alpha, OrdinaryForm::d), &rows_product(n, alpha, alpha), |x, y| x + y);
    let fl = poly_left(g.gamma(), &f);
    // 𝓕_ν^{.μ} = γ^{μκ} 𝓕_{νκ}, stored at [μ][ν]
    let f_other = poly_left(gi, &transpose_rows(&fl));
    let body = rows_zip(&f, &f_other, |a, b| (a - b).scale(&frac(1, 2)));
    let q = ordinary_nonmetricity(g.gamma(), alpha);
    let q_up = poly_left(gi, &transpose_rows(&poly_left(gi, &transpose_rows(&q))));
    // 𝓕^{λμ} = 𝓕^λ_κ γ^{κμ}
    let f_up = transpose_rows(&poly_left(&gi.transpose(), &transpose_rows(&f)));
    let coef = -(eps.recip() * frac(1, 2));
    let soul: FormRows = (0..n)
        .map(|mu| {
            (0..n)
                .map(|nu| {
                    let mut acc = OrdinaryForm::zero(n, 3);
                    for l in 0..n {
                        acc = &acc + &q[nu][l].wedge(&f_up[l][mu]);
                        acc = &acc + &q_up[mu][l].wedge(&fl[nu][l]).scale(&int(s));
                    }
                    acc.scale(&coef)
                })
                .collect()
        })
        .collect();
    FormMatrix::from_parts(&body, &soul, eps).expect("consistent degrees")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{epsilon_cycle, RandomSource};

    fn trials(n: usize, count: u64, mut f: impl FnMut(&mut RandomSource, &Rational)) {
        for i in 0..count {
            let eps = crate::random::epsilon_for(i);
            let mut src = RandomSource::new(0xC0FFEE + n as u64, i);
            f(&mut src, &eps);
        }
    }

    /// A random invertible gauge matrix: constant, or unimodular with polynomial entries.
    fn gauge(src: &mut RandomSource, n: usize) -> (PolyMatrix, PolyMatrix) {
        loop {
            let g = if src.coin() {
                let c = src.constant_matrix(n);
                PolyMatrix::from_fn(n, n, |i, j| Polynomial::constant(n, c[i][j].clone()))
            } else {
                unimodular_metric(n)
            };
            if let Some(inv) = g.inverse() {
                return (g, inv);
            }
        }
    }

    #[test]
    fn curvature_paths_agree_and_bianchi_holds() {
        for n in [2, 3] {
            trials(n, 12, |src, eps| {
                let a = src.connection(n, eps);
                assert_eq!(a.curvature(), a.curvature_expanded());
                assert!(a.bianchi_residual().is_zero());
                assert!(a.cov_ext_d(&a.curvature()).unwrap().is_zero());
            });
        }
    }

    #[test]
    fn gauge_transform_conjugates_curvature() {
        for n in [2, 3] {
            trials(n, 8, |src, eps| {
                let a = src.connection(n, eps);
                let (g, gi) = gauge(src, n);
                let a2 = a.transform(&g, &gi).unwrap();
                let gm = FormMatrix::from_polys(&g, eps);
                let gim = FormMatrix::from_polys(&gi, eps);
                let conj = gim.try_mul(&a.curvature()).unwrap().try_mul(&gm).unwrap();
                assert_eq!(a2.curvature(), conj);
            });
        }
        let n = 2;
        let g = unimodular_metric(n);
        assert!(GenConnection::zero(n, &int(1)).transform(&g, &g).is_err());
    }

    #[test]
    fn pure_gauge_and_soul_balanced_connections_are_flat() {
        for n in [2, 3] {
            trials(n, 6, |src, eps| {
                let (g, gi) = gauge(src, n);
                let a = GenConnection::zero(n, eps).transform(&g, &gi).unwrap();
                assert!(a.flatness().flat);
                if !eps.is_zero() {
                    // β = -𝓕/ε satisfies both conditions; Dβ = 0 is the ordinary Bianchi identity.
                    let alpha = src.form_rows(n, 1);
                    let probe = GenConnection::from_parts(&alpha, &zero_rows(n, 2), eps).unwrap();
                    let beta = rows_map(&probe.ordinary_curvature(), |f| f.scale(&-eps.recip()));
                    let flat = GenConnection::from_parts(&alpha, &beta, eps).unwrap();
                    assert!(flat.flatness().flat);
                }
            });
        }
        let x = Polynomial::var(2, 0);
        let alpha = vec![
            vec![OrdinaryForm::dx(2, 1).mul_scalar(&x), OrdinaryForm::zero(2, 1)],
            vec![OrdinaryForm::zero(2, 1), OrdinaryForm::zero(2, 1)],
        ];
        let cert = GenConnection::from_parts(&alpha, &zero_rows(2, 2), &int(0)).unwrap().flatness();
        assert!(!cert.flat);
        assert_eq!(cert.body_failures, vec![(0, 0)]);
        assert!(cert.soul_failures.is_empty());
    }

    #[test]
    fn covariant_derivative_paths_agree() {
        for n in [2, 3] {
            trials(n, 10, |src, eps| {
                let a = src.connection(n, eps);
                let v = src.gen_vector_field(n, eps);
                assert_eq!(a.cov_deriv(&v).unwrap(), a.cov_deriv_expanded(&v).unwrap());
                let w = src.gen_vector_field(n, eps);
                let along = a.cov_deriv_along(&w, &v).unwrap();
                let dv = a.cov_deriv(&v).unwrap();
                for (mu, form) in dv.iter().enumerate() {
                    assert_eq!(along.component(mu), w.interior(form));
                }
            });
        }
    }

    #[test]
    fn metric_inverse_and_nonmetricity_paths() {
        for n in [2, 3] {
            trials(n, 10, |src, eps| {
                let chi = src.symmetric_one_forms(n);
                let g = GenMetric::with_computed_inverse(unimodular_metric(n), &chi, eps).unwrap();
                let prod = g.matrix().try_mul(&g.inverse()).unwrap();
                assert_eq!(prod, FormMatrix::from_polys(&PolyMatrix::identity(n, n), eps));
                let a = src.connection(n, eps);
                assert_eq!(a.nonmetricity(&g).unwrap(), a.nonmetricity_expanded(&g).unwrap());
            });
        }
        let asym = PolyMatrix::from_fn(2, 2, |i, j| Polynomial::constant(2, int((i + 2 * j) as i64)));
        assert!(GenMetric::with_computed_inverse(asym, &zero_rows(2, 1), &int(0)).is_err());
    }

    #[test]
    fn levi_civita_is_torsion_free_and_metric() {
        for n in [2, 3] {
            let gamma = unimodular_metric(n);
            let gi = gamma.inverse().unwrap();
            let alpha = levi_civita(&gamma, &gi).unwrap();
            assert!(rows_is_zero(&ordinary_nonmetricity(&gamma, &alpha)));
            assert!(torsion(&alpha).iter().all(OrdinaryForm::is_zero));
            assert!(!rows_is_zero(&alpha));
        }
        let g2 = unimodular_metric(2);
        assert_eq!(g2.get(1, 1), &Polynomial::parse("1 + x1^2", 2).unwrap());
    }

    #[test]
    fn metric_connection_without_epsilon() {
        for n in [2, 3] {
            let gamma = unimodular_metric(n);
            let gi = gamma.inverse().unwrap();
            let alpha = levi_civita(&gamma, &gi).unwrap();
            trials(n, 6, |src, _| {
                let chi = src.symmetric_one_forms(n);
                let g = GenMetric::new(gamma.clone(), gi.clone(), &chi, &int(0)).unwrap();
                let a = metric_connection_eps0(&g, &alpha, None).unwrap();
                assert_eq!(a.curvature(), case_i_curvature_formula(&g, &alpha));
                let b = src.antisymmetric_two_forms(n);
                let with_b = metric_connection_eps0(&g, &alpha, Some(&b)).unwrap();
                assert!(with_b.nonmetricity(&g).unwrap().is_zero());
            });
        }
        let gamma = unimodular_metric(2);
        let g = GenMetric::ordinary(gamma, &int(0)).unwrap();
        let mut src = RandomSource::new(5, 0);
        assert!(metric_connection_eps0(&g, &src.torsion_free_alpha(2), None).is_err());
        let g1 = GenMetric::ordinary(unimodular_metric(2), &int(1)).unwrap();
        assert!(metric_connection_eps0(&g1, &zero_rows(2, 1), None).is_err());
    }

    #[test]
    fn metric_connection_with_epsilon() {
        for n in [2, 3] {
            let gamma = unimodular_metric(n);
            let gi = gamma.inverse().unwrap();
            let mut plus_failures = 0;
            trials(n, 2, |src, _| {
                for eps in epsilon_cycle().iter().filter(|e| !e.is_zero()) {
                    let alpha = src.torsion_free_alpha(n);
                    let (g, a) = metric_connection_eps(&gamma, &gi, &alpha, None, eps).unwrap();
                    assert!(a.nonmetricity(&g).unwrap().is_zero());
                    let f = a.curvature();
                    assert_eq!(f, case_ii_curvature_formula(&g, &alpha, -1));
                    plus_failures += usize::from(f != case_ii_curvature_formula(&g, &alpha, 1));
                    let b = src.antisymmetric_two_forms(n);
                    let (g2, a2) = metric_connection_eps(&gamma, &gi, &alpha, Some(&b), eps).unwrap();
                    assert!(a2.nonmetricity(&g2).unwrap().is_zero());
                }
            });
            // three-form souls vanish identically in two variables
            assert_eq!(plus_failures > 0, n == 3);
        }
    }

    #[test]
    fn metric_alpha_gives_ordinary_geometry() {
        for n in [2, 3] {
            let gamma = unimodular_metric(n);
            let gi = gamma.inverse().unwrap();
            let alpha = levi_civita(&gamma, &gi).unwrap();
            for eps in [int(1), frac(-1, 2)] {
                let (g, a) = metric_connection_eps(&gamma, &gi, &alpha, None, &eps).unwrap();
                assert!(rows_is_zero(&g.chi()));
                assert!(rows_is_zero(&a.beta()));
                let f = a.curvature();
                assert!(rows_is_zero(&f.soul()));
                assert_eq!(f.body(), a.ordinary_curvature());
            }
        }
    }
}
