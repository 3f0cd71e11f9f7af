//! General exterior derivatives `dm = ϑ - φ m` and their global structure.
//!
//! Requiring `d² m = 0` gives the ideal `dϑ + ϑφ = 0`, `dφ = 0`. On a
//! contractible chart `φ = dξ` and `ϑ = τ e^{-ξ}` for a constant `τ`.
//! Charts here share one global coordinate system, so every overlap is the
//! whole space and gluing conditions become exact identities in [`ExpPoly`].
//! Rescaling `m̃ = c⁻¹ e^{ξ} m` with suitable constants `c` makes `dm̃`
//! constant: `0` when `ϑ` vanishes (case i), any chosen `ε ≠ 0` otherwise
//! (case ii).

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exterior::OrdinaryForm;
use crate::gform::GenForm;
use crate::ring::{sign, ExpPoly, Polynomial, Rational};

/// Ordinary form with exponential-polynomial coefficients.
pub type ExpForm = OrdinaryForm<ExpPoly>;

fn lift(f: &OrdinaryForm) -> ExpForm {
    f.map_coeffs(|p| ExpPoly::from(p.clone()))
}

fn exp_constant_inverse(c: &ExpPoly) -> Option<ExpPoly> {
    let (r, s) = c.as_exp_constant()?;
    (!r.is_zero()).then(|| ExpPoly::exp_constant(c.nvars(), r.recip(), -s))
}

/// `(dϑ + ϑφ, dφ)`; both vanish iff `d² m = 0` for `dm = ϑ - φ m`.
pub fn ideal_residual(theta: &ExpPoly, phi: &ExpForm) -> Result<(ExpForm, ExpForm)> {
    check_dim(theta.nvars(), phi.nvars())?;
    if phi.degree() != 1 {
        return Err(Error::DegreeMismatch { expected: 1, found: phi.degree() });
    }
    let first = ExpForm::scalar(theta.clone()).d().try_add(&phi.mul_scalar(theta))?;
    Ok((first, phi.d()))
}

/// `a = α + α′ m` with `ExpPoly` coefficients and no fixed `dm`.
#[derive(Clone, PartialEq, Eq)]
pub struct GeneralForm {
    degree: i32,
    body: ExpForm,
    soul: ExpForm,
}

impl GeneralForm {
    pub fn new(body: ExpForm, soul: ExpForm) -> Result<Self> {
        check_dim(body.nvars(), soul.nvars())?;
        if soul.degree() != body.degree() + 1 {
            return Err(Error::DegreeMismatch { expected: body.degree() + 1, found: soul.degree() });
        }
        Ok(GeneralForm { degree: body.degree(), body, soul })
    }

    pub fn zero(nvars: usize, degree: i32) -> Self {
        GeneralForm { degree, body: ExpForm::zero(nvars, degree), soul: ExpForm::zero(nvars, degree + 1) }
    }

    pub fn m(nvars: usize) -> Self {
        Self::soul_only(ExpForm::scalar(ExpPoly::from(Polynomial::one(nvars))))
    }

    /// `α′ m`.
    pub fn soul_only(soul: ExpForm) -> Self {
        let n = soul.nvars();
        GeneralForm { degree: soul.degree() - 1, body: ExpForm::zero(n, soul.degree() - 1), soul }
    }

    /// The same components, forgetting `ε`.
    pub fn from_gen_form(a: &GenForm) -> Self {
        GeneralForm { degree: a.degree(), body: lift(a.body()), soul: lift(a.soul()) }
    }

    pub fn nvars(&self) -> usize {
        self.body.nvars()
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn body(&self) -> &ExpForm {
        &self.body
    }

    pub fn soul(&self) -> &ExpForm {
        &self.soul
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero() && self.soul.is_zero()
    }

    pub fn mul_exp(&self, f: &ExpPoly) -> Self {
        GeneralForm { degree: self.degree, body: self.body.mul_scalar(f), soul: self.soul.mul_scalar(f) }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(GeneralForm { degree: self.degree, body: self.body.try_add(&other.body)?, soul: self.soul.try_add(&other.soul)? })
    }

    /// `(α + α′m)(β + β′m) = αβ + (αβ′ + (-1)^q α′β) m`, `q = deg b`.
    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        check_dim(self.nvars(), other.nvars())?;
        let body = self.body.try_wedge(&other.body)?;
        let s = sign(other.degree.rem_euclid(2) == 1);
        let soul = self.body.try_wedge(&other.soul)?.try_add(&self.soul.try_wedge(&other.body)?.scale(&s))?;
        Ok(GeneralForm { degree: self.degree + other.degree, body, soul })
    }
}

impl fmt::Display for GeneralForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + [{}] m", self.body, self.soul)
    }
}

impl fmt::Debug for GeneralForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GeneralForm(p={}) {}", self.degree, self)
    }
}

/// An exterior derivative fixed by `dm = ϑ - φ m` with `(ϑ, φ)` in the ideal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralDerivative {
    theta: ExpPoly,
    phi: ExpForm,
}

impl GeneralDerivative {
    pub fn new(theta: ExpPoly, phi: ExpForm) -> Result<Self> {
        let (a, b) = ideal_residual(&theta, &phi)?;
        if !(a.is_zero() && b.is_zero()) {
            return Err(Error::invalid("dϑ + ϑφ = 0 and dφ = 0 must hold for d² m = 0"));
        }
        Ok(GeneralDerivative { theta, phi })
    }

    /// `dm = ε`.
    pub fn canonical(nvars: usize, epsilon: &Rational) -> Self {
        GeneralDerivative { theta: ExpPoly::from(Polynomial::constant(nvars, epsilon.clone())), phi: ExpForm::zero(nvars, 1) }
    }

    /// `φ = dξ`, `ϑ = τ e^{-ξ}`; always in the ideal.
    pub fn chart(xi: &Polynomial, tau: &ExpPoly) -> Result<Self> {
        check_dim(xi.nvars(), tau.nvars())?;
        let theta = tau.try_mul(&ExpPoly::exp(-xi))?;
        let phi = lift(&OrdinaryForm::scalar(xi.clone()).d());
        Self::new(theta, phi)
    }

    pub fn theta(&self) -> &ExpPoly {
        &self.theta
    }

    pub fn phi(&self) -> &ExpForm {
        &self.phi
    }

    /// `da = dα + (-1)^{p+1} ϑ α′ + [dα′ - φ α′] m`.
    pub fn apply(&self, a: &GeneralForm) -> Result<GeneralForm> {
        check_dim(self.theta.nvars(), a.nvars())?;
        let s = sign(a.degree.rem_euclid(2) == 0);
        let body = a.body.d().try_add(&a.soul.mul_scalar(&self.theta).scale(&s))?;
        let soul = a.soul.d().try_add(&self.phi.try_wedge(&a.soul)?.scale(&-Rational::one()))?;
        GeneralForm::new(body, soul)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChartData {
    pub id: String,
    pub xi: Polynomial,
    /// The constant `τ = r e^s`.
    pub tau: ExpPoly,
}

impl ChartData {
    pub fn new(id: impl Into<String>, xi: Polynomial, tau: ExpPoly) -> Result<Self> {
        check_dim(xi.nvars(), tau.nvars())?;
        if tau.as_exp_constant().is_none() {
            return Err(Error::invalid("chart τ must be a constant r·e^s"));
        }
        Ok(ChartData { id: id.into(), xi, tau })
    }

    pub fn tau_is_zero(&self) -> bool {
        self.tau.is_zero()
    }

    pub fn derivative(&self) -> GeneralDerivative {
        GeneralDerivative::chart(&self.xi, &self.tau).expect("chart data lies in the ideal")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Overlap {
    pub i: String,
    pub j: String,
    pub tau: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverData {
    nvars: usize,
    charts: Vec<ChartData>,
    overlaps: Vec<Overlap>,
    triples: Vec<[String; 3]>,
}

impl CoverData {
    pub fn new(nvars: usize, charts: Vec<ChartData>, overlaps: Vec<Overlap>, triples: Vec<[String; 3]>) -> Result<Self> {
        if charts.is_empty() {
            return Err(Error::invalid("a cover needs at least one chart"));
        }
        let mut seen = BTreeMap::new();
        for c in &charts {
            check_dim(nvars, c.xi.nvars())?;
            if seen.insert(c.id.clone(), ()).is_some() {
                return Err(Error::invalid(format!("chart '{}' listed twice", c.id)));
            }
        }
        let known = |id: &str| {
            if seen.contains_key(id) {
                Ok(())
            } else {
                Err(Error::invalid(format!("unknown chart '{id}'")))
            }
        };
        let mut taus: BTreeMap<(String, String), Rational> = BTreeMap::new();
        for o in &overlaps {
            known(&o.i)?;
            known(&o.j)?;
            if o.i == o.j {
                return Err(Error::invalid(format!("overlap of chart '{}' with itself", o.i)));
            }
            if let Some(t) = taus.get(&(o.j.clone(), o.i.clone())) {
                if *t != -o.tau.clone() {
                    return Err(Error::invalid(format!("τ_{0}{1} ≠ -τ_{1}{0}", o.i, o.j)));
                }
            }
            if let Some(t) = taus.insert((o.i.clone(), o.j.clone()), o.tau.clone()) {
                if t != o.tau {
                    return Err(Error::invalid(format!("overlap ({}, {}) listed with two values", o.i, o.j)));
                }
            }
        }
        for t in &triples {
            for id in t {
                known(id)?;
            }
        }
        Ok(CoverData { nvars, charts, overlaps, triples })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn charts(&self) -> &[ChartData] {
        &self.charts
    }

    pub fn overlaps(&self) -> &[Overlap] {
        &self.overlaps
    }

    pub fn triples(&self) -> &[[String; 3]] {
        &self.triples
    }

    pub fn chart(&self, id: &str) -> Option<&ChartData> {
        self.charts.iter().find(|c| c.id == id)
    }

    /// `τ_IJ`, using `τ_IJ = -τ_JI` when only the reverse pair is listed.
    pub fn overlap_tau(&self, i: &str, j: &str) -> Option<Rational> {
        self.overlaps.iter().find_map(|o| {
            if o.i == i && o.j == j {
                Some(o.tau.clone())
            } else if o.i == j && o.j == i {
                Some(-o.tau.clone())
            } else {
                None
            }
        })
    }

    /// The chart freedom `τ → τ e^χ`, `ξ → ξ + χ` on chart `id`, with the
    /// overlap constants updated so gluing data stay consistent.
    pub fn regauge(&self, id: &str, chi: &Rational) -> Result<CoverData> {
        let mut out = self.clone();
        let chart = out.charts.iter_mut().find(|c| c.id == id).ok_or_else(|| Error::invalid(format!("unknown chart '{id}'")))?;
        chart.xi = &chart.xi + &Polynomial::constant(self.nvars, chi.clone());
        chart.tau = &chart.tau * &ExpPoly::exp_constant(self.nvars, Rational::one(), chi.clone());
        for o in &mut out.overlaps {
            if o.i == id {
                o.tau += chi;
            }
            if o.j == id {
                o.tau -= chi;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoverCase {
    /// `ϑ = 0` everywhere; `dm = -dξ m`.
    VanishingTheta,
    /// `ϑ ≠ 0` everywhere.
    NonVanishingTheta,
}

impl CoverCase {
    pub fn label(self) -> &'static str {
        match self {
            CoverCase::VanishingTheta => "i",
            CoverCase::NonVanishingTheta => "ii",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OverlapCheck {
    pub i: String,
    pub j: String,
    pub tau: Rational,
    /// `ξ_I - ξ_J = τ_IJ` exactly.
    pub xi_ok: bool,
    /// `τ_I = τ_J e^{τ_IJ}` exactly.
    pub tau_ok: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TripleCheck {
    pub charts: [String; 3],
    /// `τ_IJ + τ_JK + τ_KI`, absent when an overlap is missing.
    pub sum: Option<Rational>,
    pub ok: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GlueReport {
    pub valid: bool,
    pub case: Option<CoverCase>,
    pub overlaps: Vec<OverlapCheck>,
    pub triples: Vec<TripleCheck>,
    pub issues: Vec<String>,
}

pub fn glue_validate(cover: &CoverData) -> GlueReport {
    let mut issues = Vec::new();
    let n = cover.nvars;
    let mut overlaps = Vec::new();
    for o in &cover.overlaps {
        let (ci, cj) = (cover.chart(&o.i).expect("validated"), cover.chart(&o.j).expect("validated"));
        let xi_ok = &ci.xi - &cj.xi == Polynomial::constant(n, o.tau.clone());
        let tau_ok = ci.tau == &cj.tau * &ExpPoly::exp_constant(n, Rational::one(), o.tau.clone());
        if !xi_ok {
            issues.push(format!("overlap ({}, {}): ξ_I - ξ_J is not the constant {}", o.i, o.j, o.tau));
        }
        if ci.tau_is_zero() != cj.tau_is_zero() {
            issues.push(format!("overlap ({}, {}): τ vanishes on one chart only, mixing cases (i) and (ii)", o.i, o.j));
        } else if !tau_ok {
            issues.push(format!("overlap ({}, {}): τ_I ≠ τ_J e^{}", o.i, o.j, o.tau));
        }
        overlaps.push(OverlapCheck { i: o.i.clone(), j: o.j.clone(), tau: o.tau.clone(), xi_ok, tau_ok });
    }
    let mut triples = Vec::new();
    for t in &cover.triples {
        let [a, b, c] = t;
        let sum = match (cover.overlap_tau(a, b), cover.overlap_tau(b, c), cover.overlap_tau(c, a)) {
            (Some(x), Some(y), Some(z)) => Some(x + y + z),
            _ => None,
        };
        let ok = sum.as_ref().is_some_and(Zero::is_zero);
        match &sum {
            None => issues.push(format!("triple ({a}, {b}, {c}): missing overlap constant")),
            Some(s) if !s.is_zero() => issues.push(format!("triple ({a}, {b}, {c}): τ_IJ + τ_JK + τ_KI = {s} ≠ 0")),
            _ => {}
        }
        triples.push(TripleCheck { charts: t.clone(), sum, ok });
    }
    let zeros = cover.charts.iter().filter(|c| c.tau_is_zero()).count();
    let case = if zeros == cover.charts.len() {
        Some(CoverCase::VanishingTheta)
    } else if zeros == 0 {
        Some(CoverCase::NonVanishingTheta)
    } else {
        if !issues.iter().any(|s| s.contains("mixing cases")) {
            issues.push("τ vanishes on some charts but not others".to_string());
        }
        None
    };
    GlueReport { valid: issues.is_empty(), case, overlaps, triples, issues }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChartScaling {
    pub id: String,
    /// The constant `c_I`.
    pub c: ExpPoly,
    /// `m̃_I = m_factor · m`, `m_factor = c_I⁻¹ e^{ξ_I}`.
    pub m_factor: ExpPoly,
    /// `α̃′_I = soul_factor · α′`, `soul_factor = c_I e^{-ξ_I}`.
    pub soul_factor: ExpPoly,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalCover {
    pub case: CoverCase,
    /// The constant value of `dm̃` on every chart.
    pub dm: Rational,
    pub charts: Vec<ChartScaling>,
}

/// Constants with `c_I = c_J e^{τ_IJ}`, one free `c = 1` per connected component.
fn propagate_constants(cover: &CoverData) -> BTreeMap<String, ExpPoly> {
    let n = cover.nvars;
    let mut out: BTreeMap<String, ExpPoly> = BTreeMap::new();
    for root in &cover.charts {
        if out.contains_key(&root.id) {
            continue;
        }
        out.insert(root.id.clone(), ExpPoly::exp_constant(n, Rational::one(), Rational::zero()));
        let mut queue = VecDeque::from([root.id.clone()]);
        while let Some(j) = queue.pop_front() {
            let cj = out[&j].clone();
            for other in &cover.charts {
                if out.contains_key(&other.id) {
                    continue;
                }
                if let Some(t) = cover.overlap_tau(&other.id, &j) {
                    out.insert(other.id.clone(), &cj * &ExpPoly::exp_constant(n, Rational::one(), t));
                    queue.push_back(other.id.clone());
                }
            }
        }
    }
    out
}

/// Rescale `m` chart by chart so `dm̃` is `0` (case i) or `ε` (case ii), and
/// verify the rescaled quantities glue exactly.
pub fn canonicalize(cover: &CoverData, epsilon: Option<&Rational>) -> Result<CanonicalCover> {
    let report = glue_validate(cover);
    if !report.valid {
        return Err(Error::invalid(format!("cover does not glue: {}", report.issues.join("; "))));
    }
    let case = report.case.expect("valid covers are classified");
    let n = cover.nvars;
    let (consts, dm): (BTreeMap<String, ExpPoly>, Rational) = match case {
        CoverCase::VanishingTheta => (propagate_constants(cover), Rational::zero()),
        CoverCase::NonVanishingTheta => {
            let eps = epsilon.filter(|e| !e.is_zero()).ok_or_else(|| Error::invalid("case (ii) needs ε ≠ 0"))?;
            let inv = eps.recip();
            (cover.charts.iter().map(|c| (c.id.clone(), c.tau.scale(&inv))).collect(), eps.clone())
        }
    };
    for o in &cover.overlaps {
        if consts[&o.i] != &consts[&o.j] * &ExpPoly::exp_constant(n, Rational::one(), o.tau.clone()) {
            return Err(Error::invalid(format!("c_I ≠ c_J e^τ on overlap ({}, {})", o.i, o.j)));
        }
    }
    let mut charts = Vec::with_capacity(cover.charts.len());
    for chart in &cover.charts {
        let c = consts[&chart.id].clone();
        let c_inv = exp_constant_inverse(&c).expect("nonzero constants");
        let m_factor = &c_inv * &ExpPoly::exp(chart.xi.clone());
        let soul_factor = &c * &ExpPoly::exp(-&chart.xi);
        let m_tilde = GeneralForm::m(n).mul_exp(&m_factor);
        let dm_tilde = chart.derivative().apply(&m_tilde)?;
        let expected = ExpPoly::from(Polynomial::constant(n, dm.clone()));
        if !dm_tilde.soul.is_zero() || dm_tilde.body.as_scalar() != expected {
            return Err(Error::invalid(format!("dm̃ on chart '{}' is {}, not {}", chart.id, dm_tilde, dm)));
        }
        charts.push(ChartScaling { id: chart.id.clone(), c, m_factor, soul_factor });
    }
    for o in &cover.overlaps {
        let (a, b) = (charts.iter().find(|s| s.id == o.i), charts.iter().find(|s| s.id == o.j));
        let (a, b) = (a.expect("chart"), b.expect("chart"));
        if a.m_factor != b.m_factor || a.soul_factor != b.soul_factor {
            return Err(Error::invalid(format!("m̃ does not glue on overlap ({}, {})", o.i, o.j)));
        }
    }
    Ok(CanonicalCover { case, dm, charts })
}

impl CanonicalCover {
    pub fn scaling(&self, id: &str) -> Option<&ChartScaling> {
        self.charts.iter().find(|s| s.id == id)
    }

    /// Differentiates `a` on chart `id` directly with the chart derivative and
    /// by rewriting `a = α + α̃′ m̃`, applying `dm̃ = const`, and converting
    /// back. Returns both results.
    pub fn transported_derivative(&self, cover: &CoverData, id: &str, a: &GeneralForm) -> Result<(GeneralForm, GeneralForm)> {
        let chart = cover.chart(id).ok_or_else(|| Error::invalid(format!("unknown chart '{id}'")))?;
        let s = self.scaling(id).ok_or_else(|| Error::invalid(format!("unknown chart '{id}'")))?;
        let direct = chart.derivative().apply(a)?;
        let rescaled = GeneralForm::new(a.body.clone(), a.soul.mul_scalar(&s.soul_factor))?;
        let d = GeneralDerivative::canonical(cover.nvars, &self.dm).apply(&rescaled)?;
        let back = GeneralForm::new(d.body.clone(), d.soul.mul_scalar(&s.m_factor))?;
        Ok((direct, back))
    }
}
