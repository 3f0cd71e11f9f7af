//! Fixture-driven demonstrations behind the command-line harness.
//!
//! Each runner decodes a JSON fixture, performs the construction, and returns
//! a JSON report with a pass flag. Malformed fixtures and violated
//! preconditions are errors; failed identities are reports with
//! `"pass": false`.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::connection::{
    case_i_curvature_formula, case_ii_curvature_formula, levi_civita, metric_connection_eps, metric_connection_eps0,
    ordinary_nonmetricity, torsion, FormRows, GenConnection, GenMetric,
};
use crate::cover::{canonicalize, glue_validate, ideal_residual, CoverCase, GeneralForm};
use crate::error::{Error, Result};
use crate::gform::GenForm;
use crate::hamiltonian::{
    gauge_shift, integrate_hamilton, GenSymplectic, OscillatorParams, OscillatorSummary, Trajectory,
};
use crate::json::{
    decode_cover, decode_form_rows, decode_gen_form, decode_poly_matrix, encode_exp_constant, encode_form_matrix,
    encode_form_rows, encode_gen_form, encode_rational, encode_vector_field, Node,
};
use crate::random::RandomSource;
use crate::ring::{PolyMatrix, Polynomial, Rational};

/// A report plus its verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct FixtureReport {
    pub pass: bool,
    pub report: Value,
}

impl FixtureReport {
    fn new(report: Value) -> Self {
        let pass = report["pass"].as_bool().expect("reports carry a pass flag");
        FixtureReport { pass, report }
    }
}

// ---- hamiltonian -------------------------------------------------------

/// Hamiltonian fixture:
/// `{"dim", "epsilon", "s": <gen form, degree 2>, "omega_inv"?: [[poly]],
///   "h": <gen form, degree 0>, "g"?: <gen form>, "gauge"?: "<poly>"}`.
pub struct HamiltonianFixture {
    pub symplectic: GenSymplectic,
    pub h: GenForm,
    pub g: Option<GenForm>,
    pub gauge: Option<Polynomial>,
}

pub fn decode_hamiltonian(value: &Value) -> Result<HamiltonianFixture> {
    let root = Node::root(value);
    let n = root.field("dim", |d| d.usize())?;
    let eps = root.field("epsilon", |e| e.rational())?;
    let s = root.field("s", |s| decode_gen_form(s, Some(n), Some(&eps)))?;
    let omega_inv = root.optional("omega_inv", |m| decode_poly_matrix(m, n))?;
    let symplectic = match omega_inv {
        Some(inv) => GenSymplectic::validate(s, inv),
        None => GenSymplectic::with_computed_inverse(s),
    }
    .map_err(|e| root.field("s", |s| Err::<(), _>(s.error(e.to_string()))).unwrap_err())?;
    let h = root.field("h", |h| decode_gen_form(h, Some(n), Some(&eps)))?;
    if h.degree() != 0 {
        return root.field("h", |h| Err(h.error("H must be a generalized zero-form")));
    }
    let g = root.optional("g", |g| decode_gen_form(g, Some(n), Some(&eps)))?;
    if g.as_ref().is_some_and(|g| g.degree() != 0) {
        return root.field("g", |g| Err(g.error("G must be a generalized zero-form")));
    }
    let gauge = root.optional("gauge", |l| l.polynomial(n))?;
    Ok(HamiltonianFixture { symplectic, h, g, gauge })
}

pub fn run_hamiltonian(value: &Value) -> Result<FixtureReport> {
    let fx = decode_hamiltonian(value)?;
    let sym = &fx.symplectic;
    let v = sym.hamiltonian_vf(&fx.h)?;
    let residual = sym.residual(&v, &fx.h)?;
    let lie = v.try_lie(sym.form())?;
    let mut report = json!({
        "fixture": "hamiltonian",
        "dim": sym.nvars(),
        "epsilon": encode_rational(sym.epsilon()),
        "field": encode_vector_field(&v),
        "defining_relation_zero": residual.is_zero(),
        "lie_of_s_zero": lie.is_zero(),
    });
    let mut pass = residual.is_zero() && lie.is_zero();
    if let Some(l) = &fx.gauge {
        let shifted = gauge_shift(&fx.h, l)?;
        let ok = sym.residual(&v, &shifted)?.is_zero() && sym.hamiltonian_vf(&shifted)? == v;
        report["gauge_shift_preserves_field"] = json!(ok);
        pass &= ok;
    }
    if let Some(g) = &fx.g {
        let w = sym.hamiltonian_vf(g)?;
        let closure = sym
            .bracket_hamiltonian(&v, &w)
            .and_then(|k| Ok((sym.residual(&v.try_bracket(&w)?, &k)?.is_zero(), k)));
        match closure {
            Ok((ok, k)) => {
                report["bracket_closure"] = json!(ok);
                report["bracket_hamiltonian"] = encode_gen_form(&k);
                pass &= ok;
            }
            Err(e) => {
                report["bracket_closure"] = json!(false);
                report["bracket_error"] = json!(e.to_string());
                pass = false;
            }
        }
    }
    report["schema"] = json!(crate::suites::SCHEMA_VERSION);
    report["pass"] = json!(pass);
    Ok(FixtureReport::new(report))
}

// ---- connection theorem ------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremCase {
    /// `ε = 0`.
    I,
    /// `ε ≠ 0`.
    II,
}

impl FromStr for TheoremCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "i" => Ok(TheoremCase::I),
            "ii" => Ok(TheoremCase::II),
            other => Err(format!("unknown case '{other}' (expected i|ii)")),
        }
    }
}

impl fmt::Display for TheoremCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremCase::I => "i",
            TheoremCase::II => "ii",
        })
    }
}

/// Connection fixture:
/// `{"dim", "epsilon", "gamma": [[poly]], "gamma_inv"?: [[poly]],
///   "alpha": "levi-civita" | [[1-form]], "chi"?: [[1-form]], "beta_antisym"?: [[2-form]]}`.
/// `chi` is required in case (i); in case (ii) the metric soul is derived.
pub struct ConnectionFixture {
    pub epsilon: Rational,
    pub gamma: PolyMatrix,
    pub gamma_inv: PolyMatrix,
    pub alpha: FormRows,
    pub chi: Option<FormRows>,
    pub beta_antisym: Option<FormRows>,
}

pub fn decode_connection(value: &Value) -> Result<ConnectionFixture> {
    let root = Node::root(value);
    let n = root.field("dim", |d| d.usize())?;
    let epsilon = root.field("epsilon", |e| e.rational())?;
    let gamma = root.field("gamma", |g| {
        let m = decode_poly_matrix(g, n)?;
        if !m.is_symmetric() {
            return Err(g.error("γ must be symmetric"));
        }
        Ok(m)
    })?;
    let gamma_inv = match root.optional("gamma_inv", |g| decode_poly_matrix(g, n))? {
        Some(inv) => {
            gamma.check_inverse(&inv).map_err(|e| root.field("gamma_inv", |g| Err::<(), _>(g.error(e.to_string()))).unwrap_err())?;
            inv
        }
        None => gamma
            .inverse()
            .ok_or_else(|| root.field("gamma", |g| Err::<(), _>(g.error("γ has no polynomial inverse; supply gamma_inv"))).unwrap_err())?,
    };
    let alpha = root.field("alpha", |a| match a.value {
        Value::String(s) if s == "levi-civita" => levi_civita(&gamma, &gamma_inv).map_err(|e| a.error(e.to_string())),
        Value::String(_) => Err(a.error("expected \"levi-civita\" or a matrix of one-forms")),
        _ => {
            let rows = decode_form_rows(a, n, 1)?;
            if !torsion(&rows).iter().all(|t| t.is_zero()) {
                return Err(a.error("α must be torsion-free"));
            }
            Ok(rows)
        }
    })?;
    let chi = root.optional("chi", |c| {
        let rows = decode_form_rows(c, n, 1)?;
        for i in 0..n {
            for j in 0..n {
                if rows[i][j] != rows[j][i] {
                    return Err(c.error("χ must be symmetric"));
                }
            }
        }
        Ok(rows)
    })?;
    let beta_antisym = root.optional("beta_antisym", |b| {
        let rows = decode_form_rows(b, n, 2)?;
        for i in 0..n {
            for j in 0..n {
                if rows[i][j] != -&rows[j][i] {
                    return Err(b.error("β̃ must be antisymmetric"));
                }
            }
        }
        Ok(rows)
    })?;
    Ok(ConnectionFixture { epsilon, gamma, gamma_inv, alpha, chi, beta_antisym })
}

fn connection_summary(conn: &GenConnection, g: &GenMetric) -> Result<(bool, bool, Value)> {
    let q = conn.nonmetricity(g)?;
    let bianchi = conn.bianchi_residual().is_zero();
    Ok((q.is_zero(), bianchi, json!({"connection": encode_form_matrix(conn.matrix()), "metric": encode_form_matrix(g.matrix())})))
}

pub fn run_connection(value: &Value, case: TheoremCase) -> Result<FixtureReport> {
    let fx = decode_connection(value)?;
    let root = Node::root(value);
    let n = fx.gamma.size();
    let mut report = json!({"fixture": "connection", "case": case.to_string(), "dim": n, "epsilon": encode_rational(&fx.epsilon)});
    let pass;
    match case {
        TheoremCase::I => {
            if !fx.epsilon.is_zero() {
                return root.field("epsilon", |e| Err(e.error("case (i) needs ε = 0")));
            }
            let chi = fx.chi.as_ref().ok_or_else(|| root.error("case (i) needs a metric soul 'chi'"))?;
            if !ordinary_nonmetricity(&fx.gamma, &fx.alpha).iter().flatten().all(|f| f.is_zero()) {
                return root.field("alpha", |a| Err(a.error("case (i) needs α metric for γ")));
            }
            let g = GenMetric::new(fx.gamma.clone(), fx.gamma_inv.clone(), chi, &fx.epsilon)?;
            let conn = metric_connection_eps0(&g, &fx.alpha, fx.beta_antisym.as_ref());
            match conn {
                Ok(conn) => {
                    let (q_zero, bianchi, objects) = connection_summary(&conn, &g)?;
                    let formula = fx.beta_antisym.is_none().then(|| conn.curvature() == case_i_curvature_formula(&g, &fx.alpha));
                    report["nonmetricity_zero"] = json!(q_zero);
                    report["bianchi_zero"] = json!(bianchi);
                    report["curvature_formula_match"] = json!(formula);
                    report["objects"] = objects;
                    pass = q_zero && bianchi && formula.unwrap_or(true);
                }
                Err(e) => {
                    report["error"] = json!(e.to_string());
                    pass = false;
                }
            }
        }
        TheoremCase::II => {
            if fx.epsilon.is_zero() {
                return root.field("epsilon", |e| Err(e.error("case (ii) needs ε ≠ 0")));
            }
            match metric_connection_eps(&fx.gamma, &fx.gamma_inv, &fx.alpha, fx.beta_antisym.as_ref(), &fx.epsilon) {
                Ok((g, conn)) => {
                    let (q_zero, bianchi, objects) = connection_summary(&conn, &g)?;
                    let f = conn.curvature();
                    let (corrected, printed) = if fx.beta_antisym.is_none() {
                        (
                            Some(f == case_ii_curvature_formula(&g, &fx.alpha, -1)),
                            Some(f == case_ii_curvature_formula(&g, &fx.alpha, 1)),
                        )
                    } else {
                        (None, None)
                    };
                    let metric_alpha = ordinary_nonmetricity(&fx.gamma, &fx.alpha).iter().flatten().all(|x| x.is_zero());
                    let corollary = (metric_alpha && fx.beta_antisym.is_none()).then(|| {
                        conn.beta().iter().flatten().all(|b| b.is_zero())
                            && f.soul().iter().flatten().all(|s| s.is_zero())
                            && f.body() == conn.ordinary_curvature()
                    });
                    report["nonmetricity_zero"] = json!(q_zero);
                    report["bianchi_zero"] = json!(bianchi);
                    report["curvature_formula_match"] = json!(corrected);
                    report["curvature_formula_match_as_printed"] = json!(printed);
                    report["ordinary_metric_corollary"] = json!(corollary);
                    report["metric_soul"] = encode_form_rows(&g.chi());
                    report["objects"] = objects;
                    pass = q_zero && bianchi && corrected.unwrap_or(true) && corollary.unwrap_or(true);
                }
                Err(e) => {
                    report["error"] = json!(e.to_string());
                    pass = false;
                }
            }
        }
    }
    report["schema"] = json!(crate::suites::SCHEMA_VERSION);
    report["pass"] = json!(pass);
    Ok(FixtureReport::new(report))
}

// ---- cover -------------------------------------------------------------

/// Random forms per chart in the transported-derivative check.
const COVER_SAMPLES: u64 = 8;

pub fn run_cover(value: &Value, epsilon: Option<&Rational>) -> Result<FixtureReport> {
    let cover = decode_cover(Node::root(value))?;
    let glue = glue_validate(&cover);
    let ideal_ok = cover.charts().iter().all(|c| {
        let d = c.derivative();
        ideal_residual(d.theta(), d.phi()).is_ok_and(|(a, b)| a.is_zero() && b.is_zero())
    });
    let mut report = json!({
        "fixture": "cover",
        "valid": glue.valid,
        "case": glue.case.map(CoverCase::label),
        "ideal_residual_zero": ideal_ok,
        "issues": glue.issues,
        "overlaps": glue.overlaps.iter().map(|o| json!({
            "pair": [o.i, o.j], "tau": encode_rational(&o.tau), "xi_difference": o.xi_ok, "tau_relation": o.tau_ok,
        })).collect::<Vec<_>>(),
        "triples": glue.triples.iter().map(|t| json!({
            "charts": t.charts, "sum": t.sum.as_ref().map(encode_rational), "cocycle": t.ok,
        })).collect::<Vec<_>>(),
        "glued": false,
        "dm_tilde": null,
    });
    let mut pass = glue.valid && ideal_ok;
    if glue.valid {
        if glue.case == Some(CoverCase::NonVanishingTheta) && !epsilon.is_some_and(|e| !e.is_zero()) {
            return Err(Error::invalid("case (ii) canonicalization needs --epsilon with a nonzero value"));
        }
        match canonicalize(&cover, epsilon) {
            Ok(canon) => {
                let n = cover.nvars();
                let mut transported = true;
                for (k, chart) in cover.charts().iter().enumerate() {
                    for i in 0..COVER_SAMPLES {
                        let mut src = RandomSource::new(k as u64, i);
                        let a = GeneralForm::from_gen_form(&src.any_gen_form(n, &Rational::zero()));
                        let (direct, back) = canon.transported_derivative(&cover, &chart.id, &a)?;
                        transported &= direct == back;
                    }
                }
                report["glued"] = json!(true);
                report["dm_tilde"] = encode_rational(&canon.dm);
                report["transported_derivative"] = json!(transported);
                report["charts"] = json!(canon
                    .charts
                    .iter()
                    .map(|s| json!({"id": s.id, "c": encode_exp_constant(&s.c), "m_factor": s.m_factor.to_string()}))
                    .collect::<Vec<_>>());
                pass &= transported;
            }
            Err(e) => {
                report["error"] = json!(e.to_string());
                pass = false;
            }
        }
    }
    report["schema"] = json!(crate::suites::SCHEMA_VERSION);
    report["pass"] = json!(pass);
    Ok(FixtureReport::new(report))
}

// ---- oscillator --------------------------------------------------------

/// Largest tolerated deviation from the closed-form solution.
pub const OSCILLATOR_TOLERANCE: f64 = 1e-6;
/// Smallest accepted observed convergence order of RK4.
pub const MIN_ORDER: f64 = 3.8;

/// Integrates the oscillator and returns the trajectory and a summary report.
pub fn run_oscillator(params: &OscillatorParams) -> Result<(Trajectory, FixtureReport)> {
    let traj = integrate_hamilton(params)?;
    let summary = OscillatorSummary::compute(params, &traj)?;
    let mut report = summary.to_json(params);
    let pass = summary.max_err < OSCILLATOR_TOLERANCE && summary.order_estimate >= MIN_ORDER;
    report["fixture"] = json!("oscillator");
    report["tolerance"] = json!(OSCILLATOR_TOLERANCE);
    report["schema"] = json!(crate::suites::SCHEMA_VERSION);
    report["pass"] = json!(pass);
    Ok((traj, FixtureReport::new(report)))
}
