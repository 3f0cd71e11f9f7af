//! Randomized identity suites.
//!
//! Every check is a pure function of `(seed, check name, trial index)`, so a
//! report depends only on its configuration; trials run in parallel and are
//! collected in index order. Identities are asserted with exact equality.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use num_traits::One;
use serde_json::{json, Value};

use crate::connection::{unimodular_metric, FormMatrix, GenConnection, GenMetric};
use crate::exterior::VectorField;
use crate::gform::GenForm;
use crate::gvector::{anticommutator, anticommutator_closed, GenVectorField};
use crate::json::{encode_form_matrix, encode_gen_form, encode_polynomial, encode_rational, encode_vector_field};
use crate::random::{epsilon_for, RandomSource};
use crate::ring::{sign, PolyMatrix, Polynomial, Rational};
use crate::superspace::{from_super_of_degree, to_super};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Cartan,
    GForm,
    GVector,
    Super,
    Connection,
}

impl Suite {
    pub const MEMBERS: [Suite; 5] = [Suite::Cartan, Suite::GForm, Suite::GVector, Suite::Super, Suite::Connection];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Cartan => "cartan",
            Suite::GForm => "gform",
            Suite::GVector => "gvector",
            Suite::Super => "super",
            Suite::Connection => "connection",
        }
    }

    fn checks(self) -> Vec<Check> {
        match self {
            Suite::All => Suite::MEMBERS.iter().flat_map(|s| s.checks()).collect(),
            Suite::Cartan => cartan_checks(),
            Suite::GForm => gform_checks(),
            Suite::GVector => gvector_checks(),
            Suite::Super => super_checks(),
            Suite::Connection => connection_checks(),
        }
    }

    /// Names of the checks this suite runs.
    pub fn check_names(self) -> Vec<&'static str> {
        self.checks().iter().map(|c| c.name).collect()
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [Suite::All, Suite::Cartan, Suite::GForm, Suite::GVector, Suite::Super, Suite::Connection]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}' (expected all|cartan|gform|gvector|super|connection)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub dim: usize,
    /// Fixed `ε`, or `None` to cycle through the standard values by trial.
    pub epsilon: Option<Rational>,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub check: String,
    pub trial: u64,
    pub inputs: Value,
    pub residual: Value,
}

impl Failure {
    pub fn case_id(&self) -> String {
        format!("{}#{}", self.check, self.trial)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSummary {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    pub wall_time_ms: u128,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: SuiteConfig,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
    /// Generalized degrees of the random forms drawn.
    pub degrees: BTreeSet<i32>,
    pub epsilons: BTreeSet<Rational>,
    pub wall_time_ms: u128,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total_trials(&self) -> u64 {
        self.checks.iter().map(|c| c.trials).sum()
    }

    /// The report without its timing field; byte-stable for a fixed configuration.
    pub fn to_json_stable(&self) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "suite": self.suite.name(),
            "dim": self.config.dim,
            "epsilon": self.config.epsilon.as_ref().map(encode_rational),
            "seed": self.config.seed,
            "trials": self.total_trials(),
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "trials": c.trials, "failures": c.failures})).collect::<Vec<_>>(),
            "degrees": self.degrees.iter().collect::<Vec<_>>(),
            "epsilons": self.epsilons.iter().map(encode_rational).collect::<Vec<_>>(),
            "failures": self.failures.iter().map(|f| json!({
                "case": f.case_id(), "inputs": f.inputs, "residual": f.residual,
            })).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.to_json_stable();
        for (c, summary) in v["checks"].as_array_mut().expect("array").iter_mut().zip(&self.checks) {
            c["wall_time_ms"] = json!(summary.wall_time_ms as u64);
        }
        v["wall_time_ms"] = json!(self.wall_time_ms as u64);
        v
    }
}

/// Outcome of one trial: encoded inputs, residual when the identity fails,
/// and the degrees of the random forms involved.
struct Outcome {
    inputs: Value,
    residual: Option<Value>,
    degrees: Vec<i32>,
}

impl Outcome {
    fn new(inputs: Value, residual: Option<Value>, degrees: Vec<i32>) -> Self {
        Outcome { inputs, residual, degrees }
    }
}

type CheckFn = fn(&mut RandomSource, usize, &Rational) -> Outcome;

#[derive(Clone, Copy)]
struct Check {
    name: &'static str,
    run: CheckFn,
}

fn stream_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the check name keeps streams independent across checks.
    name.bytes().fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> SuiteReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    let mut degrees = BTreeSet::new();
    let mut epsilons = BTreeSet::new();
    for check in suite.checks() {
        let check_start = Instant::now();
        let seed = stream_seed(config.seed, check.name);
        let outcomes: Vec<(u64, Rational, Outcome)> = (0..config.trials)
            .into_par_iter()
            .map(|i| {
                let eps = config.epsilon.clone().unwrap_or_else(|| epsilon_for(i));
                let mut src = RandomSource::new(seed, i);
                let out = (check.run)(&mut src, config.dim, &eps);
                (i, eps, out)
            })
            .collect();
        let mut count = 0;
        for (i, eps, out) in outcomes {
            degrees.extend(out.degrees);
            epsilons.insert(eps);
            if let Some(residual) = out.residual {
                count += 1;
                failures.push(Failure { check: check.name.to_string(), trial: i, inputs: out.inputs, residual });
            }
        }
        checks.push(CheckSummary {
            name: check.name.to_string(),
            trials: config.trials,
            failures: count,
            wall_time_ms: check_start.elapsed().as_millis(),
        });
    }
    SuiteReport {
        suite,
        config: config.clone(),
        checks,
        failures,
        degrees,
        epsilons,
        wall_time_ms: start.elapsed().as_millis(),
    }
}

fn diff(lhs: &GenForm, rhs: &GenForm) -> Option<Value> {
    (lhs != rhs).then(|| encode_gen_form(&(lhs - rhs)))
}

fn zero_residual(r: &GenForm) -> Option<Value> {
    (!r.is_zero()).then(|| encode_gen_form(r))
}

fn matrix_diff(lhs: &FormMatrix, rhs: &FormMatrix) -> Option<Value> {
    (lhs != rhs).then(|| encode_form_matrix(&lhs.try_sub(rhs).expect("same shape")))
}

fn field_json(v: &VectorField, eps: &Rational) -> Value {
    encode_vector_field(&GenVectorField::ordinary(v.clone(), eps.clone()))
}

fn sgn(p: i32) -> Rational {
    sign(p.rem_euclid(2) == 1)
}

// ---- gform -------------------------------------------------------------

fn gform_checks() -> Vec<Check> {
    vec![
        Check { name: "gform.d_squared", run: gform_d_squared },
        Check { name: "gform.antiderivation", run: gform_antiderivation },
        Check { name: "gform.interior_leibniz", run: gform_interior_leibniz },
        Check { name: "gform.lie_leibniz", run: gform_lie_leibniz },
        Check { name: "gform.lie_componentwise", run: gform_lie_componentwise },
        Check { name: "gform.zero_form_discrepancy", run: gform_zero_form_discrepancy },
        Check { name: "gform.pullback_morphism", run: gform_pullback_morphism },
    ]
}

fn gform_d_squared(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    Outcome::new(json!({"a": encode_gen_form(&a)}), zero_residual(&a.d().d()), vec![a.degree()])
}

fn gform_antiderivation(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let b = src.any_gen_form(n, eps);
    let lhs = a.wedge(&b).d();
    let rhs = &a.d().wedge(&b) + &a.wedge(&b.d()).scale(&sgn(a.degree()));
    Outcome::new(
        json!({"a": encode_gen_form(&a), "b": encode_gen_form(&b)}),
        diff(&lhs, &rhs),
        vec![a.degree(), b.degree()],
    )
}

fn gform_interior_leibniz(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let b = src.any_gen_form(n, eps);
    let v = src.vector_field(n);
    let lhs = a.wedge(&b).interior(&v);
    let rhs = &a.interior(&v).wedge(&b) + &a.wedge(&b.interior(&v)).scale(&sgn(a.degree()));
    Outcome::new(
        json!({"a": encode_gen_form(&a), "b": encode_gen_form(&b), "v": field_json(&v, eps)}),
        diff(&lhs, &rhs),
        vec![a.degree(), b.degree()],
    )
}

fn gform_lie_leibniz(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let b = src.any_gen_form(n, eps);
    let v = src.vector_field(n);
    let lhs = a.wedge(&b).lie(&v);
    let rhs = &a.lie(&v).wedge(&b) + &a.wedge(&b.lie(&v));
    Outcome::new(
        json!({"a": encode_gen_form(&a), "b": encode_gen_form(&b), "v": field_json(&v, eps)}),
        diff(&lhs, &rhs),
        vec![a.degree(), b.degree()],
    )
}

fn gform_lie_componentwise(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.vector_field(n);
    Outcome::new(
        json!({"a": encode_gen_form(&a), "v": field_json(&v, eps)}),
        diff(&a.lie(&v), &a.lie_componentwise(&v)),
        vec![a.degree()],
    )
}

/// `i_v(gd a) - £_v a = -ε i_v α′ - d(i_v α′) m` for a generalized zero-form.
fn gform_zero_form_discrepancy(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.gen_form(n, 0, eps);
    let v = src.vector_field(n);
    let lhs = &a.d().interior(&v) - &a.lie(&v);
    let iv_soul = a.soul().interior(&v);
    let expected = GenForm::new(iv_soul.scale(&-eps.clone()), -&iv_soul.d(), eps.clone()).expect("zero-form");
    Outcome::new(json!({"a": encode_gen_form(&a), "v": field_json(&v, eps)}), diff(&lhs, &expected), vec![0])
}

fn gform_pullback_morphism(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let phi: Vec<Polynomial> = (0..n).map(|_| src.polynomial_of_degree(n, 1)).collect();
    let a = src.any_gen_form(n, eps);
    let b = src.any_gen_form(n, eps);
    let pull = |x: &GenForm| x.pullback(&phi).expect("matching dimensions");
    let product = diff(&pull(&a.wedge(&b)), &pull(&a).wedge(&pull(&b)));
    let residual = product.or_else(|| diff(&pull(&a.d()), &pull(&a).d()));
    Outcome::new(
        json!({"a": encode_gen_form(&a), "b": encode_gen_form(&b), "phi": phi.iter().map(encode_polynomial).collect::<Vec<_>>()}),
        residual,
        vec![a.degree(), b.degree()],
    )
}

// ---- cartan ------------------------------------------------------------

fn cartan_checks() -> Vec<Check> {
    vec![
        Check { name: "cartan.interior_anticommute", run: cartan_interior_anticommute },
        Check { name: "cartan.lie_interior", run: cartan_lie_interior },
        Check { name: "cartan.lie_lie", run: cartan_lie_lie },
        Check { name: "cartan.d_lie_commute", run: cartan_d_lie_commute },
    ]
}

fn cartan_inputs(src: &mut RandomSource, n: usize, eps: &Rational) -> (GenForm, VectorField, VectorField, Value) {
    let a = src.any_gen_form(n, eps);
    let v = src.vector_field(n);
    let w = src.vector_field(n);
    let inputs = json!({"a": encode_gen_form(&a), "v": field_json(&v, eps), "w": field_json(&w, eps)});
    (a, v, w, inputs)
}

fn cartan_interior_anticommute(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let (a, v, w, inputs) = cartan_inputs(src, n, eps);
    let r = &a.interior(&w).interior(&v) + &a.interior(&v).interior(&w);
    Outcome::new(inputs, zero_residual(&r), vec![a.degree()])
}

fn cartan_lie_interior(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let (a, v, w, inputs) = cartan_inputs(src, n, eps);
    let lhs = &a.interior(&w).lie(&v) - &a.lie(&v).interior(&w);
    Outcome::new(inputs, diff(&lhs, &a.interior(&v.bracket(&w))), vec![a.degree()])
}

fn cartan_lie_lie(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let (a, v, w, inputs) = cartan_inputs(src, n, eps);
    let lhs = &a.lie(&w).lie(&v) - &a.lie(&v).lie(&w);
    Outcome::new(inputs, diff(&lhs, &a.lie(&v.bracket(&w))), vec![a.degree()])
}

fn cartan_d_lie_commute(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let (a, v, _, inputs) = cartan_inputs(src, n, eps);
    Outcome::new(inputs, diff(&a.lie(&v).d(), &a.d().lie(&v)), vec![a.degree()])
}

// ---- super -------------------------------------------------------------

fn super_checks() -> Vec<Check> {
    vec![
        Check { name: "super.wedge", run: super_wedge },
        Check { name: "super.d", run: super_d },
        Check { name: "super.interior_ordinary", run: super_interior_ordinary },
        Check { name: "super.lie_ordinary", run: super_lie_ordinary },
        Check { name: "super.interior_generalized", run: super_interior_generalized },
        Check { name: "super.lie_generalized", run: super_lie_generalized },
        Check { name: "super.graded_algebra", run: super_graded_algebra },
        Check { name: "super.lie_expanded", run: super_lie_expanded },
    ]
}

fn back(f: &crate::superspace::SuperFunction, degree: i32) -> GenForm {
    from_super_of_degree(f, degree).expect("homogeneous image")
}

fn super_wedge(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let b = src.any_gen_form(n, eps);
    let via = back(&to_super(&a).try_mul(&to_super(&b)).expect("same space"), a.degree() + b.degree());
    Outcome::new(
        json!({"a": encode_gen_form(&a), "b": encode_gen_form(&b)}),
        diff(&via, &a.wedge(&b)),
        vec![a.degree(), b.degree()],
    )
}

fn super_d(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let via = back(&to_super(&a).d(), a.degree() + 1);
    Outcome::new(json!({"a": encode_gen_form(&a)}), diff(&via, &a.d()), vec![a.degree()])
}

fn super_interior_ordinary(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.vector_field(n);
    let via = back(&to_super(&a).interior_ordinary(&v).expect("dims"), a.degree() - 1);
    Outcome::new(json!({"a": encode_gen_form(&a), "v": field_json(&v, eps)}), diff(&via, &a.interior(&v)), vec![a.degree()])
}

fn super_lie_ordinary(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.vector_field(n);
    let via = back(&to_super(&a).lie_ordinary(&v).expect("dims"), a.degree());
    Outcome::new(json!({"a": encode_gen_form(&a), "v": field_json(&v, eps)}), diff(&via, &a.lie(&v)), vec![a.degree()])
}

fn super_interior_generalized(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.gen_vector_field(n, eps);
    let via = back(&to_super(&a).interior(&v).expect("dims"), a.degree() - 1);
    Outcome::new(json!({"a": encode_gen_form(&a), "V": encode_vector_field(&v)}), diff(&via, &v.interior(&a)), vec![a.degree()])
}

fn super_lie_generalized(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.gen_vector_field(n, eps);
    let via = back(&to_super(&a).lie(&v).expect("dims"), a.degree());
    Outcome::new(json!({"a": encode_gen_form(&a), "V": encode_vector_field(&v)}), diff(&via, &v.lie(&a)), vec![a.degree()])
}

/// Graded commutativity `fg = (-1)^{|f||g|} gf` and associativity of the Grassmann product.
fn super_graded_algebra(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let b = src.any_gen_form(n, eps);
    let c = src.any_gen_form(n, eps);
    let (f, g, h) = (to_super(&a), to_super(&b), to_super(&c));
    let fg = f.try_mul(&g).expect("same space");
    let gf = g.try_mul(&f).expect("same space");
    let s = sgn(a.degree() * b.degree());
    let comm = fg.try_add(&gf.scale(&-s)).expect("same space");
    let assoc = fg.try_mul(&h).expect("same space").try_add(&f.try_mul(&g.try_mul(&h).expect("same space")).expect("same space").scale(&-Rational::one())).expect("same space");
    let residual = if !comm.is_zero() {
        Some(json!({"commutator": comm.to_string()}))
    } else if !assoc.is_zero() {
        Some(json!({"associator": assoc.to_string()}))
    } else {
        None
    };
    Outcome::new(
        json!({"a": encode_gen_form(&a), "b": encode_gen_form(&b), "c": encode_gen_form(&c)}),
        residual,
        vec![a.degree(), b.degree(), c.degree()],
    )
}

/// The supercommutator Lie derivative equals its expanded operator form.
fn super_lie_expanded(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.gen_vector_field(n, eps);
    let f = to_super(&a);
    let l1 = f.lie(&v).expect("dims");
    let l2 = f.lie_expanded(&v).expect("dims");
    let residual = (l1 != l2).then(|| json!({"supercommutator": l1.to_string(), "expanded": l2.to_string()}));
    Outcome::new(json!({"a": encode_gen_form(&a), "V": encode_vector_field(&v)}), residual, vec![a.degree()])
}

// ---- gvector -----------------------------------------------------------

fn gvector_checks() -> Vec<Check> {
    vec![
        Check { name: "gvector.interior_leibniz", run: gv_interior_leibniz },
        Check { name: "gvector.lie_leibniz", run: gv_lie_leibniz },
        Check { name: "gvector.anticommutator_closed_form", run: gv_anticommutator },
        Check { name: "gvector.two_form_fields_anticommute", run: gv_two_form_anticommute },
        Check { name: "gvector.bracket_defining_relation", run: gv_bracket_defining },
        Check { name: "gvector.jacobi", run: gv_jacobi },
        Check { name: "gvector.reduces_to_ordinary", run: gv_reduces },
        Check { name: "gvector.expanded_paths", run: gv_expanded_paths },
    ]
}

fn gv_interior_leibniz(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let b = src.any_gen_form(n, eps);
    let v = src.gen_vector_field(n, eps);
    let lhs = v.interior(&a.wedge(&b));
    let rhs = &v.interior(&a).wedge(&b) + &a.wedge(&v.interior(&b)).scale(&sgn(a.degree()));
    Outcome::new(
        json!({"a": encode_gen_form(&a), "b": encode_gen_form(&b), "V": encode_vector_field(&v)}),
        diff(&lhs, &rhs),
        vec![a.degree(), b.degree()],
    )
}

fn gv_lie_leibniz(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let b = src.any_gen_form(n, eps);
    let v = src.gen_vector_field(n, eps);
    let lhs = v.lie(&a.wedge(&b));
    let rhs = &v.lie(&a).wedge(&b) + &a.wedge(&v.lie(&b));
    Outcome::new(
        json!({"a": encode_gen_form(&a), "b": encode_gen_form(&b), "V": encode_vector_field(&v)}),
        diff(&lhs, &rhs),
        vec![a.degree(), b.degree()],
    )
}

fn gv_anticommutator(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.gen_vector_field(n, eps);
    let w = src.gen_vector_field(n, eps);
    let lhs = anticommutator(&v, &w, &a).expect("dims");
    let rhs = anticommutator_closed(&v, &w, &a).expect("dims");
    Outcome::new(
        json!({"a": encode_gen_form(&a), "V": encode_vector_field(&v), "W": encode_vector_field(&w)}),
        diff(&lhs, &rhs),
        vec![a.degree()],
    )
}

fn gv_two_form_anticommute(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let xi = src.vector_two_form(n);
    let v = GenVectorField::from_two_form(src.vector_field(n), &xi, eps.clone()).expect("dims");
    let w = GenVectorField::from_two_form(src.vector_field(n), &xi, eps.clone()).expect("dims");
    let r = anticommutator(&v, &w, &a).expect("dims");
    Outcome::new(
        json!({"a": encode_gen_form(&a), "V": encode_vector_field(&v), "W": encode_vector_field(&w)}),
        zero_residual(&r),
        vec![a.degree()],
    )
}

fn gv_bracket_defining(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.gen_vector_field(n, eps);
    let w = src.gen_vector_field(n, eps);
    let lhs = &v.lie(&w.lie(&a)) - &w.lie(&v.lie(&a));
    let rhs = v.bracket(&w).lie(&a);
    Outcome::new(
        json!({"a": encode_gen_form(&a), "V": encode_vector_field(&v), "W": encode_vector_field(&w)}),
        diff(&lhs, &rhs),
        vec![a.degree()],
    )
}

fn gv_jacobi(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let u = src.gen_vector_field(n, eps);
    let v = src.gen_vector_field(n, eps);
    let w = src.gen_vector_field(n, eps);
    let total = &(&u.bracket(&v.bracket(&w)) + &v.bracket(&w.bracket(&u))) + &w.bracket(&u.bracket(&v));
    Outcome::new(
        json!({"U": encode_vector_field(&u), "V": encode_vector_field(&v), "W": encode_vector_field(&w)}),
        (!total.is_zero()).then(|| encode_vector_field(&total)),
        vec![],
    )
}

fn gv_reduces(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.vector_field(n);
    let w = src.vector_field(n);
    let (gv, gw) = (GenVectorField::ordinary(v.clone(), eps.clone()), GenVectorField::ordinary(w.clone(), eps.clone()));
    let residual = diff(&gv.interior(&a), &a.interior(&v)).or_else(|| diff(&gv.lie(&a), &a.lie(&v))).or_else(|| {
        let b = gv.bracket(&gw);
        let expected = GenVectorField::ordinary(v.bracket(&w), eps.clone());
        (b != expected).then(|| encode_vector_field(&(&b - &expected)))
    });
    Outcome::new(json!({"a": encode_gen_form(&a), "v": field_json(&v, eps), "w": field_json(&w, eps)}), residual, vec![a.degree()])
}

fn gv_expanded_paths(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.any_gen_form(n, eps);
    let v = src.gen_vector_field(n, eps);
    let residual = diff(&v.interior(&a), &v.interior_expanded(&a))
        .or_else(|| diff(&v.lie(&a), &v.lie_components(&a)))
        .or_else(|| diff(&v.lie(&a), &v.lie_expanded(&a)));
    Outcome::new(json!({"a": encode_gen_form(&a), "V": encode_vector_field(&v)}), residual, vec![a.degree()])
}

// ---- connection --------------------------------------------------------

fn connection_checks() -> Vec<Check> {
    vec![
        Check { name: "connection.bianchi", run: conn_bianchi },
        Check { name: "connection.curvature_paths", run: conn_curvature_paths },
        Check { name: "connection.gauge_conjugation", run: conn_conjugation },
        Check { name: "connection.covariant_derivative_paths", run: conn_cov_deriv },
        Check { name: "connection.nonmetricity_paths", run: conn_nonmetricity },
        Check { name: "connection.metric_inverse", run: conn_metric_inverse },
    ]
}

fn conn_json(a: &GenConnection) -> Value {
    encode_form_matrix(a.matrix())
}

fn conn_bianchi(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.connection(n, eps);
    let r = a.bianchi_residual();
    Outcome::new(json!({"A": conn_json(&a)}), (!r.is_zero()).then(|| encode_form_matrix(&r)), vec![1])
}

fn conn_curvature_paths(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.connection(n, eps);
    Outcome::new(json!({"A": conn_json(&a)}), matrix_diff(&a.curvature(), &a.curvature_expanded()), vec![1])
}

/// `C` or `C·E` with `C` an invertible constant matrix and `E = 1 + c x_k e_ij`
/// an elementary unipotent, whose inverse is `1 - c x_k e_ij`.
fn random_gauge(src: &mut RandomSource, n: usize) -> (PolyMatrix, PolyMatrix) {
    let (g, inv) = loop {
        let c = src.constant_matrix(n);
        let g = PolyMatrix::from_fn(n, n, |i, j| Polynomial::constant(n, c[i][j].clone()));
        if let Some(inv) = g.inverse() {
            break (g, inv);
        }
    };
    if n < 2 || !src.coin() {
        return (g, inv);
    }
    let i = src.below(n);
    let j = (i + 1 + src.below(n - 1)) % n;
    let entry = Polynomial::var(n, src.below(n)).scale(&src.nonzero_rational());
    let elementary = |sign: &Polynomial| {
        PolyMatrix::from_fn(n, n, |r, c| {
            if r == c {
                Polynomial::one(n)
            } else if (r, c) == (i, j) {
                sign.clone()
            } else {
                Polynomial::zero(n)
            }
        })
    };
    let e = elementary(&entry);
    let e_inv = elementary(&-&entry);
    (g.mul(&e).expect("square"), e_inv.mul(&inv).expect("square"))
}

fn conn_conjugation(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.connection(n, eps);
    let (g, gi) = random_gauge(src, n);
    let a2 = a.transform(&g, &gi).expect("checked inverse");
    let gm = FormMatrix::from_polys(&g, eps);
    let gim = FormMatrix::from_polys(&gi, eps);
    let conj = gim.try_mul(&a.curvature()).and_then(|x| x.try_mul(&gm)).expect("square");
    Outcome::new(
        json!({"A": conn_json(&a), "G": crate::json::encode_poly_matrix(&g)}),
        matrix_diff(&a2.curvature(), &conj),
        vec![1],
    )
}

fn conn_cov_deriv(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.connection(n, eps);
    let v = src.gen_vector_field(n, eps);
    let lhs = a.cov_deriv(&v).expect("dims");
    let rhs = a.cov_deriv_expanded(&v).expect("dims");
    let residual = lhs.iter().zip(&rhs).find_map(|(x, y)| diff(x, y));
    Outcome::new(json!({"A": conn_json(&a), "V": encode_vector_field(&v)}), residual, vec![0])
}

fn random_metric(src: &mut RandomSource, n: usize, eps: &Rational) -> GenMetric {
    let chi = src.symmetric_one_forms(n);
    GenMetric::with_computed_inverse(unimodular_metric(n), &chi, eps).expect("unimodular body")
}

fn conn_nonmetricity(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let a = src.connection(n, eps);
    let g = random_metric(src, n, eps);
    let lhs = a.nonmetricity(&g).expect("dims");
    let rhs = a.nonmetricity_expanded(&g).expect("dims");
    Outcome::new(json!({"A": conn_json(&a), "g": encode_form_matrix(g.matrix())}), matrix_diff(&lhs, &rhs), vec![0])
}

fn conn_metric_inverse(src: &mut RandomSource, n: usize, eps: &Rational) -> Outcome {
    let g = random_metric(src, n, eps);
    let id = FormMatrix::from_polys(&PolyMatrix::identity(n, n), eps);
    let gi = g.inverse();
    let left = gi.try_mul(g.matrix()).expect("square");
    let right = g.matrix().try_mul(&gi).expect("square");
    Outcome::new(json!({"g": encode_form_matrix(g.matrix())}), matrix_diff(&left, &id).or_else(|| matrix_diff(&right, &id)), vec![0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;

    #[test]
    fn every_suite_passes_small() {
        for suite in Suite::MEMBERS {
            let cfg = SuiteConfig { dim: 2, epsilon: None, trials: 6, seed: 11 };
            let report = run_suite(suite, &cfg);
            assert!(report.pass(), "{suite}: {:#}", report.to_json());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = SuiteConfig { dim: 2, epsilon: Some(int(1)), trials: 5, seed: 7 };
        let a = run_suite(Suite::GForm, &cfg).to_json_stable();
        let b = run_suite(Suite::GForm, &cfg).to_json_stable();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn suite_names_parse() {
        for s in ["all", "cartan", "gform", "gvector", "super", "connection"] {
            assert_eq!(s.parse::<Suite>().unwrap().name(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!(Suite::Cartan.check_names().len(), 4);
    }

    #[test]
    fn degrees_and_epsilons_are_covered() {
        let cfg = SuiteConfig { dim: 2, epsilon: None, trials: 30, seed: 1 };
        let report = run_suite(Suite::GForm, &cfg);
        assert_eq!(report.degrees, (-1..=2).collect());
        assert_eq!(report.epsilons.len(), 6);
    }
}
