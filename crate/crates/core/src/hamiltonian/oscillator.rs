//! Numerical integration of the generalized Hamilton equations for
//! `h = Σ ½((q^a)² + p_a²)`:
//!
//! ```text
//! dq^a/dt = p_a,   dp_a/dt = -q^a + 2 ε v0 p_a
//! ```
//!
//! so each `q^a` solves `q'' - 2c q' + q = 0` with `c = ε v0`.

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::VectorField;
use crate::ring::Rational;

#[derive(Clone, Debug)]
pub struct OscillatorParams {
    pub epsilon: Rational,
    pub v0: Rational,
    pub l: usize,
    pub q0: Vec<f64>,
    pub p0: Vec<f64>,
    pub t_end: f64,
    pub dt: f64,
}

impl OscillatorParams {
    /// `q^a(0) = 1`, `p_a(0) = 0` for every `a`.
    pub fn new(epsilon: Rational, v0: Rational, l: usize, t_end: f64, dt: f64) -> Self {
        OscillatorParams { epsilon, v0, l, q0: vec![1.0; l], p0: vec![0.0; l], t_end, dt }
    }

    /// The damping coefficient `c = ε v0`.
    pub fn damping(&self) -> f64 {
        (&self.epsilon * &self.v0).to_f64().expect("finite rational")
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::invalid(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.l == 0 || self.q0.len() != self.l || self.p0.len() != self.l {
            return Err(Error::invalid("initial conditions must have length l >= 1"));
        }
        Ok(())
    }
}

/// States `[q^1..q^l, p_1..p_l]` at uniformly spaced times.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub l: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    /// CSV with header `t,q1..ql,p1..pl`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for a in 1..=self.l {
            out.push_str(&format!(",q{a}"));
        }
        for a in 1..=self.l {
            out.push_str(&format!(",p{a}"));
        }
        out.push('\n');
        for (t, y) in self.times.iter().zip(&self.states) {
            out.push_str(&format!("{t:.6}"));
            for v in y {
                out.push_str(&format!(",{v:.12e}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn last(&self) -> &[f64] {
        self.states.last().expect("trajectory has the initial state")
    }
}

/// Classical fixed-step RK4 for `y' = f(t, y)` on `[0, t_end]`. The step is
/// `t_end / round(t_end / dt)` so the final time is hit exactly.
pub fn rk4<F>(f: F, y0: &[f64], t_end: f64, dt: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let steps = ((t_end / dt).round() as usize).max(1);
    let h = t_end / steps as f64;
    let n = y0.len();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    times.push(0.0);
    states.push(y.clone());
    for i in 0..steps {
        let t = i as f64 * h;
        f(t, &y, &mut k1);
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * h * k1[j];
        }
        f(t + 0.5 * h, &tmp, &mut k2);
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * h * k2[j];
        }
        f(t + 0.5 * h, &tmp, &mut k3);
        for j in 0..n {
            tmp[j] = y[j] + h * k3[j];
        }
        f(t + h, &tmp, &mut k4);
        for j in 0..n {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let t_next = (i + 1) as f64 * h;
        if let Some(bad) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite state component {bad} at t = {t_next}")));
        }
        times.push(t_next);
        states.push(y.clone());
    }
    Ok((times, states))
}

/// Integrate the generalized Hamilton equations of the oscillator.
pub fn integrate_hamilton(params: &OscillatorParams) -> Result<Trajectory> {
    params.validate()?;
    let l = params.l;
    let c = params.damping();
    let y0: Vec<f64> = params.q0.iter().chain(&params.p0).copied().collect();
    let (times, states) = rk4(
        |_, y, dy| {
            for a in 0..l {
                dy[a] = y[l + a];
                dy[l + a] = -y[a] + 2.0 * c * y[l + a];
            }
        },
        &y0,
        params.t_end,
        params.dt,
    )?;
    Ok(Trajectory { l, times, states })
}

/// Integrate the ordinary part of a symbolic vector field by evaluating its
/// polynomial components.
pub fn integrate_field(field: &VectorField, y0: &[f64], t_end: f64, dt: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    crate::error::check_dim(field.nvars(), y0.len())?;
    rk4(
        |_, y, dy| {
            for (a, c) in field.components().iter().enumerate() {
                dy[a] = c.eval(y).expect("dimension checked");
            }
        },
        y0,
        t_end,
        dt,
    )
}

/// Exact `(q(t), p(t))` for `q'' - 2c q' + q = 0`, `p = q'`.
pub fn closed_form(c: f64, q0: f64, p0: f64, t: f64) -> (f64, f64) {
    let disc = 1.0 - c * c;
    let e = (c * t).exp();
    if disc.abs() < 1e-14 {
        let b = p0 - c * q0;
        let q = e * (q0 + b * t);
        (q, c * q + e * b)
    } else if disc > 0.0 {
        let w = disc.sqrt();
        let b = (p0 - c * q0) / w;
        let (s, co) = (w * t).sin_cos();
        let q = e * (q0 * co + b * s);
        (q, c * q + e * w * (b * co - q0 * s))
    } else {
        let r = (-disc).sqrt();
        let (rp, rm) = (c + r, c - r);
        let a = (p0 - rm * q0) / (rp - rm);
        let b = q0 - a;
        let (ep, em) = ((rp * t).exp(), (rm * t).exp());
        (a * ep + b * em, a * rp * ep + b * rm * em)
    }
}

/// Largest deviation of any `q^a` or `p_a` from the closed form.
pub fn max_error(traj: &Trajectory, params: &OscillatorParams) -> f64 {
    let c = params.damping();
    let l = traj.l;
    let mut worst = 0.0_f64;
    for (t, y) in traj.times.iter().zip(&traj.states) {
        for a in 0..l {
            let (q, p) = closed_form(c, params.q0[a], params.p0[a], *t);
            worst = worst.max((y[a] - q).abs()).max((y[l + a] - p).abs());
        }
    }
    worst
}

/// Coarse step of the convergence study; the fine step is half of it.
pub const ORDER_STEP: f64 = 0.1;

/// `log2(err(h) / err(h/2))` at `h = ORDER_STEP` over the same interval.
pub fn order_estimate(params: &OscillatorParams) -> Result<f64> {
    let coarse = OscillatorParams { dt: ORDER_STEP, ..params.clone() };
    let fine = OscillatorParams { dt: ORDER_STEP / 2.0, ..params.clone() };
    let e1 = max_error(&integrate_hamilton(&coarse)?, &coarse);
    let e2 = max_error(&integrate_hamilton(&fine)?, &fine);
    Ok((e1 / e2).log2())
}

/// `E = Σ ½((q^a)² + p_a²)`.
pub fn energy(state: &[f64]) -> f64 {
    state.iter().map(|v| 0.5 * v * v).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorSummary {
    pub steps: usize,
    pub max_err: f64,
    pub order_estimate: f64,
    pub energy_start: f64,
    pub energy_end: f64,
}

impl OscillatorSummary {
    pub fn compute(params: &OscillatorParams, traj: &Trajectory) -> Result<Self> {
        Ok(OscillatorSummary {
            steps: traj.times.len() - 1,
            max_err: max_error(traj, params),
            order_estimate: order_estimate(params)?,
            energy_start: energy(&traj.states[0]),
            energy_end: energy(traj.last()),
        })
    }

    pub fn to_json(&self, params: &OscillatorParams) -> Value {
        json!({
            "epsilon": params.epsilon.to_string(),
            "v0": params.v0.to_string(),
            "l": params.l,
            "t_end": params.t_end,
            "dt": params.dt,
            "steps": self.steps,
            "max_err": self.max_err,
            "order_estimate": self.order_estimate,
            "energy_start": self.energy_start,
            "energy_end": self.energy_end,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{frac, int};

    #[test]
    fn undamped_matches_cosine() {
        let params = OscillatorParams::new(int(0), int(1), 1, 5.0, 1e-3);
        let traj = integrate_hamilton(&params).unwrap();
        assert_eq!(traj.times.len(), 5001);
        let err = traj.times.iter().zip(&traj.states).map(|(t, y)| (y[0] - t.cos()).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn closed_form_regimes_satisfy_the_ode() {
        for c in [0.0, 0.5, -0.3, 1.0, 1.5, -2.0] {
            let h = 1e-4;
            for t in [0.3, 1.7] {
                let (_, pm) = closed_form(c, 0.7, -0.2, t - h);
                let (q, p) = closed_form(c, 0.7, -0.2, t);
                let (_, pp) = closed_form(c, 0.7, -0.2, t + h);
                let qdd = (pp - pm) / (2.0 * h);
                let scale = 1.0 + q.abs() + p.abs() + qdd.abs();
                assert!((qdd - 2.0 * c * p + q).abs() < 1e-6 * scale, "c={c} t={t}");
            }
            let (q0, p0) = closed_form(c, 0.7, -0.2, 0.0);
            assert!((q0 - 0.7).abs() < 1e-14 && (p0 + 0.2).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_steps() {
        assert!(integrate_hamilton(&OscillatorParams::new(int(0), int(1), 1, 5.0, 0.0)).is_err());
        assert!(integrate_hamilton(&OscillatorParams::new(int(0), int(1), 1, -1.0, 0.1)).is_err());
        let blowup = OscillatorParams::new(int(1000), int(1000), 1, 10.0, 0.1);
        assert!(integrate_hamilton(&blowup).is_err());
    }

    #[test]
    fn fourth_order() {
        let params = OscillatorParams::new(int(1), frac(1, 2), 2, 5.0, 1e-3);
        let order = order_estimate(&params).unwrap();
        assert!(order > 3.8 && order < 4.3, "{order}");
    }

    #[test]
    fn csv_layout() {
        let params = OscillatorParams::new(int(0), int(1), 2, 0.2, 0.1);
        let csv = integrate_hamilton(&params).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,q1,q2,p1,p2"));
        assert_eq!(lines.count(), 3);
    }
}
