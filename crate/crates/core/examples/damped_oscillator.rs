//! RK4 integration of the generalized Hamilton equations for the oscillator:
//! `q'' - 2εv0 q' + q = 0`. Prints the error against the closed form, the
//! observed convergence order, and the energy drift that signals damping.

use genform::hamiltonian::{closed_form, integrate_hamilton, order_estimate, OscillatorParams, OscillatorSummary};
use genform::ring::{frac, int};

fn main() -> genform::Result<()> {
    for (eps, v0) in [(int(0), int(1)), (int(1), frac(1, 2)), (int(-1), frac(1, 4))] {
        let params = OscillatorParams::new(eps, v0, 1, 5.0, 1e-3);
        let traj = integrate_hamilton(&params)?;
        let summary = OscillatorSummary::compute(&params, &traj)?;
        println!(
            "εv0 = {:>5}: max_err = {:.2e}, order = {:.2}, energy {:.4} → {:.4}",
            params.damping(),
            summary.max_err,
            summary.order_estimate,
            summary.energy_start,
            summary.energy_end
        );
    }
    let params = OscillatorParams::new(int(1), frac(1, 2), 1, 5.0, 0.5);
    let traj = integrate_hamilton(&params)?;
    println!("t, q, exact q (εv0 = 1/2, coarse grid)");
    for (t, state) in traj.times.iter().zip(&traj.states) {
        let (q, _) = closed_form(params.damping(), 1.0, 0.0, *t);
        println!("{t:.1}, {:.6}, {q:.6}", state[0]);
    }
    println!("order at dt = 1/100: {:.3}", order_estimate(&OscillatorParams::new(int(0), int(1), 1, 5.0, 0.01))?);
    Ok(())
}
