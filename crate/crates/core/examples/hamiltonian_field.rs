//! Generalized Hamiltonian vector fields: `i_{V_H} s = -dH` for
//! `s = Ω + Υm` and `H = h + km`, invariance `£_{V_H} s = 0`, gauge freedom
//! `H → H + d(lm)` and closure of the bracket of Hamiltonian fields.

use genform::gform::GenForm;
use genform::hamiltonian::{gauge_shift, oscillator_hamiltonian, symplectic_field, symplectic_problem, standard_omega, GenSymplectic};
use genform::exterior::OrdinaryForm;
use genform::ring::{frac, int, Polynomial};

fn main() -> genform::Result<()> {
    // Symplectic coordinates (q, p) on ℝ², k = 2 v0 p dq.
    let (eps, v0) = (int(1), frac(1, 2));
    let h = oscillator_hamiltonian(1);
    let (s, hh) = symplectic_problem(1, &eps, &v0, &h);
    let v = s.hamiltonian_vf(&hh)?;
    println!("H        = {hh}");
    println!("V_H      = {v:?}");
    println!("matches the closed form: {}", v == symplectic_field(1, &eps, &v0, &h));
    println!("i_V s + dH = 0: {}", s.residual(&v, &hh)?.is_zero());
    println!("£_V s = 0     : {}", v.lie(s.form()).is_zero());

    let shifted = gauge_shift(&hh, &Polynomial::parse("x1^2 - 3*x2", 2)?)?;
    let vs = s.hamiltonian_vf(&shifted)?;
    println!("gauge-shifted H keeps the relation: {}", s.residual(&vs, &shifted)?.is_zero());

    // A curved four-dimensional form: Ω = dp∧dq + x1 x3 dx1dx2, Υ = dΩ/ε.
    let n = 4;
    let eps = int(2);
    let omega = &standard_omega(2) + &OrdinaryForm::basis(n, &[0, 1]).mul_scalar(&Polynomial::parse("x3*x4", n)?);
    let sym = GenSymplectic::with_computed_inverse(GenForm::new(omega.clone(), omega.d().scale(&eps.recip()), eps.clone())?)?;
    let h = GenForm::new(
        OrdinaryForm::scalar(Polynomial::parse("x1*x4 + x2^2", n)?),
        OrdinaryForm::dx(n, 2).mul_scalar(&Polynomial::parse("x1", n)?),
        eps.clone(),
    )?;
    let g = GenForm::scalar(Polynomial::parse("x3 - x2*x4", n)?, eps.clone());
    let vh = sym.hamiltonian_vf(&h)?;
    let vg = sym.hamiltonian_vf(&g)?;
    println!("n = 4: i_V s + dH = 0: {}, £_V s = 0: {}", sym.residual(&vh, &h)?.is_zero(), vh.lie(sym.form()).is_zero());
    let k = sym.bracket_hamiltonian(&vh, &vg)?;
    println!("[V_H, V_G] is Hamiltonian for K = {k}");
    Ok(())
}
