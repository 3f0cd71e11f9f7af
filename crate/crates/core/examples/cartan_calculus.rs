//! Ordinary vector fields acting on generalized forms: the four Cartan
//! identities hold exactly, with `i_v m = 0` and `£_v m = 0`.

use genform::exterior::VectorField;
use genform::gform::GenForm;
use genform::random::RandomSource;
use genform::ring::{int, Polynomial};

fn main() -> genform::Result<()> {
    let n = 3;
    let eps = int(-2);
    let v = VectorField::new(vec![Polynomial::parse("x2", n)?, Polynomial::parse("-x1", n)?, Polynomial::parse("x3^2", n)?])?;
    let w = VectorField::coordinate(n, 0);
    let mut src = RandomSource::new(11, 0);
    let a = src.gen_form(n, 1, &eps);
    println!("a        = {a}");
    println!("i_v m    = {}", GenForm::m(n, eps.clone()).interior(&v));
    println!("£_v m    = {}", GenForm::m(n, eps.clone()).lie(&v));

    let anti = a.interior(&v).interior(&w).try_add(&a.interior(&w).interior(&v))?;
    println!("i_v i_w + i_w i_v = 0        : {}", anti.is_zero());

    let vw = v.bracket(&w);
    let lie_int = &a.interior(&w).lie(&v) - &a.lie(&v).interior(&w);
    println!("[£_v, i_w] = i_[v,w]         : {}", lie_int == a.interior(&vw));

    let lie_lie = &a.lie(&w).lie(&v) - &a.lie(&v).lie(&w);
    println!("[£_v, £_w] = £_[v,w]         : {}", lie_lie == a.lie(&vw));

    println!("d £_v = £_v d                : {}", a.lie(&v).d() == a.d().lie(&v));
    println!("£_v = d i_v + i_v d          : {}", a.lie(&v) == &a.interior(&v).d() + &a.d().interior(&v));
    Ok(())
}
