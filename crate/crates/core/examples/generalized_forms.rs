//! Generalized forms `α + α′m`: the product rule for `m`, the exterior
//! derivative with `dm = ε`, and exact primitives of closed forms.

use genform::exterior::OrdinaryForm;
use genform::gform::GenForm;
use genform::ring::{frac, int, Polynomial};

fn main() -> genform::Result<()> {
    let n = 3;
    let eps = frac(1, 2);
    let p = |s: &str| Polynomial::parse(s, n);

    let m = GenForm::m(n, eps.clone());
    let dx1 = GenForm::ordinary(OrdinaryForm::dx(n, 0), eps.clone());
    println!("m        = {m}");
    println!("dm       = {}", m.d());
    println!("m·m      = {}", m.wedge(&m));
    println!("dx1·m    = {}", dx1.wedge(&m));
    println!("m·dx1    = {}", m.wedge(&dx1));

    // a = x1 x2 dx3 + x3 dx1 dx2 m, a generalized one-form.
    let body = OrdinaryForm::dx(n, 2).mul_scalar(&p("x1*x2")?);
    let soul = OrdinaryForm::basis(n, &[0, 1]).mul_scalar(&p("x3")?);
    let a = GenForm::new(body, soul, eps.clone())?;
    let b = GenForm::scalar(p("x1^2 - 2*x3")?, eps.clone()).try_add(&m.mul_scalar(&p("x2")?).d())?;
    println!("a        = {a}");
    println!("b        = {b}");
    println!("da       = {}", a.d());
    println!("d(da)    = {}  (zero: {})", a.d().d(), a.d().d().is_zero());

    // d(ab) = (da)b + (-1)^p a(db)
    let lhs = a.wedge(&b).d();
    let rhs = a.d().wedge(&b).try_add(&a.wedge(&b.d()).scale(&int(-1)))?;
    println!("anti-derivation holds: {}", lhs == rhs);

    let exact = a.d();
    let primitive = exact.primitive().expect("closed forms are exact on ℝⁿ");
    println!("primitive of da = {primitive}");
    println!("d(primitive) == da: {}", primitive.d() == exact);
    Ok(())
}
