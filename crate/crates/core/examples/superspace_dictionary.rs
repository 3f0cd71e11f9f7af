//! Generalized forms as functions of `x`, odd `ζ^α` and odd `μ` on the
//! reverse-parity tangent bundle. Every operation computed on either side of
//! the dictionary agrees exactly.

use genform::exterior::VectorField;
use genform::random::RandomSource;
use genform::ring::{int, Polynomial};
use genform::superspace::{from_super, to_super, SuperFunction};

fn main() -> genform::Result<()> {
    let n = 3;
    let eps = int(1);
    let mu = SuperFunction::mu(n, eps.clone());
    println!("d μ = {}", mu.d());

    let mut src = RandomSource::new(3, 1);
    let a = src.gen_form(n, 1, &eps);
    let b = src.gen_form(n, 0, &eps);
    let fa = to_super(&a);
    println!("a            = {a}");
    println!("to_super(a)  = {fa}");
    println!("round trip   : {}", from_super(&fa)? == a);

    let wedge = from_super(&fa.try_mul(&to_super(&b))?)?;
    println!("wedge agrees : {}", wedge == a.wedge(&b));
    println!("d agrees     : {}", from_super(&fa.d())? == a.d());

    let v = VectorField::new(vec![Polynomial::parse("x3", n)?, Polynomial::parse("1", n)?, Polynomial::parse("x1*x2", n)?])?;
    println!("i_v agrees   : {}", from_super(&fa.interior_ordinary(&v)?)? == a.interior(&v));
    println!("£_v agrees   : {}", from_super(&fa.lie_ordinary(&v)?)? == a.lie(&v));

    let gv = src.gen_vector_field(n, &eps);
    println!("i_V agrees   : {}", from_super(&fa.interior(&gv)?)? == gv.interior(&a));
    println!("£_V agrees   : {}", from_super(&fa.lie(&gv)?)? == gv.lie(&a));
    Ok(())
}
