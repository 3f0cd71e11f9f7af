//! General exterior derivatives `dm = ϑ - φm` on a cover: chart data
//! `φ = dξ`, `ϑ = τ e^{-ξ}`, Čech validation of the overlap constants, and
//! rescaling to a canonical `m̃` with constant `dm̃`.

use genform::cover::{canonicalize, glue_validate, ideal_residual, ChartData, CoverData, ExpForm, Overlap};
use genform::ring::{int, ExpPoly, Polynomial, Rational};

fn chart(id: &str, xi: &str, r: i64, s: i64) -> genform::Result<ChartData> {
    ChartData::new(id, Polynomial::parse(xi, 1)?, ExpPoly::exp_constant(1, int(r), int(s)))
}

fn overlap(i: &str, j: &str, tau: i64) -> Overlap {
    Overlap { i: i.into(), j: j.into(), tau: int(tau) }
}

fn main() -> genform::Result<()> {
    let x = Polynomial::parse("x1", 1)?;
    let theta = ExpPoly::exp(-&x);
    let phi = ExpForm::dx(1, 0);
    let (r1, r2) = ideal_residual(&theta, &phi)?;
    println!("ϑ = e^(-x), φ = dx: ideal residual zero: {}", r1.is_zero() && r2.is_zero());

    let cover = CoverData::new(1, vec![chart("1", "x1 + 3", 1, 3)?, chart("2", "x1", 1, 0)?], vec![overlap("1", "2", 3)], vec![])?;
    let report = glue_validate(&cover);
    println!("two charts: valid = {}, case = {:?}", report.valid, report.case.map(|c| c.label()));
    let eps: Rational = int(2);
    let canon = canonicalize(&cover, Some(&eps))?;
    for c in &canon.charts {
        println!("chart {}: c = {}, m̃ = ({}) m", c.id, c.c, c.m_factor);
    }
    println!("dm̃ = {}", canon.dm);

    let broken = CoverData::new(
        1,
        vec![chart("1", "x1 + 1", 0, 0)?, chart("2", "x1", 0, 0)?, chart("3", "x1 - 1", 0, 0)?],
        vec![overlap("1", "2", 1), overlap("2", "3", 1), overlap("3", "1", 1)],
        vec![["1".into(), "2".into(), "3".into()]],
    )?;
    let report = glue_validate(&broken);
    println!("broken triple: valid = {}, issues = {:?}", report.valid, report.issues);
    Ok(())
}
