//! Generalized connections `A = α + βm`: curvature, the Bianchi identity,
//! gauge transformations, and both cases of the metric-compatible
//! construction with exactly vanishing non-metricity.

use genform::connection::{
    case_i_curvature_formula, levi_civita, metric_connection_eps, metric_connection_eps0, unimodular_metric,
    FormMatrix, GenMetric,
};
use genform::random::RandomSource;
use genform::ring::{int, PolyMatrix, Polynomial};

fn unipotent(n: usize, entry: &str) -> genform::Result<PolyMatrix> {
    let e = Polynomial::parse(entry, n)?;
    Ok(PolyMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 1) => e.clone(),
        _ if i == j => Polynomial::constant(n, int(1)),
        _ => Polynomial::zero(n),
    }))
}

fn main() -> genform::Result<()> {
    let n = 2;
    let mut src = RandomSource::new(5, 0);

    let eps = int(1);
    let a = src.connection(n, &eps);
    println!("random A: Bianchi residual DF = 0: {}", a.bianchi_residual().is_zero());
    println!("F = gdA + A·A agrees with its body/soul expansion: {}", a.curvature() == a.curvature_expanded());
    let (g, g_inv) = (unipotent(n, "x1")?, unipotent(n, "-x1")?);
    let a2 = a.transform(&g, &g_inv)?;
    let conjugated = FormMatrix::from_polys(&g_inv, &eps)
        .try_mul(&a.curvature())?
        .try_mul(&FormMatrix::from_polys(&g, &eps))?;
    println!("F transforms as G⁻¹ F G: {}", a2.curvature() == conjugated);

    // Unimodular polynomial metric: γ⁻¹ and the Christoffel forms stay polynomial.
    let gamma = unimodular_metric(n);
    let gamma_inv = gamma.inverse().expect("unimodular metric");
    let alpha = levi_civita(&gamma, &gamma_inv)?;
    let entries: Vec<Vec<String>> = gamma.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    println!("γ = {entries:?}");

    let zero = int(0);
    let chi = src.symmetric_one_forms(n);
    let metric = GenMetric::new(gamma.clone(), gamma_inv.clone(), &chi, &zero)?;
    let conn = metric_connection_eps0(&metric, &alpha, None)?;
    println!("ε = 0: Q = 0: {}", conn.nonmetricity(&metric)?.is_zero());
    println!("ε = 0: F = 𝓕 + ½(𝓕χ - χ𝓕)m: {}", conn.curvature() == case_i_curvature_formula(&metric, &alpha));

    let eps = int(-2);
    let (metric, conn) = metric_connection_eps(&gamma, &gamma_inv, &alpha, None, &eps)?;
    println!("ε = -2: Q = 0: {}", conn.nonmetricity(&metric)?.is_zero());
    println!("ε = -2, metric connection α: ordinary metric, A = α, F = 𝓕: {}", conn.beta().iter().flatten().all(|b| b.is_zero()));

    let alpha = src.torsion_free_alpha(n);
    let (metric, conn) = metric_connection_eps(&PolyMatrix::identity(n, n), &PolyMatrix::identity(n, n), &alpha, None, &eps)?;
    println!("random torsion-free α, γ = 1: Q = 0 with g = γ + q m / ε: {}", conn.nonmetricity(&metric)?.is_zero());
    Ok(())
}
