//! Seeded random inputs for the identity suites.
//!
//! Coefficients come from `{0, ±1, ±2, ±1/2}`, polynomials have total degree
//! at most 2 and each candidate monomial or form component is present with
//! probability one half. A trial's inputs depend only on `(seed, index)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connection::{connection_forms, FormRows, GenConnection};
use crate::exterior::{OrdinaryForm, Tensor11, VectorField};
use crate::gform::GenForm;
use crate::gvector::GenVectorField;
use crate::ring::{frac, int, Polynomial, Rational};

/// The values of `ε` a suite run cycles through.
pub fn epsilon_cycle() -> [Rational; 6] {
    [int(0), int(1), int(-1), int(2), int(-2), frac(1, 2)]
}

/// `ε` for trial `index` of a run without a fixed `ε`.
pub fn epsilon_for(index: u64) -> Rational {
    let cycle = epsilon_cycle();
    cycle[(index % cycle.len() as u64) as usize].clone()
}

/// All exponent vectors in `nvars` variables with total degree `<= max`.
pub fn monomials(nvars: usize, max: u32) -> Vec<Vec<u32>> {
    fn go(prefix: &mut Vec<u32>, left: usize, budget: u32, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=budget {
            prefix.push(k);
            go(prefix, left - 1, budget - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(nvars), nvars, max, &mut out);
    out
}

/// Total degree of random polynomial coefficients.
const MAX_DEGREE: u32 = 2;

#[derive(Clone, Debug)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomSource { rng }
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        const NONZERO: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];
        let (a, b) = NONZERO[self.rng.gen_range(0..NONZERO.len())];
        frac(a, b)
    }

    pub fn rational(&mut self) -> Rational {
        if self.rng.gen_range(0..7) == 0 {
            int(0)
        } else {
            self.nonzero_rational()
        }
    }

    pub fn polynomial(&mut self, nvars: usize) -> Polynomial {
        self.polynomial_of_degree(nvars, MAX_DEGREE)
    }

    pub fn polynomial_of_degree(&mut self, nvars: usize, max_degree: u32) -> Polynomial {
        let terms: Vec<_> = monomials(nvars, max_degree)
            .into_iter()
            .filter_map(|m| self.coin().then(|| (m, self.nonzero_rational())))
            .collect();
        Polynomial::from_terms(nvars, terms)
    }

    /// A generalized degree in `-1..=n`.
    pub fn degree(&mut self, nvars: usize) -> i32 {
        self.rng.gen_range(-1..=nvars as i32)
    }

    pub fn form(&mut self, nvars: usize, degree: i32) -> OrdinaryForm {
        if degree < 0 || degree as usize > nvars {
            return OrdinaryForm::zero(nvars, degree);
        }
        let mut comps = Vec::new();
        for m in (0u32..1 << nvars).filter(|m| m.count_ones() as i32 == degree) {
            if self.coin() {
                comps.push((crate::exterior::basis_indices(m), self.polynomial(nvars)));
            }
        }
        OrdinaryForm::from_components(nvars, degree, comps).expect("sorted basis indices")
    }

    pub fn gen_form(&mut self, nvars: usize, degree: i32, epsilon: &Rational) -> GenForm {
        let body = self.form(nvars, degree);
        let soul = self.form(nvars, degree + 1);
        GenForm::new(body, soul, epsilon.clone()).expect("consistent degrees")
    }

    pub fn any_gen_form(&mut self, nvars: usize, epsilon: &Rational) -> GenForm {
        let p = self.degree(nvars);
        self.gen_form(nvars, p, epsilon)
    }

    pub fn vector_field(&mut self, nvars: usize) -> VectorField {
        VectorField::new((0..nvars).map(|_| self.polynomial(nvars)).collect()).expect("square field")
    }

    pub fn tensor(&mut self, nvars: usize) -> Tensor11 {
        Tensor11::from_fn(nvars, |_, _| if self.coin() { self.polynomial(nvars) } else { Polynomial::zero(nvars) })
    }

    pub fn gen_vector_field(&mut self, nvars: usize, epsilon: &Rational) -> GenVectorField {
        let v = self.vector_field(nvars);
        let vt = self.tensor(nvars);
        GenVectorField::new(v, vt, epsilon.clone()).expect("consistent dimensions")
    }

    /// A vector-valued two-form `Ξ^α`, one ordinary two-form per `α`.
    pub fn vector_two_form(&mut self, nvars: usize) -> Vec<OrdinaryForm> {
        (0..nvars).map(|_| self.form(nvars, 2)).collect()
    }

    /// A matrix of random ordinary `degree`-forms.
    pub fn form_rows(&mut self, nvars: usize, degree: i32) -> FormRows {
        (0..nvars).map(|_| (0..nvars).map(|_| self.form(nvars, degree)).collect()).collect()
    }

    /// Symmetric matrix of random one-forms.
    pub fn symmetric_one_forms(&mut self, nvars: usize) -> FormRows {
        let mut rows = vec![vec![OrdinaryForm::zero(nvars, 1); nvars]; nvars];
        for i in 0..nvars {
            for j in i..nvars {
                let f = self.form(nvars, 1);
                rows[i][j] = f.clone();
                rows[j][i] = f;
            }
        }
        rows
    }

    /// Antisymmetric matrix of random two-forms.
    pub fn antisymmetric_two_forms(&mut self, nvars: usize) -> FormRows {
        let mut rows = vec![vec![OrdinaryForm::zero(nvars, 2); nvars]; nvars];
        for i in 0..nvars {
            for j in i + 1..nvars {
                let f = self.form(nvars, 2);
                rows[j][i] = -&f;
                rows[i][j] = f;
            }
        }
        rows
    }

    /// Torsion-free one-forms from Christoffel symbols symmetric in the lower pair.
    pub fn torsion_free_alpha(&mut self, nvars: usize) -> FormRows {
        let mut g = vec![vec![vec![Polynomial::zero(nvars); nvars]; nvars]; nvars];
        for plane in g.iter_mut() {
            for nu in 0..nvars {
                for rho in nu..nvars {
                    if self.coin() {
                        let p = self.polynomial(nvars);
                        plane[nu][rho] = p.clone();
                        plane[rho][nu] = p;
                    }
                }
            }
        }
        connection_forms(&g)
    }

    pub fn connection(&mut self, nvars: usize, epsilon: &Rational) -> GenConnection {
        let alpha = self.form_rows(nvars, 1);
        let beta = self.form_rows(nvars, 2);
        GenConnection::from_parts(&alpha, &beta, epsilon).expect("consistent degrees")
    }

    /// A constant matrix with entries from the coefficient set.
    pub fn constant_matrix(&mut self, size: usize) -> Vec<Vec<Rational>> {
        (0..size).map(|_| (0..size).map(|_| self.rational()).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(4, 2).len(), 15);
        assert_eq!(monomials(0, 2), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = RandomSource::new(7, 3).polynomial(3);
        let b = RandomSource::new(7, 3).polynomial(3);
        assert_eq!(a, b);
        let draws: Vec<_> = (0..8).map(|i| RandomSource::new(7, i).polynomial(3)).collect();
        assert!(draws.iter().any(|d| *d != draws[0]));
    }

    #[test]
    fn degrees_cover_the_range() {
        let mut src = RandomSource::new(1, 0);
        let mut seen = [false; 5];
        for _ in 0..200 {
            seen[(src.degree(3) + 1) as usize] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }
}
