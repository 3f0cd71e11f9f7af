//! Property tests over seeded random inputs. Each case draws its inputs
//! from a `RandomSource`, so proptest shrinks toward small seeds.

use num_traits::Zero;
use proptest::prelude::*;
use serde_json::Value;

use genform::cover::{canonicalize, glue_validate, CoverData};
use genform::gform::GenForm;
use genform::gvector::d_split;
use genform::json::{decode_cover, decode_gen_form, encode_gen_form, Node};
use genform::random::{epsilon_for, RandomSource};
use genform::ring::{int, Polynomial, Rational};
use genform::superspace::{from_super_of_degree, to_super};

fn setup() -> impl Strategy<Value = (RandomSource, usize, Rational)> {
    (any::<u64>(), 0u64..6, 1usize..=4).prop_map(|(seed, e, n)| (RandomSource::new(seed, e), n, epsilon_for(e)))
}

fn parity(p: i32) -> Rational {
    if p.rem_euclid(2) == 1 {
        int(-1)
    } else {
        int(1)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_ring_laws((mut src, n, _) in setup()) {
        let (p, q, r) = (src.polynomial(n), src.polynomial(n), src.polynomial(n));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_morphism((mut src, n, _) in setup(), xs in prop::collection::vec(-5i64..5, 4)) {
        let (p, q) = (src.polynomial(n), src.polynomial(n));
        let point: Vec<Rational> = xs[..n].iter().map(|&x| int(x)).collect();
        let (ep, eq) = (p.eval_exact(&point).unwrap(), q.eval_exact(&point).unwrap());
        prop_assert_eq!((&p * &q).eval_exact(&point).unwrap(), &ep * &eq);
        prop_assert_eq!((&p + &q).eval_exact(&point).unwrap(), &ep + &eq);
    }

    #[test]
    fn polynomial_text_round_trips((mut src, n, _) in setup()) {
        let p = src.polynomial(n);
        prop_assert_eq!(Polynomial::parse(&p.to_string(), n).unwrap(), p);
    }

    #[test]
    fn gd_squares_to_zero((mut src, n, eps) in setup()) {
        let a = src.any_gen_form(n, &eps);
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn product_is_graded_commutative((mut src, n, eps) in setup()) {
        let a = src.any_gen_form(n, &eps);
        let b = src.any_gen_form(n, &eps);
        let s = parity(a.degree() * b.degree());
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&s));
    }

    #[test]
    fn product_is_associative((mut src, n, eps) in setup()) {
        let (a, b, c) = (src.any_gen_form(n, &eps), src.any_gen_form(n, &eps), src.any_gen_form(n, &eps));
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
    }

    #[test]
    fn d_splits_into_epsilon_free_and_m_parts((mut src, n, eps) in setup()) {
        let a = src.any_gen_form(n, &eps);
        let (d0, d1) = d_split(&a);
        prop_assert_eq!(&d0 + &d1.scale(&eps), a.d());
    }

    #[test]
    fn superspace_map_is_an_algebra_morphism((mut src, n, eps) in setup()) {
        let a = src.any_gen_form(n, &eps);
        let b = src.any_gen_form(n, &eps);
        prop_assert_eq!(from_super_of_degree(&to_super(&a), a.degree()).unwrap(), a.clone());
        let product = to_super(&a).try_mul(&to_super(&b)).unwrap();
        prop_assert_eq!(product, to_super(&a.wedge(&b)));
        prop_assert_eq!(to_super(&a).d(), to_super(&a.d()));
    }

    #[test]
    fn gen_form_json_round_trips((mut src, n, eps) in setup()) {
        let a = src.any_gen_form(n, &eps);
        let v: Value = encode_gen_form(&a);
        prop_assert_eq!(decode_gen_form(Node::root(&v), Some(n), Some(&eps)).unwrap(), a);
    }

    #[test]
    fn generalized_bracket_is_antisymmetric((mut src, n, eps) in setup()) {
        let v = src.gen_vector_field(n, &eps);
        let w = src.gen_vector_field(n, &eps);
        prop_assert_eq!(v.bracket(&w), w.bracket(&v).scale(&int(-1)));
        prop_assert!(v.bracket(&v).is_zero());
    }

    #[test]
    fn ordinary_fields_reduce_to_ordinary_calculus((mut src, n, eps) in setup()) {
        let v = src.vector_field(n);
        let a = src.any_gen_form(n, &eps);
        let gv = genform::gvector::GenVectorField::ordinary(v.clone(), eps.clone());
        prop_assert_eq!(gv.interior(&a), a.interior(&v));
        prop_assert_eq!(gv.lie(&a), a.lie(&v));
    }

    #[test]
    fn curvature_obeys_bianchi((mut src, _n, eps) in setup()) {
        let a = src.connection(2, &eps);
        prop_assert!(a.bianchi_residual().is_zero());
        prop_assert_eq!(a.curvature(), a.curvature_expanded());
    }

    #[test]
    fn closed_forms_have_primitives((mut src, n, eps) in setup()) {
        let a = src.any_gen_form(n, &eps);
        let exact = a.d();
        if exact.degree() >= 0 && !exact.is_zero() {
            let k = exact.primitive().expect("exact forms are exact");
            prop_assert_eq!(k.d(), exact);
        }
    }

    #[test]
    fn cover_regauge_is_invisible(chi_num in -6i64..6, chi_den in 1i64..4, eps_idx in 1u64..6) {
        let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/three_chart.json")).unwrap();
        let value: Value = serde_json::from_str(&text).unwrap();
        let cover: CoverData = decode_cover(Node::root(&value)).unwrap();
        let chi = Rational::new(chi_num, chi_den);
        let eps = epsilon_for(eps_idx);
        prop_assume!(!eps.is_zero());
        for chart in cover.charts() {
            let shifted = cover.regauge(&chart.id, &chi).unwrap();
            let glue = glue_validate(&shifted);
            prop_assert!(glue.valid, "{:?}", glue.issues);
            let before = canonicalize(&cover, Some(&eps)).unwrap();
            let after = canonicalize(&shifted, Some(&eps)).unwrap();
            prop_assert_eq!(&after.dm, &eps);
            for (b, a) in before.charts.iter().zip(&after.charts) {
                prop_assert_eq!(&b.m_factor, &a.m_factor);
            }
            for c in shifted.charts() {
                let original = cover.chart(&c.id).unwrap();
                let (new, old) = (c.derivative(), original.derivative());
                prop_assert_eq!(new.theta(), old.theta());
            }
        }
    }
}

#[test]
fn minus_one_form_squares_to_zero() {
    for e in 0..6 {
        let eps = epsilon_for(e);
        let m = GenForm::m(3, eps.clone());
        assert!(m.wedge(&m).is_zero());
        assert_eq!(m.d(), GenForm::constant(3, &eps, eps.clone()));
    }
}
