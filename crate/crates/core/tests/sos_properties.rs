mod common;

use common::{coefficient, vars};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rcvf_core::field::rat;
use rcvf_core::sos::{psd_falsify, residue_sos_search, verify_residue_sos, ResiduePolynomial, SosBudget, SosOutcome};
use rcvf_core::{Rational, SampleConfig};

fn residue_poly(n: usize, deg: u32) -> impl Strategy<Value = ResiduePolynomial> {
    let mono = prop::collection::vec(0..=deg, n).prop_filter("degree", move |m| m.iter().sum::<u32>() <= deg);
    prop::collection::vec((mono, coefficient()), 1..=4).prop_map(move |t| ResiduePolynomial::from_terms(&vars(n), t))
}

fn small_int() -> impl Strategy<Value = Rational> {
    (-5i64..=5).prop_map(|n| rat(n, 1))
}

/// `x^T G x` for the symmetric matrix `g`.
fn form(n: usize, g: &[Vec<Rational>]) -> ResiduePolynomial {
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut m = vec![0u32; n];
            m[i] += 1;
            m[j] += 1;
            terms.push((m, g[i][j].clone()));
        }
    }
    ResiduePolynomial::from_terms(&vars(n), terms)
}

fn gram_of(a: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| a.iter().map(|row| &row[i] * &row[j]).fold(Rational::zero(), |s, x| s + x)).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn returned_sos_verifies(q in residue_poly(2, 4)) {
        if let SosOutcome::Sos(d) = residue_sos_search(&q, &SosBudget::default()) {
            prop_assert!(verify_residue_sos(&q, &d));
        }
    }

    #[test]
    fn sums_of_squares_are_found(ts in prop::collection::vec(residue_poly(2, 2), 1..=3)) {
        let q = ts.iter().fold(ResiduePolynomial::zero(&vars(2)), |acc, t| &acc + &(t * t));
        match residue_sos_search(&q, &SosBudget::default()) {
            SosOutcome::Sos(d) => prop_assert!(verify_residue_sos(&q, &d)),
            SosOutcome::NegativityWitness(p) => prop_assert!(false, "witness {:?} for a square sum", p),
            SosOutcome::NotSosInBudget => {}
        }
    }

    #[test]
    fn falsifier_points_are_negative(q in residue_poly(2, 3), seed in 0u64..1000) {
        if let Some(p) = psd_falsify(&q, &SampleConfig::with_seed(seed).samples(64)) {
            prop_assert!(q.eval(&p).is_negative());
        }
    }

    #[test]
    fn psd_quadratic_forms_decompose(a in prop::collection::vec(prop::collection::vec(small_int(), 3), 1..=4)) {
        let q = form(3, &gram_of(&a, 3));
        let found = matches!(residue_sos_search(&q, &SosBudget::default()), SosOutcome::Sos(ref d) if verify_residue_sos(&q, d));
        prop_assert!(found);
    }

    #[test]
    fn indefinite_quadratic_forms_are_falsified(
        a in prop::collection::vec(prop::collection::vec(small_int(), 3), 1..=2),
        b in prop::collection::vec(small_int(), 3).prop_filter("nonzero", |v| v.iter().any(|x| !x.is_zero())),
        seed in 0u64..1000,
    ) {
        // A^T A - c b b^T with c chosen so that q(b) < 0
        let mut g = gram_of(&a, 3);
        let bb = gram_of(std::slice::from_ref(&b), 3);
        let norm2: Rational = b.iter().map(|x| x * x).sum();
        let ab = form(3, &g).eval(&b);
        let scale = &ab / (&norm2 * &norm2) + rat(1, 1);
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = &g[i][j] - &(&bb[i][j] * &scale);
            }
        }
        let q = form(3, &g);
        prop_assert!(q.eval(&b).is_negative());
        let p = psd_falsify(&q, &SampleConfig::with_seed(seed).samples(64));
        prop_assert!(p.as_ref().is_some_and(|p| q.eval(p).is_negative()), "{:?}", p);
    }
}
