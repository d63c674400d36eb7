//! Independent oracles: symbolic differentiation of polynomial fields and
//! index-notation transcriptions of the invariant formulas.

mod common;

use common::poly::{covariant_derivative_11, random_point, rng, PolyField};
use geoinv::jet::covariant_derivative;
use geoinv::mappings::Flags;
use geoinv::Valence;

#[test]
fn leibniz_rule_matches_symbolic_products() {
    for seed in 0..20 {
        let mut r = rng(seed);
        let u = PolyField::random(&mut r, 3, Valence::new(1, 0));
        let w = PolyField::random(&mut r, 3, Valence::new(0, 1));
        let x = random_point(&mut r, 3);
        let product = u.outer(&w);
        let jet = u.jet_at(&x).mul(&w.jet_at(&x)).unwrap();
        assert_eq!(jet, product.jet_at(&x), "seed {seed}");
    }
}

#[test]
fn covariant_derivative_matches_definition() {
    for seed in 0..20 {
        let mut r = rng(100 + seed);
        let u = PolyField::random(&mut r, 3, Valence::new(1, 0));
        let w = PolyField::random(&mut r, 3, Valence::new(0, 1));
        let l = PolyField::random(&mut r, 3, Valence::new(1, 2)).symmetrize_last_pair();
        let x = random_point(&mut r, 3);
        let a = u.outer(&w);
        let lib =
            covariant_derivative(&u.jet_at(&x).mul(&w.jet_at(&x)).unwrap(), &l.jet_at(&x)).unwrap();
        assert_eq!(lib, covariant_derivative_11(&a, &l, &x), "seed {seed}");
    }
}

#[test]
fn transcribed_formulas_match_hand_coded_operations() {
    for (seed, flags) in Flags::all().into_iter().enumerate() {
        let inst = common::general(4, seed as u64, flags);
        let checks = common::formulas::check_corpus(&inst).unwrap();
        assert_eq!(checks.len(), 10);
        for c in checks {
            assert!(
                c.matches,
                "{} ({}) with {flags}: {}",
                c.name, c.tag, c.source
            );
        }
    }
}
