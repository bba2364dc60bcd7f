//! Property tests for the structural invariants that hold on the whole
//! input space, not just on curated samples.

use proptest::prelude::*;
use triqr::factor::factor_shifted;
use triqr::spectrum::{classify_ap, Spectrum};
use triqr::step::step_star;
use triqr::tridiag::{SignPattern, SymTridiagonal};
use nalgebra::DMatrix;

fn arb_tridiag(max_n: usize) -> impl Strategy<Value = SymTridiagonal> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-10.0..10.0f64, n),
                prop::collection::vec(-10.0..10.0f64, n - 1),
            )
        })
        .prop_map(|(diag, sub)| SymTridiagonal::new(diag, sub).unwrap())
}

fn arb_unreduced(max_n: usize) -> impl Strategy<Value = SymTridiagonal> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-10.0..10.0f64, n),
                prop::collection::vec(
                    prop_oneof![0.1..10.0f64, -10.0..-0.1f64],
                    n - 1,
                ),
            )
        })
        .prop_map(|(diag, sub)| SymTridiagonal::new(diag, sub).unwrap())
}

proptest! {
    /// The signed factorization of an unreduced shifted matrix always
    /// reconstructs, is orthogonal with determinant one, and keeps its
    /// first n−1 triangular diagonal entries positive.
    #[test]
    fn factorization_invariants(t in arb_unreduced(9), s in -12.0..12.0f64) {
        let n = t.n();
        let f = factor_shifted(&t, s).unwrap();
        let scale = 1.0 + t.norm() + s.abs();
        let q = f.qstar();
        let m = t.to_dense() - DMatrix::<f64>::identity(n, n) * s;
        prop_assert!((q.transpose() * &q - DMatrix::<f64>::identity(n, n)).amax() <= 1e-12);
        prop_assert!((q.determinant() - 1.0).abs() <= 1e-10);
        prop_assert!((&q * f.rstar() - m).amax() <= 1e-11 * scale);
        prop_assert!(f.r_diag()[..n - 1].iter().all(|&r| r > 0.0));
    }

    /// One signed step preserves the subdiagonal ratio identity and the
    /// signs of the top n−2 subdiagonal entries.
    #[test]
    fn step_ratio_identity(t in arb_unreduced(9), s in -12.0..12.0f64) {
        let res = step_star(&t, s).unwrap();
        for i in 0..t.n() - 1 {
            let err = (res.next.sub()[i] - res.ratios[i] * t.sub()[i]).abs();
            prop_assert!(err <= 1e-10 * (1.0 + t.norm()));
        }
        for i in 0..t.n().saturating_sub(2) {
            prop_assert_eq!(res.next.sub()[i].signum(), t.sub()[i].signum());
        }
    }

    /// Sign conjugation is a bit-exact involution and commutes with the
    /// signed step.
    #[test]
    fn sign_conjugation_involution(t in arb_tridiag(9), j in 1usize..8, s in -12.0..12.0f64) {
        let n = t.n();
        let j = 1 + j % (n - 1);
        let e = SignPattern::generator(n, j).unwrap();
        let back = t.conjugate_by_signs(&e).unwrap().conjugate_by_signs(&e).unwrap();
        prop_assert_eq!(&back, &t);
        if t.is_unreduced() {
            let a = step_star(&t.conjugate_by_signs(&e).unwrap(), s).unwrap().next;
            let b = step_star(&t, s).unwrap().next.conjugate_by_signs(&e).unwrap();
            prop_assert!(a.dist(&b).unwrap() <= 1e-10 * t.norm().max(1.0));
        }
    }

    /// The text format round-trips bit-exactly.
    #[test]
    fn text_format_round_trip(t in arb_tridiag(9)) {
        let back = SymTridiagonal::from_text(&t.to_text()).unwrap();
        prop_assert_eq!(back, t);
    }

    /// Arithmetic-progression classification is invariant under affine
    /// maps of the spectrum.
    #[test]
    fn ap_class_affine_invariant(
        mut lambdas in prop::collection::vec(-50.0..50.0f64, 3..8),
        a in prop_oneof![0.05..20.0f64, -20.0..-0.05f64],
        b in -50.0..50.0f64,
    ) {
        lambdas.sort_by(|x, y| x.partial_cmp(y).unwrap());
        prop_assume!(lambdas.windows(2).all(|w| w[1] - w[0] > 1e-3));
        let spec = Spectrum::new(lambdas.clone()).unwrap();
        let mut mapped: Vec<f64> = lambdas.iter().map(|l| a * l + b).collect();
        mapped.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let image = Spectrum::new(mapped).unwrap();
        prop_assert_eq!(spec.ap_class(), image.ap_class());
    }

    /// classify_ap with zero tolerance never reports progressions on
    /// generic (irrational-ratio-free is overkill; distinct gaps) inputs
    /// whose consecutive gaps are strictly increasing.
    #[test]
    fn increasing_gaps_are_ap_free(start in -5.0..5.0f64, g0 in 0.1..1.0f64) {
        // gaps g0, 2·g0, 4·g0: any triple (i < j < k) has
        // λ_k − λ_j > λ_j − λ_i, so no progression exists.
        let l1 = start;
        let l2 = l1 + g0;
        let l3 = l2 + 2.0 * g0;
        let l4 = l3 + 4.0 * g0;
        prop_assert_eq!(
            classify_ap(&[l1, l2, l3, l4], 0.0),
            triqr::spectrum::ApClass::ApFree
        );
    }
}
