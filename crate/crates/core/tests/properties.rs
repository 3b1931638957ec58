use proptest::prelude::*;

use rotlab_core::circle::{euler_cocycle_circle, translation_number_circle, CircleCoverElement, CircleLift};
use rotlab_core::cohomology::{
    circle_distance, coboundary1, coboundary2, extract_class, floor_cocycle, homogenize, IntegerCochain1,
    IntegerCochain2,
};
use rotlab_core::symplectic::{
    canonical_path, canonical_path_with, cover_multiply, random_symplectic, rotation_number_sp,
    translation_estimate_sp, translation_number_sp, CoverElement, PathKind, SymplecticMatrix,
};

fn lift(kind: u8, a: f64, b: f64) -> CircleLift {
    match kind % 3 {
        0 => CircleLift::rigid(a).unwrap(),
        1 => CircleLift::arnold(a, b * 0.95).unwrap(),
        _ => {
            let y0 = a.fract() * 0.5;
            CircleLift::piecewise_linear(vec![(0.0, y0), (0.3, y0 + 0.1 + 0.5 * b), (0.7, y0 + 0.8 + 0.1 * b)]).unwrap()
        }
    }
}

fn power(a: &CoverElement, k: usize) -> CoverElement {
    let mut p = a.clone();
    for _ in 1..k {
        p = cover_multiply(&p, a).unwrap();
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coboundary_squares_to_zero(coeffs in prop::collection::vec(-50i64..50, 4), a in -40i64..40, b in -40i64..40, c in -40i64..40) {
        let f = IntegerCochain1::from_fn(move |n| Ok(coeffs[0] + coeffs[1] * n + coeffs[2] * n * n % 7 + coeffs[3] * (n % 3)));
        let g = f.clone();
        let df = IntegerCochain2::from_fn(move |n, m| coboundary1(&g, n, m));
        prop_assert_eq!(coboundary2(&df, a, b, c).unwrap(), 0);
    }

    #[test]
    fn floor_cocycle_takes_two_values(r in -3.0f64..3.0, n in -1_000_000i64..1_000_000, m in -1_000_000i64..1_000_000) {
        let v = floor_cocycle(r, n, m).unwrap();
        prop_assert!(v == -1 || v == 0);
    }

    #[test]
    fn extraction_inverts_floor_cocycle(r in 0.0f64..1.0) {
        let beta = IntegerCochain1::floor(r).unwrap();
        let class = extract_class(&IntegerCochain2::coboundary_of(&beta), 10_000).unwrap();
        prop_assert!(class.distance_to(-r) <= class.error_radius.max(1e-4), "{class:?} for {r}");
    }

    #[test]
    fn extraction_ignores_bounded_coboundaries(r in 0.0f64..1.0, table in prop::collection::vec(-5i64..=5, 17)) {
        let c = IntegerCochain2::coboundary_of(&IntegerCochain1::floor(r).unwrap());
        let b = IntegerCochain1::from_fn(move |n| Ok(table[n.rem_euclid(17) as usize]));
        let perturbed = c.plus(&IntegerCochain2::coboundary_of(&b));
        let x = extract_class(&c, 10_000).unwrap();
        let y = extract_class(&perturbed, 10_000).unwrap();
        prop_assert!(x.distance(&y) <= x.error_radius + y.error_radius + 1e-12, "{x:?} vs {y:?}");
    }

    #[test]
    fn homogenized_floor_is_the_slope(r in -2.0f64..2.0) {
        let h = homogenize(&IntegerCochain1::floor(r).unwrap(), 10_000).unwrap();
        prop_assert!((h.value - r).abs() <= h.error_radius, "{h:?} for {r}");
    }

    #[test]
    fn circle_cocycle_is_bounded(k1 in 0u8..3, a1 in -2.0f64..2.0, b1 in 0.0f64..1.0, k2 in 0u8..3, a2 in -2.0f64..2.0, b2 in 0.0f64..1.0) {
        let v = euler_cocycle_circle(&lift(k1, a1, b1), &lift(k2, a2, b2)).unwrap();
        prop_assert!(v == 0 || v == 1, "{v}");
    }

    #[test]
    fn circle_translation_shifts_with_the_deck(kind in 0u8..3, a in -2.0f64..2.0, b in 0.0f64..1.0, m in -1000i64..1000) {
        let base = CircleCoverElement::new(lift(kind, a, b), 0);
        let t0 = translation_number_circle(&base, 2000).unwrap();
        let t1 = translation_number_circle(&base.shifted(m), 2000).unwrap();
        prop_assert_eq!(t1.lift_part, t0.lift_part);
        prop_assert_eq!(t1.deck, t0.deck + m);
    }

    #[test]
    fn pl_lifts_are_increasing(a in -2.0f64..2.0, b in 0.0f64..1.0) {
        let f = lift(2, a, b);
        let grid: Vec<f64> = (0..=1000).map(|i| -1.0 + 3.0 * i as f64 / 1000.0).map(|x| f.eval(x)).collect();
        prop_assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sp_translation_is_homogeneous(n in 1usize..=2, seed in 0u64..1_000_000) {
        let a = canonical_path(&random_symplectic(n, seed, 0.5).unwrap(), 16).unwrap();
        let est = translation_estimate_sp(&a, 32).unwrap();
        let tau = est.value;
        for k in [2usize, 3, 5] {
            let tk = translation_estimate_sp(&power(&a, k), 32).unwrap().value;
            prop_assert!((tk - k as f64 * tau).abs() <= est.defect + 1e-9, "k={k}: {tk} vs {}", k as f64 * tau);
        }
    }

    #[test]
    fn sp_connection_law_is_exact(n in 1usize..=2, seed in 0u64..1_000_000, m in -50i64..50) {
        let a = canonical_path(&random_symplectic(n, seed, 0.5).unwrap(), 16).unwrap();
        let t0 = translation_number_sp(&a, 16).unwrap();
        let t1 = translation_number_sp(&a.shifted(m), 16).unwrap();
        prop_assert_eq!(t1.lift_part, t0.lift_part);
        prop_assert_eq!(t1.deck, t0.deck + m);
    }

    #[test]
    fn sp_rotation_is_conjugation_invariant(n in 1usize..=2, seed in 0u64..1_000_000) {
        let g = random_symplectic(n, seed, 0.5).unwrap();
        let h = random_symplectic(n, seed ^ 0x5eed, 0.5).unwrap();
        let conj = h.mul(&g).unwrap().mul(&h.inverse()).unwrap();
        let (x, y) = (rotation_number_sp(&g, 64).unwrap(), rotation_number_sp(&conj, 64).unwrap());
        prop_assert!(x.distance(&y) <= x.error_radius + y.error_radius, "{x:?} vs {y:?}");
    }

    #[test]
    fn canonical_winding_is_path_independent(n in 1usize..=3, seed in 0u64..1_000_000) {
        let g = random_symplectic(n, seed, 0.8).unwrap();
        let base = canonical_path(&g, 16).unwrap().theta();
        let fine = canonical_path(&g, 64).unwrap().theta();
        let alt = canonical_path_with(&g, 16, PathKind::PositiveThenUnitary).unwrap().theta();
        prop_assert!(circle_distance(base, fine) < 1e-6);
        prop_assert!(circle_distance(base, alt) < 1e-6);
    }
}

#[test]
fn rigid_rotation_winding_is_its_angle() {
    let g = SymplecticMatrix::rotation(1.0);
    let t = translation_number_sp(&canonical_path(&g, 16).unwrap(), 64).unwrap();
    assert!((t.value() - 1.0 / std::f64::consts::TAU).abs() < 1e-12);
}
