use std::f64::consts::PI;

use gaussian_gabor::envelope::{
    check_equality_set, check_l1, check_l3, eval_psi, legendre_dual_phi, min_line_laplacian, phi, random_unit,
    EnvelopeSpec,
};
use gaussian_gabor::{BetaWeights, GaborError};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(beta: &[f64], r: f64) -> EnvelopeSpec {
    EnvelopeSpec::new(BetaWeights::normalized(beta.to_vec()).unwrap(), r).unwrap()
}

fn spec_strategy() -> impl Strategy<Value = EnvelopeSpec> {
    (1..=3usize)
        .prop_flat_map(|n| (prop::collection::vec(0.05..1.0f64, n), 0.3..2.0f64))
        .prop_map(|(b, r)| spec(&b, r))
}

fn point(spec: &EnvelopeSpec, rng: &mut ChaCha8Rng, scale: f64) -> Vec<Complex64> {
    random_unit(spec.n(), rng).into_iter().map(|v| v * scale).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fenchel_inequality(
        x in prop::collection::vec(-4.0..2.0f64, 3),
        alpha in prop::collection::vec(0.0..20.0f64, 3),
    ) {
        let lhs: f64 = alpha.iter().zip(&x).map(|(a, b)| a * b).sum();
        prop_assert!(lhs <= phi(&x) + legendre_dual_phi(&alpha) + 1e-10);
    }

    #[test]
    fn envelope_lies_below_the_weight(s in spec_strategy(), seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let scale = rng.gen_range(0.01..3.0) * s.r();
            let z = point(&s, &mut rng, scale);
            let psi = eval_psi(&s, &z);
            let weight = PI * z.iter().map(|v| v.norm_sqr()).sum::<f64>();
            if s.in_ball(&z) {
                prop_assert!(psi < weight, "{psi} >= {weight} inside the ball");
            } else {
                prop_assert_eq!(psi, weight);
            }
        }
    }

    #[test]
    fn larger_domain_lowers_the_envelope(s in spec_strategy(), grow in 1.01..2.0f64, seed in 0u64..1000) {
        let big = EnvelopeSpec::new(BetaWeights::new(s.beta().to_vec()).unwrap(), s.r() * grow).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let scale = rng.gen_range(0.01..3.0) * s.r();
            let z = point(&s, &mut rng, scale);
            let (a, b) = (eval_psi(&s, &z), eval_psi(&big, &z));
            prop_assert!(a >= b - 1e-10 * (1.0 + a.abs()), "{a} < {b}");
        }
    }

    #[test]
    fn scaling_identity(b1 in 0.05..0.95f64, r in 0.3..2.0f64, delta in 0.01..0.99f64, seed in 0u64..1000) {
        let s = spec(&[b1, 1.0 - b1], r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = point(&s, &mut rng, 0.9 * r);
        let rec = check_l3(&s, &w, delta).unwrap();
        prop_assert!(rec.passed, "error {}", rec.error);
    }
}

#[test]
fn continuous_across_the_free_boundary() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let s = spec(&b, rng.gen_range(0.3..2.0));
        let dir = random_unit(n, &mut rng);
        let on = s.r() / s.weighted_norm_sq(&dir).sqrt();
        let inside: Vec<Complex64> = dir.iter().map(|v| v * on * (1.0 - 1e-13)).collect();
        let outside: Vec<Complex64> = dir.iter().map(|v| v * on * (1.0 + 1e-13)).collect();
        assert!(s.in_ball(&inside) && !s.in_ball(&outside));
        let jump = (eval_psi(&s, &inside) - eval_psi(&s, &outside)).abs();
        assert!(jump < 1e-10, "jump {jump}");
    }
}

#[test]
fn one_dimensional_closed_form() {
    for r in [0.5, 1.0, 1.7] {
        let s = spec(&[1.0], r);
        for t in [1e-6, 0.1, 0.4, 0.99, 1.5, 3.0] {
            let z = [Complex64::from_polar(t * r, 0.7)];
            let m = z[0].norm_sqr();
            let exact = if m < r * r { PI * r * r * ((m / (r * r)).ln() + 1.0) } else { PI * m };
            assert!((eval_psi(&s, &z) - exact).abs() < 1e-12 * (1.0 + exact.abs()), "r = {r}, t = {t}");
        }
    }
    assert_eq!(eval_psi(&spec(&[1.0], 1.0), &[Complex64::new(0.0, 0.0)]), f64::NEG_INFINITY);
    assert_eq!(legendre_dual_phi(&[0.0, 0.0]), 0.0);
    assert!((legendre_dual_phi(&[PI]) + PI).abs() < 1e-15);
    assert_eq!(legendre_dual_phi(&[-1.0]), f64::INFINITY);
}

#[test]
fn zero_coordinates_are_limits() {
    let s = spec(&[0.3, 0.7], 1.2);
    let z = [Complex64::new(0.0, 0.0), Complex64::new(0.4, 0.3)];
    let limit = eval_psi(&s, &[Complex64::new(1e-160, 0.0), z[1]]);
    assert!((eval_psi(&s, &z) - limit).abs() < 1e-12);
}

#[test]
fn difference_with_the_pole_is_bracketed() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let one = check_l1(&spec(&[1.0], 1.0), 50, 0);
    assert!(one.passed);
    assert!((one.difference_range.0 - PI).abs() < 1e-9 && (one.difference_range.1 - PI).abs() < 1e-9);
    for k in 0..1000u64 {
        let n = rng.gen_range(1..=3);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let s = spec(&b, rng.gen_range(0.3..2.0));
        let rec = check_l1(&s, 25, k);
        assert!(rec.passed, "{rec:?}");
        assert!(rec.vertex_gap_range.1 <= n as f64 * PI + 1e-9);
    }
}

#[test]
fn equality_set_matches_the_gradient_condition() {
    for (b, r, seed) in [(vec![1.0], 1.0, 1u64), (vec![0.3, 0.7], 1.5, 2), (vec![0.2, 0.3, 0.5], 2.0, 3)] {
        let s = spec(&b, r);
        let rec = check_equality_set(&s, 4000, seed);
        assert!(rec.agreement_rate >= 0.999, "{rec:?}");
        assert!(rec.max_value_mismatch < 1e-8, "{rec:?}");
    }
}

#[test]
fn plurisubharmonic_along_random_lines() {
    for (b, r) in [(vec![1.0], 1.0), (vec![0.4, 0.6], 1.3), (vec![0.2, 0.3, 0.5], 0.8)] {
        let worst = min_line_laplacian(&spec(&b, r), 400, 1e-3, 9);
        assert!(worst >= -1e-4, "beta = {b:?}: {worst}");
    }
}

#[test]
fn scaling_identity_rejects_bad_input() {
    let s = spec(&[0.5, 0.5], 1.0);
    let outside = [Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)];
    assert!(matches!(check_l3(&s, &outside, 0.5), Err(GaborError::DomainError(_))));
    let inside = [Complex64::new(0.2, 0.0), Complex64::new(0.1, 0.1)];
    assert!(matches!(check_l3(&s, &inside, 1.0), Err(GaborError::DomainError(_))));
    let near_one = check_l3(&s, &inside, 1.0 - 1e-9).unwrap();
    assert!((near_one.lhs - eval_psi(&s, &inside)).abs() < 1e-7);
}
