use gaussian_gabor::short_vectors::{buser_sarnak, m_beta, sup_m_beta, BetaWeights, CUTTING_PLANE_GAP};
use gaussian_gabor::ComplexLattice;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_lattice(n: usize, entries: &[f64]) -> ComplexLattice {
    let d = 2 * n;
    let gens = (0..d)
        .map(|j| {
            DVector::from_fn(n, |i, _| {
                let diag = if i == j % n { if j < n { 1.0 } else { 0.0 } } else { 0.0 };
                let idiag = if i == j % n && j >= n { 1.0 } else { 0.0 };
                Complex64::new(diag + 0.45 * entries[(j * n + i) * 2], idiag + 0.45 * entries[(j * n + i) * 2 + 1])
            })
        })
        .collect();
    ComplexLattice::new(n, gens).unwrap()
}

fn lattice_strategy(max_n: usize) -> impl Strategy<Value = ComplexLattice> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(-1.0..1.0f64, 4 * n * n)))
        .prop_map(|(n, e)| complex_lattice(n, &e))
}

fn weights(n: usize) -> impl Strategy<Value = BetaWeights> {
    prop::collection::vec(0.01..1.0f64, n).prop_map(|w| BetaWeights::normalized(w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scaling_covariance(g in lattice_strategy(3), re in 0.3..2.0f64, im in -1.0..1.0f64) {
        let c = Complex64::new(re, im);
        let scaled = g.scaled(c).unwrap();
        let m = buser_sarnak(&g).unwrap();
        prop_assert!((buser_sarnak(&scaled).unwrap() - c.norm_sqr() * m).abs() < 1e-9 * c.norm_sqr() * m);
        let s = sup_m_beta(&g).unwrap().value;
        let ss = sup_m_beta(&scaled).unwrap().value;
        prop_assert!((ss - c.norm_sqr() * s).abs() < 1e-9 * c.norm_sqr() * s.max(m));
    }

    #[test]
    fn m_beta_is_concave(
        (g, b1, b2) in (2..=3usize).prop_flat_map(|n| (
            prop::collection::vec(-1.0..1.0f64, 4 * n * n).prop_map(move |e| complex_lattice(n, &e)),
            weights(n),
            weights(n),
        )),
        t in 0.0..1.0f64,
    ) {
        let mid: Vec<f64> = b1.as_slice().iter().zip(b2.as_slice()).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let mid = BetaWeights::normalized(mid).unwrap();
        let lhs = m_beta(&g, &mid).unwrap().value;
        let rhs = t * m_beta(&g, &b1).unwrap().value + (1.0 - t) * m_beta(&g, &b2).unwrap().value;
        prop_assert!(lhs >= rhs - 1e-9, "{lhs} < {rhs}");
    }

    #[test]
    fn cutting_planes_are_sound(g in lattice_strategy(3)) {
        let s = sup_m_beta(&g).unwrap();
        let m = buser_sarnak(&g).unwrap();
        let at_argmax = m_beta(&g, &s.argmax).unwrap().value;
        prop_assert!((at_argmax - s.value).abs() <= 1e-9 * m);
        prop_assert!(s.upper >= s.value - 1e-12);
        prop_assert!(s.upper - s.value <= CUTTING_PLANE_GAP * m * (1.0 + 1e-6));
    }
}

#[test]
fn supremum_matches_grid_search_in_dimension_two() {
    let mut rng_state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        (rng_state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for _ in 0..4 {
        // entries bounded by 2 in magnitude
        let a = DMatrix::from_fn(2, 2, |i, j| {
            let d = if i == j { 1.2 } else { 0.0 };
            Complex64::new(d + 0.8 * next(), 0.8 * next())
        });
        let b = DMatrix::from_fn(2, 2, |i, j| {
            let d = if i == j { 1.2 } else { 0.0 };
            Complex64::new(0.8 * next(), d + 0.8 * next())
        });
        let gens = (0..2).map(|j| a.column(j).into_owned()).chain((0..2).map(|j| b.column(j).into_owned())).collect();
        let g = ComplexLattice::new(2, gens).unwrap();
        let s = sup_m_beta(&g).unwrap();
        let at = |b1: f64| m_beta(&g, &BetaWeights::new(vec![b1, 1.0 - b1]).unwrap()).unwrap().value;
        // step 1e-3 over the simplex, then step 1e-6 across the best cell: slopes
        // near a kink can reach |z|^2, which a 1e-3 grid alone cannot resolve to 1e-5
        let (mut best, mut arg) = (0.0f64, 0.5);
        for k in 1..1000 {
            let b1 = k as f64 * 1e-3;
            let v = at(b1);
            if v > best {
                (best, arg) = (v, b1);
            }
        }
        assert!(best <= s.value + 1e-9, "grid {best} above the supremum {}", s.value);
        for k in -1000..=1000 {
            let b1 = arg + k as f64 * 1e-6;
            if b1 > 0.0 && b1 < 1.0 {
                best = best.max(at(b1));
            }
        }
        assert!((s.value - best).abs() < 1e-5, "cutting planes {} vs grid {best}", s.value);
    }
}

#[test]
fn split_product_closed_form() {
    for (a, b) in [(2.0, 1.0), (3.0, 1.0), (1.5, 1.2)] {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)]));
        let g = ComplexLattice::from_complex_matrix(&m).unwrap();
        let s = sup_m_beta(&g).unwrap();
        let exact = a * a * b * b / (a * a + b * b);
        assert!((s.value - exact).abs() < 1e-8, "({a}, {b}): {} vs {exact}", s.value);
    }
}
