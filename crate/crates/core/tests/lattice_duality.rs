mod common;

use common::{lattice_strategy, siegel_from};
use gaussian_gabor::lattice::{gamma_of_dual, gamma_of_primal, pd_sqrt, ComplexLattice, Lattice2n, SiegelMatrix};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dual_is_an_involution(lat in lattice_strategy(3)) {
        let dual = lat.symplectic_dual().unwrap();
        prop_assert!((lat.covolume() * dual.covolume() - 1.0).abs() < 1e-10);
        prop_assert!(dual.symplectic_dual().unwrap().same_point_set(&lat, 1e-8));
        prop_assert!(lat.pairing_defect(&dual) < 1e-9);
    }

    #[test]
    fn dual_of_scaled_lattice(lat in lattice_strategy(2), s in 0.3..3.0f64) {
        let lhs = lat.scaled(s).unwrap().symplectic_dual().unwrap();
        let rhs = lat.symplectic_dual().unwrap().scaled(1.0 / s).unwrap();
        prop_assert!(lhs.same_point_set(&rhs, 1e-8));
    }

    #[test]
    fn pd_sqrt_scales_with_root(entries in prop::collection::vec(-1.0..1.0f64, 9), c in 0.1..10.0f64) {
        let b = DMatrix::from_row_slice(3, 3, &entries);
        let m = &b * b.transpose() + DMatrix::identity(3, 3);
        let r = pd_sqrt(&m).unwrap();
        prop_assert!((&r * &r - &m).norm() < 1e-10 * m.norm());
        let rc = pd_sqrt(&(&m * c)).unwrap();
        prop_assert!((rc - r * c.sqrt()).norm() < 1e-10 * m.norm() * c.sqrt());
    }

    #[test]
    fn interpolation_lattices_have_reciprocal_covolume(
        lat in lattice_strategy(2),
        e in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let omega = siegel_from(lat.n(), &e);
        let g = gamma_of_dual(&omega, &lat).unwrap();
        prop_assert!((g.covolume() * lat.covolume() - 1.0).abs() < 1e-9);
        let p = gamma_of_primal(&omega, &lat).unwrap();
        prop_assert!((p.covolume() - lat.covolume()).abs() < 1e-9 * lat.covolume());
        // the reduction to the standard Gaussian commutes with taking duals
        let reduced = p.as_lattice_2n();
        let g_std = gamma_of_dual(&SiegelMatrix::identity(lat.n()), &reduced).unwrap();
        prop_assert!(g_std.same_point_set(&g, 1e-8));
    }
}

#[test]
fn scaled_integer_lattice_gives_scaled_gaussian_integers() {
    for n in 1..=3 {
        for a in [0.5, 0.8, 1.7] {
            let lat = Lattice2n::scaled_integer(n, a).unwrap();
            let g = gamma_of_dual(&SiegelMatrix::identity(n), &lat).unwrap();
            let expected = ComplexLattice::from_complex_matrix(&DMatrix::from_diagonal(&DVector::from_element(
                n,
                Complex64::new(1.0 / a, 0.0),
            )))
            .unwrap();
            assert!(g.same_point_set(&expected, 1e-9), "n = {n}, a = {a}");
        }
    }
}
