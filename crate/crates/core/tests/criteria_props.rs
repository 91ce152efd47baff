mod common;

use std::f64::consts::PI;

use common::{lattice_from, lattice_strategy, siegel_from};
use gaussian_gabor::criteria::{
    criterion_covolume_transcendental, criterion_groechenig, full_report, pell_seshadri_14, Rational,
    TranscendenceAssertion, TranscendenceStatus, Verdict,
};
use gaussian_gabor::short_vectors::buser_sarnak;
use gaussian_gabor::{gamma_of_primal, ComplexLattice, Lattice2n, SiegelMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn assertion() -> impl Strategy<Value = TranscendenceAssertion> {
    prop_oneof![
        Just(TranscendenceAssertion::unknown()),
        Just(TranscendenceAssertion::user(TranscendenceStatus::True)),
        Just(TranscendenceAssertion::user(TranscendenceStatus::False)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn verdicts_never_conflict(lat in lattice_strategy(2), t in assertion()) {
        let r = full_report(&lat, &SiegelMatrix::identity(lat.n()), t, None).unwrap();
        prop_assert!(!r.conflict);
        if lat.covolume() >= 1.0 {
            prop_assert!(r.criteria.iter().all(|c| c.verdict != Verdict::Frame));
            prop_assert!(r.verdict == Verdict::NotFrame);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_to_standard_gaussian_preserves_evidence(
        lat in lattice_strategy(2),
        e in prop::collection::vec(-1.0..1.0f64, 8),
    ) {
        let n = lat.n();
        let omega = siegel_from(n, &e);
        let t = TranscendenceAssertion::unknown();
        let direct = full_report(&lat, &omega, t, None).unwrap();
        let reduced = gamma_of_primal(&omega, &lat).unwrap().as_lattice_2n();
        let standard = full_report(&reduced, &SiegelMatrix::identity(n), t, None).unwrap();
        prop_assert_eq!(direct.verdict, standard.verdict);
        prop_assert_eq!(direct.evidence.len(), standard.evidence.len());
        for (k, v) in &direct.evidence {
            let w = standard.evidence[k];
            prop_assert!((v - w).abs() <= 1e-9 * (1.0 + v.abs()), "{k}: {v} vs {w}");
        }
    }

    #[test]
    fn shrinking_keeps_covolume_frame_verdict(lat in lattice_strategy(3), c in 0.3..1.0f64) {
        let omega = SiegelMatrix::identity(lat.n());
        let t = TranscendenceAssertion::user(TranscendenceStatus::True);
        let before = criterion_covolume_transcendental(&lat, &omega, t).unwrap();
        let after = criterion_covolume_transcendental(&lat.scaled(c).unwrap(), &omega, t).unwrap();
        if before.verdict == Verdict::Frame {
            prop_assert_eq!(after.verdict, Verdict::Frame);
        }
    }

    #[test]
    fn groechenig_verdict_is_a_point_set_property(
        diag in prop::collection::vec(0.5..2.0f64, 2),
        off in prop::collection::vec(-2i64..=2, 4),
        lower in prop::collection::vec(-0.6..0.6f64, 2),
    ) {
        // A lower triangular, then right-multiplied by a unit upper triangular Z[i]-matrix
        let a = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(diag[0], 0.0), Complex64::new(0.0, 0.0),
            Complex64::new(lower[0], lower[1]), Complex64::new(diag[1], 0.0),
        ]);
        let u = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.0, 0.0), Complex64::new(off[0] as f64, off[1] as f64),
            Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0),
        ]);
        let v = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0),
            Complex64::new(off[2] as f64, off[3] as f64), Complex64::new(1.0, 0.0),
        ]);
        let lat_of = |m: &DMatrix<Complex64>| {
            ComplexLattice::from_complex_matrix(m).unwrap().as_lattice_2n().symplectic_dual().unwrap()
        };
        let omega = SiegelMatrix::identity(2);
        let base = criterion_groechenig(&lat_of(&a), &omega).unwrap();
        for m in [&a * &u, &a * &v, &a * &u * &v] {
            prop_assert_eq!(criterion_groechenig(&lat_of(&m), &omega).unwrap().verdict, base.verdict);
        }
    }
}

#[test]
fn hexagonal_lattice_maximizes_the_constant() {
    let v = 2.0;
    let mut best = (f64::NEG_INFINITY, 0usize);
    let mut hex_c = 0.0;
    for k in 0..20 {
        // tau on the arc |tau| = 1 from 90 to 60 degrees, then rectangles and a shear
        let tau = match k {
            0..=9 => Complex64::from_polar(1.0, PI / 2.0 - (PI / 6.0) * k as f64 / 9.0),
            10..=15 => Complex64::new(0.0, 1.0 + 0.4 * (k - 9) as f64),
            _ => Complex64::new(0.25 * (k - 15) as f64 / 4.0, 1.1),
        };
        let s = (v / tau.im).sqrt();
        let g = ComplexLattice::one_dim(Complex64::new(s, 0.0), tau * s).unwrap();
        assert!((g.covolume() - v).abs() < 1e-12);
        let c = PI / 4.0 * buser_sarnak(&g).unwrap();
        if c > best.0 + 1e-12 {
            best = (c, k);
        }
        if k == 9 {
            hex_c = c;
        }
    }
    assert_eq!(best.1, 9, "maximum at sample {}", best.1);
    assert!((hex_c - PI / (2.0 * 3f64.sqrt()) * v).abs() < 1e-9);
}

#[test]
fn pell_pin_and_known_reports() {
    assert_eq!(pell_seshadri_14(), Rational::new(8, 3));
    let small = lattice_from(1, &[0.1, -0.2, 0.3, 0.05], 0.7);
    let r = full_report(&small, &SiegelMatrix::identity(1), TranscendenceAssertion::unknown(), None).unwrap();
    assert_eq!(r.verdict, Verdict::Frame);
    assert_eq!(r.transcendence.status, TranscendenceStatus::True);
    let z4 = Lattice2n::scaled_integer(2, 0.55).unwrap();
    let r = full_report(&z4, &SiegelMatrix::identity(2), TranscendenceAssertion::unknown(), None).unwrap();
    assert_eq!(r.verdict, Verdict::Frame);
    assert!(r.evidence["beta-buser-sarnak.sup_m_beta"] > 4.0 / PI);
}
