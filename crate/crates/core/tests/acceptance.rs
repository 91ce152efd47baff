//! Acceptance run: one PASS/FAIL line per criterion, each with its tolerance and time limit.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gaussian_gabor::bounds1d::{explicit_frame_bounds, robin_constant};
use gaussian_gabor::criteria::{pell_seshadri_14, Rational};
use gaussian_gabor::envelope::{check_equality_set, check_l1, check_l3, eval_psi, random_unit, EnvelopeSpec};
use gaussian_gabor::fixtures::{dual_of_z_2iz, groechenig_lyubarskii_lattice};
use gaussian_gabor::gram::{
    build_gram, frame_functional, functional_radius, spectral_estimates, verify_frame_verdict_with, EmpiricalVerdict,
    TestFunction, VerifyConfig,
};
use gaussian_gabor::short_vectors::{buser_sarnak, sup_m_beta};
use gaussian_gabor::special::{dedekind_eta, gauss_theta_sum, jacobi_theta, jacobi_theta_dz, Tau};
use gaussian_gabor::{gamma_of_dual, BetaWeights, ComplexLattice, Lattice2n, SiegelMatrix};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut covol_err, mut involution_ok) = (0.0f64, true);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let d = 2 * n;
        let m = DMatrix::from_fn(d, d, |i, j| rng.gen_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 });
        let lat = Lattice2n::new(n, m).map_err(|e| e.to_string())?;
        let dual = lat.symplectic_dual().map_err(|e| e.to_string())?;
        covol_err = covol_err.max((lat.covolume() * dual.covolume() - 1.0).abs());
        let back = dual.symplectic_dual().map_err(|e| e.to_string())?;
        involution_ok &= back.same_point_set(&lat, 1e-9);
    }
    check(covol_err < 1e-9 && involution_ok, format!("max |covolume product - 1| = {covol_err:.2e}, involution {involution_ok}"))
}

fn split_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for (a, b) in [(2.0, 1.0), (3.0, 1.0), (1.5, 1.2)] {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(a, 0.0), c(b, 0.0)]));
        let g = ComplexLattice::from_complex_matrix(&m).map_err(|e| e.to_string())?;
        let s = sup_m_beta(&g).map_err(|e| e.to_string())?;
        worst = worst.max((s.value - a * a * b * b / (a * a + b * b)).abs());
    }
    check(worst < 1e-8, format!("max error {worst:.2e}"))
}

fn groechenig_lyubarskii() -> Outcome {
    let lat = groechenig_lyubarskii_lattice();
    let omega = SiegelMatrix::identity(2);
    let g = gamma_of_dual(&omega, &lat).map_err(|e| e.to_string())?;
    let m = buser_sarnak(&g).map_err(|e| e.to_string())?;
    let cfg = VerifyConfig { point_cap: 20_000, ..VerifyConfig::default() };
    let rec = verify_frame_verdict_with(&lat, &omega, &cfg).map_err(|e| e.to_string())?;
    let mins: Vec<String> = rec.frame_bound_estimates.iter().map(|e| format!("{:.5}", e.0)).collect();
    check(
        (m - 4.0 / 3.0).abs() < 1e-10 && rec.verdict == EmpiricalVerdict::LikelyNotFrame,
        format!("m(Gamma) = {m:.12}, verdict {:?}, lower frame bound estimates over (4, 6, 8) = [{}]", rec.verdict, mins.join(", ")),
    )
}

fn sandwich() -> Outcome {
    let lat = dual_of_z_2iz();
    let s = explicit_frame_bounds(&lat).map_err(|e| e.to_string())?;
    let mut min_slack = f64::INFINITY;
    for seed in 0..20u64 {
        let f = TestFunction::random(1, 1 + (seed % 4) as usize, 1.5, seed).map_err(|e| e.to_string())?;
        let r = functional_radius(&lat, &f).map_err(|e| e.to_string())?;
        let v = 2f64.sqrt() * frame_functional(&lat, &f, r).map_err(|e| e.to_string())?.value;
        min_slack = min_slack.min((v - s.lower).min(s.upper - v));
    }
    check(min_slack >= -1e-9, format!("[L, U] = [{:.6}, {:.6}], smallest slack {min_slack:.4e}", s.lower, s.upper))
}

fn robin_equality() -> Outcome {
    let mut worst = 0.0f64;
    for eps in [1.2, 1.5, 2.0, 3.0, 5.0] {
        let r = robin_constant(Tau::imaginary(eps).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        worst = worst.max(r.gap.abs());
    }
    check(worst <= 1e-8, format!("max |gap| = {worst:.2e}"))
}

fn modular_suite() -> Outcome {
    let mut fails = Vec::new();
    let t = Tau::new(c(0.2, 0.9)).map_err(|e| e.to_string())?;
    for z in [c(0.1, 0.0), c(0.3, -0.4)] {
        let base = jacobi_theta(z, t).value;
        let factor = (c(0.0, -PI) * t.value() + c(0.0, -2.0 * PI) * z).exp();
        if rel(jacobi_theta(z + t.value(), t).value, factor * base) >= 1e-12 {
            fails.push("quasi-periodicity");
        }
    }
    let t2 = Tau::imaginary(2.0).map_err(|e| e.to_string())?;
    let inv = dedekind_eta(Tau::new(-c(1.0, 0.0) / t2.value()).map_err(|e| e.to_string())?).value;
    if rel(inv, (c(0.0, -1.0) * t2.value()).sqrt() * dedekind_eta(t2).value) >= 1e-12 {
        fails.push("eta(-1/tau)");
    }
    let shifted = dedekind_eta(Tau::new(c(0.3, 1.1) + 1.0).map_err(|e| e.to_string())?).value;
    let base = dedekind_eta(Tau::new(c(0.3, 1.1)).map_err(|e| e.to_string())?).value;
    if rel(shifted, c(0.0, PI / 12.0).exp() * base) >= 1e-13 {
        fails.push("eta(tau + 1)");
    }
    let mut worst = 0.0f64;
    for tau in [c(0.0, 1.0), c(0.0, 2.0), c(0.3, 1.1)] {
        let t = Tau::new(tau).map_err(|e| e.to_string())?;
        let lhs = (jacobi_theta_dz(c(0.5, 0.0) + tau / 2.0, t).value * (c(0.0, PI / 4.0) * tau).exp()).powu(8);
        let rhs = (2.0 * PI).powi(8) * dedekind_eta(t).value.powu(24);
        worst = worst.max(rel(lhs, rhs));
    }
    if worst >= 1e-10 {
        fails.push("derivative identity");
    }
    let direct: f64 = (-60i64..=60).map(|n| (-PI * 0.3 * (n * n) as f64).exp()).sum();
    let poisson = gauss_theta_sum(0.3).map_err(|e| e.to_string())?;
    if (poisson - direct).abs() >= 1e-13 {
        fails.push("Poisson");
    }
    check(fails.is_empty(), if fails.is_empty() {
        format!("derivative identity max rel error {worst:.2e}")
    } else {
        format!("failed: {}", fails.join(", "))
    })
}

fn balian_low_decay() -> Outcome {
    let z2 = Lattice2n::scaled_integer(1, 1.0).map_err(|e| e.to_string())?;
    let dual = z2.symplectic_dual().map_err(|e| e.to_string())?;
    let mut mins = Vec::new();
    for r in [3.0, 4.0, 5.0, 6.0] {
        mins.push(spectral_estimates(&build_gram(&dual, r).map_err(|e| e.to_string())?).lambda_min_trunc);
    }
    let monotone = mins.windows(2).all(|w| w[1] < w[0]);
    let small = mins[3] < 1e-3;
    let frame_dual = Lattice2n::scaled_integer(1, 0.8).and_then(|l| l.symplectic_dual()).map_err(|e| e.to_string())?;
    let a = spectral_estimates(&build_gram(&frame_dual, 6.0).map_err(|e| e.to_string())?).lambda_min_trunc;
    let b = spectral_estimates(&build_gram(&frame_dual, 8.0).map_err(|e| e.to_string())?).lambda_min_trunc;
    let change = (a - b).abs() / a;
    let shown: Vec<String> = mins.iter().map(|m| format!("{m:.5}")).collect();
    check(
        monotone && small && change < 0.05 && b > 0.01,
        format!(
            "Z^2 lambda_min over (3, 4, 5, 6) = [{}] (monotone {monotone}, below 1e-3 {small}); 0.8 Z^2: {a:.5} -> {b:.5}, change {:.2}%",
            shown.join(", "),
            100.0 * change
        ),
    )
}

fn envelope_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut l1_violations = 0;
    let mut samples = 0;
    for k in 0..40u64 {
        let n = rng.gen_range(1..=3);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let s = EnvelopeSpec::new(BetaWeights::normalized(b).map_err(|e| e.to_string())?, rng.gen_range(0.3..2.0))
            .map_err(|e| e.to_string())?;
        let rec = check_l1(&s, 25, k);
        l1_violations += rec.violations;
        samples += rec.samples;
    }
    let two = EnvelopeSpec::new(BetaWeights::new(vec![1.0 / 3.0, 2.0 / 3.0]).map_err(|e| e.to_string())?, 1.5)
        .map_err(|e| e.to_string())?;
    let eq = check_equality_set(&two, 4000, 5);
    let mut l3_worst = 0.0f64;
    for _ in 0..100 {
        let w: Vec<Complex64> = random_unit(2, &mut rng).into_iter().map(|v| v * 1.2).collect();
        let rec = check_l3(&two, &w, 0.5).map_err(|e| e.to_string())?;
        l3_worst = l3_worst.max(rec.error / (1.0 + rec.rhs.abs()));
    }
    let one = EnvelopeSpec::new(BetaWeights::new(vec![1.0]).map_err(|e| e.to_string())?, 1.3).map_err(|e| e.to_string())?;
    let mut closed = 0.0f64;
    for t in [1e-8, 0.01, 0.3, 0.9, 1.2, 2.0] {
        let z = [Complex64::from_polar(t, 1.1)];
        let m = t * t;
        let r2 = 1.69;
        let exact = if m < r2 { PI * r2 * ((m / r2).ln() + 1.0) } else { PI * m };
        closed = closed.max((eval_psi(&one, &z) - exact).abs() / (1.0 + exact.abs()));
    }
    check(
        l1_violations == 0 && eq.agreement_rate >= 0.999 && l3_worst <= 1e-10 && closed <= 1e-12,
        format!(
            "L1 {l1_violations} violations in {samples} samples; equality set {:.4}%; L3 max rel error {l3_worst:.2e}; n = 1 closed form {closed:.2e}",
            100.0 * eq.agreement_rate
        ),
    )
}

fn hexagonal_extremality() -> Outcome {
    let v = 2.0;
    let (mut best, mut best_k, mut hex) = (f64::NEG_INFINITY, 0, 0.0);
    for k in 0..20 {
        let tau = match k {
            0..=9 => Complex64::from_polar(1.0, PI / 2.0 - (PI / 6.0) * k as f64 / 9.0),
            10..=15 => c(0.0, 1.0 + 0.4 * (k - 9) as f64),
            _ => c(0.0625 * (k - 15) as f64, 1.1),
        };
        let s = (v / tau.im).sqrt();
        let g = ComplexLattice::one_dim(c(s, 0.0), tau * s).map_err(|e| e.to_string())?;
        let cc = PI / 4.0 * buser_sarnak(&g).map_err(|e| e.to_string())?;
        if cc > best + 1e-12 {
            (best, best_k) = (cc, k);
        }
        if k == 9 {
            hex = cc;
        }
    }
    let exact = PI / (2.0 * 3f64.sqrt()) * v;
    check(
        best_k == 9 && (hex - exact).abs() < 1e-9,
        format!("maximum at sample {best_k} (hexagonal is 9), C = {hex:.12}, expected {exact:.12}"),
    )
}

fn pell_pin() -> Outcome {
    let p = pell_seshadri_14();
    check(p == Rational::new(8, 3), format!("{}/{}", p.num, p.den))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("1 duality involution and covolume product", Duration::from_secs(10), duality),
        ("2 split closed form for sup m_beta", Duration::from_secs(5), split_closed_form),
        ("3 Groechenig-Lyubarskii non-frame", Duration::from_secs(120), groechenig_lyubarskii),
        ("4 explicit bounds sandwich on Z + 2iZ", Duration::from_secs(60), sandwich),
        ("5 Robin equality on rectangular moduli", Duration::from_secs(30), robin_equality),
        ("6 theta/eta modular suite", Duration::from_secs(5), modular_suite),
        ("7 Balian-Low decay and frame plateau", Duration::from_secs(60), balian_low_decay),
        ("8 envelope suite", Duration::from_secs(30), envelope_suite),
        ("9 hexagonal extremality", Duration::from_secs(5), hexagonal_extremality),
        ("10 Pell pin", Duration::from_millis(1), pell_pin),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let in_time = took <= limit;
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {detail} [{:.3} s, limit {:.3} s{}]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs_f64(),
            if in_time { "" } else { ", over time" }
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
