//! Explicit frame bounds for one-dimensional Gaussian Gabor systems.
//!
//! The dual lattice `Gamma` in `C` is rotated and reduced to `a Z + tau Z` with
//! `a > 0`; the Fock weight `e^{-pi |z|^2}` is rotation invariant, so nothing
//! downstream depends on the rotation.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::lattice::{gamma_of_dual, ComplexLattice, Lattice2n, SiegelMatrix};
use crate::special::{dedekind_eta, gauss_theta_sum, log_abs_jacobi_theta, m_of_c, truncated_exp_lower, Tau};

const T_SAMPLES: usize = 129;
const X_SAMPLES: usize = 1024;
const GOLDEN_TOL: f64 = 1e-11;

/// `Gamma = rotation * (a Z + tau Z)` with `a` the length of a shortest vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedBasis1d {
    pub a: f64,
    pub tau: Complex64,
    pub rotation: Complex64,
}

/// Lagrange-Gauss reduction followed by a rotation that makes the shortest vector real.
pub fn reduce_lattice_1d(g: &ComplexLattice) -> Result<ReducedBasis1d> {
    if g.n() != 1 {
        return Err(GaborError::DimensionMismatch("one-dimensional reduction needs n = 1".into()));
    }
    let mut b1 = g.gens()[0][0];
    let mut b2 = g.gens()[1][0];
    if b2.norm_sqr() < b1.norm_sqr() {
        std::mem::swap(&mut b1, &mut b2);
    }
    for _ in 0..10_000 {
        let mu = (b2 * b1.conj()).re / b1.norm_sqr();
        b2 -= b1 * mu.round();
        if b2.norm_sqr() < b1.norm_sqr() {
            std::mem::swap(&mut b1, &mut b2);
        } else {
            break;
        }
    }
    let a = b1.norm();
    let rotation = b1.conj() / a;
    let mut tau = b2 * rotation;
    if tau.im < 0.0 {
        tau = -tau;
    }
    tau -= Complex64::new(a * (tau.re / a).round(), 0.0);
    Ok(ReducedBasis1d { a, tau, rotation })
}

/// One candidate bound with the result it comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCandidate {
    pub source: String,
    pub lower: f64,
    pub upper: f64,
}

/// Validated bounds `lower <= functional <= upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameBoundSandwich {
    pub lower: f64,
    pub upper: f64,
    pub lower_source: String,
    pub upper_source: String,
    pub candidates: Vec<BoundCandidate>,
    pub intermediates: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl FrameBoundSandwich {
    fn from_candidates(candidates: Vec<BoundCandidate>, intermediates: BTreeMap<String, f64>, notes: Vec<String>) -> Self {
        let lo = candidates
            .iter()
            .max_by(|x, y| x.lower.total_cmp(&y.lower))
            .expect("at least one candidate");
        let up = candidates
            .iter()
            .min_by(|x, y| x.upper.total_cmp(&y.upper))
            .expect("at least one candidate");
        Self {
            lower: lo.lower,
            upper: up.upper,
            lower_source: lo.source.clone(),
            upper_source: up.source.clone(),
            candidates: candidates.clone(),
            intermediates,
            notes,
        }
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lower - tol && v <= self.upper + tol
    }
}

/// Bounds for `sqrt(2) sum_lambda |<f, pi_lambda g>|^2` with `g = e^{-pi t^2}` and `||f|| = 1`.
pub fn explicit_frame_bounds(lat: &Lattice2n) -> Result<FrameBoundSandwich> {
    if lat.n() != 1 {
        return Err(GaborError::DimensionMismatch("explicit bounds are one-dimensional".into()));
    }
    let g = gamma_of_dual(&SiegelMatrix::identity(1), lat)?;
    let red = reduce_lattice_1d(&g)?;
    let (a, tau) = (red.a, red.tau);
    let eps = a * tau.im;
    let covol = lat.covolume();
    let m = a * a;
    let c = PI * m / 4.0;

    let mut im = BTreeMap::new();
    im.insert("a".to_string(), a);
    im.insert("tau_re".to_string(), tau.re);
    im.insert("tau_im".to_string(), tau.im);
    im.insert("epsilon".to_string(), eps);
    im.insert("covolume_lambda".to_string(), covol);
    im.insert("m_gamma".to_string(), m);
    im.insert("c".to_string(), c);

    if !(eps > 1.0) {
        return Err(GaborError::NoBoundAvailable(format!(
            "covolume of the dual lattice is {eps}, not above 1"
        )));
    }
    let mut candidates = Vec::new();
    let u = 1.0 / ((1.0 - (-c).exp()) * covol);
    if c >= 2.0 {
        candidates.push(BoundCandidate {
            source: "interpolation-large-c".into(),
            lower: E / (4.0 * covol),
            upper: u,
        });
    } else if c > 1.0 {
        candidates.push(BoundCandidate {
            source: "interpolation-moderate-c".into(),
            lower: (c - 1.0) * E / (c * c * covol),
            upper: u,
        });
    }
    let tn = Tau::new(tau / a)?;
    let eta = dedekind_eta(tn).value.norm();
    let theta = gauss_theta_sum(tau.im / a)?;
    im.insert("eta_abs".to_string(), eta);
    im.insert("theta_sum".to_string(), theta);
    candidates.push(BoundCandidate {
        source: "theta-eta-bound".into(),
        lower: 4.0 * PI * (eps - 1.0) * eta.powi(6) / (theta * theta),
        upper: eps / (1.0 - (-c).exp()),
    });
    let mut notes = vec![
        "the dual lattice was rotated so its shortest vector is real; the Fock weight is rotation invariant".into(),
    ];
    // every lattice frame has sqrt(2) A <= sqrt(2) ||g||^2 / |Lambda| = eps
    for cand in candidates.iter().filter(|c| c.lower > eps) {
        notes.push(format!(
            "{} lower bound {} exceeds the density bound 1/|Lambda| = {eps} and cannot hold",
            cand.source, cand.lower
        ));
    }
    Ok(FrameBoundSandwich::from_candidates(candidates, im, notes))
}

/// `log U(z) = 2 (log|theta(z + 1/2 + tau/2; tau)| - pi (Im z + eps/2)^2 / eps)`.
pub fn faltings_log_u(z: Complex64, tau: Tau) -> f64 {
    let eps = tau.im();
    let w = z + Complex64::new(0.5, 0.0) + tau.value() * 0.5;
    let t = w.im;
    2.0 * (log_abs_theta_marked(w, tau) - PI * t * t / eps)
}

fn log_abs_theta_marked(w: Complex64, tau: Tau) -> f64 {
    log_abs_jacobi_theta(w, tau)
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `phi(t) = sup_x log |theta(x + i t; tau)|` by a dense grid plus golden-section refinement.
fn phi(t: f64, tau: Tau) -> f64 {
    let h = 1.0 / X_SAMPLES as f64;
    let vals: Vec<f64> = (0..X_SAMPLES)
        .map(|k| log_abs_theta_marked(Complex64::new(k as f64 * h, t), tau))
        .collect();
    let (k, &best) = vals
        .iter()
        .enumerate()
        .fold((0, &f64::NEG_INFINITY), |acc, (k, v)| if *v > *acc.1 { (k, v) } else { acc });
    let x0 = k as f64 * h;
    let f = |x: f64| log_abs_theta_marked(Complex64::new(x, t), tau);
    let (_, refined) = golden_max(&f, x0 - h, x0 + h, GOLDEN_TOL);
    refined.max(best)
}

/// `sup_z log U(z)`. The profile `phi(t) - pi t^2/eps` is even and `eps`-periodic in
/// `t = Im(z) + eps/2`, so the search runs over `t in [0, eps/2]`.
pub fn sup_log_u(tau: Tau) -> f64 {
    let eps = tau.im();
    let half = eps / 2.0;
    let h = half / (T_SAMPLES - 1) as f64;
    let profile = |t: f64| phi(t, tau) - PI * t * t / eps;
    let vals: Vec<f64> = (0..T_SAMPLES).into_par_iter().map(|k| profile(k as f64 * h)).collect();
    let mut k = 0;
    for (j, v) in vals.iter().enumerate() {
        if *v > vals[k] {
            k = j;
        }
    }
    let lo = (k as f64 - 1.0).max(0.0) * h;
    let hi = ((k + 1) as f64 * h).min(half);
    let (_, refined) = golden_max(&profile, lo, hi, GOLDEN_TOL);
    2.0 * refined.max(vals[k])
}

/// Normalized Robin constant `rho_eps / eps` of the lattice `Z + tau Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobinData {
    pub epsilon: f64,
    pub sup_log_u: f64,
    pub robin_over_eps: f64,
    /// Closed form obtained by bounding `sup log U` by `2 log sum_n e^{-pi n^2 eps}`.
    pub lower_bound: f64,
    pub gap: f64,
    pub eta_abs: f64,
}

pub fn robin_constant(tau: Tau) -> Result<RobinData> {
    let eps = tau.im();
    let eta = dedekind_eta(tau).value.norm();
    let s = sup_log_u(tau);
    let base = 2.0 * (2.0 * PI).ln() + 6.0 * eta.ln();
    let robin = base - s;
    let lower = base - 2.0 * gauss_theta_sum(eps)?.ln();
    Ok(RobinData {
        epsilon: eps,
        sup_log_u: s,
        robin_over_eps: robin,
        lower_bound: lower,
        gap: robin - lower,
        eta_abs: eta,
    })
}

/// Interpolation constant sandwich for `Z + tau Z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationSandwich {
    pub lower: f64,
    pub upper: f64,
    pub robin: RobinData,
    pub c: f64,
    /// The upper bound is the endpoint value of an infimum over `a in (1, eps)`.
    pub endpoint_approximation: bool,
}

/// `(1 - 1/a)^{-1} pi e^{-rho_a/a}` at the endpoint `a = eps`, paired with the lower
/// bound `1 - e^{-C}`.
pub fn interp_upper_via_robin(tau: Tau) -> Result<InterpolationSandwich> {
    let eps = tau.im();
    if !(eps > 1.0) {
        return Err(GaborError::DomainError(format!("needs Im tau > 1, got {eps}")));
    }
    let robin = robin_constant(tau)?;
    let upper = PI / (1.0 - 1.0 / eps) * (-robin.robin_over_eps).exp();
    let g = ComplexLattice::one_dim(Complex64::new(1.0, 0.0), tau.value())?;
    let m = crate::short_vectors::buser_sarnak(&g)?;
    let c = PI * m / 4.0;
    Ok(InterpolationSandwich {
        lower: truncated_exp_lower(c, 1)?,
        upper,
        robin,
        c,
        endpoint_approximation: true,
    })
}

/// Upper interpolation bound from `M(C)` for `C > n`.
pub fn interp_upper_via_m(c: f64, n: u32) -> Result<f64> {
    Ok(m_of_c(c, n)? / E)
}

/// Frame bounds `[(B |Lambda|)^{-1}, (A |Lambda|)^{-1}] / sqrt(2^n det Im Omega)` from
/// interpolation bounds `A <= B` of the dual problem.
pub fn convert_interp_to_frame_bounds(
    a: f64,
    b: f64,
    lat: &Lattice2n,
    omega: &SiegelMatrix,
) -> Result<FrameBoundSandwich> {
    if !(a > 0.0 && a <= b) {
        return Err(GaborError::DomainError(format!("need 0 < A <= B, got A = {a}, B = {b}")));
    }
    if omega.n() != lat.n() {
        return Err(GaborError::DimensionMismatch("Omega and lattice dimensions differ".into()));
    }
    let n = lat.n() as i32;
    let covol = lat.covolume();
    let norm = (2f64.powi(n) * omega.im_det()).sqrt();
    let mut im = BTreeMap::new();
    im.insert("covolume_lambda".to_string(), covol);
    im.insert("window_norm_factor".to_string(), norm);
    Ok(FrameBoundSandwich::from_candidates(
        vec![BoundCandidate {
            source: "interpolation-to-frame".into(),
            lower: 1.0 / (b * covol * norm),
            upper: 1.0 / (a * covol * norm),
        }],
        im,
        Vec::new(),
    ))
}
