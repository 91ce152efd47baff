//! The envelope `psi_r(z) = phi_A(log|z_1|^2, ..., log|z_n|^2)` of
//! `phi(x) = pi sum_j e^{x_j}` over the halfspace `A = {alpha . beta >= pi r^2}`,
//! which carries a logarithmic pole of weight `pi r^2` along `T_beta` at the origin
//! and agrees with `pi |z|^2` outside `B_r^beta = {sum_j beta_j |z_j|^2 < r^2}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::short_vectors::BetaWeights;

/// Smallest admissible weight.
pub const MIN_BETA: f64 = 1e-9;
const ROOT_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeSpec {
    beta: BetaWeights,
    r: f64,
}

impl EnvelopeSpec {
    pub fn new(beta: BetaWeights, r: f64) -> Result<Self> {
        if beta.min() < MIN_BETA {
            return Err(GaborError::InvalidWeights(format!(
                "envelope weights must be at least {MIN_BETA}, got {}",
                beta.min()
            )));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(GaborError::DomainError(format!("radius must be positive, got {r}")));
        }
        Ok(Self { beta, r })
    }

    pub fn beta(&self) -> &[f64] {
        self.beta.as_slice()
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.beta.n()
    }

    /// `sum_j beta_j |z_j|^2`, compared against `r^2` for membership in `B_r^beta`.
    pub fn weighted_norm_sq(&self, z: &[Complex64]) -> f64 {
        z.iter().zip(self.beta()).map(|(zj, b)| b * zj.norm_sqr()).sum()
    }

    pub fn in_ball(&self, z: &[Complex64]) -> bool {
        self.weighted_norm_sq(z) < self.r * self.r
    }
}

/// `phi(x) = pi sum_j e^{x_j}`.
pub fn phi(x: &[f64]) -> f64 {
    PI * x.iter().map(|v| v.exp()).sum::<f64>()
}

/// `phi*(alpha) = sum_j (alpha_j log(alpha_j / pi) - alpha_j)` with `0 log 0 = 0`,
/// and `+inf` off the closed positive orthant.
pub fn legendre_dual_phi(alpha: &[f64]) -> f64 {
    if alpha.iter().any(|a| *a < 0.0 || a.is_nan()) {
        return f64::INFINITY;
    }
    alpha
        .iter()
        .map(|&a| if a == 0.0 { 0.0 } else { a * (a / PI).ln() - a })
        .sum()
}

/// `T_beta(z) = log(sum_j |z_j|^{2/beta_j})`.
pub fn t_beta(spec: &EnvelopeSpec, z: &[Complex64]) -> f64 {
    let terms: Vec<f64> = z
        .iter()
        .zip(spec.beta())
        .filter(|(zj, _)| zj.norm_sqr() > 0.0)
        .map(|(zj, b)| zj.norm_sqr().ln() / b)
        .collect();
    log_sum_exp(&terms)
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Multiplier `mu < 0` of the boundary maximizer: the root of
/// `sum_j beta_j |z_j|^2 e^{-mu beta_j} = r^2` over the nonzero coordinates.
fn boundary_multiplier(spec: &EnvelopeSpec, x: &[f64]) -> f64 {
    let beta = spec.beta();
    let log_r2 = (spec.r * spec.r).ln();
    let active: Vec<(f64, f64)> = x
        .iter()
        .zip(beta)
        .filter(|(xj, _)| xj.is_finite())
        .map(|(xj, b)| (*xj, *b))
        .collect();
    // F(mu) = log sum_j beta_j e^{x_j - mu beta_j} - log r^2, convex and decreasing
    let f = |mu: f64| {
        let t: Vec<f64> = active.iter().map(|(xj, b)| b.ln() + xj - mu * b).collect();
        let lse = log_sum_exp(&t);
        let fp = -active.iter().zip(&t).map(|((_, b), tj)| b * (tj - lse).exp()).sum::<f64>();
        (lse - log_r2, fp)
    };
    let s0 = f(0.0).0;
    let bmin = active.iter().map(|a| a.1).fold(f64::INFINITY, f64::min);
    let bmax = active.iter().map(|a| a.1).fold(0.0, f64::max);
    // the root lies in [s0 / bmin, s0 / bmax] since all e^{-mu beta_j} sit between the extremes
    let (mut lo, mut hi) = (s0 / bmin, s0 / bmax);
    if !(lo < hi) {
        return lo;
    }
    let mut mu = 0.5 * (lo + hi);
    for _ in 0..400 {
        let (v, d) = f(mu);
        if v > 0.0 {
            lo = mu;
        } else {
            hi = mu;
        }
        let newton = mu - v / d;
        let next = if newton.is_finite() && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - mu).abs() <= ROOT_TOL * mu.abs().max(1.0) || hi - lo <= ROOT_TOL * mu.abs().max(1.0) {
            return next;
        }
        mu = next;
    }
    mu
}

/// `psi_r^beta(z)`, with `-inf` at `z = 0`. Outside `B_r^beta` this is `pi |z|^2`;
/// inside, the supremum over `alpha . beta = pi r^2` is attained at
/// `alpha_j = pi |z_j|^2 e^{-mu beta_j}` and equals `mu pi r^2 + sum_j alpha_j`.
pub fn eval_psi(spec: &EnvelopeSpec, z: &[Complex64]) -> f64 {
    assert_eq!(z.len(), spec.n(), "point has the wrong dimension");
    let abs_sq: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    if abs_sq == 0.0 {
        return f64::NEG_INFINITY;
    }
    if !spec.in_ball(z) {
        return PI * abs_sq;
    }
    let x: Vec<f64> = z.iter().map(|v| v.norm_sqr().ln()).collect();
    let mu = boundary_multiplier(spec, &x);
    let alpha_sum: f64 = x
        .iter()
        .zip(spec.beta())
        .filter(|(xj, _)| xj.is_finite())
        .map(|(xj, b)| PI * (xj - mu * b).exp())
        .sum();
    mu * PI * spec.r * spec.r + alpha_sum
}

/// `phi_A(x)` through the dual problem `min_{nu >= 0} phi(x + nu beta) - nu pi r^2`,
/// solved by golden section. Independent of the multiplier root used by `eval_psi`.
pub fn phi_a_dual(spec: &EnvelopeSpec, x: &[f64]) -> f64 {
    let beta = spec.beta();
    let pr2 = PI * spec.r * spec.r;
    let h = |nu: f64| {
        let shifted: Vec<f64> = x.iter().zip(beta).map(|(xj, b)| xj + nu * b).collect();
        phi(&shifted) - nu * pr2
    };
    let mut hi = 1.0;
    while h(hi) < h(0.0) || h(2.0 * hi) < h(hi) {
        hi *= 2.0;
        if hi > 1e6 {
            break;
        }
    }
    let (mut a, mut b) = (0.0, 2.0 * hi);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (h(c), h(d));
    for _ in 0..200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = h(d);
        }
        if b - a < 1e-14 * b.max(1.0) {
            break;
        }
    }
    h(0.0).min(h(0.5 * (a + b)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L1Record {
    pub samples: usize,
    /// `[inf_j (pi r^2/beta_j)(1 - log(r^2/beta_j)), n pi]`.
    pub bracket: (f64, f64),
    /// Range of `psi_r - pi r^2 max_j log|z_j|^2 / beta_j` over the samples.
    pub vertex_gap_range: (f64, f64),
    /// Range of `psi_r - pi r^2 T_beta` over the samples.
    pub difference_range: (f64, f64),
    pub violations: usize,
    pub passed: bool,
}

/// Boundedness of `psi_r - pi r^2 T_beta` near the origin, sampled along random
/// directions at log-spaced radii from `1` down to `1e-12`, with every coordinate
/// of modulus at most one.
pub fn check_l1(spec: &EnvelopeSpec, samples: usize, seed: u64) -> L1Record {
    let n = spec.n();
    let beta = spec.beta();
    let r2 = spec.r * spec.r;
    let lower = beta
        .iter()
        .map(|b| PI * r2 / b - PI * r2 / b * (r2 / b).ln())
        .fold(f64::INFINITY, f64::min);
    let upper = n as f64 * PI;
    let widen = PI * r2 * (n as f64).ln();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gap = (f64::INFINITY, f64::NEG_INFINITY);
    let mut diff = (f64::INFINITY, f64::NEG_INFINITY);
    let mut violations = 0;
    let tol = 1e-9 * (1.0 + upper.abs() + lower.abs());
    for k in 0..samples {
        let dir = random_unit(n, &mut rng);
        let t = 10f64.powf(-12.0 * (k % 25) as f64 / 24.0);
        let z: Vec<Complex64> = dir.iter().map(|d| d * t).collect();
        let psi = eval_psi(spec, &z);
        let vertex = z
            .iter()
            .zip(beta)
            .map(|(zj, b)| zj.norm_sqr().ln() / b)
            .fold(f64::NEG_INFINITY, f64::max);
        let q = psi - PI * r2 * vertex;
        let dq = psi - PI * r2 * t_beta(spec, &z);
        gap = (gap.0.min(q), gap.1.max(q));
        diff = (diff.0.min(dq), diff.1.max(dq));
        if q < lower - tol || q > upper + tol || dq < lower - widen - tol || dq > upper + tol {
            violations += 1;
        }
    }
    L1Record {
        samples,
        bracket: (lower, upper),
        vertex_gap_range: gap,
        difference_range: diff,
        violations,
        passed: violations == 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct L3Record {
    pub delta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub error: f64,
    pub passed: bool,
}

/// `psi_r(f_delta(w)) = psi_r(w) + pi r^2 log(delta^2)` with `f_delta(w)_j = delta^{beta_j} w_j`.
pub fn check_l3(spec: &EnvelopeSpec, w: &[Complex64], delta: f64) -> Result<L3Record> {
    if w.len() != spec.n() {
        return Err(GaborError::DimensionMismatch("point has the wrong dimension".into()));
    }
    if !spec.in_ball(w) {
        return Err(GaborError::DomainError("point lies outside B_r^beta".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GaborError::DomainError(format!("delta must lie in (0, 1), got {delta}")));
    }
    let fw: Vec<Complex64> = w.iter().zip(spec.beta()).map(|(wj, b)| wj * delta.powf(*b)).collect();
    let lhs = eval_psi(spec, &fw);
    let rhs = eval_psi(spec, w) + PI * spec.r * spec.r * (delta * delta).ln();
    let error = (lhs - rhs).abs();
    Ok(L3Record { delta, lhs, rhs, error, passed: error <= 1e-10 * (1.0 + rhs.abs()) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualitySetRecord {
    pub samples: usize,
    /// Samples within `1e-6` of the free boundary, excluded from the count.
    pub excluded: usize,
    pub agreements: usize,
    pub agreement_rate: f64,
    /// Largest `|eval_psi - phi_A|` with `phi_A` computed through the dual problem.
    pub max_value_mismatch: f64,
}

/// Compares `{phi_A = phi}` against `{grad phi in A}` on random points of `(-6, 2)^n`.
pub fn check_equality_set(spec: &EnvelopeSpec, samples: usize, seed: u64) -> EqualitySetRecord {
    let n = spec.n();
    let beta = spec.beta();
    let pr2 = PI * spec.r * spec.r;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut excluded, mut agreements, mut mismatch) = (0, 0, 0.0f64);
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-6.0..2.0)).collect();
        let grad_dot_beta: f64 = x.iter().zip(beta).map(|(xj, b)| PI * xj.exp() * b).sum();
        if (grad_dot_beta - pr2).abs() <= 1e-6 * PI {
            excluded += 1;
            continue;
        }
        let dual = phi_a_dual(spec, &x);
        let full = phi(&x);
        let equal = (dual - full).abs() <= 1e-9 * (1.0 + full.abs());
        if equal == (grad_dot_beta >= pr2) {
            agreements += 1;
        }
        let z: Vec<Complex64> = x.iter().map(|xj| Complex64::new((xj / 2.0).exp(), 0.0)).collect();
        mismatch = mismatch.max((eval_psi(spec, &z) - dual).abs());
    }
    let counted = samples - excluded;
    EqualitySetRecord {
        samples,
        excluded,
        agreements,
        agreement_rate: if counted == 0 { 1.0 } else { agreements as f64 / counted as f64 },
        max_value_mismatch: mismatch,
    }
}

/// Smallest five-point Laplacian of `zeta -> psi_r(a + zeta b)` at `zeta = 0`
/// over random complex lines through points with all coordinates away from zero.
/// Coordinates have modulus at least `max(r, 1) / 2`: near `z_j = 0` the stencil error
/// of the `log |z_j|^2` term grows like `h^2 / |z_j|^4`.
pub fn min_line_laplacian(spec: &EnvelopeSpec, samples: usize, h: f64, seed: u64) -> f64 {
    let n = spec.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let unit = spec.r.max(1.0);
    for _ in 0..samples {
        let a: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.5..1.6) * unit, rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let b = random_unit(n, &mut rng);
        let at = |zeta: Complex64| {
            let z: Vec<Complex64> = a.iter().zip(&b).map(|(ai, bi)| ai + zeta * bi).collect();
            eval_psi(spec, &z)
        };
        let c = at(Complex64::new(0.0, 0.0));
        let lap = (at(Complex64::new(h, 0.0))
            + at(Complex64::new(-h, 0.0))
            + at(Complex64::new(0.0, h))
            + at(Complex64::new(0.0, -h))
            - 4.0 * c)
            / (h * h);
        worst = worst.min(lap);
    }
    worst
}

/// A uniformly random unit vector of `C^n`.
pub fn random_unit(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let s = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if s > 1e-3 && s <= (2 * n) as f64 {
            return v.into_iter().map(|c| c / s).collect();
        }
    }
}
