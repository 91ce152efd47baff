//! Jacobi theta, Dedekind eta, Gaussian theta sums, the truncated exponential
//! sum and the constant `M(C)`, each with an explicit truncation certificate.
//!
//! Conventions: `theta(z; tau) = sum_n e^{2 pi i n z} e^{pi i n^2 tau}` and
//! `eta(tau) = e^{pi i tau / 12} prod_{n >= 1} (1 - e^{2 pi i n tau})`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GaborError, Result};

/// Smallest accepted imaginary part of a modulus.
pub const MIN_IM_TAU: f64 = 1e-6;

const THETA_REL_TOL: f64 = 1e-14;
const ETA_LOG_TAIL: f64 = 1e-15;
const MAX_TERMS: usize = 50_000_000;

/// A point of the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tau(Complex64);

impl Tau {
    pub fn new(tau: Complex64) -> Result<Self> {
        if !(tau.im >= MIN_IM_TAU) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(GaborError::DomainError(format!(
                "modulus needs Im tau >= {MIN_IM_TAU:e}, got {tau}"
            )));
        }
        Ok(Self(tau))
    }

    pub fn imaginary(eps: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, eps))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }
}

/// A truncated series value with a rigorous bound on the discarded tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: Complex64,
    pub truncation_n: usize,
    pub error_bound: f64,
}

/// `sum_{|n| <= N} (2 pi i n)^p e^{2 pi i n z + pi i n^2 tau}` with `N` grown until the
/// geometric majorant of the tail falls below `rel_tol * (1 + |value|)`.
fn theta_series(z: Complex64, tau: Complex64, p: u32, rel_tol: f64) -> SeriesResult {
    let eps = tau.im;
    let y = z.im;
    // log-magnitude of the n-th term without the polynomial weight
    let logmag = |n: f64| -PI * (2.0 * n * y + n * n * eps);
    let weight = |n: f64| if p == 0 { 1.0 } else { (2.0 * PI * n.abs()).powi(p as i32) };
    let term = |n: i64| {
        let nf = n as f64;
        let phase = Complex64::new(0.0, 2.0 * PI * nf) * z + Complex64::new(0.0, PI * nf * nf) * tau;
        let base = phase.exp();
        if p == 0 {
            base
        } else {
            base * Complex64::new(0.0, 2.0 * PI * nf).powu(p)
        }
    };
    // tail of one side, summed from m = N+1 with ratio bound at m
    let side_tail = |sign: f64, big_n: usize| -> f64 {
        let m = (big_n + 1) as f64;
        let first = (logmag(sign * m)).exp() * weight(m);
        // successive ratio of magnitudes is decreasing in m once below one
        let log_ratio = -PI * (eps * (2.0 * m + 1.0) + sign * 2.0 * y);
        let poly = if p == 0 { 1.0 } else { ((m + 1.0) / m).powi(p as i32) };
        let r = log_ratio.exp() * poly;
        if r < 1.0 {
            first / (1.0 - r)
        } else {
            f64::INFINITY
        }
    };

    let mut big_n: usize = (y.abs() / eps).ceil() as usize + 2;
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut summed: i64 = -1;
    loop {
        for n in (summed + 1)..=(big_n as i64) {
            let add = if n == 0 { term(0) } else { term(n) + term(-n) };
            abs_sum += (logmag(n as f64)).exp() * weight(n as f64);
            if n != 0 {
                abs_sum += (logmag(-n as f64)).exp() * weight(n as f64);
            }
            value += add;
        }
        summed = big_n as i64;
        let tail = side_tail(1.0, big_n) + side_tail(-1.0, big_n);
        if tail < rel_tol * (1.0 + value.norm()) || big_n >= MAX_TERMS {
            // tail plus accumulated rounding in the partial sum
            return SeriesResult {
                value,
                truncation_n: big_n,
                error_bound: tail + 16.0 * f64::EPSILON * abs_sum,
            };
        }
        big_n = (big_n + big_n / 2).max(big_n + 4);
    }
}

/// Splits `z = z0 + k tau` with `0 <= Im z0 < Im tau` and returns `(z0, k)`.
fn reduce_by_tau(z: Complex64, tau: Complex64) -> (Complex64, f64) {
    let k = (z.im / tau.im).floor();
    (z - tau * k, k)
}

/// Logarithm of the quasi-periodicity factor: `theta(z0 + k tau) = e^{L} theta(z0)` with
/// `L = -pi i k^2 tau - 2 pi i k z0`.
fn quasi_period_log_factor(z0: Complex64, tau: Complex64, k: f64) -> Complex64 {
    Complex64::new(0.0, -PI * k * k) * tau + Complex64::new(0.0, -2.0 * PI * k) * z0
}

/// The Jacobi theta function. The imaginary part of `z` is first reduced into
/// `[0, Im tau)`, so large `|Im z|` does not overflow the series.
pub fn jacobi_theta(z: Complex64, tau: Tau) -> SeriesResult {
    let t = tau.value();
    let (z0, k) = reduce_by_tau(z, t);
    let base = theta_series(z0, t, 0, THETA_REL_TOL);
    if k == 0.0 {
        return base;
    }
    let factor = quasi_period_log_factor(z0, t, k).exp();
    SeriesResult {
        value: base.value * factor,
        truncation_n: base.truncation_n,
        error_bound: base.error_bound * factor.norm(),
    }
}

/// `log |theta(z; tau)|`, computed on the reduced argument so it stays finite
/// wherever theta is nonzero. Values indistinguishable from zero within the
/// truncation bound give negative infinity.
pub fn log_abs_jacobi_theta(z: Complex64, tau: Tau) -> f64 {
    let t = tau.value();
    let (z0, k) = reduce_by_tau(z, t);
    let base = theta_series(z0, t, 0, THETA_REL_TOL);
    let mag = base.value.norm();
    if mag <= 10.0 * base.error_bound {
        return f64::NEG_INFINITY;
    }
    mag.ln() + quasi_period_log_factor(z0, t, k).re
}

/// `d theta / dz` by the term-wise differentiated series (no argument reduction).
pub fn jacobi_theta_dz(z: Complex64, tau: Tau) -> SeriesResult {
    theta_series(z, tau.value(), 1, THETA_REL_TOL)
}

/// The Dedekind eta function by its `q`-product.
pub fn dedekind_eta(tau: Tau) -> SeriesResult {
    let t = tau.value();
    let q = (Complex64::new(0.0, 2.0 * PI) * t).exp();
    let aq = (-2.0 * PI * t.im).exp();
    let log_tail = |n: usize| aq.powi(n as i32 + 1) / ((1.0 - aq) * (1.0 - aq));
    let mut prod = (Complex64::new(0.0, PI / 12.0) * t).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    let mut n = 0usize;
    while log_tail(n) >= ETA_LOG_TAIL && n < MAX_TERMS {
        n += 1;
        qn *= q;
        prod *= Complex64::new(1.0, 0.0) - qn;
    }
    let l = log_tail(n);
    SeriesResult {
        value: prod,
        truncation_n: n,
        error_bound: prod.norm() * l.exp_m1(),
    }
}

/// `1 + 2 sum_{k >= 1} e^{-pi k^2 t}` for `t >= 1`, with its tail bound.
fn gauss_theta_direct(t: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut k = 1.0f64;
    loop {
        let term = (-PI * k * k * t).exp();
        sum += term;
        // remaining terms are dominated by a geometric series with ratio e^{-pi t (2k+3)}
        let next = (-PI * (k + 1.0) * (k + 1.0) * t).exp();
        let r = (-PI * t * (2.0 * k + 3.0)).exp();
        let tail = next / (1.0 - r);
        if tail < 1e-18 * (1.0 + 2.0 * sum) {
            return (1.0 + 2.0 * sum, 2.0 * tail);
        }
        k += 1.0;
    }
}

/// `sum_{n in Z} e^{-pi n^2 t}`. For `t < 1` the Poisson-transformed series
/// `t^{-1/2} sum_n e^{-pi n^2 / t}` is summed instead.
pub fn gauss_theta_sum(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(GaborError::DomainError(format!("theta sum needs t > 0, got {t}")));
    }
    Ok(if t >= 1.0 {
        gauss_theta_direct(t).0
    } else {
        gauss_theta_direct(1.0 / t).0 / t.sqrt()
    })
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `1 - e^{-C} sum_{k<n} C^k/k!`, equal to `int_0^C e^{-t} t^{n-1}/(n-1)! dt`.
pub fn truncated_exp_lower(c: f64, n: u32) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(GaborError::DomainError(format!("truncated exponential needs C > 0, got {c}")));
    }
    if n == 0 {
        return Err(GaborError::DomainError("truncated exponential needs n >= 1".into()));
    }
    let nf = n as f64;
    if c < nf + 1.0 {
        // e^{-C} C^n/n! sum_{k>=0} C^k/((n+1)...(n+k)); all terms positive
        let lead = (nf * c.ln() - c - ln_factorial(n)).exp();
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-18 * sum {
            term *= c / (nf + k);
            sum += term;
            k += 1.0;
        }
        Ok((lead * sum).min(1.0))
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..n {
            term *= c / k as f64;
            sum += term;
        }
        Ok((1.0 - (-c).exp() * sum).clamp(0.0, 1.0))
    }
}

/// `M(C)`: `(n+1)^{n+1}` when `C >= n+1`, else `C^{n+1}/(C-n)`.
pub fn m_of_c(c: f64, n: u32) -> Result<f64> {
    let nf = n as f64;
    if !(c > nf) {
        return Err(GaborError::DomainError(format!("M(C) needs C > n = {n}, got {c}")));
    }
    Ok(if c >= nf + 1.0 {
        (nf + 1.0).powi(n as i32 + 1)
    } else {
        c.powi(n as i32 + 1) / (c - nf)
    })
}
