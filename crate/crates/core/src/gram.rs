//! Truncated Gram matrices of Gaussian time-frequency shifts over lattices,
//! their extreme eigenvalues, direct evaluation of the frame functional, and an
//! empirical frame/non-frame classification over a ladder of truncation radii.
//!
//! Points are `(xi, x)` with `pi_(xi, x) = M_xi T_x` and the window is
//! `g(t) = exp(-pi |t|^2)`, so `|g|^2 = 2^{-n/2}`. The system over `Lambda` is a
//! frame exactly when the system over the symplectic dual is a Riesz sequence,
//! and the frame bounds are the Riesz bounds divided by `|Lambda|`.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::lanczos::{self, HermitianOperator};
use crate::lattice::{gamma_of_primal, Lattice2n, SiegelMatrix};
use crate::short_vectors::lattice_points_in_ball;

/// Point cap for a single truncation unless the caller overrides it.
pub const DEFAULT_POINT_CAP: usize = 4000;
/// Entries below this fraction of the diagonal are dropped from sparse Gram matrices.
pub const ENTRY_CUTOFF: f64 = 1e-13;
/// Largest truncation solved by a dense eigendecomposition.
pub const DENSE_LIMIT: usize = 600;
pub const LANCZOS_TOL: f64 = 1e-10;
pub const LANCZOS_MAX_ITER: usize = 1500;
pub const DEFAULT_LADDER: [f64; 3] = [4.0, 6.0, 8.0];
/// Relative change of `lambda_min` across the last two radii that counts as a plateau.
pub const PLATEAU_TOL: f64 = 0.05;
/// Log-log slope of `lambda_min` against the radius at or below which decay counts as sustained.
pub const DECAY_SLOPE: f64 = -0.5;
const LANCZOS_SEED: u64 = 0x5eed;

/// `<pi_lambda g, pi_mu g>` for `g(t) = exp(-pi |t|^2)` on `R^n`, linear in the first slot.
pub fn gaussian_inner_product(lambda: &[f64], mu: &[f64], n: usize) -> Complex64 {
    debug_assert!(lambda.len() == 2 * n && mu.len() == 2 * n);
    let mut dist = 0.0;
    let mut phase = 0.0;
    for j in 0..n {
        let dxi = lambda[j] - mu[j];
        let dx = lambda[n + j] - mu[n + j];
        dist += dxi * dxi + dx * dx;
        phase += dxi * (lambda[n + j] + mu[n + j]);
    }
    let modulus = 2f64.powf(-(n as f64) / 2.0) * (-PI * dist / 2.0).exp();
    Complex64::from_polar(modulus, PI * phase)
}

/// Distance beyond which `|<pi_lambda g, pi_mu g>| < ENTRY_CUTOFF * |g|^2`.
pub fn cutoff_distance() -> f64 {
    (-2.0 * ENTRY_CUTOFF.ln() / PI).sqrt()
}

/// Upper bound for `sum f(|v|)` over lattice points with `|v| > r0`, for `f`
/// nonincreasing on `[r0, inf)`, with `packing` a lower bound on half the shortest
/// vector length. Shells of width `h` hold at most `((r + h + packing)/packing)^dim`
/// points since the packing balls are disjoint.
pub fn lattice_tail_bound(dim: usize, packing: f64, r0: f64, f: impl Fn(f64) -> f64) -> f64 {
    let h = 0.05f64.max(packing / 4.0);
    let mut total = 0.0;
    let mut k = 0usize;
    loop {
        let r = r0 + k as f64 * h;
        let term = ((r + h + packing) / packing).powi(dim as i32) * f(r);
        total += term;
        k += 1;
        if (term <= 1e-18 * total || term < 1e-300) && f(r) < 1e-30 || k > 1_000_000 {
            break;
        }
    }
    total
}

/// Compressed sparse rows of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<Complex64>,
}

impl CsrMatrix {
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn max_row_abs_sum(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.vals[self.row_ptr[i]..self.row_ptr[i + 1]].iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl HermitianOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
            *yi = self.cols[a..b]
                .iter()
                .zip(&self.vals[a..b])
                .map(|(&j, v)| v * x[j as usize])
                .sum();
        });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GramMatrix {
    Dense(DMatrix<Complex64>),
    Sparse(CsrMatrix),
}

/// `G_{ij} = <pi_{p_j} g, pi_{p_i} g>` over the lattice points `p_i` with `|p_i| <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramTruncation {
    pub n: usize,
    pub radius: f64,
    pub points: Vec<DVector<f64>>,
    pub coeffs: Vec<Vec<i64>>,
    pub gram: GramMatrix,
    /// Entries between points farther apart than this are zero in a sparse Gram.
    pub cutoff: f64,
    /// Bound on the absolute row sum of all dropped entries, in the truncation and in the full lattice.
    pub dropped_row_bound: f64,
    /// Absolute row sum of the untruncated Gram operator, which bounds its norm.
    pub full_row_sum: f64,
}

impl GramTruncation {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The matrix as a dense array; sparse truncations are expanded.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.gram {
            GramMatrix::Dense(m) => m.clone(),
            GramMatrix::Sparse(s) => {
                let mut m = DMatrix::zeros(s.dim, s.dim);
                for i in 0..s.dim {
                    for k in s.row_ptr[i]..s.row_ptr[i + 1] {
                        m[(i, s.cols[k] as usize)] = s.vals[k];
                    }
                }
                m
            }
        }
    }
}

/// Lattice vectors within the entry cutoff (zero included), and the resulting
/// full-operator row sum and the bound on the dropped part of every row.
struct Neighbourhood {
    offsets: Vec<Vec<i64>>,
    full_row_sum: f64,
    dropped: f64,
}

fn neighbourhood(lat: &Lattice2n) -> Result<Neighbourhood> {
    let n = lat.n();
    let d_cut = cutoff_distance();
    let near = lattice_points_in_ball(lat, d_cut, 50_000_000)?;
    let diag = 2f64.powf(-(n as f64) / 2.0);
    let mut kept = 0.0;
    for (_, p) in &near {
        kept += diag * (-PI * p.norm_squared() / 2.0).exp();
    }
    let shortest = near.iter().skip(1).map(|(_, p)| p.norm()).next().unwrap_or(d_cut).min(d_cut);
    let dropped = lattice_tail_bound(lat.dim(), shortest / 2.0, d_cut, |r| diag * (-PI * r * r / 2.0).exp());
    Ok(Neighbourhood {
        offsets: near.into_iter().map(|(c, _)| c).collect(),
        full_row_sum: kept + dropped,
        dropped,
    })
}

fn points_capped(lat: &Lattice2n, radius: f64, cap: usize) -> Result<Vec<(Vec<i64>, DVector<f64>)>> {
    match lattice_points_in_ball(lat, radius, cap) {
        Err(GaborError::EnumerationOverflow { .. }) => Err(GaborError::TruncationTooLarge { points: cap + 1, cap }),
        Err(e) => Err(e),
        Ok(p) if p.len() > cap => Err(GaborError::TruncationTooLarge { points: p.len(), cap }),
        Ok(p) => Ok(p),
    }
}

pub fn build_gram(lat_dual: &Lattice2n, radius: f64) -> Result<GramTruncation> {
    build_gram_capped(lat_dual, radius, DEFAULT_POINT_CAP)
}

/// Gram truncation over the points of `lat_dual` in the closed ball of `radius`,
/// ordered by norm and then by coefficients.
pub fn build_gram_capped(lat_dual: &Lattice2n, radius: f64, cap: usize) -> Result<GramTruncation> {
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(GaborError::DomainError(format!("radius must be nonnegative, got {radius}")));
    }
    let n = lat_dual.n();
    let pts = points_capped(lat_dual, radius, cap)?;
    let nb = neighbourhood(lat_dual)?;
    let (coeffs, points): (Vec<Vec<i64>>, Vec<DVector<f64>>) = pts.into_iter().unzip();
    let m = points.len();
    let gram = if m <= DENSE_LIMIT {
        let mut g = DMatrix::zeros(m, m);
        let rows: Vec<Vec<Complex64>> = (0..m)
            .into_par_iter()
            .map(|i| {
                (0..m)
                    .map(|j| gaussian_inner_product(points[j].as_slice(), points[i].as_slice(), n))
                    .collect()
            })
            .collect();
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                g[(i, j)] = v;
            }
        }
        GramMatrix::Dense(g)
    } else {
        let index: HashMap<&[i64], usize> = coeffs.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        let rows: Vec<Vec<(u32, Complex64)>> = (0..m)
            .into_par_iter()
            .map(|i| {
                let mut key = vec![0i64; coeffs[i].len()];
                let mut row: Vec<(u32, Complex64)> = nb
                    .offsets
                    .iter()
                    .filter_map(|off| {
                        for (k, slot) in key.iter_mut().enumerate() {
                            *slot = coeffs[i][k] + off[k];
                        }
                        index.get(key.as_slice()).map(|&j| {
                            (j as u32, gaussian_inner_product(points[j].as_slice(), points[i].as_slice(), n))
                        })
                    })
                    .collect();
                row.sort_by_key(|e| e.0);
                row
            })
            .collect();
        let mut row_ptr = Vec::with_capacity(m + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for row in rows {
            for (j, v) in row {
                cols.push(j);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        GramMatrix::Sparse(CsrMatrix { dim: m, row_ptr, cols, vals })
    };
    Ok(GramTruncation {
        n,
        radius,
        points,
        coeffs,
        gram,
        cutoff: cutoff_distance(),
        dropped_row_bound: nb.dropped,
        full_row_sum: nb.full_row_sum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub radius: f64,
    pub points: usize,
    pub lambda_min_trunc: f64,
    pub lambda_max_trunc: f64,
    /// Largest absolute row sum of the truncation.
    pub schur_upper: f64,
    /// Absolute row sum of the untruncated operator, over the cutoff ball plus a tail bound.
    pub full_row_sum: f64,
    pub solver: Solver,
    /// Largest eigen-residual of the reported extremes.
    pub residual: f64,
    pub converged: bool,
    /// Perturbation allowance from dropped entries plus the solver residual.
    pub noise_floor: f64,
}

pub fn spectral_estimates(g: &GramTruncation) -> SpectralEstimate {
    let (min, max, schur, solver, residual, converged) = match &g.gram {
        GramMatrix::Dense(m) => {
            let schur = m.row_iter().map(|r| r.iter().map(|v| v.norm()).sum::<f64>()).fold(0.0, f64::max);
            if m.nrows() == 1 {
                (m[(0, 0)].re, m[(0, 0)].re, schur, Solver::Dense, 0.0, true)
            } else {
                let ev = m.clone().symmetric_eigenvalues();
                let min = ev.iter().copied().fold(f64::INFINITY, f64::min);
                let max = ev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let residual = 1e-14 * max.abs() * m.nrows() as f64;
                (min, max, schur, Solver::Dense, residual, true)
            }
        }
        GramMatrix::Sparse(s) => {
            let e = lanczos::extreme_eigenvalues(s, LANCZOS_TOL, LANCZOS_MAX_ITER, LANCZOS_SEED);
            let residual = e.residual_min.max(e.residual_max);
            (e.min, e.max, s.max_row_abs_sum(), Solver::Lanczos, residual, e.converged)
        }
    };
    let dropped = if matches!(g.gram, GramMatrix::Sparse(_)) { g.dropped_row_bound } else { 0.0 };
    SpectralEstimate {
        radius: g.radius,
        points: g.len(),
        lambda_min_trunc: min,
        lambda_max_trunc: max,
        schur_upper: schur + dropped,
        full_row_sum: g.full_row_sum,
        solver,
        residual,
        converged,
        noise_floor: dropped + residual,
    }
}

/// For dense truncations, the exact smallest eigenvalue of the Hermitian matrix;
/// used to cross-check the Lanczos path.
pub fn dense_lambda_min(g: &GramTruncation) -> f64 {
    g.to_dense().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `f = sum_k c_k pi_{nu_k} g`, a finite combination of shifted Gaussians.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    pub n: usize,
    pub terms: Vec<(Complex64, Vec<f64>)>,
}

impl TestFunction {
    pub fn new(n: usize, terms: Vec<(Complex64, Vec<f64>)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(GaborError::InvalidTestFunction("no terms".into()));
        }
        if terms.iter().any(|(c, nu)| nu.len() != 2 * n || !c.is_finite() || nu.iter().any(|v| !v.is_finite())) {
            return Err(GaborError::InvalidTestFunction(format!("terms must be finite points of R^{}", 2 * n)));
        }
        Ok(Self { n, terms })
    }

    /// The unit-norm multiple of `g` itself.
    pub fn gaussian(n: usize) -> Self {
        let c = 2f64.powf(n as f64 / 4.0);
        Self { n, terms: vec![(Complex64::new(c, 0.0), vec![0.0; 2 * n])] }
    }

    /// `k` terms with random coefficients and centers in `[-spread, spread]^{2n}`, unit norm.
    pub fn random(n: usize, k: usize, spread: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..k.max(1))
            .map(|_| {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let nu = (0..2 * n).map(|_| rng.gen_range(-spread..=spread)).collect();
                (c, nu)
            })
            .collect();
        Self::new(n, terms)?.normalized()
    }

    pub fn inner(&self, other: &TestFunction) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (a, nu) in &self.terms {
            for (b, mu) in &other.terms {
                s += a * b.conj() * gaussian_inner_product(nu, mu, self.n);
            }
        }
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).re
    }

    pub fn normalized(mut self) -> Result<Self> {
        let s = self.norm_sq();
        if !(s > 1e-300) {
            return Err(GaborError::InvalidTestFunction("test function is zero".into()));
        }
        let k = 1.0 / s.sqrt();
        self.terms.iter_mut().for_each(|(c, _)| *c *= k);
        Ok(self)
    }

    /// `pi_mu f`, using `pi_mu pi_nu = exp(-2 pi i xi_nu . x_mu) pi_{mu + nu}`.
    pub fn shifted(&self, mu: &[f64]) -> Self {
        let n = self.n;
        let terms = self
            .terms
            .iter()
            .map(|(c, nu)| {
                let dot: f64 = (0..n).map(|j| nu[j] * mu[n + j]).sum();
                let shifted: Vec<f64> = nu.iter().zip(mu).map(|(a, b)| a + b).collect();
                (c * Complex64::from_polar(1.0, -2.0 * PI * dot), shifted)
            })
            .collect();
        Self { n, terms }
    }

    /// `<f, pi_lambda g>`.
    pub fn coefficient(&self, lambda: &[f64]) -> Complex64 {
        self.terms.iter().map(|(c, nu)| c * gaussian_inner_product(nu, lambda, self.n)).sum()
    }

    fn max_center(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, nu)| nu.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    fn coefficient_mass(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.norm()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameFunctional {
    pub value: f64,
    /// Bound on the omitted terms with `|lambda| > radius`.
    pub tail_bound: f64,
    pub radius: f64,
    pub points: usize,
}

/// The smallest radius that pushes the frame functional tail below `1e-13`.
pub fn functional_radius(lat: &Lattice2n, f: &TestFunction) -> Result<f64> {
    let mut r = f.max_center() + 4.0;
    for _ in 0..60 {
        if functional_tail(lat, f, r)? < 1e-13 {
            return Ok(r);
        }
        r += 0.5;
    }
    Err(GaborError::DomainError("no radius reaches the tail target".into()))
}

fn functional_tail(lat: &Lattice2n, f: &TestFunction, radius: f64) -> Result<f64> {
    let shortest = lattice_points_in_ball(lat, radius.min(6.0), DEFAULT_POINT_CAP * 50)?
        .get(1)
        .map(|(_, p)| p.norm())
        .unwrap_or(radius.min(6.0));
    let a = f.coefficient_mass() * 2f64.powf(-(f.n as f64) / 2.0);
    let c = f.max_center();
    Ok(lattice_tail_bound(lat.dim(), shortest / 2.0, radius, |r| {
        let d = (r - c).max(0.0);
        a * a * (-PI * d * d).exp()
    }))
}

/// `sum_{lambda in Lambda, |lambda| <= radius} |<f, pi_lambda g>|^2` for a unit-norm `f`.
pub fn frame_functional(lat: &Lattice2n, f: &TestFunction, radius: f64) -> Result<FrameFunctional> {
    if f.n != lat.n() {
        return Err(GaborError::DimensionMismatch("test function and lattice dimensions differ".into()));
    }
    let norm = f.norm_sq();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(GaborError::InvalidTestFunction(format!("test function has squared norm {norm}, not 1")));
    }
    let pts = lattice_points_in_ball(lat, radius, 10_000_000)?;
    let value = pts
        .par_iter()
        .map(|(_, p)| f.coefficient(p.as_slice()).norm_sqr())
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(FrameFunctional { value, tail_bound: functional_tail(lat, f, radius)?, radius, points: pts.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EmpiricalVerdict {
    LikelyFrame,
    LikelyNotFrame,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub verdict: EmpiricalVerdict,
    pub n: usize,
    pub covolume: f64,
    pub ladder: Vec<SpectralEstimate>,
    /// Truncated Riesz bounds over the dual divided by the covolume, per radius.
    pub frame_bound_estimates: Vec<(f64, f64)>,
    /// `|lambda_last - lambda_prev| / lambda_prev` over the last two radii.
    pub relative_change: f64,
    /// Least-squares slope of `log lambda_min` against `log radius`.
    pub decay_slope: f64,
    pub noise_floor: f64,
    pub note: String,
}

/// Ladder and classification thresholds for `verify_frame_verdict_with`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub ladder: Vec<f64>,
    pub point_cap: usize,
    pub plateau_tol: f64,
    pub decay_slope: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            ladder: DEFAULT_LADDER.to_vec(),
            point_cap: DEFAULT_POINT_CAP,
            plateau_tol: PLATEAU_TOL,
            decay_slope: DECAY_SLOPE,
        }
    }
}

pub fn verify_frame_verdict(lat: &Lattice2n, omega: &SiegelMatrix) -> Result<VerificationRecord> {
    verify_frame_verdict_with(lat, omega, &VerifyConfig::default())
}

/// Reduces to the standard Gaussian, then tracks `lambda_min` of the dual Gram
/// truncations along the ladder. The verdict is empirical evidence only.
pub fn verify_frame_verdict_with(lat: &Lattice2n, omega: &SiegelMatrix, cfg: &VerifyConfig) -> Result<VerificationRecord> {
    let ladder = &cfg.ladder;
    if ladder.len() < 2 || ladder.windows(2).any(|w| !(w[0] < w[1])) || ladder[0] <= 0.0 {
        return Err(GaborError::DomainError("radius ladder must hold at least two increasing positive radii".into()));
    }
    if !(cfg.plateau_tol > 0.0) {
        return Err(GaborError::DomainError("plateau tolerance must be positive".into()));
    }
    let reduced = gamma_of_primal(omega, lat)?.as_lattice_2n();
    let dual = reduced.symplectic_dual()?;
    let covolume = reduced.covolume();
    let mut estimates = Vec::with_capacity(ladder.len());
    for &r in ladder {
        let g = build_gram_capped(&dual, r, cfg.point_cap)?;
        estimates.push(spectral_estimates(&g));
    }
    let mins: Vec<f64> = estimates.iter().map(|e| e.lambda_min_trunc).collect();
    let k = mins.len();
    let (prev, last) = (mins[k - 2], mins[k - 1]);
    let relative_change = (last - prev).abs() / prev.abs().max(f64::MIN_POSITIVE);
    let decay_slope = log_log_slope(ladder, &mins);
    let noise_floor = estimates.iter().map(|e| e.noise_floor).fold(0.0, f64::max).max(1e-12);
    let plateau = relative_change < cfg.plateau_tol;
    let decreasing = mins.windows(2).all(|w| w[1] < w[0]);
    let verdict = if plateau && last >= 10.0 * noise_floor {
        EmpiricalVerdict::LikelyFrame
    } else if !plateau && decreasing && decay_slope <= cfg.decay_slope {
        EmpiricalVerdict::LikelyNotFrame
    } else {
        EmpiricalVerdict::Undecided
    };
    let frame_bound_estimates =
        estimates.iter().map(|e| (e.lambda_min_trunc / covolume, e.lambda_max_trunc / covolume)).collect();
    Ok(VerificationRecord {
        verdict,
        n: lat.n(),
        covolume,
        ladder: estimates,
        frame_bound_estimates,
        relative_change,
        decay_slope,
        noise_floor,
        note: "empirical: truncation certifies one-sided information only; plateau and decay thresholds are configuration"
            .into(),
    })
}

fn log_log_slope(radii: &[f64], values: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(values)
        .filter(|(_, v)| **v > 0.0)
        .map(|(r, v)| (r.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NEG_INFINITY;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
