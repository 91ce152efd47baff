//! Short vectors of lattices in `C^n`, the Buser-Sarnak invariant `m(Gamma)`, the
//! weighted invariants `m_beta(Gamma)` and their supremum over the simplex.
//!
//! All enumeration runs on the real `2n`-dimensional picture: the weighted form
//! `sum_j beta_j |z_j|^2` becomes a diagonal form on `(Re z, Im z)`, the scaled
//! basis is LLL-reduced, and Fincke-Pohst enumerates integer coefficients.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::lattice::{real_to_complex, ComplexLattice, Lattice2n};
use crate::lp;

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;
pub const DEFAULT_CUTTING_PLANE_CAP: usize = 200;
/// Gap between the cutting-plane bound and the best evaluated `m_beta`, relative to `m(Gamma)`.
pub const CUTTING_PLANE_GAP: f64 = 1e-9;

const LLL_DELTA: f64 = 0.99;
const BOUNDARY_SLACK: f64 = 1e-10;
/// Enumeration nodes allowed per admitted entry before the search is abandoned.
const NODES_PER_ENTRY: usize = 200;

/// Weights `beta_j >= 0` with `sum beta_j = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaWeights(Vec<f64>);

impl BetaWeights {
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(GaborError::InvalidWeights("no weights given".into()));
        }
        if beta.iter().any(|b| !(*b >= 0.0) || !b.is_finite()) {
            return Err(GaborError::InvalidWeights(format!("weights must be nonnegative: {beta:?}")));
        }
        let s: f64 = beta.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(GaborError::InvalidWeights(format!("weights sum to {s}, not 1")));
        }
        Ok(Self(beta))
    }

    /// Rescales nonnegative weights onto the simplex.
    pub fn normalized(beta: Vec<f64>) -> Result<Self> {
        let s: f64 = beta.iter().sum();
        if !(s > 0.0) {
            return Err(GaborError::InvalidWeights("weights have no positive mass".into()));
        }
        Self::new(beta.into_iter().map(|b| b.max(0.0) / s).collect())
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortVector {
    pub point: DVector<Complex64>,
    /// Coordinates in the generator basis of the lattice.
    pub coeffs: Vec<i64>,
    pub norm_sq: f64,
}

/// Every nonzero lattice point with `|z| <= radius`, one per `+-` pair, sorted by
/// squared norm and then lexicographically by coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortVectorList {
    pub radius: f64,
    pub vectors: Vec<ShortVector>,
}

/// Real LLL reduction of the columns of `b`. Returns the reduced basis and the
/// unimodular change of basis `U` with `reduced = b * U`.
pub fn lll_reduce(b: &DMatrix<f64>, delta: f64) -> (DMatrix<f64>, DMatrix<i64>) {
    let d = b.ncols();
    let mut basis = b.clone();
    let mut u = DMatrix::<i64>::identity(d, d);
    if d < 2 {
        return (basis, u);
    }
    let gso = |m: &DMatrix<f64>| {
        let mut star = m.clone();
        let mut mu = DMatrix::<f64>::zeros(d, d);
        let mut norms = vec![0.0; d];
        for i in 0..d {
            for j in 0..i {
                let mij = m.column(i).dot(&star.column(j)) / norms[j];
                mu[(i, j)] = mij;
                let sj = star.column(j).into_owned();
                star.column_mut(i).axpy(-mij, &sj, 1.0);
            }
            norms[i] = star.column(i).norm_squared();
        }
        (mu, norms)
    };
    let (mut mu, mut norms) = gso(&basis);
    let mut k = 1;
    let mut steps = 0usize;
    while k < d && steps < 100_000 {
        steps += 1;
        for j in (0..k).rev() {
            let q = mu[(k, j)].round();
            if q != 0.0 {
                let bj = basis.column(j).into_owned();
                basis.column_mut(k).axpy(-q, &bj, 1.0);
                let qi = q as i64;
                for r in 0..d {
                    u[(r, k)] -= qi * u[(r, j)];
                }
                for l in 0..=j {
                    let sub = if l == j { 1.0 } else { mu[(j, l)] };
                    mu[(k, l)] -= q * sub;
                }
            }
        }
        if norms[k] >= (delta - mu[(k, k - 1)] * mu[(k, k - 1)]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap_columns(k, k - 1);
            u.swap_columns(k, k - 1);
            let g = gso(&basis);
            mu = g.0;
            norms = g.1;
            k = (k - 1).max(1);
        }
    }
    (basis, u)
}

/// A positive definite diagonal form on the real picture of a lattice, prepared for enumeration.
struct WeightedForm {
    n: usize,
    /// Original real basis (columns are generators).
    real: DMatrix<f64>,
    /// Change of basis from the reduced coefficients to generator coefficients.
    u: DMatrix<i64>,
    /// Upper triangular Cholesky factor of the reduced Gram matrix.
    r: DMatrix<f64>,
    weights: Vec<f64>,
}

struct Enumeration<'a> {
    form: &'a WeightedForm,
    coeffs: Vec<i64>,
    bound: f64,
    shrink: Option<f64>,
    found: Vec<(Vec<i64>, f64)>,
    nodes: usize,
    node_cap: usize,
    entry_cap: usize,
    overflow: bool,
}

impl<'a> Enumeration<'a> {
    fn visit(&mut self, i: usize, partial: f64, zero_above: bool) {
        if self.overflow {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_cap {
            self.overflow = true;
            return;
        }
        let r = &self.form.r;
        let d = r.ncols();
        let rii = r[(i, i)];
        let mut s = 0.0;
        for j in (i + 1)..d {
            s += r[(i, j)] * self.coeffs[j] as f64;
        }
        let center = -s / rii;
        let limit = self.bound * (1.0 + BOUNDARY_SLACK) + f64::MIN_POSITIVE;
        let rem = limit - partial;
        if rem < 0.0 {
            return;
        }
        let w = rem.sqrt() / rii;
        let mut lo = (center - w).ceil() as i64;
        let hi = (center + w).floor() as i64;
        if zero_above {
            lo = lo.max(0);
        }
        for c in lo..=hi {
            let y = rii * (c as f64 - center);
            let p = partial + y * y;
            if p > self.bound * (1.0 + BOUNDARY_SLACK) + f64::MIN_POSITIVE {
                continue;
            }
            self.coeffs[i] = c;
            if i == 0 {
                if zero_above && c == 0 {
                    continue;
                }
                self.emit(p);
                if self.overflow {
                    break;
                }
            } else {
                self.visit(i - 1, p, zero_above && c == 0);
            }
        }
        self.coeffs[i] = 0;
    }

    fn emit(&mut self, p: f64) {
        if let Some(window) = self.shrink {
            if p * (1.0 + window) < self.bound {
                self.bound = p * (1.0 + window);
                let b = self.bound;
                self.found.retain(|(_, q)| *q <= b);
            }
        }
        self.found.push((self.coeffs.clone(), p));
        if self.found.len() > self.entry_cap {
            self.overflow = true;
        }
    }
}

impl WeightedForm {
    /// `weights[j]` multiplies `|z_j|^2`; all must be positive.
    fn new(g: &ComplexLattice, weights: &[f64]) -> Result<Self> {
        let n = g.n();
        if weights.len() != n {
            return Err(GaborError::DimensionMismatch(format!(
                "{} weights for a lattice in C^{n}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(GaborError::InvalidWeights("form weights must be positive".into()));
        }
        let real = g.real_basis().clone();
        let mut scaled = real.clone();
        for k in 0..n {
            let s = weights[k].sqrt();
            for j in 0..2 * n {
                scaled[(k, j)] *= s;
                scaled[(n + k, j)] *= s;
            }
        }
        let (reduced, u) = lll_reduce(&scaled, LLL_DELTA);
        let gram = reduced.transpose() * &reduced;
        let chol = gram
            .cholesky()
            .ok_or_else(|| GaborError::InvalidLattice("reduced Gram matrix is not positive definite".into()))?;
        let r = chol.l().transpose();
        Ok(Self {
            n,
            real,
            u,
            r,
            weights: weights.to_vec(),
        })
    }

    fn generator_coeffs(&self, reduced: &[i64]) -> Vec<i64> {
        let d = reduced.len();
        (0..d)
            .map(|i| (0..d).map(|j| self.u[(i, j)] * reduced[j]).sum())
            .collect()
    }

    fn point(&self, coeffs: &[i64]) -> DVector<f64> {
        let c = DVector::from_iterator(coeffs.len(), coeffs.iter().map(|&k| k as f64));
        &self.real * c
    }

    fn value(&self, v: &DVector<f64>) -> f64 {
        let n = self.n;
        (0..n)
            .map(|k| self.weights[k] * (v[k] * v[k] + v[n + k] * v[n + k]))
            .sum()
    }

    fn run(&self, bound: f64, shrink: Option<f64>, cap: usize) -> std::result::Result<Vec<(Vec<i64>, f64)>, Vec<(Vec<i64>, f64)>> {
        let d = 2 * self.n;
        let mut e = Enumeration {
            form: self,
            coeffs: vec![0; d],
            bound,
            shrink,
            found: Vec::new(),
            nodes: 0,
            node_cap: cap.saturating_mul(NODES_PER_ENTRY).max(1 << 20),
            entry_cap: cap,
            overflow: false,
        };
        e.visit(d - 1, 0.0, true);
        let out = e.found;
        if e.overflow {
            Err(out)
        } else {
            Ok(out)
        }
    }

    fn shortest_basis_value(&self) -> f64 {
        let d = 2 * self.n;
        (0..d)
            .map(|j| {
                let mut c = vec![0i64; d];
                c[j] = 1;
                self.value(&self.point(&self.generator_coeffs(&c)))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum of the form with all vectors within `window` (relative) of it.
    fn minimum(&self, window: f64, cap: usize) -> Result<(f64, Vec<ShortVector>)> {
        let start = self.shortest_basis_value();
        let raw = self.run(start, Some(window), cap).map_err(|partial| {
            GaborError::EnumerationOverflow {
                cap,
                best: partial.iter().map(|(_, q)| *q).reduce(f64::min),
            }
        })?;
        let mut vecs: Vec<ShortVector> = raw
            .into_iter()
            .map(|(c, _)| {
                let coeffs = self.generator_coeffs(&c);
                let p = self.point(&coeffs);
                ShortVector {
                    norm_sq: self.value(&p),
                    point: real_to_complex(&p),
                    coeffs,
                }
            })
            .collect();
        let best = vecs.iter().map(|v| v.norm_sq).fold(f64::INFINITY, f64::min);
        vecs.retain(|v| v.norm_sq <= best * (1.0 + window) + f64::MIN_POSITIVE);
        sort_vectors(&mut vecs);
        Ok((best, vecs))
    }
}

fn sort_vectors(v: &mut [ShortVector]) {
    v.sort_by(|a, b| a.norm_sq.total_cmp(&b.norm_sq).then_with(|| a.coeffs.cmp(&b.coeffs)));
}

/// Canonical sign: the last nonzero generator coefficient is positive.
fn canonical_sign(coeffs: &mut [i64]) -> bool {
    match coeffs.iter().rev().find(|&&c| c != 0) {
        Some(&c) if c < 0 => {
            coeffs.iter_mut().for_each(|c| *c = -*c);
            true
        }
        _ => false,
    }
}

/// All nonzero points with `|z| <= radius`, up to sign, with a cap on the list size.
pub fn enumerate_short_capped(g: &ComplexLattice, radius: f64, cap: usize) -> Result<ShortVectorList> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(GaborError::DomainError(format!("radius must be positive, got {radius}")));
    }
    let form = WeightedForm::new(g, &vec![1.0; g.n()])?;
    let r2 = radius * radius;
    let raw = form
        .run(r2, None, cap)
        .map_err(|_| GaborError::EnumerationOverflow { cap, best: None })?;
    let mut vectors: Vec<ShortVector> = raw
        .into_iter()
        .filter_map(|(c, _)| {
            let mut coeffs = form.generator_coeffs(&c);
            canonical_sign(&mut coeffs);
            let p = form.point(&coeffs);
            let norm_sq = form.value(&p);
            (norm_sq <= r2 * (1.0 + BOUNDARY_SLACK)).then(|| ShortVector {
                point: real_to_complex(&p),
                coeffs,
                norm_sq,
            })
        })
        .collect();
    sort_vectors(&mut vectors);
    vectors.dedup_by(|a, b| a.coeffs == b.coeffs);
    Ok(ShortVectorList { radius, vectors })
}

pub fn enumerate_short(g: &ComplexLattice, radius: f64) -> Result<ShortVectorList> {
    enumerate_short_capped(g, radius, DEFAULT_ENUMERATION_CAP)
}

/// Every point of a real lattice with Euclidean norm at most `radius`, including
/// zero and both signs, as `(generator coefficients, point)` sorted by norm and
/// then lexicographically by coefficients.
pub fn lattice_points_in_ball(
    lat: &Lattice2n,
    radius: f64,
    cap: usize,
) -> Result<Vec<(Vec<i64>, DVector<f64>)>> {
    let d = lat.dim();
    let mut out = vec![(vec![0i64; d], DVector::zeros(d))];
    if radius > 0.0 {
        let g = ComplexLattice::from_real_basis(lat.n(), lat.basis())?;
        let half = enumerate_short_capped(&g, radius, cap.div_ceil(2).max(1))?;
        for v in half.vectors {
            let p = lat.point(&v.coeffs);
            let neg: Vec<i64> = v.coeffs.iter().map(|c| -c).collect();
            out.push((neg, -&p));
            out.push((v.coeffs, p));
        }
    }
    out.sort_by(|a, b| {
        a.1.norm_squared()
            .total_cmp(&b.1.norm_squared())
            .then_with(|| a.0.cmp(&b.0))
    });
    Ok(out)
}

/// A shortest nonzero vector and `m(Gamma) = |z|^2`.
pub fn shortest_vector(g: &ComplexLattice) -> Result<ShortVector> {
    let form = WeightedForm::new(g, &vec![1.0; g.n()])?;
    let (_, mut v) = form.minimum(0.0, DEFAULT_ENUMERATION_CAP)?;
    let mut best = v.swap_remove(0);
    canonical_sign(&mut best.coeffs);
    best.point = real_to_complex(&form.point(&best.coeffs));
    Ok(best)
}

/// The Buser-Sarnak invariant `m(Gamma) = min_{z != 0} |z|^2`.
pub fn buser_sarnak(g: &ComplexLattice) -> Result<f64> {
    Ok(shortest_vector(g)?.norm_sq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MBetaStatus {
    /// Attained by the listed minimizers.
    Exact,
    /// Some `beta_j = 0` with `n >= 2`: the zero-weight directions make the sublevel
    /// cylinders of infinite volume, so they contain nonzero lattice points at every level.
    ZeroOnBoundary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MBeta {
    pub value: f64,
    pub status: MBetaStatus,
    pub minimizers: Vec<ShortVector>,
}

fn m_beta_window(g: &ComplexLattice, beta: &BetaWeights, window: f64) -> Result<MBeta> {
    if beta.n() != g.n() {
        return Err(GaborError::DimensionMismatch(format!(
            "{} weights for a lattice in C^{}",
            beta.n(),
            g.n()
        )));
    }
    if beta.as_slice().iter().any(|&b| b == 0.0) {
        // n >= 2 here, since a single weight summing to one is positive
        return Ok(MBeta {
            value: 0.0,
            status: MBetaStatus::ZeroOnBoundary,
            minimizers: Vec::new(),
        });
    }
    let form = WeightedForm::new(g, beta.as_slice())?;
    let (value, minimizers) = form.minimum(window, DEFAULT_ENUMERATION_CAP)?;
    Ok(MBeta {
        value,
        status: MBetaStatus::Exact,
        minimizers,
    })
}

/// `m_beta(Gamma) = inf_{z != 0} sum_j beta_j |z_j|^2`.
pub fn m_beta(g: &ComplexLattice, beta: &BetaWeights) -> Result<MBeta> {
    m_beta_window(g, beta, 1e-12)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupMBeta {
    /// Largest evaluated `m_beta`, a rigorous lower bound for the supremum.
    pub value: f64,
    pub argmax: BetaWeights,
    /// Cutting-plane bound, an upper bound for the supremum.
    pub upper: f64,
    pub iterations: usize,
    pub cuts: usize,
    /// Whether the argmax lies on the boundary of the simplex.
    pub boundary_argmax: bool,
}

fn profile(z: &DVector<Complex64>) -> Vec<f64> {
    z.iter().map(|c| c.norm_sqr()).collect()
}

/// `sup_beta m_beta(Gamma)` over the closed simplex, by Kelley's cutting planes on
/// the concave piecewise-linear function `beta -> m_beta`.
pub fn sup_m_beta(g: &ComplexLattice) -> Result<SupMBeta> {
    sup_m_beta_capped(g, DEFAULT_CUTTING_PLANE_CAP)
}

pub fn sup_m_beta_capped(g: &ComplexLattice, max_iterations: usize) -> Result<SupMBeta> {
    let n = g.n();
    let m = buser_sarnak(g)?;
    if n == 1 {
        return Ok(SupMBeta {
            value: m,
            argmax: BetaWeights::uniform(1),
            upper: m,
            iterations: 0,
            cuts: 0,
            boundary_argmax: false,
        });
    }
    let tol = CUTTING_PLANE_GAP * m;
    let uniform = BetaWeights::uniform(n);
    let first = m_beta_window(g, &uniform, 1e-9)?;
    let mut cuts: Vec<Vec<f64>> = first.minimizers.iter().map(|v| profile(&v.point)).collect();
    let mut best_value = first.value;
    let mut best_beta = uniform;
    let mut upper = f64::INFINITY;

    for it in 1..=max_iterations {
        // variables (beta_1..beta_n, t): max t, t - p.beta <= 0, sum beta <= 1
        let mut c = vec![0.0; n + 1];
        c[n] = 1.0;
        let mut a: Vec<Vec<f64>> = cuts
            .iter()
            .map(|p| {
                let mut row: Vec<f64> = p.iter().map(|v| -v).collect();
                row.push(1.0);
                row
            })
            .collect();
        let mut b = vec![0.0; a.len()];
        let mut simplex_row = vec![1.0; n];
        simplex_row.push(0.0);
        a.push(simplex_row);
        b.push(1.0);
        let sol = lp::maximize(&c, &a, &b)?;
        upper = upper.min(sol.value);
        if upper - best_value <= tol {
            return Ok(SupMBeta {
                value: best_value,
                boundary_argmax: best_beta.min() == 0.0,
                argmax: best_beta,
                upper,
                iterations: it,
                cuts: cuts.len(),
            });
        }
        let beta_star = BetaWeights::normalized(sol.x[..n].to_vec())?;
        let eval = m_beta_window(g, &beta_star, 1e-9)?;
        let mut new_cuts: Vec<Vec<f64>> = Vec::new();
        match eval.status {
            MBetaStatus::Exact => {
                if eval.value > best_value {
                    best_value = eval.value;
                    best_beta = beta_star.clone();
                }
                new_cuts.extend(eval.minimizers.iter().map(|v| profile(&v.point)));
            }
            MBetaStatus::ZeroOnBoundary => {
                // a slightly interior form exposes vectors that are short for beta_star
                let mut delta = 1e-2;
                while delta > 1e-14 {
                    let w: Vec<f64> = beta_star.as_slice().iter().map(|b| b + delta).collect();
                    let form = WeightedForm::new(g, &w)?;
                    let (_, vs) = form.minimum(1e-9, DEFAULT_ENUMERATION_CAP)?;
                    let p = profile(&vs[0].point);
                    let val: f64 = p.iter().zip(beta_star.as_slice()).map(|(a, b)| a * b).sum();
                    if val < sol.value - tol {
                        new_cuts.extend(vs.iter().map(|v| profile(&v.point)));
                        break;
                    }
                    delta *= 0.01;
                }
            }
        }
        let before = cuts.len();
        for p in new_cuts {
            if !cuts.iter().any(|q| q.iter().zip(&p).all(|(x, y)| (x - y).abs() <= 1e-14 * (1.0 + x.abs()))) {
                cuts.push(p);
            }
        }
        if cuts.len() == before {
            // no new information: the LP bound is already attained up to rounding
            return Ok(SupMBeta {
                value: best_value,
                boundary_argmax: best_beta.min() == 0.0,
                argmax: best_beta,
                upper: upper.max(best_value),
                iterations: it,
                cuts: cuts.len(),
            });
        }
    }
    Err(GaborError::NoConvergence {
        iterations: max_iterations,
        lower: best_value,
        upper,
    })
}
