//! Extreme eigenvalues of Hermitian operators by Lanczos with full
//! reorthogonalization. Ritz values and their residuals come from an implicit QL
//! sweep over the tridiagonal projection.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A Hermitian linear operator on `C^dim`.
pub trait HermitianOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeEigen {
    pub min: f64,
    pub max: f64,
    /// Residual norms `|beta_k s_k|`, which bound the distance to the true spectrum.
    pub residual_min: f64,
    pub residual_max: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    // conj(a) . b
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of the symmetric tridiagonal matrix (diagonal `alpha`, off-diagonal
/// `beta`) and the last components of the unit eigenvectors, by implicit QL with
/// the rotations applied to the last row only.
fn tridiag_eigen_last_row(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = alpha.len();
    let mut d = alpha.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&beta[..n - 1]);
    let mut z = vec![0.0; n];
    z[n - 1] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    (d, z)
}

/// Extreme eigenvalues of `op` to residual `tol`, with at most `max_iter` Lanczos steps.
pub fn extreme_eigenvalues(op: &dyn HermitianOperator, tol: f64, max_iter: usize, seed: u64) -> ExtremeEigen {
    let n = op.dim();
    let max_iter = max_iter.min(n).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut basis: Vec<Vec<Complex64>> = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut result = ExtremeEigen {
        min: f64::NAN,
        max: f64::NAN,
        residual_min: f64::INFINITY,
        residual_max: f64::INFINITY,
        iterations: 0,
        converged: false,
    };
    for k in 0..max_iter {
        op.apply(&basis[k], &mut w);
        let a = dot(&basis[k], &w).re;
        alpha.push(a);
        // full reorthogonalization, twice
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        let b = norm(&w);
        let m = alpha.len();
        let check = m == max_iter || b < 1e-14 || m % 10 == 0 || m < 5;
        if check {
            let (theta, last) = tridiag_eigen_last_row(&alpha, &beta);
            let imin = (0..m).min_by(|&i, &j| theta[i].total_cmp(&theta[j])).unwrap_or(0);
            let imax = (0..m).max_by(|&i, &j| theta[i].total_cmp(&theta[j])).unwrap_or(0);
            let (tmin, tmax) = (theta[imin], theta[imax]);
            let rmin = b * last[imin].abs();
            let rmax = b * last[imax].abs();
            result = ExtremeEigen {
                min: tmin,
                max: tmax,
                residual_min: rmin,
                residual_max: rmax,
                iterations: m,
                converged: rmin <= tol && rmax <= tol,
            };
            if result.converged || b < 1e-14 {
                result.converged = true;
                return result;
            }
        }
        if m == max_iter {
            break;
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Diag(Vec<f64>);

    impl HermitianOperator for Diag {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
            for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.0) {
                *yi = xi * d;
            }
        }
    }

    #[test]
    fn implicit_ql_on_known_tridiagonal() {
        // 2 on the diagonal, -1 off it: eigenvalues 2 - 2 cos(k pi/(m+1))
        let m = 8;
        let alpha = vec![2.0; m];
        let beta = vec![-1.0; m - 1];
        let (mut theta, last) = tridiag_eigen_last_row(&alpha, &beta);
        theta.sort_by(f64::total_cmp);
        for k in 0..m {
            let exact = 2.0 - 2.0 * ((k as f64 + 1.0) * std::f64::consts::PI / (m as f64 + 1.0)).cos();
            assert!((theta[k] - exact).abs() < 1e-12);
        }
        assert!((last.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_operator_extremes() {
        let d: Vec<f64> = (0..300).map(|i| 0.05 + (i as f64 / 299.0).powi(2) * 3.0).collect();
        let r = extreme_eigenvalues(&Diag(d), 1e-10, 300, 7);
        assert!(r.converged);
        assert!((r.min - 0.05).abs() < 1e-9, "min {}", r.min);
        assert!((r.max - 3.05).abs() < 1e-9, "max {}", r.max);
    }
}
