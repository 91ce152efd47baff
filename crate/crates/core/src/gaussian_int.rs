//! Complex lattices as `A Z[i]^n`: an exact Gaussian-integer basis from the
//! action of `i` on generator coordinates, complex LLL, and the Iwasawa
//! diagonal of `A = U S` with `S` lower triangular.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{GaborError, Result};
use crate::lattice::{is_complex_lattice, ComplexLattice};

/// A Gaussian integer with `i128` parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GaussInt {
    pub re: i128,
    pub im: i128,
}

impl GaussInt {
    pub const ZERO: Self = Self { re: 0, im: 0 };

    pub fn new(re: i128, im: i128) -> Self {
        Self { re, im }
    }

    pub fn norm(self) -> i128 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }

    pub fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    /// Nearest Gaussian integer to `self / d`; the remainder has norm at most `N(d)/2`.
    pub fn div_round(self, d: Self) -> Self {
        let n = d.norm();
        let num_re = self.re * d.re + self.im * d.im;
        let num_im = self.im * d.re - self.re * d.im;
        Self::new(round_div(num_re, n), round_div(num_im, n))
    }
}

fn round_div(a: i128, b: i128) -> i128 {
    // b > 0
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r >= b {
        q + 1
    } else {
        q
    }
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss_det(m: &DMatrix<i128>) -> i128 {
    let n = m.nrows();
    if n == 0 {
        return 1;
    }
    let mut a = m.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[(k, k)] == 0 {
            match ((k + 1)..n).find(|&r| a[(r, k)] != 0) {
                Some(r) => {
                    a.swap_rows(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
            }
        }
        prev = a[(k, k)];
    }
    sign * a[(n - 1, n - 1)]
}

fn rank_exact(cols: &[Vec<i128>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    let rows = cols[0].len();
    let mut a: Vec<Vec<i128>> = cols.to_vec();
    let mut rank = 0;
    for r in 0..rows {
        let Some(p) = (rank..a.len()).find(|&c| a[c][r] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for c in 0..a.len() {
            if c != rank && a[c][r] != 0 {
                let (f, g) = (a[rank][r], a[c][r]);
                let gcd = gcd_i128(f, g);
                let (f, g) = (f / gcd, g / gcd);
                for k in 0..rows {
                    a[c][k] = a[c][k] * f - a[rank][k] * g;
                }
                let h = a[c].iter().fold(0i128, |acc, &v| gcd_i128(acc, v));
                if h > 1 {
                    a[c].iter_mut().for_each(|v| *v /= h);
                }
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Adjugate `adj(K)` with `K adj(K) = det(K) I`, by cofactors.
fn adjugate(k: &DMatrix<i128>) -> DMatrix<i128> {
    let n = k.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        let minor = k.clone().remove_row(j).remove_column(i);
        let s = if (i + j) % 2 == 0 { 1 } else { -1 };
        s * bareiss_det(&minor)
    })
}

/// Column Hermite-style normal form over `Z[i]` of an `n x m` matrix of rank `n`:
/// returns a lower triangular `n x n` matrix with the same column span.
pub fn gaussian_hnf(w: &[Vec<GaussInt>]) -> Result<Vec<Vec<GaussInt>>> {
    // w[c] is column c
    let mut cols: Vec<Vec<GaussInt>> = w.to_vec();
    let n = cols.first().map_or(0, |c| c.len());
    for r in 0..n {
        loop {
            let pivot = (r..cols.len())
                .filter(|&c| !cols[c][r].is_zero())
                .min_by_key(|&c| cols[c][r].norm());
            let Some(p) = pivot else {
                return Err(GaborError::InvalidLattice("Gaussian-integer matrix is rank deficient".into()));
            };
            cols.swap(r, p);
            let mut done = true;
            for c in (r + 1)..cols.len() {
                if !cols[c][r].is_zero() {
                    let q = cols[c][r].div_round(cols[r][r]);
                    let pc = cols[r].clone();
                    for (x, y) in cols[c].iter_mut().zip(&pc) {
                        *x = x.sub(q.mul(*y));
                    }
                    if !cols[c][r].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
    }
    cols.truncate(n);
    Ok(cols)
}

/// An `n x n` complex matrix `A` with `Gamma = A Z[i]^n`, found exactly from the
/// integer matrix of multiplication by `i` on the generators.
pub fn gaussian_integer_basis(g: &ComplexLattice) -> Result<DMatrix<Complex64>> {
    let cs = is_complex_lattice(g);
    if !cs.is_complex {
        return Err(GaborError::NotComplexLattice);
    }
    let n = g.n();
    let d = 2 * n;
    let m = cs.matrix.map(|v| v as i128);
    let apply = |v: &[i128]| -> Vec<i128> { (0..d).map(|r| (0..d).map(|c| m[(r, c)] * v[c]).sum()).collect() };

    let mut chosen: Vec<Vec<i128>> = Vec::with_capacity(d);
    for l in 0..d {
        if chosen.len() == d {
            break;
        }
        let mut e = vec![0i128; d];
        e[l] = 1;
        let ie = apply(&e);
        let mut trial = chosen.clone();
        trial.push(e);
        trial.push(ie);
        if rank_exact(&trial) == trial.len() {
            chosen = trial;
        }
    }
    if chosen.len() != d {
        return Err(GaborError::InvalidLattice("could not find a Z[i]-spanning set".into()));
    }
    let k = DMatrix::from_fn(d, d, |r, c| chosen[c][r]);
    let det = bareiss_det(&k);
    let adj = adjugate(&k);
    // column l: Gaussian-integer coordinates of det * e_l in the Z[i]-basis v_1..v_n
    let w: Vec<Vec<GaussInt>> = (0..d)
        .map(|l| (0..n).map(|j| GaussInt::new(adj[(2 * j, l)], adj[(2 * j + 1, l)])).collect())
        .collect();
    let h = gaussian_hnf(&w)?;

    let basis = g.real_basis();
    let v_complex: Vec<DVector<Complex64>> = (0..n)
        .map(|j| {
            let coords = DVector::from_iterator(d, chosen[2 * j].iter().map(|&x| x as f64));
            let real = basis * coords;
            DVector::from_fn(n, |i, _| Complex64::new(real[i], real[n + i]))
        })
        .collect();
    let scale = Complex64::new(1.0 / det as f64, 0.0);
    let a = DMatrix::from_fn(n, n, |i, kk| {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, vj) in v_complex.iter().enumerate() {
            s += h[kk][j].to_complex() * vj[i];
        }
        s * scale
    });
    let rebuilt = ComplexLattice::from_complex_matrix(&a)?;
    if !rebuilt.same_point_set(g, 1e-6) {
        return Err(GaborError::InvalidLattice("Gaussian-integer basis does not reproduce the lattice".into()));
    }
    Ok(a)
}

fn hdot(a: &DVector<Complex64>, b: &DVector<Complex64>) -> Complex64 {
    // <a, b> = sum conj(b_i) a_i, linear in a
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

fn round_gauss(z: Complex64) -> Complex64 {
    Complex64::new(z.re.round(), z.im.round())
}

/// LLL reduction over `Z[i]` of the columns of `a` (Hermitian inner product).
pub fn complex_lll(a: &DMatrix<Complex64>, delta: f64) -> DMatrix<Complex64> {
    let n = a.ncols();
    let mut cols: Vec<DVector<Complex64>> = (0..n).map(|j| a.column(j).into_owned()).collect();
    if n < 2 {
        return a.clone();
    }
    let gso = |cols: &[DVector<Complex64>]| {
        let mut star: Vec<DVector<Complex64>> = Vec::with_capacity(n);
        let mut mu = DMatrix::<Complex64>::zeros(n, n);
        let mut norms = vec![0.0; n];
        for i in 0..n {
            let mut s = cols[i].clone();
            for j in 0..i {
                let m = hdot(&cols[i], &star[j]) / norms[j];
                mu[(i, j)] = m;
                s -= &star[j] * m;
            }
            norms[i] = s.norm_squared();
            star.push(s);
        }
        (mu, norms)
    };
    let (mut mu, mut norms) = gso(&cols);
    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 100_000 {
        steps += 1;
        for j in (0..k).rev() {
            let q = round_gauss(mu[(k, j)]);
            if q.norm_sqr() > 0.0 {
                let cj = cols[j].clone();
                cols[k] -= cj * q;
                for l in 0..=j {
                    let sub = if l == j { Complex64::new(1.0, 0.0) } else { mu[(j, l)] };
                    mu[(k, l)] -= q * sub;
                }
            }
        }
        if norms[k] >= (delta - mu[(k, k - 1)].norm_sqr()) * norms[k - 1] {
            k += 1;
        } else {
            cols.swap(k, k - 1);
            let g = gso(&cols);
            mu = g.0;
            norms = g.1;
            k = (k - 1).max(1);
        }
    }
    DMatrix::from_columns(&cols)
}

/// Diagonal `(lambda_1..lambda_n)` of `S` in `A = U S`, `U` unitary and `S` lower
/// triangular with positive diagonal: `lambda_k` is the distance from `a_k` to
/// the span of `a_{k+1}, .., a_n`.
pub fn iwasawa_diagonal(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let n = a.ncols();
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut ortho: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut lambdas = vec![0.0; n];
    for k in (0..n).rev() {
        let mut v = a.column(k).into_owned();
        // two passes keep the projection accurate
        for _ in 0..2 {
            for u in &ortho {
                let c = hdot(&v, u);
                v -= u * c;
            }
        }
        let len = v.norm();
        if len <= 1e-12 * scale {
            return Err(GaborError::InvalidLattice("Iwasawa factor is rank deficient".into()));
        }
        lambdas[k] = len;
        ortho.push(v / Complex64::new(len, 0.0));
    }
    Ok(lambdas)
}

/// Smallest eigenvalue of the Hermitian matrix `A* A`.
pub fn e_min(a: &DMatrix<Complex64>) -> f64 {
    let n = a.ncols();
    let h = a.adjoint() * a;
    // real symmetric 2n x 2n representation has each eigenvalue twice
    let mut r = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            r[(i, j)] = z.re;
            r[(n + i, n + j)] = z.re;
            r[(i, n + j)] = -z.im;
            r[(n + i, j)] = z.im;
        }
    }
    let r = (&r + r.transpose()) * 0.5;
    SymmetricEigen::new(r).eigenvalues.min()
}
