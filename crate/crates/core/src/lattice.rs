//! Lattices in `R^{2n}` and `C^n`, symplectic duality and the maps that send a
//! Gabor lattice to the lattice used for Bargmann-Fock interpolation.
//!
//! Real coordinates are always ordered `(xi_1..xi_n, x_1..x_n)` for a Gabor
//! lattice and `(eta_1..eta_n, y_1..y_n)` for its dual. A point of `C^n` is
//! identified with `(Re z, Im z)` in the same block order, so `eta + i y`
//! corresponds to the real vector `(eta, y)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{GaborError, Result};

/// Relative threshold under which a row-normalised basis is treated as singular.
const SINGULAR_TOL: f64 = 1e-12;

/// Integrality tolerance for change-of-basis coordinates.
pub const INTEGRALITY_TOL: f64 = 1e-8;

fn row_scaled_det(m: &DMatrix<f64>) -> f64 {
    let mut scaled = m.clone();
    for mut row in scaled.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row /= norm;
        }
    }
    scaled.determinant()
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.singular_values().max()
}

/// The standard symplectic form on `R^n x R^n`.
///
/// `J` sends `(eta, y)` to `(y, -eta)`, so that `u^T J v = xi^T y - x^T eta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut j = DMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            j[(k, n + k)] = 1.0;
            j[(n + k, k)] = -1.0;
        }
        j
    }

    /// `xi_u^T y_v - x_u^T eta_v`.
    pub fn pairing(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.n;
        (0..n).map(|k| u[k] * v[n + k] - u[n + k] * v[k]).sum()
    }
}

/// Unique symmetric positive definite square root, via the spectral decomposition.
pub fn pd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(GaborError::DimensionMismatch("pd_sqrt needs a square matrix".into()));
    }
    let scale = spectral_norm(m).max(f64::MIN_POSITIVE);
    let asym = (m - m.transpose()).abs().max();
    if asym > 1e-12 * scale {
        return Err(GaborError::NotSymmetric(asym));
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    let min = eig.eigenvalues.min();
    if min <= 1e-12 * scale {
        return Err(GaborError::NotPositiveDefinite(min));
    }
    let roots = eig.eigenvalues.map(f64::sqrt);
    let q = &eig.eigenvectors;
    let mut s = q * DMatrix::from_diagonal(&roots) * q.transpose();
    // the eigenvectors can be accurate to ~1e-10 only; Newton steps restore full precision
    for _ in 0..3 {
        let Some(inv) = s.clone().try_inverse() else { break };
        let next = (&s + inv * &sym) * 0.5;
        s = (&next + next.transpose()) * 0.5;
    }
    Ok(s)
}

/// A full-rank lattice in `R^{2n}`; the columns of `basis` generate it.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice2n {
    n: usize,
    basis: DMatrix<f64>,
}

impl Lattice2n {
    pub fn new(n: usize, basis: DMatrix<f64>) -> Result<Self> {
        if n == 0 {
            return Err(GaborError::InvalidLattice("half-dimension must be positive".into()));
        }
        if basis.nrows() != 2 * n || basis.ncols() != 2 * n {
            return Err(GaborError::DimensionMismatch(format!(
                "expected a {0}x{0} basis, got {1}x{2}",
                2 * n,
                basis.nrows(),
                basis.ncols()
            )));
        }
        if basis.iter().any(|v| !v.is_finite()) {
            return Err(GaborError::InvalidLattice("basis has non-finite entries".into()));
        }
        let det = row_scaled_det(&basis);
        if !(det.abs() > SINGULAR_TOL) {
            return Err(GaborError::InvalidLattice(format!(
                "basis is singular (row-scaled determinant {det:e})"
            )));
        }
        Ok(Self { n, basis })
    }

    /// Builds a lattice from row-major rows of the basis matrix.
    pub fn from_rows(n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let dim = 2 * n;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(GaborError::DimensionMismatch(format!(
                "basis must have {dim} rows of length {dim}"
            )));
        }
        Self::new(n, DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    /// `scale * Z^{2n}`.
    pub fn scaled_integer(n: usize, scale: f64) -> Result<Self> {
        Self::new(n, DMatrix::identity(2 * n, 2 * n) * scale)
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        if entries.len() % 2 != 0 {
            return Err(GaborError::DimensionMismatch("diagonal needs an even length".into()));
        }
        Self::new(
            entries.len() / 2,
            DMatrix::from_diagonal(&DVector::from_column_slice(entries)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.basis.row_iter().map(|r| r.iter().copied().collect()).collect()
    }

    pub fn covolume(&self) -> f64 {
        self.basis.determinant().abs()
    }

    pub fn point(&self, coeffs: &[i64]) -> DVector<f64> {
        let c = DVector::from_iterator(coeffs.len(), coeffs.iter().map(|&k| k as f64));
        &self.basis * c
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.n, &self.basis * factor)
    }

    /// The symplectic dual `{v : u^T J v in Z for all u in the lattice}` with
    /// basis `J^T (B^{-1})^T`.
    pub fn symplectic_dual(&self) -> Result<Self> {
        let inv = self
            .basis
            .clone()
            .try_inverse()
            .ok_or_else(|| GaborError::InvalidLattice("basis is not invertible".into()))?;
        let j = SymplecticForm::new(self.n).matrix();
        Self::new(self.n, j.transpose() * inv.transpose())
    }

    /// Largest distance of `B^T J B°` from an integer matrix, where `B°` is `other`'s basis.
    pub fn pairing_defect(&self, other: &Lattice2n) -> f64 {
        let j = SymplecticForm::new(self.n).matrix();
        let p = self.basis.transpose() * j * &other.basis;
        p.iter().map(|v| (v - v.round()).abs()).fold(0.0, f64::max)
    }

    /// Whether both bases generate the same point set: `B^{-1} B'` must be an
    /// integer matrix of determinant `+-1` (within `tol`).
    pub fn same_point_set(&self, other: &Lattice2n, tol: f64) -> bool {
        self.n == other.n && unimodular_change(&self.basis, &other.basis, tol)
    }

    /// Whether `v` is a lattice point, i.e. has integral coordinates in the basis.
    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        match self.basis.clone().lu().solve(v) {
            Some(c) => c.iter().all(|x| (x - x.round()).abs() <= tol),
            None => false,
        }
    }

    /// Spectral norm of the basis; the natural length scale of the lattice.
    pub fn scale(&self) -> f64 {
        spectral_norm(&self.basis)
    }
}

pub(crate) fn unimodular_change(b1: &DMatrix<f64>, b2: &DMatrix<f64>, tol: f64) -> bool {
    if b1.shape() != b2.shape() {
        return false;
    }
    let Some(t) = b1.clone().lu().solve(b2) else {
        return false;
    };
    let integral = t.iter().all(|x| (x - x.round()).abs() <= tol);
    integral && (t.map(f64::round).determinant().abs() - 1.0).abs() < 0.5
}

/// A complex symmetric matrix with positive definite imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelMatrix {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

impl SiegelMatrix {
    pub fn new(re: DMatrix<f64>, im: DMatrix<f64>) -> Result<Self> {
        if !re.is_square() || re.shape() != im.shape() {
            return Err(GaborError::DimensionMismatch(
                "real and imaginary parts must be square and of equal size".into(),
            ));
        }
        let scale = spectral_norm(&re).max(spectral_norm(&im)).max(1.0);
        let asym = (&re - re.transpose())
            .abs()
            .max()
            .max((&im - im.transpose()).abs().max());
        if asym > 1e-12 * scale {
            return Err(GaborError::NotSymmetric(asym));
        }
        let re = (&re + re.transpose()) * 0.5;
        let im = (&im + im.transpose()) * 0.5;
        let min = SymmetricEigen::new(im.clone()).eigenvalues.min();
        if min <= 1e-12 {
            return Err(GaborError::NotPositiveDefinite(min));
        }
        Ok(Self { re, im })
    }

    /// `Omega = iI`, the standard Gaussian.
    pub fn identity(n: usize) -> Self {
        Self {
            re: DMatrix::zeros(n, n),
            im: DMatrix::identity(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.re.nrows()
    }

    pub fn re(&self) -> &DMatrix<f64> {
        &self.re
    }

    pub fn im(&self) -> &DMatrix<f64> {
        &self.im
    }

    pub fn im_det(&self) -> f64 {
        self.im.determinant()
    }

    /// `(Im Omega)^{-1/2}`.
    pub fn im_inv_sqrt(&self) -> Result<DMatrix<f64>> {
        pd_sqrt(&self.im)?
            .try_inverse()
            .ok_or(GaborError::NotPositiveDefinite(0.0))
    }

    /// The real `2n x 2n` matrix of `(xi, x) -> (Im Omega)^{-1/2} (xi + Omega x)`
    /// written in `(Re, Im)` blocks.
    pub fn complexification(&self) -> Result<DMatrix<f64>> {
        let n = self.n();
        let s_inv = self.im_inv_sqrt()?;
        let mut f = DMatrix::zeros(2 * n, 2 * n);
        f.view_mut((0, 0), (n, n)).copy_from(&s_inv);
        f.view_mut((0, n), (n, n)).copy_from(&(&s_inv * &self.re));
        f.view_mut((n, n), (n, n)).copy_from(&(&s_inv * &self.im));
        Ok(f)
    }
}

/// A full-rank lattice in `C^n` generated over `Z` by `2n` vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexLattice {
    n: usize,
    gens: Vec<DVector<Complex64>>,
    real: DMatrix<f64>,
}

impl ComplexLattice {
    pub fn new(n: usize, gens: Vec<DVector<Complex64>>) -> Result<Self> {
        if n == 0 || gens.len() != 2 * n || gens.iter().any(|g| g.len() != n) {
            return Err(GaborError::DimensionMismatch(format!(
                "a lattice in C^{n} needs {} generators of length {n}",
                2 * n
            )));
        }
        let real = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n {
                gens[j][i].re
            } else {
                gens[j][i - n].im
            }
        });
        // validate through the real picture
        Lattice2n::new(n, real.clone())?;
        Ok(Self { n, gens, real })
    }

    /// Reads a real `2n x 2n` basis in `(Re, Im)` blocks as a lattice in `C^n`.
    pub fn from_real_basis(n: usize, basis: &DMatrix<f64>) -> Result<Self> {
        if basis.nrows() != 2 * n || basis.ncols() != 2 * n {
            return Err(GaborError::DimensionMismatch("real basis has the wrong shape".into()));
        }
        let gens = (0..2 * n)
            .map(|j| DVector::from_fn(n, |i, _| Complex64::new(basis[(i, j)], basis[(n + i, j)])))
            .collect();
        Self::new(n, gens)
    }

    /// The lattice generated over `Z` by `1` and `tau` in `C`.
    pub fn one_dim(g1: Complex64, g2: Complex64) -> Result<Self> {
        Self::new(1, vec![DVector::from_element(1, g1), DVector::from_element(1, g2)])
    }

    /// `Z[i]^n` mapped through the complex matrix `a`, i.e. `A Z[i]^n`.
    pub fn from_complex_matrix(a: &DMatrix<Complex64>) -> Result<Self> {
        let n = a.nrows();
        if !a.is_square() {
            return Err(GaborError::DimensionMismatch("A must be square".into()));
        }
        let i = Complex64::i();
        let mut gens = Vec::with_capacity(2 * n);
        for k in 0..n {
            let col: DVector<Complex64> = a.column(k).into_owned();
            gens.push(col.clone());
            gens.push(col * i);
        }
        Self::new(n, gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[DVector<Complex64>] {
        &self.gens
    }

    /// Real `2n x 2n` matrix of `(Re, Im)` coordinates; columns are generators.
    pub fn real_basis(&self) -> &DMatrix<f64> {
        &self.real
    }

    pub fn covolume(&self) -> f64 {
        self.real.determinant().abs()
    }

    pub fn point(&self, coeffs: &[i64]) -> DVector<Complex64> {
        let mut z = DVector::from_element(self.n, Complex64::new(0.0, 0.0));
        for (g, &c) in self.gens.iter().zip(coeffs) {
            z += g * Complex64::new(c as f64, 0.0);
        }
        z
    }

    /// `c * Gamma` for a nonzero complex scalar (rotation and dilation).
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::new(self.n, self.gens.iter().map(|g| g * c).collect())
    }

    /// The same point set viewed as a lattice in `R^n x R^n` via `eta + i y -> (eta, y)`.
    pub fn as_lattice_2n(&self) -> Lattice2n {
        Lattice2n {
            n: self.n,
            basis: self.real.clone(),
        }
    }

    pub fn same_point_set(&self, other: &ComplexLattice, tol: f64) -> bool {
        self.n == other.n && unimodular_change(&self.real, &other.real, tol)
    }
}

pub(crate) fn real_to_complex(v: &DVector<f64>) -> DVector<Complex64> {
    let n = v.len() / 2;
    DVector::from_fn(n, |i, _| Complex64::new(v[i], v[n + i]))
}

fn check_dims(omega: &SiegelMatrix, lat: &Lattice2n) -> Result<()> {
    if omega.n() != lat.n() {
        return Err(GaborError::DimensionMismatch(format!(
            "Omega is {0}x{0} but the lattice lives in R^{1}",
            omega.n(),
            lat.dim()
        )));
    }
    Ok(())
}

/// `Gamma_{Omega, Lambda°} = {(Im Omega)^{-1/2}(eta + Omega y) : (eta, y) in Lambda°}`.
pub fn gamma_of_dual(omega: &SiegelMatrix, lat: &Lattice2n) -> Result<ComplexLattice> {
    check_dims(omega, lat)?;
    let dual = lat.symplectic_dual()?;
    let f = omega.complexification()?;
    ComplexLattice::from_real_basis(lat.n(), &(f * dual.basis()))
}

/// `Gamma_{Omega, Lambda} = f_Omega(Lambda)`, with
/// `f_Omega(xi, x) = (Im Omega)^{-1/2} (xi + Re Omega x, Im Omega x)`, read as a lattice in `C^n`.
pub fn gamma_of_primal(omega: &SiegelMatrix, lat: &Lattice2n) -> Result<ComplexLattice> {
    check_dims(omega, lat)?;
    let f = omega.complexification()?;
    ComplexLattice::from_real_basis(lat.n(), &(f * lat.basis()))
}

/// Result of testing `i Gamma = Gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    pub is_complex: bool,
    /// Coordinates of `i g_j` in the generator basis (column `j`), rounded.
    pub matrix: DMatrix<i64>,
    /// Largest distance of those coordinates from the nearest integers.
    pub defect: f64,
}

/// Decides whether multiplication by `i` preserves the lattice. The certificate is
/// the integer matrix of `i` acting on the generators.
pub fn is_complex_lattice(g: &ComplexLattice) -> ComplexStructure {
    let n = g.n();
    let basis = g.real_basis();
    let mut rot = DMatrix::zeros(2 * n, 2 * n);
    // (Re, Im) of i z is (-Im z, Re z)
    for j in 0..2 * n {
        for k in 0..n {
            rot[(k, j)] = -basis[(n + k, j)];
            rot[(n + k, j)] = basis[(k, j)];
        }
    }
    let coords = basis.clone().lu().solve(&rot);
    match coords {
        Some(c) => {
            let defect = c.iter().map(|x| (x - x.round()).abs()).fold(0.0, f64::max);
            ComplexStructure {
                is_complex: defect <= INTEGRALITY_TOL,
                matrix: c.map(|x| x.round() as i64),
                defect,
            }
        }
        None => ComplexStructure {
            is_complex: false,
            matrix: DMatrix::zeros(2 * n, 2 * n),
            defect: f64::INFINITY,
        },
    }
}
