#![allow(dead_code)]

use gaussian_gabor::{Lattice2n, SiegelMatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// A well-conditioned random lattice in `R^{2n}` with the given covolume.
pub fn lattice_from(n: usize, entries: &[f64], covolume: f64) -> Lattice2n {
    let d = 2 * n;
    let m = DMatrix::from_fn(d, d, |i, j| entries[i * d + j] + if i == j { 2.0 } else { 0.0 });
    let lat = Lattice2n::new(n, m).expect("diagonally dominant basis");
    let s = (covolume / lat.covolume()).powf(1.0 / d as f64);
    lat.scaled(s).unwrap()
}

pub fn lattice_strategy(max_n: usize) -> impl Strategy<Value = Lattice2n> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(-1.0..1.0f64, 4 * n * n), 0.2..2.0f64))
        .prop_map(|(n, e, c)| lattice_from(n, &e, c))
}

/// A Siegel matrix `X + iY` with `Y = B B^T + I/2`.
pub fn siegel_from(n: usize, entries: &[f64]) -> SiegelMatrix {
    let x = DMatrix::from_fn(n, n, |i, j| 0.5 * (entries[i * n + j] + entries[j * n + i]));
    let b = DMatrix::from_fn(n, n, |i, j| 0.6 * entries[n * n + i * n + j]);
    let y = &b * b.transpose() + DMatrix::identity(n, n) * 0.5;
    SiegelMatrix::new(x, y).unwrap()
}

pub fn groechenig_lyubarskii() -> Lattice2n {
    gaussian_gabor::fixtures::groechenig_lyubarskii_lattice()
}
