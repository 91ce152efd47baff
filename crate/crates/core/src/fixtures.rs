//! JSON schemas for lattices and Siegel matrices, and the regression corpus.
//!
//! A lattice file is `{"n": n, "basis": [[...], ...]}` where `basis` lists the
//! `2n` rows of the basis matrix in `(xi, x)` coordinates; its columns generate the
//! lattice. A Siegel matrix file is `{"re": [[...]], "im": [[...]]}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{GaborError, Result};
use crate::lattice::{Lattice2n, SiegelMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub n: usize,
    pub basis: Vec<Vec<f64>>,
}

impl LatticeFile {
    pub fn to_lattice(&self) -> Result<Lattice2n> {
        let d = 2 * self.n;
        let mut problems = Vec::new();
        if self.n == 0 {
            problems.push("n must be positive".to_string());
        }
        if self.basis.len() != d {
            problems.push(format!("basis has {} rows, expected {d}", self.basis.len()));
        }
        for (i, row) in self.basis.iter().enumerate() {
            if row.len() != d {
                problems.push(format!("basis row {i} has {} entries, expected {d}", row.len()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                problems.push(format!("basis row {i} has a non-finite entry"));
            }
        }
        if !problems.is_empty() {
            return Err(GaborError::DimensionMismatch(problems.join("; ")));
        }
        Lattice2n::from_rows(self.n, &self.basis)
    }

    pub fn from_lattice(lat: &Lattice2n) -> Self {
        Self { n: lat.n(), basis: lat.rows() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaFile {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl OmegaFile {
    pub fn to_siegel(&self) -> Result<SiegelMatrix> {
        let n = self.im.len();
        let square = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if n == 0 || !square(&self.re) || !square(&self.im) {
            return Err(GaborError::DimensionMismatch("re and im must be square matrices of the same size".into()));
        }
        let flat = |m: &Vec<Vec<f64>>| DMatrix::from_row_iterator(n, n, m.iter().flatten().copied());
        SiegelMatrix::new(flat(&self.re), flat(&self.im))
    }

    pub fn identity(n: usize) -> Self {
        let eye = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        Self { re: vec![vec![0.0; n]; n], im: eye }
    }

    pub fn from_siegel(omega: &SiegelMatrix) -> Self {
        let rows = |m: &DMatrix<f64>| m.row_iter().map(|r| r.iter().copied().collect()).collect();
        Self { re: rows(omega.re()), im: rows(omega.im()) }
    }
}

/// A named regression input with the result it anchors and the values it must reproduce.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fixture {
    pub name: &'static str,
    pub anchor: &'static str,
    pub lattice: Option<LatticeFile>,
    pub omega: Option<OmegaFile>,
    pub known_nonframe: bool,
    pub parameters: Value,
    pub expected: Value,
}

fn scaled(n: usize, s: f64) -> LatticeFile {
    LatticeFile::from_lattice(&Lattice2n::scaled_integer(n, s).expect("valid scale"))
}

fn diagonal(d: &[f64]) -> LatticeFile {
    LatticeFile::from_lattice(&Lattice2n::diagonal(d).expect("valid diagonal"))
}

/// `{(e + f/2, (sqrt 3 / 2) f) : e, f in Z^2}` with the two factors of
/// `R^2 x R^2` read as the pairs `(xi_1, x_1)` and `(xi_2, x_2)`, so that the
/// interpolation lattice for the standard Gaussian is the complex lattice
/// `{(a, (2b - a)/sqrt 3) : a, b in Z[i]}`.
pub fn groechenig_lyubarskii_lattice() -> Lattice2n {
    let h = 3f64.sqrt() / 2.0;
    // columns e1, e2, f1, f2 in coordinates (xi1, xi2, x1, x2)
    Lattice2n::from_rows(
        2,
        &[
            vec![1.0, 0.0, 0.5, 0.0],
            vec![0.0, 0.0, h, 0.0],
            vec![0.0, 1.0, 0.0, 0.5],
            vec![0.0, 0.0, 0.0, h],
        ],
    )
    .expect("valid lattice")
}

/// `(Z + Z/2)^2`: each coordinate pair `(xi_j, x_j)` runs over `Z x Z/2`.
pub fn half_integer_product_lattice() -> Lattice2n {
    Lattice2n::diagonal(&[1.0, 0.5, 1.0, 0.5]).expect("valid lattice")
}

/// The lattice whose symplectic dual is `Z + 2iZ`.
pub fn dual_of_z_2iz() -> Lattice2n {
    Lattice2n::diagonal(&[1.0, 2.0]).and_then(|l| l.symplectic_dual()).expect("valid lattice")
}

/// The lattice whose symplectic dual is the hexagonal lattice of covolume `c`.
pub fn dual_of_hexagonal(c: f64) -> Lattice2n {
    let s = (2.0 * c / 3f64.sqrt()).sqrt();
    Lattice2n::from_rows(1, &[vec![s, 0.5 * s], vec![0.0, 3f64.sqrt() / 2.0 * s]])
        .and_then(|l| l.symplectic_dual())
        .expect("valid lattice")
}

/// The regression corpus.
pub fn fixtures() -> Vec<Fixture> {
    let gl = LatticeFile::from_lattice(&groechenig_lyubarskii_lattice());
    let sqrt3 = 3f64.sqrt();
    vec![
        Fixture {
            name: "groechenig-lyubarskii",
            anchor: "hexagonal-type lattice in R^4 that is not a Gaussian frame",
            lattice: Some(gl),
            omega: Some(OmegaFile::identity(2)),
            known_nonframe: true,
            parameters: json!({}),
            expected: json!({"covolume": 0.75, "m_gamma": 4.0 / 3.0, "e_min": 2.0 / 3.0,
                "seshadri_lower": std::f64::consts::PI / 3.0, "seshadri_upper": 4.0 / 3.0,
                "lambda": [1.0, 2.0 / sqrt3], "criteria_verdict": "INCONCLUSIVE",
                "empirical": "LIKELY_NOT_FRAME"}),
        },
        Fixture {
            name: "half-integer-product",
            anchor: "(Z + Z/2)^2 is not a frame for the standard Gaussian despite covolume 1/4",
            lattice: Some(LatticeFile::from_lattice(&half_integer_product_lattice())),
            omega: Some(OmegaFile::identity(2)),
            known_nonframe: true,
            parameters: json!({}),
            expected: json!({"covolume": 0.25, "complex_lattice": true, "transcendence": "FALSE",
                "lambda": [1.0, 2.0], "sup_m_beta": 0.8, "empirical": "LIKELY_NOT_FRAME"}),
        },
        Fixture {
            name: "square-covolume-0.81",
            anchor: "covolume criterion in one dimension: every lattice is transcendental",
            lattice: Some(scaled(1, 0.9)),
            omega: Some(OmegaFile::identity(1)),
            known_nonframe: false,
            parameters: json!({}),
            expected: json!({"covolume": 0.81, "criteria_verdict": "FRAME"}),
        },
        Fixture {
            name: "square-0.8",
            anchor: "one-dimensional frame with a spectral plateau",
            lattice: Some(scaled(1, 0.8)),
            omega: Some(OmegaFile::identity(1)),
            known_nonframe: false,
            parameters: json!({}),
            expected: json!({"covolume": 0.64, "criteria_verdict": "FRAME", "empirical": "LIKELY_FRAME"}),
        },
        Fixture {
            name: "integer-square",
            anchor: "Balian-Low obstruction at covolume one",
            lattice: Some(scaled(1, 1.0)),
            omega: Some(OmegaFile::identity(1)),
            known_nonframe: false,
            parameters: json!({}),
            expected: json!({"covolume": 1.0, "criteria_verdict": "NOT_FRAME", "empirical": "LIKELY_NOT_FRAME"}),
        },
        Fixture {
            name: "dual-z-2iz",
            anchor: "explicit one-dimensional frame bound sandwich",
            lattice: Some(LatticeFile::from_lattice(&dual_of_z_2iz())),
            omega: Some(OmegaFile::identity(1)),
            known_nonframe: false,
            parameters: json!({"test_functions": 20}),
            expected: json!({"covolume": 0.5, "epsilon": 2.0}),
        },
        Fixture {
            name: "hexagonal-covolume-2",
            anchor: "hexagonal lattice maximizes the Buser-Sarnak constant at fixed covolume",
            lattice: Some(LatticeFile::from_lattice(&dual_of_hexagonal(2.0))),
            omega: Some(OmegaFile::identity(1)),
            known_nonframe: false,
            parameters: json!({"gamma_covolume": 2.0}),
            expected: json!({"m_gamma": 4.0 / sqrt3, "c": std::f64::consts::PI / sqrt3}),
        },
        Fixture {
            name: "robin-imaginary-tau",
            anchor: "Robin constant attains its closed-form lower bound for purely imaginary tau",
            lattice: None,
            omega: None,
            known_nonframe: false,
            parameters: json!({"epsilon": [1.2, 1.5, 2.0, 3.0, 5.0]}),
            expected: json!({"gap_max": 1e-8}),
        },
        Fixture {
            name: "pell-type-1-4",
            anchor: "Seshadri constant of a generic (1,4)-polarized abelian surface",
            lattice: None,
            omega: None,
            known_nonframe: false,
            parameters: json!({"d": 8}),
            expected: json!({"pell_solution": [1, 3], "seshadri": [8, 3]}),
        },
        Fixture {
            name: "scaled-z4-0.55",
            anchor: "weighted Buser-Sarnak criterion certifies a frame in R^4",
            lattice: Some(scaled(2, 0.55)),
            omega: Some(OmegaFile::identity(2)),
            known_nonframe: false,
            parameters: json!({}),
            expected: json!({"covolume": 0.55f64.powi(4), "criteria_verdict": "FRAME", "empirical": "LIKELY_FRAME"}),
        },
        Fixture {
            name: "product-square-0.8",
            anchor: "product of one-dimensional frames",
            lattice: Some(diagonal(&[0.8, 0.8, 0.8, 0.8])),
            omega: Some(OmegaFile::identity(2)),
            known_nonframe: false,
            parameters: json!({}),
            expected: json!({"covolume": 0.8f64.powi(4), "complex_lattice": true, "empirical": "LIKELY_FRAME"}),
        },
        Fixture {
            name: "split-complex-2-1",
            anchor: "closed form of sup m_beta on A Z[i] x B Z[i]",
            lattice: None,
            omega: None,
            known_nonframe: false,
            parameters: json!({"pairs": [[2.0, 1.0], [3.0, 1.0], [1.5, 1.2]]}),
            expected: json!({"formula": "A^2 B^2 / (A^2 + B^2)"}),
        },
        Fixture {
            name: "sheared-omega",
            anchor: "reduction of a general Gaussian to the standard one",
            lattice: Some(scaled(1, 0.9)),
            omega: Some(OmegaFile { re: vec![vec![0.3]], im: vec![vec![1.2]] }),
            known_nonframe: false,
            parameters: json!({}),
            expected: json!({"covolume": 0.81, "criteria_verdict": "FRAME"}),
        },
        Fixture {
            name: "eta-2i",
            anchor: "Dedekind eta at tau = 2i",
            lattice: None,
            omega: None,
            known_nonframe: false,
            parameters: json!({"tau": [0.0, 2.0]}),
            expected: json!({"eta": 0.592382781332416}),
        },
    ]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}
