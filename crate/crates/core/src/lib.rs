//! Frame criteria, explicit frame bounds and spectral verification for
//! Gaussian Gabor systems over lattices in `R^{2n}`.

pub mod bounds1d;
pub mod criteria;
pub mod envelope;
pub mod error;
pub mod fixtures;
pub mod gaussian_int;
pub mod gram;
pub mod lanczos;
pub mod lattice;
pub mod lp;
pub mod short_vectors;
pub mod special;

pub use bounds1d::{explicit_frame_bounds, FrameBoundSandwich};
pub use criteria::{full_report, CriterionReport, TranscendenceAssertion, TranscendenceStatus, Verdict};
pub use envelope::{eval_psi, EnvelopeSpec};
pub use error::{GaborError, Result};
pub use fixtures::{fixture, fixtures, Fixture, LatticeFile, OmegaFile};
pub use gram::{verify_frame_verdict, verify_frame_verdict_with, EmpiricalVerdict, TestFunction, VerifyConfig};
pub use short_vectors::BetaWeights;
pub use special::Tau;
pub use lattice::{
    gamma_of_dual, gamma_of_primal, is_complex_lattice, pd_sqrt, ComplexLattice, ComplexStructure,
    Lattice2n, SiegelMatrix, SymplecticForm,
};
