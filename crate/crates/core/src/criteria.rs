//! Frame criteria for `(g_Omega, Lambda)` merged into one report.
//!
//! Sufficient criteria can only ever return `FRAME` or `INCONCLUSIVE`, necessary
//! ones only `NOT_FRAME` or `INCONCLUSIVE`. Strict inequalities carry a `1e-9`
//! guard band so rounding never certifies a boundary case.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{GaborError, Result};
use crate::gaussian_int::{complex_lll, e_min, gaussian_integer_basis, iwasawa_diagonal};
use crate::lattice::{gamma_of_dual, gamma_of_primal, is_complex_lattice, ComplexLattice, Lattice2n, SiegelMatrix};
use crate::short_vectors::{buser_sarnak, sup_m_beta};

/// Guard band for strict inequalities.
pub const GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TranscendenceStatus {
    True,
    False,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TranscendenceSource {
    AutoN1,
    User,
    ComplexLatticeDetected,
}

/// Whether the torus of the interpolation lattice has no proper analytic subvarieties.
///
/// Not numerically decidable, so it is an input; `n = 1` forces `TRUE`, and a
/// complex lattice with `n >= 2` forces `FALSE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TranscendenceAssertion {
    pub status: TranscendenceStatus,
    pub source: TranscendenceSource,
}

impl TranscendenceAssertion {
    pub fn user(status: TranscendenceStatus) -> Self {
        Self {
            status,
            source: TranscendenceSource::User,
        }
    }

    pub fn unknown() -> Self {
        Self::user(TranscendenceStatus::Unknown)
    }

    /// Applies the forced cases.
    pub fn resolve(self, n: usize, complex_lattice: bool) -> Self {
        if n == 1 {
            Self {
                status: TranscendenceStatus::True,
                source: TranscendenceSource::AutoN1,
            }
        } else if complex_lattice {
            Self {
                status: TranscendenceStatus::False,
                source: TranscendenceSource::ComplexLatticeDetected,
            }
        } else {
            self
        }
    }

    fn resolve_for(self, lat: &Lattice2n, omega: &SiegelMatrix) -> Result<Self> {
        if lat.n() == 1 {
            return Ok(self.resolve(1, false));
        }
        let g = gamma_of_dual(omega, lat)?;
        Ok(self.resolve(lat.n(), is_complex_lattice(&g).is_complex))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Frame,
    NotFrame,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionRecord {
    pub name: String,
    pub verdict: Verdict,
    pub evidence: BTreeMap<String, f64>,
    /// The result the criterion implements.
    pub tag: String,
    pub notes: Vec<String>,
}

impl CriterionRecord {
    fn new(name: &str, tag: &str) -> Self {
        Self {
            name: name.into(),
            verdict: Verdict::Inconclusive,
            evidence: BTreeMap::new(),
            tag: tag.into(),
            notes: Vec::new(),
        }
    }

    fn put(&mut self, key: &str, v: f64) -> &mut Self {
        self.evidence.insert(key.into(), v);
        self
    }
}

/// Informational certificate that is not folded into the frame verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JetCertificate {
    pub k: u32,
    pub certified: bool,
    pub covolume: f64,
    pub threshold: f64,
    pub transcendence: TranscendenceAssertion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeshadriBounds {
    pub lower: f64,
    pub upper: f64,
    pub e_min: f64,
    pub pi_m_over_4: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub verdict: Verdict,
    pub criteria: Vec<CriterionRecord>,
    pub evidence: BTreeMap<String, f64>,
    pub conflict: bool,
    pub transcendence: TranscendenceAssertion,
    pub seshadri: Option<SeshadriBounds>,
    pub jet: Option<JetCertificate>,
    pub notes: Vec<String>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Necessary condition: a frame has `|Lambda| < 1`.
pub fn criterion_balian_low(lat: &Lattice2n) -> CriterionRecord {
    let mut r = CriterionRecord::new("balian-low", "covolume below one is necessary");
    let v = lat.covolume();
    r.put("covolume", v);
    if v >= 1.0 - 1e-12 {
        r.verdict = Verdict::NotFrame;
    }
    r
}

/// Sufficient condition: transcendental pair and `|Lambda| < n!/n^n`.
pub fn criterion_covolume_transcendental(
    lat: &Lattice2n,
    omega: &SiegelMatrix,
    t: TranscendenceAssertion,
) -> Result<CriterionRecord> {
    let n = lat.n();
    let t = t.resolve_for(lat, omega)?;
    let mut r = CriterionRecord::new("covolume-transcendental", "transcendental covolume criterion");
    let v = lat.covolume();
    let threshold = factorial(n) / (n as f64).powi(n as i32);
    r.put("covolume", v).put("threshold", threshold);
    if t.status == TranscendenceStatus::True && v < threshold - GUARD {
        r.verdict = Verdict::Frame;
    }
    if t.status != TranscendenceStatus::True && v < threshold - GUARD {
        r.notes.push(format!("covolume is below n!/n^n but transcendence is {:?}", t.status));
    }
    Ok(r)
}

/// Sufficient condition: `sup_beta m_beta(Gamma_{Omega, Lambda°}) > 4/pi`.
pub fn criterion_beta_buser_sarnak(lat: &Lattice2n, omega: &SiegelMatrix) -> Result<CriterionRecord> {
    let g = gamma_of_dual(omega, lat)?;
    beta_buser_sarnak_on(&g)
}

pub(crate) fn beta_buser_sarnak_on(g: &ComplexLattice) -> Result<CriterionRecord> {
    let mut r = CriterionRecord::new("beta-buser-sarnak", "weighted Buser-Sarnak bound on the Hormander constant");
    let s = sup_m_beta(g)?;
    let threshold = 4.0 / PI;
    r.put("sup_m_beta", s.value)
        .put("sup_m_beta_upper", s.upper)
        .put("threshold", threshold)
        .put("hormander_lower", PI / 4.0 * s.value);
    for (j, b) in s.argmax.as_slice().iter().enumerate() {
        r.put(&format!("argmax_beta_{}", j + 1), *b);
    }
    if s.boundary_argmax {
        r.notes.push("argmax lies on the boundary of the simplex".into());
    }
    if s.value > threshold + GUARD {
        r.verdict = Verdict::Frame;
    }
    Ok(r)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Candidate `Z[i]`-bases of a complex lattice: the exact normal-form basis, its
/// complex LLL reduction, and (for small `n`) the column permutations of the latter.
pub fn candidate_bases(g: &ComplexLattice) -> Result<Vec<DMatrix<Complex64>>> {
    let a = gaussian_integer_basis(g)?;
    let n = a.ncols();
    let reversed = DMatrix::from_fn(n, n, |i, j| a[(i, n - 1 - j)]);
    let lll = complex_lll(&reversed, 0.99);
    let mut out = vec![a];
    if n <= 4 {
        for p in permutations(n) {
            out.push(DMatrix::from_fn(n, n, |i, j| lll[(i, p[j])]));
        }
    } else {
        out.push(DMatrix::from_fn(n, n, |i, j| lll[(i, n - 1 - j)]));
        out.push(lll);
    }
    Ok(out)
}

/// The Iwasawa diagonal with the largest minimum over the candidate bases.
pub fn best_iwasawa(g: &ComplexLattice) -> Result<Vec<f64>> {
    let mut best: Option<Vec<f64>> = None;
    for a in candidate_bases(g)? {
        let l = iwasawa_diagonal(&a)?;
        let m = l.iter().copied().fold(f64::INFINITY, f64::min);
        if best
            .as_ref()
            .map_or(true, |b| m > b.iter().copied().fold(f64::INFINITY, f64::min))
        {
            best = Some(l);
        }
    }
    best.ok_or_else(|| GaborError::InvalidLattice("no Gaussian-integer basis".into()))
}

/// Sufficient condition for complex lattices: `Gamma = A Z[i]^n`, `A = U S`, every `lambda_j > 1`.
pub fn criterion_groechenig(lat: &Lattice2n, omega: &SiegelMatrix) -> Result<CriterionRecord> {
    let g = gamma_of_dual(omega, lat)?;
    groechenig_on(&g)
}

pub(crate) fn groechenig_on(g: &ComplexLattice) -> Result<CriterionRecord> {
    let mut r = CriterionRecord::new("groechenig", "Iwasawa diagonal above one for a complex lattice");
    if !is_complex_lattice(g).is_complex {
        r.notes.push("not a complex lattice".into());
        return Ok(r);
    }
    let l = best_iwasawa(g)?;
    let min = l.iter().copied().fold(f64::INFINITY, f64::min);
    for (j, v) in l.iter().enumerate() {
        r.put(&format!("lambda_{}", j + 1), *v);
    }
    r.put("lambda_min", min);
    if min > 1.0 + GUARD {
        r.verdict = Verdict::Frame;
    }
    Ok(r)
}

/// Certifies `Gamma` as a set of `k`-jet interpolation when it is transcendental and
/// `|Gamma| > (n+k)^n/n!`.
pub fn criterion_jet(g: &ComplexLattice, k: u32, t: TranscendenceAssertion) -> JetCertificate {
    let n = g.n();
    let t = t.resolve(n, n >= 2 && is_complex_lattice(g).is_complex);
    let threshold = ((n as f64) + k as f64).powi(n as i32) / factorial(n);
    let covolume = g.covolume();
    JetCertificate {
        k,
        certified: t.status == TranscendenceStatus::True && covolume > threshold + GUARD,
        covolume,
        threshold,
        transcendence: t,
    }
}

/// `max(pi m/4, e_min(A)) <= epsilon_0 <= m(Gamma)` for a complex lattice `Gamma = A Z[i]^n`.
pub fn complex_lattice_seshadri_bounds(g: &ComplexLattice) -> Result<SeshadriBounds> {
    if !is_complex_lattice(g).is_complex {
        return Err(GaborError::NotComplexLattice);
    }
    let m = buser_sarnak(g)?;
    let e = candidate_bases(g)?
        .iter()
        .map(e_min)
        .fold(f64::NEG_INFINITY, f64::max);
    let pm = PI * m / 4.0;
    Ok(SeshadriBounds {
        lower: pm.max(e),
        upper: m,
        e_min: e,
        pi_m_over_4: pm,
    })
}

/// Primitive solution `(k, l)` of `l^2 - d k^2 = 1` by direct search.
pub fn pell_primitive(d: u64) -> Option<(u64, u64)> {
    let r = (d as f64).sqrt() as u64;
    if r * r == d {
        return None;
    }
    (1u64..1_000_000).find_map(|k| {
        let t = d * k * k + 1;
        let l = (t as f64).sqrt().round() as u64;
        (l * l == t).then_some((k, l))
    })
}

/// An exact fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let s = if den < 0 { -1 } else { 1 };
        Self {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `8/sqrt(8 k^2 + 1) = 8/l` at the primitive solution of `l^2 - 8 k^2 = 1`.
pub fn pell_seshadri_14() -> Rational {
    let (_, l) = pell_primitive(8).expect("8 is not a square");
    Rational::new(8, l as i64)
}

/// Runs every criterion on the normalized problem `(iI, Gamma_{Omega, Lambda})`.
pub fn full_report(
    lat: &Lattice2n,
    omega: &SiegelMatrix,
    t: TranscendenceAssertion,
    known_nonframe: Option<bool>,
) -> Result<CriterionReport> {
    let n = lat.n();
    let normalized = gamma_of_primal(omega, lat)?.as_lattice_2n();
    let ii = SiegelMatrix::identity(n);
    let g = gamma_of_dual(&ii, &normalized)?;
    let complex = is_complex_lattice(&g).is_complex;
    let resolved = t.resolve(n, n >= 2 && complex);
    let mut notes = Vec::new();
    if t.status == TranscendenceStatus::True && resolved.status == TranscendenceStatus::False {
        notes.push("transcendence assertion overridden: the interpolation lattice is a complex lattice".into());
    }

    let mut criteria = vec![
        criterion_balian_low(&normalized),
        criterion_covolume_transcendental(&normalized, &ii, resolved)?,
        beta_buser_sarnak_on(&g)?,
        groechenig_on(&g)?,
    ];
    if let Some(true) = known_nonframe {
        let mut r = CriterionRecord::new("asserted-non-frame", "non-frame fact supplied with the input");
        r.verdict = Verdict::NotFrame;
        criteria.push(r);
    }
    criteria.sort_by(|a, b| a.name.cmp(&b.name));

    let any = |v: Verdict| criteria.iter().any(|c| c.verdict == v);
    let conflict = any(Verdict::Frame) && any(Verdict::NotFrame);
    let verdict = if any(Verdict::Frame) && !conflict {
        Verdict::Frame
    } else if any(Verdict::NotFrame) && !conflict {
        Verdict::NotFrame
    } else {
        Verdict::Inconclusive
    };
    if conflict {
        notes.push("sufficient and necessary criteria disagree".into());
    }

    let mut evidence = BTreeMap::new();
    for c in &criteria {
        for (k, v) in &c.evidence {
            evidence.insert(format!("{}.{}", c.name, k), *v);
        }
    }
    evidence.insert("interpolation.m_gamma".into(), buser_sarnak(&g)?);
    evidence.insert("interpolation.covolume".into(), g.covolume());

    let seshadri = if complex {
        let s = complex_lattice_seshadri_bounds(&g)?;
        evidence.insert("seshadri.lower".into(), s.lower);
        evidence.insert("seshadri.upper".into(), s.upper);
        Some(s)
    } else {
        None
    };
    let jet = Some(criterion_jet(&g, 0, resolved));

    Ok(CriterionReport {
        verdict,
        criteria,
        evidence,
        conflict,
        transcendence: resolved,
        seshadri,
        jet,
        notes,
    })
}
