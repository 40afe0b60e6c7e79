//! Deciding the coefficient condition `min Re tail_ν ≥ 1/2` for every `ν`,
//! the convex-coefficient shortcut, and the Fejér example family.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::SparsePolynomial;
use crate::trig_min::{certified_min, MinResult, TrigError, TrigTail};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("polynomial has no terms")]
    Empty,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("family index must be at least 2, got {0}")]
    FamilyIndex(u32),
    #[error(transparent)]
    Trig(#[from] TrigError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Certified,
    CertifiedTight,
    Rejected,
    Inconclusive,
}

impl Verdict {
    /// Certified or CertifiedTight.
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Certified | Verdict::CertifiedTight)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuResult {
    pub nu: usize,
    pub min: MinResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub per_nu: Vec<NuResult>,
    /// `min_ν lower_bound − 1/2`.
    pub margin: f64,
    pub verdict: Verdict,
    pub tolerance_used: f64,
    /// Indices whose minimization hit the refinement cap.
    pub inconclusive_nu: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuJson {
    pub nu: usize,
    pub lower_bound: f64,
    pub witness_x: f64,
    pub witness_value: f64,
}

/// Wire form of a [`Certificate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: Verdict,
    pub margin: f64,
    pub tolerance: f64,
    pub per_nu: Vec<NuJson>,
}

impl Certificate {
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            verdict: self.verdict,
            margin: self.margin,
            tolerance: self.tolerance_used,
            per_nu: self
                .per_nu
                .iter()
                .map(|r| NuJson {
                    nu: r.nu,
                    lower_bound: r.min.lower_bound,
                    witness_x: r.min.witness_x,
                    witness_value: r.min.witness_value,
                })
                .collect(),
        }
    }
}

/// Runs the certified minimizer on every tail of `p` and classifies.
///
/// A witness below `1/2 − tol` is a proof of failure and wins over any
/// unconverged index. Each minimization is asked for `tol/4` so that an
/// exactly tight tail lands strictly inside the `|margin| < tol` band.
pub fn check_condition(p: &SparsePolynomial, tol: f64) -> Result<Certificate, CertifyError> {
    if p.is_zero() {
        return Err(CertifyError::Empty);
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(TrigError::BadTolerance(tol).into());
    }
    let mut per_nu = Vec::with_capacity(p.term_count());
    for nu in 0..p.term_count() {
        let tail = TrigTail::from_ratio_tail(p, nu)?;
        per_nu.push(NuResult {
            nu,
            min: certified_min(&tail, 0.25 * tol)?,
        });
    }
    let inconclusive_nu: Vec<usize> = per_nu.iter().filter(|r| !r.min.converged).map(|r| r.nu).collect();
    let margin = per_nu.iter().map(|r| r.min.lower_bound).fold(f64::INFINITY, f64::min) - THRESHOLD;
    let rejected = per_nu.iter().any(|r| r.min.witness_value < THRESHOLD - tol);

    let verdict = if rejected {
        Verdict::Rejected
    } else if !inconclusive_nu.is_empty() {
        Verdict::Inconclusive
    } else if margin >= tol {
        Verdict::Certified
    } else if margin.abs() < tol {
        Verdict::CertifiedTight
    } else {
        Verdict::Inconclusive
    };
    Ok(Certificate {
        per_nu,
        margin,
        verdict,
        tolerance_used: tol,
        inconclusive_nu,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityVerdict {
    pub passes: bool,
    /// First `ν` with `Δ²(a_ν) < 0`.
    pub failing_index: Option<usize>,
    pub second_differences: Vec<f64>,
    /// `a_0 ≥ a_1 ≥ … ≥ a_n`.
    pub monotone: bool,
}

/// The three-branch `Δ²(a_ν)` for real coefficients `a_0..=a_n`, `n ≥ 1`.
pub fn second_differences(a: &[f64]) -> Vec<f64> {
    let n = a.len() - 1;
    (0..=n)
        .map(|nu| {
            if nu + 2 <= n {
                a[nu + 2] - 2.0 * a[nu + 1] + a[nu]
            } else if nu + 1 == n {
                a[n - 1] - 2.0 * a[n]
            } else {
                a[n]
            }
        })
        .collect()
}

fn positive_real_dense(p: &SparsePolynomial) -> Result<Vec<f64>, CertifyError> {
    if p.term_count() < 2 {
        return Err(CertifyError::NotApplicable("needs degree at least 1".into()));
    }
    if !p.is_dense() {
        return Err(CertifyError::NotApplicable("exponents must be 0, 1, …, n".into()));
    }
    if !p.is_real() {
        return Err(CertifyError::NotApplicable("coefficients must be real".into()));
    }
    let a: Vec<f64> = p.terms().iter().map(|t| t.coeff.re).collect();
    if a.iter().any(|&x| x <= 0.0) {
        return Err(CertifyError::NotApplicable("coefficients must be positive".into()));
    }
    Ok(a)
}

/// Positive, non-increasing, convex coefficients (with the end-modified
/// `Δ²`) are a sufficient shortcut for the tail condition.
pub fn check_convexity_corollary(p: &SparsePolynomial) -> Result<ConvexityVerdict, CertifyError> {
    let a = positive_real_dense(p)?;
    let second_differences = second_differences(&a);
    let failing_index = second_differences.iter().position(|&d| d < 0.0);
    let monotone = a.windows(2).all(|w| w[0] >= w[1]);
    Ok(ConvexityVerdict {
        passes: failing_index.is_none() && monotone,
        failing_index,
        second_differences,
        monotone,
    })
}

/// `Σ_{k=0}^{n} (n+1−k) z^k`.
pub fn build_fejer_family(n: u32) -> Result<SparsePolynomial, CertifyError> {
    if n < 2 {
        return Err(CertifyError::FamilyIndex(n));
    }
    let coeffs: Vec<Complex64> = (0..=n).map(|k| Complex64::new((n + 1 - k) as f64, 0.0)).collect();
    Ok(SparsePolynomial::from_dense(&coeffs))
}

/// Outer radius `max_k a_k/a_{k+1}` of the Eneström–Kakeya annulus for
/// positive coefficients; every zero has modulus at most this.
pub fn enestrom_kakeya_bound(p: &SparsePolynomial) -> Result<f64, CertifyError> {
    Ok(enestrom_kakeya_annulus(p)?.1)
}

/// `(min_k a_k/a_{k+1}, max_k a_k/a_{k+1})`.
pub fn enestrom_kakeya_annulus(p: &SparsePolynomial) -> Result<(f64, f64), CertifyError> {
    let a = positive_real_dense(p)?;
    let ratios = a.windows(2).map(|w| w[0] / w[1]);
    Ok(ratios.fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| (lo.min(r), hi.max(r))))
}
