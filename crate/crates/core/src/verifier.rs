//! Seeded sampling checks for each inequality in the family: pointwise and
//! circle Bernstein, strict interior bound, Aziz, the combined minimum, the
//! monotone tail chain, the half-plane equivalence and the divided-difference bound.
//!
//! Sample sets are area-uniform points in the disk plus a circle grid and the
//! landmarks `{0, ±1, ±i, −1/2}`. Evaluation is sequential, so a fixed seed
//! reproduces a report exactly.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certifier::{check_condition, DEFAULT_TOL};
use crate::poly::{divided_difference, lemma2_factor, DividedDifferenceBound, PolyError, SparsePolynomial};
use crate::roots::{find_roots, RootError, DEFAULT_ROOT_TOL};
use crate::sampling::{self, SampleKind};

/// Violations kept per report; `violation_count` has the full tally.
pub const MAX_RECORDED_VIOLATIONS: usize = 100;
/// Inner radius for open-disk sampling.
pub const INTERIOR_RADIUS: f64 = 1.0 - 1e-6;
/// Slack on root moduli when deciding root-location preconditions.
pub const ROOT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Roots(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub z: Complex64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check_name: String,
    pub samples: usize,
    /// `max lhs/rhs` over samples with `rhs > 0`.
    pub worst_ratio: f64,
    pub worst_witness: Complex64,
    /// `min lhs/rhs` over the same samples.
    pub min_ratio: f64,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    pub passed: bool,
    /// Smallest `rhs − lhs` where a strictness claim is tracked.
    pub margin: Option<f64>,
    /// Circle samples with `lhs/rhs ≥ 1 − 1e-9` (reported, not classified).
    pub circle_equalities: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub z: [f64; 2],
    pub lhs: f64,
    pub rhs: f64,
}

/// Wire form of a [`VerificationReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReportJson {
    pub check: String,
    pub samples: usize,
    pub worst_ratio: f64,
    pub worst_witness: [f64; 2],
    pub violations: Vec<ViolationJson>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

impl VerificationReport {
    pub fn to_json(&self) -> VerificationReportJson {
        VerificationReportJson {
            check: self.check_name.clone(),
            samples: self.samples,
            worst_ratio: self.worst_ratio,
            worst_witness: [self.worst_witness.re, self.worst_witness.im],
            violations: self
                .violations
                .iter()
                .map(|v| ViolationJson {
                    z: [v.z.re, v.z.im],
                    lhs: v.lhs,
                    rhs: v.rhs,
                })
                .collect(),
            passed: self.passed,
            margin: self.margin,
        }
    }
}

/// `1e-10 · (1 + Σ|a_ν|)`.
pub fn abs_tol(p: &SparsePolynomial) -> f64 {
    1e-10 * (1.0 + p.coeff_mass())
}

/// Running reduction over `(z, lhs, rhs)` comparisons.
struct Tally {
    report: VerificationReport,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            report: VerificationReport {
                check_name: name.to_string(),
                samples: 0,
                worst_ratio: 0.0,
                worst_witness: Complex64::new(0.0, 0.0),
                min_ratio: f64::INFINITY,
                violations: Vec::new(),
                violation_count: 0,
                passed: true,
                margin: None,
                circle_equalities: 0,
            },
        }
    }

    fn observe(&mut self, z: Complex64, kind: SampleKind, lhs: f64, rhs: f64, violated: bool) {
        let r = &mut self.report;
        r.samples += 1;
        if rhs > 0.0 {
            let ratio = lhs / rhs;
            if ratio > r.worst_ratio {
                r.worst_ratio = ratio;
                r.worst_witness = z;
            }
            r.min_ratio = r.min_ratio.min(ratio);
            if kind == SampleKind::Circle && ratio >= 1.0 - 1e-9 {
                r.circle_equalities += 1;
            }
        }
        if violated {
            r.violation_count += 1;
            if r.violations.len() < MAX_RECORDED_VIOLATIONS {
                r.violations.push(Violation { z, lhs, rhs });
            }
        }
    }

    fn track_margin(&mut self, m: f64) {
        let cur = self.report.margin.get_or_insert(f64::INFINITY);
        *cur = cur.min(m);
    }

    fn finish(mut self) -> VerificationReport {
        if !self.report.min_ratio.is_finite() {
            self.report.min_ratio = 0.0;
        }
        self.report.passed = self.report.violation_count == 0;
        self.report
    }
}

fn roots_min_modulus(p: &SparsePolynomial) -> Result<f64, VerifyError> {
    if p.degree() == 0 {
        return Ok(f64::INFINITY);
    }
    Ok(find_roots(p, DEFAULT_ROOT_TOL)?
        .roots
        .min_modulus()
        .unwrap_or(f64::INFINITY))
}

fn nonzero(p: &SparsePolynomial) -> Result<(), VerifyError> {
    if p.is_zero() {
        Err(VerifyError::NotApplicable("zero polynomial".into()))
    } else {
        Ok(())
    }
}

/// `(|zP'(z)|, k_n|P(z)|)`.
pub fn pointwise_bernstein_sides(p: &SparsePolynomial, dp: &SparsePolynomial, z: Complex64) -> (f64, f64) {
    ((z * dp.eval(z)).norm(), p.degree() as f64 * p.eval(z).norm())
}

/// `(|zP'(z)|, min(|k_nP(z) − zP'(z)|, k_n|P(z)|))`.
pub fn combined_min_sides(p: &SparsePolynomial, dp: &SparsePolynomial, z: Complex64) -> (f64, f64) {
    let kn = p.degree() as f64;
    let pz = p.eval(z);
    let zdp = z * dp.eval(z);
    (zdp.norm(), (pz * kn - zdp).norm().min(kn * pz.norm()))
}

/// `|zP'(z)| ≤ k_n|P(z)|` on the closed disk. Interior samples also track
/// `min (k_n|P| − |zP'|)` as the strictness margin when `n ≥ 1`.
pub fn verify_pointwise_bernstein(
    p: &SparsePolynomial,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    nonzero(p)?;
    let dp = p.derivative();
    let tol = abs_tol(p);
    let mut tally = Tally::new("pointwise_bernstein");
    for (z, kind) in sampling::disk_sample_set(samples, seed, 1.0) {
        let (lhs, rhs) = pointwise_bernstein_sides(p, &dp, z);
        tally.observe(z, kind, lhs, rhs, lhs > rhs + tol);
        if kind == SampleKind::Interior && p.term_count() >= 2 {
            tally.track_margin(rhs - lhs);
        }
    }
    Ok(tally.finish())
}

/// `|P'(z)| < k_n|P(z)|` on `|z| ≤ 1 − 1e-6`, for `k_0 = 0`, `n ≥ 1`.
/// Passes iff the margin `min (k_n|P| − |P'|)` is positive.
pub fn verify_strict_interior(
    p: &SparsePolynomial,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    nonzero(p)?;
    if p.low_exponent() != 0 || p.term_count() < 2 {
        return Err(VerifyError::NotApplicable(
            "needs k_0 = 0 and at least two terms".into(),
        ));
    }
    let dp = p.derivative();
    let kn = p.degree() as f64;
    let mut tally = Tally::new("strict_interior");
    for (z, kind) in sampling::disk_sample_set(samples, seed, INTERIOR_RADIUS) {
        let lhs = dp.eval(z).norm();
        let rhs = kn * p.eval(z).norm();
        tally.observe(z, kind, lhs, rhs, rhs - lhs <= 0.0);
        tally.track_margin(rhs - lhs);
    }
    Ok(tally.finish())
}

/// `|zP'(z)| ≤ |k_nP(z) − zP'(z)|` for `P` with no zeros in the open disk.
pub fn verify_aziz(p: &SparsePolynomial, samples: usize, seed: u64) -> Result<VerificationReport, VerifyError> {
    nonzero(p)?;
    let m = roots_min_modulus(p)?;
    if m < 1.0 - ROOT_SLACK {
        return Err(VerifyError::NotApplicable(format!("a zero has modulus {m} < 1")));
    }
    let dp = p.derivative();
    let kn = p.degree() as f64;
    let tol = abs_tol(p);
    let mut tally = Tally::new("aziz");
    for (z, kind) in sampling::disk_sample_set(samples, seed, 1.0) {
        let zdp = z * dp.eval(z);
        let lhs = zdp.norm();
        let rhs = (p.eval(z) * kn - zdp).norm();
        tally.observe(z, kind, lhs, rhs, lhs > rhs + tol);
    }
    Ok(tally.finish())
}

/// `|zP'| ≤ min(|k_nP − zP'|, k_n|P|)`, applicable when every zero has
/// modulus ≥ 2, or when `k_0 = 0` and the tail condition certifies.
pub fn verify_combined_min(p: &SparsePolynomial, samples: usize, seed: u64) -> Result<VerificationReport, VerifyError> {
    nonzero(p)?;
    let outside_two = roots_min_modulus(p)? >= 2.0 - ROOT_SLACK;
    let certified = || {
        p.low_exponent() == 0
            && check_condition(p, DEFAULT_TOL)
                .map(|c| c.verdict.holds())
                .unwrap_or(false)
    };
    if !outside_two && !certified() {
        return Err(VerifyError::NotApplicable(
            "needs all zeros in |z| ≥ 2, or k_0 = 0 with the tail condition certified".into(),
        ));
    }
    let dp = p.derivative();
    let tol = abs_tol(p);
    let mut tally = Tally::new("combined_min");
    for (z, kind) in sampling::disk_sample_set(samples, seed, 1.0) {
        let (lhs, rhs) = combined_min_sides(p, &dp, z);
        tally.observe(z, kind, lhs, rhs, lhs > rhs + tol);
    }
    Ok(tally.finish())
}

/// `|ρ_0(P)(z)|, |ρ_1(P)(z)|, …, |ρ_{k_n}(P)(z)|` with `ρ_0 = P`.
pub fn dense_tail_chain(p: &SparsePolynomial, z: Complex64) -> Vec<f64> {
    let mut chain = Vec::with_capacity(p.degree() as usize + 1);
    chain.push(p.eval(z).norm());
    chain.extend(p.tail_values(z).iter().map(|v| v.norm()));
    chain
}

/// Non-increasing `|P| ≥ |ρ_1| ≥ … ≥ |ρ_{k_n}| = |a_n z^{k_n}|` at every
/// sample. The stored-exponent chain `|ρ_{k_ν}|` is a subsequence of this one.
pub fn verify_tail_chain(p: &SparsePolynomial, samples: usize, seed: u64) -> Result<VerificationReport, VerifyError> {
    nonzero(p)?;
    let tol = abs_tol(p);
    let mut tally = Tally::new("tail_chain");
    for (z, kind) in sampling::disk_sample_set(samples, seed, 1.0) {
        let chain = dense_tail_chain(p, z);
        // worst consecutive step, as (next, prev)
        let mut worst: Option<(f64, f64)> = None;
        let mut violated = None;
        for w in chain.windows(2) {
            let (prev, next) = (w[0], w[1]);
            if prev > 0.0 && worst.is_none_or(|(n, pr)| next / prev > n / pr) {
                worst = Some((next, prev));
            }
            if violated.is_none() && next > prev + tol {
                violated = Some((next, prev));
            }
        }
        match (violated, worst) {
            (Some((lhs, rhs)), _) => tally.observe(z, kind, lhs, rhs, true),
            (None, Some((lhs, rhs))) => tally.observe(z, kind, lhs, rhs, false),
            (None, None) => tally.observe(z, kind, 0.0, 0.0, false),
        }
    }
    Ok(tally.finish())
}

/// `(|p − q| ≤ |p|, Re(p/q) ≥ 1/2)`; the two agree off the boundary
/// `Re(p/q) = 1/2` since `|p/q|² − |p/q − 1|² = 2Re(p/q) − 1`.
pub fn lemma1_equiv(p: Complex64, q: Complex64) -> Result<(bool, bool), VerifyError> {
    if q.norm_sqr() == 0.0 {
        return Err(VerifyError::Poly(PolyError::ZeroArgument));
    }
    Ok(((p - q).norm() <= p.norm(), (p / q).re >= 0.5))
}

/// Evaluates both sides of the divided-difference bound at `(z, w)`.
///
pub fn lemma2_check(p: &SparsePolynomial, z: Complex64, w: Complex64) -> Result<DividedDifferenceBound, VerifyError> {
    let factor = lemma2_factor(z, w, p.degree())?;
    let lhs = divided_difference(p, z, w)?.norm();
    let tail_max = p.tail_values(z).iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(DividedDifferenceBound { lhs, factor, tail_max })
}

/// `max_{|z|=1}|P'| ≤ k_n max_{|z|=1}|P|` estimated on a `samples`-point
/// circle grid with a seeded phase.
pub fn verify_circle_bernstein(
    p: &SparsePolynomial,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    nonzero(p)?;
    let dp = p.derivative();
    let phase = sampling::rng(seed).gen::<f64>() * TAU;
    let (mut max_dp, mut max_p, mut arg) = (0.0_f64, 0.0_f64, Complex64::new(1.0, 0.0));
    let count = samples.max(1);
    for z in sampling::circle_grid(count, 1.0, phase) {
        let d = dp.eval(z).norm();
        if d > max_dp {
            max_dp = d;
            arg = z;
        }
        max_p = max_p.max(p.eval(z).norm());
    }
    let rhs = p.degree() as f64 * max_p;
    let mut tally = Tally::new("circle_bernstein");
    tally.observe(arg, SampleKind::Circle, max_dp, rhs, max_dp > rhs + abs_tol(p));
    let mut report = tally.finish();
    report.samples = count;
    Ok(report)
}

/// CSV over a `resolution × resolution` grid of `[-1, 1]²` restricted to the
/// closed disk: `x, y, |zP'|, k_n|P|, ratio`.
pub fn bernstein_grid_csv(p: &SparsePolynomial, resolution: usize) -> Result<String, csv::Error> {
    let dp = p.derivative();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "|zP'|", "k_n|P|", "ratio"])?;
    let steps = resolution.max(2);
    let mut field = String::new();
    for i in 0..steps {
        let y = -1.0 + 2.0 * i as f64 / (steps - 1) as f64;
        for j in 0..steps {
            let x = -1.0 + 2.0 * j as f64 / (steps - 1) as f64;
            let z = Complex64::new(x, y);
            if z.norm() > 1.0 {
                continue;
            }
            let (lhs, rhs) = pointwise_bernstein_sides(p, &dp, z);
            let ratio = if rhs > 0.0 { lhs / rhs } else { f64::NAN };
            let mut row = Vec::with_capacity(5);
            for v in [x, y, lhs, rhs, ratio] {
                field.clear();
                write!(field, "{v}").expect("write to String");
                row.push(field.clone());
            }
            w.write_record(&row)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
