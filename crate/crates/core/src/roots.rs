//! All zeros of a polynomial by Aberth–Ehrlich simultaneous iteration, plus
//! contour-integral zero counting and the sampled Govil chain.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Root, RootSet, SparsePolynomial};
use crate::sampling;

pub const MAX_ITERATIONS: u32 = 2000;
/// Approximations closer than this are always merged into one multiple root.
pub const CLUSTER_RADIUS: f64 = 1e-6;
/// Minimum distance between a zero and the integration contour.
pub const CONTOUR_GUARD: f64 = 1e-3;
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("polynomial has degree 0")]
    Constant,
    #[error("no convergence after {} iterations (max residual {:e})", .partial.iterations, .partial.max_residual)]
    NoConvergence { partial: Box<RootFindReport> },
    #[error("zero {root} lies within {CONTOUR_GUARD} of the contour |z| = {radius}")]
    Contour { root: Complex64, radius: f64 },
    #[error("need at least {needed} quadrature points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootFindReport {
    pub roots: RootSet,
    /// `max_k |P(z_k)|`.
    pub max_residual: f64,
    pub iterations: u32,
    /// Some multiplicity came from merging nearby approximations rather than
    /// from exact deflation at the origin.
    pub inferred_multiplicity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootJson {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootFindReportJson {
    pub roots: Vec<RootJson>,
    pub max_residual: f64,
    pub iterations: u32,
}

impl RootFindReport {
    pub fn to_json(&self) -> RootFindReportJson {
        RootFindReportJson {
            roots: self
                .roots
                .roots()
                .iter()
                .map(|r| RootJson {
                    re: r.z.re,
                    im: r.z.im,
                    mult: r.multiplicity,
                })
                .collect(),
            max_residual: self.max_residual,
            iterations: self.iterations,
        }
    }
}

/// Horner value, derivative, and the running-error scale `Σ |c_j| |z|^j`.
fn horner(dense: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let r = z.norm();
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for &c in dense.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * r + c.norm();
    }
    (p, dp, scale)
}

/// Aberth–Ehrlich on dense coefficients of degree ≥ 1. Returns the
/// approximations, iterations used, and whether every one converged.
fn aberth(dense: &[Complex64], tol: f64) -> (Vec<Complex64>, u32, bool) {
    let d = dense.len() - 1;
    let lead = dense[d];
    let radius = 1.0 + dense[..d].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(radius, TAU * i as f64 / d as f64 + 0.4))
        .collect();
    let mut done = vec![false; d];
    let rounding = 4.0 * (d as f64 + 1.0) * f64::EPSILON;

    for iter in 1..=MAX_ITERATIONS {
        for i in 0..d {
            if done[i] {
                continue;
            }
            let (p, dp, scale) = horner(dense, z[i]);
            if p.norm() <= rounding * scale {
                done[i] = true;
                continue;
            }
            let newton = p / dp;
            let repulsion: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[i] -= step;
            if step.norm() <= tol * z[i].norm().max(1.0) {
                done[i] = true;
            }
        }
        if done.iter().all(|&x| x) {
            return (z, iter, true);
        }
    }
    (z, MAX_ITERATIONS, false)
}

/// Groups by single linkage under `close`, preserving first-seen order.
fn link(points: &[Complex64], close: impl Fn(Complex64, Complex64) -> bool) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if close(points[i], points[j]) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let root = find(&mut label, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => g.1.push(i),
            None => groups.push((root, vec![i])),
        }
    }
    groups.into_iter().map(|g| g.1).collect()
}

/// `P^{(m)}(c) / m!` by `m + 1` rounds of synthetic division.
fn taylor_coeff(dense: &[Complex64], c: Complex64, m: usize) -> Complex64 {
    let mut work = dense.to_vec();
    let mut rem = Complex64::new(0.0, 0.0);
    for _ in 0..=m {
        let Some(&top) = work.last() else {
            return Complex64::new(0.0, 0.0);
        };
        let mut q = vec![Complex64::new(0.0, 0.0); work.len() - 1];
        let mut acc = top;
        for i in (0..work.len() - 1).rev() {
            q[i] = acc;
            acc = acc * c + work[i];
        }
        rem = acc;
        work = q;
    }
    rem
}

/// Newton on `P^{(m-1)}`, which has a simple zero at an `m`-fold root of
/// `P`. Steps that do not shrink `|P^{(m-1)}|` are rejected.
fn polish(dense: &[Complex64], mut c: Complex64, m: usize) -> Complex64 {
    let mut f = taylor_coeff(dense, c, m - 1);
    for _ in 0..8 {
        let df = taylor_coeff(dense, c, m) * m as f64;
        let step = f / df;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        let next = c - step;
        let fnext = taylor_coeff(dense, next, m - 1);
        if fnext.norm() >= f.norm() {
            break;
        }
        c = next;
        f = fnext;
        if step.norm() <= f64::EPSILON * c.norm().max(1.0) {
            break;
        }
    }
    c
}

/// Loose grouping of approximations before the multiplicity test.
const LOOSE_LINK: f64 = 0.05;

/// Merges approximations into roots with multiplicity.
///
/// Anything within [`CLUSTER_RADIUS`] is merged. A wider group of `m`
/// approximations around centroid `c` is also merged when its spread is
/// within `4 (ε Σ|a_j||c|^j / |P^{(m)}(c)/m!|)^{1/m}`, the scatter that
/// rounding alone produces around an `m`-fold zero.
fn cluster(dense: &[Complex64], approx: &[Complex64]) -> Vec<Root> {
    let mut roots = Vec::new();
    let loose = link(approx, |a, b| (a - b).norm() < LOOSE_LINK * a.norm().max(1.0));
    for group in loose {
        let pts: Vec<Complex64> = group.iter().map(|&i| approx[i]).collect();
        let m = pts.len();
        let centroid = pts.iter().sum::<Complex64>() / m as f64;
        let spread = pts.iter().map(|z| (z - centroid).norm()).fold(0.0, f64::max);
        let predicted = if m > 1 {
            let r = centroid.norm();
            let scale = dense.iter().rev().fold(0.0, |acc, c| acc * r + c.norm());
            let lead = taylor_coeff(dense, centroid, m).norm();
            4.0 * (f64::EPSILON * scale / lead).powf(1.0 / m as f64)
        } else {
            0.0
        };
        if spread <= CLUSTER_RADIUS.max(predicted) {
            roots.push(Root {
                z: polish(dense, centroid, m),
                multiplicity: m as u32,
            });
            continue;
        }
        for tight in link(&pts, |a, b| (a - b).norm() < CLUSTER_RADIUS) {
            let k = tight.len();
            let z = tight.iter().map(|&i| pts[i]).sum::<Complex64>() / k as f64;
            roots.push(Root {
                z: polish(dense, z, k),
                multiplicity: k as u32,
            });
        }
    }
    roots
}

/// All `k_n` zeros of `p`: the `z^{k_0}` factor is deflated exactly, the
/// cofactor goes through Aberth–Ehrlich started on the circle of radius
/// `1 + max|a_ν/a_n|`.
pub fn find_roots(p: &SparsePolynomial, tol: f64) -> Result<RootFindReport, RootError> {
    if p.degree() == 0 {
        return Err(RootError::Constant);
    }
    let k0 = p.low_exponent();
    let dense = p.to_dense();
    let cofactor = &dense[k0 as usize..];

    let (approx, iterations, converged) = match cofactor.len() {
        1 => (Vec::new(), 0, true),
        2 => (vec![-cofactor[0] / cofactor[1]], 1, true),
        _ => aberth(cofactor, tol),
    };

    let mut roots = cluster(cofactor, &approx);
    let inferred_multiplicity = roots.iter().any(|r| r.multiplicity > 1);
    if k0 > 0 {
        roots.push(Root {
            z: Complex64::new(0.0, 0.0),
            multiplicity: k0,
        });
    }
    let max_residual = roots.iter().map(|r| p.eval(r.z).norm()).fold(0.0, f64::max);
    let report = RootFindReport {
        roots: RootSet::new(roots),
        max_residual,
        iterations,
        inferred_multiplicity,
    };
    if converged {
        Ok(report)
    } else {
        Err(RootError::NoConvergence {
            partial: Box::new(report),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskCount {
    /// Zeros of modulus below the radius, with multiplicity.
    pub count: u32,
    /// Trapezoidal mean of `Re(zP'/P)` over the circle.
    pub integral: f64,
    /// Trapezoidal mean of `|zP'/P|` over the circle (`∫|P'/P|dσ` at radius 1).
    pub abs_integral: f64,
    /// Largest `|zP'/P|` on the quadrature grid.
    pub max_abs: f64,
    /// `count ≤ abs_integral ≤ max_abs`, each within 1e-6.
    pub sandwich_holds: bool,
}

/// Argument-principle count of the zeros in `|z| < radius`.
pub fn count_roots_in_disk(p: &SparsePolynomial, radius: f64, quad_points: usize) -> Result<DiskCount, RootError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(RootError::BadRadius(radius));
    }
    let needed = 4 * p.degree() as usize;
    if quad_points < needed.max(1) {
        return Err(RootError::TooFewPoints {
            needed,
            got: quad_points,
        });
    }
    if p.degree() > 0 {
        let report = find_roots(p, DEFAULT_ROOT_TOL)?;
        if let Some(r) = report
            .roots
            .roots()
            .iter()
            .find(|r| (r.z.norm() - radius).abs() < CONTOUR_GUARD)
        {
            return Err(RootError::Contour { root: r.z, radius });
        }
    }

    let dp = p.derivative();
    let (mut re_sum, mut abs_sum, mut max_abs) = (0.0, 0.0, 0.0_f64);
    for z in sampling::circle_grid(quad_points, radius, 0.0) {
        let v = z * dp.eval(z) / p.eval(z);
        re_sum += v.re;
        abs_sum += v.norm();
        max_abs = max_abs.max(v.norm());
    }
    let integral = re_sum / quad_points as f64;
    let abs_integral = abs_sum / quad_points as f64;
    let count = integral.round().max(0.0) as u32;
    Ok(DiskCount {
        count,
        integral,
        abs_integral,
        max_abs,
        sandwich_holds: count as f64 <= abs_integral + 1e-6 && abs_integral <= max_abs + 1e-6,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GovilReport {
    pub degree: u32,
    /// `n / (1 + |z_m|)`.
    pub lower: f64,
    pub sampled_min: f64,
    pub sampled_max: f64,
    pub samples: usize,
    pub holds: bool,
}

/// Samples `|P'/P|` on the unit circle for `P` with every zero in the open
/// disk and checks `n/(1+|z_m|) ≤ min ≤ n ≤ max` within `tol`.
pub fn govil_chain_check(p: &SparsePolynomial, samples: usize, seed: u64, tol: f64) -> Result<GovilReport, RootError> {
    let report = find_roots(p, DEFAULT_ROOT_TOL)?;
    let zm = report.roots.max_modulus().unwrap_or(0.0);
    if zm >= 1.0 {
        return Err(RootError::NotApplicable(format!("largest zero has modulus {zm} ≥ 1")));
    }
    let n = p.degree() as f64;
    let phase = sampling::rng(seed).gen::<f64>() * TAU;
    let dp = p.derivative();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for z in sampling::circle_grid(samples.max(1), 1.0, phase) {
        let v = (dp.eval(z) / p.eval(z)).norm();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let lower = n / (1.0 + zm);
    Ok(GovilReport {
        degree: p.degree(),
        lower,
        sampled_min: lo,
        sampled_max: hi,
        samples: samples.max(1),
        holds: lower <= lo + tol && lo <= n + tol && n <= hi + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certifier::build_fejer_family;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_deflates_exactly() {
        let p = SparsePolynomial::monomial(c(1.0, 0.0), 3).unwrap();
        let r = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(
            r.roots.roots(),
            &[Root {
                z: c(0.0, 0.0),
                multiplicity: 3
            }]
        );
        assert_eq!(r.max_residual, 0.0);
        assert!(!r.inferred_multiplicity);
    }

    #[test]
    fn double_root_is_clustered() {
        let p = SparsePolynomial::from_real_dense(&[4.0, 4.0, 1.0]);
        let r = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.roots.len(), 1);
        let root = r.roots.roots()[0];
        assert_eq!(root.multiplicity, 2);
        assert!((root.z - c(-2.0, 0.0)).norm() < 1e-6);
        assert!(r.inferred_multiplicity);
    }

    #[test]
    fn fejer_roots_in_annulus() {
        for n in 2..=12 {
            let r = find_roots(&build_fejer_family(n).unwrap(), DEFAULT_ROOT_TOL).unwrap();
            assert_eq!(r.roots.total_multiplicity(), n);
            for root in r.roots.roots() {
                let m = root.z.norm();
                assert!(m > 1.0 && m < 2.0, "n = {n}: |z| = {m}");
            }
        }
    }

    #[test]
    fn residuals_and_conservation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..200 {
            let deg = rng.gen_range(1..=16);
            let k0 = rng.gen_range(0..3);
            let mut dense: Vec<Complex64> = (0..=deg)
                .map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
                .collect();
            // half the corpus has a dominant leading coefficient, so every zero is in |z| < 2
            let bounded = trial % 2 == 0;
            if bounded {
                dense[deg] = Complex64::from_polar(rng.gen_range(4.25..6.0), rng.gen_range(0.0..TAU));
            }
            let p = SparsePolynomial::from_pairs(dense.iter().enumerate().map(|(k, &a)| (k as u32 + k0, a))).unwrap();
            let r = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
            assert_eq!(r.roots.total_multiplicity(), p.degree());
            let amax = p.terms().iter().map(|t| t.coeff.norm()).fold(0.0, f64::max);
            if bounded {
                assert!(r.max_residual <= 1e-8 * (1.0 + amax), "{}", r.max_residual);
            }
            for root in r.roots.roots() {
                let scale: f64 = p
                    .terms()
                    .iter()
                    .map(|t| t.coeff.norm() * root.z.norm().powi(t.exponent as i32))
                    .sum();
                assert!(p.eval(root.z).norm() <= 1e3 * f64::EPSILON * scale, "{root:?}");
            }
            let mods: Vec<f64> = r.roots.roots().iter().map(|r| r.z.norm()).collect();
            assert!(mods.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn triple_root_is_recovered() {
        for center in [c(0.5, 0.0), c(-2.0, 0.0), c(0.3, -0.7)] {
            let p = SparsePolynomial::from_roots(&[center; 3]);
            let r = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
            assert_eq!(r.roots.len(), 1);
            assert_eq!(r.roots.roots()[0].multiplicity, 3);
            assert!((r.roots.roots()[0].z - center).norm() < 1e-12);
        }
        // six-fold zero: raw approximations scatter by ~1e-2
        let p = SparsePolynomial::from_roots(&[c(-2.0, 0.0); 6]);
        let r = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.roots.roots()[0].multiplicity, 6);
        assert!((r.roots.roots()[0].z - c(-2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn close_distinct_roots_stay_apart() {
        let p = SparsePolynomial::from_roots(&[c(0.5, 0.0), c(0.51, 0.0), c(-0.3, 0.2)]);
        let r = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert!(r.roots.roots().iter().all(|x| x.multiplicity == 1));
    }

    #[test]
    fn counts_in_disk() {
        let p = SparsePolynomial::monomial(c(1.0, 0.0), 5).unwrap();
        assert_eq!(count_roots_in_disk(&p, 0.5, 64).unwrap().count, 5);
        let fejer = build_fejer_family(4).unwrap();
        let dc = count_roots_in_disk(&fejer, 1.0, 256).unwrap();
        assert_eq!(dc.count, 0);
        assert!(dc.sandwich_holds);
        assert!(matches!(
            count_roots_in_disk(&fejer, 1.0, 8),
            Err(RootError::TooFewPoints { .. })
        ));
        let near = SparsePolynomial::from_roots(&[c(1.0005, 0.0), c(0.2, 0.1)]);
        assert!(matches!(
            count_roots_in_disk(&near, 1.0, 64),
            Err(RootError::Contour { .. })
        ));
    }

    #[test]
    fn count_matches_root_finder() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        while checked < 40 {
            let deg = rng.gen_range(1..=10);
            let zs: Vec<Complex64> = (0..deg)
                .map(|_| Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..TAU)))
                .collect();
            if zs.iter().any(|z| (z.norm() - 1.0).abs() < 0.01) {
                continue;
            }
            let p = SparsePolynomial::from_roots(&zs);
            let expected = find_roots(&p, DEFAULT_ROOT_TOL).unwrap().roots.count_inside(1.0);
            let dc = count_roots_in_disk(&p, 1.0, 4096).unwrap();
            assert_eq!(dc.count, expected);
            assert!(dc.sandwich_holds);
            checked += 1;
        }
    }

    #[test]
    fn govil_monomial_and_extremal() {
        let p = SparsePolynomial::monomial(c(2.0, 0.0), 4).unwrap();
        let g = govil_chain_check(&p, 1000, 1, 1e-9).unwrap();
        assert!(g.holds);
        assert!((g.sampled_min - 4.0).abs() < 1e-12 && (g.sampled_max - 4.0).abs() < 1e-12);

        // (z - 0.5)^3: min |P'/P| = 3/1.5 at z = -1
        let q = SparsePolynomial::from_roots(&[c(0.5, 0.0); 3]);
        let g = govil_chain_check(&q, 4096, 1, 1e-6).unwrap();
        assert!(g.holds);
        assert!((g.sampled_min - g.lower).abs() < 1e-3, "{g:?}");

        let outside = SparsePolynomial::from_real_dense(&[2.0, 1.0]);
        assert!(matches!(
            govil_chain_check(&outside, 10, 1, 1e-6),
            Err(RootError::NotApplicable(_))
        ));
    }
}
