//! Certified global minimum of `T(x) = Re Σ c_j e^{i m_j x}` over the circle.
//!
//! The tails `Σ_j (a_{j+ν}/a_ν) t^{k_{j+ν}−k_ν}` are analytic in `t`, so
//! their real part is harmonic and its minimum over the closed disk sits on
//! the circle. Only the circle is searched; [`interior_spot_check`] samples
//! the open disk as an empirical guard on that reduction.
//!
//! Each grid cell `[a, a+h]` gets two valid lower bounds and keeps the larger:
//!
//! * Lipschitz: `(T(a) + T(a+h))/2 − L₁h/2` with `L₁ = Σ m_j |c_j| ≥ |T'|`;
//! * curvature: `min(T(a), T(a+h)) − L₂h²/8` with `L₂ = Σ m_j² |c_j| ≥ |T''|`
//!   (linear interpolation error).
//!
//! Cells that cannot hold a value below the incumbent are retired, the rest
//! are bisected, until incumbent minus bound is within tolerance.

use std::f64::consts::TAU;

use num_complex::Complex64;
use thiserror::Error;

use crate::poly::SparsePolynomial;
use crate::sampling;

/// Refinement rounds after the initial grid.
pub const MAX_ROUNDS: u32 = 40;
/// Active cells allowed before giving up as inconclusive.
pub const MAX_ACTIVE_CELLS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrigError {
    #[error("frequency-0 term must be present with coefficient 1")]
    MissingUnitConstant,
    #[error("term {index}: frequencies must be strictly increasing")]
    NonIncreasingFrequency { index: usize },
    #[error("term {index}: coefficient is not finite")]
    NonFiniteCoefficient { index: usize },
    #[error("tail index {nu} outside [0, {n}]")]
    IndexOutOfRange { nu: usize, n: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}

/// A trigonometric polynomial `Re Σ c_j e^{i m_j x}` with `m_0 = 0`, `c_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigTail {
    terms: Vec<(u32, Complex64)>,
}

impl TrigTail {
    pub fn new(terms: Vec<(u32, Complex64)>) -> Result<Self, TrigError> {
        match terms.first() {
            Some(&(0, c)) if c == Complex64::new(1.0, 0.0) => {}
            _ => return Err(TrigError::MissingUnitConstant),
        }
        for (index, &(m, c)) in terms.iter().enumerate() {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(TrigError::NonFiniteCoefficient { index });
            }
            if index > 0 && terms[index - 1].0 >= m {
                return Err(TrigError::NonIncreasingFrequency { index });
            }
        }
        Ok(TrigTail { terms })
    }

    /// The tail `Σ_{j=0}^{n−ν} (a_{j+ν}/a_ν) t^{k_{j+ν}−k_ν}` of `P`.
    pub fn from_ratio_tail(p: &SparsePolynomial, nu: usize) -> Result<Self, TrigError> {
        let terms = p.terms();
        if terms.is_empty() || nu >= terms.len() {
            return Err(TrigError::IndexOutOfRange {
                nu,
                n: terms.len().saturating_sub(1),
            });
        }
        let base = terms[nu];
        let mut out = Vec::with_capacity(terms.len() - nu);
        out.push((0, Complex64::new(1.0, 0.0)));
        out.extend(
            terms[nu + 1..]
                .iter()
                .map(|t| (t.exponent - base.exponent, t.coeff / base.coeff)),
        );
        Ok(TrigTail { terms: out })
    }

    pub fn terms(&self) -> &[(u32, Complex64)] {
        &self.terms
    }

    pub fn max_frequency(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.0)
    }

    /// `Σ m_j |c_j|`, a bound on `|T'|`.
    pub fn lipschitz(&self) -> f64 {
        self.terms.iter().map(|&(m, c)| m as f64 * c.norm()).sum()
    }

    /// `Σ m_j² |c_j|`, a bound on `|T''|`.
    pub fn curvature_bound(&self) -> f64 {
        self.terms.iter().map(|&(m, c)| (m as f64).powi(2) * c.norm()).sum()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(m, c)| {
                let (s, co) = (m as f64 * x).sin_cos();
                c.re * co - c.im * s
            })
            .sum()
    }

    /// `Σ c_j t^{m_j}`, whose real part is `T` on the circle.
    pub fn eval_analytic(&self, t: Complex64) -> Complex64 {
        self.terms.iter().map(|&(m, c)| c * t.powu(m)).sum()
    }

    /// `c_j ↦ c_j e^{i m_j θ}`, i.e. `x ↦ T(x + θ)`.
    pub fn rotate(&self, theta: f64) -> TrigTail {
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| (m, c * Complex64::from_polar(1.0, m as f64 * theta)))
            .collect();
        TrigTail { terms }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinResult {
    /// The true minimum over the circle is at least this.
    pub lower_bound: f64,
    /// Best sampled point, in `[0, 2π)`.
    pub witness_x: f64,
    pub witness_value: f64,
    /// `witness_value − lower_bound`.
    pub gap: f64,
    pub converged: bool,
    pub rounds: u32,
    pub evaluations: u64,
}

#[derive(Clone, Copy)]
struct Cell {
    a: f64,
    fa: f64,
    fb: f64,
}

fn cell_bound(c: &Cell, h: f64, l1: f64, l2: f64) -> f64 {
    let lipschitz = 0.5 * (c.fa + c.fb) - 0.5 * l1 * h;
    let curvature = c.fa.min(c.fb) - l2 * h * h / 8.0;
    lipschitz.max(curvature)
}

/// Certified lower bound and witness for `min_x T(x)`.
///
/// Starts from `8·(max frequency + 1)` cells, halves the surviving cells each
/// round for at most [`MAX_ROUNDS`] rounds. A run that stops early is
/// returned with `converged = false` and its best bounds.
pub fn certified_min(t: &TrigTail, tol: f64) -> Result<MinResult, TrigError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(TrigError::BadTolerance(tol));
    }
    let top = t.max_frequency();
    if top == 0 {
        let v = t.eval(0.0);
        return Ok(MinResult {
            lower_bound: v,
            witness_x: 0.0,
            witness_value: v,
            gap: 0.0,
            converged: true,
            rounds: 0,
            evaluations: 1,
        });
    }

    let (l1, l2) = (t.lipschitz(), t.curvature_bound());
    let n = 8 * (top as usize + 1);
    let mut h = TAU / n as f64;
    let values: Vec<f64> = (0..n).map(|i| t.eval(i as f64 * h)).collect();
    let mut evaluations = n as u64;

    let (mut best_x, mut best) = (0.0, values[0]);
    for (i, &v) in values.iter().enumerate() {
        if v < best {
            best = v;
            best_x = i as f64 * h;
        }
    }
    let mut cells: Vec<Cell> = (0..n)
        .map(|i| Cell {
            a: i as f64 * h,
            fa: values[i],
            fb: values[(i + 1) % n],
        })
        .collect();
    let mut retired = f64::INFINITY;
    let mut rounds = 0;

    loop {
        let active = cells
            .iter()
            .map(|c| cell_bound(c, h, l1, l2))
            .fold(f64::INFINITY, f64::min);
        let lower = retired.min(active).min(best);
        let done = best - lower <= tol;
        if done || rounds == MAX_ROUNDS || cells.len() > MAX_ACTIVE_CELLS {
            return Ok(MinResult {
                lower_bound: lower,
                witness_x: best_x,
                witness_value: best,
                gap: best - lower,
                converged: done,
                rounds,
                evaluations,
            });
        }

        let cutoff = best - 0.5 * tol;
        let half = 0.5 * h;
        let mut next = Vec::with_capacity(cells.len() * 2);
        for c in &cells {
            let lb = cell_bound(c, h, l1, l2);
            if lb >= cutoff {
                retired = retired.min(lb);
                continue;
            }
            let mid = c.a + half;
            let fm = t.eval(mid);
            evaluations += 1;
            if fm < best {
                best = fm;
                best_x = mid;
            }
            next.push(Cell {
                a: c.a,
                fa: c.fa,
                fb: fm,
            });
            next.push(Cell {
                a: mid,
                fa: fm,
                fb: c.fb,
            });
        }
        cells = next;
        h = half;
        rounds += 1;
    }
}

/// Minimum of `Re Σ (a_{j+ν}/a_ν) t^{k_{j+ν}−k_ν}` over `samples` seeded
/// points of the open unit disk.
pub fn interior_spot_check(p: &SparsePolynomial, nu: usize, samples: usize, seed: u64) -> Result<f64, TrigError> {
    let tail = TrigTail::from_ratio_tail(p, nu)?;
    let mut rng = sampling::rng(seed);
    let mut min = f64::INFINITY;
    for _ in 0..samples.max(1) {
        let mut t = sampling::uniform_disk(&mut rng, 1.0);
        if t.norm() >= 1.0 {
            t *= 0.5;
        }
        min = min.min(tail.eval_analytic(t).re);
    }
    Ok(min)
}
