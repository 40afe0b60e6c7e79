//! Sparse complex polynomials `P(z) = Σ a_ν z^{k_ν}` and the pointwise
//! quantities built from them: tails, logarithmic derivative, and the
//! divided difference with its Abel (summation-by-parts) expansion.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// `|P(z)|` below this is treated as a zero of `P`.
pub const ZERO_GUARD: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("term {index}: exponents must be strictly increasing")]
    NonIncreasingExponent { index: usize },
    #[error("term {index}: coefficient is zero")]
    ZeroCoefficient { index: usize },
    #[error("term {index}: coefficient is not finite")]
    NonFiniteCoefficient { index: usize },
    #[error("tail index {k} outside [0, {degree}]")]
    TailOutOfRange { k: u32, degree: u32 },
    #[error("polynomial vanishes at z = {z}")]
    ZeroValue { z: Complex64 },
    #[error("z = {z} coincides with a root")]
    Pole { z: Complex64 },
    #[error("undefined at z = 0")]
    ZeroArgument,
    #[error("degree must be at least 1")]
    DegreeTooSmall,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub exponent: u32,
    pub coeff: Complex64,
}

impl Term {
    pub fn new(exponent: u32, coeff: Complex64) -> Self {
        Term { exponent, coeff }
    }
}

/// A polynomial stored as its nonzero terms, exponents strictly increasing.
///
/// The empty term list is the zero polynomial; it only arises from
/// differentiating a constant.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparsePolynomial {
    terms: Vec<Term>,
}

impl SparsePolynomial {
    pub fn new(terms: Vec<Term>) -> Result<Self, PolyError> {
        for (index, t) in terms.iter().enumerate() {
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(PolyError::NonFiniteCoefficient { index });
            }
            if t.coeff.norm_sqr() == 0.0 {
                return Err(PolyError::ZeroCoefficient { index });
            }
            if index > 0 && terms[index - 1].exponent >= t.exponent {
                return Err(PolyError::NonIncreasingExponent { index });
            }
        }
        Ok(SparsePolynomial { terms })
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (u32, Complex64)>,
    {
        Self::new(pairs.into_iter().map(|(k, a)| Term::new(k, a)).collect())
    }

    /// Builds from dense coefficients `[c_0, c_1, ...]`, dropping zeros.
    pub fn from_dense(coeffs: &[Complex64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(|(k, &c)| Term::new(k as u32, c))
            .collect();
        SparsePolynomial { terms }
    }

    pub fn from_real_dense(coeffs: &[f64]) -> Self {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_dense(&c)
    }

    pub fn monomial(coeff: Complex64, exponent: u32) -> Result<Self, PolyError> {
        Self::new(vec![Term::new(exponent, coeff)])
    }

    /// Monic `Π (z − r)` over the given roots (repeat a root for multiplicity).
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut dense = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); dense.len() + 1];
            for (j, &c) in dense.iter().enumerate() {
                next[j + 1] += c;
                next[j] -= c * r;
            }
            dense = next;
        }
        Self::from_dense(&dense)
    }

    pub fn zero() -> Self {
        SparsePolynomial::default()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `k_n`, the largest exponent (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.exponent)
    }

    /// `n + 1`, the number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `k_0`, the smallest exponent (0 for the zero polynomial).
    pub fn low_exponent(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.exponent)
    }

    pub fn leading_coeff(&self) -> Option<Complex64> {
        self.terms.last().map(|t| t.coeff)
    }

    /// `c_j`: the coefficient of `z^j`, zero when `j` is not a stored exponent.
    pub fn coeff_at(&self, j: u32) -> Complex64 {
        match self.terms.binary_search_by_key(&j, |t| t.exponent) {
            Ok(i) => self.terms[i].coeff,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// True when every exponent `0..=k_n` is present.
    pub fn is_dense(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, t)| t.exponent as usize == i)
    }

    /// Coefficients `c_0..=c_{k_n}` of the dense embedding.
    pub fn to_dense(&self) -> Vec<Complex64> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut dense = vec![Complex64::new(0.0, 0.0); self.degree() as usize + 1];
        for t in &self.terms {
            dense[t.exponent as usize] = t.coeff;
        }
        dense
    }

    /// `Σ |a_ν|`.
    pub fn coeff_mass(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.im == 0.0)
    }

    /// Horner over exponent gaps, each gap bridged by repeated squaring.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut rev = self.terms.iter().rev();
        let Some(top) = rev.next() else {
            return Complex64::new(0.0, 0.0);
        };
        let mut acc = top.coeff;
        let mut prev = top.exponent;
        for t in rev {
            acc = acc * z.powu(prev - t.exponent) + t.coeff;
            prev = t.exponent;
        }
        acc * z.powu(prev)
    }

    pub fn derivative(&self) -> SparsePolynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponent > 0)
            .map(|t| Term::new(t.exponent - 1, t.coeff * t.exponent as f64))
            .collect();
        SparsePolynomial { terms }
    }

    /// `ρ_k(P)`: the terms with exponent `≥ k`.
    pub fn tail(&self, k: u32) -> Result<SparsePolynomial, PolyError> {
        let degree = self.degree();
        if k > degree {
            return Err(PolyError::TailOutOfRange { k, degree });
        }
        let start = self.terms.partition_point(|t| t.exponent < k);
        Ok(SparsePolynomial {
            terms: self.terms[start..].to_vec(),
        })
    }

    /// `zP'(z) / P(z)`.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64, PolyError> {
        let p = self.eval(z);
        if p.norm() < ZERO_GUARD {
            return Err(PolyError::ZeroValue { z });
        }
        Ok(z * self.derivative().eval(z) / p)
    }

    /// `ρ_{k+1}(P)(z) = P(z) − Σ_{j≤k} c_j z^j` for `k = 0..k_n`, over the
    /// dense index range. Computed as suffix sums.
    pub fn tail_values(&self, z: Complex64) -> Vec<Complex64> {
        let n = self.degree() as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut acc = Complex64::new(0.0, 0.0);
        let mut idx = self.terms.len();
        for k in (0..n).rev() {
            // fold in exponent k + 1
            while idx > 0 && self.terms[idx - 1].exponent as usize > k {
                idx -= 1;
                let t = self.terms[idx];
                acc += t.coeff * z.powu(t.exponent);
            }
            out[k] = acc;
        }
        out
    }

    /// `P(e^{iθ} z)`.
    pub fn rotate(&self, theta: f64) -> SparsePolynomial {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Term::new(
                    t.exponent,
                    t.coeff * Complex64::from_polar(1.0, theta * t.exponent as f64),
                )
            })
            .collect();
        SparsePolynomial { terms }
    }

    /// `c · P`; `c` must be nonzero.
    pub fn scale(&self, c: Complex64) -> Result<SparsePolynomial, PolyError> {
        Self::new(self.terms.iter().map(|t| Term::new(t.exponent, t.coeff * c)).collect())
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.coeff)?;
            match t.exponent {
                0 => {}
                1 => write!(f, "z")?,
                k => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub z: Complex64,
    pub multiplicity: u32,
}

/// Distinct zeros with multiplicities, sorted by nondecreasing modulus.
/// Order among equal moduli is unspecified.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RootSet {
    roots: Vec<Root>,
}

impl RootSet {
    pub fn new(mut roots: Vec<Root>) -> Self {
        roots.sort_by(|a, b| a.z.norm().total_cmp(&b.z.norm()));
        RootSet { roots }
    }

    /// Simple roots, one entry per location.
    pub fn simple(zs: &[Complex64]) -> Self {
        Self::new(zs.iter().map(|&z| Root { z, multiplicity: 1 }).collect())
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Largest root modulus, `|z_m|`.
    pub fn max_modulus(&self) -> Option<f64> {
        self.roots.last().map(|r| r.z.norm())
    }

    pub fn min_modulus(&self) -> Option<f64> {
        self.roots.first().map(|r| r.z.norm())
    }

    /// Number of zeros (with multiplicity) of modulus strictly below `radius`.
    pub fn count_inside(&self, radius: f64) -> u32 {
        self.roots
            .iter()
            .filter(|r| r.z.norm() < radius)
            .map(|r| r.multiplicity)
            .sum()
    }
}

/// `n/2 + ½ Σ r_k (|z|² − |z_k|²) / |z − z_k|²`, the real part of `zP'/P`
/// written through the zeros.
pub fn partial_fraction_real(roots: &RootSet, n: u32, z: Complex64) -> Result<f64, PolyError> {
    let z2 = z.norm_sqr();
    let mut sum = 0.0;
    for r in roots.roots() {
        let d = (z - r.z).norm_sqr();
        if d.sqrt() < ZERO_GUARD {
            return Err(PolyError::Pole { z });
        }
        sum += r.multiplicity as f64 * (z2 - r.z.norm_sqr()) / d;
    }
    Ok(0.5 * n as f64 + 0.5 * sum)
}

/// `z (P(z) − P(w)) / (z − w)`, continued by `z P'(z)` at `w = z`.
pub fn divided_difference(p: &SparsePolynomial, z: Complex64, w: Complex64) -> Result<Complex64, PolyError> {
    if z.norm_sqr() == 0.0 {
        return Err(PolyError::ZeroArgument);
    }
    if z == w {
        return Ok(z * p.derivative().eval(z));
    }
    Ok(z * (p.eval(z) - p.eval(w)) / (z - w))
}

/// `Σ_{k=0}^{k_n−1} ρ_{k+1}(P)(z) (w/z)^k`, equal to [`divided_difference`].
pub fn abel_expansion(p: &SparsePolynomial, z: Complex64, w: Complex64) -> Result<Complex64, PolyError> {
    if z.norm_sqr() == 0.0 {
        return Err(PolyError::ZeroArgument);
    }
    let ratio = w / z;
    let tails = p.tail_values(z);
    // Horner in the ratio, highest k first
    Ok(tails
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &t| acc * ratio + t))
}

/// The constant `A(z, w)`: `(|z|^n − |w|^n) / (|z|^{n−1} (|z| − |w|))` off the
/// diagonal `|z| = |w|`, and `n` on it.
///
/// Evaluated as the geometric sum `Σ_{k<n} (|w|/|z|)^k`, which equals both
/// branches and does not cancel near `|z| = |w|`.
pub fn lemma2_factor(z: Complex64, w: Complex64, n: u32) -> Result<f64, PolyError> {
    if z.norm_sqr() == 0.0 {
        return Err(PolyError::ZeroArgument);
    }
    if n == 0 {
        return Err(PolyError::DegreeTooSmall);
    }
    let (rz, rw) = (z.norm(), w.norm());
    if rz == rw {
        return Ok(n as f64);
    }
    let q = rw / rz;
    let mut sum = 0.0;
    let mut pow = 1.0;
    for _ in 0..n {
        sum += pow;
        pow *= q;
    }
    Ok(sum)
}

/// The divided-difference bound `|z(P(z)−P(w))/(z−w)| ≤ A(z,w) · max_k |ρ_{k+1}(P)(z)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividedDifferenceBound {
    pub lhs: f64,
    pub factor: f64,
    pub tail_max: f64,
}

impl DividedDifferenceBound {
    pub fn rhs(&self) -> f64 {
        self.factor * self.tail_max
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.lhs <= self.rhs() + tol
    }

    pub fn ratio(&self) -> f64 {
        if self.rhs() > 0.0 {
            self.lhs / self.rhs()
        } else {
            0.0
        }
    }
}
