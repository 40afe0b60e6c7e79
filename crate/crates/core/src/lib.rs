//! Certification and sampling verification of pointwise Bernstein-type
//! inequalities `|zP'(z)| ≤ k_n |P(z)|` on the closed unit disk.
//!
//! * [`poly`]: sparse polynomials, tails, logarithmic derivative, divided differences.
//! * [`trig_min`]: certified minimum of a trigonometric polynomial on the circle.
//! * [`certifier`]: the coefficient condition, the convexity shortcut, the Fejér family.
//! * [`roots`]: Aberth–Ehrlich zeros, contour counting, the Govil chain.
//! * [`verifier`]: seeded checks of every inequality.
//! * [`cli`]: the `bernstein` command.

pub mod certifier;
pub mod cli;
pub mod io;
pub mod poly;
pub mod roots;
pub mod sampling;
pub mod trig_min;
pub mod verifier;

pub use num_complex::Complex64;

pub use certifier::{build_fejer_family, check_condition, check_convexity_corollary, Certificate, Verdict};
pub use poly::{RootSet, SparsePolynomial, Term};
pub use roots::{count_roots_in_disk, find_roots, RootFindReport};
pub use trig_min::{certified_min, MinResult, TrigTail};
pub use verifier::VerificationReport;
