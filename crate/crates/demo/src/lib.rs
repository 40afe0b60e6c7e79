//! wasm-bindgen surface for the static page in `www/`.
//!
//! Polynomials cross the boundary in the same `{"terms": [[k, re, im], ...]}`
//! text the CLI reads. Errors come back as strings.

use bernstein_core::certifier::{build_fejer_family, check_condition};
use bernstein_core::io::{parse_polynomial, write_polynomial};
use bernstein_core::roots::{find_roots, DEFAULT_ROOT_TOL};
use bernstein_core::trig_min::{certified_min, TrigTail};
use bernstein_core::verifier::pointwise_bernstein_sides;
use bernstein_core::{Complex64, SparsePolynomial};
use wasm_bindgen::prelude::*;

fn load(poly: &str) -> Result<SparsePolynomial, String> {
    parse_polynomial(poly).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn fejer_polynomial(n: u32) -> Result<String, String> {
    build_fejer_family(n)
        .map(|p| write_polynomial(&p))
        .map_err(|e| e.to_string())
}

/// Certificate JSON for the tail condition.
#[wasm_bindgen]
pub fn certify(poly: &str, tol: f64) -> Result<String, String> {
    let p = load(poly)?;
    let cert = check_condition(&p, tol).map_err(|e| e.to_string())?;
    serde_json::to_string(&cert.to_json()).map_err(|e| e.to_string())
}

/// Samples of the `ν`-th tail `T_ν(x)` at `points` equally spaced `x` in
/// `[0, 2π)`, followed by the certified lower bound, witness `x` and witness
/// value (so the array has `points + 3` entries).
#[wasm_bindgen]
pub fn tail_curve(poly: &str, nu: usize, points: usize, tol: f64) -> Result<Vec<f64>, String> {
    let p = load(poly)?;
    let tail = TrigTail::from_ratio_tail(&p, nu).map_err(|e| e.to_string())?;
    let points = points.max(2);
    let mut out: Vec<f64> = (0..points)
        .map(|i| tail.eval(std::f64::consts::TAU * i as f64 / points as f64))
        .collect();
    let m = certified_min(&tail, tol).map_err(|e| e.to_string())?;
    out.extend([m.lower_bound, m.witness_x, m.witness_value]);
    Ok(out)
}

/// Row-major `|zP'(z)| / (k_n|P(z)|)` over a `resolution²` grid on
/// `[-extent, extent]²`, top row first; `NaN` where the ratio is undefined.
#[wasm_bindgen]
pub fn ratio_field(poly: &str, resolution: usize, extent: f64) -> Result<Vec<f64>, String> {
    let p = load(poly)?;
    let dp = p.derivative();
    let n = resolution.max(2);
    let step = 2.0 * extent / (n - 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let y = extent - i as f64 * step;
        for j in 0..n {
            let z = Complex64::new(-extent + j as f64 * step, y);
            let (lhs, rhs) = pointwise_bernstein_sides(&p, &dp, z);
            out.push(if rhs > 0.0 { lhs / rhs } else { f64::NAN });
        }
    }
    Ok(out)
}

/// Interleaved `[re, im, multiplicity, ...]` of all zeros.
#[wasm_bindgen]
pub fn roots(poly: &str) -> Result<Vec<f64>, String> {
    let p = load(poly)?;
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let report = find_roots(&p, DEFAULT_ROOT_TOL).map_err(|e| e.to_string())?;
    Ok(report
        .roots
        .roots()
        .iter()
        .flat_map(|r| [r.z.re, r.z.im, r.multiplicity as f64])
        .collect())
}
