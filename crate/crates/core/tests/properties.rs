use std::f64::consts::TAU;

use bernstein_core::certifier::{check_condition, check_convexity_corollary, Verdict};
use bernstein_core::poly::{abel_expansion, divided_difference, SparsePolynomial, Term};
use bernstein_core::roots::{find_roots, DEFAULT_ROOT_TOL};
use bernstein_core::verifier::{verify_pointwise_bernstein, verify_tail_chain};
use num_complex::Complex64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Complex64> {
    (0.1f64..2.0, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn sparse_poly(max_exp: u32, max_terms: usize) -> impl Strategy<Value = SparsePolynomial> {
    proptest::collection::btree_map(0..=max_exp, coeff(), 1..=max_terms)
        .prop_map(|m| SparsePolynomial::new(m.into_iter().map(|(k, a)| Term::new(k, a)).collect()).unwrap())
}

/// Dense polynomials whose leading terms shrink fast enough to often certify.
fn decaying_poly() -> impl Strategy<Value = SparsePolynomial> {
    (
        1usize..8,
        proptest::collection::vec((0.0f64..1.0, 0.0..TAU), 8),
        0.0f64..0.6,
    )
        .prop_map(|(n, raw, rate)| {
            let mut dense = vec![Complex64::new(1.0, 0.0)];
            let mut size = 1.0;
            for &(r, t) in raw.iter().take(n) {
                size *= rate;
                dense.push(Complex64::from_polar(size * (0.2 + 0.8 * r), t));
            }
            SparsePolynomial::from_dense(&dense)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tail_of_tail(p in sparse_poly(20, 8), j in 0u32..=20, k in 0u32..=20) {
        let n = p.degree();
        let (j, k) = (j.min(n), k.min(n));
        prop_assert_eq!(p.tail(j).unwrap().tail(k).unwrap(), p.tail(j.max(k)).unwrap());
    }

    #[test]
    fn divided_difference_forms_agree(
        dense in proptest::collection::vec(coeff(), 2..13),
        (rz, tz, rw, tw) in (0.1f64..2.0, 0.0..TAU, 0.1f64..2.0, 0.0..TAU),
    ) {
        let p = SparsePolynomial::from_dense(&dense);
        let z = Complex64::from_polar(rz, tz);
        let w = Complex64::from_polar(rw, tw);
        let a = divided_difference(&p, z, w).unwrap();
        let b = abel_expansion(&p, z, w).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm().max(b.norm())), "{a} vs {b}");
    }

    #[test]
    fn scaling_leaves_certificate_unchanged(p in sparse_poly(12, 5), m in 0u32..4, k in -3i32..4) {
        // powers of two times units of the Gaussian integers scale exactly
        let c = Complex64::i().powu(m) * 2f64.powi(k);
        let a = check_condition(&p, 1e-9).unwrap();
        let b = check_condition(&p.scale(c).unwrap(), 1e-9).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn general_scaling_keeps_verdict(p in sparse_poly(10, 4), c in coeff()) {
        let a = check_condition(&p, 1e-9).unwrap();
        let b = check_condition(&p.scale(c).unwrap(), 1e-9).unwrap();
        prop_assert!((a.margin - b.margin).abs() <= 1e-9);
        if a.margin.abs() > 1e-6 {
            prop_assert_eq!(a.verdict, b.verdict);
        }
    }

    #[test]
    fn rotation_keeps_lower_bounds(p in sparse_poly(10, 4), theta in 0.0..TAU) {
        let a = check_condition(&p, 1e-13).unwrap();
        let b = check_condition(&p.rotate(theta), 1e-13).unwrap();
        for (x, y) in a.per_nu.iter().zip(&b.per_nu) {
            prop_assert!((x.min.lower_bound - y.min.lower_bound).abs() <= 1e-12,
                "nu {}: {} vs {}", x.nu, x.min.lower_bound, y.min.lower_bound);
        }
    }

    #[test]
    fn corollary_implies_not_rejected(steps in proptest::collection::vec(0u32..40, 1..10), last in 1u32..80) {
        // build from non-negative end-modified second differences
        let n = steps.len();
        let mut a = vec![0.0; n + 1];
        a[n] = last as f64;
        a[n - 1] = 2.0 * a[n] + steps[n - 1] as f64;
        for nu in (0..n - 1).rev() {
            a[nu] = 2.0 * a[nu + 1] - a[nu + 2] + steps[nu] as f64;
        }
        let p = SparsePolynomial::from_real_dense(&a);
        prop_assert!(check_convexity_corollary(&p).unwrap().passes);
        prop_assert_ne!(check_condition(&p, 1e-9).unwrap().verdict, Verdict::Rejected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn soundness_chain(p in decaying_poly()) {
        let cert = check_condition(&p, 1e-9).unwrap();
        if cert.verdict.holds() {
            let r = verify_pointwise_bernstein(&p, 100_000, 11).unwrap();
            prop_assert!(r.passed && r.violation_count == 0, "{:?}", r.violations.first());
            prop_assert!(verify_tail_chain(&p, 20_000, 12).unwrap().passed);
            if p.degree() > 0 {
                let roots = find_roots(&p, DEFAULT_ROOT_TOL).unwrap();
                for root in roots.roots.roots() {
                    let m = root.z.norm();
                    prop_assert!(m > 1.0 || (p.low_exponent() > 0 && m == 0.0), "zero at {}", root.z);
                }
            }
        }
    }
}
