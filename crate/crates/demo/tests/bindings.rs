use bernstein_demo::{certify, fejer_polynomial, ratio_field, roots, tail_curve};

#[test]
fn fejer_round_trip_through_bindings() {
    let p = fejer_polynomial(3).unwrap();
    assert_eq!(p, r#"{"terms":[[0,4,0],[1,3,0],[2,2,0],[3,1,0]]}"#);
    let cert: serde_json::Value = serde_json::from_str(&certify(&p, 1e-9).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "CertifiedTight");
    assert!(fejer_polynomial(1).is_err());
}

#[test]
fn tail_curve_layout() {
    let p = fejer_polynomial(4).unwrap();
    let curve = tail_curve(&p, 0, 64, 1e-9).unwrap();
    assert_eq!(curve.len(), 67);
    let lower = curve[64];
    assert!((lower - 0.5).abs() < 1e-9);
    assert!(curve[..64].iter().all(|&v| v >= lower));
    assert!(tail_curve(&p, 9, 64, 1e-9).is_err());
}

#[test]
fn ratio_field_and_roots() {
    let p = fejer_polynomial(5).unwrap();
    let field = ratio_field(&p, 41, 1.0).unwrap();
    assert_eq!(field.len(), 41 * 41);
    // inside the unit disk the ratio never exceeds 1
    for i in 0..41 {
        for j in 0..41 {
            let (x, y) = (-1.0 + j as f64 * 0.05, 1.0 - i as f64 * 0.05);
            if x * x + y * y <= 1.0 {
                assert!(field[i * 41 + j] <= 1.0 + 1e-10);
            }
        }
    }
    let zs = roots(&p).unwrap();
    assert_eq!(zs.len(), 15);
    assert!(zs.chunks(3).all(|r| (r[0] * r[0] + r[1] * r[1]).sqrt() > 1.0));
    assert!(roots("{\"terms\": [[0, 0, 0]]}").is_err());
}
