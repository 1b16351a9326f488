use ntbench::heights::*;
use proptest::prelude::*;

const TOL: f64 = 1e-10;

struct Sample {
    curve: EllipticCurveQ,
    gens: Vec<ECPoint>,
    torsion: Vec<ECPoint>,
}

fn samples() -> Vec<Sample> {
    let c = |a, b| EllipticCurveQ::from_ints(a, b).unwrap();
    let p = ECPoint::from_ints;
    vec![
        Sample {
            curve: c(0, -2),
            gens: vec![p(3, 5)],
            torsion: vec![],
        },
        Sample {
            curve: c(0, 17),
            gens: vec![p(-2, 3), p(-1, 4)],
            torsion: vec![],
        },
        Sample {
            curve: c(-2, 0),
            gens: vec![p(-1, 1)],
            torsion: vec![p(0, 0)],
        },
        Sample {
            curve: c(-25, 0),
            gens: vec![p(-4, 6)],
            torsion: vec![p(0, 0), p(5, 0), p(-5, 0)],
        },
    ]
}

fn h(e: &EllipticCurveQ, p: &ECPoint) -> f64 {
    canonical_height(e, p, TOL).unwrap().value
}

fn point(s: &Sample, coeffs: &[i64]) -> ECPoint {
    s.curve.combination(&s.gens, &coeffs[..s.gens.len()]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parallelogram_law(k in 0usize..4, a in proptest::collection::vec(-3i64..=3, 2), b in proptest::collection::vec(-3i64..=3, 2)) {
        let s = &samples()[k];
        let (p, q) = (point(s, &a), point(s, &b));
        let e = &s.curve;
        let lhs = h(e, &e.add(&p, &q).unwrap()) + h(e, &e.sub(&p, &q).unwrap());
        let rhs = 2.0 * h(e, &p) + 2.0 * h(e, &q);
        prop_assert!((lhs - rhs).abs() < 8.0 * TOL, "{lhs} vs {rhs}");
    }

    #[test]
    fn quadratic_in_multiples(k in 0usize..4, a in proptest::collection::vec(-2i64..=2, 2), n in 1i64..=6) {
        let s = &samples()[k];
        let p = point(s, &a);
        let e = &s.curve;
        let hn = h(e, &e.mul(&p, n).unwrap());
        let n2 = (n * n) as f64;
        prop_assert!((hn - n2 * h(e, &p)).abs() < n2 * 2.0 * TOL);
    }

    #[test]
    fn torsion_translation(k in 2usize..4, a in -4i64..=4, t in 0usize..3) {
        let s = &samples()[k];
        let tp = &s.torsion[t % s.torsion.len()];
        let p = point(s, &[a, 0]);
        let e = &s.curve;
        prop_assert!((h(e, &e.add(&p, tp).unwrap()) - h(e, &p)).abs() < 4.0 * TOL);
    }

    #[test]
    fn pairing_symmetric_and_additive(a in proptest::collection::vec(-2i64..=2, 2), b in proptest::collection::vec(-2i64..=2, 2), c in proptest::collection::vec(-2i64..=2, 2)) {
        let s = &samples()[1];
        let e = &s.curve;
        let (p, q, r) = (point(s, &a), point(s, &b), point(s, &c));
        let pq = nt_pairing(e, &p, &q, TOL).unwrap();
        prop_assert!((pq - nt_pairing(e, &q, &p, TOL).unwrap()).abs() < 4.0 * TOL);
        let lhs = nt_pairing(e, &e.add(&p, &q).unwrap(), &r, TOL).unwrap();
        let rhs = nt_pairing(e, &p, &r, TOL).unwrap() + nt_pairing(e, &q, &r, TOL).unwrap();
        prop_assert!((lhs - rhs).abs() < 16.0 * TOL);
    }
}

#[test]
fn torsion_points_have_zero_height() {
    for s in samples() {
        for t in &s.torsion {
            assert!(h(&s.curve, t) < 1e-8);
            assert!(is_torsion(&s.curve, t).unwrap());
        }
        for g in &s.gens {
            assert!(!is_torsion(&s.curve, g).unwrap());
        }
    }
    let e = EllipticCurveQ::from_ints(0, 1).unwrap();
    let t = ECPoint::from_ints(2, 3);
    assert_eq!(torsion_order(&e, &t, 16).unwrap(), Some(6));
    assert_eq!(h(&e, &t), 0.0);
}

#[test]
fn naive_minus_canonical_is_bounded() {
    for s in samples() {
        let pts: Vec<ECPoint> = (1..=8).map(|n| s.curve.mul(&s.gens[0], n).unwrap()).collect();
        let c = estimate_c_nt(&s.curve, &pts, TOL).unwrap();
        assert!(c.is_finite() && c >= 0.0);
        for p in &pts {
            assert!((naive_height(p).value - h(&s.curve, p)).abs() <= c + 1e-12);
        }
    }
}
