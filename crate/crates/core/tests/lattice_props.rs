use ntbench::heights::{canonical_height, ECPoint, EllipticCurveQ};
use ntbench::lattice::{combine, lattice_from_curve, LatticeVector, MWLattice};
use proptest::prelude::*;

/// Gram `AᵀA + I/2` for an integer matrix `A`.
fn gram(rank: usize, a: &[i64]) -> MWLattice {
    let mut g = vec![0.0; rank * rank];
    for i in 0..rank {
        for j in 0..rank {
            let s: i64 = (0..rank).map(|k| a[k * rank + i] * a[k * rank + j]).sum();
            g[i * rank + j] = s as f64 + if i == j { 0.5 } else { 0.0 };
        }
    }
    MWLattice::synthetic(rank, g).unwrap()
}

fn lattice_strategy() -> impl Strategy<Value = MWLattice> {
    (1usize..=4).prop_flat_map(|r| proptest::collection::vec(-3i64..=3, r * r).prop_map(move |a| gram(r, &a)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cauchy_schwarz(lat in lattice_strategy(), seed in proptest::collection::vec(-20i64..=20, 8)) {
        let r = lat.rank();
        let v = LatticeVector(seed[..r].to_vec());
        let w = LatticeVector(seed[4..4 + r].to_vec());
        let p = lat.pairing(&v, &w).unwrap();
        prop_assert!(p * p <= lat.height(&v).unwrap() * lat.height(&w).unwrap() + 1e-9);
    }

    #[test]
    fn ball_is_symmetric_and_exact(lat in lattice_strategy(), radius in 0.0f64..4.0) {
        let pts = lat.enumerate_ball(radius).unwrap();
        prop_assert!(pts.contains(&LatticeVector::zero(lat.rank())));
        for p in &pts {
            prop_assert!(pts.contains(&p.neg()));
            prop_assert!(lat.height(p).unwrap() <= radius * radius * (1.0 + 1e-12) + 1e-12);
        }
        // every vector of a small box inside the ball is listed
        let r = lat.rank();
        let total = 5usize.pow(r as u32);
        for code in 0..total {
            let mut c = code;
            let v: Vec<i64> = (0..r).map(|_| { let x = (c % 5) as i64 - 2; c /= 5; x }).collect();
            let v = LatticeVector(v);
            if lat.height(&v).unwrap() <= radius * radius * (1.0 - 1e-9) {
                prop_assert!(pts.contains(&v));
            }
        }
    }
}

#[test]
fn curve_lattice_matches_heights_of_combinations() {
    let tol = 1e-10;
    let e = EllipticCurveQ::from_ints(0, 17).unwrap();
    let gens = vec![ECPoint::from_ints(-2, 3), ECPoint::from_ints(-1, 4)];
    let lat = lattice_from_curve(&e, &gens, tol).unwrap();
    assert!(lat.min_eigenvalue() > 0.0);
    for v in lat.enumerate_ball(3.0).unwrap() {
        let p = combine(&e, &gens, &v).unwrap();
        let direct = canonical_height(&e, &p, tol).unwrap();
        let coeff_sum: f64 = v.coords().iter().map(|&c| (c * c) as f64).sum::<f64>() + 1.0;
        let from_gram = lat.height(&v).unwrap();
        assert!(
            (direct.value - from_gram).abs() < 10.0 * tol * coeff_sum * 4.0,
            "{v}: {} vs {from_gram}",
            direct.value
        );
    }
}
