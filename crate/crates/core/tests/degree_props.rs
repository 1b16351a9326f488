use ntbench::degree::*;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).fold(BigInt::zero(), |s, x| s + x))
                .collect()
        })
        .collect()
}

fn transpose(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

/// Product of elementary matrices `I + c·E_ij`, hence unimodular.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<BigInt>> {
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        for k in 0..n {
            let v = &u[j][k] * c;
            u[i][k] += v;
        }
    }
    u
}

fn polarization(steps: &[u8]) -> PolarizationType {
    let mut d = Vec::new();
    let mut cur = BigInt::one();
    for &s in steps {
        cur *= BigInt::from(s);
        d.push(cur.clone());
    }
    PolarizationType::new(d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_degree_is_symmetric(a in 0u64..6, b in 0u64..6, x in 1i64..50, y in 1i64..50) {
        let (x, y) = (BigInt::from(x), BigInt::from(y));
        prop_assert_eq!(product_degree(a, b, &x, &y), product_degree(b, a, &y, &x));
        prop_assert_eq!(
            minkowski_sum_degree_bound(a, b, &x, &y),
            BigInt::from(2u32).pow((a + b) as u32) * product_degree(a, b, &x, &y)
        );
    }

    #[test]
    fn normal_form_recovers_type(
        steps in proptest::collection::vec(1u8..4, 1..4),
        ops in proptest::collection::vec((0usize..8, 0usize..8, -3i64..=3), 0..12),
    ) {
        let kind = polarization(&steps);
        let b = block_form(&kind);
        let n = b.size();
        let u = unimodular(n, &ops);
        let e = mat_mul(&transpose(&u), &mat_mul(b.matrix(), &u));
        let form = AlternatingForm::new(e.clone()).unwrap();
        let red = symplectic_reduction(&form).unwrap();
        prop_assert_eq!(&red.kind, &kind);
        let pf = red.kind.pfaffian();
        prop_assert_eq!(&pf * &pf, form.determinant().abs());
        // congruence witness
        let back = mat_mul(&transpose(&red.basis), &mat_mul(&e, &red.basis));
        prop_assert_eq!(back, block_form(&kind).matrix().to_vec());
        // Smith invariants are each d_i twice
        let mut expect: Vec<BigInt> = kind.divisors().iter().flat_map(|x| [x.clone(), x.clone()]).collect();
        expect.sort();
        let mut got: Vec<BigInt> = smith_invariants(&e).into_iter().map(|x| x.abs()).collect();
        got.sort();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn nogaalon_bound_is_monotone(m in 1u64..5, dim in 0u64..4, dx in 1i64..6, dz in 1i64..6) {
        let (dx, dz) = (BigInt::from(dx), BigInt::from(dz));
        let base = nogaalon_degree_bound(m, dim, &dx, &dz).unwrap();
        prop_assert!(base >= dz);
        prop_assert!(nogaalon_degree_bound(m, dim, &(&dx + 1), &dz).unwrap() >= base);
        prop_assert!(nogaalon_degree_bound(m, dim, &dx, &(&dz + 1)).unwrap() >= base);
        prop_assert!(nogaalon_degree_bound(m + 1, dim, &dx, &dz).unwrap() >= base);
    }
}

#[test]
fn closed_form_and_iterated_bounds_disagree() {
    // the closed form is smaller than what iterating the two-term bound gives
    assert_eq!(generated_subvariety_bound(2, 1, 1, 2).unwrap(), BigInt::from(128));
    assert_eq!(
        generated_subvariety_chain_bound(2, 1, 1, 2).unwrap(),
        BigInt::from(6144)
    );
    for k in 1..=3 {
        let closed = generated_subvariety_bound(3, 1, 2, k).unwrap();
        let chain = generated_subvariety_chain_bound(3, 1, 2, k).unwrap();
        assert!(closed <= chain, "k={k}");
    }
}

#[test]
fn bounds_reject_bad_ranges() {
    assert!(generated_subvariety_bound(2, 1, 1, 0).is_err());
    assert!(generated_subvariety_bound(2, 3, 1, 1).is_err());
    assert!(nogaalon_degree_bound(0, 1, &BigInt::one(), &BigInt::one()).is_err());
}
