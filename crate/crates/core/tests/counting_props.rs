use ntbench::counting::*;
use ntbench::lattice::MWLattice;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use proptest::prelude::*;

/// `(1 + 1/c)^m >= c` for `c = p/q`, in exact rationals.
fn growth_reaches(p: i64, q: i64, m: u64) -> bool {
    let c = BigRational::new(BigInt::from(p), BigInt::from(q));
    let base = BigRational::one() + c.recip();
    Pow::pow(base, m as u32) >= c
}

fn final_inputs(rank: u64, xs: [f64; 5]) -> FinalInputs {
    let n = |x: f64| Num::from_f64(x).unwrap();
    FinalInputs {
        rank,
        c0: n(xs[0]),
        c7: n(xs[1]),
        c8: n(xs[2]),
        c9: n(xs[3]),
        c10: n(xs[4]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn merged_gap_constant_implies_claim(
        c1p in 0.01f64..10.0,
        c3p in 0.0f64..10.0,
        c3pp in 0.01f64..10.0,
        h_fal in 0.0f64..20.0,
        hhat in 0.0f64..200.0,
    ) {
        prop_assume!(c3p > 0.0);
        prop_assert!(merge_gap_claim_check(c1p, c3p, c3pp, h_fal, hhat).unwrap());
    }

    #[test]
    fn gap_exponent_is_minimal(p in 2i64..4000, k in 0u32..8) {
        // q a power of two keeps p/q exact in f64
        let q = 1i64 << k;
        prop_assume!(p > q);
        let m = gap_exponent(p as f64 / q as f64).unwrap();
        prop_assert!(growth_reaches(p, q, m));
        prop_assert!(m == 0 || !growth_reaches(p, q, m - 1));
    }

    #[test]
    fn final_bound_is_monotone(
        rank in 0u64..4,
        xs in proptest::array::uniform5(0.01f64..20.0),
        which in 0usize..5,
        bump in 0.0f64..10.0,
    ) {
        let base = final_count(&final_inputs(rank, xs)).unwrap();
        let mut ys = xs;
        ys[which] += bump;
        let more = final_count(&final_inputs(rank, ys)).unwrap();
        prop_assert!(more.bound.to_f64() >= base.bound.to_f64() * (1.0 - 1e-12));
        prop_assert!(base.case_i_bound.to_f64() <= base.bound.to_f64() * (1.0 + 1e-12));
        prop_assert!(base.case_ii_bound.to_f64() <= base.bound.to_f64() * (1.0 + 1e-12));
    }

    #[test]
    fn gap_sequences_pass_their_audit(
        c4 in prop_oneof![Just(1.5f64), Just(2.0), Just(3.0), Just(4.0)],
        n_prime in 1u64..4,
        length in 2usize..14,
    ) {
        let lat = MWLattice::identity(2);
        let cfg = GapSequenceConfig { c4, n_prime, length, ..Default::default() };
        let seq = gap_sequence(&lat, &cfg).unwrap();
        // independent check on the multipliers
        let np = n_prime as usize;
        for j in 0..length.saturating_sub(np) {
            let (a, b) = (seq.multipliers[j] as f64, seq.multipliers[j + np] as f64);
            prop_assert!(b > (1.0 + 1.0 / c4) * a);
        }
        let idx: Vec<usize> = (0..length).collect();
        let audit = gap_sequence_audit(&seq.set, &idx, c4, n_prime, 1).unwrap();
        prop_assert!(audit.violations.is_empty());
    }

    #[test]
    fn planted_violation_is_found(c4 in prop_oneof![Just(2.0f64), Just(4.0)], n_prime in 1u64..3, at in 0usize..4) {
        let lat = MWLattice::identity(1);
        let length = at + n_prime as usize + 3;
        let cfg = GapSequenceConfig { c4, n_prime, length, violate_at: Some(at), ..Default::default() };
        let seq = gap_sequence(&lat, &cfg).unwrap();
        let idx: Vec<usize> = (0..length).collect();
        let audit = gap_sequence_audit(&seq.set, &idx, c4, n_prime, 1).unwrap();
        prop_assert!(audit.violations.contains(&at));
    }
}

#[test]
fn ledger_certificate_matches_direct_final_count() {
    for (rank, c0) in [(0, 10.0), (1, 1000.0), (2, 50.0), (3, 7.5)] {
        let inp = LedgerInputs {
            rank,
            c0,
            c8: 0.5,
            c9: 2.0,
            c10: 3.0,
            ..Default::default()
        };
        let ledger = build_ledger(&inp).unwrap();
        let from_ledger = final_count_certificate(&ledger).unwrap();
        let direct = final_count(&FinalInputs {
            rank,
            c0: ledger.num("c0").unwrap(),
            c7: ledger.num("c7").unwrap(),
            c8: ledger.num("c8").unwrap(),
            c9: ledger.num("c9").unwrap(),
            c10: ledger.num("c10").unwrap(),
        })
        .unwrap();
        assert_eq!(from_ledger, direct);
    }
}

#[test]
fn ledger_is_deterministic() {
    let inp = LedgerInputs {
        rank: 3,
        c4: 7.25,
        ..Default::default()
    };
    let a = serde_json::to_string(&build_ledger(&inp).unwrap()).unwrap();
    let b = serde_json::to_string(&build_ledger(&inp).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn pipeline_count_grows_with_the_set() {
    let lat = MWLattice::identity(2);
    let inp = LedgerInputs {
        rank: 2,
        ..Default::default()
    };
    let opts = PipelineOptions::default();
    let full = random_point_set(&lat, 40, 6, 3).unwrap();
    let part = HeightedPointSet::new(lat.clone(), full.points()[..20].to_vec(), IsolationOracle::AlwaysTrue).unwrap();
    let a = pipeline_report(&part, &inp, &opts).unwrap();
    let b = pipeline_report(&full, &inp, &opts).unwrap();
    assert_eq!(a.empirical_count, 20);
    assert_eq!(b.empirical_count, 40);
    assert!(a.certified_bound.to_f64() <= b.certified_bound.to_f64());
    let again = pipeline_report(&full, &inp, &opts).unwrap();
    assert_eq!(
        serde_json::to_string(&b).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
}
