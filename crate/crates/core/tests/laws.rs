use digitsum::dist::{dtv_to_binomial, heppner_sides, pmf_from_pgf};
use digitsum::*;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

#[test]
fn heppner_tail_inequality() {
    for n in 1..=10_000u64 {
        let n = BigUint::from(n);
        let lambda = n.bits() - 1;
        for c in 0..=lambda + 1 {
            let (lhs, rhs) = heppner_sides(&n, c).unwrap();
            assert!(lhs <= rhs, "n={n} c={c}");
        }
    }
}

fn wide() -> impl Strategy<Value = BigUint> {
    (1u32..120, any::<u128>()).prop_map(|(bits, v)| {
        let mask = if bits >= 128 { u128::MAX } else { (1u128 << bits) - 1 };
        BigUint::from((v & mask) | (1u128 << (bits - 1)))
    })
}

proptest! {
    #[test]
    fn mixture_matches_generating_function(n in wide()) {
        let a = pmf_mixture(&n).unwrap();
        let b = pmf_from_pgf(&pgf_closed_form(&n, 2).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn mean_gap_is_the_periodic_function(n in wide()) {
        let lambda = n.bits() as i64 - 1;
        let gap = mean_exact(&n, 2).unwrap() - BigRational::new(lambda.into(), 2.into());
        let f = f_eval(&DyadicPoint::log2_of(n)).unwrap();
        prop_assert_eq!(f.exact(), Some(&gap));
    }

    #[test]
    fn distance_is_a_probability(n in wide()) {
        let d = dtv_to_binomial(&n).unwrap();
        prop_assert!(d >= BigRational::zero() && d < BigRational::one());
        prop_assert_eq!(d.is_zero(), n.count_ones() == 1);
    }
}
