use bubble_core::bounds::is_well_formed;
use bubble_core::oracle::{oracle_is_bubble, oracle_kp};
use bubble_core::primes::{crt, extend_tuple, family_graded, family_rees, find_lex_smallest, is_prime, kp, verify_family};
use bubble_core::WeightVector;
use proptest::prelude::*;

const SMALL_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29];

fn prime_subset() -> impl Strategy<Value = Vec<u64>> {
    prop::sample::subsequence(SMALL_PRIMES.to_vec(), 2..=4)
}

fn trial_division(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn kp_matches_scan(p in prime_subset()) {
        let t = kp(&p).unwrap();
        let mut sorted = p.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let (k, alpha) = oracle_kp(&sorted, 1 << 24).unwrap();
        prop_assert_eq!(t.k, k);
        prop_assert_eq!(&t.alpha, &alpha);
        prop_assert!(t.ceiling_identity_holds());
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..2_000_000) {
        prop_assert_eq!(is_prime(n), trial_division(n));
    }

    #[test]
    fn crt_solves_the_system(r in prop::collection::vec(0u128..1000, 3)) {
        let moduli = [7u128, 11, 13];
        let residues: Vec<u128> = r.iter().zip(&moduli).map(|(a, m)| a % m).collect();
        let (x, m) = crt(&residues, &moduli).unwrap();
        prop_assert_eq!(m, 1001);
        for (res, md) in residues.iter().zip(&moduli) {
            prop_assert_eq!(x % md, *res);
        }
    }

    #[test]
    fn extension_keeps_tail_residues(tail in prop::sample::subsequence(vec![3u64, 5, 7, 11, 13], 1..=3),
                                     seeds in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let u: Vec<u64> = tail.iter().zip(&seeds).map(|(&p, s)| 1 + s.index(p as usize - 1) as u64).collect();
        let t = extend_tuple(&tail, &u, 1_000_000).unwrap();
        prop_assert_eq!(t.p.len(), tail.len() + 1);
        for (&p, &ui) in tail.iter().zip(&u) {
            let pos = t.p.iter().position(|&x| x == p).unwrap();
            prop_assert_eq!(t.alpha[pos], ui);
        }
    }
}

#[test]
fn large_primes() {
    assert!(is_prime(1_000_000_007));
    assert!(is_prime(18_446_744_073_709_551_557));
    assert!(!is_prime(3_215_031_751));
    assert!(!is_prime(18_446_744_073_709_551_615));
}

#[test]
fn lex_smallest_tuples_define_families() {
    for m in 3..=5 {
        let graded = find_lex_smallest(m, 1, 200).unwrap();
        let f = family_graded(&graded, m + 1).unwrap();
        assert!(oracle_is_bubble(&f.w, &f.u));
        assert_eq!(f.dot, f.k as u128 * f.d);
        assert!(is_well_formed(&WeightVector::new(&f.w).unwrap()));
        assert!(verify_family(&f, None).unwrap().passes());

        let rees = find_lex_smallest(m, m as u64 - 1, 200).unwrap();
        let f = family_rees(&rees, m + 1).unwrap();
        assert_eq!(f.dot, f.k as u128 * f.d + 1);
        assert!(verify_family(&f, None).unwrap().passes());
    }
}

#[test]
fn family_preconditions() {
    let t = kp(&[3, 2]).unwrap();
    assert!(family_graded(&t, 4).is_err());
    assert!(family_rees(&t, 4).is_err());
    assert!(kp(&[4, 3]).is_err());
    assert!(kp(&[3, 3]).is_err());
}
