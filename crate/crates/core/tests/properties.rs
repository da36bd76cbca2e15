use proptest::prelude::*;

use vcstring::dimension::{mdim, oracle_vcdim, sauer_bound, swdim, vcdim_word};
use vcstring::generators::{is_sidon, periodic, sidon_encode};
use vcstring::primes::{extract_prime, is_prime};
use vcstring::shiftspace::in_language;
use vcstring::{IndexSet, Word};

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), 0..=max).prop_map(|b| Word::from_bits(&b))
}

fn nonempty(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), 1..=max).prop_map(|b| Word::from_bits(&b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn engine_matches_oracle(w in word(14)) {
        prop_assert_eq!(vcdim_word(&w), oracle_vcdim(&w).unwrap());
    }

    #[test]
    fn sandwich_and_mask_equality(w in word(14)) {
        let v = vcdim_word(&w);
        let (s, _) = swdim(&w);
        prop_assert!(s <= v && v <= s + 1);
        prop_assert_eq!(mdim(&w).0, s);
    }

    #[test]
    fn mdim_ignores_complement_and_reversal(w in word(14)) {
        let m = mdim(&w).0;
        prop_assert_eq!(mdim(&w.complement()).0, m);
        prop_assert_eq!(mdim(&w.reverse()).0, m);
    }

    #[test]
    fn complexity_within_sauer_bound(w in nonempty(14), n in 1usize..=14) {
        prop_assume!(n <= w.len());
        let c = w.complexity(n).unwrap() as u128;
        prop_assert!(1 <= c && c <= 1 << n);
        prop_assert!(c <= sauer_bound(n, vcdim_word(&w)));
    }

    #[test]
    fn substrings_never_exceed(w in nonempty(14), a in 0usize..14, b in 0usize..14) {
        let (a, b) = (a.min(w.len()), b.min(w.len()));
        let sub = w.substring(a.min(b), a.max(b)).unwrap();
        prop_assert!(vcdim_word(&sub) <= vcdim_word(&w));
    }

    #[test]
    fn trailing_zeros_change_nothing(w in word(14), k in 0usize..8) {
        prop_assert_eq!(vcdim_word(&w.pad_zeros(0, k)), vcdim_word(&w));
    }

    #[test]
    fn dilation_changes_nothing(w in word(12), p in 2usize..=3) {
        prop_assert_eq!(vcdim_word(&w.dilate(p).unwrap()), vcdim_word(&w));
    }

    #[test]
    fn padding_adds_at_most_two(w in word(14), l in 1usize..6) {
        let v = vcdim_word(&w);
        prop_assert!(vcdim_word(&w.pad_zeros(l, 0)) <= v + 2);
        prop_assert!(vcdim_word(&w.pad_zeros(0, l)) <= v + 2);
        let ones = Word::ones_word(l);
        prop_assert!(vcdim_word(&ones.concat(&w)) <= v + 2);
        prop_assert!(vcdim_word(&w.concat(&ones)) <= v + 2);
    }

    #[test]
    fn alternations_bound_dimension(w in word(14)) {
        let alt = w.alternations();
        prop_assume!(alt >= 1);
        prop_assert!(vcdim_word(&w) <= 2 * alt);
    }

    #[test]
    fn periodic_words_bounded_by_period(
        base in nonempty(5),
        n in 1usize..40,
    ) {
        let w = periodic(&base, n).unwrap();
        let m = base.len();
        prop_assert!(mdim(&w).0 <= m);
        prop_assert!(vcdim_word(&w) <= m + 1);
    }

    #[test]
    fn one_symbol_moves_dimension_by_at_most_one(w in nonempty(14), b in any::<bool>()) {
        let v = vcdim_word(&w) as i64;
        let trimmed = w.substring(0, w.len() - 1).unwrap();
        let dropped_front = w.substring(1, w.len()).unwrap();
        let one = Word::from_bits(&[b]);
        for other in [trimmed, dropped_front, one.concat(&w), w.concat(&one)] {
            prop_assert!((vcdim_word(&other) as i64 - v).abs() <= 1);
        }
    }

    #[test]
    fn extracted_prime_is_a_prime_substring(w in nonempty(14)) {
        let p = extract_prime(&w).unwrap();
        prop_assert!(w.contains_factor(&p));
        prop_assert!(is_prime(&p, vcdim_word(&w)));
    }

    #[test]
    fn every_word_lies_in_some_language(w in word(8)) {
        prop_assert!(in_language(&w, vcdim_word(&w) + 2).unwrap());
    }
}

proptest! {
    #[test]
    fn word_set_identities(w in word(20), p in 2usize..=4) {
        let ones = w.ones();
        let complement: IndexSet = (0..w.len()).filter(|&i| !ones.contains(i)).collect();
        prop_assert_eq!(w.complement().ones(), complement);
        let dilated: IndexSet = ones.iter().map(|i| p * i + p - 1).collect();
        prop_assert_eq!(w.dilate(p).unwrap().ones(), dilated);
        prop_assert_eq!(ones.telescope().len(), ones.len() + 1);
    }

    #[test]
    fn substring_counts_match_complexity(w in nonempty(12)) {
        let all = w.all_substrings().unwrap();
        for n in 1..=w.len() {
            let count = all.iter().filter(|s| s.len() == n).count();
            prop_assert_eq!(count, w.complexity(n).unwrap());
        }
    }

    #[test]
    fn doubling_sequences_are_sidon(start in 1usize..10, extra in prop::collection::vec(0usize..5, 1..12)) {
        let mut u = vec![start];
        for e in extra {
            let next = 2 * u.last().unwrap() + e;
            u.push(next);
        }
        prop_assert!(is_sidon(&u.into_iter().collect()));
    }

    #[test]
    fn sidon_encodings_stay_low(src in nonempty(9)) {
        let w = sidon_encode(&src, (1 << src.len()) + 1);
        prop_assert!(mdim(&w).0 <= 2);
        prop_assert!(vcdim_word(&w) <= 2);
    }

    #[test]
    fn dilation_preserves_language(w in word(7), p in 2usize..=3, d in 0usize..4) {
        prop_assert_eq!(
            in_language(&w, d).unwrap(),
            in_language(&w.dilate(p).unwrap(), d).unwrap()
        );
    }

    #[test]
    fn zero_shift_stays_finite(w in word(14), l in 0usize..10) {
        prop_assert!(vcdim_word(&w.pad_zeros(l, 0)) <= vcdim_word(&w) + 2);
    }
}

#[test]
fn primality_is_not_closed_under_complement() {
    let w = Word::parse("011").unwrap();
    assert!(is_prime(&w, 2));
    assert!(vcdim_word(&w.complement()) < 2);
}

#[test]
fn sidon_encoding_is_injective() {
    let n = (1 << 8) + 1;
    let mut seen = std::collections::HashSet::new();
    for bits in 0u64..256 {
        assert!(seen.insert(sidon_encode(&Word::from_u64(bits, 8), n)));
    }
}
