//! The three dimensions of a binary word.
//!
//! * VC dimension: over the family of index sets of all substrings.
//! * Sliding-window dimension: the best VC dimension of a fixed-width window family.
//! * Mask dimension: the largest offset tuple under which a sliding read sees
//!   every pattern.
//!
//! The word engines search sets anchored at `0` (both notions are translation
//! invariant) and report the lexicographically least witness.

mod engine;
mod family;
mod oracle;

use std::collections::BTreeSet;

use serde::Serialize;

pub use family::{shatters, trace_family, vcdim, window_family, TraceFamily};
pub use oracle::{oracle_vcdim, ORACLE_MAX_LEN};

use crate::word::{IndexSet, Word};

/// VC dimension of the substring family of `word`.
pub fn vcdim_word(word: &Word) -> usize {
    engine::ray_search(word, usize::MAX).len()
}

/// VC dimension together with the lexicographically least shattered set.
pub fn vcdim_word_witness(word: &Word) -> (usize, IndexSet) {
    let witness = engine::ray_search(word, usize::MAX);
    (witness.len(), witness.into_iter().collect())
}

/// Whether the VC dimension of `word` is at least `d`. Stops as soon as a
/// shattered set of size `d` turns up.
pub fn vcdim_at_least(word: &Word, d: usize) -> bool {
    d == 0 || engine::ray_search(word, d).len() >= d
}

/// Offsets `i_0 < i_1 < ... < i_{d-1}` of a mask.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaskSpec {
    pub offsets: IndexSet,
}

impl MaskSpec {
    pub fn new(offsets: IndexSet) -> Self {
        MaskSpec { offsets }
    }

    /// Translated so that the smallest offset is 0.
    pub fn normalized(&self) -> MaskSpec {
        match self.offsets.members().first() {
            Some(&low) => MaskSpec::new(self.offsets.shifted_down(low)),
            None => self.clone(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.offsets.len()
    }
}

/// Mask dimension with the lexicographically least full mask (normalised to
/// start at 0).
pub fn mdim(word: &Word) -> (usize, MaskSpec) {
    let offsets = engine::mask_search(word, usize::MAX);
    (offsets.len(), MaskSpec::new(offsets.into_iter().collect()))
}

/// Sliding-window dimension and the least window width that attains it.
/// The width is 0 when no window shatters anything (including the empty word).
pub fn swdim(word: &Word) -> (usize, usize) {
    let mut best = (0, 0);
    for width in 1..=word.len() {
        // a width-w family cannot shatter more than w elements
        if width <= best.0 {
            continue;
        }
        if let Some(set) = engine::window_search(word, width, best.0) {
            best = (set.len(), width);
        }
    }
    best
}

/// Patterns `<w[i_0 + t], ..., w[i_{d-1} + t]>` over every `t` that keeps all
/// offsets inside the word, packed with offset `k` in bit `k`.
pub fn mask_patterns(word: &Word, offsets: &IndexSet) -> BTreeSet<u64> {
    assert!(offsets.len() <= 64, "at most 64 offsets");
    let Some(top) = offsets.largest() else {
        return BTreeSet::from([0]);
    };
    if top >= word.len() {
        return BTreeSet::new();
    }
    (0..word.len() - top)
        .map(|t| {
            offsets
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, i)| acc | ((word.bit(i + t) as u64) << k))
        })
        .collect()
}

/// Whether the offsets form a full mask on `word`.
pub fn is_full_mask(word: &Word, offsets: &IndexSet) -> bool {
    let d = offsets.len();
    d < 64 && mask_patterns(word, offsets).len() == 1 << d
}

/// `sum_{i <= d} C(n, i)`: the most distinct traces a family of VC dimension
/// `d` can leave on `n` points. Saturates at `u128::MAX`.
pub fn sauer_bound(n: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=d.min(n) {
        total = total.saturating_add(binom);
        // C(n, i+1) = C(n, i) * (n - i) / (i + 1), exact at every step
        binom = binom.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    total
}

/// All three dimensions of a word with their witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub input: String,
    pub len: usize,
    pub vcdim: usize,
    pub swdim: usize,
    pub mdim: usize,
    pub witness: IndexSet,
    pub mask_offsets: IndexSet,
    pub window_width: usize,
    /// Set for prefixes of infinite words: the values only bound the
    /// dimensions of the infinite word from below.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub lower_bound: bool,
}

impl DimensionReport {
    pub fn analyze(word: &Word) -> Self {
        let (vc, witness) = vcdim_word_witness(word);
        let (sw, window_width) = swdim(word);
        let (md, mask) = mdim(word);
        DimensionReport {
            input: word.render_compact(),
            len: word.len(),
            vcdim: vc,
            swdim: sw,
            mdim: md,
            witness,
            mask_offsets: mask.offsets,
            window_width,
            lower_bound: false,
        }
    }

    pub fn prefix_of_infinite(mut self) -> Self {
        self.lower_bound = true;
        self
    }

    pub const CSV_HEADER: &'static str = "input,len,vcdim,swdim,mdim,witness,mask_offsets,window_width";

    /// One CSV row; set-valued fields are space separated.
    pub fn csv_row(&self) -> String {
        let join = |s: &IndexSet| {
            s.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.input,
            self.len,
            self.vcdim,
            self.swdim,
            self.mdim,
            join(&self.witness),
            join(&self.mask_offsets),
            self.window_width
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn vcdim_word_examples() {
        assert_eq!(vcdim_word(&w("010")), 1);
        assert_eq!(vcdim_word(&w("011")), 2);
        assert_eq!(vcdim_word(&w("01011")), 2);
        assert_eq!(vcdim_word(&w("1")), 1);
        assert_eq!(vcdim_word(&w("01100")), 2);
        assert_eq!(vcdim_word(&w("")), 0);
        assert_eq!(vcdim_word(&Word::zeros(9)), 0);
        assert_eq!(vcdim_word_witness(&w("011")), (2, IndexSet::from([0, 1])));
    }

    #[test]
    fn vcdim_at_least_matches_exact() {
        for s in ["0010111", "011", "0", "110101", "1"] {
            let d = vcdim_word(&w(s));
            assert!(vcdim_at_least(&w(s), d));
            assert!(!vcdim_at_least(&w(s), d + 1));
        }
    }

    #[test]
    fn swdim_examples() {
        assert_eq!(swdim(&w("011")).0, 1);
        assert_eq!(swdim(&w("01100")).0, 2);
        assert_eq!(swdim(&Word::zeros(5)), (0, 0));
        assert_eq!(swdim(&w("")), (0, 0));
    }

    #[test]
    fn swdim_matches_window_families() {
        for n in 1..=10 {
            for bits in 0u64..(1 << n) {
                let word = Word::from_u64(bits, n);
                let mut best = (0, 0);
                for width in 1..=n {
                    let d = vcdim(&window_family(&word, width).unwrap()).0;
                    if d > best.0 {
                        best = (d, width);
                    }
                }
                assert_eq!(swdim(&word), best, "{word:?}");
            }
        }
    }

    #[test]
    fn mdim_examples() {
        let (d, _) = mdim(&w("101001"));
        assert!(d >= 2);
        assert!(is_full_mask(&w("101001"), &IndexSet::from([0, 2])));
        assert_eq!(mdim(&w("0000")).0, 0);
        assert_eq!(mdim(&w("1")).0, 0);
        assert_eq!(mdim(&w("011")).0, 1);
    }

    #[test]
    fn mask_spec_normalizes() {
        let m = MaskSpec::new(IndexSet::from([6, 18, 54]));
        assert_eq!(m.normalized().offsets, IndexSet::from([0, 12, 48]));
        assert_eq!(m.dimension(), 3);
    }

    #[test]
    fn sauer_examples() {
        assert_eq!(sauer_bound(5, 1), 6);
        assert_eq!(sauer_bound(4, 2), 11);
        assert_eq!(sauer_bound(3, 3), 8);
        assert_eq!(sauer_bound(3, 7), 8);
        assert_eq!(sauer_bound(0, 0), 1);
    }

    #[test]
    fn report_for_011() {
        let r = DimensionReport::analyze(&w("011"));
        assert_eq!((r.vcdim, r.swdim, r.mdim), (2, 1, 1));
        assert_eq!(r.witness, IndexSet::from([0, 1]));
        assert_eq!(r.csv_row(), "011,3,2,1,1,0 1,0,1");
    }
}
