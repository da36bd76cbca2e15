//! Finite words inside bi-infinite strings of bounded dimension: padding with
//! zeros on the left, the language test, follower sets and the separating
//! construction showing that infinitely many follower sets occur.

use serde::Serialize;

use crate::dimension::vcdim_word;
use crate::error::{Error, Result};
use crate::par::map_chunks;
use crate::word::{Word, DEFAULT_MAX_LEN};

/// Largest horizon `follower_set` accepts.
pub const MAX_HORIZON: usize = 18;

/// Largest `k` tried by `structural_extension`.
pub const EXTENSION_CAP: usize = 64;

/// Longest base word tried by `sofic_witness`.
pub const BASE_SEARCH_CAP: usize = 10;

/// Dimension of `0^m w` for `m = 2 len(w) + 1`, checked against `0^(m + len(w)) w`.
/// Zeros on the right never change the dimension, so only the left is padded.
pub fn padded_vcdim(word: &Word) -> Result<usize> {
    padded_vcdim_with(word, None)
}

/// As [`padded_vcdim`] with an explicit padding length `m` for auditing.
pub fn padded_vcdim_with(word: &Word, pad: Option<usize>) -> Result<usize> {
    let m = pad.unwrap_or(2 * word.len() + 1);
    let first = vcdim_word(&word.pad_zeros(m, 0));
    let second_pad = m + word.len().max(1);
    let second = vcdim_word(&word.pad_zeros(second_pad, 0));
    if first != second {
        return Err(Error::NonStabilization {
            word: word.render_compact(),
            first,
            first_pad: m,
            second,
            second_pad,
        });
    }
    Ok(first)
}

/// Sufficient membership test for the language of the shift of bi-infinite
/// strings of dimension at most `d`: the zero extension of `word` has
/// dimension at most `d`.
pub fn in_language(word: &Word, d: usize) -> Result<bool> {
    Ok(padded_vcdim(word)? <= d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FollowerSet {
    pub word: Word,
    pub d: usize,
    pub horizon: usize,
    /// Shortlex ordered.
    pub members: Vec<Word>,
}

impl FollowerSet {
    /// Number of members of each length `0..=horizon`.
    pub fn counts_by_length(&self) -> Vec<usize> {
        let mut counts = vec![0; self.horizon + 1];
        for z in &self.members {
            counts[z.len()] += 1;
        }
        counts
    }

    pub fn contains(&self, z: &Word) -> bool {
        self.members.binary_search_by(|m| crate::primes::shortlex(m, z)).is_ok()
    }
}

/// All `z` with `|z| <= horizon` such that `wz` passes [`in_language`].
pub fn follower_set(word: &Word, d: usize, horizon: usize) -> Result<FollowerSet> {
    follower_set_with(word, d, horizon, 1)
}

pub fn follower_set_with(word: &Word, d: usize, horizon: usize, jobs: usize) -> Result<FollowerSet> {
    if horizon > MAX_HORIZON {
        return Err(Error::InvalidArgument {
            name: "horizon",
            constraint: "at most 18",
            value: horizon,
        });
    }
    let mut members = Vec::new();
    for len in 0..=horizon {
        let low_bits = len.min(10);
        let chunks = 1usize << (len - low_bits);
        let batch = map_chunks(jobs, chunks, |c| {
            (0..1u64 << low_bits)
                .map(|low| Word::from_u64(((c as u64) << low_bits) | low, len))
                .filter_map(|z| match in_language(&word.concat(&z), d) {
                    Ok(true) => Some(Ok(z)),
                    Ok(false) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect()
        });
        let mut batch = batch.into_iter().collect::<Result<Vec<_>>>()?;
        batch.sort();
        members.extend(batch);
    }
    Ok(FollowerSet {
        word: word.clone(),
        d,
        horizon,
        members,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MadnessRow {
    pub l: usize,
    pub word: Word,
    pub vcdim: usize,
    /// `l > 2 len(t)`, where the dimension must equal `d`.
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MadnessReport {
    pub base: Word,
    pub d: usize,
    pub bound: usize,
    pub rows: Vec<MadnessRow>,
    /// Smallest tested `l` from which every tested row has dimension `d`.
    pub settled_from: Option<usize>,
}

impl MadnessReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().filter(|r| r.asserted).all(|r| r.vcdim == self.d)
    }
}

/// For `t` with padded dimensions `d` (for `t`) and `d + 1` (for `t1`),
/// `d > 1`: the dimension of `0^(2k+1) t 0^l 1`, `k = len(t)`, for each `l`.
/// Rows with `l > 2k` are the ones the distance argument covers.
pub fn madness_check(t: &Word, d: usize, ls: impl IntoIterator<Item = usize>) -> Result<MadnessReport> {
    if d < 2 {
        return Err(Error::Precondition(format!("need d > 1, got {d}")));
    }
    let base_dim = padded_vcdim(t)?;
    let closed_dim = padded_vcdim(&t.concat(&Word::ones_word(1)))?;
    if base_dim != d || closed_dim != d + 1 {
        return Err(Error::Precondition(format!(
            "padded dimensions of {t} and {t}1 are {base_dim} and {closed_dim}, need {d} and {}",
            d + 1
        )));
    }
    let k = t.len();
    let rows: Vec<MadnessRow> = ls
        .into_iter()
        .map(|l| {
            let word = t
                .pad_zeros(2 * k + 1, l)
                .concat(&Word::ones_word(1));
            MadnessRow {
                l,
                vcdim: vcdim_word(&word),
                asserted: l > 2 * k,
                word,
            }
        })
        .collect();
    let mut settled_from = None;
    for row in rows.iter().rev() {
        if row.vcdim != d {
            break;
        }
        settled_from = Some(row.l);
    }
    Ok(MadnessReport {
        base: t.clone(),
        d,
        bound: 2 * k,
        rows,
        settled_from,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DilatedWord {
    pub index: usize,
    pub a: usize,
    /// Run-length encoded.
    pub word: String,
    pub len: usize,
    pub vcdim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub i: usize,
    pub j: usize,
    /// `0^(a_j - 1) 1`, run-length encoded.
    pub suffix: String,
    pub in_language_i: bool,
    pub in_language_j: bool,
    pub vcdim_i: usize,
    pub vcdim_j: usize,
}

impl Separation {
    pub fn separates(&self) -> bool {
        self.in_language_i && !self.in_language_j
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SoficProof {
    pub d: usize,
    pub base: Word,
    pub k: usize,
    /// `vcdim(0^(2k+1) T)` and `vcdim(0^(2k+1) T 1)`.
    pub base_dim: usize,
    pub closed_dim: usize,
    pub a: Vec<usize>,
    pub words: Vec<DilatedWord>,
    pub separations: Vec<Separation>,
    pub madness: MadnessReport,
}

impl SoficProof {
    pub fn verified(&self) -> bool {
        self.base_dim == self.d
            && self.closed_dim == self.d + 1
            && self.words.iter().all(|w| w.vcdim == self.d)
            && self.separations.iter().all(|s| s.separates() && s.vcdim_j == self.d + 1)
            && self.madness.holds()
    }
}

/// The first `T` (by length, then lexicographically, length at most 10)
/// with `vcdim(0^(2k+1) T) = d` and `vcdim(0^(2k+1) T 1) = d + 1`, `k = len(T)`,
/// whose padded dimensions agree with those values.
pub fn find_base_word(d: usize) -> Result<Word> {
    for len in 1..=BASE_SEARCH_CAP {
        let mut candidates: Vec<Word> = (0..1u64 << len).map(|b| Word::from_u64(b, len)).collect();
        candidates.sort();
        for t in candidates {
            let prefixed = t.pad_zeros(2 * len + 1, 0);
            if vcdim_word(&prefixed) != d {
                continue;
            }
            if vcdim_word(&prefixed.concat(&Word::ones_word(1))) != d + 1 {
                continue;
            }
            if padded_vcdim(&t)? == d && padded_vcdim(&t.concat(&Word::ones_word(1)))? == d + 1 {
                return Ok(t);
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no base word of length <= {BASE_SEARCH_CAP} for d = {d}"
    )))
}

/// Builds `w_1..w_count` with `w_i = (0^(2k+1) T)^[a_i]`, `a_1 = 1`,
/// `a_(i+1) = 2k a_i + 2`, and checks that `0^(a_j - 1) 1` follows `w_i` but
/// not `w_j` for every `i < j`.
pub fn sofic_witness(d: usize, count: usize) -> Result<SoficProof> {
    if d < 2 {
        return Err(Error::Precondition(format!("need d >= 2, got {d}")));
    }
    if count < 2 {
        return Err(Error::InvalidArgument {
            name: "pairs",
            constraint: "at least 2 words to separate",
            value: count,
        });
    }
    let t = find_base_word(d)?;
    let k = t.len();
    let prefixed = t.pad_zeros(2 * k + 1, 0);
    let one = Word::ones_word(1);

    let mut a = vec![1usize];
    while a.len() < count {
        let next = a.last().expect("nonempty") * 2 * k + 2;
        a.push(next);
    }
    let top = *a.last().expect("nonempty");
    let longest = (prefixed.len() + 1) * top;
    if longest > DEFAULT_MAX_LEN {
        return Err(Error::TooLong {
            len: longest,
            cap: DEFAULT_MAX_LEN,
        });
    }
    let words: Vec<Word> = a.iter().map(|&ai| prefixed.dilate_unchecked(ai)).collect();
    let dilated = words
        .iter()
        .zip(&a)
        .enumerate()
        .map(|(idx, (w, &ai))| DilatedWord {
            index: idx + 1,
            a: ai,
            word: w.render_rle(),
            len: w.len(),
            vcdim: vcdim_word(w),
        })
        .collect();

    let mut separations = Vec::new();
    for j in 1..count {
        let suffix = Word::zeros(a[j] - 1).concat(&one);
        for i in 0..j {
            let with_i = words[i].concat(&suffix);
            let with_j = words[j].concat(&suffix);
            separations.push(Separation {
                i: i + 1,
                j: j + 1,
                suffix: suffix.render_rle(),
                in_language_i: in_language(&with_i, d)?,
                in_language_j: in_language(&with_j, d)?,
                vcdim_i: vcdim_word(&with_i),
                vcdim_j: vcdim_word(&with_j),
            });
        }
    }
    let madness = madness_check(&t, d, 0..=2 * k + 6)?;
    Ok(SoficProof {
        d,
        base_dim: vcdim_word(&prefixed),
        closed_dim: vcdim_word(&prefixed.concat(&one)),
        base: t,
        k,
        a,
        words: dilated,
        separations,
        madness,
    })
}

/// For `w` ending in 1 with `vcdim(w) = d > 0` and a lower dimension once
/// the last symbol is dropped: the least `k` with `vcdim(w' 0 1^k) = d`,
/// where `w'` is `w` without its last symbol.
pub fn structural_extension(word: &Word) -> Result<(usize, Word)> {
    let n = word.len();
    if n == 0 || !word.bit(n - 1) {
        return Err(Error::Precondition("word must end in 1".into()));
    }
    let d = vcdim_word(word);
    let trimmed = word.substring(0, n - 1)?;
    if d == 0 || vcdim_word(&trimmed) >= d {
        return Err(Error::Precondition(format!(
            "dropping the last symbol of {word} must lower its dimension {d}"
        )));
    }
    let stem = trimmed.concat(&Word::zeros(1));
    for k in 0..=EXTENSION_CAP {
        let candidate = stem.concat(&Word::ones_word(k));
        if vcdim_word(&candidate) == d {
            return Ok((k, candidate));
        }
    }
    Err(Error::SearchExhausted(format!(
        "no k <= {EXTENSION_CAP} restores dimension {d} for {word}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn padded_examples() {
        assert_eq!(padded_vcdim(&w("11")).unwrap(), 2);
        assert_eq!(vcdim_word(&w("11")), 1);
        assert_eq!(padded_vcdim(&w("1")).unwrap(), 1);
        assert_eq!(padded_vcdim(&w("011")).unwrap(), 2);
        assert_eq!(padded_vcdim(&Word::new()).unwrap(), 0);
        assert_eq!(padded_vcdim_with(&w("0010111"), Some(40)).unwrap(), 3);
    }

    #[test]
    fn language_examples() {
        assert!(in_language(&w("1"), 1).unwrap());
        assert!(in_language(&w("011"), 2).unwrap());
        assert!(!in_language(&w("0010111"), 2).unwrap());
        assert!(!in_language(&w("1"), 0).unwrap());
        assert!(in_language(&w("000"), 0).unwrap());
    }

    #[test]
    fn followers_at_dimension_zero_are_zero_words() {
        let f = follower_set(&w("0"), 0, 3).unwrap();
        assert_eq!(f.counts_by_length(), vec![1, 1, 1, 1]);
        assert!(f.members.iter().all(|z| z.count_ones() == 0));
        assert!(follower_set(&w("0"), 0, 19).is_err());
    }

    #[test]
    fn followers_grow_with_horizon() {
        let small = follower_set(&w("011"), 2, 4).unwrap();
        let large = follower_set_with(&w("011"), 2, 5, 2).unwrap();
        let truncated: Vec<Word> = large.members.iter().filter(|z| z.len() <= 4).cloned().collect();
        assert_eq!(small.members, truncated);
        assert!(small.contains(&w("0")));
    }

    #[test]
    fn structural_extension_examples() {
        assert_eq!(structural_extension(&w("011")).unwrap(), (2, w("01011")));
        assert_eq!(structural_extension(&w("1")).unwrap(), (1, w("01")));
        assert!(structural_extension(&w("0110")).is_err());
        assert!(structural_extension(&w("0111")).is_err());
    }

    #[test]
    fn madness_preconditions() {
        assert!(madness_check(&w("1"), 1, 0..3).is_err());
        assert!(madness_check(&w("0"), 2, 0..3).is_err());
    }

    #[test]
    fn sofic_witness_two_words() {
        let proof = sofic_witness(2, 2).unwrap();
        assert!(proof.verified(), "{proof:#?}");
        assert_eq!(proof.a, vec![1, 2 * proof.k + 2]);
        assert_eq!(proof.separations.len(), 1);
        assert!(sofic_witness(1, 2).is_err());
    }
}
