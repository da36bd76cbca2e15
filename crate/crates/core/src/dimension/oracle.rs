//! Brute-force VC dimension straight from the definition, used to check the
//! search engines. Shares nothing with them beyond `Word::bit`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::word::Word;

/// Longest word the oracle accepts.
pub const ORACLE_MAX_LEN: usize = 14;

/// VC dimension of the family of index sets of all substrings (the empty
/// substring included), by trying every subset of `{0, .., len - 1}`.
pub fn oracle_vcdim(word: &Word) -> Result<usize> {
    let n = word.len();
    if n > ORACLE_MAX_LEN {
        return Err(Error::TooLong {
            len: n,
            cap: ORACLE_MAX_LEN,
        });
    }
    // every substring s = word[i..j] as the mask n(s)
    let mut family: HashSet<u32> = HashSet::new();
    family.insert(0);
    for i in 0..n {
        let mut mask = 0u32;
        for j in i..n {
            if word.bit(j) {
                mask |= 1 << (j - i);
            }
            family.insert(mask);
        }
    }
    let family: Vec<u32> = family.into_iter().collect();

    let mut best = 0;
    let mut traced = Vec::with_capacity(family.len());
    for candidate in 0u32..(1 << n) {
        let size = candidate.count_ones() as usize;
        if size <= best || (1usize << size) > family.len() {
            continue;
        }
        // the candidate itself must be traced before anything else matters
        if !family.iter().any(|&t| t & candidate == candidate) {
            continue;
        }
        traced.clear();
        traced.extend(family.iter().map(|&t| t & candidate));
        traced.sort_unstable();
        traced.dedup();
        if traced.len() == 1 << size {
            best = size;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        let w = |s: &str| Word::parse(s).unwrap();
        assert_eq!(oracle_vcdim(&w("011")).unwrap(), 2);
        assert_eq!(oracle_vcdim(&w("")).unwrap(), 0);
        assert_eq!(oracle_vcdim(&w("010")).unwrap(), 1);
        assert_eq!(oracle_vcdim(&w("0010111")).unwrap(), 3);
        assert_eq!(oracle_vcdim(&w("01100")).unwrap(), 2);
        assert!(oracle_vcdim(&Word::zeros(15)).is_err());
    }
}
