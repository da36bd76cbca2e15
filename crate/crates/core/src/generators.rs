//! Prefixes of the named infinite words. Every generator is index addressable:
//! symbol `i` is computed directly, without the symbols before it.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{IndexSet, Word};

/// Symbol `i` of the Cantor string: a 1 exactly at `2 * sum_{k in K} 3^k`.
pub fn cantor_bit(i: usize) -> bool {
    if i % 2 == 1 {
        return false;
    }
    let mut m = i / 2;
    while m > 0 {
        if m % 3 == 2 {
            return false;
        }
        m /= 3;
    }
    true
}

pub fn cantor_prefix(n: usize) -> Word {
    Word::from_fn(n, cantor_bit)
}

/// The finite stage `S(0) = 1`, `S(i+1) = S(i) 0^|S(i)| S(i)`, built by the
/// recursion itself.
pub fn cantor_stage(level: u32) -> Word {
    let mut s = Word::ones_word(1);
    for _ in 0..level {
        s = s.concat(&Word::zeros(s.len())).concat(&s);
    }
    s
}

/// Symbol `i` of the Thue-Morse word: 0 iff `i` has an even number of 1 bits.
pub fn thue_morse_bit(i: usize) -> bool {
    i.count_ones() % 2 == 1
}

pub fn thue_morse_prefix(n: usize) -> Word {
    Word::from_fn(n, thue_morse_bit)
}

/// Ones exactly at the powers `q^k`, `k >= 0`.
pub fn char_powers(q: usize, n: usize) -> Result<Word> {
    if q < 2 {
        return Err(Error::InvalidArgument {
            name: "q",
            constraint: "at least 2",
            value: q,
        });
    }
    let mut positions = Vec::new();
    let mut p = 1usize;
    while p < n {
        positions.push(p);
        match p.checked_mul(q) {
            Some(next) => p = next,
            None => break,
        }
    }
    Ok(Word::with_ones(n, positions))
}

/// Ones exactly at the factorials (`0! = 1! = 1` share index 1).
pub fn char_factorial(n: usize) -> Word {
    let mut positions = Vec::new();
    let mut f = 1usize;
    let mut k = 1usize;
    while f < n {
        positions.push(f);
        k += 1;
        match f.checked_mul(k) {
            Some(next) => f = next,
            None => break,
        }
    }
    Word::with_ones(n, positions)
}

/// The word with a 1 at `2^i` exactly when `source[i] = 1`, cut to `n` symbols.
pub fn sidon_encode(source: &Word, n: usize) -> Word {
    let positions = (0..source.len().min(usize::BITS as usize - 1))
        .filter(|&i| source.bit(i))
        .map(|i| 1usize << i)
        .filter(|&p| p < n);
    Word::with_ones(n, positions)
}

/// `base` repeated and truncated to `n` symbols.
pub fn periodic(base: &Word, n: usize) -> Result<Word> {
    if base.is_empty() {
        return Err(Error::InvalidArgument {
            name: "base length",
            constraint: "at least 1",
            value: 0,
        });
    }
    Ok(Word::from_fn(n, |i| base.bit(i % base.len())))
}

/// Fewest continued-fraction terms accepted for a Sturmian slope.
pub const STURMIAN_MIN_TERMS: usize = 20;

/// Rotation word with symbols `floor((i+1) a + r) - floor(i a + r)` for the
/// slope `a = [0; a_1, a_2, ...]` and the rational intercept `r = p / q` in `[0, 1)`.
///
/// Floors are bracketed between the last two convergents; an index where the
/// two brackets disagree is reported instead of guessed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sturmian {
    // consecutive convergents h0/k0 and h1/k1, on opposite sides of the slope
    h0: i128,
    k0: i128,
    h1: i128,
    k1: i128,
    p: i128,
    q: i128,
}

impl Sturmian {
    pub fn new(cf: &[u64], intercept: (u64, u64)) -> Result<Self> {
        if cf.len() < STURMIAN_MIN_TERMS {
            return Err(Error::InvalidArgument {
                name: "continued fraction terms",
                constraint: "at least 20",
                value: cf.len(),
            });
        }
        if let Some(pos) = cf.iter().position(|&a| a == 0) {
            return Err(Error::InvalidArgument {
                name: "continued fraction term",
                constraint: "every term at least 1",
                value: pos,
            });
        }
        let (p, q) = intercept;
        if q == 0 || p >= q {
            return Err(Error::InvalidArgument {
                name: "intercept numerator",
                constraint: "0 <= p < q",
                value: p as usize,
            });
        }
        let (mut h0, mut h1): (i128, i128) = (1, 0);
        let (mut k0, mut k1): (i128, i128) = (0, 1);
        for (idx, &a) in cf.iter().enumerate() {
            let a = a as i128;
            let h = a.checked_mul(h1).and_then(|x| x.checked_add(h0));
            let k = a.checked_mul(k1).and_then(|x| x.checked_add(k0));
            match (h, k) {
                (Some(h), Some(k)) if k <= u64::MAX as i128 => {
                    (h0, h1, k0, k1) = (h1, h, k1, k);
                }
                _ => {
                    return Err(Error::InvalidArgument {
                        name: "continued fraction term index",
                        constraint: "convergents must fit in 64 bits",
                        value: idx,
                    })
                }
            }
        }
        Ok(Sturmian {
            h0,
            k0,
            h1,
            k1,
            p: p as i128,
            q: q as i128,
        })
    }

    /// `floor(x * num / den + p / q)`
    fn floor_with(&self, x: i128, num: i128, den: i128) -> Option<i128> {
        let top = x
            .checked_mul(num)?
            .checked_mul(self.q)?
            .checked_add(self.p.checked_mul(den)?)?;
        Some(top.div_euclid(den.checked_mul(self.q)?))
    }

    fn floor_at(&self, x: usize) -> Result<i128> {
        let xi = x as i128;
        match (
            self.floor_with(xi, self.h0, self.k0),
            self.floor_with(xi, self.h1, self.k1),
        ) {
            (Some(lo), Some(hi)) if lo == hi => Ok(lo),
            _ => Err(Error::InsufficientPrecision { index: x }),
        }
    }

    pub fn symbol(&self, i: usize) -> Result<bool> {
        Ok(self.floor_at(i + 1)? - self.floor_at(i)? == 1)
    }

    pub fn prefix(&self, n: usize) -> Result<Word> {
        let mut word = Word::zeros(n);
        let mut prev = self.floor_at(0)?;
        for i in 0..n {
            let next = self.floor_at(i + 1)?;
            word.set(i, next - prev == 1);
            prev = next;
        }
        Ok(word)
    }
}

pub fn sturmian_prefix(cf: &[u64], intercept: (u64, u64), n: usize) -> Result<Word> {
    Sturmian::new(cf, intercept)?.prefix(n)
}

/// `max_d |{(a, b) in A^2 : b - a = d}|`; 0 for sets with fewer than two members.
pub fn max_difference_multiplicity(set: &IndexSet) -> usize {
    let m = set.members();
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for (j, &b) in m.iter().enumerate() {
        for &a in &m[..j] {
            *counts.entry(b - a).or_default() += 1;
        }
    }
    counts.into_values().max().unwrap_or(0)
}

/// All pairwise differences distinct.
pub fn is_sidon(set: &IndexSet) -> bool {
    max_difference_multiplicity(set) <= 1
}

/// Integers `a_1..a_d` and `b_A` of the Thue-Morse full-mask construction,
/// with `g(A) = 1 + bitmask(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThueMorseMask {
    pub d: usize,
    /// `a[i-1]` has a 1 exactly at `2 g(A) + 1` for each `A` containing `i`.
    pub a: Vec<u128>,
    /// `b[mask] = 2^(2 g(A) + 1)` for the set `A` with that bitmask.
    pub b: Vec<u128>,
}

impl ThueMorseMask {
    pub fn new(d: usize) -> Result<Self> {
        // the largest bit used is 2 * 2^d + 1
        if d == 0 || d > 5 {
            return Err(Error::InvalidArgument {
                name: "d",
                constraint: "between 1 and 5",
                value: d,
            });
        }
        let g = |mask: usize| mask + 1;
        let subsets = 1usize << d;
        let b: Vec<u128> = (0..subsets).map(|mask| 1u128 << (2 * g(mask) + 1)).collect();
        let a = (0..d)
            .map(|i| {
                (0..subsets)
                    .filter(|mask| mask >> i & 1 == 1)
                    .map(|mask| b[mask])
                    .sum()
            })
            .collect();
        Ok(ThueMorseMask { d, a, b })
    }

    /// Whether `f(b_A + a_i) = 0` exactly when `i` is in `A`, for every `A`
    /// and `i`, evaluating the parity of the integers directly.
    pub fn parity_property_holds(&self) -> bool {
        (0..self.b.len()).all(|mask| {
            (0..self.d).all(|i| {
                let even = (self.b[mask] + self.a[i]).count_ones().is_multiple_of(2);
                even == (mask >> i & 1 == 1)
            })
        })
    }

    /// Offsets `a_1..a_d` as a mask, sorted.
    pub fn offsets(&self) -> Option<IndexSet> {
        self.a
            .iter()
            .map(|&x| usize::try_from(x).ok())
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().collect())
    }

    /// Prefix length needed to read every `b_A + a_i`.
    pub fn span(&self) -> u128 {
        let top_a = self.a.iter().copied().max().unwrap_or(0);
        let top_b = self.b.iter().copied().max().unwrap_or(0);
        top_a + top_b + 1
    }
}

/// Which named word to generate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GeneratorKind {
    Cantor,
    ThueMorse,
    CharPowers { q: usize },
    CharFactorial,
    SidonEncode { source: Word },
    Periodic { base: Word },
    Sturmian { cf: Vec<u64>, intercept: (u64, u64) },
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Cantor => write!(f, "cantor"),
            GeneratorKind::ThueMorse => write!(f, "thue-morse"),
            GeneratorKind::CharPowers { q } => write!(f, "powers(q={q})"),
            GeneratorKind::CharFactorial => write!(f, "factorial"),
            GeneratorKind::SidonEncode { source } => write!(f, "sidon({source})"),
            GeneratorKind::Periodic { base } => write!(f, "periodic({base})"),
            GeneratorKind::Sturmian { cf, intercept } => {
                write!(f, "sturmian(cf[{}], {}/{})", cf.len(), intercept.0, intercept.1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub length: usize,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, length: usize) -> Self {
        GeneratorSpec { kind, length }
    }

    pub fn generate(&self) -> Result<Word> {
        let n = self.length;
        if n == 0 {
            return Err(Error::InvalidArgument {
                name: "length",
                constraint: "at least 1",
                value: 0,
            });
        }
        match &self.kind {
            GeneratorKind::Cantor => Ok(cantor_prefix(n)),
            GeneratorKind::ThueMorse => Ok(thue_morse_prefix(n)),
            GeneratorKind::CharPowers { q } => char_powers(*q, n),
            GeneratorKind::CharFactorial => Ok(char_factorial(n)),
            GeneratorKind::SidonEncode { source } => Ok(sidon_encode(source, n)),
            GeneratorKind::Periodic { base } => periodic(base, n),
            GeneratorKind::Sturmian { cf, intercept } => sturmian_prefix(cf, *intercept, n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn cantor_examples() {
        assert_eq!(cantor_prefix(9), w("101000101"));
        assert_eq!(cantor_prefix(1), w("1"));
        assert_eq!(cantor_prefix(27), w("101000101000000000101000101"));
        assert_eq!(cantor_stage(2), w("101000101"));
    }

    #[test]
    fn cantor_digit_test_matches_recursion() {
        let stage = cantor_stage(6);
        assert_eq!(stage.len(), 729);
        for n in 1..=729 {
            assert_eq!(cantor_prefix(n), stage.substring(0, n).unwrap());
        }
    }

    #[test]
    fn thue_morse_examples() {
        assert_eq!(thue_morse_prefix(8), w("01101001"));
        assert!(!thue_morse_bit(0));
        assert!(!thue_morse_bit(3));
        assert_eq!(thue_morse_prefix(16), w("0110100110010110"));
    }

    #[test]
    fn powers_examples() {
        assert_eq!(char_powers(2, 33).unwrap(), w("011010001000000010000000000000001"));
        assert_eq!(char_powers(2, 2).unwrap(), w("01"));
        assert_eq!(char_powers(3, 10).unwrap().ones(), IndexSet::from([1, 3, 9]));
        assert!(char_powers(1, 10).is_err());
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(char_factorial(7).ones(), IndexSet::from([1, 2, 6]));
        assert_eq!(char_factorial(2), w("01"));
        assert_eq!(char_factorial(25).ones(), IndexSet::from([1, 2, 6, 24]));
    }

    #[test]
    fn sidon_examples() {
        // a 1 at 2^j for each j with s[j] = 1, j counted from 0
        assert_eq!(sidon_encode(&w("11"), 5), w("01100"));
        assert_eq!(sidon_encode(&w("011"), 5), w("00101"));
        assert_eq!(sidon_encode(&Word::zeros(8), 40), Word::zeros(40));
        assert_eq!(sidon_encode(&w("1"), 5), w("01000"));
    }

    #[test]
    fn sidon_sets() {
        let powers: IndexSet = (0..=20).map(|k| 1usize << k).collect();
        assert!(is_sidon(&powers));
        assert!(!is_sidon(&IndexSet::from([0, 1, 2])));
        assert_eq!(max_difference_multiplicity(&IndexSet::from([0, 2, 4, 6])), 3);
        assert_eq!(max_difference_multiplicity(&IndexSet::from([5])), 0);
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic(&w("10"), 5).unwrap(), w("10101"));
        assert_eq!(periodic(&w("1"), 3).unwrap(), w("111"));
        assert!(periodic(&Word::new(), 3).is_err());
    }

    /// Fibonacci word from the morphism 0 -> 01, 1 -> 0.
    fn fibonacci_word(n: usize) -> Word {
        let mut s = vec![false];
        while s.len() < n {
            s = s.iter().flat_map(|&c| if c { vec![false] } else { vec![false, true] }).collect();
        }
        Word::from_bits(&s[..n])
    }

    #[test]
    fn sturmian_golden_slopes() {
        // 1/phi^2 = [0; 2, 1, 1, ...]: the rotation word is 0 followed by the Fibonacci word
        let mut cf = vec![2u64];
        cf.extend(std::iter::repeat_n(1, 29));
        let s = sturmian_prefix(&cf, (0, 1), 301).unwrap();
        assert_eq!(s.substring(1, 301).unwrap(), fibonacci_word(300));

        // 1/phi = [0; 1, 1, ...] is the complementary slope
        let ones = vec![1u64; 30];
        let t = sturmian_prefix(&ones, (0, 1), 301).unwrap();
        assert_eq!(t.substring(1, 301).unwrap(), fibonacci_word(300).complement());
        assert_eq!(t.substring(0, 10).unwrap(), w("0101101011"));
    }

    #[test]
    fn sturmian_complexity_and_alternations() {
        let cf: Vec<u64> = (0..24).map(|i| 1 + (i % 3)).collect();
        let s = sturmian_prefix(&cf, (1, 3), 200).unwrap();
        for k in 1..=8 {
            assert_eq!(s.complexity(k).unwrap(), k + 1);
        }
        let short = sturmian_prefix(&cf, (1, 3), 50).unwrap();
        assert!(s.alternations() > short.alternations());
    }

    #[test]
    fn sturmian_errors() {
        assert!(sturmian_prefix(&[1; 5], (0, 1), 10).is_err());
        assert!(sturmian_prefix(&[1; 20], (1, 1), 10).is_err());
        assert!(sturmian_prefix(&[0; 20], (0, 1), 10).is_err());
        // 20 terms of 1 give denominators near 10^4: far indices are out of reach
        let s = Sturmian::new(&[1; 20], (0, 1)).unwrap();
        assert!(s.symbol(100).is_ok());
        assert!(matches!(
            s.symbol(1_000_000_000),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn thue_morse_mask_parity() {
        for d in 2..=5 {
            assert!(ThueMorseMask::new(d).unwrap().parity_property_holds(), "d={d}");
        }
        // a_1 has an odd popcount for d = 1
        assert!(!ThueMorseMask::new(1).unwrap().parity_property_holds());
    }

    #[test]
    fn generator_spec_dispatch() {
        let spec = GeneratorSpec::new(GeneratorKind::Cantor, 9);
        assert_eq!(spec.generate().unwrap(), w("101000101"));
        assert!(GeneratorSpec::new(GeneratorKind::ThueMorse, 0).generate().is_err());
        let spec = GeneratorSpec::new(GeneratorKind::CharPowers { q: 1 }, 4);
        assert!(spec.generate().is_err());
    }
}
