//! Binary expansions of reals in `[0, 1]` and finite-scale covers of the set
//! of reals whose expansion has VC dimension at most `d`.
//!
//! A real is identified with its digit stream after the radix point; the
//! radix point and sign play no part. Dyadic rationals use the expansion
//! ending in zeros, so `1 = 1.000...` is the stream `10*`.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dimension::{vcdim_at_least, vcdim_word};
use crate::error::{Error, Result};
use crate::par::map_chunks;
use crate::word::Word;

/// Deepest cover `cover` computes.
pub const COVER_CAP: usize = 20;

fn mod_pow2(exp: usize, modulus: u64) -> u64 {
    let m = modulus as u128;
    let (mut result, mut base, mut e) = (1 % m, 2 % m, exp);
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    result as u64
}

/// The digit stream of a rational `p/q` with `0 <= p <= q`, reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinaryExpansion {
    pub p: u64,
    pub q: u64,
    /// Digits before the repeating part starts.
    pub preperiod: usize,
    /// Length of the repeating part.
    pub period: usize,
}

impl BinaryExpansion {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument {
                name: "denominator",
                constraint: "positive",
                value: 0,
            });
        }
        if p > q {
            return Err(Error::InvalidArgument {
                name: "numerator",
                constraint: "at most the denominator",
                value: p as usize,
            });
        }
        let g = p.gcd(&q);
        let (p, q) = if p == 0 { (0, 1) } else { (p / g, q / g) };
        if p == q {
            // 1 = 1.000...: one leading digit, then zeros
            return Ok(BinaryExpansion {
                p,
                q,
                preperiod: 1,
                period: 1,
            });
        }
        let preperiod = q.trailing_zeros() as usize;
        let odd = q >> preperiod;
        let mut period = 1;
        if odd > 1 {
            let mut x = 2 % odd;
            while x != 1 {
                x = (x as u128 * 2 % odd as u128) as u64;
                period += 1;
            }
        }
        Ok(BinaryExpansion {
            p,
            q,
            preperiod,
            period,
        })
    }

    /// Digit `i` of the stream, counting from 0.
    pub fn digit(&self, i: usize) -> bool {
        if self.p == self.q {
            return i == 0;
        }
        // digit i is the parity of floor(p 2^(i+1) / q)
        let r = (self.p as u128 * mod_pow2(i, self.q) as u128 % self.q as u128) as u64;
        2 * (r as u128) >= self.q as u128
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word::from_fn(n, |i| self.digit(i))
    }

    /// Prefix length by which the dimension profile has reached its final value.
    pub fn plateau_length(&self) -> usize {
        2 * (self.preperiod + self.period) + 4
    }

    /// Bound on the dimension of the whole stream from its period.
    pub fn period_bound(&self) -> usize {
        self.period + 1
    }
}

/// The first `n` digits of `p/q`.
pub fn expansion(p: u64, q: u64, n: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::InvalidArgument {
            name: "length",
            constraint: "at least 1",
            value: 0,
        });
    }
    Ok(BinaryExpansion::new(p, q)?.prefix(n))
}

/// VC dimension of the length-`n` prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProfilePoint {
    pub n: usize,
    pub vcdim: usize,
}

/// Dimensions of the prefixes of lengths `1..=n_max` of a digit stream.
///
/// One more symbol raises the dimension by at most one, so each step only
/// asks whether the previous value has been exceeded.
pub fn dimension_profile(digits: impl Fn(usize) -> bool, n_max: usize) -> Vec<ProfilePoint> {
    let mut prefix = Word::new();
    let mut d = 0;
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        prefix.push(digits(n - 1));
        if vcdim_at_least(&prefix, d + 1) {
            d += 1;
        }
        out.push(ProfilePoint { n, vcdim: d });
    }
    out
}

/// Profile of a rational with its period data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalProfile {
    pub expansion: BinaryExpansion,
    pub points: Vec<ProfilePoint>,
}

impl RationalProfile {
    pub fn of(p: u64, q: u64, n_max: usize) -> Result<Self> {
        let expansion = BinaryExpansion::new(p, q)?;
        let points = dimension_profile(|i| expansion.digit(i), n_max);
        Ok(RationalProfile { expansion, points })
    }

    /// Dimension of the longest prefix computed.
    pub fn last(&self) -> usize {
        self.points.last().map_or(0, |p| p.vcdim)
    }

    /// Dimension at the plateau length, if the profile reaches it.
    pub fn at_plateau_length(&self) -> Option<usize> {
        let n = self.expansion.plateau_length();
        self.points.get(n.checked_sub(1)?).map(|p| p.vcdim)
    }

    /// The profile is flat from the plateau length on and stays within the
    /// period bound.
    pub fn plateau_holds(&self) -> bool {
        match self.at_plateau_length() {
            Some(v) => v == self.last() && v <= self.expansion.period_bound(),
            None => false,
        }
    }
}

/// The interval `[k 2^-depth, (k + 1) 2^-depth]`: the reals whose expansion
/// starts with the `depth` digits of `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DyadicInterval {
    pub k: u64,
    pub depth: u32,
}

impl DyadicInterval {
    pub fn of_prefix(prefix: &Word) -> Self {
        let k = prefix.iter().fold(0u64, |k, b| 2 * k + b as u64);
        DyadicInterval {
            k,
            depth: prefix.len() as u32,
        }
    }

    pub fn prefix(&self) -> Word {
        let n = self.depth as usize;
        Word::from_fn(n, |i| (self.k >> (n - 1 - i)) & 1 == 1)
    }

    /// Lower endpoint as numerator and denominator.
    pub fn lo(&self) -> (u64, u64) {
        (self.k, 1 << self.depth)
    }

    pub fn hi(&self) -> (u64, u64) {
        (self.k + 1, 1 << self.depth)
    }

    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.depth >= self.depth && other.k >> (other.depth - self.depth) == self.k
    }
}

/// Number of prefixes kept at one depth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoverLevel {
    pub depth: usize,
    pub count: usize,
    /// `count / 2^depth`.
    pub measure: f64,
}

/// The intervals of all depth-`depth` prefixes of dimension at most `d`.
/// Every real of dimension at most `d` lies in one of them; the converse
/// fails, so the cover is an outer envelope.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cover {
    pub d: usize,
    pub depth: usize,
    pub levels: Vec<CoverLevel>,
    pub intervals: Vec<DyadicInterval>,
}

impl Cover {
    pub fn measure(&self) -> f64 {
        self.levels.last().map_or(1.0, |l| l.measure)
    }

    /// Measures fall strictly from each depth to the next within `depths`.
    pub fn strictly_shrinking(&self, depths: std::ops::RangeInclusive<usize>) -> bool {
        self.levels
            .windows(2)
            .filter(|w| depths.contains(&w[0].depth) && depths.contains(&w[1].depth))
            .all(|w| w[1].measure < w[0].measure)
    }

    pub const CSV_HEADER: &'static str = "k,n,lo,hi";

    pub fn csv_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.intervals.iter().map(|iv| {
            let (a, b) = iv.lo();
            let (c, e) = iv.hi();
            format!("{},{},{a}/{b},{c}/{e}", iv.k, iv.depth)
        })
    }
}

const COVER_CHUNK: usize = 256;

/// Breadth-first over prefixes: a prefix of dimension above `d` has no
/// extension of dimension `d` or less.
pub fn cover(d: usize, depth: usize, jobs: usize) -> Result<Cover> {
    if depth > COVER_CAP {
        return Err(Error::TooLong {
            len: depth,
            cap: COVER_CAP,
        });
    }
    let mut frontier = vec![Word::new()];
    let mut levels = vec![CoverLevel {
        depth: 0,
        count: 1,
        measure: 1.0,
    }];
    for level in 1..=depth {
        let current = &frontier;
        let chunks = current.len().div_ceil(COVER_CHUNK);
        frontier = map_chunks(jobs, chunks, |c| {
            let end = (COVER_CHUNK * (c + 1)).min(current.len());
            current[COVER_CHUNK * c..end]
                .iter()
                .flat_map(|w| {
                    [false, true].into_iter().filter_map(move |b| {
                        let mut child = w.clone();
                        child.push(b);
                        (!vcdim_at_least(&child, d + 1)).then_some(child)
                    })
                })
                .collect()
        });
        levels.push(CoverLevel {
            depth: level,
            count: frontier.len(),
            measure: frontier.len() as f64 / (1u64 << level) as f64,
        });
    }
    Ok(Cover {
        d,
        depth,
        levels,
        intervals: frontier.iter().map(DyadicInterval::of_prefix).collect(),
    })
}

/// One split point of the push and line families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushLineRow {
    pub i: usize,
    /// `s[0..i] t`.
    pub push: Word,
    pub push_vcdim: usize,
    /// `s[0..i] t[i..]`: the prefix of `s` spliced onto the same positions of `t`.
    pub line: Word,
    pub line_vcdim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PushLineReport {
    pub s: Word,
    pub t: Word,
    pub s_vcdim: usize,
    pub t_vcdim: usize,
    pub rows: Vec<PushLineRow>,
}

impl PushLineReport {
    /// Pushing `t` right never lowers its dimension.
    pub fn push_bound_holds(&self) -> bool {
        self.rows.iter().all(|r| r.push_vcdim >= self.t_vcdim)
    }

    /// With `t` all zeros the line is a prefix of `s` padded with zeros and
    /// cannot exceed the dimension of `s`. `None` when `t` has a one.
    pub fn line_bound_holds(&self) -> Option<bool> {
        (self.t.count_ones() == 0).then(|| self.rows.iter().all(|r| r.line_vcdim <= self.s_vcdim))
    }
}

/// The words `s[0..i] t` and `s[0..i] t[i..]` for each `i` in `range`.
pub fn push_and_line(
    s: &Word,
    t: &Word,
    range: impl IntoIterator<Item = usize>,
) -> Result<PushLineReport> {
    let mut rows = Vec::new();
    for i in range {
        if i > s.len() || i > t.len() {
            return Err(Error::OutOfRange {
                start: 0,
                end: i,
                len: s.len().min(t.len()),
            });
        }
        let head = s.substring(0, i)?;
        let push = head.concat(t);
        let line = head.concat(&t.substring(i, t.len())?);
        rows.push(PushLineRow {
            i,
            push_vcdim: vcdim_word(&push),
            push,
            line_vcdim: vcdim_word(&line),
            line,
        });
    }
    Ok(PushLineReport {
        s: s.clone(),
        t: t.clone(),
        s_vcdim: vcdim_word(s),
        t_vcdim: vcdim_word(t),
        rows,
    })
}

/// One sampled sequence `r_1, r_2, ...` of depth-`depth` words of dimension
/// at most `d`, where `r_j` agrees with the limit on its first `j` digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitSample {
    pub limit: Word,
    pub members: Vec<Word>,
    pub member_vcdims: Vec<usize>,
    /// Dimension of each prefix of the limit, lengths `1..=depth`.
    pub limit_profile: Vec<usize>,
}

impl LimitSample {
    pub fn closed(&self, d: usize) -> bool {
        self.member_vcdims.iter().all(|&v| v <= d) && self.limit_profile.iter().all(|&v| v <= d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub d: usize,
    pub depth: usize,
    pub seed: u64,
    pub samples: Vec<LimitSample>,
    /// `0^i s` for growing `i`: each keeps the dimension of `s` while the
    /// sequence tends to 0, which has dimension 0.
    pub escaping: Vec<(Word, usize)>,
}

impl LimitReport {
    pub fn holds(&self) -> bool {
        self.samples.iter().all(|s| s.closed(self.d))
    }
}

/// Random walk down the cover tree from `prefix` to depth `depth`.
fn random_leaf(prefix: &Word, d: usize, depth: usize, rng: &mut ChaCha8Rng) -> Word {
    let mut w = prefix.clone();
    while w.len() < depth {
        let children: Vec<Word> = [false, true]
            .into_iter()
            .map(|b| {
                let mut c = w.clone();
                c.push(b);
                c
            })
            .filter(|c| !vcdim_at_least(c, d + 1))
            .collect();
        // appending 0 to a word of dimension <= d never leaves the cover tree empty
        w = children[rng.gen_range(0..children.len())].clone();
    }
    w
}

/// Samples converging sequences inside the depth-`depth` cover for `d` and
/// checks that their limits stay in it.
pub fn limit_experiment(
    d: usize,
    depth: usize,
    samples: usize,
    seed: u64,
    escaping_from: &Word,
) -> Result<LimitReport> {
    if depth > COVER_CAP {
        return Err(Error::TooLong {
            len: depth,
            cap: COVER_CAP,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let limit = random_leaf(&Word::new(), d, depth, &mut rng);
        let members: Vec<Word> = (1..=depth)
            .map(|j| random_leaf(&limit.substring(0, j).expect("j <= depth"), d, depth, &mut rng))
            .collect();
        out.push(LimitSample {
            member_vcdims: members.iter().map(vcdim_word).collect(),
            limit_profile: dimension_profile(|i| limit.bit(i), depth)
                .iter()
                .map(|p| p.vcdim)
                .collect(),
            limit,
            members,
        });
    }
    let escaping = (0..=depth)
        .map(|i| {
            let w = escaping_from.pad_zeros(i, 0);
            let v = vcdim_word(&w);
            (w, v)
        })
        .collect();
    Ok(LimitReport {
        d,
        depth,
        seed,
        samples: out,
        escaping,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::cantor_bit;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(expansion(1, 2, 4).unwrap(), w("1000"));
        assert_eq!(expansion(1, 3, 6).unwrap(), w("010101"));
        assert_eq!(expansion(1, 1, 5).unwrap(), w("10000"));
        assert_eq!(expansion(0, 7, 3).unwrap(), w("000"));
        assert_eq!(expansion(3, 8, 5).unwrap(), w("01100"));
        assert_eq!(expansion(1, 6, 7).unwrap(), w("0010101"));
        assert!(expansion(1, 0, 3).is_err());
        assert!(expansion(3, 2, 3).is_err());
        assert!(expansion(1, 2, 0).is_err());
    }

    #[test]
    fn expansion_against_long_division() {
        for q in 1..=60u64 {
            for p in 0..q {
                let mut r = p;
                let expected = Word::from_fn(80, |_| {
                    r *= 2;
                    let bit = r >= q;
                    if bit {
                        r -= q;
                    }
                    bit
                });
                assert_eq!(expansion(p, q, 80).unwrap(), expected, "{p}/{q}");
            }
        }
    }

    #[test]
    fn period_data() {
        let e = BinaryExpansion::new(2, 6).unwrap();
        assert_eq!((e.p, e.q, e.preperiod, e.period), (1, 3, 0, 2));
        let e = BinaryExpansion::new(1, 12).unwrap();
        assert_eq!((e.preperiod, e.period), (2, 2));
        let e = BinaryExpansion::new(1, 47).unwrap();
        assert_eq!(e.period, 23);
        let e = BinaryExpansion::new(1, 4).unwrap();
        assert_eq!((e.preperiod, e.period), (2, 1));
    }

    #[test]
    fn profiles() {
        let third = RationalProfile::of(1, 3, 40).unwrap();
        assert!(third.last() <= 3);
        assert!(third.plateau_holds());
        let zero = dimension_profile(|_| false, 30);
        assert!(zero.iter().all(|p| p.vcdim == 0));
        let cantor = dimension_profile(cantor_bit, 81);
        assert!(cantor.windows(2).all(|w| w[0].vcdim <= w[1].vcdim));
        assert!(cantor.last().unwrap().vcdim > cantor[8].vcdim);
    }

    #[test]
    fn profile_matches_direct_computation() {
        let e = BinaryExpansion::new(5, 11).unwrap();
        for p in dimension_profile(|i| e.digit(i), 40) {
            assert_eq!(p.vcdim, vcdim_word(&e.prefix(p.n)));
        }
    }

    #[test]
    fn intervals() {
        let iv = DyadicInterval::of_prefix(&w("011"));
        assert_eq!((iv.k, iv.depth), (3, 3));
        assert_eq!(iv.lo(), (3, 8));
        assert_eq!(iv.hi(), (4, 8));
        assert_eq!(iv.prefix(), w("011"));
        assert!(DyadicInterval::of_prefix(&w("01")).contains(&iv));
        assert!(!DyadicInterval::of_prefix(&w("00")).contains(&iv));
    }

    #[test]
    fn cover_zero_has_one_interval() {
        let c = cover(0, 12, 1).unwrap();
        assert!(c.levels.iter().all(|l| l.count == 1));
        assert_eq!(c.intervals, vec![DyadicInterval { k: 0, depth: 12 }]);
    }

    #[test]
    fn cover_refines() {
        let c = cover(1, 9, 2).unwrap();
        let parent = cover(1, 8, 1).unwrap();
        assert!(c
            .intervals
            .iter()
            .all(|iv| parent.intervals.iter().any(|p| p.contains(iv))));
        assert_eq!(c.csv_rows().next().unwrap(), "0,9,0/512,1/512");
        assert!(cover(1, 21, 1).is_err());
    }

    #[test]
    fn push_and_line_examples() {
        let s = w("1101");
        let t = w("0010111");
        let r = push_and_line(&s, &t, 0..=4).unwrap();
        assert!(r.push_bound_holds());
        assert_eq!(r.rows[4].push, s.concat(&t));
        let zeros = Word::zeros(8);
        let r = push_and_line(&s, &zeros, 0..=4).unwrap();
        assert_eq!(r.line_bound_holds(), Some(true));
        assert!(push_and_line(&s, &t, [5]).is_err());
    }

    #[test]
    fn limits() {
        let r = limit_experiment(2, 12, 5, 1, &w("0010111")).unwrap();
        assert!(r.holds());
        assert!(r.escaping.iter().all(|(_, v)| *v == 3));
        let again = limit_experiment(2, 12, 5, 1, &w("0010111")).unwrap();
        assert_eq!(r, again);
    }
}
