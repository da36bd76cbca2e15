//! Bit-packed binary words and the index sets they induce.
//!
//! Symbol `i` of a [`Word`] lives in bit `i % 64` of block `i / 64`. Bits past
//! `len` are always zero, so block-wise operations never need to re-mask.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on the length of words read from text.
pub const DEFAULT_MAX_LEN: usize = 4096;

/// `all_substrings` refuses to materialise the substring set above this length.
pub const MATERIALIZE_LIMIT: usize = 64;

/// Run-length encoding kicks in above this many symbols in [`Word::render_compact`].
pub const RLE_THRESHOLD: usize = 120;

#[inline]
fn blocks_for(len: usize) -> usize {
    len.div_ceil(64)
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A finite string over `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    blocks: Vec<u64>,
    len: usize,
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Word {
            blocks: vec![0; blocks_for(len)],
            len,
        }
    }

    pub fn ones_word(len: usize) -> Self {
        Self::zeros(len).complement()
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut w = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                w.blocks[i / 64] |= 1 << (i % 64);
            }
        }
        w
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    /// Builds a word of length `len <= 64` whose symbol `i` is bit `i` of `bits`.
    pub fn from_u64(bits: u64, len: usize) -> Self {
        assert!(len <= 64, "from_u64 takes at most 64 symbols");
        Word {
            blocks: if len == 0 {
                Vec::new()
            } else {
                vec![bits & low_mask(len)]
            },
            len,
        }
    }

    /// Builds a word of length `len` with ones exactly at `positions`.
    /// Positions past `len` are ignored.
    pub fn with_ones(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut w = Self::zeros(len);
        for p in positions {
            if p < len {
                w.blocks[p / 64] |= 1 << (p % 64);
            }
        }
        w
    }

    /// Strict parser: only `'0'` and `'1'` are accepted.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_cap(text, DEFAULT_MAX_LEN)
    }

    pub fn parse_with_cap(text: &str, cap: usize) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for (position, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                found => return Err(Error::InvalidSymbol { position, found }),
            }
        }
        if bits.len() > cap {
            return Err(Error::TooLong {
                len: bits.len(),
                cap,
            });
        }
        Ok(Self::from_bits(&bits))
    }

    /// Parses the extended text format: plain symbols, `x*k` repetition of the
    /// preceding symbol or parenthesised group, `·` as a synonym for `*`, and
    /// insignificant whitespace. `"0*3(10)*2 1"` is `"0001010" + "1"`.
    pub fn parse_expr(text: &str) -> Result<Self> {
        Self::parse_expr_with_cap(text, DEFAULT_MAX_LEN)
    }

    pub fn parse_expr_with_cap(text: &str, cap: usize) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut parser = ExprParser {
            chars: &chars,
            pos: 0,
            cap,
        };
        let bits = parser.sequence(0)?;
        Ok(Self::from_bits(&bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Symbol at `i`. Panics when `i >= len`.
    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for word of length {}", self.len);
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| (self.blocks[i / 64] >> (i % 64)) & 1 == 1)
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.blocks[i / 64] |= 1 << (i % 64);
        } else {
            self.blocks[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(64) {
            self.blocks.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// The packed form for words of at most 64 symbols.
    pub fn as_u64(&self) -> Option<u64> {
        match self.len {
            0 => Some(0),
            1..=64 => Some(self.blocks[0]),
            _ => None,
        }
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.blocks[i / 64] >> (i % 64)) & 1 == 1)
    }

    /// 64 symbols starting at `pos`, zero-padded past the end.
    #[inline]
    fn chunk_at(&self, pos: usize) -> u64 {
        let b = pos / 64;
        let off = pos % 64;
        let lo = self.blocks.get(b).copied().unwrap_or(0) >> off;
        if off == 0 {
            lo
        } else {
            lo | (self.blocks.get(b + 1).copied().unwrap_or(0) << (64 - off))
        }
    }

    /// Whether the factors of length `len` starting at `a` and `b` agree.
    pub(crate) fn factors_equal(&self, a: usize, b: usize, len: usize) -> bool {
        let mut done = 0;
        while done < len {
            let step = (len - done).min(64);
            let mask = low_mask(step);
            if (self.chunk_at(a + done) ^ self.chunk_at(b + done)) & mask != 0 {
                return false;
            }
            done += step;
        }
        true
    }

    /// Blocks of the word shifted left by `offset`: symbol `i` of the result is
    /// symbol `i + offset` of `self`, zero past the end. The result keeps
    /// `blocks_for(len)` blocks.
    pub(crate) fn shifted_blocks(&self, offset: usize) -> Vec<u64> {
        (0..self.blocks.len())
            .map(|k| self.chunk_at(offset + 64 * k))
            .collect()
    }

    /// Positions carrying a 1.
    pub fn ones(&self) -> IndexSet {
        let mut members = Vec::with_capacity(self.count_ones());
        for (k, &block) in self.blocks.iter().enumerate() {
            let mut b = block;
            while b != 0 {
                members.push(64 * k + b.trailing_zeros() as usize);
                b &= b - 1;
            }
        }
        IndexSet(members)
    }

    /// Symbols `start..end`, re-indexed from zero.
    pub fn substring(&self, start: usize, end: usize) -> Result<Word> {
        if start > end || end > self.len {
            return Err(Error::OutOfRange {
                start,
                end,
                len: self.len,
            });
        }
        Ok(self.extract(start, end - start))
    }

    /// Unchecked substring: `width` symbols from `start`.
    pub(crate) fn extract(&self, start: usize, width: usize) -> Word {
        let mut blocks: Vec<u64> = (0..blocks_for(width))
            .map(|k| self.chunk_at(start + 64 * k))
            .collect();
        if let Some(last) = blocks.last_mut() {
            let tail = width % 64;
            if tail != 0 {
                *last &= low_mask(tail);
            }
        }
        Word { blocks, len: width }
    }

    /// Every substring including the empty one. Only for words up to
    /// [`MATERIALIZE_LIMIT`] symbols; use [`Word::windows`] beyond that.
    pub fn all_substrings(&self) -> Result<BTreeSet<Word>> {
        if self.len > MATERIALIZE_LIMIT {
            return Err(Error::TooLong {
                len: self.len,
                cap: MATERIALIZE_LIMIT,
            });
        }
        let mut out = BTreeSet::new();
        out.insert(Word::new());
        for i in 0..self.len {
            for j in i + 1..=self.len {
                out.insert(self.extract(i, j - i));
            }
        }
        Ok(out)
    }

    /// Streaming iterator over the `len - width + 1` windows of a given width.
    pub fn windows(&self, width: usize) -> impl Iterator<Item = Word> + '_ {
        let count = if width == 0 || width > self.len {
            0
        } else {
            self.len - width + 1
        };
        (0..count).map(move |i| self.extract(i, width))
    }

    /// Number of distinct substrings of length `n`.
    pub fn complexity(&self, n: usize) -> Result<usize> {
        if n == 0 || n > self.len {
            return Err(Error::InvalidArgument {
                name: "substring length",
                constraint: "between 1 and the word length",
                value: n,
            });
        }
        let count = self.len - n + 1;
        if n <= 64 {
            let mask = low_mask(n);
            let seen: HashSet<u64> = (0..count).map(|i| self.chunk_at(i) & mask).collect();
            Ok(seen.len())
        } else {
            let seen: HashSet<Vec<u64>> = (0..count).map(|i| self.extract(i, n).blocks).collect();
            Ok(seen.len())
        }
    }

    /// Number of maximal blocks of consecutive ones.
    pub fn alternations(&self) -> usize {
        let mut count = 0;
        let mut prev = false;
        for b in self.iter() {
            if b && !prev {
                count += 1;
            }
            prev = b;
        }
        count
    }

    pub fn complement(&self) -> Word {
        let mut blocks: Vec<u64> = self.blocks.iter().map(|b| !b).collect();
        if let Some(last) = blocks.last_mut() {
            let tail = self.len % 64;
            if tail != 0 {
                *last &= low_mask(tail);
            }
        }
        Word {
            blocks,
            len: self.len,
        }
    }

    pub fn reverse(&self) -> Word {
        Word::from_fn(self.len, |i| self.bit(self.len - 1 - i))
    }

    /// Replaces each symbol `c` by `0^(p-1) c`.
    pub fn dilate(&self, p: usize) -> Result<Word> {
        if p < 2 {
            return Err(Error::InvalidArgument {
                name: "dilation factor",
                constraint: "at least 2",
                value: p,
            });
        }
        Ok(self.dilate_unchecked(p))
    }

    /// Like [`Word::dilate`] but treats `p = 1` as the identity.
    pub(crate) fn dilate_unchecked(&self, p: usize) -> Word {
        let len = self.len * p;
        Word::with_ones(len, self.ones().iter().map(|i| p * i + p - 1))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Word::zeros(self.len + other.len);
        out.blocks[..self.blocks.len()].copy_from_slice(&self.blocks);
        for i in other.ones().iter() {
            let p = self.len + i;
            out.blocks[p / 64] |= 1 << (p % 64);
        }
        out
    }

    /// `0^left · self · 0^right`.
    pub fn pad_zeros(&self, left: usize, right: usize) -> Word {
        Word::with_ones(
            left + self.len + right,
            self.ones().iter().map(|i| i + left),
        )
    }

    /// `self` repeated `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        let n = self.len;
        Word::from_fn(n * times, |i| self.bit(i % n))
    }

    /// The suffixes starting at `0, 1, ..., len - 1`.
    pub fn right_rays(&self) -> Vec<Word> {
        (0..self.len)
            .map(|i| self.extract(i, self.len - i))
            .collect()
    }

    /// Plain `0`/`1` rendering.
    pub fn render(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    /// Maximal runs as `(symbol, length)` pairs.
    pub fn runs(&self) -> Vec<(bool, usize)> {
        let mut runs: Vec<(bool, usize)> = Vec::new();
        for b in self.iter() {
            match runs.last_mut() {
                Some((s, n)) if *s == b => *n += 1,
                _ => runs.push((b, 1)),
            }
        }
        runs
    }

    /// Run-length encoding such as `1·1 0·3 1·1`. Re-parses with [`Word::parse_expr`].
    pub fn render_rle(&self) -> String {
        self.runs()
            .iter()
            .map(|&(b, n)| format!("{}·{}", if b { '1' } else { '0' }, n))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Plain up to [`RLE_THRESHOLD`] symbols, run-length encoded above.
    pub fn render_compact(&self) -> String {
        if self.len > RLE_THRESHOLD {
            self.render_rle()
        } else {
            self.render()
        }
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        prefix.len <= self.len && self.extract(0, prefix.len) == *prefix
    }

    /// Removes trailing zeros.
    pub fn strip_trailing_zeros(&self) -> Word {
        let keep = self.ones().largest().map_or(0, |m| m + 1);
        self.extract(0, keep)
    }

    /// True when `other` occurs as a contiguous block of `self`.
    pub fn contains_factor(&self, other: &Word) -> bool {
        if other.len > self.len {
            return false;
        }
        (0..=self.len - other.len).any(|i| self.extract(i, other.len) == *other)
    }
}

impl Ord for Word {
    /// Lexicographic on symbols, with a proper prefix ordered first.
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.len.min(other.len);
        for i in 0..common {
            match (self.bit(i), other.bit(i)) {
                (false, true) => return Ordering::Less,
                (true, false) => return Ordering::Greater,
                _ => {}
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?})", self.render_compact())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render_compact())
    }
}

struct ExprParser<'a> {
    chars: &'a [char],
    pos: usize,
    cap: usize,
}

impl ExprParser<'_> {
    fn sequence(&mut self, depth: usize) -> Result<Vec<bool>> {
        let mut out = Vec::new();
        loop {
            let Some(&c) = self.chars.get(self.pos) else {
                if depth > 0 {
                    return Err(Error::Syntax {
                        position: self.pos,
                        reason: "unclosed parenthesis",
                    });
                }
                return Ok(out);
            };
            let atom = match c {
                c if c.is_whitespace() => {
                    self.pos += 1;
                    continue;
                }
                '0' | '1' => {
                    self.pos += 1;
                    vec![c == '1']
                }
                '(' => {
                    self.pos += 1;
                    let inner = self.sequence(depth + 1)?;
                    self.pos += 1; // the matching ')'
                    inner
                }
                ')' if depth > 0 => return Ok(out),
                found => {
                    return Err(Error::InvalidSymbol {
                        position: self.pos,
                        found,
                    })
                }
            };
            let times = self.repetition()?;
            let added = atom.len().saturating_mul(times);
            if out.len().saturating_add(added) > self.cap {
                return Err(Error::TooLong {
                    len: out.len().saturating_add(added),
                    cap: self.cap,
                });
            }
            for _ in 0..times {
                out.extend_from_slice(&atom);
            }
        }
    }

    fn repetition(&mut self) -> Result<usize> {
        match self.chars.get(self.pos) {
            Some('*') | Some('·') => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(Error::Syntax {
                        position: start,
                        reason: "expected a repetition count",
                    });
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                digits.parse().map_err(|_| Error::Syntax {
                    position: start,
                    reason: "repetition count too large",
                })
            }
            _ => Ok(1),
        }
    }
}

/// A finite set of natural numbers kept as a strictly increasing list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn largest(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Packed form when every member is below 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.largest() {
            None => Some(0),
            Some(m) if m < 64 => Some(self.0.iter().fold(0, |acc, &i| acc | (1 << i))),
            Some(_) => None,
        }
    }

    pub fn from_mask(mut mask: u64) -> Self {
        let mut members = Vec::with_capacity(mask.count_ones() as usize);
        while mask != 0 {
            members.push(mask.trailing_zeros() as usize);
            mask &= mask - 1;
        }
        IndexSet(members)
    }

    /// `{x - shift : x in self}`; every member must be at least `shift`.
    pub fn shifted_down(&self, shift: usize) -> IndexSet {
        IndexSet(self.0.iter().map(|&x| x - shift).collect())
    }

    /// All initial segments, from the empty set up to the whole set.
    pub fn telescope(&self) -> Vec<IndexSet> {
        (0..=self.0.len())
            .map(|i| IndexSet(self.0[..i].to_vec()))
            .collect()
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        IndexSet(self.iter().filter(|&x| other.contains(x)).collect())
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        IndexSet(v)
    }
}

impl<const N: usize> From<[usize; N]> for IndexSet {
    fn from(a: [usize; N]) -> Self {
        a.into_iter().collect()
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Free-function form of [`IndexSet::telescope`].
pub fn telescope(set: &IndexSet) -> Vec<IndexSet> {
    set.telescope()
}
