//! Depth-first shattering search over partitions of a row space.
//!
//! Every search in this crate has the same shape: rows (ray start positions,
//! window positions, or trace indices) are partitioned by the pattern they
//! show on the current candidate set `A`; adding an element `x` splits each
//! class by the column of rows that carry `x`. A rule decides which halves of
//! the split must be non-empty. Shattering is hereditary along sorted
//! prefixes, so the search never revisits a rejected branch.
//!
//! Two reductions keep long words with repeated structure cheap. A row whose
//! ray (or window run) is a prefix of an earlier row's is dropped, since the
//! earlier row shows the same symbols wherever the later one shows anything.
//! And a candidate that splits the classes exactly like an earlier sibling is
//! skipped: its subtree is contained in the sibling's.

use std::collections::HashSet;
use std::hash::Hash;

use crate::word::{low_mask, Word};

pub(crate) trait RowSet: Clone + Eq + Hash {
    fn and(&self, other: &Self) -> Self;
    fn and_not(&self, other: &Self) -> Self;
    fn is_empty(&self) -> bool;
    fn count(&self) -> usize;
}

impl RowSet for u64 {
    #[inline]
    fn and(&self, other: &Self) -> Self {
        self & other
    }
    #[inline]
    fn and_not(&self, other: &Self) -> Self {
        self & !other
    }
    #[inline]
    fn is_empty(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn count(&self) -> usize {
        self.count_ones() as usize
    }
}

/// Row set wider than 64 rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Wide(pub Vec<u64>);

impl Wide {
    pub fn low(rows: usize, total: usize) -> Wide {
        let blocks = total.div_ceil(64);
        Wide(
            (0..blocks)
                .map(|k| {
                    let start = 64 * k;
                    if rows >= start + 64 {
                        u64::MAX
                    } else if rows > start {
                        low_mask(rows - start)
                    } else {
                        0
                    }
                })
                .collect(),
        )
    }

    pub fn empty(total: usize) -> Wide {
        Wide(vec![0; total.div_ceil(64)])
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
}

impl RowSet for Wide {
    fn and(&self, other: &Self) -> Self {
        Wide(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn and_not(&self, other: &Self) -> Self {
        Wide(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
    fn count(&self) -> usize {
        self.0.iter().map(|b| b.count_ones() as usize).sum()
    }
}

/// Which halves of a split must survive when an element joins the set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SplitRule {
    /// Only the rows carrying the new element need to cover every class;
    /// patterns without it are realised by truncating a longer substring.
    OneSide,
    /// Both halves of every class must be non-empty (plain shattering).
    BothSides,
}

pub(crate) struct Search<'a, R: RowSet> {
    pub columns: &'a [R],
    /// Rows still admissible once element `x` is in the set.
    pub ranges: Option<&'a [R]>,
    pub rule: SplitRule,
    /// Only `0` may be the first element.
    pub anchored: bool,
    pub cap: usize,
    /// Skip candidates that split the classes like an earlier sibling.
    pub dedup: bool,
}

impl<R: RowSet> Search<'_, R> {
    /// Lexicographically least largest set accepted by the rule.
    pub fn run(&self, all_rows: R) -> Vec<usize> {
        self.run_from(all_rows, Vec::new())
    }

    /// Like [`Search::run`], but only sets larger than `floor` count.
    pub fn run_above(&self, all_rows: R, floor: usize) -> Option<Vec<usize>> {
        // a placeholder of size `floor` stands in for the best set so far
        let best = self.run_from(all_rows, vec![usize::MAX; floor]);
        (best.len() > floor).then_some(best)
    }

    fn run_from(&self, all_rows: R, best: Vec<usize>) -> Vec<usize> {
        let mut state = (best, Vec::new());
        self.descend(&[all_rows], 0, &mut state);
        state.0
    }

    fn descend(&self, classes: &[R], from: usize, state: &mut (Vec<usize>, Vec<usize>)) {
        let (best, current) = state;
        if current.len() > best.len() {
            best.clone_from(current);
        }
        if best.len() >= self.cap {
            return;
        }
        let universe = self.columns.len();
        let end = if self.anchored && current.is_empty() {
            universe.min(1)
        } else {
            universe
        };
        let mut seen: HashSet<Vec<R>> = HashSet::new();
        for x in from..end {
            if state.1.len() + (universe - x) <= state.0.len() {
                break;
            }
            let Some(next) = self.extend(classes, x) else {
                continue;
            };
            if self.dedup && seen.contains(&next) {
                continue;
            }
            state.1.push(x);
            self.descend(&next, x + 1, state);
            state.1.pop();
            if state.0.len() >= self.cap {
                return;
            }
            if self.dedup {
                seen.insert(next);
            }
        }
    }

    fn extend(&self, classes: &[R], x: usize) -> Option<Vec<R>> {
        let column = &self.columns[x];
        // disjoint classes each need their own row carrying x
        if column.count() < classes.len() {
            return None;
        }
        let mut next = Vec::with_capacity(2 * classes.len());
        for class in classes {
            let class = match self.ranges {
                Some(ranges) => class.and(&ranges[x]),
                None => class.clone(),
            };
            let with = class.and(column);
            if with.is_empty() {
                return None;
            }
            let without = class.and_not(column);
            if self.rule == SplitRule::BothSides && without.is_empty() {
                return None;
            }
            next.push(with);
            next.push(without);
        }
        Some(next)
    }
}

/// Largest `d` with `2^d <= rows`.
pub(crate) fn log2_floor(rows: usize) -> usize {
    if rows == 0 {
        0
    } else {
        (usize::BITS - 1 - rows.leading_zeros()) as usize
    }
}

/// Ray columns: bit `i` of column `x` is symbol `i + x` of the word.
pub(crate) fn small_columns(bits: u64, len: usize) -> Vec<u64> {
    (0..len).map(|x| bits >> x).collect()
}

pub(crate) fn wide_columns(word: &Word) -> Vec<Wide> {
    (0..word.len()).map(|x| Wide(word.shifted_blocks(x))).collect()
}

/// Start positions whose suffix is not a prefix of an earlier suffix.
pub(crate) fn distinct_rows(word: &Word) -> Vec<usize> {
    let n = word.len();
    (0..n)
        .filter(|&i| !(0..i).any(|j| word.factors_equal(i, j, n - i)))
        .collect()
}

/// Columns and ranges over the rows `rows`: bit `r` of column `x` is symbol
/// `rows[r] + x`, bit `r` of range `x` says that symbol lies inside the word.
fn gathered<R: RowSet>(
    word: &Word,
    rows: &[usize],
    empty: impl Fn() -> R,
    set: impl Fn(&mut R, usize),
) -> (Vec<R>, Vec<R>) {
    let n = word.len();
    let mut columns = Vec::with_capacity(n);
    let mut ranges = Vec::with_capacity(n);
    for x in 0..n {
        let mut column = empty();
        let mut range = empty();
        for (r, &i) in rows.iter().enumerate() {
            if i + x < n {
                set(&mut range, r);
                if word.bit(i + x) {
                    set(&mut column, r);
                }
            }
        }
        columns.push(column);
        ranges.push(range);
    }
    (columns, ranges)
}

fn search_word(word: &Word, rule: SplitRule, cap: usize) -> Vec<usize> {
    fn run<R: RowSet>(columns: &[R], ranges: &[R], all: R, rule: SplitRule, cap: usize) -> Vec<usize> {
        Search {
            columns,
            // rays may run off the end; windows may not
            ranges: (rule == SplitRule::BothSides).then_some(ranges),
            rule,
            anchored: true,
            cap,
            dedup: columns.len() > 64,
        }
        .run(all)
    }
    let n = word.len();
    if let Some(bits) = word.as_u64() {
        let columns = small_columns(bits, n);
        let ranges: Vec<u64> = (0..n).map(|x| low_mask(n - x)).collect();
        return run(&columns, &ranges, low_mask(n), rule, cap);
    }
    let rows = distinct_rows(word);
    let k = rows.len();
    if k <= 64 {
        let (columns, ranges) = gathered(word, &rows, || 0u64, |r, i| *r |= 1 << i);
        run(&columns, &ranges, low_mask(k), rule, cap)
    } else if k == n {
        let columns = wide_columns(word);
        let ranges: Vec<Wide> = (0..n).map(|x| Wide::low(n - x, n)).collect();
        run(&columns, &ranges, Wide::low(n, n), rule, cap)
    } else {
        let (columns, ranges) = gathered(word, &rows, || Wide::empty(k), |r, i| r.set(i));
        run(&columns, &ranges, Wide::low(k, k), rule, cap)
    }
}

/// Largest set shattered by the substring family of a word, searched over
/// ray start positions. `cap` stops the search once a set of that size is found.
pub(crate) fn ray_search(word: &Word, cap: usize) -> Vec<usize> {
    search_word(word, SplitRule::OneSide, cap)
}

/// Largest full mask, anchored at offset 0.
pub(crate) fn mask_search(word: &Word, cap: usize) -> Vec<usize> {
    search_word(word, SplitRule::BothSides, cap)
}

/// A set larger than `floor` shattered by the width-`width` windows of a
/// word, anchored at 0. Over all widths the anchored sets suffice: a set
/// shattered at some width, moved down to 0, is shattered by narrower windows.
pub(crate) fn window_search(word: &Word, width: usize, floor: usize) -> Option<Vec<usize>> {
    let distinct: HashSet<Word> = word.windows(width).collect();
    let rows: Vec<Word> = distinct.into_iter().collect();
    fn run<R: RowSet>(columns: &[R], all: R, floor: usize) -> Option<Vec<usize>> {
        Search {
            columns,
            ranges: None,
            rule: SplitRule::BothSides,
            anchored: true,
            cap: usize::MAX,
            dedup: false,
        }
        .run_above(all, floor)
    }
    let k = rows.len();
    if k <= 64 {
        let columns: Vec<u64> = (0..width)
            .map(|a| rows.iter().enumerate().fold(0, |c, (r, w)| c | (w.bit(a) as u64) << r))
            .collect();
        run(&columns, low_mask(k), floor)
    } else {
        let mut columns = vec![Wide::empty(k); width];
        for (r, w) in rows.iter().enumerate() {
            for a in w.ones().iter() {
                columns[a].set(r);
            }
        }
        run(&columns, Wide::low(k, k), floor)
    }
}

/// Plain shattering search over an explicit list of traces given as column
/// sets over trace indices.
pub(crate) fn family_search<R: RowSet>(columns: &[R], all_rows: R, rows: usize) -> Vec<usize> {
    Search {
        columns,
        ranges: None,
        rule: SplitRule::BothSides,
        anchored: false,
        cap: log2_floor(rows),
        dedup: false,
    }
    .run(all_rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_low_masks() {
        assert_eq!(Wide::low(70, 130).0, vec![u64::MAX, 0b11_1111, 0]);
        assert_eq!(Wide::low(0, 10).0, vec![0]);
    }

    #[test]
    fn log2_floor_values() {
        assert_eq!(log2_floor(0), 0);
        assert_eq!(log2_floor(1), 0);
        assert_eq!(log2_floor(5), 2);
        assert_eq!(log2_floor(8), 3);
    }

    #[test]
    fn small_and_wide_paths_agree() {
        for bits in [0b0110u64, 0b1110100, 0b1011_0010_1101, 0xdead_beef] {
            let n = 64 - bits.leading_zeros() as usize + 2;
            let word = Word::from_u64(bits, n);
            let columns = wide_columns(&word);
            let wide = Search {
                columns: &columns,
                ranges: None,
                rule: SplitRule::OneSide,
                anchored: true,
                cap: usize::MAX,
                dedup: false,
            }
            .run(Wide::low(n, n));
            assert_eq!(wide, ray_search(&word, usize::MAX));
        }
    }

    #[test]
    fn distinct_rows_of_periodic_word() {
        let word = Word::parse(&"0010111".repeat(12)).unwrap();
        assert_eq!(distinct_rows(&word), (0..7).collect::<Vec<_>>());
        let word = Word::parse("0110").unwrap();
        assert_eq!(distinct_rows(&word), vec![0, 1, 2]);
    }

    fn unreduced(word: &Word, rule: SplitRule) -> Vec<usize> {
        let n = word.len();
        let columns = wide_columns(word);
        let ranges: Vec<Wide> = (0..n).map(|x| Wide::low(n - x, n)).collect();
        Search {
            columns: &columns,
            ranges: (rule == SplitRule::BothSides).then_some(&ranges[..]),
            rule,
            anchored: true,
            cap: usize::MAX,
            dedup: false,
        }
        .run(Wide::low(n, n))
    }

    #[test]
    fn row_reduction_agrees_with_full_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut words: Vec<Word> = ["011", "0010111", "10", "0001", "110100"]
            .iter()
            .map(|b| Word::parse(&b.repeat(90 / b.len() + 1)).unwrap())
            .collect();
        for _ in 0..6 {
            let n = rng.gen_range(65..110);
            let bits: String = (0..n).map(|_| if rng.gen_bool(0.4) { '1' } else { '0' }).collect();
            words.push(Word::parse(&bits).unwrap());
            // a random word followed by repeats of a short block
            let tail = "0110".repeat(20);
            words.push(Word::parse(&format!("{}{}", &bits[..10], tail)).unwrap());
        }
        for word in &words {
            for rule in [SplitRule::OneSide, SplitRule::BothSides] {
                assert_eq!(search_word(word, rule, usize::MAX), unreduced(word, rule), "{word:?}");
            }
        }
    }
}
