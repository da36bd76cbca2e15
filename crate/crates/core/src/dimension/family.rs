use std::collections::BTreeSet;

use serde::Serialize;

use super::engine::{family_search, log2_floor, Wide};
use crate::error::{Error, Result};
use crate::word::{low_mask, IndexSet, Word};

/// A set system over `{0, .., universe_size - 1}` with deduplicated members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceFamily {
    pub universe_size: usize,
    pub traces: BTreeSet<IndexSet>,
}

impl TraceFamily {
    pub fn new(universe_size: usize, traces: impl IntoIterator<Item = IndexSet>) -> Self {
        TraceFamily {
            universe_size,
            traces: traces.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn contains(&self, set: &IndexSet) -> bool {
        self.traces.contains(set)
    }

    /// Elements that occur in at least one trace.
    pub fn support(&self) -> IndexSet {
        self.traces.iter().flat_map(|t| t.iter()).collect()
    }
}

/// The family `{n(s) : s a substring of w}`, assembled as the union of the
/// telescopes of the right rays.
pub fn trace_family(word: &Word) -> TraceFamily {
    let ones = word.ones();
    let members = ones.members();
    let mut traces = BTreeSet::new();
    traces.insert(IndexSet::new());
    for start in 0..word.len() {
        let first = members.partition_point(|&p| p < start);
        let ray: IndexSet = members[first..].iter().map(|&p| p - start).collect();
        traces.extend(ray.telescope());
    }
    TraceFamily {
        universe_size: word.len(),
        traces,
    }
}

/// The family `{n(s) : s a substring of w of length width}`.
pub fn window_family(word: &Word, width: usize) -> Result<TraceFamily> {
    if width == 0 || width > word.len() {
        return Err(Error::InvalidArgument {
            name: "window width",
            constraint: "between 1 and the word length",
            value: width,
        });
    }
    Ok(TraceFamily {
        universe_size: width,
        traces: word.windows(width).map(|s| s.ones()).collect(),
    })
}

/// Whether every subset of `set` arises as `t ∩ set` for some trace `t`.
pub fn shatters(family: &TraceFamily, set: &IndexSet) -> bool {
    let patterns: BTreeSet<IndexSet> = family.traces.iter().map(|t| t.intersection(set)).collect();
    set.len() < usize::BITS as usize && patterns.len() == 1usize << set.len()
}

/// Largest shattered subset and its size. The witness is the
/// lexicographically least among the largest shattered sets.
///
/// An empty family is given dimension 0 with the empty witness.
pub fn vcdim(family: &TraceFamily) -> (usize, IndexSet) {
    let support = family.support();
    let rows = family.traces.len();
    if rows == 0 || support.is_empty() {
        return (0, IndexSet::new());
    }
    // columns only over elements that occur somewhere; others shatter nothing
    let elements = support.members();
    let witness = if rows <= 64 {
        let mut columns = vec![0u64; elements.len()];
        for (r, t) in family.traces.iter().enumerate() {
            for x in t.iter() {
                let k = elements.binary_search(&x).expect("in support");
                columns[k] |= 1 << r;
            }
        }
        family_search(&columns, low_mask(rows), rows)
    } else {
        let mut columns = vec![Wide(vec![0; rows.div_ceil(64)]); elements.len()];
        for (r, t) in family.traces.iter().enumerate() {
            for x in t.iter() {
                let k = elements.binary_search(&x).expect("in support");
                columns[k].set(r);
            }
        }
        family_search(&columns, Wide::low(rows, rows), rows)
    };
    let witness: IndexSet = witness.into_iter().map(|k| elements[k]).collect();
    debug_assert!(
        (witness.len() as u128) <= log2_floor(rows) as u128
            && rows as u128 <= super::sauer_bound(support.len(), witness.len())
    );
    (witness.len(), witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn fam(sets: &[&[usize]]) -> BTreeSet<IndexSet> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn trace_family_examples() {
        assert_eq!(
            trace_family(&w("011")).traces,
            fam(&[&[], &[0], &[1], &[0, 1], &[1, 2]])
        );
        assert_eq!(trace_family(&w("0")).traces, fam(&[&[]]));
        assert_eq!(
            trace_family(&w("01100")).traces,
            fam(&[&[], &[0], &[1], &[0, 1], &[1, 2]])
        );
    }

    #[test]
    fn window_family_examples() {
        assert_eq!(window_family(&w("011"), 2).unwrap().traces, fam(&[&[1], &[0, 1]]));
        assert_eq!(window_family(&w("0000"), 2).unwrap().traces, fam(&[&[]]));
        assert_eq!(
            window_family(&w("01100"), 2).unwrap().traces,
            fam(&[&[], &[0], &[1], &[0, 1]])
        );
        assert!(window_family(&w("01"), 3).is_err());
        assert!(window_family(&w("01"), 0).is_err());
    }

    #[test]
    fn shatters_examples() {
        let f = trace_family(&w("011"));
        assert!(shatters(&f, &IndexSet::from([0, 1])));
        assert!(shatters(&f, &IndexSet::new()));
        assert!(!shatters(&f, &IndexSet::from([0, 1, 2])));
    }

    #[test]
    fn vcdim_examples() {
        let (d, witness) = vcdim(&trace_family(&w("011")));
        assert_eq!((d, witness), (2, IndexSet::from([0, 1])));
        assert_eq!(vcdim(&trace_family(&Word::zeros(6))).0, 0);
        assert_eq!(vcdim(&trace_family(&w("0010111"))).0, 3);
        let empty = TraceFamily::new(3, []);
        assert_eq!(vcdim(&empty), (0, IndexSet::new()));
    }

    #[test]
    fn vcdim_wide_family() {
        // 2^7 = 128 traces: the full power set of {0..6}
        let traces = (0u64..128).map(IndexSet::from_mask);
        let f = TraceFamily::new(7, traces);
        assert_eq!(vcdim(&f), (7, IndexSet::from([0, 1, 2, 3, 4, 5, 6])));
    }

    #[test]
    fn vcdim_witness_is_lex_least() {
        // shatters {1,2} and {2,3} but not {0,1}
        let f = TraceFamily::new(
            4,
            fam(&[&[], &[1], &[2], &[1, 2], &[3], &[2, 3], &[0]]),
        );
        assert_eq!(vcdim(&f), (2, IndexSet::from([1, 2])));
    }
}
