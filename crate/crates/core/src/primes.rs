//! d-prime words: dimension `d`, and every proper substring has dimension
//! below `d`. By substring monotonicity it is enough to look at the two
//! one-symbol trims.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::dimension::{vcdim_at_least, vcdim_word};
use crate::error::{Error, Result};
use crate::par::map_chunks;
use crate::word::{Word, DEFAULT_MAX_LEN};

/// Longest words `enumerate_primes` scans by default.
pub const EXHAUSTIVE_CAP: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeRecord {
    pub word: Word,
    pub d: usize,
    pub left_drop_dim: usize,
    pub right_drop_dim: usize,
}

impl PrimeRecord {
    /// The record for `word` if it is prime of its own dimension.
    pub fn of(word: &Word) -> Option<PrimeRecord> {
        let d = vcdim_word(word);
        if word.is_empty() {
            return Some(PrimeRecord {
                word: word.clone(),
                d,
                left_drop_dim: 0,
                right_drop_dim: 0,
            });
        }
        let n = word.len();
        let left = vcdim_word(&word.substring(1, n).expect("in range"));
        let right = vcdim_word(&word.substring(0, n - 1).expect("in range"));
        (left < d && right < d).then(|| PrimeRecord {
            word: word.clone(),
            d,
            left_drop_dim: left,
            right_drop_dim: right,
        })
    }
}

/// Length first, then lexicographic.
pub fn shortlex(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn is_prime(word: &Word, d: usize) -> bool {
    if word.is_empty() {
        // no proper substrings: prime of dimension 0
        return d == 0;
    }
    let n = word.len();
    let left = word.substring(1, n).expect("in range");
    let right = word.substring(0, n - 1).expect("in range");
    d > 0
        && vcdim_at_least(word, d)
        && !vcdim_at_least(word, d + 1)
        && !vcdim_at_least(&left, d)
        && !vcdim_at_least(&right, d)
}

/// A prime substring of the same dimension: trim the right end while the
/// dimension holds, then the left end.
pub fn extract_prime(word: &Word) -> Result<Word> {
    if word.is_empty() {
        return Err(Error::Precondition("extract_prime needs a nonempty word".into()));
    }
    let d = vcdim_word(word);
    let mut end = word.len();
    while end > 0 && vcdim_at_least(&word.substring(0, end - 1)?, d) {
        end -= 1;
    }
    let mut start = 0;
    while start < end && vcdim_at_least(&word.substring(start + 1, end)?, d) {
        start += 1;
    }
    word.substring(start, end)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub jobs: usize,
    /// Skip words with fewer than `d / 2` blocks of ones, which cannot reach
    /// dimension `d` (`vcdim <= 2 * alt`).
    pub alternation_prune: bool,
    pub cap: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            jobs: 1,
            alternation_prune: false,
            cap: EXHAUSTIVE_CAP,
        }
    }
}

/// Every `d`-prime word of length at most `max_len`, in shortlex order.
pub fn enumerate_primes(d: usize, max_len: usize) -> Result<Vec<PrimeRecord>> {
    enumerate_primes_with(d, max_len, &ScanOptions::default())
}

/// Bits of the candidate index covered by one work chunk.
const CHUNK_BITS: usize = 12;

pub fn enumerate_primes_with(d: usize, max_len: usize, options: &ScanOptions) -> Result<Vec<PrimeRecord>> {
    if max_len > options.cap || max_len > 63 {
        return Err(Error::TooLong {
            len: max_len,
            cap: options.cap.min(63),
        });
    }
    if d == 0 {
        return Ok(vec![PrimeRecord::of(&Word::new()).expect("empty word")]);
    }
    let min_alt = d.div_ceil(2);
    let mut found = Vec::new();
    for len in 1..=max_len {
        // a prime of positive dimension ends in 1; bits 0..len-1 are free
        let free = len - 1;
        let chunk_bits = free.min(CHUNK_BITS);
        let chunks = 1usize << (free - chunk_bits);
        let top = 1u64 << (len - 1);
        let batch = map_chunks(options.jobs, chunks, |c| {
            let base = (c as u64) << chunk_bits;
            (0..1u64 << chunk_bits)
                .filter_map(|low| {
                    let bits = base | low | top;
                    let word = Word::from_u64(bits, len);
                    if options.alternation_prune && word.alternations() < min_alt {
                        return None;
                    }
                    is_prime(&word, d).then(|| PrimeRecord::of(&word).expect("prime"))
                })
                .collect()
        });
        found.extend(batch);
    }
    found.sort_by(|a, b| shortlex(&a.word, &b.word));
    Ok(found)
}

/// The two shapes of 2-prime words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TwoPrimeForm {
    /// `1 0^k 1 0^d 1` with `k < d`.
    Form1 { k: usize, d: usize },
    /// `0^(d+1) 1 0^d 1`.
    Form2 { d: usize },
    NotPrime,
}

impl fmt::Display for TwoPrimeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoPrimeForm::Form1 { k, d } => write!(f, "form1(k={k};d={d})"),
            TwoPrimeForm::Form2 { d } => write!(f, "form2(d={d})"),
            TwoPrimeForm::NotPrime => write!(f, "not-prime"),
        }
    }
}

/// Matches the two 2-prime shapes from the run structure alone.
pub fn classify_2prime(word: &Word) -> TwoPrimeForm {
    let r = word.runs();
    let pattern: Vec<bool> = r.iter().map(|&(s, _)| s).collect();
    let ones_single = r.iter().filter(|&&(s, _)| s).all(|&(_, l)| l == 1);
    match pattern.as_slice() {
        // 1 0^d 1 with two adjacent leading ones: 11 0^d 1, k = 0
        [true, false, true] if r[0].1 == 2 && r[2].1 == 1 => TwoPrimeForm::Form1 { k: 0, d: r[1].1 },
        [true, false, true, false, true] if ones_single && r[1].1 < r[3].1 => {
            TwoPrimeForm::Form1 { k: r[1].1, d: r[3].1 }
        }
        // 0^(d+1) 1 0^d 1 with d >= 1
        [false, true, false, true] if ones_single && r[0].1 == r[2].1 + 1 => TwoPrimeForm::Form2 { d: r[2].1 },
        // d = 0: 011
        [false, true] if r[0].1 == 1 && r[1].1 == 2 => TwoPrimeForm::Form2 { d: 0 },
        _ => TwoPrimeForm::NotPrime,
    }
}

/// The three shapes of dimension-1 words, up to trailing zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Vc1Form {
    /// `0^a 1`, `a >= 1`.
    ZerosOne(usize),
    /// `1^a`, `a >= 1`.
    Ones(usize),
    /// `0^a (1 0^b)^c 1`, `0 <= a <= b`, `b >= 1`, `c >= 1`.
    Lattice { a: usize, b: usize, c: usize },
}

impl fmt::Display for Vc1Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vc1Form::ZerosOne(a) => write!(f, "zeros-one(a={a})"),
            Vc1Form::Ones(a) => write!(f, "ones(a={a})"),
            Vc1Form::Lattice { a, b, c } => write!(f, "lattice(a={a};b={b};c={c})"),
        }
    }
}

pub fn vc1_form(word: &Word) -> Option<Vc1Form> {
    let r = word.strip_trailing_zeros().runs();
    let (lead, rest) = match r.first() {
        None => return None,
        Some(&(false, z)) => (z, &r[1..]),
        Some(_) => (0, &r[..]),
    };
    match rest {
        [(true, ones)] if lead == 0 => Some(Vc1Form::Ones(*ones)),
        [(true, 1)] => Some(Vc1Form::ZerosOne(lead)),
        _ => {
            // 1 0^b 1 0^b ... 1 with every block of ones a single symbol
            if rest.iter().any(|&(s, l)| s && l != 1) || rest.len() < 3 {
                return None;
            }
            let b = rest[1].1;
            let gaps_equal = rest.iter().filter(|&&(s, _)| !s).all(|&(_, l)| l == b);
            let c = rest.len() / 2;
            (gaps_equal && lead <= b).then_some(Vc1Form::Lattice { a: lead, b, c })
        }
    }
}

/// `00 (10)^k 111`.
pub fn family_3prime(k: usize) -> Word {
    let mut text = String::from("00");
    for _ in 0..k {
        text.push_str("10");
    }
    text.push_str("111");
    Word::parse(&text).expect("binary literal")
}

/// Exponent `scale * param + offset`, or a constant when `param` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub param: Option<char>,
    pub scale: i64,
    pub offset: i64,
}

impl Exponent {
    pub const fn of(param: char) -> Self {
        Exponent {
            param: Some(param),
            scale: 1,
            offset: 0,
        }
    }

    pub const fn affine(param: char, scale: i64, offset: i64) -> Self {
        Exponent {
            param: Some(param),
            scale,
            offset,
        }
    }

    fn eval(&self, params: &BTreeMap<char, usize>) -> Result<usize> {
        let base = match self.param {
            Some(p) => *params
                .get(&p)
                .ok_or_else(|| Error::Precondition(format!("missing parameter {p}")))? as i64,
            None => 0,
        };
        let value = self.scale * base + self.offset;
        usize::try_from(value).map_err(|_| Error::Precondition(format!("negative exponent {value}")))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.param, self.scale, self.offset) {
            (None, _, o) => write!(f, "{o}"),
            (Some(p), 1, 0) => write!(f, "{p}"),
            (Some(p), 1, o) if o < 0 => write!(f, "({p}{o})"),
            (Some(p), 1, o) => write!(f, "({p}+{o})"),
            (Some(p), s, 0) => write!(f, "{s}{p}"),
            (Some(p), s, o) if o < 0 => write!(f, "({s}{p}{o})"),
            (Some(p), s, o) => write!(f, "({s}{p}+{o})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    Literal(&'static str),
    Power(&'static str, Exponent),
}

/// A parameterised product of literal blocks and powers.
#[derive(Clone, Debug)]
pub struct FamilyTemplate {
    pub id: &'static str,
    pub blocks: Vec<Block>,
    pub params: Vec<char>,
    /// Constraint on the parameters, shown alongside the pattern.
    pub constraint_text: &'static str,
    pub admissible: fn(&BTreeMap<char, usize>) -> bool,
    /// Dimension every member is expected to be prime of.
    pub d: usize,
}

impl FamilyTemplate {
    pub fn pattern(&self) -> String {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Literal(s) => s.to_string(),
                Block::Power(s, e) if s.len() == 1 => format!("{s}^{e}"),
                Block::Power(s, e) => format!("({s})^{e}"),
            })
            .collect()
    }

    pub fn instantiate(&self, params: &BTreeMap<char, usize>) -> Result<Word> {
        let mut word = Word::new();
        for block in &self.blocks {
            match block {
                Block::Literal(s) => word = word.concat(&Word::parse(s)?),
                Block::Power(s, e) => {
                    let times = e.eval(params)?;
                    let len = word.len() + s.len() * times;
                    if len > DEFAULT_MAX_LEN {
                        return Err(Error::TooLong {
                            len,
                            cap: DEFAULT_MAX_LEN,
                        });
                    }
                    word = word.concat(&Word::parse(s)?.repeat(times));
                }
            }
        }
        Ok(word)
    }

    /// Admissible parameter assignments within the given inclusive ranges,
    /// in lexicographic order of the parameter values.
    pub fn assignments(&self, ranges: &BTreeMap<char, (usize, usize)>) -> Result<Vec<BTreeMap<char, usize>>> {
        let mut all = vec![BTreeMap::new()];
        for &p in &self.params {
            let &(lo, hi) = ranges
                .get(&p)
                .ok_or_else(|| Error::Precondition(format!("no range given for parameter {p}")))?;
            all = all
                .into_iter()
                .flat_map(|partial| {
                    (lo..=hi).map(move |v| {
                        let mut next = partial.clone();
                        next.insert(p, v);
                        next
                    })
                })
                .collect();
        }
        Ok(all.into_iter().filter(|a| (self.admissible)(a)).collect())
    }
}

fn get(params: &BTreeMap<char, usize>, p: char) -> usize {
    params.get(&p).copied().unwrap_or(0)
}

/// The built-in families, by id.
pub fn templates() -> Vec<FamilyTemplate> {
    vec![
        FamilyTemplate {
            id: "alternating",
            blocks: vec![
                Block::Literal("00"),
                Block::Power("10", Exponent::of('k')),
                Block::Literal("111"),
            ],
            params: vec!['k'],
            constraint_text: "k >= 1",
            admissible: |p| get(p, 'k') >= 1,
            d: 3,
        },
        FamilyTemplate {
            id: "ones-block",
            blocks: vec![
                Block::Literal("0111"),
                Block::Power("1", Exponent::of('k')),
                Block::Power("0", Exponent::of('l')),
                Block::Literal("1"),
                Block::Power("0", Exponent::of('m')),
                Block::Literal("1"),
            ],
            params: vec!['k', 'l', 'm'],
            constraint_text: "l <= k+1, m >= 1, k >= 1",
            admissible: |p| get(p, 'l') <= get(p, 'k') + 1 && get(p, 'm') >= 1 && get(p, 'k') >= 1,
            d: 3,
        },
        FamilyTemplate {
            id: "zero-blocks",
            blocks: vec![
                Block::Power("0", Exponent::affine('k', 2, 1)),
                Block::Literal("1"),
                Block::Power("0", Exponent::affine('k', 1, -1)),
                Block::Literal("1"),
                Block::Power("0", Exponent::of('k')),
                Block::Literal("1"),
                Block::Power("0", Exponent::affine('k', 1, -1)),
                Block::Literal("1"),
            ],
            params: vec!['k'],
            constraint_text: "k >= 1",
            admissible: |p| get(p, 'k') >= 1,
            d: 3,
        },
        FamilyTemplate {
            id: "long-alternating",
            blocks: vec![
                Block::Literal("1101010101"),
                Block::Power("01", Exponent::of('k')),
                Block::Literal("0000010000011"),
            ],
            params: vec!['k'],
            constraint_text: "k >= 0",
            admissible: |_| true,
            d: 3,
        },
        FamilyTemplate {
            id: "two-split",
            blocks: vec![
                Block::Literal("1"),
                Block::Power("0", Exponent::of('k')),
                Block::Literal("1"),
                Block::Power("0", Exponent::of('d')),
                Block::Literal("1"),
            ],
            params: vec!['k', 'd'],
            constraint_text: "k < d",
            admissible: |p| get(p, 'k') < get(p, 'd'),
            d: 2,
        },
        FamilyTemplate {
            id: "two-balanced",
            blocks: vec![
                Block::Power("0", Exponent::affine('d', 1, 1)),
                Block::Literal("1"),
                Block::Power("0", Exponent::of('d')),
                Block::Literal("1"),
            ],
            params: vec!['d'],
            constraint_text: "d >= 0",
            admissible: |_| true,
            d: 2,
        },
    ]
}

pub fn template(id: &str) -> Option<FamilyTemplate> {
    templates().into_iter().find(|t| t.id == id)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub params: BTreeMap<char, usize>,
    pub word: Word,
    pub vcdim: usize,
    pub prime: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub id: String,
    pub pattern: String,
    pub constraint: String,
    pub d: usize,
    pub rows: Vec<FamilyRow>,
}

impl FamilyReport {
    pub fn all_prime(&self) -> bool {
        self.rows.iter().all(|r| r.prime)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &FamilyRow> {
        self.rows.iter().filter(|r| !r.prime)
    }
}

/// Checks `is_prime(., template.d)` on every admissible instantiation; failures
/// are kept as rows, not raised.
pub fn verify_family(template: &FamilyTemplate, ranges: &BTreeMap<char, (usize, usize)>) -> Result<FamilyReport> {
    let rows = template
        .assignments(ranges)?
        .into_iter()
        .map(|params| {
            let word = template.instantiate(&params)?;
            Ok(FamilyRow {
                vcdim: vcdim_word(&word),
                prime: is_prime(&word, template.d),
                params,
                word,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FamilyReport {
        id: template.id.to_string(),
        pattern: template.pattern(),
        constraint: template.constraint_text.to_string(),
        d: template.d,
        rows,
    })
}

/// Tags for scan output: the 2-prime shape, or membership in a built-in
/// family of the same dimension.
pub struct Classifier {
    known: HashMap<Word, String>,
}

impl Classifier {
    /// Indexes every built-in family member of length at most `max_len`.
    pub fn new(max_len: usize) -> Self {
        let mut known = HashMap::new();
        for t in templates() {
            // each exponent is at least its parameter (or half of it), so this bounds every parameter
            let ranges = t.params.iter().map(|&p| (p, (0, max_len))).collect();
            for params in t.assignments(&ranges).unwrap_or_default() {
                if let Ok(word) = t.instantiate(&params) {
                    if word.len() <= max_len {
                        let values: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                        known.entry(word).or_insert(format!("{}({})", t.id, values.join(";")));
                    }
                }
            }
        }
        Classifier { known }
    }

    pub fn tag(&self, record: &PrimeRecord) -> String {
        match record.d {
            2 => classify_2prime(&record.word).to_string(),
            _ => self
                .known
                .get(&record.word)
                .cloned()
                .unwrap_or_else(|| "unclassified".to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PumpRow {
    pub x_len: usize,
    pub y_len: usize,
    pub y_has_one: bool,
    pub exponent: usize,
    pub pumped: Word,
    pub vcdim: usize,
    pub prime: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PumpReport {
    pub d: usize,
    pub pumping_length: usize,
    pub word: Word,
    /// Splits with `|xy| <= p`, `y` nonempty: all must fail.
    pub admissible: Vec<PumpRow>,
    /// Every other split, recorded for reference.
    pub other: Vec<PumpRow>,
}

impl PumpReport {
    pub fn all_admissible_fail(&self) -> bool {
        self.admissible.iter().all(|r| !r.prime)
    }
}

/// Pumps `y` in every split `xyz` of `0^(p+1) 1 0^p 1` for exponents
/// `2..=pump_cap` and checks `d`-primality of each result.
pub fn pumping_counterexample(d: usize, p: usize, pump_cap: usize) -> Result<PumpReport> {
    if pump_cap < 2 {
        return Err(Error::InvalidArgument {
            name: "pump_cap",
            constraint: "at least 2",
            value: pump_cap,
        });
    }
    let word = Word::zeros(p + 1)
        .concat(&Word::ones_word(1))
        .concat(&Word::zeros(p))
        .concat(&Word::ones_word(1));
    let n = word.len();
    let mut admissible = Vec::new();
    let mut other = Vec::new();
    for x_len in 0..n {
        for y_end in x_len + 1..=n {
            let x = word.substring(0, x_len)?;
            let y = word.substring(x_len, y_end)?;
            let z = word.substring(y_end, n)?;
            for exponent in 2..=pump_cap {
                let pumped = x.concat(&y.repeat(exponent)).concat(&z);
                let row = PumpRow {
                    x_len,
                    y_len: y.len(),
                    y_has_one: y.count_ones() > 0,
                    exponent,
                    vcdim: vcdim_word(&pumped),
                    prime: is_prime(&pumped, d),
                    pumped,
                };
                if y_end <= p {
                    admissible.push(row);
                } else {
                    other.push(row);
                }
            }
        }
    }
    Ok(PumpReport {
        d,
        pumping_length: p,
        word,
        admissible,
        other,
    })
}
