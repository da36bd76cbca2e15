//! Property suites run by `vcstring verify`.

use std::collections::BTreeSet;

use anyhow::Result;
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use vcstring::dimension::{is_full_mask, mdim, sauer_bound, swdim, vcdim_word};
use vcstring::generators::{
    cantor_prefix, cantor_stage, char_powers, max_difference_multiplicity, periodic, sidon_encode,
    thue_morse_prefix, ThueMorseMask,
};
use vcstring::primes::{classify_2prime, enumerate_primes_with, vc1_form, ScanOptions, TwoPrimeForm};
use vcstring::reals::cover;
use vcstring::shiftspace::{find_base_word, in_language, madness_check, sofic_witness};
use vcstring::{IndexSet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    C1,
    Sauer,
    Period,
    Lvc1,
    #[value(name = "t2prime")]
    T2prime,
    Talt,
    Linsert,
    Lprepend,
    Lmadness,
    Tsofic,
    CantorComplexity,
    ThueMorseMask,
    Sidon,
    CoverShrink,
}

#[derive(Clone, Debug, Serialize)]
pub struct Params {
    pub max_len: Option<usize>,
    pub random: usize,
    pub seed: u64,
    pub k: usize,
    pub d: Option<usize>,
    pub depth: usize,
    pub pairs: usize,
    pub jobs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub check: String,
    /// The statement being checked.
    pub claim: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn row(check: impl Into<String>, claim: &'static str, pass: bool, detail: impl Into<String>) -> Row {
    Row {
        check: check.into(),
        claim,
        pass,
        detail: detail.into(),
    }
}

fn random_word(rng: &mut ChaCha8Rng, max: usize) -> Word {
    let n = rng.gen_range(0..=max);
    Word::from_fn(n, |_| rng.gen_bool(0.5))
}

fn all_words(max: usize) -> impl Iterator<Item = Word> {
    (0..=max).flat_map(|n| (0u64..1 << n).map(move |b| Word::from_u64(b, n)))
}

/// Runs `f` on `count` random words and reports how many failed, with the first failure.
fn sample(
    p: &Params,
    default_len: usize,
    check: &str,
    claim: &'static str,
    mut f: impl FnMut(&Word, &mut ChaCha8Rng) -> bool,
) -> Row {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let max = p.max_len.unwrap_or(default_len);
    let mut failures = 0;
    let mut first = None;
    for _ in 0..p.random {
        let w = random_word(&mut rng, max);
        if !f(&w, &mut rng) {
            failures += 1;
            first.get_or_insert(w.render_compact());
        }
    }
    let mut detail = format!("{} random words up to length {max}, {failures} failures", p.random);
    if let Some(w) = first {
        detail.push_str(&format!(", first {w}"));
    }
    row(check, claim, failures == 0, detail)
}

pub fn run(suite: Suite, p: &Params) -> Result<Vec<Row>> {
    Ok(match suite {
        Suite::C1 => {
            let sandwich = sample(p, 14, "sandwich", "vcdim - 1 <= swdim <= vcdim", |w, _| {
                let v = vcdim_word(w);
                let s = swdim(w).0;
                s <= v && v <= s + 1
            });
            let equal = sample(p, 14, "mask equality", "mdim = swdim", |w, _| {
                mdim(w).0 == swdim(w).0
            });
            let flip = sample(
                p,
                14,
                "complement and reversal",
                "mdim unchanged by complement and reversal",
                |w, _| {
                    let m = mdim(w).0;
                    mdim(&w.complement()).0 == m && mdim(&w.reverse()).0 == m
                },
            );
            let low = Word::parse("011")?;
            let high = Word::parse("01100")?;
            vec![
                sandwich,
                equal,
                flip,
                row(
                    "lower end attained",
                    "swdim(011) = vcdim(011) - 1",
                    swdim(&low).0 + 1 == vcdim_word(&low),
                    format!("swdim {} vcdim {}", swdim(&low).0, vcdim_word(&low)),
                ),
                row(
                    "upper end attained",
                    "swdim(01100) = vcdim(01100)",
                    swdim(&high).0 == vcdim_word(&high),
                    format!("swdim {} vcdim {}", swdim(&high).0, vcdim_word(&high)),
                ),
            ]
        }
        Suite::Sauer => {
            let examples = [((5, 1), 6), ((4, 2), 11), ((3, 3), 8)];
            let mut rows: Vec<Row> = examples
                .iter()
                .map(|&((n, d), v)| {
                    row(
                        format!("bound({n}, {d})"),
                        "sum of C(n, i) over i <= d",
                        sauer_bound(n, d) == v,
                        format!("{} (expected {v})", sauer_bound(n, d)),
                    )
                })
                .collect();
            rows.push(sample(
                p,
                14,
                "window counts",
                "distinct length-n windows <= bound(n, vcdim)",
                |w, _| {
                    let v = vcdim_word(w);
                    (1..=w.len()).all(|n| w.complexity(n).unwrap() as u128 <= sauer_bound(n, v))
                },
            ));
            rows
        }
        Suite::Period => vec![sample(
            p,
            5,
            "periodic words",
            "period m gives mdim <= m and vcdim <= m + 1",
            |base, rng| {
                if base.is_empty() {
                    return true;
                }
                let w = periodic(base, rng.gen_range(1..60)).unwrap();
                mdim(&w).0 <= base.len() && vcdim_word(&w) <= base.len() + 1
            },
        )],
        Suite::Lvc1 => {
            let max = p.max_len.unwrap_or(12);
            let mut missed = Vec::new();
            let mut wrong = Vec::new();
            let mut count = 0;
            for w in all_words(max) {
                let one = vcdim_word(&w) == 1;
                let shaped = vc1_form(&w).is_some();
                count += one as usize;
                if one && !shaped {
                    missed.push(w.render());
                }
                if shaped && !one {
                    wrong.push(w.render());
                }
            }
            vec![
                row(
                    "dimension 1 has a shape",
                    "dimension-1 words are 0^a 1, 1^a or 0^a (1 0^b)^c 1 (a <= b) up to trailing zeros",
                    missed.is_empty(),
                    format!("{count} dimension-1 words up to length {max}, {} unmatched {:?}", missed.len(), missed.first()),
                ),
                row(
                    "shapes have dimension 1",
                    "every word of those shapes has dimension 1",
                    wrong.is_empty(),
                    format!("{} mismatches {:?}", wrong.len(), wrong.first()),
                ),
            ]
        }
        Suite::T2prime => {
            let max = p.max_len.unwrap_or(12);
            let options = ScanOptions {
                jobs: p.jobs,
                ..ScanOptions::default()
            };
            let primes: BTreeSet<Word> = enumerate_primes_with(2, max, &options)?
                .into_iter()
                .map(|r| r.word)
                .collect();
            let shaped: BTreeSet<Word> = all_words(max)
                .filter(|w| classify_2prime(w) != TwoPrimeForm::NotPrime)
                .collect();
            vec![row(
                "2-primes",
                "2-prime words are exactly 1 0^k 1 0^d 1 (k < d) and 0^(d+1) 1 0^d 1",
                primes == shaped,
                format!(
                    "{} primes, {} shaped words up to length {max}, {} differ",
                    primes.len(),
                    shaped.len(),
                    primes.symmetric_difference(&shaped).count()
                ),
            )]
        }
        Suite::Talt => vec![sample(
            p,
            14,
            "alternations",
            "vcdim <= 2 * number of blocks of ones",
            |w, _| w.alternations() == 0 || vcdim_word(w) <= 2 * w.alternations(),
        )],
        Suite::Linsert => {
            let mut q = p.clone();
            q.max_len = Some(q.max_len.unwrap_or(12).min(12));
            vec![
                sample(&q, 12, "dilation", "inserting p - 1 zeros before every symbol keeps vcdim", |w, rng| {
                    let p = rng.gen_range(2..=3);
                    vcdim_word(&w.dilate(p).unwrap()) == vcdim_word(w)
                }),
                sample(
                    &Params {
                        max_len: Some(7),
                        ..q.clone()
                    },
                    7,
                    "dilation of padded words",
                    "zero-extension membership unchanged by dilation",
                    |w, rng| {
                        let p = rng.gen_range(2..=3);
                        let d = rng.gen_range(0..4);
                        in_language(w, d).unwrap() == in_language(&w.dilate(p).unwrap(), d).unwrap()
                    },
                ),
            ]
        }
        Suite::Lprepend => vec![sample(
            p,
            14,
            "padding",
            "adding 0^l or 1^l on either side raises vcdim by at most 2",
            |w, rng| {
                let l = rng.gen_range(1..8);
                let v = vcdim_word(w);
                let ones = Word::ones_word(l);
                [w.pad_zeros(l, 0), w.pad_zeros(0, l), ones.concat(w), w.concat(&ones)]
                    .iter()
                    .all(|x| vcdim_word(x) <= v + 2)
            },
        )],
        Suite::Lmadness => {
            let d = p.d.unwrap_or(2);
            let t = find_base_word(d)?;
            let k = t.len();
            let report = madness_check(&t, d, 0..=2 * k + 8)?;
            let asserted = report.rows.iter().filter(|r| r.asserted).count();
            vec![row(
                format!("base {}", t.render()),
                "0^(2k+1) T 0^l 1 has dimension d once l > 2k",
                report.holds(),
                format!(
                    "{asserted} rows with l > {}, settled from l = {}",
                    report.bound,
                    report.settled_from.map_or("never".into(), |l| l.to_string())
                ),
            )]
        }
        Suite::Tsofic => {
            let d = p.d.unwrap_or(2);
            let proof = sofic_witness(d, p.pairs)?;
            let mut rows = vec![row(
                "setup",
                "0^(2k+1) T has dimension d and 0^(2k+1) T 1 has dimension d + 1",
                proof.base_dim == d && proof.closed_dim == d + 1,
                format!("T = {}, a = {:?}", proof.base.render(), proof.a),
            )];
            for s in &proof.separations {
                rows.push(row(
                    format!("w_{} vs w_{}", s.i, s.j),
                    "suffix 0^(a_j - 1) 1 keeps w_i in the language and drives w_j out",
                    s.separates(),
                    format!("suffix {}: {} / {}", s.suffix, s.in_language_i, s.in_language_j),
                ));
            }
            rows.push(row(
                "madness",
                "0^(2k+1) T 0^l 1 has dimension d once l > 2k",
                proof.madness.holds(),
                format!("{} rows", proof.madness.rows.len()),
            ));
            rows
        }
        Suite::CantorComplexity => {
            let k = p.k.max(1) as u32;
            let n = 3usize.pow(k + 1);
            let c = cantor_prefix(n);
            let mut rows = vec![row(
                "construction",
                "digit test agrees with the recursive doubling construction",
                c == cantor_stage(k + 1),
                format!("{n} symbols"),
            )];
            for m in 2..=3usize.pow(k - 1) {
                let pm = c.complexity(m)?;
                rows.push(row(
                    format!("p({m})"),
                    "p(n) = 2n - 1",
                    pm == 2 * m - 1,
                    pm.to_string(),
                ));
            }
            rows
        }
        Suite::ThueMorseMask => {
            let top = p.d.unwrap_or(3).clamp(2, 5);
            let mut rows = Vec::new();
            for d in 2..=top {
                let tm = ThueMorseMask::new(d)?;
                rows.push(row(
                    format!("parity d = {d}"),
                    "f(b_A + a_i) = 0 exactly when i is in A",
                    tm.parity_property_holds(),
                    format!("a = {:?}", tm.a),
                ));
                if let (Some(offsets), true) = (tm.offsets(), tm.span() <= 1 << 20) {
                    let w = thue_morse_prefix(tm.span() as usize);
                    rows.push(row(
                        format!("full mask d = {d}"),
                        "the offsets a_i form a full mask on the Thue-Morse word",
                        is_full_mask(&w, &offsets),
                        format!("prefix of {} symbols", w.len()),
                    ));
                }
            }
            rows
        }
        Suite::Sidon => {
            let k = p.max_len.unwrap_or(8).min(12);
            let n = (1 << k) + 1;
            let mut high = 0;
            let mut seen = BTreeSet::new();
            for bits in 0u64..1 << k {
                let w = sidon_encode(&Word::from_u64(bits, k), n);
                high = high.max(mdim(&w).0).max(vcdim_word(&w));
                seen.insert(w);
            }
            let powers: IndexSet = (0..=20).map(|i| 1usize << i).collect();
            let w = char_powers(2, 1025)?;
            vec![
                row(
                    "encodings",
                    "ones only at 2^i keep vcdim and mdim <= 2",
                    high <= 2,
                    format!("all {} sources of length {k}, largest dimension {high}", 1u64 << k),
                ),
                row(
                    "injective",
                    "different sources give different words",
                    seen.len() == 1 << k,
                    format!("{} distinct words", seen.len()),
                ),
                row(
                    "differences",
                    "the differences 2^i - 2^j are all distinct",
                    max_difference_multiplicity(&powers) == 1,
                    "exponents up to 20",
                ),
                row(
                    "powers of two",
                    "mdim of the powers-of-two word is 2",
                    mdim(&w).0 == 2,
                    "prefix of 1025 symbols",
                ),
            ]
        }
        Suite::CoverShrink => {
            let depth = p.depth.clamp(9, vcstring::reals::COVER_CAP);
            let mut rows = Vec::new();
            for d in [1, 2] {
                let c = cover(d, depth, p.jobs)?;
                let counts: Vec<usize> = c.levels[8..].iter().map(|l| l.count).collect();
                rows.push(row(
                    format!("d = {d}"),
                    "measure of the prefix cover falls at every depth",
                    c.strictly_shrinking(8..=depth),
                    format!("counts from depth 8: {counts:?}"),
                ));
                let parent: BTreeSet<u64> = cover(d, depth - 1, p.jobs)?.intervals.iter().map(|q| q.k).collect();
                rows.push(row(
                    format!("d = {d} refines"),
                    "each interval lies inside one of the previous depth",
                    c.intervals.iter().all(|iv| parent.contains(&(iv.k >> 1))),
                    format!("{} intervals at depth {depth}", c.intervals.len()),
                ));
            }
            let zero = cover(0, depth, p.jobs)?;
            rows.push(row(
                "d = 0",
                "one interval at every depth",
                zero.levels.iter().all(|l| l.count == 1),
                format!("depth {depth}"),
            ));
            rows
        }
    })
}
