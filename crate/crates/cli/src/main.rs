//! `vcstring`: VC dimension, sliding-window dimension and mask dimension of
//! binary strings from the command line.

mod suites;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use vcstring::dimension::DimensionReport;
use vcstring::generators::{GeneratorKind, GeneratorSpec};
use vcstring::primes::{enumerate_primes_with, template, templates, verify_family, Classifier, ScanOptions};
use vcstring::reals::{cover, limit_experiment, push_and_line, Cover, RationalProfile};
use vcstring::shiftspace::{follower_set_with, sofic_witness};
use vcstring::Word;

use suites::{Params, Suite};

macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout().lock(), $($arg)*)?
    };
}

const WORD_HELP: &str = "Words are strings of 0 and 1. A symbol or parenthesised group may be \
followed by *k to repeat it k times, so 0*3(10)*2 is 0001010; the run-length form printed for \
long words (1·1 0·3) parses back the same way.";

#[derive(Parser)]
#[command(name = "vcstring", version, about = "VC dimension of binary strings", after_help = WORD_HELP)]
struct Cli {
    /// Worker threads for enumerations and covers. Results do not depend on it.
    #[arg(long, global = true, env = "VCSTRING_JOBS", default_value_t = 1)]
    jobs: usize,

    /// Print long words in full instead of run-length encoding them.
    #[arg(long, global = true)]
    raw: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// VC, sliding-window and mask dimension with witnesses.
    Dim(DimArgs),
    /// Run a property suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Print a prefix of a named infinite word.
    Gen(GenArgs),
    /// List the d-prime words up to a length, as CSV.
    ScanPrimes(ScanArgs),
    /// Check a parametrised family of words for primality.
    VerifyFamily(FamilyArgs),
    /// Zero-extension follower set of a word.
    Followers(FollowerArgs),
    /// Words with pairwise different follower sets, with separating suffixes.
    SoficWitness(SoficArgs),
    /// Binary expansions of reals.
    #[command(subcommand)]
    Reals(RealsCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Cantor,
    ThueMorse,
    Powers,
    Factorial,
    Sidon,
    Periodic,
    Sturmian,
}

#[derive(Args)]
struct GenOptions {
    /// Prefix length.
    #[arg(long)]
    len: Option<usize>,
    /// Base of the powers word.
    #[arg(long, default_value_t = 2)]
    q: usize,
    /// Repeated block of the periodic word.
    #[arg(long)]
    base: Option<String>,
    /// Source word of the Sidon encoding.
    #[arg(long)]
    source: Option<String>,
    /// Continued fraction of the Sturmian slope, comma separated.
    #[arg(long)]
    cf: Option<String>,
    /// Intercept of the Sturmian word as p/q.
    #[arg(long, default_value = "0/1")]
    intercept: String,
}

impl GenOptions {
    fn spec(&self, kind: Kind) -> Result<GeneratorSpec> {
        let len = self.len.ok_or_else(|| anyhow!("--len is required"))?;
        let need = |v: &Option<String>, flag: &str| -> Result<Word> {
            let text = v.as_deref().ok_or_else(|| anyhow!("{flag} is required for this generator"))?;
            Ok(Word::parse_expr(text)?)
        };
        let kind = match kind {
            Kind::Cantor => GeneratorKind::Cantor,
            Kind::ThueMorse => GeneratorKind::ThueMorse,
            Kind::Powers => GeneratorKind::CharPowers { q: self.q },
            Kind::Factorial => GeneratorKind::CharFactorial,
            Kind::Sidon => GeneratorKind::SidonEncode {
                source: need(&self.source, "--source")?,
            },
            Kind::Periodic => GeneratorKind::Periodic {
                base: need(&self.base, "--base")?,
            },
            Kind::Sturmian => {
                let cf = self
                    .cf
                    .as_deref()
                    .ok_or_else(|| anyhow!("--cf is required for this generator"))?
                    .split(',')
                    .map(|t| t.trim().parse::<u64>().context("continued fraction terms are integers"))
                    .collect::<Result<Vec<_>>>()?;
                GeneratorKind::Sturmian {
                    cf,
                    intercept: parse_fraction(&self.intercept)?,
                }
            }
        };
        Ok(GeneratorSpec::new(kind, len))
    }
}

#[derive(Args)]
struct DimArgs {
    /// Words to analyse, or @FILE for one word per line.
    words: Vec<String>,
    /// Analyse a generated prefix instead; its values are lower bounds.
    #[arg(long = "gen", value_enum)]
    generator: Option<Kind>,
    #[command(flatten)]
    options: GenOptions,
    /// CSV instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Longest word for exhaustive and random checks.
    #[arg(long)]
    max_len: Option<usize>,
    /// Number of random words.
    #[arg(long, default_value_t = 1000)]
    random: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Cantor level: p(n) is checked for n up to 3^(k-1).
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Dimension for the shift-space suites; largest d for the Thue-Morse suite.
    #[arg(long)]
    d: Option<usize>,
    /// Deepest cover for cover-shrink.
    #[arg(long, default_value_t = 16)]
    depth: usize,
    /// Number of separated words for tsofic.
    #[arg(long, default_value_t = 2)]
    pairs: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[command(flatten)]
    options: GenOptions,
    /// Write the word packed 8 symbols per byte, symbol i in bit i mod 8 of byte i / 8.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a JSON report instead of the bare word.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    max_len: usize,
    /// Add the family or form each prime belongs to.
    #[arg(long)]
    classify: bool,
    /// Skip words with too few blocks of ones to reach dimension d.
    #[arg(long)]
    prune: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family id; run without it to list the families.
    #[arg(long)]
    family: Option<String>,
    /// Parameter ranges such as k=1..5,l=0..3; missing parameters use 0..5.
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FollowerArgs {
    #[arg(long)]
    word: String,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 8)]
    horizon: usize,
}

#[derive(Args)]
struct SoficArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Number of words w_1, w_2, ... to separate.
    #[arg(long, default_value_t = 2)]
    pairs: usize,
}

#[derive(Subcommand)]
enum RealsCommand {
    /// Dimension of every prefix of the expansion of p/q.
    Profile {
        /// The rational as p/q with 0 <= p <= q.
        #[arg(long)]
        frac: String,
        /// Longest prefix; defaults to twice the length by which the profile settles.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        csv: bool,
    },
    /// Dyadic intervals of all prefixes of dimension at most d.
    Cover {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Limits of sequences inside a cover.
    Limits {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Word pushed right by zeros for the escaping sequence.
        #[arg(long, default_value = "0010111")]
        escape: String,
    },
    /// The words s[0..i] t and s[0..i] t[i..].
    PushLine {
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Serialize)]
struct Report<I: Serialize, R: Serialize> {
    command: String,
    inputs: I,
    results: R,
    version: &'static str,
    wall_time_ms: u128,
}

struct Ctx {
    start: Instant,
    raw: bool,
    jobs: usize,
}

impl Ctx {
    fn emit(&self, inputs: impl Serialize, results: impl Serialize) -> Result<()> {
        let report = Report {
            command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
            inputs,
            results,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_ms: self.start.elapsed().as_millis(),
        };
        out!("{}", serde_json::to_string_pretty(&report)?);
        Ok(())
    }

    fn show(&self, w: &Word) -> String {
        if self.raw {
            w.render()
        } else {
            w.render_compact()
        }
    }
}

fn parse_fraction(text: &str) -> Result<(u64, u64)> {
    let (p, q) = text
        .split_once('/')
        .ok_or_else(|| anyhow!("expected p/q, got {text:?}"))?;
    Ok((p.trim().parse()?, q.trim().parse()?))
}

fn parse_word(text: &str) -> Result<Word> {
    let w = Word::parse_expr(text).with_context(|| format!("cannot parse word {text:?}"))?;
    if w.is_empty() {
        bail!("empty word");
    }
    Ok(w)
}

fn parse_ranges(text: &str) -> Result<BTreeMap<char, (usize, usize)>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, range) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("expected name=lo..hi, got {part:?}"))?;
        let mut chars = name.trim().chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            bail!("parameter names are single letters, got {name:?}");
        };
        let (lo, hi) = match range.split_once("..") {
            Some((lo, hi)) => (lo.trim().parse()?, hi.trim().parse()?),
            None => {
                let v = range.trim().parse()?;
                (v, v)
            }
        };
        out.insert(c, (lo, hi));
    }
    Ok(out)
}

fn cmd_dim(ctx: &Ctx, args: &DimArgs) -> Result<ExitCode> {
    let mut words = Vec::new();
    if let Some(kind) = args.generator {
        let spec = args.options.spec(kind)?;
        words.push((spec.generate()?, true));
    }
    for item in &args.words {
        match item.strip_prefix('@') {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
                for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
                    words.push((parse_word(line)?, false));
                }
            }
            None => words.push((parse_word(item)?, false)),
        }
    }
    if words.is_empty() {
        bail!("give a word, @FILE or --gen");
    }
    let reports: Vec<DimensionReport> = words
        .iter()
        .map(|(w, infinite)| {
            let mut r = DimensionReport::analyze(w);
            if ctx.raw {
                r.input = w.render();
            }
            if *infinite {
                r = r.prefix_of_infinite();
            }
            r
        })
        .collect();
    if args.csv {
        out!("{}", DimensionReport::CSV_HEADER);
        for r in &reports {
            let row = r.csv_row();
            if r.lower_bound {
                // dims of a prefix only bound the infinite word from below
                let mut cells: Vec<String> = row.split(',').map(String::from).collect();
                for cell in &mut cells[2..5] {
                    *cell = format!("≥{cell}");
                }
                out!("{}", cells.join(","));
            } else {
                out!("{row}");
            }
        }
    } else {
        let inputs: Vec<String> = reports.iter().map(|r| r.input.clone()).collect();
        ctx.emit(json!({ "words": inputs }), &reports)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(ctx: &Ctx, args: &VerifyArgs) -> Result<ExitCode> {
    let params = Params {
        max_len: args.max_len,
        random: args.random,
        seed: args.seed,
        k: args.k,
        d: args.d,
        depth: args.depth,
        pairs: args.pairs,
        jobs: ctx.jobs,
    };
    let rows = suites::run(args.suite, &params)?;
    let pass = rows.iter().all(|r| r.pass);
    if args.json {
        ctx.emit(json!({ "suite": args.suite, "params": params }), json!({ "pass": pass, "rows": rows }))?;
    } else {
        let width = rows.iter().map(|r| r.check.len()).max().unwrap_or(0);
        for r in &rows {
            out!(
                "{}  {:width$}  {}  [{}]",
                if r.pass { "PASS" } else { "FAIL" },
                r.check,
                r.claim,
                r.detail
            );
        }
        out!("{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_gen(ctx: &Ctx, args: &GenArgs) -> Result<ExitCode> {
    let spec = args.options.spec(args.kind)?;
    let w = spec.generate()?;
    if let Some(path) = &args.out {
        let mut bytes = vec![0u8; w.len().div_ceil(8)];
        for i in w.ones().iter() {
            bytes[i / 8] |= 1 << (i % 8);
        }
        fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
    }
    if args.json {
        ctx.emit(&spec, json!({ "word": ctx.show(&w), "len": w.len() }))?;
    } else if args.out.is_none() {
        out!("{}", ctx.show(&w));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(ctx: &Ctx, args: &ScanArgs) -> Result<ExitCode> {
    let options = ScanOptions {
        jobs: ctx.jobs,
        alternation_prune: args.prune,
        ..ScanOptions::default()
    };
    let records = enumerate_primes_with(args.d, args.max_len, &options)?;
    let classifier = args.classify.then(|| Classifier::new(args.max_len));
    let tag = |r| classifier.as_ref().map(|c| c.tag(r)).unwrap_or_default();
    if args.json {
        let rows: Vec<_> = records
            .iter()
            .map(|r| json!({ "word": ctx.show(&r.word), "len": r.word.len(), "d": r.d, "form_tag": tag(r) }))
            .collect();
        ctx.emit(json!({ "d": args.d, "max_len": args.max_len }), rows)?;
    } else {
        out!("word,len,d,form_tag");
        for r in &records {
            out!("{},{},{},{}", ctx.show(&r.word), r.word.len(), r.d, tag(r));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_family(ctx: &Ctx, args: &FamilyArgs) -> Result<ExitCode> {
    let Some(id) = &args.family else {
        for t in templates() {
            out!("{:18} {:40} {} (d = {})", t.id, t.pattern(), t.constraint_text, t.d);
        }
        return Ok(ExitCode::SUCCESS);
    };
    let t = template(id).ok_or_else(|| {
        let ids: Vec<_> = templates().iter().map(|t| t.id).collect();
        anyhow!("unknown family {id:?}; known: {}", ids.join(", "))
    })?;
    let mut ranges = parse_ranges(&args.params)?;
    for &p in &t.params {
        ranges.entry(p).or_insert((0, 5));
    }
    let report = verify_family(&t, &ranges)?;
    if args.json {
        ctx.emit(json!({ "family": id, "ranges": ranges }), &report)?;
    } else {
        out!("{} = {}  ({}, d = {})", report.id, report.pattern, report.constraint, report.d);
        for r in &report.rows {
            let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out!(
                "{}  {:16} {}  vcdim {}",
                if r.prime { "PASS" } else { "FAIL" },
                params.join(" "),
                ctx.show(&r.word),
                r.vcdim
            );
        }
        let bad = report.counterexamples().count();
        out!("{} of {} instances prime", report.rows.len() - bad, report.rows.len());
    }
    Ok(if report.all_prime() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_followers(ctx: &Ctx, args: &FollowerArgs) -> Result<ExitCode> {
    let w = Word::parse_expr(&args.word)?;
    let set = follower_set_with(&w, args.d, args.horizon, ctx.jobs)?;
    ctx.emit(
        json!({ "word": ctx.show(&w), "d": args.d, "horizon": args.horizon }),
        json!({ "counts_by_length": set.counts_by_length(), "members": set.members }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_sofic(ctx: &Ctx, args: &SoficArgs) -> Result<ExitCode> {
    let proof = sofic_witness(args.d, args.pairs)?;
    let ok = proof.verified();
    ctx.emit(json!({ "d": args.d, "pairs": args.pairs }), &proof)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn print_cover(ctx: &Ctx, c: &Cover, format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            out!("{}", Cover::CSV_HEADER);
            for line in c.csv_rows() {
                out!("{line}");
            }
            Ok(())
        }
        Format::Json => ctx.emit(json!({ "d": c.d, "depth": c.depth }), c),
    }
}

fn cmd_reals(ctx: &Ctx, cmd: &RealsCommand) -> Result<ExitCode> {
    match cmd {
        RealsCommand::Profile { frac, n, csv } => {
            let (p, q) = parse_fraction(frac)?;
            let probe = RationalProfile::of(p, q, 0)?;
            let n = n.unwrap_or(2 * probe.expansion.plateau_length());
            let profile = RationalProfile::of(p, q, n)?;
            if *csv {
                out!("n,vcdim");
                for pt in &profile.points {
                    out!("{},{}", pt.n, pt.vcdim);
                }
            } else {
                ctx.emit(
                    json!({ "frac": frac, "n": n }),
                    json!({
                        "expansion": profile.expansion,
                        "prefix": ctx.show(&profile.expansion.prefix(n)),
                        "plateau_length": profile.expansion.plateau_length(),
                        "period_bound": profile.expansion.period_bound(),
                        "plateau": profile.at_plateau_length(),
                        "plateau_holds": profile.plateau_holds(),
                        "points": profile.points,
                    }),
                )?;
            }
        }
        RealsCommand::Cover { d, depth, format } => {
            print_cover(ctx, &cover(*d, *depth, ctx.jobs)?, *format)?;
        }
        RealsCommand::Limits {
            d,
            depth,
            samples,
            seed,
            escape,
        } => {
            let escape = Word::parse_expr(escape)?;
            let report = limit_experiment(*d, *depth, *samples, *seed, &escape)?;
            let ok = report.holds();
            ctx.emit(json!({ "d": d, "depth": depth, "samples": samples, "seed": seed }), &report)?;
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        RealsCommand::PushLine { s, t } => {
            let (s, t) = (Word::parse_expr(s)?, Word::parse_expr(t)?);
            let report = push_and_line(&s, &t, 0..=s.len().min(t.len()))?;
            ctx.emit(
                json!({ "s": ctx.show(&s), "t": ctx.show(&t) }),
                json!({
                    "push_bound_holds": report.push_bound_holds(),
                    "line_bound_holds": report.line_bound_holds(),
                    "report": report,
                }),
            )?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let ctx = Ctx {
        start: Instant::now(),
        raw: cli.raw,
        jobs: cli.jobs.max(1),
    };
    match &cli.command {
        Command::Dim(a) => cmd_dim(&ctx, a),
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Gen(a) => cmd_gen(&ctx, a),
        Command::ScanPrimes(a) => cmd_scan(&ctx, a),
        Command::VerifyFamily(a) => cmd_family(&ctx, a),
        Command::Followers(a) => cmd_followers(&ctx, a),
        Command::SoficWitness(a) => cmd_sofic(&ctx, a),
        Command::Reals(c) => cmd_reals(&ctx, c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e)
            if e
                .downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
