use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use vcstring::dimension::{mdim, oracle_vcdim, swdim, vcdim_word};
use vcstring::generators::{cantor_prefix, thue_morse_prefix};
use vcstring::primes::enumerate_primes;
use vcstring::Word;

fn random_word(n: usize, seed: u64) -> Word {
    // xorshift keeps the inputs fixed across runs
    let mut x = seed;
    let bits: Vec<bool> = (0..n)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            x & 1 == 1
        })
        .collect();
    Word::from_bits(&bits)
}

fn engine_vs_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("vcdim_random");
    for n in [10, 14, 20] {
        let w = random_word(n, 0x9e37_79b9_7f4a_7c15);
        g.bench_with_input(BenchmarkId::new("engine", n), &w, |b, w| b.iter(|| vcdim_word(w)));
        if n <= 14 {
            g.bench_with_input(BenchmarkId::new("oracle", n), &w, |b, w| {
                b.iter(|| oracle_vcdim(w).unwrap())
            });
        }
    }
    g.finish();
}

fn structured(c: &mut Criterion) {
    let mut g = c.benchmark_group("structured");
    g.sample_size(10);
    let tm = thue_morse_prefix(64);
    g.bench_function("thue_morse_64_vcdim", |b| b.iter(|| vcdim_word(&tm)));
    g.bench_function("thue_morse_64_swdim", |b| b.iter(|| swdim(&tm)));
    g.bench_function("thue_morse_64_mdim", |b| b.iter(|| mdim(&tm)));
    let cantor = cantor_prefix(243);
    g.bench_function("cantor_243_vcdim", |b| b.iter(|| vcdim_word(&cantor)));
    g.finish();
}

fn scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan_primes");
    g.sample_size(10);
    g.bench_function("d2_len14", |b| b.iter(|| enumerate_primes(2, 14).unwrap()));
    g.finish();
}

criterion_group!(benches, engine_vs_oracle, structured, scan);
criterion_main!(benches);
