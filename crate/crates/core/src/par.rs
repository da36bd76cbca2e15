//! Deterministic fan-out: work is split into numbered chunks and results come
//! back in chunk order whatever the thread count.

use rayon::prelude::*;

/// Runs `f` on chunks `0..chunks` with up to `jobs` worker threads and
/// concatenates the results in chunk order. `jobs <= 1` runs inline.
pub fn map_chunks<T, F>(jobs: usize, chunks: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Vec<T> + Sync + Send,
{
    if jobs <= 1 || chunks <= 1 {
        return (0..chunks).flat_map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let parts: Vec<Vec<T>> = pool.install(|| (0..chunks).into_par_iter().map(&f).collect());
    parts.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_jobs() {
        let f = |c: usize| (0..c % 4).map(|i| c * 10 + i).collect::<Vec<_>>();
        let one = map_chunks(1, 50, f);
        assert_eq!(map_chunks(4, 50, f), one);
        assert_eq!(map_chunks(0, 0, f), Vec::<usize>::new());
    }
}
