//! Worker-thread cap honoring the `TD13_THREADS` environment variable.

/// Maximum worker threads: `TD13_THREADS` when set to a positive integer,
/// otherwise the machine's available parallelism.
pub fn worker_cap() -> usize {
    std::env::var("TD13_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Runs three independent jobs, on scoped threads when the cap allows.
/// Results come back in argument order either way.
pub fn run3<A, B, C>(
    fa: impl FnOnce() -> A + Send,
    fb: impl FnOnce() -> B + Send,
    fc: impl FnOnce() -> C + Send,
) -> (A, B, C)
where
    A: Send,
    B: Send,
    C: Send,
{
    if worker_cap() >= 3 {
        std::thread::scope(|s| {
            let ha = s.spawn(fa);
            let hb = s.spawn(fb);
            let c = fc();
            (ha.join().expect("worker"), hb.join().expect("worker"), c)
        })
    } else {
        (fa(), fb(), fc())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run3_preserves_order() {
        let (a, b, c) = run3(|| 1, || 2, || 3);
        assert_eq!((a, b, c), (1, 2, 3));
    }
}
