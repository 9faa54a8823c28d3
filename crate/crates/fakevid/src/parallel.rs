use fakevid_core::parallel::BatchMap;

/// Splits `0..n` into contiguous chunks evaluated on scoped threads.
/// Results come back in index order, so reductions over them match
/// [`fakevid_core::parallel::Sequential`] exactly.
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    threads: usize,
}

impl Threaded {
    pub fn new(threads: usize) -> Self {
        Threaded {
            threads: threads.max(1),
        }
    }
}

impl BatchMap for Threaded {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        if self.threads == 1 || n < 2 {
            return (0..n).map(f).collect();
        }
        let chunk = n.div_ceil(self.threads);
        let f = &f;
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..n)
                .step_by(chunk)
                .map(|start| s.spawn(move || (start..(start + chunk).min(n)).map(f).collect::<Vec<T>>()))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker thread panicked"))
                .collect()
        })
    }
}
