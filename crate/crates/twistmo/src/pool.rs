use rayon::prelude::*;
use twistmo_core::exec::Executor;

/// Environment variable consulted when `--threads` is absent.
pub const THREADS_ENV: &str = "TWISTMO_THREADS";

/// Thread count from the flag, then the environment, then the hardware.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.filter(|&n| n > 0)
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&n| n > 0))
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Executor on a dedicated rayon pool. Results come back in index order,
/// so reductions over them do not depend on the thread count.
#[derive(Debug)]
pub struct Rayon {
    pool: rayon::ThreadPool,
}

impl Rayon {
    pub fn new(threads: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().expect("thread pool");
        Self { pool }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for Rayon {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..len).into_par_iter().map(f).collect())
    }
}
