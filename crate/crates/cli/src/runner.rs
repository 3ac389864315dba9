//! Seeded parallel replication.

use majorant_core::stream::{substream, RandomStream};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::RunError;

pub struct Replicator {
    seed: u64,
    tag: &'static str,
    pool: ThreadPool,
}

impl Replicator {
    pub fn new(seed: u64, tag: &'static str, workers: Option<usize>) -> Result<Self, RunError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = workers {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| RunError::Pool(e.to_string()))?;
        Ok(Self { seed, tag, pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs `f` for replications `0..n`, each on its own stream keyed by
    /// `(seed, tag/label, index)`. Results come back in index order, so the outcome does
    /// not depend on the number of workers.
    pub fn run<T, F>(&self, label: &str, n: usize, f: F) -> Result<Vec<T>, RunError>
    where
        T: Send,
        F: Fn(&mut RandomStream, usize) -> Result<T, majorant_core::Error> + Sync,
    {
        let key = format!("{}/{}", self.tag, label);
        self.pool.install(|| {
            (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut rng = substream(self.seed, &key, i as u64);
                    f(&mut rng, i).map_err(RunError::from)
                })
                .collect()
        })
    }
}
