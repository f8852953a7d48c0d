use std::ops::Range;

use conceptspace_core::oracle::{Executor, Moments};
use rayon::prelude::*;

use crate::error::CliError;

/// Runs Monte-Carlo chunks on a rayon pool. Chunks come back in index
/// order, so estimates match a serial run bit for bit.
pub struct Parallel {
    pool: rayon::ThreadPool,
}

impl Parallel {
    /// A pool with `threads` workers, or rayon's default when `None`.
    pub fn new(threads: Option<usize>) -> Result<Self, CliError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            if n == 0 {
                return Err(CliError::Usage("--threads must be at least 1".into()));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
        Ok(Self { pool })
    }
}

impl Executor for Parallel {
    fn map_chunks(
        &self,
        range: Range<usize>,
        job: &(dyn Fn(usize) -> Moments + Sync),
    ) -> Vec<Moments> {
        self.pool
            .install(|| range.into_par_iter().map(job).collect())
    }
}
