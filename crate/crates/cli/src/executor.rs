use rayon::prelude::*;
use unibound_core::Executor;

use crate::error::CliError;

/// Runs indexed tasks on a dedicated rayon pool. Results come back in index
/// order, so the worker count never changes what is computed.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    /// `None` uses rayon's default thread count.
    pub fn new(workers: Option<usize>) -> Result<Self, CliError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(k) = workers {
            if k == 0 {
                return Err(CliError::Parse("--workers must be at least 1".into()));
            }
            builder = builder.num_threads(k);
        }
        let pool = builder.build().map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
        Ok(RayonExecutor { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map_indexed<T, F>(&self, count: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let task = &task;
        self.pool.install(|| (0..count).into_par_iter().map(task).collect())
    }
}
