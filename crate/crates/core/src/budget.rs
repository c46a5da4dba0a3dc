use std::time::{Duration, Instant};

use crate::error::{Error, Progress, Result};

/// Resource limits shared by the exhaustive searches.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_memory_bytes: u64,
    pub max_duration: Option<Duration>,
    /// Worker threads; 0 means one per available core.
    pub workers: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_memory_bytes: 4 << 30,
            max_duration: None,
            workers: 0,
        }
    }
}

impl Budget {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_memory_mb(mut self, mb: u64) -> Self {
        self.max_memory_bytes = mb << 20;
        self
    }

    pub fn with_duration(mut self, limit: Duration) -> Self {
        self.max_duration = Some(limit);
        self
    }

    /// Fails when an allocation of `bytes` would not fit.
    pub fn check_memory(&self, bytes: u64, what: &str) -> Result<()> {
        if bytes > self.max_memory_bytes {
            return Err(Error::BudgetExhausted {
                what: format!(
                    "{what} needs {bytes} bytes, budget is {} bytes",
                    self.max_memory_bytes
                ),
                progress: Progress::default(),
            });
        }
        Ok(())
    }

    pub fn start(&self) -> Deadline {
        Deadline {
            at: self.max_duration.map(|d| Instant::now() + d),
        }
    }

    /// Runs `f` on a rayon pool with the configured number of workers.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        let threads = if self.workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.workers
        };
        match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    at: Option<Instant>,
}

impl Deadline {
    pub fn expired(&self) -> bool {
        self.at.is_some_and(|at| Instant::now() >= at)
    }
}
