//! Depth classification of the naturals, sieve-accelerated range verification,
//! record search, twin checks, and the on-disk class cache.

mod cache;
mod classify;
mod scan;
mod twin;

use thiserror::Error;

use crate::dynamics::{DynamicsError, DEFAULT_STEP_CAP};
use crate::pattern::PatternError;

pub use cache::{cache_load, cache_store, CACHE_VERSION};
pub use classify::{classify_depth, ClassificationReport, Sieve, MAX_DEPTH};
pub use scan::{record_search, sieve_scan, ScanFailure, ScanReport};
pub use twin::{twin_check, TwinRecord};

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("depth {depth} is outside 1..={max}")]
    DepthTooLarge { depth: u32, max: u32 },
    #[error("invalid range {lo}..={hi}: need 2 <= lo <= hi")]
    InvalidRange { lo: String, hi: String },
    #[error("range {lo}..={hi} has more than 2^64 elements")]
    RangeTooLarge { lo: String, hi: String },
    #[error("twin check needs an odd start of at least 3, got {0}")]
    InvalidTwinStart(String),
    #[error("corrupt cache (line {line}): {reason}")]
    CorruptCache { line: usize, reason: String },
    #[error("cache version {found} does not match supported version {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Knobs shared by the range operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    /// Sieve depth `J`; residues mod `2^J` covered by a class are skipped. 0 disables the sieve.
    pub depth: u32,
    pub workers: usize,
    /// Numbers per work unit. Results are merged by block index.
    pub block_size: u64,
    pub step_cap: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            depth: 5,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            block_size: 1 << 16,
            step_cap: DEFAULT_STEP_CAP,
        }
    }
}

impl ScanConfig {
    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_step_cap(mut self, cap: u64) -> Self {
        self.step_cap = cap;
        self
    }

    pub fn with_block_size(mut self, block_size: u64) -> Self {
        self.block_size = block_size.max(1);
        self
    }

    pub(crate) fn pool(&self) -> Result<rayon::ThreadPool, ScanError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .map_err(|e| ScanError::Pool(e.to_string()))
    }
}
