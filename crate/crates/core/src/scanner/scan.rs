use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::json;

use crate::dynamics::{descent_length, DynamicsError};
use crate::scanner::{classify_depth, ScanConfig, ScanError, Sieve};
use crate::Natural;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanFailure<T> {
    pub n: T,
    pub error: DynamicsError,
}

/// Outcome of verifying that every `n` in `lo..=hi` descends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport<T> {
    pub lo: T,
    pub hi: T,
    pub depth: u32,
    /// Numbers whose descent was simulated.
    pub verified_count: u64,
    /// Numbers certified by a resolved class.
    pub skipped_count: u64,
    /// Expected empty. A nonempty list is a finding, not an error.
    pub failures: Vec<ScanFailure<T>>,
    /// Longest simulated descent and its smallest start.
    pub max_descent_steps: u64,
    pub max_descent_start: Option<T>,
    pub elapsed: Duration,
}

impl<T: Natural> ScanReport<T> {
    pub fn total(&self) -> u64 {
        self.verified_count + self.skipped_count
    }

    pub fn skipped_fraction(&self) -> f64 {
        self.skipped_count as f64 / self.total() as f64
    }

    /// Every field except the wall time, as JSON.
    pub fn canonical_json(&self) -> String {
        let failures: Vec<_> = self
            .failures
            .iter()
            .map(|f| json!({ "n": f.n.to_string(), "error": f.error.to_string() }))
            .collect();
        json!({
            "lo": self.lo.to_string(),
            "hi": self.hi.to_string(),
            "depth": self.depth,
            "verified_count": self.verified_count,
            "skipped_count": self.skipped_count,
            "failures": failures,
            "max_descent_steps": self.max_descent_steps,
            "max_descent_start": self.max_descent_start.as_ref().map(ToString::to_string),
        })
        .to_string()
    }
}

struct Blocks<T> {
    lo: T,
    count: u64,
    block_size: u64,
}

impl<T: Natural> Blocks<T> {
    fn new(lo: &T, hi: &T, block_size: u64) -> Result<Self, ScanError> {
        let two = T::two();
        if lo < &two || lo > hi {
            return Err(ScanError::InvalidRange {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        let span = (hi.clone() - lo.clone()).to_u64().and_then(|s| s.checked_add(1));
        let count = span.ok_or_else(|| ScanError::RangeTooLarge {
            lo: lo.to_string(),
            hi: hi.to_string(),
        })?;
        Ok(Self {
            lo: lo.clone(),
            count,
            block_size,
        })
    }

    fn len(&self) -> u64 {
        self.count.div_ceil(self.block_size)
    }

    /// Start value and size of block `index`.
    fn block(&self, index: u64) -> (T, u64) {
        let offset = index * self.block_size;
        let size = self.block_size.min(self.count - offset);
        let start = self.lo.clone() + T::lift(offset).expect("offset below range size fits");
        (start, size)
    }
}

struct BlockSummary<T> {
    verified: u64,
    skipped: u64,
    failures: Vec<ScanFailure<T>>,
    best: Option<(u64, T)>,
}

fn scan_block<T: Natural>(start: T, size: u64, sieve: &Sieve, cap: u64) -> BlockSummary<T> {
    let mut summary = BlockSummary {
        verified: 0,
        skipped: 0,
        failures: Vec::new(),
        best: None,
    };
    let mut n = start;
    for _ in 0..size {
        if sieve.covers(&n) {
            summary.skipped += 1;
        } else {
            summary.verified += 1;
            match descent_length(&n, cap) {
                Ok(steps) => {
                    if summary.best.as_ref().is_none_or(|(best, _)| steps > *best) {
                        summary.best = Some((steps, n.clone()));
                    }
                }
                Err(error) => summary.failures.push(ScanFailure { n: n.clone(), error }),
            }
        }
        n = n + T::one();
    }
    summary
}

/// Verifies descent for every `n` in `lo..=hi`, skipping residues the depth
/// `config.depth` classes already certify. The report does not depend on the
/// worker count.
pub fn sieve_scan<T: Natural>(lo: &T, hi: &T, config: &ScanConfig) -> Result<ScanReport<T>, ScanError> {
    let began = Instant::now();
    let blocks = Blocks::new(lo, hi, config.block_size.max(1))?;
    let sieve = if config.depth == 0 {
        Sieve::empty()
    } else {
        classify_depth(config.depth)?.sieve()
    };
    let pool = config.pool()?;
    let summaries: Vec<BlockSummary<T>> = pool.install(|| {
        (0..blocks.len())
            .into_par_iter()
            .map(|index| {
                let (start, size) = blocks.block(index);
                scan_block(start, size, &sieve, config.step_cap)
            })
            .collect()
    });

    let mut report = ScanReport {
        lo: lo.clone(),
        hi: hi.clone(),
        depth: config.depth,
        verified_count: 0,
        skipped_count: 0,
        failures: Vec::new(),
        max_descent_steps: 0,
        max_descent_start: None,
        elapsed: Duration::ZERO,
    };
    for summary in summaries {
        report.verified_count += summary.verified;
        report.skipped_count += summary.skipped;
        report.failures.extend(summary.failures);
        if let Some((steps, n)) = summary.best {
            if report.max_descent_start.is_none() || steps > report.max_descent_steps {
                report.max_descent_steps = steps;
                report.max_descent_start = Some(n);
            }
        }
    }
    report.elapsed = began.elapsed();
    Ok(report)
}

/// Running maxima of the first-descent length over `lo..=hi`, as
/// `(start, steps)` pairs in increasing order of start.
pub fn record_search<T: Natural>(lo: &T, hi: &T, config: &ScanConfig) -> Result<Vec<(T, u64)>, ScanError> {
    let blocks = Blocks::new(lo, hi, config.block_size.max(1))?;
    let pool = config.pool()?;
    let per_block: Vec<Result<Vec<(T, u64)>, DynamicsError>> = pool.install(|| {
        (0..blocks.len())
            .into_par_iter()
            .map(|index| {
                let (mut n, size) = blocks.block(index);
                let mut local = Vec::new();
                let mut best = 0;
                for _ in 0..size {
                    let steps = descent_length(&n, config.step_cap)?;
                    if steps > best {
                        best = steps;
                        local.push((n.clone(), steps));
                    }
                    n = n + T::one();
                }
                Ok(local)
            })
            .collect()
    });

    // A global record is a local record that beats everything before its block.
    let mut records: Vec<(T, u64)> = Vec::new();
    for block in per_block {
        for (n, steps) in block? {
            if records.last().is_none_or(|(_, best)| steps > *best) {
                records.push((n, steps));
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(depth: u32) -> ScanConfig {
        ScanConfig::default()
            .with_depth(depth)
            .with_workers(2)
            .with_block_size(7)
    }

    #[test]
    fn small_range_without_sieve() {
        let r = sieve_scan(&2u64, &30, &config(0)).unwrap();
        assert_eq!(r.total(), 29);
        assert_eq!(r.skipped_count, 0);
        assert_eq!(r.max_descent_steps, 96);
        assert_eq!(r.max_descent_start, Some(27));
        assert!(r.failures.is_empty());
    }

    #[test]
    fn even_sieve_skips_evens() {
        let r = sieve_scan(&2u64, &100, &config(1)).unwrap();
        assert_eq!(r.skipped_count, 50);
        assert_eq!(r.verified_count, 49);
        assert!(r.failures.is_empty());
    }

    #[test]
    fn invalid_ranges() {
        assert!(matches!(
            sieve_scan(&1u64, &5, &config(1)),
            Err(ScanError::InvalidRange { .. })
        ));
        assert!(matches!(
            sieve_scan(&9u64, &5, &config(1)),
            Err(ScanError::InvalidRange { .. })
        ));
        assert!(matches!(
            sieve_scan(&2u128, &(u128::MAX - 1), &config(1)),
            Err(ScanError::RangeTooLarge { .. })
        ));
    }

    #[test]
    fn cap_hits_become_failure_rows() {
        let r = sieve_scan(&2u64, &30, &config(0).with_step_cap(50)).unwrap();
        let failed: Vec<u64> = r.failures.iter().map(|f| f.n).collect();
        assert_eq!(failed, vec![27]);
        assert!(matches!(
            r.failures[0].error,
            DynamicsError::StepCapExceeded { cap: 50, .. }
        ));
    }

    #[test]
    fn records() {
        let r = record_search(&2u64, &30, &config(0)).unwrap();
        assert_eq!(r.last(), Some(&(27, 96)));
        assert!(record_search(&2u64, &10, &config(0)).unwrap().contains(&(7, 11)));
        assert_eq!(record_search(&2u64, &2, &config(0)).unwrap(), vec![(2, 1)]);
        assert_eq!(
            record_search(&2u64, &30, &config(0)).unwrap(),
            vec![(2, 1), (3, 6), (7, 11), (27, 96)]
        );
    }
}
