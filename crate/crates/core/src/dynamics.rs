//! Exact Collatz dynamics: single steps, first-descent traces, and the
//! decomposition of a full trajectory into consecutive descents.

use std::fmt;

use thiserror::Error;

use crate::pattern::DescentPattern;
use crate::scalar::Natural;

/// Per-descent step limit used when the caller does not supply one.
pub const DEFAULT_STEP_CAP: u64 = 100_000;

/// One application of the Collatz map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StepKind {
    /// `n -> 3n + 1`, applied to odd `n`. Written `O`.
    Odd,
    /// `n -> n / 2`, applied to even `n`. Written `E`.
    Even,
}

impl StepKind {
    pub fn symbol(self) -> char {
        match self {
            StepKind::Odd => 'O',
            StepKind::Even => 'E',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'O' => Some(StepKind::Odd),
            'E' => Some(StepKind::Even),
            _ => None,
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("start value {value} is below the minimum {minimum}")]
    StartTooSmall { value: String, minimum: u32 },
    #[error("no descent below {start} within {cap} steps")]
    StepCapExceeded { start: String, cap: u64 },
    #[error("trajectory of {start} returned to its start after {steps} steps")]
    CycleDetected { start: String, steps: u64 },
    #[error("value exceeded the range of the integer type after {steps} steps from {start}")]
    Overflow { start: String, steps: u64 },
}

/// The trajectory of `start` up to and including its first value below `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentTrace<T> {
    pub start: T,
    pub pattern: DescentPattern,
    /// Value after each step; `values.len() == pattern.len()`.
    pub values: Vec<T>,
    pub first_lower: T,
}

impl<T: Natural> DescentTrace<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value before each step, i.e. `start` followed by all but the last value.
    pub fn inputs(&self) -> impl Iterator<Item = &T> {
        std::iter::once(&self.start).chain(self.values[..self.values.len() - 1].iter())
    }
}

/// Applies the Collatz map once. `None` on zero input or fixed-width overflow.
pub fn col_step<T: Natural>(n: &T) -> Option<(T, StepKind)> {
    if n.is_zero() {
        return None;
    }
    if n.is_even() {
        Some((n.halve(), StepKind::Even))
    } else {
        n.triple_plus_one().map(|v| (v, StepKind::Odd))
    }
}

fn check_min<T: Natural>(n: &T, minimum: u32) -> Result<(), DynamicsError> {
    if n < &T::lift(u64::from(minimum)).expect("small constant fits") {
        return Err(DynamicsError::StartTooSmall {
            value: n.to_string(),
            minimum,
        });
    }
    Ok(())
}

/// First descent of `n` under the default step cap.
pub fn descent_trace<T: Natural>(n: &T) -> Result<DescentTrace<T>, DynamicsError> {
    descent_trace_capped(n, DEFAULT_STEP_CAP)
}

pub fn descent_trace_capped<T: Natural>(n: &T, cap: u64) -> Result<DescentTrace<T>, DynamicsError> {
    check_min(n, 2)?;
    let mut steps = Vec::new();
    let mut values = Vec::new();
    let mut current = n.clone();
    loop {
        if steps.len() as u64 >= cap {
            return Err(DynamicsError::StepCapExceeded {
                start: n.to_string(),
                cap,
            });
        }
        let (next, kind) = col_step(&current).ok_or_else(|| DynamicsError::Overflow {
            start: n.to_string(),
            steps: steps.len() as u64,
        })?;
        steps.push(kind);
        if &next < n {
            values.push(next.clone());
            return Ok(DescentTrace {
                start: n.clone(),
                pattern: DescentPattern::from_trace_steps(steps),
                values,
                first_lower: next,
            });
        }
        if &next == n {
            return Err(DynamicsError::CycleDetected {
                start: n.to_string(),
                steps: steps.len() as u64,
            });
        }
        values.push(next.clone());
        current = next;
    }
}

/// Just the length of the first descent, without recording the trajectory.
pub fn descent_length<T: Natural>(n: &T, cap: u64) -> Result<u64, DynamicsError> {
    check_min(n, 2)?;
    let mut current = n.clone();
    let mut steps = 0u64;
    loop {
        if steps >= cap {
            return Err(DynamicsError::StepCapExceeded {
                start: n.to_string(),
                cap,
            });
        }
        let (next, _) = col_step(&current).ok_or_else(|| DynamicsError::Overflow {
            start: n.to_string(),
            steps,
        })?;
        steps += 1;
        if &next < n {
            return Ok(steps);
        }
        if &next == n {
            return Err(DynamicsError::CycleDetected {
                start: n.to_string(),
                steps,
            });
        }
        current = next;
    }
}

/// Splits the trajectory of `n` to 1 into successive first descents.
pub fn chain_descents<T: Natural>(n: &T) -> Result<Vec<DescentTrace<T>>, DynamicsError> {
    chain_descents_capped(n, DEFAULT_STEP_CAP)
}

pub fn chain_descents_capped<T: Natural>(n: &T, cap: u64) -> Result<Vec<DescentTrace<T>>, DynamicsError> {
    check_min(n, 2)?;
    let mut chain = Vec::new();
    let mut current = n.clone();
    while !current.is_one() {
        let trace = descent_trace_capped(&current, cap)?;
        current = trace.first_lower.clone();
        chain.push(trace);
    }
    Ok(chain)
}

/// Number of steps from `n` to 1 (0 for `n = 1`).
pub fn total_stopping_time<T: Natural>(n: &T) -> Result<u64, DynamicsError> {
    total_stopping_time_capped(n, DEFAULT_STEP_CAP)
}

pub fn total_stopping_time_capped<T: Natural>(n: &T, cap: u64) -> Result<u64, DynamicsError> {
    check_min(n, 1)?;
    let mut current = n.clone();
    let mut steps = 0u64;
    while !current.is_one() {
        if steps >= cap {
            return Err(DynamicsError::StepCapExceeded {
                start: n.to_string(),
                cap,
            });
        }
        current = col_step(&current)
            .ok_or_else(|| DynamicsError::Overflow {
                start: n.to_string(),
                steps,
            })?
            .0;
        steps += 1;
    }
    Ok(steps)
}

/// Every value from `n` down to 1, `n` included.
pub fn full_trajectory<T: Natural>(n: &T, cap: u64) -> Result<Vec<(T, Option<StepKind>)>, DynamicsError> {
    check_min(n, 1)?;
    let mut out = Vec::new();
    let mut current = n.clone();
    while !current.is_one() {
        if out.len() as u64 >= cap {
            return Err(DynamicsError::StepCapExceeded {
                start: n.to_string(),
                cap,
            });
        }
        let (next, kind) = col_step(&current).ok_or_else(|| DynamicsError::Overflow {
            start: n.to_string(),
            steps: out.len() as u64,
        })?;
        out.push((current, Some(kind)));
        current = next;
    }
    out.push((current, None));
    Ok(out)
}
