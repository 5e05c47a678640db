use crate::dynamics::{col_step, descent_trace_capped, DescentTrace, DynamicsError, StepKind, DEFAULT_STEP_CAP};
use crate::pattern::PatternError;
use crate::scanner::ScanError;
use crate::Natural;

/// Comparison of a start with its twin `n + 2^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinRecord<T> {
    pub trace: DescentTrace<T>,
    pub twin: T,
    /// The twin's own first descent.
    pub twin_trace: DescentTrace<T>,
    /// `y + 3^i`.
    pub predicted_twin_lower: T,
    pub pattern_matches: bool,
    pub lower_matches: bool,
    /// Whether `value'(t) - value(t) = 3^a 2^(j-b)` held at every step, where
    /// `a`, `b` count the O and E steps taken before `t`.
    pub differences_match: bool,
}

impl<T: Natural> TwinRecord<T> {
    pub fn holds(&self) -> bool {
        self.pattern_matches && self.lower_matches && self.differences_match
    }

    pub fn odd_count(&self) -> u32 {
        self.trace.pattern.odd_count()
    }

    pub fn even_count(&self) -> u32 {
        self.trace.pattern.even_count()
    }
}

/// Follows `n` and `n + 2^j` side by side through `n`'s descent word.
pub fn twin_check<T: Natural>(n: &T) -> Result<TwinRecord<T>, ScanError> {
    let three = T::lift(3).expect("3 fits");
    if n < &three || n.is_even() {
        return Err(ScanError::InvalidTwinStart(n.to_string()));
    }
    let trace = descent_trace_capped(n, DEFAULT_STEP_CAP)?;
    let odd = trace.pattern.odd_count();
    let even = trace.pattern.even_count();
    let overflow = || ScanError::Pattern(PatternError::Overflow);
    let period = T::pow2(even).ok_or_else(overflow)?;
    let twin = n.checked_add(&period).ok_or_else(overflow)?;
    let predicted_twin_lower = T::pow3(odd)
        .and_then(|p| trace.first_lower.checked_add(&p))
        .ok_or_else(overflow)?;

    // Step-by-step comparison, independent of the twin's own descent trace.
    let mut differences_match = true;
    let mut parity_matches = true;
    let mut a = 0u32;
    let mut b = 0u32;
    let mut twin_value = twin.clone();
    let mut base_values = trace.inputs().cloned().collect::<Vec<_>>();
    base_values.push(trace.first_lower.clone());
    for (t, base) in base_values.iter().enumerate() {
        let expected = T::pow3(a)
            .zip(T::pow2(even - b))
            .and_then(|(p3, p2)| p3.checked_mul(&p2))
            .ok_or_else(overflow)?;
        if twin_value.checked_sub(base) != Some(expected) {
            differences_match = false;
        }
        let Some(&step) = trace.pattern.steps().get(t) else {
            break;
        };
        let (next, kind) = col_step(&twin_value).ok_or_else(|| {
            ScanError::Dynamics(DynamicsError::Overflow {
                start: twin.to_string(),
                steps: t as u64,
            })
        })?;
        if kind != step {
            parity_matches = false;
            differences_match = false;
            break;
        }
        match step {
            StepKind::Odd => a += 1,
            StepKind::Even => b += 1,
        }
        twin_value = next;
    }

    let twin_trace = descent_trace_capped(&twin, DEFAULT_STEP_CAP)?;
    let pattern_matches = parity_matches && twin_trace.pattern == trace.pattern;
    let lower_matches = twin_trace.first_lower == predicted_twin_lower;
    Ok(TwinRecord {
        trace,
        twin,
        twin_trace,
        predicted_twin_lower,
        pattern_matches,
        lower_matches,
        differences_match,
    })
}
