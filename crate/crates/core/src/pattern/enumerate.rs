use crate::dynamics::StepKind;
use crate::pattern::{DescentPattern, PatternError, ResidueClass};
use crate::scalar::Natural;

#[derive(Clone, Copy)]
enum Bound {
    /// Exactly this many steps.
    Length(usize),
    /// At most this many halvings.
    Halvings(u32),
}

/// Affine form of a prefix over a partially pinned start.
#[derive(Clone)]
struct Prefix<T> {
    pow3: T,
    pow2: T,
    adder: T,
    offset: T,
    pinned_bits: u32,
    even: u32,
}

struct Walker<T> {
    bound: Bound,
    three: T,
    steps: Vec<StepKind>,
    found: Vec<ResidueClass<T>>,
}

impl<T: Natural> Walker<T> {
    fn visit(&mut self, state: Prefix<T>) -> Result<(), PatternError> {
        let len = self.steps.len();
        match self.bound {
            Bound::Length(limit) if len >= limit => return Ok(()),
            Bound::Halvings(limit) if state.even >= limit => return Ok(()),
            _ => {}
        }
        let current = state
            .pow3
            .checked_mul(&state.offset)
            .and_then(|v| v.checked_add(&state.adder))
            .ok_or(PatternError::Overflow)?
            / state.pow2.clone();

        if state.pinned_bits == state.even {
            // Next bit of the start is free: both parities occur.
            let high = state.offset.checked_add(&state.pow2).ok_or(PatternError::Overflow)?;
            let mut low_branch = state.clone();
            low_branch.pinned_bits += 1;
            let mut high_branch = state;
            high_branch.offset = high;
            high_branch.pinned_bits += 1;
            let (even_branch, odd_branch) = if current.is_even() {
                (low_branch, high_branch)
            } else {
                (high_branch, low_branch)
            };
            self.apply(even_branch, StepKind::Even)?;
            self.apply(odd_branch, StepKind::Odd)
        } else {
            // After an O the value is always even.
            debug_assert!(current.is_even());
            self.apply(state, StepKind::Even)
        }
    }

    fn apply(&mut self, mut state: Prefix<T>, step: StepKind) -> Result<(), PatternError> {
        self.steps.push(step);
        let result = match step {
            StepKind::Odd => {
                state.adder = state
                    .adder
                    .checked_mul(&self.three)
                    .and_then(|v| v.checked_add(&state.pow2))
                    .ok_or(PatternError::Overflow)?;
                state.pow3 = state.pow3.checked_mul(&self.three).ok_or(PatternError::Overflow)?;
                self.visit(state)
            }
            StepKind::Even => {
                state.pow2 = state.pow2.checked_mul(&T::two()).ok_or(PatternError::Overflow)?;
                state.even += 1;
                if state.pow2 > state.pow3 {
                    self.emit(state)
                } else {
                    self.visit(state)
                }
            }
        };
        self.steps.pop();
        result
    }

    fn emit(&mut self, state: Prefix<T>) -> Result<(), PatternError> {
        if let Bound::Length(limit) = self.bound {
            if self.steps.len() != limit {
                return Ok(());
            }
        }
        let first_lower = state
            .pow3
            .checked_mul(&state.offset)
            .and_then(|v| v.checked_add(&state.adder))
            .ok_or(PatternError::Overflow)?
            / state.pow2.clone();
        if state.offset >= T::two() && first_lower >= state.offset {
            return Err(PatternError::NotADescent {
                odd: self.steps.len() as u32 - state.even,
                even: state.even,
            });
        }
        self.found.push(ResidueClass::from_parts(
            DescentPattern::from_trace_steps(self.steps.clone()),
            state.adder,
            state.offset,
            state.pow2,
            first_lower,
        ));
        Ok(())
    }
}

fn walk<T: Natural>(bound: Bound) -> Result<Vec<ResidueClass<T>>, PatternError> {
    let mut walker = Walker {
        bound,
        three: T::lift(3).ok_or(PatternError::Overflow)?,
        steps: Vec::new(),
        found: Vec::new(),
    };
    walker.visit(Prefix {
        pow3: T::one(),
        pow2: T::one(),
        adder: T::zero(),
        offset: T::zero(),
        pinned_bits: 0,
        even: 0,
    })?;
    Ok(walker.found)
}

/// All minimal descent patterns of exactly `length` steps, as classes sorted
/// by offset.
///
/// A prefix stops the search as soon as `2^j' > 3^i'`: past that point the
/// prefix already lands below the start for all large class members, so no
/// extension of it is a first descent for the whole class.
pub fn enumerate_minimal_patterns<T: Natural>(length: usize) -> Result<Vec<ResidueClass<T>>, PatternError> {
    let mut classes = walk::<T>(Bound::Length(length))?;
    classes.sort_by(|a, b| a.offset().cmp(b.offset()));
    Ok(classes)
}

/// All minimal classes with at most `max_even` halvings, sorted by `(j, x)`.
pub fn enumerate_classes_within_depth<T: Natural>(max_even: u32) -> Result<Vec<ResidueClass<T>>, PatternError> {
    let mut classes = walk::<T>(Bound::Halvings(max_even))?;
    classes.sort_by(|a, b| {
        a.even_count()
            .cmp(&b.even_count())
            .then_with(|| a.offset().cmp(b.offset()))
    });
    Ok(classes)
}
