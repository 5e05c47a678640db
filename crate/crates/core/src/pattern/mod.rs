//! Descent patterns and the residue classes they determine.
//!
//! A pattern is the O/E word a start value traces until its first smaller
//! value. Every pattern with `i` odd steps and `j` even steps collapses to one
//! affine map `n -> (3^i n + m) / 2^j`, and the starts that realize it form a
//! single class `2^j k + x`.

mod enumerate;
mod feasibility;
mod residue;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dynamics::StepKind;
use crate::scalar::Natural;

pub use enumerate::{enumerate_classes_within_depth, enumerate_minimal_patterns};
pub use feasibility::{feasibility_margin, feasibility_table, Feasibility, FeasibilityRow};
pub use residue::{
    alternating_family, alternating_pattern, congruence_offset, first_lower_value, pattern_constants,
    residue_for_pattern, residue_for_steps, subsequent_lower_value, PatternConstants,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParsePatternError {
    #[error("pattern is empty")]
    Empty,
    #[error("unexpected character {found:?} at position {position}; expected 'O' or 'E'")]
    BadSymbol { found: char, position: usize },
    #[error("a pattern longer than one step must start with O")]
    LeadingEven,
    #[error("O at position {position} is not followed by E")]
    UnhalvedOdd { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("step {step} requires an odd value but the value there is always even")]
    UnrealizablePattern { step: usize },
    #[error("pattern with {odd} odd and {even} even steps does not end below its start")]
    NotADescent { odd: u32, even: u32 },
    #[error("the prefix of length {prefix_len} already descends for the whole class")]
    DescendsEarly { prefix_len: usize },
    #[error("parity propagation gave x = {propagated} but the congruence gives {congruence}")]
    CongruenceMismatch { propagated: String, congruence: String },
    #[error("an intermediate constant exceeded the range of the integer type")]
    Overflow,
    #[error("empty step sequence")]
    Empty,
}

/// A first-descent word over `{O, E}`.
///
/// Invariants: nonempty; `[E]` or starts with `O`; every `O` is followed by
/// an `E` (so the word ends with `E`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescentPattern {
    steps: Vec<StepKind>,
    odd: u32,
}

impl DescentPattern {
    pub fn new(steps: Vec<StepKind>) -> Result<Self, ParsePatternError> {
        if steps.is_empty() {
            return Err(ParsePatternError::Empty);
        }
        if steps.len() > 1 && steps[0] == StepKind::Even {
            return Err(ParsePatternError::LeadingEven);
        }
        for (position, pair) in steps.iter().enumerate() {
            if *pair == StepKind::Odd && steps.get(position + 1) != Some(&StepKind::Even) {
                return Err(ParsePatternError::UnhalvedOdd { position });
            }
        }
        Ok(Self::from_trace_steps(steps))
    }

    /// Builds a pattern from steps produced by simulation, which satisfy the
    /// invariants by construction.
    pub(crate) fn from_trace_steps(steps: Vec<StepKind>) -> Self {
        let odd = steps.iter().filter(|s| **s == StepKind::Odd).count() as u32;
        Self { steps, odd }
    }

    /// The one-step pattern of the even numbers.
    pub fn even() -> Self {
        Self::from_trace_steps(vec![StepKind::Even])
    }

    pub fn steps(&self) -> &[StepKind] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `i`, the number of `3n + 1` steps.
    pub fn odd_count(&self) -> u32 {
        self.odd
    }

    /// `j`, the number of halvings.
    pub fn even_count(&self) -> u32 {
        self.steps.len() as u32 - self.odd
    }

    pub fn is_even_class(&self) -> bool {
        self.steps == [StepKind::Even]
    }
}

impl fmt::Display for DescentPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for DescentPattern {
    type Err = ParsePatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let steps = s
            .chars()
            .enumerate()
            .map(|(position, c)| StepKind::from_symbol(c).ok_or(ParsePatternError::BadSymbol { found: c, position }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(steps)
    }
}

/// All starts `2^j k + x` (`k >= 0`) that share one descent pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueClass<T> {
    pattern: DescentPattern,
    adder: T,
    offset: T,
    modulus: T,
    first_lower: T,
}

impl<T: Natural> ResidueClass<T> {
    pub(crate) fn from_parts(pattern: DescentPattern, adder: T, offset: T, modulus: T, first_lower: T) -> Self {
        Self {
            pattern,
            adder,
            offset,
            modulus,
            first_lower,
        }
    }

    pub fn pattern(&self) -> &DescentPattern {
        &self.pattern
    }

    /// `i`.
    pub fn odd_count(&self) -> u32 {
        self.pattern.odd_count()
    }

    /// `j`; the modulus is `2^j`.
    pub fn even_count(&self) -> u32 {
        self.pattern.even_count()
    }

    /// `m`, the accumulated contribution of the `+1` terms.
    pub fn adder(&self) -> &T {
        &self.adder
    }

    /// `x`, the smallest member (`0` for the even class).
    pub fn offset(&self) -> &T {
        &self.offset
    }

    pub fn modulus(&self) -> &T {
        &self.modulus
    }

    /// `y0 = (3^i x + m) / 2^j`.
    pub fn first_lower(&self) -> &T {
        &self.first_lower
    }

    /// Whether `n` (which must be at least 2 to descend) lies in this class.
    pub fn contains(&self, n: &T) -> bool {
        !n.is_zero() && n.mod_floor(&self.modulus) == self.offset
    }

    /// `2^j k + x`.
    pub fn member(&self, k: &T) -> Option<T> {
        self.modulus.checked_mul(k)?.checked_add(&self.offset)
    }

    /// Residues modulo `2^depth` covered by this class (`depth >= j`,
    /// `depth <= 63`), in increasing order.
    pub fn residues_mod(&self, depth: u32) -> impl Iterator<Item = u64> {
        let j = self.even_count();
        assert!(
            j <= depth && depth <= 63,
            "lift depth {depth} must be in j..=63 (j = {j})"
        );
        let x = self.offset.low_bits(64);
        let step = 1u64 << j;
        (0..1u64 << (depth - j)).map(move |k| k * step + x)
    }

    /// Converts to another integer representation.
    pub fn convert<U: Natural>(&self) -> Option<ResidueClass<U>> {
        let conv = |v: &T| -> Option<U> { U::parse_decimal(&v.to_string()) };
        Some(ResidueClass {
            pattern: self.pattern.clone(),
            adder: conv(&self.adder)?,
            offset: conv(&self.offset)?,
            modulus: conv(&self.modulus)?,
            first_lower: conv(&self.first_lower)?,
        })
    }
}

impl<T: Natural> fmt::Display for ResidueClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}k+{} [{}]", self.modulus, self.offset, self.pattern)
    }
}
