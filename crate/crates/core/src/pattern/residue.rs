use crate::dynamics::StepKind;
use crate::pattern::{DescentPattern, PatternError, ResidueClass};
use crate::scalar::Natural;

/// The affine form `(3^i n + m) / 2^j` a pattern applies to its start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternConstants<T> {
    pub odd: u32,
    pub even: u32,
    pub adder: T,
}

/// Folds a step word into `(i, j, m)`. An `E` bumps `j`; an `O` maps
/// `m -> 3m + 2^j` and bumps `i`.
pub fn pattern_constants<T: Natural>(pattern: &DescentPattern) -> Result<PatternConstants<T>, PatternError> {
    fold_constants(pattern.steps())
}

fn fold_constants<T: Natural>(steps: &[StepKind]) -> Result<PatternConstants<T>, PatternError> {
    let three = T::lift(3).ok_or(PatternError::Overflow)?;
    let mut adder = T::zero();
    let mut pow2 = T::one();
    let mut odd = 0;
    let mut even = 0;
    for step in steps {
        match step {
            StepKind::Odd => {
                adder = adder
                    .checked_mul(&three)
                    .and_then(|v| v.checked_add(&pow2))
                    .ok_or(PatternError::Overflow)?;
                odd += 1;
            }
            StepKind::Even => {
                pow2 = pow2.checked_mul(&T::two()).ok_or(PatternError::Overflow)?;
                even += 1;
            }
        }
    }
    Ok(PatternConstants { odd, even, adder })
}

/// Solves `3^i x + m = 0 (mod 2^j)` for `0 <= x < 2^j` directly, using the
/// 2-adic inverse of 3.
pub fn congruence_offset<T: Natural>(odd: u32, even: u32, adder: &T) -> Result<T, PatternError> {
    let modulus = T::pow2(even).ok_or(PatternError::Overflow)?;
    let reduce = |v: T| v.mod_floor(&modulus);
    let mul = |a: &T, b: &T| -> Result<T, PatternError> { a.checked_mul(b).map(reduce).ok_or(PatternError::Overflow) };
    let three = T::lift(3).ok_or(PatternError::Overflow)?;

    // Newton iteration inv <- inv (2 - 3 inv) doubles the correct low bits.
    let mut inv = reduce(T::one());
    let mut precision = 1u32;
    while precision < even {
        let three_inv = mul(&three, &inv)?;
        let correction = reduce(T::two() + modulus.clone() - three_inv);
        inv = mul(&inv, &correction)?;
        precision *= 2;
    }

    let mut inv_pow = reduce(T::one());
    for _ in 0..odd {
        inv_pow = mul(&inv_pow, &inv)?;
    }
    let neg_adder = reduce(modulus.clone() - reduce(adder.clone()));
    mul(&neg_adder, &inv_pow)
}

/// Finds the class of starts realizing `pattern`.
pub fn residue_for_pattern<T: Natural>(pattern: &DescentPattern) -> Result<ResidueClass<T>, PatternError> {
    residue_for_steps(pattern.steps())
}

/// Parity-constraint propagation over a raw step word.
///
/// The start is tracked as `x` modulo `2^B`. While the running affine form
/// still has an odd coefficient on the unknown high part (the first step and
/// each step after an `E`), one more bit of `x` is pinned to give the required
/// parity. Elsewhere the parity is already forced, and a mismatch means the
/// word cannot occur.
pub fn residue_for_steps<T: Natural>(steps: &[StepKind]) -> Result<ResidueClass<T>, PatternError> {
    if steps.is_empty() {
        return Err(PatternError::Empty);
    }
    let overflow = || PatternError::Overflow;
    let three = T::lift(3).ok_or_else(overflow)?;

    let mut pow3 = T::one();
    let mut pow2 = T::one();
    let mut adder = T::zero();
    let mut offset = T::zero();
    let mut pinned_bits = 0u32;
    let mut even = 0u32;

    for (idx, step) in steps.iter().enumerate() {
        let numerator = pow3
            .checked_mul(&offset)
            .and_then(|v| v.checked_add(&adder))
            .ok_or_else(overflow)?;
        let (current, rem) = numerator.div_rem(&pow2);
        debug_assert!(rem.is_zero());
        let want_odd = *step == StepKind::Odd;
        if pinned_bits == even {
            if current.is_odd() != want_odd {
                offset = offset.checked_add(&pow2).ok_or_else(overflow)?;
            }
            pinned_bits += 1;
        } else if current.is_odd() != want_odd {
            return Err(PatternError::UnrealizablePattern { step: idx + 1 });
        }

        match step {
            StepKind::Odd => {
                adder = adder
                    .checked_mul(&three)
                    .and_then(|v| v.checked_add(&pow2))
                    .ok_or_else(overflow)?;
                pow3 = pow3.checked_mul(&three).ok_or_else(overflow)?;
            }
            StepKind::Even => {
                pow2 = pow2.checked_mul(&T::two()).ok_or_else(overflow)?;
                even += 1;
                if idx + 1 < steps.len() && pow2 > pow3 {
                    return Err(PatternError::DescendsEarly { prefix_len: idx + 1 });
                }
            }
        }
    }

    let odd = steps.len() as u32 - even;
    if pow2 <= pow3 || pinned_bits != even {
        return Err(PatternError::NotADescent { odd, even });
    }
    let first_lower = pow3
        .checked_mul(&offset)
        .and_then(|v| v.checked_add(&adder))
        .ok_or_else(overflow)?
        / pow2.clone();
    let two = T::two();
    if offset >= two && first_lower >= offset {
        return Err(PatternError::NotADescent { odd, even });
    }

    let congruence = congruence_offset(odd, even, &adder)?;
    if congruence != offset {
        return Err(PatternError::CongruenceMismatch {
            propagated: offset.to_string(),
            congruence: congruence.to_string(),
        });
    }

    Ok(ResidueClass::from_parts(
        DescentPattern::from_trace_steps(steps.to_vec()),
        adder,
        offset,
        pow2,
        first_lower,
    ))
}

/// `y_k = (3^i (2^j k + x) + m) / 2^j`.
pub fn first_lower_value<T: Natural>(class: &ResidueClass<T>, k: &T) -> Result<T, PatternError> {
    let pow3 = T::pow3(class.odd_count()).ok_or(PatternError::Overflow)?;
    let start = class.member(k).ok_or(PatternError::Overflow)?;
    let numerator = pow3
        .checked_mul(&start)
        .and_then(|v| v.checked_add(class.adder()))
        .ok_or(PatternError::Overflow)?;
    Ok(numerator / class.modulus().clone())
}

/// `y_{k+1} = y_k + 3^i`.
pub fn subsequent_lower_value<T: Natural>(lower: &T, odd: u32) -> Result<T, PatternError> {
    T::pow3(odd)
        .and_then(|p| lower.checked_add(&p))
        .ok_or(PatternError::Overflow)
}

/// `(OE)^i` followed by enough `E`s that `2^j > 3^i` for the first time.
pub fn alternating_pattern(odd: u32) -> DescentPattern {
    let three_pow = num_bigint::BigUint::from(3u8).pow(odd);
    // 3^i is never a power of two for i >= 1, so 2^bits is the first power above it.
    let even = three_pow.bits() as u32;
    let mut steps = Vec::with_capacity((odd + even) as usize);
    for _ in 0..odd {
        steps.push(StepKind::Odd);
        steps.push(StepKind::Even);
    }
    steps.extend(std::iter::repeat_n(StepKind::Even, (even - odd) as usize));
    DescentPattern::from_trace_steps(steps)
}

/// The class of the alternating word with `odd` odd steps. Its adder has the
/// closed form `3^i - 2^i`, which is checked against the fold.
pub fn alternating_family<T: Natural>(odd: u32) -> Result<ResidueClass<T>, PatternError> {
    let pattern = alternating_pattern(odd);
    let folded = pattern_constants::<T>(&pattern)?;
    let closed = T::pow3(odd)
        .zip(T::pow2(odd))
        .and_then(|(p3, p2)| p3.checked_sub(&p2))
        .ok_or(PatternError::Overflow)?;
    assert_eq!(
        folded.adder, closed,
        "alternating adder disagrees with 3^i - 2^i for i = {odd}"
    );
    residue_for_pattern(&pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn pat(s: &str) -> DescentPattern {
        s.parse().unwrap()
    }

    #[test]
    fn constants_by_fold() {
        let c = |s: &str| {
            let k = pattern_constants::<u64>(&pat(s)).unwrap();
            (k.odd, k.even, k.adder)
        };
        assert_eq!(c("OEE"), (1, 2, 1));
        assert_eq!(c("OEOEOEOEOEOEEEEE"), (6, 10, 665));
        assert_eq!(c("OEOEEE"), (2, 4, 5));
        assert_eq!(c("OEOEEOEE"), (3, 5, 23));
        assert_eq!(c("E"), (0, 1, 0));
    }

    #[test]
    fn classes_from_patterns() {
        let c = |s: &str| {
            let k = residue_for_pattern::<u64>(&pat(s)).unwrap();
            (*k.offset(), *k.modulus(), *k.first_lower())
        };
        assert_eq!(c("OEE"), (1, 4, 1));
        assert_eq!(c("OEOEEE"), (3, 16, 2));
        assert_eq!(c("OEOEOEEE"), (23, 32, 20));
        assert_eq!(c("OEOEEOEE"), (11, 32, 10));
        assert_eq!(c("OEOEOEOEOEOEEEEE"), (575, 1024, 410));
        assert_eq!(c("E"), (0, 2, 0));
    }

    #[test]
    fn propagation_errors() {
        use StepKind::{Even as E, Odd as O};
        assert_eq!(
            residue_for_steps::<u64>(&[O, O, E, E]),
            Err(PatternError::UnrealizablePattern { step: 2 })
        );
        assert_eq!(
            residue_for_steps::<u64>(&[O, E]),
            Err(PatternError::NotADescent { odd: 1, even: 1 })
        );
        assert_eq!(
            residue_for_pattern::<u64>(&pat("OEEOEE")),
            Err(PatternError::DescendsEarly { prefix_len: 3 })
        );
        assert_eq!(residue_for_steps::<u64>(&[]), Err(PatternError::Empty));
        assert_eq!(
            residue_for_steps::<u64>(&[E, E]),
            Err(PatternError::DescendsEarly { prefix_len: 1 })
        );
    }

    #[test]
    fn congruence_matches_hand_values() {
        assert_eq!(congruence_offset::<u64>(6, 10, &665), Ok(575));
        assert_eq!(congruence_offset::<u64>(3, 5, &23), Ok(11));
        assert_eq!(congruence_offset::<u64>(0, 1, &0), Ok(0));
        // 3 * 171 = 513 = 1 (mod 512), so -1 * 171 = 341.
        assert_eq!(congruence_offset::<u64>(1, 9, &1), Ok(341));
    }

    #[test]
    fn lower_values_of_eleven_class() {
        let class = residue_for_pattern::<u64>(&pat("OEOEEOEE")).unwrap();
        let ys: Vec<u64> = (0..5).map(|k| first_lower_value(&class, &k).unwrap()).collect();
        assert_eq!(ys, vec![10, 37, 64, 91, 118]);
        assert_eq!(subsequent_lower_value(&10u64, 3), Ok(37));
        assert_eq!(subsequent_lower_value(&64u64, 3), Ok(91));
        assert_eq!(subsequent_lower_value(&8u64, 0), Ok(9));
        let even = residue_for_pattern::<u64>(&DescentPattern::even()).unwrap();
        assert_eq!(first_lower_value(&even, &5), Ok(5));
    }

    #[test]
    fn alternating_members() {
        let one = alternating_family::<u64>(1).unwrap();
        assert_eq!(one.pattern().to_string(), "OEE");
        assert_eq!((*one.offset(), *one.modulus(), *one.adder()), (1, 4, 1));
        let two = alternating_family::<u64>(2).unwrap();
        assert_eq!((*two.offset(), *two.modulus(), *two.adder()), (3, 16, 5));
        let six = alternating_family::<u64>(6).unwrap();
        assert_eq!(six.even_count(), 10);
        assert_eq!((*six.adder(), *six.offset(), *six.first_lower()), (665, 575, 410));
    }

    #[test]
    fn fixed_width_overflow_is_an_error() {
        assert_eq!(alternating_family::<u32>(30).unwrap_err(), PatternError::Overflow);
        let big = alternating_family::<BigUint>(30).unwrap();
        assert_eq!(big.even_count(), 48);
    }
}
