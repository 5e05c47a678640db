use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

/// `2^j - 3^i`. Positive exactly when a word with `i` odd and `j` even steps
/// can end below its start.
pub fn feasibility_margin(odd: u32, even: u32) -> BigInt {
    let two_pow = BigInt::from(BigUint::from(1u8) << even);
    let three_pow = BigInt::from(BigUint::from(3u8).pow(odd));
    two_pow - three_pow
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    EvenNumber,
    ShortestCycle,
    Possible,
    NotPossible,
}

impl fmt::Display for Feasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Feasibility::EvenNumber => "Even number",
            Feasibility::ShortestCycle => "Shortest cycle",
            Feasibility::Possible => "Possible",
            Feasibility::NotPossible => "Not possible",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityRow {
    pub even_ops: u32,
    pub odd_ops: u32,
    pub margin: BigInt,
    pub remark: Feasibility,
}

impl FeasibilityRow {
    pub fn length(&self) -> u32 {
        self.even_ops + self.odd_ops
    }
}

/// Rows of the length-feasibility table up to `max_length` steps.
///
/// For each odd count `i` the even count climbs until the margin first turns
/// positive. It restarts one past the previous positive `j`, except that the
/// previous `j` itself is kept when it equals `i + 1` (the fewest halvings a
/// word with `i` odd steps can have).
pub fn feasibility_table(max_length: u32) -> Vec<FeasibilityRow> {
    let mut rows = Vec::new();
    let mut last_positive = 0u32;
    for odd in 0u32.. {
        let mut even = if odd >= 1 && last_positive == odd + 1 {
            last_positive
        } else {
            (last_positive + 1).max(odd + 1)
        };
        loop {
            if odd + even > max_length {
                return rows;
            }
            let margin = feasibility_margin(odd, even);
            let positive = margin.is_positive();
            let remark = match (odd, even, positive) {
                (0, 1, _) => Feasibility::EvenNumber,
                (1, 2, _) => Feasibility::ShortestCycle,
                (_, _, true) => Feasibility::Possible,
                (_, _, false) => Feasibility::NotPossible,
            };
            rows.push(FeasibilityRow {
                even_ops: even,
                odd_ops: odd,
                margin,
                remark,
            });
            if positive {
                last_positive = even;
                break;
            }
            even += 1;
        }
    }
    unreachable!("the odd-count loop only exits through the length check")
}
