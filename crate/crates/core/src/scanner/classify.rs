use num_rational::Ratio;

use crate::pattern::enumerate_classes_within_depth;
use crate::scanner::ScanError;
use crate::{BigClass, Natural};

/// Largest supported classification depth. The residue bitmap at this depth
/// takes 2 MiB.
pub const MAX_DEPTH: u32 = 24;

/// Classes resolved by depth `J` and what they leave uncovered mod `2^J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub depth: u32,
    /// Sorted by `(j, x)`.
    pub classes: Vec<BigClass>,
    /// `sum of 2^-j` over `classes`.
    pub resolved_measure: Ratio<u64>,
    /// Residues mod `2^J` (all odd) not covered by any class.
    pub unresolved_residues: Vec<u64>,
}

/// Membership bitmap over residues mod `2^J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sieve {
    depth: u32,
    words: Vec<u64>,
}

impl Sieve {
    /// A sieve that covers nothing.
    pub fn empty() -> Self {
        Self {
            depth: 0,
            words: vec![0],
        }
    }

    fn from_classes(depth: u32, classes: &[BigClass]) -> Self {
        let size = 1usize << depth;
        let mut words = vec![0u64; size.div_ceil(64)];
        for class in classes {
            for r in class.residues_mod(depth) {
                words[(r / 64) as usize] |= 1 << (r % 64);
            }
        }
        Self { depth, words }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn covers_residue(&self, residue: u64) -> bool {
        self.words[(residue / 64) as usize] >> (residue % 64) & 1 == 1
    }

    pub fn covers<T: Natural>(&self, n: &T) -> bool {
        self.depth > 0 && self.covers_residue(n.low_bits(self.depth))
    }

    pub fn covered_count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

impl ClassificationReport {
    /// Assembles a report, rejecting class sets that overlap or exceed the depth.
    pub fn from_classes(depth: u32, classes: Vec<BigClass>) -> Result<Self, String> {
        if depth == 0 || depth > MAX_DEPTH {
            return Err(format!("depth {depth} is outside 1..={MAX_DEPTH}"));
        }
        if let Some(c) = classes.iter().find(|c| c.even_count() > depth) {
            return Err(format!("class {c} is deeper than {depth}"));
        }
        let total = 1u64 << depth;
        let by_sum: u64 = classes.iter().map(|c| 1u64 << (depth - c.even_count())).sum();
        let sieve = Sieve::from_classes(depth, &classes);
        let by_bitmap = sieve.covered_count();
        if by_sum != by_bitmap {
            return Err(format!(
                "classes overlap: they claim {by_sum} residues mod 2^{depth} but cover {by_bitmap}"
            ));
        }
        let unresolved_residues = (0..total).filter(|&r| !sieve.covers_residue(r)).collect();
        Ok(Self {
            depth,
            classes,
            resolved_measure: Ratio::new(by_sum, total),
            unresolved_residues,
        })
    }

    /// The measure recomputed from the residue bitmap rather than from `2^-j`.
    pub fn measure_by_bitmap(&self) -> Ratio<u64> {
        Ratio::new(self.sieve().covered_count(), 1u64 << self.depth)
    }

    pub fn sieve(&self) -> Sieve {
        Sieve::from_classes(self.depth, &self.classes)
    }
}

/// Unions every minimal class with `j <= depth`.
pub fn classify_depth(depth: u32) -> Result<ClassificationReport, ScanError> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(ScanError::DepthTooLarge { depth, max: MAX_DEPTH });
    }
    let classes = enumerate_classes_within_depth::<u128>(depth)?
        .iter()
        .map(|c| c.convert().expect("u128 constants fit in BigUint"))
        .collect();
    Ok(ClassificationReport::from_classes(depth, classes).expect("enumerated classes are disjoint"))
}
