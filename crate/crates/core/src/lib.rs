//! First-descent analysis of the Collatz map.
//!
//! Every start `n >= 2` follows an O/E word until it first drops below `n`.
//! The starts sharing a word form a residue class `2^j k + x`, and their
//! first smaller values follow `y = (3^i (2^j k + x) + m) / 2^j`. This crate
//! enumerates those words and classes, checks them against direct
//! simulation, and uses them as a sieve when verifying ranges.
//!
//! All algorithms are generic over [`Natural`]; the aliases below fix the
//! common choices.

pub mod dynamics;
pub mod pattern;
pub mod scalar;
pub mod scanner;

pub use dynamics::{
    chain_descents, col_step, descent_trace, descent_trace_capped, total_stopping_time, DescentTrace, DynamicsError,
    StepKind, DEFAULT_STEP_CAP,
};
pub use pattern::{
    alternating_family, enumerate_minimal_patterns, feasibility_margin, feasibility_table, first_lower_value,
    pattern_constants, residue_for_pattern, subsequent_lower_value, DescentPattern, PatternError, ResidueClass,
};
pub use scalar::Natural;
pub use scanner::{
    cache_load, cache_store, classify_depth, record_search, sieve_scan, twin_check, ClassificationReport, ScanConfig,
    ScanError, ScanReport, TwinRecord,
};

/// Arbitrary-precision natural number.
pub type Nat = num_bigint::BigUint;

pub type BigTrace = DescentTrace<Nat>;
pub type Trace64 = DescentTrace<u64>;
pub type BigClass = ResidueClass<Nat>;
pub type Class64 = ResidueClass<u64>;
pub type BigTwin = TwinRecord<Nat>;
pub type BigScanReport = ScanReport<Nat>;
pub type ScanReport128 = ScanReport<u128>;
