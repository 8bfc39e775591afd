//! Reversible 5/3 lifting DWT and its skipped-steps generalisation.

use thiserror::Error;

mod affected;
mod decisions;
mod geometry;
pub mod lifting;
mod ssdwt;

pub use affected::{affected_regions, apply_slot_change, AffectedRegions};
pub use decisions::{
    enumerate_legal, fixed_variant_decisions, DecisionSet, FixedVariant, LevelDecisions, Pair,
    PairDecision, StepKind, Subband,
};
pub use geometry::{level_rects, nominal_regions, region_index, BandLabel, LevelRect, Region};
pub use ssdwt::{
    check_range, forward_ssdwt, forward_stage, inverse_ssdwt, inverse_stage, range_bound, STAGES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("illegal decisions at level {level}: reorder skipped for {pair:?} while a lifting step is performed")]
    IllegalDecisions { level: usize, pair: Pair },
    #[error("sample {value} at index {index} exceeds the dynamic-range bound {bound}")]
    RangeOverflow {
        index: usize,
        value: i32,
        bound: i64,
    },
}
