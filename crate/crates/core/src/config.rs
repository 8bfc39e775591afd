//! Transform configurations and the container modes that carry them.

use std::fmt;
use std::str::FromStr;

use crate::rdls::{forward_rdls_ssdwt, inverse_rdls_ssdwt, FilterAssignment, FilterId};
use crate::transform::{
    fixed_variant_decisions, forward_ssdwt, inverse_ssdwt, nominal_regions, DecisionSet,
    FixedVariant, StepKind, TransformError, STAGES,
};
use crate::{CostCounters, SampleGrid};

/// Container mode byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Dwt,
    NoDwt,
    Ssdwt,
    Fix1,
    Fix2,
    RdlsSsdwt,
}

impl Mode {
    pub const ALL: [Mode; 6] = [
        Mode::Dwt,
        Mode::NoDwt,
        Mode::Ssdwt,
        Mode::Fix1,
        Mode::Fix2,
        Mode::RdlsSsdwt,
    ];

    pub fn code(self) -> u8 {
        match self {
            Mode::Dwt => 0,
            Mode::NoDwt => 1,
            Mode::Ssdwt => 2,
            Mode::Fix1 => 3,
            Mode::Fix2 => 4,
            Mode::RdlsSsdwt => 5,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Mode::ALL.into_iter().find(|m| m.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Dwt => "dwt",
            Mode::NoDwt => "nodwt",
            Mode::Ssdwt => "ss",
            Mode::Fix1 => "fix1",
            Mode::Fix2 => "fix2",
            Mode::RdlsSsdwt => "rdls-ss",
        }
    }

    /// Bytes between the header and the first region.
    pub fn side_info_bytes(self, t: usize) -> usize {
        match self {
            Mode::Ssdwt => (9 * t).div_ceil(8),
            Mode::RdlsSsdwt => (9 * t).div_ceil(8) + 6 * t,
            _ => 0,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown mode '{s}'"))
    }
}

pub const HEADER_BYTES: usize = 16;
/// Length prefix in front of every region payload.
pub const REGION_PREFIX_BYTES: usize = 4;

/// A complete transform choice for one image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Configuration {
    Dwt(usize),
    NoDwt,
    Fix1(usize),
    Fix2(usize),
    Ssdwt(DecisionSet),
    Rdls(FilterAssignment),
}

/// What one forward stage does under a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StageOp {
    Skip,
    Lift(FilterId),
    Reorder,
}

impl Configuration {
    pub fn mode(&self) -> Mode {
        match self {
            Configuration::Dwt(_) => Mode::Dwt,
            Configuration::NoDwt => Mode::NoDwt,
            Configuration::Fix1(_) => Mode::Fix1,
            Configuration::Fix2(_) => Mode::Fix2,
            Configuration::Ssdwt(_) => Mode::Ssdwt,
            Configuration::Rdls(_) => Mode::RdlsSsdwt,
        }
    }

    pub fn levels(&self) -> usize {
        match self {
            Configuration::Dwt(t) | Configuration::Fix1(t) | Configuration::Fix2(t) => *t,
            Configuration::NoDwt => 0,
            Configuration::Ssdwt(d) => d.levels(),
            Configuration::Rdls(a) => a.levels(),
        }
    }

    /// Skip flags of the configuration; RDLS assignments map to their
    /// derived flags.
    pub fn decisions(&self) -> DecisionSet {
        match self {
            Configuration::Dwt(t) => fixed_variant_decisions(FixedVariant::Dwt, *t),
            Configuration::NoDwt => DecisionSet::perform_all(0),
            Configuration::Fix1(t) => fixed_variant_decisions(FixedVariant::Fix1, *t),
            Configuration::Fix2(t) => fixed_variant_decisions(FixedVariant::Fix2, *t),
            Configuration::Ssdwt(d) => d.clone(),
            Configuration::Rdls(a) => a.derived_decisions(),
        }
    }

    /// Per-level stage operations in [`STAGES`] order.
    pub fn stage_ops(&self) -> Vec<[StageOp; 9]> {
        match self {
            Configuration::Rdls(a) => (1..=a.levels())
                .map(|level| {
                    STAGES.map(|(pair, kind)| match kind {
                        StepKind::Reorder if a.performs_reorder(level, pair) => StageOp::Reorder,
                        StepKind::Reorder => StageOp::Skip,
                        StepKind::Prediction => filter_op(a.get(level, pair.prediction_slot())),
                        StepKind::Update => filter_op(a.get(level, pair.update_slot())),
                    })
                })
                .collect(),
            other => other
                .decisions()
                .as_slice()
                .iter()
                .map(|lvl| {
                    STAGES.map(|(pair, kind)| match (lvl.pair(pair).skip(kind), kind) {
                        (true, _) => StageOp::Skip,
                        (false, StepKind::Reorder) => StageOp::Reorder,
                        (false, _) => StageOp::Lift(FilterId::None),
                    })
                })
                .collect(),
        }
    }

    pub fn forward(
        &self,
        grid: &mut SampleGrid,
        counters: &mut CostCounters,
    ) -> Result<(), TransformError> {
        match self {
            Configuration::Rdls(a) => forward_rdls_ssdwt(grid, a, counters),
            other => forward_ssdwt(grid, &other.decisions(), counters),
        }
    }

    pub fn inverse(&self, grid: &mut SampleGrid) -> Result<(), TransformError> {
        match self {
            Configuration::Rdls(a) => inverse_rdls_ssdwt(grid, a),
            other => inverse_ssdwt(grid, &other.decisions()),
        }
    }

    /// Container bytes other than region payloads.
    pub fn overhead_bytes(&self, width: usize, height: usize) -> usize {
        let t = self.levels();
        HEADER_BYTES
            + self.mode().side_info_bytes(t)
            + REGION_PREFIX_BYTES * nominal_regions(width, height, t).len()
    }
}

fn filter_op(filter: FilterId) -> StageOp {
    match filter {
        FilterId::Null => StageOp::Skip,
        f => StageOp::Lift(f),
    }
}
