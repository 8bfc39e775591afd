//! Image-adaptive selection of skipped lifting steps.

mod cost;
mod heuristics;
mod oracle;
mod session;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coding::Evaluator;
use crate::config::Configuration;
use crate::rdls::FilterId;
use crate::transform::{Pair, Subband, TransformError};
use crate::{CostCounters, SampleGrid};

pub use cost::{predicted_cost, CostHeuristic, PredictedCost};
pub use heuristics::{bh, h_ss_rdls, rh, step_a, BhFlavor};
pub use oracle::{brute_force_best, classify, select_variant, Variant, BRUTE_FORCE_MAX_DIM};
pub use session::Session;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("filter set must not be empty")]
    FilterSetTooSmall,
    #[error("filter set must contain the None filter")]
    MissingNoneFilter,
    #[error("search needs at least one transform level")]
    NoLevels,
    #[error("exhaustive search limited to t <= 2 and {max}x{max} images, got t={levels} on {width}x{height}")]
    TooLarge {
        levels: usize,
        width: usize,
        height: usize,
        max: usize,
    },
    #[error("no candidate variants given")]
    NoCandidates,
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    Bh,
    BhTr,
    BhAr,
    BhPw,
    Rh,
    HSsRdls,
}

impl Heuristic {
    pub const ALL: [Heuristic; 6] = [
        Heuristic::Bh,
        Heuristic::BhTr,
        Heuristic::BhAr,
        Heuristic::BhPw,
        Heuristic::Rh,
        Heuristic::HSsRdls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Bh => "bh",
            Heuristic::BhTr => "bh-tr",
            Heuristic::BhAr => "bh-ar",
            Heuristic::BhPw => "bh-pw",
            Heuristic::Rh => "rh",
            Heuristic::HSsRdls => "rdls",
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Heuristic::ALL
            .into_iter()
            .find(|h| h.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown heuristic '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub heuristic: Heuristic,
    pub iterations: usize,
    pub evaluator: Evaluator,
    pub levels: usize,
    /// Candidate filters for [`Heuristic::HSsRdls`].
    pub filters: Vec<FilterId>,
}

impl SearchConfig {
    pub fn new(
        heuristic: Heuristic,
        iterations: usize,
        evaluator: Evaluator,
        levels: usize,
    ) -> Self {
        Self {
            heuristic,
            iterations,
            evaluator,
            levels,
            filters: FilterId::ALL.to_vec(),
        }
    }
}

/// Which uniform decision step A picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StartClass {
    AllSkipStart,
    PerformStart,
}

/// Coarse image class derived from step A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImageClass {
    NoPhotoA,
    Other,
}

/// What one trial changed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialTarget {
    /// The lifting step of one subband.
    Slot(Subband),
    /// `HH` together with `LH`, when the `HH` trial lands on skip.
    Coupled(Subband, Subband),
    /// The reorder of a pair whose lifting steps are both skipped.
    Reorder(Pair),
    /// All three steps of a pair.
    WholePair(Pair),
    /// A filter replacing the current one of a subband.
    Filter(Subband, FilterId),
}

impl fmt::Display for TrialTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrialTarget::Slot(s) => write!(f, "{s}"),
            TrialTarget::Coupled(a, b) => write!(f, "{a}+{b}"),
            TrialTarget::Reorder(p) => write!(f, "reorder {p:?}"),
            TrialTarget::WholePair(p) => write!(f, "pair {p:?}"),
            TrialTarget::Filter(s, id) => write!(f, "{s}={id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub iteration: usize,
    pub level: usize,
    pub target: TrialTarget,
    pub before: f64,
    pub after: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// `Configuration::Ssdwt` or `Configuration::Rdls`.
    pub configuration: Configuration,
    /// Value under the search evaluator, in bits per pixel.
    pub bpp: f64,
    pub start: StartClass,
    /// Work spent by this search.
    pub counters: CostCounters,
    pub trials: Vec<Trial>,
}

impl SearchOutcome {
    pub fn accepted(&self) -> usize {
        self.trials.iter().filter(|t| t.accepted).count()
    }
}

/// Runs the heuristic named by `config`, adding its work to `counters`.
pub fn run_search(
    image: &SampleGrid,
    config: &SearchConfig,
    counters: &mut CostCounters,
) -> Result<SearchOutcome, SearchError> {
    let (t, n, ev) = (config.levels, config.iterations, config.evaluator);
    match config.heuristic {
        Heuristic::Bh => bh(image, t, n, BhFlavor::Plain, ev, counters),
        Heuristic::BhTr => bh(image, t, n, BhFlavor::TestReorder, ev, counters),
        Heuristic::BhAr => bh(image, t, n, BhFlavor::AlwaysReorder, ev, counters),
        Heuristic::BhPw => bh(image, t, n, BhFlavor::PairWise, ev, counters),
        Heuristic::Rh => rh(image, t, n, ev, counters),
        Heuristic::HSsRdls => h_ss_rdls(image, t, n, &config.filters, ev, counters),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heuristic_names_round_trip() {
        for h in Heuristic::ALL {
            assert_eq!(h.name().parse::<Heuristic>(), Ok(h));
        }
        assert!("greedy".parse::<Heuristic>().is_err());
    }
}
