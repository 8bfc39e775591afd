//! Per-level step-skip decisions.

use std::fmt;

use super::TransformError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Prediction,
    Update,
    Reorder,
}

/// A pair of complementary subbands, i.e. the output of one 1-D pass group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    /// Column pass producing `(L, H)`.
    Vertical,
    /// Row pass over the low band producing `(LL, HL)`.
    LowRow,
    /// Row pass over the high band producing `(LH, HH)`.
    HighRow,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::Vertical, Pair::LowRow, Pair::HighRow];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn prediction_slot(self) -> Subband {
        match self {
            Pair::Vertical => Subband::H,
            Pair::LowRow => Subband::HL,
            Pair::HighRow => Subband::HH,
        }
    }

    pub fn update_slot(self) -> Subband {
        match self {
            Pair::Vertical => Subband::L,
            Pair::LowRow => Subband::LL,
            Pair::HighRow => Subband::LH,
        }
    }
}

/// A lifting slot, named after the subband the step computes.
///
/// Prediction slots are `H`, `HL`, `HH`; update slots are `L`, `LL`, `LH`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subband {
    H,
    L,
    HL,
    LL,
    HH,
    LH,
}

impl Subband {
    /// Slot order used by the greedy searches.
    pub const SEARCH_ORDER: [Subband; 6] = [
        Subband::H,
        Subband::L,
        Subband::HL,
        Subband::HH,
        Subband::LL,
        Subband::LH,
    ];

    /// Storage order: prediction then update for each pair.
    pub const SLOT_ORDER: [Subband; 6] = [
        Subband::H,
        Subband::L,
        Subband::HL,
        Subband::LL,
        Subband::HH,
        Subband::LH,
    ];

    pub fn pair(self) -> Pair {
        match self {
            Subband::H | Subband::L => Pair::Vertical,
            Subband::HL | Subband::LL => Pair::LowRow,
            Subband::HH | Subband::LH => Pair::HighRow,
        }
    }

    pub fn kind(self) -> StepKind {
        match self {
            Subband::H | Subband::HL | Subband::HH => StepKind::Prediction,
            Subband::L | Subband::LL | Subband::LH => StepKind::Update,
        }
    }

    /// Position in [`Subband::SLOT_ORDER`].
    #[inline]
    pub fn slot_index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Subband::H => "H",
            Subband::L => "L",
            Subband::HL => "HL",
            Subband::LL => "LL",
            Subband::HH => "HH",
            Subband::LH => "LH",
        }
    }
}

impl fmt::Display for Subband {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Skip flags for one pair of complementary subbands.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PairDecision {
    pub skip_pred: bool,
    pub skip_upd: bool,
    pub skip_reorder: bool,
}

impl PairDecision {
    pub const PERFORM: Self = Self {
        skip_pred: false,
        skip_upd: false,
        skip_reorder: false,
    };

    pub const SKIP_ALL: Self = Self {
        skip_pred: true,
        skip_upd: true,
        skip_reorder: true,
    };

    /// The five legal states, in enumeration order.
    pub const LEGAL: [Self; 5] = [
        Self::PERFORM,
        Self {
            skip_pred: true,
            skip_upd: false,
            skip_reorder: false,
        },
        Self {
            skip_pred: false,
            skip_upd: true,
            skip_reorder: false,
        },
        Self {
            skip_pred: true,
            skip_upd: true,
            skip_reorder: false,
        },
        Self::SKIP_ALL,
    ];

    /// Reorder may only be skipped when both lifting steps are.
    #[inline]
    pub fn is_legal(self) -> bool {
        !self.skip_reorder || (self.skip_pred && self.skip_upd)
    }

    /// Re-derives the reorder flag: skipped iff both lifting steps are.
    pub fn with_derived_reorder(mut self) -> Self {
        self.skip_reorder = self.skip_pred && self.skip_upd;
        self
    }

    pub fn skip(self, kind: StepKind) -> bool {
        match kind {
            StepKind::Prediction => self.skip_pred,
            StepKind::Update => self.skip_upd,
            StepKind::Reorder => self.skip_reorder,
        }
    }
}

/// Decisions for a single transform level.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LevelDecisions {
    pairs: [PairDecision; 3],
}

impl LevelDecisions {
    pub const PERFORM: Self = Self {
        pairs: [PairDecision::PERFORM; 3],
    };

    pub const SKIP_ALL: Self = Self {
        pairs: [PairDecision::SKIP_ALL; 3],
    };

    pub fn new(vertical: PairDecision, low_row: PairDecision, high_row: PairDecision) -> Self {
        Self {
            pairs: [vertical, low_row, high_row],
        }
    }

    #[inline]
    pub fn pair(&self, pair: Pair) -> PairDecision {
        self.pairs[pair.index()]
    }

    #[inline]
    pub fn pair_mut(&mut self, pair: Pair) -> &mut PairDecision {
        &mut self.pairs[pair.index()]
    }

    pub fn skips(&self, slot: Subband) -> bool {
        self.pair(slot.pair()).skip(slot.kind())
    }

    pub fn set_skip(&mut self, slot: Subband, skip: bool) {
        let p = self.pair_mut(slot.pair());
        match slot.kind() {
            StepKind::Prediction => p.skip_pred = skip,
            StepKind::Update => p.skip_upd = skip,
            StepKind::Reorder => unreachable!(),
        }
    }

    pub fn is_legal(&self) -> bool {
        self.pairs.iter().all(|p| p.is_legal())
    }

    /// The nine flags in side-information order:
    /// `pred_H, upd_L, reorder_V, pred_HL, upd_LL, reorder_LR, pred_HH, upd_LH, reorder_HR`.
    pub fn to_bits(&self) -> [bool; 9] {
        let mut bits = [false; 9];
        for (i, p) in self.pairs.iter().enumerate() {
            bits[3 * i] = p.skip_pred;
            bits[3 * i + 1] = p.skip_upd;
            bits[3 * i + 2] = p.skip_reorder;
        }
        bits
    }

    pub fn from_bits(bits: [bool; 9]) -> Self {
        let pair = |i: usize| PairDecision {
            skip_pred: bits[3 * i],
            skip_upd: bits[3 * i + 1],
            skip_reorder: bits[3 * i + 2],
        };
        Self::new(pair(0), pair(1), pair(2))
    }
}

/// Decisions for every level of a `t`-level transform; `t = 0` is NO-DWT.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DecisionSet {
    levels: Vec<LevelDecisions>,
}

impl DecisionSet {
    pub fn new(levels: Vec<LevelDecisions>) -> Self {
        Self { levels }
    }

    pub fn uniform(t: usize, level: LevelDecisions) -> Self {
        Self::new(vec![level; t])
    }

    /// The unmodified DWT.
    pub fn perform_all(t: usize) -> Self {
        Self::uniform(t, LevelDecisions::PERFORM)
    }

    pub fn skip_all(t: usize) -> Self {
        Self::uniform(t, LevelDecisions::SKIP_ALL)
    }

    /// Number of transform levels.
    #[inline]
    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    #[inline]
    pub fn as_slice(&self) -> &[LevelDecisions] {
        &self.levels
    }

    /// Decisions of level `level` (1-based).
    pub fn level(&self, level: usize) -> &LevelDecisions {
        &self.levels[level - 1]
    }

    pub fn level_mut(&mut self, level: usize) -> &mut LevelDecisions {
        &mut self.levels[level - 1]
    }

    pub fn validate(&self) -> Result<(), TransformError> {
        for (i, lvl) in self.levels.iter().enumerate() {
            for pair in Pair::ALL {
                if !lvl.pair(pair).is_legal() {
                    return Err(TransformError::IllegalDecisions { level: i + 1, pair });
                }
            }
        }
        Ok(())
    }

    pub fn is_legal(&self) -> bool {
        self.validate().is_ok()
    }

    /// Number of set skip flags across all levels.
    pub fn skipped_flags(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.to_bits().iter().filter(|&&b| b).count())
            .sum()
    }
}

/// Transform configurations that carry no side information.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedVariant {
    Dwt,
    AllSkip,
    /// All update steps skipped.
    Fix1,
    /// FIX1 plus the `HH` prediction and the `(LH, HH)` reorder skipped.
    Fix2,
}

pub fn fixed_variant_decisions(variant: FixedVariant, t: usize) -> DecisionSet {
    let level = match variant {
        FixedVariant::Dwt => LevelDecisions::PERFORM,
        FixedVariant::AllSkip => LevelDecisions::SKIP_ALL,
        FixedVariant::Fix1 => {
            let no_update = PairDecision {
                skip_upd: true,
                ..PairDecision::PERFORM
            };
            LevelDecisions::new(no_update, no_update, no_update)
        }
        FixedVariant::Fix2 => {
            let no_update = PairDecision {
                skip_upd: true,
                ..PairDecision::PERFORM
            };
            LevelDecisions::new(no_update, no_update, PairDecision::SKIP_ALL)
        }
    };
    DecisionSet::uniform(t, level)
}

/// Every legal decision set with `t` levels, `5^(3t)` in total, in a
/// fixed order (level 1 pairs vary slowest).
pub fn enumerate_legal(t: usize) -> impl Iterator<Item = DecisionSet> {
    let slots = 3 * t;
    let total = 5usize.pow(slots as u32);
    (0..total).map(move |mut code| {
        let mut states = vec![PairDecision::PERFORM; slots];
        for s in states.iter_mut().rev() {
            *s = PairDecision::LEGAL[code % 5];
            code /= 5;
        }
        DecisionSet::new(
            states
                .chunks_exact(3)
                .map(|c| LevelDecisions::new(c[0], c[1], c[2]))
                .collect(),
        )
    })
}
