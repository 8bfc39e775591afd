//! Reversible denoising and lifting steps (RDLS) and the combined
//! RDLS-SS-DWT.
//!
//! Each lifting step reads denoised copies of its operands. A denoised
//! operand only depends on samples of the operand's own parity along the
//! transform axis, and the step only writes the other parity, so the step
//! can be undone exactly by recomputing the same operands.

use std::fmt;
use std::str::FromStr;

use crate::transform::{
    check_range, level_rects, DecisionSet, LevelDecisions, LevelRect, Pair, PairDecision, StepKind,
    Subband, TransformError, STAGES,
};
use crate::{CostCounters, SampleGrid};

/// Denoising filter applied to lifting-step operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterId {
    /// Operands used as-is: a regular lifting step.
    None,
    /// Operands replaced by zero: the step becomes `s ← s`, i.e. skipped.
    Null,
    /// Median over the same-parity samples of a 5×5 window.
    Median5,
}

impl FilterId {
    pub const ALL: [FilterId; 3] = [FilterId::None, FilterId::Null, FilterId::Median5];

    /// Container byte code.
    pub fn code(self) -> u8 {
        match self {
            FilterId::None => 0,
            FilterId::Null => 1,
            FilterId::Median5 => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(FilterId::None),
            1 => Some(FilterId::Null),
            2 => Some(FilterId::Median5),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterId::None => "none",
            FilterId::Null => "null",
            FilterId::Median5 => "median5",
        }
    }
}

impl fmt::Display for FilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(FilterId::None),
            "null" => Ok(FilterId::Null),
            "median5" | "median" => Ok(FilterId::Median5),
            other => Err(format!("unknown filter `{other}`")),
        }
    }
}

/// Filter per level and lifting slot, slots in [`Subband::SLOT_ORDER`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FilterAssignment {
    levels: Vec<[FilterId; 6]>,
}

impl FilterAssignment {
    pub fn new(levels: Vec<[FilterId; 6]>) -> Self {
        Self { levels }
    }

    pub fn uniform(t: usize, filter: FilterId) -> Self {
        Self::new(vec![[filter; 6]; t])
    }

    pub fn levels(&self) -> usize {
        self.levels.len()
    }

    pub fn as_slice(&self) -> &[[FilterId; 6]] {
        &self.levels
    }

    /// Filter of `slot` at `level` (1-based).
    pub fn get(&self, level: usize, slot: Subband) -> FilterId {
        self.levels[level - 1][slot.slot_index()]
    }

    pub fn set(&mut self, level: usize, slot: Subband, filter: FilterId) {
        self.levels[level - 1][slot.slot_index()] = filter;
    }

    /// Skip flags implied by the assignment: `Null` slots are skipped and a
    /// pair's reorder is skipped iff both of its slots are `Null`.
    pub fn derived_decisions(&self) -> DecisionSet {
        DecisionSet::new(
            self.levels
                .iter()
                .map(|slots| {
                    let pair = |p: Pair| {
                        PairDecision {
                            skip_pred: slots[p.prediction_slot().slot_index()] == FilterId::Null,
                            skip_upd: slots[p.update_slot().slot_index()] == FilterId::Null,
                            skip_reorder: false,
                        }
                        .with_derived_reorder()
                    };
                    LevelDecisions::new(
                        pair(Pair::Vertical),
                        pair(Pair::LowRow),
                        pair(Pair::HighRow),
                    )
                })
                .collect(),
        )
    }

    /// `None`/`Null` assignment equivalent to `decisions`, if the reorder
    /// flags follow the derived rule.
    pub fn from_decisions(decisions: &DecisionSet) -> Option<Self> {
        let mut levels = Vec::with_capacity(decisions.levels());
        for lvl in decisions.as_slice() {
            let mut slots = [FilterId::None; 6];
            for pair in Pair::ALL {
                let p = lvl.pair(pair);
                if p != p.with_derived_reorder() {
                    return None;
                }
                for slot in [pair.prediction_slot(), pair.update_slot()] {
                    if lvl.skips(slot) {
                        slots[slot.slot_index()] = FilterId::Null;
                    }
                }
            }
            levels.push(slots);
        }
        Some(Self::new(levels))
    }

    /// Whether the reorder stage of `pair` at `level` runs.
    pub fn performs_reorder(&self, level: usize, pair: Pair) -> bool {
        let slots = &self.levels[level - 1];
        !(slots[pair.prediction_slot().slot_index()] == FilterId::Null
            && slots[pair.update_slot().slot_index()] == FilterId::Null)
    }
}

/// Geometry of one pass group: which lines exist and how long they are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PassContext {
    pub rect: LevelRect,
    pub pair: Pair,
}

impl PassContext {
    pub fn new(rect: LevelRect, pair: Pair) -> Self {
        Self { rect, pair }
    }

    /// Number of samples along the transform axis.
    pub fn axis_len(&self) -> usize {
        match self.pair {
            Pair::Vertical => self.rect.h,
            _ => self.rect.w,
        }
    }

    /// Line indices (columns for the vertical pass, rows otherwise).
    pub fn lines(&self) -> std::ops::Range<usize> {
        match self.pair {
            Pair::Vertical => 0..self.rect.w,
            p => self.rect.rows(p),
        }
    }

    #[inline]
    fn coords(&self, line: usize, pos: usize) -> (usize, usize) {
        match self.pair {
            Pair::Vertical => (line, pos),
            _ => (pos, line),
        }
    }
}

/// Whole-sample symmetric reflection of `i` into `0..len`; parity-preserving.
#[inline]
fn reflect(i: isize, len: usize) -> usize {
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as isize - 1);
    let m = i.rem_euclid(period);
    if m >= len as isize {
        (period - m) as usize
    } else {
        m as usize
    }
}

/// Denoised value of the sample at `pos` on `line`, from the current grid
/// state. The grid is not modified.
///
/// `Median5` takes the median of 15 samples: along-axis offsets `-2, 0, 2`
/// (symmetric extension, which keeps parity) times across-axis offsets
/// `-2..=2` (clamped to the pass group's lines).
pub fn denoise(
    filter: FilterId,
    grid: &SampleGrid,
    ctx: PassContext,
    line: usize,
    pos: usize,
) -> i32 {
    match filter {
        FilterId::None => {
            let (x, y) = ctx.coords(line, pos);
            grid.get(x, y)
        }
        FilterId::Null => 0,
        FilterId::Median5 => {
            let lines = ctx.lines();
            let len = ctx.axis_len();
            let mut window = [0i32; 15];
            let mut k = 0;
            for dl in -2isize..=2 {
                let l = (line as isize + dl).clamp(lines.start as isize, lines.end as isize - 1)
                    as usize;
                for dp in [-2isize, 0, 2] {
                    let p = reflect(pos as isize + dp, len);
                    let (x, y) = ctx.coords(l, p);
                    window[k] = grid.get(x, y);
                    k += 1;
                }
            }
            window.sort_unstable();
            window[7]
        }
    }
}

fn lift_line(
    grid: &mut SampleGrid,
    ctx: PassContext,
    line: usize,
    filter: FilterId,
    kind: StepKind,
    sign: i32,
    counters: Option<&mut CostCounters>,
) {
    let len = ctx.axis_len();
    if filter == FilterId::Null || len < 2 {
        return;
    }
    let start = match kind {
        StepKind::Prediction => 1,
        StepKind::Update => 0,
        StepKind::Reorder => unreachable!("reorder is not a lifting step"),
    };
    let neighbour = |i: isize| reflect(i, len);
    let deltas: Vec<(usize, i32)> = (start..len)
        .step_by(2)
        .map(|pos| {
            let a = denoise(filter, grid, ctx, line, neighbour(pos as isize - 1));
            let b = denoise(filter, grid, ctx, line, neighbour(pos as isize + 1));
            let d = match kind {
                StepKind::Prediction => (a.wrapping_add(b) >> 1).wrapping_neg(),
                _ => a.wrapping_add(b).wrapping_add(2) >> 2,
            };
            (pos, d)
        })
        .collect();
    if let Some(c) = counters {
        c.lifting_steps += deltas.len() as u64;
    }
    for (pos, d) in deltas {
        let (x, y) = ctx.coords(line, pos);
        let v = grid.get(x, y);
        grid.set(x, y, v.wrapping_add(sign.wrapping_mul(d)));
    }
}

/// Denoised prediction on one line: `s[x] -= floor((s^d[x-1] + s^d[x+1]) / 2)`
/// for odd `x`. `Null` leaves the line unchanged and counts nothing.
pub fn rdls_predict_pass(
    grid: &mut SampleGrid,
    ctx: PassContext,
    line: usize,
    filter: FilterId,
    counters: &mut CostCounters,
) {
    lift_line(
        grid,
        ctx,
        line,
        filter,
        StepKind::Prediction,
        1,
        Some(counters),
    );
}

/// Denoised update on one line: `s[x] += floor((s^d[x-1] + s^d[x+1] + 2) / 4)`
/// for even `x`.
pub fn rdls_update_pass(
    grid: &mut SampleGrid,
    ctx: PassContext,
    line: usize,
    filter: FilterId,
    counters: &mut CostCounters,
) {
    lift_line(grid, ctx, line, filter, StepKind::Update, 1, Some(counters));
}

pub fn rdls_unpredict_pass(grid: &mut SampleGrid, ctx: PassContext, line: usize, filter: FilterId) {
    lift_line(grid, ctx, line, filter, StepKind::Prediction, -1, None);
}

pub fn rdls_unupdate_pass(grid: &mut SampleGrid, ctx: PassContext, line: usize, filter: FilterId) {
    lift_line(grid, ctx, line, filter, StepKind::Update, -1, None);
}

/// Applies a denoised lifting step to every line of a pass group.
pub fn rdls_forward_step(
    grid: &mut SampleGrid,
    ctx: PassContext,
    kind: StepKind,
    filter: FilterId,
    counters: &mut CostCounters,
) {
    for line in ctx.lines() {
        match kind {
            StepKind::Prediction => rdls_predict_pass(grid, ctx, line, filter, counters),
            StepKind::Update => rdls_update_pass(grid, ctx, line, filter, counters),
            StepKind::Reorder => unreachable!(),
        }
    }
}

pub fn rdls_inverse_step(
    grid: &mut SampleGrid,
    ctx: PassContext,
    kind: StepKind,
    filter: FilterId,
) {
    for line in ctx.lines() {
        match kind {
            StepKind::Prediction => rdls_unpredict_pass(grid, ctx, line, filter),
            StepKind::Update => rdls_unupdate_pass(grid, ctx, line, filter),
            StepKind::Reorder => unreachable!(),
        }
    }
}

fn reorder_group(grid: &mut SampleGrid, ctx: PassContext, inverse: bool) {
    use crate::transform::lifting::{reorder_pass, unreorder_pass};
    let len = ctx.axis_len();
    let mut buf = vec![0i32; len];
    for line in ctx.lines() {
        for (pos, b) in buf.iter_mut().enumerate() {
            let (x, y) = ctx.coords(line, pos);
            *b = grid.get(x, y);
        }
        if inverse {
            unreorder_pass(&mut buf);
        } else {
            reorder_pass(&mut buf);
        }
        for (pos, &b) in buf.iter().enumerate() {
            let (x, y) = ctx.coords(line, pos);
            grid.set(x, y, b);
        }
    }
}

fn slot_for(pair: Pair, kind: StepKind) -> Subband {
    match kind {
        StepKind::Prediction => pair.prediction_slot(),
        _ => pair.update_slot(),
    }
}

/// Forward RDLS-SS-DWT in place.
pub fn forward_rdls_ssdwt(
    grid: &mut SampleGrid,
    assignment: &FilterAssignment,
    counters: &mut CostCounters,
) -> Result<(), TransformError> {
    let t = assignment.levels();
    let rects = level_rects(grid.width(), grid.height(), t);
    for (i, rect) in rects.into_iter().enumerate() {
        let level = i + 1;
        for (pair, kind) in STAGES {
            let ctx = PassContext::new(rect, pair);
            match kind {
                StepKind::Reorder => {
                    if assignment.performs_reorder(level, pair) {
                        reorder_group(grid, ctx, false);
                    }
                }
                _ => {
                    let filter = assignment.get(level, slot_for(pair, kind));
                    rdls_forward_step(grid, ctx, kind, filter, counters);
                }
            }
        }
    }
    check_range(grid, t)
}

/// Inverse of [`forward_rdls_ssdwt`].
pub fn inverse_rdls_ssdwt(
    grid: &mut SampleGrid,
    assignment: &FilterAssignment,
) -> Result<(), TransformError> {
    let t = assignment.levels();
    check_range(grid, t)?;
    let rects = level_rects(grid.width(), grid.height(), t);
    for (i, rect) in rects.into_iter().enumerate().rev() {
        let level = i + 1;
        for (pair, kind) in STAGES.iter().rev().copied() {
            let ctx = PassContext::new(rect, pair);
            match kind {
                StepKind::Reorder => {
                    if assignment.performs_reorder(level, pair) {
                        reorder_group(grid, ctx, true);
                    }
                }
                _ => {
                    let filter = assignment.get(level, slot_for(pair, kind));
                    rdls_inverse_step(grid, ctx, kind, filter);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{forward_ssdwt, lifting, PairDecision};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_grid(rng: &mut impl Rng, w: usize, h: usize) -> SampleGrid {
        SampleGrid::from_fn(w, h, 8, |_, _| rng.gen_range(0..256))
    }

    fn random_assignment(rng: &mut impl Rng, t: usize) -> FilterAssignment {
        FilterAssignment::new(
            (0..t)
                .map(|_| {
                    let mut slots = [FilterId::None; 6];
                    for s in &mut slots {
                        *s = FilterId::ALL[rng.gen_range(0..3)];
                    }
                    slots
                })
                .collect(),
        )
    }

    fn one_row(v: &[i32]) -> (SampleGrid, PassContext) {
        let g = SampleGrid::new(v.len(), 1, 8, v.to_vec());
        let ctx = PassContext::new(LevelRect { w: v.len(), h: 1 }, Pair::LowRow);
        (g, ctx)
    }

    #[test]
    fn reflection_keeps_parity() {
        for len in 2..9usize {
            for i in -6isize..(len as isize + 6) {
                let r = reflect(i, len);
                assert!(r < len);
                assert_eq!((r as isize - i).rem_euclid(2), 0, "i={i} len={len}");
            }
        }
        assert_eq!(reflect(-1, 4), 1);
        assert_eq!(reflect(4, 4), 2);
        assert_eq!(reflect(5, 1), 0);
    }

    #[test]
    fn none_and_null_denoisers() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = random_grid(&mut rng, 9, 7);
        let ctx = PassContext::new(LevelRect { w: 9, h: 7 }, Pair::Vertical);
        for line in ctx.lines() {
            for pos in 0..7 {
                assert_eq!(
                    denoise(FilterId::None, &g, ctx, line, pos),
                    g.get(line, pos)
                );
                assert_eq!(denoise(FilterId::Null, &g, ctx, line, pos), 0);
            }
        }
    }

    #[test]
    fn median_of_constant_region_is_the_constant() {
        let g = SampleGrid::filled(11, 6, 8, 93);
        for pair in Pair::ALL {
            let ctx = PassContext::new(LevelRect { w: 11, h: 6 }, pair);
            for line in ctx.lines() {
                for pos in 0..ctx.axis_len() {
                    assert_eq!(denoise(FilterId::Median5, &g, ctx, line, pos), 93);
                }
            }
        }
    }

    #[test]
    fn median_uses_same_parity_only() {
        // odd rows hold huge values; an even-row query must never see them
        let g = SampleGrid::from_fn(7, 9, 16, |x, y| if y % 2 == 1 { 60000 } else { x as i32 });
        let ctx = PassContext::new(LevelRect { w: 7, h: 9 }, Pair::Vertical);
        for line in ctx.lines() {
            for pos in (0..9).step_by(2) {
                assert!(denoise(FilterId::Median5, &g, ctx, line, pos) < 7);
            }
        }
    }

    #[test]
    fn plain_filters_on_a_row() {
        let (mut g, ctx) = one_row(&[10, 12, 14, 16]);
        let mut c = CostCounters::default();
        rdls_predict_pass(&mut g, ctx, 0, FilterId::None, &mut c);
        assert_eq!(g.samples(), &[10, 0, 14, 2]);
        rdls_update_pass(&mut g, ctx, 0, FilterId::None, &mut c);
        assert_eq!(g.samples(), &[10, 0, 15, 2]);
        assert_eq!(c.lifting_steps, 4);

        let (mut g, ctx) = one_row(&[3, 1, 4, 1, 5]);
        let mut c = CostCounters::default();
        rdls_predict_pass(&mut g, ctx, 0, FilterId::Null, &mut c);
        rdls_update_pass(&mut g, ctx, 0, FilterId::Null, &mut c);
        assert_eq!(g.samples(), &[3, 1, 4, 1, 5]);
        assert_eq!(c.lifting_steps, 0);
    }

    #[test]
    fn median_on_constant_region_matches_plain_lifting() {
        let g = SampleGrid::filled(8, 8, 8, 40);
        let ctx = PassContext::new(LevelRect { w: 8, h: 8 }, Pair::Vertical);
        let mut a = g.clone();
        let mut c = CostCounters::default();
        rdls_forward_step(&mut a, ctx, StepKind::Prediction, FilterId::Median5, &mut c);
        assert!((0..8).all(|x| (0..8).all(|y| a.get(x, y) == if y % 2 == 1 { 0 } else { 40 })));
        let before = a.clone();
        rdls_forward_step(&mut a, ctx, StepKind::Update, FilterId::Median5, &mut c);
        // highs are zero, so the update increment floor((0+0+2)/4) is 0
        assert_eq!(a, before);
    }

    #[test]
    fn all_none_is_the_dwt_and_all_null_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (w, h, t) in [(16, 16, 3), (13, 7, 3), (1, 5, 2), (30, 2, 4)] {
            let g = random_grid(&mut rng, w, h);
            let mut a = g.clone();
            let mut b = g.clone();
            let (mut ca, mut cb) = (CostCounters::default(), CostCounters::default());
            forward_rdls_ssdwt(
                &mut a,
                &FilterAssignment::uniform(t, FilterId::None),
                &mut ca,
            )
            .unwrap();
            forward_ssdwt(&mut b, &DecisionSet::perform_all(t), &mut cb).unwrap();
            assert_eq!(a, b);
            assert_eq!(ca, cb);

            let mut n = g.clone();
            let mut cn = CostCounters::default();
            forward_rdls_ssdwt(
                &mut n,
                &FilterAssignment::uniform(t, FilterId::Null),
                &mut cn,
            )
            .unwrap();
            assert_eq!(n, g);
            assert_eq!(cn.lifting_steps, 0);
            assert_eq!(
                FilterAssignment::uniform(t, FilterId::Null).derived_decisions(),
                DecisionSet::skip_all(t)
            );
        }
    }

    #[test]
    fn none_null_assignments_match_ssdwt() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let (w, h, t) = (
                rng.gen_range(1..20),
                rng.gen_range(1..20),
                rng.gen_range(0..4),
            );
            let g = random_grid(&mut rng, w, h);
            let a = FilterAssignment::new(
                (0..t)
                    .map(|_| {
                        let mut s = [FilterId::None; 6];
                        for f in &mut s {
                            if rng.gen_bool(0.5) {
                                *f = FilterId::Null;
                            }
                        }
                        s
                    })
                    .collect(),
            );
            let d = a.derived_decisions();
            assert_eq!(FilterAssignment::from_decisions(&d).as_ref(), Some(&a));
            let mut x = g.clone();
            let mut y = g.clone();
            let (mut cx, mut cy) = (CostCounters::default(), CostCounters::default());
            forward_rdls_ssdwt(&mut x, &a, &mut cx).unwrap();
            forward_ssdwt(&mut y, &d, &mut cy).unwrap();
            assert_eq!(x, y);
            assert_eq!(cx, cy);
        }
    }

    #[test]
    fn from_decisions_rejects_underived_reorder() {
        let mut d = DecisionSet::perform_all(1);
        *d.level_mut(1).pair_mut(Pair::LowRow) = PairDecision {
            skip_pred: true,
            skip_upd: true,
            skip_reorder: false,
        };
        assert!(FilterAssignment::from_decisions(&d).is_none());
    }

    #[test]
    fn line_order_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = random_grid(&mut rng, 12, 10);
        for pair in Pair::ALL {
            let ctx = PassContext::new(LevelRect { w: 12, h: 10 }, pair);
            for kind in [StepKind::Prediction, StepKind::Update] {
                let mut fwd = g.clone();
                let mut rev = g.clone();
                let mut c = CostCounters::default();
                for line in ctx.lines() {
                    lift_line(
                        &mut fwd,
                        ctx,
                        line,
                        FilterId::Median5,
                        kind,
                        1,
                        Some(&mut c),
                    );
                }
                for line in ctx.lines().rev() {
                    lift_line(
                        &mut rev,
                        ctx,
                        line,
                        FilterId::Median5,
                        kind,
                        1,
                        Some(&mut c),
                    );
                }
                assert_eq!(fwd, rev);
            }
        }
    }

    #[test]
    fn row_lifting_through_rdls_matches_one_dimensional_pass() {
        let v = [5, -3, 8, 8, 0, 12, -7];
        let (mut g, ctx) = one_row(&v);
        let mut c = CostCounters::default();
        rdls_predict_pass(&mut g, ctx, 0, FilterId::None, &mut c);
        let mut s = v.to_vec();
        lifting::predict_pass(&mut s, &mut CostCounters::default());
        assert_eq!(g.samples(), s.as_slice());
    }

    #[test]
    fn filter_codes_and_names() {
        for f in FilterId::ALL {
            assert_eq!(FilterId::from_code(f.code()), Some(f));
            assert_eq!(f.name().parse::<FilterId>(), Ok(f));
        }
        assert_eq!(FilterId::from_code(9), None);
        assert!("gauss".parse::<FilterId>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_assignments_are_reversible(
            w in 1usize..24, h in 1usize..24, t in 0usize..=4, seed in any::<u64>()
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_grid(&mut rng, w, h);
            let a = random_assignment(&mut rng, t);
            let mut out = g.clone();
            forward_rdls_ssdwt(&mut out, &a, &mut CostCounters::default()).unwrap();
            inverse_rdls_ssdwt(&mut out, &a).unwrap();
            prop_assert_eq!(out, g);
        }
    }

    #[test]
    fn sixteen_square_mixed_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..40 {
            let g = random_grid(&mut rng, 16, 16);
            let a = random_assignment(&mut rng, 3);
            let mut out = g.clone();
            forward_rdls_ssdwt(&mut out, &a, &mut CostCounters::default()).unwrap();
            inverse_rdls_ssdwt(&mut out, &a).unwrap();
            assert_eq!(out, g);
        }
    }
}
