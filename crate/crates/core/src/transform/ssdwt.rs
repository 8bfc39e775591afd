//! Forward and inverse skipped-steps DWT over the Mallat recursion.

use super::decisions::{DecisionSet, LevelDecisions, Pair, StepKind};
use super::geometry::{level_rects, LevelRect};
use super::lifting::*;
use super::TransformError;
use crate::{CostCounters, SampleGrid};

/// The nine stages of one level in forward order.
pub const STAGES: [(Pair, StepKind); 9] = [
    (Pair::Vertical, StepKind::Prediction),
    (Pair::Vertical, StepKind::Update),
    (Pair::Vertical, StepKind::Reorder),
    (Pair::LowRow, StepKind::Prediction),
    (Pair::LowRow, StepKind::Update),
    (Pair::LowRow, StepKind::Reorder),
    (Pair::HighRow, StepKind::Prediction),
    (Pair::HighRow, StepKind::Update),
    (Pair::HighRow, StepKind::Reorder),
];

/// Applies one plain 5/3 stage to the level rectangle.
pub fn forward_stage(
    grid: &mut SampleGrid,
    rect: LevelRect,
    pair: Pair,
    kind: StepKind,
    counters: &mut CostCounters,
) {
    let stride = grid.width();
    let (w, h) = (rect.w, rect.h);
    match pair {
        Pair::Vertical => {
            let buf = grid.samples_mut();
            match kind {
                StepKind::Prediction => predict_columns(buf, stride, w, h, counters),
                StepKind::Update => update_columns(buf, stride, w, h, counters),
                StepKind::Reorder => reorder_columns(buf, stride, w, h),
            }
        }
        Pair::LowRow | Pair::HighRow => {
            for y in rect.rows(pair) {
                let row = &mut grid.row_mut(y)[..w];
                match kind {
                    StepKind::Prediction => predict_pass(row, counters),
                    StepKind::Update => update_pass(row, counters),
                    StepKind::Reorder => reorder_pass(row),
                }
            }
        }
    }
}

/// Undoes [`forward_stage`].
pub fn inverse_stage(grid: &mut SampleGrid, rect: LevelRect, pair: Pair, kind: StepKind) {
    let stride = grid.width();
    let (w, h) = (rect.w, rect.h);
    match pair {
        Pair::Vertical => {
            let buf = grid.samples_mut();
            match kind {
                StepKind::Prediction => unpredict_columns(buf, stride, w, h),
                StepKind::Update => unupdate_columns(buf, stride, w, h),
                StepKind::Reorder => unreorder_columns(buf, stride, w, h),
            }
        }
        Pair::LowRow | Pair::HighRow => {
            for y in rect.rows(pair) {
                let row = &mut grid.row_mut(y)[..w];
                match kind {
                    StepKind::Prediction => unpredict_pass(row),
                    StepKind::Update => unupdate_pass(row),
                    StepKind::Reorder => unreorder_pass(row),
                }
            }
        }
    }
}

fn forward_level(
    grid: &mut SampleGrid,
    rect: LevelRect,
    level: &LevelDecisions,
    counters: &mut CostCounters,
) {
    for (pair, kind) in STAGES {
        if !level.pair(pair).skip(kind) {
            forward_stage(grid, rect, pair, kind, counters);
        }
    }
}

fn inverse_level(grid: &mut SampleGrid, rect: LevelRect, level: &LevelDecisions) {
    for (pair, kind) in STAGES.iter().rev().copied() {
        if !level.pair(pair).skip(kind) {
            inverse_stage(grid, rect, pair, kind);
        }
    }
}

/// Exclusive magnitude bound on transformed samples.
pub fn range_bound(bit_depth: u8, levels: usize) -> i64 {
    1i64 << (bit_depth as u32 + levels as u32 + 2)
}

/// Checks every sample against [`range_bound`].
pub fn check_range(grid: &SampleGrid, levels: usize) -> Result<(), TransformError> {
    let bound = range_bound(grid.bit_depth(), levels);
    match grid
        .samples()
        .iter()
        .position(|&v| (v as i64).abs() >= bound)
    {
        Some(index) => Err(TransformError::RangeOverflow {
            index,
            value: grid.samples()[index],
            bound,
        }),
        None => Ok(()),
    }
}

/// Forward SS-DWT in place.
pub fn forward_ssdwt(
    grid: &mut SampleGrid,
    decisions: &DecisionSet,
    counters: &mut CostCounters,
) -> Result<(), TransformError> {
    decisions.validate()?;
    let rects = level_rects(grid.width(), grid.height(), decisions.levels());
    for (rect, level) in rects.into_iter().zip(decisions.as_slice()) {
        forward_level(grid, rect, level, counters);
    }
    check_range(grid, decisions.levels())
}

/// Inverse SS-DWT in place; `decisions` must be the forward ones.
pub fn inverse_ssdwt(grid: &mut SampleGrid, decisions: &DecisionSet) -> Result<(), TransformError> {
    decisions.validate()?;
    check_range(grid, decisions.levels())?;
    let rects = level_rects(grid.width(), grid.height(), decisions.levels());
    for (rect, level) in rects.into_iter().zip(decisions.as_slice()).rev() {
        inverse_level(grid, rect, level);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::decisions::{
        enumerate_legal, fixed_variant_decisions, FixedVariant, PairDecision,
    };
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_grid(rng: &mut impl Rng, w: usize, h: usize, depth: u8) -> SampleGrid {
        let max = (1i32 << depth) - 1;
        SampleGrid::from_fn(w, h, depth, |_, _| rng.gen_range(0..=max))
    }

    fn random_decisions(rng: &mut impl Rng, t: usize) -> DecisionSet {
        DecisionSet::new(
            (0..t)
                .map(|_| {
                    let mut pick = || PairDecision::LEGAL[rng.gen_range(0..5)];
                    LevelDecisions::new(pick(), pick(), pick())
                })
                .collect(),
        )
    }

    /// Textbook 2-D 5/3 lifting DWT written independently: gather every
    /// column/row into its own vector, run the 1-D passes, scatter back.
    fn classic_dwt(grid: &SampleGrid, t: usize) -> Vec<i32> {
        let w0 = grid.width();
        let mut s = grid.samples().to_vec();
        let (mut w, mut h) = (grid.width(), grid.height());
        let mut c = CostCounters::default();
        for _ in 0..t {
            for x in 0..w {
                let mut col: Vec<i32> = (0..h).map(|y| s[y * w0 + x]).collect();
                predict_pass(&mut col, &mut c);
                update_pass(&mut col, &mut c);
                reorder_pass(&mut col);
                for y in 0..h {
                    s[y * w0 + x] = col[y];
                }
            }
            for y in 0..h {
                let row = &mut s[y * w0..y * w0 + w];
                predict_pass(row, &mut c);
                update_pass(row, &mut c);
                reorder_pass(row);
            }
            w = w.div_ceil(2);
            h = h.div_ceil(2);
        }
        s
    }

    #[test]
    fn nothing_skipped_is_classic_dwt() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (w, h, t) in [(8, 8, 3), (13, 7, 3), (1, 9, 2), (64, 33, 5), (5, 3, 1)] {
            let g = random_grid(&mut rng, w, h, 8);
            let mut out = g.clone();
            forward_ssdwt(
                &mut out,
                &DecisionSet::perform_all(t),
                &mut CostCounters::default(),
            )
            .unwrap();
            assert_eq!(
                out.samples(),
                classic_dwt(&g, t).as_slice(),
                "{w}x{h} t={t}"
            );
        }
    }

    #[test]
    fn all_skipped_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = random_grid(&mut rng, 17, 10, 12);
        let mut out = g.clone();
        let mut c = CostCounters::default();
        forward_ssdwt(&mut out, &DecisionSet::skip_all(4), &mut c).unwrap();
        assert_eq!(out, g);
        assert_eq!(c.lifting_steps, 0);
        inverse_ssdwt(&mut out, &DecisionSet::skip_all(4)).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn constant_grid_single_level() {
        let g = SampleGrid::filled(4, 4, 8, 77);
        let mut out = g.clone();
        forward_ssdwt(
            &mut out,
            &DecisionSet::perform_all(1),
            &mut CostCounters::default(),
        )
        .unwrap();
        for y in 0..4 {
            for x in 0..4 {
                let want = if x < 2 && y < 2 { 77 } else { 0 };
                assert_eq!(out.get(x, y), want);
            }
        }
    }

    #[test]
    fn single_row_round_trip() {
        let g = SampleGrid::new(4, 1, 8, vec![10, 12, 14, 16]);
        let d = DecisionSet::perform_all(1);
        let mut out = g.clone();
        forward_ssdwt(&mut out, &d, &mut CostCounters::default()).unwrap();
        // height 1: the column pass is a no-op, the row pass does the work
        assert_eq!(out.samples(), &[10, 15, 0, 2]);
        inverse_ssdwt(&mut out, &d).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn lifting_count_matches_closed_form() {
        // (8/3)(1 - 4^-t) p on 2^k x 2^k grids
        let g = SampleGrid::filled(64, 64, 8, 3);
        let count = |v: FixedVariant, t: usize| {
            let mut c = CostCounters::default();
            let mut out = g.clone();
            forward_ssdwt(&mut out, &fixed_variant_decisions(v, t), &mut c).unwrap();
            c.lifting_steps
        };
        assert_eq!(count(FixedVariant::Dwt, 3), 10752);
        for t in 1..=6 {
            let dwt = count(FixedVariant::Dwt, t);
            let p = 4096u64;
            assert_eq!(3 * dwt * (1 << (2 * t)), 8 * p * ((1 << (2 * t)) - 1));
            assert_eq!(2 * count(FixedVariant::Fix1, t), dwt);
            assert_eq!(8 * count(FixedVariant::Fix2, t), 3 * dwt);
            assert_eq!(count(FixedVariant::AllSkip, t), 0);
        }
    }

    #[test]
    fn rejects_illegal_decisions() {
        let mut d = DecisionSet::perform_all(1);
        d.level_mut(1).pair_mut(Pair::Vertical).skip_reorder = true;
        let mut g = SampleGrid::filled(4, 4, 8, 1);
        assert!(matches!(
            forward_ssdwt(&mut g, &d, &mut CostCounters::default()),
            Err(TransformError::IllegalDecisions { level: 1, .. })
        ));
        assert!(inverse_ssdwt(&mut g, &d).is_err());
    }

    #[test]
    fn every_legal_single_level_set_is_reversible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_grid(&mut rng, 9, 6, 8);
        for d in enumerate_legal(1) {
            let mut out = g.clone();
            forward_ssdwt(&mut out, &d, &mut CostCounters::default()).unwrap();
            inverse_ssdwt(&mut out, &d).unwrap();
            assert_eq!(out, g);
        }
    }

    #[test]
    fn extreme_inputs_stay_within_range_bound() {
        // alternating extremes maximise high-pass growth
        for depth in [1u8, 8, 16] {
            let max = (1i32 << depth) - 1;
            let patterns: [&dyn Fn(usize, usize) -> i32; 3] = [
                &|x, y| if (x + y) % 2 == 0 { max } else { 0 },
                &|x, _| if x % 2 == 0 { max } else { 0 },
                &|x, y| if (x / 2 + y / 3) % 2 == 0 { 0 } else { max },
            ];
            for pat in patterns {
                let g = SampleGrid::from_fn(37, 29, depth, pat);
                for t in 0..=8 {
                    for d in [
                        DecisionSet::perform_all(t),
                        fixed_variant_decisions(FixedVariant::Fix1, t),
                        fixed_variant_decisions(FixedVariant::Fix2, t),
                    ] {
                        let mut out = g.clone();
                        forward_ssdwt(&mut out, &d, &mut CostCounters::default()).unwrap();
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn reversible_for_random_legal_decisions(
            w in 1usize..40, h in 1usize..40, t in 0usize..=5, depth in prop::sample::select(vec![1u8, 8, 12, 16]), seed in any::<u64>()
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_grid(&mut rng, w, h, depth);
            let d = random_decisions(&mut rng, t);
            let mut out = g.clone();
            forward_ssdwt(&mut out, &d, &mut CostCounters::default()).unwrap();
            inverse_ssdwt(&mut out, &d).unwrap();
            prop_assert_eq!(out, g);
        }
    }

    #[test]
    fn thirteen_by_seven_three_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let g = random_grid(&mut rng, 13, 7, 8);
            let d = random_decisions(&mut rng, 3);
            let mut out = g.clone();
            forward_ssdwt(&mut out, &d, &mut CostCounters::default()).unwrap();
            inverse_ssdwt(&mut out, &d).unwrap();
            assert_eq!(out, g);
        }
    }
}
