//! Which coded regions can change when one lifting decision is inverted.

use std::collections::BTreeSet;

use super::decisions::{DecisionSet, Pair, Subband};
use super::geometry::{region_index, BandLabel};

/// Regions whose payloads may differ after a slot change, and the earliest
/// point of the forward transform that has to be recomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffectedRegions {
    pub regions: BTreeSet<usize>,
    pub restart_level: usize,
    pub restart_pair: Pair,
    /// Whether the derived reorder flag of the slot's pair toggles.
    pub reorder_toggled: bool,
}

/// Inverts `slot` at `level` and re-derives that pair's reorder flag
/// (skip iff both lifting steps are skipped).
pub fn apply_slot_change(decisions: &DecisionSet, level: usize, slot: Subband) -> DecisionSet {
    let mut next = decisions.clone();
    let lvl = next.level_mut(level);
    let skip = lvl.skips(slot);
    lvl.set_skip(slot, !skip);
    let pair = lvl.pair_mut(slot.pair());
    *pair = pair.with_derived_reorder();
    next
}

/// Conservative dependency trace for the change made by [`apply_slot_change`].
///
/// An update step reads the neighbouring high-pass samples, so a prediction
/// change propagates into the complementary low band unless that band's
/// update is skipped. A reorder toggle moves samples across all four
/// quadrants, so it widens the result to every region at levels `>= level`.
pub fn affected_regions(decisions: &DecisionSet, level: usize, slot: Subband) -> AffectedRegions {
    let t = decisions.levels();
    let before = decisions.level(level).pair(slot.pair());
    let after = apply_slot_change(decisions, level, slot)
        .level(level)
        .pair(slot.pair());
    let reorder_toggled = before.skip_reorder != after.skip_reorder;
    let current = decisions.level(level);

    let idx = |lv: usize, label: BandLabel| region_index(t, lv, label);
    let mut regions = BTreeSet::new();
    let higher = |set: &mut BTreeSet<usize>| {
        set.insert(0);
        for lv in level + 1..=t {
            for label in [BandLabel::HL, BandLabel::LH, BandLabel::HH] {
                set.insert(idx(lv, label));
            }
        }
    };

    let restart_pair = if reorder_toggled {
        Pair::Vertical
    } else {
        slot.pair()
    };

    if reorder_toggled {
        for label in [BandLabel::HL, BandLabel::LH, BandLabel::HH] {
            regions.insert(idx(level, label));
        }
        higher(&mut regions);
    } else {
        match slot {
            Subband::H => {
                regions.insert(idx(level, BandLabel::LH));
                regions.insert(idx(level, BandLabel::HH));
                if !current.skips(Subband::L) {
                    regions.insert(idx(level, BandLabel::HL));
                    higher(&mut regions);
                }
            }
            Subband::L => {
                regions.insert(idx(level, BandLabel::HL));
                higher(&mut regions);
            }
            Subband::HL => {
                regions.insert(idx(level, BandLabel::HL));
                if !current.skips(Subband::LL) {
                    higher(&mut regions);
                }
            }
            Subband::LL => higher(&mut regions),
            Subband::HH => {
                regions.insert(idx(level, BandLabel::HH));
                if !current.skips(Subband::LH) {
                    regions.insert(idx(level, BandLabel::LH));
                }
            }
            Subband::LH => {
                regions.insert(idx(level, BandLabel::LH));
            }
        }
    }

    AffectedRegions {
        regions,
        restart_level: level,
        restart_pair,
        reorder_toggled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::decisions::{LevelDecisions, PairDecision};
    use crate::transform::geometry::nominal_regions;
    use crate::transform::ssdwt::forward_ssdwt;
    use crate::{CostCounters, SampleGrid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn update_ll_at_level_two_leaves_level_one_alone() {
        let d = DecisionSet::perform_all(3);
        let a = affected_regions(&d, 2, Subband::LL);
        let regions = nominal_regions(64, 64, 3);
        assert!(a.regions.iter().all(|&i| regions[i].level != 1));
        assert!(a.regions.contains(&0));
        let top = affected_regions(&d, 3, Subband::LL);
        assert_eq!(top.regions, BTreeSet::from([0]));
    }

    #[test]
    fn hh_prediction_only_touches_hh_when_lh_update_skipped() {
        // both steps skipped but reorder kept, so performing HH does not
        // toggle the derived reorder
        let mut d = DecisionSet::perform_all(3);
        *d.level_mut(1).pair_mut(Pair::HighRow) = PairDecision {
            skip_pred: true,
            skip_upd: true,
            skip_reorder: false,
        };
        let a = affected_regions(&d, 1, Subband::HH);
        assert_eq!(
            a.regions,
            BTreeSet::from([region_index(3, 1, BandLabel::HH)])
        );
        assert!(!a.reorder_toggled);
    }

    #[test]
    fn reorder_toggle_widens_to_all_regions() {
        let mut d = DecisionSet::perform_all(3);
        *d.level_mut(1).pair_mut(Pair::Vertical) = PairDecision {
            skip_pred: false,
            skip_upd: true,
            skip_reorder: false,
        };
        let a = affected_regions(&d, 1, Subband::H);
        assert!(a.reorder_toggled);
        assert_eq!(a.regions.len(), 10);
        assert_eq!(a.restart_pair, Pair::Vertical);
    }

    /// Oracle: transform under both decision sets and diff the regions.
    #[test]
    fn affected_set_covers_every_changed_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let (w, h) = (rng.gen_range(1..24), rng.gen_range(1..24));
            let t = rng.gen_range(1..=3);
            let g = SampleGrid::from_fn(w, h, 8, |_, _| rng.gen_range(0..256));
            let d = DecisionSet::new(
                (0..t)
                    .map(|_| {
                        let mut pick = || PairDecision::LEGAL[rng.gen_range(0..5)];
                        LevelDecisions::new(pick(), pick(), pick())
                    })
                    .collect(),
            );
            let level = rng.gen_range(1..=t);
            let slot = Subband::SEARCH_ORDER[rng.gen_range(0..6)];
            let changed = apply_slot_change(&d, level, slot);
            assert!(changed.is_legal());

            let mut a = g.clone();
            let mut b = g.clone();
            forward_ssdwt(&mut a, &d, &mut CostCounters::default()).unwrap();
            forward_ssdwt(&mut b, &changed, &mut CostCounters::default()).unwrap();
            let affected = affected_regions(&d, level, slot);
            for (i, r) in nominal_regions(w, h, t).iter().enumerate() {
                let differs = a.extract(r.x, r.y, r.w, r.h) != b.extract(r.x, r.y, r.w, r.h);
                if differs {
                    assert!(
                        affected.regions.contains(&i),
                        "{slot}@{level} changed {r} but it was not reported"
                    );
                }
            }
        }
    }
}
