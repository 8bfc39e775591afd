//! Greedy heuristics: BH and its flavours, RH, and the RDLS filter search.

use super::session::Session;
use super::{SearchError, SearchOutcome, StartClass, Trial, TrialTarget};
use crate::coding::Evaluator;
use crate::config::Configuration;
use crate::rdls::{FilterAssignment, FilterId};
use crate::transform::{
    apply_slot_change, DecisionSet, LevelDecisions, Pair, PairDecision, Subband,
};
use crate::{CostCounters, SampleGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BhFlavor {
    /// Reorder skipped iff both lifting steps of the pair are skipped.
    Plain,
    /// Plain, plus a reorder trial for pairs whose steps are both skipped.
    TestReorder,
    /// Reorders are never skipped.
    AlwaysReorder,
    /// One trial per pair, toggling all three steps together.
    PairWise,
}

const B1_ORDER: [Subband; 3] = [Subband::H, Subband::HL, Subband::HH];
const B2_ORDER: [Subband; 4] = [Subband::L, Subband::HH, Subband::LL, Subband::LH];

struct Greedy<'a> {
    session: Session<'a>,
    value: f64,
    iteration: usize,
    trials: Vec<Trial>,
}

impl<'a> Greedy<'a> {
    fn new(session: Session<'a>, value: f64) -> Self {
        Self {
            session,
            value,
            iteration: 0,
            trials: Vec::new(),
        }
    }

    /// Evaluates `candidate` and keeps it iff the value strictly drops.
    fn trial(
        &mut self,
        level: usize,
        target: TrialTarget,
        candidate: &Configuration,
    ) -> Result<bool, SearchError> {
        let after = self.session.evaluate(candidate)?;
        let accepted = after < self.value;
        self.trials.push(Trial {
            iteration: self.iteration,
            level,
            target,
            before: self.value,
            after,
            accepted,
        });
        if accepted {
            self.session.commit();
            self.value = after;
        }
        Ok(accepted)
    }

    fn finish(
        self,
        configuration: Configuration,
        start: StartClass,
        counters: &mut CostCounters,
    ) -> SearchOutcome {
        *counters += self.session.counters;
        SearchOutcome {
            configuration,
            bpp: self.value,
            start,
            counters: self.session.counters,
            trials: self.trials,
        }
    }
}

fn all_skip(t: usize, keep_reorders: bool) -> DecisionSet {
    if keep_reorders {
        let p = PairDecision {
            skip_pred: true,
            skip_upd: true,
            skip_reorder: false,
        };
        DecisionSet::uniform(t, LevelDecisions::new(p, p, p))
    } else {
        DecisionSet::skip_all(t)
    }
}

fn run_step_a(
    session: &mut Session<'_>,
    keep_reorders: bool,
) -> Result<(DecisionSet, f64, StartClass), SearchError> {
    let t = session.levels();
    let dwt = DecisionSet::perform_all(t);
    let v_dwt = session.evaluate(&Configuration::Ssdwt(dwt.clone()))?;
    session.commit();
    let skip = all_skip(t, keep_reorders);
    let v_skip = session.evaluate(&Configuration::Ssdwt(skip.clone()))?;
    if v_skip < v_dwt {
        session.commit();
        Ok((skip, v_skip, StartClass::AllSkipStart))
    } else {
        Ok((dwt, v_dwt, StartClass::PerformStart))
    }
}

/// Step A: the better of the full DWT and skipping everything, applied
/// uniformly. Ties go to the DWT.
pub fn step_a(
    image: &SampleGrid,
    t: usize,
    evaluator: Evaluator,
    counters: &mut CostCounters,
) -> Result<(DecisionSet, StartClass), SearchError> {
    if t == 0 {
        return Err(SearchError::NoLevels);
    }
    let mut session = Session::new(image, t, evaluator);
    let (d, _, start) = run_step_a(&mut session, false)?;
    *counters += session.counters;
    Ok((d, start))
}

fn is_last_of_pair(slot: Subband) -> bool {
    matches!(slot, Subband::L | Subband::LL | Subband::LH)
}

/// Basic heuristic with `n` passes of step B.
pub fn bh(
    image: &SampleGrid,
    t: usize,
    n: usize,
    flavor: BhFlavor,
    evaluator: Evaluator,
    counters: &mut CostCounters,
) -> Result<SearchOutcome, SearchError> {
    if t == 0 {
        return Err(SearchError::NoLevels);
    }
    let mut session = Session::new(image, t, evaluator);
    let (mut d, value, start) = run_step_a(&mut session, flavor == BhFlavor::AlwaysReorder)?;
    let mut g = Greedy::new(session, value);

    for iteration in 1..=n {
        g.iteration = iteration;
        for level in 1..=t {
            if flavor == BhFlavor::PairWise {
                for pair in Pair::ALL {
                    let mut cand = d.clone();
                    let p = cand.level_mut(level).pair_mut(pair);
                    *p = if *p == PairDecision::PERFORM {
                        PairDecision::SKIP_ALL
                    } else {
                        PairDecision::PERFORM
                    };
                    if g.trial(
                        level,
                        TrialTarget::WholePair(pair),
                        &Configuration::Ssdwt(cand.clone()),
                    )? {
                        d = cand;
                    }
                }
                continue;
            }
            for slot in Subband::SEARCH_ORDER {
                let cand = if flavor == BhFlavor::AlwaysReorder {
                    let mut c = d.clone();
                    let lvl = c.level_mut(level);
                    lvl.set_skip(slot, !lvl.skips(slot));
                    c
                } else {
                    apply_slot_change(&d, level, slot)
                };
                if g.trial(
                    level,
                    TrialTarget::Slot(slot),
                    &Configuration::Ssdwt(cand.clone()),
                )? {
                    d = cand;
                }
                if flavor == BhFlavor::TestReorder && is_last_of_pair(slot) {
                    let pair = slot.pair();
                    let p = d.level(level).pair(pair);
                    if p.skip_pred && p.skip_upd {
                        let mut cand = d.clone();
                        cand.level_mut(level).pair_mut(pair).skip_reorder = !p.skip_reorder;
                        if g.trial(
                            level,
                            TrialTarget::Reorder(pair),
                            &Configuration::Ssdwt(cand.clone()),
                        )? {
                            d = cand;
                        }
                    }
                }
            }
        }
    }
    Ok(g.finish(Configuration::Ssdwt(d), start, counters))
}

/// Revised heuristic: step B1 after an all-skip start, B2 otherwise.
///
/// In B2 an `HH` trial that lands on skip carries the `LH` skip with it, so
/// the coupled change is the one evaluated.
pub fn rh(
    image: &SampleGrid,
    t: usize,
    n: usize,
    evaluator: Evaluator,
    counters: &mut CostCounters,
) -> Result<SearchOutcome, SearchError> {
    if t == 0 {
        return Err(SearchError::NoLevels);
    }
    let mut session = Session::new(image, t, evaluator);
    let (mut d, value, start) = run_step_a(&mut session, false)?;
    let mut g = Greedy::new(session, value);

    for iteration in 1..=n {
        g.iteration = iteration;
        for level in 1..=t {
            let order: &[Subband] = match start {
                StartClass::AllSkipStart => &B1_ORDER,
                StartClass::PerformStart => &B2_ORDER,
            };
            for &slot in order {
                let (cand, target) = match (start, slot) {
                    (StartClass::PerformStart, Subband::LH)
                        if d.level(level).skips(Subband::HH) =>
                    {
                        debug_assert!(d.level(level).skips(Subband::LH));
                        continue;
                    }
                    (StartClass::PerformStart, Subband::HH) => {
                        let c = apply_slot_change(&d, level, Subband::HH);
                        let lvl = c.level(level);
                        if lvl.skips(Subband::HH) && !lvl.skips(Subband::LH) {
                            (
                                apply_slot_change(&c, level, Subband::LH),
                                TrialTarget::Coupled(Subband::HH, Subband::LH),
                            )
                        } else {
                            (c, TrialTarget::Slot(Subband::HH))
                        }
                    }
                    _ => (apply_slot_change(&d, level, slot), TrialTarget::Slot(slot)),
                };
                if g.trial(level, target, &Configuration::Ssdwt(cand.clone()))? {
                    d = cand;
                }
            }
        }
    }
    Ok(g.finish(Configuration::Ssdwt(d), start, counters))
}

/// Filter search over `filters`; `None` must be among them. Filters are
/// tried in `None, Null, Median5` order and ties keep the earlier one.
pub fn h_ss_rdls(
    image: &SampleGrid,
    t: usize,
    n: usize,
    filters: &[FilterId],
    evaluator: Evaluator,
    counters: &mut CostCounters,
) -> Result<SearchOutcome, SearchError> {
    if filters.is_empty() {
        return Err(SearchError::FilterSetTooSmall);
    }
    if !filters.contains(&FilterId::None) {
        return Err(SearchError::MissingNoneFilter);
    }
    if t == 0 {
        return Err(SearchError::NoLevels);
    }
    let order: Vec<FilterId> = FilterId::ALL
        .into_iter()
        .filter(|f| filters.contains(f))
        .collect();

    let mut session = Session::new(image, t, evaluator);
    let mut best: Option<(FilterAssignment, f64)> = None;
    for &f in &order {
        let a = FilterAssignment::uniform(t, f);
        let v = session.evaluate(&Configuration::Rdls(a.clone()))?;
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            session.commit();
            best = Some((a, v));
        }
    }
    let (mut a, value) = best.expect("filter set is non-empty");
    let start = if a.get(1, Subband::H) == FilterId::Null {
        StartClass::AllSkipStart
    } else {
        StartClass::PerformStart
    };
    let mut g = Greedy::new(session, value);

    for iteration in 1..=n {
        g.iteration = iteration;
        for level in 1..=t {
            for slot in Subband::SEARCH_ORDER {
                let original = a.get(level, slot);
                for &f in order.iter().filter(|&&f| f != original) {
                    let mut cand = a.clone();
                    cand.set(level, slot, f);
                    if g.trial(
                        level,
                        TrialTarget::Filter(slot, f),
                        &Configuration::Rdls(cand.clone()),
                    )? {
                        a = cand;
                    }
                }
            }
        }
    }
    Ok(g.finish(Configuration::Rdls(a), start, counters))
}
