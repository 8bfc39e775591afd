//! Incremental evaluation for greedy searches.
//!
//! Every forward stage and every nominal region keeps a small memo keyed by
//! its exact input content. A trial that changes one decision therefore
//! recomputes only the stages whose inputs actually differ, and re-encodes
//! only the regions whose samples differ; lifting steps and encoded symbols
//! are charged for that work alone. Each memo slot keeps the entry of the
//! last accepted configuration (`committed`) plus the most recent trial
//! entry (`pending`); [`Session::commit`] promotes whatever the previous
//! evaluation used.

use crate::coding::{charge, combine_bpp, region_cost_bits, Evaluator};
use crate::config::{Configuration, StageOp};
use crate::par;
use crate::rdls::{rdls_forward_step, FilterId, PassContext};
use crate::transform::{
    check_range, forward_stage, level_rects, nominal_regions, LevelRect, Pair, Region,
    TransformError, STAGES,
};
use crate::{CostCounters, SampleGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Used {
    Neither,
    Committed,
    Pending,
}

#[derive(Debug)]
struct Memo<E> {
    committed: Option<E>,
    pending: Option<E>,
    used: Used,
}

impl<E> Default for Memo<E> {
    fn default() -> Self {
        Self {
            committed: None,
            pending: None,
            used: Used::Neither,
        }
    }
}

impl<E> Memo<E> {
    fn lookup(&mut self, matches: impl Fn(&E) -> bool) -> Option<&E> {
        if self.committed.as_ref().is_some_and(&matches) {
            self.used = Used::Committed;
            self.committed.as_ref()
        } else if self.pending.as_ref().is_some_and(&matches) {
            self.used = Used::Pending;
            self.pending.as_ref()
        } else {
            None
        }
    }

    fn store(&mut self, entry: E) {
        if self.committed.is_none() {
            self.committed = Some(entry);
            self.used = Used::Committed;
        } else {
            self.pending = Some(entry);
            self.used = Used::Pending;
        }
    }

    fn commit(&mut self) {
        if self.used == Used::Pending {
            self.committed = self.pending.take();
            self.used = Used::Committed;
        }
    }
}

#[derive(Debug)]
struct StageEntry {
    op: StageOp,
    input: Vec<i32>,
    output: Vec<i32>,
}

#[derive(Debug)]
struct RegionEntry {
    samples: Vec<i32>,
    bits: f64,
}

/// Evaluation state for searching one image at a fixed level count.
pub struct Session<'a> {
    image: &'a SampleGrid,
    evaluator: Evaluator,
    levels: usize,
    rects: Vec<LevelRect>,
    regions: Vec<Region>,
    stages: Vec<Memo<StageEntry>>,
    region_memo: Vec<Memo<RegionEntry>>,
    grid: SampleGrid,
    /// Regions re-costed by the latest evaluation.
    recomputed: Vec<usize>,
    pub counters: CostCounters,
}

fn stage_rows(rect: LevelRect, pair: Pair) -> std::ops::Range<usize> {
    match pair {
        Pair::Vertical => 0..rect.h,
        p => rect.rows(p),
    }
}

impl<'a> Session<'a> {
    pub fn new(image: &'a SampleGrid, levels: usize, evaluator: Evaluator) -> Self {
        let regions = nominal_regions(image.width(), image.height(), levels);
        Self {
            image,
            evaluator,
            levels,
            rects: level_rects(image.width(), image.height(), levels),
            stages: (0..levels * STAGES.len())
                .map(|_| Memo::default())
                .collect(),
            region_memo: regions.iter().map(|_| Memo::default()).collect(),
            regions,
            grid: image.clone(),
            recomputed: Vec::new(),
            counters: CostCounters::default(),
        }
    }

    pub fn image(&self) -> &SampleGrid {
        self.image
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn evaluator(&self) -> Evaluator {
        self.evaluator
    }

    /// Region indices whose cost the last [`Session::evaluate`] computed.
    pub fn recomputed_regions(&self) -> &[usize] {
        &self.recomputed
    }

    /// Value of `config` in bits per pixel, reusing memoised work.
    pub fn evaluate(&mut self, config: &Configuration) -> Result<f64, TransformError> {
        assert_eq!(config.levels(), self.levels, "session level count");
        for m in &mut self.stages {
            m.used = Used::Neither;
        }
        for m in &mut self.region_memo {
            m.used = Used::Neither;
        }
        self.grid
            .samples_mut()
            .copy_from_slice(self.image.samples());
        if let Configuration::Ssdwt(d) = config {
            d.validate()?;
        }

        for (li, ops) in config.stage_ops().iter().enumerate() {
            let rect = self.rects[li];
            for (si, &(pair, kind)) in STAGES.iter().enumerate() {
                let op = ops[si];
                if op == StageOp::Skip {
                    continue;
                }
                let rows = stage_rows(rect, pair);
                let input = self.grid.extract(0, rows.start, rect.w, rows.len());
                let memo = &mut self.stages[li * STAGES.len() + si];
                if let Some(hit) = memo.lookup(|e| e.op == op && e.input == input) {
                    self.grid
                        .insert(0, rows.start, rect.w, rows.len(), &hit.output);
                    continue;
                }
                match op {
                    StageOp::Lift(FilterId::None) | StageOp::Reorder => {
                        forward_stage(&mut self.grid, rect, pair, kind, &mut self.counters)
                    }
                    StageOp::Lift(filter) => rdls_forward_step(
                        &mut self.grid,
                        PassContext::new(rect, pair),
                        kind,
                        filter,
                        &mut self.counters,
                    ),
                    StageOp::Skip => unreachable!(),
                }
                let output = self.grid.extract(0, rows.start, rect.w, rows.len());
                memo.store(StageEntry { op, input, output });
            }
        }
        check_range(&self.grid, self.levels)?;

        let samples: Vec<Vec<i32>> = self
            .regions
            .iter()
            .map(|r| self.grid.extract(r.x, r.y, r.w, r.h))
            .collect();
        let mut bits = vec![0.0; self.regions.len()];
        let mut misses = Vec::new();
        for (i, s) in samples.iter().enumerate() {
            match self.region_memo[i].lookup(|e| &e.samples == s) {
                Some(hit) => bits[i] = hit.bits,
                None => misses.push(i),
            }
        }
        let evaluator = self.evaluator;
        let fresh = par::map(&misses, |&i| {
            region_cost_bits(evaluator, &samples[i], self.regions[i].w)
        });
        for (&i, b) in misses.iter().zip(fresh) {
            charge(evaluator, samples[i].len(), &mut self.counters);
            bits[i] = b;
            self.region_memo[i].store(RegionEntry {
                samples: samples[i].clone(),
                bits: b,
            });
        }
        self.recomputed = misses;

        Ok(combine_bpp(
            self.evaluator,
            config.overhead_bytes(self.image.width(), self.image.height()),
            bits,
            self.image.len(),
        ))
    }

    /// Marks the configuration of the latest evaluation as accepted.
    pub fn commit(&mut self) {
        for m in &mut self.stages {
            m.commit();
        }
        for m in &mut self.region_memo {
            m.commit();
        }
    }
}
