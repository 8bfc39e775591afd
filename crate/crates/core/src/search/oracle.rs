//! Fixed-variant selection, classification and the exhaustive oracle.

use std::fmt;
use std::str::FromStr;

use super::heuristics::step_a;
use super::{ImageClass, SearchError, StartClass};
use crate::coding::{evaluate, Evaluator};
use crate::config::Configuration;
use crate::par;
use crate::transform::{enumerate_legal, DecisionSet};
use crate::{CostCounters, SampleGrid};

/// Largest width or height accepted by [`brute_force_best`].
pub const BRUTE_FORCE_MAX_DIM: usize = 64;

/// Variants that need no side information, in tie-breaking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Fix1,
    Fix2,
    Dwt,
    NoDwt,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Fix1, Variant::Fix2, Variant::Dwt, Variant::NoDwt];

    pub fn configuration(self, t: usize) -> Configuration {
        match self {
            Variant::Fix1 => Configuration::Fix1(t),
            Variant::Fix2 => Configuration::Fix2(t),
            Variant::Dwt => Configuration::Dwt(t),
            Variant::NoDwt => Configuration::NoDwt,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Fix1 => "fix1",
            Variant::Fix2 => "fix2",
            Variant::Dwt => "dwt",
            Variant::NoDwt => "nodwt",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown variant '{s}'"))
    }
}

/// Cheapest of `candidates` under `evaluator`; ties follow [`Variant`] order.
pub fn select_variant(
    image: &SampleGrid,
    t: usize,
    candidates: &[Variant],
    evaluator: Evaluator,
    counters: &mut CostCounters,
) -> Result<(Variant, f64), SearchError> {
    let mut ordered = candidates.to_vec();
    ordered.sort();
    ordered.dedup();
    let mut best: Option<(Variant, f64)> = None;
    for v in ordered {
        let bpp = evaluate(image, &v.configuration(t), evaluator, counters)?;
        if best.is_none_or(|(_, b)| bpp < b) {
            best = Some((v, bpp));
        }
    }
    best.ok_or(SearchError::NoCandidates)
}

/// Exhaustive minimum over all `5^(3t)` legal decision sets. The first
/// minimum in enumeration order wins.
pub fn brute_force_best(
    image: &SampleGrid,
    t: usize,
    evaluator: Evaluator,
) -> Result<(DecisionSet, f64), SearchError> {
    if t == 0 {
        return Err(SearchError::NoLevels);
    }
    if t > 2 || image.width() > BRUTE_FORCE_MAX_DIM || image.height() > BRUTE_FORCE_MAX_DIM {
        return Err(SearchError::TooLarge {
            levels: t,
            width: image.width(),
            height: image.height(),
            max: BRUTE_FORCE_MAX_DIM,
        });
    }
    let mut all: Vec<DecisionSet> = enumerate_legal(t).collect();
    let values = par::map(&all, |d| {
        evaluate(
            image,
            &Configuration::Ssdwt(d.clone()),
            evaluator,
            &mut CostCounters::default(),
        )
    });
    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if v < best_value {
            best = i;
            best_value = v;
        }
    }
    Ok((all.swap_remove(best), best_value))
}

/// `NoPhotoA` iff step A prefers skipping everything.
pub fn classify(
    image: &SampleGrid,
    t: usize,
    evaluator: Evaluator,
) -> Result<ImageClass, SearchError> {
    let (_, start) = step_a(image, t, evaluator, &mut CostCounters::default())?;
    Ok(match start {
        StartClass::AllSkipStart => ImageClass::NoPhotoA,
        StartClass::PerformStart => ImageClass::Other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::heuristics::tests::glyphs;
    use crate::search::{bh, rh, BhFlavor};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_candidate() {
        let g = SampleGrid::from_fn(9, 9, 8, |x, y| (x * y) as i32);
        let (v, _) = select_variant(
            &g,
            2,
            &[Variant::Dwt],
            Evaluator::ActualBitrate,
            &mut CostCounters::default(),
        )
        .unwrap();
        assert_eq!(v, Variant::Dwt);
        assert_eq!(
            select_variant(
                &g,
                2,
                &[],
                Evaluator::ActualBitrate,
                &mut CostCounters::default()
            ),
            Err(SearchError::NoCandidates)
        );
    }

    #[test]
    fn constant_image_ties_resolve_to_fix1() {
        let g = SampleGrid::filled(16, 16, 8, 120);
        let (v, bpp) = select_variant(
            &g,
            3,
            &Variant::ALL,
            Evaluator::EntropyH0,
            &mut CostCounters::default(),
        )
        .unwrap();
        assert_eq!((v, bpp), (Variant::Fix1, 0.0));
    }

    #[test]
    fn h0_selection_does_not_encode() {
        let g = SampleGrid::from_fn(32, 32, 8, |x, y| ((x * 5 + y * 9) % 256) as i32);
        let mut c = CostCounters::default();
        select_variant(
            &g,
            3,
            &[Variant::Fix1, Variant::Fix2, Variant::Dwt],
            Evaluator::EntropyH0,
            &mut c,
        )
        .unwrap();
        assert_eq!(c.encoded_symbols, 0);
        assert_eq!(c.entropy_evals, 3 * 1024);
    }

    #[test]
    fn chosen_variant_is_the_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let g = SampleGrid::from_fn(24, 20, 8, |x, _| {
                (x as i32 * 9 + rng.gen_range(0..40)) % 256
            });
            let (v, bpp) = select_variant(
                &g,
                2,
                &Variant::ALL,
                Evaluator::ActualBitrate,
                &mut CostCounters::default(),
            )
            .unwrap();
            for other in Variant::ALL {
                let b = evaluate(
                    &g,
                    &other.configuration(2),
                    Evaluator::ActualBitrate,
                    &mut CostCounters::default(),
                )
                .unwrap();
                assert!(bpp <= b);
                if other == v {
                    assert_eq!(bpp, b);
                }
            }
        }
    }

    #[test]
    fn brute_force_bounds_the_heuristics() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..4 {
            let g = SampleGrid::from_fn(8, 8, 8, |x, y| {
                ((x * 30 + y * 3) as i32 + rng.gen_range(0..20)) % 256
            });
            let ev = Evaluator::ActualBitrate;
            let (d, best) = brute_force_best(&g, 1, ev).unwrap();
            assert!(d.is_legal());
            let (a, _) = step_a(&g, 1, ev, &mut CostCounters::default()).unwrap();
            let a = evaluate(
                &g,
                &Configuration::Ssdwt(a),
                ev,
                &mut CostCounters::default(),
            )
            .unwrap();
            let b2 = bh(&g, 1, 2, BhFlavor::Plain, ev, &mut CostCounters::default()).unwrap();
            let r1 = rh(&g, 1, 1, ev, &mut CostCounters::default()).unwrap();
            assert!(best <= b2.bpp && b2.bpp <= a);
            assert!(best <= r1.bpp);
        }
    }

    #[test]
    fn brute_force_limits() {
        let g = SampleGrid::filled(65, 8, 8, 0);
        assert!(matches!(
            brute_force_best(&g, 1, Evaluator::EntropyH0),
            Err(SearchError::TooLarge { .. })
        ));
        let g = SampleGrid::filled(8, 8, 8, 0);
        assert!(matches!(
            brute_force_best(&g, 3, Evaluator::EntropyH0),
            Err(SearchError::TooLarge { .. })
        ));
        let (_, v) = brute_force_best(&g, 1, Evaluator::EntropyH0).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(enumerate_legal(1).count(), 125);
    }

    #[test]
    fn classification() {
        let text = glyphs(64, 64);
        assert_eq!(
            classify(&text, 2, Evaluator::ActualBitrate).unwrap(),
            ImageClass::NoPhotoA
        );
        let ramp = SampleGrid::from_fn(32, 32, 8, |x, y| (x * 4 + y * 3) as i32);
        assert_eq!(
            classify(&ramp, 2, Evaluator::ActualBitrate).unwrap(),
            ImageClass::Other
        );
        // both anchors reach 0 bits under H0, so the tie rule applies
        let flat = SampleGrid::filled(16, 16, 8, 50);
        assert_eq!(
            classify(&flat, 2, Evaluator::EntropyH0).unwrap(),
            ImageClass::Other
        );
    }
}
