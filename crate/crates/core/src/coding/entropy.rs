//! Memoryless (zeroth-order) entropy of transformed subbands.

use crate::transform::nominal_regions;
use crate::{CostCounters, SampleGrid};

/// Empirical entropy of `samples` in bits per sample; 0 for empty input.
pub fn region_entropy(samples: &[i32]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    let n = sorted.len() as f64;
    sorted
        .chunk_by(|a, b| a == b)
        .map(|run| {
            let p = run.len() as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Total entropy in bits (`region_entropy · len`).
pub fn region_bits(samples: &[i32]) -> f64 {
    region_entropy(samples) * samples.len() as f64
}

/// Size-weighted sum of the entropies of the `3t + 1` nominal regions,
/// divided by the pixel count.
pub fn h0_estimate(grid: &SampleGrid, t: usize, counters: &mut CostCounters) -> f64 {
    let bits: f64 = nominal_regions(grid.width(), grid.height(), t)
        .iter()
        .map(|r| region_bits(&grid.extract(r.x, r.y, r.w, r.h)))
        .sum();
    counters.entropy_evals += grid.len() as u64;
    bits / grid.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{forward_ssdwt, DecisionSet};
    use proptest::prelude::*;
    use std::collections::HashMap;

    /// Histogram oracle with a hash map and direct probabilities.
    fn oracle(samples: &[i32]) -> f64 {
        let mut hist: HashMap<i32, usize> = HashMap::new();
        for &s in samples {
            *hist.entry(s).or_default() += 1;
        }
        let n = samples.len() as f64;
        hist.values()
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum()
    }

    #[test]
    fn examples() {
        assert_eq!(region_entropy(&[5, 5, 5, 5]), 0.0);
        assert!((region_entropy(&[0, 1, 0, 1]) - 1.0).abs() < 1e-12);
        let want = -(0.75f64 * 0.75f64.log2()) - 0.25 * 0.25f64.log2();
        assert!((region_entropy(&[0, 0, 0, 1]) - want).abs() < 1e-12);
        assert!((region_entropy(&[0, 0, 0, 1]) - 0.8113).abs() < 1e-4);
    }

    #[test]
    fn weighted_average_over_regions() {
        let g = SampleGrid::new(2, 1, 8, vec![4, 4]);
        let mut c = CostCounters::default();
        assert_eq!(h0_estimate(&g, 0, &mut c), 0.0);
        assert_eq!(c.entropy_evals, 2);

        let g = SampleGrid::new(2, 2, 8, vec![3, 0, 3, 1]);
        // four single-sample regions
        assert_eq!(h0_estimate(&g, 1, &mut c), 0.0);
        // {3, 3, 0, 1}
        assert!((h0_estimate(&g, 0, &mut c) - 1.5).abs() < 1e-12);

        // 4x2 at t=1: LL = [7], HL = [7], LH = [0], HH = [1] plus the
        // remaining columns, arranged so LL/LH are constant
        let g = SampleGrid::new(4, 2, 8, vec![7, 7, 0, 1, 7, 7, 0, 1]);
        let regions = nominal_regions(4, 2, 1);
        let bits: f64 = regions
            .iter()
            .map(|r| oracle(&g.extract(r.x, r.y, r.w, r.h)) * r.len() as f64)
            .sum();
        assert!((h0_estimate(&g, 1, &mut c) - bits / 8.0).abs() < 1e-12);
    }

    #[test]
    fn half_bpp_for_one_constant_and_one_binary_region() {
        let bits = region_bits(&[7, 7]) + region_bits(&[0, 1]);
        assert!((bits / 4.0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_image_after_all_skip_is_zero() {
        let mut g = SampleGrid::filled(17, 9, 8, 200);
        forward_ssdwt(
            &mut g,
            &DecisionSet::skip_all(3),
            &mut CostCounters::default(),
        )
        .unwrap();
        assert_eq!(h0_estimate(&g, 3, &mut CostCounters::default()), 0.0);
    }

    #[test]
    fn zero_levels_is_plain_image_entropy() {
        let g = SampleGrid::from_fn(9, 7, 8, |x, y| ((x * x + 3 * y) % 13) as i32);
        let h = h0_estimate(&g, 0, &mut CostCounters::default());
        assert!((h - oracle(g.samples())).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn matches_histogram_oracle(s in proptest::collection::vec(-300i32..300, 1..2000)) {
            prop_assert!((region_entropy(&s) - oracle(&s)).abs() < 1e-9);
        }
    }
}
