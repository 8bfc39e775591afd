//! Entropy coding of transformed regions and the cost functions used by the
//! search.

mod entropy;
mod rangecoder;
mod region;

use thiserror::Error;

pub use entropy::{h0_estimate, region_bits, region_entropy};
pub use rangecoder::{BitModel, RangeDecoder, RangeEncoder, RESCALE_TOTAL};
pub use region::{
    context_bucket, decode_region, decode_samples, encode_region, encode_samples, unzigzag, zigzag,
    RegionPayload, CONTEXTS, MAX_PREFIX,
};

use crate::config::Configuration;
use crate::par;
use crate::transform::{nominal_regions, TransformError};
use crate::{CostCounters, SampleGrid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodingError {
    #[error("corrupt payload: {0}")]
    CorruptPayload(&'static str),
}

/// Cost function guiding the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Evaluator {
    /// Real payload size of the entropy coder.
    #[default]
    ActualBitrate,
    /// Zeroth-order entropy estimate.
    EntropyH0,
}

impl Evaluator {
    pub fn name(self) -> &'static str {
        match self {
            Evaluator::ActualBitrate => "bitrate",
            Evaluator::EntropyH0 => "h0",
        }
    }
}

impl std::str::FromStr for Evaluator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bitrate" | "actual" => Ok(Evaluator::ActualBitrate),
            "h0" | "entropy" => Ok(Evaluator::EntropyH0),
            _ => Err(format!("unknown estimator '{s}'")),
        }
    }
}

/// Payload bits of one region under `evaluator`, without touching counters.
pub fn region_cost_bits(evaluator: Evaluator, samples: &[i32], width: usize) -> f64 {
    match evaluator {
        Evaluator::ActualBitrate => 8.0 * encode_samples(samples, width.max(1)).len() as f64,
        Evaluator::EntropyH0 => region_bits(samples),
    }
}

/// Charges the work of costing `samples` region samples.
pub fn charge(evaluator: Evaluator, samples: usize, counters: &mut CostCounters) {
    match evaluator {
        Evaluator::ActualBitrate => counters.encoded_symbols += samples as u64,
        Evaluator::EntropyH0 => counters.entropy_evals += samples as u64,
    }
}

/// Combines per-region bits (in region order) into bits per pixel.
/// Container overhead counts only for the actual bitrate.
pub fn combine_bpp(
    evaluator: Evaluator,
    overhead_bytes: usize,
    region_bits: impl IntoIterator<Item = f64>,
    pixels: usize,
) -> f64 {
    let payload: f64 = region_bits.into_iter().sum();
    let total = match evaluator {
        Evaluator::ActualBitrate => 8.0 * overhead_bytes as f64 + payload,
        Evaluator::EntropyH0 => payload,
    };
    total / pixels as f64
}

/// Transforms `image` under `config` and costs it from scratch. The actual
/// bitrate is that of the complete container.
pub fn evaluate(
    image: &SampleGrid,
    config: &Configuration,
    evaluator: Evaluator,
    counters: &mut CostCounters,
) -> Result<f64, TransformError> {
    let mut grid = image.clone();
    config.forward(&mut grid, counters)?;
    let regions = nominal_regions(grid.width(), grid.height(), config.levels());
    let bits = par::map(&regions, |r| {
        region_cost_bits(evaluator, &grid.extract(r.x, r.y, r.w, r.h), r.w)
    });
    charge(evaluator, grid.len(), counters);
    Ok(combine_bpp(
        evaluator,
        config.overhead_bytes(grid.width(), grid.height()),
        bits,
        grid.len(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::DecisionSet;

    #[test]
    fn context_modelling_pays_off_on_clustered_noise() {
        // equal histograms, different spatial arrangement
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let noise: Vec<i32> = (0..32 * 16).map(|_| rng.gen_range(-40..=40)).collect();
        let mut interleaved = vec![0; 32 * 32];
        let mut separated = vec![0; 32 * 32];
        let mut k = 0;
        for y in 0..32 {
            for x in 0..16 {
                interleaved[y * 32 + 2 * x] = noise[k];
                separated[y * 32 + x] = noise[k];
                k += 1;
            }
        }
        let a = encode_samples(&interleaved, 32).len();
        let b = encode_samples(&separated, 32).len();
        assert!(b < a, "separated {b} vs interleaved {a}");
        assert_eq!(region_entropy(&interleaved), region_entropy(&separated));
    }

    #[test]
    fn evaluators_on_constant_images() {
        let g = SampleGrid::filled(32, 32, 8, 0);
        let cfg = Configuration::Ssdwt(DecisionSet::skip_all(3));
        let mut c = CostCounters::default();
        assert_eq!(
            evaluate(&g, &cfg, Evaluator::EntropyH0, &mut c).unwrap(),
            0.0
        );
        assert_eq!(c.entropy_evals, 1024);
        assert_eq!(c.encoded_symbols, 0);
        let bpp = evaluate(&g, &cfg, Evaluator::ActualBitrate, &mut c).unwrap();
        assert!(bpp < 1.0, "{bpp}");
        assert_eq!(c.encoded_symbols, 1024);
    }

    #[test]
    fn actual_bitrate_counts_the_whole_container() {
        let g = SampleGrid::from_fn(20, 12, 8, |x, y| ((x * 13 + y * 7) % 256) as i32);
        for cfg in [
            Configuration::NoDwt,
            Configuration::Dwt(2),
            Configuration::Ssdwt(DecisionSet::perform_all(2)),
        ] {
            let bpp = evaluate(
                &g,
                &cfg,
                Evaluator::ActualBitrate,
                &mut CostCounters::default(),
            )
            .unwrap();
            let mut t = g.clone();
            cfg.forward(&mut t, &mut CostCounters::default()).unwrap();
            let payload: usize = nominal_regions(20, 12, cfg.levels())
                .iter()
                .map(|r| encode_samples(&t.extract(r.x, r.y, r.w, r.h), r.w).len())
                .sum();
            let bytes = payload + cfg.overhead_bytes(20, 12);
            assert_eq!(bpp, 8.0 * bytes as f64 / 240.0);
        }
    }

    #[test]
    fn h0_evaluation_matches_estimate() {
        let g = SampleGrid::from_fn(33, 17, 8, |x, y| ((x * x + 5 * y) % 41) as i32);
        let cfg = Configuration::Fix2(3);
        let mut c = CostCounters::default();
        let a = evaluate(&g, &cfg, Evaluator::EntropyH0, &mut c).unwrap();
        let mut t = g.clone();
        cfg.forward(&mut t, &mut CostCounters::default()).unwrap();
        let b = h0_estimate(&t, 3, &mut CostCounters::default());
        assert!((a - b).abs() < 1e-12);
        assert_eq!(evaluate(&g, &cfg, Evaluator::EntropyH0, &mut c).unwrap(), a);
    }

    #[test]
    fn estimator_parses() {
        assert_eq!("h0".parse::<Evaluator>(), Ok(Evaluator::EntropyH0));
        assert_eq!("bitrate".parse::<Evaluator>(), Ok(Evaluator::ActualBitrate));
        assert!("zip".parse::<Evaluator>().is_err());
    }
}
