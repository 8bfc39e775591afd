//! Compressed file format and the end-to-end compress/decompress pipelines.

mod format;

use thiserror::Error;

pub use format::{
    pack_decision_bits, unpack_decision_bits, Container, FILTER_ORDER, MAGIC, MAX_DEPTH,
    MAX_LEVELS, VERSION,
};

use crate::coding::{decode_samples, encode_region, Evaluator};
use crate::config::{Configuration, Mode};
use crate::par;
use crate::search::{
    run_search, select_variant, Heuristic, SearchConfig, SearchError, SearchOutcome, Variant,
};
use crate::transform::{nominal_regions, TransformError};
use crate::{CostCounters, SampleGrid};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContainerError {
    #[error("bad magic: not an SSDW container")]
    BadMagic,
    #[error("unsupported format version {0}")]
    BadVersion(u8),
    #[error("unsupported mode byte {0}")]
    UnsupportedMode(u8),
    #[error("mode {mode} cannot run heuristic {heuristic}")]
    HeuristicMismatch { mode: Mode, heuristic: Heuristic },
    #[error("mode {0} requires a search configuration")]
    MissingSearch(Mode),
    #[error("illegal decision bits at level {level}")]
    IllegalDecisionBits { level: usize },
    #[error("unknown filter id {code} at offset {offset}")]
    UnknownFilter { code: u8, offset: usize },
    #[error("truncated header at offset {offset}")]
    Truncated { offset: usize },
    #[error("CorruptPayload in region {region} at offset {offset}: {reason}")]
    CorruptPayload {
        region: usize,
        offset: usize,
        reason: String,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("decoded sample {value} at index {index} is outside the bit depth")]
    SampleOutOfRange { index: usize, value: i32 },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// What to compress with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressConfig {
    pub mode: Mode,
    pub levels: usize,
    /// Required by [`Mode::Ssdwt`] and [`Mode::RdlsSsdwt`]; its `levels`
    /// field is overridden by `levels` above.
    pub search: Option<SearchConfig>,
}

impl CompressConfig {
    pub fn fixed(mode: Mode, levels: usize) -> Self {
        Self {
            mode,
            levels,
            search: None,
        }
    }

    pub fn searched(mode: Mode, search: SearchConfig) -> Self {
        Self {
            mode,
            levels: search.levels,
            search: Some(search),
        }
    }
}

/// A finished container and how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct Compressed {
    pub bytes: Vec<u8>,
    pub configuration: Configuration,
    pub pixels: usize,
    pub search: Option<SearchOutcome>,
}

impl Compressed {
    /// Bits per pixel of the whole file.
    pub fn bpp(&self) -> f64 {
        8.0 * self.bytes.len() as f64 / self.pixels as f64
    }

    /// Bits per pixel spent on decision bits and filter ids.
    pub fn side_info_bpp(&self) -> f64 {
        let bytes = self
            .configuration
            .mode()
            .side_info_bytes(self.configuration.levels());
        8.0 * bytes as f64 / self.pixels as f64
    }
}

fn check_image(image: &SampleGrid, levels: usize) -> Result<(), ContainerError> {
    if image.is_empty() {
        return Err(ContainerError::DimensionMismatch("empty image".into()));
    }
    if image.width() > u32::MAX as usize || image.height() > u32::MAX as usize {
        return Err(ContainerError::DimensionMismatch("image too large".into()));
    }
    if image.bit_depth() == 0 || image.bit_depth() > MAX_DEPTH {
        return Err(ContainerError::DimensionMismatch(format!(
            "bit depth {}",
            image.bit_depth()
        )));
    }
    if levels > MAX_LEVELS {
        return Err(ContainerError::DimensionMismatch(format!(
            "{levels} levels exceed the limit of {MAX_LEVELS}"
        )));
    }
    if let Some((index, value)) = image.first_out_of_range() {
        return Err(ContainerError::SampleOutOfRange { index, value });
    }
    Ok(())
}

/// Transforms and entropy codes `image` under an explicit configuration.
pub fn encode(
    image: &SampleGrid,
    configuration: &Configuration,
    counters: &mut CostCounters,
) -> Result<Vec<u8>, ContainerError> {
    let t = configuration.levels();
    check_image(image, t)?;
    let mut grid = image.clone();
    configuration.forward(&mut grid, counters)?;
    let regions = nominal_regions(grid.width(), grid.height(), t);
    let encoded = par::map_range(regions.len(), |i| {
        let mut c = CostCounters::default();
        let payload = encode_region(&grid, i, &regions[i], &mut c);
        (payload.bytes, c)
    });
    let mut payloads = Vec::with_capacity(encoded.len());
    for (bytes, c) in encoded {
        *counters += c;
        payloads.push(bytes);
    }
    Ok(Container {
        width: image.width(),
        height: image.height(),
        bit_depth: image.bit_depth(),
        configuration: configuration.clone(),
        payloads,
    }
    .to_bytes())
}

/// Full pipeline: choose the configuration for `config.mode`, then encode.
pub fn compress(
    image: &SampleGrid,
    config: &CompressConfig,
    counters: &mut CostCounters,
) -> Result<Compressed, ContainerError> {
    let t = config.levels;
    check_image(image, t)?;
    let (configuration, search) = match config.mode {
        Mode::Dwt => (Configuration::Dwt(t), None),
        Mode::NoDwt => (Configuration::NoDwt, None),
        Mode::Fix1 => (Configuration::Fix1(t), None),
        Mode::Fix2 => (Configuration::Fix2(t), None),
        mode @ (Mode::Ssdwt | Mode::RdlsSsdwt) => {
            let mut search = config
                .search
                .clone()
                .ok_or(ContainerError::MissingSearch(mode))?;
            let rdls = search.heuristic == Heuristic::HSsRdls;
            if rdls != (mode == Mode::RdlsSsdwt) {
                return Err(ContainerError::HeuristicMismatch {
                    mode,
                    heuristic: search.heuristic,
                });
            }
            search.levels = t;
            let outcome = run_search(image, &search, counters)?;
            (outcome.configuration.clone(), Some(outcome))
        }
    };
    let bytes = encode(image, &configuration, counters)?;
    Ok(Compressed {
        bytes,
        configuration,
        pixels: image.len(),
        search,
    })
}

/// Picks the cheapest side-information-free variant under `evaluator` and
/// encodes with it.
pub fn compress_selected(
    image: &SampleGrid,
    levels: usize,
    candidates: &[Variant],
    evaluator: Evaluator,
    counters: &mut CostCounters,
) -> Result<(Variant, Compressed), ContainerError> {
    check_image(image, levels)?;
    let (variant, _) = select_variant(image, levels, candidates, evaluator, counters)?;
    let configuration = variant.configuration(levels);
    let bytes = encode(image, &configuration, counters)?;
    Ok((
        variant,
        Compressed {
            bytes,
            configuration,
            pixels: image.len(),
            search: None,
        },
    ))
}

/// Decodes a container. Nothing is returned unless every check passes.
pub fn decompress(bytes: &[u8]) -> Result<SampleGrid, ContainerError> {
    let container = Container::parse(bytes)?;
    let (w, h, t) = (container.width, container.height, container.levels());
    let regions = nominal_regions(w, h, t);
    let offsets = container.payload_offsets();
    let decoded = par::map_range(regions.len(), |i| {
        let r = &regions[i];
        decode_samples(&container.payloads[i], r.w, r.h).map_err(|e| {
            ContainerError::CorruptPayload {
                region: i,
                offset: offsets[i],
                reason: e.to_string(),
            }
        })
    });
    let mut grid = SampleGrid::filled(w, h, container.bit_depth, 0);
    for (r, samples) in regions.iter().zip(decoded) {
        grid.insert(r.x, r.y, r.w, r.h, &samples?);
    }
    container.configuration.inverse(&mut grid)?;
    if let Some((index, value)) = grid.first_out_of_range() {
        return Err(ContainerError::SampleOutOfRange { index, value });
    }
    Ok(grid)
}
