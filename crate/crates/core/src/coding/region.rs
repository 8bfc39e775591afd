//! Context-adaptive coding of one rectangular region.
//!
//! Samples are scanned in raster order and zigzag-mapped
//! (`v >= 0 → 2v`, `v < 0 → -2v - 1`). The value `u + 1` is written as an
//! Elias-gamma code: its unary length prefix goes through adaptive models
//! selected by (neighbourhood bucket, prefix position), the binary suffix is
//! written at probability 1/2. The neighbourhood bucket quantises
//! `floor((|west| + |north|) / 2)`, with neighbours outside the region read
//! as zero.

use super::rangecoder::{BitModel, RangeDecoder, RangeEncoder};
use super::CodingError;
use crate::transform::Region;
use crate::{CostCounters, SampleGrid};

pub const CONTEXTS: usize = 8;
/// Longest gamma prefix: `u + 1 < 2^33`.
pub const MAX_PREFIX: usize = 33;

/// Upper edges (inclusive) of the first seven neighbourhood buckets.
const BUCKET_EDGES: [u64; 7] = [0, 1, 2, 4, 8, 16, 32];

#[inline]
pub fn context_bucket(west: i32, north: i32) -> usize {
    let a = ((west as i64).unsigned_abs() + (north as i64).unsigned_abs()) / 2;
    BUCKET_EDGES
        .iter()
        .position(|&edge| a <= edge)
        .unwrap_or(CONTEXTS - 1)
}

#[inline]
pub fn zigzag(v: i32) -> u64 {
    if v >= 0 {
        2 * v as u64
    } else {
        (-2 * v as i64 - 1) as u64
    }
}

#[inline]
pub fn unzigzag(u: u64) -> Option<i32> {
    let v = if u.is_multiple_of(2) {
        (u / 2) as i64
    } else {
        -(u.div_ceil(2) as i64)
    };
    i32::try_from(v).ok()
}

struct Models([[BitModel; MAX_PREFIX]; CONTEXTS]);

impl Models {
    fn new() -> Self {
        Self([[BitModel::default(); MAX_PREFIX]; CONTEXTS])
    }
}

#[inline]
fn neighbours(samples: &[i32], width: usize, i: usize) -> (i32, i32) {
    let x = i % width;
    let west = if x > 0 { samples[i - 1] } else { 0 };
    let north = if i >= width { samples[i - width] } else { 0 };
    (west, north)
}

/// Codes `samples` (raster order, row length `width`). Empty input gives an
/// empty payload.
pub fn encode_samples(samples: &[i32], width: usize) -> Vec<u8> {
    if samples.is_empty() {
        return Vec::new();
    }
    let mut models = Models::new();
    let mut enc = RangeEncoder::new();
    for (i, &v) in samples.iter().enumerate() {
        let (w, n) = neighbours(samples, width, i);
        let ctx = &mut models.0[context_bucket(w, n)];
        let value = zigzag(v) + 1;
        let nbits = 64 - value.leading_zeros() as usize;
        for model in &mut ctx[..nbits - 1] {
            enc.encode(model, false);
        }
        enc.encode(&mut ctx[nbits - 1], true);
        for b in (0..nbits - 1).rev() {
            enc.encode_direct((value >> b) & 1 == 1);
        }
    }
    enc.finish()
}

/// Inverse of [`encode_samples`] for a `width × height` region.
pub fn decode_samples(bytes: &[u8], width: usize, height: usize) -> Result<Vec<i32>, CodingError> {
    let count = width * height;
    if count == 0 {
        return if bytes.is_empty() {
            Ok(Vec::new())
        } else {
            Err(CodingError::CorruptPayload("payload for an empty region"))
        };
    }
    let mut models = Models::new();
    let mut dec = RangeDecoder::new(bytes)?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let (w, n) = neighbours(&out, width, i);
        let ctx = &mut models.0[context_bucket(w, n)];
        let mut zeros = 0;
        while !dec.decode(&mut ctx[zeros])? {
            zeros += 1;
            if zeros >= MAX_PREFIX {
                return Err(CodingError::CorruptPayload("gamma prefix too long"));
            }
        }
        let mut value = 1u64;
        for _ in 0..zeros {
            value = (value << 1) | dec.decode_direct()? as u64;
        }
        let v = unzigzag(value - 1).ok_or(CodingError::CorruptPayload("sample overflow"))?;
        out.push(v);
    }
    if dec.position() != bytes.len() {
        return Err(CodingError::CorruptPayload("trailing bytes after region"));
    }
    Ok(out)
}

/// Entropy-coded bytes of one nominal region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPayload {
    pub region: usize,
    pub bytes: Vec<u8>,
    pub samples: usize,
}

pub fn encode_region(
    grid: &SampleGrid,
    region_id: usize,
    region: &Region,
    counters: &mut CostCounters,
) -> RegionPayload {
    let samples = grid.extract(region.x, region.y, region.w, region.h);
    counters.encoded_symbols += samples.len() as u64;
    RegionPayload {
        region: region_id,
        bytes: encode_samples(&samples, region.w.max(1)),
        samples: samples.len(),
    }
}

pub fn decode_region(payload: &RegionPayload, region: &Region) -> Result<Vec<i32>, CodingError> {
    if payload.samples != region.len() {
        return Err(CodingError::CorruptPayload("sample count mismatch"));
    }
    decode_samples(&payload.bytes, region.w, region.h)
}
