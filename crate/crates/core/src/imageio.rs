//! Grayscale sample grids and binary PGM (P5) input/output.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImageError {
    #[error("bad magic: expected P5")]
    BadMagic,
    #[error("bad header: {0}")]
    BadHeader(&'static str),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("sample {value} at index {index} outside 0..={max}")]
    OutOfRange { index: usize, value: i32, max: i32 },
}

/// A 2-D row-major array of signed samples.
///
/// The same type carries raw images and in-place transform state; only raw
/// images are expected to lie within `0..2^bit_depth`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SampleGrid {
    width: usize,
    height: usize,
    bit_depth: u8,
    samples: Vec<i32>,
}

impl SampleGrid {
    /// Builds a grid from row-major samples.
    ///
    /// Panics if the sample count does not match the dimensions, a dimension
    /// is zero, or the bit depth is outside `1..=16`.
    pub fn new(width: usize, height: usize, bit_depth: u8, samples: Vec<i32>) -> Self {
        assert!(
            width >= 1 && height >= 1,
            "grid dimensions must be positive"
        );
        assert!((1..=16).contains(&bit_depth), "bit depth must be in 1..=16");
        assert_eq!(samples.len(), width * height, "sample count mismatch");
        Self {
            width,
            height,
            bit_depth,
            samples,
        }
    }

    pub fn filled(width: usize, height: usize, bit_depth: u8, value: i32) -> Self {
        Self::new(width, height, bit_depth, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        bit_depth: u8,
        mut f: impl FnMut(usize, usize) -> i32,
    ) -> Self {
        let mut samples = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                samples.push(f(x, y));
            }
        }
        Self::new(width, height, bit_depth, samples)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn bit_depth(&self) -> u8 {
        self.bit_depth
    }

    /// Pixel count `p`.
    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    #[inline]
    pub fn max_value(&self) -> i32 {
        (1i32 << self.bit_depth) - 1
    }

    #[inline]
    pub fn samples(&self) -> &[i32] {
        &self.samples
    }

    #[inline]
    pub fn samples_mut(&mut self) -> &mut [i32] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<i32> {
        self.samples
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> i32 {
        self.samples[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: i32) {
        self.samples[y * self.width + x] = v;
    }

    pub fn row(&self, y: usize) -> &[i32] {
        &self.samples[y * self.width..(y + 1) * self.width]
    }

    pub fn row_mut(&mut self, y: usize) -> &mut [i32] {
        &mut self.samples[y * self.width..(y + 1) * self.width]
    }

    /// Copies the `w × h` rectangle at `(x, y)` in raster order.
    pub fn extract(&self, x: usize, y: usize, w: usize, h: usize) -> Vec<i32> {
        let mut out = Vec::with_capacity(w * h);
        for row in y..y + h {
            let start = row * self.width + x;
            out.extend_from_slice(&self.samples[start..start + w]);
        }
        out
    }

    /// Inverse of [`SampleGrid::extract`].
    pub fn insert(&mut self, x: usize, y: usize, w: usize, h: usize, data: &[i32]) {
        debug_assert_eq!(data.len(), w * h);
        if w == 0 {
            return;
        }
        for (i, chunk) in data.chunks_exact(w).enumerate().take(h) {
            let start = (y + i) * self.width + x;
            self.samples[start..start + w].copy_from_slice(chunk);
        }
    }

    /// First sample outside `0..=max_value`, if any.
    pub fn first_out_of_range(&self) -> Option<(usize, i32)> {
        let max = self.max_value();
        self.samples
            .iter()
            .copied()
            .enumerate()
            .find(|&(_, v)| v < 0 || v > max)
    }
}

/// Smallest depth able to hold `maxval`.
pub fn depth_for_maxval(maxval: u32) -> u8 {
    (32 - maxval.leading_zeros()).max(1) as u8
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u64, ImageError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ImageError::BadHeader(what));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(ImageError::BadHeader(what))
    }
}

/// Parses a binary PGM image.
pub fn read_pgm(bytes: &[u8]) -> Result<SampleGrid, ImageError> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(ImageError::BadMagic);
    }
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(ImageError::BadHeader("nonpositive dimensions"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(ImageError::BadHeader("maxval must be in 1..=65535"));
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => return Err(ImageError::BadHeader("missing raster separator")),
    }
    let (width, height) = (width as usize, height as usize);
    let count = width
        .checked_mul(height)
        .ok_or(ImageError::BadHeader("dimensions overflow"))?;
    let bps = if maxval > 255 { 2 } else { 1 };
    let payload = &bytes[cur.pos..];
    let expected = count * bps;
    if payload.len() < expected {
        return Err(ImageError::Truncated {
            expected,
            found: payload.len(),
        });
    }
    let samples = if bps == 1 {
        payload[..count].iter().map(|&b| b as i32).collect()
    } else {
        payload[..expected]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as i32)
            .collect()
    };
    Ok(SampleGrid::new(
        width,
        height,
        depth_for_maxval(maxval as u32),
        samples,
    ))
}

/// Serializes a grid as binary PGM with `maxval = 2^depth - 1`.
pub fn write_pgm(grid: &SampleGrid) -> Result<Vec<u8>, ImageError> {
    if let Some((index, value)) = grid.first_out_of_range() {
        return Err(ImageError::OutOfRange {
            index,
            value,
            max: grid.max_value(),
        });
    }
    let maxval = grid.max_value();
    let mut out = format!("P5\n{} {}\n{}\n", grid.width, grid.height, maxval).into_bytes();
    if maxval > 255 {
        out.reserve(grid.len() * 2);
        for &v in &grid.samples {
            out.extend_from_slice(&(v as u16).to_be_bytes());
        }
    } else {
        out.extend(grid.samples.iter().map(|&v| v as u8));
    }
    Ok(out)
}
