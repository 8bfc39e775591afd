//! Carry-propagating binary range coder with count-based adaptive models.
//!
//! The byte-oriented carry handling follows the LZMA scheme. The leading
//! byte LZMA always emits as zero is dropped, so the decoder primes itself
//! with four bytes instead of five.

use super::CodingError;

const TOP: u32 = 1 << 24;
/// Counts are halved once their sum reaches this total.
pub const RESCALE_TOTAL: u32 = 1024;

/// Adaptive binary model; both counts start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitModel {
    zeros: u16,
    ones: u16,
}

impl Default for BitModel {
    fn default() -> Self {
        Self { zeros: 1, ones: 1 }
    }
}

impl BitModel {
    #[inline]
    fn total(self) -> u32 {
        self.zeros as u32 + self.ones as u32
    }

    #[inline]
    fn update(&mut self, bit: bool) {
        if bit {
            self.ones += 1;
        } else {
            self.zeros += 1;
        }
        if self.total() >= RESCALE_TOTAL {
            self.zeros = self.zeros.div_ceil(2);
            self.ones = self.ones.div_ceil(2);
        }
    }

    #[inline]
    fn bound(self, range: u32) -> u32 {
        (range / self.total()) * self.zeros as u32
    }
}

pub struct RangeEncoder {
    low: u64,
    range: u32,
    cache: u8,
    cache_size: u64,
    skip_first: bool,
    out: Vec<u8>,
}

impl Default for RangeEncoder {
    fn default() -> Self {
        Self::new()
    }
}

impl RangeEncoder {
    pub fn new() -> Self {
        Self {
            low: 0,
            range: u32::MAX,
            cache: 0,
            cache_size: 1,
            skip_first: true,
            out: Vec::new(),
        }
    }

    fn emit(&mut self, byte: u8) {
        if self.skip_first {
            debug_assert_eq!(byte, 0);
            self.skip_first = false;
        } else {
            self.out.push(byte);
        }
    }

    fn shift_low(&mut self) {
        if (self.low as u32) < 0xFF00_0000 || (self.low >> 32) != 0 {
            let carry = (self.low >> 32) as u8;
            let mut temp = self.cache;
            loop {
                self.emit(temp.wrapping_add(carry));
                temp = 0xFF;
                self.cache_size -= 1;
                if self.cache_size == 0 {
                    break;
                }
            }
            self.cache = ((self.low >> 24) & 0xFF) as u8;
        }
        self.cache_size += 1;
        self.low = (self.low & 0x00FF_FFFF) << 8;
    }

    #[inline]
    fn normalize(&mut self) {
        while self.range < TOP {
            self.range <<= 8;
            self.shift_low();
        }
    }

    pub fn encode(&mut self, model: &mut BitModel, bit: bool) {
        let bound = model.bound(self.range);
        if bit {
            self.low += bound as u64;
            self.range -= bound;
        } else {
            self.range = bound;
        }
        model.update(bit);
        self.normalize();
    }

    /// Codes a bit at probability 1/2 without a model.
    pub fn encode_direct(&mut self, bit: bool) {
        self.range >>= 1;
        if bit {
            self.low += self.range as u64;
        }
        self.normalize();
    }

    pub fn finish(mut self) -> Vec<u8> {
        for _ in 0..5 {
            self.shift_low();
        }
        self.out
    }
}

pub struct RangeDecoder<'a> {
    data: &'a [u8],
    pos: usize,
    code: u32,
    range: u32,
}

impl<'a> RangeDecoder<'a> {
    pub fn new(data: &'a [u8]) -> Result<Self, CodingError> {
        let mut dec = Self {
            data,
            pos: 0,
            code: 0,
            range: u32::MAX,
        };
        for _ in 0..4 {
            dec.code = (dec.code << 8) | dec.next_byte()? as u32;
        }
        Ok(dec)
    }

    #[inline]
    fn next_byte(&mut self) -> Result<u8, CodingError> {
        let b = *self
            .data
            .get(self.pos)
            .ok_or(CodingError::CorruptPayload("payload too short"))?;
        self.pos += 1;
        Ok(b)
    }

    #[inline]
    fn normalize(&mut self) -> Result<(), CodingError> {
        while self.range < TOP {
            self.range <<= 8;
            self.code = (self.code << 8) | self.next_byte()? as u32;
        }
        Ok(())
    }

    pub fn decode(&mut self, model: &mut BitModel) -> Result<bool, CodingError> {
        let bound = model.bound(self.range);
        let bit = if self.code < bound {
            self.range = bound;
            false
        } else {
            self.code -= bound;
            self.range -= bound;
            true
        };
        model.update(bit);
        self.normalize()?;
        Ok(bit)
    }

    pub fn decode_direct(&mut self) -> Result<bool, CodingError> {
        self.range >>= 1;
        let bit = self.code >= self.range;
        if bit {
            self.code -= self.range;
        }
        self.normalize()?;
        Ok(bit)
    }

    /// Bytes consumed so far.
    pub fn position(&self) -> usize {
        self.pos
    }
}
