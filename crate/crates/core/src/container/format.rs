//! Byte layout of version-1 containers.
//!
//! ```text
//! "SSDW" | version u8 | mode u8 | width u32 | height u32 | depth u8 | levels u8
//! decision bits (SS and RDLS modes): 9 per level, MSB first, zero padded
//! filter ids (RDLS mode): 6 per level in H, L, HL, LL, HH, LH order
//! per nominal region: length u32 | payload
//! ```
//! Multi-byte integers are little-endian.

use super::ContainerError;
use crate::config::{Configuration, Mode};
use crate::rdls::{FilterAssignment, FilterId};
use crate::transform::{nominal_regions, DecisionSet, LevelDecisions, Subband};

pub const MAGIC: [u8; 4] = *b"SSDW";
pub const VERSION: u8 = 1;
pub const MAX_LEVELS: usize = 16;
pub const MAX_DEPTH: u8 = 16;

/// A parsed container.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub width: usize,
    pub height: usize,
    pub bit_depth: u8,
    pub configuration: Configuration,
    /// Region payloads in nominal region order.
    pub payloads: Vec<Vec<u8>>,
}

pub fn pack_decision_bits(decisions: &DecisionSet) -> Vec<u8> {
    let bits: Vec<bool> = decisions
        .as_slice()
        .iter()
        .flat_map(|l| l.to_bits())
        .collect();
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            out[i / 8] |= 0x80 >> (i % 8);
        }
    }
    out
}

/// Unpacks `t` levels; padding must be zero and every pair legal.
pub fn unpack_decision_bits(bytes: &[u8], t: usize) -> Result<DecisionSet, ContainerError> {
    let bit = |i: usize| bytes[i / 8] & (0x80 >> (i % 8)) != 0;
    let mut levels = Vec::with_capacity(t);
    for level in 0..t {
        let mut flags = [false; 9];
        for (k, f) in flags.iter_mut().enumerate() {
            *f = bit(9 * level + k);
        }
        let lvl = LevelDecisions::from_bits(flags);
        if !lvl.is_legal() {
            return Err(ContainerError::IllegalDecisionBits { level: level + 1 });
        }
        levels.push(lvl);
    }
    if (9 * t..bytes.len() * 8).any(bit) {
        return Err(ContainerError::IllegalDecisionBits { level: t });
    }
    Ok(DecisionSet::new(levels))
}

impl Container {
    pub fn mode(&self) -> Mode {
        self.configuration.mode()
    }

    pub fn levels(&self) -> usize {
        self.configuration.levels()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let t = self.levels();
        let mut out = Vec::with_capacity(
            self.configuration.overhead_bytes(self.width, self.height)
                + self.payloads.iter().map(Vec::len).sum::<usize>(),
        );
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.mode().code());
        out.extend_from_slice(&(self.width as u32).to_le_bytes());
        out.extend_from_slice(&(self.height as u32).to_le_bytes());
        out.push(self.bit_depth);
        out.push(t as u8);
        match &self.configuration {
            Configuration::Ssdwt(d) => out.extend(pack_decision_bits(d)),
            Configuration::Rdls(a) => {
                out.extend(pack_decision_bits(&a.derived_decisions()));
                for slots in a.as_slice() {
                    out.extend(slots.iter().map(|f| f.code()));
                }
            }
            _ => {}
        }
        for p in &self.payloads {
            out.extend_from_slice(&(p.len() as u32).to_le_bytes());
            out.extend_from_slice(p);
        }
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, ContainerError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(ContainerError::BadMagic);
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(ContainerError::BadVersion(version));
        }
        let mode_code = r.u8()?;
        let mode = Mode::from_code(mode_code).ok_or(ContainerError::UnsupportedMode(mode_code))?;
        let width = r.u32()? as usize;
        let height = r.u32()? as usize;
        let bit_depth = r.u8()?;
        let t = r.u8()? as usize;
        if width == 0 || height == 0 {
            return Err(ContainerError::DimensionMismatch(format!(
                "empty image {width}x{height}"
            )));
        }
        if bit_depth == 0 || bit_depth > MAX_DEPTH {
            return Err(ContainerError::DimensionMismatch(format!(
                "bit depth {bit_depth}"
            )));
        }
        if t > MAX_LEVELS || (mode == Mode::NoDwt && t != 0) {
            return Err(ContainerError::DimensionMismatch(format!(
                "{t} levels in {mode} mode"
            )));
        }
        if width
            .checked_mul(height)
            .is_none_or(|p| p > u32::MAX as usize)
        {
            return Err(ContainerError::DimensionMismatch(format!(
                "image {width}x{height} too large"
            )));
        }

        let configuration = match mode {
            Mode::Dwt => Configuration::Dwt(t),
            Mode::NoDwt => Configuration::NoDwt,
            Mode::Fix1 => Configuration::Fix1(t),
            Mode::Fix2 => Configuration::Fix2(t),
            Mode::Ssdwt => {
                let bits = r.take((9 * t).div_ceil(8))?;
                Configuration::Ssdwt(unpack_decision_bits(bits, t)?)
            }
            Mode::RdlsSsdwt => {
                let bits = r.take((9 * t).div_ceil(8))?;
                let decisions = unpack_decision_bits(bits, t)?;
                let mut levels = Vec::with_capacity(t);
                for _ in 0..t {
                    let mut slots = [FilterId::None; 6];
                    for s in &mut slots {
                        let offset = r.pos;
                        let code = r.u8()?;
                        *s = FilterId::from_code(code)
                            .ok_or(ContainerError::UnknownFilter { code, offset })?;
                    }
                    levels.push(slots);
                }
                let assignment = FilterAssignment::new(levels);
                let derived = assignment.derived_decisions();
                if let Some(level) = (1..=t).find(|&l| derived.level(l) != decisions.level(l)) {
                    return Err(ContainerError::IllegalDecisionBits { level });
                }
                Configuration::Rdls(assignment)
            }
        };

        let regions = nominal_regions(width, height, t);
        let mut payloads = Vec::with_capacity(regions.len());
        for region in 0..regions.len() {
            let at = r.pos;
            let len = r.u32().map_err(|_| ContainerError::CorruptPayload {
                region,
                offset: at,
                reason: "missing length".into(),
            })? as usize;
            let start = r.pos;
            let payload = r.take(len).map_err(|_| ContainerError::CorruptPayload {
                region,
                offset: start,
                reason: format!("payload of {len} bytes truncated"),
            })?;
            payloads.push(payload.to_vec());
        }
        if r.pos != bytes.len() {
            return Err(ContainerError::CorruptPayload {
                region: regions.len(),
                offset: r.pos,
                reason: "trailing bytes".into(),
            });
        }
        Ok(Self {
            width,
            height,
            bit_depth,
            configuration,
            payloads,
        })
    }

    /// Byte offset of each region's payload.
    pub fn payload_offsets(&self) -> Vec<usize> {
        let mut at = self.configuration.overhead_bytes(self.width, self.height)
            - super::super::config::REGION_PREFIX_BYTES * self.payloads.len();
        self.payloads
            .iter()
            .map(|p| {
                at += 4;
                let here = at;
                at += p.len();
                here
            })
            .collect()
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ContainerError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        match end {
            Some(end) => {
                let s = &self.bytes[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(ContainerError::Truncated { offset: self.pos }),
        }
    }

    fn u8(&mut self) -> Result<u8, ContainerError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, ContainerError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

/// Filter byte order within a level.
pub const FILTER_ORDER: [Subband; 6] = Subband::SLOT_ORDER;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{enumerate_legal, PairDecision};

    #[test]
    fn decision_bits_layout() {
        let d = DecisionSet::perform_all(3);
        assert_eq!(pack_decision_bits(&d), vec![0; 4]);
        let d = DecisionSet::skip_all(3);
        assert_eq!(pack_decision_bits(&d), vec![0xFF, 0xFF, 0xFF, 0xE0]);
        let mut d = DecisionSet::perform_all(1);
        *d.level_mut(1).pair_mut(crate::transform::Pair::Vertical) = PairDecision {
            skip_pred: true,
            skip_upd: false,
            skip_reorder: false,
        };
        assert_eq!(pack_decision_bits(&d), vec![0x80, 0x00]);
    }

    #[test]
    fn decision_bits_round_trip() {
        for d in enumerate_legal(2).step_by(7) {
            let bytes = pack_decision_bits(&d);
            assert_eq!(bytes.len(), 3);
            assert_eq!(unpack_decision_bits(&bytes, 2).unwrap(), d);
        }
    }

    #[test]
    fn illegal_bits_are_rejected() {
        // reorder skipped while the prediction runs
        assert_eq!(
            unpack_decision_bits(&[0x20, 0x00], 1),
            Err(ContainerError::IllegalDecisionBits { level: 1 })
        );
        // stray padding bit
        assert_eq!(
            unpack_decision_bits(&[0x00, 0x01], 1),
            Err(ContainerError::IllegalDecisionBits { level: 1 })
        );
    }

    #[test]
    fn filter_order_is_slot_order() {
        assert_eq!(FILTER_ORDER.map(|s| s.slot_index()), [0, 1, 2, 3, 4, 5]);
    }
}
