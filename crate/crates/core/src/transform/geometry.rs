//! Nominal Mallat layout of a multi-level decomposition.

use std::fmt;
use std::ops::Range;

use super::decisions::Pair;

/// Input rectangle of one level (always anchored at the grid origin).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelRect {
    pub w: usize,
    pub h: usize,
}

impl LevelRect {
    #[inline]
    pub fn low_w(self) -> usize {
        self.w.div_ceil(2)
    }

    #[inline]
    pub fn high_w(self) -> usize {
        self.w / 2
    }

    #[inline]
    pub fn low_h(self) -> usize {
        self.h.div_ceil(2)
    }

    #[inline]
    pub fn high_h(self) -> usize {
        self.h / 2
    }

    #[inline]
    pub fn area(self) -> usize {
        self.w * self.h
    }

    /// Rows touched by the pass group of `pair`.
    pub fn rows(self, pair: Pair) -> Range<usize> {
        match pair {
            Pair::Vertical => 0..self.h,
            Pair::LowRow => 0..self.low_h(),
            Pair::HighRow => self.low_h()..self.h,
        }
    }

    /// Input rectangle of the next level.
    pub fn next(self) -> LevelRect {
        LevelRect {
            w: self.low_w(),
            h: self.low_h(),
        }
    }
}

/// Input rectangles of levels `1..=t`.
pub fn level_rects(width: usize, height: usize, t: usize) -> Vec<LevelRect> {
    let mut out = Vec::with_capacity(t);
    let mut r = LevelRect {
        w: width,
        h: height,
    };
    for _ in 0..t {
        out.push(r);
        r = r.next();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandLabel {
    LL,
    HL,
    LH,
    HH,
}

impl fmt::Display for BandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BandLabel::LL => "LL",
            BandLabel::HL => "HL",
            BandLabel::LH => "LH",
            BandLabel::HH => "HH",
        })
    }
}

/// A coded rectangle of the transformed grid.
///
/// `level` is 0 for the whole-image region of a 0-level transform; the
/// single `LL` region of a `t`-level transform carries `level = t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Region {
    pub level: usize,
    pub label: BandLabel,
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Region {
    #[inline]
    pub fn len(&self) -> usize {
        self.w * self.h
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}_{} @({},{}) {}x{}",
            self.label, self.level, self.x, self.y, self.w, self.h
        )
    }
}

/// The `3t + 1` coded regions: `LL_t` first, then `HL, LH, HH` for levels
/// `t` down to 1. Regions may be empty for very small grids.
pub fn nominal_regions(width: usize, height: usize, t: usize) -> Vec<Region> {
    let rects = level_rects(width, height, t);
    let mut out = Vec::with_capacity(3 * t + 1);
    let top = rects.last().map_or(
        LevelRect {
            w: width,
            h: height,
        },
        |r| r.next(),
    );
    out.push(Region {
        level: t,
        label: BandLabel::LL,
        x: 0,
        y: 0,
        w: top.w,
        h: top.h,
    });
    for (i, r) in rects.iter().enumerate().rev() {
        let level = i + 1;
        let (lw, hw, lh, hh) = (r.low_w(), r.high_w(), r.low_h(), r.high_h());
        out.push(Region {
            level,
            label: BandLabel::HL,
            x: lw,
            y: 0,
            w: hw,
            h: lh,
        });
        out.push(Region {
            level,
            label: BandLabel::LH,
            x: 0,
            y: lh,
            w: lw,
            h: hh,
        });
        out.push(Region {
            level,
            label: BandLabel::HH,
            x: lw,
            y: lh,
            w: hw,
            h: hh,
        });
    }
    out
}

/// Index of a region within [`nominal_regions`] output.
pub fn region_index(t: usize, level: usize, label: BandLabel) -> usize {
    match label {
        BandLabel::LL => 0,
        BandLabel::HL => 1 + 3 * (t - level),
        BandLabel::LH => 2 + 3 * (t - level),
        BandLabel::HH => 3 + 3 * (t - level),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_level_square() {
        let r = nominal_regions(8, 8, 3);
        assert_eq!(r.len(), 10);
        assert_eq!((r[0].w, r[0].h), (1, 1));
        assert_eq!(r[0].label, BandLabel::LL);
        assert_eq!(r[0].level, 3);
    }

    #[test]
    fn zero_levels_is_whole_image() {
        let r = nominal_regions(7, 5, 0);
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].x, r[0].y, r[0].w, r[0].h), (0, 0, 7, 5));
    }

    #[test]
    fn odd_split() {
        let r = nominal_regions(5, 3, 1);
        let dims: Vec<_> = r.iter().map(|r| (r.label, r.w, r.h)).collect();
        assert_eq!(
            dims,
            vec![
                (BandLabel::LL, 3, 2),
                (BandLabel::HL, 2, 2),
                (BandLabel::LH, 3, 1),
                (BandLabel::HH, 2, 1),
            ]
        );
    }

    #[test]
    fn regions_tile_the_grid() {
        for (w, h) in [(1, 1), (2, 3), (13, 7), (64, 64), (257, 131)] {
            for t in 0..6 {
                let regions = nominal_regions(w, h, t);
                assert_eq!(regions.len(), 3 * t + 1);
                let mut cover = vec![0u8; w * h];
                for r in &regions {
                    for y in r.y..r.y + r.h {
                        for x in r.x..r.x + r.w {
                            cover[y * w + x] += 1;
                        }
                    }
                }
                assert!(cover.iter().all(|&c| c == 1), "{w}x{h} t={t}");
                for r in &regions {
                    assert_eq!(regions[region_index(t, r.level, r.label)], *r);
                }
            }
        }
    }

    #[test]
    fn level_rect_sizes_use_ceiling() {
        let rects = level_rects(13, 7, 3);
        let dims: Vec<_> = rects.iter().map(|r| (r.w, r.h)).collect();
        assert_eq!(dims, vec![(13, 7), (7, 4), (4, 2)]);
    }
}
