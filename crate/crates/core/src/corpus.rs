//! Seeded synthetic test images.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::SampleGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Photo,
    NonPhoto,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Photo => "photo",
            Label::NonPhoto => "nonphoto",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "photo" => Ok(Label::Photo),
            "nonphoto" => Ok(Label::NonPhoto),
            _ => Err(format!("unknown label '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Flat windows, bars and glyph strokes on a dark desktop.
    Screen,
    /// Dense bright text on a black terminal.
    Text,
    Gradient,
    /// Smooth shading with texture and sensor-like noise.
    PhotoLike,
    Noise,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Screen,
        Kind::Text,
        Kind::Gradient,
        Kind::PhotoLike,
        Kind::Noise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Screen => "screen",
            Kind::Text => "text",
            Kind::Gradient => "gradient",
            Kind::PhotoLike => "photo",
            Kind::Noise => "noise",
        }
    }

    pub fn label(self) -> Label {
        match self {
            Kind::Screen | Kind::Text | Kind::Gradient => Label::NonPhoto,
            Kind::PhotoLike | Kind::Noise => Label::Photo,
        }
    }

    pub fn generate(self, width: usize, height: usize, bit_depth: u8, seed: u64) -> SampleGrid {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let max = (1i64 << bit_depth) - 1;
        // draw in 8-bit units, then scale to the target depth
        let g8 = match self {
            Kind::Screen => screen(width, height, &mut rng),
            Kind::Text => text(width, height, &mut rng),
            Kind::Gradient => gradient(width, height, &mut rng),
            Kind::PhotoLike => photo(width, height, &mut rng),
            Kind::Noise => SampleGrid::from_fn(width, height, 8, |_, _| rng.gen_range(0..256)),
        };
        if bit_depth == 8 {
            return g8;
        }
        let samples = g8
            .samples()
            .iter()
            .map(|&v| ((v as i64 * max + 127) / 255) as i32)
            .collect();
        SampleGrid::new(width, height, bit_depth, samples)
    }
}

fn screen(w: usize, h: usize, rng: &mut ChaCha8Rng) -> SampleGrid {
    let mut g = SampleGrid::filled(w, h, 8, rng.gen_range(0..24));
    let fill = |g: &mut SampleGrid, x0: usize, y0: usize, x1: usize, y1: usize, v: i32| {
        for y in y0..y1.min(h) {
            for x in x0..x1.min(w) {
                g.set(x, y, v);
            }
        }
    };
    // taskbar
    let bar = (h / 12).max(1);
    fill(&mut g, 0, h - bar, w, h, rng.gen_range(30..70));
    let windows = rng.gen_range(1..=3);
    for _ in 0..windows {
        let ww = rng.gen_range(w / 3..=w * 3 / 4).max(1);
        let wh = rng.gen_range(h / 4..=h * 3 / 5).max(1);
        let x0 = rng.gen_range(0..=w - ww);
        let y0 = rng.gen_range(0..=(h - bar).saturating_sub(wh));
        let body = rng.gen_range(0..40);
        fill(&mut g, x0, y0, x0 + ww, y0 + wh, body);
        let title = (wh / 8).clamp(1, 6);
        fill(&mut g, x0, y0, x0 + ww, y0 + title, rng.gen_range(60..140));
        // glyph rows
        let ink = rng.gen_range(180..256);
        let mut y = y0 + title + 3;
        while y + 6 < y0 + wh {
            let mut x = x0 + 3;
            while x + 5 < x0 + ww {
                if rng.gen_bool(0.8) {
                    glyph(&mut g, x, y, ink, rng);
                }
                x += 6;
            }
            y += 9;
        }
    }
    g
}

fn text(w: usize, h: usize, rng: &mut ChaCha8Rng) -> SampleGrid {
    let mut g = SampleGrid::filled(w, h, 8, 0);
    let ink = rng.gen_range(200..256);
    let mut y = 1;
    while y + 6 < h {
        let mut x = 1;
        while x + 4 < w {
            if rng.gen_bool(0.85) {
                glyph(&mut g, x, y, ink, rng);
            }
            x += 5;
        }
        y += 8;
    }
    g
}

/// A 4×6 stroke pattern.
fn glyph(g: &mut SampleGrid, x0: usize, y0: usize, ink: i32, rng: &mut ChaCha8Rng) {
    let shape: u32 = rng.gen();
    for dy in 0..6 {
        for dx in 0..4 {
            let vertical = dx == 0 && shape & 1 != 0 || dx == 3 && shape & 2 != 0;
            let horizontal = (dy == 0 && shape & 4 != 0)
                || (dy == 2 && shape & 8 != 0)
                || (dy == 5 && shape & 16 != 0);
            if vertical || horizontal {
                g.set(x0 + dx, y0 + dy, ink);
            }
        }
    }
}

fn gradient(w: usize, h: usize, rng: &mut ChaCha8Rng) -> SampleGrid {
    let a: f64 = rng.gen_range(-1.0..1.0);
    let b: f64 = rng.gen_range(-1.0..1.0);
    let base: f64 = rng.gen_range(40.0..200.0);
    let span = 100.0 / (w.max(h) as f64);
    SampleGrid::from_fn(w, h, 8, |x, y| {
        (base + span * (a * x as f64 + b * y as f64))
            .round()
            .clamp(0.0, 255.0) as i32
    })
}

fn photo(w: usize, h: usize, rng: &mut ChaCha8Rng) -> SampleGrid {
    let smooth = gradient(w, h, rng);
    let waves: Vec<(f64, f64, f64, f64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(0.02..0.3),
                rng.gen_range(0.02..0.3),
                rng.gen_range(0.0..6.3),
                rng.gen_range(4.0..20.0),
            )
        })
        .collect();
    SampleGrid::from_fn(w, h, 8, |x, y| {
        let texture: f64 = waves
            .iter()
            .map(|&(fx, fy, ph, amp)| amp * (fx * x as f64 + fy * y as f64 + ph).sin())
            .sum();
        let noise = rng.gen_range(-6.0..6.0) + rng.gen_range(-6.0..6.0);
        (smooth.get(x, y) as f64 + texture + noise)
            .round()
            .clamp(0.0, 255.0) as i32
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusImage {
    pub name: String,
    pub kind: Kind,
    pub image: SampleGrid,
}

/// `per_kind` images of every kind; image `i` of a kind uses seed
/// `seed + i` mixed with the kind.
pub fn generate(seed: u64, per_kind: usize, width: usize, height: usize) -> Vec<CorpusImage> {
    let mut out = Vec::with_capacity(per_kind * Kind::ALL.len());
    for (k, kind) in Kind::ALL.into_iter().enumerate() {
        for i in 0..per_kind {
            let s = seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((k as u64) << 32 | i as u64);
            out.push(CorpusImage {
                name: format!("{}-{i:02}", kind.name()),
                kind,
                image: kind.generate(width, height, 8, s),
            });
        }
    }
    out
}
