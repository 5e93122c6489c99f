//! Seeded synthetic mask generators: one rectangle, four disjoint
//! rectangles, or a three-pixel-wide scratch polyline, with optional bias
//! toward the canvas border.

use clap::ValueEnum;
use htv_core::raster::{Mask, NEIGHBOR_OFFSETS_8};
use htv_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    /// One axis-aligned rectangle.
    Rect,
    /// Four disjoint rectangles sharing the area budget.
    #[value(name = "multi_rect", alias = "multi-rect")]
    MultiRect,
    /// A three-pixel-wide random polyline.
    Scratch,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Rect => "rect",
            Shape::MultiRect => "multi_rect",
            Shape::Scratch => "scratch",
        }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Placement {
    /// Anywhere on the canvas with equal probability.
    #[value(name = "uniform_random", alias = "uniform-random")]
    UniformRandom,
    /// Border-hugging: distance to the nearer edge is the min of two
    /// uniform draws.
    #[value(name = "edge_biased", alias = "edge-biased")]
    EdgeBiased,
}

impl Placement {
    pub fn name(self) -> &'static str {
        match self {
            Placement::UniformRandom => "uniform_random",
            Placement::EdgeBiased => "edge_biased",
        }
    }
}

impl std::fmt::Display for Placement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct MaskSpec {
    pub shape: Shape,
    pub area_pct: f64,
    pub placement: Placement,
    pub seed: u64,
}

impl MaskSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.area_pct.is_finite() || self.area_pct <= 0.0 || self.area_pct > 50.0 {
            return Err(Error::InvalidParameter {
                reason: format!("area_pct must be in (0, 50], got {}", self.area_pct),
            });
        }
        Ok(())
    }
}

/// SplitMix64 finalizer; spreads low-entropy seeds over the whole state
/// space before they reach the stream cipher.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generates a mask for a `width` x `height` canvas. Deterministic under the
/// spec; the realized area lands within 10% relative of the target or the
/// spec is rejected as infeasible. Never returns a full mask.
pub fn gen_mask(width: usize, height: usize, spec: &MaskSpec) -> Result<Mask, Error> {
    spec.validate()?;
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter {
            reason: format!("mask dimensions {width}x{height} must be nonzero"),
        });
    }
    let total = width * height;
    let target = ((spec.area_pct / 100.0) * total as f64).round() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(spec.seed));
    // Each attempt consumes the stream deterministically, so a rejected
    // candidate just advances to the next one.
    for _ in 0..64 {
        let mut bits = vec![false; total];
        let drawn = match spec.shape {
            Shape::Rect => draw_rect(&mut bits, width, height, target, &mut rng, spec.placement),
            Shape::MultiRect => {
                draw_multi_rect(&mut bits, width, height, target, &mut rng, spec.placement)
            }
            Shape::Scratch => {
                draw_scratch(&mut bits, width, height, target, &mut rng, spec.placement)
            }
        };
        if !drawn {
            continue;
        }
        let count = bits.iter().filter(|&&b| b).count();
        if count == 0 || count >= total {
            continue;
        }
        if (count as f64 - target as f64).abs() <= 0.10 * target as f64 {
            return Mask::new(width, height, bits);
        }
    }
    Err(Error::InvalidParameter {
        reason: format!(
            "no {} mask within 10% of {}% fits a {width}x{height} canvas",
            spec.shape.name(),
            spec.area_pct
        ),
    })
}

/// Coordinate in `0..=max` under the placement distribution.
fn coord<R: Rng>(rng: &mut R, max: usize, placement: Placement) -> usize {
    match placement {
        Placement::UniformRandom => rng.random_range(0..=max),
        Placement::EdgeBiased => {
            // Bias the distance to the nearer end, then pick the end;
            // biasing the coordinate itself and mirroring would cancel out
            // to a uniform border distance.
            let half = max / 2;
            let d = rng.random_range(0..=half).min(rng.random_range(0..=half));
            if rng.random_bool(0.5) {
                d
            } else {
                max - d
            }
        }
    }
}

/// Rectangle dimensions of roughly `target` pixels with a random aspect.
fn rect_dims<R: Rng>(rng: &mut R, target: usize, width: usize, height: usize) -> (usize, usize) {
    let aspect = (rng.random::<f64>() * 2.0 - 1.0) * 2.0f64.ln();
    let rh_min = target.div_ceil(width).max(1);
    let rh = ((target as f64 * aspect.exp()).sqrt().round() as usize).clamp(rh_min, height);
    let rw = ((target as f64 / rh as f64).round() as usize).clamp(1, width);
    (rw, rh)
}

fn stamp_rect(bits: &mut [bool], width: usize, r0: usize, c0: usize, rh: usize, rw: usize) {
    for r in r0..r0 + rh {
        for c in c0..c0 + rw {
            bits[r * width + c] = true;
        }
    }
}

fn draw_rect<R: Rng>(
    bits: &mut [bool],
    width: usize,
    height: usize,
    target: usize,
    rng: &mut R,
    placement: Placement,
) -> bool {
    if target == 0 {
        return false;
    }
    let (rw, rh) = rect_dims(rng, target, width, height);
    let r0 = coord(rng, height - rh, placement);
    let c0 = coord(rng, width - rw, placement);
    stamp_rect(bits, width, r0, c0, rh, rw);
    true
}

fn draw_multi_rect<R: Rng>(
    bits: &mut [bool],
    width: usize,
    height: usize,
    target: usize,
    rng: &mut R,
    placement: Placement,
) -> bool {
    if target < 4 {
        return false;
    }
    // r0, c0, rh, rw of every placed rectangle.
    let mut placed: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(4);
    for part in 0..4 {
        let share = target / 4 + usize::from(part < target % 4);
        let mut ok = false;
        for _ in 0..48 {
            let (rw, rh) = rect_dims(rng, share, width, height);
            let r0 = coord(rng, height - rh, placement);
            let c0 = coord(rng, width - rw, placement);
            // Disjoint with a 1 pixel gap, so the four stay separate
            // components even under 8-connectivity.
            let clear = placed.iter().all(|&(pr, pc, ph, pw)| {
                r0 + rh < pr || pr + ph < r0 || c0 + rw < pc || pc + pw < c0
            });
            if clear {
                stamp_rect(bits, width, r0, c0, rh, rw);
                placed.push((r0, c0, rh, rw));
                ok = true;
                break;
            }
        }
        if !ok {
            return false;
        }
    }
    true
}

fn draw_scratch<R: Rng>(
    bits: &mut [bool],
    width: usize,
    height: usize,
    target: usize,
    rng: &mut R,
    placement: Placement,
) -> bool {
    if width < 3 || height < 3 || target < 9 {
        return false;
    }
    // The spine stays one pixel inside the canvas so every 3x3 stamp lands
    // whole: the scratch is 3 wide everywhere and trivially 8-connected.
    let mut count = 0usize;
    let stamp = |r: usize, c: usize, bits: &mut [bool], count: &mut usize| {
        for rr in r - 1..=r + 1 {
            for cc in c - 1..=c + 1 {
                let i = rr * width + cc;
                if !bits[i] {
                    bits[i] = true;
                    *count += 1;
                }
            }
        }
    };
    let mut r = 1 + coord(rng, height - 3, placement);
    let mut c = 1 + coord(rng, width - 3, placement);
    stamp(r, c, bits, &mut count);
    let mut dir = rng.random_range(0..NEIGHBOR_OFFSETS_8.len());
    // One step adds at most 5 fresh pixels, so stopping 2 short of the
    // target keeps the realized count within a few pixels of it.
    let stop = target.saturating_sub(2);
    let mut budget = 16 * target + 64;
    while count < stop && budget > 0 {
        budget -= 1;
        if rng.random_bool(0.25) {
            dir = rng.random_range(0..NEIGHBOR_OFFSETS_8.len());
        }
        let (dr, dc) = NEIGHBOR_OFFSETS_8[dir];
        let nr = (r as isize + dr).clamp(1, height as isize - 2) as usize;
        let nc = (c as isize + dc).clamp(1, width as isize - 2) as usize;
        if nr == r && nc == c {
            dir = rng.random_range(0..NEIGHBOR_OFFSETS_8.len());
            continue;
        }
        r = nr;
        c = nc;
        stamp(r, c, bits, &mut count);
    }
    count >= stop
}
