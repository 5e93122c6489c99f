//! Dense raster images and boolean masks.
//!
//! Samples are `f64` in `[0, 1]`, stored planar: all of channel 0, then
//! channel 1, then channel 2. Within a channel the layout is row-major.
//! Masks mark pixels to fill (`true` = unknown).

use crate::error::Error;

/// Pixel coordinate, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

impl Position {
    pub fn new(row: usize, col: usize) -> Self {
        Position { row, col }
    }
}

/// Offsets of the 8-neighborhood in fixed scan order: NW, N, NE, W, E, SW, S, SE.
pub const NEIGHBOR_OFFSETS_8: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Grayscale or RGB image with planar `f64` samples in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<f64>,
}

impl Raster {
    /// Constant-valued raster. `channels` must be 1 or 3.
    pub fn filled(width: usize, height: usize, channels: usize, value: f64) -> Result<Self, Error> {
        Self::from_samples(width, height, channels, vec![value; width * height * channels])
    }

    /// Wraps planar samples. Length must be `width * height * channels`.
    pub fn from_samples(
        width: usize,
        height: usize,
        channels: usize,
        samples: Vec<f64>,
    ) -> Result<Self, Error> {
        if channels != 1 && channels != 3 {
            return Err(Error::UnsupportedChannels { channels });
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter {
                reason: format!("raster dimensions must be nonzero, got {width}x{height}"),
            });
        }
        if samples.len() != width * height * channels {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "sample buffer length {} does not match {width}x{height}x{channels}",
                    samples.len()
                ),
            });
        }
        Ok(Raster {
            width,
            height,
            channels,
            samples,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    /// Flat index of `(channel, row, col)` in the planar buffer.
    pub fn index(&self, channel: usize, row: usize, col: usize) -> usize {
        debug_assert!(channel < self.channels && row < self.height && col < self.width);
        channel * self.width * self.height + row * self.width + col
    }

    pub fn get(&self, channel: usize, p: Position) -> f64 {
        self.samples[self.index(channel, p.row, p.col)]
    }

    pub fn set(&mut self, channel: usize, p: Position, value: f64) {
        let i = self.index(channel, p.row, p.col);
        self.samples[i] = value;
    }

    /// Borrows one channel plane (row-major, `width * height` samples).
    pub fn plane(&self, channel: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.samples[channel * n..(channel + 1) * n]
    }

    pub fn same_shape(&self, other: &Raster) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.channels == other.channels
    }
}

/// In-bounds subset of the 8-neighborhood of `p`, in NW, N, NE, W, E, SW, S, SE order.
pub fn neighbors8(p: Position, width: usize, height: usize) -> Vec<Position> {
    let mut out = Vec::with_capacity(8);
    for (dr, dc) in NEIGHBOR_OFFSETS_8 {
        let r = p.row as isize + dr;
        let c = p.col as isize + dc;
        if r >= 0 && c >= 0 && (r as usize) < height && (c as usize) < width {
            out.push(Position::new(r as usize, c as usize));
        }
    }
    out
}

/// Boolean pixel mask; `true` marks pixels to be filled.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, Error> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter {
                reason: format!("mask dimensions must be nonzero, got {width}x{height}"),
            });
        }
        if bits.len() != width * height {
            return Err(Error::InvalidParameter {
                reason: format!("mask bit length {} does not match {width}x{height}", bits.len()),
            });
        }
        Ok(Mask {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: usize, height: usize) -> Result<Self, Error> {
        Self::new(width, height, vec![false; width * height])
    }

    /// Interprets a grayscale raster as a mask: sample >= 128/255 means masked.
    pub fn from_raster(r: &Raster) -> Result<Self, Error> {
        if r.channels() != 1 {
            return Err(Error::ChannelMismatch {
                context: "mask raster must be grayscale",
                a: r.channels(),
                b: 1,
            });
        }
        let threshold = 128.0 / 255.0;
        let bits = r.samples().iter().map(|&s| s >= threshold).collect();
        Self::new(r.width(), r.height(), bits)
    }

    /// Renders the mask as a grayscale raster (masked = 1.0) for PGM output.
    pub fn to_raster(&self) -> Raster {
        let samples = self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        Raster::from_samples(self.width, self.height, 1, samples)
            .expect("mask dimensions are valid raster dimensions")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn at(&self, p: Position) -> bool {
        self.bits[p.row * self.width + p.col]
    }

    pub fn set(&mut self, p: Position, masked: bool) {
        self.bits[p.row * self.width + p.col] = masked;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn masked_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|&b| b)
    }

    pub fn same_shape_as(&self, r: &Raster) -> bool {
        self.width == r.width() && self.height == r.height()
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.height).flat_map(move |row| (0..self.width).map(move |col| Position::new(row, col)))
    }
}

/// Number of known (unmasked) in-bounds 8-neighbors of `p`.
pub fn confidence(p: Position, mask: &Mask) -> u8 {
    neighbors8(p, mask.width(), mask.height())
        .iter()
        .filter(|&&q| !mask.at(q))
        .count() as u8
}

/// Masked pixels with at least one known 8-neighbor, sorted by descending
/// confidence; ties keep raster scan order.
pub fn boundary_pixels(mask: &Mask) -> Vec<(Position, u8)> {
    let mut out: Vec<(Position, u8)> = mask
        .positions()
        .filter(|&p| mask.at(p))
        .filter_map(|p| {
            let c = confidence(p, mask);
            (c > 0).then_some((p, c))
        })
        .collect();
    // Stable sort preserves the raster scan order of equal-confidence pixels.
    out.sort_by_key(|&(_, c)| std::cmp::Reverse(c));
    out
}

/// Copy of `r` with every masked pixel set to 0.0 in all channels.
pub fn apply_mask_zero(r: &Raster, mask: &Mask) -> Result<Raster, Error> {
    if !mask.same_shape_as(r) {
        return Err(Error::dims(
            "apply_mask_zero",
            (r.width(), r.height()),
            (mask.width(), mask.height()),
        ));
    }
    let mut out = r.clone();
    let n = r.width() * r.height();
    for (i, &masked) in mask.bits().iter().enumerate() {
        if masked {
            for c in 0..r.channels() {
                out.samples[c * n + i] = 0.0;
            }
        }
    }
    Ok(out)
}

/// Splits an RGB raster into three grayscale rasters; a grayscale input
/// yields a single-element vector.
pub fn split_channels(r: &Raster) -> Vec<Raster> {
    (0..r.channels())
        .map(|c| {
            Raster::from_samples(r.width(), r.height(), 1, r.plane(c).to_vec())
                .expect("plane of a valid raster is a valid raster")
        })
        .collect()
}

/// Reassembles channels split by [`split_channels`]. All inputs must be
/// grayscale with equal dimensions; 1 or 3 channels.
pub fn merge_channels(channels: &[Raster]) -> Result<Raster, Error> {
    let first = channels.first().ok_or(Error::UnsupportedChannels { channels: 0 })?;
    if channels.len() != 1 && channels.len() != 3 {
        return Err(Error::UnsupportedChannels {
            channels: channels.len(),
        });
    }
    let mut samples = Vec::with_capacity(first.samples().len() * channels.len());
    for ch in channels {
        if ch.channels() != 1 {
            return Err(Error::ChannelMismatch {
                context: "merge_channels input",
                a: ch.channels(),
                b: 1,
            });
        }
        if ch.width() != first.width() || ch.height() != first.height() {
            return Err(Error::dims(
                "merge_channels",
                (first.width(), first.height()),
                (ch.width(), ch.height()),
            ));
        }
        samples.extend_from_slice(ch.samples());
    }
    Raster::from_samples(first.width(), first.height(), channels.len(), samples)
}
