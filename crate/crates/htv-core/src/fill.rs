//! Onion-peel fill ordering shared by the TV solver and the nearest-neighbor
//! baseline: repeatedly peel the highest-confidence boundary layer of the
//! unfilled region until nothing is left.

use crate::error::Error;
use crate::raster::{Mask, Position, NEIGHBOR_OFFSETS_8};

/// Tracks which pixels currently hold usable values during a fill.
/// Known pixels start filled; masked pixels become filled as they are
/// assigned.
#[derive(Debug, Clone)]
pub struct FillState {
    width: usize,
    height: usize,
    filled: Vec<bool>,
    unfilled: usize,
}

impl FillState {
    /// Fill state at the start of an inpainting run: exactly the unmasked
    /// pixels are filled.
    pub fn fresh(mask: &Mask) -> Self {
        let filled: Vec<bool> = mask.bits().iter().map(|&m| !m).collect();
        let unfilled = filled.iter().filter(|&&f| !f).count();
        FillState {
            width: mask.width(),
            height: mask.height(),
            filled,
            unfilled,
        }
    }

    /// State in which every pixel is filled (relaxation sweeps).
    pub fn complete(width: usize, height: usize) -> Self {
        FillState {
            width,
            height,
            filled: vec![true; width * height],
            unfilled: 0,
        }
    }

    pub fn is_filled(&self, p: Position) -> bool {
        self.filled[p.row * self.width + p.col]
    }

    fn mark_filled(&mut self, p: Position) {
        let i = p.row * self.width + p.col;
        if !self.filled[i] {
            self.filled[i] = true;
            self.unfilled -= 1;
        }
    }

    pub fn unfilled(&self) -> usize {
        self.unfilled
    }

    /// Number of filled in-bounds 8-neighbors of `p`.
    fn confidence(&self, p: Position) -> u8 {
        let mut n = 0u8;
        for (dr, dc) in NEIGHBOR_OFFSETS_8 {
            let r = p.row as isize + dr;
            let c = p.col as isize + dc;
            if r >= 0
                && c >= 0
                && (r as usize) < self.height
                && (c as usize) < self.width
                && self.filled[r as usize * self.width + c as usize]
            {
                n += 1;
            }
        }
        n
    }

    /// Unfilled pixels adjacent to at least one filled pixel, ordered by
    /// descending confidence with raster-order ties.
    pub fn frontier(&self) -> Vec<(Position, u8)> {
        let mut out = Vec::new();
        for row in 0..self.height {
            for col in 0..self.width {
                let p = Position::new(row, col);
                if self.filled[row * self.width + col] {
                    continue;
                }
                let c = self.confidence(p);
                if c > 0 {
                    out.push((p, c));
                }
            }
        }
        out.sort_by_key(|&(_, c)| std::cmp::Reverse(c));
        out
    }
}

/// Peels the unfilled region layer by layer. For each frontier pixel, in
/// order, `compute` either produces a value (the pixel is written and marked
/// filled immediately, so later pixels in the same pass see it) or defers the
/// pixel to a later pass by returning `None`.
///
/// The frontier is recomputed per pass from a snapshot of the fill state;
/// pixels first exposed mid-pass wait for the next pass. Errors out if a pass
/// makes no progress or the unfilled region has no boundary at all.
pub fn onion_fill<F>(values: &mut [f64], state: &mut FillState, mut compute: F) -> Result<(), Error>
where
    F: FnMut(&[f64], &FillState, Position) -> Option<f64>,
{
    debug_assert_eq!(values.len(), state.width * state.height);
    while state.unfilled() > 0 {
        let frontier = state.frontier();
        if frontier.is_empty() {
            return Err(Error::Unfillable {
                reason: "unfilled region has no known boundary",
            });
        }
        let mut progressed = false;
        for (p, _confidence) in frontier {
            if let Some(v) = compute(values, state, p) {
                values[p.row * state.width + p.col] = v;
                state.mark_filled(p);
                progressed = true;
            }
        }
        if !progressed {
            return Err(Error::Unfillable {
                reason: "fill pass made no progress",
            });
        }
    }
    Ok(())
}
