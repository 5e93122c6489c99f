//! Coarse-to-fine hierarchical TV inpainting.
//!
//! Plain TV diffusion degrades as holes grow, so large masks are solved on
//! a pyramid: downsample image and mask until the hole's half-thickness
//! drops below a threshold, inpaint the coarsest level, then walk back up,
//! seeding each finer level with replicated parent values and re-solving
//! only the rim the copy-back could not cover.

use crate::error::Error;
use crate::raster::{Mask, Position, Raster};
use crate::tv::{tv_inpaint, SweepStats, TvParams};
use std::collections::VecDeque;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct PyramidLevel {
    pub raster: Raster,
    pub mask: Mask,
    /// 0 = original resolution, increasing toward coarser levels.
    pub level: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierParams {
    /// Downsample until mask_size is at most this.
    pub threshold_t: usize,
    /// Hard cap on pyramid depth.
    pub max_levels: usize,
    /// Solver parameters used at every level.
    pub tv: TvParams,
}

impl Default for HierParams {
    fn default() -> Self {
        HierParams {
            threshold_t: 4,
            max_levels: 8,
            tv: TvParams::default(),
        }
    }
}

impl HierParams {
    fn validate(&self) -> Result<(), Error> {
        if self.threshold_t == 0 {
            return Err(Error::InvalidParameter {
                reason: "threshold_t must be >= 1".into(),
            });
        }
        if self.max_levels == 0 {
            return Err(Error::InvalidParameter {
                reason: "max_levels must be >= 1".into(),
            });
        }
        self.tv.validate()
    }
}

/// Pyramid built fine to coarse. `capped` is set when a depth or dimension
/// cap stopped the descent before the mask shrank below the threshold.
#[derive(Debug, Clone)]
pub struct Pyramid {
    pub levels: Vec<PyramidLevel>,
    pub capped: bool,
}

/// Solver outcome for one pyramid level, coarsest first.
#[derive(Debug, Clone, Copy)]
pub struct LevelRun {
    pub level: usize,
    pub stats: SweepStats,
}

/// Per-level solver stats for each channel, plus the pyramid cap flag.
#[derive(Debug, Clone)]
pub struct HierReport {
    pub capped: bool,
    pub channels: Vec<Vec<LevelRun>>,
}

/// Hole half-thickness: the maximum over masked pixels of the Chebyshev
/// distance to the nearest known pixel (multi-source BFS over the
/// 8-neighborhood). 0 for an empty mask; max(width, height) when no known
/// pixel exists.
pub fn mask_size(m: &Mask) -> usize {
    let (w, h) = (m.width(), m.height());
    if m.masked_count() == 0 {
        return 0;
    }
    if m.is_full() {
        return w.max(h);
    }
    let mut dist = vec![usize::MAX; w * h];
    let mut queue = VecDeque::new();
    for (i, &masked) in m.bits().iter().enumerate() {
        if !masked {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    // Unit steps over 8-connectivity measure Chebyshev distance.
    while let Some(i) = queue.pop_front() {
        let (r, c) = (i / w, i % w);
        let d = dist[i] + 1;
        for q in crate::raster::neighbors8(Position::new(r, c), w, h) {
            let qi = q.row * w + q.col;
            if dist[qi] == usize::MAX {
                dist[qi] = d;
                queue.push_back(qi);
            }
        }
    }
    m.bits()
        .iter()
        .enumerate()
        .filter(|(_, &masked)| masked)
        .map(|(i, _)| dist[i])
        .max()
        .unwrap_or(0)
}

/// Halves both dimensions (rounding up). A coarse pixel is masked iff all
/// fine pixels it covers are masked; otherwise it averages the known ones.
pub fn downsample(r: &Raster, m: &Mask) -> (Raster, Mask) {
    assert_eq!(r.channels(), 1, "downsample operates on one channel");
    assert!(m.same_shape_as(r), "raster and mask dimensions must match");
    let (w, h) = (r.width(), r.height());
    let (cw, ch) = (w.div_ceil(2), h.div_ceil(2));
    let src = r.plane(0);
    let mut values = vec![0.0; cw * ch];
    let mut bits = vec![false; cw * ch];
    for cr in 0..ch {
        for cc in 0..cw {
            let mut sum = 0.0;
            let mut known = 0usize;
            for fr in 2 * cr..(2 * cr + 2).min(h) {
                for fc in 2 * cc..(2 * cc + 2).min(w) {
                    if !m.at(Position::new(fr, fc)) {
                        sum += src[fr * w + fc];
                        known += 1;
                    }
                }
            }
            let i = cr * cw + cc;
            if known == 0 {
                bits[i] = true;
            } else {
                values[i] = sum / known as f64;
            }
        }
    }
    (
        Raster::from_samples(cw, ch, 1, values).expect("halved dimensions stay valid"),
        Mask::new(cw, ch, bits).expect("halved dimensions stay valid"),
    )
}

/// Builds the level stack, downsampling while the hole is thicker than the
/// threshold and depth/dimension caps allow.
pub fn build_pyramid(u0: &Raster, m: &Mask, params: &HierParams) -> Result<Pyramid, Error> {
    params.validate()?;
    if u0.channels() != 1 {
        return Err(Error::UnsupportedChannels {
            channels: u0.channels(),
        });
    }
    if !m.same_shape_as(u0) {
        return Err(Error::dims(
            "build_pyramid",
            (u0.width(), u0.height()),
            (m.width(), m.height()),
        ));
    }
    if m.is_full() {
        return Err(Error::Unfillable {
            reason: "mask covers the entire raster",
        });
    }
    let mut levels = vec![PyramidLevel {
        raster: u0.clone(),
        mask: m.clone(),
        level: 0,
    }];
    let mut capped = false;
    loop {
        let current = levels.last().expect("at least one level");
        if mask_size(&current.mask) <= params.threshold_t {
            break;
        }
        if levels.len() >= params.max_levels
            || current.raster.width() < 2
            || current.raster.height() < 2
        {
            capped = true;
            break;
        }
        let (raster, mask) = downsample(&current.raster, &current.mask);
        levels.push(PyramidLevel {
            raster,
            mask,
            level: levels.len(),
        });
    }
    Ok(Pyramid { levels, capped })
}

/// Seeds a fine level from its inpainted coarse level: every masked fine
/// pixel whose parent was masked (hence solved) takes the parent value and
/// becomes known; the rest stay masked for the fine-level solve.
pub fn copy_back(fine: &PyramidLevel, coarse_inpainted: &Raster) -> Result<(Raster, Mask), Error> {
    let (w, h) = (fine.raster.width(), fine.raster.height());
    let (cw, ch) = (w.div_ceil(2), h.div_ceil(2));
    if coarse_inpainted.width() != cw || coarse_inpainted.height() != ch {
        return Err(Error::dims(
            "copy_back",
            (cw, ch),
            (coarse_inpainted.width(), coarse_inpainted.height()),
        ));
    }
    let parent_masked = |pr: usize, pc: usize| -> bool {
        for fr in 2 * pr..(2 * pr + 2).min(h) {
            for fc in 2 * pc..(2 * pc + 2).min(w) {
                if !fine.mask.at(Position::new(fr, fc)) {
                    return false;
                }
            }
        }
        true
    };
    let mut out = fine.raster.clone();
    let mut mask = fine.mask.clone();
    for p in fine.mask.positions() {
        if !fine.mask.at(p) {
            continue;
        }
        let (pr, pc) = (p.row / 2, p.col / 2);
        if parent_masked(pr, pc) {
            out.set(0, p, coarse_inpainted.get(0, Position::new(pr, pc)));
            mask.set(p, false);
        }
    }
    Ok((out, mask))
}

fn solve_channel(
    u0: &Raster,
    m: &Mask,
    params: &HierParams,
) -> Result<(Raster, Vec<LevelRun>, bool), Error> {
    let pyramid = build_pyramid(u0, m, params)?;
    let coarsest = pyramid.levels.last().expect("at least one level");
    let mut runs = Vec::with_capacity(pyramid.levels.len());
    let (mut solved, stats) = tv_inpaint(&coarsest.raster, &coarsest.mask, &params.tv)?;
    runs.push(LevelRun {
        level: coarsest.level,
        stats,
    });
    for fine in pyramid.levels.iter().rev().skip(1) {
        let (seeded, residual) = copy_back(fine, &solved)?;
        let (next, stats) = tv_inpaint(&seeded, &residual, &params.tv)?;
        runs.push(LevelRun {
            level: fine.level,
            stats,
        });
        solved = next;
    }
    Ok((solved, runs, pyramid.capped))
}

/// Full coarse-to-fine driver. RGB rasters are processed per channel
/// (concurrently with the `parallel` feature) and merged; known level-0
/// pixels pass through bit-exactly.
pub fn hierarchical_tv_inpaint(
    u0: &Raster,
    m: &Mask,
    params: &HierParams,
) -> Result<(Raster, HierReport), Error> {
    params.validate()?;
    if !m.same_shape_as(u0) {
        return Err(Error::dims(
            "hierarchical_tv_inpaint",
            (u0.width(), u0.height()),
            (m.width(), m.height()),
        ));
    }
    let channels = crate::raster::split_channels(u0);

    #[cfg(feature = "parallel")]
    let solved: Result<Vec<_>, Error> = channels
        .par_iter()
        .map(|ch| solve_channel(ch, m, params))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let solved: Result<Vec<_>, Error> = channels
        .iter()
        .map(|ch| solve_channel(ch, m, params))
        .collect();
    let solved = solved?;

    let capped = solved.first().map(|(_, _, c)| *c).unwrap_or(false);
    let planes: Vec<Raster> = solved.iter().map(|(r, _, _)| r.clone()).collect();
    let report = HierReport {
        capped,
        channels: solved.into_iter().map(|(_, runs, _)| runs).collect(),
    };
    Ok((crate::raster::merge_channels(&planes)?, report))
}
