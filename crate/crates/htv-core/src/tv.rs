//! Single-level total-variation inpainting.
//!
//! Each pixel is repeatedly replaced by a curvature-weighted mean of its
//! axis neighbors plus a fidelity pull toward the observed value (the
//! digital TV filter). Holes are first filled boundary-inward in
//! descending-confidence order, then relaxed by Gauss-Seidel sweeps.
//!
//! The face weights come from gradient magnitudes sampled halfway between
//! pixel centers: the normal component is the directional difference, the
//! tangential component a symmetric four-point average, and an epsilon
//! under the square root keeps flat regions finite.

use crate::error::Error;
pub use crate::fill::FillState;
use crate::fill::onion_fill;
use crate::raster::{Mask, Position, Raster};

/// Axis directions of the four pixel faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    East,
    West,
    North,
    South,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::East,
        Direction::West,
        Direction::North,
        Direction::South,
    ];

    /// (row, col) offset of the neighbor across this face.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::East => (0, 1),
            Direction::West => (0, -1),
            Direction::North => (-1, 0),
            Direction::South => (1, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvParams {
    /// Regularizer inside the gradient magnitude; keeps weights finite in
    /// flat regions. Must be > 0.
    pub epsilon: f64,
    /// Fidelity weight on known pixels; masked pixels always get 0.
    pub lambda: f64,
    /// Convergence threshold on the max per-pixel change of a sweep.
    pub tol: f64,
    /// Relaxation sweep cap.
    pub max_iters: usize,
}

impl Default for TvParams {
    fn default() -> Self {
        TvParams {
            epsilon: 1e-3,
            lambda: 10.0,
            tol: 1e-4,
            max_iters: 500,
        }
    }
}

impl TvParams {
    pub(crate) fn validate(&self) -> Result<(), Error> {
        if self.epsilon <= 0.0 || self.epsilon.is_nan() {
            return Err(Error::InvalidParameter {
                reason: format!("epsilon must be > 0, got {}", self.epsilon),
            });
        }
        if self.lambda < 0.0 || self.lambda.is_nan() {
            return Err(Error::InvalidParameter {
                reason: format!("lambda must be >= 0, got {}", self.lambda),
            });
        }
        if self.tol <= 0.0 || self.tol.is_nan() {
            return Err(Error::InvalidParameter {
                reason: format!("tol must be > 0, got {}", self.tol),
            });
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter {
                reason: "max_iters must be >= 1".into(),
            });
        }
        Ok(())
    }
}

/// Outcome of an iterative solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStats {
    /// Sweeps (or descent steps) actually run.
    pub iterations: usize,
    /// Maximum absolute pixel change of the last sweep.
    pub max_delta: f64,
    /// Whether max_delta dropped below tol within max_iters.
    pub converged: bool,
}

/// Sample with indices clamped to the nearest valid pixel.
fn clamped(u: &[f64], width: usize, height: usize, r: isize, c: isize) -> f64 {
    let r = r.clamp(0, height as isize - 1) as usize;
    let c = c.clamp(0, width as isize - 1) as usize;
    u[r * width + c]
}

/// Gradient magnitude at the face between `p` and its `dir` neighbor:
/// sqrt(normal² + tangential² + ε²), where the tangential part averages
/// four samples around the face midpoint.
///
/// Term order inside each tangential stencil is chosen so that the two
/// pixels sharing a face compute bit-identical magnitudes.
pub(crate) fn face_magnitude_plane(
    u: &[f64],
    width: usize,
    height: usize,
    p: Position,
    dir: Direction,
    epsilon: f64,
) -> f64 {
    let (pr, pc) = (p.row as isize, p.col as isize);
    let s = |dr: isize, dc: isize| clamped(u, width, height, pr + dr, pc + dc);
    let center = s(0, 0);
    let (normal, tangential4) = match dir {
        Direction::East => (s(0, 1) - center, ((s(-1, 1) + s(-1, 0)) - s(1, 0)) - s(1, 1)),
        Direction::West => (s(0, -1) - center, ((s(-1, 0) + s(-1, -1)) - s(1, -1)) - s(1, 0)),
        Direction::North => (s(-1, 0) - center, ((s(0, 1) + s(-1, 1)) - s(0, -1)) - s(-1, -1)),
        Direction::South => (s(1, 0) - center, ((s(1, 1) + s(0, 1)) - s(1, -1)) - s(0, -1)),
    };
    let tangential = tangential4 / 4.0;
    (normal * normal + tangential * tangential + epsilon * epsilon).sqrt()
}

pub fn face_gradient_magnitude(u: &Raster, p: Position, dir: Direction, epsilon: f64) -> f64 {
    debug_assert_eq!(u.channels(), 1);
    face_magnitude_plane(u.plane(0), u.width(), u.height(), p, dir, epsilon)
}

pub(crate) fn face_flux_plane(
    u: &[f64],
    width: usize,
    height: usize,
    p: Position,
    dir: Direction,
    epsilon: f64,
) -> f64 {
    let (dr, dc) = dir.offset();
    let neighbor = clamped(u, width, height, p.row as isize + dr, p.col as isize + dc);
    let center = u[p.row * width + p.col];
    (neighbor - center) / face_magnitude_plane(u, width, height, p, dir, epsilon)
}

/// Outward flux through the `dir` face: directional difference divided by
/// the face gradient magnitude. Antisymmetric across a shared face.
pub fn face_flux(u: &Raster, p: Position, dir: Direction, epsilon: f64) -> f64 {
    debug_assert_eq!(u.channels(), 1);
    face_flux_plane(u.plane(0), u.width(), u.height(), p, dir, epsilon)
}

/// Discrete divergence of the normalized gradient field at `p`: the sum of
/// the four outward face fluxes.
pub fn divergence(u: &Raster, p: Position, epsilon: f64) -> f64 {
    debug_assert_eq!(u.channels(), 1);
    let plane = u.plane(0);
    let (w, h) = (u.width(), u.height());
    let f = |dir| face_flux_plane(plane, w, h, p, dir, epsilon);
    ((f(Direction::East) + f(Direction::West)) + f(Direction::North)) + f(Direction::South)
}

/// Digital TV filter update, shared by both phases. `filled = None` means
/// every pixel carries a value. Returns `None` when no neighbor
/// participates and the data term is off (isolated pixel; caller defers).
#[allow(clippy::too_many_arguments)]
fn update_value(
    u: &[f64],
    width: usize,
    height: usize,
    u0: &[f64],
    mask: &Mask,
    filled: Option<&FillState>,
    p: Position,
    params: &TvParams,
) -> Option<f64> {
    let mut weight_sum = 0.0;
    let mut weighted_values = 0.0;
    let mut participating = false;
    for dir in Direction::ALL {
        let (dr, dc) = dir.offset();
        let qr = (p.row as isize + dr).clamp(0, height as isize - 1) as usize;
        let qc = (p.col as isize + dc).clamp(0, width as isize - 1) as usize;
        if let Some(state) = filled {
            if !state.is_filled(Position::new(qr, qc)) {
                continue;
            }
        }
        let w = 1.0 / face_magnitude_plane(u, width, height, p, dir, params.epsilon);
        weight_sum += w;
        weighted_values += w * u[qr * width + qc];
        participating = true;
    }
    let lambda = if mask.at(p) { 0.0 } else { params.lambda };
    if !participating && lambda == 0.0 {
        return None;
    }
    let i = p.row * width + p.col;
    Some(((weighted_values + lambda * u0[i]) / (weight_sum + lambda)).clamp(0.0, 1.0))
}

/// One digital TV filter evaluation at `p`. Neighbors not yet filled per
/// `filled` are excluded from the sums; `None` signals an isolated pixel
/// (no participating neighbor, no data term) that must be deferred.
pub fn tv_update_pixel(
    u: &Raster,
    u0: &Raster,
    mask: &Mask,
    filled: &FillState,
    p: Position,
    params: &TvParams,
) -> Option<f64> {
    debug_assert_eq!(u.channels(), 1);
    update_value(
        u.plane(0),
        u.width(),
        u.height(),
        u0.plane(0),
        mask,
        Some(filled),
        p,
        params,
    )
}

/// Fills the masked region of a grayscale raster by TV diffusion.
///
/// Phase 1 onion-fills the hole boundary-inward in descending-confidence
/// order; phase 2 runs Gauss-Seidel sweeps in raster order until the max
/// per-sweep change drops below `tol` or `max_iters` is hit. Known pixels
/// pass through bit-exactly; initial values of masked pixels are ignored.
pub fn tv_inpaint(u0: &Raster, mask: &Mask, params: &TvParams) -> Result<(Raster, SweepStats), Error> {
    params.validate()?;
    if u0.channels() != 1 {
        return Err(Error::UnsupportedChannels {
            channels: u0.channels(),
        });
    }
    if !mask.same_shape_as(u0) {
        return Err(Error::dims(
            "tv_inpaint",
            (u0.width(), u0.height()),
            (mask.width(), mask.height()),
        ));
    }
    let (width, height) = (u0.width(), u0.height());
    let u0_plane = u0.plane(0);
    let mut values = u0_plane.to_vec();
    // Deterministic placeholder so stale masked values cannot leak into the
    // stencil weights during phase 1.
    for (i, &masked) in mask.bits().iter().enumerate() {
        if masked {
            values[i] = 0.0;
        }
    }

    let mut state = FillState::fresh(mask);
    onion_fill(&mut values, &mut state, |vals, st, p| {
        update_value(vals, width, height, u0_plane, mask, Some(st), p, params)
    })?;

    let mut stats = SweepStats {
        iterations: 0,
        max_delta: 0.0,
        converged: false,
    };
    for _ in 0..params.max_iters {
        stats.iterations += 1;
        let mut max_delta = 0.0f64;
        for row in 0..height {
            for col in 0..width {
                let p = Position::new(row, col);
                if !mask.at(p) {
                    continue;
                }
                let v = update_value(&values, width, height, u0_plane, mask, None, p, params)
                    .expect("every pixel participates once the grid is filled");
                let i = row * width + col;
                let delta = (v - values[i]).abs();
                values[i] = v;
                if delta > max_delta {
                    max_delta = delta;
                }
            }
        }
        stats.max_delta = max_delta;
        if max_delta < params.tol {
            stats.converged = true;
            break;
        }
    }

    Ok((Raster::from_samples(width, height, 1, values)?, stats))
}
