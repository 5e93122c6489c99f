//! Sobolev gradient descent: steepest descent on the Dirichlet smoothness
//! energy, with the raw gradient smoothed by a few Jacobi iterations of
//! (I - mu*laplacian) before each step. The smoothing trades raw descent
//! speed for updates that stay in a smoother function class.

use crate::error::Error;
use crate::raster::{Mask, Raster};
use crate::tv::SweepStats;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Jacobi iterations per smoothing solve; fixed for determinism.
const JACOBI_ITERS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevParams {
    /// Descent step size.
    pub step: f64,
    /// Gradient-smoothing weight; 0 degenerates to plain gradient descent.
    pub mu: f64,
    /// Convergence threshold on the max masked-pixel change per step.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SobolevParams {
    fn default() -> Self {
        SobolevParams {
            step: 0.1,
            mu: 1.0,
            tol: 1e-4,
            max_iters: 500,
        }
    }
}

impl SobolevParams {
    fn validate(&self) -> Result<(), Error> {
        if self.step <= 0.0 || self.step.is_nan() {
            return Err(Error::InvalidParameter {
                reason: format!("step must be > 0, got {}", self.step),
            });
        }
        if self.mu < 0.0 || self.mu.is_nan() {
            return Err(Error::InvalidParameter {
                reason: format!("mu must be >= 0, got {}", self.mu),
            });
        }
        if self.tol <= 0.0 || self.tol.is_nan() {
            return Err(Error::InvalidParameter {
                reason: format!("tol must be > 0, got {}", self.tol),
            });
        }
        Ok(())
    }
}

/// Vertical central difference 0.5*(u[i+1,j] - u[i-1,j]), borders clamped.
pub fn d1(u: &Raster) -> Vec<f64> {
    debug_assert_eq!(u.channels(), 1);
    let (w, h) = (u.width(), u.height());
    let s = u.plane(0);
    let mut out = vec![0.0; w * h];
    for r in 0..h {
        let up = r.saturating_sub(1);
        let down = (r + 1).min(h - 1);
        for c in 0..w {
            out[r * w + c] = 0.5 * (s[down * w + c] - s[up * w + c]);
        }
    }
    out
}

/// Horizontal central difference 0.5*(u[i,j+1] - u[i,j-1]), borders clamped.
pub fn d2(u: &Raster) -> Vec<f64> {
    debug_assert_eq!(u.channels(), 1);
    let (w, h) = (u.width(), u.height());
    let s = u.plane(0);
    let mut out = vec![0.0; w * h];
    for r in 0..h {
        for c in 0..w {
            let left = c.saturating_sub(1);
            let right = (c + 1).min(w - 1);
            out[r * w + c] = 0.5 * (s[r * w + right] - s[r * w + left]);
        }
    }
    out
}

/// Axis neighbors inside the grid; clamped out-of-bounds indices fold onto
/// the pixel itself and drop out of all difference stencils.
fn for_in_bounds_neighbors(width: usize, height: usize, r: usize, c: usize, mut f: impl FnMut(usize)) {
    if r > 0 {
        f((r - 1) * width + c);
    }
    if r + 1 < height {
        f((r + 1) * width + c);
    }
    if c > 0 {
        f(r * width + c - 1);
    }
    if c + 1 < width {
        f(r * width + c + 1);
    }
}

fn gradient_row(src: &[f64], out_row: &mut [f64], r: usize, width: usize, height: usize) {
    for c in 0..width {
        let center = src[r * width + c];
        let mut acc = 0.0;
        let mut degree = 0.0;
        for_in_bounds_neighbors(width, height, r, c, |q| {
            acc += src[q];
            degree += 1.0;
        });
        out_row[c] = degree * center - acc;
    }
}

fn jacobi_row(
    g: &[f64],
    prev: &[f64],
    out_row: &mut [f64],
    r: usize,
    width: usize,
    height: usize,
    mu: f64,
) {
    for c in 0..width {
        let mut acc = 0.0;
        let mut degree = 0.0;
        for_in_bounds_neighbors(width, height, r, c, |q| {
            acc += prev[q];
            degree += 1.0;
        });
        out_row[c] = (g[r * width + c] + mu * acc) / (1.0 + mu * degree);
    }
}

fn map_rows(out: &mut [f64], width: usize, f: impl Fn(usize, &mut [f64]) + Sync + Send) {
    #[cfg(feature = "parallel")]
    {
        out.par_chunks_mut(width)
            .enumerate()
            .for_each(|(r, row)| f(r, row));
    }
    #[cfg(not(feature = "parallel"))]
    {
        out.chunks_mut(width).enumerate().for_each(|(r, row)| f(r, row));
    }
}

/// Gradient of the Dirichlet energy: g = -laplacian(u) with the five-point
/// stencil and clamped borders (equivalently, the 4-neighbor graph
/// Laplacian applied to u).
pub fn energy_gradient(u: &Raster) -> Vec<f64> {
    debug_assert_eq!(u.channels(), 1);
    let (w, h) = (u.width(), u.height());
    let src = u.plane(0);
    let mut g = vec![0.0; w * h];
    map_rows(&mut g, w, |r, row| gradient_row(src, row, r, w, h));
    g
}

/// Dirichlet smoothness energy E(u) = 0.5 * sum of squared forward
/// differences over in-bounds grid edges. [`energy_gradient`] is its exact
/// gradient.
pub fn dirichlet_energy(u: &Raster) -> f64 {
    debug_assert_eq!(u.channels(), 1);
    let (w, h) = (u.width(), u.height());
    let s = u.plane(0);
    let mut e = 0.0;
    for r in 0..h {
        for c in 0..w {
            let v = s[r * w + c];
            if r + 1 < h {
                let d = s[(r + 1) * w + c] - v;
                e += d * d;
            }
            if c + 1 < w {
                let d = s[r * w + c + 1] - v;
                e += d * d;
            }
        }
    }
    0.5 * e
}

fn smooth_gradient(g: &[f64], width: usize, height: usize, mu: f64) -> Vec<f64> {
    let mut s = vec![0.0; g.len()];
    if mu == 0.0 {
        s.copy_from_slice(g);
        return s;
    }
    let mut next = vec![0.0; g.len()];
    for _ in 0..JACOBI_ITERS {
        map_rows(&mut next, width, |r, row| {
            jacobi_row(g, &s, row, r, width, height, mu)
        });
        std::mem::swap(&mut s, &mut next);
    }
    s
}

fn gradient_step(u: &Raster, u0: &Raster, mask: &Mask, params: &SobolevParams) -> Raster {
    let (w, h) = (u.width(), u.height());
    let g = energy_gradient(u);
    let s = smooth_gradient(&g, w, h, params.mu);
    let mut out = u.plane(0).to_vec();
    let u0_plane = u0.plane(0);
    for (i, &masked) in mask.bits().iter().enumerate() {
        if masked {
            out[i] = (out[i] - params.step * s[i]).clamp(0.0, 1.0);
        } else {
            out[i] = u0_plane[i];
        }
    }
    Raster::from_samples(w, h, 1, out).expect("step preserves dimensions")
}

/// One preconditioned descent step: masked pixels move by
/// -step * (I - mu*laplacian)^-1 g (10 Jacobi iterations approximate the
/// solve), clamped to [0,1]; known pixels are restored from `u0`.
pub fn sobolev_gradient_step(u: &Raster, u0: &Raster, mask: &Mask, params: &SobolevParams) -> Raster {
    debug_assert_eq!(u.channels(), 1);
    gradient_step(u, u0, mask, params)
}

/// Always-sequential [`sobolev_gradient_step`], for comparison benchmarks.
pub fn sobolev_gradient_step_seq(
    u: &Raster,
    u0: &Raster,
    mask: &Mask,
    params: &SobolevParams,
) -> Raster {
    let (w, h) = (u.width(), u.height());
    let src = u.plane(0);
    let mut g = vec![0.0; w * h];
    g.chunks_mut(w)
        .enumerate()
        .for_each(|(r, row)| gradient_row(src, row, r, w, h));
    let mut s = vec![0.0; w * h];
    if params.mu == 0.0 {
        s.copy_from_slice(&g);
    } else {
        let mut next = vec![0.0; w * h];
        for _ in 0..JACOBI_ITERS {
            next.chunks_mut(w)
                .enumerate()
                .for_each(|(r, row)| jacobi_row(&g, &s, row, r, w, h, params.mu));
            std::mem::swap(&mut s, &mut next);
        }
    }
    let mut out = src.to_vec();
    let u0_plane = u0.plane(0);
    for (i, &masked) in mask.bits().iter().enumerate() {
        if masked {
            out[i] = (out[i] - params.step * s[i]).clamp(0.0, 1.0);
        } else {
            out[i] = u0_plane[i];
        }
    }
    Raster::from_samples(w, h, 1, out).expect("step preserves dimensions")
}

/// Row-parallel [`sobolev_gradient_step`], for comparison benchmarks.
#[cfg(feature = "parallel")]
pub fn sobolev_gradient_step_par(
    u: &Raster,
    u0: &Raster,
    mask: &Mask,
    params: &SobolevParams,
) -> Raster {
    gradient_step(u, u0, mask, params)
}

/// Fills the mask by repeated Sobolev descent from a zero initialization.
pub fn sobolev_inpaint(
    u0: &Raster,
    mask: &Mask,
    params: &SobolevParams,
) -> Result<(Raster, SweepStats), Error> {
    params.validate()?;
    if u0.channels() != 1 {
        return Err(Error::UnsupportedChannels {
            channels: u0.channels(),
        });
    }
    if !mask.same_shape_as(u0) {
        return Err(Error::dims(
            "sobolev_inpaint",
            (u0.width(), u0.height()),
            (mask.width(), mask.height()),
        ));
    }
    if mask.is_full() {
        return Err(Error::Unfillable {
            reason: "mask covers the entire raster",
        });
    }
    let (w, h) = (u0.width(), u0.height());
    let mut values = u0.plane(0).to_vec();
    for (i, &masked) in mask.bits().iter().enumerate() {
        if masked {
            values[i] = 0.0;
        }
    }
    let mut current = Raster::from_samples(w, h, 1, values)?;
    let mut stats = SweepStats {
        iterations: 0,
        max_delta: 0.0,
        converged: false,
    };
    for _ in 0..params.max_iters {
        stats.iterations += 1;
        let next = gradient_step(&current, u0, mask, params);
        let mut max_delta = 0.0f64;
        for (i, &masked) in mask.bits().iter().enumerate() {
            if masked {
                let delta = (next.samples()[i] - current.samples()[i]).abs();
                if delta > max_delta {
                    max_delta = delta;
                }
            }
        }
        current = next;
        stats.max_delta = max_delta;
        if max_delta < params.tol {
            stats.converged = true;
            break;
        }
    }
    Ok((current, stats))
}
