//! Iterative Gaussian-blur filling: blur the whole image, restore the known
//! pixels, repeat until the hole stops changing.

use crate::error::Error;
use crate::raster::{Mask, Raster};
use crate::tv::SweepStats;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlurParams {
    /// Gaussian std-dev in pixels.
    pub sigma: f64,
    /// Kernel half-width; the kernel has 2*radius + 1 taps.
    pub kernel_radius: usize,
    /// Convergence threshold on the max masked-pixel change per iterate.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for BlurParams {
    fn default() -> Self {
        BlurParams {
            sigma: 1.0,
            kernel_radius: 2,
            tol: 1e-4,
            max_iters: 500,
        }
    }
}

impl BlurParams {
    fn validate(&self) -> Result<(), Error> {
        if self.sigma <= 0.0 || self.sigma.is_nan() {
            return Err(Error::InvalidParameter {
                reason: format!("sigma must be > 0, got {}", self.sigma),
            });
        }
        if self.kernel_radius == 0 {
            return Err(Error::InvalidParameter {
                reason: "kernel_radius must be >= 1".into(),
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

/// Discrete Gaussian truncated at `radius`, renormalized to sum 1.
pub fn gaussian_kernel(sigma: f64, radius: usize) -> Vec<f64> {
    assert!(sigma > 0.0 && radius >= 1);
    let mut k: Vec<f64> = (-(radius as isize)..=radius as isize)
        .map(|t| (-((t * t) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Half-sample symmetric reflection: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
fn mirror(mut i: isize, n: usize) -> usize {
    let n = n as isize;
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

fn hpass_row(src_row: &[f64], out_row: &mut [f64], kernel: &[f64], width: usize) {
    let radius = (kernel.len() / 2) as isize;
    for c in 0..width {
        let mut acc = 0.0;
        for (t, &kv) in kernel.iter().enumerate() {
            acc += kv * src_row[mirror(c as isize + t as isize - radius, width)];
        }
        out_row[c] = acc;
    }
}

fn vpass_row(tmp: &[f64], out_row: &mut [f64], r: usize, kernel: &[f64], width: usize, height: usize) {
    let radius = (kernel.len() / 2) as isize;
    for (t, &kv) in kernel.iter().enumerate() {
        let rr = mirror(r as isize + t as isize - radius, height);
        let tmp_row = &tmp[rr * width..rr * width + width];
        if t == 0 {
            for c in 0..width {
                out_row[c] = kv * tmp_row[c];
            }
        } else {
            for c in 0..width {
                out_row[c] += kv * tmp_row[c];
            }
        }
    }
}

fn blur_plane_seq(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let mut tmp = vec![0.0; width * height];
    for (r, out_row) in tmp.chunks_mut(width).enumerate() {
        hpass_row(&src[r * width..r * width + width], out_row, kernel, width);
    }
    let mut out = vec![0.0; width * height];
    for (r, out_row) in out.chunks_mut(width).enumerate() {
        vpass_row(&tmp, out_row, r, kernel, width, height);
    }
    out
}

/// Row-parallel variant; each row runs the same scalar kernel as the
/// sequential path, so outputs are bit-identical.
#[cfg(feature = "parallel")]
fn blur_plane_par(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    let mut tmp = vec![0.0; width * height];
    tmp.par_chunks_mut(width).enumerate().for_each(|(r, out_row)| {
        hpass_row(&src[r * width..r * width + width], out_row, kernel, width);
    });
    let mut out = vec![0.0; width * height];
    out.par_chunks_mut(width).enumerate().for_each(|(r, out_row)| {
        vpass_row(&tmp, out_row, r, kernel, width, height);
    });
    out
}

fn blur_plane(src: &[f64], width: usize, height: usize, kernel: &[f64]) -> Vec<f64> {
    #[cfg(feature = "parallel")]
    {
        blur_plane_par(src, width, height, kernel)
    }
    #[cfg(not(feature = "parallel"))]
    {
        blur_plane_seq(src, width, height, kernel)
    }
}

/// Separable Gaussian blur with mirror boundaries.
pub fn gaussian_blur(u: &Raster, params: &BlurParams) -> Raster {
    assert_eq!(u.channels(), 1, "gaussian_blur operates on one channel");
    let kernel = gaussian_kernel(params.sigma, params.kernel_radius);
    let out = blur_plane(u.plane(0), u.width(), u.height(), &kernel);
    Raster::from_samples(u.width(), u.height(), 1, out)
        .expect("blur preserves dimensions")
}

/// Always-sequential [`gaussian_blur`], kept for comparison benchmarks.
/// Output is bit-identical to the parallel path.
pub fn gaussian_blur_seq(u: &Raster, params: &BlurParams) -> Raster {
    assert_eq!(u.channels(), 1, "gaussian_blur operates on one channel");
    let kernel = gaussian_kernel(params.sigma, params.kernel_radius);
    let out = blur_plane_seq(u.plane(0), u.width(), u.height(), &kernel);
    Raster::from_samples(u.width(), u.height(), 1, out)
        .expect("blur preserves dimensions")
}

/// Row-parallel [`gaussian_blur`], kept for comparison benchmarks.
#[cfg(feature = "parallel")]
pub fn gaussian_blur_par(u: &Raster, params: &BlurParams) -> Raster {
    assert_eq!(u.channels(), 1, "gaussian_blur operates on one channel");
    let kernel = gaussian_kernel(params.sigma, params.kernel_radius);
    let out = blur_plane_par(u.plane(0), u.width(), u.height(), &kernel);
    Raster::from_samples(u.width(), u.height(), 1, out)
        .expect("blur preserves dimensions")
}

/// Fills the mask by repeated blurring: masked pixels start at 0, take their
/// blurred value each iterate, and known pixels are restored from `u0`.
pub fn blur_inpaint(u0: &Raster, mask: &Mask, params: &BlurParams) -> Result<(Raster, SweepStats), Error> {
    params.validate()?;
    if u0.channels() != 1 {
        return Err(Error::UnsupportedChannels {
            channels: u0.channels(),
        });
    }
    if !mask.same_shape_as(u0) {
        return Err(Error::dims(
            "blur_inpaint",
            (u0.width(), u0.height()),
            (mask.width(), mask.height()),
        ));
    }
    if mask.is_full() {
        return Err(Error::Unfillable {
            reason: "mask covers the entire raster",
        });
    }
    let (width, height) = (u0.width(), u0.height());
    let kernel = gaussian_kernel(params.sigma, params.kernel_radius);
    let mut values = u0.plane(0).to_vec();
    for (i, &masked) in mask.bits().iter().enumerate() {
        if masked {
            values[i] = 0.0;
        }
    }
    let mut stats = SweepStats {
        iterations: 0,
        max_delta: 0.0,
        converged: false,
    };
    for _ in 0..params.max_iters {
        stats.iterations += 1;
        let blurred = blur_plane(&values, width, height, &kernel);
        let mut max_delta = 0.0f64;
        for (i, &masked) in mask.bits().iter().enumerate() {
            if masked {
                let delta = (blurred[i] - values[i]).abs();
                values[i] = blurred[i];
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
