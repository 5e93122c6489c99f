//! Image inpainting on grayscale and RGB rasters.
//!
//! The main entry points are [`tv::tv_inpaint`] (total-variation diffusion),
//! [`pyramid::hierarchical_tv_inpaint`] (coarse-to-fine TV for large holes),
//! and the three baselines in [`baselines`]. Images are dense `f64` rasters
//! in `[0, 1]`, read and written as binary PGM/PPM via [`pnm`]. Quality is
//! scored with [`metrics`] on the 0..255 scale used for reporting.
//!
//! With the default `parallel` feature the heavy kernels run on rayon;
//! disabling it compiles sequential fallbacks with bit-identical output.

pub mod baselines;
pub mod error;
pub(crate) mod fill;
pub mod metrics;
pub mod pnm;
pub mod pyramid;
pub mod raster;
pub mod tv;

pub use error::Error;
pub use raster::{Mask, Position, Raster};
