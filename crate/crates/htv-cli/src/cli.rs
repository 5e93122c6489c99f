//! Argument definitions for the `htv` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::mask_gen::{Placement, Shape};
use crate::run::Method;

#[derive(Debug, Parser)]
#[command(name = "htv", about = "Hierarchical TV inpainting toolkit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inpaint one image with one method and write the result as PNM.
    Inpaint(InpaintArgs),
    /// Generate a seeded synthetic mask and write it as PGM.
    Genmask(GenmaskArgs),
    /// Run every method over an image directory and write MSE/PSNR CSVs.
    Bench(BenchArgs),
}

/// Solver knobs shared by `inpaint` and `bench`; unset flags keep defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct SolverOverrides {
    /// TV fidelity weight on known pixels.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// TV gradient regularization term.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Convergence threshold on the max per-pixel change, all solvers.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap, all solvers.
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Pyramid stops once the hole half-thickness is at most this.
    #[arg(long)]
    pub threshold_t: Option<usize>,
    /// Gaussian sigma for the blur baseline.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Descent step size for the Sobolev baseline.
    #[arg(long)]
    pub step: Option<f64>,
    /// Sobolev smoothing weight.
    #[arg(long)]
    pub mu: Option<f64>,
    /// Pyramid depth cap.
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct InpaintArgs {
    /// Input image (binary PGM or PPM).
    #[arg(long)]
    pub image: PathBuf,
    /// Mask image (binary PGM, >= 128 marks pixels to fill).
    #[arg(long)]
    pub mask: PathBuf,
    /// Inpainting method.
    #[arg(long, value_enum)]
    pub method: Method,
    /// Output path for the inpainted PNM.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub solver: SolverOverrides,
}

#[derive(Debug, Args)]
pub struct GenmaskArgs {
    /// Mask width in pixels.
    #[arg(long)]
    pub width: usize,
    /// Mask height in pixels.
    #[arg(long)]
    pub height: usize,
    /// Mask shape.
    #[arg(long, value_enum, default_value_t = Shape::Rect)]
    pub shape: Shape,
    /// Target masked area as a percentage of the image, in (0, 50].
    #[arg(long)]
    pub area_pct: f64,
    /// Where the mask tends to sit on the canvas.
    #[arg(long, value_enum, default_value_t = Placement::UniformRandom)]
    pub placement: Placement,
    /// Generator seed.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output path for the mask PGM.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Directory of input images (*.pgm, *.ppm, *.pnm).
    #[arg(long)]
    pub images: PathBuf,
    /// Mask area percentages to sweep, e.g. 2,5,10,15.
    #[arg(long, value_delimiter = ',', required = true)]
    pub area_pcts: Vec<f64>,
    /// Methods to compare.
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = [Method::Nn, Method::Blur, Method::Sobolev, Method::Hier])]
    pub methods: Vec<Method>,
    /// Output prefix; writes <out>_mse.csv and <out>_psnr.csv.
    #[arg(long)]
    pub out_csv: PathBuf,
    /// Benchmark seed; masks derive from it deterministically.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Mask shape used for every generated mask.
    #[arg(long, value_enum, default_value_t = Shape::Rect)]
    pub shape: Shape,
    /// Mask placement distribution.
    #[arg(long, value_enum, default_value_t = Placement::UniformRandom)]
    pub placement: Placement,
    #[command(flatten)]
    pub solver: SolverOverrides,
}
