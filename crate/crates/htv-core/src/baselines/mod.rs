//! Comparison methods: nearest-neighbor propagation, iterative Gaussian
//! blur, and Sobolev gradient descent.

mod blur;
mod nn;
mod sobolev;

pub use blur::{blur_inpaint, gaussian_blur, gaussian_blur_seq, gaussian_kernel, BlurParams};
#[cfg(feature = "parallel")]
pub use blur::gaussian_blur_par;
pub use nn::nn_inpaint;
pub use sobolev::{
    d1, d2, dirichlet_energy, energy_gradient, sobolev_gradient_step, sobolev_gradient_step_seq,
    sobolev_inpaint, SobolevParams,
};
#[cfg(feature = "parallel")]
pub use sobolev::sobolev_gradient_step_par;
