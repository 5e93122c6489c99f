//! Command-line front end for the inpainting library: single-image runs,
//! seeded mask generation, and a multi-method benchmark that writes MSE and
//! PSNR tables as CSV.

pub mod bench;
pub mod cli;
pub mod mask_gen;
pub mod run;

use htv_core::Error;

/// Process exit code for an error: 2 for shape disagreements, 3 for
/// unfillable masks, 1 for everything else (I/O, parse, bad parameters).
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::DimensionMismatch { .. }
        | Error::ChannelMismatch { .. }
        | Error::UnsupportedChannels { .. } => 2,
        Error::Unfillable { .. } => 3,
        _ => 1,
    }
}
