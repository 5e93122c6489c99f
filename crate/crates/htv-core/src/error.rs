use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context}: {a_width}x{a_height} vs {b_width}x{b_height}")]
    DimensionMismatch {
        context: &'static str,
        a_width: usize,
        a_height: usize,
        b_width: usize,
        b_height: usize,
    },

    #[error("channel mismatch: {context}: {a} vs {b}")]
    ChannelMismatch {
        context: &'static str,
        a: usize,
        b: usize,
    },

    #[error("unsupported channel count {channels}; expected 1 or 3")]
    UnsupportedChannels { channels: usize },

    /// The mask covers the entire image, or a fill pass cannot make progress.
    #[error("mask is unfillable: {reason}")]
    Unfillable { reason: &'static str },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error(transparent)]
    Pnm(#[from] crate::pnm::PnmError),
}

impl Error {
    pub(crate) fn dims(
        context: &'static str,
        (a_width, a_height): (usize, usize),
        (b_width, b_height): (usize, usize),
    ) -> Self {
        Error::DimensionMismatch {
            context,
            a_width,
            a_height,
            b_width,
            b_height,
        }
    }
}
