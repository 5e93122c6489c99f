//! Nearest-neighbor propagation: each hole pixel copies its nearest
//! already-valued neighbor, filling boundary-inward by confidence.

use crate::error::Error;
use crate::fill::{onion_fill, FillState};
use crate::raster::{Mask, Position, Raster};

/// Copy candidates by distance, then fixed tie order: axis neighbors
/// (distance 1) before diagonals (distance sqrt 2).
const COPY_ORDER: [(isize, isize); 8] = [
    (-1, 0), // N
    (1, 0),  // S
    (0, 1),  // E
    (0, -1), // W
    (-1, 1), // NE
    (-1, -1), // NW
    (1, 1),  // SE
    (1, -1), // SW
];

/// Fills the mask by copying values; no averaging, so outputs are a subset
/// of the source values and edges propagate blockily.
pub fn nn_inpaint(u0: &Raster, mask: &Mask) -> Result<Raster, Error> {
    if u0.channels() != 1 {
        return Err(Error::UnsupportedChannels {
            channels: u0.channels(),
        });
    }
    if !mask.same_shape_as(u0) {
        return Err(Error::dims(
            "nn_inpaint",
            (u0.width(), u0.height()),
            (mask.width(), mask.height()),
        ));
    }
    let (width, height) = (u0.width(), u0.height());
    let mut values = u0.plane(0).to_vec();
    let mut state = FillState::fresh(mask);
    onion_fill(&mut values, &mut state, |vals, st, p| {
        for (dr, dc) in COPY_ORDER {
            let r = p.row as isize + dr;
            let c = p.col as isize + dc;
            if r < 0 || c < 0 || r as usize >= height || c as usize >= width {
                continue;
            }
            let q = Position::new(r as usize, c as usize);
            if st.is_filled(q) {
                return Some(vals[q.row * width + q.col]);
            }
        }
        // Frontier pixels have a filled 8-neighbor by construction.
        unreachable!("frontier pixel without a filled neighbor")
    })?;
    Raster::from_samples(width, height, 1, values)
}
