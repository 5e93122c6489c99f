//! MSE and PSNR on the conventions the evaluation tables use: squared error
//! is averaged over all samples on the normalized [0,1] scale, while PSNR
//! keeps the 8-bit 255² numerator.

use crate::error::Error;
use crate::raster::{Mask, Raster};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// PSNR numerator: 255² for 8-bit data.
pub const PEAK_SQUARED: f64 = 65025.0;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub method: String,
    /// 100 * masked / (width * height).
    pub mask_area_pct: f64,
    pub mse: f64,
    pub psnr_db: f64,
    /// Seconds.
    pub wall_time: f64,
}

fn check_shapes(context: &'static str, x: &Raster, y: &Raster) -> Result<(), Error> {
    if x.width() != y.width() || x.height() != y.height() {
        return Err(Error::dims(
            context,
            (x.width(), x.height()),
            (y.width(), y.height()),
        ));
    }
    if x.channels() != y.channels() {
        return Err(Error::ChannelMismatch {
            context,
            a: x.channels(),
            b: y.channels(),
        });
    }
    Ok(())
}

fn row_sq_sum(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

/// Mean squared error over every sample (channels averaged in).
/// Row partial sums are folded in index order, so the parallel and
/// sequential paths agree bitwise.
pub fn mse(x: &Raster, x_prime: &Raster) -> Result<f64, Error> {
    check_shapes("mse", x, x_prime)?;
    Ok(mse_partials(x, x_prime).iter().sum::<f64>() / x.samples().len() as f64)
}

fn mse_partials(x: &Raster, y: &Raster) -> Vec<f64> {
    let w = x.width();
    #[cfg(feature = "parallel")]
    {
        x.samples()
            .par_chunks(w)
            .zip(y.samples().par_chunks(w))
            .map(|(a, b)| row_sq_sum(a, b))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        x.samples()
            .chunks(w)
            .zip(y.samples().chunks(w))
            .map(|(a, b)| row_sq_sum(a, b))
            .collect()
    }
}

/// Always-sequential [`mse`], for comparison benchmarks.
pub fn mse_seq(x: &Raster, x_prime: &Raster) -> Result<f64, Error> {
    check_shapes("mse", x, x_prime)?;
    let w = x.width();
    let partials: Vec<f64> = x
        .samples()
        .chunks(w)
        .zip(x_prime.samples().chunks(w))
        .map(|(a, b)| row_sq_sum(a, b))
        .collect();
    Ok(partials.iter().sum::<f64>() / x.samples().len() as f64)
}

/// Row-parallel [`mse`], for comparison benchmarks.
#[cfg(feature = "parallel")]
pub fn mse_par(x: &Raster, x_prime: &Raster) -> Result<f64, Error> {
    check_shapes("mse", x, x_prime)?;
    let w = x.width();
    let partials: Vec<f64> = x
        .samples()
        .par_chunks(w)
        .zip(x_prime.samples().par_chunks(w))
        .map(|(a, b)| row_sq_sum(a, b))
        .collect();
    Ok(partials.iter().sum::<f64>() / x.samples().len() as f64)
}

/// Mean squared error over masked samples only. Methods preserve known
/// pixels, so `mse == masked_mse * masked / (width * height)`.
pub fn masked_mse(x: &Raster, x_prime: &Raster, m: &Mask) -> Result<f64, Error> {
    check_shapes("masked_mse", x, x_prime)?;
    if !m.same_shape_as(x) {
        return Err(Error::dims(
            "masked_mse",
            (x.width(), x.height()),
            (m.width(), m.height()),
        ));
    }
    let masked = m.masked_count();
    if masked == 0 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for c in 0..x.channels() {
        let a = x.plane(c);
        let b = x_prime.plane(c);
        for (i, &bit) in m.bits().iter().enumerate() {
            if bit {
                let d = a[i] - b[i];
                sum += d * d;
            }
        }
    }
    Ok(sum / (masked * x.channels()) as f64)
}

/// Peak signal-to-noise ratio in dB; 0 error maps to +infinity.
/// Panics on negative input.
pub fn psnr(mse_value: f64) -> f64 {
    assert!(mse_value >= 0.0, "mse must be non-negative, got {mse_value}");
    if mse_value == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK_SQUARED / mse_value).log10()
    }
}

/// Scores one method's output against the original.
pub fn evaluate(
    original: &Raster,
    inpainted: &Raster,
    m: &Mask,
    method: &str,
    wall_time: f64,
) -> Result<MetricsReport, Error> {
    check_shapes("evaluate", original, inpainted)?;
    if !m.same_shape_as(original) {
        return Err(Error::dims(
            "evaluate",
            (original.width(), original.height()),
            (m.width(), m.height()),
        ));
    }
    let mse_value = mse(original, inpainted)?;
    Ok(MetricsReport {
        method: method.to_string(),
        mask_area_pct: 100.0 * m.masked_count() as f64 / (m.width() * m.height()) as f64,
        mse: mse_value,
        psnr_db: psnr(mse_value),
        wall_time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::Position;

    #[test]
    fn mse_basics() {
        let a = Raster::filled(4, 4, 1, 0.5).unwrap();
        assert_eq!(mse(&a, &a).unwrap(), 0.0);

        let zeros = Raster::filled(4, 4, 1, 0.0).unwrap();
        let ones = Raster::filled(4, 4, 1, 1.0).unwrap();
        assert_eq!(mse(&zeros, &ones).unwrap(), 1.0);

        let mut b = Raster::filled(2, 2, 1, 0.0).unwrap();
        b.set(0, Position::new(0, 1), 0.5);
        let base = Raster::filled(2, 2, 1, 0.0).unwrap();
        assert!((mse(&base, &b).unwrap() - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn mse_is_symmetric() {
        let a = Raster::from_samples(3, 2, 1, vec![0.1, 0.9, 0.3, 0.7, 0.5, 0.2]).unwrap();
        let b = Raster::from_samples(3, 2, 1, vec![0.0, 1.0, 0.4, 0.6, 0.5, 0.25]).unwrap();
        assert_eq!(
            mse(&a, &b).unwrap().to_bits(),
            mse(&b, &a).unwrap().to_bits()
        );
    }

    #[test]
    fn mse_rejects_shape_mismatch() {
        let a = Raster::filled(4, 4, 1, 0.5).unwrap();
        let b = Raster::filled(4, 5, 1, 0.5).unwrap();
        assert!(matches!(mse(&a, &b), Err(Error::DimensionMismatch { .. })));
        let c = Raster::filled(4, 4, 3, 0.5).unwrap();
        assert!(matches!(mse(&a, &c), Err(Error::ChannelMismatch { .. })));
    }

    #[test]
    fn psnr_matches_table_arithmetic() {
        assert!((psnr(8.36e-4) - 78.91).abs() < 0.01);
        assert!((psnr(0.002) - 75.12).abs() < 0.05);
        assert!((psnr(0.0065) - 70.001670).abs() < 1e-4);
        assert!(psnr(65025.0).abs() < 1e-12);
        assert_eq!(psnr(0.0), f64::INFINITY);
    }

    #[test]
    fn psnr_strictly_decreasing() {
        let mut last = f64::INFINITY;
        for m in [1e-6, 1e-4, 1e-2, 1.0, 100.0] {
            let p = psnr(m);
            assert!(p < last);
            last = p;
        }
    }

    #[test]
    #[should_panic(expected = "non-negative")]
    fn psnr_rejects_negative() {
        psnr(-1.0);
    }

    #[test]
    fn evaluate_reports_mask_percentage() {
        let a = Raster::filled(100, 100, 1, 0.5).unwrap();
        let mut bits = vec![false; 100 * 100];
        for b in bits.iter_mut().take(1018) {
            *b = true;
        }
        let m = Mask::new(100, 100, bits).unwrap();
        let report = evaluate(&a, &a, &m, "nn", 0.0).unwrap();
        assert!((report.mask_area_pct - 10.18).abs() < 1e-12);
        assert_eq!(report.mse, 0.0);
        assert_eq!(report.psnr_db, f64::INFINITY);

        let empty = Mask::empty(100, 100).unwrap();
        assert_eq!(evaluate(&a, &a, &empty, "nn", 0.0).unwrap().mask_area_pct, 0.0);
    }

    #[test]
    fn masked_mse_scaling_identity() {
        // Differences only on masked pixels, as method outputs guarantee.
        let original = Raster::filled(8, 6, 1, 0.4).unwrap();
        let mut output = original.clone();
        let mut m = Mask::empty(8, 6).unwrap();
        for (r, c, v) in [(1, 2, 0.9), (3, 3, 0.1), (4, 6, 0.65)] {
            let p = Position::new(r, c);
            m.set(p, true);
            output.set(0, p, v);
        }
        let full = mse(&original, &output).unwrap();
        let masked = masked_mse(&original, &output, &m).unwrap();
        let scaled = masked * m.masked_count() as f64 / (8.0 * 6.0);
        assert!((full - scaled).abs() < 1e-15, "{full} vs {scaled}");
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_mse_matches_sequential_bitwise() {
        let a_samples: Vec<f64> = (0..129 * 67).map(|i| (i % 251) as f64 / 250.0).collect();
        let b_samples: Vec<f64> = (0..129 * 67).map(|i| ((i + 13) % 241) as f64 / 240.0).collect();
        let a = Raster::from_samples(129, 67, 1, a_samples).unwrap();
        let b = Raster::from_samples(129, 67, 1, b_samples).unwrap();
        assert_eq!(
            mse_seq(&a, &b).unwrap().to_bits(),
            mse_par(&a, &b).unwrap().to_bits()
        );
        assert_eq!(
            mse(&a, &b).unwrap().to_bits(),
            mse_seq(&a, &b).unwrap().to_bits()
        );
    }
}
