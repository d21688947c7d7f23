//! Bilinear resampling: resize, stride-grid downsampling, and ROI crop.
//!
//! One sampling convention is used throughout: half-pixel-centered
//! (align-corners = false). A continuous image coordinate `u` maps to array
//! position `u - 0.5`, so cell `i` is centered at image coordinate `i + 0.5`.
//! Resize and stride downsampling clamp sample positions to the grid edges;
//! ROI cropping reads out-of-grid points as 0, consistent with maps being 0
//! outside every box.

use crate::error::{Error, Result};
use crate::geometry::BBox;
use crate::grid::MapGrid;

/// Bilinear read at array position (x, y) with edge clamping.
fn sample_clamped(m: &MapGrid, c: usize, x: f64, y: f64) -> f64 {
    let w = m.width();
    let h = m.height();
    let x0f = x.floor();
    let y0f = y.floor();
    let fx = x - x0f;
    let fy = y - y0f;
    let clamp = |i: f64, len: usize| -> usize {
        if i < 0.0 {
            0
        } else if i >= len as f64 {
            len - 1
        } else {
            i as usize
        }
    };
    let x0 = clamp(x0f, w);
    let x1 = clamp(x0f + 1.0, w);
    let y0 = clamp(y0f, h);
    let y1 = clamp(y0f + 1.0, h);
    let v00 = m.get(x0, y0, c);
    let v10 = m.get(x1, y0, c);
    let v01 = m.get(x0, y1, c);
    let v11 = m.get(x1, y1, c);
    v00 * (1.0 - fx) * (1.0 - fy) + v10 * fx * (1.0 - fy) + v01 * (1.0 - fx) * fy + v11 * fx * fy
}

/// Bilinear read at array position (x, y); neighbors outside the grid
/// contribute 0.
fn sample_zero_extended(m: &MapGrid, c: usize, x: f64, y: f64) -> f64 {
    let w = m.width() as i64;
    let h = m.height() as i64;
    let x0 = x.floor() as i64;
    let y0 = y.floor() as i64;
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    let read = |xi: i64, yi: i64| -> f64 {
        if xi < 0 || yi < 0 || xi >= w || yi >= h {
            0.0
        } else {
            m.get(xi as usize, yi as usize, c)
        }
    };
    read(x0, y0) * (1.0 - fx) * (1.0 - fy)
        + read(x0 + 1, y0) * fx * (1.0 - fy)
        + read(x0, y0 + 1) * (1.0 - fx) * fy
        + read(x0 + 1, y0 + 1) * fx * fy
}

/// Bilinear resize to `out_w x out_h`, preserving the channel count.
pub fn resize_bilinear(m: &MapGrid, out_w: usize, out_h: usize) -> Result<MapGrid> {
    if out_w == 0 || out_h == 0 {
        return Err(Error::Dimension("resize target must be at least 1x1".into()));
    }
    let sx = m.width() as f64 / out_w as f64;
    let sy = m.height() as f64 / out_h as f64;
    let mut out = MapGrid::new(out_w, out_h, m.channels())?;
    for c in 0..m.channels() {
        for oy in 0..out_h {
            let y = (oy as f64 + 0.5) * sy - 0.5;
            for ox in 0..out_w {
                let x = (ox as f64 + 0.5) * sx - 0.5;
                out.set(ox, oy, c, sample_clamped(m, c, x, y));
            }
        }
    }
    Ok(out)
}

/// Downsamples by an integer stride: output cell (gx, gy) is the bilinear
/// read at `((gx + 0.5) * r - 0.5, (gy + 0.5) * r - 0.5)`, the anchor-center
/// position of that grid cell. Dimensions must be divisible by the stride.
pub fn stride_downsample(m: &MapGrid, stride: u32) -> Result<MapGrid> {
    if stride == 0 {
        return Err(Error::Dimension("stride must be >= 1".into()));
    }
    let r = stride as usize;
    if !m.width().is_multiple_of(r) || !m.height().is_multiple_of(r) {
        return Err(Error::Dimension(format!(
            "grid {}x{} not divisible by stride {r}",
            m.width(),
            m.height()
        )));
    }
    resize_bilinear(m, m.width() / r, m.height() / r)
}

/// Crops the ROI and resamples it to `out_size x out_size` without
/// quantizing the ROI coordinates. Sample points are half-pixel centered
/// within the ROI; points outside the grid read 0.
pub fn roi_crop_resize(m: &MapGrid, roi: BBox, out_size: usize) -> Result<MapGrid> {
    if out_size == 0 {
        return Err(Error::Dimension("roi output size must be at least 1".into()));
    }
    let w = m.width() as f64;
    let h = m.height() as f64;
    if roi.x2() <= 0.0 || roi.y2() <= 0.0 || roi.x1() >= w || roi.y1() >= h {
        return Err(Error::Domain(format!(
            "roi ({}, {}, {}, {}) does not intersect the {}x{} grid",
            roi.x1(),
            roi.y1(),
            roi.x2(),
            roi.y2(),
            m.width(),
            m.height()
        )));
    }
    let bin_w = roi.width() / out_size as f64;
    let bin_h = roi.height() / out_size as f64;
    let mut out = MapGrid::new(out_size, out_size, m.channels())?;
    for c in 0..m.channels() {
        for oy in 0..out_size {
            let y = roi.y1() + (oy as f64 + 0.5) * bin_h - 0.5;
            for ox in 0..out_size {
                let x = roi.x1() + (ox as f64 + 0.5) * bin_w - 0.5;
                out.set(ox, oy, c, sample_zero_extended(m, c, x, y));
            }
        }
    }
    Ok(out)
}

/// Stacks the channels of `b` after those of `a`; widths and heights must match.
pub fn concat_channels(a: &MapGrid, b: &MapGrid) -> Result<MapGrid> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::Dimension(format!(
            "cannot concat {}x{} with {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let mut data = Vec::with_capacity(a.data().len() + b.data().len());
    data.extend_from_slice(a.data());
    data.extend_from_slice(b.data());
    MapGrid::from_vec(a.width(), a.height(), a.channels() + b.channels(), data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bb(x1: f64, y1: f64, x2: f64, y2: f64) -> BBox {
        BBox::new(x1, y1, x2, y2).unwrap()
    }

    fn constant(w: usize, h: usize, v: f64) -> MapGrid {
        MapGrid::from_vec(w, h, 1, vec![v; w * h]).unwrap()
    }

    #[test]
    fn resize_identity() {
        let m = MapGrid::from_vec(3, 2, 1, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        assert_eq!(resize_bilinear(&m, 3, 2).unwrap(), m);
    }

    #[test]
    fn resize_constant_stays_constant() {
        let m = constant(16, 16, 0.37);
        for (ow, oh) in [(7usize, 5usize), (31, 3), (16, 16), (1, 1)] {
            let out = resize_bilinear(&m, ow, oh).unwrap();
            assert!(out.data().iter().all(|v| (v - 0.37).abs() < 1e-12));
        }
    }

    #[test]
    fn downsample_stride1_is_identity() {
        let m = MapGrid::from_vec(4, 1, 1, vec![0.0, 0.25, 0.5, 0.75]).unwrap();
        assert_eq!(stride_downsample(&m, 1).unwrap(), m);
    }

    #[test]
    fn downsample_rejects_non_divisible() {
        let m = MapGrid::zeros(10, 10).unwrap();
        assert!(matches!(
            stride_downsample(&m, 4),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn downsample_matches_resize() {
        let mut m = MapGrid::zeros(16, 8).unwrap();
        for y in 0..8 {
            for x in 0..16 {
                m.set(x, y, 0, ((x * 7 + y * 3) % 11) as f64 / 11.0);
            }
        }
        let a = stride_downsample(&m, 4).unwrap();
        let b = resize_bilinear(&m, 4, 2).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((x - y).abs() < 1e-6);
        }
    }

    #[test]
    fn roi_full_extent_identity() {
        let mut m = MapGrid::zeros(6, 6).unwrap();
        for y in 0..6 {
            for x in 0..6 {
                m.set(x, y, 0, (x + 6 * y) as f64 / 36.0);
            }
        }
        let out = roi_crop_resize(&m, bb(0.0, 0.0, 6.0, 6.0), 6).unwrap();
        for (a, b) in out.data().iter().zip(m.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn roi_constant_map() {
        // ROI strictly inside the grid so zero-extension never kicks in.
        let m = constant(10, 10, 0.6);
        let out = roi_crop_resize(&m, bb(2.0, 1.5, 8.0, 8.5), 5).unwrap();
        assert!(out.data().iter().all(|v| (v - 0.6).abs() < 1e-12));
    }

    #[test]
    fn roi_outside_is_domain_error() {
        let m = MapGrid::zeros(8, 8).unwrap();
        assert!(matches!(
            roi_crop_resize(&m, bb(10.0, 10.0, 12.0, 12.0), 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn roi_multi_channel() {
        let a = constant(8, 8, 0.25);
        let b = constant(8, 8, 0.75);
        let two = concat_channels(&a, &b).unwrap();
        let out = roi_crop_resize(&two, bb(1.0, 1.0, 7.0, 7.0), 4).unwrap();
        assert_eq!(out.channels(), 2);
        assert!(out.channel(0).iter().all(|v| (v - 0.25).abs() < 1e-12));
        assert!(out.channel(1).iter().all(|v| (v - 0.75).abs() < 1e-12));
    }

    #[test]
    fn concat_shapes_and_order() {
        let a = constant(128, 128, 0.1);
        let b = constant(128, 128, 0.9);
        let c = concat_channels(&a, &b).unwrap();
        assert_eq!(c.shape(), (128, 128, 2));
        assert_eq!(c.channel(0), a.channel(0));
        assert_eq!(c.channel(1), b.channel(0));
        let c2 = concat_channels(&a, &b).unwrap();
        assert_eq!(c, c2);
        assert!(concat_channels(&a, &constant(64, 128, 0.0)).is_err());
    }

    #[test]
    fn outputs_stay_within_input_range() {
        let mut m = MapGrid::zeros(12, 12).unwrap();
        for y in 0..12 {
            for x in 0..12 {
                m.set(x, y, 0, ((x * 5 + y) % 13) as f64 / 13.0);
            }
        }
        let (lo, hi) = (m.min_value(), m.max_value());
        let r = resize_bilinear(&m, 30, 7).unwrap();
        assert!(r.min_value() >= lo - 1e-12 && r.max_value() <= hi + 1e-12);
        let d = stride_downsample(&m, 3).unwrap();
        assert!(d.min_value() >= lo - 1e-12 && d.max_value() <= hi + 1e-12);
    }
}
