//! Soft bounding-map generation from ground-truth boxes.
//!
//! A box is rasterized onto the integer lattice with inclusive bounds
//! (cell `(x, y)` belongs to the box iff `x1 <= x <= x2` and
//! `y1 <= y <= y2`). Inside the box, the per-axis map falls off linearly
//! from 1 on the center line to 0.5 on the border; outside it is 0.
//! Per-box maps are combined by a sum clamped at 1, and the joint map is
//! the cellwise geometric mean of the combined x and y maps.

use crate::error::{Error, Result};
use crate::geometry::BBox;
use crate::grid::MapGrid;

/// Axis selector for single-axis maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Falloff profile used for the per-axis maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmVariant {
    /// 1 at the center line, linear down to 0.5 at the border.
    Linear,
    /// Truncated per-axis Gaussian calibrated so the border value is 0.5.
    Gaussian,
}

impl std::str::FromStr for BmVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(BmVariant::Linear),
            "gaussian" => Ok(BmVariant::Gaussian),
            other => Err(Error::Config(format!(
                "unknown bm variant '{other}' (expected linear or gaussian)"
            ))),
        }
    }
}

impl std::fmt::Display for BmVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BmVariant::Linear => write!(f, "linear"),
            BmVariant::Gaussian => write!(f, "gaussian"),
        }
    }
}

/// Inclusive integer-lattice cell range covered by `[lo, hi]`, clamped to
/// `[0, len)`. Empty when the box misses the lattice entirely.
fn lattice_range(lo: f64, hi: f64, len: usize) -> Option<(usize, usize)> {
    let first = lo.ceil().max(0.0);
    let last = hi.floor().min(len as f64 - 1.0);
    if first > last {
        return None;
    }
    Some((first as usize, last as usize))
}

/// 0/1 mask of lattice cells inside the box. A box entirely outside the
/// lattice yields an all-false mask rather than an error.
pub fn inside_box_mask(bbox: BBox, width: usize, height: usize) -> MapGrid {
    let mut grid = MapGrid::zeros(width, height).expect("positive dims");
    let xr = lattice_range(bbox.x1(), bbox.x2(), width);
    let yr = lattice_range(bbox.y1(), bbox.y2(), height);
    if let (Some((x0, x1)), Some((y0, y1))) = (xr, yr) {
        for y in y0..=y1 {
            for x in x0..=x1 {
                grid.set(x, y, 0, 1.0);
            }
        }
    }
    grid
}

fn fill_axis_map<F: Fn(f64) -> f64>(
    bbox: BBox,
    width: usize,
    height: usize,
    axis: Axis,
    profile: F,
) -> MapGrid {
    let mut grid = MapGrid::zeros(width, height).expect("positive dims");
    let xr = lattice_range(bbox.x1(), bbox.x2(), width);
    let yr = lattice_range(bbox.y1(), bbox.y2(), height);
    if let (Some((x0, x1)), Some((y0, y1))) = (xr, yr) {
        match axis {
            Axis::X => {
                for x in x0..=x1 {
                    let v = profile(x as f64);
                    for y in y0..=y1 {
                        grid.set(x, y, 0, v);
                    }
                }
            }
            Axis::Y => {
                for y in y0..=y1 {
                    let v = profile(y as f64);
                    for x in x0..=x1 {
                        grid.set(x, y, 0, v);
                    }
                }
            }
        }
    }
    grid
}

/// Per-box x-direction map: `1 - |x - x_ctr| / (x2 - x1)` inside the box,
/// 0 outside. Inside values lie in `[0.5, 1]`.
pub fn box_map_x(bbox: BBox, width: usize, height: usize) -> MapGrid {
    let (cx, _) = bbox.center();
    let w = bbox.width();
    fill_axis_map(bbox, width, height, Axis::X, |x| 1.0 - (x - cx).abs() / w)
}

/// Per-box y-direction map, the transpose counterpart of [`box_map_x`].
pub fn box_map_y(bbox: BBox, width: usize, height: usize) -> MapGrid {
    let (_, cy) = bbox.center();
    let h = bbox.height();
    fill_axis_map(bbox, width, height, Axis::Y, |y| 1.0 - (y - cy).abs() / h)
}

/// Gaussian falloff variant of the per-axis map, truncated to the box.
///
/// Sigma is calibrated as `(extent / 2) / sqrt(2 ln 2)` so the border value
/// is exactly 0.5, matching the linear profile's border value.
pub fn box_map_gaussian(bbox: BBox, width: usize, height: usize, axis: Axis) -> MapGrid {
    let (ctr, extent) = match axis {
        Axis::X => (bbox.center().0, bbox.width()),
        Axis::Y => (bbox.center().1, bbox.height()),
    };
    let sigma = (extent / 2.0) / (2.0 * 2f64.ln()).sqrt();
    let two_sigma_sq = 2.0 * sigma * sigma;
    fill_axis_map(bbox, width, height, axis, |d| {
        let dd = d - ctr;
        (-(dd * dd) / two_sigma_sq).exp()
    })
}

/// Sum of per-box maps clamped at 1, cellwise.
pub fn combine(maps: &[MapGrid]) -> Result<MapGrid> {
    let first = maps
        .first()
        .ok_or_else(|| Error::Dimension("combine requires at least one map".into()))?;
    if first.channels() != 1 {
        return Err(Error::Dimension("combine expects single-channel maps".into()));
    }
    let mut out = first.clone();
    for (i, m) in maps.iter().enumerate().skip(1) {
        if !m.same_shape(first) {
            return Err(Error::Dimension(format!(
                "map {i} shape {:?} differs from {:?}",
                m.shape(),
                first.shape()
            )));
        }
        for (o, v) in out.data_mut().iter_mut().zip(m.data()) {
            *o += v;
        }
    }
    for o in out.data_mut() {
        *o = o.min(1.0);
    }
    Ok(out)
}

/// Cellwise `sqrt(mx * my)`: the joint xy-direction map.
pub fn joint_map(mx: &MapGrid, my: &MapGrid) -> Result<MapGrid> {
    if !mx.same_shape(my) {
        return Err(Error::Dimension(format!(
            "joint_map shapes differ: {:?} vs {:?}",
            mx.shape(),
            my.shape()
        )));
    }
    if mx.channels() != 1 {
        return Err(Error::Dimension("joint_map expects single-channel maps".into()));
    }
    let data = mx
        .data()
        .iter()
        .zip(my.data())
        .map(|(a, b)| (a * b).sqrt())
        .collect();
    MapGrid::from_vec(mx.width(), mx.height(), 1, data)
}

/// The three per-image target maps.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingMaps {
    pub map_x: MapGrid,
    pub map_y: MapGrid,
    pub map_xy: MapGrid,
}

/// Builds the combined x, y, and xy maps for one image (linear profile).
pub fn build_targets(boxes: &[BBox], width: usize, height: usize) -> Result<BoundingMaps> {
    build_targets_with(BmVariant::Linear, boxes, width, height)
}

/// [`build_targets`] with an explicit falloff profile.
pub fn build_targets_with(
    variant: BmVariant,
    boxes: &[BBox],
    width: usize,
    height: usize,
) -> Result<BoundingMaps> {
    if boxes.is_empty() {
        return Err(Error::Dimension("build_targets requires at least one box".into()));
    }
    let per_axis = |axis: Axis| -> Vec<MapGrid> {
        boxes
            .iter()
            .map(|&b| match variant {
                BmVariant::Linear => match axis {
                    Axis::X => box_map_x(b, width, height),
                    Axis::Y => box_map_y(b, width, height),
                },
                BmVariant::Gaussian => box_map_gaussian(b, width, height, axis),
            })
            .collect()
    };
    let map_x = combine(&per_axis(Axis::X))?;
    let map_y = combine(&per_axis(Axis::Y))?;
    let map_xy = joint_map(&map_x, &map_y)?;
    debug_assert!(map_xy.validate_unit_range().is_ok());
    Ok(BoundingMaps {
        map_x,
        map_y,
        map_xy,
    })
}
