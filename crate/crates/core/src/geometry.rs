//! Boxes, IoU, anchor tiling, and box-delta transforms.
//!
//! Boxes live in continuous pixel coordinates and use the continuous-area
//! convention `area = (x2 - x1) * (y2 - y1)`. Map rasterization in
//! [`crate::maps`] uses its own inclusive integer-lattice convention; the two
//! serve different roles and are not interchangeable.

use crate::error::{Error, Result};

/// Axis-aligned box with `x1 < x2` and `y1 < y2`, all coordinates finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
}

impl BBox {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self> {
        if !(x1.is_finite() && y1.is_finite() && x2.is_finite() && y2.is_finite()) {
            return Err(Error::InvalidBox(format!(
                "non-finite coordinate in ({x1}, {y1}, {x2}, {y2})"
            )));
        }
        if x1 >= x2 || y1 >= y2 {
            return Err(Error::InvalidBox(format!(
                "zero or negative extent in ({x1}, {y1}, {x2}, {y2})"
            )));
        }
        Ok(Self { x1, y1, x2, y2 })
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn y1(&self) -> f64 {
        self.y1
    }

    pub fn x2(&self) -> f64 {
        self.x2
    }

    pub fn y2(&self) -> f64 {
        self.y2
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Center point `((x1 + x2) / 2, (y1 + y2) / 2)`.
    pub fn center(&self) -> (f64, f64) {
        ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)
    }

    /// Box with the x and y axes swapped.
    pub fn transpose(&self) -> BBox {
        BBox {
            x1: self.y1,
            y1: self.x1,
            x2: self.y2,
            y2: self.x2,
        }
    }
}

/// Intersection over union under the continuous-area convention.
///
/// Symmetric in its arguments; always in `[0, 1]` for valid boxes.
pub fn iou(a: BBox, b: BBox) -> f64 {
    let ix = (a.x2.min(b.x2) - a.x1.max(b.x1)).max(0.0);
    let iy = (a.y2.min(b.y2) - a.y1.max(b.y1)).max(0.0);
    let inter = ix * iy;
    if inter == 0.0 {
        return 0.0;
    }
    inter / (a.area() + b.area() - inter)
}

/// Anchor tiling parameters: output stride and per-cell scale/ratio lattice.
///
/// Ratios are height/width. The defaults (stride 8, scales 32/64/128,
/// ratios 0.5/1/2) are standard RPN conventions; override them through the
/// tool configuration when the target setup differs.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorGridSpec {
    stride: u32,
    scales: Vec<f64>,
    ratios: Vec<f64>,
}

impl AnchorGridSpec {
    pub fn new(stride: u32, scales: Vec<f64>, ratios: Vec<f64>) -> Result<Self> {
        if stride == 0 {
            return Err(Error::Config("anchor stride must be >= 1".into()));
        }
        if scales.is_empty() || ratios.is_empty() {
            return Err(Error::Config("scales and ratios must be non-empty".into()));
        }
        if let Some(s) = scales.iter().find(|s| !s.is_finite() || **s <= 0.0) {
            return Err(Error::Config(format!("anchor scale {s} must be positive")));
        }
        if let Some(r) = ratios.iter().find(|r| !r.is_finite() || **r <= 0.0) {
            return Err(Error::Config(format!("anchor ratio {r} must be positive")));
        }
        Ok(Self {
            stride,
            scales,
            ratios,
        })
    }

    pub fn stride(&self) -> u32 {
        self.stride
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }
}

impl Default for AnchorGridSpec {
    fn default() -> Self {
        Self {
            stride: 8,
            scales: vec![32.0, 64.0, 128.0],
            ratios: vec![0.5, 1.0, 2.0],
        }
    }
}

/// Anchors tiled on a stride-R grid, in deterministic order:
/// row-major over grid cells, then scale index, then ratio index.
///
/// Anchors are not clipped to the image; out-of-image extents are preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSet {
    anchors: Vec<BBox>,
    centers: Vec<(u32, u32)>,
    grid_w: u32,
    grid_h: u32,
    n_scales: usize,
    n_ratios: usize,
}

impl AnchorSet {
    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    pub fn anchors(&self) -> &[BBox] {
        &self.anchors
    }

    /// Per-anchor (grid_x, grid_y) cell indices into the (W/R)x(H/R) grid.
    pub fn centers(&self) -> &[(u32, u32)] {
        &self.centers
    }

    pub fn grid_w(&self) -> u32 {
        self.grid_w
    }

    pub fn grid_h(&self) -> u32 {
        self.grid_h
    }

    /// Scale index of anchor `i`, recovered from the deterministic ordering.
    pub fn scale_index(&self, i: usize) -> usize {
        (i % (self.n_scales * self.n_ratios)) / self.n_ratios
    }

    /// Ratio index of anchor `i`, recovered from the deterministic ordering.
    pub fn ratio_index(&self, i: usize) -> usize {
        i % self.n_ratios
    }
}

/// Tiles one anchor per (grid cell x scale x ratio) over the image.
///
/// The image dimensions must be divisible by the stride; pad the image before
/// calling when they are not. Anchor centers sit at cell centers
/// `((gx + 0.5) * R, (gy + 0.5) * R)`; a scale `s` with ratio `r` yields a
/// `s/sqrt(r)` wide and `s*sqrt(r)` tall box.
pub fn generate_anchors(spec: &AnchorGridSpec, image_w: u32, image_h: u32) -> Result<AnchorSet> {
    let r = spec.stride;
    if image_w == 0 || image_h == 0 || !image_w.is_multiple_of(r) || !image_h.is_multiple_of(r) {
        return Err(Error::Dimension(format!(
            "image {image_w}x{image_h} not divisible by stride {r}"
        )));
    }
    let grid_w = image_w / r;
    let grid_h = image_h / r;

    // Precompute half-extents per (scale, ratio).
    let mut half_extents = Vec::with_capacity(spec.scales.len() * spec.ratios.len());
    for &scale in &spec.scales {
        for &ratio in &spec.ratios {
            let w = scale / ratio.sqrt();
            let h = scale * ratio.sqrt();
            half_extents.push((w / 2.0, h / 2.0));
        }
    }

    let total = (grid_w as usize) * (grid_h as usize) * half_extents.len();
    let mut anchors = Vec::with_capacity(total);
    let mut centers = Vec::with_capacity(total);
    for gy in 0..grid_h {
        let cy = (f64::from(gy) + 0.5) * f64::from(r);
        for gx in 0..grid_w {
            let cx = (f64::from(gx) + 0.5) * f64::from(r);
            for &(hw, hh) in &half_extents {
                anchors.push(BBox {
                    x1: cx - hw,
                    y1: cy - hh,
                    x2: cx + hw,
                    y2: cy + hh,
                });
                centers.push((gx, gy));
            }
        }
    }

    Ok(AnchorSet {
        anchors,
        centers,
        grid_w,
        grid_h,
        n_scales: spec.scales.len(),
        n_ratios: spec.ratios.len(),
    })
}

/// RPN box-delta encoding of `gt` relative to `anchor`:
/// `(dx/aw, dy/ah, ln(gw/aw), ln(gh/ah))`.
pub fn box_delta_encode(anchor: BBox, gt: BBox) -> [f64; 4] {
    let (ax, ay) = anchor.center();
    let (gx, gy) = gt.center();
    [
        (gx - ax) / anchor.width(),
        (gy - ay) / anchor.height(),
        (gt.width() / anchor.width()).ln(),
        (gt.height() / anchor.height()).ln(),
    ]
}

/// Inverse of [`box_delta_encode`]. Extents stay positive because the decoded
/// width/height go through `exp`; the only failure mode is overflow to
/// non-finite coordinates from absurdly large deltas.
pub fn box_delta_decode(delta: [f64; 4], anchor: BBox) -> Result<BBox> {
    let (ax, ay) = anchor.center();
    let cx = ax + delta[0] * anchor.width();
    let cy = ay + delta[1] * anchor.height();
    let w = anchor.width() * delta[2].exp();
    let h = anchor.height() * delta[3].exp();
    BBox::new(cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0)
}
