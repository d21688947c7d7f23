//! FROC evaluation: greedy detection/GT matching, the sensitivity-vs-FPPI
//! curve, and sensitivity readout at FPPI operating points.
//!
//! Matching is greedy in descending score order (ties broken by input
//! order): each detection takes the highest-IoU unmatched ground truth with
//! IoU at or above the matching threshold; each ground truth matches at most
//! one detection. Because higher-scored detections never see lower-scored
//! ones, the TP/FP flags are stable under score thresholding and the curve
//! can be built from one matching pass.

use crate::error::{Error, Result};
use crate::geometry::{iou, BBox};

/// One scored detection on one image.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord {
    pub image_id: String,
    pub bbox: BBox,
    pub score: f64,
}

impl DetectionRecord {
    pub fn new(image_id: impl Into<String>, bbox: BBox, score: f64) -> Result<Self> {
        if !score.is_finite() || !(0.0..=1.0).contains(&score) {
            return Err(Error::Domain(format!("score {score} outside [0, 1]")));
        }
        Ok(Self {
            image_id: image_id.into(),
            bbox,
            score,
        })
    }
}

/// Detections and ground truths for one image.
#[derive(Debug, Clone, Default)]
pub struct ImageSample {
    pub detections: Vec<DetectionRecord>,
    pub ground_truths: Vec<BBox>,
}

/// Greedy TP/FP flags, returned in the input detection order.
pub fn match_detections(dets: &[DetectionRecord], gts: &[BBox], iou_thresh: f64) -> Vec<bool> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].score.partial_cmp(&dets[a].score).expect("finite scores"));

    let mut gt_taken = vec![false; gts.len()];
    let mut flags = vec![false; dets.len()];
    for &di in &order {
        let mut best: Option<(usize, f64)> = None;
        for (gi, &gt) in gts.iter().enumerate() {
            if gt_taken[gi] {
                continue;
            }
            let v = iou(dets[di].bbox, gt);
            if v >= iou_thresh && best.is_none_or(|(_, bv)| v > bv) {
                best = Some((gi, v));
            }
        }
        if let Some((gi, _)) = best {
            gt_taken[gi] = true;
            flags[di] = true;
        }
    }
    flags
}

/// One operating point of the curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrocPoint {
    pub threshold: f64,
    pub fppi: f64,
    pub sensitivity: f64,
}

/// Sensitivity against false positives per image, swept over every distinct
/// detection score. Points are ordered by ascending threshold, so FPPI and
/// sensitivity are non-increasing along the list.
#[derive(Debug, Clone, PartialEq)]
pub struct FrocCurve {
    points: Vec<FrocPoint>,
    n_images: usize,
    n_gts: usize,
}

impl FrocCurve {
    pub fn points(&self) -> &[FrocPoint] {
        &self.points
    }

    pub fn n_images(&self) -> usize {
        self.n_images
    }

    pub fn n_gts(&self) -> usize {
        self.n_gts
    }
}

/// Builds the FROC curve over a set of images. Requires at least one image
/// and at least one ground truth overall.
pub fn froc_curve(samples: &[ImageSample], iou_thresh: f64) -> Result<FrocCurve> {
    if samples.is_empty() {
        return Err(Error::Domain("froc_curve needs at least one image".into()));
    }
    let n_gts: usize = samples.iter().map(|s| s.ground_truths.len()).sum();
    if n_gts == 0 {
        return Err(Error::Domain("froc_curve needs at least one ground truth".into()));
    }
    let n_images = samples.len();

    // One matching pass per image at threshold 0; flags are stable under
    // re-thresholding because greedy order is score order.
    let mut scored: Vec<(f64, bool)> = Vec::new();
    for sample in samples {
        let flags = match_detections(&sample.detections, &sample.ground_truths, iou_thresh);
        for (det, &tp) in sample.detections.iter().zip(&flags) {
            scored.push((det.score, tp));
        }
    }
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite scores"));

    let mut points = Vec::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut i = 0;
    while i < scored.len() {
        let threshold = scored[i].0;
        while i < scored.len() && scored[i].0 == threshold {
            if scored[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(FrocPoint {
            threshold,
            fppi: fp as f64 / n_images as f64,
            sensitivity: tp as f64 / n_gts as f64,
        });
    }
    points.reverse();
    Ok(FrocCurve {
        points,
        n_images,
        n_gts,
    })
}

/// For each FPPI target, the maximum sensitivity among curve points with
/// `fppi <= target`; 0 when no point qualifies. The conventional operating
/// points are 0.5, 1, 2, 3, and 4 false positives per image.
pub fn sensitivity_at_fppi(curve: &FrocCurve, targets: &[f64]) -> Vec<f64> {
    targets
        .iter()
        .map(|&t| {
            curve
                .points
                .iter()
                .filter(|p| p.fppi <= t)
                .map(|p| p.sensitivity)
                .fold(0.0f64, f64::max)
        })
        .collect()
}

/// Default FPPI operating points.
pub const DEFAULT_FPPI_TARGETS: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 4.0];
