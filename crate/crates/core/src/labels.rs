//! Graded anchor ground-truth labels.
//!
//! Each anchor gets its max IoU against the ground-truth boxes and a label:
//! 0 when `iou <= iou_min`, -1 (drop-out, excluded from training) when
//! strictly inside the threshold band, and the downsampled joint-map value at
//! the anchor's center grid cell when `iou >= iou_max`. Equality with either
//! threshold counts as trained, matching the loss-side masking.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{iou, AnchorSet, BBox};
use crate::grid::MapGrid;

/// Negative/positive IoU thresholds, `0 <= iou_min < iou_max <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConfig {
    iou_min: f64,
    iou_max: f64,
}

impl ThresholdConfig {
    pub fn new(iou_min: f64, iou_max: f64) -> Result<Self> {
        if !iou_min.is_finite() || !iou_max.is_finite() {
            return Err(Error::Config("iou thresholds must be finite".into()));
        }
        if !(0.0..=1.0).contains(&iou_min) || !(0.0..=1.0).contains(&iou_max) || iou_min >= iou_max
        {
            return Err(Error::Config(format!(
                "need 0 <= iou_min < iou_max <= 1, got ({iou_min}, {iou_max})"
            )));
        }
        Ok(Self { iou_min, iou_max })
    }

    pub fn iou_min(&self) -> f64 {
        self.iou_min
    }

    pub fn iou_max(&self) -> f64 {
        self.iou_max
    }
}

impl Default for ThresholdConfig {
    /// 0.3 / 0.5: the standard negative threshold and the positive threshold
    /// used with graded labels.
    fn default() -> Self {
        Self {
            iou_min: 0.3,
            iou_max: 0.5,
        }
    }
}

/// Per-anchor labels in `{-1} u [0, 1]` with the max IoU that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorLabels {
    labels: Vec<f64>,
    ious: Vec<f64>,
}

impl AnchorLabels {
    pub fn new(labels: Vec<f64>, ious: Vec<f64>) -> Result<Self> {
        if labels.len() != ious.len() {
            return Err(Error::Dimension(format!(
                "labels len {} != ious len {}",
                labels.len(),
                ious.len()
            )));
        }
        for &l in &labels {
            if l != -1.0 && !(0.0..=1.0).contains(&l) {
                return Err(Error::Domain(format!("label {l} outside {{-1}} u [0, 1]")));
            }
        }
        Ok(Self { labels, ious })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn ious(&self) -> &[f64] {
        &self.ious
    }

    /// Number of trained (non-drop-out) anchors.
    pub fn trained_count(&self) -> usize {
        self.labels.iter().filter(|l| **l != -1.0).count()
    }

    /// (positive, negative, drop-out) branch counts under the given thresholds.
    pub fn branch_counts(&self, cfg: ThresholdConfig) -> (usize, usize, usize) {
        let mut pos = 0;
        let mut neg = 0;
        let mut drop = 0;
        for &v in &self.ious {
            if v >= cfg.iou_max {
                pos += 1;
            } else if v <= cfg.iou_min {
                neg += 1;
            } else {
                drop += 1;
            }
        }
        (pos, neg, drop)
    }
}

fn assign_labels_impl(
    anchors: &AnchorSet,
    gts: &[BBox],
    bm_r_xy: &MapGrid,
    cfg: ThresholdConfig,
    force_best_match: bool,
) -> Result<AnchorLabels> {
    if bm_r_xy.width() != anchors.grid_w() as usize
        || bm_r_xy.height() != anchors.grid_h() as usize
        || bm_r_xy.channels() != 1
    {
        return Err(Error::Dimension(format!(
            "map shape {:?} does not match {}x{}x1 anchor grid",
            bm_r_xy.shape(),
            anchors.grid_w(),
            anchors.grid_h()
        )));
    }

    let n = anchors.len();
    let mut ious = vec![0.0f64; n];
    for (i, &anchor) in anchors.anchors().iter().enumerate() {
        ious[i] = gts
            .iter()
            .map(|&gt| iou(anchor, gt))
            .fold(0.0f64, f64::max);
    }

    // Optional RPN-style forcing: the best anchor for each GT trains as
    // positive even below iou_max. Ties keep the first (lowest-index) anchor.
    let mut forced = vec![false; n];
    if force_best_match && n > 0 {
        for &gt in gts {
            let mut best_i = 0usize;
            let mut best = -1.0f64;
            for (i, &anchor) in anchors.anchors().iter().enumerate() {
                let v = iou(anchor, gt);
                if v > best {
                    best = v;
                    best_i = i;
                }
            }
            if best > 0.0 {
                forced[best_i] = true;
            }
        }
    }

    let mut labels = vec![0.0f64; n];
    for i in 0..n {
        let (gx, gy) = anchors.centers()[i];
        labels[i] = if ious[i] >= cfg.iou_max || forced[i] {
            bm_r_xy.get(gx as usize, gy as usize, 0)
        } else if ious[i] <= cfg.iou_min {
            0.0
        } else {
            -1.0
        };
    }
    AnchorLabels::new(labels, ious)
}

/// Labels every anchor against the ground-truth boxes using the downsampled
/// joint map for the positive branch. With no ground truth every label is 0.
pub fn assign_labels(
    anchors: &AnchorSet,
    gts: &[BBox],
    bm_r_xy: &MapGrid,
    cfg: ThresholdConfig,
) -> Result<AnchorLabels> {
    assign_labels_impl(anchors, gts, bm_r_xy, cfg, false)
}

/// [`assign_labels`] plus the standard RPN forced-match rule: the highest-IoU
/// anchor for each ground-truth box is labeled positive even below `iou_max`.
pub fn assign_labels_forced(
    anchors: &AnchorSet,
    gts: &[BBox],
    bm_r_xy: &MapGrid,
    cfg: ThresholdConfig,
) -> Result<AnchorLabels> {
    assign_labels_impl(anchors, gts, bm_r_xy, cfg, true)
}

/// Seeded minibatch selection: up to `positive_fraction * max_total` anchors
/// with label > 0, topped up with label == 0 anchors. Drop-out anchors are
/// never selected. Returns sorted positive indices followed by sorted
/// negative indices; the same seed gives the same list.
pub fn sample_minibatch(
    labels: &AnchorLabels,
    max_total: usize,
    positive_fraction: f64,
    seed: u64,
) -> Result<Vec<usize>> {
    if max_total == 0 {
        return Err(Error::Config("max_total must be >= 1".into()));
    }
    if !(positive_fraction > 0.0 && positive_fraction < 1.0) {
        return Err(Error::Config(format!(
            "positive_fraction must be in (0, 1), got {positive_fraction}"
        )));
    }

    let mut positives: Vec<usize> = Vec::new();
    let mut negatives: Vec<usize> = Vec::new();
    for (i, &l) in labels.labels().iter().enumerate() {
        if l > 0.0 {
            positives.push(i);
        } else if l == 0.0 {
            negatives.push(i);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pos_cap = (max_total as f64 * positive_fraction).floor() as usize;
    if positives.len() > pos_cap {
        positives.shuffle(&mut rng);
        positives.truncate(pos_cap);
        positives.sort_unstable();
    }
    let neg_need = max_total - positives.len();
    if negatives.len() > neg_need {
        negatives.shuffle(&mut rng);
        negatives.truncate(neg_need);
        negatives.sort_unstable();
    }

    positives.extend_from_slice(&negatives);
    Ok(positives)
}
