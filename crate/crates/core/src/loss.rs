//! Loss functions with analytic gradients and a finite-difference harness.
//!
//! The anchor classification loss is a squared error against the graded
//! labels, masked to zero for drop-out anchors. The map-branch loss is a
//! mean squared error over a 2-channel map pair. Aggregation follows
//! `(1/M) * sum(reg + cls)` over training anchors plus `(1/N) * sum(box + map)`
//! over positive ROIs; the standalone losses normalize by their own entry
//! counts, while the aggregate applies the `1/M` and `1/N` factors to
//! unnormalized per-entry sums so nothing is normalized twice.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::MapGrid;
use crate::labels::AnchorLabels;

/// Aggregate loss breakdown. `total` is the exact sum of the four components.
#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    pub total: f64,
    pub anchor_cls: f64,
    pub anchor_reg: f64,
    pub roi_bbox: f64,
    pub roi_bm: f64,
    pub m_anchors: usize,
    pub n_rois: usize,
}

impl LossReport {
    /// Flat key=value rendering used by the CLI report output.
    pub fn to_key_value(&self) -> String {
        format!(
            "total={}\nanchor_cls={}\nanchor_reg={}\nroi_bbox={}\nroi_bm={}\nm_anchors={}\nn_rois={}\n",
            self.total,
            self.anchor_cls,
            self.anchor_reg,
            self.roi_bbox,
            self.roi_bm,
            self.m_anchors,
            self.n_rois
        )
    }
}

/// Squared-error anchor classification loss, averaged over the trained
/// (non-drop-out) anchors. Returns the value and the per-anchor gradient;
/// drop-out anchors contribute nothing and get an exactly zero gradient.
pub fn anchor_cls_loss(pred: &[f64], labels: &AnchorLabels) -> Result<(f64, Vec<f64>)> {
    if pred.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "pred len {} != labels len {}",
            pred.len(),
            labels.len()
        )));
    }
    let m = labels.trained_count();
    if m == 0 {
        return Err(Error::DegenerateInput("no trainable anchors (all drop-out)".into()));
    }
    let m_f = m as f64;
    let mut value = 0.0;
    let mut grad = vec![0.0f64; pred.len()];
    for (i, (&p, &l)) in pred.iter().zip(labels.labels()).enumerate() {
        if l == -1.0 {
            continue;
        }
        let d = p - l;
        value += d * d;
        grad[i] = 2.0 * d / m_f;
    }
    Ok((value / m_f, grad))
}

/// Mean squared error between two 2-channel map stacks (x map then y map).
/// The gradient is per cell in the grid's channel-major layout.
pub fn bm_branch_loss(pred: &MapGrid, gt: &MapGrid) -> Result<(f64, Vec<f64>)> {
    if !pred.same_shape(gt) {
        return Err(Error::Dimension(format!(
            "pred shape {:?} != gt shape {:?}",
            pred.shape(),
            gt.shape()
        )));
    }
    if pred.channels() != 2 {
        return Err(Error::Dimension(format!(
            "expected 2-channel maps, got {} channels",
            pred.channels()
        )));
    }
    let n = pred.data().len() as f64;
    let mut value = 0.0;
    let mut grad = Vec::with_capacity(pred.data().len());
    for (&p, &g) in pred.data().iter().zip(gt.data()) {
        let d = p - g;
        value += d * d;
        grad.push(2.0 * d / n);
    }
    Ok((value / n, grad))
}

/// Smooth-L1 of a scalar difference: quadratic below 1, linear above.
fn smooth_l1(d: f64) -> f64 {
    let a = d.abs();
    if a < 1.0 {
        0.5 * d * d
    } else {
        a - 0.5
    }
}

fn smooth_l1_grad(d: f64) -> f64 {
    if d.abs() < 1.0 {
        d
    } else {
        d.signum()
    }
}

/// Smooth-L1 box regression loss summed over the 4 delta components of each
/// active entry, averaged over the active count. No active entries is a
/// legitimate batch and contributes 0.
pub fn smooth_l1_reg_loss(
    pred_deltas: &[[f64; 4]],
    target_deltas: &[[f64; 4]],
    active: &[bool],
) -> Result<(f64, Vec<[f64; 4]>)> {
    if pred_deltas.len() != target_deltas.len() || pred_deltas.len() != active.len() {
        return Err(Error::Dimension(format!(
            "length mismatch: pred {}, target {}, active {}",
            pred_deltas.len(),
            target_deltas.len(),
            active.len()
        )));
    }
    let count = active.iter().filter(|a| **a).count();
    let mut grad = vec![[0.0f64; 4]; pred_deltas.len()];
    if count == 0 {
        return Ok((0.0, grad));
    }
    let c = count as f64;
    let mut value = 0.0;
    for i in 0..pred_deltas.len() {
        if !active[i] {
            continue;
        }
        for k in 0..4 {
            let d = pred_deltas[i][k] - target_deltas[i][k];
            value += smooth_l1(d);
            grad[i][k] = smooth_l1_grad(d) / c;
        }
    }
    Ok((value / c, grad))
}

/// Per-anchor inputs to [`full_loss`]: graded labels with classification
/// scores and box deltas. Regression deltas are trained on anchors with
/// label > 0 only.
#[derive(Debug, Clone)]
pub struct AnchorTerms<'a> {
    pub pred: &'a [f64],
    pub labels: &'a AnchorLabels,
    pub pred_deltas: &'a [[f64; 4]],
    pub target_deltas: &'a [[f64; 4]],
}

/// Per-ROI inputs to [`full_loss`]. Every entry is a positive ROI: the box
/// branch trains its score against 1 and its deltas against the target, and
/// the map branch trains a 2-channel map against the cropped ground truth.
#[derive(Debug, Clone)]
pub struct RoiTerm {
    pub cls_score: f64,
    pub pred_delta: [f64; 4],
    pub target_delta: [f64; 4],
    pub pred_bm: MapGrid,
    pub gt_bm: MapGrid,
}

/// Aggregates the anchor and ROI losses:
/// `(1/M) * sum(reg + cls)` over the M training anchors plus
/// `(1/N) * sum(box + map)` over the N positive ROIs. A batch with no
/// positive ROIs contributes 0 from the ROI side; a batch with no training
/// anchors is degenerate and rejected.
pub fn full_loss(anchor_terms: &AnchorTerms<'_>, roi_terms: &[RoiTerm]) -> Result<LossReport> {
    let n_anchors = anchor_terms.labels.len();
    if anchor_terms.pred.len() != n_anchors
        || anchor_terms.pred_deltas.len() != n_anchors
        || anchor_terms.target_deltas.len() != n_anchors
    {
        return Err(Error::Dimension(format!(
            "anchor term lengths disagree: pred {}, labels {}, deltas {}/{}",
            anchor_terms.pred.len(),
            n_anchors,
            anchor_terms.pred_deltas.len(),
            anchor_terms.target_deltas.len()
        )));
    }
    let m = anchor_terms.labels.trained_count();
    if m == 0 {
        return Err(Error::DegenerateInput("no trainable anchors (all drop-out)".into()));
    }
    let m_f = m as f64;

    let mut cls_sum = 0.0;
    let mut reg_sum = 0.0;
    for i in 0..n_anchors {
        let l = anchor_terms.labels.labels()[i];
        if l == -1.0 {
            continue;
        }
        let d = anchor_terms.pred[i] - l;
        cls_sum += d * d;
        if l > 0.0 {
            for k in 0..4 {
                reg_sum += smooth_l1(anchor_terms.pred_deltas[i][k] - anchor_terms.target_deltas[i][k]);
            }
        }
    }
    let anchor_cls = cls_sum / m_f;
    let anchor_reg = reg_sum / m_f;

    let n = roi_terms.len();
    let (mut bbox_sum, mut bm_sum) = (0.0, 0.0);
    for roi in roi_terms {
        let dc = roi.cls_score - 1.0;
        let mut b = dc * dc;
        for k in 0..4 {
            b += smooth_l1(roi.pred_delta[k] - roi.target_delta[k]);
        }
        bbox_sum += b;
        let (mse, _) = bm_branch_loss(&roi.pred_bm, &roi.gt_bm)?;
        bm_sum += mse;
    }
    let (roi_bbox, roi_bm) = if n == 0 {
        (0.0, 0.0)
    } else {
        (bbox_sum / n as f64, bm_sum / n as f64)
    };

    Ok(LossReport {
        total: anchor_cls + anchor_reg + roi_bbox + roi_bm,
        anchor_cls,
        anchor_reg,
        roi_bbox,
        roi_bm,
        m_anchors: m,
        n_rois: n,
    })
}

/// A scalar loss with analytic gradient over a flat parameter vector,
/// checkable by central finite differences.
pub trait DifferentiableLoss {
    fn eval(&self, params: &[f64]) -> f64;
    fn grad(&self, params: &[f64]) -> Vec<f64>;
}

/// [`anchor_cls_loss`] as a function of the prediction vector.
pub struct AnchorClsInstance {
    pub labels: AnchorLabels,
}

impl DifferentiableLoss for AnchorClsInstance {
    fn eval(&self, params: &[f64]) -> f64 {
        anchor_cls_loss(params, &self.labels).expect("valid instance").0
    }

    fn grad(&self, params: &[f64]) -> Vec<f64> {
        anchor_cls_loss(params, &self.labels).expect("valid instance").1
    }
}

/// [`bm_branch_loss`] as a function of the flattened predicted map.
pub struct BmBranchInstance {
    pub gt: MapGrid,
}

impl DifferentiableLoss for BmBranchInstance {
    fn eval(&self, params: &[f64]) -> f64 {
        let pred = MapGrid::from_vec(self.gt.width(), self.gt.height(), 2, params.to_vec())
            .expect("param length matches gt shape");
        bm_branch_loss(&pred, &self.gt).expect("valid instance").0
    }

    fn grad(&self, params: &[f64]) -> Vec<f64> {
        let pred = MapGrid::from_vec(self.gt.width(), self.gt.height(), 2, params.to_vec())
            .expect("param length matches gt shape");
        bm_branch_loss(&pred, &self.gt).expect("valid instance").1
    }
}

/// [`smooth_l1_reg_loss`] as a function of the flattened predicted deltas.
pub struct SmoothL1Instance {
    pub target_deltas: Vec<[f64; 4]>,
    pub active: Vec<bool>,
}

fn chunk4(flat: &[f64]) -> Vec<[f64; 4]> {
    flat.chunks_exact(4)
        .map(|c| [c[0], c[1], c[2], c[3]])
        .collect()
}

impl DifferentiableLoss for SmoothL1Instance {
    fn eval(&self, params: &[f64]) -> f64 {
        smooth_l1_reg_loss(&chunk4(params), &self.target_deltas, &self.active)
            .expect("valid instance")
            .0
    }

    fn grad(&self, params: &[f64]) -> Vec<f64> {
        smooth_l1_reg_loss(&chunk4(params), &self.target_deltas, &self.active)
            .expect("valid instance")
            .1
            .into_iter()
            .flatten()
            .collect()
    }
}

/// Central-difference gradient check. Returns the maximum over coordinates of
/// `|g_analytic - g_fd| / max(1e-8, |g_analytic| + |g_fd|)`.
pub fn finite_diff_check(loss: &dyn DifferentiableLoss, params: &[f64], step: f64) -> f64 {
    let analytic = loss.grad(params);
    let mut worst = 0.0f64;
    let mut probe = params.to_vec();
    for i in 0..params.len() {
        let orig = probe[i];
        probe[i] = orig + step;
        let hi = loss.eval(&probe);
        probe[i] = orig - step;
        let lo = loss.eval(&probe);
        probe[i] = orig;
        let fd = (hi - lo) / (2.0 * step);
        let rel = (analytic[i] - fd).abs() / (analytic[i].abs() + fd.abs()).max(1e-8);
        worst = worst.max(rel);
    }
    worst
}

/// Loss families covered by the gradient-check suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    AnchorCls,
    BmBranch,
    SmoothL1,
}

impl std::fmt::Display for LossKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LossKind::AnchorCls => write!(f, "anchor_cls"),
            LossKind::BmBranch => write!(f, "bm_branch"),
            LossKind::SmoothL1 => write!(f, "smooth_l1"),
        }
    }
}

/// Worst relative gradient error observed for one loss family.
#[derive(Debug, Clone)]
pub struct GradCheckOutcome {
    pub kind: LossKind,
    pub trials: usize,
    pub max_rel_error: f64,
    pub tolerance: f64,
}

impl GradCheckOutcome {
    pub fn passed(&self) -> bool {
        self.max_rel_error < self.tolerance
    }
}

fn random_anchor_instance(rng: &mut ChaCha8Rng) -> (AnchorClsInstance, Vec<f64>) {
    let n = rng.gen_range(3..=32);
    let mut labels = Vec::with_capacity(n);
    let mut ious = Vec::with_capacity(n);
    for _ in 0..n {
        let roll: f64 = rng.gen();
        if roll < 0.25 {
            labels.push(-1.0);
            ious.push(0.4);
        } else if roll < 0.6 {
            labels.push(0.0);
            ious.push(0.1);
        } else {
            labels.push(rng.gen::<f64>());
            ious.push(0.6);
        }
    }
    if labels.iter().all(|&l| l == -1.0) {
        labels[0] = 0.5;
        ious[0] = 0.7;
    }
    let preds: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    (
        AnchorClsInstance {
            labels: AnchorLabels::new(labels, ious).expect("valid labels"),
        },
        preds,
    )
}

fn random_bm_instance(rng: &mut ChaCha8Rng) -> (BmBranchInstance, Vec<f64>) {
    let w = rng.gen_range(3..=8);
    let h = rng.gen_range(3..=8);
    let gt_data: Vec<f64> = (0..w * h * 2).map(|_| rng.gen::<f64>()).collect();
    let pred: Vec<f64> = (0..w * h * 2).map(|_| rng.gen::<f64>()).collect();
    (
        BmBranchInstance {
            gt: MapGrid::from_vec(w, h, 2, gt_data).expect("valid shape"),
        },
        pred,
    )
}

/// Draws a delta difference away from the smooth-L1 kink at |d| = 1.
fn off_kink(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let d = rng.gen_range(-3.0..3.0);
        let a: f64 = f64::abs(d);
        if !(0.99..=1.01).contains(&a) {
            return d;
        }
    }
}

fn random_smooth_l1_instance(rng: &mut ChaCha8Rng) -> (SmoothL1Instance, Vec<f64>) {
    let n = rng.gen_range(1..=12);
    let mut active: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.7)).collect();
    if active.iter().all(|a| !a) {
        active[0] = true;
    }
    let target_deltas: Vec<[f64; 4]> = (0..n)
        .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
        .collect();
    let mut pred = Vec::with_capacity(n * 4);
    for t in &target_deltas {
        for &tk in t {
            pred.push(tk + off_kink(rng));
        }
    }
    (
        SmoothL1Instance {
            target_deltas,
            active,
        },
        pred,
    )
}

/// Runs `trials` random finite-difference checks per loss family.
pub fn gradient_check_suite(
    trials: usize,
    step: f64,
    tolerance: f64,
    seed: u64,
) -> Vec<GradCheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::new();
    for kind in [LossKind::AnchorCls, LossKind::BmBranch, LossKind::SmoothL1] {
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let err = match kind {
                LossKind::AnchorCls => {
                    let (inst, params) = random_anchor_instance(&mut rng);
                    finite_diff_check(&inst, &params, step)
                }
                LossKind::BmBranch => {
                    let (inst, params) = random_bm_instance(&mut rng);
                    finite_diff_check(&inst, &params, step)
                }
                LossKind::SmoothL1 => {
                    let (inst, params) = random_smooth_l1_instance(&mut rng);
                    finite_diff_check(&inst, &params, step)
                }
            };
            worst = worst.max(err);
        }
        outcomes.push(GradCheckOutcome {
            kind,
            trials,
            max_rel_error: worst,
            tolerance,
        });
    }
    outcomes
}
