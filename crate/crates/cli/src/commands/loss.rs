//! Aggregate-loss evaluation over a serialized batch directory:
//!
//! - `anchors.csv`: `pred,label,iou,tx_pred,ty_pred,tw_pred,th_pred,tx_gt,ty_gt,tw_gt,th_gt`
//! - `rois.csv` (optional): `cls_score,tx_pred,ty_pred,tw_pred,th_pred,tx_gt,ty_gt,tw_gt,th_gt,pred_bm,gt_bm`
//!   where `pred_bm`/`gt_bm` name 2-channel BMAP files relative to the directory.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::{bail, Context, Result};

use bm_core::io::read_map_file;
use bm_core::loss::{full_loss, AnchorTerms, RoiTerm};
use bm_core::AnchorLabels;

const ANCHOR_HEADER: &str = "pred,label,iou,tx_pred,ty_pred,tw_pred,th_pred,tx_gt,ty_gt,tw_gt,th_gt";
const ROI_HEADER: &str = "cls_score,tx_pred,ty_pred,tw_pred,th_pred,tx_gt,ty_gt,tw_gt,th_gt,pred_bm,gt_bm";

struct AnchorBatch {
    pred: Vec<f64>,
    labels: AnchorLabels,
    pred_deltas: Vec<[f64; 4]>,
    target_deltas: Vec<[f64; 4]>,
}

fn split_checked(line: &str, line_no: usize, expected: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != expected {
        bail!("line {line_no}: expected {expected} fields, got {}", fields.len());
    }
    Ok(fields)
}

fn parse_num(field: &str, line_no: usize, name: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .with_context(|| format!("line {line_no}: field {name}"))
}

fn read_anchor_batch(path: &Path) -> Result<AnchorBatch> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    match lines.next().transpose()? {
        Some(h) if h.trim_end() == ANCHOR_HEADER => {}
        Some(h) => bail!("line 1: expected header '{ANCHOR_HEADER}', got '{h}'"),
        None => bail!("empty anchors file"),
    }
    let mut pred = Vec::new();
    let mut labels = Vec::new();
    let mut ious = Vec::new();
    let mut pred_deltas = Vec::new();
    let mut target_deltas = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f = split_checked(&line, line_no, 11)?;
        pred.push(parse_num(f[0], line_no, "pred")?);
        labels.push(parse_num(f[1], line_no, "label")?);
        ious.push(parse_num(f[2], line_no, "iou")?);
        pred_deltas.push([
            parse_num(f[3], line_no, "tx_pred")?,
            parse_num(f[4], line_no, "ty_pred")?,
            parse_num(f[5], line_no, "tw_pred")?,
            parse_num(f[6], line_no, "th_pred")?,
        ]);
        target_deltas.push([
            parse_num(f[7], line_no, "tx_gt")?,
            parse_num(f[8], line_no, "ty_gt")?,
            parse_num(f[9], line_no, "tw_gt")?,
            parse_num(f[10], line_no, "th_gt")?,
        ]);
    }
    Ok(AnchorBatch {
        pred,
        labels: AnchorLabels::new(labels, ious)?,
        pred_deltas,
        target_deltas,
    })
}

fn read_roi_batch(dir: &Path, path: &Path) -> Result<Vec<RoiTerm>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    match lines.next().transpose()? {
        Some(h) if h.trim_end() == ROI_HEADER => {}
        Some(h) => bail!("line 1: expected header '{ROI_HEADER}', got '{h}'"),
        None => bail!("empty rois file"),
    }
    let mut terms = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let f = split_checked(&line, line_no, 11)?;
        let load = |name: &str| -> Result<_> {
            read_map_file(dir.join(name))
                .with_context(|| format!("line {line_no}: loading map '{name}'"))
        };
        terms.push(RoiTerm {
            cls_score: parse_num(f[0], line_no, "cls_score")?,
            pred_delta: [
                parse_num(f[1], line_no, "tx_pred")?,
                parse_num(f[2], line_no, "ty_pred")?,
                parse_num(f[3], line_no, "tw_pred")?,
                parse_num(f[4], line_no, "th_pred")?,
            ],
            target_delta: [
                parse_num(f[5], line_no, "tx_gt")?,
                parse_num(f[6], line_no, "ty_gt")?,
                parse_num(f[7], line_no, "tw_gt")?,
                parse_num(f[8], line_no, "th_gt")?,
            ],
            pred_bm: load(f[9].trim())?,
            gt_bm: load(f[10].trim())?,
        });
    }
    Ok(terms)
}

pub fn run(inputs: &Path, out: &Path) -> Result<()> {
    let batch = read_anchor_batch(&inputs.join("anchors.csv"))?;
    let roi_path = inputs.join("rois.csv");
    let rois = if roi_path.exists() {
        read_roi_batch(inputs, &roi_path)?
    } else {
        Vec::new()
    };

    let terms = AnchorTerms {
        pred: &batch.pred,
        labels: &batch.labels,
        pred_deltas: &batch.pred_deltas,
        target_deltas: &batch.target_deltas,
    };
    let report = full_loss(&terms, &rois)?;
    fs::write(out, report.to_key_value())?;
    print!("{}", report.to_key_value());
    Ok(())
}
