use std::collections::HashMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use bm_core::eval::{froc_curve, sensitivity_at_fppi, ImageSample};
use bm_core::io::{read_annotations, read_predictions};

pub fn run(
    annotations: &Path,
    predictions: &Path,
    fppi_targets: &[f64],
    match_iou: f64,
    curve_out: Option<&Path>,
    summary_out: Option<&Path>,
) -> Result<()> {
    if !(0.0..=1.0).contains(&match_iou) {
        bail!("--match-iou must be in [0, 1], got {match_iou}");
    }
    let records = read_annotations(annotations)
        .with_context(|| format!("reading {}", annotations.display()))?;
    let dets = read_predictions(predictions)
        .with_context(|| format!("reading {}", predictions.display()))?;

    let index: HashMap<&str, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.image_id.as_str(), i))
        .collect();
    let mut samples: Vec<ImageSample> = records
        .iter()
        .map(|r| ImageSample {
            detections: Vec::new(),
            ground_truths: r.boxes.clone(),
        })
        .collect();
    for det in dets {
        match index.get(det.image_id.as_str()) {
            Some(&i) => samples[i].detections.push(det),
            None => bail!("prediction references unknown image_id '{}'", det.image_id),
        }
    }

    let curve = froc_curve(&samples, match_iou)?;
    let sens = sensitivity_at_fppi(&curve, fppi_targets);

    if let Some(path) = curve_out {
        let mut csv = String::from("threshold,fppi,sensitivity\n");
        for p in curve.points() {
            csv.push_str(&format!("{},{},{}\n", p.threshold, p.fppi, p.sensitivity));
        }
        fs::write(path, csv)?;
    }

    let mut summary = format!("images={}\nground_truths={}\n", curve.n_images(), curve.n_gts());
    summary.push_str("fppi");
    for t in fppi_targets {
        summary.push_str(&format!(",@{t}"));
    }
    summary.push('\n');
    summary.push_str("sensitivity");
    for s in &sens {
        summary.push_str(&format!(",{s}"));
    }
    summary.push('\n');

    if let Some(path) = summary_out {
        fs::write(path, &summary)?;
    }
    print!("{summary}");
    Ok(())
}
