use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;

use bm_core::geometry::generate_anchors;
use bm_core::io::read_annotations;
use bm_core::labels::{assign_labels, assign_labels_forced};
use bm_core::resample::stride_downsample;
use bm_core::ToolConfig;

use super::{maps_for, with_pool};

pub fn run(
    annotations: &Path,
    config: Option<&Path>,
    out: &Path,
    jobs: usize,
) -> Result<()> {
    let cfg = match config {
        Some(path) => {
            ToolConfig::from_path(path).with_context(|| format!("reading {}", path.display()))?
        }
        None => ToolConfig::default(),
    };
    let spec = cfg.anchor_spec()?;
    let thresholds = cfg.thresholds()?;
    let records = read_annotations(annotations)
        .with_context(|| format!("reading {}", annotations.display()))?;

    let blocks: Vec<String> = with_pool(jobs, || {
        records
            .par_iter()
            .map(|record| -> Result<String> {
                let set = generate_anchors(&spec, record.width, record.height)
                    .with_context(|| format!("image '{}'", record.image_id))?;
                let maps = maps_for(record, cfg.bm_variant)?;
                let bm_r = stride_downsample(&maps.map_xy, cfg.stride)?;
                let labeled = if cfg.force_best_match {
                    assign_labels_forced(&set, &record.boxes, &bm_r, thresholds)?
                } else {
                    assign_labels(&set, &record.boxes, &bm_r, thresholds)?
                };
                let mut block = String::new();
                for i in 0..set.len() {
                    let (gx, gy) = set.centers()[i];
                    block.push_str(&format!(
                        "{},{gx},{gy},{},{},{},{}\n",
                        record.image_id,
                        set.scale_index(i),
                        set.ratio_index(i),
                        labeled.ious()[i],
                        labeled.labels()[i]
                    ));
                }
                Ok(block)
            })
            .collect()
    })?;

    let mut file = fs::File::create(out)?;
    writeln!(file, "image_id,grid_x,grid_y,scale_idx,ratio_idx,iou,label")?;
    for block in &blocks {
        file.write_all(block.as_bytes())?;
    }
    println!("label-anchors: wrote {} images to {}", records.len(), out.display());
    Ok(())
}
