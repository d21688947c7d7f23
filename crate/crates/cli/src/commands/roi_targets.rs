use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use bm_core::geometry::BBox;
use bm_core::io::{read_annotations, write_map_file};
use bm_core::resample::{concat_channels, roi_crop_resize};
use bm_core::ToolConfig;

use super::{check_id_filename_safe, maps_for, with_pool};

struct RoiRow {
    image_id: String,
    bbox: BBox,
    per_image_index: usize,
}

fn read_rois(path: &Path) -> Result<Vec<RoiRow>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    match lines.next().transpose()? {
        Some(h) if h.trim_end() == "image_id,x1,y1,x2,y2" => {}
        Some(h) => bail!("line 1: expected header 'image_id,x1,y1,x2,y2', got '{h}'"),
        None => bail!("empty roi file"),
    }
    let mut rows = Vec::new();
    let mut counters: HashMap<String, usize> = HashMap::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            bail!("line {line_no}: expected 5 fields, got {}", fields.len());
        }
        let parse = |idx: usize, name: &str| -> Result<f64> {
            fields[idx]
                .trim()
                .parse::<f64>()
                .with_context(|| format!("line {line_no}: field {name}"))
        };
        let bbox = BBox::new(parse(1, "x1")?, parse(2, "y1")?, parse(3, "x2")?, parse(4, "y2")?)
            .with_context(|| format!("line {line_no}"))?;
        let image_id = fields[0].to_string();
        let counter = counters.entry(image_id.clone()).or_insert(0);
        rows.push(RoiRow {
            image_id,
            bbox,
            per_image_index: *counter,
        });
        *counter += 1;
    }
    Ok(rows)
}

pub fn run(
    annotations: &Path,
    rois: &Path,
    config: Option<&Path>,
    out_dir: &Path,
    jobs: usize,
) -> Result<()> {
    let cfg = match config {
        Some(path) => {
            ToolConfig::from_path(path).with_context(|| format!("reading {}", path.display()))?
        }
        None => ToolConfig::default(),
    };
    let records = read_annotations(annotations)
        .with_context(|| format!("reading {}", annotations.display()))?;
    let by_id: HashMap<&str, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.image_id.as_str(), i))
        .collect();

    let rows = read_rois(rois)?;
    for row in &rows {
        check_id_filename_safe(&row.image_id)?;
        if !by_id.contains_key(row.image_id.as_str()) {
            bail!("roi references unknown image_id '{}'", row.image_id);
        }
    }
    fs::create_dir_all(out_dir)?;

    // Group rows per image so each image's maps are built once.
    let mut grouped: HashMap<&str, Vec<&RoiRow>> = HashMap::new();
    for row in &rows {
        grouped.entry(row.image_id.as_str()).or_default().push(row);
    }
    let mut groups: Vec<(&str, Vec<&RoiRow>)> = grouped.into_iter().collect();
    groups.sort_by_key(|(id, _)| by_id[id]);

    with_pool(jobs, || {
        groups.par_iter().try_for_each(|(id, image_rows)| -> Result<()> {
            let record = &records[by_id[id]];
            let maps = maps_for(record, cfg.bm_variant)?;
            for row in image_rows {
                let crop_x = roi_crop_resize(&maps.map_x, row.bbox, cfg.roi_out_size)
                    .with_context(|| format!("roi {} of image '{id}'", row.per_image_index))?;
                let crop_y = roi_crop_resize(&maps.map_y, row.bbox, cfg.roi_out_size)?;
                let stacked = concat_channels(&crop_x, &crop_y)?;
                let name = format!("{id}_roi{:03}.bmap", row.per_image_index);
                write_map_file(out_dir.join(name), &stacked)?;
            }
            Ok(())
        })
    })?;

    println!("roi-targets: wrote {} rois to {}", rows.len(), out_dir.display());
    Ok(())
}
