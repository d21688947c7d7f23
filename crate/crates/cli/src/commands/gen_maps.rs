use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;

use bm_core::io::{read_annotations, render_pgm, write_map_file};
use bm_core::maps::BmVariant;

use super::{check_id_filename_safe, maps_for, with_pool};

pub fn run(
    annotations: &Path,
    out_dir: &Path,
    variant: BmVariant,
    render: bool,
    jobs: usize,
) -> Result<()> {
    let records = read_annotations(annotations)
        .with_context(|| format!("reading {}", annotations.display()))?;
    for r in &records {
        check_id_filename_safe(&r.image_id)?;
    }
    fs::create_dir_all(out_dir)?;

    with_pool(jobs, || {
        records.par_iter().try_for_each(|record| -> Result<()> {
            let maps = maps_for(record, variant)?;
            for (suffix, map) in [
                ("bm_x", &maps.map_x),
                ("bm_y", &maps.map_y),
                ("bm_xy", &maps.map_xy),
            ] {
                let stem = format!("{}_{suffix}", record.image_id);
                write_map_file(out_dir.join(format!("{stem}.bmap")), map)?;
                if render {
                    fs::write(out_dir.join(format!("{stem}.pgm")), render_pgm(map, 0)?)?;
                }
            }
            Ok(())
        })
    })?;

    println!("gen-maps: wrote {} images to {}", records.len(), out_dir.display());
    Ok(())
}
