pub mod eval;
pub mod gen_maps;
pub mod gradcheck;
pub mod label_anchors;
pub mod loss;
pub mod roi_targets;

use anyhow::{bail, Result};

use bm_core::io::AnnotationRecord;
use bm_core::maps::{build_targets_with, BmVariant, BoundingMaps};
use bm_core::MapGrid;

/// Builds the three maps for an image; an image with no boxes gets all-zero
/// maps (nothing to encode, but the pipeline stays total).
pub fn maps_for(record: &AnnotationRecord, variant: BmVariant) -> Result<BoundingMaps> {
    let (w, h) = (record.width as usize, record.height as usize);
    if record.boxes.is_empty() {
        let zero = MapGrid::zeros(w, h)?;
        return Ok(BoundingMaps {
            map_x: zero.clone(),
            map_y: zero.clone(),
            map_xy: zero,
        });
    }
    Ok(build_targets_with(variant, &record.boxes, w, h)?)
}

/// Image ids become file names, so restrict them to a safe alphabet.
pub fn check_id_filename_safe(id: &str) -> Result<()> {
    if id.is_empty()
        || !id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'))
        || id.starts_with('.')
    {
        bail!("image_id '{id}' is not filename-safe (allowed: alphanumerics, '.', '_', '-')");
    }
    Ok(())
}

/// Scoped rayon pool so --jobs bounds parallelism per command.
pub fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    pool.install(f)
}
