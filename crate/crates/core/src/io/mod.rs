//! File formats: JSONL annotations, CSV predictions, the binary map
//! container, and PGM rendering.

mod annotations;
mod bmap;
mod pgm;
mod predictions;

pub use annotations::{read_annotations, read_annotations_from, write_annotations, AnnotationRecord};
pub use bmap::{read_map, read_map_file, write_map, write_map_file};
pub use pgm::render_pgm;
pub use predictions::{read_predictions, read_predictions_from, write_predictions};
