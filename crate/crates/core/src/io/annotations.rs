//! JSON-lines annotations, one image per line:
//! `{"image_id": "...", "width": 800, "height": 800, "boxes": [[x1,y1,x2,y2], ...]}`
//!
//! Coordinates are pixels in the stored image size. Parsers reject any record
//! violating the box invariants instead of repairing it.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::BBox;

#[derive(Serialize, Deserialize)]
struct RawAnnotation {
    image_id: String,
    width: u32,
    height: u32,
    boxes: Vec<[f64; 4]>,
}

/// One annotated image.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationRecord {
    pub image_id: String,
    pub width: u32,
    pub height: u32,
    pub boxes: Vec<BBox>,
}

pub fn read_annotations_from<R: Read>(reader: R) -> Result<Vec<AnnotationRecord>> {
    let mut records = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawAnnotation = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if raw.image_id.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "image_id must be non-empty".into(),
            });
        }
        if raw.width == 0 || raw.height == 0 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("image size {}x{} must be positive", raw.width, raw.height),
            });
        }
        let mut boxes = Vec::with_capacity(raw.boxes.len());
        for (bi, &[x1, y1, x2, y2]) in raw.boxes.iter().enumerate() {
            let bbox = BBox::new(x1, y1, x2, y2).map_err(|e| Error::Parse {
                line: line_no,
                message: format!("box {bi}: {e}"),
            })?;
            boxes.push(bbox);
        }
        records.push(AnnotationRecord {
            image_id: raw.image_id,
            width: raw.width,
            height: raw.height,
            boxes,
        });
    }
    Ok(records)
}

pub fn read_annotations(path: impl AsRef<Path>) -> Result<Vec<AnnotationRecord>> {
    read_annotations_from(std::fs::File::open(path)?)
}

pub fn write_annotations<W: Write>(mut writer: W, records: &[AnnotationRecord]) -> Result<()> {
    for record in records {
        let raw = RawAnnotation {
            image_id: record.image_id.clone(),
            width: record.width,
            height: record.height,
            boxes: record
                .boxes
                .iter()
                .map(|b| [b.x1(), b.y1(), b.x2(), b.y2()])
                .collect(),
        };
        let line = serde_json::to_string(&raw).expect("serializable record");
        writeln!(writer, "{line}")?;
    }
    Ok(())
}
