//! Predictions CSV with the fixed header `image_id,x1,y1,x2,y2,score`.
//!
//! The image id must not contain commas or quotes; the writer rejects ids
//! that would not read back.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::DetectionRecord;
use crate::geometry::BBox;

const HEADER: &str = "image_id,x1,y1,x2,y2,score";

pub fn read_predictions_from<R: Read>(reader: R) -> Result<Vec<DetectionRecord>> {
    let mut lines = BufReader::new(reader).lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
    if header.trim_end() != HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header '{HEADER}', got '{header}'"),
        });
    }

    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let image_id = fields[0].to_string();
        if image_id.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "field image_id: must be non-empty".into(),
            });
        }
        let num = |idx: usize, name: &str| -> Result<f64> {
            fields[idx].trim().parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("field {name}: expected a number, got '{}'", fields[idx]),
            })
        };
        let bbox = BBox::new(num(1, "x1")?, num(2, "y1")?, num(3, "x2")?, num(4, "y2")?)
            .map_err(|e| Error::Parse {
                line: line_no,
                message: format!("fields x1..y2: {e}"),
            })?;
        let score = num(5, "score")?;
        let record = DetectionRecord::new(image_id, bbox, score).map_err(|e| Error::Parse {
            line: line_no,
            message: format!("field score: {e}"),
        })?;
        records.push(record);
    }
    Ok(records)
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<Vec<DetectionRecord>> {
    read_predictions_from(std::fs::File::open(path)?)
}

pub fn write_predictions<W: Write>(mut writer: W, records: &[DetectionRecord]) -> Result<()> {
    writeln!(writer, "{HEADER}")?;
    for r in records {
        if r.image_id.contains(',') || r.image_id.contains('"') {
            return Err(Error::Format(format!(
                "image_id '{}' contains characters unsupported by the CSV layout",
                r.image_id
            )));
        }
        writeln!(
            writer,
            "{},{},{},{},{},{}",
            r.image_id,
            r.bbox.x1(),
            r.bbox.y1(),
            r.bbox.x2(),
            r.bbox.y2(),
            r.score
        )?;
    }
    Ok(())
}
