//! Binary map container.
//!
//! Layout (all integers 32-bit little-endian):
//! magic `BMAP`, version (= 1), width, height, channels, then
//! `width * height * channels` IEEE-754 32-bit little-endian values in
//! channel-major then row-major order. Values survive a write/read cycle
//! bit-exactly at 32-bit precision.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::MapGrid;

const MAGIC: &[u8; 4] = b"BMAP";
const VERSION: u32 = 1;

// Caps the header product so a corrupt header cannot trigger a huge allocation.
const MAX_VALUES: u64 = 1 << 30;

pub fn write_map<W: Write>(writer: W, m: &MapGrid) -> Result<()> {
    let mut w = BufWriter::new(writer);
    w.write_all(MAGIC)?;
    for dim in [VERSION, m.width() as u32, m.height() as u32, m.channels() as u32] {
        w.write_all(&dim.to_le_bytes())?;
    }
    for &v in m.data() {
        w.write_all(&(v as f32).to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_map<R: Read>(reader: R) -> Result<MapGrid> {
    let mut r = BufReader::new(reader);
    let mut magic = [0u8; 4];
    read_exact(&mut r, &mut magic, "magic")?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:02x?}, expected {MAGIC:02x?}",
            magic
        )));
    }
    let version = read_u32(&mut r, "version")?;
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version}, expected {VERSION}"
        )));
    }
    let width = read_u32(&mut r, "width")? as usize;
    let height = read_u32(&mut r, "height")? as usize;
    let channels = read_u32(&mut r, "channels")? as usize;
    let count = width as u64 * height as u64 * channels as u64;
    if count == 0 || count > MAX_VALUES {
        return Err(Error::Format(format!(
            "implausible shape {width}x{height}x{channels}"
        )));
    }

    let mut data = Vec::with_capacity(count as usize);
    let mut buf = [0u8; 4];
    for _ in 0..count {
        read_exact(&mut r, &mut buf, "values")?;
        data.push(f64::from(f32::from_le_bytes(buf)));
    }
    MapGrid::from_vec(width, height, channels, data)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::Format(format!("truncated while reading {what}"))
        } else {
            Error::Io(e)
        }
    })
}

fn read_u32<R: Read>(r: &mut R, what: &str) -> Result<u32> {
    let mut buf = [0u8; 4];
    read_exact(r, &mut buf, what)?;
    Ok(u32::from_le_bytes(buf))
}

pub fn write_map_file(path: impl AsRef<Path>, m: &MapGrid) -> Result<()> {
    write_map(std::fs::File::create(path)?, m)
}

pub fn read_map_file(path: impl AsRef<Path>) -> Result<MapGrid> {
    read_map(std::fs::File::open(path)?)
}
