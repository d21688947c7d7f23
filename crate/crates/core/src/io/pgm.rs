//! 8-bit binary PGM (P5) rendering of one map channel.

use crate::error::{Error, Result};
use crate::grid::MapGrid;

/// Renders one channel as a P5 PGM with maxval 255. Values are clamped to
/// `[0, 1]` and scaled with round-half-up so golden files are stable.
pub fn render_pgm(m: &MapGrid, channel: usize) -> Result<Vec<u8>> {
    if channel >= m.channels() {
        return Err(Error::Dimension(format!(
            "channel {channel} out of range for {} channels",
            m.channels()
        )));
    }
    let mut out = format!("P5\n{} {}\n255\n", m.width(), m.height()).into_bytes();
    out.reserve(m.width() * m.height());
    for &v in m.channel(channel) {
        out.push((255.0 * v.clamp(0.0, 1.0) + 0.5).floor() as u8);
    }
    Ok(out)
}
