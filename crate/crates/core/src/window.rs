//! CT intensity windowing.

use crate::error::{Error, Result};
use crate::grid::MapGrid;

/// Linearly rescales Hounsfield intensities in `[low, high]` to `[0, 255]`,
/// clamping outside the window: `v -> clamp((v - low) / (high - low), 0, 1) * 255`.
pub fn apply_window(intensities: &MapGrid, low: f64, high: f64) -> Result<MapGrid> {
    if !(low.is_finite() && high.is_finite()) || low >= high {
        return Err(Error::Config(format!(
            "window low must be below high, got [{low}, {high}]"
        )));
    }
    let span = high - low;
    let data = intensities
        .data()
        .iter()
        .map(|&v| ((v - low) / span).clamp(0.0, 1.0) * 255.0)
        .collect();
    MapGrid::from_vec(
        intensities.width(),
        intensities.height(),
        intensities.channels(),
        data,
    )
}
