//! Dense multi-channel grid of real values.
//!
//! Storage is channel-major, then row-major within a channel:
//! `index = (c * height + y) * width + x`. Bounding maps are single-channel
//! grids with values in `[0, 1]`; windowed CT intensities and other generic
//! grids may hold any finite values.

use crate::error::{Error, Result};

/// W x H x C grid of `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGrid {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl MapGrid {
    /// All-zero grid with the given shape.
    pub fn new(width: usize, height: usize, channels: usize) -> Result<Self> {
        if width == 0 || height == 0 || channels == 0 {
            return Err(Error::Dimension(format!(
                "grid dimensions must be positive, got {width}x{height}x{channels}"
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data: vec![0.0; width * height * channels],
        })
    }

    /// Single-channel all-zero grid.
    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, 1)
    }

    /// Grid from raw channel-major data; the length must match the shape.
    pub fn from_vec(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || channels == 0 {
            return Err(Error::Dimension(format!(
                "grid dimensions must be positive, got {width}x{height}x{channels}"
            )));
        }
        let expected = width * height * channels;
        if data.len() != expected {
            return Err(Error::Dimension(format!(
                "data length {} does not match {width}x{height}x{channels} = {expected}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.width, self.height, self.channels)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, c: usize) -> usize {
        debug_assert!(x < self.width && y < self.height && c < self.channels);
        (c * self.height + y) * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[self.index(x, y, c)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: usize, value: f64) {
        let i = self.index(x, y, c);
        self.data[i] = value;
    }

    /// Contiguous slice holding one channel.
    pub fn channel(&self, c: usize) -> &[f64] {
        let n = self.width * self.height;
        &self.data[c * n..(c + 1) * n]
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// True when both grids have identical width, height, and channel count.
    pub fn same_shape(&self, other: &MapGrid) -> bool {
        self.shape() == other.shape()
    }

    /// Checks the bounding-map value invariant: every value finite and in `[0, 1]`.
    pub fn validate_unit_range(&self) -> Result<()> {
        for (i, &v) in self.data.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!(
                    "value {v} at flat index {i} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}
