//! Tool configuration: flat key=value text with strict key checking.
//!
//! ```text
//! # anchor tiling
//! stride = 8
//! scales = 32,64,128
//! ratios = 0.5,1,2
//! iou_min = 0.3
//! iou_max = 0.5
//! bm_variant = linear
//! roi_out_size = 128
//! fppi_targets = 0.5,1,2,3,4
//! match_iou = 0.5
//! windows = 50:449,-505:1980,446:1960
//! force_best_match = false
//! ```
//!
//! Unknown keys are rejected rather than ignored. Blank lines and lines
//! starting with `#` are skipped.

use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::DEFAULT_FPPI_TARGETS;
use crate::geometry::AnchorGridSpec;
use crate::labels::ThresholdConfig;
use crate::maps::BmVariant;

/// Everything the batch commands need. The anchor stride/scales/ratios and
/// the negative threshold are conventions, not values fixed by the task;
/// override them per dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ToolConfig {
    pub stride: u32,
    pub scales: Vec<f64>,
    pub ratios: Vec<f64>,
    pub iou_min: f64,
    pub iou_max: f64,
    pub bm_variant: BmVariant,
    pub roi_out_size: usize,
    pub fppi_targets: Vec<f64>,
    pub match_iou: f64,
    /// Hounsfield window ranges as (low, high) pairs.
    pub windows: Vec<(f64, f64)>,
    pub force_best_match: bool,
}

impl Default for ToolConfig {
    fn default() -> Self {
        Self {
            stride: 8,
            scales: vec![32.0, 64.0, 128.0],
            ratios: vec![0.5, 1.0, 2.0],
            iou_min: 0.3,
            iou_max: 0.5,
            bm_variant: BmVariant::Linear,
            roi_out_size: 128,
            fppi_targets: DEFAULT_FPPI_TARGETS.to_vec(),
            match_iou: 0.5,
            windows: vec![(50.0, 449.0), (-505.0, 1980.0), (446.0, 1960.0)],
            force_best_match: false,
        }
    }
}

fn parse_f64(line: usize, key: &str, raw: &str) -> Result<f64> {
    raw.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("key '{key}': expected a number, got '{raw}'"),
    })
}

fn parse_list(line: usize, key: &str, raw: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|part| parse_f64(line, key, part))
        .collect()
}

fn parse_windows(line: usize, raw: &str) -> Result<Vec<(f64, f64)>> {
    raw.split(',')
        .map(|pair| {
            let (lo, hi) = pair.split_once(':').ok_or(Error::Parse {
                line,
                message: format!("window '{pair}' must be low:high"),
            })?;
            Ok((
                parse_f64(line, "windows", lo)?,
                parse_f64(line, "windows", hi)?,
            ))
        })
        .collect()
}

impl ToolConfig {
    /// Parses key=value text on top of the defaults.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = ToolConfig::default();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: line_no,
                message: format!("expected key=value, got '{line}'"),
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "stride" => {
                    cfg.stride = value.parse::<u32>().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("stride must be a positive integer, got '{value}'"),
                    })?;
                }
                "scales" => cfg.scales = parse_list(line_no, key, value)?,
                "ratios" => cfg.ratios = parse_list(line_no, key, value)?,
                "iou_min" => cfg.iou_min = parse_f64(line_no, key, value)?,
                "iou_max" => cfg.iou_max = parse_f64(line_no, key, value)?,
                "bm_variant" => cfg.bm_variant = value.parse()?,
                "roi_out_size" => {
                    cfg.roi_out_size = value.parse::<usize>().map_err(|_| Error::Parse {
                        line: line_no,
                        message: format!("roi_out_size must be a positive integer, got '{value}'"),
                    })?;
                }
                "fppi_targets" => cfg.fppi_targets = parse_list(line_no, key, value)?,
                "match_iou" => cfg.match_iou = parse_f64(line_no, key, value)?,
                "windows" => cfg.windows = parse_windows(line_no, value)?,
                "force_best_match" => {
                    cfg.force_best_match = match value {
                        "true" => true,
                        "false" => false,
                        other => {
                            return Err(Error::Parse {
                                line: line_no,
                                message: format!(
                                    "force_best_match must be true or false, got '{other}'"
                                ),
                            })
                        }
                    };
                }
                other => {
                    return Err(Error::Config(format!(
                        "unknown config key '{other}' at line {line_no}"
                    )))
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.anchor_spec()?;
        self.thresholds()?;
        if self.roi_out_size == 0 {
            return Err(Error::Config("roi_out_size must be >= 1".into()));
        }
        if self.fppi_targets.is_empty()
            || self.fppi_targets.iter().any(|t| !t.is_finite() || *t <= 0.0)
        {
            return Err(Error::Config("fppi_targets must be positive numbers".into()));
        }
        if !self.match_iou.is_finite() || !(0.0..=1.0).contains(&self.match_iou) {
            return Err(Error::Config(format!(
                "match_iou must be in [0, 1], got {}",
                self.match_iou
            )));
        }
        if self.windows.is_empty() {
            return Err(Error::Config("windows must be non-empty".into()));
        }
        for &(lo, hi) in &self.windows {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                return Err(Error::Config(format!(
                    "window low must be below high, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    pub fn anchor_spec(&self) -> Result<AnchorGridSpec> {
        AnchorGridSpec::new(self.stride, self.scales.clone(), self.ratios.clone())
    }

    pub fn thresholds(&self) -> Result<ThresholdConfig> {
        ThresholdConfig::new(self.iou_min, self.iou_max)
    }
}
