//! Soft bounding-map targets for two-stage anchor-based lesion detection.
//!
//! A ground-truth box is represented as three continuous maps: per-axis maps
//! falling linearly from 1 on the box center line to 0.5 on the border (0
//! outside), and their cellwise geometric mean. The joint map, downsampled to
//! the anchor grid, replaces binary positive-anchor labels with graded ones;
//! the per-axis maps, cropped per ROI, supervise a second-stage map branch.
//!
//! Modules:
//! - [`geometry`]: boxes, IoU, anchor tiling, box-delta transforms.
//! - [`maps`]: per-box and combined bounding maps (linear and Gaussian).
//! - [`resample`]: bilinear resize, stride downsampling, ROI crop.
//! - [`labels`]: graded anchor labels and minibatch sampling.
//! - [`loss`]: classification/regression/map losses with analytic gradients
//!   and a finite-difference checking harness.
//! - [`eval`]: greedy matching, FROC curve, sensitivity at FPPI.
//! - [`window`]: CT Hounsfield windowing.
//! - [`config`], [`io`]: tool configuration and file formats.

pub mod config;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod labels;
pub mod loss;
pub mod maps;
pub mod resample;
pub mod window;

pub use config::ToolConfig;
pub use error::{Error, Result};
pub use eval::{DetectionRecord, FrocCurve, FrocPoint, ImageSample};
pub use geometry::{AnchorGridSpec, AnchorSet, BBox};
pub use grid::MapGrid;
pub use labels::{AnchorLabels, ThresholdConfig};
pub use loss::LossReport;
pub use maps::{BmVariant, BoundingMaps};
