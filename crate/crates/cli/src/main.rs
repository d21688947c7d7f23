//! bmdet: batch tool for bounding-map targets, anchor labels, loss reports,
//! and FROC evaluation.

mod commands;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Parser, Subcommand};

use bm_core::maps::BmVariant;

fn parse_variant(s: &str) -> Result<BmVariant, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// Comma-separated FPPI operating points as one argument value.
#[derive(Clone)]
struct FppiList(Vec<f64>);

fn parse_fppi_list(s: &str) -> Result<FppiList, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad fppi value '{p}'")))
        .collect::<Result<Vec<f64>, String>>()
        .map(FppiList)
}

#[derive(Parser)]
#[command(
    name = "bmdet",
    version,
    about = "Bounding-map generation, anchor labeling, loss evaluation, and FROC metrics"
)]
struct Cli {
    /// Seed for commands that draw random instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for per-image batch commands.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write per-image x/y/xy bounding maps as BMAP files.
    GenMaps {
        /// JSONL annotations (one image per line).
        #[arg(long)]
        annotations: PathBuf,
        /// Output directory for `<image_id>_bm_{x,y,xy}.bmap`.
        #[arg(long)]
        out: PathBuf,
        /// Falloff profile.
        #[arg(long, default_value = "linear", value_parser = parse_variant)]
        variant: BmVariant,
        /// Also render each map as a PGM image.
        #[arg(long)]
        render: bool,
    },
    /// Label every anchor of every image and write one CSV.
    LabelAnchors {
        #[arg(long)]
        annotations: PathBuf,
        /// key=value config file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV: image_id,grid_x,grid_y,scale_idx,ratio_idx,iou,label.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write per-ROI 2-channel ground-truth maps for the map branch.
    RoiTargets {
        #[arg(long)]
        annotations: PathBuf,
        /// ROI CSV: image_id,x1,y1,x2,y2.
        #[arg(long)]
        rois: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for `<image_id>_roi<k>.bmap`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the aggregate loss on a serialized batch directory.
    Loss {
        /// Directory holding anchors.csv, optional rois.csv, and BMAP files.
        #[arg(long)]
        inputs: PathBuf,
        /// Output key=value report.
        #[arg(long)]
        out: PathBuf,
    },
    /// FROC curve and sensitivity at FPPI operating points.
    Eval {
        #[arg(long)]
        annotations: PathBuf,
        /// Predictions CSV: image_id,x1,y1,x2,y2,score.
        #[arg(long)]
        predictions: PathBuf,
        /// FPPI operating points.
        #[arg(long, default_value = "0.5,1,2,3,4", value_parser = parse_fppi_list)]
        fppi: FppiList,
        /// IoU threshold for detection/GT matching.
        #[arg(long, default_value_t = 0.5)]
        match_iou: f64,
        /// Write the full curve as CSV.
        #[arg(long)]
        curve_out: Option<PathBuf>,
        /// Write the sensitivity table (also printed to stdout).
        #[arg(long)]
        summary_out: Option<PathBuf>,
    },
    /// Finite-difference verification of the analytic gradients.
    Gradcheck {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1e-5)]
        step: f64,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::GenMaps {
            annotations,
            out,
            variant,
            render,
        } => commands::gen_maps::run(&annotations, &out, variant, render, cli.jobs),
        Command::LabelAnchors {
            annotations,
            config,
            out,
        } => commands::label_anchors::run(&annotations, config.as_deref(), &out, cli.jobs),
        Command::RoiTargets {
            annotations,
            rois,
            config,
            out,
        } => commands::roi_targets::run(&annotations, &rois, config.as_deref(), &out, cli.jobs),
        Command::Loss { inputs, out } => commands::loss::run(&inputs, &out),
        Command::Eval {
            annotations,
            predictions,
            fppi,
            match_iou,
            curve_out,
            summary_out,
        } => commands::eval::run(
            &annotations,
            &predictions,
            &fppi.0,
            match_iou,
            curve_out.as_deref(),
            summary_out.as_deref(),
        ),
        Command::Gradcheck {
            trials,
            step,
            tolerance,
        } => commands::gradcheck::run(trials, step, tolerance, cli.seed),
    }
}
