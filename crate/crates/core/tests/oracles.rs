//! Independent-oracle checks: every reference implementation here is written
//! from the definitions alone and shares no code with the library paths it
//! verifies.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bm_core::eval::{froc_curve, match_detections, sensitivity_at_fppi, DetectionRecord, ImageSample};
use bm_core::geometry::{
    box_delta_decode, box_delta_encode, generate_anchors, iou, AnchorGridSpec, BBox,
};
use bm_core::labels::{assign_labels, ThresholdConfig};
use bm_core::loss::anchor_cls_loss;
use bm_core::maps::{box_map_x, box_map_y, build_targets, combine, inside_box_mask};
use bm_core::resample::{resize_bilinear, roi_crop_resize, stride_downsample};
use bm_core::{AnchorLabels, MapGrid};

fn bb(x1: f64, y1: f64, x2: f64, y2: f64) -> BBox {
    BBox::new(x1, y1, x2, y2).unwrap()
}

fn random_box(rng: &mut ChaCha8Rng, lo: f64, hi: f64, min_ext: f64, max_ext: f64) -> BBox {
    let x1 = rng.gen_range(lo..hi - min_ext);
    let y1 = rng.gen_range(lo..hi - min_ext);
    let w = rng.gen_range(min_ext..max_ext.min(hi - x1));
    let h = rng.gen_range(min_ext..max_ext.min(hi - y1));
    bb(x1, y1, x1 + w, y1 + h)
}

// ---------------------------------------------------------------------------
// IoU vs pixel supersampling
// ---------------------------------------------------------------------------

/// Rasterizes both boxes on a 0.05-px grid and counts cell centers. Box
/// coordinates are lattice-aligned, so the counts are exact areas.
fn supersample_iou(a: BBox, b: BBox) -> f64 {
    let delta = 0.05;
    let x_lo = a.x1().min(b.x1());
    let y_lo = a.y1().min(b.y1());
    let x_hi = a.x2().max(b.x2());
    let y_hi = a.y2().max(b.y2());
    let nx = ((x_hi - x_lo) / delta).round() as usize;
    let ny = ((y_hi - y_lo) / delta).round() as usize;
    let inside = |bx: BBox, x: f64, y: f64| -> bool {
        x >= bx.x1() && x <= bx.x2() && y >= bx.y1() && y <= bx.y2()
    };
    let mut both = 0u64;
    let mut either = 0u64;
    for iy in 0..ny {
        let y = y_lo + (iy as f64 + 0.5) * delta;
        for ix in 0..nx {
            let x = x_lo + (ix as f64 + 0.5) * delta;
            let in_a = inside(a, x, y);
            let in_b = inside(b, x, y);
            if in_a && in_b {
                both += 1;
            }
            if in_a || in_b {
                either += 1;
            }
        }
    }
    if both == 0 {
        return 0.0;
    }
    both as f64 / either as f64
}

#[test]
fn iou_matches_supersampling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let delta = 0.05;
    for _ in 0..200 {
        // Lattice-aligned coordinates in [0, 15] with extents in [1, 5] px.
        let mut lattice_box = || {
            let x1 = rng.gen_range(0..=200) as f64 * delta;
            let y1 = rng.gen_range(0..=200) as f64 * delta;
            let w = rng.gen_range(20..=100) as f64 * delta;
            let h = rng.gen_range(20..=100) as f64 * delta;
            bb(x1, y1, x1 + w, y1 + h)
        };
        let a = lattice_box();
        let b = lattice_box();
        assert!((iou(a, b) - supersample_iou(a, b)).abs() < 1e-3);
    }
}

// ---------------------------------------------------------------------------
// Map transpose symmetry
// ---------------------------------------------------------------------------

fn transpose_grid(m: &MapGrid) -> MapGrid {
    let mut out = MapGrid::zeros(m.height(), m.width()).unwrap();
    for y in 0..m.height() {
        for x in 0..m.width() {
            out.set(y, x, 0, m.get(x, y, 0));
        }
    }
    out
}

#[test]
fn map_y_is_transposed_map_x() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let w = rng.gen_range(6..40usize);
        let h = rng.gen_range(6..40usize);
        let b = random_box(&mut rng, -3.0, 30.0, 0.7, 18.0);
        let direct = box_map_y(b, w, h);
        let via_transpose = transpose_grid(&box_map_x(b.transpose(), h, w));
        assert_eq!(direct, via_transpose);
    }
}

// ---------------------------------------------------------------------------
// Combination and composition vs scalar recomputation
// ---------------------------------------------------------------------------

#[test]
fn combine_matches_cellwise_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let w = rng.gen_range(8..48usize);
        let h = rng.gen_range(8..48usize);
        let n = rng.gen_range(1..5usize);
        let singles: Vec<MapGrid> = (0..n)
            .map(|_| box_map_x(random_box(&mut rng, 0.0, 40.0, 0.7, 25.0), w, h))
            .collect();
        let combined = combine(&singles).unwrap();
        for y in 0..h {
            for x in 0..w {
                let sum: f64 = singles.iter().map(|m| m.get(x, y, 0)).sum();
                let expect = sum.min(1.0);
                assert!((combined.get(x, y, 0) - expect).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn disjoint_boxes_union_their_maps() {
    let a = bb(1.0, 1.0, 5.0, 5.0);
    let b = bb(8.0, 8.0, 13.0, 12.0);
    let ma = box_map_x(a, 16, 16);
    let mb = box_map_x(b, 16, 16);
    let combined = combine(&[ma.clone(), mb.clone()]).unwrap();
    for y in 0..16 {
        for x in 0..16 {
            let expect = ma.get(x, y, 0).max(mb.get(x, y, 0));
            assert_eq!(combined.get(x, y, 0), expect);
        }
    }
}

#[test]
fn joint_map_is_sqrt_of_combined_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..40 {
        let w = rng.gen_range(8..48usize);
        let h = rng.gen_range(8..48usize);
        let n = rng.gen_range(1..4usize);
        let boxes: Vec<BBox> = (0..n)
            .map(|_| random_box(&mut rng, 0.0, 40.0, 0.7, 25.0))
            .collect();
        let t = build_targets(&boxes, w, h).unwrap();
        for i in 0..w * h {
            let expect = (t.map_x.data()[i] * t.map_y.data()[i]).sqrt();
            assert!((t.map_xy.data()[i] - expect).abs() < 1e-15);
        }
    }
}

#[test]
fn mask_matches_direct_membership() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..50 {
        let b = random_box(&mut rng, -4.0, 20.0, 0.5, 12.0);
        let m = inside_box_mask(b, 18, 14);
        for y in 0..14 {
            for x in 0..18 {
                let inside = x as f64 >= b.x1()
                    && x as f64 <= b.x2()
                    && y as f64 >= b.y1()
                    && y as f64 <= b.y2();
                assert_eq!(m.get(x, y, 0) == 1.0, inside);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Resampling vs independent scalar references
// ---------------------------------------------------------------------------

/// Reference bilinear read with edge clamping, indexing the raw buffer.
fn oracle_sample_clamped(data: &[f64], w: usize, h: usize, x: f64, y: f64) -> f64 {
    let cl = |v: i64, n: usize| -> usize { v.clamp(0, n as i64 - 1) as usize };
    let x0 = x.floor() as i64;
    let y0 = y.floor() as i64;
    let fx = x - x0 as f64;
    let fy = y - y0 as f64;
    let at = |xi: i64, yi: i64| data[cl(yi, h) * w + cl(xi, w)];
    at(x0, y0) * (1.0 - fx) * (1.0 - fy)
        + at(x0 + 1, y0) * fx * (1.0 - fy)
        + at(x0, y0 + 1) * (1.0 - fx) * fy
        + at(x0 + 1, y0 + 1) * fx * fy
}

fn random_grid(rng: &mut ChaCha8Rng, w: usize, h: usize) -> MapGrid {
    let data: Vec<f64> = (0..w * h).map(|_| rng.gen::<f64>()).collect();
    MapGrid::from_vec(w, h, 1, data).unwrap()
}

#[test]
fn resize_matches_scalar_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let m = random_grid(&mut rng, 16, 16);
    let out = resize_bilinear(&m, 7, 5).unwrap();
    for oy in 0..5 {
        for ox in 0..7 {
            let x = (ox as f64 + 0.5) * 16.0 / 7.0 - 0.5;
            let y = (oy as f64 + 0.5) * 16.0 / 5.0 - 0.5;
            let expect = oracle_sample_clamped(m.data(), 16, 16, x, y);
            assert!((out.get(ox, oy, 0) - expect).abs() < 1e-6);
        }
    }
}

#[test]
fn downsample_matches_resize_on_random_grids() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let r = [2u32, 4, 8][rng.gen_range(0..3)];
        let gw = rng.gen_range(2..9usize);
        let gh = rng.gen_range(2..9usize);
        let m = random_grid(&mut rng, gw * r as usize, gh * r as usize);
        let a = stride_downsample(&m, r).unwrap();
        let b = resize_bilinear(&m, gw, gh).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((x - y).abs() < 1e-6);
        }
    }
}

/// Reference ROI resample: half-pixel-centered points, zero outside the grid.
fn oracle_roi(data: &[f64], w: usize, h: usize, roi: BBox, out: usize) -> Vec<f64> {
    let at = |xi: i64, yi: i64| -> f64 {
        if xi < 0 || yi < 0 || xi >= w as i64 || yi >= h as i64 {
            0.0
        } else {
            data[yi as usize * w + xi as usize]
        }
    };
    let mut result = Vec::with_capacity(out * out);
    for oy in 0..out {
        for ox in 0..out {
            let x = roi.x1() + (ox as f64 + 0.5) * roi.width() / out as f64 - 0.5;
            let y = roi.y1() + (oy as f64 + 0.5) * roi.height() / out as f64 - 0.5;
            let x0 = x.floor();
            let y0 = y.floor();
            let fx = x - x0;
            let fy = y - y0;
            let v = at(x0 as i64, y0 as i64) * (1.0 - fx) * (1.0 - fy)
                + at(x0 as i64 + 1, y0 as i64) * fx * (1.0 - fy)
                + at(x0 as i64, y0 as i64 + 1) * (1.0 - fx) * fy
                + at(x0 as i64 + 1, y0 as i64 + 1) * fx * fy;
            result.push(v);
        }
    }
    result
}

#[test]
fn roi_crop_matches_scalar_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..30 {
        let w = rng.gen_range(8..32usize);
        let h = rng.gen_range(8..32usize);
        let m = random_grid(&mut rng, w, h);
        // Partially out-of-grid ROIs exercise the zero extension.
        let roi = random_box(&mut rng, -4.0, w.max(h) as f64 + 4.0, 1.0, 20.0);
        if roi.x2() <= 0.0 || roi.y2() <= 0.0 || roi.x1() >= w as f64 || roi.y1() >= h as f64 {
            continue;
        }
        let out = rng.gen_range(2..10usize);
        let got = roi_crop_resize(&m, roi, out).unwrap();
        let expect = oracle_roi(m.data(), w, h, roi, out);
        for (g, e) in got.data().iter().zip(&expect) {
            assert!((g - e).abs() < 1e-6);
        }
    }
}

/// Up-then-down resize drift stays below 0.02 where the input is smooth.
/// For bounding maps that means away from the box border (a 0 -> 0.5 jump
/// no resampler can round-trip) and with box extents of at least ~14 px so
/// the center-line kink contributes at most 0.25/extent.
#[test]
fn down_up_resize_regression_on_smooth_maps() {
    // Globally smooth map: full-grid bump.
    let w = 32usize;
    let mut smooth = MapGrid::zeros(w, w).unwrap();
    for y in 0..w {
        for x in 0..w {
            let sx = (std::f64::consts::PI * (x as f64 + 0.5) / w as f64).sin();
            let sy = (std::f64::consts::PI * (y as f64 + 0.5) / w as f64).sin();
            smooth.set(x, y, 0, sx * sy);
        }
    }
    let up = resize_bilinear(&smooth, 2 * w, 2 * w).unwrap();
    let back = resize_bilinear(&up, w, w).unwrap();
    let drift = smooth
        .data()
        .iter()
        .zip(back.data())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    assert!(drift < 0.02, "smooth round-trip drift {drift}");

    // Bounding-map interiors of two disjoint wide boxes, border band excluded.
    let boxes = [bb(4.0, 5.0, 20.0, 22.0), bb(26.0, 24.0, 44.0, 43.0)];
    let m = build_targets(&boxes, 48, 48).unwrap().map_xy;
    let up = resize_bilinear(&m, 96, 96).unwrap();
    let back = resize_bilinear(&up, 48, 48).unwrap();
    let interior = |x: usize, y: usize| {
        boxes.iter().any(|b| {
            x as f64 >= b.x1() + 1.0
                && x as f64 <= b.x2() - 1.0
                && y as f64 >= b.y1() + 1.0
                && y as f64 <= b.y2() - 1.0
        })
    };
    let mut drift = 0.0f64;
    for y in 0..48 {
        for x in 0..48 {
            if interior(x, y) {
                drift = drift.max((m.get(x, y, 0) - back.get(x, y, 0)).abs());
            }
        }
    }
    assert!(drift < 0.02, "interior round-trip drift {drift}");
}

// ---------------------------------------------------------------------------
// Box-delta roundtrip
// ---------------------------------------------------------------------------

#[test]
fn delta_roundtrip_100_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..100 {
        let anchor = random_box(&mut rng, -20.0, 60.0, 0.5, 40.0);
        let gt = random_box(&mut rng, -20.0, 60.0, 0.5, 40.0);
        let back = box_delta_decode(box_delta_encode(anchor, gt), anchor).unwrap();
        for (a, b) in [
            (back.x1(), gt.x1()),
            (back.y1(), gt.y1()),
            (back.x2(), gt.x2()),
            (back.y2(), gt.y2()),
        ] {
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
    }
}

// ---------------------------------------------------------------------------
// Anchor labeling vs exhaustive per-anchor recomputation
// ---------------------------------------------------------------------------

#[test]
fn assign_labels_matches_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let cfg = ThresholdConfig::default();
    for _ in 0..20 {
        let spec = AnchorGridSpec::new(4, vec![4.0, 8.0], vec![0.5, 1.0]).unwrap();
        let set = generate_anchors(&spec, 16, 16).unwrap();
        let n_gts = rng.gen_range(1..3usize);
        let gts: Vec<BBox> = (0..n_gts)
            .map(|_| random_box(&mut rng, 0.0, 16.0, 2.0, 12.0))
            .collect();
        let t = build_targets(&gts, 16, 16).unwrap();
        let bm_r = stride_downsample(&t.map_xy, 4).unwrap();
        let got = assign_labels(&set, &gts, &bm_r, cfg).unwrap();

        // Oracle: own IoU formula, max over GTs, branch per definition.
        for i in 0..set.len() {
            let a = set.anchors()[i];
            let mut best = 0.0f64;
            for g in &gts {
                let ix = (a.x2().min(g.x2()) - a.x1().max(g.x1())).max(0.0);
                let iy = (a.y2().min(g.y2()) - a.y1().max(g.y1())).max(0.0);
                let inter = ix * iy;
                let union = a.width() * a.height() + g.width() * g.height() - inter;
                best = best.max(inter / union);
            }
            assert!((got.ious()[i] - best).abs() < 1e-12);
            let (gx, gy) = set.centers()[i];
            let expect = if best >= cfg.iou_max() {
                bm_r.get(gx as usize, gy as usize, 0)
            } else if best <= cfg.iou_min() {
                0.0
            } else {
                -1.0
            };
            assert_eq!(got.labels()[i], expect);
        }

        let (pos, neg, drop) = got.branch_counts(cfg);
        assert_eq!(pos + neg + drop, set.len());
    }
}

#[test]
fn positive_labels_equal_downsampled_map_reads() {
    let spec = AnchorGridSpec::new(8, vec![24.0, 48.0], vec![1.0]).unwrap();
    let set = generate_anchors(&spec, 64, 64).unwrap();
    let gts = [bb(8.0, 8.0, 34.0, 30.0), bb(30.0, 35.0, 58.0, 60.0)];
    let t = build_targets(&gts, 64, 64).unwrap();
    let bm_r = stride_downsample(&t.map_xy, 8).unwrap();
    let cfg = ThresholdConfig::default();
    let got = assign_labels(&set, &gts, &bm_r, cfg).unwrap();
    let mut positives = 0;
    for i in 0..set.len() {
        if got.ious()[i] >= cfg.iou_max() {
            let (gx, gy) = set.centers()[i];
            assert_eq!(got.labels()[i], bm_r.get(gx as usize, gy as usize, 0));
            positives += 1;
        }
    }
    assert!(positives > 0, "scene should produce positive anchors");
}

// ---------------------------------------------------------------------------
// Loss scaling
// ---------------------------------------------------------------------------

#[test]
fn quadratic_loss_scales_with_squared_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let n = rng.gen_range(2..20usize);
        let mut label_values = Vec::with_capacity(n);
        let mut ious = Vec::with_capacity(n);
        for _ in 0..n {
            let roll: f64 = rng.gen();
            if roll < 0.2 {
                label_values.push(-1.0);
                ious.push(0.4);
            } else {
                label_values.push(rng.gen::<f64>());
                ious.push(0.6);
            }
        }
        if label_values.iter().all(|&l| l == -1.0) {
            label_values[0] = 0.3;
            ious[0] = 0.6;
        }
        let labels = AnchorLabels::new(label_values.clone(), ious).unwrap();
        let pred: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let doubled: Vec<f64> = pred
            .iter()
            .zip(&label_values)
            .map(|(&p, &l)| if l == -1.0 { p } else { l + 2.0 * (p - l) })
            .collect();
        let (v1, _) = anchor_cls_loss(&pred, &labels).unwrap();
        let (v2, _) = anchor_cls_loss(&doubled, &labels).unwrap();
        assert!((v2 - 4.0 * v1).abs() <= 1e-12 * v1.max(1.0));
    }
}

// ---------------------------------------------------------------------------
// Matching and FROC vs brute force
// ---------------------------------------------------------------------------

/// Best achievable TP count over all injective detection-to-GT assignments
/// with IoU at or above the threshold.
fn max_matching_tp(dets: &[DetectionRecord], gts: &[BBox], thresh: f64) -> usize {
    fn recurse(di: usize, dets: &[DetectionRecord], gts: &[BBox], used: &mut Vec<bool>, thresh: f64) -> usize {
        if di == dets.len() {
            return 0;
        }
        // Skip this detection.
        let mut best = recurse(di + 1, dets, gts, used, thresh);
        for gi in 0..gts.len() {
            if used[gi] || iou(dets[di].bbox, gts[gi]) < thresh {
                continue;
            }
            used[gi] = true;
            best = best.max(1 + recurse(di + 1, dets, gts, used, thresh));
            used[gi] = false;
        }
        best
    }
    let mut used = vec![false; gts.len()];
    recurse(0, dets, gts, &mut used, thresh)
}

fn random_scene(rng: &mut ChaCha8Rng, n_dets: usize, n_gts: usize) -> (Vec<DetectionRecord>, Vec<BBox>) {
    let gts: Vec<BBox> = (0..n_gts)
        .map(|_| random_box(rng, 0.0, 40.0, 3.0, 15.0))
        .collect();
    let dets: Vec<DetectionRecord> = (0..n_dets)
        .map(|_| {
            // Half the detections jitter a GT, half are random clutter.
            let bbox = if !gts.is_empty() && rng.gen_bool(0.5) {
                let g = gts[rng.gen_range(0..gts.len())];
                let dx = rng.gen_range(-2.0..2.0);
                let dy = rng.gen_range(-2.0..2.0);
                bb(g.x1() + dx, g.y1() + dy, g.x2() + dx, g.y2() + dy)
            } else {
                random_box(rng, 0.0, 40.0, 3.0, 15.0)
            };
            DetectionRecord::new("img", bbox, rng.gen::<f64>()).unwrap()
        })
        .collect();
    (dets, gts)
}

#[test]
fn greedy_matching_is_consistent_and_bounded() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..60 {
        let n_dets = rng.gen_range(0..=6);
        let n_gts = rng.gen_range(0..=6);
        let (dets, gts) = random_scene(&mut rng, n_dets, n_gts);
        let flags = match_detections(&dets, &gts, 0.5);
        assert_eq!(flags, match_detections(&dets, &gts, 0.5));
        let tp = flags.iter().filter(|f| **f).count();
        assert!(tp <= gts.len());
        assert!(tp <= max_matching_tp(&dets, &gts, 0.5));
    }
}

/// Independent greedy matcher: descending score, highest-IoU free GT wins.
fn oracle_greedy_tp(dets: &[(BBox, f64)], gts: &[BBox], iou_thresh: f64) -> usize {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].1.partial_cmp(&dets[a].1).unwrap());
    let mut free: Vec<bool> = vec![true; gts.len()];
    let mut tp = 0;
    for &di in &order {
        let mut best_gi = None;
        let mut best_v = iou_thresh;
        for gi in 0..gts.len() {
            if !free[gi] {
                continue;
            }
            let a = dets[di].0;
            let g = gts[gi];
            let ix = (a.x2().min(g.x2()) - a.x1().max(g.x1())).max(0.0);
            let iy = (a.y2().min(g.y2()) - a.y1().max(g.y1())).max(0.0);
            let inter = ix * iy;
            let v = inter / (a.area() + g.area() - inter);
            if v >= best_v && (best_gi.is_none() || v > best_v) {
                best_gi = Some(gi);
                best_v = v;
            }
        }
        if let Some(gi) = best_gi {
            free[gi] = false;
            tp += 1;
        }
    }
    tp
}

/// Per-threshold brute force: refilter and rematch from scratch with the
/// independent matcher.
fn brute_force_point(
    samples: &[ImageSample],
    iou_thresh: f64,
    score_thresh: f64,
) -> (f64, f64) {
    let mut tp = 0usize;
    let mut dets_kept = 0usize;
    let mut gts = 0usize;
    for s in samples {
        gts += s.ground_truths.len();
        let kept: Vec<(BBox, f64)> = s
            .detections
            .iter()
            .filter(|d| d.score >= score_thresh)
            .map(|d| (d.bbox, d.score))
            .collect();
        dets_kept += kept.len();
        tp += oracle_greedy_tp(&kept, &s.ground_truths, iou_thresh);
    }
    let fp = dets_kept - tp;
    (fp as f64 / samples.len() as f64, tp as f64 / gts as f64)
}

#[test]
fn froc_matches_brute_force_threshold_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..25 {
        let n_images = rng.gen_range(2..6usize);
        let mut samples = Vec::new();
        let mut total_gts = 0;
        for _ in 0..n_images {
            let n_dets = rng.gen_range(0..=5);
            let n_gts = rng.gen_range(0..=3);
            total_gts += n_gts;
            let (detections, ground_truths) = random_scene(&mut rng, n_dets, n_gts);
            samples.push(ImageSample {
                detections,
                ground_truths,
            });
        }
        if total_gts == 0 {
            samples[0].ground_truths.push(bb(1.0, 1.0, 5.0, 5.0));
        }
        let curve = froc_curve(&samples, 0.5).unwrap();
        for p in curve.points() {
            let (fppi, sens) = brute_force_point(&samples, 0.5, p.threshold);
            assert_eq!(p.fppi, fppi);
            assert_eq!(p.sensitivity, sens);
        }
        // Both coordinates fall (weakly) as the threshold rises.
        for pair in curve.points().windows(2) {
            assert!(pair[0].threshold < pair[1].threshold);
            assert!(pair[0].fppi >= pair[1].fppi);
            assert!(pair[0].sensitivity >= pair[1].sensitivity);
        }
        // Readout agrees with a brute-force scan over all curve thresholds.
        let targets = [0.5, 1.0, 2.0, 3.0, 4.0];
        let got = sensitivity_at_fppi(&curve, &targets);
        for (ti, &t) in targets.iter().enumerate() {
            let mut best = 0.0f64;
            for p in curve.points() {
                let (fppi, sens) = brute_force_point(&samples, 0.5, p.threshold);
                if fppi <= t {
                    best = best.max(sens);
                }
            }
            assert_eq!(got[ti], best);
        }
    }
}
