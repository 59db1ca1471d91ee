//! Neutral-pose 68-point face used by the synthetic generator.
//!
//! The layout follows the usual 68-point ordering inside a 200×200 crop:
//! jaw 0–16 (image left to right), brows 17–26, nose bridge 27–30 with the
//! tip at 30, nostrils 31–35, eyes 36–47, outer lip 48–59 and inner lip
//! 60–67. The mouth is slightly open and the right half of the jaw is
//! shifted by 0.6 px so the template is not exactly mirror-symmetric.

use crate::geometry::{Point2D, NUM_LANDMARKS};

#[rustfmt::skip]
const TEMPLATE: [(f64, f64); NUM_LANDMARKS] = [
    (38.6, 82.0), (39.8, 96.2), (43.3, 112.8), (49.0, 129.3),
    (56.8, 144.4), (66.2, 157.2), (76.9, 166.9), (88.5, 172.9),
    (100.0, 175.0), (112.7, 172.9), (124.3, 166.9), (135.0, 157.2),
    (144.4, 144.4), (152.2, 129.3), (157.9, 112.8), (161.4, 96.2),
    (162.6, 82.0), (50.0, 62.0), (59.0, 55.5), (69.0, 53.0),
    (79.0, 53.5), (89.0, 56.5), (111.5, 56.0), (121.0, 53.0),
    (131.0, 52.5), (141.0, 55.0), (150.0, 61.5), (100.0, 64.0),
    (100.2, 73.0), (100.3, 82.0), (100.5, 92.0), (88.0, 101.0),
    (94.0, 103.5), (100.4, 105.0), (106.5, 103.5), (112.5, 100.5),
    (59.0, 71.0), (65.5, 66.5), (73.5, 66.5), (80.0, 71.5),
    (73.5, 74.0), (65.5, 74.0), (120.5, 71.5), (127.0, 66.5),
    (135.0, 66.0), (141.5, 70.5), (135.0, 73.5), (127.0, 74.0),
    (77.0, 131.0), (85.5, 124.5), (94.0, 121.5), (100.3, 123.0),
    (106.8, 121.3), (115.2, 124.2), (123.5, 130.5), (115.5, 138.0),
    (107.0, 141.5), (100.2, 142.3), (93.5, 141.6), (85.0, 138.4),
    (81.5, 130.8), (92.5, 128.0), (100.2, 128.6), (108.0, 127.8),
    (119.0, 130.4), (108.2, 133.4), (100.1, 134.2), (92.3, 133.6),
];

pub fn neutral_face() -> Vec<Point2D> {
    TEMPLATE.iter().map(|&(x, y)| Point2D::new(x, y)).collect()
}

/// Displacement of each landmark per pixel of motion amplitude: the jaw and
/// lower lip drop, the upper lip lifts slightly and the mouth corners spread.
pub fn motion_basis() -> Vec<(f64, f64)> {
    let face = neutral_face();
    (0..NUM_LANDMARKS)
        .map(|i| match i {
            2..=14 => (0.0, ((face[i].y - 110.0) / 65.0).max(0.0)),
            48 | 60 => (-0.35, 0.3),
            54 | 64 => (0.35, 0.3),
            49..=53 | 61..=63 => (0.0, -0.1),
            55 | 59 => (0.0, 0.6),
            56 | 58 => (0.0, 0.75),
            57 => (0.0, 0.85),
            65 | 67 => (0.0, 0.8),
            66 => (0.0, 0.85),
            _ => (0.0, 0.0),
        })
        .collect()
}
