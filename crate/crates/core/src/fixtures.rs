//! The three walks from `0` to `20` used as the introductory example, with
//! the positive difference sets published alongside them.

use std::collections::BTreeSet;

use crate::walks::{LatticePoint, Walk};

/// `z_0 = 0, z_12 = 10, z_24 = 20`, `z_j = j-1-i` for `1 ≤ j ≤ 11` and
/// `z_j = j-3+i` for `13 ≤ j ≤ 23`.
pub fn s1() -> Walk {
    let pts = (0..=24i64)
        .map(|j| match j {
            0 => LatticePoint::new(0, 0),
            12 => LatticePoint::new(10, 0),
            24 => LatticePoint::new(20, 0),
            1..=11 => LatticePoint::new(j - 1, -1),
            _ => LatticePoint::new(j - 3, 1),
        })
        .collect();
    Walk::new(pts).expect("S1 is a unit-step walk")
}

const S2: [(i64, i64); 33] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (1, 2),
    (2, 2),
    (3, 2),
    (4, 2),
    (5, 2),
    (6, 2),
    (7, 2),
    (7, 1),
    (7, 0),
    (7, -1),
    (8, -1),
    (9, -1),
    (9, 0),
    (9, 1),
    (10, 1),
    (11, 1),
    (12, 1),
    (13, 1),
    (14, 1),
    (14, 0),
    (14, -1),
    (14, -2),
    (15, -2),
    (16, -2),
    (17, -2),
    (18, -2),
    (19, -2),
    (20, -2),
    (20, -1),
    (20, 0),
];

const S3: [(i64, i64); 33] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (1, 2),
    (2, 2),
    (3, 2),
    (4, 2),
    (5, 2),
    (6, 2),
    (7, 2),
    (8, 2),
    (8, 1),
    (8, 0),
    (8, -1),
    (9, -1),
    (10, -1),
    (10, 0),
    (10, 1),
    (11, 1),
    (12, 1),
    (13, 1),
    (14, 1),
    (15, 1),
    (16, 1),
    (16, 0),
    (16, -1),
    (16, -2),
    (17, -2),
    (18, -2),
    (19, -2),
    (20, -2),
    (20, -1),
    (20, 0),
];

/// The raw point list of `S_2`, before validation.
pub fn s2_points() -> Vec<LatticePoint> {
    S2.iter().map(|&p| p.into()).collect()
}

/// The raw point list of `S_3`, before validation.
pub fn s3_points() -> Vec<LatticePoint> {
    S3.iter().map(|&p| p.into()).collect()
}

pub fn s2() -> Walk {
    Walk::new(s2_points()).expect("S2 is a unit-step walk")
}

pub fn s3() -> Walk {
    Walk::new(s3_points()).expect("S3 is a unit-step walk")
}

/// Published positive differences of `S_1`.
pub fn s1_published() -> BTreeSet<u64> {
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20].into()
}

/// Published positive differences of `S_2`.
pub fn s2_published() -> BTreeSet<u64> {
    [1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 13, 14, 20].into()
}

/// Published positive differences of `S_3`.
pub fn s3_published() -> BTreeSet<u64> {
    [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 16, 20].into()
}

/// Published intersection of the three sets above.
pub fn intersection_published() -> BTreeSet<u64> {
    [1, 2, 3, 4, 5, 6, 7, 10, 20].into()
}

/// `(name, walk, published differences)` for each fixture.
pub fn all() -> Vec<(&'static str, Walk, BTreeSet<u64>)> {
    vec![
        ("S1", s1(), s1_published()),
        ("S2", s2(), s2_published()),
        ("S3", s3(), s3_published()),
    ]
}
