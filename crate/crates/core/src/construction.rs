//! Explicit walks that realise the difference `n` without ever realising `d`.
//!
//! Both walks are serpentines between vertical walls. With `h = d + 1`:
//!
//! * `R_m` climbs the wall `x = m(d+1)` from `y = -m` to `y = h - m`,
//! * `S_m` runs right along `y = h - m` to `x = (m+1)(d-1)`,
//! * `T_m` descends that wall to `y = -m - 1`,
//! * `U_m` runs right along `y = -m - 1` to `x = (m+1)(d+1)`, where `R_{m+1}` starts.
//!
//! The primed segments are identical except that the descending wall sits one
//! column further left, at `x = (m+1)(d-1) - 1`. `P1` chains the unprimed
//! segments from `(0,0)`; `P2` starts at `(-1,0)`, steps to `(0,0)` and chains
//! the primed ones. Both walks are monotone in `x`, and no row of either holds
//! two points exactly `d` apart.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{balanced_division, ArithError};
use crate::walks::{contains_forbidden, LatticePoint, Walk};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("the serpentine walks need d ≥ 2, got d = {0}")]
    StrideTooSmall(u64),
    #[error("segment {kind}_{m} does not exist for d = {d}")]
    IndexOutOfRange { kind: SegmentKind, m: u64, d: u64 },
    #[error("{d} is unavoidable for {n}: k = {k} ≥ |r| + 1 = {}", .r.unsigned_abs() + 1)]
    NotAvoidable { n: u64, d: u64, k: u64, r: i64 },
    #[error("internal construction failure for n = {n}, d = {d}: {reason}")]
    InternalConstructionFailure { n: u64, d: u64, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    R,
    S,
    T,
    U,
    RPrime,
    SPrime,
    TPrime,
    UPrime,
}

impl SegmentKind {
    pub const UNPRIMED: [SegmentKind; 4] = [SegmentKind::R, SegmentKind::S, SegmentKind::T, SegmentKind::U];
    pub const PRIMED: [SegmentKind; 4] = [
        SegmentKind::RPrime,
        SegmentKind::SPrime,
        SegmentKind::TPrime,
        SegmentKind::UPrime,
    ];

    fn is_primed(self) -> bool {
        matches!(
            self,
            SegmentKind::RPrime | SegmentKind::SPrime | SegmentKind::TPrime | SegmentKind::UPrime
        )
    }

    /// Largest segment index present in `P1` (unprimed) or `P2` (primed), or
    /// `None` when the kind does not occur at all for this `d`.
    pub fn max_index(self, d: u64) -> Option<u64> {
        use SegmentKind::*;
        let d = d as i64;
        let top = if d % 2 == 1 {
            match self {
                R => (d - 1) / 2,
                S | T | U => (d - 3) / 2,
                RPrime | SPrime | TPrime => (d - 3) / 2,
                UPrime => (d - 5) / 2,
            }
        } else {
            match self {
                R | S | T => d / 2 - 1,
                U => d / 2 - 2,
                RPrime => d / 2 - 1,
                SPrime | TPrime | UPrime => d / 2 - 2,
            }
        };
        (top >= 0).then_some(top as u64)
    }
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SegmentKind::R => "R",
            SegmentKind::S => "S",
            SegmentKind::T => "T",
            SegmentKind::U => "U",
            SegmentKind::RPrime => "R'",
            SegmentKind::SPrime => "S'",
            SegmentKind::TPrime => "T'",
            SegmentKind::UPrime => "U'",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SegmentSpec {
    pub kind: SegmentKind,
    pub m: u64,
    pub d: u64,
}

impl SegmentSpec {
    pub fn new(kind: SegmentKind, m: u64, d: u64) -> Self {
        SegmentSpec { kind, m, d }
    }
}

fn ensure_stride(d: u64) -> Result<(), ConstructionError> {
    if d < 2 {
        Err(ConstructionError::StrideTooSmall(d))
    } else {
        Ok(())
    }
}

fn span(from: i64, to: i64) -> Box<dyn Iterator<Item = i64>> {
    if from <= to {
        Box::new(from..=to)
    } else {
        Box::new((to..=from).rev())
    }
}

/// The points of one segment, in traversal order.
pub fn segment_points(spec: SegmentSpec) -> Result<Vec<LatticePoint>, ConstructionError> {
    let SegmentSpec { kind, m, d } = spec;
    ensure_stride(d)?;
    match kind.max_index(d) {
        Some(top) if m <= top => {}
        _ => return Err(ConstructionError::IndexOutOfRange { kind, m, d }),
    }
    let (m, d) = (m as i64, d as i64);
    let h = d + 1;
    let left = m * (d + 1);
    let right = (m + 1) * (d - 1) - i64::from(kind.is_primed());
    let next = (m + 1) * (d + 1);
    let pts = match kind {
        SegmentKind::R | SegmentKind::RPrime => {
            span(-m, h - m).map(|y| LatticePoint::new(left, y)).collect()
        }
        SegmentKind::S | SegmentKind::SPrime => {
            span(left, right).map(|x| LatticePoint::new(x, h - m)).collect()
        }
        SegmentKind::T | SegmentKind::TPrime => {
            span(h - m, -m - 1).map(|y| LatticePoint::new(right, y)).collect()
        }
        SegmentKind::U | SegmentKind::UPrime => {
            span(right, next).map(|x| LatticePoint::new(x, -m - 1)).collect()
        }
    };
    Ok(pts)
}

/// Which serpentine a certificate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathId {
    P1,
    P2,
}

impl fmt::Display for PathId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathId::P1 => "P1",
            PathId::P2 => "P2",
        })
    }
}

/// Segments of the chain, in order, for the given kind family.
pub fn chain(path: PathId, d: u64) -> Result<Vec<SegmentSpec>, ConstructionError> {
    ensure_stride(d)?;
    let kinds = match path {
        PathId::P1 => SegmentKind::UNPRIMED,
        PathId::P2 => SegmentKind::PRIMED,
    };
    let mut out = Vec::new();
    'outer: for m in 0.. {
        for kind in kinds {
            match kind.max_index(d) {
                Some(top) if m <= top => out.push(SegmentSpec::new(kind, m, d)),
                _ => break 'outer,
            }
        }
    }
    Ok(out)
}

fn assemble(seed: Vec<LatticePoint>, segments: &[SegmentSpec]) -> Result<Walk, ConstructionError> {
    let mut pts = seed;
    for &spec in segments {
        let seg = segment_points(spec)?;
        let skip = usize::from(pts.last() == seg.first());
        pts.extend_from_slice(&seg[skip..]);
    }
    Walk::new(pts).map_err(|e| ConstructionError::InternalConstructionFailure {
        n: 0,
        d: segments.first().map_or(0, |s| s.d),
        reason: e.to_string(),
    })
}

/// `R_0, S_0, T_0, U_0, R_1, …`, starting at the origin.
pub fn build_p1(d: u64) -> Result<Walk, ConstructionError> {
    assemble(Vec::new(), &chain(PathId::P1, d)?)
}

/// `(-1,0)` followed by `R'_0, S'_0, T'_0, U'_0, R'_1, …`.
pub fn build_p2(d: u64) -> Result<Walk, ConstructionError> {
    assemble(vec![LatticePoint::new(-1, 0)], &chain(PathId::P2, d)?)
}

pub fn build(path: PathId, d: u64) -> Result<Walk, ConstructionError> {
    match path {
        PathId::P1 => build_p1(d),
        PathId::P2 => build_p2(d),
    }
}

/// Two real points on the chosen serpentine whose distance is `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnchorChoice {
    /// `(m(d+1), 0)`.
    pub point_a: LatticePoint,
    /// `(i(d-1), 0)` on `P1`, `(i(d-1) - 1, 0)` on `P2`.
    pub point_b: LatticePoint,
    pub path: PathId,
    pub m: u64,
    pub i: u64,
}

/// Picks the wall indices `m` and `i` whose real points are `n` apart.
///
/// Requires `k(n, d) ≤ |r(n, d)|`. When `k` and `r` share parity the pair
/// lives on `P1`, otherwise on `P2`.
pub fn select_anchors(n: u64, d: u64) -> Result<AnchorChoice, ConstructionError> {
    let bd = balanced_division(n, d)?;
    let (k, r) = (bd.k as i64, bd.r);
    if k > r.abs() {
        return Err(ConstructionError::NotAvoidable { n, d, k: bd.k, r });
    }
    ensure_stride(d)?;
    let same_parity = (k - r).rem_euclid(2) == 0;
    let (m, i) = match (same_parity, r > 0) {
        (true, true) => ((r + k) / 2, (r - k) / 2),
        (true, false) => ((-r - k) / 2, (-r + k) / 2),
        (false, true) => ((r - 1 + k) / 2, (r - 1 - k) / 2),
        (false, false) => ((-r - k - 1) / 2, (k - r - 1) / 2),
    };
    let di = d as i64;
    let (path, bx) = if same_parity {
        (PathId::P1, i * (di - 1))
    } else {
        (PathId::P2, i * (di - 1) - 1)
    };
    let ax = m * (di + 1);
    if (ax - bx).unsigned_abs() != n {
        return Err(ConstructionError::InternalConstructionFailure {
            n,
            d,
            reason: format!("anchor columns {ax} and {bx} are not {n} apart"),
        });
    }
    Ok(AnchorChoice {
        point_a: LatticePoint::real(ax),
        point_b: LatticePoint::real(bx),
        path,
        m: m as u64,
        i: i as u64,
    })
}

/// A walk together with two indices whose points differ by exactly `(n, 0)`,
/// and which never realises the real difference `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvoidanceCertificate {
    pub n: u64,
    pub d: u64,
    pub walk: Walk,
    /// `walk[anchor_a] - walk[anchor_b] = (n, 0)`.
    pub anchor_a: usize,
    pub anchor_b: usize,
    pub path: PathId,
}

impl AvoidanceCertificate {
    /// Checks both certificate invariants against the stored walk.
    pub fn verify(&self) -> Result<(), String> {
        let pts = self.walk.points();
        let (a, b) = (self.anchor_a, self.anchor_b);
        if a >= pts.len() || b >= pts.len() {
            return Err(format!("anchor index out of range ({a}, {b})"));
        }
        if pts[a] - pts[b] != LatticePoint::real(self.n as i64) {
            return Err(format!("anchors {} and {} do not differ by ({}, 0)", pts[a], pts[b], self.n));
        }
        if contains_forbidden(&self.walk, self.d) {
            return Err(format!("walk realises the forbidden difference {}", self.d));
        }
        Ok(())
    }

    /// The stretch of the walk between the two anchors, in walk order.
    pub fn between_anchors(&self) -> Walk {
        let (lo, hi) = if self.anchor_a <= self.anchor_b {
            (self.anchor_a, self.anchor_b)
        } else {
            (self.anchor_b, self.anchor_a)
        };
        Walk::new(self.walk.points()[lo..=hi].to_vec()).expect("sub-walk of a walk")
    }

    pub fn to_document(&self) -> CertificateDocument {
        CertificateDocument {
            points: self.walk.points().to_vec(),
            anchors: [self.anchor_a, self.anchor_b],
            n: self.n,
            d: self.d,
            path: self.path,
        }
    }
}

/// JSON form of a certificate: the walk document plus `n`, `d` and `path`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub points: Vec<LatticePoint>,
    pub anchors: [usize; 2],
    pub n: u64,
    pub d: u64,
    pub path: PathId,
}

impl CertificateDocument {
    pub fn into_certificate(self) -> Result<AvoidanceCertificate, String> {
        let walk = Walk::new(self.points).map_err(|e| e.to_string())?;
        let cert = AvoidanceCertificate {
            n: self.n,
            d: self.d,
            walk,
            anchor_a: self.anchors[0],
            anchor_b: self.anchors[1],
            path: self.path,
        };
        cert.verify()?;
        Ok(cert)
    }
}

/// Builds and checks a walk showing that `n` is `d`-avoidable.
pub fn avoiding_walk(n: u64, d: u64) -> Result<AvoidanceCertificate, ConstructionError> {
    let choice = select_anchors(n, d)?;
    let walk = build(choice.path, d)?;
    let fail = |reason: String| ConstructionError::InternalConstructionFailure { n, d, reason };
    let ia = walk
        .position(choice.point_a)
        .ok_or_else(|| fail(format!("{} is not on {}", choice.point_a, choice.path)))?;
    let ib = walk
        .position(choice.point_b)
        .ok_or_else(|| fail(format!("{} is not on {}", choice.point_b, choice.path)))?;
    let (anchor_a, anchor_b) = if choice.point_a.x > choice.point_b.x {
        (ia, ib)
    } else {
        (ib, ia)
    };
    let cert = AvoidanceCertificate {
        n,
        d,
        walk,
        anchor_a,
        anchor_b,
        path: choice.path,
    };
    cert.verify().map_err(fail)?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::is_unavoidable;
    use crate::walks::positive_real_differences;
    use std::collections::BTreeSet;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn union(specs: &[SegmentSpec], seed: &[(i64, i64)]) -> BTreeSet<LatticePoint> {
        let mut out: BTreeSet<_> = pts(seed).into_iter().collect();
        for &s in specs {
            out.extend(segment_points(s).unwrap());
        }
        out
    }

    #[test]
    fn segment_examples() {
        use SegmentKind::*;
        assert_eq!(
            segment_points(SegmentSpec::new(R, 0, 3)).unwrap(),
            pts(&[(0, 0), (0, 1), (0, 2), (0, 3), (0, 4)])
        );
        assert_eq!(
            segment_points(SegmentSpec::new(U, 0, 3)).unwrap(),
            pts(&[(2, -1), (3, -1), (4, -1)])
        );
        assert_eq!(
            segment_points(SegmentSpec::new(SPrime, 0, 3)).unwrap(),
            pts(&[(0, 4), (1, 4)])
        );
    }

    #[test]
    fn segment_bounds() {
        use SegmentKind::*;
        assert!(matches!(
            segment_points(SegmentSpec::new(R, 2, 3)),
            Err(ConstructionError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            segment_points(SegmentSpec::new(UPrime, 0, 3)),
            Err(ConstructionError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            segment_points(SegmentSpec::new(U, 0, 2)),
            Err(ConstructionError::IndexOutOfRange { .. })
        ));
        assert_eq!(
            segment_points(SegmentSpec::new(R, 0, 1)),
            Err(ConstructionError::StrideTooSmall(1))
        );
        assert!(build_p1(1).is_err() && build_p2(0).is_err());
    }

    #[test]
    fn p1_for_three() {
        use SegmentKind::*;
        let w = build_p1(3).unwrap();
        // 5 + 2 + 5 + 2 + 4 points after merging junctions.
        assert_eq!(w.distinct_points().len(), 18);
        assert_eq!(w.len(), 18);
        let expected = union(
            &[
                SegmentSpec::new(R, 0, 3),
                SegmentSpec::new(S, 0, 3),
                SegmentSpec::new(T, 0, 3),
                SegmentSpec::new(U, 0, 3),
                SegmentSpec::new(R, 1, 3),
            ],
            &[],
        );
        assert_eq!(w.distinct_points(), expected);
        for x in [0, 2, 4] {
            assert!(w.position(LatticePoint::real(x)).is_some());
        }
        assert!(!contains_forbidden(&w, 3));
    }

    #[test]
    fn p1_for_two_ends_with_t0() {
        use SegmentKind::*;
        let w = build_p1(2).unwrap();
        let expected = union(
            &[SegmentSpec::new(R, 0, 2), SegmentSpec::new(S, 0, 2), SegmentSpec::new(T, 0, 2)],
            &[],
        );
        assert_eq!(w.distinct_points(), expected);
        assert_eq!(w.last(), LatticePoint::new(1, -1));
        assert!(!contains_forbidden(&w, 2));
    }

    #[test]
    fn p2_small_cases() {
        use SegmentKind::*;
        let w3 = build_p2(3).unwrap();
        let e3 = union(
            &[
                SegmentSpec::new(RPrime, 0, 3),
                SegmentSpec::new(SPrime, 0, 3),
                SegmentSpec::new(TPrime, 0, 3),
            ],
            &[(-1, 0)],
        );
        assert_eq!(w3.distinct_points(), e3);
        for x in [-1, 0, 1] {
            assert!(w3.position(LatticePoint::real(x)).is_some());
        }
        assert!(!contains_forbidden(&w3, 3));

        let w4 = build_p2(4).unwrap();
        let e4 = union(
            &[
                SegmentSpec::new(RPrime, 0, 4),
                SegmentSpec::new(SPrime, 0, 4),
                SegmentSpec::new(TPrime, 0, 4),
                SegmentSpec::new(UPrime, 0, 4),
                SegmentSpec::new(RPrime, 1, 4),
            ],
            &[(-1, 0)],
        );
        assert_eq!(w4.distinct_points(), e4);
        assert!(!contains_forbidden(&w4, 4));

        let w2 = build_p2(2).unwrap();
        assert_eq!(w2.points(), &pts(&[(-1, 0), (0, 0), (0, 1), (0, 2), (0, 3)])[..]);
    }

    #[test]
    fn anchor_examples() {
        let a = select_anchors(4, 3).unwrap();
        assert_eq!((a.m, a.i, a.path), (1, 0, PathId::P1));
        assert_eq!((a.point_a, a.point_b), (LatticePoint::real(4), LatticePoint::real(0)));

        // 6 = 2·4 - 2: the window for d = 4 is [-2, 1], so r = 2 is not available.
        let a = select_anchors(6, 4).unwrap();
        assert_eq!((a.m, a.i, a.path), (0, 2, PathId::P1));
        assert_eq!((a.point_a, a.point_b), (LatticePoint::real(0), LatticePoint::real(6)));

        // 7 = 1·5 + 2, different parity.
        let a = select_anchors(7, 5).unwrap();
        assert_eq!((a.m, a.i, a.path), (1, 0, PathId::P2));
        assert_eq!((a.point_a, a.point_b), (LatticePoint::real(6), LatticePoint::real(-1)));

        // 3 = 1·5 - 2, different parity with r < 0.
        let a = select_anchors(3, 5).unwrap();
        assert_eq!((a.m, a.i, a.path), (0, 1, PathId::P2));
        assert_eq!((a.point_a, a.point_b), (LatticePoint::real(0), LatticePoint::real(3)));

        let a = select_anchors(2, 3).unwrap();
        assert_eq!((a.m, a.i, a.path), (0, 1, PathId::P1));
        assert_eq!((a.point_a, a.point_b), (LatticePoint::real(0), LatticePoint::real(2)));

        assert!(matches!(select_anchors(20, 7), Err(ConstructionError::NotAvoidable { .. })));
    }

    #[test]
    fn certificate_examples() {
        let c = avoiding_walk(4, 3).unwrap();
        assert_eq!(c.path, PathId::P1);
        assert_eq!(c.walk.points()[c.anchor_a], LatticePoint::real(4));
        assert_eq!(c.walk.points()[c.anchor_b], LatticePoint::real(0));
        assert!(!positive_real_differences(&c.walk).contains(&3));

        let c = avoiding_walk(20, 9).unwrap();
        c.verify().unwrap();

        assert!(matches!(avoiding_walk(20, 7), Err(ConstructionError::NotAvoidable { .. })));
        assert!(matches!(avoiding_walk(5, 1), Err(ConstructionError::NotAvoidable { .. })));
    }

    #[test]
    fn certificate_document_roundtrip() {
        let c = avoiding_walk(7, 5).unwrap();
        let json = serde_json::to_string(&c.to_document()).unwrap();
        assert!(json.contains(r#""path":"P2""#));
        let back: CertificateDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_certificate().unwrap(), c);
    }

    #[test]
    fn divisor_grids_lie_on_the_walks() {
        for d in 2..=30u64 {
            let p1 = build_p1(d).unwrap();
            let p2 = build_p2(d).unwrap();
            let di = d as i64;
            let on = |w: &Walk, x: i64| w.position(LatticePoint::real(x)).is_some();
            let (m1, i1, m2, i2) = if d % 2 == 1 {
                ((di - 1) / 2, (di + 1) / 2, (di - 3) / 2, (di - 1) / 2)
            } else {
                (di / 2 - 1, di / 2, di / 2 - 1, di / 2 - 1)
            };
            for m in 0..=m1 {
                assert!(on(&p1, m * (di + 1)), "P1({d}) misses m = {m}");
            }
            for i in 0..=i1 {
                assert!(on(&p1, i * (di - 1)), "P1({d}) misses i = {i}");
            }
            for m in 0..=m2 {
                assert!(on(&p2, m * (di + 1)), "P2({d}) misses m = {m}");
            }
            for i in 0..=i2 {
                assert!(on(&p2, i * (di - 1) - 1), "P2({d}) misses i = {i}");
            }
        }
    }

    #[test]
    fn avoidable_regime_small() {
        for d in 2..=15u64 {
            for n in 1..=2 * d * d {
                if !is_unavoidable(n, d).unwrap() {
                    avoiding_walk(n, d).unwrap();
                }
            }
        }
    }
}
