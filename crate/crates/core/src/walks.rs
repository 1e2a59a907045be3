//! Unit-step walks on the Gaussian integers and their difference sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A Gaussian integer `x + iy`. Serializes as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }

    /// `(m, 0)`.
    pub const fn real(m: i64) -> Self {
        LatticePoint { x: m, y: 0 }
    }

    pub fn is_unit_step_to(&self, other: &LatticePoint) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((x, y): (i64, i64)) -> Self {
        LatticePoint { x, y }
    }
}

impl From<LatticePoint> for (i64, i64) {
    fn from(p: LatticePoint) -> Self {
        (p.x, p.y)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: Self) -> Self {
        LatticePoint::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: Self) -> Self {
        LatticePoint::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> Self {
        LatticePoint::new(-self.x, -self.y)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("a walk needs at least one point")]
    EmptyWalk,
    #[error("step {0} is not an axis-aligned unit step")]
    NonUnitStep(usize),
}

/// Checks that `points` is nonempty and every consecutive pair is a unit step.
pub fn validate_walk(points: &[LatticePoint]) -> Result<(), WalkError> {
    if points.is_empty() {
        return Err(WalkError::EmptyWalk);
    }
    match points.windows(2).position(|w| !w[0].is_unit_step_to(&w[1])) {
        Some(i) => Err(WalkError::NonUnitStep(i)),
        None => Ok(()),
    }
}

/// A validated, nonempty sequence of unit steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    points: Vec<LatticePoint>,
}

impl Walk {
    pub fn new(points: Vec<LatticePoint>) -> Result<Self, WalkError> {
        validate_walk(&points)?;
        Ok(Walk { points })
    }

    /// The horizontal segment `(0,0), (1,0), …, (n,0)`.
    pub fn straight(n: u64) -> Self {
        Walk {
            points: (0..=n as i64).map(LatticePoint::real).collect(),
        }
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> LatticePoint {
        self.points[0]
    }

    pub fn last(&self) -> LatticePoint {
        self.points[self.points.len() - 1]
    }

    pub fn position(&self, p: LatticePoint) -> Option<usize> {
        self.points.iter().position(|&q| q == p)
    }

    pub fn distinct_points(&self) -> BTreeSet<LatticePoint> {
        self.points.iter().copied().collect()
    }

    /// Inclusive `(x_min, x_max, y_min, y_max)`.
    pub fn bounds(&self) -> (i64, i64, i64, i64) {
        let mut b = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for p in &self.points {
            b.0 = b.0.min(p.x);
            b.1 = b.1.max(p.x);
            b.2 = b.2.min(p.y);
            b.3 = b.3.max(p.y);
        }
        b
    }

    pub fn into_points(self) -> Vec<LatticePoint> {
        self.points
    }
}

/// `{ z_t - z_u }` over the distinct points of the walk.
pub fn difference_set(w: &Walk) -> BTreeSet<LatticePoint> {
    let pts: Vec<_> = w.distinct_points().into_iter().collect();
    let mut out = BTreeSet::new();
    for &a in &pts {
        for &b in &pts {
            out.insert(a - b);
        }
    }
    out
}

fn rows(w: &Walk) -> BTreeMap<i64, Vec<i64>> {
    let mut rows: BTreeMap<i64, BTreeSet<i64>> = BTreeMap::new();
    for p in w.points() {
        rows.entry(p.y).or_default().insert(p.x);
    }
    rows.into_iter()
        .map(|(y, xs)| (y, xs.into_iter().collect()))
        .collect()
}

/// Positive `m` with `(m, 0)` in the difference set, ascending.
pub fn positive_real_differences(w: &Walk) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for xs in rows(w).values() {
        for (i, &a) in xs.iter().enumerate() {
            for &b in &xs[i + 1..] {
                out.insert((b - a) as u64);
            }
        }
    }
    out
}

/// Distinct points grouped by row, each row sorted by `x`.
#[derive(Debug, Clone)]
pub struct RowIndex {
    rows: Vec<Vec<i64>>,
}

impl RowIndex {
    pub fn new(w: &Walk) -> Self {
        let (_, _, y0, y1) = w.bounds();
        let mut rows: Vec<Vec<i64>> = vec![Vec::new(); (y1 - y0 + 1) as usize];
        for p in w.points() {
            rows[(p.y - y0) as usize].push(p.x);
        }
        for xs in &mut rows {
            xs.sort_unstable();
            xs.dedup();
        }
        RowIndex { rows }
    }

    /// Whether `(m, 0)` is a difference of two points in the index.
    pub fn realises(&self, m: u64) -> bool {
        let m = m as i64;
        self.rows.iter().any(|xs| {
            let (mut i, mut j) = (0, 0);
            while j < xs.len() {
                match (xs[j] - xs[i]).cmp(&m) {
                    std::cmp::Ordering::Equal => return true,
                    std::cmp::Ordering::Less => j += 1,
                    std::cmp::Ordering::Greater => i += 1,
                }
            }
            false
        })
    }
}

/// Whether two visited points share a row at horizontal distance `d`.
pub fn contains_forbidden(w: &Walk, d: u64) -> bool {
    RowIndex::new(w).realises(d)
}

/// Output flavours for [`render`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

/// Pixel size of one lattice cell in SVG output.
pub const SVG_CELL: i64 = 16;

/// Draws the walk. `anchors` are indices into the walk and get their own markers.
///
/// ASCII uses one character per lattice cell, top row first: `.` unvisited,
/// `#` visited, `S`/`E` first and last point, `A`/`B` anchors.
pub fn render(w: &Walk, format: RenderFormat, anchors: Option<(usize, usize)>) -> String {
    match format {
        RenderFormat::Ascii => render_ascii(w, anchors),
        RenderFormat::Svg => render_svg(w, anchors),
    }
}

fn render_ascii(w: &Walk, anchors: Option<(usize, usize)>) -> String {
    let (x0, x1, y0, y1) = w.bounds();
    let width = (x1 - x0 + 1) as usize;
    let height = (y1 - y0 + 1) as usize;
    let mut grid = vec![vec!['.'; width]; height];
    let mut mark = |p: LatticePoint, c: char| {
        grid[(y1 - p.y) as usize][(p.x - x0) as usize] = c;
    };
    for &p in w.points() {
        mark(p, '#');
    }
    mark(w.last(), 'E');
    mark(w.first(), 'S');
    if let Some((a, b)) = anchors {
        mark(w.points()[a], 'A');
        mark(w.points()[b], 'B');
    }
    let mut out = String::with_capacity(height * (width + 1));
    for row in grid {
        out.extend(row);
        out.push('\n');
    }
    out
}

fn render_svg(w: &Walk, anchors: Option<(usize, usize)>) -> String {
    let (x0, x1, y0, y1) = w.bounds();
    let px = |p: &LatticePoint| ((p.x - x0 + 1) * SVG_CELL, (y1 - p.y + 1) * SVG_CELL);
    let width = (x1 - x0 + 2) * SVG_CELL;
    let height = (y1 - y0 + 2) * SVG_CELL;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r##"<rect width="{width}" height="{height}" fill="#ffffff"/>"##);
    // Grid lines through lattice points.
    for x in x0..=x1 {
        let gx = (x - x0 + 1) * SVG_CELL;
        let _ = writeln!(
            out,
            r##"<line x1="{gx}" y1="0" x2="{gx}" y2="{height}" stroke="#e0e0e0" stroke-width="1"/>"##
        );
    }
    for y in y0..=y1 {
        let gy = (y1 - y + 1) * SVG_CELL;
        let _ = writeln!(
            out,
            r##"<line x1="0" y1="{gy}" x2="{width}" y2="{gy}" stroke="#e0e0e0" stroke-width="1"/>"##
        );
    }
    let coords: Vec<String> = w
        .points()
        .iter()
        .map(|p| {
            let (a, b) = px(p);
            format!("{a},{b}")
        })
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#333333" stroke-width="2"/>"##,
        coords.join(" ")
    );
    if let Some((a, b)) = anchors {
        for (idx, fill, class) in [(a, "#d62728", "anchor-a"), (b, "#1f77b4", "anchor-b")] {
            let (cx, cy) = px(&w.points()[idx]);
            let _ = writeln!(
                out,
                r#"<circle class="{class}" cx="{cx}" cy="{cy}" r="5" fill="{fill}"/>"#
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// The on-disk walk format: `{"points": [[x,y],...], "anchors": [r,s]}`.
///
/// `anchors`, when present, are indices with `points[r] - points[s] = (n, 0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkDocument {
    pub points: Vec<LatticePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchors: Option<[usize; 2]>,
}

impl WalkDocument {
    pub fn from_walk(w: &Walk, anchors: Option<(usize, usize)>) -> Self {
        WalkDocument {
            points: w.points().to_vec(),
            anchors: anchors.map(|(a, b)| [a, b]),
        }
    }

    pub fn to_walk(&self) -> Result<Walk, WalkError> {
        Walk::new(self.points.clone())
    }
}
