//! Billiard table geometry: rectilinear obstacles in a rectangular
//! fundamental domain, with the wall-edge lists the event loop consumes.

use thiserror::Error;
use windtree_core::windtree::IntegerTable;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("domain dimensions must be positive, got {0} x {1}")]
    BadDomain(f64, f64),
    #[error("polygon must alternate horizontal and vertical edges")]
    NotRectilinear,
    #[error("polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("obstacle must lie strictly inside the fundamental domain")]
    ObstacleTouchesBoundary,
    #[error("obstacle is not symmetric under both axis reflections")]
    AsymmetricObstacle,
    #[error("corner census mismatch: {convex} convex, {reflex} reflex corners")]
    CornerCountMismatch { convex: usize, reflex: usize },
    #[error("polygon has a degenerate (zero-length) edge")]
    DegenerateEdge,
}

/// Closed rectilinear polygon, vertices in order (either orientation).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub vertices: Vec<(f64, f64)>,
}

impl Polygon {
    pub fn new(vertices: Vec<(f64, f64)>) -> Result<Polygon, GeomError> {
        if vertices.len() < 4 {
            return Err(GeomError::TooFewVertices(vertices.len()));
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let dx = b.0 - a.0;
            let dy = b.1 - a.1;
            if dx == 0.0 && dy == 0.0 {
                return Err(GeomError::DegenerateEdge);
            }
            if dx != 0.0 && dy != 0.0 {
                return Err(GeomError::NotRectilinear);
            }
            let c = vertices[(i + 2) % n];
            if (dx == 0.0) == (c.0 - b.0 == 0.0) {
                return Err(GeomError::NotRectilinear);
            }
        }
        Ok(Polygon { vertices })
    }

    pub fn bbox(&self) -> (f64, f64, f64, f64) {
        let mut x0 = f64::INFINITY;
        let mut x1 = f64::NEG_INFINITY;
        let mut y0 = f64::INFINITY;
        let mut y1 = f64::NEG_INFINITY;
        for &(x, y) in &self.vertices {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        (x0, x1, y0, y1)
    }

    /// Even-odd point-in-polygon test (points off the boundary).
    pub fn contains(&self, px: f64, py: f64) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let (x1, y1) = self.vertices[i];
            let (x2, y2) = self.vertices[(i + 1) % n];
            if x1 != x2 {
                continue; // horizontal edges do not cross a vertical ray test
            }
            let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
            if py >= lo && py < hi && px < x1 {
                inside = !inside;
            }
        }
        inside
    }

    /// Corner census from the turn directions: (convex, reflex) with respect
    /// to the obstacle interior.
    pub fn corner_census(&self) -> (usize, usize) {
        let n = self.vertices.len();
        // signed area to fix orientation
        let mut area2 = 0.0;
        for i in 0..n {
            let (x1, y1) = self.vertices[i];
            let (x2, y2) = self.vertices[(i + 1) % n];
            area2 += x1 * y2 - x2 * y1;
        }
        let ccw = area2 > 0.0;
        let mut convex = 0;
        let mut reflex = 0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            let cross = (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0);
            let left_turn = cross > 0.0;
            if left_turn == ccw {
                convex += 1;
            } else {
                reflex += 1;
            }
        }
        (convex, reflex)
    }

    pub fn is_doubly_symmetric(&self, tol: f64) -> bool {
        let (x0, x1, y0, y1) = self.bbox();
        let cx = (x0 + x1) / 2.0;
        let cy = (y0 + y1) / 2.0;
        let close = |a: (f64, f64), b: (f64, f64)| -> bool {
            (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol
        };
        let has = |p: (f64, f64)| self.vertices.iter().any(|&v| close(v, p));
        self.vertices.iter().all(|&(x, y)| has((2.0 * cx - x, y)))
            && self.vertices.iter().all(|&(x, y)| has((x, 2.0 * cy - y)))
    }
}

/// Family index of a polygon obstacle: 4m convex corners, 4(m-1) reflex.
pub fn polygon_family_index(p: &Polygon) -> Result<u64, GeomError> {
    if !p.is_doubly_symmetric(1e-9) {
        return Err(GeomError::AsymmetricObstacle);
    }
    let (convex, reflex) = p.corner_census();
    if convex % 4 != 0 || convex < 4 || reflex != convex - 4 {
        return Err(GeomError::CornerCountMismatch { convex, reflex });
    }
    Ok((convex / 4) as u64)
}

/// Doubly-symmetric cross made of m nested centered rectangles with strictly
/// decreasing half-widths and increasing half-heights: exactly 4m convex
/// corners.
pub fn cross_polygon(center: (f64, f64), half_widths: &[f64], half_heights: &[f64]) -> Polygon {
    assert_eq!(half_widths.len(), half_heights.len());
    let m = half_widths.len();
    assert!(m >= 1);
    for i in 1..m {
        assert!(half_widths[i] < half_widths[i - 1]);
        assert!(half_heights[i] > half_heights[i - 1]);
    }
    let (cx, cy) = center;
    // quadrant profile from (half_widths[0], 0) up to (0, half_heights[m-1]),
    // then mirrored through the four quadrants
    let mut quadrant: Vec<(f64, f64)> = Vec::new();
    for i in 0..m {
        quadrant.push((half_widths[i], half_heights[i]));
        if i + 1 < m {
            quadrant.push((half_widths[i + 1], half_heights[i]));
        }
    }
    let mut vertices: Vec<(f64, f64)> = Vec::new();
    // quadrant 1 (x > 0, y > 0) in CCW order
    for &(x, y) in &quadrant {
        vertices.push((cx + x, cy + y));
    }
    // quadrant 2 (x < 0, y > 0): reversed order
    for &(x, y) in quadrant.iter().rev() {
        vertices.push((cx - x, cy + y));
    }
    // quadrant 3 (x < 0, y < 0)
    for &(x, y) in &quadrant {
        vertices.push((cx - x, cy - y));
    }
    // quadrant 4 (x > 0, y < 0)
    for &(x, y) in quadrant.iter().rev() {
        vertices.push((cx + x, cy - y));
    }
    Polygon::new(vertices).expect("cross profile is rectilinear")
}

/// Axis-aligned wall segment at x, spanning y in (y0, y1).
#[derive(Debug, Clone, Copy)]
pub struct VWall {
    pub x: f64,
    pub y0: f64,
    pub y1: f64,
}

/// Axis-aligned wall segment at y, spanning x in (x0, x1).
#[derive(Debug, Clone, Copy)]
pub struct HWall {
    pub y: f64,
    pub x0: f64,
    pub x1: f64,
}

#[derive(Debug, Clone)]
pub struct Obstacle {
    pub vwalls: Vec<VWall>,
    pub hwalls: Vec<HWall>,
    /// (x0, x1, y0, y1) for slab rejection
    pub bbox: (f64, f64, f64, f64),
}

impl Obstacle {
    fn from_polygon(p: &Polygon) -> Obstacle {
        let n = p.vertices.len();
        let mut vwalls = Vec::new();
        let mut hwalls = Vec::new();
        for i in 0..n {
            let (x1, y1) = p.vertices[i];
            let (x2, y2) = p.vertices[(i + 1) % n];
            if x1 == x2 {
                vwalls.push(VWall {
                    x: x1,
                    y0: y1.min(y2),
                    y1: y1.max(y2),
                });
            } else {
                hwalls.push(HWall {
                    y: y1,
                    x0: x1.min(x2),
                    x1: x1.max(x2),
                });
            }
        }
        Obstacle {
            vwalls,
            hwalls,
            bbox: p.bbox(),
        }
    }
}

/// Billiard table: fundamental domain [0, l1) x [0, l2) with reflecting
/// obstacles, repeated over the lattice.
#[derive(Debug, Clone)]
pub struct RealTable {
    pub l1: f64,
    pub l2: f64,
    pub obstacles: Vec<Obstacle>,
    polygons: Vec<Polygon>,
}

impl RealTable {
    /// Empty table: free linear flow.
    pub fn empty(l1: f64, l2: f64) -> Result<RealTable, GeomError> {
        if !(l1 > 0.0) || !(l2 > 0.0) {
            return Err(GeomError::BadDomain(l1, l2));
        }
        Ok(RealTable {
            l1,
            l2,
            obstacles: vec![],
            polygons: vec![],
        })
    }

    pub fn from_polygons(l1: f64, l2: f64, polygons: Vec<Polygon>) -> Result<RealTable, GeomError> {
        if !(l1 > 0.0) || !(l2 > 0.0) {
            return Err(GeomError::BadDomain(l1, l2));
        }
        for p in &polygons {
            let (x0, x1, y0, y1) = p.bbox();
            if x0 <= 0.0 || x1 >= l1 || y0 <= 0.0 || y1 >= l2 {
                return Err(GeomError::ObstacleTouchesBoundary);
            }
        }
        let obstacles = polygons.iter().map(Obstacle::from_polygon).collect();
        Ok(RealTable {
            l1,
            l2,
            obstacles,
            polygons,
        })
    }

    /// Integer table as a real billiard: reflecting walls are the unit edges
    /// between blocked and free cells, merged into maximal segments. Walls on
    /// the domain seam are duplicated on both sides.
    pub fn from_integer_table(t: &IntegerTable) -> RealTable {
        let l1 = t.l1();
        let l2 = t.l2();
        let mut vsegs: Vec<(i64, i64)> = Vec::new(); // (x, y) unit wall at x, [y, y+1]
        let mut hsegs: Vec<(i64, i64)> = Vec::new(); // (x, y) unit wall at y, [x, x+1]
        for &(x, y) in t.blocked() {
            if !t.is_blocked(x + 1, y) {
                vsegs.push((x + 1, y));
            }
            if !t.is_blocked(x - 1, y) {
                vsegs.push((x, y));
            }
            if !t.is_blocked(x, y + 1) {
                hsegs.push((x, y + 1));
            }
            if !t.is_blocked(x, y - 1) {
                hsegs.push((x, y));
            }
        }
        let mut vwalls = merge_segments(&vsegs)
            .into_iter()
            .map(|(x, y0, y1)| VWall {
                x: x as f64,
                y0: y0 as f64,
                y1: y1 as f64,
            })
            .collect::<Vec<_>>();
        let mut hwalls = merge_segments(&hsegs)
            .into_iter()
            .map(|(y, x0, x1)| HWall {
                y: y as f64,
                x0: x0 as f64,
                x1: x1 as f64,
            })
            .collect::<Vec<_>>();
        // duplicate seam walls on the opposite side
        let mut extra_v = Vec::new();
        for w in &vwalls {
            if w.x == 0.0 {
                extra_v.push(VWall { x: l1 as f64, ..*w });
            } else if w.x == l1 as f64 {
                extra_v.push(VWall { x: 0.0, ..*w });
            }
        }
        vwalls.extend(extra_v);
        let mut extra_h = Vec::new();
        for w in &hwalls {
            if w.y == 0.0 {
                extra_h.push(HWall { y: l2 as f64, ..*w });
            } else if w.y == l2 as f64 {
                extra_h.push(HWall { y: 0.0, ..*w });
            }
        }
        hwalls.extend(extra_h);
        let bbox = (0.0, l1 as f64, 0.0, l2 as f64);
        RealTable {
            l1: l1 as f64,
            l2: l2 as f64,
            obstacles: vec![Obstacle {
                vwalls,
                hwalls,
                bbox,
            }],
            polygons: vec![],
        }
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    /// Point strictly inside an obstacle?
    pub fn point_blocked(&self, x: f64, y: f64) -> bool {
        self.polygons.iter().any(|p| p.contains(x, y))
    }
}

/// Merge unit segments (coordinate, start) into maximal (coordinate, lo, hi)
/// runs so that internal endpoints disappear.
fn merge_segments(segs: &[(i64, i64)]) -> Vec<(i64, i64, i64)> {
    let mut sorted = segs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: Vec<(i64, i64, i64)> = Vec::new();
    for &(c, s) in &sorted {
        match out.last_mut() {
            Some((lc, _, hi)) if *lc == c && *hi == s => *hi += 1,
            _ => out.push((c, s, s + 1)),
        }
    }
    out
}
