//! Boundary discretizations with constant straight elements and interior
//! collocation cells for rectangles, disks and simple polygons.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// `self + s (other − self)`.
    pub fn lerp(self, other: Point, s: f64) -> Point {
        Point::new(self.x + s * (other.x - self.x), self.y + s * (other.y - self.y))
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, rhs: Point) -> Point {
        Point::new(self * rhs.x, self * rhs.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// The computational region `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Rectangle { x0: f64, y0: f64, x1: f64, y1: f64 },
    Disk { center: Point, radius: f64 },
    /// Simple polygon, vertices listed counterclockwise without repeating the first.
    Polygon { vertices: Vec<Point> },
}

impl Domain {
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let d = Domain::Rectangle { x0, y0, x1, y1 };
        d.validate()?;
        Ok(d)
    }

    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        let d = Domain::Disk { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        let d = Domain::Polygon { vertices };
        d.validate()?;
        Ok(d)
    }

    /// The L-shaped hexagon used as the default region of test problem 3.
    pub fn l_shape() -> Self {
        Domain::Polygon {
            vertices: vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 0.5),
                Point::new(0.5, 0.5),
                Point::new(0.5, 1.0),
                Point::new(0.0, 1.0),
            ],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::Rectangle { x0, y0, x1, y1 } => {
                let finite = [x0, y0, x1, y1].iter().all(|v| v.is_finite());
                if !finite || x1 <= x0 || y1 <= y0 {
                    return Err(Error::Config(format!(
                        "rectangle needs positive side lengths, got [{x0}, {x1}] x [{y0}, {y1}]"
                    )));
                }
            }
            Domain::Disk { center, radius } => {
                if !(*radius > 0.0) || !radius.is_finite() || !center.x.is_finite() || !center.y.is_finite() {
                    return Err(Error::Config(format!("disk radius must be positive, got {radius}")));
                }
            }
            Domain::Polygon { vertices } => validate_polygon(vertices)?,
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        match self {
            Domain::Rectangle { x0, y0, x1, y1 } => (x1 - x0) * (y1 - y0),
            Domain::Disk { radius, .. } => PI * radius * radius,
            Domain::Polygon { vertices } => signed_area(vertices),
        }
    }

    /// True iff `point` lies strictly inside the region; boundary points are excluded.
    pub fn contains(&self, point: Point) -> bool {
        match self {
            Domain::Rectangle { x0, y0, x1, y1 } => {
                point.x > *x0 && point.x < *x1 && point.y > *y0 && point.y < *y1
            }
            Domain::Disk { center, radius } => point.distance(*center) < *radius,
            Domain::Polygon { vertices } => polygon_contains(vertices, point),
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self {
            Domain::Rectangle { x0, y0, x1, y1 } => (Point::new(*x0, *y0), Point::new(*x1, *y1)),
            Domain::Disk { center, radius } => (
                Point::new(center.x - radius, center.y - radius),
                Point::new(center.x + radius, center.y + radius),
            ),
            Domain::Polygon { vertices } => {
                let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
                    hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
                }
                (lo, hi)
            }
        }
    }
}

fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
}

fn validate_polygon(vertices: &[Point]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::Config(format!("polygon needs at least 3 vertices, got {n}")));
    }
    if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
        return Err(Error::Config("polygon vertices must be finite".into()));
    }
    for i in 0..n {
        if vertices[i].distance(vertices[(i + 1) % n]) == 0.0 {
            return Err(Error::Config(format!("polygon edge {i} has zero length")));
        }
    }
    if signed_area(vertices) <= 0.0 {
        return Err(Error::Config("polygon vertices must be ordered counterclockwise".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let (c, d) = (vertices[j], vertices[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return Err(Error::Config(format!("polygon edges {i} and {j} intersect")));
            }
        }
    }
    Ok(())
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let orient = |p: Point, q: Point, r: Point| (q - p).cross(r - p);
    let on_segment = |p: Point, q: Point, r: Point| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// Strict point-in-polygon test: points on an edge are outside.
pub(crate) fn polygon_contains(vertices: &[Point], p: Point) -> bool {
    let n = vertices.len();
    let scale = vertices
        .iter()
        .map(|v| v.x.abs().max(v.y.abs()))
        .fold(1.0, f64::max);
    let mut inside = false;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if point_segment_distance(p, a, b) <= 1e-14 * scale {
            return false;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    inside
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let s = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    p.distance(a.lerp(b, s))
}

/// A straight constant element; `u` and `q` are collocated at the midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryElement {
    pub start: Point,
    pub end: Point,
    pub midpoint: Point,
    pub length: f64,
    /// Outward unit normal.
    pub normal: Point,
}

impl BoundaryElement {
    /// Element from `start` to `end` on a counterclockwise boundary.
    pub fn new(start: Point, end: Point) -> Self {
        let d = end - start;
        let length = d.norm();
        Self {
            start,
            end,
            midpoint: start.lerp(end, 0.5),
            length,
            normal: Point::new(d.y / length, -d.x / length),
        }
    }

    /// Unit tangent in the direction of traversal.
    pub fn tangent(&self) -> Point {
        (1.0 / self.length) * (self.end - self.start)
    }

    /// Euclidean distance from `p` to the segment.
    pub fn distance_to(&self, p: Point) -> f64 {
        point_segment_distance(p, self.start, self.end)
    }
}

/// Closed counterclockwise chain of boundary elements.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMesh {
    pub elements: Vec<BoundaryElement>,
}

impl BoundaryMesh {
    /// Closes the vertex loop `vertices[0] → … → vertices[n−1] → vertices[0]`.
    pub fn from_vertices(vertices: &[Point]) -> Self {
        let n = vertices.len();
        let elements = (0..n)
            .map(|i| BoundaryElement::new(vertices[i], vertices[(i + 1) % n]))
            .collect();
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn midpoints(&self) -> Vec<Point> {
        self.elements.iter().map(|e| e.midpoint).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.elements.iter().map(|e| e.length).sum()
    }

    /// Strictly inside the polygon traced by the elements.
    pub fn contains(&self, p: Point) -> bool {
        let vertices: Vec<Point> = self.elements.iter().map(|e| e.start).collect();
        polygon_contains(&vertices, p)
    }

    /// Sum of exterior turning angles; `2π` for a counterclockwise loop.
    pub fn total_turning(&self) -> f64 {
        let n = self.elements.len();
        (0..n)
            .map(|i| {
                let t0 = self.elements[i].tangent();
                let t1 = self.elements[(i + 1) % n].tangent();
                t0.cross(t1).atan2(t0.dot(t1))
            })
            .sum()
    }
}

/// Splits `∂Ω` into `n_elements` straight constant elements.
///
/// Rectangles get `n/4` equal elements per side, disks `n` equal chords, and
/// polygons a count per edge proportional to its length (at least one each).
pub fn discretize_boundary(domain: &Domain, n_elements: usize) -> Result<BoundaryMesh> {
    domain.validate()?;
    if n_elements < 4 {
        return Err(Error::Config(format!("need at least 4 boundary elements, got {n_elements}")));
    }
    let vertices = match domain {
        Domain::Rectangle { x0, y0, x1, y1 } => {
            if n_elements % 4 != 0 {
                return Err(Error::Config(format!(
                    "rectangles need a multiple of 4 elements, got {n_elements}"
                )));
            }
            let corners = [
                Point::new(*x0, *y0),
                Point::new(*x1, *y0),
                Point::new(*x1, *y1),
                Point::new(*x0, *y1),
            ];
            subdivide_edges(&corners, &[n_elements / 4; 4])
        }
        Domain::Disk { center, radius } => (0..n_elements)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / n_elements as f64;
                Point::new(center.x + radius * theta.cos(), center.y + radius * theta.sin())
            })
            .collect(),
        Domain::Polygon { vertices } => {
            if n_elements < vertices.len() {
                return Err(Error::Config(format!(
                    "{n_elements} elements cannot resolve a polygon with {} edges",
                    vertices.len()
                )));
            }
            let counts = apportion_by_length(vertices, n_elements);
            subdivide_edges(vertices, &counts)
        }
    };
    Ok(BoundaryMesh::from_vertices(&vertices))
}

fn subdivide_edges(corners: &[Point], counts: &[usize]) -> Vec<Point> {
    let n = corners.len();
    let mut out = Vec::with_capacity(counts.iter().sum());
    for i in 0..n {
        let (a, b) = (corners[i], corners[(i + 1) % n]);
        let m = counts[i];
        for j in 0..m {
            out.push(a.lerp(b, j as f64 / m as f64));
        }
    }
    out
}

/// Largest-remainder apportionment of `total` elements over the polygon edges.
fn apportion_by_length(vertices: &[Point], total: usize) -> Vec<usize> {
    let n = vertices.len();
    let lengths: Vec<f64> = (0..n)
        .map(|i| vertices[i].distance(vertices[(i + 1) % n]))
        .collect();
    let perimeter: f64 = lengths.iter().sum();
    let spare = (total - n) as f64;
    // One element per edge is reserved; the rest are shared by length.
    let quotas: Vec<f64> = lengths.iter().map(|l| spare * l / perimeter).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| 1 + q.floor() as usize).collect();
    let mut remaining = total - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (ri, rj) = (quotas[i] - quotas[i].floor(), quotas[j] - quotas[j].floor());
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    for &i in order.iter().cycle() {
        if remaining == 0 {
            break;
        }
        counts[i] += 1;
        remaining -= 1;
    }
    counts
}

/// Interior collocation points `P_{N+j}` with cell areas `S_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorCellSet {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl InteriorCellSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Cell decomposition of `Ω` at resolution `m`.
///
/// * rectangle: `m × m` uniform cells;
/// * disk: polar grid of `m` rings by `4m` sectors with exact annular-sector areas;
/// * polygon: the cells of an `m × m` bounding-box grid whose centers lie inside.
pub fn interior_cells(domain: &Domain, m: usize) -> Result<InteriorCellSet> {
    domain.validate()?;
    if m < 2 {
        return Err(Error::Config(format!("interior resolution must be at least 2, got {m}")));
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match domain {
        Domain::Rectangle { x0, y0, x1, y1 } => {
            let dx = (x1 - x0) / m as f64;
            let dy = (y1 - y0) / m as f64;
            for j in 0..m {
                for i in 0..m {
                    points.push(Point::new(x0 + (i as f64 + 0.5) * dx, y0 + (j as f64 + 0.5) * dy));
                    weights.push(dx * dy);
                }
            }
        }
        Domain::Disk { center, radius } => {
            let sectors = 4 * m;
            let dtheta = 2.0 * PI / sectors as f64;
            for ring in 0..m {
                let r_in = radius * ring as f64 / m as f64;
                let r_out = radius * (ring + 1) as f64 / m as f64;
                let r_mid = 0.5 * (r_in + r_out);
                let area = 0.5 * (r_out * r_out - r_in * r_in) * dtheta;
                for s in 0..sectors {
                    let theta = (s as f64 + 0.5) * dtheta;
                    points.push(Point::new(
                        center.x + r_mid * theta.cos(),
                        center.y + r_mid * theta.sin(),
                    ));
                    weights.push(area);
                }
            }
        }
        Domain::Polygon { .. } => {
            let (lo, hi) = domain.bounding_box();
            let dx = (hi.x - lo.x) / m as f64;
            let dy = (hi.y - lo.y) / m as f64;
            for j in 0..m {
                for i in 0..m {
                    let p = Point::new(lo.x + (i as f64 + 0.5) * dx, lo.y + (j as f64 + 0.5) * dy);
                    if domain.contains(p) {
                        points.push(p);
                        weights.push(dx * dy);
                    }
                }
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Config(format!("resolution {m} leaves no interior cells")));
    }
    Ok(InteriorCellSet { points, weights })
}

/// Cell resolution whose cells are about as wide as the boundary elements:
/// `N/4` for rectangles, `N/8` rings for disks, and for polygons the
/// bounding-box side divided by the mean element length. Never below 2.
pub fn default_interior_resolution(domain: &Domain, n_elements: usize) -> usize {
    let m = match domain {
        Domain::Rectangle { .. } => n_elements / 4,
        Domain::Disk { .. } => n_elements / 8,
        Domain::Polygon { vertices } => {
            let perimeter: f64 = (0..vertices.len())
                .map(|i| vertices[i].distance(vertices[(i + 1) % vertices.len()]))
                .sum();
            let (lo, hi) = domain.bounding_box();
            let side = (hi.x - lo.x).max(hi.y - lo.y);
            (n_elements as f64 * side / perimeter).round() as usize
        }
    };
    m.max(2)
}

/// Convenience wrapper for [`Domain::contains`].
pub fn contains(domain: &Domain, point: Point) -> bool {
    domain.contains(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square_pi() -> Domain {
        Domain::rectangle(0.0, 0.0, PI, PI).unwrap()
    }

    #[test]
    fn rectangle_eight_elements() {
        let mesh = discretize_boundary(&square_pi(), 8).unwrap();
        assert_eq!(mesh.len(), 8);
        for e in &mesh.elements {
            assert_relative_eq!(e.length, PI / 2.0, max_relative = 1e-15);
        }
        let bottom: Vec<_> = mesh.elements[..2].iter().collect();
        assert_relative_eq!(bottom[0].midpoint.x, PI / 4.0, max_relative = 1e-15);
        assert_relative_eq!(bottom[1].midpoint.x, 3.0 * PI / 4.0, max_relative = 1e-15);
        for e in bottom {
            assert_eq!(e.midpoint.y, 0.0);
            assert_relative_eq!(e.normal.y, -1.0);
            assert!(e.normal.x.abs() < 1e-15);
        }
    }

    #[test]
    fn disk_chords() {
        let disk = Domain::disk(Point::new(0.0, 0.0), 1.0).unwrap();
        let mesh = discretize_boundary(&disk, 4).unwrap();
        for e in &mesh.elements {
            assert_relative_eq!(e.midpoint.norm(), 0.5f64.sqrt(), max_relative = 1e-14);
        }
    }

    #[test]
    fn perimeter_conserved() {
        let mesh = discretize_boundary(&square_pi(), 80).unwrap();
        assert_relative_eq!(mesh.perimeter(), 4.0 * PI, max_relative = 1e-13);
    }

    #[test]
    fn rejects_bad_counts() {
        assert!(matches!(discretize_boundary(&square_pi(), 10), Err(Error::Config(_))));
        assert!(matches!(discretize_boundary(&Domain::l_shape(), 5), Err(Error::Config(_))));
        assert!(discretize_boundary(&square_pi(), 0).is_err());
    }

    #[test]
    fn polygon_counts_follow_edge_length() {
        let mesh = discretize_boundary(&Domain::l_shape(), 50).unwrap();
        assert_eq!(mesh.len(), 50);
        assert_relative_eq!(mesh.perimeter(), 4.0, max_relative = 1e-13);
        let mesh = discretize_boundary(&Domain::l_shape(), 8).unwrap();
        assert_eq!(mesh.len(), 8);
    }

    #[test]
    fn closed_and_counterclockwise() {
        for (domain, n) in [
            (square_pi(), 40),
            (Domain::disk(Point::new(0.3, -0.2), 2.0).unwrap(), 37),
            (Domain::l_shape(), 64),
        ] {
            let mesh = discretize_boundary(&domain, n).unwrap();
            for i in 0..mesh.len() {
                assert_eq!(mesh.elements[i].end, mesh.elements[(i + 1) % mesh.len()].start);
            }
            assert_relative_eq!(mesh.total_turning(), 2.0 * PI, max_relative = 1e-12);
        }
    }

    #[test]
    fn normals_point_outward() {
        for (domain, n) in [
            (square_pi(), 40),
            (Domain::disk(Point::new(0.0, 0.0), 1.0).unwrap(), 40),
            (Domain::l_shape(), 60),
        ] {
            let mesh = discretize_boundary(&domain, n).unwrap();
            for e in &mesh.elements {
                assert_relative_eq!(e.normal.norm(), 1.0, max_relative = 1e-12);
                assert!(e.normal.dot(e.end - e.start).abs() < 1e-12);
                let eps = 1e-6 * e.length;
                assert!(!mesh.contains(e.midpoint + eps * e.normal));
                assert!(mesh.contains(e.midpoint - eps * e.normal));
            }
        }
    }

    #[test]
    fn rectangle_cells() {
        let cells = interior_cells(&square_pi(), 2).unwrap();
        assert_eq!(cells.len(), 4);
        assert_relative_eq!(cells.points[0].x, PI / 4.0);
        assert_relative_eq!(cells.points[0].y, PI / 4.0);
        for w in &cells.weights {
            assert_relative_eq!(*w, PI * PI / 4.0, max_relative = 1e-15);
        }
        let cells = interior_cells(&square_pi(), 10).unwrap();
        assert_relative_eq!(cells.total_area(), PI * PI, max_relative = 1e-14);
    }

    #[test]
    fn disk_cells_sum_to_area() {
        let disk = Domain::disk(Point::new(0.0, 0.0), 1.0).unwrap();
        for m in [2, 5, 13] {
            let cells = interior_cells(&disk, m).unwrap();
            assert_eq!(cells.len(), 4 * m * m);
            assert_relative_eq!(cells.total_area(), PI, max_relative = 1e-13);
            assert!(cells.points.iter().all(|p| disk.contains(*p)));
        }
    }

    #[test]
    fn l_shape_cells() {
        let domain = Domain::l_shape();
        let cells = interior_cells(&domain, 10).unwrap();
        assert_eq!(cells.len(), 75);
        assert_relative_eq!(cells.total_area(), 0.75, max_relative = 1e-13);
    }

    #[test]
    fn containment() {
        let disk = Domain::disk(Point::new(0.0, 0.0), 1.0).unwrap();
        assert!(contains(&disk, Point::new(0.0, 0.0)));
        assert!(!contains(&disk, Point::new(1.0, 0.0)));
        assert!(contains(&square_pi(), Point::new(PI / 2.0, PI / 2.0)));
        assert!(!contains(&square_pi(), Point::new(0.0, 1.0)));
        let l = Domain::l_shape();
        assert!(contains(&l, Point::new(0.25, 0.75)));
        assert!(!contains(&l, Point::new(0.75, 0.75)));
        assert!(!contains(&l, Point::new(0.5, 0.75)));
    }

    #[test]
    fn invalid_domains() {
        assert!(Domain::rectangle(0.0, 0.0, -1.0, 1.0).is_err());
        assert!(Domain::disk(Point::new(0.0, 0.0), 0.0).is_err());
        let clockwise = vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)];
        assert!(Domain::polygon(clockwise).is_err());
        let bowtie = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert!(Domain::polygon(bowtie).is_err());
    }

    #[test]
    fn default_resolution_tracks_element_size() {
        let sq = Domain::rectangle(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(default_interior_resolution(&sq, 80), 20);
        let disk = Domain::disk(Point::new(0.0, 0.0), 1.0).unwrap();
        assert_eq!(default_interior_resolution(&disk, 160), 20);
        assert_eq!(default_interior_resolution(&Domain::l_shape(), 200), 50);
        assert_eq!(default_interior_resolution(&sq, 4), 2);
    }
}
