//! Centered star domains in the plane and their three positively homogeneous
//! scalar fields: the gauge `g`, the expansion `s` and the oriented distance `d`.
//!
//! Every domain is stored centered, i.e. the origin is an interior point and
//! the domain is star-shaped with respect to a ball around it. Callers that
//! have an off-center domain translate it before construction.
//!
//! Three shapes are supported:
//!
//! * convex polygons (exact evaluation of every field),
//! * radial splines, where the boundary radius is piecewise linear in the
//!   polar angle (fields are closed-form except the oriented distance, which
//!   uses a dense boundary polyline with one Newton polish step),
//! * balls, which also accept points of arbitrary dimension through the
//!   `*_nd` evaluators.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = nalgebra::Vector2<f64>;

/// Number of boundary samples used for the oriented distance of radial splines.
pub const RADIAL_DISTANCE_SAMPLES: usize = 4096;

const STRICT_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn cross(a: &Point, b: &Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Polar angle of `x` in `[0, 2π)`.
#[inline]
pub fn polar_angle(x: &Point) -> f64 {
    let a = x.y.atan2(x.x);
    let a = if a < 0.0 { a + TAU } else { a };
    if a >= TAU {
        0.0
    } else {
        a
    }
}

#[inline]
pub fn unit_vector(angle: f64) -> Point {
    Point::new(angle.cos(), angle.sin())
}

/// Serialized form of a domain, as read from and written to JSON files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DomainSpec {
    Polygon { vertices: Vec<[f64; 2]> },
    Radial { angles: Vec<f64>, radii: Vec<f64> },
    Ball { radius: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainMetrics {
    /// Radius of the ball around the origin with respect to which the domain is star-shaped.
    pub rho: f64,
    /// Smallest distance from the origin to the boundary.
    pub r_in: f64,
    /// Largest distance from the origin to the boundary.
    pub r_out: f64,
    pub diameter: f64,
    pub area: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarField {
    Gauge,
    Expansion,
    OrientedDistance,
}

/// Supporting line `{x : normal · x = offset}` of a polygon edge, `normal` of unit length.
#[derive(Clone, Copy, Debug)]
struct EdgeLine {
    normal: Point,
    offset: f64,
}

#[derive(Clone, Debug)]
struct CurveSample {
    point: Point,
    angle: f64,
    arc: usize,
}

#[derive(Clone, Debug)]
enum Shape {
    Polygon {
        vertices: Vec<Point>,
        lines: Vec<EdgeLine>,
    },
    Radial {
        angles: Vec<f64>,
        radii: Vec<f64>,
        samples: Vec<CurveSample>,
    },
    Ball {
        radius: f64,
    },
}

/// A validated, immutable, centered star domain.
#[derive(Clone, Debug)]
pub struct StarDomain {
    shape: Shape,
    metrics: DomainMetrics,
    convex: bool,
    support_max: f64,
}

impl StarDomain {
    pub fn ball(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidDomain(format!("ball radius {radius} must be positive")));
        }
        let metrics = DomainMetrics {
            rho: radius,
            r_in: radius,
            r_out: radius,
            diameter: 2.0 * radius,
            area: PI * radius * radius,
        };
        Ok(Self { shape: Shape::Ball { radius }, metrics, convex: true, support_max: radius })
    }

    /// Convex polygon from counterclockwise vertices. Collinear triples are rejected.
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().any(|v| !(v.x.is_finite() && v.y.is_finite())) {
            return Err(Error::InvalidDomain("polygon vertex is not finite".into()));
        }
        let scale = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut lines = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let e = b - a;
            let f = c - b;
            let len = e.norm();
            if len <= STRICT_TOL * scale {
                return Err(Error::InvalidDomain(format!("repeated vertex at index {}", (i + 1) % n)));
            }
            if cross(&e, &f) <= STRICT_TOL * len * f.norm() {
                return Err(Error::InvalidDomain(format!(
                    "vertices {i}, {}, {} are not in strict counterclockwise convex position",
                    (i + 1) % n,
                    (i + 2) % n
                )));
            }
            // outward normal of a counterclockwise edge
            let normal = Point::new(e.y, -e.x) / len;
            let offset = normal.dot(&a);
            if offset <= STRICT_TOL * scale {
                return Err(Error::InvalidDomain("origin is not strictly inside the polygon".into()));
            }
            lines.push(EdgeLine { normal, offset });
        }
        // strict local convexity everywhere does not exclude a polygon winding twice
        let turning: f64 = (0..n)
            .map(|i| {
                let e = vertices[(i + 1) % n] - vertices[i];
                let f = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                cross(&e, &f).atan2(e.dot(&f))
            })
            .sum();
        if (turning - TAU).abs() > 1e-6 {
            return Err(Error::InvalidDomain("polygon boundary is not simple".into()));
        }

        let rho = lines.iter().map(|l| l.offset).fold(f64::INFINITY, f64::min);
        let r_in = (0..n)
            .map(|i| segment_distance(&Point::zeros(), &vertices[i], &vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min);
        let r_out = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let diameter = max_pairwise_distance(&vertices);
        let area = 0.5 * (0..n).map(|i| cross(&vertices[i], &vertices[(i + 1) % n])).sum::<f64>();
        let support_max = lines.iter().map(|l| l.offset).fold(0.0, f64::max);
        let metrics = DomainMetrics { rho, r_in, r_out, diameter, area };
        Ok(Self { shape: Shape::Polygon { vertices, lines }, metrics, convex: true, support_max })
    }

    /// Radial spline: boundary radius linear in the polar angle between the
    /// given nodes, with periodic wrap-around. Angles must be strictly
    /// increasing in `[0, 2π)`.
    pub fn radial(angles: Vec<f64>, radii: Vec<f64>) -> Result<Self> {
        let n = angles.len();
        if n < 3 || radii.len() != n {
            return Err(Error::InvalidDomain(
                "radial spline needs at least 3 angles and as many radii".into(),
            ));
        }
        if angles.iter().any(|a| !a.is_finite() || *a < 0.0 || *a >= TAU) {
            return Err(Error::InvalidDomain("angles must lie in [0, 2π)".into()));
        }
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidDomain("angles must be strictly increasing".into()));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidDomain("every radius sample must be positive".into()));
        }
        if angles[0] + TAU - angles[n - 1] >= PI || angles.windows(2).any(|w| w[1] - w[0] >= PI) {
            return Err(Error::InvalidDomain("angular gap of π or more between nodes".into()));
        }

        let arc = |i: usize| {
            let j = (i + 1) % n;
            let a1 = if j == 0 { angles[0] + TAU } else { angles[j] };
            (angles[i], a1, radii[i], radii[j])
        };

        let mut rho = f64::INFINITY;
        let mut support_tangent = 0.0_f64;
        let mut area = 0.0;
        for i in 0..n {
            let (a0, a1, r0, r1) = arc(i);
            let slope = (r1 - r0) / (a1 - a0);
            // distance from the origin to the tangent line, increasing in r
            for r in [r0, r1] {
                let h = r * r / (r * r + slope * slope).sqrt();
                rho = rho.min(h);
                support_tangent = support_tangent.max(h);
            }
            area += 0.5 * (a1 - a0) * (r0 * r0 + r0 * r1 + r1 * r1) / 3.0;
        }

        let per_arc = RADIAL_DISTANCE_SAMPLES.div_ceil(n).max(1);
        let mut samples = Vec::with_capacity(n * per_arc);
        for i in 0..n {
            let (a0, a1, r0, r1) = arc(i);
            for k in 0..per_arc {
                let t = k as f64 / per_arc as f64;
                let angle = a0 + t * (a1 - a0);
                let r = r0 + t * (r1 - r0);
                samples.push(CurveSample { point: r * unit_vector(angle), angle, arc: i });
            }
        }

        let nodes: Vec<Point> = angles.iter().zip(&radii).map(|(&a, &r)| r * unit_vector(a)).collect();
        let r_in = radii.iter().copied().fold(f64::INFINITY, f64::min);
        let r_out = radii.iter().copied().fold(0.0, f64::max);
        let diameter = max_pairwise_distance(&nodes);
        let convex = polyline_turns_left(samples.iter().map(|s| s.point).collect::<Vec<_>>().as_slice());
        let metrics = DomainMetrics { rho, r_in, r_out, diameter, area };
        let support_max = if convex { support_tangent } else { r_out };
        Ok(Self { shape: Shape::Radial { angles, radii, samples }, metrics, convex, support_max })
    }

    pub fn from_spec(spec: &DomainSpec) -> Result<Self> {
        match spec {
            DomainSpec::Ball { radius } => Self::ball(*radius),
            DomainSpec::Polygon { vertices } => {
                Self::polygon(vertices.iter().map(|v| Point::new(v[0], v[1])).collect())
            }
            DomainSpec::Radial { angles, radii } => Self::radial(angles.clone(), radii.clone()),
        }
    }

    pub fn to_spec(&self) -> DomainSpec {
        match &self.shape {
            Shape::Ball { radius } => DomainSpec::Ball { radius: *radius },
            Shape::Polygon { vertices, .. } => {
                DomainSpec::Polygon { vertices: vertices.iter().map(|v| [v.x, v.y]).collect() }
            }
            Shape::Radial { angles, radii, .. } => {
                DomainSpec::Radial { angles: angles.clone(), radii: radii.clone() }
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_spec())?)
    }

    /// The same domain scaled by `factor > 0` about the origin.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidArgument(format!("scale factor {factor} must be positive")));
        }
        match &self.shape {
            Shape::Ball { radius } => Self::ball(radius * factor),
            Shape::Polygon { vertices, .. } => {
                Self::polygon(vertices.iter().map(|v| v * factor).collect())
            }
            Shape::Radial { angles, radii, .. } => {
                Self::radial(angles.clone(), radii.iter().map(|r| r * factor).collect())
            }
        }
    }

    pub fn metrics(&self) -> DomainMetrics {
        self.metrics
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// Largest distance from the origin to a supporting line of the boundary
    /// (`r_out` when the domain is not convex).
    pub fn support_max(&self) -> f64 {
        self.support_max
    }

    /// Boundary radius in the direction of `direction` (its length is ignored).
    /// This is the expansion function restricted to the unit circle.
    pub fn boundary_radius(&self, direction: &Point) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::Polygon { lines, .. } => {
                let u = direction / direction.norm();
                1.0 / polygon_gauge(lines, &u)
            }
            Shape::Radial { angles, radii, .. } => radial_eval(angles, radii, polar_angle(direction)).0,
        }
    }

    /// Boundary point on the ray at polar angle `angle`.
    pub fn boundary_point(&self, angle: f64) -> Point {
        let u = unit_vector(angle);
        self.boundary_radius(&u) * u
    }

    pub fn gauge(&self, x: &Point) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => x.norm() / radius,
            Shape::Polygon { lines, .. } => polygon_gauge(lines, x),
            Shape::Radial { angles, radii, .. } => {
                let n = x.norm();
                if n == 0.0 {
                    0.0
                } else {
                    n / radial_eval(angles, radii, polar_angle(x)).0
                }
            }
        }
    }

    pub fn expansion(&self, x: &Point) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => radius * x.norm(),
            Shape::Polygon { lines, .. } => {
                let g = polygon_gauge(lines, x);
                if g == 0.0 {
                    0.0
                } else {
                    x.norm_squared() / g
                }
            }
            Shape::Radial { angles, radii, .. } => {
                let n = x.norm();
                if n == 0.0 {
                    0.0
                } else {
                    n * radial_eval(angles, radii, polar_angle(x)).0
                }
            }
        }
    }

    /// Membership in the closure of the domain.
    pub fn contains(&self, x: &Point) -> bool {
        self.gauge(x) <= 1.0
    }

    /// Signed distance to the boundary, negative in the closure of the domain.
    pub fn oriented_distance(&self, x: &Point) -> f64 {
        let dist = match &self.shape {
            Shape::Ball { radius } => return x.norm() - radius,
            Shape::Polygon { vertices, .. } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| segment_distance(x, &vertices[i], &vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
            Shape::Radial { angles, radii, samples } => radial_distance(angles, radii, samples, x),
        };
        if self.contains(x) {
            -dist
        } else {
            dist
        }
    }

    pub fn eval(&self, field: ScalarField, x: &Point) -> f64 {
        match field {
            ScalarField::Gauge => self.gauge(x),
            ScalarField::Expansion => self.expansion(x),
            ScalarField::OrientedDistance => self.oriented_distance(x),
        }
    }

    /// Gauge of a point of arbitrary dimension. Only balls are dimension-generic;
    /// the planar shapes require `x.len() == 2`.
    pub fn gauge_nd(&self, x: &[f64]) -> Result<f64> {
        match &self.shape {
            Shape::Ball { radius } => Ok(norm_nd(x) / radius),
            _ => Ok(self.gauge(&self.planar(x)?)),
        }
    }

    pub fn expansion_nd(&self, x: &[f64]) -> Result<f64> {
        match &self.shape {
            Shape::Ball { radius } => Ok(norm_nd(x) * radius),
            _ => Ok(self.expansion(&self.planar(x)?)),
        }
    }

    pub fn oriented_distance_nd(&self, x: &[f64]) -> Result<f64> {
        match &self.shape {
            Shape::Ball { radius } => Ok(norm_nd(x) - radius),
            _ => Ok(self.oriented_distance(&self.planar(x)?)),
        }
    }

    fn planar(&self, x: &[f64]) -> Result<Point> {
        match x {
            [a, b] => Ok(Point::new(*a, *b)),
            _ => Err(Error::DimensionMismatch(format!(
                "planar domain evaluated at a point of dimension {}",
                x.len()
            ))),
        }
    }

    /// Whether the domain is star-shaped with respect to every point of the
    /// open ball of radius `rho_test` around the origin.
    ///
    /// Exact for polygons and balls. Radial splines are checked by sampling
    /// segments between `n_dirs` boundary points and `n_dirs` points on the
    /// test circle.
    pub fn is_star_shaped_wrt_ball(&self, rho_test: f64, n_dirs: usize) -> Result<bool> {
        if !(rho_test.is_finite() && rho_test > 0.0) {
            return Err(Error::InvalidArgument(format!("rho_test = {rho_test} must be positive")));
        }
        if n_dirs < 3 {
            return Err(Error::InvalidArgument("need at least 3 sample directions".into()));
        }
        match &self.shape {
            Shape::Ball { radius } => Ok(rho_test <= *radius),
            Shape::Polygon { .. } => Ok(rho_test <= self.metrics.rho),
            Shape::Radial { .. } => {
                if rho_test >= self.metrics.r_in {
                    return Ok(false);
                }
                const STEPS: usize = 32;
                let boundary: Vec<Point> = (0..n_dirs)
                    .map(|i| self.boundary_point(TAU * i as f64 / n_dirs as f64))
                    .collect();
                for j in 0..n_dirs {
                    let y = rho_test * unit_vector(TAU * (j as f64 + 0.5) / n_dirs as f64);
                    for b in &boundary {
                        for k in 1..STEPS {
                            let p = y + (b - y) * (k as f64 / STEPS as f64);
                            if self.gauge(&p) > 1.0 + 1e-9 {
                                return Ok(false);
                            }
                        }
                    }
                }
                Ok(true)
            }
        }
    }
}

fn norm_nd(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn polygon_gauge(lines: &[EdgeLine], x: &Point) -> f64 {
    lines.iter().map(|l| l.normal.dot(x) / l.offset).fold(0.0, f64::max)
}

/// Radius at `angle`, plus the arc index and the slope `dr/dθ` on that arc.
fn radial_eval(angles: &[f64], radii: &[f64], angle: f64) -> (f64, usize, f64) {
    let n = angles.len();
    let i = angles.partition_point(|&a| a <= angle);
    let (arc, a0, a1, r0, r1, theta) = if i == 0 || i == n {
        let theta = if i == 0 { angle + TAU } else { angle };
        (n - 1, angles[n - 1], angles[0] + TAU, radii[n - 1], radii[0], theta)
    } else {
        (i - 1, angles[i - 1], angles[i], radii[i - 1], radii[i], angle)
    };
    let slope = (r1 - r0) / (a1 - a0);
    (r0 + slope * (theta - a0), arc, slope)
}

fn radial_distance(angles: &[f64], radii: &[f64], samples: &[CurveSample], x: &Point) -> f64 {
    let m = samples.len();
    let mut best = (f64::INFINITY, 0usize, 0.0);
    for k in 0..m {
        let a = &samples[k].point;
        let b = &samples[(k + 1) % m].point;
        let (d, t) = segment_distance_param(x, a, b);
        if d < best.0 {
            best = (d, k, t);
        }
    }
    let (_, k, t) = best;
    let s0 = &samples[k];
    let s1 = &samples[(k + 1) % m];
    let mut a1 = s1.angle;
    if a1 <= s0.angle {
        a1 += TAU;
    }
    let curve = |theta: f64| {
        let (r, _, _) = radial_eval(angles, radii, theta.rem_euclid(TAU));
        r * unit_vector(theta)
    };
    let mut dist = (s0.point - x).norm().min((s1.point - x).norm());
    let theta0 = s0.angle + t * (a1 - s0.angle);
    dist = dist.min((curve(theta0) - x).norm());

    // one Newton step on |c(θ) - x|²/2 along the arc of the nearest segment
    let (r, _, slope) = radial_eval(angles, radii, theta0.rem_euclid(TAU));
    let u = unit_vector(theta0);
    let v = Point::new(-u.y, u.x);
    let c = r * u;
    let dc = slope * u + r * v;
    let ddc = 2.0 * slope * v - r * u;
    let diff = c - x;
    let grad = diff.dot(&dc);
    let hess = dc.norm_squared() + diff.dot(&ddc);
    if hess > 0.0 {
        let (lo, hi) = {
            let start = angles[s0.arc];
            let end = if s0.arc + 1 == angles.len() { angles[0] + TAU } else { angles[s0.arc + 1] };
            let start = if start > theta0 { start - TAU } else { start };
            (start, end.max(start))
        };
        let theta1 = (theta0 - grad / hess).clamp(lo, hi);
        dist = dist.min((curve(theta1) - x).norm());
    }
    dist
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: &Point, a: &Point, b: &Point) -> f64 {
    segment_distance_param(p, a, b).0
}

fn segment_distance_param(p: &Point, a: &Point, b: &Point) -> (f64, f64) {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 == 0.0 { 0.0 } else { ((p - a).dot(&ab) / len2).clamp(0.0, 1.0) };
    ((a + ab * t - p).norm(), t)
}

fn max_pairwise_distance(points: &[Point]) -> f64 {
    let mut best = 0.0_f64;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            best = best.max((points[i] - points[j]).norm_squared());
        }
    }
    best.sqrt()
}

fn polyline_turns_left(points: &[Point]) -> bool {
    let n = points.len();
    (0..n).all(|i| {
        let e = points[(i + 1) % n] - points[i];
        let f = points[(i + 2) % n] - points[(i + 1) % n];
        cross(&e, &f) >= -1e-12 * e.norm() * f.norm()
    })
}

/// Centered square `[-h, h]²`.
pub fn centered_square(half_side: f64) -> Result<StarDomain> {
    let h = half_side;
    StarDomain::polygon(vec![
        Point::new(-h, -h),
        Point::new(h, -h),
        Point::new(h, h),
        Point::new(-h, h),
    ])
}

/// Regular polygon sampling of the ellipse with semi-axes `a`, `b`.
pub fn ellipse_polygon(a: f64, b: f64, sides: usize) -> Result<StarDomain> {
    StarDomain::polygon(
        (0..sides)
            .map(|i| {
                let t = TAU * i as f64 / sides as f64;
                Point::new(a * t.cos(), b * t.sin())
            })
            .collect(),
    )
}
