//! Radial maps between centered star domains and empirical checks of their
//! Lipschitz constants against the sharp theoretical bounds.
//!
//! Every map here sends each ray from the origin into itself:
//!
//! * the expansion map `S(x) = s(x̂)·x` takes the unit ball onto the domain,
//! * the gauge map `G = S⁻¹` takes the domain back to the unit ball,
//! * the transfer map `Ψ = Θ ∘ G₁` between two nearby domains equals the
//!   identity on `S₁(B_T)` with `T = 1 − 2μ/R` and blends linearly between
//!   `S₁` and `S₂` along each ray of the outer shell,
//! * the composite `Ξ = S₂ ∘ G₁` between two arbitrary domains.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{unit_vector, Point, ScalarField, StarDomain};
use crate::sampling::PairSampler;

/// Number of directions used to measure `sup |s₁ − s₂|` and to validate transfer maps.
pub const TRANSFER_DIRECTIONS: usize = 4096;
/// Safety factor applied to the measured expansion gap when choosing `μ`.
pub const MU_SAFETY: f64 = 1.05;
/// Relative slack of every Lipschitz pass/fail decision.
pub const LIPSCHITZ_SLACK: f64 = 1e-9;

/// Angular offsets of nearby boundary pairs in the chord–angle check.
pub const ANGLE_SCALES: [f64; 3] = [1e-1, 1e-2, 1e-3];

const BOUNDARY_TOL: f64 = 1e-12;

/// `sup_θ |s₁(θ) − s₂(θ)|` over `directions` uniformly spaced angles.
pub fn sup_expansion_gap(a: &StarDomain, b: &StarDomain, directions: usize) -> f64 {
    (0..directions)
        .map(|i| {
            let u = unit_vector(TAU * i as f64 / directions as f64);
            (a.boundary_radius(&u) - b.boundary_radius(&u)).abs()
        })
        .fold(0.0, f64::max)
}

/// Bi-Lipschitz map from `source` onto `target` that is the identity away from a boundary band.
#[derive(Clone, Debug)]
pub struct Transfer {
    source: Arc<StarDomain>,
    target: Arc<StarDomain>,
    mu: f64,
    blend_start: f64,
}

impl Transfer {
    pub fn new(source: Arc<StarDomain>, target: Arc<StarDomain>, mu: f64) -> Result<Self> {
        let r_out = source.metrics().r_out;
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidArgument(format!("mu = {mu} must be positive")));
        }
        if 2.0 * mu >= r_out {
            return Err(Error::InvalidArgument(format!("2·mu = {} must be below R = {r_out}", 2.0 * mu)));
        }
        let gap = sup_expansion_gap(&source, &target, TRANSFER_DIRECTIONS);
        if gap >= mu {
            return Err(Error::InvalidArgument(format!(
                "sampled expansion gap {gap} is not below mu = {mu}"
            )));
        }
        let blend_start = 1.0 - 2.0 * mu / r_out;
        let transfer = Self { source, target, mu, blend_start };
        transfer.check_monotone()?;
        Ok(transfer)
    }

    /// Transfer with `μ = 1.05 · sup |s₁ − s₂|` measured over 4096 directions.
    pub fn with_measured_mu(source: Arc<StarDomain>, target: Arc<StarDomain>) -> Result<Self> {
        let gap = sup_expansion_gap(&source, &target, TRANSFER_DIRECTIONS);
        let mu = (MU_SAFETY * gap).max(1e-12 * source.metrics().r_out);
        Self::new(source, target, mu)
    }

    // the radial profile t ↦ t·((1−T)ψ₁ + (t−T)(ψ₂−ψ₁))/(1−T) must increase on [T, 1]
    fn check_monotone(&self) -> Result<()> {
        let t0 = self.blend_start;
        let w = 1.0 - t0;
        for i in 0..TRANSFER_DIRECTIONS {
            let angle = TAU * i as f64 / TRANSFER_DIRECTIONS as f64;
            let u = unit_vector(angle);
            let p1 = self.source.boundary_radius(&u);
            let p2 = self.target.boundary_radius(&u);
            let slope = |t: f64| p1 + (2.0 * t - t0) * (p2 - p1) / w;
            if slope(t0) <= 0.0 || slope(1.0) <= 0.0 {
                return Err(Error::NonMonotoneBlend { angle });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &StarDomain {
        &self.source
    }

    pub fn target(&self) -> &StarDomain {
        &self.target
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Gauge level `T` below which the map is the identity.
    pub fn blend_start(&self) -> f64 {
        self.blend_start
    }

    /// Width of a boundary band outside of which the map is guaranteed to be
    /// the identity: `2μ·h/R`, with `h` the largest distance from the origin
    /// to a supporting line of the source.
    pub fn identity_band(&self) -> f64 {
        2.0 * self.mu * self.source.support_max() / self.source.metrics().r_out
    }

    /// The narrower band `2μρ/R`. It coincides with [`Self::identity_band`]
    /// when all supporting lines are at distance `ρ` (squares, regular
    /// polygons, disks) and is too narrow otherwise.
    pub fn rho_band(&self) -> f64 {
        let m = self.source.metrics();
        2.0 * self.mu * m.rho / m.r_out
    }

    pub fn lipschitz_bound(&self) -> f64 {
        transfer_lipschitz_bound(&self.source.metrics(), self.mu)
    }

    pub fn inverse_lipschitz_bound(&self) -> f64 {
        transfer_inverse_lipschitz_bound(&self.source.metrics(), self.mu)
    }

    fn profile(&self, t: f64, p1: f64, p2: f64) -> f64 {
        let t0 = self.blend_start;
        t * (p1 + (t - t0) * (p2 - p1) / (1.0 - t0))
    }

    pub fn eval(&self, x: &Point) -> Result<Point> {
        let t = self.source.gauge(x);
        if t > 1.0 + BOUNDARY_TOL {
            return Err(Error::OutOfDomain { x: x.x, y: x.y });
        }
        if t <= self.blend_start {
            return Ok(*x);
        }
        let u = x / x.norm();
        let p1 = self.source.boundary_radius(&u);
        let p2 = self.target.boundary_radius(&u);
        Ok(u * self.profile(t, p1, p2))
    }

    /// Inverse by monotone bisection of the radial profile along the ray of `y`.
    pub fn inverse_eval(&self, y: &Point) -> Result<Point> {
        if self.target.gauge(y) > 1.0 + BOUNDARY_TOL {
            return Err(Error::OutOfDomain { x: y.x, y: y.y });
        }
        let len = y.norm();
        if len == 0.0 {
            return Ok(*y);
        }
        let u = y / len;
        let p1 = self.source.boundary_radius(&u);
        let p2 = self.target.boundary_radius(&u);
        if len <= self.blend_start * p1 {
            return Ok(*y);
        }
        let (mut lo, mut hi) = (self.blend_start, 1.0);
        if self.profile(hi, p1, p2) <= len {
            return Ok(u * p1);
        }
        while hi - lo > 1e-12 * hi {
            let mid = 0.5 * (lo + hi);
            if self.profile(mid, p1, p2) < len {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(u * (0.5 * (lo + hi) * p1))
    }
}

/// `R/(2ρ) + (R+μ)²/((ρ−μ)ρ)`.
pub fn transfer_lipschitz_bound(m: &crate::geometry::DomainMetrics, mu: f64) -> f64 {
    let (r, rho) = (m.r_out, m.rho);
    if mu >= rho {
        return f64::INFINITY;
    }
    r / (2.0 * rho) + (r + mu).powi(2) / ((rho - mu) * rho)
}

/// `R²/((ρ−2μ)ρ)`.
pub fn transfer_inverse_lipschitz_bound(m: &crate::geometry::DomainMetrics, mu: f64) -> f64 {
    let (r, rho) = (m.r_out, m.rho);
    if 2.0 * mu >= rho {
        return f64::INFINITY;
    }
    r * r / ((rho - 2.0 * mu) * rho)
}

/// Sup of the Jacobian norm of `S` over the plane.
///
/// In a radial/tangential frame the Jacobian is `[[ψ, ψ'], [0, ψ]]` with
/// `|ψ'| ≤ ψ·√(ψ²−ρ²)/ρ`, which is largest at `ψ = R`. Exceeds `R²/ρ`
/// unless the domain is a ball; the square attains it at its corners.
pub fn expansion_map_jacobian_bound(m: &crate::geometry::DomainMetrics) -> f64 {
    let q = (m.r_out * m.r_out - m.rho * m.rho).max(0.0).sqrt() / m.rho;
    m.r_out * (0.5 * q + (1.0 + 0.25 * q * q).sqrt())
}

/// Sup of the Jacobian norm of `G = S⁻¹`. With `u = √(1 − ρ²/ψ²)` it equals
/// `(u/2 + √(1 − 3u²/4))/ρ` maximized over `ψ ∈ [r, R]`, which peaks at
/// `u = 1/√3` with value `2/(√3·ρ)`.
pub fn gauge_map_jacobian_bound(m: &crate::geometry::DomainMetrics) -> f64 {
    let u_of = |psi: f64| (1.0 - (m.rho / psi).powi(2)).max(0.0).sqrt();
    let u = (1.0 / 3.0_f64.sqrt()).clamp(u_of(m.r_in), u_of(m.r_out));
    (0.5 * u + (1.0 - 0.75 * u * u).sqrt()) / m.rho
}

#[derive(Clone, Debug)]
pub enum RadialMap {
    Identity,
    /// `S`: unit ball onto the domain.
    Expansion(Arc<StarDomain>),
    /// `G = S⁻¹`: domain onto the unit ball.
    Gauge(Arc<StarDomain>),
    Transfer(Arc<Transfer>),
    TransferInverse(Arc<Transfer>),
    /// `S_target ∘ G_source`.
    CompositeXi { source: Arc<StarDomain>, target: Arc<StarDomain> },
}

fn expansion_map(d: &StarDomain, x: &Point) -> Point {
    if *x == Point::zeros() {
        return *x;
    }
    d.boundary_radius(x) * x
}

fn gauge_map(d: &StarDomain, x: &Point) -> Point {
    if *x == Point::zeros() {
        return *x;
    }
    x / d.boundary_radius(x)
}

impl RadialMap {
    pub fn eval(&self, x: &Point) -> Result<Point> {
        Ok(match self {
            Self::Identity => *x,
            Self::Expansion(d) => expansion_map(d, x),
            Self::Gauge(d) => gauge_map(d, x),
            Self::Transfer(t) => t.eval(x)?,
            Self::TransferInverse(t) => t.inverse_eval(x)?,
            Self::CompositeXi { source, target } => expansion_map(target, &gauge_map(source, x)),
        })
    }

    pub fn inverse_eval(&self, y: &Point) -> Result<Point> {
        self.inverse().eval(y)
    }

    pub fn inverse(&self) -> RadialMap {
        match self {
            Self::Identity => Self::Identity,
            Self::Expansion(d) => Self::Gauge(d.clone()),
            Self::Gauge(d) => Self::Expansion(d.clone()),
            Self::Transfer(t) => Self::TransferInverse(t.clone()),
            Self::TransferInverse(t) => Self::Transfer(t.clone()),
            Self::CompositeXi { source, target } => {
                Self::CompositeXi { source: target.clone(), target: source.clone() }
            }
        }
    }

    /// Upper bound on the Lipschitz constant from the matching theorem.
    pub fn lipschitz_bound(&self) -> f64 {
        match self {
            Self::Identity => 1.0,
            Self::Expansion(d) => {
                let m = d.metrics();
                m.r_out * m.r_out / m.rho
            }
            Self::Gauge(d) => 1.0 / d.metrics().r_in,
            Self::Transfer(t) => t.lipschitz_bound(),
            Self::TransferInverse(t) => t.inverse_lipschitz_bound(),
            Self::CompositeXi { source, target } => {
                let (a, b) = (source.metrics(), target.metrics());
                b.r_out * b.r_out / (b.rho * a.rho)
            }
        }
    }

    /// Upper bound on the Lipschitz constant from the operator norm of the
    /// Jacobian. Valid for every centered star domain, unlike
    /// [`Self::lipschitz_bound`] for `S`, `G` and `Ξ`. Transfer maps report
    /// their theorem bound.
    pub fn jacobian_lipschitz_bound(&self) -> f64 {
        match self {
            Self::Identity => 1.0,
            Self::Expansion(d) => expansion_map_jacobian_bound(&d.metrics()),
            Self::Gauge(d) => gauge_map_jacobian_bound(&d.metrics()),
            Self::Transfer(t) => t.lipschitz_bound(),
            Self::TransferInverse(t) => t.inverse_lipschitz_bound(),
            Self::CompositeXi { source, target } => {
                expansion_map_jacobian_bound(&target.metrics()) * gauge_map_jacobian_bound(&source.metrics())
            }
        }
    }
}

/// Empirical Lipschitz estimate, a lower bound on the true constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub empirical: f64,
    #[serde(rename = "bound")]
    pub theoretical_bound: f64,
    #[serde(rename = "pairs")]
    pub sample_pairs: usize,
    #[serde(rename = "witness")]
    pub max_ratio_witness: [[f64; 2]; 2],
    pub pass: bool,
}

/// Sup of `|f(x) − f(y)| / |x − y|` over multi-scale pairs whose points satisfy `accept`.
pub fn sample_lipschitz<V>(
    f: impl Fn(&Point) -> Result<V>,
    dist: impl Fn(&V, &V) -> f64,
    accept: impl Fn(&Point) -> bool,
    radius: f64,
    bound: f64,
    pairs: usize,
    seed: u64,
    stream: u64,
) -> Result<LipschitzReport> {
    if pairs < 2 {
        return Err(Error::InvalidArgument("need at least 2 sample pairs".into()));
    }
    let mut sampler = PairSampler::new(seed, stream, radius);
    let mut empirical = 0.0_f64;
    let mut witness = [[0.0; 2]; 2];
    for i in 0..pairs {
        let (x, y) = sampler.pair(i, &accept);
        let ratio = dist(&f(&x)?, &f(&y)?) / (x - y).norm();
        if ratio > empirical {
            empirical = ratio;
            witness = [[x.x, x.y], [y.x, y.y]];
        }
    }
    Ok(LipschitzReport {
        empirical,
        theoretical_bound: bound,
        sample_pairs: pairs,
        max_ratio_witness: witness,
        pass: empirical <= bound * (1.0 + LIPSCHITZ_SLACK),
    })
}

/// Lipschitz estimate of `map` over pairs drawn inside `region`.
pub fn empirical_lipschitz(
    map: &RadialMap,
    region: &StarDomain,
    pairs: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    empirical_lipschitz_with_bound(map, region, map.lipschitz_bound(), pairs, seed)
}

pub fn empirical_lipschitz_with_bound(
    map: &RadialMap,
    region: &StarDomain,
    bound: f64,
    pairs: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    sample_lipschitz(
        |x| map.eval(x),
        |a: &Point, b: &Point| (a - b).norm(),
        |p| region.contains(p),
        region.metrics().r_out,
        bound,
        pairs,
        seed,
        1,
    )
}

/// Theoretical Lipschitz bound of a scalar field: `1/ρ`, `R²/ρ` or `1`.
pub fn scalar_bound(field: ScalarField, domain: &StarDomain) -> f64 {
    let m = domain.metrics();
    match field {
        ScalarField::Gauge => 1.0 / m.rho,
        ScalarField::Expansion => m.r_out * m.r_out / m.rho,
        ScalarField::OrientedDistance => 1.0,
    }
}

/// Lipschitz estimate of a scalar field over pairs drawn in the bounding ball.
pub fn scalar_lipschitz(
    field: ScalarField,
    domain: &StarDomain,
    pairs: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    let stream = match field {
        ScalarField::Gauge => 2,
        ScalarField::Expansion => 3,
        ScalarField::OrientedDistance => 4,
    };
    sample_lipschitz(
        |x| Ok(domain.eval(field, x)),
        |a: &f64, b: &f64| (a - b).abs(),
        |_| true,
        domain.metrics().r_out,
        scalar_bound(field, domain),
        pairs,
        seed,
        stream,
    )
}

/// Outcome of the chord–angle and magnitude bounds on sampled boundary pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordAngleReport {
    pub pairs: usize,
    /// `min |x−y| / (r·(2/π)·α)`; at least 1 when the lower chord bound holds.
    pub min_lower_ratio: f64,
    /// `max |x−y| / ((R²/ρ)·α)`; at most 1 when the upper chord bound holds.
    pub max_upper_ratio: f64,
    /// `max ||x|−|y|| / ((R/ρ)·√(R²−ρ²)·α)`; 0 when that bound vanishes and is met.
    pub max_magnitude_ratio: f64,
    pub violations: usize,
    pub pass: bool,
}

pub fn chord_angle_bounds_check(domain: &StarDomain, pairs: usize, seed: u64) -> Result<ChordAngleReport> {
    if pairs < 1 {
        return Err(Error::InvalidArgument("need at least one sample pair".into()));
    }
    let m = domain.metrics();
    let (r_in, r_out, rho) = (m.r_in, m.r_out, m.rho);
    let upper = r_out * r_out / rho;
    let lower = r_in * 2.0 / PI;
    let magnitude = r_out / rho * (r_out * r_out - rho * rho).max(0.0).sqrt();

    let mut sampler = PairSampler::new(seed, 5, 1.0);
    let mut report = ChordAngleReport {
        pairs,
        min_lower_ratio: f64::INFINITY,
        max_upper_ratio: 0.0,
        max_magnitude_ratio: 0.0,
        violations: 0,
        pass: true,
    };
    let mut done = 0;
    let mut i = 0usize;
    while done < pairs {
        i += 1;
        let a = TAU * sampler.uniform();
        let b = if i % 4 == 0 {
            TAU * sampler.uniform()
        } else {
            a + ANGLE_SCALES[i % 4 - 1] * sampler.gaussian().x
        };
        let x = domain.boundary_point(a);
        let y = domain.boundary_point(b.rem_euclid(TAU));
        let turn = (b - a).rem_euclid(TAU);
        let alpha = turn.min(TAU - turn);
        if alpha <= 0.0 {
            continue;
        }
        done += 1;
        let chord = (x - y).norm();
        let dmag = (x.norm() - y.norm()).abs();
        report.min_lower_ratio = report.min_lower_ratio.min(chord / (lower * alpha));
        report.max_upper_ratio = report.max_upper_ratio.max(chord / (upper * alpha));
        let mag_ratio = if magnitude > 0.0 {
            dmag / (magnitude * alpha)
        } else if dmag <= 1e-12 * r_out {
            0.0
        } else {
            f64::INFINITY
        };
        report.max_magnitude_ratio = report.max_magnitude_ratio.max(mag_ratio);
        let bad = chord < lower * alpha * (1.0 - LIPSCHITZ_SLACK)
            || chord > upper * alpha * (1.0 + LIPSCHITZ_SLACK)
            || mag_ratio > 1.0 + LIPSCHITZ_SLACK;
        if bad {
            report.violations += 1;
        }
    }
    report.pass = report.violations == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{centered_square, ellipse_polygon};
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn disk(r: f64) -> Arc<StarDomain> {
        Arc::new(StarDomain::ball(r).unwrap())
    }

    fn square() -> Arc<StarDomain> {
        Arc::new(centered_square(1.0).unwrap())
    }

    #[test]
    fn expansion_of_disk_scales() {
        let s = RadialMap::Expansion(disk(2.0));
        assert_eq!(s.eval(&Point::new(0.3, 0.4)).unwrap(), Point::new(0.6, 0.8));
        assert_eq!(RadialMap::Gauge(square()).eval(&Point::zeros()).unwrap(), Point::zeros());
    }

    #[test]
    fn expansion_of_square_hits_the_corner() {
        let s = RadialMap::Expansion(square());
        let u = Point::new(1.0, 1.0) / SQRT_2;
        let corner = s.eval(&u).unwrap();
        assert!((corner - Point::new(1.0, 1.0)).norm() < 1e-15);
        let back = s.inverse_eval(&Point::new(1.0, 1.0)).unwrap();
        assert!((back - u).norm() < 1e-15);
    }

    #[test]
    fn expansion_and_gauge_are_mutual_inverses() {
        let d = Arc::new(ellipse_polygon(2.0, 1.0, 40).unwrap());
        let s = RadialMap::Expansion(d.clone());
        let mut sampler = PairSampler::new(3, 0, 1.0);
        for _ in 0..1000 {
            let x = sampler.uniform_in_disk();
            let y = s.eval(&x).unwrap();
            assert!((s.inverse_eval(&y).unwrap() - x).norm() <= 1e-9 * x.norm().max(1e-300));
        }
    }

    #[test]
    fn transfer_between_identical_domains_is_identity() {
        let d = square();
        let t = Transfer::new(d.clone(), d.clone(), 0.1).unwrap();
        let mut sampler = PairSampler::new(11, 0, 1.0);
        for _ in 0..1000 {
            let mut x = sampler.uniform_in_disk();
            x.x = x.x.clamp(-1.0, 1.0);
            x.y = x.y.clamp(-1.0, 1.0);
            let y = t.eval(&x).unwrap();
            assert!((y - x).norm() <= 1e-9 * x.norm().max(1.0));
        }
    }

    #[test]
    fn transfer_rejects_outside_points_and_large_mu() {
        let d = square();
        let t = Transfer::new(d.clone(), d.clone(), 0.1).unwrap();
        assert!(matches!(t.eval(&Point::new(1.5, 0.0)), Err(Error::OutOfDomain { .. })));
        assert!(Transfer::new(d.clone(), d.clone(), 0.8).is_err());
        assert!(Transfer::new(d.clone(), disk(1.0), 0.1).is_err());
    }

    #[test]
    fn transfer_inverse_matches_closed_form_root() {
        // the profile is quadratic in t; its root is an independent oracle
        let a = square();
        let b = Arc::new(centered_square(1.05).unwrap());
        let t = Transfer::with_measured_mu(a.clone(), b.clone()).unwrap();
        let t0 = t.blend_start();
        for k in 0..50 {
            let angle = 0.1 + k as f64 * 0.12;
            let u = unit_vector(angle);
            let (p1, p2) = (a.boundary_radius(&u), b.boundary_radius(&u));
            let len = p2 * (0.9 + 0.002 * k as f64);
            let y = u * len;
            let x = t.inverse_eval(&y).unwrap();
            let (qa, qb, qc) = ((p2 - p1) / (1.0 - t0), p1 - t0 * (p2 - p1) / (1.0 - t0), -len);
            let root = if len <= t0 * p1 {
                len / p1
            } else {
                (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa)
            };
            assert!((x.norm() - root * p1).abs() <= 1e-10, "k={k}");
            assert!((t.eval(&x).unwrap() - y).norm() <= 1e-8 * len);
        }
    }

    #[test]
    fn transfer_fixes_interior_and_maps_boundary_to_boundary() {
        let a = square();
        let b = Arc::new(ellipse_polygon(1.08, 1.08, 64).unwrap());
        let t = Transfer::with_measured_mu(a.clone(), b.clone()).unwrap();
        for i in 0..360 {
            let angle = TAU * i as f64 / 360.0;
            let boundary = a.boundary_point(angle);
            let image = t.eval(&boundary).unwrap();
            assert!((b.gauge(&image) - 1.0).abs() <= 1e-8);
            assert!((image.x * boundary.y - image.y * boundary.x).abs() <= 1e-12 * image.norm() * boundary.norm());
        }
        let mut sampler = PairSampler::new(5, 0, SQRT_2);
        for _ in 0..2000 {
            let x = sampler.uniform_in_disk();
            if a.oriented_distance(&x) < -t.identity_band() {
                assert_eq!(t.eval(&x).unwrap(), x);
            }
        }
    }

    #[test]
    fn rho_band_is_too_narrow_on_a_rectangle() {
        // supporting lines at distances 1 and 2: the identity region is S(B_T),
        // which reaches closer to the short sides than 2μρ/R allows for
        let rect = Arc::new(
            StarDomain::polygon(vec![
                Point::new(-2.0, -1.0),
                Point::new(2.0, -1.0),
                Point::new(2.0, 1.0),
                Point::new(-2.0, 1.0),
            ])
            .unwrap(),
        );
        let t = Transfer::new(rect.clone(), rect.clone(), 0.1).unwrap();
        assert!(t.rho_band() < t.identity_band());
        let probe = Point::new(2.0 - 0.5 * (t.rho_band() + t.identity_band()), 0.0);
        assert!(rect.oriented_distance(&probe) < -t.rho_band());
        assert!(t.source().gauge(&probe) > t.blend_start());
        let mut sampler = PairSampler::new(9, 0, 2.3);
        for _ in 0..2000 {
            let x = sampler.uniform_in_disk();
            if rect.oriented_distance(&x) < -t.identity_band() {
                assert!(rect.gauge(&x) <= t.blend_start());
            }
        }
    }

    #[test]
    fn scalar_lipschitz_examples() {
        let unit = StarDomain::ball(1.0).unwrap();
        let g = scalar_lipschitz(ScalarField::Gauge, &unit, 2000, 0).unwrap();
        assert!(g.pass && (g.empirical - 1.0).abs() < 1e-6 && g.theoretical_bound == 1.0);
        let s = scalar_lipschitz(ScalarField::Expansion, &unit, 2000, 0).unwrap();
        assert!(s.pass && (s.empirical - 1.0).abs() < 1e-6 && s.theoretical_bound == 1.0);
        let sq = centered_square(1.0).unwrap();
        // the sup ratio 1 is attained along axis directions
        let g = scalar_lipschitz(ScalarField::Gauge, &sq, 20000, 0).unwrap();
        assert!(g.pass && g.empirical > 0.99 && g.theoretical_bound == 1.0);
    }

    #[test]
    fn map_lipschitz_examples() {
        let r = empirical_lipschitz(&RadialMap::Expansion(disk(2.0)), &StarDomain::ball(1.0).unwrap(), 1000, 0)
            .unwrap();
        assert!((r.empirical - 2.0).abs() < 1e-9 && r.theoretical_bound == 2.0 && r.pass);
    }

    #[test]
    fn expansion_map_of_square_exceeds_r_squared_over_rho() {
        // at the corner direction the Jacobian is √2·[[1, 1], [0, 1]], whose
        // norm is √2 times the golden ratio
        let golden = 0.5 * (1.0 + 5.0_f64.sqrt());
        let s = RadialMap::Expansion(square());
        let r = empirical_lipschitz(&s, &StarDomain::ball(1.0).unwrap(), 20000, 0).unwrap();
        assert!((r.theoretical_bound - 2.0).abs() < 1e-15);
        assert!(!r.pass);
        assert!(r.empirical > 2.25 && r.empirical <= SQRT_2 * golden, "{}", r.empirical);
        assert!((s.jacobian_lipschitz_bound() - SQRT_2 * golden).abs() < 1e-12);
        assert!(r.empirical <= s.jacobian_lipschitz_bound() * (1.0 + LIPSCHITZ_SLACK));
    }

    #[test]
    fn gauge_map_of_square_peaks_off_the_corner() {
        // |DG| = sin θ/2 + √(1 − 3 sin²θ/4) on the sector |θ| < π/4, largest at sin θ = 1/√3
        let g = RadialMap::Gauge(square());
        let mut sup = 0.0_f64;
        for i in 1..2000 {
            let t = FRAC_PI_4 * i as f64 / 2000.0;
            sup = sup.max(0.5 * t.sin() + (1.0 - 0.75 * t.sin().powi(2)).sqrt());
        }
        assert!((g.jacobian_lipschitz_bound() - 2.0 / 3.0_f64.sqrt()).abs() < 1e-12);
        assert!((sup - 2.0 / 3.0_f64.sqrt()).abs() < 1e-6);
        let r = empirical_lipschitz(&g, &centered_square(1.0).unwrap(), 20000, 0).unwrap();
        assert!(r.empirical > 1.15 && r.empirical <= g.jacobian_lipschitz_bound() * (1.0 + LIPSCHITZ_SLACK));
        assert!(r.empirical > g.lipschitz_bound());
    }

    #[test]
    fn jacobian_bounds_agree_with_theorem_bounds_on_disks() {
        let d = disk(1.7);
        let s = RadialMap::Expansion(d.clone());
        assert!((s.jacobian_lipschitz_bound() - s.lipschitz_bound()).abs() < 1e-15);
        let g = RadialMap::Gauge(d.clone());
        assert!((g.jacobian_lipschitz_bound() - g.lipschitz_bound()).abs() < 1e-15);
    }

    #[test]
    fn lipschitz_report_is_deterministic_and_serializes() {
        let d = centered_square(1.0).unwrap();
        let a = scalar_lipschitz(ScalarField::OrientedDistance, &d, 500, 42).unwrap();
        let b = scalar_lipschitz(ScalarField::OrientedDistance, &d, 500, 42).unwrap();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::to_value(&a).unwrap();
        for key in ["empirical", "bound", "pairs", "witness", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(scalar_lipschitz(ScalarField::Gauge, &d, 1, 0).is_err());
    }

    #[test]
    fn chord_angle_examples() {
        let r = chord_angle_bounds_check(&StarDomain::ball(1.0).unwrap(), 2000, 0).unwrap();
        assert!(r.pass);
        // |x−y| = 2 sin(α/2) ∈ [(2/π)α, α]
        assert!(r.min_lower_ratio >= 1.0 - 1e-9 && r.max_upper_ratio <= 1.0 + 1e-9);
        assert_eq!(r.max_magnitude_ratio, 0.0);
        assert!(chord_angle_bounds_check(&centered_square(1.0).unwrap(), 10_000, 0).unwrap().pass);
        assert!(chord_angle_bounds_check(&ellipse_polygon(2.0, 1.0, 256).unwrap(), 10_000, 0).unwrap().pass);
    }
}
