//! Strictly convex smooth inner approximations of convex domains.
//!
//! The oriented distance is mollified with the polynomial bump
//! `η(z) = (5/π)·(1 − |z|²)⁴` scaled to radius `ε`, and regularized to
//! `d′_ε(x) = d_ε(x) + ε²|x|²`. The zero sublevel set of `d′_ε` is extracted
//! ray by ray as a radial spline.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use log::warn;

use crate::error::{Error, Result};
use crate::geometry::{unit_vector, Point, StarDomain};
use crate::transforms::{empirical_lipschitz_with_bound, LipschitzReport, RadialMap, Transfer};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            dp = n as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Clone, Debug)]
pub struct MollifierSpec {
    epsilon: f64,
    quad_order: usize,
    raw_mass: f64,
    /// Offsets with positive weight summing to one.
    stencil: Vec<(Point, f64)>,
}

impl MollifierSpec {
    pub const DEFAULT_QUAD_ORDER: usize = 8;

    pub fn new(epsilon: f64) -> Result<Self> {
        Self::with_quad_order(epsilon, Self::DEFAULT_QUAD_ORDER)
    }

    pub fn with_quad_order(epsilon: f64, quad_order: usize) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::InvalidArgument(format!("mollifier radius {epsilon} must be positive")));
        }
        if quad_order < 2 {
            return Err(Error::InvalidArgument("quadrature order must be at least 2".into()));
        }
        // Gauss–Legendre in the radius times the periodic trapezoid rule in the angle
        let (nodes, weights) = gauss_legendre(quad_order);
        let n_angles = 4 * quad_order;
        let mut stencil = Vec::with_capacity(quad_order * n_angles);
        let mut raw_mass = 0.0;
        for (x, wx) in nodes.iter().zip(&weights) {
            let r = 0.5 * (x + 1.0);
            // bump of unit mass on the unit disk, times r dr dθ
            let w = 0.5 * wx * r * (TAU / n_angles as f64) * 5.0 / PI * (1.0 - r * r).powi(4);
            for j in 0..n_angles {
                let a = TAU * (j as f64 + 0.5) / n_angles as f64;
                raw_mass += w;
                stencil.push((Point::new(r * a.cos() * epsilon, r * a.sin() * epsilon), w));
            }
        }
        for entry in &mut stencil {
            entry.1 /= raw_mass;
        }
        Ok(Self { epsilon, quad_order, raw_mass, stencil })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn quad_order(&self) -> usize {
        self.quad_order
    }

    /// Quadrature mass of the bump before normalization.
    pub fn raw_mass(&self) -> f64 {
        self.raw_mass
    }

    pub fn stencil(&self) -> &[(Point, f64)] {
        &self.stencil
    }

    pub fn smooth(&self, f: impl Fn(&Point) -> f64, x: &Point) -> f64 {
        self.stencil.iter().map(|(z, w)| w * f(&(x + z))).sum()
    }
}

/// `d_ε(x) = ∫ η_ε(z)·d(x + z) dz` by tensor quadrature.
pub fn mollified_distance(domain: &StarDomain, moll: &MollifierSpec, x: &Point) -> f64 {
    moll.smooth(|p| domain.oriented_distance(p), x)
}

#[derive(Clone, Debug)]
pub struct SmoothApproximation {
    epsilon: f64,
    base: Arc<StarDomain>,
    boundary: Arc<StarDomain>,
    mollifier: MollifierSpec,
    angles: Vec<f64>,
    base_radii: Vec<f64>,
    sup_error: f64,
}

impl SmoothApproximation {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn base(&self) -> &Arc<StarDomain> {
        &self.base
    }

    /// The extracted domain `{d′_ε < 0}` as a radial spline.
    pub fn boundary(&self) -> &Arc<StarDomain> {
        &self.boundary
    }

    pub fn mollifier(&self) -> &MollifierSpec {
        &self.mollifier
    }

    /// `max |s_base − s_ε|` over the extraction rays.
    pub fn sup_error(&self) -> f64 {
        self.sup_error
    }

    /// `d′_ε(x)`.
    pub fn regularized_eval(&self, x: &Point) -> f64 {
        mollified_distance(&self.base, &self.mollifier, x) + self.epsilon * self.epsilon * x.norm_squared()
    }

    /// Rows of `(angle, s_base, s_ε, s_base − s_ε)` per extraction ray.
    pub fn direction_table(&self) -> Vec<[f64; 4]> {
        let radii = self.boundary_radii();
        self.angles
            .iter()
            .zip(&self.base_radii)
            .zip(radii)
            .map(|((&a, &b), e)| [a, b, e, b - e])
            .collect()
    }

    fn boundary_radii(&self) -> Vec<f64> {
        self.angles.iter().map(|&a| self.boundary.boundary_radius(&unit_vector(a))).collect()
    }
}

/// Root of `f` in `[lo, hi]` with `f(lo) < 0 < f(hi)`: bisection to a coarse
/// bracket, then Illinois false-position steps until a step is below `tol`.
fn bracketed_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (mut flo, mut fhi) = (f(lo), f(hi));
    let mut x = 0.5 * (lo + hi);
    let mut side = 0i8;
    for _ in 0..60 {
        let next = (lo * fhi - hi * flo) / (fhi - flo);
        let next = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        let step = (next - x).abs();
        x = next;
        let fx = f(x);
        if fx == 0.0 || step <= tol {
            break;
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    x
}

/// Extracts `Ω_ε = {d′_ε < 0}` over `n_rays` uniformly spaced rays.
pub fn build_smooth_approximation(
    domain: Arc<StarDomain>,
    epsilon: f64,
    n_rays: usize,
) -> Result<SmoothApproximation> {
    if !domain.is_convex() {
        return Err(Error::InvalidDomain("smooth approximation requires a convex domain".into()));
    }
    let m = domain.metrics();
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Inadmissible { epsilon, reason: "must be positive".into() });
    }
    if epsilon >= m.rho / 4.0 {
        return Err(Error::Inadmissible { epsilon, reason: format!("must be below rho/4 = {}", m.rho / 4.0) });
    }
    if 4.0 * epsilon * m.r_out * m.r_out >= 1.0 {
        warn!("4·epsilon·R² = {} is not below 1; the sublevel set may drift beyond the 2·epsilon band", 4.0 * epsilon * m.r_out * m.r_out);
    }
    if n_rays < 8 {
        return Err(Error::InvalidArgument("need at least 8 rays".into()));
    }
    let mollifier = MollifierSpec::new(epsilon)?;
    let eps2 = epsilon * epsilon;
    let (lo, hi) = (0.5 * m.rho, m.r_out + epsilon);

    let angles: Vec<f64> = (0..n_rays).map(|j| TAU * j as f64 / n_rays as f64).collect();
    let mut radii = Vec::with_capacity(n_rays);
    for &angle in &angles {
        let u = unit_vector(angle);
        let f = |t: f64| {
            let x = t * u;
            mollified_distance(&domain, &mollifier, &x) + eps2 * t * t
        };
        if !(f(lo) < 0.0 && f(hi) > 0.0) {
            return Err(Error::RootNotBracketed { angle });
        }
        radii.push(bracketed_root(f, lo, hi, 1e-10));
    }
    let base_radii: Vec<f64> = angles.iter().map(|&a| domain.boundary_radius(&unit_vector(a))).collect();
    let sup_error = base_radii.iter().zip(&radii).map(|(b, e)| (b - e).abs()).fold(0.0, f64::max);
    let boundary = Arc::new(StarDomain::radial(angles.clone(), radii)?);
    Ok(SmoothApproximation { epsilon, base: domain, boundary, mollifier, angles, base_radii, sup_error })
}

/// Sampled convexity of `d′_ε` along random segments.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityReport {
    pub segments: usize,
    /// Midpoint above the chord average.
    pub convexity_violations: usize,
    /// Midpoint above `average − ε²|x−y|²/4`.
    pub strictness_violations: usize,
    /// `min (average − ε²|x−y|²/4 − midpoint)`.
    pub worst_margin: f64,
}

impl ConvexityReport {
    pub fn pass(&self) -> bool {
        self.convexity_violations == 0 && self.strictness_violations == 0
    }
}

pub fn convexity_check(approx: &SmoothApproximation, segments: usize, seed: u64) -> ConvexityReport {
    const TOL: f64 = 1e-9;
    let radius = approx.base.metrics().r_out + approx.epsilon;
    let mut sampler = crate::sampling::PairSampler::new(seed, 6, radius);
    let eps2 = approx.epsilon * approx.epsilon;
    let mut report = ConvexityReport {
        segments,
        convexity_violations: 0,
        strictness_violations: 0,
        worst_margin: f64::INFINITY,
    };
    for _ in 0..segments {
        let x = sampler.uniform_in_disk();
        let y = sampler.uniform_in_disk();
        let mid = approx.regularized_eval(&(0.5 * (x + y)));
        let avg = 0.5 * (approx.regularized_eval(&x) + approx.regularized_eval(&y));
        let margin = avg - 0.25 * eps2 * (x - y).norm_squared() - mid;
        report.worst_margin = report.worst_margin.min(margin);
        if mid > avg + TOL {
            report.convexity_violations += 1;
        }
        if margin < -TOL {
            report.strictness_violations += 1;
        }
    }
    report
}

/// `R/(2ρ) + (R+ε)²/((ρ−ε)ρ)`.
pub fn phi_lipschitz_bound(domain: &StarDomain, epsilon: f64) -> f64 {
    let m = domain.metrics();
    if epsilon >= m.rho {
        return f64::INFINITY;
    }
    m.r_out / (2.0 * m.rho) + (m.r_out + epsilon).powi(2) / ((m.rho - epsilon) * m.rho)
}

/// `R²/((ρ−2ε)ρ)`.
pub fn phi_inverse_lipschitz_bound(domain: &StarDomain, epsilon: f64) -> f64 {
    let m = domain.metrics();
    if 2.0 * epsilon >= m.rho {
        return f64::INFINITY;
    }
    m.r_out * m.r_out / ((m.rho - 2.0 * epsilon) * m.rho)
}

#[derive(Clone, Debug)]
pub struct PhiOptions {
    pub n_rays: usize,
    pub pairs: usize,
    pub seed: u64,
}

impl Default for PhiOptions {
    fn default() -> Self {
        Self { n_rays: 4096, pairs: 10_000, seed: 0 }
    }
}

/// One member `Φ_ε : Ω → Ω_ε` of the approximating family.
#[derive(Clone, Debug)]
pub struct PhiMember {
    pub approximation: SmoothApproximation,
    pub transfer: Arc<Transfer>,
    pub forward: LipschitzReport,
    pub inverse: LipschitzReport,
}

impl PhiMember {
    pub fn map(&self) -> RadialMap {
        RadialMap::Transfer(self.transfer.clone())
    }
}

pub fn build_phi_family(domain: Arc<StarDomain>, eps_list: &[f64]) -> Result<Vec<PhiMember>> {
    build_phi_family_with(domain, eps_list, &PhiOptions::default())
}

pub fn build_phi_family_with(
    domain: Arc<StarDomain>,
    eps_list: &[f64],
    options: &PhiOptions,
) -> Result<Vec<PhiMember>> {
    eps_list
        .iter()
        .map(|&epsilon| {
            let approximation = build_smooth_approximation(domain.clone(), epsilon, options.n_rays)?;
            let transfer = Arc::new(Transfer::with_measured_mu(domain.clone(), approximation.boundary.clone())?);
            let map = RadialMap::Transfer(transfer.clone());
            let forward = empirical_lipschitz_with_bound(
                &map,
                &domain,
                phi_lipschitz_bound(&domain, epsilon),
                options.pairs,
                options.seed,
            )?;
            let inverse = empirical_lipschitz_with_bound(
                &map.inverse(),
                approximation.boundary(),
                phi_inverse_lipschitz_bound(&domain, epsilon),
                options.pairs,
                options.seed,
            )?;
            Ok(PhiMember { approximation, transfer, forward, inverse })
        })
        .collect()
}
