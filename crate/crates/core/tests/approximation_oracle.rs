use std::sync::Arc;

use starpf_core::approximation::{build_smooth_approximation, mollified_distance, MollifierSpec};
use starpf_core::geometry::{centered_square, Point, StarDomain};

// midpoint rule on a fine grid against the unnormalized bump (1 − r²)⁴
fn grid_mollified(domain: &StarDomain, eps: f64, x: &Point, n: usize) -> f64 {
    let h = 2.0 / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let z = Point::new(-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h);
            let r2 = z.norm_squared();
            if r2 < 1.0 {
                let w = (1.0 - r2).powi(4);
                num += w * domain.oriented_distance(&(x + eps * z));
                den += w;
            }
        }
    }
    num / den
}

#[test]
fn mollified_distance_matches_fine_grid_convolution() {
    let square = centered_square(1.0).unwrap();
    let eps = 0.1;
    let m = MollifierSpec::new(eps).unwrap();
    for x in [Point::new(0.95, 0.95), Point::new(1.0, 0.2), Point::new(0.0, 0.0), Point::new(-1.05, 0.97)] {
        let oracle = grid_mollified(&square, eps, &x, 800);
        let q = mollified_distance(&square, &m, &x);
        // the kink of the distance along the corner diagonal limits both rules
        assert!((q - oracle).abs() < 1e-3 * eps, "{x:?}: {q} vs {oracle}");
    }
}

#[test]
fn mollifying_a_disk_is_exact_far_from_the_center() {
    // the distance to a circle is affine in the radial direction only up to curvature terms of order ε²
    let disk = StarDomain::ball(1.0).unwrap();
    let m = MollifierSpec::new(0.05).unwrap();
    let x = Point::new(0.6, 0.0);
    assert!((mollified_distance(&disk, &m, &x) - disk.oriented_distance(&x)).abs() < 0.05 * 0.05);
}

#[test]
fn approximations_tighten_with_epsilon() {
    let square = Arc::new(centered_square(1.0).unwrap());
    let errors: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&e| build_smooth_approximation(square.clone(), e, 512).unwrap().sup_error())
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    for (e, s) in [0.2, 0.1, 0.05].iter().zip(&errors) {
        assert!(*s <= 2.0 * e);
    }
}
