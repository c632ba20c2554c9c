//! Bessel functions of the first kind and the zeros that give the
//! Poincaré–Friedrichs constants of the unit disk.

/// `J_n(x)` from its power series. Accurate to near machine precision for `|x| ≤ 20`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= q / (k as f64 * (k + order) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 2 {
            break;
        }
        if k > 500 {
            break;
        }
    }
    sum
}

/// `J_1'(x) = J_0(x) - J_1(x)/x`.
pub fn bessel_j1_prime(x: f64) -> f64 {
    bessel_j(0, x) - bessel_j(1, x) / x
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) < 0.0, "root not bracketed");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// First positive zero of `J_0` (≈ 2.4048256).
pub fn j0_first_zero() -> f64 {
    bisect(|x| bessel_j(0, x), 2.0, 3.0)
}

/// First positive zero of `J_1'` (≈ 1.8411838).
pub fn j1_prime_first_zero() -> f64 {
    bisect(bessel_j1_prime, 1.5, 2.2)
}

/// Poincaré–Friedrichs constant of the gradient on the unit disk, `1 / j'_{1,1}`.
pub fn disk_pf_gradient() -> f64 {
    1.0 / j1_prime_first_zero()
}

/// Poincaré–Friedrichs constant of the rotation on the unit disk, `1 / j_{0,1}`.
pub fn disk_pf_rotation() -> f64 {
    1.0 / j0_first_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((j0_first_zero() - 2.404_825_557_695_773).abs() < 1e-13);
        assert!((j1_prime_first_zero() - 1.841_183_781_340_659).abs() < 1e-13);
    }
}
