//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use starpf_core::geometry::{centered_square, ellipse_polygon, StarDomain};

pub fn square() -> Arc<StarDomain> {
    Arc::new(centered_square(1.0).expect("valid square"))
}

pub fn ellipse() -> Arc<StarDomain> {
    Arc::new(ellipse_polygon(2.0, 1.0, 256).expect("valid polygon"))
}
