//! Poincaré–Friedrichs constants of planar star-shaped domains: geometry of
//! centered star domains, bi-Lipschitz radial maps, smooth interior
//! approximation, and Whitney finite element spectra of the de Rham complex.

pub mod approximation;
pub mod derham;
pub mod error;
pub mod geometry;
pub mod krylov;
pub mod mesh;
pub mod sampling;
pub mod sparse;
pub mod special;
pub mod spectra;
pub mod transforms;

pub use error::{Error, Result};
pub use geometry::{DomainMetrics, DomainSpec, Point, ScalarField, StarDomain};
pub use approximation::{build_smooth_approximation, MollifierSpec, SmoothApproximation};
pub use derham::{assemble_complex, DeRhamComplex2D};
pub use mesh::{disk_reference_mesh, map_mesh, TriangleMesh};
pub use sparse::SparseMatrix;
pub use spectra::{convergence_study, spectrum_report, ConvergenceStudy, EigenResult, SpectrumReport};
pub use transforms::{LipschitzReport, RadialMap, Transfer};
