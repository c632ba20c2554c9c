//! Eigenvalue problems of the discrete complex.
//!
//! The edge pencil `(D1ᵀWD1, M1)` with `W = diag(1/area)` has `V − 1` zero
//! eigenvalues; its nonzero spectrum equals the spectrum of the face matrix
//! `K = W^½·D1·M1⁻¹·D1ᵀ·W^½`.
//!
//! [`pencil_spectrum`] finds the low end of both pencils by shift-invert
//! block Krylov iteration: `(A0 + M0)⁻¹M0` off the constants for the vertex
//! pencil, and `K⁻¹` through the saddle point system `[M1 D1ᵀ; D1 0]` for the
//! edge pencil. [`dense_pencil_spectrum`] computes whole spectra (the vertex
//! pencil by Cholesky reduction, the edge pencil through `K`) and
//! [`full_pencil_spectrum`] solves either pencil as it stands.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use faer::linalg::solvers::Solve;
use faer::linalg::triangular_solve::solve_lower_triangular_in_place;
use faer::{Mat, Par, Side};
use log::info;
use serde::{Deserialize, Serialize};

use crate::approximation::build_smooth_approximation;
use crate::derham::{assemble_complex, DeRhamComplex2D};
use crate::error::{Error, Result};
use crate::krylov::{largest_eigenvalues, KrylovProblem, Weighted};
use crate::geometry::{DomainMetrics, StarDomain};
use crate::mesh::{disk_reference_mesh, map_mesh, mesh_quality, TriangleMesh};
use crate::sparse::SparseMatrix;
use crate::special::{disk_pf_gradient, disk_pf_rotation};
use crate::transforms::RadialMap;

/// Eigenvalues below this fraction of the largest one form the kernel.
pub const DROP_TOL: f64 = 1e-8;
/// Required ratio between the smallest kept and the largest dropped eigenvalue.
pub const MIN_SPECTRAL_GAP: f64 = 1e3;
/// Hodge eigenvalues tracked per degree.
pub const HODGE_COUNT: usize = 5;
/// Rays used to extract each smooth approximation in a convergence study.
pub const STUDY_RAYS: usize = 4096;
/// Relative growth of a delta tolerated by the convergence verdict.
pub const CONVERGENCE_SLACK: f64 = 0.2;

const FACE_BLOCK: usize = 512;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Smallest eigenvalues in ascending order, kernel included.
    pub eigenvalues: Vec<f64>,
    /// Smallest eigenvalues above the kernel.
    pub nonzero: Vec<f64>,
    pub zero_count: usize,
    pub drop_tol: f64,
    pub dimension: usize,
    /// Smallest kept over largest dropped magnitude; infinite without a numerical kernel.
    pub spectral_gap: f64,
}

impl EigenResult {
    fn from_spectrum(mut all: Vec<f64>, how_many: usize, drop_tol: f64) -> Self {
        all.sort_by(f64::total_cmp);
        let max = all.last().copied().unwrap_or(0.0).max(0.0);
        let threshold = drop_tol * max;
        let zero_count = all.partition_point(|&v| v < threshold);
        let dropped = all[..zero_count].iter().map(|v| v.abs()).fold(0.0, f64::max);
        let spectral_gap = match all.get(zero_count) {
            Some(&kept) if zero_count > 0 => {
                if dropped == 0.0 {
                    f64::INFINITY
                } else {
                    kept / dropped
                }
            }
            _ => f64::INFINITY,
        };
        Self {
            eigenvalues: all.iter().take(how_many).copied().collect(),
            nonzero: all[zero_count..].iter().take(how_many).copied().collect(),
            zero_count,
            drop_tol,
            dimension: all.len(),
            spectral_gap,
        }
    }

    pub fn check_separation(&self) -> Result<()> {
        if self.spectral_gap < MIN_SPECTRAL_GAP {
            let kept = self.nonzero.first().copied().unwrap_or(f64::NAN);
            return Err(Error::KernelSeparationFailure { dropped: kept / self.spectral_gap, kept });
        }
        Ok(())
    }

    /// Smallest eigenvalue above the kernel, after checking the spectral gap.
    pub fn first_nonzero(&self) -> Result<f64> {
        self.check_separation()?;
        self.nonzero.first().copied().ok_or(Error::KernelSeparationFailure { dropped: 0.0, kept: 0.0 })
    }
}

pub fn symmetric_eigenvalues(a: &Mat<f64>) -> Result<Vec<f64>> {
    let mut v = a.self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigenSolver)?;
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// All eigenvalues of `A u = μ M u` by Cholesky reduction `L⁻¹ A L⁻ᵀ`.
pub fn dense_generalized_eigenvalues(a: &Mat<f64>, m: &Mat<f64>) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n || m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch("pencil matrices must be square of equal size".into()));
    }
    let llt = m.llt(Side::Lower).map_err(|_| Error::NotPositiveDefinite)?;
    let l = llt.L();
    let mut x = a.clone();
    solve_lower_triangular_in_place(l, x.as_mut(), Par::Seq);
    let mut c = x.transpose().to_owned();
    solve_lower_triangular_in_place(l, c.as_mut(), Par::Seq);
    symmetric_eigenvalues(&c)
}

pub fn generalized_eigs(a: &SparseMatrix, m: &SparseMatrix, how_many: usize, drop_tol: f64) -> Result<EigenResult> {
    if a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "pencil of a {}×{} and a {}×{} matrix",
            a.rows(),
            a.cols(),
            m.rows(),
            m.cols()
        )));
    }
    let all = dense_generalized_eigenvalues(&a.to_dense(), &m.to_dense())?;
    Ok(EigenResult::from_spectrum(all, how_many, drop_tol))
}

/// `K = W^½·D1·M1⁻¹·D1ᵀ·W^½`, assembled column block by column block with a
/// sparse Cholesky factorization of `M1`.
pub fn rotation_face_matrix(complex: &DeRhamComplex2D) -> Result<Mat<f64>> {
    let (_, ne, nf) = complex.dims();
    let root_w: Vec<f64> = complex.areas().iter().map(|a| a.sqrt().recip()).collect();
    let llt = complex.m1.to_faer().sp_cholesky(Side::Lower).map_err(|_| Error::NotPositiveDefinite)?;
    // D1 by rows: face → [(edge, sign)]
    let mut face_edges = vec![Vec::with_capacity(3); nf];
    for &(f, e, v) in complex.d1.entries() {
        face_edges[f].push((e, v));
    }
    let mut k = Mat::<f64>::zeros(nf, nf);
    let mut start = 0;
    while start < nf {
        let width = FACE_BLOCK.min(nf - start);
        let mut x = Mat::<f64>::zeros(ne, width);
        for j in 0..width {
            let f = start + j;
            for &(e, v) in &face_edges[f] {
                x[(e, j)] += v * root_w[f];
            }
        }
        llt.solve_in_place(x.as_mut());
        for j in 0..width {
            for (f, edges) in face_edges.iter().enumerate() {
                let s: f64 = edges.iter().map(|&(e, v)| v * x[(e, j)]).sum();
                k[(f, start + j)] = root_w[f] * s;
            }
        }
        start += width;
    }
    // exact symmetry for the eigensolver
    for i in 0..nf {
        for j in 0..i {
            let s = 0.5 * (k[(i, j)] + k[(j, i)]);
            k[(i, j)] = s;
            k[(j, i)] = s;
        }
    }
    Ok(k)
}

/// Whole spectrum of the `k`-th pencil `(stiffness(k), M_k)`. The edge pencil
/// goes through the face matrix; its `E − F` structural zeros are reported as exact zeros.
pub fn dense_pencil_spectrum(complex: &DeRhamComplex2D, k: usize, how_many: usize) -> Result<EigenResult> {
    match k {
        0 => generalized_eigs(&complex.stiffness(0)?, &complex.m0, how_many, DROP_TOL),
        1 => {
            let (_, ne, nf) = complex.dims();
            let face = EigenResult::from_spectrum(symmetric_eigenvalues(&rotation_face_matrix(complex)?)?, nf, DROP_TOL);
            let structural = ne - nf;
            let zero_count = structural + face.zero_count;
            let mut all = vec![0.0; structural];
            all.extend(face.eigenvalues.iter().copied());
            Ok(EigenResult {
                eigenvalues: all.iter().take(how_many).copied().collect(),
                nonzero: face.nonzero.iter().take(how_many).copied().collect(),
                zero_count,
                drop_tol: DROP_TOL,
                dimension: ne,
                spectral_gap: face.spectral_gap,
            })
        }
        _ => Err(Error::InvalidArgument(format!("no pencil of degree {k} in two dimensions"))),
    }
}

fn sparse_times(a: &SparseMatrix, x: &Mat<f64>) -> Mat<f64> {
    let mut y = Mat::<f64>::zeros(a.rows(), x.ncols());
    for &(r, c, v) in a.entries() {
        for j in 0..x.ncols() {
            y[(r, j)] += v * x[(c, j)];
        }
    }
    y
}

fn low_end(kernel: Vec<f64>, nonzero: Vec<f64>, how_many: usize, dimension: usize) -> EigenResult {
    let dropped = kernel.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let spectral_gap = match nonzero.first() {
        Some(&kept) if dropped > 0.0 => kept / dropped,
        _ => f64::INFINITY,
    };
    EigenResult {
        eigenvalues: kernel.iter().chain(&nonzero).take(how_many).copied().collect(),
        nonzero: nonzero.into_iter().take(how_many).collect(),
        zero_count: kernel.len(),
        drop_tol: DROP_TOL,
        dimension,
        spectral_gap,
    }
}

fn vertex_low_end(complex: &DeRhamComplex2D, how_many: usize) -> Result<EigenResult> {
    let a = complex.stiffness(0)?;
    let m = &complex.m0;
    let n = m.rows();
    let llt = a.add(m)?.to_faer().sp_cholesky(Side::Lower).map_err(|_| Error::NotPositiveDefinite)?;
    let ones = vec![1.0; n];
    let mass = m.bilinear(&ones, &ones)?;
    let kernel = a.bilinear(&ones, &ones)? / mass;
    let scale = mass.sqrt().recip();
    let constant = Weighted { v: vec![scale; n], bv: m.mul_vec(&ones)?.iter().map(|x| x * scale).collect() };
    let mut apply = |x: &Mat<f64>| {
        let mut y = sparse_times(m, x);
        llt.solve_in_place(y.as_mut());
        Ok(y)
    };
    let inner = |v: &[f64]| m.mul_vec(v).expect("vector matches the mass matrix");
    let ritz = largest_eigenvalues(
        KrylovProblem { dim: n, apply: &mut apply, inner: &inner, deflate: &[constant], seed: 0 },
        how_many,
    )?;
    let nonzero = ritz.values.iter().map(|t| (1.0 / t - 1.0).max(0.0)).collect();
    Ok(low_end(vec![kernel], nonzero, how_many, n))
}

fn edge_low_end(complex: &DeRhamComplex2D, how_many: usize) -> Result<EigenResult> {
    let (_, ne, nf) = complex.dims();
    let mut t: Vec<(usize, usize, f64)> = complex.m1.entries().to_vec();
    for &(f, e, v) in complex.d1.entries() {
        t.push((ne + f, e, v));
        t.push((e, ne + f, v));
    }
    let saddle = SparseMatrix::from_triplets(ne + nf, ne + nf, t)?;
    let lu = saddle.to_faer().sp_lu().map_err(|_| Error::EigenSolver)?;
    let root_area: Vec<f64> = complex.areas().iter().map(|a| a.sqrt()).collect();
    let mut apply = |x: &Mat<f64>| {
        let mut rhs = Mat::<f64>::zeros(ne + nf, x.ncols());
        for j in 0..x.ncols() {
            for f in 0..nf {
                rhs[(ne + f, j)] = root_area[f] * x[(f, j)];
            }
        }
        lu.solve_in_place(rhs.as_mut());
        let y = Mat::from_fn(nf, x.ncols(), |f, j| -root_area[f] * rhs[(ne + f, j)]);
        if y.norm_max().is_finite() {
            Ok(y)
        } else {
            Err(Error::EigenSolver)
        }
    };
    let inner = |v: &[f64]| v.to_vec();
    let ritz = largest_eigenvalues(
        KrylovProblem { dim: nf, apply: &mut apply, inner: &inner, deflate: &[], seed: 0 },
        how_many,
    )?;
    // D1·D0 = 0 exactly, so the gradients are exact null vectors
    let nonzero = ritz.values.iter().map(|t| t.recip()).collect();
    Ok(low_end(vec![0.0; ne - nf], nonzero, how_many, ne))
}

/// Kernel and smallest nonzero eigenvalues of the `k`-th pencil `(stiffness(k), M_k)`.
pub fn pencil_spectrum(complex: &DeRhamComplex2D, k: usize, how_many: usize) -> Result<EigenResult> {
    match k {
        0 => vertex_low_end(complex, how_many.max(1)),
        1 => edge_low_end(complex, how_many.max(1)),
        _ => Err(Error::InvalidArgument(format!("no pencil of degree {k} in two dimensions"))),
    }
}

/// The `k`-th pencil solved directly as a dense generalized problem.
pub fn full_pencil_spectrum(complex: &DeRhamComplex2D, k: usize, how_many: usize) -> Result<EigenResult> {
    generalized_eigs(&complex.stiffness(k)?, complex.mass(k)?, how_many, DROP_TOL)
}

/// Both pencil spectra of a complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectra {
    pub gradient: EigenResult,
    pub rotation: EigenResult,
}

impl ComplexSpectra {
    pub fn compute(complex: &DeRhamComplex2D, how_many: usize) -> Result<Self> {
        let gradient = pencil_spectrum(complex, 0, how_many)?;
        let rotation = pencil_spectrum(complex, 1, how_many)?;
        Ok(Self { gradient, rotation })
    }

    fn pencil(&self, k: usize) -> Result<&EigenResult> {
        match k {
            0 => Ok(&self.gradient),
            1 => Ok(&self.rotation),
            _ => Err(Error::InvalidArgument(format!("no pencil of degree {k} in two dimensions"))),
        }
    }

    /// `C_PF,k = μ^(−1/2)` for the smallest nonzero pencil eigenvalue `μ`.
    pub fn pf_constant(&self, k: usize) -> Result<f64> {
        Ok(self.pencil(k)?.first_nonzero()?.powf(-0.5))
    }

    /// Smallest nonzero Hodge–Laplace eigenvalues of degree `k`: the merge of
    /// the nonzero spectra of the pencils of degrees `k − 1` and `k`.
    pub fn hodge(&self, k: usize, how_many: usize) -> Result<Vec<f64>> {
        let mut merged: Vec<f64> = match k {
            0 => {
                self.gradient.check_separation()?;
                self.gradient.nonzero.clone()
            }
            1 => {
                self.gradient.check_separation()?;
                self.rotation.check_separation()?;
                self.gradient.nonzero.iter().chain(&self.rotation.nonzero).copied().collect()
            }
            2 => {
                self.rotation.check_separation()?;
                self.rotation.nonzero.clone()
            }
            _ => return Err(Error::InvalidArgument(format!("no forms of degree {k} in two dimensions"))),
        };
        merged.sort_by(f64::total_cmp);
        merged.truncate(how_many);
        Ok(merged)
    }
}

pub fn pf_constant(complex: &DeRhamComplex2D, k: usize) -> Result<f64> {
    pencil_spectrum(complex, k, 1)?.first_nonzero().map(|mu| mu.powf(-0.5))
}

pub fn hodge_spectrum(complex: &DeRhamComplex2D, k: usize, how_many: usize) -> Result<Vec<f64>> {
    let spectra = match k {
        0 => ComplexSpectra { gradient: pencil_spectrum(complex, 0, how_many)?, rotation: empty_result() },
        2 => ComplexSpectra { gradient: empty_result(), rotation: pencil_spectrum(complex, 1, how_many)? },
        _ => ComplexSpectra::compute(complex, how_many)?,
    };
    spectra.hodge(k, how_many)
}

fn empty_result() -> EigenResult {
    EigenResult::from_spectrum(Vec::new(), 0, DROP_TOL)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub name: String,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshSummary {
    pub rings: usize,
    pub vertices: usize,
    pub edges: usize,
    pub triangles: usize,
    pub h_max: f64,
    /// Longest edge over the domain diameter.
    pub h_rel: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub pf: BTreeMap<String, f64>,
    pub hodge: BTreeMap<String, Vec<f64>>,
    pub bounds: Vec<BoundVerdict>,
    pub ordering_pass: bool,
    pub metrics: DomainMetrics,
    pub mesh: MeshSummary,
}

impl SpectrumReport {
    pub fn pf(&self, k: usize) -> f64 {
        self.pf[&k.to_string()]
    }

    pub fn hodge(&self, k: usize) -> &[f64] {
        &self.hodge[&k.to_string()]
    }

    /// Relative slack of the ordering and bound checks: ten mesh widths.
    pub fn slack(&self) -> f64 {
        10.0 * self.mesh.h_rel
    }

    pub fn pass(&self) -> bool {
        self.ordering_pass && self.bounds.iter().all(|b| b.pass)
    }
}

/// Mesh of `domain` obtained by pushing the reference disk mesh through its expansion map.
pub fn domain_mesh(domain: Arc<StarDomain>, rings: usize) -> Result<TriangleMesh> {
    map_mesh(&disk_reference_mesh(rings)?, &RadialMap::Expansion(domain))
}

pub fn spectrum_report(domain: Arc<StarDomain>, rings: usize) -> Result<SpectrumReport> {
    let metrics = domain.metrics();
    let mesh = domain_mesh(domain, rings)?;
    let complex = assemble_complex(&mesh)?;
    let spectra = ComplexSpectra::compute(&complex, HODGE_COUNT)?;
    let h_max = mesh_quality(&mesh).h_max;
    let mut report = SpectrumReport {
        pf: (0..2).map(|k| Ok((k.to_string(), spectra.pf_constant(k)?))).collect::<Result<_>>()?,
        hodge: (0..3)
            .map(|k| Ok((k.to_string(), spectra.hodge(k, HODGE_COUNT)?)))
            .collect::<Result<_>>()?,
        bounds: Vec::new(),
        ordering_pass: false,
        metrics,
        mesh: MeshSummary {
            rings,
            vertices: mesh.num_vertices(),
            edges: mesh.num_edges(),
            triangles: mesh.num_triangles(),
            h_max,
            h_rel: h_max / metrics.diameter,
        },
    };
    report.ordering_pass = verify_ordering(&report);
    report.bounds = explicit_bounds_check(&metrics, &report);
    info!(
        "rings {rings}: C0 = {:.6}, C1 = {:.6}, ordering {}",
        report.pf(0),
        report.pf(1),
        report.ordering_pass
    );
    Ok(report)
}

/// Relative margins of `diam/π ≥ C_PF,0` and `C_PF,0 ≥ C_PF,1`.
pub fn ordering_margins(report: &SpectrumReport) -> [f64; 2] {
    let (c0, c1) = (report.pf(0), report.pf(1));
    [(report.metrics.diameter / PI - c0) / c0, (c0 - c1) / c1]
}

/// `diam/π ≥ C_PF,0 ≥ C_PF,1`, each up to the mesh-scaled relative slack.
pub fn verify_ordering(report: &SpectrumReport) -> bool {
    ordering_margins(report).iter().all(|&m| m >= -report.slack())
}

fn verdict(name: &str, lower: f64, value: f64, upper: f64, slack: f64) -> BoundVerdict {
    BoundVerdict {
        name: name.into(),
        lower,
        value,
        upper,
        pass: value >= lower * (1.0 - slack) && value <= upper * (1.0 + slack),
    }
}

/// Gradient constant against the equal-area disk and `diam/π`; rotation
/// constant against the inscribed and circumscribed disks.
pub fn explicit_bounds_check(metrics: &DomainMetrics, report: &SpectrumReport) -> Vec<BoundVerdict> {
    let slack = report.slack();
    let equal_area_radius = (metrics.area / PI).sqrt();
    vec![
        verdict(
            "neumann",
            equal_area_radius * disk_pf_gradient(),
            report.pf(0),
            metrics.diameter / PI,
            slack,
        ),
        verdict(
            "dirichlet",
            metrics.rho * disk_pf_rotation(),
            report.pf(1),
            metrics.r_out * disk_pf_rotation(),
            slack,
        ),
    ]
}

/// `√n·e^{3/2}/√(k(n−k))·diam`, for `0 < k < n`.
pub fn guerini_upper_bound(n: usize, k: usize, diameter: f64) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("degree {k} outside 0 < k < {n}")));
    }
    Ok((n as f64).sqrt() * 1.5_f64.exp() / ((k * (n - k)) as f64).sqrt() * diameter)
}

/// `(((k+1)(n+2)γⁿ)^{−1/2}·σ, γ·√C(n,k)·σ)` with `σ` the `(k+1)`-th principal
/// radius of a maximal-volume inscribed ellipsoid and `γ` its dilation factor.
pub fn savo_bounds(n: usize, k: usize, gamma: f64, sigma: f64) -> Result<(f64, f64)> {
    if k >= n || !(gamma >= 1.0) {
        return Err(Error::InvalidArgument(format!("need k < n and gamma ≥ 1, got k = {k}, gamma = {gamma}")));
    }
    let binom = (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    let lower = (((k + 1) * (n + 2)) as f64 * gamma.powi(n as i32)).powf(-0.5) * sigma;
    Ok((lower, gamma * binom.sqrt() * sigma))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub eps_list: Vec<f64>,
    pub rings: usize,
    pub reference: SpectrumReport,
    pub reports: Vec<SpectrumReport>,
    /// `[|C_PF,0,ε − C_PF,0|, |C_PF,1,ε − C_PF,1|]` per ε.
    pub deltas: Vec<[f64; 2]>,
    /// `max |s − s_ε|` of each extracted approximation.
    pub sup_errors: Vec<f64>,
    pub monotone: bool,
}

impl ConvergenceStudy {
    /// `|λ_{k,j,ε} − λ_{k,j}|` for the first `count` nonzero Hodge eigenvalues, one row per ε.
    pub fn hodge_deltas(&self, k: usize, count: usize) -> Vec<Vec<f64>> {
        let reference = self.reference.hodge(k);
        self.reports
            .iter()
            .map(|r| r.hodge(k).iter().zip(reference).take(count).map(|(a, b)| (a - b).abs()).collect())
            .collect()
    }

    /// Whether each of the first `count` Hodge eigenvalues of every degree approaches its reference.
    pub fn hodge_monotone(&self, count: usize) -> bool {
        (0..3).all(|k| {
            let rows = self.hodge_deltas(k, count);
            (0..count).all(|j| {
                let d: Vec<f64> = rows.iter().map(|r| r.get(j).copied().unwrap_or(f64::NAN)).collect();
                deltas_non_increasing(&d, CONVERGENCE_SLACK)
            })
        })
    }

    /// Header and rows: `eps, C0, C1, delta0, delta1, lam_k_j…`, reference first.
    pub fn table(&self) -> (Vec<String>, Vec<Vec<f64>>) {
        let mut header: Vec<String> = ["eps", "C0", "C1", "delta0", "delta1"].map(String::from).to_vec();
        for k in 0..3 {
            for j in 1..=HODGE_COUNT {
                header.push(format!("lam_{k}_{j}"));
            }
        }
        let row = |eps: f64, r: &SpectrumReport, d: [f64; 2]| {
            let mut v = vec![eps, r.pf(0), r.pf(1), d[0], d[1]];
            for k in 0..3 {
                let h = r.hodge(k);
                v.extend((0..HODGE_COUNT).map(|j| h.get(j).copied().unwrap_or(f64::NAN)));
            }
            v
        };
        let mut rows = vec![row(0.0, &self.reference, [0.0, 0.0])];
        for ((eps, r), d) in self.eps_list.iter().zip(&self.reports).zip(&self.deltas) {
            rows.push(row(*eps, r, *d));
        }
        (header, rows)
    }
}

/// Whether each successive delta stays within `(1 + slack)` of its predecessor.
pub fn deltas_non_increasing(deltas: &[f64], slack: f64) -> bool {
    deltas.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack) + 1e-12)
}

pub fn convergence_study(domain: Arc<StarDomain>, eps_list: &[f64], rings: usize) -> Result<ConvergenceStudy> {
    if eps_list.is_empty() {
        return Err(Error::InvalidArgument("empty epsilon list".into()));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("epsilon list must be strictly decreasing".into()));
    }
    let reference = spectrum_report(domain.clone(), rings)?;
    let mut reports = Vec::with_capacity(eps_list.len());
    let mut sup_errors = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let approx = build_smooth_approximation(domain.clone(), eps, STUDY_RAYS)?;
        sup_errors.push(approx.sup_error());
        reports.push(spectrum_report(approx.boundary().clone(), rings)?);
    }
    let deltas: Vec<[f64; 2]> = reports
        .iter()
        .map(|r| [(r.pf(0) - reference.pf(0)).abs(), (r.pf(1) - reference.pf(1)).abs()])
        .collect();
    let monotone = (0..2).all(|k| {
        let d: Vec<f64> = deltas.iter().map(|d| d[k]).collect();
        deltas_non_increasing(&d, CONVERGENCE_SLACK)
    });
    Ok(ConvergenceStudy { eps_list: eps_list.to_vec(), rings, reference, reports, deltas, sup_errors, monotone })
}
