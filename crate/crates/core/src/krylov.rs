//! Block Krylov eigensolver for the largest eigenvalues of an operator that
//! is self-adjoint in a `B` inner product. Every new block is orthogonalized
//! against the whole basis (twice), and Ritz pairs come from the projected
//! matrix `Qᵀ B T Q`, so clustered and repeated eigenvalues are resolved up
//! to the block size.

use faer::{Mat, Side};
use rand::Rng;

use crate::error::{Error, Result};
use crate::sampling::seeded_rng;

pub const BLOCK_SIZE: usize = 6;
pub const MAX_BASIS: usize = 900;
/// Relative Ritz residual `‖T y − θ y‖_B / θ` accepted as converged.
pub const RESIDUAL_TOL: f64 = 1e-10;

const KRYLOV_STREAM: u64 = 11;
const DEPENDENCE_TOL: f64 = 1e-8;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn columns(m: &Mat<f64>) -> Vec<Vec<f64>> {
    (0..m.ncols()).map(|j| (0..m.nrows()).map(|i| m[(i, j)]).collect()).collect()
}

/// A vector with its `B` image.
pub struct Weighted {
    pub v: Vec<f64>,
    pub bv: Vec<f64>,
}

pub struct KrylovProblem<'a> {
    pub dim: usize,
    /// `T` applied to the columns of a block.
    pub apply: &'a mut dyn FnMut(&Mat<f64>) -> Result<Mat<f64>>,
    pub inner: &'a dyn Fn(&[f64]) -> Vec<f64>,
    /// `B`-orthonormal vectors removed from the search space.
    pub deflate: &'a [Weighted],
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct RitzValues {
    /// Largest eigenvalues, descending.
    pub values: Vec<f64>,
    pub max_residual: f64,
    pub basis: usize,
}

pub fn largest_eigenvalues(problem: KrylovProblem<'_>, nev: usize) -> Result<RitzValues> {
    let KrylovProblem { dim, apply, inner, deflate, seed } = problem;
    let available = dim.saturating_sub(deflate.len());
    let nev = nev.min(available);
    if nev == 0 {
        return Ok(RitzValues { values: Vec::new(), max_residual: 0.0, basis: 0 });
    }
    let mut rng = seeded_rng(seed, KRYLOV_STREAM);
    let mut block: Vec<Vec<f64>> =
        (0..BLOCK_SIZE).map(|_| (0..dim).map(|_| rng.random::<f64>() - 0.5).collect()).collect();
    let mut basis: Vec<Weighted> = Vec::new();
    let mut images: Vec<Vec<f64>> = Vec::new();
    // projected matrix, grown by blocks
    let mut h: Vec<Vec<f64>> = Vec::new();
    loop {
        let start = basis.len();
        for mut v in std::mem::take(&mut block) {
            let before = dot(&v, &inner(&v)).sqrt();
            for _ in 0..2 {
                for w in deflate.iter().chain(&basis) {
                    let c = dot(&w.bv, &v);
                    axpy(-c, &w.v, &mut v);
                }
            }
            let bv = inner(&v);
            let norm = dot(&v, &bv).sqrt();
            if norm > DEPENDENCE_TOL * before && basis.len() < available {
                let s = norm.recip();
                basis.push(Weighted { v: v.iter().map(|x| x * s).collect(), bv: bv.iter().map(|x| x * s).collect() });
            }
        }
        let added = basis.len() - start;
        if added > 0 {
            let x = Mat::from_fn(dim, added, |i, j| basis[start + j].v[i]);
            let y = columns(&apply(&x)?);
            images.extend(y.iter().cloned());
            for row in h.iter_mut() {
                row.resize(basis.len(), 0.0);
            }
            h.resize(basis.len(), vec![0.0; basis.len()]);
            for j in start..basis.len() {
                for i in 0..basis.len() {
                    let a = dot(&basis[i].bv, &images[j]);
                    let b = if i < start { dot(&basis[j].bv, &images[i]) } else { a };
                    h[i][j] = 0.5 * (a + b);
                    h[j][i] = h[i][j];
                }
            }
            block = y;
        }
        let exhausted = added == 0 || basis.len() >= available;
        if basis.len() < nev.max(2 * BLOCK_SIZE) && !exhausted {
            continue;
        }
        let m = basis.len();
        let hm = Mat::from_fn(m, m, |i, j| h[i][j]);
        let eig = hm.self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenSolver)?;
        let s = eig.S().column_vector();
        let u = eig.U();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
        let mut values = Vec::with_capacity(nev);
        let mut max_residual: f64 = 0.0;
        for &c in order.iter().take(nev) {
            let theta = s[c];
            let mut r = vec![0.0; dim];
            for k in 0..m {
                axpy(u[(k, c)], &images[k], &mut r);
                axpy(-theta * u[(k, c)], &basis[k].v, &mut r);
            }
            let res = dot(&r, &inner(&r)).max(0.0).sqrt() / theta.abs().max(f64::MIN_POSITIVE);
            max_residual = max_residual.max(res);
            values.push(theta);
        }
        if max_residual <= RESIDUAL_TOL || exhausted {
            return Ok(RitzValues { values, max_residual, basis: m });
        }
        if m + BLOCK_SIZE > MAX_BASIS {
            return Err(Error::EigenSolver);
        }
    }
}
