//! Lowest-order discrete de Rham complex on a triangle mesh: continuous
//! piecewise linears, Whitney edge elements and piecewise constants.
//!
//! Degrees of freedom are vertex values, edge circulations and face
//! integrals. In that basis the 2-form mass matrix is `diag(1/area)`, so the
//! rotation energy is `D1ᵀ·diag(area)⁻¹·D1` with `M2 = diag(area)`.

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::mesh::{incidence_matrices, TriangleMesh};
use crate::sparse::SparseMatrix;

#[derive(Clone, Debug)]
pub struct DeRhamComplex2D {
    pub m0: SparseMatrix,
    pub m1: SparseMatrix,
    pub m2: SparseMatrix,
    pub d0: SparseMatrix,
    pub d1: SparseMatrix,
    areas: Vec<f64>,
}

fn rot90(v: Point) -> Point {
    Point::new(-v.y, v.x)
}

/// Gradients of the barycentric coordinates of a counterclockwise triangle.
pub fn barycentric_gradients(p: &[Point; 3], area: f64) -> [Point; 3] {
    std::array::from_fn(|i| rot90(p[(i + 2) % 3] - p[(i + 1) % 3]) / (2.0 * area))
}

/// Element mass of the Whitney forms `λ_i∇λ_j − λ_j∇λ_i` for the local edges
/// `(1,2)`, `(2,0)`, `(0,1)`.
pub fn whitney_element_mass(p: &[Point; 3], area: f64) -> [[f64; 3]; 3] {
    let g = barycentric_gradients(p, area);
    let lambda = |a: usize, b: usize| area / 12.0 * if a == b { 2.0 } else { 1.0 };
    let ends = [(1, 2), (2, 0), (0, 1)];
    let mut m = [[0.0; 3]; 3];
    for (k, &(i, j)) in ends.iter().enumerate() {
        for (l, &(a, b)) in ends.iter().enumerate() {
            m[k][l] = lambda(i, a) * g[j].dot(&g[b]) - lambda(i, b) * g[j].dot(&g[a])
                - lambda(j, a) * g[i].dot(&g[b])
                + lambda(j, b) * g[i].dot(&g[a]);
        }
    }
    m
}

pub fn assemble_complex(mesh: &TriangleMesh) -> Result<DeRhamComplex2D> {
    let (d0, d1) = incidence_matrices(mesh);
    let (nv, ne, nf) = (mesh.num_vertices(), mesh.num_edges(), mesh.num_triangles());
    let mut t0 = Vec::with_capacity(9 * nf);
    let mut t1 = Vec::with_capacity(9 * nf);
    let mut areas = Vec::with_capacity(nf);
    for (t, (tri, refs)) in mesh.triangles().iter().zip(mesh.triangle_edges()).enumerate() {
        let p = mesh.corners(t);
        let area = mesh.area(t);
        if !(area > 0.0) {
            return Err(Error::InvertedElement { triangle: t, area });
        }
        areas.push(area);
        for a in 0..3 {
            for b in 0..3 {
                t0.push((tri[a], tri[b], area / 12.0 * if a == b { 2.0 } else { 1.0 }));
            }
        }
        let local = whitney_element_mass(&p, area);
        for k in 0..3 {
            for l in 0..3 {
                let s = (refs[k].sign * refs[l].sign) as f64;
                t1.push((refs[k].edge, refs[l].edge, s * local[k][l]));
            }
        }
    }
    Ok(DeRhamComplex2D {
        m0: SparseMatrix::from_triplets(nv, nv, t0)?,
        m1: SparseMatrix::from_triplets(ne, ne, t1)?,
        m2: SparseMatrix::diagonal(&areas),
        d0,
        d1,
        areas,
    })
}

impl DeRhamComplex2D {
    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m0.rows(), self.m1.rows(), self.m2.rows())
    }

    /// Inverse 2-form mass `diag(1/area)` acting on face integrals.
    pub fn face_weight(&self) -> SparseMatrix {
        SparseMatrix::diagonal(&self.areas.iter().map(|a| 1.0 / a).collect::<Vec<_>>())
    }

    /// Energy matrix of the `k`-th coboundary: `D0ᵀ M1 D0` or `D1ᵀ diag(1/area) D1`.
    pub fn stiffness(&self, k: usize) -> Result<SparseMatrix> {
        match k {
            0 => self.d0.transpose().matmul(&self.m1)?.matmul(&self.d0),
            1 => self.d1.transpose().matmul(&self.face_weight())?.matmul(&self.d1),
            _ => Err(Error::InvalidArgument(format!("no stiffness of degree {k} in two dimensions"))),
        }
    }

    pub fn mass(&self, k: usize) -> Result<&SparseMatrix> {
        match k {
            0 => Ok(&self.m0),
            1 => Ok(&self.m1),
            2 => Ok(&self.m2),
            _ => Err(Error::InvalidArgument(format!("no forms of degree {k} in two dimensions"))),
        }
    }

    /// Whether the mass matrices admit a Cholesky factorization.
    pub fn masses_positive_definite(&self) -> bool {
        [&self.m0, &self.m1, &self.m2]
            .iter()
            .all(|m| m.to_faer().sp_cholesky(faer::Side::Lower).is_ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::disk_reference_mesh;

    fn cot(a: Point, b: Point) -> f64 {
        a.dot(&b) / (a.x * b.y - a.y * b.x).abs()
    }

    fn triangle(p: [Point; 3]) -> TriangleMesh {
        TriangleMesh::new(p.to_vec(), vec![[0, 1, 2]]).unwrap()
    }

    #[test]
    fn vertex_mass_of_unit_right_triangle() {
        let c = assemble_complex(&triangle([Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]))
            .unwrap();
        let m = c.m0.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 2.0 / 24.0 } else { 1.0 / 24.0 };
                assert!((m[(i, j)] - expected).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn vertex_stiffness_is_the_cotangent_laplacian() {
        let p = [Point::new(0.1, -0.2), Point::new(1.3, 0.1), Point::new(0.4, 0.9)];
        let c = assemble_complex(&triangle(p)).unwrap();
        let k = c.stiffness(0).unwrap().to_dense();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let o = 3 - i - j;
                let expected = -0.5 * cot(p[i] - p[o], p[j] - p[o]);
                assert!((k[(i, j)] - expected).abs() < 1e-14, "{i}{j}");
            }
        }
        for s in c.stiffness(0).unwrap().row_sums() {
            assert!(s.abs() < 1e-14);
        }
    }

    #[test]
    fn whitney_mass_against_quadrature() {
        // degree-2 integrand: exact with the 3-point edge-midpoint rule
        let p = [Point::new(0.0, 0.0), Point::new(2.0, 0.5), Point::new(0.3, 1.1)];
        let area = 0.5 * ((p[1] - p[0]).x * (p[2] - p[0]).y - (p[1] - p[0]).y * (p[2] - p[0]).x);
        let g = barycentric_gradients(&p, area);
        let mids = [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]];
        let ends = [(1, 2), (2, 0), (0, 1)];
        let w = |lam: &[f64; 3], k: usize| {
            let (i, j) = ends[k];
            lam[i] * g[j] - lam[j] * g[i]
        };
        let m = whitney_element_mass(&p, area);
        for k in 0..3 {
            for l in 0..3 {
                let q: f64 = mids.iter().map(|lam| w(lam, k).dot(&w(lam, l))).sum::<f64>() * area / 3.0;
                assert!((m[k][l] - q).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn whitney_circulations_are_kronecker() {
        // tangential integral of w_k along edge l is δ_kl
        let p = [Point::new(0.0, 0.0), Point::new(2.0, 0.5), Point::new(0.3, 1.1)];
        let area = 0.5 * ((p[1] - p[0]).x * (p[2] - p[0]).y - (p[1] - p[0]).y * (p[2] - p[0]).x);
        let g = barycentric_gradients(&p, area);
        let ends = [(1, 2), (2, 0), (0, 1)];
        for (k, &(i, j)) in ends.iter().enumerate() {
            for (l, &(a, b)) in ends.iter().enumerate() {
                let tangent = p[b] - p[a];
                // λ_i + λ_j is affine along the edge; midpoint rule is exact
                let mut lam = [0.0; 3];
                lam[a] = 0.5;
                lam[b] = 0.5;
                let w = lam[i] * g[j] - lam[j] * g[i];
                let circ = w.dot(&tangent);
                assert!((circ - if k == l { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn face_mass_and_partition_of_unity() {
        let mesh = disk_reference_mesh(1).unwrap();
        let c = assemble_complex(&mesh).unwrap();
        let hexagon = 3.0 * 3.0_f64.sqrt() / 2.0;
        let diag: Vec<f64> = (0..6).map(|i| c.m2.get(i, i)).collect();
        assert!(diag.iter().all(|a| (a - diag[0]).abs() < 1e-15));
        assert!((diag.iter().sum::<f64>() - hexagon).abs() < 1e-14);
        let ones = vec![1.0; mesh.num_vertices()];
        assert!((c.m0.bilinear(&ones, &ones).unwrap() - hexagon).abs() < 1e-12);
    }

    #[test]
    fn galerkin_energy_of_linear_function() {
        let mesh = disk_reference_mesh(5).unwrap();
        let c = assemble_complex(&mesh).unwrap();
        let f: Vec<f64> = mesh.vertices().iter().map(|p| p.x).collect();
        let energy = c.stiffness(0).unwrap().bilinear(&f, &f).unwrap();
        assert!((energy - mesh.total_area()).abs() < 1e-10);
        // D0 of an affine interpolant gives the exact edge integrals of its gradient
        let g = Point::new(0.7, -1.3);
        let f: Vec<f64> = mesh.vertices().iter().map(|p| g.dot(p) + 0.25).collect();
        let df = c.d0.mul_vec(&f).unwrap();
        for (e, &[a, b]) in mesh.edges().iter().enumerate() {
            let exact = g.dot(&(mesh.vertices()[b] - mesh.vertices()[a]));
            assert!((df[e] - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn masses_are_symmetric_positive_definite() {
        let c = assemble_complex(&disk_reference_mesh(4).unwrap()).unwrap();
        assert!(c.m0.is_symmetric() && c.m1.asymmetry() < 1e-15 && c.m2.is_symmetric());
        assert!(c.masses_positive_definite());
        assert!(c.stiffness(2).is_err());
    }
}
