//! Oriented triangle meshes of disk topology.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cross, Point};
use crate::sparse::SparseMatrix;
use crate::transforms::RadialMap;

/// An edge of a triangle together with the sign of its traversal relative to
/// the global edge orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeRef {
    pub edge: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    /// Global edges `[low, high]`, sorted.
    edges: Vec<[usize; 2]>,
    /// Local edge `k` of triangle `[a, b, c]` is the one opposite vertex `k`,
    /// traversed `b→c`, `c→a`, `a→b`.
    triangle_edges: Vec<[EdgeRef; 3]>,
    boundary_edges: Vec<usize>,
}

pub fn signed_area(a: &Point, b: &Point, c: &Point) -> f64 {
    0.5 * cross(&(b - a), &(c - a))
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        let nv = vertices.len();
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!("triangle {t} references a missing vertex")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("triangle {t} repeats a vertex")));
            }
            let area = signed_area(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]);
            if !(area > 0.0) {
                return Err(Error::InvertedElement { triangle: t, area });
            }
        }

        // (low, high) → (index placeholder, traversals low→high, traversals high→low)
        let mut uses: BTreeMap<[usize; 2], (usize, usize)> = BTreeMap::new();
        for tri in &triangles {
            for k in 0..3 {
                let (from, to) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let entry = uses.entry([from.min(to), from.max(to)]).or_default();
                if from < to {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        let mut edges = Vec::with_capacity(uses.len());
        let mut boundary_edges = Vec::new();
        let mut index = BTreeMap::new();
        for (e, (key, (fwd, back))) in uses.iter().enumerate() {
            if *fwd > 1 || *back > 1 {
                return Err(Error::InvalidMesh(format!(
                    "edge {key:?} is traversed twice in the same direction"
                )));
            }
            if fwd + back == 1 {
                boundary_edges.push(e);
            }
            edges.push(*key);
            index.insert(*key, e);
        }
        let triangle_edges = triangles
            .iter()
            .map(|tri| {
                std::array::from_fn(|k| {
                    let (from, to) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                    EdgeRef { edge: index[&[from.min(to), from.max(to)]], sign: if from < to { 1 } else { -1 } }
                })
            })
            .collect();

        let used = {
            let mut seen = vec![false; nv];
            triangles.iter().flatten().for_each(|&v| seen[v] = true);
            seen.iter().filter(|s| **s).count()
        };
        if used != nv {
            return Err(Error::InvalidMesh(format!("{} vertices belong to no triangle", nv - used)));
        }
        let euler = nv as i64 - edges.len() as i64 + triangles.len() as i64;
        if euler != 1 {
            return Err(Error::InvalidMesh(format!("Euler characteristic {euler}, expected 1")));
        }
        Ok(Self { vertices, triangles, edges, triangle_edges, boundary_edges })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangle_edges(&self) -> &[[EdgeRef; 3]] {
        &self.triangle_edges
    }

    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        signed_area(&a, &b, &c)
    }

    pub fn areas(&self) -> Vec<f64> {
        (0..self.num_triangles()).map(|t| self.area(t)).collect()
    }

    pub fn total_area(&self) -> f64 {
        self.areas().iter().sum()
    }

    pub fn to_file(&self) -> MeshFile {
        MeshFile {
            vertices: self.vertices.iter().map(|p| [p.x, p.y]).collect(),
            triangles: self.triangles.clone(),
        }
    }

    pub fn from_file(file: &MeshFile) -> Result<Self> {
        Self::new(file.vertices.iter().map(|v| Point::new(v[0], v[1])).collect(), file.triangles.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// Serialized mesh: vertex coordinates and counterclockwise triangles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
}

/// First vertex index on ring `k` (ring 0 is the center).
fn ring_start(k: usize) -> usize {
    if k == 0 { 0 } else { 1 + 3 * k * (k - 1) }
}

/// Unit disk mesh of concentric rings: ring `k` has `6k` equally spaced
/// vertices at radius `k/rings`, starting on the positive x axis.
pub fn disk_reference_mesh(rings: usize) -> Result<TriangleMesh> {
    if rings == 0 {
        return Err(Error::InvalidArgument("rings must be at least 1".into()));
    }
    let mut vertices = vec![Point::zeros()];
    for k in 1..=rings {
        let r = k as f64 / rings as f64;
        for j in 0..6 * k {
            let a = TAU * j as f64 / (6 * k) as f64;
            vertices.push(Point::new(r * a.cos(), r * a.sin()));
        }
    }
    let mut triangles = Vec::with_capacity(6 * rings * rings);
    for k in 1..=rings {
        let outer = |j: usize| ring_start(k) + j % (6 * k);
        let inner = |j: usize| if k == 1 { 0 } else { ring_start(k - 1) + j % (6 * (k - 1)) };
        for s in 0..6 {
            let (o, i) = (s * k, s * (k - 1));
            for j in 0..k {
                triangles.push([outer(o + j), outer(o + j + 1), inner(i + j)]);
            }
            for j in 0..k.saturating_sub(1) {
                triangles.push([inner(i + j), outer(o + j + 1), inner(i + j + 1)]);
            }
        }
    }
    TriangleMesh::new(vertices, triangles)
}

/// Pushes every vertex through `map`, keeping the connectivity.
pub fn map_mesh(mesh: &TriangleMesh, map: &RadialMap) -> Result<TriangleMesh> {
    let vertices = mesh.vertices.iter().map(|p| map.eval(p)).collect::<Result<Vec<_>>>()?;
    for (t, tri) in mesh.triangles.iter().enumerate() {
        let area = signed_area(&vertices[tri[0]], &vertices[tri[1]], &vertices[tri[2]]);
        if !(area > 0.0) {
            return Err(Error::InvertedElement { triangle: t, area });
        }
    }
    Ok(TriangleMesh { vertices, ..mesh.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshQuality {
    /// Smallest interior angle in degrees.
    pub min_angle: f64,
    /// Largest ratio of longest edge to the altitude onto it, scaled so an equilateral triangle has 1.
    pub max_aspect: f64,
    pub h_max: f64,
    pub h_min: f64,
}

pub fn mesh_quality(mesh: &TriangleMesh) -> MeshQuality {
    let mut q = MeshQuality { min_angle: 180.0, max_aspect: 0.0, h_max: 0.0, h_min: f64::INFINITY };
    for t in 0..mesh.num_triangles() {
        let p = mesh.corners(t);
        let mut longest = 0.0_f64;
        for k in 0..3 {
            let (a, b, c) = (p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
            let (u, v) = (b - a, c - a);
            let angle = cross(&u, &v).atan2(u.dot(&v)).to_degrees();
            q.min_angle = q.min_angle.min(angle);
            let len = (c - b).norm();
            longest = longest.max(len);
        }
        let altitude = 2.0 * mesh.area(t) / longest;
        q.max_aspect = q.max_aspect.max(longest / altitude * 3.0_f64.sqrt() / 2.0);
    }
    for [a, b] in &mesh.edges {
        let len = (mesh.vertices[*a] - mesh.vertices[*b]).norm();
        q.h_max = q.h_max.max(len);
        q.h_min = q.h_min.min(len);
    }
    q
}

/// Coboundary matrices: `D0` (E×V) takes vertex values to edge differences
/// `head − tail`, `D1` (F×E) sums signed edge values around each triangle.
pub fn incidence_matrices(mesh: &TriangleMesh) -> (SparseMatrix, SparseMatrix) {
    let d0 = mesh
        .edges
        .iter()
        .enumerate()
        .flat_map(|(e, &[lo, hi])| [(e, lo, -1.0), (e, hi, 1.0)])
        .collect();
    let d1 = mesh
        .triangle_edges
        .iter()
        .enumerate()
        .flat_map(|(t, refs)| refs.map(|r| (t, r.edge, r.sign as f64)))
        .collect();
    (
        SparseMatrix::from_triplets(mesh.num_edges(), mesh.num_vertices(), d0).expect("edge endpoints are vertices"),
        SparseMatrix::from_triplets(mesh.num_triangles(), mesh.num_edges(), d1).expect("triangle edges exist"),
    )
}
