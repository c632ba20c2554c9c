use std::io::Write;

use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::error::{Error, Result};

/// Coordinate-format sparse matrix. Entries are kept sorted by `(row, col)`
/// with duplicates summed and exact zeros removed, so two matrices assembled
/// from the same triplets in any order compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= rows || *c >= cols) {
            return Err(Error::DimensionMismatch(format!("entry ({r}, {c}) outside a {rows}×{cols} matrix")));
        }
        triplets.sort_by_key(|a| (a.0, a.1));
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| e.2 != 0.0);
        Ok(Self { rows, cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, cols: n, entries: (0..n).map(|i| (i, i, 1.0)).collect() }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_triplets(n, n, values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect())
            .expect("diagonal entries are in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(row, col)))
            .map(|i| self.entries[i].2)
            .unwrap_or(0.0)
    }

    pub fn transpose(&self) -> Self {
        let t = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.cols, self.rows, t).expect("transpose stays in range")
    }

    pub fn scale(&self, factor: f64) -> Self {
        let t = self.entries.iter().map(|&(r, c, v)| (r, c, v * factor)).collect();
        Self::from_triplets(self.rows, self.cols, t).expect("same pattern")
    }

    fn row_ranges(&self) -> Vec<usize> {
        let mut start = vec![0; self.rows + 1];
        for &(r, _, _) in &self.entries {
            start[r + 1] += 1;
        }
        for i in 0..self.rows {
            start[i + 1] += start[i];
        }
        start
    }

    pub fn matmul(&self, other: &SparseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ranges = other.row_ranges();
        let mut out = Vec::new();
        for &(r, k, a) in &self.entries {
            for &(_, c, b) in &other.entries[ranges[k]..ranges[k + 1]] {
                out.push((r, c, a * b));
            }
        }
        Self::from_triplets(self.rows, other.cols, out)
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("sum of differently shaped matrices".into()));
        }
        let mut t = self.entries.clone();
        t.extend_from_slice(&other.entries);
        Self::from_triplets(self.rows, self.cols, t)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let mut y = vec![0.0; self.rows];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        Ok(y)
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let ay = self.mul_vec(y)?;
        Ok(x.iter().zip(&ay).map(|(a, b)| a * b).sum())
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.rows];
        for &(r, _, v) in &self.entries {
            s[r] += v;
        }
        s
    }

    /// Largest absolute entry of `A − Aᵀ`.
    pub fn asymmetry(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .map(|&(r, c, v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() == 0.0
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.2.abs()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::zeros(self.rows, self.cols);
        for &(r, c, v) in &self.entries {
            m[(r, c)] += v;
        }
        m
    }

    pub fn to_faer(&self) -> SparseColMat<usize, f64> {
        let triplets: Vec<Triplet<usize, usize, f64>> =
            self.entries.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
        SparseColMat::try_new_from_triplets(self.rows, self.cols, &triplets)
            .expect("consolidated triplets are valid")
    }

    /// Writes one `row col value` line per stored entry, values with 17 significant digits.
    pub fn write_coordinate(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "{} {} {}", self.rows, self.cols, self.entries.len())?;
        for &(r, c, v) in &self.entries {
            writeln!(out, "{r} {c} {v:.16e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assembly_order_does_not_matter() {
        let a = SparseMatrix::from_triplets(2, 2, vec![(1, 0, 1.0), (0, 0, 2.0), (1, 0, 0.5), (0, 1, 3.0)]).unwrap();
        let b = SparseMatrix::from_triplets(2, 2, vec![(0, 1, 3.0), (1, 0, 1.5), (0, 0, 2.0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(1, 0), 1.5);
        assert_eq!(a.get(1, 1), 0.0);
    }

    #[test]
    fn cancelling_entries_are_dropped() {
        let a = SparseMatrix::from_triplets(1, 1, vec![(0, 0, 1.0), (0, 0, -1.0)]).unwrap();
        assert_eq!(a.nnz(), 0);
        assert!(SparseMatrix::from_triplets(1, 1, vec![(1, 0, 1.0)]).is_err());
    }

    #[test]
    fn products_match_dense() {
        let a = SparseMatrix::from_triplets(2, 3, vec![(0, 0, 1.0), (0, 2, 2.0), (1, 1, -1.0)]).unwrap();
        let b = SparseMatrix::from_triplets(3, 2, vec![(0, 1, 4.0), (1, 0, 5.0), (2, 0, 1.0), (2, 1, 1.0)]).unwrap();
        let c = a.matmul(&b).unwrap().to_dense();
        let d = a.to_dense() * b.to_dense();
        assert_eq!(c, d);
        assert!(a.matmul(&a).is_err());
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]).unwrap(), vec![3.0, -1.0]);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn coordinate_output_round_trips_values() {
        let a = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 0.1), (1, 1, 1.0 / 3.0)]).unwrap();
        let mut buf = Vec::new();
        a.write_coordinate(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "2 2 2");
        let v: f64 = lines[2].split(' ').nth(2).unwrap().parse().unwrap();
        assert_eq!(v, 1.0 / 3.0);
    }
}
