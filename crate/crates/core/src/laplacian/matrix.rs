use std::io::{self, Write};

use faer::Mat;

use crate::{Error, Result};

/// Symmetric sparse matrix storing the diagonal densely and each
/// off-diagonal pair once, as `(i, j, value)` with `i < j`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    diag: Vec<f64>,
    upper: Vec<(usize, usize, f64)>,
}

impl SparseSymMatrix {
    /// `upper` entries may arrive in any order and must have `i < j`;
    /// duplicates are summed.
    pub fn from_parts(diag: Vec<f64>, mut upper: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = diag.len();
        for &(i, j, _) in &upper {
            if i >= j || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "off-diagonal entry ({i}, {j}) outside the strict upper triangle of a {n}x{n} matrix"
                )));
            }
        }
        upper.sort_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(upper.len());
        for (i, j, v) in upper {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        Ok(SparseSymMatrix {
            diag,
            upper: merged,
        })
    }

    pub fn identity(n: usize) -> Self {
        SparseSymMatrix {
            diag: vec![1.0; n],
            upper: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Strict upper-triangle entries sorted by `(i, j)`.
    pub fn off_diagonal(&self) -> &[(usize, usize, f64)] {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        let key = (i.min(j), i.max(j));
        self.upper
            .binary_search_by_key(&key, |&(a, b, _)| (a, b))
            .map(|k| self.upper[k].2)
            .unwrap_or(0.0)
    }

    pub fn max_diagonal(&self) -> f64 {
        self.diag.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim());
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, x)| d * x).collect();
        for &(i, j, v) in &self.upper {
            y[i] += v * x[j];
            y[j] += v * x[i];
        }
        y
    }

    /// Row sums `L * 1`.
    pub fn row_sums(&self) -> Vec<f64> {
        self.mul_vec(&vec![1.0; self.dim()])
    }

    pub fn scaled(&self, s: f64) -> Self {
        SparseSymMatrix {
            diag: self.diag.iter().map(|d| d * s).collect(),
            upper: self.upper.iter().map(|&(i, j, v)| (i, j, v * s)).collect(),
        }
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let n = self.dim();
        let mut m = Mat::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for &(i, j, v) in &self.upper {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }

    /// Writes `i j value` lines for the diagonal and upper triangle.
    pub fn write_triplets<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "i j value")?;
        let mut row = 0;
        let mut entries = self.upper.iter().peekable();
        while row < self.dim() {
            writeln!(w, "{row} {row} {}", self.diag[row])?;
            while let Some(&&(i, j, v)) = entries.peek() {
                if i != row {
                    break;
                }
                writeln!(w, "{i} {j} {v}")?;
                entries.next();
            }
            row += 1;
        }
        Ok(())
    }
}

/// General (possibly asymmetric) sparse matrix as sorted `(i, j, value)`
/// triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    pub fn from_triplets(n: usize, mut entries: Vec<(usize, usize, f64)>) -> Self {
        entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (i, j, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        SparseMatrix { n, entries: merged }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries
            .binary_search_by_key(&(i, j), |&(a, b, _)| (a, b))
            .map(|k| self.entries[k].2)
            .unwrap_or(0.0)
    }

    pub fn transpose(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.n,
            self.entries.iter().map(|&(i, j, v)| (j, i, v)).collect(),
        )
    }

    /// Largest `|L_ij - L_ji|`.
    pub fn asymmetry(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| (v - self.get(j, i)).abs())
            .fold(0.0, f64::max)
    }

    /// `(L + L^T) / 2`.
    pub fn symmetric_part(&self) -> SparseSymMatrix {
        let mut diag = vec![0.0; self.n];
        let mut upper = Vec::new();
        for &(i, j, v) in &self.entries {
            match i.cmp(&j) {
                std::cmp::Ordering::Equal => diag[i] += v,
                std::cmp::Ordering::Less => upper.push((i, j, 0.5 * v)),
                std::cmp::Ordering::Greater => upper.push((j, i, 0.5 * v)),
            }
        }
        SparseSymMatrix::from_parts(diag, upper).expect("entries are in range")
    }

    /// Converts without averaging; fails if `L` is not symmetric within
    /// `tol` relative to the largest entry.
    pub fn to_symmetric(&self, tol: f64) -> Result<SparseSymMatrix> {
        let scale = self.entries.iter().map(|e| e.2.abs()).fold(0.0, f64::max);
        for &(i, j, v) in &self.entries {
            let diff = (v - self.get(j, i)).abs();
            if diff > tol * scale {
                return Err(Error::NotSymmetric { i, j, diff });
            }
        }
        Ok(self.symmetric_part())
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::<f64>::zeros(self.n, self.n);
        for &(i, j, v) in &self.entries {
            m[(i, j)] = v;
        }
        m
    }
}
