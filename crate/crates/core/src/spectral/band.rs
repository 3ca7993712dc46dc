//! Banded route to the tridiagonal form of a sparse symmetric matrix.
//!
//! A reverse Cuthill-McKee ordering gives mesh Laplacians a narrow band;
//! Givens rotations with bulge chasing then reduce the band to tridiagonal
//! form in `O(n^2 b)` operations, applying every rotation to the signal as
//! they go.

use std::collections::VecDeque;

use crate::laplacian::SparseSymMatrix;

/// Reverse Cuthill-McKee ordering: `order[k]` is the original index placed
/// at position `k`.
pub fn reverse_cuthill_mckee(l: &SparseSymMatrix) -> Vec<usize> {
    let n = l.dim();
    let mut adj = vec![Vec::new(); n];
    for &(i, j, _) in l.off_diagonal() {
        adj[i].push(j);
        adj[j].push(i);
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    for nb in &mut adj {
        nb.sort_by_key(|&v| (degree[v], v));
    }

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (degree[v], v));
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(seed, &adj, &degree);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order.reverse();
    order
}

/// BFS levels from `root`, as (eccentricity, last level).
fn bfs_levels(root: usize, adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut reached = Vec::new();
    while let Some(v) = queue.pop_front() {
        reached.push(v);
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let ecc = reached.iter().map(|&v| dist[v]).max().unwrap_or(0);
    (
        ecc,
        reached.into_iter().filter(|&v| dist[v] == ecc).collect(),
    )
}

fn pseudo_peripheral(seed: usize, adj: &[Vec<usize>], degree: &[usize]) -> usize {
    let mut root = seed;
    let (mut ecc, mut last) = bfs_levels(root, adj);
    loop {
        let candidate = *last
            .iter()
            .min_by_key(|&&v| (degree[v], v))
            .expect("root is reached");
        let (e, l) = bfs_levels(candidate, adj);
        if e <= ecc {
            return root;
        }
        root = candidate;
        ecc = e;
        last = l;
    }
}

/// Half-bandwidth of `l` after applying `order`.
pub fn bandwidth(l: &SparseSymMatrix, order: &[usize]) -> usize {
    let mut pos = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    l.off_diagonal()
        .iter()
        .map(|&(i, j, _)| pos[i].abs_diff(pos[j]))
        .max()
        .unwrap_or(0)
}

/// Lower triangle of a symmetric band matrix with one spare diagonal for
/// the bulge: entry `(i, i - d)` lives at `i * stride + d`, `d <= width`.
struct Band {
    n: usize,
    width: usize,
    stride: usize,
    data: Vec<f64>,
}

impl Band {
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.stride + (i - j)]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.stride + (i - j)]
    }

    /// Similarity transform with the rotation acting on rows/columns
    /// `p, p + 1`: `row_p <- c row_p + s row_q`, `row_q <- c row_q - s row_p`.
    fn rotate(&mut self, p: usize, c: f64, s: f64) {
        let q = p + 1;
        let w = self.width;
        for m in p.saturating_sub(w)..p {
            let x = self.get(p, m);
            let y = if q - m <= w { self.get(q, m) } else { 0.0 };
            *self.at(p, m) = c * x + s * y;
            if q - m <= w {
                *self.at(q, m) = c * y - s * x;
            }
        }
        let (app, aqq, apq) = (self.get(p, p), self.get(q, q), self.get(q, p));
        *self.at(p, p) = c * c * app + 2.0 * c * s * apq + s * s * aqq;
        *self.at(q, q) = s * s * app - 2.0 * c * s * apq + c * c * aqq;
        *self.at(q, p) = c * s * (aqq - app) + (c * c - s * s) * apq;
        for m in q + 1..self.n.min(p + w + 1) {
            let x = self.get(m, p);
            let y = self.get(m, q);
            *self.at(m, p) = c * x + s * y;
            *self.at(m, q) = c * y - s * x;
        }
    }
}

fn rotate_rows(rows: &mut [[f64; 3]], p: usize, c: f64, s: f64) {
    let (lo, hi) = rows.split_at_mut(p + 1);
    let (x, y) = (&mut lo[p], &mut hi[0]);
    for k in 0..3 {
        let (a, b) = (x[k], y[k]);
        x[k] = c * a + s * b;
        y[k] = c * b - s * a;
    }
}

/// Zeroes band entry `(i, j)` against `(i - 1, j)`, rotating rows
/// `i - 1, i`.
fn annihilate(band: &mut Band, rows: &mut [[f64; 3]], i: usize, j: usize) {
    let y = band.get(i, j);
    if y == 0.0 {
        return;
    }
    let x = band.get(i - 1, j);
    let r = x.hypot(y);
    let (c, s) = (x / r, y / r);
    band.rotate(i - 1, c, s);
    *band.at(i, j) = 0.0;
    rotate_rows(rows, i - 1, c, s);
}

/// Reduces the matrix (already permuted to half-bandwidth `b`) to
/// tridiagonal `(diag, sub)`, overwriting `rows` with `Q^T rows`.
pub(crate) fn band_tridiagonalize(
    l: &SparseSymMatrix,
    order: &[usize],
    b: usize,
    rows: &mut [[f64; 3]],
) -> (Vec<f64>, Vec<f64>) {
    let n = l.dim();
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let width = b + 1;
    let stride = width + 1;
    let mut band = Band {
        n,
        width,
        stride,
        data: vec![0.0; n * stride],
    };
    for (i, &d) in l.diagonal().iter().enumerate() {
        *band.at(pos[i], pos[i]) = d;
    }
    for &(i, j, v) in l.off_diagonal() {
        let (a, c) = (pos[i].max(pos[j]), pos[i].min(pos[j]));
        *band.at(a, c) += v;
    }

    if b > 1 {
        for j in 0..n.saturating_sub(2) {
            for k in (j + 2..=(j + b).min(n - 1)).rev() {
                annihilate(&mut band, rows, k, j);
                // chase the bulge created at (k + b, k - 1)
                let (mut r, mut c) = (k + b, k - 1);
                while r < n {
                    annihilate(&mut band, rows, r, c);
                    c = r - 1;
                    r += b;
                }
            }
        }
    }
    let diag = (0..n).map(|i| band.get(i, i)).collect();
    let sub = (0..n)
        .map(|i| if i + 1 < n { band.get(i + 1, i) } else { 0.0 })
        .collect();
    (diag, sub)
}
