//! Dense symmetric eigensolvers for mesh Laplacians.
//!
//! [`eigendecompose`] returns the full orthonormal eigenbasis. When only the
//! projection of a few signals onto the eigenbasis is needed,
//! [`project_onto_eigenbasis`] skips forming the eigenvectors: it reduces
//! `L = Q T Q^T` to tridiagonal form, applies `Q^T` to the signal and runs
//! implicit QL on `T`, rotating the projected signal instead of an `N x N`
//! accumulator. The eigenvector back-transformation, the dominant cost of
//! the full route, disappears.

use faer::dyn_stack::{MemBuffer, MemStack, StackReq};
use faer::linalg::{evd::tridiag, householder};
use faer::{Conj, Mat, Side};

use super::band;
use crate::laplacian::SparseSymMatrix;
use crate::{Error, Result};

/// Orthonormal eigenbasis of a symmetric Laplacian.
#[derive(Debug, Clone)]
pub struct FourierBasis {
    eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    eigenvectors: Mat<f64>,
}

impl FourierBasis {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Mat<f64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Sets eigenvalues within `tol * max|lambda|` of zero to exactly zero and
    /// fails on anything more negative.
    pub fn clamp_nonnegative(mut self, tol: f64) -> Result<Self> {
        clamp_nonnegative(&mut self.eigenvalues, tol)?;
        Ok(self)
    }

    /// `G = U^T v` for an `N x 3` signal.
    pub fn project(&self, signal: &[[f64; 3]]) -> Result<Vec<[f64; 3]>> {
        let n = self.dim();
        if signal.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: signal.len(),
            });
        }
        let v = Mat::<f64>::from_fn(n, 3, |i, j| signal[i][j]);
        let g = self.eigenvectors.transpose() * &v;
        Ok((0..n).map(|k| [g[(k, 0)], g[(k, 1)], g[(k, 2)]]).collect())
    }

    /// `v = U G` for an `N x 3` coefficient array.
    pub fn synthesize(&self, coeffs: &[[f64; 3]]) -> Result<Vec<[f64; 3]>> {
        let n = self.dim();
        if coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: coeffs.len(),
            });
        }
        let g = Mat::<f64>::from_fn(n, 3, |i, j| coeffs[i][j]);
        let v = &self.eigenvectors * &g;
        Ok((0..n).map(|k| [v[(k, 0)], v[(k, 1)], v[(k, 2)]]).collect())
    }
}

pub(crate) fn clamp_nonnegative(eigenvalues: &mut [f64], tol: f64) -> Result<()> {
    let scale = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let floor = -tol * scale;
    for x in eigenvalues.iter_mut() {
        if *x < floor {
            return Err(Error::NegativeFrequency {
                value: *x,
                tolerance: floor,
            });
        }
        if x.abs() <= tol * scale {
            *x = 0.0;
        }
    }
    Ok(())
}

/// Full eigendecomposition `L = U diag(lambda) U^T`, eigenvalues ascending.
///
/// Each eigenvector's sign is fixed so that its largest-magnitude entry
/// (first one on ties) is positive.
pub fn eigendecompose(l: &SparseSymMatrix) -> Result<FourierBasis> {
    let evd = l
        .to_dense()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::EigenNonConvergence)?;
    let n = l.dim();
    let s = evd.S().column_vector();
    let eigenvalues: Vec<f64> = (0..n).map(|k| s[k]).collect();
    let mut u = evd.U().to_owned();
    for k in 0..n {
        let mut best = 0;
        for i in 1..n {
            if u[(i, k)].abs() > u[(best, k)].abs() {
                best = i;
            }
        }
        if u[(best, k)] < 0.0 {
            for i in 0..n {
                u[(i, k)] = -u[(i, k)];
            }
        }
    }
    Ok(FourierBasis {
        eigenvalues,
        eigenvectors: u,
    })
}

/// Eigenvalues (ascending) of `l` together with the projection
/// `U^T signal`, without forming `U`.
///
/// The projected rows carry an arbitrary sign per eigenvector and, inside a
/// degenerate eigenspace, an arbitrary orthonormal mixing; row norms of
/// well-separated eigenvalues agree with [`FourierBasis::project`].
pub fn project_onto_eigenbasis(
    l: &SparseSymMatrix,
    signal: &[[f64; 3]],
) -> Result<(Vec<f64>, Vec<[f64; 3]>)> {
    let n = l.dim();
    if signal.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: signal.len(),
        });
    }
    match n {
        0 => return Ok((Vec::new(), Vec::new())),
        1 => return Ok((vec![l.diagonal()[0]], signal.to_vec())),
        _ => {}
    }

    let order = band::reverse_cuthill_mckee(l);
    let b = band::bandwidth(l, &order);
    let route = if b * BAND_ADVANTAGE < n {
        Route::Band
    } else {
        Route::Dense
    };
    project_via(l, signal, route, &order, b)
}

/// Band reduction is chosen when the half-bandwidth is below `n` divided
/// by this factor.
const BAND_ADVANTAGE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Route {
    Dense,
    Band,
}

pub(crate) fn project_via(
    l: &SparseSymMatrix,
    signal: &[[f64; 3]],
    route: Route,
    order: &[usize],
    b: usize,
) -> Result<(Vec<f64>, Vec<[f64; 3]>)> {
    let n = l.dim();
    let (mut diag, mut sub, mut coeffs) = match route {
        Route::Dense => dense_tridiagonal(l, signal),
        Route::Band => {
            let mut rows: Vec<[f64; 3]> = order.iter().map(|&v| signal[v]).collect();
            let (d, e) = band::band_tridiagonalize(l, order, b, &mut rows);
            (d, e, rows)
        }
    };
    tridiagonal_ql(&mut diag, &mut sub, &mut coeffs)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    Ok((
        order.iter().map(|&k| diag[k]).collect(),
        order.iter().map(|&k| coeffs[k]).collect(),
    ))
}

/// Householder tridiagonalization `L = Q T Q^T` with `Q^T` applied to the
/// signal.
fn dense_tridiagonal(
    l: &SparseSymMatrix,
    signal: &[[f64; 3]],
) -> (Vec<f64>, Vec<f64>, Vec<[f64; 3]>) {
    let n = l.dim();
    let par = faer::get_global_parallelism();
    let mut a = l.to_dense();
    let block = 32.min(n - 1);
    let mut h = Mat::<f64>::zeros(block, n - 1);
    let mut buf =
        MemBuffer::new(StackReq::any_of(&[
            householder::apply_block_householder_sequence_transpose_on_the_left_in_place_scratch::<
                f64,
            >(n - 1, block, 3),
            tridiag::tridiag_in_place_scratch::<f64>(n, par, Default::default()),
        ]));
    tridiag::tridiag_in_place(
        a.as_mut(),
        h.as_mut(),
        par,
        MemStack::new(&mut buf),
        Default::default(),
    );

    // Q^T v; the first row is untouched by the reflectors
    let mut w = Mat::<f64>::from_fn(n, 3, |i, j| signal[i][j]);
    householder::apply_block_householder_sequence_transpose_on_the_left_in_place_with_conj(
        a.as_ref().submatrix(1, 0, n - 1, n - 1),
        h.as_ref(),
        Conj::No,
        w.as_mut().subrows_mut(1, n - 1),
        par,
        MemStack::new(&mut buf),
    );

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    let sub: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { a[(i + 1, i)] } else { 0.0 })
        .collect();
    let coeffs: Vec<[f64; 3]> = (0..n).map(|i| [w[(i, 0)], w[(i, 1)], w[(i, 2)]]).collect();
    (diag, sub, coeffs)
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix with
/// diagonal `d` and sub-diagonal `e` (`e[i]` couples rows `i` and `i + 1`;
/// the last entry is ignored). Every plane rotation is applied to the rows
/// of `rows`, which therefore ends up as `Z^T rows` for the eigenvector
/// matrix `Z` of the tridiagonal. Eigenvalues are left unsorted in `d`.
pub(crate) fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], rows: &mut [[f64; 3]]) -> Result<()> {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    debug_assert_eq!(rows.len(), n);
    if n < 2 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let anorm = d
        .iter()
        .zip(e.iter())
        .map(|(a, b)| a.abs() + b.abs())
        .fold(0.0, f64::max);
    let eps = f64::EPSILON;
    let negligible = |e: f64, dd: f64| e.abs() <= eps * dd || e.abs() <= eps * eps * anorm;
    const MAX_SWEEPS: usize = 60;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                if negligible(e[m], d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::EigenNonConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early_exit = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early_exit = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let (lo, hi) = rows.split_at_mut(i + 1);
                let (ri, rj) = (&mut lo[i], &mut hi[0]);
                for k in 0..3 {
                    let t = rj[k];
                    rj[k] = s * ri[k] + c * t;
                    ri[k] = c * ri[k] - s * t;
                }
            }
            if early_exit {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
