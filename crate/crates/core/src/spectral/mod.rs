//! Mesh Fourier analysis: spectra, band-pass reconstruction, pruning and
//! AUC normalization.

pub mod band;
mod eigen;

use std::io::Write;

pub use eigen::{eigendecompose, project_onto_eigenbasis, FourierBasis};

use crate::laplacian::{build_laplacian, LaplacianKind};
use crate::mesh::{validate, vec3, Mesh};
use crate::{Error, Result};

/// Relative tolerance for clamping round-off negative eigenvalues.
pub const CLAMP_TOLERANCE: f64 = 1e-10;

/// Eigenvalues closer than this (relative to the largest) form one
/// eigenspace when computing amplitudes.
pub const CLUSTER_TOLERANCE: f64 = 1e-7;

/// Frequencies with their amplitudes, ascending in frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    freqs: Vec<f64>,
    amps: Vec<f64>,
    coeffs: Option<Vec<[f64; 3]>>,
    normalized: bool,
}

impl Spectrum {
    pub fn new(freqs: Vec<f64>, amps: Vec<f64>) -> Result<Self> {
        if freqs.len() != amps.len() {
            return Err(Error::DimensionMismatch {
                expected: freqs.len(),
                actual: amps.len(),
            });
        }
        if freqs.iter().chain(&amps).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "spectrum values must be finite".into(),
            ));
        }
        if let Some(&x) = freqs.iter().find(|&&x| x < 0.0) {
            return Err(Error::NegativeFrequency {
                value: x,
                tolerance: 0.0,
            });
        }
        if freqs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(
                "frequencies must be ascending".into(),
            ));
        }
        if amps.iter().any(|&a| a < 0.0) {
            return Err(Error::InvalidArgument(
                "amplitudes must be non-negative".into(),
            ));
        }
        Ok(Spectrum {
            freqs,
            amps,
            coeffs: None,
            normalized: false,
        })
    }

    /// Builds a spectrum from ascending eigenvalues and the projected
    /// signal `G = U^T v`.
    ///
    /// Amplitudes are the row norms of `G`, except that inside a cluster of
    /// (numerically) repeated eigenvalues every entry gets the RMS row norm
    /// of the cluster. Row norms inside a degenerate eigenspace depend on
    /// the arbitrary choice of basis; the cluster energy does not, so the
    /// spectrum stays invariant under rotations and relabelings while
    /// `sum F_i^2 = ||G||^2` still holds.
    pub fn from_projection(freqs: Vec<f64>, coeffs: Vec<[f64; 3]>) -> Result<Self> {
        if freqs.len() != coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: freqs.len(),
                actual: coeffs.len(),
            });
        }
        let amps = cluster_amplitudes(&freqs, &coeffs);
        let mut s = Spectrum::new(freqs, amps)?;
        s.coeffs = Some(coeffs);
        Ok(s)
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn amps(&self) -> &[f64] {
        &self.amps
    }

    pub fn coeffs(&self) -> Option<&[[f64; 3]]> {
        self.coeffs.as_deref()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn max_freq(&self) -> Option<f64> {
        self.freqs.last().copied()
    }

    /// Drops the `ceil(portion * len)` highest-frequency entries.
    pub fn prune_noise(&self, portion: f64) -> Result<Spectrum> {
        prune_noise(self, portion)
    }

    pub fn auc(&self) -> Result<f64> {
        auc(self)
    }

    pub fn auc_normalize(&self) -> Result<Spectrum> {
        auc_normalize(self)
    }

    /// `lambda,amplitude` CSV.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["lambda", "amplitude"])?;
        for (l, a) in self.freqs.iter().zip(&self.amps) {
            out.write_record([l.to_string(), a.to_string()])?;
        }
        out.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

fn cluster_amplitudes(freqs: &[f64], coeffs: &[[f64; 3]]) -> Vec<f64> {
    let scale = freqs.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tol = CLUSTER_TOLERANCE * scale;
    let mut amps = Vec::with_capacity(freqs.len());
    let mut start = 0;
    while start < freqs.len() {
        let mut end = start + 1;
        while end < freqs.len() && freqs[end] - freqs[end - 1] <= tol {
            end += 1;
        }
        if end - start == 1 {
            amps.push(vec3::norm(coeffs[start]));
        } else {
            let energy: f64 = coeffs[start..end].iter().map(|&g| vec3::norm2(g)).sum();
            let rms = (energy / (end - start) as f64).sqrt();
            amps.extend(std::iter::repeat(rms).take(end - start));
        }
        start = end;
    }
    amps
}

/// Spectrum of `mesh` in a precomputed basis; the mesh should already be
/// centered.
pub fn mesh_spectrum(mesh: &Mesh, basis: &FourierBasis) -> Result<Spectrum> {
    let g = basis.project(mesh.vertices())?;
    Spectrum::from_projection(basis.eigenvalues().to_vec(), g)
}

fn check_spectral_ready(mesh: &Mesh) -> Result<()> {
    let report = validate(mesh);
    if !report.spectral_ready {
        return Err(Error::InvalidMesh(format!(
            "mesh is not spectral-ready ({} vertices, {} degenerate faces, {} non-manifold edges)",
            report.vertices, report.degenerate_faces, report.non_manifold_edges
        )));
    }
    Ok(())
}

/// Centers the mesh and returns its Fourier basis under `kind`, with
/// round-off negative eigenvalues clamped to zero.
pub fn fourier_basis(mesh: &Mesh, kind: LaplacianKind) -> Result<FourierBasis> {
    check_spectral_ready(mesh)?;
    eigendecompose(&build_laplacian(mesh, kind)?)?.clamp_nonnegative(CLAMP_TOLERANCE)
}

/// Raw (unpruned, unnormalized) spectrum of the centered mesh.
///
/// Uses [`project_onto_eigenbasis`], which never forms the eigenvectors.
pub fn compute_spectrum(mesh: &Mesh, kind: LaplacianKind) -> Result<Spectrum> {
    check_spectral_ready(mesh)?;
    let centered = mesh.centered();
    let l = build_laplacian(&centered, kind)?;
    let (mut freqs, coeffs) = project_onto_eigenbasis(&l, centered.vertices())?;
    eigen::clamp_nonnegative(&mut freqs, CLAMP_TOLERANCE)?;
    Spectrum::from_projection(freqs, coeffs)
}

/// Keeps only the Fourier components with `lo <= lambda <= hi`.
///
/// Filtering acts on the centered mesh and the centroid is added back
/// afterwards, so translation survives any band.
pub fn bandpass_reconstruct(mesh: &Mesh, basis: &FourierBasis, lo: f64, hi: f64) -> Result<Mesh> {
    if !(lo <= hi) {
        return Err(Error::InvalidArgument(format!(
            "band [{lo}, {hi}] is empty"
        )));
    }
    let centroid = mesh.centroid();
    let centered = mesh.centered();
    let mut g = basis.project(centered.vertices())?;
    let mut kept = 0;
    for (row, &l) in g.iter_mut().zip(basis.eigenvalues()) {
        if l >= lo && l <= hi {
            kept += 1;
        } else {
            *row = [0.0; 3];
        }
    }
    if kept == 0 {
        return Err(Error::EmptyBand { lo, hi });
    }
    let v = basis.synthesize(&g)?;
    mesh.with_vertices(v.into_iter().map(|p| vec3::add(p, centroid)).collect())
}

/// Drops the `ceil(portion * len)` highest-frequency entries.
pub fn prune_noise(spectrum: &Spectrum, portion: f64) -> Result<Spectrum> {
    if !(0.0..1.0).contains(&portion) {
        return Err(Error::InvalidArgument(format!(
            "prune portion {portion} outside [0, 1)"
        )));
    }
    let n = spectrum.len();
    let product = portion * n as f64;
    // guard against 0.001 * 1000 = 1.0000000000000002
    let rounded = product.round();
    let removed = if (product - rounded).abs() <= 1e-9 * product.max(1.0) {
        rounded as usize
    } else {
        product.ceil() as usize
    };
    if removed >= n {
        return Err(Error::SpectrumTooShort {
            needed: removed + 1,
            actual: n,
        });
    }
    let keep = n - removed;
    Ok(Spectrum {
        freqs: spectrum.freqs[..keep].to_vec(),
        amps: spectrum.amps[..keep].to_vec(),
        coeffs: spectrum.coeffs.as_ref().map(|g| g[..keep].to_vec()),
        normalized: false,
    })
}

/// Trapezoid area under the piecewise-linear amplitude curve.
pub fn auc(spectrum: &Spectrum) -> Result<f64> {
    if spectrum.len() < 2 {
        return Err(Error::SpectrumTooShort {
            needed: 2,
            actual: spectrum.len(),
        });
    }
    Ok(spectrum
        .freqs
        .windows(2)
        .zip(spectrum.amps.windows(2))
        .map(|(l, a)| 0.5 * (a[0] + a[1]) * (l[1] - l[0]))
        .sum())
}

/// Rescales to unit AUC with `lambda -> lambda / A^2`, `F -> A F`, the
/// transform that cancels a uniform scaling of the mesh.
pub fn auc_normalize(spectrum: &Spectrum) -> Result<Spectrum> {
    let a = auc(spectrum)?;
    if !(a > 0.0) {
        return Err(Error::ZeroAuc);
    }
    let inv = 1.0 / (a * a);
    Ok(Spectrum {
        freqs: spectrum.freqs.iter().map(|l| l * inv).collect(),
        amps: spectrum.amps.iter().map(|f| f * a).collect(),
        coeffs: spectrum
            .coeffs
            .as_ref()
            .map(|g| g.iter().map(|&r| vec3::scale(r, a)).collect()),
        normalized: true,
    })
}
