//! Spectrum AUC difference between two meshes, plain and human-weighted.
//!
//! Both spectra are read as piecewise-linear curves `F(lambda)` extended
//! by their endpoint values. The metric is the area between the curves,
//! computed exactly on the merged frequency grid: on every interval
//! between consecutive merged frequencies both curves are linear, so the
//! difference `H` is linear and the area of `|H|` is a trapezoid or, when
//! `H` changes sign, two triangles.

mod weights;

use serde::{Deserialize, Serialize};

pub use weights::{interp_weight, knot_coefficients, SpectrumWeights, KNOT_SPAN, NUM_KNOTS};

use crate::laplacian::LaplacianKind;
use crate::mesh::Mesh;
use crate::spectral::{compute_spectrum, Spectrum};
use crate::{Error, Result};

/// Which spectrum curve is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DifferenceMode {
    /// `|F_test - F_gt|`.
    #[default]
    Amplitude,
    /// `|F_test^2 - F_gt^2|`, kept for ablations.
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricOptions {
    pub prune: f64,
    pub normalize: bool,
    pub laplacian: LaplacianKind,
    #[serde(default)]
    pub mode: DifferenceMode,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            prune: 0.001,
            normalize: true,
            laplacian: LaplacianKind::Revised,
            mode: DifferenceMode::Amplitude,
        }
    }
}

impl MetricOptions {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.prune) {
            return Err(Error::InvalidArgument(format!(
                "prune portion {} outside [0, 1)",
                self.prune
            )));
        }
        Ok(())
    }
}

/// Output of a single comparison.
#[derive(Debug, Clone, Serialize)]
pub struct MetricResult {
    pub test: String,
    pub gt: String,
    pub saucd: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted_saucd: Option<f64>,
    pub options: MetricOptions,
}

/// Sorted multiset union of both frequency sets.
pub fn merge_frequencies(a: &Spectrum, b: &Spectrum) -> Vec<f64> {
    let (x, y) = (a.freqs(), b.freqs());
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        if x[i] <= y[j] {
            out.push(x[i]);
            i += 1;
        } else {
            out.push(y[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
    out
}

/// Amplitude at `lambda`: linear between stored frequencies, clamped to
/// the endpoint values outside the support. At a repeated frequency the
/// last stored value is returned.
pub fn interp_amplitude(spectrum: &Spectrum, lambda: f64) -> f64 {
    Curve::new(spectrum.freqs(), spectrum.amps()).right_value(lambda)
}

/// Area of `|H|` over an interval of width `dl` where `H` is linear from
/// `h_prev` to `h_cur`.
pub fn segment_area(h_prev: f64, h_cur: f64, dl: f64) -> f64 {
    if h_prev * h_cur >= 0.0 {
        0.5 * (h_prev + h_cur).abs() * dl
    } else {
        (h_prev * h_prev + h_cur * h_cur) / (2.0 * (h_prev.abs() + h_cur.abs())) * dl
    }
}

struct Curve<'a> {
    x: &'a [f64],
    y: &'a [f64],
}

impl<'a> Curve<'a> {
    fn new(x: &'a [f64], y: &'a [f64]) -> Self {
        debug_assert!(!x.is_empty() && x.len() == y.len());
        Curve { x, y }
    }

    /// Index of the first stored frequency greater than `lambda`.
    fn upper(&self, lambda: f64) -> usize {
        self.x.partition_point(|&v| v <= lambda)
    }

    /// Value on the linear piece `[x[q-1], x[q]]` (or the clamped tails)
    /// at `lambda`, where `q = upper(left end of the piece)`.
    fn value_on_piece(&self, q: usize, lambda: f64) -> f64 {
        if q == 0 {
            return self.y[0];
        }
        if q == self.x.len() {
            return self.y[q - 1];
        }
        let (x0, x1, y0, y1) = (self.x[q - 1], self.x[q], self.y[q - 1], self.y[q]);
        if lambda == x0 {
            y0
        } else if lambda == x1 {
            y1
        } else {
            ((x1 - lambda) * y0 + (lambda - x0) * y1) / (x1 - x0)
        }
    }

    fn right_value(&self, lambda: f64) -> f64 {
        self.value_on_piece(self.upper(lambda), lambda)
    }
}

/// Calls `f(lambda_hi, area)` for every interval of positive width of the
/// merged grid. Each curve is evaluated on the linear piece covering the
/// interval, so repeated frequencies (vertical jumps) are integrated
/// exactly.
fn for_each_segment(
    (fa, aa): (&[f64], &[f64]),
    (fb, ab): (&[f64], &[f64]),
    mut f: impl FnMut(f64, f64),
) {
    let (ca, cb) = (Curve::new(fa, aa), Curve::new(fb, ab));
    let mut merged = Vec::with_capacity(fa.len() + fb.len());
    merged.extend_from_slice(fa);
    merged.extend_from_slice(fb);
    merged.sort_by(f64::total_cmp);
    let (mut qa, mut qb) = (0, 0);
    for w in merged.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(hi > lo) {
            continue;
        }
        while qa < fa.len() && fa[qa] <= lo {
            qa += 1;
        }
        while qb < fb.len() && fb[qb] <= lo {
            qb += 1;
        }
        let h_lo = ca.value_on_piece(qa, lo) - cb.value_on_piece(qb, lo);
        let h_hi = ca.value_on_piece(qa, hi) - cb.value_on_piece(qb, hi);
        f(hi, segment_area(h_lo, h_hi, hi - lo));
    }
}

fn compared_values(s: &Spectrum, mode: DifferenceMode) -> std::borrow::Cow<'_, [f64]> {
    match mode {
        DifferenceMode::Amplitude => s.amps().into(),
        DifferenceMode::Energy => s.amps().iter().map(|a| a * a).collect::<Vec<_>>().into(),
    }
}

fn check_nonempty(a: &Spectrum, b: &Spectrum) -> Result<()> {
    for s in [a, b] {
        if s.is_empty() {
            return Err(Error::SpectrumTooShort {
                needed: 1,
                actual: 0,
            });
        }
    }
    Ok(())
}

/// Area between two prepared spectra.
pub fn spectrum_distance(test: &Spectrum, gt: &Spectrum, mode: DifferenceMode) -> Result<f64> {
    check_nonempty(test, gt)?;
    let (vt, vg) = (compared_values(test, mode), compared_values(gt, mode));
    let mut d = 0.0;
    for_each_segment((test.freqs(), &vt), (gt.freqs(), &vg), |_, s| d += s);
    Ok(d)
}

/// Weighted area between two prepared spectra; the segment ending at
/// `lambda_i` is weighted by `w(lambda_i)`.
pub fn weighted_spectrum_distance(
    test: &Spectrum,
    gt: &Spectrum,
    weights: &SpectrumWeights,
    mode: DifferenceMode,
) -> Result<f64> {
    check_nonempty(test, gt)?;
    let (vt, vg) = (compared_values(test, mode), compared_values(gt, mode));
    let mut d = 0.0;
    for_each_segment((test.freqs(), &vt), (gt.freqs(), &vg), |hi, s| {
        d += weights.at(hi) * s
    });
    Ok(d)
}

/// Per-knot decomposition `b` with `weighted distance = sum_k w_k b_k`.
pub fn weight_decomposition(
    test: &Spectrum,
    gt: &Spectrum,
    mode: DifferenceMode,
) -> Result<[f64; NUM_KNOTS]> {
    check_nonempty(test, gt)?;
    let (vt, vg) = (compared_values(test, mode), compared_values(gt, mode));
    let mut b = [0.0; NUM_KNOTS];
    for_each_segment((test.freqs(), &vt), (gt.freqs(), &vg), |hi, s| {
        for (k, c) in knot_coefficients(hi) {
            b[k] += c * s;
        }
    });
    Ok(b)
}

/// Spectrum as the metric sees it: centered, eigendecomposed, pruned and
/// (optionally) AUC-normalized.
pub fn prepare_spectrum(mesh: &Mesh, options: &MetricOptions) -> Result<Spectrum> {
    options.validate()?;
    let raw = compute_spectrum(mesh, options.laplacian)?;
    let pruned = raw.prune_noise(options.prune)?;
    if options.normalize {
        pruned.auc_normalize()
    } else {
        Ok(pruned)
    }
}

fn prepare_pair(test: &Mesh, gt: &Mesh, options: &MetricOptions) -> Result<(Spectrum, Spectrum)> {
    let (a, b) = rayon::join(
        || prepare_spectrum(test, options),
        || prepare_spectrum(gt, options),
    );
    Ok((a?, b?))
}

/// SAUCD between a test mesh and a ground-truth mesh.
pub fn saucd(test: &Mesh, gt: &Mesh, options: &MetricOptions) -> Result<f64> {
    let (a, b) = prepare_pair(test, gt, options)?;
    spectrum_distance(&a, &b, options.mode)
}

/// Human-adjusted SAUCD.
pub fn weighted_saucd(
    test: &Mesh,
    gt: &Mesh,
    weights: &SpectrumWeights,
    options: &MetricOptions,
) -> Result<f64> {
    let (a, b) = prepare_pair(test, gt, options)?;
    weighted_spectrum_distance(&a, &b, weights, options.mode)
}

/// Both distances from a single pair of eigensolves.
pub fn compare(
    test: &Mesh,
    gt: &Mesh,
    weights: Option<&SpectrumWeights>,
    options: &MetricOptions,
) -> Result<(f64, Option<f64>)> {
    let (a, b) = prepare_pair(test, gt, options)?;
    let d = spectrum_distance(&a, &b, options.mode)?;
    let w = weights
        .map(|w| weighted_spectrum_distance(&a, &b, w, options.mode))
        .transpose()?;
    Ok((d, w))
}
