use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Number of weight knots.
pub const NUM_KNOTS: usize = 20;
/// Frequency of the last knot; knots are uniform on `[0, KNOT_SPAN]`.
pub const KNOT_SPAN: f64 = 0.05;

/// Per-frequency sensitivity weights, piecewise linear between 20 uniform
/// knots and constant beyond the last one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SpectrumWeights {
    values: [f64; NUM_KNOTS],
}

impl SpectrumWeights {
    pub fn new(values: &[f64]) -> Result<Self> {
        if values.len() != NUM_KNOTS {
            return Err(Error::DimensionMismatch {
                expected: NUM_KNOTS,
                actual: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "weights must be finite and non-negative, got {bad}"
            )));
        }
        let mut w = [0.0; NUM_KNOTS];
        w.copy_from_slice(values);
        Ok(SpectrumWeights { values: w })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(&[c; NUM_KNOTS])
    }

    pub fn ones() -> Self {
        SpectrumWeights {
            values: [1.0; NUM_KNOTS],
        }
    }

    pub fn values(&self) -> &[f64; NUM_KNOTS] {
        &self.values
    }

    pub fn knot_frequency(k: usize) -> f64 {
        KNOT_SPAN * k as f64 / (NUM_KNOTS - 1) as f64
    }

    pub fn at(&self, lambda: f64) -> f64 {
        interp_weight(self, lambda)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        let v: Vec<f64> = self.values.iter().map(|w| w * c).collect();
        Self::new(&v)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.values.to_vec()).expect("plain array")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }
}

impl TryFrom<Vec<f64>> for SpectrumWeights {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(&v)
    }
}

impl From<SpectrumWeights> for Vec<f64> {
    fn from(w: SpectrumWeights) -> Self {
        w.values.to_vec()
    }
}

/// The (at most two) knots that contribute to `w(lambda)`, with their
/// interpolation coefficients. Every weight evaluation is
/// `sum coef * w[knot]` over this list.
pub fn knot_coefficients(lambda: f64) -> [(usize, f64); 2] {
    let last = NUM_KNOTS - 1;
    if !(lambda > 0.0) {
        return [(0, 1.0), (0, 0.0)];
    }
    if lambda >= KNOT_SPAN {
        return [(last, 1.0), (last, 0.0)];
    }
    let h = KNOT_SPAN / last as f64;
    let k = ((lambda / h).floor() as usize).min(last - 1);
    let lo = SpectrumWeights::knot_frequency(k);
    let hi = SpectrumWeights::knot_frequency(k + 1);
    let t = (lambda - lo) / (hi - lo);
    [(k, 1.0 - t), (k + 1, t)]
}

/// Weight at `lambda`: linear between knots, `w_0` at zero, and the last
/// knot's value for `lambda >= 0.05`.
pub fn interp_weight(weights: &SpectrumWeights, lambda: f64) -> f64 {
    knot_coefficients(lambda)
        .iter()
        .map(|&(k, c)| c * weights.values[k])
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_examples() {
        let ones = SpectrumWeights::ones();
        for l in [0.0, 0.001, 0.0263, 0.05, 3.0] {
            assert_eq!(ones.at(l), 1.0);
        }
        let ramp: Vec<f64> = (0..NUM_KNOTS).map(|k| k as f64 / 19.0).collect();
        let ramp = SpectrumWeights::new(&ramp).unwrap();
        assert!((ramp.at(0.025) - 0.5).abs() < 1e-12);
        assert_eq!(ramp.at(0.2), 1.0);
        assert_eq!(ramp.at(0.0), 0.0);
        for k in 0..NUM_KNOTS {
            let l = SpectrumWeights::knot_frequency(k);
            assert!((ramp.at(l) - k as f64 / 19.0).abs() < 1e-12);
        }
    }

    #[test]
    fn knot_layout() {
        assert_eq!(SpectrumWeights::knot_frequency(0), 0.0);
        assert_eq!(SpectrumWeights::knot_frequency(19), 0.05);
    }

    #[test]
    fn json_round_trip() {
        let w =
            SpectrumWeights::new(&(0..20).map(|k| k as f64 * 0.25).collect::<Vec<_>>()).unwrap();
        assert_eq!(SpectrumWeights::from_json(&w.to_json()).unwrap(), w);
        assert!(SpectrumWeights::from_json("[1, 2, 3]").is_err());
        assert!(SpectrumWeights::new(&[-1.0; 20]).is_err());
    }
}
