use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::annotations::MosTable;
use super::stats::{krocc, plcc, srocc};
use crate::{Error, Result};

/// Metric output per (object, distortion).
pub type MetricScores = HashMap<(String, String), f64>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    pub plcc: f64,
    pub srocc: f64,
    pub krocc: f64,
}

impl Correlations {
    /// Correlations between `metric` and `human`, with `metric`
    /// taken as is.
    pub fn between(metric: &[f64], human: &[f64]) -> Result<Self> {
        Ok(Correlations {
            plcc: plcc(metric, human)?,
            srocc: srocc(metric, human)?,
            krocc: krocc(metric, human)?,
        })
    }

    pub fn mean(items: &[Correlations]) -> Self {
        let n = items.len() as f64;
        Correlations {
            plcc: items.iter().map(|c| c.plcc).sum::<f64>() / n,
            srocc: items.iter().map(|c| c.srocc).sum::<f64>() / n,
            krocc: items.iter().map(|c| c.krocc).sum::<f64>() / n,
        }
    }

    pub fn get(&self, c: Coefficient) -> f64 {
        match c {
            Coefficient::Plcc => self.plcc,
            Coefficient::Srocc => self.srocc,
            Coefficient::Krocc => self.krocc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    Plcc,
    Srocc,
    Krocc,
}

impl Coefficient {
    pub const ALL: [Coefficient; 3] = [Coefficient::Plcc, Coefficient::Srocc, Coefficient::Krocc];

    pub fn name(self) -> &'static str {
        match self {
            Coefficient::Plcc => "PLCC",
            Coefficient::Srocc => "SROCC",
            Coefficient::Krocc => "KROCC",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectCorrelation {
    pub object: String,
    pub samples: usize,
    pub correlations: Correlations,
}

/// Agreement of one metric with human scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub metric: String,
    pub objects: Vec<ObjectCorrelation>,
    /// Unweighted mean over objects.
    pub overall: Correlations,
}

/// Correlates metric outputs with MOS per object.
///
/// `lower_is_better` metrics (distances) are negated first so that a
/// well-aligned metric has positive coefficients.
pub fn correlation_report(
    metric: &str,
    scores: &MetricScores,
    lower_is_better: bool,
    mos: &MosTable,
) -> Result<CorrelationReport> {
    let sign = if lower_is_better { -1.0 } else { 1.0 };
    let mut objects = Vec::new();
    for object in mos.objects() {
        let (mut m, mut h) = (Vec::new(), Vec::new());
        for row in mos.for_object(&object) {
            let key = (row.object.clone(), row.distortion.clone());
            let value = scores.get(&key).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "{metric}: no score for ({}, {})",
                    row.object, row.distortion
                ))
            })?;
            m.push(sign * value);
            h.push(row.mos);
        }
        if m.len() < 3 {
            return Err(Error::Statistic(format!(
                "object {object} has {} distortions, need at least 3",
                m.len()
            )));
        }
        let correlations = Correlations::between(&m, &h)
            .map_err(|e| Error::Statistic(format!("{metric}, object {object}: {e}")))?;
        objects.push(ObjectCorrelation {
            object,
            samples: m.len(),
            correlations,
        });
    }
    if objects.is_empty() {
        return Err(Error::Statistic("empty MOS table".into()));
    }
    let overall = Correlations::mean(&objects.iter().map(|o| o.correlations).collect::<Vec<_>>());
    Ok(CorrelationReport {
        metric: metric.to_string(),
        objects,
        overall,
    })
}

/// Writes one block per coefficient: a row per metric, a column per
/// object, then `overall`.
///
/// ```text
/// coefficient,metric,o1,o2,overall
/// PLCC,saucd,0.5,0.7,0.6
/// ```
pub fn write_table_csv(reports: &[CorrelationReport], writer: impl Write) -> Result<()> {
    let Some(first) = reports.first() else {
        return Err(Error::InvalidArgument("no reports to write".into()));
    };
    let objects: Vec<&str> = first.objects.iter().map(|o| o.object.as_str()).collect();
    for r in reports {
        let these: Vec<&str> = r.objects.iter().map(|o| o.object.as_str()).collect();
        if these != objects {
            return Err(Error::InvalidArgument(format!(
                "{} covers different objects than {}",
                r.metric, first.metric
            )));
        }
    }
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["coefficient", "metric"];
    header.extend(&objects);
    header.push("overall");
    w.write_record(&header)?;
    for c in Coefficient::ALL {
        for r in reports {
            let mut row = vec![c.name().to_string(), r.metric.clone()];
            row.extend(r.objects.iter().map(|o| format!("{:.6}", o.correlations.get(c))));
            row.push(format!("{:.6}", r.overall.get(c)));
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}
