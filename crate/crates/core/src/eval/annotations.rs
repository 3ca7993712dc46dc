use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::{confidence_interval, iqr_filter, mean};
use crate::{Error, Result};

pub const MAX_SCORE: u8 = 6;

/// One human score for one rendering of one distorted mesh.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub object: String,
    pub distortion: String,
    pub material: String,
    pub subject: String,
    pub score: u8,
}

/// Validated collection of human scores.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Annotation>", into = "Vec<Annotation>")]
pub struct AnnotationSet {
    records: Vec<Annotation>,
}

impl TryFrom<Vec<Annotation>> for AnnotationSet {
    type Error = Error;

    fn try_from(records: Vec<Annotation>) -> Result<Self> {
        AnnotationSet::new(records)
    }
}

impl From<AnnotationSet> for Vec<Annotation> {
    fn from(set: AnnotationSet) -> Self {
        set.records
    }
}

impl AnnotationSet {
    pub fn new(records: Vec<Annotation>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (i, r) in records.iter().enumerate() {
            if r.score > MAX_SCORE {
                return Err(Error::InvalidArgument(format!(
                    "record {i}: score {} outside 0..={MAX_SCORE}",
                    r.score
                )));
            }
            if !seen.insert((&r.object, &r.distortion, &r.material, &r.subject)) {
                return Err(Error::InvalidArgument(format!(
                    "record {i}: duplicate ({}, {}, {}, {})",
                    r.object, r.distortion, r.material, r.subject
                )));
            }
        }
        Ok(AnnotationSet { records })
    }

    pub fn records(&self) -> &[Annotation] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn from_csv_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let records = rdr.deserialize().collect::<std::result::Result<Vec<Annotation>, _>>()?;
        Self::new(records)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads CSV, or JSON when the extension is `.json`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            Self::from_json(&text)
        } else {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            Self::from_csv_reader(file)
        }
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records).expect("plain records")
    }

    /// Object ids in order of first appearance.
    pub fn objects(&self) -> Vec<String> {
        unique(self.records.iter().map(|r| &r.object))
    }

    /// Distortion ids of `object` in order of first appearance.
    pub fn distortions(&self, object: &str) -> Vec<String> {
        unique(
            self.records
                .iter()
                .filter(|r| r.object == object)
                .map(|r| &r.distortion),
        )
    }

    pub fn scores(&self, object: &str, distortion: &str) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.object == object && r.distortion == distortion)
            .map(|r| r.score as f64)
            .collect()
    }

    /// IQR filtering per material cell, cell means, then the mean over
    /// cells.
    pub fn mean_opinion_score(&self, object: &str, distortion: &str) -> Result<f64> {
        let mut cells: Vec<(&str, Vec<f64>)> = Vec::new();
        for r in &self.records {
            if r.object != object || r.distortion != distortion {
                continue;
            }
            match cells.iter_mut().find(|(m, _)| *m == r.material) {
                Some((_, v)) => v.push(r.score as f64),
                None => cells.push((&r.material, vec![r.score as f64])),
            }
        }
        if cells.is_empty() {
            return Err(Error::Statistic(format!(
                "no scores for ({object}, {distortion})"
            )));
        }
        let means = cells
            .iter()
            .map(|(_, s)| mos_of_scores(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(mean(&means))
    }

    pub fn mos_table(&self) -> Result<MosTable> {
        let mut rows = Vec::new();
        for object in self.objects() {
            for distortion in self.distortions(&object) {
                let mos = self.mean_opinion_score(&object, &distortion)?;
                let raw = self.scores(&object, &distortion);
                let ci = confidence_interval(&raw).ok();
                rows.push(MosRow {
                    object: object.clone(),
                    distortion,
                    mos,
                    count: raw.len(),
                    ci,
                });
            }
        }
        Ok(MosTable { rows })
    }
}

fn unique<'a>(items: impl Iterator<Item = &'a String>) -> Vec<String> {
    let mut seen = HashSet::new();
    items
        .filter(|s| seen.insert(s.as_str()))
        .cloned()
        .collect()
}

/// Mean of the scores retained by [`iqr_filter`].
pub fn mos_of_scores(scores: &[f64]) -> Result<f64> {
    let kept = iqr_filter(scores);
    if kept.is_empty() {
        return Err(Error::Statistic("no scores left after filtering".into()));
    }
    Ok(mean(&kept))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MosRow {
    pub object: String,
    pub distortion: String,
    pub mos: f64,
    /// Raw score count before filtering.
    pub count: usize,
    /// 95% confidence half-width of the raw scores.
    pub ci: Option<f64>,
}

/// Mean opinion scores per (object, distortion).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MosTable {
    rows: Vec<MosRow>,
}

impl MosTable {
    pub fn from_rows(rows: Vec<MosRow>) -> Self {
        MosTable { rows }
    }

    pub fn rows(&self) -> &[MosRow] {
        &self.rows
    }

    pub fn objects(&self) -> Vec<String> {
        unique(self.rows.iter().map(|r| &r.object))
    }

    pub fn for_object<'a>(&'a self, object: &'a str) -> impl Iterator<Item = &'a MosRow> + 'a {
        self.rows.iter().filter(move |r| r.object == object)
    }

    pub fn lookup(&self) -> HashMap<(&str, &str), f64> {
        self.rows
            .iter()
            .map(|r| ((r.object.as_str(), r.distortion.as_str()), r.mos))
            .collect()
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["object", "distortion", "mos", "count", "ci"])?;
        for r in &self.rows {
            w.write_record([
                r.object.clone(),
                r.distortion.clone(),
                r.mos.to_string(),
                r.count.to_string(),
                r.ci.map(|c| c.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}
