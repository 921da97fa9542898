//! Partition JSON: `{"m", "tau", "provenance", "regions", "metadata"?}`.
//!
//! `tau` is a decimal string with 17 significant digits; coordinates are JSON
//! numbers written in shortest round-trip form.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::region::{GeometryError, LiftedPolygon, PixelSet, Partition, Region};
use crate::scalar::{decimal_string, Real};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed partition JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("tau {0:?} is not a decimal number")]
    Tau(String),
    #[error("region {index}: {source}")]
    Region { index: usize, source: GeometryError },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RegionDoc {
    #[serde(rename = "polygon")]
    Polygon { vertices: Vec<[f64; 2]> },
    #[serde(rename = "vstrip")]
    VStrip { lo: f64, hi: f64 },
    #[serde(rename = "hstrip")]
    HStrip { lo: f64, hi: f64 },
    #[serde(rename = "pixels")]
    Pixels { s: u32, cells: Vec<[u32; 2]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub m: usize,
    pub tau: String,
    pub provenance: String,
    pub regions: Vec<RegionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

impl PartitionDoc {
    pub fn from_partition<T: Real>(p: &Partition<T>) -> Self {
        let regions = p
            .regions
            .iter()
            .map(|r| match r {
                Region::Polygon(poly) => RegionDoc::Polygon {
                    vertices: poly.vertices().iter().map(|v| [v[0].as_f64(), v[1].as_f64()]).collect(),
                },
                Region::VerticalStrip { lo, hi } => RegionDoc::VStrip { lo: lo.as_f64(), hi: hi.as_f64() },
                Region::HorizontalStrip { lo, hi } => RegionDoc::HStrip { lo: lo.as_f64(), hi: hi.as_f64() },
                Region::Pixels(px) => RegionDoc::Pixels {
                    s: px.grid_size(),
                    cells: px.cells().iter().map(|&(i, j)| [i, j]).collect(),
                },
            })
            .collect();
        Self {
            m: p.m,
            tau: decimal_string(p.tau.as_f64()),
            provenance: p.provenance.clone(),
            regions,
            metadata: None,
        }
    }

    pub fn to_partition<T: Real>(&self) -> Result<Partition<T>, JsonError> {
        let tau: f64 = self.tau.trim().parse().map_err(|_| JsonError::Tau(self.tau.clone()))?;
        let lit = T::lit;
        let mut regions = Vec::with_capacity(self.regions.len());
        for (index, r) in self.regions.iter().enumerate() {
            let region = match r {
                RegionDoc::Polygon { vertices } => {
                    LiftedPolygon::new_any_orientation(vertices.iter().map(|v| [lit(v[0]), lit(v[1])]).collect())
                        .map(Region::Polygon)
                }
                RegionDoc::VStrip { lo, hi } => Region::vertical_strip(lit(*lo), lit(*hi)),
                RegionDoc::HStrip { lo, hi } => Region::horizontal_strip(lit(*lo), lit(*hi)),
                RegionDoc::Pixels { s, cells } => {
                    PixelSet::new(*s, cells.iter().map(|c| (c[0], c[1])).collect()).map(Region::Pixels)
                }
            }
            .map_err(|source| JsonError::Region { index, source })?;
            regions.push(region);
        }
        let mut p = Partition::new(regions, lit(tau), self.provenance.clone());
        p.m = self.m;
        Ok(p)
    }
}

pub fn partition_to_json<T: Real>(p: &Partition<T>) -> String {
    partition_to_json_with(p, None)
}

/// Serializes with an optional free-form `metadata` object.
pub fn partition_to_json_with<T: Real>(p: &Partition<T>, metadata: Option<Value>) -> String {
    let mut doc = PartitionDoc::from_partition(p);
    doc.metadata = metadata;
    serde_json::to_string_pretty(&doc).expect("plain data serializes")
}

pub fn partition_from_json<T: Real>(text: &str) -> Result<Partition<T>, JsonError> {
    let doc: PartitionDoc = serde_json::from_str(text)?;
    doc.to_partition()
}
