//! Partition certification: area, probe-grid coverage and disjointness, and
//! exact per-region diameters against the claimed bound.

use crate::region::{Membership, Partition, Region};
use crate::scalar::Real;

/// Probe-grid and tolerance settings.
#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Probes per axis; at least 512.
    pub grid: usize,
    pub area_tol: f64,
    pub diameter_tol: f64,
    /// Distance under which a probe counts as lying on a region boundary.
    pub boundary_eps: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid: 512,
            area_tol: 1e-9,
            diameter_tol: 1e-12,
            boundary_eps: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport {
    pub index: usize,
    pub area: f64,
    /// `None` when the region is malformed.
    pub diameter: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub m: usize,
    pub tau: f64,
    pub region_count_ok: bool,
    pub area_sum: f64,
    pub area_ok: bool,
    pub grid: usize,
    /// Probes not touched by any region.
    pub uncovered: usize,
    /// Probes strictly inside two or more regions.
    pub overlapping: usize,
    pub regions: Vec<RegionReport>,
    pub max_diameter: f64,
    pub diameter_ok: bool,
    pub passed: bool,
}

impl VerificationReport {
    /// One-line human readable summary.
    pub fn summary(&self) -> String {
        format!(
            "{} m={} tau={:.6} max_diameter={:.6} area_sum={:.12} uncovered={} overlapping={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.m,
            self.tau,
            self.max_diameter,
            self.area_sum,
            self.uncovered,
            self.overlapping
        )
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.region_count_ok {
            out.push(format!("expected {} regions, found {}", self.m, self.regions.len()));
        }
        if !self.area_ok {
            out.push(format!("area sum {} differs from 1", self.area_sum));
        }
        if self.uncovered > 0 {
            out.push(format!("{} probe points uncovered", self.uncovered));
        }
        if self.overlapping > 0 {
            out.push(format!("{} probe points interior to several regions", self.overlapping));
        }
        for r in &self.regions {
            if let Some(e) = &r.error {
                out.push(format!("region {}: {e}", r.index));
            } else if let Some(d) = r.diameter {
                if d > self.tau + 1e-12 {
                    out.push(format!("region {} diameter {d:.12} exceeds tau {:.12}", r.index, self.tau));
                }
            }
        }
        out
    }
}

pub fn verify_partition<T: Real>(p: &Partition<T>) -> VerificationReport {
    verify_partition_with(p, &VerifyOptions::default())
}

pub fn verify_partition_with<T: Real>(p: &Partition<T>, opts: &VerifyOptions) -> VerificationReport {
    let n = opts.grid.max(512);
    let tau = p.tau.as_f64();

    let mut regions = Vec::with_capacity(p.regions.len());
    let mut area_sum = 0.0;
    let mut max_diameter: f64 = 0.0;
    let mut all_valid = true;
    for (index, r) in p.regions.iter().enumerate() {
        let area = r.area().as_f64();
        area_sum += area;
        match r.diameter() {
            Ok(d) => {
                let d = d.as_f64();
                max_diameter = max_diameter.max(d);
                regions.push(RegionReport { index, area, diameter: Some(d), error: None });
            }
            Err(e) => {
                all_valid = false;
                regions.push(RegionReport { index, area, diameter: None, error: Some(e.to_string()) });
            }
        }
    }

    let (uncovered, overlapping) = if all_valid {
        probe(&p.regions, n, T::lit(opts.boundary_eps))
    } else {
        (n * n, 0)
    };

    let region_count_ok = p.regions.len() == p.m;
    let area_ok = (area_sum - 1.0).abs() <= opts.area_tol;
    let diameter_ok = all_valid && max_diameter <= tau + opts.diameter_tol;
    let passed = region_count_ok && area_ok && diameter_ok && uncovered == 0 && overlapping == 0;
    VerificationReport {
        m: p.m,
        tau,
        region_count_ok,
        area_sum,
        area_ok,
        grid: n,
        uncovered,
        overlapping,
        regions,
        max_diameter,
        diameter_ok,
        passed,
    }
}

/// Probe points sit at cell centers of an `n × n` grid.
fn probe<T: Real>(regions: &[Region<T>], n: usize, eps: T) -> (usize, usize) {
    let mut touched = vec![0u16; n * n];
    let mut interior = vec![0u16; n * n];
    let inv = 1.0 / n as f64;
    let coord = |i: usize| T::lit((i as f64 + 0.5) * inv);
    for region in regions {
        let (rows, cols) = probe_window(region, n);
        for &i in &rows {
            for &j in &cols {
                let q = [coord(i), coord(j)];
                match region.classify(q, eps) {
                    Membership::Outside => {}
                    Membership::Boundary => touched[i * n + j] += 1,
                    Membership::Inside => {
                        touched[i * n + j] += 1;
                        interior[i * n + j] += 1;
                    }
                }
            }
        }
    }
    let uncovered = touched.iter().filter(|&&t| t == 0).count();
    let overlapping = interior.iter().filter(|&&t| t >= 2).count();
    (uncovered, overlapping)
}

/// Probe indices that can possibly meet the region, per axis.
fn probe_window<T: Real>(region: &Region<T>, n: usize) -> (Vec<usize>, Vec<usize>) {
    let all: Vec<usize> = (0..n).collect();
    match region {
        Region::Polygon(poly) => {
            let (lo, hi) = poly.bbox();
            let axis = |k: usize| {
                let a = lo[k].as_f64();
                let b = hi[k].as_f64();
                if b - a >= 1.0 - 2.0 / n as f64 {
                    return all.clone();
                }
                let first = ((a * n as f64) - 1.5).floor() as i64;
                let last = ((b * n as f64) + 0.5).ceil() as i64;
                let mut idx: Vec<usize> = (first..=last)
                    .map(|t| t.rem_euclid(n as i64) as usize)
                    .collect();
                idx.sort_unstable();
                idx.dedup();
                idx
            };
            (axis(0), axis(1))
        }
        _ => (all.clone(), all),
    }
}
