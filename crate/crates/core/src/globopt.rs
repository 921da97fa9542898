//! Multi-restart minimization of the largest part diameter over the vertex
//! positions of a polygonal torus partition.
//!
//! A [`MeshPartition`] stores each vertex once, in plane coordinates, and each
//! face as a cycle of corners `(vertex, lattice offset)`; the corner sits at
//! `vertex + offset`. Moving a vertex moves every corner that refers to it, so
//! faces stay glued while the combinatorics are frozen.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::planar::{self, P2};
use crate::region::{LiftedPolygon, Partition, Region};
use crate::scalar::Real;
use crate::torus::{wrap, TorusPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlobOptError {
    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),
    #[error("invalid centers: {0}")]
    InvalidCenters(String),
    #[error("cell {face} has diameter {diameter} ≥ 1/2")]
    CellTooLarge { face: usize, diameter: f64 },
    #[error("face {face} has diameter {diameter} ≥ 1/2; vertex pairs no longer give the torus diameter")]
    LiftViolation { face: usize, diameter: f64 },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("step size underflow")]
    StuckStep,
    #[error("all restarts failed: {0}")]
    AllRestartsFailed(String),
}

/// A face corner: vertex index plus the integer translate it is seen at.
/// Two vertex indices and the lattice offset of the second relative to the first.
pub type VertexPair = (usize, usize, [i32; 2]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Corner {
    pub vertex: usize,
    pub offset: [i32; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshPartition<T> {
    pub vertices: Vec<P2<T>>,
    pub faces: Vec<Vec<Corner>>,
}

fn cluster_eps<T: Real>() -> T {
    T::epsilon().sqrt() * T::lit(0.1)
}

impl<T: Real> MeshPartition<T> {
    /// Glues lifted polygons that tile the torus into a mesh by identifying
    /// vertices that agree modulo `ℤ²`.
    pub fn from_polygons(polys: &[Vec<P2<T>>]) -> Result<Self, GlobOptError> {
        let eps = cluster_eps::<T>();
        let mut vertices: Vec<P2<T>> = Vec::new();
        let mut faces = Vec::with_capacity(polys.len());
        for poly in polys {
            let mut face: Vec<Corner> = Vec::with_capacity(poly.len());
            for &p in poly {
                let canon = [wrap(p[0]), wrap(p[1])];
                let found = vertices.iter().position(|v| {
                    let d = |k: usize| {
                        let t = (v[k] - canon[k]).abs();
                        t.min(T::one() - t)
                    };
                    d(0) <= eps && d(1) <= eps
                });
                let vertex = found.unwrap_or_else(|| {
                    vertices.push(canon);
                    vertices.len() - 1
                });
                let v = vertices[vertex];
                let offset = [(p[0] - v[0]).round().as_f64() as i32, (p[1] - v[1]).round().as_f64() as i32];
                let corner = Corner { vertex, offset };
                if face.last() != Some(&corner) && face.first() != Some(&corner) {
                    face.push(corner);
                }
            }
            if face.len() < 3 {
                return Err(GlobOptError::InvalidMesh("face collapsed to fewer than 3 corners".into()));
            }
            faces.push(face);
        }
        let mesh = Self { vertices, faces };
        mesh.check_topology()?;
        Ok(mesh)
    }

    pub fn corner_pos(&self, c: &Corner) -> P2<T> {
        let v = self.vertices[c.vertex];
        [v[0] + T::lit(f64::from(c.offset[0])), v[1] + T::lit(f64::from(c.offset[1]))]
    }

    pub fn face_points(&self, f: usize) -> Vec<P2<T>> {
        self.faces[f].iter().map(|c| self.corner_pos(c)).collect()
    }

    /// Undirected edges keyed by endpoints and relative offset, with the
    /// number of face sides using each.
    pub fn edges(&self) -> HashMap<VertexPair, usize> {
        let mut out = HashMap::new();
        for face in &self.faces {
            for i in 0..face.len() {
                let a = face[i];
                let b = face[(i + 1) % face.len()];
                let rel = [b.offset[0] - a.offset[0], b.offset[1] - a.offset[1]];
                let key = if (a.vertex, rel) <= (b.vertex, [-rel[0], -rel[1]]) {
                    (a.vertex, b.vertex, rel)
                } else {
                    (b.vertex, a.vertex, [-rel[0], -rel[1]])
                };
                *out.entry(key).or_insert(0) += 1;
            }
        }
        out
    }

    /// Every edge borders exactly two faces and `V − E + F = 0`.
    pub fn check_topology(&self) -> Result<(), GlobOptError> {
        let edges = self.edges();
        if let Some((k, n)) = edges.iter().find(|(_, &n)| n != 2) {
            return Err(GlobOptError::InvalidMesh(format!("edge {k:?} used by {n} face sides")));
        }
        let euler = self.vertices.len() as i64 - edges.len() as i64 + self.faces.len() as i64;
        if euler != 0 {
            return Err(GlobOptError::InvalidMesh(format!(
                "V − E + F = {} − {} + {} = {euler}",
                self.vertices.len(),
                edges.len(),
                self.faces.len()
            )));
        }
        Ok(())
    }

    /// Largest distance between two corners of face `f`, in its lift.
    pub fn face_diameter(&self, f: usize) -> T {
        let pts = self.face_points(f);
        let mut best = T::zero();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                best = best.max(planar::norm(planar::sub(pts[i], pts[j])));
            }
        }
        best
    }

    /// Converts to a partition of lifted polygons, each shifted so its first
    /// corner lies in `[0, 1)²`.
    pub fn to_partition(&self, tau: T, provenance: impl Into<String>) -> Result<Partition<T>, GlobOptError> {
        let mut regions = Vec::with_capacity(self.faces.len());
        for f in 0..self.faces.len() {
            let pts = self.face_points(f);
            let sx = pts[0][0].floor();
            let sy = pts[0][1].floor();
            let shifted = pts.iter().map(|p| [p[0] - sx, p[1] - sy]).collect();
            let poly = LiftedPolygon::new_any_orientation(shifted)
                .map_err(|e| GlobOptError::InvalidMesh(format!("face {f}: {e}")))?;
            regions.push(Region::Polygon(poly));
        }
        Ok(Partition::new(regions, tau, provenance))
    }
}

/// Torus distance used by the packing step.
fn min_image<T: Real>(d: T) -> T {
    d - d.round()
}

/// `m` centers spread out by 200 rounds of nearest-neighbour repulsion with a
/// decaying step; the configuration with the largest minimum distance wins.
pub fn seed_circle_packing<T: Real>(m: usize, seed: u64) -> Vec<TorusPoint<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<[f64; 2]> = (0..m).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
    let to_points = |pts: &[[f64; 2]]| pts.iter().map(|p| TorusPoint::new(T::lit(p[0]), T::lit(p[1]))).collect();
    if m < 2 {
        return to_points(&pts);
    }
    let min_dist = |pts: &[[f64; 2]]| {
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let dx = min_image(pts[i][0] - pts[j][0]);
                let dy = min_image(pts[i][1] - pts[j][1]);
                best = best.min(dx.hypot(dy));
            }
        }
        best
    };
    let mut best = (min_dist(&pts), pts.clone());
    let step0 = 0.5 / (m as f64).sqrt();
    for it in 0..200 {
        let step = step0 * (1.0 - it as f64 / 200.0);
        let snapshot = pts.clone();
        for i in 0..m {
            let mut nearest = (f64::INFINITY, [0.0, 0.0]);
            for j in 0..m {
                if i == j {
                    continue;
                }
                let dx = min_image(snapshot[i][0] - snapshot[j][0]);
                let dy = min_image(snapshot[i][1] - snapshot[j][1]);
                let d = dx.hypot(dy);
                if d < nearest.0 {
                    nearest = (d, [dx, dy]);
                }
            }
            let (d, dir) = nearest;
            let dir = if d > 1e-12 {
                [dir[0] / d, dir[1] / d]
            } else {
                let a = rng.gen::<f64>() * std::f64::consts::TAU;
                [a.cos(), a.sin()]
            };
            pts[i] = [(pts[i][0] + step * dir[0]).rem_euclid(1.0), (pts[i][1] + step * dir[1]).rem_euclid(1.0)];
        }
        let md = min_dist(&pts);
        if md > best.0 {
            best = (md, pts.clone());
        }
    }
    to_points(&best.1)
}

/// Clips a convex polygon to the half-plane `n·p ≤ c`.
fn clip<T: Real>(poly: &[P2<T>], n: P2<T>, c: T) -> Vec<P2<T>> {
    let side = |p: P2<T>| n[0] * p[0] + n[1] * p[1] - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let s = poly[i];
        let e = poly[(i + 1) % poly.len()];
        let (fs, fe) = (side(s), side(e));
        let cut = |fs: T, fe: T| {
            let t = fs / (fs - fe);
            [s[0] + (e[0] - s[0]) * t, s[1] + (e[1] - s[1]) * t]
        };
        if fe <= T::zero() {
            if fs > T::zero() {
                out.push(cut(fs, fe));
            }
            out.push(e);
        } else if fs <= T::zero() {
            out.push(cut(fs, fe));
        }
    }
    out
}

/// Voronoi cells of the torus, each lifted around its center, without the
/// diameter precondition.
pub fn voronoi_mesh<T: Real>(centers: &[TorusPoint<T>]) -> Result<MeshPartition<T>, GlobOptError> {
    if centers.len() < 2 {
        return Err(GlobOptError::InvalidCenters("need at least two centers".into()));
    }
    let eps = cluster_eps::<T>();
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            if centers[i].dist(&centers[j]) <= eps {
                return Err(GlobOptError::InvalidCenters(format!("centers {i} and {j} coincide")));
            }
        }
    }
    let half = T::half();
    let two = T::lit(2.0);
    let mut cells = Vec::with_capacity(centers.len());
    for (i, c) in centers.iter().enumerate() {
        let c = [c.x, c.y];
        let mut poly = vec![
            [c[0] - half, c[1] - half],
            [c[0] + half, c[1] - half],
            [c[0] + half, c[1] + half],
            [c[0] - half, c[1] + half],
        ];
        for (j, o) in centers.iter().enumerate() {
            if i == j {
                continue;
            }
            for kx in -1..=1 {
                for ky in -1..=1 {
                    let o = [o.x + T::lit(f64::from(kx)), o.y + T::lit(f64::from(ky))];
                    // |p − c|² ≤ |p − o|²  ⇔  2(o − c)·p ≤ |o|² − |c|²
                    let n = [two * (o[0] - c[0]), two * (o[1] - c[1])];
                    let rhs = o[0] * o[0] + o[1] * o[1] - c[0] * c[0] - c[1] * c[1];
                    poly = clip(&poly, n, rhs);
                }
            }
        }
        let mut dedup: Vec<P2<T>> = Vec::with_capacity(poly.len());
        for p in poly {
            if dedup.last().is_none_or(|q| planar::norm(planar::sub(p, *q)) > eps) {
                dedup.push(p);
            }
        }
        while dedup.len() > 1 && planar::norm(planar::sub(dedup[0], *dedup.last().unwrap())) <= eps {
            dedup.pop();
        }
        cells.push(dedup);
    }
    MeshPartition::from_polygons(&cells)
}

/// Voronoi mesh whose cells all have diameter below `1/2`.
pub fn torus_voronoi<T: Real>(centers: &[TorusPoint<T>]) -> Result<MeshPartition<T>, GlobOptError> {
    let mesh = voronoi_mesh(centers)?;
    for f in 0..mesh.faces.len() {
        let d = mesh.face_diameter(f);
        if d >= T::half() {
            return Err(GlobOptError::CellTooLarge { face: f, diameter: d.as_f64() });
        }
    }
    Ok(mesh)
}

/// `φ = max` over faces and corner pairs of the lifted distance.
pub fn objective<T: Real>(mp: &MeshPartition<T>) -> Result<T, GlobOptError> {
    let mut phi = T::zero();
    for f in 0..mp.faces.len() {
        let d = mp.face_diameter(f);
        if d >= T::half() {
            return Err(GlobOptError::LiftViolation { face: f, diameter: d.as_f64() });
        }
        phi = phi.max(d);
    }
    Ok(phi)
}

/// A subgradient of `φ` with respect to every vertex coordinate.
///
/// With `temperature = 0` it averages the gradients of all pairs attaining the
/// max (each geometric pair counted once). With `temperature > 0` it takes a
/// softmax-weighted average over the pairs within `temperature` of the max.
pub fn subgradient<T: Real>(mp: &MeshPartition<T>, temperature: T) -> Result<(T, Vec<P2<T>>), GlobOptError> {
    let phi = objective(mp)?;
    let tie = T::lit(1e-12).max(phi * T::epsilon() * T::lit(16.0));
    let window = if temperature > T::zero() { temperature } else { tie };
    let mut pairs: HashMap<VertexPair, (T, P2<T>)> = HashMap::new();
    for face in &mp.faces {
        for i in 0..face.len() {
            for j in (i + 1)..face.len() {
                let (a, b) = (face[i], face[j]);
                let pa = mp.corner_pos(&a);
                let pb = mp.corner_pos(&b);
                let diff = planar::sub(pa, pb);
                let d = planar::norm(diff);
                if d < phi - window {
                    continue;
                }
                let rel = [b.offset[0] - a.offset[0], b.offset[1] - a.offset[1]];
                let key = if (a.vertex, rel) <= (b.vertex, [-rel[0], -rel[1]]) {
                    (a.vertex, b.vertex, rel)
                } else {
                    (b.vertex, a.vertex, [-rel[0], -rel[1]])
                };
                let unit = [diff[0] / d, diff[1] / d];
                // Store the direction seen from the key's first vertex.
                let unit = if key.0 == a.vertex && key.2 == rel { unit } else { [-unit[0], -unit[1]] };
                pairs.entry(key).or_insert((d, unit));
            }
        }
    }
    let mut entries: Vec<_> = pairs.into_iter().collect();
    entries.sort_by_key(|(k, _)| *k);
    let weights: Vec<T> = if temperature > T::zero() {
        entries.iter().map(|(_, (d, _))| ((*d - phi) / temperature).exp()).collect()
    } else {
        vec![T::one(); entries.len()]
    };
    let total = weights.iter().fold(T::zero(), |s, &w| s + w);
    let mut grad = vec![[T::zero(); 2]; mp.vertices.len()];
    for ((key, (_, u)), w) in entries.iter().zip(&weights) {
        let w = *w / total;
        let (p, q) = (key.0, key.1);
        grad[p][0] = grad[p][0] + w * u[0];
        grad[p][1] = grad[p][1] + w * u[1];
        grad[q][0] = grad[q][0] - w * u[0];
        grad[q][1] = grad[q][1] - w * u[1];
    }
    Ok((phi, grad))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub iterations: usize,
    pub step_size: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
    /// `0` selects the hard max.
    pub softmax_temperature: f64,
    /// Record `φ` every this many iterations; `0` disables the log.
    pub log_every: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 20,
            iterations: 5000,
            step_size: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 0,
            softmax_temperature: 0.0,
            log_every: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), GlobOptError> {
        let bad = |s: &str| Err(GlobOptError::InvalidConfig(s.into()));
        if self.restarts == 0 || self.iterations == 0 {
            return bad("restarts and iterations must be positive");
        }
        if !(self.step_size > 0.0 && self.epsilon > 0.0) {
            return bad("step size and epsilon must be positive");
        }
        if !(self.beta1 > 0.0 && self.beta1 < 1.0 && self.beta2 > 0.0 && self.beta2 < 1.0) {
            return bad("moment decays must lie in (0, 1)");
        }
        if self.softmax_temperature.is_nan() || self.softmax_temperature < 0.0 {
            return bad("softmax temperature must be non-negative");
        }
        Ok(())
    }
}

/// Adaptive-moment accumulators plus the current step multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub first: Vec<P2<T>>,
    pub second: Vec<P2<T>>,
    pub t: i32,
    /// Halved on every rejected trial, doubled (up to 1) on acceptance.
    pub scale: T,
}

impl<T: Real> AdamState<T> {
    pub fn new(vertices: usize) -> Self {
        Self {
            first: vec![[T::zero(); 2]; vertices],
            second: vec![[T::zero(); 2]; vertices],
            t: 0,
            scale: T::one(),
        }
    }
}

fn admissible<T: Real>(mp: &MeshPartition<T>) -> Option<T> {
    let eps = T::lit(1e-12);
    for f in 0..mp.faces.len() {
        if !planar::is_simple(&mp.face_points(f), eps) {
            return None;
        }
    }
    objective(mp).ok()
}

/// One adaptive-moment step with rejection: trial steps that make a face
/// non-simple, push a face diameter to `1/2`, or increase `φ` are halved and
/// retried. Returns the new `φ`.
pub fn descent_step<T: Real>(
    mp: &mut MeshPartition<T>,
    cfg: &OptimizerConfig,
    state: &mut AdamState<T>,
) -> Result<T, GlobOptError> {
    let (phi, grad) = subgradient(mp, T::lit(cfg.softmax_temperature))?;
    let (b1, b2) = (T::lit(cfg.beta1), T::lit(cfg.beta2));
    state.t += 1;
    let c1 = T::one() - b1.powi(state.t);
    let c2 = T::one() - b2.powi(state.t);
    let mut dir = vec![[T::zero(); 2]; grad.len()];
    for (k, g) in grad.iter().enumerate() {
        for a in 0..2 {
            state.first[k][a] = b1 * state.first[k][a] + (T::one() - b1) * g[a];
            state.second[k][a] = b2 * state.second[k][a] + (T::one() - b2) * g[a] * g[a];
            let mh = state.first[k][a] / c1;
            let vh = state.second[k][a] / c2;
            dir[k][a] = mh / (vh.sqrt() + T::lit(cfg.epsilon));
        }
    }
    let base = mp.vertices.clone();
    loop {
        let step = T::lit(cfg.step_size) * state.scale;
        if step < T::lit(1e-15) {
            mp.vertices = base;
            return Err(GlobOptError::StuckStep);
        }
        for (v, (b, d)) in mp.vertices.iter_mut().zip(base.iter().zip(&dir)) {
            *v = [b[0] - step * d[0], b[1] - step * d[1]];
        }
        if let Some(new_phi) = admissible(mp) {
            if new_phi <= phi {
                state.scale = (state.scale + state.scale).min(T::one());
                return Ok(new_phi);
            }
        }
        state.scale = state.scale * T::half();
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub restart: usize,
    pub iteration: usize,
    pub phi: f64,
}

pub fn log_csv(rows: &[LogRow]) -> String {
    let mut out = String::from("restart,iteration,phi\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:.15}", r.restart, r.iteration, r.phi);
    }
    out
}

/// Final mesh, its `φ`, and the convergence log of one descent run.
pub type Descent<T> = (MeshPartition<T>, T, Vec<LogRow>);

/// Runs descent from a given mesh; stops early when steps underflow.
pub fn optimize_from<T: Real>(
    mut mp: MeshPartition<T>,
    cfg: &OptimizerConfig,
    restart: usize,
) -> Result<Descent<T>, GlobOptError> {
    cfg.validate()?;
    let mut phi = objective(&mp)?;
    let mut state = AdamState::new(mp.vertices.len());
    let mut log = Vec::new();
    if cfg.log_every > 0 {
        log.push(LogRow { restart, iteration: 0, phi: phi.as_f64() });
    }
    for it in 1..=cfg.iterations {
        match descent_step(&mut mp, cfg, &mut state) {
            Ok(p) => phi = p,
            Err(GlobOptError::StuckStep) => break,
            Err(e) => return Err(e),
        }
        if cfg.log_every > 0 && (it % cfg.log_every == 0 || it == cfg.iterations) {
            log.push(LogRow { restart, iteration: it, phi: phi.as_f64() });
        }
    }
    Ok((mp, phi, log))
}

/// Outcome of [`optimize`].
#[derive(Debug, Clone)]
pub struct OptimizeResult<T> {
    pub partition: Partition<T>,
    pub mesh: MeshPartition<T>,
    pub tau: T,
    pub best_restart: usize,
    /// Final `φ` of each restart, `None` when it failed.
    pub restart_values: Vec<Option<f64>>,
    pub log: Vec<LogRow>,
}

/// Seed for restart `r`, and for reseeding attempt `k` within it.
fn restart_seed(seed: u64, r: usize, k: u64) -> u64 {
    seed.wrapping_add(r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k)
}

fn one_restart<T: Real>(m: usize, cfg: &OptimizerConfig, r: usize) -> Result<Descent<T>, GlobOptError> {
    let mut last = GlobOptError::AllRestartsFailed("no attempt".into());
    for k in 0..32 {
        let centers = seed_circle_packing::<T>(m, restart_seed(cfg.seed, r, k));
        match torus_voronoi(&centers) {
            Ok(mesh) => return optimize_from(mesh, cfg, r),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Independent restarts of packing, Voronoi and descent, run in parallel; the
/// lowest `φ` wins with ties going to the lower restart index.
pub fn optimize<T: Real>(m: usize, cfg: &OptimizerConfig) -> Result<OptimizeResult<T>, GlobOptError> {
    cfg.validate()?;
    if m < 5 {
        return Err(GlobOptError::InvalidConfig(format!("m = {m} < 5")));
    }
    let runs: Vec<Result<Descent<T>, GlobOptError>> =
        (0..cfg.restarts).into_par_iter().map(|r| one_restart(m, cfg, r)).collect();
    let restart_values = runs.iter().map(|r| r.as_ref().ok().map(|x| x.1.as_f64())).collect();
    let mut best: Option<(usize, &Descent<T>)> = None;
    let mut last_err = None;
    for (i, run) in runs.iter().enumerate() {
        match run {
            Ok(x) => {
                if best.is_none_or(|(_, b)| x.1 < b.1) {
                    best = Some((i, x));
                }
            }
            Err(e) => last_err = Some(e.clone()),
        }
    }
    let (best_restart, (mesh, tau, _)) = best.ok_or_else(|| {
        GlobOptError::AllRestartsFailed(last_err.map(|e| e.to_string()).unwrap_or_default())
    })?;
    let partition = mesh.to_partition(*tau, format!("globopt m={m} seed={} restart={best_restart}", cfg.seed))?;
    let log = runs.iter().filter_map(|r| r.as_ref().ok()).flat_map(|x| x.2.iter().copied()).collect();
    Ok(OptimizeResult { partition, mesh: mesh.clone(), tau: *tau, best_restart, restart_values, log })
}
