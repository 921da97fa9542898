//! Parts of a torus partition and their exact diameters.
//!
//! Polygons are stored as lifts: plane coordinates whose image modulo 1 is the
//! region. For a vertex `P`, the torus distance to the rest of the region can
//! only peak at another vertex, where the boundary crosses the cut locus of `P`
//! (the lines `x = x_P ± 1/2`, `y = y_P ± 1/2`), or at the antipode of `P`.
//! Some diameter of a polygonal region ends at a vertex, so the maximum over
//! those candidates for every vertex is the diameter.

use thiserror::Error;

use crate::planar::{self, P2};
use crate::scalar::Real;
use crate::torus::{lifted_dist, wrap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
}

/// Tolerance used by polygon validity predicates.
const SHAPE_EPS: f64 = 1e-12;

/// A polygon in unwrapped plane coordinates, oriented counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedPolygon<T> {
    vertices: Vec<P2<T>>,
}

impl<T: Real> LiftedPolygon<T> {
    pub fn new(vertices: Vec<P2<T>>) -> Result<Self, GeometryError> {
        let poly = Self { vertices };
        poly.validate()?;
        Ok(poly)
    }

    /// Accepts either orientation and reverses clockwise input.
    pub fn new_any_orientation(mut vertices: Vec<P2<T>>) -> Result<Self, GeometryError> {
        if vertices.len() >= 3 && planar::signed_area(&vertices) < T::zero() {
            vertices.reverse();
        }
        Self::new(vertices)
    }

    pub fn vertices(&self) -> &[P2<T>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<P2<T>> {
        self.vertices
    }

    pub fn area(&self) -> T {
        planar::signed_area(&self.vertices)
    }

    pub fn bbox(&self) -> (P2<T>, P2<T>) {
        planar::bbox(&self.vertices)
    }

    fn validate(&self) -> Result<(), GeometryError> {
        let v = &self.vertices;
        let bad = |msg: String| Err(GeometryError::InvalidPolygon(msg));
        if v.len() < 3 {
            return bad(format!("{} vertices, need at least 3", v.len()));
        }
        if v.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return bad("non-finite coordinate".into());
        }
        let n = v.len();
        for i in 0..n {
            let d = planar::sub(v[(i + 1) % n], v[i]);
            if d[0].abs() >= T::one() || d[1].abs() >= T::one() {
                return bad(format!("edge {i} has a displacement of a full period or more"));
            }
        }
        let (lo, hi) = self.bbox();
        let slack = T::one() + T::lit(SHAPE_EPS);
        if hi[0] - lo[0] > slack || hi[1] - lo[1] > slack {
            return bad("bounding box exceeds the unit window".into());
        }
        if self.area() <= T::zero() {
            return bad("signed area is not positive".into());
        }
        if !planar::is_simple(v, T::lit(SHAPE_EPS)) {
            return bad("boundary self-intersects".into());
        }
        Ok(())
    }

    /// Membership of a torus point, using every lattice translate that can reach
    /// the lifted bounding box.
    pub fn classify(&self, q: P2<T>, eps: T) -> Membership {
        let (lo, hi) = self.bbox();
        let mut best = Membership::Outside;
        for (dx, dy) in lattice_shifts(q, lo, hi, eps) {
            let p = [q[0] + dx, q[1] + dy];
            let here = if planar::boundary_dist(&self.vertices, p) <= eps {
                Membership::Boundary
            } else if planar::winding_number(&self.vertices, p) != 0 {
                Membership::Inside
            } else {
                Membership::Outside
            };
            best = best.max(here);
            if best == Membership::Inside {
                break;
            }
        }
        best
    }

    /// Closed containment of a torus point.
    pub fn contains(&self, q: P2<T>) -> bool {
        self.classify(q, T::lit(SHAPE_EPS)) != Membership::Outside
    }
}

/// Integer translates `(dx, dy)` with `q + (dx, dy)` inside the box `[lo, hi]`
/// grown by `eps`.
fn lattice_shifts<T: Real>(q: P2<T>, lo: P2<T>, hi: P2<T>, eps: T) -> Vec<(T, T)> {
    let range = |k: usize| {
        let a = (lo[k] - eps - q[k]).ceil();
        let b = (hi[k] + eps - q[k]).floor();
        let mut out = Vec::new();
        let mut t = a;
        while t <= b {
            out.push(t);
            t = t + T::one();
        }
        out
    };
    let xs = range(0);
    let ys = range(1);
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &dx in &xs {
        for &dy in &ys {
            out.push((dx, dy));
        }
    }
    out
}

/// Where a probe point sits relative to a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Membership {
    Outside,
    Boundary,
    Inside,
}

/// Diameter of the torus image of a lifted polygon.
pub fn polygon_diameter<T: Real>(p: &LiftedPolygon<T>) -> T {
    let v = p.vertices();
    let n = v.len();
    let half = T::half();
    let mut best = T::zero();
    for (i, &pi) in v.iter().enumerate() {
        for &pj in &v[i + 1..] {
            best = best.max(lifted_dist(pi, pj));
        }
        for e in 0..n {
            let a = v[e];
            let b = v[(e + 1) % n];
            for axis in 0..2 {
                for c in [pi[axis] - half, pi[axis] + half] {
                    if let Some(q) = cross_axis_line(a, b, axis, c) {
                        best = best.max(lifted_dist(pi, q));
                    }
                }
            }
        }
        for sx in [-half, half] {
            for sy in [-half, half] {
                let antipode = [pi[0] + sx, pi[1] + sy];
                if p.contains(antipode) {
                    best = best.max(lifted_dist(pi, antipode));
                }
            }
        }
    }
    best
}

/// Intersection of segment `ab` with the line `coord[axis] = c`, if any.
fn cross_axis_line<T: Real>(a: P2<T>, b: P2<T>, axis: usize, c: T) -> Option<P2<T>> {
    let (lo, hi) = if a[axis] <= b[axis] { (a[axis], b[axis]) } else { (b[axis], a[axis]) };
    if c < lo || c > hi || lo == hi {
        return None;
    }
    let t = (c - a[axis]) / (b[axis] - a[axis]);
    let mut q = [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t];
    q[axis] = c;
    Some(q)
}

/// A union of grid cells `[i/s, (i+1)/s] × [j/s, (j+1)/s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelSet {
    s: u32,
    cells: Vec<(u32, u32)>,
}

impl PixelSet {
    pub fn new(s: u32, mut cells: Vec<(u32, u32)>) -> Result<Self, GeometryError> {
        if s == 0 {
            return Err(GeometryError::InvalidRegion("pixel grid size 0".into()));
        }
        if let Some(c) = cells.iter().find(|&&(i, j)| i >= s || j >= s) {
            return Err(GeometryError::InvalidRegion(format!(
                "cell {c:?} outside a {s}×{s} grid"
            )));
        }
        let n = cells.len();
        cells.sort_unstable();
        cells.dedup();
        if cells.len() != n {
            return Err(GeometryError::InvalidRegion("duplicate cells".into()));
        }
        Ok(Self { s, cells })
    }

    pub fn grid_size(&self) -> u32 {
        self.s
    }

    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    pub fn contains_cell(&self, cell: (u32, u32)) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Squared diameter as `numerator / (2s)²`.
    ///
    /// For two closed cells the squared torus distance separates into per-axis
    /// maxima. Along one axis the offset ranges over an interval two cells
    /// wide; its circle distance peaks at an endpoint (corner pairs) or at
    /// exactly half a period.
    pub fn diameter_squared_units(&self) -> u64 {
        if self.cells.is_empty() {
            return 0;
        }
        let s = i64::from(self.s);
        let period = 2 * s;
        let axis_max: Vec<u64> = (0..s)
            .map(|d| {
                let (lo, hi) = (2 * d - 2, 2 * d + 2);
                let circ = |t: i64| {
                    let r = t.rem_euclid(period);
                    r.min(period - r)
                };
                // Any representative of s modulo 2s inside [lo, hi]?
                let k = (lo - s).div_euclid(period);
                let hits_half = (k..=k + 1).any(|k| {
                    let t = s + k * period;
                    t >= lo && t <= hi
                });
                let g = if hits_half { s } else { circ(lo).max(circ(hi)) };
                (g * g) as u64
            })
            .collect();
        let mut seen = vec![false; (s * s) as usize];
        let mut best = 0;
        for (a, &(i1, j1)) in self.cells.iter().enumerate() {
            for &(i2, j2) in &self.cells[a..] {
                let di = (i64::from(i1) - i64::from(i2)).rem_euclid(s);
                let dj = (i64::from(j1) - i64::from(j2)).rem_euclid(s);
                let key = (di * s + dj) as usize;
                if !seen[key] {
                    seen[key] = true;
                    best = best.max(axis_max[di as usize] + axis_max[dj as usize]);
                }
            }
        }
        best
    }

    pub fn diameter<T: Real>(&self) -> T {
        let units = self.diameter_squared_units() as f64;
        T::lit(units.sqrt() / (2.0 * f64::from(self.s)))
    }
}

/// One part of a partition.
#[derive(Debug, Clone, PartialEq)]
pub enum Region<T> {
    Polygon(LiftedPolygon<T>),
    /// `lo ≤ x ≤ hi`, all `y`.
    VerticalStrip { lo: T, hi: T },
    /// `lo ≤ y ≤ hi`, all `x`.
    HorizontalStrip { lo: T, hi: T },
    Pixels(PixelSet),
}

impl<T: Real> Region<T> {
    pub fn vertical_strip(lo: T, hi: T) -> Result<Self, GeometryError> {
        check_strip(lo, hi)?;
        Ok(Region::VerticalStrip { lo, hi })
    }

    pub fn horizontal_strip(lo: T, hi: T) -> Result<Self, GeometryError> {
        check_strip(lo, hi)?;
        Ok(Region::HorizontalStrip { lo, hi })
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        match self {
            Region::Polygon(p) => p.validate(),
            Region::VerticalStrip { lo, hi } | Region::HorizontalStrip { lo, hi } => {
                check_strip(*lo, *hi)
            }
            Region::Pixels(px) => PixelSet::new(px.s, px.cells.clone()).map(|_| ()),
        }
    }

    pub fn area(&self) -> T {
        match self {
            Region::Polygon(p) => p.area(),
            Region::VerticalStrip { lo, hi } | Region::HorizontalStrip { lo, hi } => *hi - *lo,
            Region::Pixels(px) => {
                let s = f64::from(px.s);
                T::lit(px.cells.len() as f64 / (s * s))
            }
        }
    }

    /// Torus diameter of the region.
    pub fn diameter(&self) -> Result<T, GeometryError> {
        self.validate()?;
        Ok(match self {
            Region::Polygon(p) => polygon_diameter(p),
            Region::VerticalStrip { lo, hi } | Region::HorizontalStrip { lo, hi } => {
                // Across the strip the offset reaches min(width, 1/2); along it, 1/2.
                let w = (*hi - *lo).min(T::half());
                (w * w + T::lit(0.25)).sqrt()
            }
            Region::Pixels(px) => px.diameter(),
        })
    }

    /// Membership of the torus point `q` (canonical coordinates).
    pub fn classify(&self, q: P2<T>, eps: T) -> Membership {
        match self {
            Region::Polygon(p) => p.classify(q, eps),
            Region::VerticalStrip { lo, hi } => classify_band(q[0], *lo, *hi, eps),
            Region::HorizontalStrip { lo, hi } => classify_band(q[1], *lo, *hi, eps),
            Region::Pixels(px) => classify_pixels(px, q, eps),
        }
    }
}

fn check_strip<T: Real>(lo: T, hi: T) -> Result<(), GeometryError> {
    if lo >= T::zero() && lo < hi && hi <= T::one() {
        Ok(())
    } else {
        Err(GeometryError::InvalidRegion(format!(
            "strip bounds [{lo}, {hi}] must satisfy 0 ≤ lo < hi ≤ 1"
        )))
    }
}

fn classify_band<T: Real>(t: T, lo: T, hi: T, eps: T) -> Membership {
    let w = hi - lo;
    if w >= T::one() {
        return Membership::Inside;
    }
    let r = wrap(t - lo);
    if r <= eps || r >= T::one() - eps || (r - w).abs() <= eps {
        Membership::Boundary
    } else if r < w {
        Membership::Inside
    } else {
        Membership::Outside
    }
}

fn classify_pixels<T: Real>(px: &PixelSet, q: P2<T>, eps: T) -> Membership {
    let s = T::lit(f64::from(px.s));
    let cell_of = |t: T| {
        let c = (wrap(t) * s).floor().to_i64().unwrap_or(0);
        c.rem_euclid(i64::from(px.s)) as u32
    };
    let near_line = |t: T| {
        let u = wrap(t) * s;
        (u - u.round()).abs() <= eps * s
    };
    let own = (cell_of(q[0]), cell_of(q[1]));
    let inside_own = px.contains_cell(own);
    if !near_line(q[0]) && !near_line(q[1]) {
        return if inside_own { Membership::Inside } else { Membership::Outside };
    }
    // Near a grid line: touching any adjacent cell counts as boundary contact.
    let h = eps * T::lit(2.0);
    for dx in [-h, T::zero(), h] {
        for dy in [-h, T::zero(), h] {
            let c = (cell_of(q[0] + dx), cell_of(q[1] + dy));
            if px.contains_cell(c) {
                return Membership::Boundary;
            }
        }
    }
    Membership::Outside
}

/// A partition of the torus into `m` regions with a claimed diameter bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T> {
    pub m: usize,
    pub regions: Vec<Region<T>>,
    pub tau: T,
    pub provenance: String,
}

impl<T: Real> Partition<T> {
    pub fn new(regions: Vec<Region<T>>, tau: T, provenance: impl Into<String>) -> Self {
        Self {
            m: regions.len(),
            regions,
            tau,
            provenance: provenance.into(),
        }
    }

    /// Largest region diameter.
    pub fn max_diameter(&self) -> Result<T, GeometryError> {
        self.regions
            .iter()
            .map(Region::diameter)
            .try_fold(T::zero(), |acc, d| d.map(|d| acc.max(d)))
    }
}
