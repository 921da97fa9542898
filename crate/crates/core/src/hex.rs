//! Periodic tilings of the torus by `m` translates of a centrally symmetric
//! hexagon, optimized exactly.
//!
//! The hexagon has edge vectors `p₁, p₂, p₃` (then `−p₁, −p₂, −p₃`). The
//! integer triples `a`, `b` fix how the unit lattice vectors decompose:
//! `a₁p₁ + a₂p₂ + a₃p₃ = (1, 0)` and `b₁p₁ + b₂p₂ + b₃p₃ = (0, 1)`. With
//! `p₁ = (x, y)` free, `p₂` and `p₃` follow, and the squared diameter of the
//! hexagon is the convex piecewise quadratic `f(x, y)` minimized here.

use rayon::prelude::*;
use thiserror::Error;

use crate::planar;
use crate::region::{LiftedPolygon, Partition, Region};
use crate::scalar::{Field, Real};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HexError {
    #[error("degenerate spec: a₂b₃ − a₃b₂ = 0")]
    DegenerateSpec,
    #[error("inconsistent spec: minors {0}, {1}, {2} are not all +m or all −m (m = {3})")]
    InconsistentSpec(i64, i64, i64, u32),
    #[error("degenerate hexagon: {0}")]
    DegenerateHexagon(String),
}

type V2<F> = [F; 2];

/// A solved lattice system `(a, b, m)` with `p₂ = −p₁ + (α₂, β₂)` and
/// `p₃ = p₁ + (α₃, β₃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HexTilingSpec<F> {
    pub a: [i64; 3],
    pub b: [i64; 3],
    pub m: u32,
    pub alpha2: F,
    pub alpha3: F,
    pub beta2: F,
    pub beta3: F,
    /// `α₂² + α₃² + β₂² + β₃²`.
    pub c: F,
}

/// Minimizer of the squared hexagon diameter for one spec.
#[derive(Debug, Clone, PartialEq)]
pub struct HexOptimum<F> {
    pub spec: HexTilingSpec<F>,
    pub x_star: F,
    pub y_star: F,
    pub f_min: F,
    pub tau: f64,
    pub edge_vectors: [V2<F>; 3],
}

/// Validates `(a, b)` and solves for `α`, `β`, `C`.
pub fn solve_hex_system<F: Field>(a: [i64; 3], b: [i64; 3], m: u32) -> Result<HexTilingSpec<F>, HexError> {
    let d = a[1] * b[2] - a[2] * b[1];
    if d == 0 {
        return Err(HexError::DegenerateSpec);
    }
    let d12 = a[0] * b[1] - a[1] * b[0];
    let d13 = a[0] * b[2] - a[2] * b[0];
    let m_i = i64::from(m);
    if !(d12 == d && d13 == d && d.abs() == m_i) {
        return Err(HexError::InconsistentSpec(d12, d, d13, m));
    }
    let q = |n: i64| F::from_ratio(n, d);
    let (alpha2, alpha3, beta2, beta3) = (q(b[2]), q(-b[1]), q(-a[2]), q(a[1]));
    let c = alpha2.clone() * alpha2.clone()
        + alpha3.clone() * alpha3.clone()
        + beta2.clone() * beta2.clone()
        + beta3.clone() * beta3.clone();
    Ok(HexTilingSpec { a, b, m, alpha2, alpha3, beta2, beta3, c })
}

impl<F: Field> HexTilingSpec<F> {
    /// `p₁, p₂, p₃` for `p₁ = (x, y)`.
    pub fn edge_vectors(&self, x: &F, y: &F) -> [V2<F>; 3] {
        [
            [x.clone(), y.clone()],
            [self.alpha2.clone() - x.clone(), self.beta2.clone() - y.clone()],
            [x.clone() + self.alpha3.clone(), y.clone() + self.beta3.clone()],
        ]
    }

    /// The three affine pieces `Lᵢ(z) = wᵢ·z + kᵢ` inside the max.
    fn pieces(&self) -> [(V2<F>, F); 3] {
        let u = [self.alpha2.clone() + self.alpha3.clone(), self.beta2.clone() + self.beta3.clone()];
        let v = [self.alpha3.clone() - self.alpha2.clone(), self.beta3.clone() - self.beta2.clone()];
        let k = self.alpha2.clone() * self.alpha3.clone() + self.beta2.clone() * self.beta3.clone();
        [
            (u.clone(), k.clone()),
            ([-u[0].clone(), -u[1].clone()], k.clone()),
            (v, -k),
        ]
    }
}

fn dot<F: Field>(a: &V2<F>, b: &V2<F>) -> F {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone()
}

/// `f(x, y) = x² + y² + C + 2·max(|u·z| + k, v·z − k)`.
pub fn hex_objective<F: Field>(spec: &HexTilingSpec<F>, x: &F, y: &F) -> F {
    let z = [x.clone(), y.clone()];
    let best = spec
        .pieces()
        .into_iter()
        .map(|(w, k)| dot(&w, &z) + k)
        .reduce(|p, q| if q > p { q } else { p })
        .expect("three pieces");
    dot(&z, &z) + spec.c.clone() + F::from_int(2) * best
}

/// Squared lengths of the three long diagonals `p₁+p₂+p₃`, `p₂+p₃−p₁`, `p₃−p₁−p₂`.
pub fn squared_diagonals<F: Field>(p: &[V2<F>; 3]) -> [F; 3] {
    let comb = |s1: i64, s2: i64, s3: i64| -> V2<F> {
        let c = |k: usize| {
            F::from_int(s1) * p[0][k].clone() + F::from_int(s2) * p[1][k].clone() + F::from_int(s3) * p[2][k].clone()
        };
        [c(0), c(1)]
    };
    let sq = |v: V2<F>| dot(&v, &v);
    [sq(comb(1, 1, 1)), sq(comb(-1, 1, 1)), sq(comb(-1, -1, 1))]
}

/// Exact global minimum of `f` by enumerating the candidate points of the
/// three quadratic pieces, their pairwise boundary lines and the triple point.
pub fn minimize_hex<F: Field>(spec: &HexTilingSpec<F>) -> HexOptimum<F> {
    let pieces = spec.pieces();
    let mut cands: Vec<V2<F>> = Vec::new();

    // Piece i alone: minimize |z|² + 2wᵢ·z, at z = −wᵢ.
    for (w, _) in &pieces {
        cands.push([-w[0].clone(), -w[1].clone()]);
    }
    // Piece i on the line Lᵢ = Lⱼ: project −wᵢ onto n·z = t.
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (wi, ki) = &pieces[i];
        let (wj, kj) = &pieces[j];
        let n = [wi[0].clone() - wj[0].clone(), wi[1].clone() - wj[1].clone()];
        let nn = dot(&n, &n);
        if nn.is_zero() {
            continue;
        }
        let t = kj.clone() - ki.clone();
        let z0 = [-wi[0].clone(), -wi[1].clone()];
        let s = (t - dot(&n, &z0)) / nn;
        cands.push([z0[0].clone() + s.clone() * n[0].clone(), z0[1].clone() + s * n[1].clone()]);
    }
    // Triple point: L₀ = L₁ and L₀ = L₂.
    {
        let row = |i: usize, j: usize| {
            let (wi, ki) = &pieces[i];
            let (wj, kj) = &pieces[j];
            ([wi[0].clone() - wj[0].clone(), wi[1].clone() - wj[1].clone()], kj.clone() - ki.clone())
        };
        let (r1, t1) = row(0, 1);
        let (r2, t2) = row(0, 2);
        let det = r1[0].clone() * r2[1].clone() - r1[1].clone() * r2[0].clone();
        if !det.is_zero() {
            let x = (t1.clone() * r2[1].clone() - r1[1].clone() * t2.clone()) / det.clone();
            let y = (r1[0].clone() * t2 - t1 * r2[0].clone()) / det;
            cands.push([x, y]);
        }
    }

    let mut best: Option<(F, V2<F>)> = None;
    for z in cands {
        let f = hex_objective(spec, &z[0], &z[1]);
        let better = match &best {
            None => true,
            Some((bf, bz)) => f < *bf || (f == *bf && (z[0] < bz[0] || (z[0] == bz[0] && z[1] < bz[1]))),
        };
        if better {
            best = Some((f, z));
        }
    }
    let (f_min, [x_star, y_star]) = best.expect("at least three candidates");
    let edge_vectors = spec.edge_vectors(&x_star, &y_star);
    HexOptimum {
        spec: spec.clone(),
        tau: f_min.to_f64_lossy().sqrt(),
        x_star,
        y_star,
        f_min,
        edge_vectors,
    }
}

impl<F: Field> HexOptimum<F> {
    /// Vertices `0, p₁, p₁+p₂, p₁+p₂+p₃, p₂+p₃, p₃`.
    pub fn hexagon(&self) -> [V2<F>; 6] {
        let [p1, p2, p3] = &self.edge_vectors;
        let add = |a: &V2<F>, b: &V2<F>| [a[0].clone() + b[0].clone(), a[1].clone() + b[1].clone()];
        let p12 = add(p1, p2);
        let p23 = add(p2, p3);
        let p123 = add(&p12, p3);
        [[F::zero(), F::zero()], p1.clone(), p12, p123, p23, p3.clone()]
    }

    /// Generators `p₁+p₂`, `p₂+p₃` of the tiling lattice.
    pub fn lattice(&self) -> [V2<F>; 2] {
        let [p1, p2, p3] = &self.edge_vectors;
        [
            [p1[0].clone() + p2[0].clone(), p1[1].clone() + p2[1].clone()],
            [p2[0].clone() + p3[0].clone(), p2[1].clone() + p3[1].clone()],
        ]
    }

    /// The `m` lattice translates modulo `ℤ²`, reduced into `[0, 1)²`.
    pub fn translates(&self) -> Result<Vec<V2<F>>, HexError> {
        let m = self.spec.m as i64;
        let [t1, t2] = self.lattice();
        let frac = |v: F| v.clone() - v.floor_value();
        let mut out: Vec<V2<F>> = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let (fi, fj) = (F::from_int(i), F::from_int(j));
                let p = [
                    frac(fi.clone() * t1[0].clone() + fj.clone() * t2[0].clone()),
                    frac(fi * t1[1].clone() + fj * t2[1].clone()),
                ];
                let seen = out.iter().any(|q| {
                    let d = |k: usize| {
                        let t = (p[k].to_f64_lossy() - q[k].to_f64_lossy()).abs();
                        t.min(1.0 - t)
                    };
                    d(0) < 1e-9 && d(1) < 1e-9
                });
                if !seen {
                    out.push(p);
                }
            }
        }
        if out.len() != self.spec.m as usize {
            return Err(HexError::DegenerateHexagon(format!(
                "lattice has {} classes modulo ℤ², expected {}",
                out.len(),
                self.spec.m
            )));
        }
        Ok(out)
    }
}

/// The `m` translated hexagons as a partition with `τ = √f_min`.
pub fn hex_partition<F: Field, T: Real>(opt: &HexOptimum<F>) -> Result<Partition<T>, HexError> {
    let to_t = |v: &F| T::lit(v.to_f64_lossy());
    for (i, p) in opt.edge_vectors.iter().enumerate() {
        if p[0].is_zero() && p[1].is_zero() {
            return Err(HexError::DegenerateHexagon(format!("p{} = 0", i + 1)));
        }
    }
    let mut base: Vec<[T; 2]> = opt.hexagon().iter().map(|v| [to_t(&v[0]), to_t(&v[1])]).collect();
    if planar::signed_area(&base) < T::zero() {
        base.reverse();
    }
    if !planar::is_simple(&base, T::lit(1e-12)) {
        return Err(HexError::DegenerateHexagon("hexagon is not simple".into()));
    }
    let mut regions = Vec::with_capacity(opt.spec.m as usize);
    for t in opt.translates()? {
        let (tx, ty) = (to_t(&t[0]), to_t(&t[1]));
        let verts = base.iter().map(|v| [v[0] + tx, v[1] + ty]).collect();
        let poly = LiftedPolygon::new(verts).map_err(|e| HexError::DegenerateHexagon(e.to_string()))?;
        regions.push(Region::Polygon(poly));
    }
    let tau = T::lit(opt.tau);
    Ok(Partition::new(regions, tau, format!("hex m={} a={:?} b={:?}", opt.spec.m, opt.spec.a, opt.spec.b)))
}

/// Whether the optimal hexagon is strictly convex.
pub fn is_strictly_convex<F: Field>(opt: &HexOptimum<F>) -> bool {
    let h = opt.hexagon();
    let mut sign = 0i8;
    for i in 0..6 {
        let (a, b, c) = (&h[i], &h[(i + 1) % 6], &h[(i + 2) % 6]);
        let cr = (b[0].clone() - a[0].clone()) * (c[1].clone() - b[1].clone())
            - (b[1].clone() - a[1].clone()) * (c[0].clone() - b[0].clone());
        let s = if cr.is_positive() {
            1
        } else if cr.is_negative() {
            -1
        } else {
            return false;
        };
        if sign != 0 && s != sign {
            return false;
        }
        sign = s;
    }
    true
}

/// All `(a, b)` with `|aᵢ|, |bᵢ| ≤ bound` satisfying the determinant identity
/// for `m`, in lexicographic order.
///
/// The identity forces `a₂ = a₁ + a₃`, `b₂ = b₁ + b₃` and `a₁b₃ − a₃b₁ = ±m`,
/// so only four coefficients are free.
pub fn candidate_specs(m: u32, bound: i64) -> Vec<([i64; 3], [i64; 3])> {
    let mut out = Vec::new();
    let r = -bound..=bound;
    for a1 in r.clone() {
        for a3 in r.clone() {
            let a2 = a1 + a3;
            if a2.abs() > bound {
                continue;
            }
            for b1 in r.clone() {
                for b3 in r.clone() {
                    let b2 = b1 + b3;
                    if b2.abs() > bound || (a1 * b3 - a3 * b1).abs() != i64::from(m) {
                        continue;
                    }
                    out.push(([a1, a2, a3], [b1, b2, b3]));
                }
            }
        }
    }
    out
}

/// Best strictly convex hexagonal tiling over all candidate specs; ties go to
/// the lexicographically smallest `(a, b)`.
pub fn search_hex<F: Field + Send + Sync>(m: u32, bound: i64) -> Option<HexOptimum<F>> {
    candidate_specs(m, bound)
        .par_iter()
        .filter_map(|&(a, b)| {
            let spec = solve_hex_system::<F>(a, b, m).ok()?;
            let opt = minimize_hex(&spec);
            is_strictly_convex(&opt).then_some(opt)
        })
        .reduce_with(|p, q| {
            let key = |o: &HexOptimum<F>| (o.spec.a, o.spec.b);
            if q.f_min < p.f_min || (q.f_min == p.f_min && key(&q) < key(&p)) {
                q
            } else {
                p
            }
        })
}

pub const HEX_CSV_HEADER: &str = "m,a1,a2,a3,b1,b2,b3,f_min,x_star,y_star,tau";

/// One Table-3 style CSV row with exact fractions and a decimal `τ`.
pub fn hex_csv_row<F: Field>(o: &HexOptimum<F>) -> String {
    let [a1, a2, a3] = o.spec.a;
    let [b1, b2, b3] = o.spec.b;
    format!(
        "{},{a1},{a2},{a3},{b1},{b2},{b3},{},{},{},{:.6}",
        o.spec.m, o.f_min, o.x_star, o.y_star, o.tau
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn m8() -> HexTilingSpec<Q> {
        solve_hex_system([3, 2, -1], [-1, 2, 3], 8).unwrap()
    }

    #[test]
    fn m8_system() {
        let s = m8();
        assert_eq!((s.alpha2.clone(), s.alpha3.clone()), (q(3, 8), q(-1, 4)));
        assert_eq!((s.beta2.clone(), s.beta3.clone()), (q(1, 8), q(1, 4)));
        assert_eq!(s.c, q(9, 32));
    }

    #[test]
    fn errors() {
        assert_eq!(solve_hex_system::<Q>([1, 0, 0], [0, 1, 0], 1).unwrap_err(), HexError::DegenerateSpec);
        assert!(matches!(
            solve_hex_system::<Q>([3, 2, -1], [-1, 2, 3], 7),
            Err(HexError::InconsistentSpec(..))
        ));
        assert!(solve_hex_system::<Q>([3, 1, -2], [-1, 2, 3], 7).is_ok());
    }

    #[test]
    fn m8_objective() {
        let s = m8();
        assert_eq!(hex_objective(&s, &q(3, 16), &q(-1, 16)), q(25, 128));
        assert_eq!(hex_objective(&s, &q(0, 1), &q(0, 1)), q(13, 32));
        let o = minimize_hex(&s);
        assert_eq!((o.x_star.clone(), o.y_star.clone(), o.f_min.clone()), (q(3, 16), q(-1, 16), q(25, 128)));
        assert!(is_strictly_convex(&o));
    }

    #[test]
    fn float_field_agrees() {
        let s = solve_hex_system::<f64>([3, 2, -1], [-1, 2, 3], 8).unwrap();
        let o = minimize_hex(&s);
        assert!((o.f_min - 25.0 / 128.0).abs() < 1e-15);
    }

    #[test]
    fn m8_partition() {
        let o = minimize_hex(&m8());
        let p = hex_partition::<Q, f64>(&o).unwrap();
        assert_eq!(p.regions.len(), 8);
        for r in &p.regions {
            assert!((r.area() - 0.125).abs() < 1e-15);
        }
        let r = crate::verify::verify_partition(&p);
        assert!(r.passed, "{:?}", r.failures());
        assert!((r.max_diameter - 5.0 / (8.0 * 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn search_finds_m8() {
        let best = search_hex::<Q>(8, 5).unwrap();
        assert_eq!(best.f_min, q(25, 128));
    }

    #[test]
    fn candidate_specs_satisfy_identity() {
        for (a, b) in candidate_specs(11, 5) {
            assert!(solve_hex_system::<Q>(a, b, 11).is_ok());
        }
    }
}
