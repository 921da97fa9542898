//! Closed-form bounds on `d_m`, the exact small cases, stripe partitions and
//! aggregation of the best known bounds.

use std::fmt;

use thiserror::Error;

use crate::region::{Partition, Region};
use crate::sat::{unsat_lower_bound, SatBoundRecord};
use crate::scalar::Real;
use crate::torus::torus_diameter;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("{0}")]
    DomainError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Stripes,
    Area,
    Pigeonhole,
    Sat,
    Hex,
    Globopt,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Stripes => "stripes",
            Method::Area => "area",
            Method::Pigeonhole => "pigeonhole",
            Method::Sat => "sat",
            Method::Hex => "hex",
            Method::Globopt => "globopt",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim() {
            "exact" => Method::Exact,
            "stripes" => Method::Stripes,
            "area" => Method::Area,
            "pigeonhole" => Method::Pigeonhole,
            "sat" => Method::Sat,
            "hex" => Method::Hex,
            "globopt" => Method::Globopt,
            _ => return None,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Best known `lower ≤ d_m ≤ upper` with the methods that achieve them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRecord {
    pub m: u32,
    pub lower: f64,
    pub upper: f64,
    pub lower_method: Method,
    pub upper_method: Method,
}

impl BoundRecord {
    /// Relative gap `(upper − lower) / lower`.
    pub fn gap(&self) -> f64 {
        (self.upper - self.lower) / self.lower
    }
}

/// An achieved upper bound from a construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperRecord {
    pub m: u32,
    pub tau: f64,
    pub method: Method,
    /// `false` for published values that this crate does not reconstruct.
    pub certified: bool,
}

/// `min(√(1/4 + 1/m²), √2/2)`, evaluated as `√(m² + 4) / (2m)`.
pub fn stripe_upper<T: Real>(m: u32) -> T {
    assert!(m >= 1, "m must be positive");
    let m = T::lit(f64::from(m));
    let v = (m * m + T::lit(4.0)).sqrt() / (m + m);
    v.min(torus_diameter())
}

/// Isodiametric bound `2 / √(π m)`, valid for `m ≥ 6`.
pub fn area_lower<T: Real>(m: u32) -> Result<T, BoundsError> {
    if m < 6 {
        return Err(BoundsError::DomainError(format!("area bound needs m ≥ 6, got {m}")));
    }
    Ok(T::lit(2.0) / (T::lit(std::f64::consts::PI) * T::lit(f64::from(m))).sqrt())
}

/// Smallest `k ≥ 1` with `k² + k − 1 ≥ m`.
pub fn pigeonhole_k(m: u32) -> u64 {
    let m = u64::from(m);
    let mut k = 1u64;
    while k * k + k - 1 < m {
        k += 1;
    }
    k
}

/// `1/k` for the smallest `k` with `k² + k − 1 ≥ m`.
///
/// For `m = 1` this is `1`, which exceeds the torus diameter; `best_bounds`
/// skips the `k = 1` case.
pub fn pigeonhole_lower<T: Real>(m: u32) -> T {
    T::one() / T::lit(pigeonhole_k(m) as f64)
}

/// Known exact values: `√2/2` for `m ≤ 2`, `√13/6` for `m = 3`.
pub fn exact_value<T: Real>(m: u32) -> Result<T, BoundsError> {
    match m {
        1 | 2 => Ok(torus_diameter()),
        3 => Ok(T::lit(13.0).sqrt() / T::lit(6.0)),
        _ => Err(BoundsError::DomainError(format!("no exact value known for m = {m}"))),
    }
}

/// `m` vertical strips of width `1/m` with `τ = stripe_upper(m)`.
pub fn stripe_partition<T: Real>(m: u32) -> Partition<T> {
    assert!(m >= 1, "m must be positive");
    let mf = T::lit(f64::from(m));
    let regions = (0..m)
        .map(|i| {
            let lo = T::lit(f64::from(i)) / mf;
            let hi = if i + 1 == m { T::one() } else { T::lit(f64::from(i + 1)) / mf };
            Region::vertical_strip(lo, hi).expect("strip bounds are ordered and in [0, 1]")
        })
        .collect();
    Partition::new(regions, stripe_upper(m), format!("stripes m={m}"))
}

/// Upper bounds reported for `m = 5, 6, 7` from grid colorings refined by hand
/// into polygonal partitions: `√10/6`, `√17/8`, `√(5 − √7)/3`.
pub fn reported_sat_geometry_uppers() -> Vec<UpperRecord> {
    let mut out = Vec::new();
    for line in include_str!("../data/reported_upper.csv").lines().skip(1) {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 7 {
            continue;
        }
        let num = |i: usize| f[i].parse::<f64>().expect("bundled data parses");
        // Columns m, a, b, c, root, d, method encode (a + b·√c)^(1/root) / d.
        let tau = (num(1) + num(2) * num(3).sqrt()).powf(1.0 / num(4)) / num(5);
        out.push(UpperRecord {
            m: f[0].parse().expect("bundled data parses"),
            tau,
            method: Method::parse(f[6]).expect("bundled data parses"),
            certified: false,
        });
    }
    out
}

/// Combines the closed-form bounds with supplied SAT lower bounds and
/// construction upper bounds for `m`. Records for other `m` are ignored.
pub fn best_bounds(m: u32, sat_results: &[SatBoundRecord], uppers: &[UpperRecord]) -> BoundRecord {
    assert!(m >= 1, "m must be positive");
    let mut lower = (0.0f64, Method::Pigeonhole);
    let mut raise = |v: f64, how: Method| {
        if v > lower.0 {
            lower = (v, how);
        }
    };
    if let Ok(v) = exact_value::<f64>(m) {
        raise(v, Method::Exact);
    }
    if let Ok(v) = area_lower::<f64>(m) {
        raise(v, Method::Area);
    }
    if pigeonhole_k(m) >= 2 {
        raise(pigeonhole_lower(m), Method::Pigeonhole);
    }
    for r in sat_results.iter().filter(|r| r.m == m) {
        if let Ok(v) = unsat_lower_bound(r) {
            raise(v, Method::Sat);
        }
    }

    let mut upper = (stripe_upper::<f64>(m), Method::Stripes);
    for r in uppers.iter().filter(|r| r.m == m) {
        if r.tau < upper.0 {
            upper = (r.tau, r.method);
        }
    }
    // Stripes are optimal where the exact value is known.
    if lower.1 == Method::Exact && upper.0 <= lower.0 {
        upper.0 = lower.0;
    }
    BoundRecord { m, lower: lower.0, upper: upper.0, lower_method: lower.1, upper_method: upper.1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_partition;
    use proptest::prelude::*;

    #[test]
    fn stripe_examples() {
        assert_eq!(stripe_upper::<f64>(1), 2f64.sqrt() / 2.0);
        assert!((stripe_upper::<f64>(2) - 2f64.sqrt() / 2.0).abs() < 1e-16);
        assert!((stripe_upper::<f64>(4) - 5f64.sqrt() / 4.0).abs() < 1e-16);
        assert_eq!(stripe_upper::<f64>(3), exact_value::<f64>(3).unwrap());
        assert_eq!(stripe_upper::<f32>(3), exact_value::<f32>(3).unwrap());
    }

    #[test]
    fn area_examples() {
        assert!((area_lower::<f64>(8).unwrap() - 0.398942).abs() < 5e-7);
        assert!((area_lower::<f64>(25).unwrap() - 0.225676).abs() < 5e-7);
        assert!((area_lower::<f64>(6).unwrap() - 0.460659).abs() < 5e-7);
        assert!(area_lower::<f64>(5).is_err());
    }

    #[test]
    fn pigeonhole_examples() {
        assert_eq!(pigeonhole_lower::<f64>(5), 0.5);
        assert_eq!(pigeonhole_lower::<f64>(6), 1.0 / 3.0);
        assert_eq!(pigeonhole_lower::<f64>(11), 1.0 / 3.0);
        assert_eq!(pigeonhole_lower::<f64>(12), 0.25);
        assert_eq!(pigeonhole_lower::<f64>(1), 1.0);
    }

    #[test]
    fn exact_values() {
        assert_eq!(exact_value::<f64>(1).unwrap(), 2f64.sqrt() / 2.0);
        assert!((exact_value::<f64>(3).unwrap() - 0.600925).abs() < 5e-7);
        assert!(exact_value::<f64>(4).is_err());
    }

    #[test]
    fn best_bound_examples() {
        let b = best_bounds(7, &[SatBoundRecord::unsat(7, 9, 16)], &[]);
        assert!((b.lower - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(b.lower_method, Method::Sat);

        let hex = UpperRecord { m: 8, tau: 5.0 / (8.0 * 2f64.sqrt()), method: Method::Hex, certified: true };
        let b = best_bounds(8, &[], &[hex]);
        assert!((b.upper - 0.441942).abs() < 5e-7);
        assert!((b.lower - 0.398942).abs() < 5e-7);
        assert_eq!((b.lower_method, b.upper_method), (Method::Area, Method::Hex));

        let b = best_bounds(3, &[], &[]);
        assert_eq!(b.lower, b.upper);
        assert!((b.lower - 13f64.sqrt() / 6.0).abs() < 1e-16);

        let b = best_bounds(1, &[], &[]);
        assert_eq!((b.lower, b.upper), (2f64.sqrt() / 2.0, 2f64.sqrt() / 2.0));
    }

    #[test]
    fn reported_uppers() {
        let r = reported_sat_geometry_uppers();
        let got: Vec<(u32, f64)> = r.iter().map(|u| (u.m, u.tau)).collect();
        assert_eq!(got.len(), 3);
        assert!((got[0].1 - 0.527046).abs() < 5e-7);
        assert!((got[1].1 - 0.515388).abs() < 5e-7);
        assert!((got[2].1 - 0.511452).abs() < 5e-7);
    }

    #[test]
    fn stripes_verify() {
        for m in 1..=50 {
            let p = stripe_partition::<f64>(m);
            let r = verify_partition(&p);
            assert!(r.passed, "m={m}: {:?}", r.failures());
        }
    }

    proptest! {
        #[test]
        fn monotone(m in 6u32..10_000) {
            prop_assert!(pigeonhole_lower::<f64>(m + 1) <= pigeonhole_lower::<f64>(m));
            prop_assert!(area_lower::<f64>(m + 1).unwrap() < area_lower::<f64>(m).unwrap());
        }

        #[test]
        fn lower_below_upper(m in 1u32..=25) {
            let b = best_bounds(m, &crate::sat::published_unsat_records(), &reported_sat_geometry_uppers());
            prop_assert!(b.lower <= b.upper + 1e-12);
        }
    }
}
