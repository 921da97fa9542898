#![allow(clippy::type_complexity)]
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use torus_partition::hex::{
    hex_objective, hex_partition, is_strictly_convex, minimize_hex, search_hex, solve_hex_system,
    squared_diagonals, HexError,
};
use torus_partition::planar::signed_area;
use torus_partition::verify::verify_partition;
use torus_partition::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Brute-force minimum of the objective over a fine rational grid around the optimum.
fn grid_minimum(a: [i64; 3], b: [i64; 3], m: u32, center: (&Rational, &Rational), den: i64, radius: i64) -> Rational {
    let spec = solve_hex_system::<Rational>(a, b, m).unwrap();
    let mut best: Option<Rational> = None;
    for i in -radius..=radius {
        for j in -radius..=radius {
            let x = center.0 + q(i, den);
            let y = center.1 + q(j, den);
            let v = hex_objective(&spec, &x, &y);
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best.unwrap()
}

#[test]
fn known_optima() {
    let rows: [(u32, [i64; 3], [i64; 3], Rational, Rational); 5] = [
        (8, [3, 2, -1], [-1, 2, 3], q(25, 128), q(3, 16)),
        (9, [1, 3, 2], [3, 0, -3], q(130, 729), q(2, 27)),
        (12, [2, 4, 2], [3, 0, -3], q(169, 1296), q(1, 9)),
        (15, [4, 3, -1], [-1, 3, 4], q(578, 5625), q(4, 25)),
        (16, [4, 2, -2], [0, 4, 4], q(25, 256), q(3, 16)),
    ];
    for (m, a, b, f, x) in rows {
        let opt = minimize_hex(&solve_hex_system::<Rational>(a, b, m).unwrap());
        assert_eq!(opt.f_min, f, "m={m}");
        assert_eq!(opt.x_star, x, "m={m}");
    }
}

#[test]
fn seven_part_optimum_is_a_true_minimum() {
    let opt = minimize_hex(&solve_hex_system::<Rational>([3, 1, -2], [-1, 2, 3], 7).unwrap());
    assert_eq!(opt.f_min, q(650, 2401));
    assert_eq!((opt.x_star.clone(), opt.y_star.clone()), (q(12, 49), q(-4, 49)));
    let spec = solve_hex_system::<Rational>([3, 1, -2], [-1, 2, 3], 7).unwrap();
    assert!(hex_objective(&spec, &q(12, 49), &q(4, 49)) > opt.f_min);
    let near = grid_minimum([3, 1, -2], [-1, 2, 3], 7, (&opt.x_star, &opt.y_star), 4900, 6);
    assert_eq!(near, opt.f_min);
}

#[test]
fn inconsistent_spec_is_rejected() {
    assert!(matches!(solve_hex_system::<Rational>([1, 1, 1], [0, 0, 0], 7), Err(HexError::DegenerateSpec | HexError::InconsistentSpec(..))));
}

#[test]
fn tiles_have_area_one_over_m() {
    for m in [8u32, 11, 12, 16] {
        let opt = search_hex::<Rational>(m, 5).unwrap();
        let hex = opt.hexagon();
        let mut area = Rational::zero();
        for i in 0..6 {
            let (p, r) = (&hex[i], &hex[(i + 1) % 6]);
            area += &p[0] * &r[1] - &p[1] * &r[0];
        }
        area /= q(2, 1);
        assert_eq!(area.abs(), q(1, i64::from(m)), "m={m}");
        assert!(is_strictly_convex(&opt));
        assert_eq!(opt.translates().unwrap().len(), m as usize);
    }
}

#[test]
fn float_partitions_verify() {
    for m in [9u32, 10, 14, 15] {
        let opt = search_hex::<Rational>(m, 5).unwrap();
        let p = hex_partition::<Rational, f64>(&opt).unwrap();
        let r = verify_partition(&p);
        assert!(r.passed, "m={m}: {}", r.summary());
        for region in &p.regions {
            if let torus_partition::region::Region::Polygon(poly) = region {
                assert!(signed_area(poly.vertices()) > 0.0);
            }
        }
    }
}

proptest! {
    #[test]
    fn objective_is_the_largest_squared_diagonal(xn in -60i64..60, yn in -60i64..60, d in 1i64..40) {
        let spec = solve_hex_system::<Rational>([3, 2, -1], [-1, 2, 3], 8).unwrap();
        let (x, y) = (q(xn, d), q(yn, d));
        let diag = squared_diagonals(&spec.edge_vectors(&x, &y));
        let max = diag.iter().max().unwrap().clone();
        prop_assert_eq!(hex_objective(&spec, &x, &y), max);
    }

    #[test]
    fn optimum_beats_rational_probes(xn in -40i64..40, yn in -40i64..40) {
        let spec = solve_hex_system::<Rational>([4, 3, -1], [-1, 3, 4], 15).unwrap();
        let opt = minimize_hex(&spec);
        let v = hex_objective(&spec, &q(xn, 100), &q(yn, 100));
        prop_assert!(v >= opt.f_min);
        prop_assert!(opt.f_min > Rational::zero() && opt.f_min < Rational::one());
    }
}
