use proptest::prelude::*;
use torus_partition::bounds::stripe_partition;
use torus_partition::region::{polygon_diameter, LiftedPolygon, Partition, PixelSet, Region};
use torus_partition::torus::{lifted_dist, torus_dist, TorusPoint};
use torus_partition::verify::{verify_partition, verify_partition_with, VerifyOptions};

fn square(x0: f64, y0: f64, side: f64) -> LiftedPolygon<f64> {
    LiftedPolygon::new(vec![[x0, y0], [x0 + side, y0], [x0 + side, y0 + side], [x0, y0 + side]]).unwrap()
}

fn quadrants() -> Partition<f64> {
    let regions = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)]
        .iter()
        .map(|&(x, y)| Region::Polygon(square(x, y, 0.5)))
        .collect();
    Partition::new(regions, 0.5f64.sqrt(), "quadrants")
}

#[test]
fn quadrant_partition_verifies() {
    let r = verify_partition(&quadrants());
    assert!(r.passed, "{}", r.summary());
    assert!((r.max_diameter - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((r.area_sum - 1.0).abs() < 1e-12);
}

#[test]
fn quadrant_diameter_is_its_diagonal_not_wrapped() {
    assert!((polygon_diameter(&square(0.0, 0.0, 0.5)) - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn tight_tau_fails_verification() {
    let mut p = stripe_partition::<f64>(4);
    p.tau -= 1e-6;
    let r = verify_partition(&p);
    assert!(!r.passed && !r.diameter_ok && r.area_ok);
    assert!(!r.failures().is_empty());
}

#[test]
fn gaps_and_overlaps_are_detected() {
    let mut p = quadrants();
    p.regions.pop();
    p.m = 4;
    let r = verify_partition(&p);
    assert!(!r.passed && r.uncovered > 0);

    let mut q = quadrants();
    q.regions[0] = Region::Polygon(square(0.0, 0.0, 0.6));
    let r = verify_partition(&q);
    assert!(!r.passed && r.overlapping > 0);
}

#[test]
fn custom_grid_is_honoured() {
    let opts = VerifyOptions { grid: 1024, ..VerifyOptions::default() };
    let r = verify_partition_with(&stripe_partition::<f64>(5), &opts);
    assert!(r.passed && r.grid == 1024);
}

#[test]
fn pixel_checkerboard_diameter() {
    let cells: Vec<(u32, u32)> = (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).filter(|(x, y)| (x + y) % 2 == 0).collect();
    let set = PixelSet::new(4, cells).unwrap();
    assert!((set.diameter::<f64>() - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn narrow_strip_diameter() {
    let strip = Region::vertical_strip(0.0, 0.2).unwrap();
    assert!((strip.diameter().unwrap() - (0.04f64 + 0.25).sqrt()).abs() < 1e-15);
    let wide = Region::horizontal_strip(0.0, 0.9).unwrap();
    assert!((wide.diameter().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
}

proptest! {
    #[test]
    fn torus_metric_axioms(ax in -3.0f64..3.0, ay in -3.0f64..3.0, bx in -3.0f64..3.0, by in -3.0f64..3.0, cx in 0.0f64..1.0, cy in 0.0f64..1.0) {
        let (a, b, c) = (TorusPoint::new(ax, ay), TorusPoint::new(bx, by), TorusPoint::new(cx, cy));
        let ab = torus_dist(a, b);
        prop_assert!((ab - torus_dist(b, a)).abs() < 1e-15);
        prop_assert!(ab <= 0.5f64.sqrt() + 1e-15);
        prop_assert!(ab <= torus_dist(a, c) + torus_dist(c, b) + 1e-12);
        prop_assert!((lifted_dist([ax, ay], [bx + 2.0, by - 1.0]) - ab).abs() < 1e-12);
    }

    #[test]
    fn translated_polygon_keeps_its_diameter(x0 in 0.0f64..1.0, y0 in 0.0f64..1.0, side in 0.05f64..0.6, shift in -2i32..=2) {
        let d0 = polygon_diameter(&square(x0, y0, side));
        let d1 = polygon_diameter(&square(x0 + f64::from(shift), y0 - f64::from(shift), side));
        prop_assert!((d0 - d1).abs() < 1e-12);
        prop_assert!(d0 <= (2.0f64).sqrt() * side + 1e-12);
    }
}
