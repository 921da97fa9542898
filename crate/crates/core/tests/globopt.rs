use torus_partition::globopt::{
    objective, optimize, optimize_from, seed_circle_packing, torus_voronoi, GlobOptError, MeshPartition,
    OptimizerConfig,
};
use torus_partition::hex::{minimize_hex, solve_hex_system};
use torus_partition::torus::{torus_dist, TorusPoint};
use torus_partition::verify::verify_partition;
use torus_partition::Rational;

fn quick(seed: u64) -> OptimizerConfig {
    OptimizerConfig { restarts: 4, iterations: 800, seed, ..OptimizerConfig::default() }
}

fn hex_mesh(m: u32, a: [i64; 3], b: [i64; 3]) -> MeshPartition<f64> {
    use num_traits::ToPrimitive;
    let opt = minimize_hex(&solve_hex_system::<Rational>(a, b, m).unwrap());
    let hex: Vec<[f64; 2]> = opt.hexagon().iter().map(|v| [v[0].to_f64().unwrap(), v[1].to_f64().unwrap()]).collect();
    let polys: Vec<Vec<[f64; 2]>> = opt
        .translates()
        .unwrap()
        .iter()
        .map(|t| {
            let (tx, ty) = (t[0].to_f64().unwrap(), t[1].to_f64().unwrap());
            hex.iter().map(|v| [v[0] + tx, v[1] + ty]).collect()
        })
        .collect();
    MeshPartition::from_polygons(&polys).unwrap()
}

#[test]
fn same_seed_same_answer() {
    let a = optimize::<f64>(10, &quick(5)).unwrap();
    let b = optimize::<f64>(10, &quick(5)).unwrap();
    assert_eq!(a.tau, b.tau);
    assert_eq!(a.best_restart, b.best_restart);
    assert_eq!(a.mesh, b.mesh);
}

#[test]
fn result_verifies_and_is_best_restart() {
    let res = optimize::<f64>(12, &quick(1)).unwrap();
    let r = verify_partition(&res.partition);
    assert!(r.passed, "{}", r.summary());
    let best = res.restart_values.iter().flatten().cloned().fold(f64::INFINITY, f64::min);
    assert_eq!(best, res.tau);
    assert!(res.tau < 0.5f64.sqrt());
}

#[test]
fn imported_hexagonal_tiling_has_its_exact_objective() {
    let mesh = hex_mesh(12, [2, 4, 2], [3, 0, -3]);
    assert_eq!(mesh.faces.len(), 12);
    mesh.check_topology().unwrap();
    assert!((objective(&mesh).unwrap() - 13.0 / 36.0).abs() < 1e-12);
}

#[test]
fn descent_from_a_hex_tiling_never_gets_worse() {
    let mesh = hex_mesh(8, [3, 2, -1], [-1, 2, 3]);
    let start = objective(&mesh).unwrap();
    let cfg = OptimizerConfig { iterations: 300, log_every: 1, ..OptimizerConfig::default() };
    let (_, phi, log) = optimize_from(mesh, &cfg, 0).unwrap();
    assert!(phi <= start + 1e-15);
    assert!(log.windows(2).all(|w| w[1].phi <= w[0].phi));
}

#[test]
fn packing_centers_are_spread_out() {
    for m in [5usize, 9, 16] {
        let c = seed_circle_packing::<f64>(m, 3);
        assert_eq!(c.len(), m);
        let mut min = f64::INFINITY;
        for i in 0..m {
            for j in (i + 1)..m {
                min = min.min(torus_dist(c[i], c[j]));
            }
        }
        // At least the radius of a disc of area 1/m.
        assert!(min > (1.0 / (std::f64::consts::PI * m as f64)).sqrt(), "m={m} min={min}");
    }
}

#[test]
fn too_few_centers_are_rejected() {
    assert!(matches!(optimize::<f64>(4, &quick(0)), Err(GlobOptError::InvalidConfig(_))));
    let two = [TorusPoint::new(0.1, 0.1), TorusPoint::new(0.6, 0.6)];
    assert!(torus_voronoi(&two).is_err());
    let bad = OptimizerConfig { restarts: 0, ..OptimizerConfig::default() };
    assert!(optimize::<f64>(9, &bad).is_err());
}
