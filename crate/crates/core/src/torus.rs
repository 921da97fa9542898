//! The flat torus ℝ²/ℤ² and its quotient metric.

use crate::scalar::Real;

/// Reduces a coordinate into `[0, 1)`.
#[inline]
pub fn wrap<T: Real>(x: T) -> T {
    let w = x - x.floor();
    // `x - floor(x)` rounds to 1 for tiny negative inputs.
    if w >= T::one() {
        T::zero()
    } else {
        w
    }
}

/// Distance from `t` to the nearest integer, i.e. the circle metric on ℝ/ℤ.
#[inline]
pub fn circle_dist<T: Real>(t: T) -> T {
    let d = wrap(t);
    d.min(T::one() - d)
}

/// A point of the torus with canonical coordinates in `[0, 1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TorusPoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> TorusPoint<T> {
    /// Image of the plane point `(x, y)` on the torus.
    pub fn new(x: T, y: T) -> Self {
        Self {
            x: wrap(x),
            y: wrap(y),
        }
    }

    pub fn from_lift(p: [T; 2]) -> Self {
        Self::new(p[0], p[1])
    }

    pub fn translate(self, dx: T, dy: T) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    /// Quotient metric `ρ_T`.
    pub fn dist(&self, other: &Self) -> T {
        torus_dist(*self, *other)
    }
}

/// Flat-torus distance between two points; at most `√2/2`.
pub fn torus_dist<T: Real>(u: TorusPoint<T>, v: TorusPoint<T>) -> T {
    let dx = (u.x - v.x).abs();
    let dy = (u.y - v.y).abs();
    let dx = dx.min(T::one() - dx);
    let dy = dy.min(T::one() - dy);
    (dx * dx + dy * dy).sqrt()
}

/// Torus distance between two plane points, without canonicalizing first.
#[inline]
pub fn lifted_dist<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    let dx = circle_dist(a[0] - b[0]);
    let dy = circle_dist(a[1] - b[1]);
    (dx * dx + dy * dy).sqrt()
}

/// Diameter of the whole torus.
pub fn torus_diameter<T: Real>() -> T {
    T::lit(std::f64::consts::FRAC_1_SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn antipodal_point_is_farthest() {
        let d = torus_dist(TorusPoint::new(0.0, 0.0), TorusPoint::new(0.5, 0.5));
        assert_abs_diff_eq!(d, 2f64.sqrt() / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn identity_and_wraparound() {
        let p = TorusPoint::new(0.3, 0.7);
        assert_eq!(torus_dist(p, p), 0.0);
        let d = torus_dist(TorusPoint::new(0.1, 0.9), TorusPoint::new(0.9, 0.1));
        assert_abs_diff_eq!(d, 0.08f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn wrap_handles_negative_and_tiny_inputs() {
        assert_abs_diff_eq!(wrap(-0.25f64), 0.75);
        assert_eq!(wrap(-1e-20f64), 0.0);
        assert_eq!(wrap(3.0f64), 0.0);
        let p = TorusPoint::new(-0.25f32, 2.5f32);
        assert_eq!((p.x, p.y), (0.75, 0.5));
    }

    #[test]
    fn single_precision_metric() {
        let d = torus_dist(TorusPoint::new(0.0f32, 0.0), TorusPoint::new(0.5, 0.5));
        assert!((d - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-6);
    }

    fn unit() -> impl Strategy<Value = f64> {
        0.0f64..1.0
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(ax in unit(), ay in unit(), bx in unit(), by in unit()) {
            let a = TorusPoint::new(ax, ay);
            let b = TorusPoint::new(bx, by);
            prop_assert_eq!(torus_dist(a, b), torus_dist(b, a));
            prop_assert!(torus_dist(a, b) <= torus_diameter::<f64>() + 1e-15);
        }

        #[test]
        fn translation_invariant(ax in unit(), ay in unit(), bx in unit(), by in unit(),
                                 tx in -3.0f64..3.0, ty in -3.0f64..3.0) {
            let a = TorusPoint::new(ax, ay);
            let b = TorusPoint::new(bx, by);
            let d0 = torus_dist(a, b);
            let d1 = torus_dist(a.translate(tx, ty), b.translate(tx, ty));
            prop_assert!((d0 - d1).abs() <= 1e-12);
        }

        #[test]
        fn lifted_matches_canonical(ax in -2.0f64..2.0, ay in -2.0f64..2.0,
                                    bx in -2.0f64..2.0, by in -2.0f64..2.0) {
            let d0 = lifted_dist([ax, ay], [bx, by]);
            let d1 = torus_dist(TorusPoint::new(ax, ay), TorusPoint::new(bx, by));
            prop_assert!((d0 - d1).abs() <= 1e-12);
        }
    }
}
