//! Small planar predicates shared by the region and mesh code.

use crate::scalar::Real;

pub type P2<T> = [T; 2];

#[inline]
pub fn sub<T: Real>(a: P2<T>, b: P2<T>) -> P2<T> {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add<T: Real>(a: P2<T>, b: P2<T>) -> P2<T> {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn cross<T: Real>(a: P2<T>, b: P2<T>) -> T {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm<T: Real>(a: P2<T>) -> T {
    (a[0] * a[0] + a[1] * a[1]).sqrt()
}

/// Twice the signed area of triangle `abc`.
#[inline]
pub fn orient<T: Real>(a: P2<T>, b: P2<T>, c: P2<T>) -> T {
    cross(sub(b, a), sub(c, a))
}

pub fn signed_area<T: Real>(pts: &[P2<T>]) -> T {
    let n = pts.len();
    let mut acc = T::zero();
    for i in 0..n {
        acc = acc + cross(pts[i], pts[(i + 1) % n]);
    }
    acc * T::half()
}

pub fn bbox<T: Real>(pts: &[P2<T>]) -> (P2<T>, P2<T>) {
    let mut lo = [T::infinity(); 2];
    let mut hi = [T::neg_infinity(); 2];
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (lo, hi)
}

fn on_segment<T: Real>(a: P2<T>, b: P2<T>, p: P2<T>, eps: T) -> bool {
    orient(a, b, p).abs() <= eps
        && p[0] >= a[0].min(b[0]) - eps
        && p[0] <= a[0].max(b[0]) + eps
        && p[1] >= a[1].min(b[1]) - eps
        && p[1] <= a[1].max(b[1]) + eps
}

/// Closed-segment intersection test, touching included.
pub fn segments_intersect<T: Real>(a: P2<T>, b: P2<T>, c: P2<T>, d: P2<T>, eps: T) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps))
        && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
    {
        return true;
    }
    on_segment(c, d, a, eps)
        || on_segment(c, d, b, eps)
        || on_segment(a, b, c, eps)
        || on_segment(a, b, d, eps)
}

/// Whether a closed polyline is simple: only consecutive edges meet, and only
/// at their shared vertex.
pub fn is_simple<T: Real>(pts: &[P2<T>], eps: T) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if norm(sub(b, a)) <= eps {
            return false;
        }
        for j in (i + 1)..n {
            let c = pts[j];
            let d = pts[(j + 1) % n];
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared vertex is fine; folding back along the same line is not.
                let (shared, far_a, far_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let u = sub(far_a, shared);
                let v = sub(far_b, shared);
                if cross(u, v).abs() <= eps * (norm(u) + norm(v))
                    && u[0] * v[0] + u[1] * v[1] > T::zero()
                {
                    return false;
                }
                continue;
            }
            if segments_intersect(a, b, c, d, eps) {
                return false;
            }
        }
    }
    true
}

pub fn point_segment_dist<T: Real>(p: P2<T>, a: P2<T>, b: P2<T>) -> T {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 > T::zero() {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    norm(sub(p, [a[0] + ab[0] * t, a[1] + ab[1] * t]))
}

/// Winding number of a closed polyline around `p` (`p` off the boundary).
pub fn winding_number<T: Real>(pts: &[P2<T>], p: P2<T>) -> i32 {
    let n = pts.len();
    let mut w = 0;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if a[1] <= p[1] {
            if b[1] > p[1] && orient(a, b, p) > T::zero() {
                w += 1;
            }
        } else if b[1] <= p[1] && orient(a, b, p) < T::zero() {
            w -= 1;
        }
    }
    w
}

/// Minimum distance from `p` to the polyline boundary.
pub fn boundary_dist<T: Real>(pts: &[P2<T>], p: P2<T>) -> T {
    let n = pts.len();
    (0..n)
        .map(|i| point_segment_dist(p, pts[i], pts[(i + 1) % n]))
        .fold(T::infinity(), T::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: [[f64; 2]; 4] = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];

    #[test]
    fn area_and_winding() {
        assert_eq!(signed_area(&SQUARE), 1.0);
        assert_eq!(winding_number(&SQUARE, [0.5, 0.5]), 1);
        assert_eq!(winding_number(&SQUARE, [1.5, 0.5]), 0);
        let mut cw = SQUARE;
        cw.reverse();
        assert_eq!(winding_number(&cw, [0.5, 0.5]), -1);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&SQUARE, 1e-12));
        let bowtie = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(!is_simple(&bowtie, 1e-12));
        let spike = [[0.0, 0.0], [1.0, 0.0], [0.5, 0.0], [0.5, 1.0]];
        assert!(!is_simple(&spike, 1e-12));
    }

    #[test]
    fn distances() {
        assert_eq!(point_segment_dist([0.5, 1.0], [0.0, 0.0], [1.0, 0.0]), 1.0);
        assert_eq!(point_segment_dist([2.0, 0.0], [0.0, 0.0], [1.0, 0.0]), 1.0);
        assert_eq!(boundary_dist(&SQUARE, [0.5, 0.25]), 0.25);
    }
}
