//! Plane geometry helpers shared by the tracer, zero finder, and partitioner.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle in the s-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Rect {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Self {
        assert!(sigma_min < sigma_max && t_min < t_max, "degenerate rectangle");
        Rect {
            sigma_min,
            sigma_max,
            t_min,
            t_max,
        }
    }

    pub fn from_center(c: Complex64, half_width: f64, half_height: f64) -> Self {
        Rect::new(
            c.re - half_width,
            c.re + half_width,
            c.im - half_height,
            c.im + half_height,
        )
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.sigma_min + self.sigma_max),
            0.5 * (self.t_min + self.t_max),
        )
    }

    pub fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    pub fn height(&self) -> f64 {
        self.t_max - self.t_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, s: Complex64) -> bool {
        s.re >= self.sigma_min && s.re <= self.sigma_max && s.im >= self.t_min && s.im <= self.t_max
    }

    pub fn contains_strict(&self, s: Complex64, margin: f64) -> bool {
        s.re > self.sigma_min + margin
            && s.re < self.sigma_max - margin
            && s.im > self.t_min + margin
            && s.im < self.t_max - margin
    }

    /// Distance from `s` to the boundary (positive inside and outside).
    pub fn boundary_distance(&self, s: Complex64) -> f64 {
        let dx = (self.sigma_min - s.re).max(s.re - self.sigma_max);
        let dy = (self.t_min - s.im).max(s.im - self.t_max);
        if dx <= 0.0 && dy <= 0.0 {
            (-dx).min(-dy)
        } else {
            dx.max(0.0).hypot(dy.max(0.0))
        }
    }

    pub fn inflate(&self, factor: f64) -> Self {
        let c = self.center();
        Rect::new(
            c.re - 0.5 * self.width() * factor,
            c.re + 0.5 * self.width() * factor,
            c.im - 0.5 * self.height() * factor,
            c.im + 0.5 * self.height() * factor,
        )
    }

    /// Corners in positive (counter-clockwise) orientation.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.sigma_min, self.t_min),
            Complex64::new(self.sigma_max, self.t_min),
            Complex64::new(self.sigma_max, self.t_max),
            Complex64::new(self.sigma_min, self.t_max),
        ]
    }

    /// Quadrants around a split point given as fractions of width/height.
    pub fn split_at(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.sigma_min + self.width() * fx;
        let ym = self.t_min + self.height() * fy;
        [
            Rect::new(self.sigma_min, xm, self.t_min, ym),
            Rect::new(xm, self.sigma_max, self.t_min, ym),
            Rect::new(self.sigma_min, xm, ym, self.t_max),
            Rect::new(xm, self.sigma_max, ym, self.t_max),
        ]
    }
}

/// Distance from point `p` to segment [a, b].
pub fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from a point to a polyline.
pub fn point_polyline_distance(p: Complex64, pts: &[Complex64]) -> f64 {
    if pts.is_empty() {
        return f64::INFINITY;
    }
    if pts.len() == 1 {
        return (p - pts[0]).norm();
    }
    pts.windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Intersection of segments [a1,a2] and [b1,b2], if any (proper or endpoint).
pub fn segment_intersection(
    a1: Complex64,
    a2: Complex64,
    b1: Complex64,
    b2: Complex64,
) -> Option<Complex64> {
    let r = a2 - a1;
    let s = b2 - b1;
    let denom = r.re * s.im - r.im * s.re;
    if denom.abs() < 1e-300 {
        return None;
    }
    let qp = b1 - a1;
    let t = (qp.re * s.im - qp.im * s.re) / denom;
    let u = (qp.re * r.im - qp.im * r.re) / denom;
    if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
        Some(a1 + r * t)
    } else {
        None
    }
}

/// Even-odd point-in-polygon test for a closed polygon (last edge implied).
pub fn point_in_polygon(p: Complex64, poly: &[Complex64]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (poly[i], poly[j]);
        if ((pi.im > p.im) != (pj.im > p.im))
            && (p.re < (pj.re - pi.re) * (p.im - pi.im) / (pj.im - pi.im) + pi.re)
        {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Signed area of a closed polygon (positive counter-clockwise).
pub fn polygon_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        acc += a.re * b.im - b.re * a.im;
    }
    0.5 * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_basics() {
        let r = Rect::new(-1.0, 3.0, 0.0, 2.0);
        assert_eq!(r.center(), Complex64::new(1.0, 1.0));
        assert!(r.contains(Complex64::new(0.0, 1.0)));
        assert!(!r.contains(Complex64::new(4.0, 1.0)));
        let q = r.split_at(0.5, 0.5);
        assert_eq!(q[0].sigma_max, 1.0);
        assert!((r.boundary_distance(Complex64::new(1.0, 1.0)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn segment_distance_and_intersection() {
        let d = point_segment_distance(
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        assert!((d - 1.0).abs() < 1e-14);
        let x = segment_intersection(
            Complex64::new(-1.0, -1.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(-1.0, 1.0),
            Complex64::new(1.0, -1.0),
        )
        .unwrap();
        assert!(x.norm() < 1e-14);
    }

    #[test]
    fn polygon_test() {
        let square = [
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(2.0, 2.0),
            Complex64::new(0.0, 2.0),
        ];
        assert!(point_in_polygon(Complex64::new(1.0, 1.0), &square));
        assert!(!point_in_polygon(Complex64::new(3.0, 1.0), &square));
        assert!((polygon_area(&square) - 4.0).abs() < 1e-14);
    }
}
