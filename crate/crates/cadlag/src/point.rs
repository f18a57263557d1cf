//! Path values: points of R^1 or R^2 with the Euclidean norm.
//!
//! Both dimensions share one copyable struct so path code does not need to be
//! generic. The dimension travels with the value; paths enforce that all their
//! values agree.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    c: [f64; 2],
    dim: u8,
}

impl Point {
    pub fn scalar(x: f64) -> Self {
        Point { c: [x, 0.0], dim: 1 }
    }

    pub fn planar(x: f64, y: f64) -> Self {
        Point { c: [x, y], dim: 2 }
    }

    pub fn zero(dim: usize) -> Self {
        debug_assert!(dim == 1 || dim == 2);
        Point { c: [0.0, 0.0], dim: dim as u8 }
    }

    pub fn dim(self) -> usize {
        self.dim as usize
    }

    /// First coordinate; the value itself for scalar points.
    pub fn x(self) -> f64 {
        self.c[0]
    }

    /// Second coordinate; 0 for scalar points.
    pub fn y(self) -> f64 {
        self.c[1]
    }

    pub fn coord(self, i: usize) -> f64 {
        debug_assert!(i < self.dim());
        self.c[i]
    }

    pub fn coords(self) -> Vec<f64> {
        self.c[..self.dim()].to_vec()
    }

    pub fn is_finite(self) -> bool {
        self.c[..self.dim()].iter().all(|v| v.is_finite())
    }

    pub fn dot(self, o: Point) -> f64 {
        debug_assert_eq!(self.dim, o.dim);
        self.c[0] * o.c[0] + self.c[1] * o.c[1]
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        if self.dim == 1 {
            self.c[0].abs()
        } else {
            self.norm_sq().sqrt()
        }
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        debug_assert_eq!(self.dim, o.dim);
        Point { c: [self.c[0] + o.c[0], self.c[1] + o.c[1]], dim: self.dim }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        debug_assert_eq!(self.dim, o.dim);
        Point { c: [self.c[0] - o.c[0], self.c[1] - o.c[1]], dim: self.dim }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point { c: [self.c[0] * s, self.c[1] * s], dim: self.dim }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}
