//! Exact planar geometry on rational points.
//!
//! All orientation decisions use exact cross products, so no sign is ever
//! decided by floating-point rounding.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format, parse, Rational};

/// A point (or vector) in the plane with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, c: &Rational) -> Point {
        Point::new(&self.x * c, &self.y * c)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format(&self.x), format(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Ok(Point::new(
            parse(&x).map_err(serde::de::Error::custom)?,
            parse(&y).map_err(serde::de::Error::custom)?,
        ))
    }
}

/// Cross product `a × b`.
pub fn cross(a: &Point, b: &Point) -> Rational {
    &a.x * &b.y - &a.y * &b.x
}

/// Dot product.
pub fn dot(a: &Point, b: &Point) -> Rational {
    &a.x * &b.x + &a.y * &b.y
}

/// Sign of `a × b` as −1, 0 or 1.
pub fn cross_sign(a: &Point, b: &Point) -> i8 {
    let c = cross(a, b);
    if c.is_zero() {
        0
    } else if c.is_positive() {
        1
    } else {
        -1
    }
}

/// Orientation of the triple `(a, b, c)`: 1 for counterclockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    cross_sign(&b.sub(a), &c.sub(a))
}

fn half(v: &Point) -> u8 {
    if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Total order of nonzero directions by counterclockwise angle from the
/// positive x axis.
pub fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    half(a)
        .cmp(&half(b))
        .then_with(|| match cross_sign(a, b) {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        })
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p) == 0
        && dot(&p.sub(a), &p.sub(b)) <= Rational::zero()
}

/// Whether closed segments `[a, b]` and `[c, d]` share at least one point.
pub fn segments_meet(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Whether the ray from `origin` in direction `dir` (origin excluded) meets
/// the point `p`.
pub fn ray_contains(origin: &Point, dir: &Point, p: &Point) -> bool {
    let v = p.sub(origin);
    !v.is_zero() && cross(dir, &v).is_zero() && dot(dir, &v).is_positive()
}

/// How the ray from `origin` along `dir` meets the segment `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayHit {
    /// No common point.
    Miss,
    /// Transversal crossing in the relative interior of both.
    Cross,
    /// The ray passes through an endpoint of the segment, runs along it, or
    /// the segment passes through the ray origin.
    Degenerate,
}

/// Classifies the intersection of a ray (origin excluded) with a segment.
pub fn ray_segment(origin: &Point, dir: &Point, a: &Point, b: &Point) -> RayHit {
    let sa = cross_sign(dir, &a.sub(origin));
    let sb = cross_sign(dir, &b.sub(origin));
    if sa == 0 && sb == 0 {
        // Collinear with the ray's line.
        let ta = dot(dir, &a.sub(origin));
        let tb = dot(dir, &b.sub(origin));
        return if ta.is_positive() || tb.is_positive() {
            RayHit::Degenerate
        } else {
            RayHit::Miss
        };
    }
    if sa * sb > 0 {
        return RayHit::Miss;
    }
    // The segment crosses the ray's supporting line at a single point q;
    // locate q along the ray: q = a + s (b - a), s = (dir × (origin - a)) / (dir × (b - a)).
    let ab = b.sub(a);
    let s = cross(dir, &origin.sub(a)) / cross(dir, &ab);
    let q = a.add(&ab.scale(&s));
    let t = dot(dir, &q.sub(origin));
    if t.is_negative() {
        return RayHit::Miss;
    }
    if t.is_zero() || sa == 0 || sb == 0 {
        return RayHit::Degenerate;
    }
    RayHit::Cross
}
