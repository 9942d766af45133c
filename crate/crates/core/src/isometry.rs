//! Orientation-preserving isometries of the upper half-plane as unimodular
//! 2x2 real matrices, and points of the circle at infinity.
//!
//! Matrix entries are stored in double-double precision so that long products
//! of generators with large entries keep their traces accurate.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use thiserror::Error;
use twofloat::TwoFloat;

use crate::dd;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IsometryError {
    #[error("determinant {det} is not 1")]
    NotUnimodular { det: f64 },
    #[error("element with |trace| = {trace} is not hyperbolic")]
    NotHyperbolic { trace: f64 },
}

/// A matrix `[[a, b], [c, d]]` with `ad - bc = 1`, acting by `z -> (az + b) / (cz + d)`.
///
/// Matrices are kept in `SL(2, R)`; `m` and `-m` describe the same isometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    a: TwoFloat,
    b: TwoFloat,
    c: TwoFloat,
    d: TwoFloat,
}

fn tf(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        a: TwoFloat::from_f64(1.0),
        b: TwoFloat::from_f64(0.0),
        c: TwoFloat::from_f64(0.0),
        d: TwoFloat::from_f64(1.0),
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, IsometryError> {
        let m = Self::from_entries(a, b, c, d);
        let det = m.det();
        if !det.is_finite() || (det - 1.0).abs() > 1e-10 {
            return Err(IsometryError::NotUnimodular { det });
        }
        Ok(m)
    }

    pub(crate) fn from_entries(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::from_dd(tf(a), tf(b), tf(c), tf(d))
    }

    pub(crate) const fn from_dd(a: TwoFloat, b: TwoFloat, c: TwoFloat, d: TwoFloat) -> Self {
        Self { a, b, c, d }
    }

    /// Translation by `t` along the imaginary axis towards infinity.
    pub fn translation(t: f64) -> Self {
        let e = dd::exp(tf(t) / 2.0);
        Self::from_dd(e, tf(0.0), tf(0.0), dd::div(tf(1.0), e))
    }

    /// Translation by a double-double length.
    pub(crate) fn translation_dd(t: TwoFloat) -> Self {
        let e = dd::exp(t / 2.0);
        Self::from_dd(e, tf(0.0), tf(0.0), dd::div(tf(1.0), e))
    }

    /// Counter-clockwise rotation by `angle` about `i`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Self::from_entries(c, s, -s, c)
    }

    /// Rotation by a right angle about `i`, exact to double-double precision.
    pub fn quarter_turn() -> Self {
        let s = tf(0.5).sqrt();
        Self::from_dd(s, s, -s, s)
    }

    /// Rotation by `pi` about `i`.
    pub fn half_turn() -> Self {
        Self::from_entries(0.0, 1.0, -1.0, 0.0)
    }

    /// Translation by `t` along the geodesic through `i` perpendicular to the
    /// imaginary axis, towards `+1`.
    pub fn transvection(t: f64) -> Self {
        let e = dd::exp(tf(t) / 2.0);
        let inv = dd::div(tf(1.0), e);
        let (c, s) = ((e + inv) / 2.0, (e - inv) / 2.0);
        Self::from_dd(c, s, s, c)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a.into(), self.b.into(), self.c.into(), self.d.into()]
    }

    pub(crate) fn entries_dd(&self) -> [TwoFloat; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> f64 {
        (self.a * self.d - self.b * self.c).into()
    }

    pub fn trace(&self) -> f64 {
        (self.a + self.d).into()
    }

    pub(crate) fn trace_dd(&self) -> TwoFloat {
        self.a + self.d
    }

    /// `a^2 + b^2 + c^2 + d^2`, which is `2 cosh` of the distance `i` moves.
    pub fn norm2(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).into()
    }

    pub fn inverse(&self) -> Self {
        Self::from_dd(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> Self {
        Self::from_dd(-self.a, -self.b, -self.c, -self.d)
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_entry_diff(&self, other: &Isometry) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0f64, |m, x| m.max(f64::from(*x).abs()))
    }

    /// Distance to `other` in `PSL(2, R)`: the smaller of the entry distances
    /// to `other` and `-other`.
    pub fn projective_diff(&self, other: &Isometry) -> f64 {
        self.max_entry_diff(other)
            .min(self.max_entry_diff(&other.neg()))
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let [a, b, c, d] = self.entries();
        (z * a + b) / (z * c + d)
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        let (x, y) = (tf(p.x), tf(p.y));
        let u = self.a * x + self.b * y;
        let v = self.c * x + self.d * y;
        BoundaryPoint::from_dd(u, v)
    }

    /// Translation length `2 arccosh(|tr| / 2)`.
    pub fn translation_length(&self, abs_tol: f64) -> Result<f64, IsometryError> {
        trace_length(self, abs_tol)
    }
}

impl Mul for Isometry {
    type Output = Isometry;

    fn mul(self, o: Isometry) -> Isometry {
        Isometry::from_dd(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Mul for &Isometry {
    type Output = Isometry;

    fn mul(self, o: &Isometry) -> Isometry {
        *self * *o
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries();
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// `2 arccosh(|tr| / 2)` for a hyperbolic element; elliptic and parabolic
/// elements (`|tr| <= 2 + abs_tol`) are rejected.
pub fn trace_length(m: &Isometry, abs_tol: f64) -> Result<f64, IsometryError> {
    let t = m.trace_dd().abs();
    if f64::from(t).partial_cmp(&(2.0 + abs_tol)) != Some(std::cmp::Ordering::Greater) {
        return Err(IsometryError::NotHyperbolic { trace: t.into() });
    }
    Ok(f64::from(dd::acosh(t / 2.0)) * 2.0)
}

/// A point of the real projective line, i.e. the circle at infinity of the
/// upper half-plane, stored as a unit vector `(x, y)` standing for `x / y`.
/// The point at infinity is `(1, 0)`.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryPoint {
    x: f64,
    y: f64,
}

impl BoundaryPoint {
    pub const INFINITY: BoundaryPoint = BoundaryPoint { x: 1.0, y: 0.0 };

    pub fn real(t: f64) -> Self {
        Self::from_vector(t, 1.0)
    }

    pub fn from_vector(x: f64, y: f64) -> Self {
        Self::from_dd(tf(x), tf(y))
    }

    fn from_dd(x: TwoFloat, y: TwoFloat) -> Self {
        let n = (x * x + y * y).sqrt();
        // Fix the sign so that the representative is unique.
        let flip = y.hi() < 0.0 || (y.hi() == 0.0 && x.hi() < 0.0);
        let s = if flip { -1.0 } else { 1.0 };
        Self {
            x: s * f64::from(dd::div(x, n)),
            y: s * f64::from(dd::div(y, n)),
        }
    }

    pub fn vector(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    /// `Some(x / y)`, or `None` for the point at infinity.
    pub fn as_real(&self) -> Option<f64> {
        if self.y == 0.0 {
            None
        } else {
            Some(self.x / self.y)
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.y == 0.0
    }

    /// Chordal closeness on the projective line.
    pub fn distance(&self, other: &BoundaryPoint) -> f64 {
        bracket(*self, *other).abs()
    }
}

impl PartialEq for BoundaryPoint {
    fn eq(&self, other: &Self) -> bool {
        bracket(*self, *other) == 0.0
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_real() {
            Some(t) => write!(f, "{t}"),
            None => write!(f, "inf"),
        }
    }
}

/// The determinant `[p, q] = p.x q.y - p.y q.x`.
pub fn bracket(p: BoundaryPoint, q: BoundaryPoint) -> f64 {
    f64::from(tf(p.x) * tf(q.y) - tf(p.y) * tf(q.x))
}

/// Hyperbolic distance between two points of the upper half-plane.
pub fn point_distance(z: Complex64, w: Complex64) -> f64 {
    let d2 = (z - w).norm_sqr();
    (1.0 + d2 / (2.0 * z.im * w.im)).acosh()
}

/// Unimodular map sending `from -> 0` and `to -> infinity`; it carries the
/// oriented geodesic `from -> to` onto the upward imaginary axis.
pub fn normalizer(from: BoundaryPoint, to: BoundaryPoint) -> Isometry {
    // Columns (to, from) map infinity to `to` and 0 to `from`.
    let (tx, ty) = (tf(to.x), tf(to.y));
    let (fx, fy) = (tf(from.x), tf(from.y));
    let det = tx * fy - fx * ty;
    let (tx, ty) = if det.hi() < 0.0 { (-tx, -ty) } else { (tx, ty) };
    let s = det.abs().sqrt();
    Isometry::from_dd(
        dd::div(tx, s),
        dd::div(fx, s),
        dd::div(ty, s),
        dd::div(fy, s),
    )
    .inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_translation_length() {
        let m = Isometry::translation(2.6);
        assert!((trace_length(&m, 1e-12).unwrap() - 2.6).abs() < 1e-15);
        assert!((m.trace() - 3.941_828_460_653_257).abs() < 1e-15);
    }

    #[test]
    fn parabolic_is_not_hyperbolic() {
        let m = Isometry::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            trace_length(&m, 1e-12),
            Err(IsometryError::NotHyperbolic { .. })
        ));
        assert!(Isometry::new(2.0, 0.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn rotation_fixes_i() {
        let r = Isometry::rotation(0.7);
        let z = r.apply(Complex64::new(0.0, 1.0));
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        // a quarter turn sends the upward axis to the unit circle, leftwards
        let q = Isometry::quarter_turn();
        assert!(q.max_entry_diff(&Isometry::rotation(std::f64::consts::FRAC_PI_2)) < 1e-15);
        let w = q.apply(Complex64::new(0.0, 2.0));
        assert!(w.re < 0.0 && (w.norm() - 1.0).abs() < 1e-12);
        assert!(
            Isometry::half_turn().max_entry_diff(&Isometry::rotation(std::f64::consts::PI)) < 1e-15
        );
    }

    #[test]
    fn normalizer_sends_endpoints() {
        let from = BoundaryPoint::real(-0.3);
        let to = BoundaryPoint::real(2.5);
        let n = normalizer(from, to);
        assert!((n.det() - 1.0).abs() < 1e-15);
        assert!(n.apply_boundary(from).as_real().unwrap().abs() < 1e-15);
        assert!(
            n.apply_boundary(to).is_infinite()
                || n.apply_boundary(to).as_real().unwrap().abs() > 1e15
        );
        let n2 = normalizer(BoundaryPoint::INFINITY, BoundaryPoint::real(1.0));
        assert!(
            n2.apply_boundary(BoundaryPoint::INFINITY)
                .as_real()
                .unwrap()
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn long_products_keep_traces() {
        // Conjugating by a far translation and back must not lose the trace.
        let far = Isometry::translation(40.0) * Isometry::quarter_turn();
        let m = far * Isometry::translation(0.7) * far.inverse();
        let back = far.inverse() * m * far;
        assert!(back.max_entry_diff(&Isometry::translation(0.7)) < 1e-12);
        assert!((trace_length(&m, 1e-12).unwrap() - 0.7).abs() < 1e-14);
    }
}
