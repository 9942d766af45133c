//! Double-double arithmetic helpers.
//!
//! Generators of a surface group can have entries in the millions when the
//! base point is far from a curve, so products of them lose every digit in
//! `f64`. Group elements are kept at double-double precision; `twofloat`
//! supplies the arithmetic, and the functions here cover the cases where its
//! own division and transcendental functions stop near `f64` accuracy.

use twofloat::TwoFloat;

const LN2_HI: f64 = std::f64::consts::LN_2;
const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;

/// Quotient by long division; `TwoFloat`'s own division keeps only about
/// `f64` accuracy.
pub(crate) fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

/// `e^x` to double-double accuracy.
pub(crate) fn exp(x: TwoFloat) -> TwoFloat {
    let k = (x.hi() / LN2_HI).round();
    let r = x - TwoFloat::new_add(LN2_HI, LN2_LO) * k;
    let r = r / 1024.0;
    let mut term = TwoFloat::from(1.0);
    let mut sum = TwoFloat::from(1.0);
    for n in 1..14 {
        term = div(term * r, TwoFloat::from(n as f64));
        sum += term;
    }
    for _ in 0..10 {
        sum = sum * sum;
    }
    sum * 2f64.powi(k as i32)
}

/// Natural logarithm of a positive value, by one Newton step on [`exp`].
pub(crate) fn ln(y: TwoFloat) -> TwoFloat {
    let z = TwoFloat::from(f64::from(y).ln());
    z + y * exp(-z) - 1.0
}

pub(crate) fn acosh(y: TwoFloat) -> TwoFloat {
    ln(y + (y * y - 1.0).sqrt())
}

pub(crate) fn asinh(y: TwoFloat) -> TwoFloat {
    ln(y + (y * y + 1.0).sqrt())
}

/// `(cosh x, sinh x)`.
pub(crate) fn cosh_sinh(x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let e = exp(x);
    let inv = div(TwoFloat::from(1.0), e);
    ((e + inv) / 2.0, (e - inv) / 2.0)
}

fn half(x: f64) -> (TwoFloat, TwoFloat) {
    cosh_sinh(TwoFloat::from(x) / 2.0)
}

/// Common perpendicular between the first two cuffs of pants with cuffs
/// `alpha`, `beta`, `gamma`.
pub(crate) fn seam(alpha: f64, beta: f64, gamma: f64) -> TwoFloat {
    let (ca, sa) = half(alpha);
    let (cb, sb) = half(beta);
    let (cg, _) = half(gamma);
    acosh(div(cg + ca * cb, sa * sb))
}

/// `sinh a sinh b cosh c - cosh a cosh b`, the cosine of the hexagon side
/// opposite `c`; the two products nearly cancel when `a`, `b` are long and the
/// result is small.
pub(crate) fn hexagon_opposite_cosh(a: f64, b: f64, c: f64) -> TwoFloat {
    let (ca, sa) = cosh_sinh(TwoFloat::from(a));
    let (cb, sb) = cosh_sinh(TwoFloat::from(b));
    let (cc, _) = cosh_sinh(TwoFloat::from(c));
    sa * sb * cc - ca * cb
}
