//! Axes of hyperbolic elements and the relative position of two axes.
//!
//! Everything is computed in the frame of the first axis: a normalizer sends
//! it to the upward imaginary axis, where the second axis becomes a pair of
//! real endpoints `(u, v)` and the classical formulas are well conditioned.

use twofloat::TwoFloat;

use crate::dd;
use crate::isometry::{BoundaryPoint, Isometry, IsometryError};
use crate::surface::HolonomyRep;
use crate::word::Word;

use super::enumerate::for_each_reduced_word;
use super::{EnumerationPolicy, SpectraError};

/// A projective vector kept at double-double precision.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DdPoint {
    pub x: TwoFloat,
    pub y: TwoFloat,
}

impl DdPoint {
    pub fn image(self, m: &Isometry) -> DdPoint {
        let [a, b, c, d] = m.entries_dd();
        DdPoint {
            x: a * self.x + b * self.y,
            y: c * self.x + d * self.y,
        }
    }

    pub fn to_boundary(self) -> BoundaryPoint {
        let n = (self.x * self.x + self.y * self.y).sqrt();
        BoundaryPoint::from_vector(dd::div(self.x, n).into(), dd::div(self.y, n).into())
    }

    /// Unit vector in `f64`, sign-normalized like [`BoundaryPoint`].
    pub fn unit(self) -> (f64, f64) {
        self.to_boundary().vector()
    }
}

/// Oriented axis of a hyperbolic element: from the repelling to the attracting
/// fixed point, which is also the direction of translation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Axis {
    pub attracting: DdPoint,
    pub repelling: DdPoint,
}

impl Axis {
    pub fn of(m: &Isometry) -> Result<Axis, IsometryError> {
        let [a, b, c, d] = m.entries_dd();
        let tr = a + d;
        if f64::from(tr.abs()).partial_cmp(&2.0) != Some(std::cmp::Ordering::Greater) {
            return Err(IsometryError::NotHyperbolic {
                trace: tr.abs().into(),
            });
        }
        let disc = (tr * tr - 4.0).sqrt();
        let big = if tr.hi() > 0.0 {
            (tr + disc) / 2.0
        } else {
            (tr - disc) / 2.0
        };
        let small = dd::div(TwoFloat::from(1.0), big);
        let eigvec = |l: TwoFloat| {
            let p = DdPoint { x: b, y: l - a };
            let q = DdPoint { x: l - d, y: c };
            let np = f64::from(p.x * p.x + p.y * p.y);
            let nq = f64::from(q.x * q.x + q.y * q.y);
            if np >= nq {
                p
            } else {
                q
            }
        };
        Ok(Axis {
            attracting: eigvec(big),
            repelling: eigvec(small),
        })
    }

    pub fn image(&self, m: &Isometry) -> Axis {
        Axis {
            attracting: self.attracting.image(m),
            repelling: self.repelling.image(m),
        }
    }

    /// Isometry sending `repelling -> 0` and `attracting -> infinity`.
    pub fn normalizer(&self) -> Isometry {
        let (mut tx, mut ty) = (self.attracting.x, self.attracting.y);
        let (fx, fy) = (self.repelling.x, self.repelling.y);
        let mut det = tx * fy - fx * ty;
        if det.hi() < 0.0 {
            tx = -tx;
            ty = -ty;
            det = -det;
        }
        let s = det.sqrt();
        Isometry::from_dd(
            dd::div(tx, s),
            dd::div(fx, s),
            dd::div(ty, s),
            dd::div(fy, s),
        )
        .inverse()
    }
}

/// Position of a line relative to the upward imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Relation {
    /// Disjoint, with the distance between the two lines.
    Disjoint(f64),
    Cross,
    /// Sharing an endpoint (including the same line).
    Asymptotic,
}

/// Relation between the imaginary axis and the line through `p` and `q`,
/// given as unit vectors.
pub(crate) fn relation_to_imaginary_axis(p: (f64, f64), q: (f64, f64)) -> Relation {
    const TOUCH: f64 = 1e-14;
    if p.0.abs() < TOUCH || p.1.abs() < TOUCH || q.0.abs() < TOUCH || q.1.abs() < TOUCH {
        return Relation::Asymptotic;
    }
    let (sp, sq) = (p.0 * p.1, q.0 * q.1);
    if (sp < 0.0) != (sq < 0.0) {
        return Relation::Cross;
    }
    // With u = x/y: cosh d = |u + v| / |u - v|, multiplied through by y_u y_v.
    let num = (p.0 * q.1 + q.0 * p.1).abs();
    let den = (p.0 * q.1 - q.0 * p.1).abs();
    if den == 0.0 {
        return Relation::Asymptotic;
    }
    Relation::Disjoint((num / den).max(1.0).acosh())
}

/// Attracting and repelling fixed points of a hyperbolic isometry, in that order.
pub fn axis_endpoints(m: &Isometry) -> Result<(BoundaryPoint, BoundaryPoint), SpectraError> {
    let axis = Axis::of(m)?;
    Ok((axis.attracting.to_boundary(), axis.repelling.to_boundary()))
}

/// Length of the common perpendicular between the axes of `m1` and `m2`.
pub fn distance_between_axes(m1: &Isometry, m2: &Isometry) -> Result<f64, SpectraError> {
    let a1 = Axis::of(m1)?;
    let a2 = Axis::of(m2)?;
    let n = a1.normalizer();
    let image = a2.image(&n);
    match relation_to_imaginary_axis(image.repelling.unit(), image.attracting.unit()) {
        Relation::Disjoint(d) => Ok(d),
        Relation::Cross => Err(SpectraError::AxesCross),
        Relation::Asymptotic => Err(SpectraError::AxesAsymptotic),
    }
}

/// Whether some translate `h axis(v)`, `h` a reduced word of length at most
/// `policy.conjugator_cutoff`, crosses `axis(u)`. Translates that coincide with
/// `axis(u)` are skipped, so a simple class does not cross itself.
///
/// A crossing found is real; a crossing between lifts beyond the cutoff is
/// missed.
pub fn axes_cross(
    rep: &HolonomyRep,
    u: &Word,
    v: &Word,
    policy: &EnumerationPolicy,
) -> Result<bool, SpectraError> {
    let mu = rep.evaluate(u)?;
    let mv = rep.evaluate(v)?;
    let au = Axis::of(&mu)?;
    let av = Axis::of(&mv)?;
    let frame = au.normalizer();
    let mut crossed = false;
    for_each_reduced_word(rep, policy.conjugator_cutoff, |_, h| {
        if crossed {
            return false;
        }
        let line = av.image(&(frame * *h));
        if relation_to_imaginary_axis(line.repelling.unit(), line.attracting.unit())
            == Relation::Cross
        {
            crossed = true;
        }
        true
    });
    Ok(crossed)
}

/// Sign of the side of the oriented line `from -> to` on which `z` lies:
/// negative on the left, positive on the right, zero on the line.
pub(crate) fn side_of(from: (f64, f64), to: (f64, f64), z: num_complex::Complex64) -> f64 {
    let (ux, uy) = from;
    let (vx, vy) = to;
    let det = vx * uy - ux * vy;
    let (x, y) = (z.re, z.im);
    det.signum() * ((uy * x - ux) * (vx - vy * x) - uy * vy * y * y)
}
