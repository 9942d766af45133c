//! Right-angled hexagon and pentagon trigonometry for hyperbolic pairs of pants.
//!
//! Every length passed in or returned here is a *full* curve length unless the
//! parameter name says otherwise (`half_*`, `portion`). Half-lengths only show
//! up inside the formulas.
//!
//! A pair of pants with cuffs `alpha`, `beta`, `gamma` is the double of a
//! right-angled hexagon whose alternating sides are the half cuffs. Inside it
//! live two seams used throughout the crate:
//!
//! * `c`, the simple perpendicular between cuffs `alpha` and `beta`;
//! * `h`, the simple perpendicular from `gamma` back to itself. It crosses `c`
//!   at a right angle and splits `gamma / 2` into `x_alpha + x_beta`.

use thiserror::Error;
use twofloat::TwoFloat;

use crate::dd;

/// `arcsinh(1)`, the half-width at which `cosh(2 r) = 3`.
pub const ARCSINH_ONE: f64 = 0.881_373_587_019_543_f64;

/// Largest length accepted by the kernel. `cosh` overflows doubles near 710 and
/// the hexagon identity multiplies several of them together.
pub const MAX_LENGTH: f64 = 50.0;

/// Seam length threshold `2 arcsinh(1)` below which a seam controls its cuffs.
pub fn seam_threshold() -> f64 {
    2.0 * 1f64.asinh()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Result<Self, TrigError> {
        if !(rel > 0.0 && rel.is_finite() && abs > 0.0 && abs.is_finite()) {
            return Err(TrigError::InvalidTolerance { rel, abs });
        }
        Ok(Self { rel, abs })
    }

    /// `|a - b| <= abs + rel * max(|a|, |b|)`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrigError {
    #[error("no right-angled hexagon: cosh of the opposite side would be {argument}")]
    DegenerateHexagon { argument: f64 },
    #[error("length {value} exceeds the supported cap {MAX_LENGTH}")]
    Overflow { value: f64 },
    #[error("length {value} for `{name}` must be finite and strictly positive")]
    InvalidLength { name: &'static str, value: f64 },
    #[error("tolerance must be positive and finite (rel = {rel}, abs = {abs})")]
    InvalidTolerance { rel: f64, abs: f64 },
}

fn check_length(name: &'static str, value: f64) -> Result<f64, TrigError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(TrigError::InvalidLength { name, value });
    }
    if value > MAX_LENGTH {
        return Err(TrigError::Overflow { value });
    }
    Ok(value)
}

/// `arccosh` that clamps the window `[1 - abs, 1]` to zero instead of
/// returning NaN. Anything further below one is a degenerate configuration.
pub fn clamped_acosh(argument: f64, tol: &Tolerance) -> Result<f64, TrigError> {
    if argument.is_nan() || argument < 1.0 - tol.abs {
        return Err(TrigError::DegenerateHexagon { argument });
    }
    if argument <= 1.0 {
        return Ok(0.0);
    }
    Ok(argument.acosh())
}

/// Three positive cuff lengths of a pair of pants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuffTriple {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl CuffTriple {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self, TrigError> {
        Ok(Self {
            alpha: check_length("alpha", alpha)?,
            beta: check_length("beta", beta)?,
            gamma: check_length("gamma", gamma)?,
        })
    }
}

/// The seam `h` from `gamma` to itself together with the split of `gamma / 2`
/// at the point where `h` crosses the seam `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeamPair {
    pub c: f64,
    pub h: f64,
    pub x_alpha: f64,
    pub x_beta: f64,
}

/// Hexagon identity: given two alternating sides `a`, `b` of a right-angled
/// hexagon and the side `side_c` between them, returns the side opposite
/// `side_c`:
///
/// `cosh ĉ = sinh a sinh b cosh C - cosh a cosh b`.
///
/// Evaluated in double-double, since the two products cancel to a few units
/// when `a`, `b` are long. A result of exactly `0.0` means the hexagon
/// degenerates (argument within `tol.abs` of one).
pub fn hexagon_opposite_side(
    a: f64,
    b: f64,
    side_c: f64,
    tol: &Tolerance,
) -> Result<f64, TrigError> {
    check_length("a", a)?;
    check_length("b", b)?;
    check_length("c", side_c)?;
    let arg = dd::hexagon_opposite_cosh(a, b, side_c);
    clamped_acosh(arg.into(), tol)?;
    Ok(if f64::from(arg) <= 1.0 {
        0.0
    } else {
        dd::acosh(arg).into()
    })
}

/// The raw right-hand side of the hexagon identity, without validation.
pub fn hexagon_opposite_cosh(a: f64, b: f64, side_c: f64) -> f64 {
    dd::hexagon_opposite_cosh(a, b, side_c).into()
}

/// Length of the simple seam between cuffs `alpha` and `beta`.
pub fn seam_between_cuffs(cuffs: &CuffTriple) -> Result<f64, TrigError> {
    let CuffTriple { alpha, beta, gamma } = CuffTriple::new(cuffs.alpha, cuffs.beta, cuffs.gamma)?;
    Ok(dd::seam(alpha, beta, gamma).into())
}

/// The seam `h` from `gamma` to itself and the split of `gamma / 2` it makes.
///
/// `h` cuts the hexagon into two right-angled pentagons. The one containing
/// `alpha / 2` has sides `x_alpha`, `s`, `alpha / 2`, a part of the seam `c`,
/// and `h / 2`, where `s` is the seam between `gamma` and `alpha`, so
/// `cosh(h/2) = sinh s sinh(alpha/2)` and `sinh x_alpha sinh(h/2) = cosh(alpha/2)`.
pub fn seam_to_cuff(cuffs: &CuffTriple) -> Result<SeamPair, TrigError> {
    let CuffTriple { alpha, beta, gamma } = CuffTriple::new(cuffs.alpha, cuffs.beta, cuffs.gamma)?;
    let s = dd::seam(gamma, alpha, beta);
    let (_, sinh_s) = dd::cosh_sinh(s);
    let (cosh_ha, sinh_ha) = dd::cosh_sinh(TwoFloat::from(alpha / 2.0));
    let cosh_half_h = sinh_s * sinh_ha;
    let half_h = dd::acosh(cosh_half_h);
    let sinh_half_h = (cosh_half_h * cosh_half_h - 1.0).sqrt();
    let x_alpha = dd::asinh(dd::div(cosh_ha, sinh_half_h));
    // Take x_beta from the sum so the split is exact; the pentagon residual is
    // then carried by the second relation alone.
    let x_beta = TwoFloat::from(gamma / 2.0) - x_alpha;
    Ok(SeamPair {
        c: dd::seam(alpha, beta, gamma).into(),
        h: (half_h * 2.0).into(),
        x_alpha: x_alpha.into(),
        x_beta: x_beta.into(),
    })
}

/// Area `sinh(r) * boundary_length` of the embedded `r`-neighbourhood of a
/// geodesic boundary.
pub fn collar_area(boundary_length: f64, r: f64) -> f64 {
    r.sinh() * boundary_length
}

/// `arcsinh(area / boundary_length)`: the boundary neighbourhood stops being
/// embedded strictly before this radius.
pub fn embedded_radius_bound(boundary_length: f64, area: f64) -> f64 {
    (area / boundary_length).asinh()
}

/// Third cuff of the pants spanned by cuffs `alpha`, `beta` joined by a seam of
/// length `seam`. Returns `None` when the hexagon degenerates
/// (`arccosh` argument `<= 1 + tol.abs`).
pub fn cuff_from_seam(alpha: f64, beta: f64, seam: f64, tol: &Tolerance) -> (f64, Option<f64>) {
    let arg_dd = dd::hexagon_opposite_cosh(alpha / 2.0, beta / 2.0, seam);
    let arg = f64::from(arg_dd);
    if arg.is_nan() || arg <= 1.0 + tol.abs {
        (arg, None)
    } else {
        (arg, Some(f64::from(dd::acosh(arg_dd) * 2.0)))
    }
}

/// Cuff cut off by a self-seam of length `arc` whose feet bound a sub-arc of
/// the boundary of length `2 * half_portion`:
/// `cosh(len / 2) = sinh(half_portion) sinh(arc / 2)`.
pub fn cuff_from_self_seam(half_portion: f64, arc: f64, tol: &Tolerance) -> (f64, Option<f64>) {
    let arg = half_portion.sinh() * (arc / 2.0).sinh();
    if arg.is_nan() || arg <= 1.0 + tol.abs {
        (arg, None)
    } else {
        (arg, Some(2.0 * arg.acosh()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    // Bisection on the hexagon identity, independent of the closed form used
    // by `seam_between_cuffs`.
    fn seam_by_bisection(alpha: f64, beta: f64, gamma: f64) -> f64 {
        let target = (gamma / 2.0).cosh();
        let (mut lo, mut hi) = (0.0f64, 60.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = (alpha / 2.0).sinh() * (beta / 2.0).sinh() * mid.cosh()
                - (alpha / 2.0).cosh() * (beta / 2.0).cosh();
            if v < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn arcsinh_one_constant() {
        assert!((ARCSINH_ONE - 1f64.asinh()).abs() < 1e-15);
        assert!(((2.0 * ARCSINH_ONE).cosh() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hexagon_at_threshold_is_degenerate_zero() {
        let a = 1f64.asinh();
        let side = hexagon_opposite_side(a, a, 2.0 * a, &tol()).unwrap();
        assert!(side < 1e-7, "{side}");
    }

    #[test]
    fn hexagon_unit_sides() {
        // sinh(1)^2 cosh(2) - cosh(1)^2 = 2.8148...; arccosh evaluated with mpmath.
        let side = hexagon_opposite_side(1.0, 1.0, 2.0, &tol()).unwrap();
        assert!((hexagon_opposite_cosh(1.0, 1.0, 2.0) - 2.814_862_517_920_49).abs() < 1e-12);
        assert!((side - 1.694_901_162_591_703).abs() < 1e-12, "{side}");
    }

    #[test]
    fn hexagon_short_side_is_degenerate() {
        let err = hexagon_opposite_side(1.0, 1.0, 0.1, &tol()).unwrap_err();
        assert!(matches!(err, TrigError::DegenerateHexagon { argument } if argument < 1.0));
    }

    #[test]
    fn hexagon_rejects_huge_and_bad_lengths() {
        assert!(matches!(
            hexagon_opposite_side(51.0, 1.0, 1.0, &tol()),
            Err(TrigError::Overflow { .. })
        ));
        assert!(matches!(
            hexagon_opposite_side(-1.0, 1.0, 1.0, &tol()),
            Err(TrigError::InvalidLength { .. })
        ));
        assert!(matches!(
            hexagon_opposite_side(f64::NAN, 1.0, 1.0, &tol()),
            Err(TrigError::InvalidLength { .. })
        ));
    }

    #[test]
    fn seam_symmetric_closed_form() {
        let l = 2.0 * 2f64.acosh();
        let c = seam_between_cuffs(&CuffTriple::new(l, l, l).unwrap()).unwrap();
        assert!((c - 2f64.acosh()).abs() < 1e-12);
        assert!((c - seam_by_bisection(l, l, l)).abs() < 1e-9);
    }

    #[test]
    fn seam_matches_bisection_oracle() {
        for &(a, b, g) in &[(0.3, 4.0, 1.0), (7.0, 0.2, 12.0), (1.0, 1.0, 19.5)] {
            let c = seam_between_cuffs(&CuffTriple::new(a, b, g).unwrap()).unwrap();
            assert!((c - seam_by_bisection(a, b, g)).abs() < 1e-9, "{a} {b} {g}");
        }
    }

    #[test]
    fn seam_roundtrip_and_symmetry() {
        let cuffs = CuffTriple::new(1.3, 2.7, 4.1).unwrap();
        let c = seam_between_cuffs(&cuffs).unwrap();
        let half = hexagon_opposite_side(1.3 / 2.0, 2.7 / 2.0, c, &tol()).unwrap();
        assert!((half - 4.1 / 2.0).abs() < 1e-10);
        let swapped = seam_between_cuffs(&CuffTriple::new(2.7, 1.3, 4.1).unwrap()).unwrap();
        assert!((swapped - c).abs() < 1e-14);
    }

    #[test]
    fn seam_to_cuff_symmetric_closed_form() {
        let alpha = 2.0 * 2f64.acosh();
        let gamma = 4.0 * 2f64.asinh();
        let s = seam_to_cuff(&CuffTriple::new(alpha, alpha, gamma).unwrap()).unwrap();
        assert!((s.h - 2.0 * 1f64.asinh()).abs() < 1e-10, "{}", s.h);
        assert!((s.x_alpha - 2f64.asinh()).abs() < 1e-10);
        assert!((s.x_beta - 2f64.asinh()).abs() < 1e-10);
        // self seam right at the threshold
        assert!(2.0 * alpha < gamma);
        assert!((2.0 * alpha - 5.267_831_587_699_267).abs() < 1e-12);
        assert!((gamma - 5.774_541_900_715_241).abs() < 1e-12);
    }

    #[test]
    fn seam_to_cuff_splits_symmetrically() {
        let s = seam_to_cuff(&CuffTriple::new(3.0, 3.0, 1.7).unwrap()).unwrap();
        assert!((s.x_alpha - 1.7 / 4.0).abs() < 1e-10);
        assert!((s.x_beta - 1.7 / 4.0).abs() < 1e-10);
    }

    #[test]
    fn seam_to_cuff_residuals() {
        let cuffs = CuffTriple::new(0.4, 9.0, 3.3).unwrap();
        let s = seam_to_cuff(&cuffs).unwrap();
        let r1 = s.x_alpha.sinh() * (s.h / 2.0).sinh() / (0.2f64).cosh() - 1.0;
        let r2 = s.x_beta.sinh() * (s.h / 2.0).sinh() / (4.5f64).cosh() - 1.0;
        assert!(r1.abs() < 1e-9 && r2.abs() < 1e-9, "{r1} {r2}");
        assert!((s.x_alpha + s.x_beta - 1.65).abs() < 1e-12);
    }

    #[test]
    fn collar_and_radius() {
        assert_eq!(collar_area(3.0, 0.0), 0.0);
        assert!((collar_area(1.0, 1f64.asinh()) - 1.0).abs() < 1e-15);
        assert!((collar_area(2.5, 0.7) - 1.896_459_254_598_834).abs() < 1e-12);
        let pi = std::f64::consts::PI;
        assert!((embedded_radius_bound(4.0 * pi, 4.0 * pi) - 0.881_373_587_019_543).abs() < 1e-12);
        assert!(
            (embedded_radius_bound(8.0 * pi, 4.0 * pi) - 0.481_211_825_059_603_4).abs() < 1e-12
        );
    }

    #[test]
    fn hexagon_increasing_in_side() {
        let mut prev = 0.0;
        for k in 1..200 {
            let c = 1.0 + k as f64 * 0.05;
            let v = hexagon_opposite_side(1.5, 2.0, c, &tol()).unwrap();
            assert!(v >= prev);
            if prev > 0.0 {
                assert!(v > prev);
            }
            prev = v;
        }
    }

    #[test]
    fn cuff_formulas_degenerate_at_threshold() {
        let t = 2.0 * 1f64.asinh();
        assert!(cuff_from_seam(t, t, t, &tol()).1.is_none());
        let (arg, len) = cuff_from_seam(4.0, 4.0, t, &tol());
        assert!((arg - 25.308_232_836_016_49).abs() < 1e-9, "{arg}");
        assert!((len.unwrap() - 7.847_772_774_338_044).abs() < 1e-9);
    }
}
