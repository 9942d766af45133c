//! Boundary peeling: repeatedly cut off the pair of pants spanned by the
//! shortest orthogeodesic of the current piece, until only pants remain.
//!
//! A step along an arc of length `d` between distinct boundaries `alpha`,
//! `beta` produces one curve of length
//! `2 arccosh(sinh(alpha/2) sinh(beta/2) cosh d - cosh(alpha/2) cosh(beta/2))`.
//! An arc from `gamma` back to itself, with feet splitting `gamma` into
//! `2 x_1 + 2 x_2`, produces two curves of lengths `2 arccosh(sinh x_k sinh(d/2))`.
//! Every produced length is also recomputed from the curve's word and the
//! difference is logged.
//!
//! Closed surfaces are first cut along their systole, which must be a curve of
//! the pants graph.

mod report;

use thiserror::Error;

use num_complex::Complex64;

use crate::isometry::{trace_length, Isometry};
use crate::spectra::{
    axis_endpoints, boundary_frame, shortest_orthogeodesic, side_of, systole, ArcType,
    EnumerationPolicy, GeodesicClass, Piece, PieceBoundary, SpectraError,
};
use crate::surface::{cut_along, fn_to_holonomy, CurveId, HolonomyRep, Surface, SurfaceError};
use crate::trig::{cuff_from_seam, cuff_from_self_seam};
use crate::word::Word;

pub use report::{
    verify_bers_bound, Certificate, PeelReport, ReportCurve, StepRecord, SystoleRecord,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeelError {
    #[error("step {step}: new curve degenerates (arccosh argument {argument})")]
    DegenerateCurve { step: usize, argument: f64 },
    #[error("systole {word} (length {length}) is not a curve of the pants graph")]
    SystoleNotDecompositionCurve { word: Word, length: f64 },
    #[error("systole {systole} is not below half the area {area}")]
    Lemma3Violation { systole: f64, area: f64 },
    #[error("surface is closed; cut it first")]
    ClosedSurface,
    #[error("surface has boundary")]
    HasBoundary,
    #[error("step {step}: {reason}")]
    Inconsistent { step: usize, reason: String },
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// A failed run with everything logged up to the failure.
#[derive(Debug, Error, Clone)]
#[error("{error}")]
pub struct PeelFailure {
    #[source]
    pub error: PeelError,
    pub partial: Box<PeelReport>,
}

/// Progress of a peel run on one connected surface with boundary.
#[derive(Debug, Clone)]
pub struct PeelState {
    pub ambient: HolonomyRep,
    /// Components still to be peeled.
    pub pieces: Vec<Piece>,
    pub cut_system: Vec<GeodesicClass>,
    pub step_log: Vec<StepRecord>,
    /// Emitted curves with their ids and trace lengths.
    emitted: Vec<ReportCurve>,
    component: Option<usize>,
    next_curve: CurveId,
}

impl PeelState {
    pub fn new(surface: &Surface, ambient: HolonomyRep) -> PeelState {
        let piece = Piece::of_surface(surface, &ambient);
        let next_curve = max_curve(surface) + 1;
        let mut state = PeelState {
            ambient,
            pieces: vec![piece],
            cut_system: Vec::new(),
            step_log: Vec::new(),
            emitted: Vec::new(),
            component: None,
            next_curve,
        };
        state.drop_finished();
        state
    }

    /// `true` once every remaining component is a pair of pants.
    pub fn is_done(&self) -> bool {
        self.pieces.is_empty()
    }

    fn drop_finished(&mut self) {
        self.pieces
            .retain(|p| !p.is_pants() && !p.boundaries.is_empty());
    }
}

fn max_curve(surface: &Surface) -> CurveId {
    let g = surface.graph();
    g.gluings
        .iter()
        .map(|x| x.curve)
        .chain(g.boundaries.iter().map(|b| b.curve))
        .max()
        .unwrap_or(0)
}

/// Exponent sums: the class of a word in the first homology of a surface with
/// boundary, whose group is free.
fn abelian(word: &Word, rank: usize) -> Vec<i64> {
    let mut v = vec![0; rank];
    for l in word.letters() {
        v[l.generator as usize] += if l.inverse { -1 } else { 1 };
    }
    v
}

fn add(a: &mut [i64], b: &[i64], sign: i64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += sign * y;
    }
}

fn same_class(a: &Word, b: &Word) -> bool {
    a.canonical() == b.canonical()
}

struct NewCurve {
    word: Word,
    length: f64,
}

impl PeelState {
    fn fresh_id(&mut self) -> CurveId {
        let id = self.next_curve;
        self.next_curve += 1;
        id
    }

    fn inconsistent(&self, reason: impl Into<String>) -> PeelError {
        PeelError::Inconsistent {
            step: self.step_log.len(),
            reason: reason.into(),
        }
    }

    /// Orients `word` so that the arc midpoint lies on its right, which puts the
    /// peeled pants on the right and the rest of the piece on the left.
    fn orient(&self, word: Word, frame: &Isometry, midpoint: Complex64) -> Result<Word, PeelError> {
        let m = self.ambient.evaluate(&word)?;
        let (att, rep) = axis_endpoints(&m)?;
        let to = frame.apply_boundary(att).vector();
        let from = frame.apply_boundary(rep).vector();
        let s = side_of(from, to, midpoint);
        if s.abs() < 1e-300 {
            return Err(self.inconsistent("arc midpoint lies on a new curve"));
        }
        Ok(if s > 0.0 { word } else { word.inverse() })
    }
}

/// One peel of the first unfinished component. Returns the curves emitted
/// (curves that coincide with an existing boundary are absorbed, not emitted).
pub fn peel_step(
    state: &mut PeelState,
    policy: &EnumerationPolicy,
) -> Result<Vec<GeodesicClass>, PeelError> {
    let Some(piece) = state.pieces.first().cloned() else {
        return Ok(Vec::new());
    };
    let step = state.step_log.len();
    let tol = policy.tolerance;
    let arc = shortest_orthogeodesic(&state.ambient, &piece, policy)?;
    let (i, j) = (arc.from_index, arc.to_index);
    let bi = &piece.boundaries[i];
    let bj = &piece.boundaries[j];
    let (frame, _) = boundary_frame(&state.ambient, &bi.word)?;
    let d = arc.length;

    let mut produced = Vec::new();
    let consumed: Vec<usize> = if i == j { vec![i] } else { vec![i, j] };
    match arc.arc_type {
        ArcType::DistinctBoundaries => {
            let (argument, length) = cuff_from_seam(bi.length, bj.length, d, &tol);
            let length = length.ok_or(PeelError::DegenerateCurve { step, argument })?;
            let word = bi
                .word
                .concat(&bj.word.conjugate_by(&arc.coset_word))
                .free_reduce();
            let word = state.orient(word, &frame, arc.midpoint)?;
            produced.push(NewCurve { word, length });
        }
        ArcType::SameBoundary => {
            let ell = bi.length;
            let k = ((arc.to_foot - arc.from_foot) / ell).ceil();
            let x1 = (arc.from_foot + k * ell - arc.to_foot) / 2.0;
            let x2 = ell / 2.0 - x1;
            for (x, power) in [(x1, k as i64), (x2, k as i64 - 1)] {
                let (argument, length) = cuff_from_self_seam(x, d, &tol);
                let length = length.ok_or(PeelError::DegenerateCurve { step, argument })?;
                let word = arc.coset_word.concat(&bi.word.pow(power)).free_reduce();
                let word = state.orient(word, &frame, arc.midpoint)?;
                produced.push(NewCurve { word, length });
            }
        }
    }

    // Homology bookkeeping: the pants' boundary, oriented with the pants on the
    // left, is the consumed curves and the inverses of the produced ones.
    let rank = state.ambient.generator_count();
    let mut balance = vec![0; rank];
    for &c in &consumed {
        add(&mut balance, &abelian(&piece.boundaries[c].word, rank), 1);
    }
    for p in &produced {
        add(&mut balance, &abelian(&p.word, rank), -1);
    }
    if balance.iter().any(|x| *x != 0) {
        return Err(state.inconsistent("new curves are not homologous to the consumed boundary"));
    }

    let produced_lengths: Vec<f64> = produced.iter().map(|p| p.length).collect();
    let others: Vec<usize> = (0..piece.boundaries.len())
        .filter(|k| !consumed.contains(k))
        .collect();
    let mut absorbed: Vec<usize> = Vec::new();
    let mut fresh: Vec<NewCurve> = Vec::new();
    let twins = produced.len() == 2 && same_class(&produced[0].word, &produced[1].word);
    for p in produced {
        if let Some(&k) = others
            .iter()
            .find(|k| !absorbed.contains(k) && same_class(&piece.boundaries[**k].word, &p.word))
        {
            absorbed.push(k);
        } else {
            fresh.push(p);
        }
    }
    if twins {
        fresh.truncate(1);
    }

    let mut emitted = Vec::new();
    let mut new_boundaries = Vec::new();
    let mut new_records = Vec::new();
    for p in fresh {
        let id = state.fresh_id();
        let trace =
            trace_length(&state.ambient.evaluate(&p.word)?, tol.abs).map_err(SpectraError::from)?;
        let class = GeodesicClass {
            word: p.word.canonical(),
            length: p.length,
            simple_hint: Some(true),
        };
        new_records.push(ReportCurve {
            curve: id,
            word: class.word.clone(),
            length: p.length,
            trace_length: trace,
            component: state.component,
        });
        emitted.push(class);
        if !twins {
            new_boundaries.push(PieceBoundary {
                curve: id,
                word: p.word,
                length: p.length,
                cut: true,
            });
        }
    }

    let kept: Vec<PieceBoundary> = others
        .iter()
        .filter(|k| !absorbed.contains(k))
        .map(|k| piece.boundaries[*k].clone())
        .collect();
    let children = split(
        state,
        &piece,
        arc.arc_type,
        kept,
        new_boundaries,
        absorbed.len(),
    )?;

    let boundary_before = piece.boundary_length();
    let boundary_after: f64 = children.iter().fold(0.0, |a, p| a + p.boundary_length());
    let area_before = piece.area();
    let radius_bound = area_before
        .filter(|a| boundary_before >= *a)
        .map(|a| (a / boundary_before).asinh());
    state.step_log.push(StepRecord {
        component: state.component,
        arc_length: d,
        arc_type: arc.arc_type,
        from: arc.from_boundary,
        to: arc.to_boundary,
        consumed: consumed
            .iter()
            .map(|k| (piece.boundaries[*k].curve, piece.boundaries[*k].length))
            .collect(),
        absorbed: absorbed
            .iter()
            .map(|k| piece.boundaries[*k].curve)
            .collect(),
        new_curves: new_records.clone(),
        produced_lengths,
        boundary_before,
        boundary_after,
        area_before,
        radius_bound,
    });
    state.cut_system.extend(emitted.iter().cloned());
    state.emitted.extend(new_records);
    state.pieces.splice(0..1, children);
    state.drop_finished();
    Ok(emitted)
}

/// Components left after removing the pants. A same-boundary arc whose two new
/// curves both survive may disconnect the piece; the split and the boundaries
/// on each side are read off homology, since a boundary-parallel union of
/// curves is null-homologous exactly when it bounds.
fn split(
    state: &PeelState,
    piece: &Piece,
    arc_type: ArcType,
    kept: Vec<PieceBoundary>,
    new_boundaries: Vec<PieceBoundary>,
    absorbed: usize,
) -> Result<Vec<Piece>, PeelError> {
    let n_before = piece.boundaries.len();
    let mut boundaries = kept;
    if new_boundaries.is_empty() {
        // closing step: the pants was the whole component
        if !boundaries.is_empty() {
            return Err(state.inconsistent("curves absorbed but boundaries remain"));
        }
        return Ok(Vec::new());
    }
    let genus = match (arc_type, new_boundaries.len(), absorbed) {
        (ArcType::DistinctBoundaries, 1, 0) => piece.genus,
        (ArcType::SameBoundary, 1, 1) => piece.genus,
        (ArcType::SameBoundary, 2, 0) => {
            let rank = state.ambient.generator_count();
            let classes: Vec<Vec<i64>> =
                boundaries.iter().map(|b| abelian(&b.word, rank)).collect();
            let d1 = abelian(&new_boundaries[0].word, rank);
            let d2 = abelian(&new_boundaries[1].word, rank);
            let mut sides = Vec::new();
            for mask in 0u32..(1 << classes.len()) {
                let (mut s1, mut s2) = (d1.clone(), d2.clone());
                for (k, c) in classes.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        add(&mut s1, c, 1);
                    } else {
                        add(&mut s2, c, 1);
                    }
                }
                if s1.iter().all(|x| *x == 0) && s2.iter().all(|x| *x == 0) {
                    sides.push(mask);
                }
            }
            match sides.as_slice() {
                [] => piece.genus.map(|g| g.saturating_sub(1)),
                [mask] => return Ok(two_sides(piece.genus, *mask, boundaries, new_boundaries)),
                _ => {
                    return Err(state
                        .inconsistent("cannot tell which boundaries lie on which side of a split"))
                }
            }
        }
        _ => {
            return Err(
                state.inconsistent(format!("unexpected step shape from {n_before} boundaries"))
            )
        }
    };
    boundaries.extend(new_boundaries);
    Ok(vec![Piece { boundaries, genus }])
}

fn two_sides(
    genus: Option<usize>,
    mask: u32,
    kept: Vec<PieceBoundary>,
    new: Vec<PieceBoundary>,
) -> Vec<Piece> {
    let mut sides = [Vec::new(), Vec::new()];
    for (k, b) in kept.into_iter().enumerate() {
        sides[if mask & (1 << k) != 0 { 0 } else { 1 }].push(b);
    }
    let [mut s1, mut s2] = sides;
    let mut new = new.into_iter();
    s1.push(new.next().expect("two new curves"));
    s2.push(new.next().expect("two new curves"));
    // Genera add up to the parent's; each side needs 2g - 2 + n >= 1.
    let genera = genus.and_then(|g| {
        let fits: Vec<usize> = (0..=g)
            .filter(|g1| 2 * g1 + s1.len() >= 3 && 2 * (g - g1) + s2.len() >= 3)
            .collect();
        (fits.len() == 1).then(|| (fits[0], g - fits[0]))
    });
    vec![
        Piece {
            boundaries: s1,
            genus: genera.map(|x| x.0),
        },
        Piece {
            boundaries: s2,
            genus: genera.map(|x| x.1),
        },
    ]
}

fn run(state: &mut PeelState, policy: &EnumerationPolicy) -> Result<(), PeelError> {
    while !state.is_done() {
        peel_step(state, policy)?;
    }
    Ok(())
}

/// Peels a surface with boundary down to pants.
pub fn peel_all(surface: &Surface, policy: &EnumerationPolicy) -> Result<PeelReport, PeelFailure> {
    let fail = |error: PeelError, partial: PeelReport| PeelFailure {
        error,
        partial: Box::new(partial),
    };
    if surface.is_closed() {
        return Err(fail(
            PeelError::ClosedSurface,
            PeelReport::empty(surface, policy),
        ));
    }
    let rep = match fn_to_holonomy(surface) {
        Ok(r) => r,
        Err(e) => return Err(fail(e.into(), PeelReport::empty(surface, policy))),
    };
    let mut state = PeelState::new(surface, rep);
    let outcome = run(&mut state, policy);
    let report = PeelReport::build(surface, policy, None, state.emitted, state.step_log);
    match outcome {
        Ok(()) => Ok(report),
        Err(e) => Err(fail(e, report)),
    }
}

/// Cuts a closed surface along its systole and peels the result.
pub fn decompose_closed(
    surface: &Surface,
    policy: &EnumerationPolicy,
) -> Result<PeelReport, PeelFailure> {
    let mut emitted = Vec::new();
    let mut steps = Vec::new();
    let mut sys_record = None;
    let outcome = closed_run(surface, policy, &mut emitted, &mut steps, &mut sys_record);
    let report = PeelReport::build(surface, policy, sys_record, emitted, steps);
    match outcome {
        Ok(()) => Ok(report),
        Err(error) => Err(PeelFailure {
            error,
            partial: Box::new(report),
        }),
    }
}

fn closed_run(
    surface: &Surface,
    policy: &EnumerationPolicy,
    emitted: &mut Vec<ReportCurve>,
    steps: &mut Vec<StepRecord>,
    sys_record: &mut Option<SystoleRecord>,
) -> Result<(), PeelError> {
    if !surface.is_closed() {
        return Err(PeelError::HasBoundary);
    }
    let rep = fn_to_holonomy(surface)?;
    let sys = systole(&rep, policy)?;
    let area = surface.area();
    if sys.length >= area / 2.0 {
        return Err(PeelError::Lemma3Violation {
            systole: sys.length,
            area,
        });
    }
    let curve = systole_curve(surface, &rep, &sys, policy)?;
    *sys_record = Some(SystoleRecord {
        curve,
        word: sys.word.clone(),
        length: sys.length,
    });
    let fn_length = surface.length(curve).expect("graph curve");
    emitted.push(ReportCurve {
        curve,
        word: sys.word.clone(),
        length: fn_length,
        trace_length: sys.length,
        component: None,
    });
    let (parts, _) = cut_along(surface, curve)?;
    let mut next = max_curve(surface) + 2;
    for (k, part) in parts.iter().enumerate() {
        let mut state = PeelState::new(part, fn_to_holonomy(part)?);
        state.component = Some(k);
        state.next_curve = state.next_curve.max(next);
        let outcome = run(&mut state, policy);
        next = state.next_curve;
        emitted.extend(state.emitted);
        steps.extend(state.step_log);
        outcome?;
    }
    Ok(())
}

/// The pants-graph curve realizing the systole: same conjugacy class if the
/// words agree, otherwise the lowest-id curve of the same length (the group of
/// a closed surface has a relator, so distinct words can be conjugate).
fn systole_curve(
    surface: &Surface,
    rep: &HolonomyRep,
    sys: &GeodesicClass,
    policy: &EnumerationPolicy,
) -> Result<CurveId, PeelError> {
    let curves = surface.interior_curves();
    if let Some(c) = curves.iter().find(|c| {
        rep.curve_word(**c)
            .is_some_and(|w| same_class(w, &sys.word))
    }) {
        return Ok(*c);
    }
    curves
        .iter()
        .find(|c| {
            surface
                .length(**c)
                .is_some_and(|l| policy.tolerance.close(l, sys.length))
        })
        .copied()
        .ok_or(PeelError::SystoleNotDecompositionCurve {
            word: sys.word.clone(),
            length: sys.length,
        })
}

/// `peel_all` for surfaces with boundary, `decompose_closed` otherwise.
pub fn decompose(surface: &Surface, policy: &EnumerationPolicy) -> Result<PeelReport, PeelFailure> {
    if surface.is_closed() {
        decompose_closed(surface, policy)
    } else {
        peel_all(surface, policy)
    }
}

#[cfg(test)]
mod tests;
