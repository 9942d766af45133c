//! Shortest orthogeodesics between boundary curves of a subsurface.
//!
//! Every boundary word is oriented with the piece on its left. In the frame of
//! boundary `i` (its axis is the imaginary axis, translating upward) the piece
//! lies in `Re z < 0`. A lift `g axis(B_j)` bounds the same lift of the piece
//! when it appears there as a half-circle from `u` to `v` with `u < v < 0`;
//! the common perpendicular then has `cosh d = (u + v) / (u - v)` and meets the
//! imaginary axis at height `sqrt(u v)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::isometry::{trace_length, Isometry};
use crate::surface::{CurveId, HolonomyRep, Surface};
use crate::word::{Letter, Word};

use super::axes::{Axis, DdPoint};
use super::enumerate::for_each_reduced_word;
use super::{side_of, EnumerationPolicy, SpectraError};

const CANDIDATES: usize = 2048;
const MIN_ARC: f64 = 1e-8;
/// Largest `norm2` of `frame * g` whose image line stays well resolved in
/// double-double; beyond it rounding can fake an arc shorter by about 1e-9.
const MAX_NORM2: f64 = 1e18;

/// One boundary curve of a piece, oriented with the piece on its left.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceBoundary {
    pub curve: CurveId,
    pub word: Word,
    pub length: f64,
    /// `true` for curves produced by cutting, which arcs must not cross.
    pub cut: bool,
}

/// A connected subsurface described by its boundary curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub boundaries: Vec<PieceBoundary>,
    /// `None` when the topology could not be recovered after a split.
    pub genus: Option<usize>,
}

impl Piece {
    /// The whole surface, bounded by its own boundary curves.
    pub fn of_surface(surface: &Surface, rep: &HolonomyRep) -> Piece {
        let boundaries = rep
            .boundary_words()
            .iter()
            .map(|(curve, word)| PieceBoundary {
                curve: *curve,
                word: word.clone(),
                length: surface.length(*curve).unwrap_or(f64::NAN),
                cut: false,
            })
            .collect();
        Piece {
            boundaries,
            genus: Some(surface.genus()),
        }
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundaries.iter().fold(0.0, |a, b| a + b.length)
    }

    /// `2 pi (2g - 2 + n)`, when the genus is known.
    pub fn area(&self) -> Option<f64> {
        self.genus.map(|g| {
            2.0 * std::f64::consts::PI * (2.0 * g as f64 - 2.0 + self.boundaries.len() as f64)
        })
    }

    pub fn is_pants(&self) -> bool {
        self.boundaries.len() == 3 && self.genus == Some(0)
    }

    fn index_of(&self, curve: CurveId) -> Result<usize, SpectraError> {
        self.boundaries
            .iter()
            .position(|b| b.curve == curve)
            .ok_or(SpectraError::UnknownBoundary(curve))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcType {
    DistinctBoundaries,
    SameBoundary,
}

/// A common perpendicular between two boundary lifts of a piece.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthogeodesic {
    pub from_boundary: CurveId,
    pub to_boundary: CurveId,
    /// Index of the boundaries in the piece.
    pub from_index: usize,
    pub to_index: usize,
    /// `g` such that the arc ends on `axis(g B_to g^-1)`.
    pub coset_word: Word,
    pub length: f64,
    pub arc_type: ArcType,
    /// Translation coordinate of the departure foot along `B_from`.
    pub from_foot: f64,
    /// Translation coordinate of the arrival foot along `B_to`, measured in the
    /// frame of `B_to` pulled back by `g`.
    pub to_foot: f64,
    /// Midpoint of the arc in the frame of `B_from`.
    pub(crate) midpoint: Complex64,
}

/// Frame of a boundary word: its axis becomes the upward imaginary axis.
pub(crate) fn boundary_frame(
    rep: &HolonomyRep,
    word: &Word,
) -> Result<(Isometry, Axis), SpectraError> {
    let axis = Axis::of(&rep.evaluate(word)?)?;
    Ok((axis.normalizer(), axis))
}

#[derive(Debug, Clone)]
struct Candidate {
    d: f64,
    i: usize,
    j: usize,
    word: Vec<Letter>,
}

impl Candidate {
    /// Translates of one arc agree only to rounding, so lengths are compared
    /// on a grid before the tie-breaks take over.
    fn key_cmp(&self, other: &Self) -> Ordering {
        let grid = |d: f64| (d * 1e10).round();
        grid(self.d)
            .total_cmp(&grid(other.d))
            .then(self.i.cmp(&other.i))
            .then(self.j.cmp(&other.j))
            .then(self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_cmp(other)
    }
}

/// Max-heap keeping the `CANDIDATES` smallest entries.
#[derive(Default)]
struct Shortlist(BinaryHeap<Candidate>);

impl Shortlist {
    fn threshold(&self) -> f64 {
        if self.0.len() < CANDIDATES {
            f64::INFINITY
        } else {
            self.0.peek().map_or(f64::INFINITY, |c| c.d)
        }
    }

    fn push(&mut self, c: Candidate) {
        if self.0.len() < CANDIDATES {
            self.0.push(c);
        } else if self.0.peek().is_some_and(|top| c < *top) {
            self.0.pop();
            self.0.push(c);
        }
    }

    fn sorted(self) -> Vec<Candidate> {
        self.0.into_sorted_vec()
    }
}

/// Endpoints of a line as real numbers, `None` if one is at infinity.
fn real_ends(line: &Axis) -> Option<(f64, f64)> {
    Some((ratio(line.repelling)?, ratio(line.attracting)?))
}

fn ratio(p: DdPoint) -> Option<f64> {
    let y = f64::from(p.y);
    (y != 0.0).then(|| f64::from(p.x) / y)
}

/// Distance from the imaginary axis to a line bounding the piece on the same
/// side, or `None` if the line is not admissible.
fn admissible_distance(line: &Axis) -> Option<(f64, f64, f64)> {
    let (u, v) = real_ends(line)?;
    distance_from_ends(u, v)
}

fn distance_from_ends(u: f64, v: f64) -> Option<(f64, f64, f64)> {
    if !(u < v && v < 0.0) {
        return None;
    }
    let c = (u + v) / (u - v);
    let d = c.max(1.0).acosh();
    (d >= MIN_ARC).then_some((d, u, v))
}

/// The same test on the line `frame(base)`, mapping the second endpoint only
/// when the first one is on the piece side.
fn admissible_image(base: &Axis, frame: &Isometry) -> Option<f64> {
    let u = ratio(base.repelling.image(frame))?;
    if u >= 0.0 {
        return None;
    }
    let v = ratio(base.attracting.image(frame))?;
    distance_from_ends(u, v).map(|t| t.0)
}

/// Endpoints of a line as unit vectors.
type UnitLine = ((f64, f64), (f64, f64));

struct Frames {
    frames: Vec<Isometry>,
    axes: Vec<Axis>,
    lengths: Vec<f64>,
    /// Cut lines near the basepoint, per boundary frame, as unit endpoint pairs.
    cut_lines: Vec<Vec<UnitLine>>,
    basepoints: Vec<Complex64>,
}

impl Frames {
    fn new(
        rep: &HolonomyRep,
        piece: &Piece,
        policy: &EnumerationPolicy,
    ) -> Result<Frames, SpectraError> {
        let mut frames = Vec::new();
        let mut axes = Vec::new();
        let mut lengths = Vec::new();
        for b in &piece.boundaries {
            let m = rep.evaluate(&b.word)?;
            lengths.push(trace_length(&m, policy.tolerance.abs)?);
            let (n, a) = boundary_frame(rep, &b.word)?;
            frames.push(n);
            axes.push(a);
        }
        let cut: Vec<usize> = (0..piece.boundaries.len())
            .filter(|k| piece.boundaries[*k].cut)
            .collect();
        let mut cut_lines = vec![Vec::new(); frames.len()];
        if !cut.is_empty() {
            for_each_reduced_word(rep, policy.conjugator_cutoff, |_, h| {
                for (i, n) in frames.iter().enumerate() {
                    let nh = *n * *h;
                    for &c in &cut {
                        let line = axes[c].image(&nh);
                        cut_lines[i].push((line.repelling.unit(), line.attracting.unit()));
                    }
                }
                true
            });
        }
        let basepoints = frames
            .iter()
            .map(|n| n.apply(Complex64::new(0.0, 1.0)))
            .collect();
        Ok(Frames {
            frames,
            axes,
            lengths,
            cut_lines,
            basepoints,
        })
    }
}

fn on_axis(p: (f64, f64)) -> bool {
    p.0.abs() < 1e-12 || p.1.abs() < 1e-12
}

fn same_point(p: (f64, f64), q: (f64, f64)) -> bool {
    (p.0 * q.1 - p.1 * q.0).abs() < 1e-12
}

/// Builds the arc of a candidate and checks it against the cut lines.
fn realize(
    rep: &HolonomyRep,
    piece: &Piece,
    frames: &Frames,
    c: &Candidate,
) -> Result<Option<Orthogeodesic>, SpectraError> {
    let word = Word(c.word.clone());
    let g = rep.evaluate(&word)?;
    let ni = frames.frames[c.i];
    let line = frames.axes[c.j].image(&(ni * g));
    let Some((d, u, v)) = admissible_distance(&line) else {
        return Ok(None);
    };
    let r = (u * v).sqrt();
    let p = Complex64::new(0.0, r);
    let q = Complex64::new(-r * d.tanh(), r / d.cosh());
    let mid = Complex64::new(-r * (d / 2.0).tanh(), r / (d / 2.0).cosh());

    // Crossing test near the basepoint, where the sampled cut lines are dense.
    let ell = frames.lengths[c.i];
    let m = ((r / frames.basepoints[c.i].norm()).ln() / ell).round();
    let s = (-m * ell).exp();
    let (ps, qs) = (p * s, q * s);
    let ends = (line.repelling.unit(), line.attracting.unit());
    let ends_scaled = ((ends.0 .0 * s, ends.0 .1), (ends.1 .0 * s, ends.1 .1));
    for &(a, b) in &frames.cut_lines[c.i] {
        if on_axis(a) && on_axis(b) {
            continue;
        }
        let coincide = |x: (f64, f64), y: (f64, f64)| {
            let n = |p: (f64, f64)| {
                let l = (p.0 * p.0 + p.1 * p.1).sqrt();
                (p.0 / l, p.1 / l)
            };
            same_point(n(x), y) || same_point(n(y), x)
        };
        if coincide(ends_scaled.0, a) && coincide(ends_scaled.1, b)
            || coincide(ends_scaled.0, b) && coincide(ends_scaled.1, a)
        {
            continue;
        }
        let sp = side_of(a, b, ps);
        let sq = side_of(a, b, qs);
        if sp * sq < 0.0 && sp.abs() > 1e-12 && sq.abs() > 1e-12 {
            return Ok(None);
        }
    }

    let gj = ni * g * frames.frames[c.j].inverse();
    let [a, b, cc, dd] = gj.entries();
    let t = (q * dd - b) / (Complex64::new(a, 0.0) - q * cc);
    let same = c.i == c.j;
    Ok(Some(Orthogeodesic {
        from_boundary: piece.boundaries[c.i].curve,
        to_boundary: piece.boundaries[c.j].curve,
        from_index: c.i,
        to_index: c.j,
        coset_word: word,
        length: d,
        arc_type: if same {
            ArcType::SameBoundary
        } else {
            ArcType::DistinctBoundaries
        },
        from_foot: r.ln(),
        to_foot: t.norm().ln(),
        midpoint: mid,
    }))
}

fn search(
    rep: &HolonomyRep,
    piece: &Piece,
    policy: &EnumerationPolicy,
    pairs: &[(usize, usize)],
) -> Result<Orthogeodesic, SpectraError> {
    policy.validate()?;
    let cutoff = policy.max_word_length;
    let extended = policy.extended();
    let frames = Frames::new(rep, piece, policy)?;
    let mut short = Shortlist::default();
    let mut all = Shortlist::default();
    let mut lines: Vec<Option<Axis>> = vec![None; frames.axes.len()];
    for_each_reduced_word(rep, extended, |w, g| {
        for slot in lines.iter_mut() {
            *slot = None;
        }
        for &(i, j) in pairs {
            let base = *lines[j].get_or_insert_with(|| frames.axes[j].image(g));
            let Some(d) = admissible_image(&base, &frames.frames[i]) else {
                continue;
            };
            if (frames.frames[i] * *g).norm2() > MAX_NORM2 {
                continue;
            }
            let in_short = w.len() <= cutoff && d <= short.threshold();
            if d > all.threshold() && !in_short {
                continue;
            }
            let c = Candidate {
                d,
                i,
                j,
                word: w.to_vec(),
            };
            if in_short {
                short.push(c.clone());
            }
            all.push(c);
        }
        true
    });
    let first_valid = |list: Shortlist| -> Result<Option<Orthogeodesic>, SpectraError> {
        for c in list.sorted() {
            if let Some(arc) = realize(rep, piece, &frames, &c)? {
                return Ok(Some(arc));
            }
        }
        Ok(None)
    };
    let best_all = first_valid(all)?.ok_or(SpectraError::NoArcFound(extended))?;
    let best_short = first_valid(short)?;
    match best_short {
        Some(arc) if policy.tolerance.close(arc.length, best_all.length) => Ok(arc),
        other => Err(SpectraError::StabilityFailure {
            cutoff,
            extended,
            at_cutoff: other.map_or(f64::INFINITY, |a| a.length),
            at_extended: best_all.length,
        }),
    }
}

/// Shortest arc of the piece between any two of its boundary curves, with
/// ties broken by boundary indices and coset word. An arc from `j` to `i`
/// through `g` is the arc from `i` to `j` through `g^-1`, so only `i <= j` is
/// searched.
pub fn shortest_orthogeodesic(
    rep: &HolonomyRep,
    piece: &Piece,
    policy: &EnumerationPolicy,
) -> Result<Orthogeodesic, SpectraError> {
    let n = piece.boundaries.len();
    let pairs: Vec<_> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    if pairs.is_empty() {
        return Err(SpectraError::NoArcFound(0));
    }
    search(rep, piece, policy, &pairs)
}

/// Shortest arc of the piece from boundary `from` to boundary `to`.
pub fn shortest_orthogeodesic_between(
    rep: &HolonomyRep,
    piece: &Piece,
    from: CurveId,
    to: CurveId,
    policy: &EnumerationPolicy,
) -> Result<Orthogeodesic, SpectraError> {
    let pair = (piece.index_of(from)?, piece.index_of(to)?);
    search(rep, piece, policy, &[pair])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{canonical_graph, fn_to_holonomy, validate, FnCoordinates};
    use crate::trig::{seam_between_cuffs, seam_to_cuff, CuffTriple};

    fn pants(l: [f64; 3]) -> (Surface, HolonomyRep) {
        let graph = canonical_graph(0, 3).unwrap();
        let mut coords = FnCoordinates::default();
        let mut ids: Vec<_> = graph.boundaries.iter().map(|b| b.curve).collect();
        ids.sort();
        for (k, c) in ids.iter().enumerate() {
            coords.boundary.insert(*c, l[k]);
        }
        let s = validate(graph, coords).unwrap();
        let rep = fn_to_holonomy(&s).unwrap();
        (s, rep)
    }

    #[test]
    fn piece_of_surface_is_on_the_left_of_every_boundary() {
        let (s, rep) = pants([1.0, 2.0, 3.0]);
        let piece = Piece::of_surface(&s, &rep);
        assert!(piece.is_pants());
        for b in &piece.boundaries {
            let (n, _) = boundary_frame(&rep, &b.word).unwrap();
            for g in rep.generators() {
                let line = Axis::of(g).unwrap().image(&n);
                let (u, v) = real_ends(&line).unwrap_or((0.0, 0.0));
                assert!(
                    u <= 1e-12 && v <= 1e-12,
                    "generator axis on the wrong side: {u} {v}"
                );
            }
        }
    }

    #[test]
    fn pants_seams_match_trig() {
        let l = [1.3, 2.1, 0.8];
        let (s, rep) = pants(l);
        let piece = Piece::of_surface(&s, &rep);
        let policy = EnumerationPolicy::default();
        let by_len = |x: f64| {
            piece
                .boundaries
                .iter()
                .find(|b| (b.length - x).abs() < 1e-12)
                .unwrap()
                .curve
        };
        let arc = shortest_orthogeodesic_between(&rep, &piece, by_len(l[0]), by_len(l[1]), &policy)
            .unwrap();
        let c = seam_between_cuffs(&CuffTriple::new(l[0], l[1], l[2]).unwrap()).unwrap();
        assert!((arc.length - c).abs() < 1e-9, "{} vs {c}", arc.length);
        assert_eq!(arc.arc_type, ArcType::DistinctBoundaries);
        let arc = shortest_orthogeodesic_between(&rep, &piece, by_len(l[2]), by_len(l[2]), &policy)
            .unwrap();
        let h = seam_to_cuff(&CuffTriple::new(l[0], l[1], l[2]).unwrap())
            .unwrap()
            .h;
        assert!((arc.length - h).abs() < 1e-9, "{} vs {h}", arc.length);
        assert_eq!(arc.arc_type, ArcType::SameBoundary);
    }
}
