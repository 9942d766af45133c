//! Holonomy of a surface built from Fenchel–Nielsen coordinates.
//!
//! Each pair of pants is placed in its own chart as the double of a
//! right-angled hexagon, walked counter-clockwise with the hexagon on the
//! left. Charts are glued along a spanning tree of the pants graph; every
//! gluing off the tree contributes a stable letter. The resulting presentation
//! (three cuff generators per pants, one stable letter per extra gluing) is
//! simplified by Tietze moves until only free generators remain, plus the one
//! surface relator when the surface is closed.
//!
//! Twist convention: twists are absolute lengths. A positive twist moves the
//! far side of a curve to the left of an observer standing on either side and
//! facing the curve.

use std::collections::{BTreeMap, VecDeque};

use crate::dd;
use crate::isometry::{trace_length, Isometry};

use crate::trig::CuffTriple;
use crate::word::{Letter, Word, MAX_GENERATORS};

use super::graph::{
    validate, BoundaryLeg, CurveId, FnCoordinates, Gluing, PantsGraph, PantsId, Slot, Surface,
};
use super::SurfaceError;

/// Generators, boundary words and relator of a surface group representation.
#[derive(Debug, Clone)]
pub struct HolonomyRep {
    generators: Vec<Isometry>,
    relator: Word,
    curve_words: BTreeMap<CurveId, Word>,
    boundary_words: Vec<(CurveId, Word)>,
}

impl HolonomyRep {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    /// Generator matrices keyed by their symbol.
    pub fn generator_map(&self) -> BTreeMap<char, Isometry> {
        self.generators
            .iter()
            .enumerate()
            .map(|(k, m)| (Letter::gen(k as u16).symbol(), *m))
            .collect()
    }

    /// Empty for surfaces with boundary, whose group is free.
    pub fn relator(&self) -> &Word {
        &self.relator
    }

    pub fn is_closed(&self) -> bool {
        !self.relator.is_empty()
    }

    /// Word of every curve of the pants graph. Boundary words are oriented with
    /// the surface on their left; interior words with the pants at the first
    /// gluing end on their left.
    pub fn curve_word(&self, curve: CurveId) -> Option<&Word> {
        self.curve_words.get(&curve)
    }

    pub fn curve_words(&self) -> &BTreeMap<CurveId, Word> {
        &self.curve_words
    }

    pub fn boundary_words(&self) -> &[(CurveId, Word)] {
        &self.boundary_words
    }

    pub fn letter(&self, l: Letter) -> Isometry {
        let m = self.generators[l.generator as usize];
        if l.inverse {
            m.inverse()
        } else {
            m
        }
    }

    pub fn evaluate(&self, word: &Word) -> Result<Isometry, SurfaceError> {
        evaluate_word(self, word)
    }
}

/// Ordered matrix product of a word; the empty word is the identity.
pub fn evaluate_word(rep: &HolonomyRep, word: &Word) -> Result<Isometry, SurfaceError> {
    let mut m = Isometry::IDENTITY;
    for l in word.letters() {
        if l.generator as usize >= rep.generators.len() {
            return Err(SurfaceError::UnknownGenerator(l.symbol()));
        }
        m = m * rep.letter(*l);
    }
    Ok(m)
}

/// Frames of one pair of pants in its own chart.
struct PantsChart {
    /// Frame at the start of the half-cuff on slot `k`, pointing along it.
    frames: [Isometry; 3],
    /// Cuff holonomy with the pants on the left.
    cuffs: [Isometry; 3],
}

fn pants_chart(lengths: [f64; 3]) -> Result<PantsChart, SurfaceError> {
    let quarter = Isometry::quarter_turn();
    CuffTriple::new(lengths[0], lengths[1], lengths[2])
        .map_err(|e| SurfaceError::NumericalInstability(e.to_string()))?;
    let seams = [0, 1, 2].map(|k| dd::seam(lengths[k], lengths[(k + 1) % 3], lengths[(k + 2) % 3]));
    let mut frames = [Isometry::IDENTITY; 3];
    let mut f = Isometry::IDENTITY;
    for k in 0..3 {
        frames[k] = f;
        f = f
            * Isometry::translation(lengths[k] / 2.0)
            * quarter
            * Isometry::translation_dd(seams[k])
            * quarter;
    }
    if f.projective_diff(&Isometry::IDENTITY)
        > 1e-12 * (1.0 + f.entries()[0].abs().max(f.entries()[3].abs()))
    {
        return Err(SurfaceError::NumericalInstability(format!(
            "hexagon for cuffs {lengths:?} does not close (walk ends at {f})"
        )));
    }
    let cuffs =
        [0, 1, 2].map(|k| frames[k] * Isometry::translation(lengths[k]) * frames[k].inverse());
    Ok(PantsChart { frames, cuffs })
}

/// Pants of least eccentricity, smallest id first.
fn center(graph: &PantsGraph) -> PantsId {
    let mut best = (usize::MAX, PantsId::MAX);
    for &p in &graph.pants {
        let mut dist = BTreeMap::from([(p, 0usize)]);
        let mut queue = VecDeque::from([p]);
        while let Some(q) = queue.pop_front() {
            for g in &graph.gluings {
                for (a, b) in [(0, 1), (1, 0)] {
                    if g.ends[a].pants == q && !dist.contains_key(&g.ends[b].pants) {
                        dist.insert(g.ends[b].pants, dist[&q] + 1);
                        queue.push_back(g.ends[b].pants);
                    }
                }
            }
        }
        let ecc = dist.values().copied().max().unwrap_or(0);
        best = best.min((ecc, p));
    }
    best.1
}

/// Builds generators for the surface group from its Fenchel–Nielsen
/// coordinates.
pub fn fn_to_holonomy(surface: &Surface) -> Result<HolonomyRep, SurfaceError> {
    let graph = surface.graph();
    let coords = surface.coords();

    // Breadth-first order from the central pants, gluings by curve id.
    let mut gluings: Vec<&Gluing> = graph.gluings.iter().collect();
    gluings.sort_by_key(|g| g.curve);
    let root = center(graph);
    let mut order: Vec<PantsId> = vec![root];
    let mut index: BTreeMap<PantsId, usize> = BTreeMap::from([(root, 0)]);
    let mut tree_edges: Vec<CurveId> = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(p) = queue.pop_front() {
        for g in &gluings {
            let other = if g.ends[0].pants == p {
                g.ends[1].pants
            } else if g.ends[1].pants == p {
                g.ends[0].pants
            } else {
                continue;
            };
            if let std::collections::btree_map::Entry::Vacant(e) = index.entry(other) {
                e.insert(order.len());
                order.push(other);
                tree_edges.push(g.curve);
                queue.push_back(other);
            }
        }
    }

    let mut slot_curve: BTreeMap<Slot, CurveId> = BTreeMap::new();
    for g in &graph.gluings {
        slot_curve.insert(g.ends[0], g.curve);
        slot_curve.insert(g.ends[1], g.curve);
    }
    for b in &graph.boundaries {
        slot_curve.insert(b.end, b.curve);
    }
    let charts = order
        .iter()
        .map(|p| {
            let lengths = [0u8, 1, 2].map(|s| {
                let c = slot_curve[&Slot::new(*p, s)];
                coords.length(c).expect("validated coordinates")
            });
            pants_chart(lengths)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let half_turn = Isometry::half_turn();
    // Maps the chart of the pants at ends[1] into the chart of the pants at ends[0].
    let gluing_map = |g: &Gluing| -> Isometry {
        let twist = coords.interior[&g.curve].twist;
        let f0 = charts[index[&g.ends[0].pants]].frames[g.ends[0].slot as usize];
        let f1 = charts[index[&g.ends[1].pants]].frames[g.ends[1].slot as usize];
        f0 * Isometry::translation(twist) * half_turn * f1.inverse()
    };

    let mut placement = vec![Isometry::IDENTITY; order.len()];
    for (k, p) in order.iter().enumerate().skip(1) {
        let curve = tree_edges[k - 1];
        let g = gluings.iter().find(|g| g.curve == curve).unwrap();
        let (i0, i1) = (index[&g.ends[0].pants], index[&g.ends[1].pants]);
        placement[k] = if i1 == index[p] {
            placement[i0] * gluing_map(g)
        } else {
            placement[i1] * gluing_map(g).inverse()
        };
    }

    // Original generators: cuff `k` of pants `i` is 3i + k, stable letters follow.
    let cuff_gen = |s: &Slot| (3 * index[&s.pants] + s.slot as usize) as u16;
    let extra: Vec<&Gluing> = gluings
        .iter()
        .filter(|g| !tree_edges.contains(&g.curve))
        .copied()
        .collect();
    let n_orig = 3 * order.len() + extra.len();
    let mut matrices = Vec::with_capacity(n_orig);
    for (i, chart) in charts.iter().enumerate() {
        for cuff in &chart.cuffs {
            matrices.push(placement[i] * *cuff * placement[i].inverse());
        }
    }
    for g in &extra {
        let (i0, i1) = (index[&g.ends[0].pants], index[&g.ends[1].pants]);
        matrices.push(placement[i0] * gluing_map(g) * placement[i1].inverse());
    }

    let x = |g: u16| Word::gen(g);
    let mut relations: Vec<Word> = Vec::new();
    for i in 0..order.len() {
        let b = 3 * i as u16;
        relations.push(x(b + 2).concat(&x(b + 1)).concat(&x(b)));
    }
    for curve in &tree_edges {
        let g = gluings.iter().find(|g| g.curve == *curve).unwrap();
        relations.push(x(cuff_gen(&g.ends[1])).concat(&x(cuff_gen(&g.ends[0]))));
    }
    for (j, g) in extra.iter().enumerate() {
        let s = x((3 * order.len() + j) as u16);
        let inner = x(cuff_gen(&g.ends[1])).conjugate_by(&s);
        relations.push(inner.concat(&x(cuff_gen(&g.ends[0]))));
    }

    let (images, alive, leftover) = tietze(n_orig, &relations);
    let closed = graph.boundaries.is_empty();
    if leftover.len() != usize::from(closed) {
        return Err(SurfaceError::NumericalInstability(format!(
            "presentation left {} unresolved relations",
            leftover.len()
        )));
    }
    if alive.len() > MAX_GENERATORS {
        return Err(SurfaceError::TooManyGenerators(alive.len()));
    }
    let mut rename = vec![Word::empty(); n_orig];
    for (k, g) in alive.iter().enumerate() {
        rename[*g as usize] = Word::gen(k as u16);
    }
    let mut images: Vec<Word> = images.iter().map(|w| w.substitute(&rename)).collect();
    let mut relator = leftover
        .first()
        .map(|w| w.substitute(&rename))
        .unwrap_or_default();
    let mut reduced: Vec<Isometry> = alive.iter().map(|g| matrices[*g as usize]).collect();
    nielsen_reduce(&mut reduced, &mut images, &mut relator);

    let generators = reduced;
    let mut curve_words = BTreeMap::new();
    for g in &gluings {
        curve_words.insert(
            g.curve,
            images[cuff_gen(&g.ends[0]) as usize].cyclic_reduce(),
        );
    }
    let mut boundary_words = Vec::new();
    let mut legs: Vec<&BoundaryLeg> = graph.boundaries.iter().collect();
    legs.sort_by_key(|b| b.curve);
    for b in legs {
        let w = images[cuff_gen(&b.end) as usize].cyclic_reduce();
        curve_words.insert(b.curve, w.clone());
        boundary_words.push((b.curve, w));
    }

    let rep = HolonomyRep {
        generators,
        relator: relator.cyclic_reduce(),
        curve_words,
        boundary_words,
    };
    check_rep(&rep, coords)?;
    Ok(rep)
}

/// Greedy Nielsen moves `x_i -> x_i x_j^{+-1}` or `x_j^{+-1} x_i`, taken while
/// one of them brings a generator's image of the base point closer. Short
/// generators keep `f64` products well conditioned and keep short curves at
/// short word lengths. `images` and `relator` are rewritten to match.
fn nielsen_reduce(gens: &mut [Isometry], images: &mut [Word], relator: &mut Word) {
    const MAX_MOVES: usize = 10_000;
    for _ in 0..MAX_MOVES {
        let mut best: Option<(f64, usize, Letter, bool, Isometry)> = None;
        for i in 0..gens.len() {
            let current = gens[i].norm2();
            for j in (0..gens.len()).filter(|j| *j != i) {
                for inverse in [false, true] {
                    let l = Letter::new(j as u16, inverse);
                    let m = if inverse { gens[j].inverse() } else { gens[j] };
                    for right in [true, false] {
                        let cand = if right { gens[i] * m } else { m * gens[i] };
                        let gain = cand.norm2() / current;
                        if gain < 1.0 - 1e-9 && best.as_ref().is_none_or(|b| gain < b.0) {
                            best = Some((gain, i, l, right, cand));
                        }
                    }
                }
            }
        }
        let Some((_, i, l, right, cand)) = best else {
            return;
        };
        gens[i] = cand;
        // old x_i in terms of the new generators
        let xi = Word::gen(i as u16);
        let back = Word(vec![l.inv()]);
        let mut subst: Vec<Word> = (0..gens.len() as u16).map(Word::gen).collect();
        subst[i] = if right {
            xi.concat(&back)
        } else {
            back.concat(&xi)
        };
        for w in images.iter_mut() {
            *w = w.substitute(&subst);
        }
        *relator = relator.substitute(&subst).cyclic_reduce();
    }
}

fn check_rep(rep: &HolonomyRep, coords: &FnCoordinates) -> Result<(), SurfaceError> {
    let r = evaluate_word(rep, &rep.relator)?;
    if r.projective_diff(&Isometry::IDENTITY) > 1e-8 {
        return Err(SurfaceError::NumericalInstability(format!(
            "relator evaluates to {r}"
        )));
    }
    for (curve, word) in &rep.curve_words {
        let m = evaluate_word(rep, word)?;
        let expected = 2.0 * (coords.length(*curve).unwrap() / 2.0).cosh();
        let got = m.trace().abs();
        if (got - expected).abs() > 1e-8 * expected.max(1.0) {
            return Err(SurfaceError::NumericalInstability(format!(
                "curve {curve}: |trace| {got} but length predicts {expected}"
            )));
        }
        trace_length(&m, 1e-12)?;
    }
    Ok(())
}

/// Tietze elimination. Returns the image of every original generator as a
/// word in the surviving generators, the surviving generators, and the
/// relations that could not be used for elimination.
fn tietze(n: usize, relations: &[Word]) -> (Vec<Word>, Vec<u16>, Vec<Word>) {
    let mut images: Vec<Word> = (0..n as u16).map(Word::gen).collect();
    let mut alive = vec![true; n];
    let mut leftover = Vec::new();
    for rel in relations {
        let r = rel.substitute(&images).cyclic_reduce();
        if r.is_empty() {
            continue;
        }
        let candidate = (0..n as u16)
            .rev()
            .find(|g| alive[*g as usize] && r.occurrences(*g) == 1);
        let Some(g) = candidate else {
            leftover.push(r);
            continue;
        };
        let pos = r.letters().iter().position(|l| l.generator == g).unwrap();
        let letters = r.letters();
        let rest = Word(
            letters[pos + 1..]
                .iter()
                .chain(&letters[..pos])
                .copied()
                .collect(),
        );
        // x^e rest = 1
        let solution = if letters[pos].inverse {
            rest
        } else {
            rest.inverse()
        };
        let mut subst: Vec<Word> = (0..n as u16).map(Word::gen).collect();
        subst[g as usize] = solution;
        for img in images.iter_mut() {
            *img = img.substitute(&subst);
        }
        for l in leftover.iter_mut() {
            *l = l.substitute(&subst).cyclic_reduce();
        }
        alive[g as usize] = false;
    }
    let survivors = (0..n as u16).filter(|g| alive[*g as usize]).collect();
    (images, survivors, leftover)
}

/// Cuts a surface along interior curve `curve`. The side at the gluing's
/// first end keeps the curve id as a boundary leg; the other side gets a
/// fresh id one above the largest id in use. Returns one surface per
/// connected component, ordered by smallest pants id.
pub fn cut_along(
    surface: &Surface,
    curve: CurveId,
) -> Result<(Vec<Surface>, CurveId), SurfaceError> {
    let graph = surface.graph();
    let coords = surface.coords();
    let gluing = graph
        .gluings
        .iter()
        .find(|g| g.curve == curve)
        .ok_or(SurfaceError::UnknownCurve(curve))?;
    let length = coords.interior[&curve].length;
    let fresh = graph
        .gluings
        .iter()
        .map(|g| g.curve)
        .chain(graph.boundaries.iter().map(|b| b.curve))
        .max()
        .unwrap()
        + 1;
    let mut gluings: Vec<Gluing> = graph
        .gluings
        .iter()
        .filter(|g| g.curve != curve)
        .cloned()
        .collect();
    gluings.sort_by_key(|g| g.curve);
    let mut boundaries = graph.boundaries.clone();
    boundaries.push(BoundaryLeg {
        curve,
        end: gluing.ends[0],
    });
    boundaries.push(BoundaryLeg {
        curve: fresh,
        end: gluing.ends[1],
    });

    // components over the remaining gluings
    let mut component: BTreeMap<PantsId, usize> = BTreeMap::new();
    let mut pants = graph.pants.clone();
    pants.sort();
    let mut count = 0;
    for p in &pants {
        if component.contains_key(p) {
            continue;
        }
        let mut stack = vec![*p];
        component.insert(*p, count);
        while let Some(q) = stack.pop() {
            for g in &gluings {
                for (a, b) in [(0, 1), (1, 0)] {
                    if g.ends[a].pants == q && !component.contains_key(&g.ends[b].pants) {
                        component.insert(g.ends[b].pants, count);
                        stack.push(g.ends[b].pants);
                    }
                }
            }
        }
        count += 1;
    }

    let mut out = Vec::new();
    for c in 0..count {
        let sub = PantsGraph {
            pants: pants
                .iter()
                .filter(|p| component[p] == c)
                .copied()
                .collect(),
            gluings: gluings
                .iter()
                .filter(|g| component[&g.ends[0].pants] == c)
                .cloned()
                .collect(),
            boundaries: boundaries
                .iter()
                .filter(|b| component[&b.end.pants] == c)
                .cloned()
                .collect(),
        };
        let mut sub_coords = FnCoordinates::default();
        for g in &sub.gluings {
            sub_coords
                .interior
                .insert(g.curve, coords.interior[&g.curve]);
        }
        for b in &sub.boundaries {
            let l = if b.curve == curve || b.curve == fresh {
                length
            } else {
                coords.boundary[&b.curve]
            };
            sub_coords.boundary.insert(b.curve, l);
        }
        out.push(validate(sub, sub_coords)?);
    }
    Ok((out, fresh))
}
