//! Depth-first enumeration of words with incremental matrix products.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::isometry::{trace_length, Isometry};
use crate::surface::HolonomyRep;
use crate::word::{Letter, Word};

use super::{EnumerationPolicy, GeodesicClass, SpectraError};

/// Letters of `rep` in symbol order, each with its matrix.
fn alphabet(rep: &HolonomyRep) -> Vec<(Letter, Isometry)> {
    (0..rep.generator_count() as u16)
        .flat_map(|g| [Letter::gen(g), Letter::new(g, true)])
        .map(|l| (l, rep.letter(l)))
        .collect()
}

/// Calls `visit` on every freely reduced word of length at most `max_len`,
/// the empty word first, together with its matrix. Returning `false` skips the
/// extensions of that word.
pub(crate) fn for_each_reduced_word<F>(rep: &HolonomyRep, max_len: usize, mut visit: F)
where
    F: FnMut(&[Letter], &Isometry) -> bool,
{
    let letters = alphabet(rep);
    let mut prefix = Vec::with_capacity(max_len);
    if visit(&prefix, &Isometry::IDENTITY) {
        walk(
            &letters,
            &mut prefix,
            &Isometry::IDENTITY,
            max_len,
            &mut |_, _| true,
            &mut visit,
        );
    }
}

fn walk(
    letters: &[(Letter, Isometry)],
    prefix: &mut Vec<Letter>,
    m: &Isometry,
    max_len: usize,
    allow: &mut dyn FnMut(&[Letter], Letter) -> bool,
    visit: &mut dyn FnMut(&[Letter], &Isometry) -> bool,
) {
    if prefix.len() == max_len {
        return;
    }
    for (l, g) in letters {
        if prefix.last() == Some(&l.inv()) || !allow(prefix, *l) {
            continue;
        }
        let next = *m * *g;
        prefix.push(*l);
        if visit(prefix, &next) {
            walk(letters, prefix, &next, max_len, allow, visit);
        }
        prefix.pop();
    }
}

/// Visits cyclically reduced words that can still be canonical: every letter
/// and its inverse must sort after the first letter.
fn walk_cyclic<F>(rep: &HolonomyRep, max_len: usize, mut visit: F)
where
    F: FnMut(&[Letter], &Isometry),
{
    let letters = alphabet(rep);
    let mut prefix = Vec::with_capacity(max_len);
    let mut allow = |p: &[Letter], l: Letter| match p.first() {
        None => true,
        Some(f) => l >= *f && l.inv() >= *f,
    };
    let mut inner = |w: &[Letter], m: &Isometry| {
        if w.len() == 1 || w[0] != w[w.len() - 1].inv() {
            visit(w, m);
        }
        true
    };
    walk(
        &letters,
        &mut prefix,
        &Isometry::IDENTITY,
        max_len,
        &mut allow,
        &mut inner,
    );
}

fn rotated(w: &[Letter], k: usize, i: usize) -> Letter {
    w[(k + i) % w.len()]
}

/// `true` if no rotation of `w` or of its inverse sorts before `w`.
pub(crate) fn is_canonical(w: &[Letter]) -> bool {
    let n = w.len();
    let inv: Vec<Letter> = w.iter().rev().map(|l| l.inv()).collect();
    for src in [w, inv.as_slice()] {
        for k in 0..n {
            for (i, l) in w.iter().enumerate() {
                match rotated(src, k, i).cmp(l) {
                    Ordering::Less => return false,
                    Ordering::Greater => break,
                    Ordering::Equal => {}
                }
            }
        }
    }
    true
}

/// Canonical forms of boundary classes and their powers up to `max_len` letters.
fn boundary_classes(rep: &HolonomyRep, max_len: usize) -> HashSet<Word> {
    let mut out = HashSet::new();
    for (_, w) in rep.boundary_words() {
        let base = w.canonical();
        if base.is_empty() {
            continue;
        }
        let mut k = 1;
        while k * base.len() <= max_len {
            out.insert(base.pow(k as i64).canonical());
            k += 1;
        }
    }
    out
}

/// All hyperbolic conjugacy classes with a cyclically reduced representative
/// of at most `policy.max_word_length` letters, boundary classes excluded,
/// sorted by `(length, word)`.
pub fn enumerate_closed_geodesics(
    rep: &HolonomyRep,
    policy: &EnumerationPolicy,
) -> Vec<GeodesicClass> {
    let excluded = boundary_classes(rep, policy.max_word_length);
    let mut out = Vec::new();
    walk_cyclic(rep, policy.max_word_length, |w, m| {
        if !is_canonical(w) {
            return;
        }
        let Ok(length) = trace_length(m, policy.tolerance.abs) else {
            return;
        };
        let word = Word(w.to_vec());
        if !excluded.contains(&word) {
            out.push(GeodesicClass {
                word,
                length,
                simple_hint: None,
            });
        }
    });
    out.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.word.cmp(&b.word))
    });
    out
}

fn better(a: &(f64, Word), b: &Option<(f64, Word)>) -> bool {
    match b {
        None => true,
        Some(b) => a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)) == Ordering::Less,
    }
}

/// Shortest non-boundary closed geodesic, checked for stability under a deeper
/// enumeration.
pub fn systole(
    rep: &HolonomyRep,
    policy: &EnumerationPolicy,
) -> Result<GeodesicClass, SpectraError> {
    policy.validate()?;
    let cutoff = policy.max_word_length;
    let extended = policy.extended();
    let excluded = boundary_classes(rep, extended);
    let mut best_short: Option<(f64, Word)> = None;
    let mut best_all: Option<(f64, Word)> = None;
    walk_cyclic(rep, extended, |w, m| {
        let bound = |b: &Option<(f64, Word)>| {
            b.as_ref()
                .map_or(f64::INFINITY, |b| 2.0 * (b.0 / 2.0).cosh())
        };
        let t = m.trace().abs();
        let short = w.len() <= cutoff;
        let limit = if short {
            bound(&best_short).max(bound(&best_all))
        } else {
            bound(&best_all)
        };
        if t > limit * (1.0 + 1e-12) || !is_canonical(w) {
            return;
        }
        let Ok(length) = trace_length(m, policy.tolerance.abs) else {
            return;
        };
        let word = Word(w.to_vec());
        if excluded.contains(&word) {
            return;
        }
        let cand = (length, word);
        if short && better(&cand, &best_short) {
            best_short = Some(cand.clone());
        }
        if better(&cand, &best_all) {
            best_all = Some(cand);
        }
    });
    let Some((length, _)) = best_all else {
        return Err(SpectraError::NoGeodesic(extended));
    };
    let at_cutoff = best_short.as_ref().map_or(f64::INFINITY, |b| b.0);
    if !policy.tolerance.close(at_cutoff, length) {
        return Err(SpectraError::StabilityFailure {
            cutoff,
            extended,
            at_cutoff,
            at_extended: length,
        });
    }
    let (length, word) = best_short.expect("checked above");
    Ok(GeodesicClass {
        word,
        length,
        simple_hint: Some(true),
    })
}

/// Collar audit `2 s sinh(s / 4) < area` for a systole of length `s`.
pub fn systole_collar_check(s: f64, area: f64) -> bool {
    2.0 * s * (s / 4.0).sinh() < area
}
