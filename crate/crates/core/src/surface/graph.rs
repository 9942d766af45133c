use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;

use crate::trig::MAX_LENGTH;

use super::SurfaceError;

pub type PantsId = u32;
pub type CurveId = u32;

/// A cuff slot `0`, `1` or `2` of a given pair of pants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub pants: PantsId,
    pub slot: u8,
}

impl Slot {
    pub const fn new(pants: PantsId, slot: u8) -> Self {
        Self { pants, slot }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gluing {
    pub curve: CurveId,
    pub ends: [Slot; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLeg {
    pub curve: CurveId,
    pub end: Slot,
}

/// Trivalent gluing pattern of pairs of pants.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PantsGraph {
    pub pants: Vec<PantsId>,
    pub gluings: Vec<Gluing>,
    pub boundaries: Vec<BoundaryLeg>,
}

/// Length and twist of an interior curve. Twists are in absolute length
/// units, unreduced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorCoord {
    pub length: f64,
    pub twist: f64,
}

/// Fenchel–Nielsen coordinates keyed by curve id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FnCoordinates {
    pub interior: BTreeMap<CurveId, InteriorCoord>,
    pub boundary: BTreeMap<CurveId, f64>,
}

impl FnCoordinates {
    pub fn length(&self, curve: CurveId) -> Option<f64> {
        self.interior
            .get(&curve)
            .map(|c| c.length)
            .or_else(|| self.boundary.get(&curve).copied())
    }

    /// Twist reduced into `[0, length)`.
    pub fn reduced_twist(&self, curve: CurveId) -> Option<f64> {
        self.interior
            .get(&curve)
            .map(|c| c.twist.rem_euclid(c.length))
    }
}

/// A validated surface: a connected pants graph with matching coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    graph: PantsGraph,
    coords: FnCoordinates,
    genus: usize,
}

impl Surface {
    pub fn graph(&self) -> &PantsGraph {
        &self.graph
    }

    pub fn coords(&self) -> &FnCoordinates {
        &self.coords
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary_count(&self) -> usize {
        self.graph.boundaries.len()
    }

    pub fn pants_count(&self) -> usize {
        self.graph.pants.len()
    }

    pub fn is_closed(&self) -> bool {
        self.graph.boundaries.is_empty()
    }

    /// `2π` per pair of pants.
    pub fn area(&self) -> f64 {
        surface_area(self)
    }

    /// Total length of the geodesic boundary.
    pub fn boundary_length(&self) -> f64 {
        self.coords.boundary.values().fold(0.0, |a, b| a + b)
    }

    pub fn length(&self, curve: CurveId) -> Option<f64> {
        self.coords.length(curve)
    }

    /// Ids of interior curves, ascending.
    pub fn interior_curves(&self) -> Vec<CurveId> {
        self.coords.interior.keys().copied().collect()
    }

    pub fn into_parts(self) -> (PantsGraph, FnCoordinates) {
        (self.graph, self.coords)
    }
}

pub fn surface_area(surface: &Surface) -> f64 {
    2.0 * PI * surface.pants_count() as f64
}

fn check_length(curve: CurveId, value: f64) -> Result<(), SurfaceError> {
    if !(value.is_finite() && value > 0.0) {
        return Err(SurfaceError::NonPositiveLength { curve, value });
    }
    if value > MAX_LENGTH {
        return Err(SurfaceError::LengthOverCap { curve, value });
    }
    Ok(())
}

/// Checks the graph and the coordinates, returning the first violated
/// invariant.
pub fn validate(graph: PantsGraph, coords: FnCoordinates) -> Result<Surface, SurfaceError> {
    let malformed = |msg: String| Err(SurfaceError::MalformedGraph(msg));
    if graph.pants.is_empty() {
        return malformed("no pants".into());
    }
    let pants: BTreeSet<PantsId> = graph.pants.iter().copied().collect();
    if pants.len() != graph.pants.len() {
        return malformed("duplicate pants id".into());
    }

    let mut used: BTreeMap<Slot, CurveId> = BTreeMap::new();
    let mut curves = BTreeSet::new();
    let ends = graph
        .gluings
        .iter()
        .flat_map(|g| g.ends.iter().map(move |e| (g.curve, *e)))
        .chain(graph.boundaries.iter().map(|b| (b.curve, b.end)));
    for (curve, end) in ends {
        if !pants.contains(&end.pants) {
            return malformed(format!(
                "curve {curve} refers to unknown pants {}",
                end.pants
            ));
        }
        if end.slot > 2 {
            return malformed(format!(
                "curve {curve} uses slot {} (slots are 0, 1, 2)",
                end.slot
            ));
        }
        if let Some(other) = used.insert(end, curve) {
            return malformed(format!(
                "slot ({}, {}) used by curves {other} and {curve}",
                end.pants, end.slot
            ));
        }
    }
    for c in graph
        .gluings
        .iter()
        .map(|g| g.curve)
        .chain(graph.boundaries.iter().map(|b| b.curve))
    {
        if !curves.insert(c) {
            return malformed(format!("duplicate curve id {c}"));
        }
    }
    for p in &graph.pants {
        for s in 0..3u8 {
            if !used.contains_key(&Slot::new(*p, s)) {
                return malformed(format!("slot ({p}, {s}) is not assigned to any curve"));
            }
        }
    }

    // connectivity over gluings
    let mut adj: BTreeMap<PantsId, Vec<PantsId>> = BTreeMap::new();
    for g in &graph.gluings {
        adj.entry(g.ends[0].pants)
            .or_default()
            .push(g.ends[1].pants);
        adj.entry(g.ends[1].pants)
            .or_default()
            .push(g.ends[0].pants);
    }
    let mut seen = BTreeSet::from([graph.pants[0]]);
    let mut stack = vec![graph.pants[0]];
    while let Some(p) = stack.pop() {
        for q in adj.get(&p).into_iter().flatten() {
            if seen.insert(*q) {
                stack.push(*q);
            }
        }
    }
    if seen.len() != pants.len() {
        return Err(SurfaceError::Disconnected);
    }

    for g in &graph.gluings {
        let c = coords
            .interior
            .get(&g.curve)
            .ok_or(SurfaceError::MissingCoordinate(g.curve))?;
        check_length(g.curve, c.length)?;
        if !c.twist.is_finite() {
            return Err(SurfaceError::NonFiniteTwist { curve: g.curve });
        }
    }
    for b in &graph.boundaries {
        let l = *coords
            .boundary
            .get(&b.curve)
            .ok_or(SurfaceError::MissingCoordinate(b.curve))?;
        check_length(b.curve, l)?;
    }
    let extra = coords
        .interior
        .keys()
        .filter(|c| !graph.gluings.iter().any(|g| g.curve == **c))
        .chain(
            coords
                .boundary
                .keys()
                .filter(|c| !graph.boundaries.iter().any(|b| b.curve == **c)),
        )
        .next();
    if let Some(c) = extra {
        return Err(SurfaceError::UnknownCurve(*c));
    }

    let p = graph.pants.len();
    let n = graph.boundaries.len();
    if (p + 2) < n || !(p + 2 - n).is_multiple_of(2) {
        return malformed(format!("{p} pants and {n} boundary legs fit no genus"));
    }
    let genus = (p + 2 - n) / 2;
    if graph.gluings.len() + 3 != 3 * genus + n {
        return malformed(format!(
            "{} gluings, expected 3g - 3 + n = {}",
            graph.gluings.len(),
            (3 * genus + n).saturating_sub(3)
        ));
    }
    Ok(Surface {
        graph,
        coords,
        genus,
    })
}

/// Canonical pants graph for genus `g` with `n` boundary legs: a chain of
/// pants where pants `k` slot 1 is glued to pants `k + 1` slot 0. The free
/// slots are listed end pants first (`P0.0, P0.2, Plast.1, Plast.2`), then the
/// middle pants' slot 2; boundary legs take the first `n`, and the remaining
/// ones are glued in consecutive pairs. A single pants lists slots `0, 1, 2`.
///
/// Curve ids: chain curves `0..p-1`, then the paired gluings, then boundary
/// legs.
pub fn canonical_graph(genus: usize, boundaries: usize) -> Option<PantsGraph> {
    let p = (2 * genus + boundaries).checked_sub(2)?;
    if p == 0 {
        return None;
    }
    let pants: Vec<PantsId> = (0..p as PantsId).collect();
    let mut gluings = Vec::new();
    let mut next_curve: CurveId = 0;
    for k in 0..p.saturating_sub(1) {
        gluings.push(Gluing {
            curve: next_curve,
            ends: [Slot::new(k as PantsId, 1), Slot::new(k as PantsId + 1, 0)],
        });
        next_curve += 1;
    }
    let free: Vec<Slot> = if p == 1 {
        vec![Slot::new(0, 0), Slot::new(0, 1), Slot::new(0, 2)]
    } else {
        let last = p as PantsId - 1;
        let mut v = vec![
            Slot::new(0, 0),
            Slot::new(0, 2),
            Slot::new(last, 1),
            Slot::new(last, 2),
        ];
        v.extend((1..last).map(|k| Slot::new(k, 2)));
        v
    };
    let (legs, paired) = free.split_at(boundaries);
    for pair in paired.chunks(2) {
        gluings.push(Gluing {
            curve: next_curve,
            ends: [pair[0], pair[1]],
        });
        next_curve += 1;
    }
    let boundaries = legs
        .iter()
        .map(|s| {
            let leg = BoundaryLeg {
                curve: next_curve,
                end: *s,
            };
            next_curve += 1;
            leg
        })
        .collect();
    Some(PantsGraph {
        pants,
        gluings,
        boundaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn torus_graph() -> PantsGraph {
        PantsGraph {
            pants: vec![0],
            gluings: vec![Gluing {
                curve: 0,
                ends: [Slot::new(0, 0), Slot::new(0, 1)],
            }],
            boundaries: vec![BoundaryLeg {
                curve: 1,
                end: Slot::new(0, 2),
            }],
        }
    }

    fn torus_coords() -> FnCoordinates {
        FnCoordinates {
            interior: BTreeMap::from([(
                0,
                InteriorCoord {
                    length: 2.0,
                    twist: 0.3,
                },
            )]),
            boundary: BTreeMap::from([(1, 1.5)]),
        }
    }

    #[test]
    fn one_holed_torus_is_valid() {
        let s = validate(torus_graph(), torus_coords()).unwrap();
        assert_eq!((s.genus(), s.boundary_count()), (1, 1));
        assert!((s.area() - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn theta_graph_is_closed_genus_two() {
        let graph = PantsGraph {
            pants: vec![0, 1],
            gluings: (0..3)
                .map(|k| Gluing {
                    curve: k,
                    ends: [Slot::new(0, k as u8), Slot::new(1, k as u8)],
                })
                .collect(),
            boundaries: vec![],
        };
        let coords = FnCoordinates {
            interior: (0..3)
                .map(|k| {
                    (
                        k,
                        InteriorCoord {
                            length: 1.0,
                            twist: 0.0,
                        },
                    )
                })
                .collect(),
            boundary: BTreeMap::new(),
        };
        let s = validate(graph, coords).unwrap();
        assert_eq!((s.genus(), s.boundary_count()), (2, 0));
        assert!((s.area() - 4.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn unassigned_slot_is_malformed() {
        let mut g = torus_graph();
        g.boundaries.clear();
        let mut c = torus_coords();
        c.boundary.clear();
        assert!(matches!(
            validate(g, c),
            Err(SurfaceError::MalformedGraph(_))
        ));
    }

    #[test]
    fn slot_used_twice_is_malformed() {
        let mut g = torus_graph();
        g.boundaries[0].end = Slot::new(0, 1);
        assert!(matches!(
            validate(g, torus_coords()),
            Err(SurfaceError::MalformedGraph(_))
        ));
    }

    #[test]
    fn coordinate_errors() {
        let mut c = torus_coords();
        c.interior.clear();
        assert_eq!(
            validate(torus_graph(), c),
            Err(SurfaceError::MissingCoordinate(0))
        );
        let mut c = torus_coords();
        c.boundary.insert(1, 0.0);
        assert!(matches!(
            validate(torus_graph(), c),
            Err(SurfaceError::NonPositiveLength { curve: 1, .. })
        ));
        let mut c = torus_coords();
        c.boundary.insert(1, 60.0);
        assert!(matches!(
            validate(torus_graph(), c),
            Err(SurfaceError::LengthOverCap { .. })
        ));
    }

    #[test]
    fn disconnected_graph() {
        let mut graph = torus_graph();
        graph.pants.push(1);
        graph.gluings.push(Gluing {
            curve: 2,
            ends: [Slot::new(1, 0), Slot::new(1, 1)],
        });
        graph.boundaries.push(BoundaryLeg {
            curve: 3,
            end: Slot::new(1, 2),
        });
        let mut c = torus_coords();
        c.interior.insert(
            2,
            InteriorCoord {
                length: 1.0,
                twist: 0.0,
            },
        );
        c.boundary.insert(3, 1.0);
        assert_eq!(validate(graph, c), Err(SurfaceError::Disconnected));
    }

    #[test]
    fn canonical_graphs_satisfy_euler_counts() {
        for g in 0..4usize {
            for n in 0..8usize {
                let p = (2 * g + n) as i64 - 2;
                if !(1..=6).contains(&p) {
                    assert!(p < 1 || canonical_graph(g, n).is_some());
                    continue;
                }
                let graph = canonical_graph(g, n).unwrap();
                let coords = FnCoordinates {
                    interior: graph
                        .gluings
                        .iter()
                        .map(|x| {
                            (
                                x.curve,
                                InteriorCoord {
                                    length: 1.0,
                                    twist: 0.0,
                                },
                            )
                        })
                        .collect(),
                    boundary: graph.boundaries.iter().map(|b| (b.curve, 1.0)).collect(),
                };
                let s = validate(graph, coords).unwrap_or_else(|e| panic!("({g},{n}): {e}"));
                assert_eq!(s.genus(), g);
                assert_eq!(s.boundary_count(), n);
                assert_eq!(s.pants_count(), 2 * g + n - 2);
                assert_eq!(s.graph().gluings.len(), 3 * g + n - 3);
            }
        }
        assert!(canonical_graph(0, 2).is_none());
        assert!(canonical_graph(1, 0).is_none());
    }
}
