use super::*;
use crate::surface::{canonical_graph, validate, FnCoordinates, InteriorCoord};

fn surface(genus: usize, n: usize, interior: &[f64], twist: f64, boundary: &[f64]) -> Surface {
    let graph = canonical_graph(genus, n).unwrap();
    let mut coords = FnCoordinates::default();
    for (k, g) in graph.gluings.iter().enumerate() {
        coords.interior.insert(
            g.curve,
            InteriorCoord {
                length: interior[k % interior.len()],
                twist,
            },
        );
    }
    for (k, b) in graph.boundaries.iter().enumerate() {
        coords
            .boundary
            .insert(b.curve, boundary[k % boundary.len()]);
    }
    validate(graph, coords).unwrap()
}

fn check(s: &Surface) -> PeelReport {
    let report = decompose(s, &EnumerationPolicy::default())
        .unwrap_or_else(|e| panic!("{e}: {:#?}", e.partial));
    let cert = verify_bers_bound(&report, s);
    assert!(cert.passed, "{:?}\n{}", cert.failures, report.to_json());
    assert!(report.passed);
    report
}

#[test]
fn pants_needs_no_steps() {
    let s = surface(0, 3, &[1.0], 0.0, &[1.0, 2.0, 3.0]);
    let r = check(&s);
    assert!(r.curves.is_empty() && r.steps.is_empty());
    assert_eq!(r.bound, 2.0 * std::f64::consts::PI);
}

#[test]
fn one_holed_torus_gives_one_curve() {
    let s = surface(1, 1, &[2.0], 0.4, &[1.0]);
    let r = check(&s);
    assert_eq!(r.curves.len(), 1);
    assert!(r.curves[0].length <= 2.0 * std::f64::consts::PI);
}

#[test]
fn four_holed_sphere_gives_one_curve() {
    for b in [
        [1.0, 2.0, 1.5, 3.0],
        [4.0, 4.0, 4.0, 4.0],
        [0.3, 5.0, 0.4, 2.0],
    ] {
        let s = surface(0, 4, &[1.7], 0.9, &b);
        let r = check(&s);
        assert_eq!(r.curves.len(), 1);
        assert_eq!(r.peel_steps(), 1);
    }
}

#[test]
fn two_holed_torus_and_closed_genus_two() {
    check(&surface(1, 2, &[1.2, 2.5], 0.3, &[1.0, 2.0]));
    let r = check(&surface(2, 0, &[0.5, 3.0, 3.5], 0.7, &[1.0]));
    assert_eq!(r.curves.len(), 3);
    assert!((r.systole.as_ref().unwrap().length - 0.5).abs() < 1e-9);
}

#[test]
fn tampered_report_fails_the_certificate() {
    let s = surface(1, 1, &[2.0], 0.4, &[1.0]);
    let mut r = check(&s);
    r.curves[0].length += 1e-3;
    assert!(!verify_bers_bound(&r, &s).passed);
}
