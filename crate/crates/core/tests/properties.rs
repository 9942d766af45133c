use pants_core::surface::{canonical_graph, InteriorCoord};
use pants_core::trig::{cuff_from_seam, seam_between_cuffs, seam_threshold};
use pants_core::{
    fn_to_holonomy, trace_length, validate, CuffTriple, FnCoordinates, Isometry, Letter, Tolerance,
    Word,
};
use proptest::prelude::*;

fn word(max_gen: u16, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..max_gen, any::<bool>()), 0..max_len)
        .prop_map(|v| Word(v.into_iter().map(|(g, i)| Letter::new(g, i)).collect()))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn seam_then_cuff_recovers_third_cuff(
        a in 0.1f64..20.0, b in 0.1f64..20.0, c in 0.1f64..20.0,
    ) {
        let seam = seam_between_cuffs(&CuffTriple::new(a, b, c).unwrap()).unwrap();
        let (_, cuff) = cuff_from_seam(a, b, seam, &Tolerance::default());
        prop_assert!(close(cuff.unwrap(), c, 1e-9));
    }

    #[test]
    fn short_seam_forces_long_adjacent_cuffs(
        a in 0.01f64..4.0, b in 0.01f64..4.0, c in 0.01f64..4.0,
    ) {
        let seam = seam_between_cuffs(&CuffTriple::new(a, b, c).unwrap()).unwrap();
        if seam <= seam_threshold() {
            prop_assert!(a + b > c);
        }
    }

    #[test]
    fn inverse_is_an_involution(w in word(4, 12)) {
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn free_reduction_is_idempotent_and_cancels_inverse(w in word(3, 12)) {
        let r = w.free_reduce();
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
    }

    #[test]
    fn canonical_form_ignores_conjugation(w in word(3, 10), g in word(3, 5)) {
        let c = w.free_reduce().cyclic_reduce();
        prop_assume!(!c.is_empty());
        let conj = w.conjugate_by(&g).free_reduce();
        prop_assert_eq!(conj.canonical(), c.canonical());
    }

    #[test]
    fn translation_trace_matches_length(t in 0.01f64..30.0) {
        let m = Isometry::translation(t);
        prop_assert!(close(trace_length(&m, 1e-12).unwrap(), t, 1e-12));
        let id = m * m.inverse();
        prop_assert!(id.max_entry_diff(&Isometry::translation(0.0)) < 1e-12);
    }

    #[test]
    fn torus_curve_trace_matches_length(
        len in 0.2f64..6.0, frac in 0.0f64..1.0, bnd in 0.2f64..6.0,
    ) {
        let graph = canonical_graph(1, 1).unwrap();
        let mut coords = FnCoordinates::default();
        coords.interior.insert(graph.gluings[0].curve, InteriorCoord { length: len, twist: len * frac });
        coords.boundary.insert(graph.boundaries[0].curve, bnd);
        let s = validate(graph, coords).unwrap();
        let rep = fn_to_holonomy(&s).unwrap();
        for c in s.interior_curves() {
            let m = rep.evaluate(rep.curve_word(c).unwrap()).unwrap();
            let want = 2.0 * (s.length(c).unwrap() / 2.0).cosh();
            prop_assert!(close(m.trace().abs(), want, 1e-10));
        }
    }
}
