//! Peel reports, their JSON form, and the independent certificate check.

use std::fmt::Write;

use crate::isometry::trace_length;
use crate::spectra::{ArcType, EnumerationPolicy};
use crate::surface::{cut_along, fn_to_holonomy, format_float, CurveId, HolonomyRep, Surface};
use crate::trig::seam_threshold;
use crate::word::Word;

/// Largest tolerated gap between the formula length and the trace length of a
/// curve.
pub const DUAL_PATH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportCurve {
    pub curve: CurveId,
    /// Canonical word in the representation of its component.
    pub word: Word,
    /// Length from the trigonometric formulas (or coordinates, for the systole).
    pub length: f64,
    /// Length recomputed from the trace of `word`.
    pub trace_length: f64,
    /// Component of the surface cut along the systole; `None` on the input.
    pub component: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystoleRecord {
    pub curve: CurveId,
    pub word: Word,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub component: Option<usize>,
    pub arc_length: f64,
    pub arc_type: ArcType,
    pub from: CurveId,
    pub to: CurveId,
    /// Boundary curves the pants was attached along, with their lengths.
    pub consumed: Vec<(CurveId, f64)>,
    /// Existing boundaries that turned out to be cuffs of the pants.
    pub absorbed: Vec<CurveId>,
    pub new_curves: Vec<ReportCurve>,
    /// Formula lengths of every cuff produced, including absorbed ones.
    pub produced_lengths: Vec<f64>,
    pub boundary_before: f64,
    pub boundary_after: f64,
    pub area_before: Option<f64>,
    /// `arcsinh(area / boundary)` when the boundary is at least the area.
    pub radius_bound: Option<f64>,
}

impl StepRecord {
    /// A step that removed a whole component without producing curves.
    pub fn is_closing(&self) -> bool {
        self.new_curves.is_empty()
    }

    /// For arcs no longer than `2 arcsinh(1)`: whether the produced cuffs are
    /// shorter in total than the consumed boundary. `None` for longer arcs.
    pub fn shortening(&self) -> Option<bool> {
        if self.arc_length > seam_threshold() {
            return None;
        }
        let consumed: f64 = self.consumed.iter().map(|c| c.1).sum();
        let produced: f64 = self.produced_lengths.iter().sum();
        Some(produced < consumed)
    }

    /// Largest formula-versus-trace gap among the new curves.
    pub fn dual_path_residual(&self) -> f64 {
        self.new_curves
            .iter()
            .map(|c| (c.length - c.trace_length).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeelReport {
    /// Interior curves of the decomposition, the systole first when present.
    pub curves: Vec<ReportCurve>,
    pub boundary: Vec<(CurveId, f64)>,
    pub area: f64,
    pub boundary_total: f64,
    /// `max(boundary_total, area)`.
    pub bound: f64,
    pub max_curve_length: f64,
    /// `max_curve_length <= bound + tol.abs` on a completed run; always `false`
    /// on a partial report.
    pub passed: bool,
    pub complete: bool,
    pub systole: Option<SystoleRecord>,
    pub steps: Vec<StepRecord>,
    pub policy: EnumerationPolicy,
}

impl PeelReport {
    pub(crate) fn empty(surface: &Surface, policy: &EnumerationPolicy) -> PeelReport {
        let mut r = Self::build(surface, policy, None, Vec::new(), Vec::new());
        r.complete = false;
        r.passed = false;
        r
    }

    pub(crate) fn build(
        surface: &Surface,
        policy: &EnumerationPolicy,
        systole: Option<SystoleRecord>,
        curves: Vec<ReportCurve>,
        steps: Vec<StepRecord>,
    ) -> PeelReport {
        let mut boundary: Vec<(CurveId, f64)> = surface
            .coords()
            .boundary
            .iter()
            .map(|(c, l)| (*c, *l))
            .collect();
        boundary.sort_by_key(|b| b.0);
        let area = surface.area();
        let boundary_total = surface.boundary_length();
        let bound = boundary_total.max(area);
        let max_curve_length = curves.iter().map(|c| c.length).fold(0.0, f64::max);
        let expected = 3 * surface.genus() + surface.boundary_count();
        let complete = curves.len() + 3 == expected;
        PeelReport {
            curves,
            boundary,
            area,
            boundary_total,
            bound,
            max_curve_length,
            passed: complete && max_curve_length <= bound + policy.tolerance.abs,
            complete,
            systole,
            steps,
            policy: *policy,
        }
    }

    /// Steps that produced at least one curve.
    pub fn peel_steps(&self) -> usize {
        self.steps.iter().filter(|s| !s.is_closing()).count()
    }

    pub fn max_dual_path_residual(&self) -> f64 {
        self.curves
            .iter()
            .map(|c| (c.length - c.trace_length).abs())
            .fold(0.0, f64::max)
    }

    /// JSON document with keys in a fixed order and floats in the canonical
    /// 17-digit form.
    pub fn to_json(&self) -> String {
        let mut o = String::from("{\n");
        let _ = writeln!(o, "  \"bound\": {},", format_float(self.bound));
        let _ = writeln!(
            o,
            "  \"max_curve_length\": {},",
            format_float(self.max_curve_length)
        );
        let _ = writeln!(o, "  \"passed\": {},", self.passed);
        let _ = writeln!(o, "  \"complete\": {},", self.complete);
        let _ = writeln!(o, "  \"area\": {},", format_float(self.area));
        let _ = writeln!(
            o,
            "  \"boundary_total\": {},",
            format_float(self.boundary_total)
        );
        let boundary: Vec<String> = self
            .boundary
            .iter()
            .map(|(c, l)| format!("{{\"curve\": {c}, \"length\": {}}}", format_float(*l)))
            .collect();
        let _ = writeln!(o, "  \"boundary\": [{}],", boundary.join(", "));
        match &self.systole {
            Some(s) => {
                let _ = writeln!(
                    o,
                    "  \"systole\": {{\"curve\": {}, \"word\": {}, \"length\": {}}},",
                    s.curve,
                    json_string(&s.word.to_string()),
                    format_float(s.length)
                );
            }
            None => o.push_str("  \"systole\": null,\n"),
        }
        o.push_str("  \"curves\": [");
        push_list(&mut o, self.curves.iter().map(curve_json), "    ");
        o.push_str("],\n  \"steps\": [");
        push_list(&mut o, self.steps.iter().map(step_json), "    ");
        let p = &self.policy;
        let _ = write!(
            o,
            "],\n  \"policy\": {{\"max_word_length\": {}, \"stability_margin\": {}, \"conjugator_cutoff\": {}, \"tol_rel\": {}, \"tol_abs\": {}}}\n}}\n",
            p.max_word_length,
            p.stability_margin,
            p.conjugator_cutoff,
            format_float(p.tolerance.rel),
            format_float(p.tolerance.abs)
        );
        o
    }
}

fn push_list(out: &mut String, items: impl Iterator<Item = String>, indent: &str) {
    let items: Vec<String> = items.collect();
    if items.is_empty() {
        return;
    }
    for (k, item) in items.iter().enumerate() {
        out.push_str(if k == 0 { "\n" } else { ",\n" });
        out.push_str(indent);
        out.push_str(item);
    }
    out.push_str("\n  ");
}

fn json_string(s: &str) -> String {
    serde_json::Value::String(s.to_string()).to_string()
}

fn opt_float(x: Option<f64>) -> String {
    x.map_or("null".to_string(), format_float)
}

fn opt_index(x: Option<usize>) -> String {
    x.map_or("null".to_string(), |k| k.to_string())
}

fn curve_json(c: &ReportCurve) -> String {
    format!(
        "{{\"curve\": {}, \"word\": {}, \"length\": {}, \"trace_length\": {}, \"component\": {}}}",
        c.curve,
        json_string(&c.word.to_string()),
        format_float(c.length),
        format_float(c.trace_length),
        opt_index(c.component)
    )
}

fn step_json(s: &StepRecord) -> String {
    let consumed: Vec<String> = s
        .consumed
        .iter()
        .map(|(c, l)| format!("{{\"curve\": {c}, \"length\": {}}}", format_float(*l)))
        .collect();
    let absorbed: Vec<String> = s.absorbed.iter().map(|c| c.to_string()).collect();
    let new: Vec<String> = s.new_curves.iter().map(curve_json).collect();
    let produced: Vec<String> = s
        .produced_lengths
        .iter()
        .map(|l| format_float(*l))
        .collect();
    format!(
        "{{\"component\": {}, \"arc_length\": {}, \"arc_type\": \"{}\", \"from\": {}, \"to\": {}, \"consumed\": [{}], \"absorbed\": [{}], \"new_curves\": [{}], \"produced_lengths\": [{}], \"boundary_before\": {}, \"boundary_after\": {}, \"area_before\": {}, \"radius_bound\": {}}}",
        opt_index(s.component),
        format_float(s.arc_length),
        match s.arc_type {
            ArcType::DistinctBoundaries => "distinct",
            ArcType::SameBoundary => "same",
        },
        s.from,
        s.to,
        consumed.join(", "),
        absorbed.join(", "),
        new.join(", "),
        produced.join(", "),
        format_float(s.boundary_before),
        format_float(s.boundary_after),
        opt_float(s.area_before),
        opt_float(s.radius_bound)
    )
}

/// Result of re-checking a report against its surface.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub passed: bool,
    /// Bound recomputed from the surface.
    pub bound: f64,
    /// Longest curve by trace length.
    pub max_trace_length: f64,
    /// Largest gap between reported and trace lengths.
    pub max_residual: f64,
    pub expected_curves: usize,
    pub failures: Vec<String>,
}

/// Recomputes every curve length from its word, independently of the formulas
/// that produced it, and checks the bound, the curve count and the agreement
/// of both lengths.
pub fn verify_bers_bound(report: &PeelReport, surface: &Surface) -> Certificate {
    let mut failures = Vec::new();
    let bound = surface.boundary_length().max(surface.area());
    let expected_curves = (3 * surface.genus() + surface.boundary_count()).saturating_sub(3);
    let tol = report.policy.tolerance;
    if !tol.close(bound, report.bound) {
        failures.push(format!(
            "reported bound {} differs from {bound}",
            report.bound
        ));
    }
    if report.curves.len() != expected_curves {
        failures.push(format!(
            "{} curves, expected {expected_curves}",
            report.curves.len()
        ));
    }
    let reps = representations(report, surface);
    let mut max_trace_length: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    match reps {
        Err(e) => failures.push(e),
        Ok((ambient, parts)) => {
            for c in &report.curves {
                let rep = match c.component {
                    None => Some(&ambient),
                    Some(k) => parts.get(k),
                };
                let Some(rep) = rep else {
                    failures.push(format!("curve {} names missing component", c.curve));
                    continue;
                };
                let length = rep
                    .evaluate(&c.word)
                    .map_err(|e| e.to_string())
                    .and_then(|m| trace_length(&m, tol.abs).map_err(|e| e.to_string()));
                match length {
                    Ok(l) => {
                        max_trace_length = max_trace_length.max(l);
                        let r = (l - c.length).abs();
                        max_residual = max_residual.max(r);
                        if r > DUAL_PATH_TOLERANCE {
                            failures.push(format!(
                                "curve {}: reported {} but trace gives {l}",
                                c.curve, c.length
                            ));
                        }
                        if l > bound + tol.abs {
                            failures.push(format!(
                                "curve {} of length {l} exceeds the bound {bound}",
                                c.curve
                            ));
                        }
                    }
                    Err(e) => failures.push(format!("curve {}: {e}", c.curve)),
                }
            }
        }
    }
    Certificate {
        passed: failures.is_empty(),
        bound,
        max_trace_length,
        max_residual,
        expected_curves,
        failures,
    }
}

fn representations(
    report: &PeelReport,
    surface: &Surface,
) -> Result<(HolonomyRep, Vec<HolonomyRep>), String> {
    let ambient = fn_to_holonomy(surface).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    if let Some(s) = &report.systole {
        let (pieces, _) = cut_along(surface, s.curve).map_err(|e| e.to_string())?;
        for p in &pieces {
            parts.push(fn_to_holonomy(p).map_err(|e| e.to_string())?);
        }
    }
    Ok((ambient, parts))
}
