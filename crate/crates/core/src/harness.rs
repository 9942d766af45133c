//! Seeded sampling of surfaces and batch verification into CSV.
//!
//! Sample `i` of a run with seed `s` draws from `ChaCha8Rng::seed_from_u64(s + i)`
//! (wrapping addition; `rand_chacha` 0.3, whose `seed_from_u64` expands the
//! 64-bit seed with PCG32). Coordinates are drawn in a fixed order: for each
//! gluing of [`canonical_graph`] in id order a length `u` in `[min, max]` and
//! then a twist in `[0, length)`, then one length per boundary leg. A uniform
//! draw is `min + (max - min) * x` with `x` the generator's standard `f64` in
//! `[0, 1)`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::peel::{decompose, verify_bers_bound, PeelError};
use crate::spectra::{EnumerationPolicy, SpectraError};
use crate::surface::{canonical_graph, validate, FnCoordinates, InteriorCoord, Surface};
use crate::trig::MAX_LENGTH;

pub const CSV_HEADER: [&str; 12] = [
    "seed",
    "genus",
    "boundary_count",
    "area",
    "boundary_total",
    "systole",
    "max_curve_length",
    "bound",
    "passed",
    "steps",
    "stability",
    "note",
];

/// Name recorded in the CSV preamble.
pub const GENERATOR: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64(seed + index))";

/// Largest `2g - 2 + n` accepted by the sampler.
pub const MAX_PANTS: usize = 6;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("unsupported topology: genus {genus}, {boundaries} boundaries (need 1 <= 2g - 2 + n <= {MAX_PANTS})")]
    UnsupportedTopology { genus: usize, boundaries: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub genus: usize,
    pub boundaries: usize,
    pub samples: usize,
    /// Range for interior lengths.
    pub length_range: (f64, f64),
    /// Range for boundary lengths.
    pub boundary_range: (f64, f64),
    pub seed: u64,
    pub policy: EnumerationPolicy,
}

impl ExperimentConfig {
    pub fn new(genus: usize, boundaries: usize, samples: usize, seed: u64) -> Self {
        Self {
            genus,
            boundaries,
            samples,
            length_range: (0.5, 6.0),
            boundary_range: (0.5, 6.0),
            seed,
            policy: EnumerationPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let pants = (2 * self.genus + self.boundaries).checked_sub(2);
        if !matches!(pants, Some(1..=MAX_PANTS)) {
            return Err(HarnessError::UnsupportedTopology {
                genus: self.genus,
                boundaries: self.boundaries,
            });
        }
        if self.samples == 0 {
            return Err(HarnessError::InvalidConfig(
                "sample count must be at least 1".into(),
            ));
        }
        for (name, (lo, hi)) in [
            ("length", self.length_range),
            ("boundary", self.boundary_range),
        ] {
            if !(lo > 0.0 && lo <= hi && hi <= MAX_LENGTH) {
                return Err(HarnessError::InvalidConfig(format!(
                    "{name} range [{lo}, {hi}] must satisfy 0 < min <= max <= {MAX_LENGTH}"
                )));
            }
        }
        self.policy
            .validate()
            .map_err(|e| HarnessError::InvalidConfig(e.to_string()))
    }

    /// Seed of sample `index`, as written in the CSV.
    pub fn sample_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// The surface of sample `index`: same config and index, same surface.
pub fn sample_surface(config: &ExperimentConfig, index: usize) -> Result<Surface, HarnessError> {
    config.validate()?;
    let graph = canonical_graph(config.genus, config.boundaries).ok_or(
        HarnessError::UnsupportedTopology {
            genus: config.genus,
            boundaries: config.boundaries,
        },
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.sample_seed(index));
    let mut coords = FnCoordinates::default();
    for g in &graph.gluings {
        let length = uniform(&mut rng, config.length_range);
        let twist = length * rng.gen::<f64>();
        coords
            .interior
            .insert(g.curve, InteriorCoord { length, twist });
    }
    for b in &graph.boundaries {
        coords
            .boundary
            .insert(b.curve, uniform(&mut rng, config.boundary_range));
    }
    validate(graph, coords).map_err(|e| HarnessError::InvalidConfig(e.to_string()))
}

/// How a sample ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    /// The run completed but the bound or the certificate failed, or the
    /// systole is not a pants-graph curve.
    Failed,
    /// Stability failure or numerical breakdown.
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub seed: u64,
    pub genus: usize,
    pub boundary_count: usize,
    pub area: f64,
    pub boundary_total: f64,
    pub systole: Option<f64>,
    pub max_curve_length: Option<f64>,
    pub bound: f64,
    /// `None` when the run did not finish.
    pub passed: Option<bool>,
    pub steps: usize,
    pub stable: bool,
    pub note: String,
    pub outcome: Outcome,
}

impl SampleRow {
    fn record(&self) -> [String; 12] {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        [
            self.seed.to_string(),
            self.genus.to_string(),
            self.boundary_count.to_string(),
            self.area.to_string(),
            self.boundary_total.to_string(),
            opt(self.systole),
            opt(self.max_curve_length),
            self.bound.to_string(),
            self.passed.map(|p| p.to_string()).unwrap_or_default(),
            self.steps.to_string(),
            if self.stable { "ok" } else { "unstable" }.to_string(),
            self.note.clone(),
        ]
    }
}

/// Outcome a failed run is counted under.
pub fn classify(e: &PeelError) -> Outcome {
    match e {
        PeelError::SystoleNotDecompositionCurve { .. }
        | PeelError::Lemma3Violation { .. }
        | PeelError::ClosedSurface
        | PeelError::HasBoundary => Outcome::Failed,
        _ => Outcome::Numeric,
    }
}

/// Decomposes and certifies one surface.
pub fn run_sample(surface: &Surface, seed: u64, policy: &EnumerationPolicy) -> SampleRow {
    let mut row = SampleRow {
        seed,
        genus: surface.genus(),
        boundary_count: surface.boundary_count(),
        area: surface.area(),
        boundary_total: surface.boundary_length(),
        systole: None,
        max_curve_length: None,
        bound: surface.boundary_length().max(surface.area()),
        passed: None,
        steps: 0,
        stable: true,
        note: String::new(),
        outcome: Outcome::Numeric,
    };
    match decompose(surface, policy) {
        Ok(report) => {
            let cert = verify_bers_bound(&report, surface);
            let passed = report.passed && cert.passed;
            row.systole = report.systole.as_ref().map(|s| s.length);
            row.max_curve_length = Some(report.max_curve_length);
            row.bound = report.bound;
            row.passed = Some(passed);
            row.steps = report.steps.len();
            row.note = cert.failures.join("; ");
            row.outcome = if passed {
                Outcome::Passed
            } else {
                Outcome::Failed
            };
        }
        Err(f) => {
            row.systole = match f.error {
                PeelError::SystoleNotDecompositionCurve { length, .. } => Some(length),
                PeelError::Lemma3Violation { systole, .. } => Some(systole),
                _ => f.partial.systole.as_ref().map(|s| s.length),
            };
            row.steps = f.partial.steps.len();
            row.stable = !matches!(
                f.error,
                PeelError::Spectra(SpectraError::StabilityFailure { .. })
            );
            row.note = f.error.to_string();
            row.outcome = classify(&f.error);
        }
    }
    row
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExperimentSummary {
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub numeric: usize,
}

impl ExperimentSummary {
    pub fn all_passed(&self) -> bool {
        self.passed == self.rows
    }
}

/// Samples, decomposes and certifies `config.samples` surfaces, writing one CSV
/// row per sample in index order. Per-sample failures go to the `note` column;
/// only I/O errors abort.
pub fn run_experiment<W: Write>(
    config: &ExperimentConfig,
    mut out: W,
) -> Result<ExperimentSummary, HarnessError> {
    config.validate()?;
    writeln!(out, "# generator: {GENERATOR}")?;
    writeln!(
        out,
        "# genus={} boundaries={} samples={} seed={} len=[{},{}] bnd=[{},{}] max_word_len={} margin={} conjugator_cutoff={} tol_rel={} tol_abs={}",
        config.genus,
        config.boundaries,
        config.samples,
        config.seed,
        config.length_range.0,
        config.length_range.1,
        config.boundary_range.0,
        config.boundary_range.1,
        config.policy.max_word_length,
        config.policy.stability_margin,
        config.policy.conjugator_cutoff,
        config.policy.tolerance.rel,
        config.policy.tolerance.abs,
    )?;
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(CSV_HEADER)?;
    let mut summary = ExperimentSummary::default();
    for index in 0..config.samples {
        let surface = sample_surface(config, index)?;
        let row = run_sample(&surface, config.sample_seed(index), &config.policy);
        csv.write_record(row.record())?;
        summary.rows += 1;
        match row.outcome {
            Outcome::Passed => summary.passed += 1,
            Outcome::Failed => summary.failed += 1,
            Outcome::Numeric => summary.numeric += 1,
        }
    }
    csv.flush()?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::serialize_surface;

    #[test]
    fn same_index_same_surface() {
        let c = ExperimentConfig::new(2, 0, 3, 1);
        let a = serialize_surface(&sample_surface(&c, 0).unwrap());
        let b = serialize_surface(&sample_surface(&c, 0).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, serialize_surface(&sample_surface(&c, 1).unwrap()));
    }

    #[test]
    fn pants_and_genus_two_shapes() {
        let p = sample_surface(&ExperimentConfig::new(0, 3, 1, 5), 0).unwrap();
        assert!(p.interior_curves().is_empty());
        let s = sample_surface(&ExperimentConfig::new(2, 0, 1, 5), 0).unwrap();
        assert_eq!(s.pants_count(), 2);
        assert_eq!(s.interior_curves().len(), 3);
        for c in s.interior_curves() {
            let coord = s.coords().interior[&c];
            assert!((0.5..=6.0).contains(&coord.length));
            assert!((0.0..coord.length).contains(&coord.twist));
        }
    }

    #[test]
    fn config_rejections() {
        let bad = [
            ExperimentConfig::new(2, 0, 0, 1),
            ExperimentConfig::new(0, 2, 1, 1),
            ExperimentConfig::new(4, 1, 1, 1),
            ExperimentConfig {
                length_range: (0.0, 1.0),
                ..ExperimentConfig::new(1, 1, 1, 1)
            },
            ExperimentConfig {
                boundary_range: (1.0, 51.0),
                ..ExperimentConfig::new(1, 1, 1, 1)
            },
            ExperimentConfig {
                length_range: (2.0, 1.0),
                ..ExperimentConfig::new(1, 1, 1, 1)
            },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
        assert!(matches!(
            ExperimentConfig::new(3, 3, 1, 1).validate(),
            Err(HarnessError::UnsupportedTopology { .. })
        ));
        assert!(ExperimentConfig::new(3, 0, 1, 1).validate().is_ok());
    }

    #[test]
    fn csv_rows_in_order_with_fixed_header() {
        let c = ExperimentConfig::new(1, 1, 3, 9);
        let mut buf = Vec::new();
        let summary = run_experiment(&c, &mut buf).unwrap();
        assert_eq!(summary.rows, 3);
        assert!(summary.all_passed(), "{summary:?}");
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# generator: ChaCha8"));
        assert_eq!(lines[2], CSV_HEADER.join(","));
        assert_eq!(lines.len(), 6);
        for (k, line) in lines[3..].iter().enumerate() {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f[0], (9 + k).to_string());
            let bound: f64 = f[7].parse().unwrap();
            let area: f64 = f[3].parse().unwrap();
            let total: f64 = f[4].parse().unwrap();
            assert_eq!(bound, area.max(total));
            assert_eq!(f[5], "");
        }
    }
}
