//! Classification of a space by probing: for which invariant metrics does
//! every tangent direction extend to a geodesic vector?
//!
//! The decision procedure is completion-based and exact. For one metric, a
//! *probe* is a tangent vector `x_m`; the metric survives the probe when the
//! completion system of `x_m` is consistent (some isotropy part makes the
//! probe a geodesic vector). A single inconsistent probe is a finite witness
//! that the metric is not geodesic-orbit.
//!
//! Probes run in a deterministic order: *structured* probes first — two-basis
//! combinations spanning each pair of modules, pairs with unequal metric
//! scalars ahead of equal ones — then seeded random dense probes. A failing
//! metric therefore reports the simplest witness available, and reruns with
//! the same seed reproduce reports byte for byte.
//!
//! The space-level verdict aggregates per-metric outcomes over a scaling-
//! deduplicated grid of small integer metrics plus seeded random rational
//! metrics: geodesic-orbit for every tested metric, only for the standard
//! one, or mixed (reported honestly as undetermined).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraVector;
use crate::geodesic::complete;
use crate::metric::InvariantMetric;
use crate::scalar::{rat, rat_i, Rat, Scalar};
use crate::space::{Part, SpaceDescriptor};
use crate::Result;

/// Tuning knobs for the classification sweep.
#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    /// Entries of the integer metric grid run over `1..=grid_max`.
    pub grid_max: i64,
    /// Number of random rational metrics added to the grid.
    pub random_metrics: usize,
    /// Number of random dense probes per surviving metric.
    pub random_probes: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { grid_max: 3, random_metrics: 50, random_probes: 200 }
    }
}

/// Space-level verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every tested metric is geodesic-orbit.
    GoForAllMetrics,
    /// Exactly the standard metric is geodesic-orbit among those tested.
    GoIffStandard,
    /// Mixed outcomes; no clean statement supported by the probes.
    Undetermined,
}

impl Verdict {
    pub fn id(&self) -> &'static str {
        match self {
            Verdict::GoForAllMetrics => "go-for-all-metrics",
            Verdict::GoIffStandard => "go-iff-standard",
            Verdict::Undetermined => "undetermined",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Verdict::GoForAllMetrics => {
                "geodesic-orbit for every tested invariant metric"
            }
            Verdict::GoIffStandard => {
                "geodesic-orbit exactly for the standard metric among tested metrics"
            }
            Verdict::Undetermined => "mixed probe outcomes; undetermined",
        }
    }
}

/// A probe whose completion system is inconsistent: finite evidence that the
/// metric is not geodesic-orbit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    /// `structured-pair` or `random`.
    pub kind: String,
    /// For structured probes: the two modules spanned, 1-based.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modules: Option<(usize, usize)>,
    /// Nonzero coordinates of the probe, `label = value`.
    pub coords: Vec<String>,
    pub rank_a: usize,
    pub rank_augmented: usize,
}

/// Outcome of probing one metric.
#[derive(Clone, Debug)]
pub struct ProbeOutcome {
    pub probes_run: usize,
    /// Whether the completion right-hand side was identically zero on every
    /// probe run against this metric.
    pub rhs_always_zero: bool,
    /// First failing probe, if any.
    pub witness: Option<Witness>,
}

/// One failing metric with its witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricWitness {
    pub metric: InvariantMetric,
    pub witness: Witness,
}

/// Full classification report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub space: String,
    pub seed: u64,
    pub verdict: String,
    pub verdict_display: String,
    pub metrics_tested: usize,
    pub grid_metrics: usize,
    pub random_metrics: usize,
    pub random_probes_per_metric: usize,
    pub total_probes_run: usize,
    /// True when the completion right-hand side vanished on every probe of
    /// every metric — the strongest possible outcome: every probe then has
    /// the zero completion, independent of the metric.
    pub rhs_always_zero: bool,
    pub standard_metric_go: bool,
    /// Metrics with an inconsistent probe, with the witness found first.
    pub failing: Vec<MetricWitness>,
    /// Non-standard metrics that survived every probe.
    pub passing_non_standard: Vec<InvariantMetric>,
}

impl ClassifyReport {
    pub fn verdict_enum(&self) -> Verdict {
        match self.verdict.as_str() {
            "go-for-all-metrics" => Verdict::GoForAllMetrics,
            "go-iff-standard" => Verdict::GoIffStandard,
            _ => Verdict::Undetermined,
        }
    }
}

/// Probe one metric: structured pair probes in deterministic order (pairs
/// with unequal scalars first), then `random_probes` seeded dense probes.
/// Stops at the first inconsistent probe.
pub fn probe_metric(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    seed: u64,
    random_probes: usize,
) -> Result<ProbeOutcome> {
    let algebra = desc.algebra();
    let mut probes_run = 0usize;
    let mut rhs_always_zero = true;

    // Structured probes: module pairs, unequal-λ bands first.
    let all_pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let mut pairs: Vec<(usize, usize)> = all_pairs
        .iter()
        .copied()
        .filter(|&(i, j)| metric.lambda(i) != metric.lambda(j))
        .collect();
    pairs.extend(
        all_pairs
            .iter()
            .copied()
            .filter(|&(i, j)| metric.lambda(i) == metric.lambda(j)),
    );
    const COMBOS: [(i64, i64); 4] = [(1, 1), (1, 2), (2, 1), (1, -1)];
    for (i, j) in pairs {
        for &a in desc.indices(Part::M(i)) {
            for &b in desc.indices(Part::M(j)) {
                for (ca, cb) in COMBOS {
                    let mut x = AlgebraVector::<Rat>::zero(algebra.clone());
                    x.set_coeff(a, rat_i(ca));
                    x.set_coeff(b, rat_i(cb));
                    probes_run += 1;
                    let out = complete(desc, metric, &x)?;
                    rhs_always_zero &= out.rhs_zero;
                    if !out.exists() {
                        return Ok(ProbeOutcome {
                            probes_run,
                            rhs_always_zero,
                            witness: Some(Witness {
                                kind: "structured-pair".to_string(),
                                modules: Some((i + 1, j + 1)),
                                coords: coords_of(desc, &x),
                                rank_a: out.rank_a,
                                rank_augmented: out.rank_augmented,
                            }),
                        });
                    }
                }
            }
        }
    }

    // Random dense probes: every tangent coordinate gets a nonzero integer
    // from {-3, ..., 3} \ {0}.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m_idx = desc.m_indices();
    for _ in 0..random_probes {
        let mut x = AlgebraVector::<Rat>::zero(algebra.clone());
        for &i in &m_idx {
            let v: i64 = *[-3, -2, -1, 1, 2, 3]
                .get(rng.gen_range(0..6usize))
                .expect("index in range");
            x.set_coeff(i, rat_i(v));
        }
        probes_run += 1;
        let out = complete(desc, metric, &x)?;
        rhs_always_zero &= out.rhs_zero;
        if !out.exists() {
            return Ok(ProbeOutcome {
                probes_run,
                rhs_always_zero,
                witness: Some(Witness {
                    kind: "random".to_string(),
                    modules: None,
                    coords: coords_of(desc, &x),
                    rank_a: out.rank_a,
                    rank_augmented: out.rank_augmented,
                }),
            });
        }
    }

    Ok(ProbeOutcome { probes_run, rhs_always_zero, witness: None })
}

/// Classify a space over the metric grid plus seeded random metrics.
pub fn classify_space(
    desc: &SpaceDescriptor,
    seed: u64,
    opts: ClassifyOptions,
) -> Result<ClassifyReport> {
    let grid = metric_grid(opts.grid_max);
    let grid_count = grid.len();
    let mut metrics = grid;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5_5A5A_1234_5678);
    let mut random_added = 0usize;
    let mut attempts = 0usize;
    let mut keys: Vec<String> = metrics.iter().map(scaling_key).collect();
    // Draw until the requested number of metrics distinct from the grid (and
    // from each other, up to scaling) has been reached.
    while random_added < opts.random_metrics && attempts < opts.random_metrics * 100 + 1000 {
        attempts += 1;
        let m = random_metric(&mut rng);
        let key = scaling_key(&m);
        if !keys.contains(&key) {
            keys.push(key);
            metrics.push(m);
            random_added += 1;
        }
    }

    let mut total_probes_run = 0usize;
    let mut rhs_always_zero = true;
    let mut standard_metric_go = true;
    let mut failing = Vec::new();
    let mut passing_non_standard = Vec::new();
    for (idx, metric) in metrics.iter().enumerate() {
        let metric_seed = seed
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(idx as u64 + 1));
        let outcome = probe_metric(desc, metric, metric_seed, opts.random_probes)?;
        total_probes_run += outcome.probes_run;
        rhs_always_zero &= outcome.rhs_always_zero;
        let standard = is_standard_up_to_scale(metric);
        match outcome.witness {
            Some(witness) => {
                if standard {
                    // Cannot happen for a valid space description: the
                    // standard completion system has an identically zero
                    // right-hand side. Report honestly rather than assert.
                    standard_metric_go = false;
                }
                failing.push(MetricWitness { metric: metric.clone(), witness });
            }
            None => {
                if !standard {
                    passing_non_standard.push(metric.clone());
                }
            }
        }
    }

    let metrics_tested = metrics.len();
    let verdict = if failing.is_empty() {
        Verdict::GoForAllMetrics
    } else if standard_metric_go && passing_non_standard.is_empty() {
        Verdict::GoIffStandard
    } else {
        Verdict::Undetermined
    };

    Ok(ClassifyReport {
        space: desc.name.clone(),
        seed,
        verdict: verdict.id().to_string(),
        verdict_display: verdict.describe().to_string(),
        metrics_tested,
        grid_metrics: grid_count,
        random_metrics: metrics_tested - grid_count,
        random_probes_per_metric: opts.random_probes,
        total_probes_run,
        rhs_always_zero,
        standard_metric_go,
        failing,
        passing_non_standard,
    })
}

fn coords_of(desc: &SpaceDescriptor, x: &AlgebraVector<Rat>) -> Vec<String> {
    let algebra = desc.algebra();
    x.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero_with(0.0))
        .map(|(i, c)| format!("{} = {}", algebra.label(i), c))
        .collect()
}

/// The metric scalars up to common scaling, as a dedup key.
fn scaling_key(metric: &InvariantMetric) -> String {
    let l1 = metric.lambda(0);
    format!(
        "{},{}",
        metric.lambda(1) / l1,
        metric.lambda(2) / l1
    )
}

fn is_standard_up_to_scale(metric: &InvariantMetric) -> bool {
    metric.lambda(0) == metric.lambda(1) && metric.lambda(1) == metric.lambda(2)
}

/// All integer metrics with entries in `1..=max`, deduplicated up to common
/// scaling, in lexicographic order.
fn metric_grid(max: i64) -> Vec<InvariantMetric> {
    let mut out = Vec::new();
    let mut keys = Vec::new();
    for a in 1..=max {
        for b in 1..=max {
            for c in 1..=max {
                let m = InvariantMetric::new([rat_i(a), rat_i(b), rat_i(c)])
                    .expect("positive entries");
                let key = scaling_key(&m);
                if !keys.contains(&key) {
                    keys.push(key);
                    out.push(m);
                }
            }
        }
    }
    out
}

/// A random metric with each scalar a ratio of integers from `1..=4`.
fn random_metric(rng: &mut ChaCha8Rng) -> InvariantMetric {
    let mut part = || {
        let p = rng.gen_range(1..=4i64);
        let q = rng.gen_range(1..=4i64);
        rat(p, q)
    };
    let lambda = [part(), part(), part()];
    InvariantMetric::new(lambda).expect("positive entries")
}
