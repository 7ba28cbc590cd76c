//! The ten-point acceptance gate for the library, one test per criterion:
//!
//!  1. exact family enumeration on SU(2) matches frozen golden files;
//!  2. every enumerated family of the four-dimensional frame space is sound
//!     at 100 seeded points per family, and the isolated varieties (the two
//!     single axes and the band quadric) appear among the emitted families;
//!  3. 1000-start Newton sampling finds nothing farther than 1e-8 from the
//!     enumerated varieties;
//!  4. the product of three round 2-spheres classifies as geodesic-orbit
//!     for every metric, with an identically vanishing completion
//!     right-hand side;
//!  5. five block-decomposed spaces classify as geodesic-orbit exactly at
//!     the standard metric, every integer-grid failure witnessed by a
//!     structured two-module probe spanning unequal metric scalars;
//!  6. completions exist precisely when the two system ranks agree, on ten
//!     thousand random draws across the catalog, and every completion
//!     passes the exact geodesic check;
//!  7. the three equivalent forms of the geodesic condition never disagree
//!     on ten thousand random draws per space;
//!  8. triple symbols are fully symmetric, vanish on repeated indices, and
//!     match their frozen values;
//!  9. an independent Runge–Kutta flow integrator confirms that enumerated
//!     representatives are equilibria while generic starts drift;
//! 10. every seeded report from criteria 3–6 is byte-for-byte reproducible.

use std::path::Path;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use wallach_core::algebra::AlgebraVector;
use wallach_core::catalog;
use wallach_core::classify::{classify_space, ClassifyOptions, ClassifyReport, Verdict};
use wallach_core::families::{self, SolutionFamily};
use wallach_core::flow::{integrate, FlowOptions};
use wallach_core::geodesic::{complete, condition_triple, is_geodesic_vector};
use wallach_core::metric::InvariantMetric;
use wallach_core::report::{to_json_string, Envelope, Mode};
use wallach_core::sampler::{residual_vec, sample_space, SampleReport, SamplerOptions};
use wallach_core::scalar::{rat, rat_i, Quad, Rat};
use wallach_core::space::{Part, SpaceDescriptor};
use wallach_core::DEFAULT_SEED;

/// The four non-degenerate metric patterns on the frame space, one
/// representative each.
const FRAME_CASES: [&str; 4] = ["1,1,2", "1,2,1", "2,1,1", "1,2,3"];

/// Concrete spaces instantiating every catalog entry.
const CATALOG_SPACES: [&str; 7] = [
    "su2_trivial",
    "stiefel_n:4",
    "stiefel_n:5",
    "so_klm:2,2,1",
    "so_klm:2,2,2",
    "product_s2_cubed",
    "quad_diag_su2",
];

fn space(spec: &str) -> SpaceDescriptor {
    catalog::parse_spec(spec).expect(spec)
}

fn metric(s: &str) -> InvariantMetric {
    InvariantMetric::parse(s).expect(s).0
}

fn qr(r: Rat) -> Quad {
    Quad::from_rational(r)
}

/// A small rational, possibly zero.
fn draw_rat(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// A small rational, never zero.
fn draw_nonzero_rat(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let p: i64 = rng.gen_range(-5..=5);
        if p != 0 {
            return rat(p, rng.gen_range(1..=4));
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 1 — SU(2) enumeration matches the frozen golden files.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_su2_enumeration_matches_golden_files() {
    let started = Instant::now();
    let desc = space("su2_trivial");
    let cases = [
        ("1,1,2", "su2_metric_1_1_2.json"),
        ("1,2,1", "su2_metric_1_2_1.json"),
        ("2,1,1", "su2_metric_2_1_1.json"),
        ("1,2,3", "su2_metric_1_2_3.json"),
        ("1,1,1", "su2_metric_1_1_1.json"),
    ];
    for (metric_str, file) in cases {
        let m = metric(metric_str);
        let report = families::enumerate(&desc, &m).unwrap();
        let envelope = Envelope::new("enumerate", Mode::Exact, &report);
        let rendered = to_json_string(&envelope).unwrap();
        let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(file);
        let golden = std::fs::read_to_string(&golden_path)
            .unwrap_or_else(|e| panic!("cannot read {}: {e}", golden_path.display()));
        assert_eq!(
            rendered, golden,
            "enumeration drifted from the golden file for metric ({metric_str})"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1), "criterion 1 took {elapsed:?}, budget 1 s");
    println!("criterion 1 PASS: 5 golden enumerations matched in {elapsed:?}");
}

// ---------------------------------------------------------------------------
// Criterion 2 — frame-space families are sound at seeded points and the
// isolated varieties all appear.
// ---------------------------------------------------------------------------

/// Coordinate indices of so(4) in its standard basis.
struct Ix {
    a12: usize,
    a13: usize,
    a14: usize,
    a23: usize,
    a24: usize,
    a34: usize,
}

fn frame_indices(desc: &SpaceDescriptor) -> Ix {
    let g = desc.algebra();
    let i = |l: &str| g.index_of_label(l).unwrap();
    Ix {
        a12: i("e_12"),
        a13: i("e_13"),
        a14: i("e_14"),
        a23: i("e_23"),
        a24: i("e_24"),
        a34: i("e_34"),
    }
}

/// One seeded generic point on the family's variety, in ambient coordinates.
fn frame_family_point(
    fam: &SolutionFamily,
    ix: &Ix,
    m: &InvariantMetric,
    rng: &mut ChaCha8Rng,
) -> Vec<Quad> {
    let mut p = vec![qr(rat_i(0)); fam.dim];
    let l1 = m.lambda(0).clone();
    let l2 = m.lambda(1).clone();
    let l3 = m.lambda(2).clone();
    let beta = l3.clone() - l1.clone();
    let gamma = l2.clone() - l1.clone();
    match fam.id.as_str() {
        "band-quadric" => {
            // a13·a23 + a14·a24 = 0, solved for a24.
            let a13 = draw_nonzero_rat(rng);
            let a23 = draw_rat(rng);
            let a14 = draw_nonzero_rat(rng);
            let a24 = -(a13.clone() * a23.clone()) / a14.clone();
            p[ix.a13] = qr(a13);
            p[ix.a23] = qr(a23);
            p[ix.a14] = qr(a14);
            p[ix.a24] = qr(a24);
        }
        "span-m1-m2" => {
            p[ix.a12] = qr(draw_nonzero_rat(rng));
            p[ix.a13] = qr(draw_rat(rng));
            p[ix.a14] = qr(draw_rat(rng));
        }
        "span-m1-m3" => {
            p[ix.a12] = qr(draw_nonzero_rat(rng));
            p[ix.a23] = qr(draw_rat(rng));
            p[ix.a24] = qr(draw_rat(rng));
        }
        "cross-span" => {
            if fam.nonzero.contains(&ix.a34) {
                p[ix.a34] = qr(draw_nonzero_rat(rng));
                p[ix.a12] = qr(draw_rat(rng));
            } else {
                // Cover all three strata of the free plane.
                match rng.gen_range(0..3) {
                    0 => {
                        p[ix.a34] = qr(draw_nonzero_rat(rng));
                        p[ix.a12] = qr(draw_rat(rng));
                    }
                    1 => p[ix.a12] = qr(draw_nonzero_rat(rng)),
                    _ => {
                        p[ix.a34] = qr(draw_nonzero_rat(rng));
                        p[ix.a12] = qr(draw_nonzero_rat(rng));
                    }
                }
            }
        }
        "band-free" => {
            p[ix.a13] = qr(draw_rat(rng));
            p[ix.a14] = qr(draw_rat(rng));
            p[ix.a23] = qr(draw_rat(rng));
            p[ix.a24] = qr(draw_nonzero_rat(rng));
        }
        "linked-plus" | "linked-minus" => {
            // a12 = λ2·t, a34 = ±γ·t, band linked pairwise.
            let sg = if fam.id == "linked-plus" { rat_i(1) } else { rat_i(-1) };
            let t = draw_nonzero_rat(rng);
            let b23 = draw_rat(rng);
            let b24 = draw_rat(rng);
            p[ix.a12] = qr(l2.clone() * t.clone());
            p[ix.a34] = qr(sg.clone() * gamma.clone() * t);
            p[ix.a23] = qr(b23.clone());
            p[ix.a24] = qr(b24.clone());
            p[ix.a14] = qr(-(sg.clone() * b23));
            p[ix.a13] = qr(sg * b24);
        }
        "band-radical" => {
            // λ2λ3·a34² = βγ·a12²; realized over Q(√D), D = βγλ2λ3.
            let d_rad = beta.clone() * gamma.clone() * l2.clone() * l3.clone();
            let sqrt_d = Quad::sqrt(&d_rad).expect("positive radicand");
            let sg = if rng.gen_bool(0.5) { rat_i(1) } else { rat_i(-1) };
            let t = draw_nonzero_rat(rng);
            let b23 = draw_rat(rng);
            let b24 = draw_rat(rng);
            let a34 = qr(sg.clone() * t.clone() / (l2.clone() * l3.clone())) * sqrt_d.clone();
            let r = qr(sg * beta * l3 / d_rad) * sqrt_d;
            p[ix.a12] = qr(t);
            p[ix.a34] = a34;
            p[ix.a23] = qr(b23.clone());
            p[ix.a24] = qr(b24.clone());
            p[ix.a14] = -(r.clone() * qr(b23));
            p[ix.a13] = r * qr(b24);
        }
        other => panic!("no instantiation recipe for family {other}"),
    }
    p
}

#[test]
fn criterion_02_frame_families_sound_and_isolated_varieties_present() {
    let started = Instant::now();
    let desc = space("stiefel_n:4");
    let g = desc.algebra().clone();
    let ix = frame_indices(&desc);
    let dim = g.dim();
    let expected_ids: [(&str, &[&str]); 4] = [
        ("1,1,2", &["band-quadric", "span-m1-m2", "cross-span"]),
        ("1,2,1", &["band-quadric", "span-m1-m3", "cross-span"]),
        ("2,1,1", &["band-free", "cross-span", "linked-plus", "linked-minus"]),
        ("1,2,3", &["band-quadric", "cross-span", "band-radical"]),
    ];
    let mut points_checked = 0usize;
    for (case_no, (metric_str, want_ids)) in expected_ids.iter().enumerate() {
        let m = metric(metric_str);
        let (fams, _) = families::stiefel4_families(&desc, &m);
        let got_ids: Vec<&str> = fams.iter().map(|f| f.id.as_str()).collect();
        assert_eq!(&got_ids, want_ids, "family list changed at metric ({metric_str})");

        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED.wrapping_add(case_no as u64));
        for fam in &fams {
            for _ in 0..100 {
                let p = frame_family_point(fam, &ix, &m, &mut rng);
                assert!(
                    fam.contains(&p),
                    "seeded point escaped family {} at metric ({metric_str})",
                    fam.id
                );
                let mut v = AlgebraVector::<Quad>::zero(g.clone());
                for (i, c) in p.iter().enumerate() {
                    v.coeffs_mut()[i] = c.clone();
                }
                let check = is_geodesic_vector(&desc, &m, &v, 0.0).unwrap();
                assert!(
                    check.ok,
                    "family {} point fails the exact geodesic check at metric ({metric_str})",
                    fam.id
                );
                points_checked += 1;
            }
        }

        // The isolated varieties: each single axis lies in the closure of
        // some emitted family …
        for axis in [ix.a12, ix.a34] {
            let mut p = vec![qr(rat_i(0)); dim];
            p[axis] = qr(rat_i(1));
            assert!(
                fams.iter().any(|f| f.closure_contains(&p)),
                "axis {axis} missing from every family closure at metric ({metric_str})"
            );
        }
        // … and the band quadric a13·a23 + a14·a24 = 0 (with no e_12 or
        // e_34 component) is covered by an emitted family at every pattern.
        for _ in 0..20 {
            let a13 = draw_nonzero_rat(&mut rng);
            let a23 = draw_rat(&mut rng);
            let a14 = draw_nonzero_rat(&mut rng);
            let a24 = -(a13.clone() * a23.clone()) / a14.clone();
            let mut p = vec![qr(rat_i(0)); dim];
            p[ix.a13] = qr(a13);
            p[ix.a23] = qr(a23);
            p[ix.a14] = qr(a14);
            p[ix.a24] = qr(a24);
            assert!(
                fams.iter().any(|f| f.contains(&p)),
                "band-quadric point missing from every family at metric ({metric_str})"
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(5), "criterion 2 took {elapsed:?}, budget 5 s");
    println!("criterion 2 PASS: {points_checked} seeded family points verified in {elapsed:?}");
}

// ---------------------------------------------------------------------------
// Criterion 3 — Newton sampling stays on the enumerated varieties.
// ---------------------------------------------------------------------------

fn compute_sampling_reports() -> (Vec<SampleReport>, String, Duration) {
    let started = Instant::now();
    let desc = space("stiefel_n:4");
    let mut reports = Vec::new();
    for case in FRAME_CASES {
        let m = metric(case);
        let opts = SamplerOptions { starts: 1000, ..SamplerOptions::default() };
        reports.push(sample_space(&desc, &m, DEFAULT_SEED, opts).unwrap());
    }
    let elapsed = started.elapsed();
    let json = serde_json::to_string_pretty(&reports).unwrap();
    (reports, json, elapsed)
}

static SAMPLING: OnceLock<(Vec<SampleReport>, String, Duration)> = OnceLock::new();

fn sampling() -> &'static (Vec<SampleReport>, String, Duration) {
    SAMPLING.get_or_init(compute_sampling_reports)
}

#[test]
fn criterion_03_newton_sampling_stays_on_enumerated_varieties() {
    let (reports, _, elapsed) = sampling();
    let mut solutions = 0usize;
    for report in reports {
        assert!(report.converged > 0, "no convergence at metric ({})", report.metric.display());
        for v in &report.distinct {
            let d = v.family_distance.expect("every solution carries a family distance");
            assert!(
                d < 1e-8,
                "solution {:?} sits {d:.3e} from the nearest family at metric ({})",
                v.coords,
                report.metric.display()
            );
            solutions += 1;
        }
    }
    assert!(*elapsed < Duration::from_secs(30), "criterion 3 took {elapsed:?}, budget 30 s");
    println!(
        "criterion 3 PASS: {solutions} distinct solutions from 4×1000 starts, all within 1e-8, in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 4 — the product of three round 2-spheres is geodesic-orbit for
// every metric.
// ---------------------------------------------------------------------------

fn compute_product_classification() -> (ClassifyReport, String, Duration) {
    let started = Instant::now();
    let desc = space("product_s2_cubed");
    let report = classify_space(&desc, DEFAULT_SEED, ClassifyOptions::default()).unwrap();
    let elapsed = started.elapsed();
    let json = serde_json::to_string_pretty(&report).unwrap();
    (report, json, elapsed)
}

static PRODUCT_CLASSIFY: OnceLock<(ClassifyReport, String, Duration)> = OnceLock::new();

fn product_classification() -> &'static (ClassifyReport, String, Duration) {
    PRODUCT_CLASSIFY.get_or_init(compute_product_classification)
}

#[test]
fn criterion_04_product_space_is_go_for_all_metrics() {
    let (report, _, elapsed) = product_classification();
    assert!(
        matches!(report.verdict_enum(), Verdict::GoForAllMetrics),
        "verdict was {}",
        report.verdict
    );
    // The full 27-point integer grid collapses to 25 rays up to scaling.
    assert_eq!(report.grid_metrics, 25, "integer grid size changed");
    assert_eq!(report.random_metrics, 50, "random metric count changed");
    assert_eq!(report.metrics_tested, 75);
    assert!(report.failing.is_empty(), "a metric failed: {:?}", report.failing.first());
    assert!(
        report.rhs_always_zero,
        "the completion right-hand side did not vanish on every probe"
    );
    assert!(*elapsed < Duration::from_secs(10), "criterion 4 took {elapsed:?}, budget 10 s");
    println!(
        "criterion 4 PASS: geodesic-orbit for all {} metrics, right-hand side identically zero, in {elapsed:?}",
        report.metrics_tested
    );
}

// ---------------------------------------------------------------------------
// Criterion 5 — block spaces are geodesic-orbit exactly at the standard
// metric, with structured witnesses on the integer grid.
// ---------------------------------------------------------------------------

const BLOCK_SPACES: [&str; 5] =
    ["so_klm:2,2,1", "so_klm:2,2,2", "stiefel_n:4", "stiefel_n:5", "quad_diag_su2"];

fn compute_block_classifications() -> (Vec<ClassifyReport>, String, Duration) {
    let started = Instant::now();
    let mut reports = Vec::new();
    for spec in BLOCK_SPACES {
        let desc = space(spec);
        reports.push(classify_space(&desc, DEFAULT_SEED, ClassifyOptions::default()).unwrap());
    }
    let elapsed = started.elapsed();
    let json = serde_json::to_string_pretty(&reports).unwrap();
    (reports, json, elapsed)
}

static BLOCK_CLASSIFY: OnceLock<(Vec<ClassifyReport>, String, Duration)> = OnceLock::new();

fn block_classifications() -> &'static (Vec<ClassifyReport>, String, Duration) {
    BLOCK_CLASSIFY.get_or_init(compute_block_classifications)
}

/// True when every metric scalar is one of the integers 1..=3, i.e. the
/// metric coincides (as a ray representative) with an integer grid point.
fn is_grid_metric(m: &InvariantMetric) -> bool {
    (0..3).all(|i| (1..=3).any(|k| m.lambda(i) == &rat_i(k)))
}

#[test]
fn criterion_05_block_spaces_go_iff_standard_with_structured_witnesses() {
    let (reports, _, elapsed) = block_classifications();
    let mut grid_witnesses = 0usize;
    for (spec, report) in BLOCK_SPACES.iter().zip(reports) {
        assert!(
            matches!(report.verdict_enum(), Verdict::GoIffStandard),
            "{spec}: verdict was {}",
            report.verdict
        );
        assert!(report.standard_metric_go, "{spec}: the standard metric itself failed");
        assert!(
            report.passing_non_standard.is_empty(),
            "{spec}: a non-standard metric passed every probe"
        );
        // Everything but the standard ray fails.
        assert_eq!(report.failing.len(), report.metrics_tested - 1, "{spec}");
        for mw in &report.failing {
            if !is_grid_metric(&mw.metric) {
                continue;
            }
            grid_witnesses += 1;
            assert_eq!(
                mw.witness.kind, "structured-pair",
                "{spec}: grid metric ({}) fell to an unstructured probe",
                mw.metric.display()
            );
            let (i, j) = mw.witness.modules.expect("structured witnesses name their modules");
            assert_ne!(
                mw.metric.lambda(i - 1),
                mw.metric.lambda(j - 1),
                "{spec}: witness modules m{i}, m{j} carry equal scalars at ({})",
                mw.metric.display()
            );
        }
    }
    // 24 non-standard grid rays per space, at minimum (random draws may
    // land on grid values too).
    assert!(grid_witnesses >= 24 * BLOCK_SPACES.len(), "only {grid_witnesses} grid witnesses");
    assert!(*elapsed < Duration::from_secs(60), "criterion 5 took {elapsed:?}, budget 60 s");
    println!(
        "criterion 5 PASS: 5 spaces geodesic-orbit iff standard, {grid_witnesses} structured grid witnesses, in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6 — completion round trip on ten thousand random draws.
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SpaceRoundTrip {
    space: String,
    samples: usize,
    completions_found: usize,
    rank_deficient: usize,
    rhs_zero: usize,
}

#[derive(Serialize)]
struct RoundTripSummary {
    seed: u64,
    samples: usize,
    completions_found: usize,
    rank_deficient: usize,
    by_space: Vec<SpaceRoundTrip>,
}

fn compute_round_trip() -> (RoundTripSummary, String, Duration) {
    let started = Instant::now();
    let descs: Vec<SpaceDescriptor> = CATALOG_SPACES.iter().map(|s| space(s)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut by_space: Vec<SpaceRoundTrip> = CATALOG_SPACES
        .iter()
        .map(|s| SpaceRoundTrip {
            space: (*s).to_string(),
            samples: 0,
            completions_found: 0,
            rank_deficient: 0,
            rhs_zero: 0,
        })
        .collect();
    const TOTAL: usize = 10_000;
    for _ in 0..TOTAL {
        let si = rng.gen_range(0..descs.len());
        let desc = &descs[si];
        let m = InvariantMetric::new([
            rat(rng.gen_range(1..=4), rng.gen_range(1..=4)),
            rat(rng.gen_range(1..=4), rng.gen_range(1..=4)),
            rat(rng.gen_range(1..=4), rng.gen_range(1..=4)),
        ])
        .unwrap();
        let mut xm = AlgebraVector::<Rat>::zero(desc.algebra().clone());
        let m_indices = desc.m_indices();
        for &i in &m_indices {
            xm.coeffs_mut()[i] = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        }
        if xm.is_zero_with(0.0) {
            xm.coeffs_mut()[m_indices[0]] = rat_i(1);
        }
        let out = complete(desc, &m, &xm).unwrap();
        let ranks_agree = out.rank_a == out.rank_augmented;
        assert_eq!(
            out.exists(),
            ranks_agree,
            "existence and rank agreement split on {} at ({})",
            desc.name,
            m.display()
        );
        let stats = &mut by_space[si];
        stats.samples += 1;
        if out.rhs_zero {
            stats.rhs_zero += 1;
        }
        match &out.completion {
            Some(x) => {
                stats.completions_found += 1;
                let check = is_geodesic_vector(desc, &m, x, 0.0).unwrap();
                assert!(
                    check.ok,
                    "completion fails the exact geodesic check on {} at ({})",
                    desc.name,
                    m.display()
                );
            }
            None => stats.rank_deficient += 1,
        }
    }
    let summary = RoundTripSummary {
        seed: DEFAULT_SEED,
        samples: TOTAL,
        completions_found: by_space.iter().map(|s| s.completions_found).sum(),
        rank_deficient: by_space.iter().map(|s| s.rank_deficient).sum(),
        by_space,
    };
    let elapsed = started.elapsed();
    let json = serde_json::to_string_pretty(&summary).unwrap();
    (summary, json, elapsed)
}

static ROUND_TRIP: OnceLock<(RoundTripSummary, String, Duration)> = OnceLock::new();

fn round_trip() -> &'static (RoundTripSummary, String, Duration) {
    ROUND_TRIP.get_or_init(compute_round_trip)
}

#[test]
fn criterion_06_completion_exists_iff_ranks_agree_on_random_draws() {
    let (summary, _, elapsed) = round_trip();
    assert_eq!(summary.samples, 10_000);
    // Both branches of the equivalence must actually occur.
    assert!(summary.completions_found > 0, "no draw ever admitted a completion");
    assert!(summary.rank_deficient > 0, "no draw ever hit a rank mismatch");
    for s in &summary.by_space {
        assert!(s.samples > 0, "{} was never drawn", s.space);
    }
    assert!(*elapsed < Duration::from_secs(60), "criterion 6 took {elapsed:?}, budget 60 s");
    println!(
        "criterion 6 PASS: 10000 draws, {} completions / {} rank-deficient, all exact, in {elapsed:?}",
        summary.completions_found, summary.rank_deficient
    );
}

// ---------------------------------------------------------------------------
// Criterion 7 — the three forms of the geodesic condition always agree.
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_condition_forms_never_disagree() {
    let started = Instant::now();
    let mut checked = 0usize;
    for spec in ["so_klm:2,2,1", "su2_trivial"] {
        let desc = space(spec);
        let g = desc.algebra().clone();
        let k_indices: Vec<usize> = desc.indices(Part::K).to_vec();
        let m_indices = desc.m_indices();
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ g.dim() as u64);
        for _ in 0..10_000 {
            let m = InvariantMetric::new([
                rat(rng.gen_range(1..=4), rng.gen_range(1..=4)),
                rat(rng.gen_range(1..=4), rng.gen_range(1..=4)),
                rat(rng.gen_range(1..=4), rng.gen_range(1..=4)),
            ])
            .unwrap();
            let mut a = AlgebraVector::<Rat>::zero(g.clone());
            for &i in &k_indices {
                a.coeffs_mut()[i] = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            }
            let mut x = AlgebraVector::<Rat>::zero(g.clone());
            for &i in &m_indices {
                x.coeffs_mut()[i] = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            }
            if x.is_zero_with(0.0) {
                x.coeffs_mut()[m_indices[0]] = rat_i(1);
            }
            let triple = condition_triple(&desc, &m, &a, &x, 0.0).unwrap();
            assert!(
                triple.all_agree(),
                "the condition forms disagree on {spec}: {triple:?}"
            );
            checked += 1;
        }
    }
    let elapsed = started.elapsed();
    println!("criterion 7 PASS: {checked} draws with zero disagreements in {elapsed:?}");
}

// ---------------------------------------------------------------------------
// Criterion 8 — triple-symbol identities.
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_triple_symbols_symmetric_vanishing_and_frozen() {
    let started = Instant::now();
    let mut specs: Vec<String> = CATALOG_SPACES.iter().map(|s| (*s).to_string()).collect();
    // Every block partition of so(n) up to n = 6.
    for n in 3..=6i64 {
        for k in 1..n - 1 {
            for l in 1..n - k {
                specs.push(format!("so_klm:{},{},{}", k, l, n - k - l));
            }
        }
    }
    let mut spaces_checked = 0usize;
    for spec in &specs {
        let desc = space(spec);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let base = desc.triple_symbol(i, j, k);
                    // Full symmetry, each permutation recomputed from the
                    // definition.
                    for (p, q, r) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
                        assert_eq!(
                            base,
                            desc.triple_symbol(p, q, r),
                            "{spec}: [{i}{j}{k}] is not permutation-invariant"
                        );
                    }
                    if i == j || j == k || i == k {
                        assert_eq!(
                            base,
                            rat_i(0),
                            "{spec}: repeated-index symbol [{i}{j}{k}] did not vanish"
                        );
                    }
                }
            }
        }
        spaces_checked += 1;
    }
    // All symbols vanish when the module brackets do.
    let product = space("product_s2_cubed");
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                assert_eq!(product.triple_symbol(i, j, k), rat_i(0));
            }
        }
    }
    // Frozen brute-force value for the four-dimensional frame space.
    let frame = space("stiefel_n:4");
    assert_eq!(frame.triple_symbol(0, 1, 2), rat(1, 2));
    let elapsed = started.elapsed();
    println!("criterion 8 PASS: symbol identities on {spaces_checked} spaces in {elapsed:?}");
}

// ---------------------------------------------------------------------------
// Criterion 9 — the flow integrator separates equilibria from generic
// starts.
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_flow_oracle_separates_equilibria_from_generic_starts() {
    let started = Instant::now();
    let desc = space("su2_trivial");
    let m = metric("1,2,3");
    let opts = FlowOptions { t_end: 10.0, steps: 10_000, record_every: 10_000 };

    // At a fully split metric the enumerated families are the three
    // coordinate axes; each must be an equilibrium of the flow.
    for i in 0..3 {
        let mut v0 = [0.0; 3];
        v0[i] = 1.0;
        let result = integrate(&desc, &m, &v0, opts).unwrap();
        assert!(
            result.position_drift < 1e-8,
            "axis {i} drifted {:.3e}",
            result.position_drift
        );
        assert!(
            result.energy_rel_drift < 1e-8,
            "axis {i} energy drifted {:.3e}",
            result.energy_rel_drift
        );
    }

    // Generic non-geodesic starts must drift measurably while conserving
    // energy.
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut found = 0usize;
    let mut attempts = 0usize;
    while found < 100 {
        attempts += 1;
        assert!(attempts < 100_000, "could not find 100 non-geodesic starts");
        let mut v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        for x in &mut v {
            *x /= norm;
        }
        let residual =
            residual_vec(&desc, &m, &v).iter().fold(0.0f64, |acc, r| acc.max(r.abs()));
        if residual <= 0.05 {
            continue;
        }
        let result = integrate(&desc, &m, &v, opts).unwrap();
        assert!(
            result.position_drift > 1e-3,
            "non-geodesic start {v:?} barely drifted: {:.3e}",
            result.position_drift
        );
        assert!(
            result.energy_rel_drift < 1e-8,
            "energy drifted {:.3e} from start {v:?}",
            result.energy_rel_drift
        );
        found += 1;
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(20), "criterion 9 took {elapsed:?}, budget 20 s");
    println!(
        "criterion 9 PASS: 3 equilibria held and {found} generic starts drifted, energy conserved, in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 10 — seeded reports are byte-for-byte reproducible.
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_seeded_reports_are_byte_deterministic() {
    let started = Instant::now();
    let first_sampling = &sampling().1;
    let first_product = &product_classification().1;
    let first_blocks = &block_classifications().1;
    let first_round_trip = &round_trip().1;

    let (_, second_sampling, _) = compute_sampling_reports();
    assert_eq!(first_sampling, &second_sampling, "sampling reports differ between runs");
    let (_, second_product, _) = compute_product_classification();
    assert_eq!(first_product, &second_product, "product classification differs between runs");
    let (_, second_blocks, _) = compute_block_classifications();
    assert_eq!(first_blocks, &second_blocks, "block classifications differ between runs");
    let (_, second_round_trip, _) = compute_round_trip();
    assert_eq!(first_round_trip, &second_round_trip, "round-trip summaries differ between runs");

    let elapsed = started.elapsed();
    let bytes = first_sampling.len() + first_product.len() + first_blocks.len()
        + first_round_trip.len();
    println!("criterion 10 PASS: {bytes} report bytes reproduced exactly in {elapsed:?}");
}
