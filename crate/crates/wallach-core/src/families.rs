//! Exact enumeration of the solution families of the geodesic-vector
//! equations for the two fully worked spaces: the trivial quotient of
//! `su(2)` and the rank-two Stiefel-type space `so(4)/so(2)`.
//!
//! For each coincidence pattern of the metric scalars `(λ1, λ2, λ3)` the
//! solution set of the full residual system is a finite union of families,
//! each described by: coordinates forced to zero, polynomial relations among
//! the rest, genericity conditions (coordinates that must not vanish for the
//! point to be new to that family), and exact sample points. Every sample is
//! re-verified against the geodesic criterion at enumeration time, so a
//! report never states more than the arithmetic proves. Samples that need a
//! square root (the discriminant family below) are produced in a real
//! quadratic extension and verified there, exactly.
//!
//! The `so(4)/so(2)` system in the tangent + isotropy coordinates
//! `(a12, a13, a14, a23, a24, a34)`, with `β = λ3 − λ1`, `γ = λ2 − λ1`,
//! `δ = λ3 − λ2`, reads
//!
//! ```text
//! r(e_12):  (a13·a23 + a14·a24)·δ            = 0
//! r(e_13):  λ2·a34·a14 + β·a12·a23           = 0
//! r(e_14):  λ2·a34·a13 − β·a12·a24           = 0
//! r(e_23):  λ3·a34·a24 − γ·a12·a13           = 0
//! r(e_24):  λ3·a34·a23 + γ·a12·a14           = 0
//! ```
//!
//! and the families here are exactly its solutions, by exhaustive branching
//! on `a34 = 0` and `a12 = 0`. Dropping equations (for example keeping only
//! the residuals against `m1 ∪ m2`) admits spurious extra families; the
//! report documents this with a live counterexample whenever the pattern
//! makes it possible.

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraVector;
use crate::error::Error;
use crate::geodesic::is_geodesic_vector;
use crate::linalg::Mat;
use crate::metric::InvariantMetric;
use crate::poly::Poly;
use crate::scalar::{rat_i, Quad, Rat, Scalar};
use crate::space::{Part, SpaceDescriptor};
use crate::Result;

/// Coincidence pattern of the three metric scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaPattern {
    /// λ1 = λ2 = λ3 (the standard metric up to scale).
    AllEqual,
    /// λ1 = λ2 ≠ λ3.
    FirstPairEqual,
    /// λ1 = λ3 ≠ λ2.
    OuterPairEqual,
    /// λ2 = λ3 ≠ λ1.
    LastPairEqual,
    /// All three distinct.
    AllDistinct,
}

impl LambdaPattern {
    pub fn of(metric: &InvariantMetric) -> Self {
        let eq12 = metric.lambda(0) == metric.lambda(1);
        let eq13 = metric.lambda(0) == metric.lambda(2);
        let eq23 = metric.lambda(1) == metric.lambda(2);
        match (eq12, eq13, eq23) {
            (true, true, true) => LambdaPattern::AllEqual,
            (true, false, false) => LambdaPattern::FirstPairEqual,
            (false, true, false) => LambdaPattern::OuterPairEqual,
            (false, false, true) => LambdaPattern::LastPairEqual,
            (false, false, false) => LambdaPattern::AllDistinct,
            // Two coincidences force the third.
            _ => unreachable!("two equalities among three values imply the third"),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            LambdaPattern::AllEqual => "all-equal",
            LambdaPattern::FirstPairEqual => "first-pair",
            LambdaPattern::OuterPairEqual => "outer-pair",
            LambdaPattern::LastPairEqual => "last-pair",
            LambdaPattern::AllDistinct => "all-distinct",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            LambdaPattern::AllEqual => "λ1 = λ2 = λ3",
            LambdaPattern::FirstPairEqual => "λ1 = λ2 ≠ λ3",
            LambdaPattern::OuterPairEqual => "λ1 = λ3 ≠ λ2",
            LambdaPattern::LastPairEqual => "λ2 = λ3 ≠ λ1",
            LambdaPattern::AllDistinct => "λ1, λ2, λ3 all distinct",
        }
    }
}

/// One family of geodesic vectors, in full-algebra coordinates.
#[derive(Clone, Debug)]
pub struct SolutionFamily {
    pub id: String,
    pub description: String,
    /// Ambient coordinate count (the algebra dimension).
    pub dim: usize,
    /// Coordinates forced to zero.
    pub zero: Vec<usize>,
    /// Coordinates that must be nonzero on the generic stratum.
    pub nonzero: Vec<usize>,
    /// Coordinates free of any condition.
    pub free: Vec<usize>,
    /// Polynomial relations among the remaining coordinates (variables are
    /// algebra indices; all relations are homogeneous, so families are cones).
    pub constraints: Vec<Poly>,
    /// Exact sample points, re-verified by the enumeration.
    pub samples: Vec<Vec<Quad>>,
}

impl SolutionFamily {
    fn new(dim: usize, id: &str, description: &str) -> Self {
        SolutionFamily {
            id: id.to_string(),
            description: description.to_string(),
            dim,
            zero: Vec::new(),
            nonzero: Vec::new(),
            free: Vec::new(),
            constraints: Vec::new(),
            samples: Vec::new(),
        }
    }

    fn with_zero(mut self, idx: &[usize]) -> Self {
        self.zero = idx.to_vec();
        self
    }

    fn with_nonzero(mut self, idx: &[usize]) -> Self {
        self.nonzero = idx.to_vec();
        self
    }

    fn with_free(mut self, idx: &[usize]) -> Self {
        self.free = idx.to_vec();
        self
    }

    fn with_constraint(mut self, p: Poly) -> Self {
        self.constraints.push(p);
        self
    }

    /// Add a sample with rational entries, given sparsely.
    fn with_sample(mut self, entries: &[(usize, Rat)]) -> Self {
        let mut coords = vec![Quad::zero(); self.dim];
        for (i, v) in entries {
            coords[*i] = Quad::from_rational(v.clone());
        }
        self.samples.push(coords);
        self
    }

    /// Add a sample with entries in a quadratic extension, given sparsely.
    fn with_sample_quad(mut self, entries: &[(usize, Quad)]) -> Self {
        let mut coords = vec![Quad::zero(); self.dim];
        for (i, v) in entries {
            coords[*i] = v.clone();
        }
        self.samples.push(coords);
        self
    }

    /// Exact membership: forced zeros hold, relations hold, genericity holds.
    pub fn contains(&self, coords: &[Quad]) -> bool {
        if coords.len() != self.dim {
            return false;
        }
        self.zero.iter().all(|&i| coords[i].is_zero_with(0.0))
            && self
                .constraints
                .iter()
                .all(|p| p.eval(coords).is_zero_with(0.0))
            && self.nonzero.iter().all(|&i| !coords[i].is_zero_with(0.0))
    }

    /// As [`contains`](Self::contains) but ignoring the open genericity
    /// conditions — membership in the family's closure.
    pub fn closure_contains(&self, coords: &[Quad]) -> bool {
        coords.len() == self.dim
            && self.zero.iter().all(|&i| coords[i].is_zero_with(0.0))
            && self
                .constraints
                .iter()
                .all(|p| p.eval(coords).is_zero_with(0.0))
    }

    /// Residuals of the defining closed conditions at a float point: one for
    /// each forced-zero coordinate, one per polynomial relation.
    pub fn constraint_values_f64(&self, x: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.zero.len() + self.constraints.len());
        for &i in &self.zero {
            out.push(x[i]);
        }
        for p in &self.constraints {
            out.push(p.eval(x));
        }
        out
    }

    /// Jacobian of [`constraint_values_f64`](Self::constraint_values_f64).
    pub fn constraint_jacobian_f64(&self, x: &[f64]) -> Mat<f64> {
        let rows = self.zero.len() + self.constraints.len();
        let mut j = Mat::zeros(rows, self.dim);
        for (r, &i) in self.zero.iter().enumerate() {
            j.set(r, i, 1.0);
        }
        for (pi, p) in self.constraints.iter().enumerate() {
            let r = self.zero.len() + pi;
            for v in 0..self.dim {
                let dp = p.partial(v);
                if !dp.is_zero() {
                    j.set(r, v, dp.eval(x));
                }
            }
        }
        j
    }
}

/// Serializable view of one family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub id: String,
    pub description: String,
    pub zero: Vec<String>,
    pub nonzero: Vec<String>,
    pub free: Vec<String>,
    pub constraints: Vec<String>,
    pub samples: Vec<SampleEntry>,
}

/// One verified sample point of a family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleEntry {
    /// Nonzero coordinates, `label = exact value`.
    pub coords: Vec<String>,
    /// Whether the geodesic criterion holds exactly at this point.
    pub geodesic: bool,
    pub max_residual: f64,
}

/// A vector admitted by a truncated subsystem but rejected by the full
/// criterion, with the split of residuals computed live.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducedSystemNote {
    pub message: String,
    /// Nonzero coordinates of the witness, `label = value`.
    pub vector: Vec<String>,
    /// Residual directions on which the witness passes.
    pub vanishing_residuals: Vec<String>,
    /// Residual directions on which it fails, with exact values.
    pub failing_residuals: Vec<FailingResidual>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FailingResidual {
    pub against: String,
    pub value: String,
}

/// Full enumeration report for one space and metric.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyReport {
    pub space: String,
    pub metric: InvariantMetric,
    pub pattern: String,
    pub pattern_display: String,
    pub standard_metric: bool,
    pub families: Vec<FamilyEntry>,
    pub reduced_system_notes: Vec<ReducedSystemNote>,
    pub notes: Vec<String>,
}

/// Enumerate the solution families for a supported space, verifying every
/// sample point against the geodesic criterion.
pub fn enumerate(desc: &SpaceDescriptor, metric: &InvariantMetric) -> Result<FamilyReport> {
    let pattern = LambdaPattern::of(metric);
    let (families, mut notes) = match desc.name.as_str() {
        "su2_trivial" => su2_families(desc, metric),
        "stiefel_n:4" => stiefel4_families(desc, metric),
        other => {
            return Err(Error::UnsupportedSpace(format!(
                "family enumeration is implemented for `su2_trivial` and `stiefel_n:4`, not `{other}`"
            )))
        }
    };
    notes.insert(
        0,
        "The families listed are the complete solution set of the geodesic-vector equations \
         at this metric; every relation is homogeneous, so each family is closed under nonzero \
         scaling."
            .to_string(),
    );

    let mut entries = Vec::with_capacity(families.len());
    for fam in &families {
        entries.push(family_entry(desc, metric, fam)?);
    }

    let reduced_system_notes = match (desc.name.as_str(), pattern) {
        ("stiefel_n:4", LambdaPattern::FirstPairEqual) => {
            vec![reduced_note(desc, metric, &[("e_34", 1), ("e_23", 1)])?]
        }
        ("stiefel_n:4", LambdaPattern::OuterPairEqual) => {
            vec![reduced_note(desc, metric, &[("e_34", 1), ("e_13", 1)])?]
        }
        _ => Vec::new(),
    };

    Ok(FamilyReport {
        space: desc.name.clone(),
        metric: metric.clone(),
        pattern: pattern.id().to_string(),
        pattern_display: pattern.describe().to_string(),
        standard_metric: metric.is_standard(),
        families: entries,
        reduced_system_notes,
        notes,
    })
}

/// The solution families for the trivial quotient of `su(2)` (isotropy
/// zero, one-dimensional modules), plus report notes.
pub fn su2_families(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
) -> (Vec<SolutionFamily>, Vec<String>) {
    let dim = desc.dim_g();
    let m = [
        desc.indices(Part::M(0))[0],
        desc.indices(Part::M(1))[0],
        desc.indices(Part::M(2))[0],
    ];
    let one = rat_i(1);
    let pattern = LambdaPattern::of(metric);
    let mut fams = Vec::new();
    let mut notes = Vec::new();

    let axis = |k: usize| {
        let others: Vec<usize> = (0..3).filter(|&t| t != k).map(|t| m[t]).collect();
        SolutionFamily::new(dim, &format!("axis-m{}", k + 1), &format!(
            "the coordinate axis of module m{}; single-module vectors are geodesic for every metric",
            k + 1
        ))
        .with_zero(&others)
        .with_nonzero(&[m[k]])
        .with_free(&[])
        .with_sample(&[(m[k], one.clone())])
        .with_sample(&[(m[k], rat_i(-2))])
    };
    let plane = |i: usize, j: usize, k: usize| {
        SolutionFamily::new(dim, &format!("plane-m{}-m{}", i + 1, j + 1), &format!(
            "the plane m{} ⊕ m{}, all of it geodesic because the two touching scalars coincide",
            i + 1,
            j + 1
        ))
        .with_zero(&[m[k]])
        .with_free(&[m[i], m[j]])
        .with_sample(&[(m[i], one.clone()), (m[j], one.clone())])
        .with_sample(&[(m[i], one.clone()), (m[j], rat_i(-2))])
        .with_sample(&[(m[i], rat_i(3)), (m[j], one.clone())])
    };

    match pattern {
        LambdaPattern::AllEqual => {
            fams.push(
                SolutionFamily::new(
                    dim,
                    "tangent-free",
                    "every nonzero tangent vector; with all three scalars equal the metric is \
                     bi-invariant and the criterion is vacuous",
                )
                .with_free(&[m[0], m[1], m[2]])
                .with_sample(&[(m[0], one.clone()), (m[1], one.clone()), (m[2], one.clone())])
                .with_sample(&[(m[0], one.clone()), (m[1], rat_i(2)), (m[2], rat_i(3))])
                .with_sample(&[(m[0], rat_i(-2)), (m[1], one.clone()), (m[2], rat_i(2))]),
            );
        }
        LambdaPattern::FirstPairEqual => {
            fams.push(plane(0, 1, 2));
            fams.push(axis(2));
        }
        LambdaPattern::OuterPairEqual => {
            fams.push(plane(0, 2, 1));
            fams.push(axis(1));
        }
        LambdaPattern::LastPairEqual => {
            fams.push(plane(1, 2, 0));
            fams.push(axis(0));
        }
        LambdaPattern::AllDistinct => {
            fams.push(axis(0));
            fams.push(axis(1));
            fams.push(axis(2));
            notes.push(
                "With three distinct scalars the only geodesic vectors are the three \
                 coordinate axes — isolated directions up to scale."
                    .to_string(),
            );
        }
    }
    (fams, notes)
}

/// Coordinate indices of the `so(4)/so(2)` space, resolved by label.
struct S4 {
    a12: usize,
    a13: usize,
    a14: usize,
    a23: usize,
    a24: usize,
    a34: usize,
}

impl S4 {
    fn resolve(desc: &SpaceDescriptor) -> S4 {
        let g = desc.algebra();
        let idx = |l: &str| {
            g.index_of_label(l)
                .unwrap_or_else(|| panic!("so(4) basis label `{l}` missing"))
        };
        S4 {
            a12: idx("e_12"),
            a13: idx("e_13"),
            a14: idx("e_14"),
            a23: idx("e_23"),
            a24: idx("e_24"),
            a34: idx("e_34"),
        }
    }
}

/// The solution families for `so(4)/so(2)`, by exhaustive branch analysis
/// of the five-equation residual system, plus report notes.
pub fn stiefel4_families(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
) -> (Vec<SolutionFamily>, Vec<String>) {
    let s = S4::resolve(desc);
    let dim = desc.dim_g();
    let one = rat_i(1);
    let l1 = metric.lambda(0).clone();
    let l2 = metric.lambda(1).clone();
    let l3 = metric.lambda(2).clone();
    let beta = l3.clone() - l1.clone();
    let gamma = l2.clone() - l1.clone();
    let band = [s.a13, s.a14, s.a23, s.a24];
    let pattern = LambdaPattern::of(metric);
    let mut fams = Vec::new();
    let mut notes = Vec::new();

    // The band quadric a13·a23 + a14·a24 = 0 (from the residual against e_12).
    let q_poly = Poly::term(one.clone(), &[s.a13, s.a23]) + Poly::term(one.clone(), &[s.a14, s.a24]);

    let cross_span = |only_nonzero_a34: bool| {
        let mut f = SolutionFamily::new(
            dim,
            "cross-span",
            "the span of e_12 and e_34 (tangent m1-axis plus the isotropy direction); \
             every bracket of its members with m lands B-orthogonally to it, so the whole \
             plane is geodesic for every metric. Contains the e_12 and e_34 axes.",
        )
        .with_zero(&band)
        .with_free(&[s.a12, s.a34])
        .with_sample(&[(s.a12, one.clone()), (s.a34, one.clone())])
        .with_sample(&[(s.a34, one.clone())])
        .with_sample(&[(s.a12, rat_i(2)), (s.a34, rat_i(-1))]);
        if only_nonzero_a34 {
            f = f.with_nonzero(&[s.a34]).with_free(&[s.a12]);
        } else {
            f = f.with_sample(&[(s.a12, one.clone())]);
        }
        f
    };
    let band_quadric = || {
        SolutionFamily::new(
            dim,
            "band-quadric",
            "no e_12 or e_34 component, and the m2 ⊕ m3 band coordinates on the quadric \
             a13·a23 + a14·a24 = 0",
        )
        .with_zero(&[s.a12, s.a34])
        .with_constraint(q_poly.clone())
        .with_sample(&[(s.a13, one.clone()), (s.a24, one.clone())])
        .with_sample(&[(s.a14, one.clone()), (s.a23, one.clone())])
        .with_sample(&[
            (s.a13, one.clone()),
            (s.a14, rat_i(2)),
            (s.a23, rat_i(-2)),
            (s.a24, one.clone()),
        ])
        .with_sample(&[
            (s.a13, rat_i(3)),
            (s.a14, one.clone()),
            (s.a23, one.clone()),
            (s.a24, rat_i(-3)),
        ])
    };

    match pattern {
        LambdaPattern::AllEqual => {
            fams.push(
                SolutionFamily::new(
                    dim,
                    "tangent-free",
                    "every nonzero tangent vector (no isotropy component); with all scalars \
                     equal the metric is normal and the criterion holds on all of m",
                )
                .with_zero(&[s.a34])
                .with_free(&[s.a12, s.a13, s.a14, s.a23, s.a24])
                .with_sample(&[
                    (s.a12, one.clone()),
                    (s.a13, one.clone()),
                    (s.a14, one.clone()),
                    (s.a23, one.clone()),
                    (s.a24, one.clone()),
                ])
                .with_sample(&[
                    (s.a12, one.clone()),
                    (s.a13, rat_i(2)),
                    (s.a14, rat_i(-1)),
                    (s.a24, rat_i(3)),
                ]),
            );
            fams.push(cross_span(true));
        }
        LambdaPattern::FirstPairEqual => {
            fams.push(band_quadric());
            fams.push(
                SolutionFamily::new(
                    dim,
                    "span-m1-m2",
                    "no m3 or isotropy component: a12·e_12 plus anything in m2, with a12 ≠ 0 \
                     (its a12 = 0 boundary already lies on the band quadric)",
                )
                .with_zero(&[s.a34, s.a23, s.a24])
                .with_nonzero(&[s.a12])
                .with_free(&[s.a13, s.a14])
                .with_sample(&[(s.a12, one.clone()), (s.a13, one.clone()), (s.a14, one.clone())])
                .with_sample(&[(s.a12, rat_i(2)), (s.a13, rat_i(-1)), (s.a14, rat_i(3))])
                .with_sample(&[(s.a12, one.clone())]),
            );
            fams.push(cross_span(true));
        }
        LambdaPattern::OuterPairEqual => {
            fams.push(band_quadric());
            fams.push(
                SolutionFamily::new(
                    dim,
                    "span-m1-m3",
                    "no m2 or isotropy component: a12·e_12 plus anything in m3, with a12 ≠ 0 \
                     (its a12 = 0 boundary already lies on the band quadric)",
                )
                .with_zero(&[s.a34, s.a13, s.a14])
                .with_nonzero(&[s.a12])
                .with_free(&[s.a23, s.a24])
                .with_sample(&[(s.a12, one.clone()), (s.a23, one.clone()), (s.a24, one.clone())])
                .with_sample(&[(s.a12, rat_i(2)), (s.a23, rat_i(-1)), (s.a24, rat_i(3))])
                .with_sample(&[(s.a12, one.clone())]),
            );
            fams.push(cross_span(true));
        }
        LambdaPattern::LastPairEqual => {
            fams.push(
                SolutionFamily::new(
                    dim,
                    "band-free",
                    "the whole band m2 ⊕ m3 (no e_12 or e_34 component); with λ2 = λ3 the \
                     quadric condition degenerates and the band is free",
                )
                .with_zero(&[s.a12, s.a34])
                .with_free(&band)
                .with_sample(&[
                    (s.a13, one.clone()),
                    (s.a14, one.clone()),
                    (s.a23, one.clone()),
                    (s.a24, one.clone()),
                ])
                .with_sample(&[
                    (s.a13, one.clone()),
                    (s.a14, rat_i(2)),
                    (s.a23, rat_i(3)),
                    (s.a24, rat_i(4)),
                ])
                .with_sample(&[(s.a14, one.clone()), (s.a23, rat_i(-1))]),
            );
            fams.push(cross_span(false));
            // a34·λ2 = ±a12·γ with the band coordinates linked pairwise.
            for (sign, id, tie) in [
                (1i64, "linked-plus", "a14 = −a23, a13 = a24"),
                (-1i64, "linked-minus", "a14 = a23, a13 = −a24"),
            ] {
                let sg = rat_i(sign);
                let mut fam = SolutionFamily::new(
                    dim,
                    id,
                    &format!(
                        "both e_12 and e_34 present, locked by λ2·a34 = {}(λ2 − λ1)·a12, \
                         with the band coordinates linked by {tie}",
                        if sign > 0 { "" } else { "−" }
                    ),
                )
                .with_nonzero(&[s.a12, s.a34])
                .with_constraint(
                    Poly::term(l2.clone(), &[s.a34])
                        - Poly::term(sg.clone() * gamma.clone(), &[s.a12]),
                )
                .with_constraint(
                    Poly::term(one.clone(), &[s.a14]) + Poly::term(sg.clone(), &[s.a23]),
                )
                .with_constraint(
                    Poly::term(one.clone(), &[s.a13]) - Poly::term(sg.clone(), &[s.a24]),
                );
                // Samples: a12 = λ2·t, a34 = ±γ·t keeps everything rational.
                for (t, b23, b24) in [(1i64, 1i64, 0i64), (1, 0, 1), (2, 2, -1)] {
                    let a12 = l2.clone() * rat_i(t);
                    let a34 = sg.clone() * gamma.clone() * rat_i(t);
                    let a14 = -(sg.clone() * rat_i(b23));
                    let a13 = sg.clone() * rat_i(b24);
                    fam = fam.with_sample(&[
                        (s.a12, a12),
                        (s.a34, a34),
                        (s.a23, rat_i(b23)),
                        (s.a24, rat_i(b24)),
                        (s.a14, a14),
                        (s.a13, a13),
                    ]);
                }
                fams.push(fam);
            }
        }
        LambdaPattern::AllDistinct => {
            fams.push(band_quadric());
            fams.push(cross_span(false));
            let disc = beta.clone() * gamma.clone();
            if disc > Rat::from_integer(0.into()) {
                // λ2·λ3·a34² = βγ·a12², with the band linked through the
                // ratio r = β·a12 / (λ2·a34); realized over Q(√D), D = βγλ2λ3.
                let d_rad = disc.clone() * l2.clone() * l3.clone();
                let sqrt_d = Quad::sqrt(&d_rad).expect("positive radicand");
                let mut fam = SolutionFamily::new(
                    dim,
                    "band-radical",
                    "both e_12 and e_34 present, sizes locked by the discriminant relation \
                     λ2·λ3·a34² = (λ3−λ1)·(λ2−λ1)·a12²; the band coordinates are then linked \
                     by a14 = −r·a23 and a13 = r·a24 with r = (λ3−λ1)·a12 / (λ2·a34). Two \
                     sign branches, realized over a real quadratic extension.",
                )
                .with_nonzero(&[s.a12, s.a34])
                .with_constraint(
                    Poly::term(l2.clone() * l3.clone(), &[s.a34, s.a34])
                        - Poly::term(disc.clone(), &[s.a12, s.a12]),
                )
                .with_constraint(
                    Poly::term(l2.clone(), &[s.a34, s.a14]) + Poly::term(beta.clone(), &[s.a12, s.a23]),
                )
                .with_constraint(
                    Poly::term(l2.clone(), &[s.a34, s.a13]) - Poly::term(beta.clone(), &[s.a12, s.a24]),
                );
                for (sign, t, b23, b24) in [(1i64, 1i64, 1i64, 1i64), (1, 1, 0, 1), (-1, 2, 1, -2)] {
                    let sg = rat_i(sign);
                    let a12 = Quad::from_rational(rat_i(t));
                    // a34 = s·t·√D / (λ2λ3)
                    let a34 = Quad::from_rational(sg.clone() * rat_i(t) / (l2.clone() * l3.clone()))
                        * sqrt_d.clone();
                    // r = s·βλ3·√D / D
                    let r = Quad::from_rational(sg.clone() * beta.clone() * l3.clone() / d_rad.clone())
                        * sqrt_d.clone();
                    let a14 = -(r.clone() * Quad::from_rational(rat_i(b23)));
                    let a13 = r.clone() * Quad::from_rational(rat_i(b24));
                    fam = fam.with_sample_quad(&[
                        (s.a12, a12),
                        (s.a34, a34),
                        (s.a23, Quad::from_rational(rat_i(b23))),
                        (s.a24, Quad::from_rational(rat_i(b24))),
                        (s.a14, a14),
                        (s.a13, a13),
                    ]);
                }
                fams.push(fam);
            } else {
                notes.push(
                    "The discriminant relation λ2·λ3·a34² = (λ3−λ1)·(λ2−λ1)·a12² has no real \
                     solutions with a12 and a34 both nonzero at this metric (the right-hand \
                     coefficient is negative), so no mixed family exists beyond the span of \
                     e_12 and e_34."
                        .to_string(),
                );
            }
        }
    }
    (fams, notes)
}

fn family_entry(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    fam: &SolutionFamily,
) -> Result<FamilyEntry> {
    let algebra = desc.algebra();
    let names: Vec<&str> = algebra.labels().iter().map(|s| s.as_str()).collect();
    let label_list = |idx: &[usize]| -> Vec<String> {
        idx.iter().map(|&i| algebra.label(i).to_string()).collect()
    };
    let mut samples = Vec::with_capacity(fam.samples.len());
    for coords in &fam.samples {
        debug_assert!(fam.contains(coords), "sample must lie in its own family");
        let v = AlgebraVector::<Quad>::new(algebra.clone(), coords.clone())?;
        let check = is_geodesic_vector(desc, metric, &v, 0.0)?;
        samples.push(SampleEntry {
            coords: render_sparse(&names, coords),
            geodesic: check.ok,
            max_residual: check.max_residual,
        });
    }
    Ok(FamilyEntry {
        id: fam.id.clone(),
        description: fam.description.clone(),
        zero: label_list(&fam.zero),
        nonzero: label_list(&fam.nonzero),
        free: label_list(&fam.free),
        constraints: fam.constraints.iter().map(|p| p.render(&names)).collect(),
        samples,
    })
}

fn render_sparse(names: &[&str], coords: &[Quad]) -> Vec<String> {
    coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero_with(0.0))
        .map(|(i, c)| format!("{} = {}", names.get(i).copied().unwrap_or("?"), c))
        .collect()
}

fn reduced_note(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    entries: &[(&str, i64)],
) -> Result<ReducedSystemNote> {
    let algebra = desc.algebra();
    let mut v = AlgebraVector::<Rat>::zero(algebra.clone());
    for (label, c) in entries {
        let i = algebra
            .index_of_label(label)
            .ok_or_else(|| Error::InvalidInput(format!("unknown label `{label}`")))?;
        v.set_coeff(i, rat_i(*c));
    }
    let check = is_geodesic_vector(desc, metric, &v, 0.0)?;
    let mut vanishing = Vec::new();
    let mut failing = Vec::new();
    for (label, value) in &check.residuals {
        if value.is_zero_with(0.0) {
            vanishing.push(label.clone());
        } else {
            failing.push(FailingResidual {
                against: label.clone(),
                value: value.to_string(),
            });
        }
    }
    let names: Vec<&str> = algebra.labels().iter().map(|s| s.as_str()).collect();
    let coords: Vec<Quad> = v
        .coeffs()
        .iter()
        .map(|c| Quad::from_rational(c.clone()))
        .collect();
    Ok(ReducedSystemNote {
        message: format!(
            "Solving only a subsystem of the residual equations overstates the solution set \
             at this metric pattern: the vector below satisfies the residuals against \
             {} but fails against {}. Family tables derived from a truncated system would \
             wrongly include it; the families reported here solve all equations.",
            vanishing.join(", "),
            failing
                .iter()
                .map(|f| f.against.clone())
                .collect::<Vec<_>>()
                .join(", "),
        ),
        vector: render_sparse(&names, &coords),
        vanishing_residuals: vanishing,
        failing_residuals: failing,
    })
}
