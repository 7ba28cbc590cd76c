//! The geodesic-vector criterion, its linear completion system, and the
//! equivalent reductive-case conditions.
//!
//! A nonzero `X = x_k + x_m ∈ g` is a *geodesic vector* when the orbit
//! `exp(tX)·o` is a geodesic; in a reductive homogeneous space this is
//! exactly
//!
//! ```text
//! ⟨[X, Y]_m, X_m⟩ = 0   for all Y ∈ m,                            (crit.)
//! ```
//!
//! with `⟨·,·⟩` the invariant metric and `(·)_m` the projection onto the
//! reductive complement. Because the condition is linear in `Y`, checking it
//! on the `m`-basis suffices; those pairings are the *residuals* reported
//! here.
//!
//! Fixing the `m`-part and letting the isotropy part vary turns the
//! criterion into a linear system `A·x_k = b` over the isotropy
//! coefficients: `A[r][i] = −⟨[f_i, e_r]_m, x_m⟩` and
//! `b[r] = ⟨[x_m, e_r]_m, x_m⟩`. A geodesic completion of `x_m` exists iff
//! `rank A = rank [A | b]`, decided exactly in rational sessions and by SVD
//! thresholds in float sessions.

use num_traits::Zero;

use crate::algebra::AlgebraVector;
use crate::error::Error;
use crate::linalg::{rank_exact, rank_f64, solve_exact, solve_min_norm_f64, Mat};
use crate::metric::InvariantMetric;
use crate::scalar::{Rat, Scalar};
use crate::space::{Part, SpaceDescriptor};
use crate::Result;

/// Scalars on which the completion system can be solved and ranked.
pub trait SolveScalar: Scalar {
    fn rank(m: &Mat<Self>) -> usize;
    /// A solution of `A x = b` if the system is consistent.
    fn solve(a: &Mat<Self>, b: &[Self]) -> Option<Vec<Self>>;
}

impl SolveScalar for Rat {
    fn rank(m: &Mat<Rat>) -> usize {
        rank_exact(m)
    }
    fn solve(a: &Mat<Rat>, b: &[Rat]) -> Option<Vec<Rat>> {
        solve_exact(a, b)
    }
}

impl SolveScalar for f64 {
    fn rank(m: &Mat<f64>) -> usize {
        rank_f64(m)
    }
    fn solve(a: &Mat<f64>, b: &[f64]) -> Option<Vec<f64>> {
        // Consistency by rank comparison at the SVD threshold, solution by
        // minimum norm.
        if rank_f64(a) != rank_f64(&a.with_column(b)) {
            return None;
        }
        Some(solve_min_norm_f64(a, b).0)
    }
}

/// The invariant inner product `⟨u, v⟩ = Σ_i λ_i B(u_i, v_i)`, plus a flag
/// that is set when either argument carried isotropy components (which the
/// product, defined on `m` only, ignores).
pub fn inner_product_flagged<S: Scalar>(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    u: &AlgebraVector<S>,
    v: &AlgebraVector<S>,
) -> (S, bool) {
    let gram = desc.algebra().gram();
    let mut acc = S::zero();
    for module in 0..3 {
        let lam = S::from_rat(metric.lambda(module));
        let idx = desc.indices(Part::M(module));
        let mut part = S::zero();
        for &a in idx {
            let ua = &u.coeffs()[a];
            if ua.is_zero_with(0.0) {
                continue;
            }
            for &b in idx {
                let vb = &v.coeffs()[b];
                if vb.is_zero_with(0.0) {
                    continue;
                }
                let g = gram.get(a, b);
                if Zero::is_zero(g) {
                    continue;
                }
                part = part + ua.clone() * vb.clone() * S::from_rat(g);
            }
        }
        acc = acc + lam * part;
    }
    let truncated = desc
        .indices(Part::K)
        .iter()
        .any(|&i| !u.coeffs()[i].is_zero_with(0.0) || !v.coeffs()[i].is_zero_with(0.0));
    (acc, truncated)
}

/// The invariant inner product, isotropy components silently projected out.
pub fn inner_product<S: Scalar>(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    u: &AlgebraVector<S>,
    v: &AlgebraVector<S>,
) -> S {
    inner_product_flagged(desc, metric, u, v).0
}

/// One residual `⟨[x, e_r]_m, x_m⟩` per `m`-basis vector `e_r`.
pub fn residuals<S: Scalar>(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    x: &AlgebraVector<S>,
) -> Result<Vec<(String, S)>> {
    check_algebra(desc, x)?;
    let algebra = desc.algebra();
    let x_m = desc.project_m(x);
    let mut out = Vec::with_capacity(desc.dim_m());
    for r in desc.m_indices() {
        // [x, e_r] = Σ_a x_a [e_a, e_r]
        let mut w = AlgebraVector::<S>::zero(algebra.clone());
        for (a, xa) in x.coeffs().iter().enumerate() {
            if xa.is_zero_with(0.0) {
                continue;
            }
            for (g, c) in algebra.bracket_basis(a, r) {
                w.add_to_coeff(*g, xa.clone() * S::from_rat(c));
            }
        }
        let value = inner_product(desc, metric, &w, &x_m);
        out.push((algebra.label(r).to_string(), value));
    }
    Ok(out)
}

/// Outcome of the geodesic-vector check.
#[derive(Clone, Debug)]
pub struct GeodesicCheck<S> {
    pub ok: bool,
    /// `(m-basis label, residual)`, in module order.
    pub residuals: Vec<(String, S)>,
    /// Largest residual magnitude (0 for a geodesic vector in exact mode).
    pub max_residual: f64,
}

/// Decide whether nonzero `x ∈ g` is a geodesic vector; residuals against
/// every `m`-basis direction are reported, zero-tested at `zero_tol` (which
/// exact scalars ignore).
pub fn is_geodesic_vector<S: Scalar>(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    x: &AlgebraVector<S>,
    zero_tol: f64,
) -> Result<GeodesicCheck<S>> {
    if x.is_zero_with(zero_tol) {
        return Err(Error::ZeroVector("geodesic check needs a nonzero vector".into()));
    }
    let residuals = residuals(desc, metric, x)?;
    let ok = residuals.iter().all(|(_, v)| v.is_zero_with(zero_tol));
    let max_residual = residuals.iter().map(|(_, v)| v.approx().abs()).fold(0.0, f64::max);
    Ok(GeodesicCheck { ok, residuals, max_residual })
}

/// The completion system `A·x_k = b` attached to an `m`-vector.
#[derive(Clone, Debug)]
pub struct GeodesicSystem<S> {
    pub a: Mat<S>,
    pub b: Vec<S>,
    /// Row labels: the `m`-basis vectors, in module order.
    pub row_labels: Vec<String>,
    /// Column labels: the isotropy basis vectors.
    pub col_labels: Vec<String>,
}

/// Assemble the linear system whose solutions are the isotropy completions
/// of `x_m`. Requires `x_m` supported on `m`.
pub fn assemble_system<S: Scalar>(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    x_m: &AlgebraVector<S>,
) -> Result<GeodesicSystem<S>> {
    check_algebra(desc, x_m)?;
    require_support(desc, x_m, Part::K, "the m-vector of a completion system")?;
    let algebra = desc.algebra();
    let m_rows = desc.m_indices();
    let k_cols = desc.indices(Part::K).to_vec();
    let mut a = Mat::zeros(m_rows.len(), k_cols.len());
    let mut b = Vec::with_capacity(m_rows.len());
    for (ri, &r) in m_rows.iter().enumerate() {
        for (ci, &f) in k_cols.iter().enumerate() {
            // A[r][i] = −⟨[f_i, e_r]_m, x_m⟩
            let mut w = AlgebraVector::<S>::zero(algebra.clone());
            for (g, c) in algebra.bracket_basis(f, r) {
                w.set_coeff(*g, S::from_rat(c));
            }
            let v = inner_product(desc, metric, &w, x_m);
            a.set(ri, ci, -v);
        }
        // b[r] = ⟨[x_m, e_r]_m, x_m⟩
        let mut w = AlgebraVector::<S>::zero(algebra.clone());
        for (idx, xa) in x_m.coeffs().iter().enumerate() {
            if xa.is_zero_with(0.0) {
                continue;
            }
            for (g, c) in algebra.bracket_basis(idx, r) {
                w.add_to_coeff(*g, xa.clone() * S::from_rat(c));
            }
        }
        b.push(inner_product(desc, metric, &w, x_m));
    }
    let row_labels = m_rows.iter().map(|&r| algebra.label(r).to_string()).collect();
    let col_labels = k_cols.iter().map(|&f| algebra.label(f).to_string()).collect();
    Ok(GeodesicSystem { a, b, row_labels, col_labels })
}

/// Outcome of the completion decision for one `m`-vector.
#[derive(Clone, Debug)]
pub struct CompletionOutcome<S> {
    pub rank_a: usize,
    pub rank_augmented: usize,
    /// Whether the right-hand side of the system was identically zero (true
    /// for every probe at the standard metric, and for spaces whose module
    /// brackets vanish).
    pub rhs_zero: bool,
    /// Full geodesic vector `x_k + x_m` when a completion exists.
    pub completion: Option<AlgebraVector<S>>,
}

impl<S> CompletionOutcome<S> {
    pub fn exists(&self) -> bool {
        self.completion.is_some()
    }
}

/// Decide whether some isotropy vector completes nonzero `x_m` to a geodesic
/// vector, by the rank criterion on the assembled system.
pub fn complete<S: SolveScalar>(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    x_m: &AlgebraVector<S>,
) -> Result<CompletionOutcome<S>> {
    if x_m.is_zero_with(0.0) {
        return Err(Error::ZeroVector("completion needs a nonzero m-vector".into()));
    }
    let sys = assemble_system(desc, metric, x_m)?;
    let rank_a = S::rank(&sys.a);
    let rank_augmented = S::rank(&sys.a.with_column(&sys.b));
    let rhs_zero = sys.b.iter().all(|v| v.is_zero_with(0.0));
    let completion = if rank_a == rank_augmented {
        let x_k = S::solve(&sys.a, &sys.b);
        debug_assert!(x_k.is_some(), "rank test and solver must agree on consistency");
        x_k.map(|x_k| {
            let mut full = x_m.clone();
            for (ci, &f) in desc.indices(Part::K).iter().enumerate() {
                full.coeffs_mut()[f] = x_k[ci].clone();
            }
            full
        })
    } else {
        None
    };
    Ok(CompletionOutcome { rank_a, rank_augmented, rhs_zero, completion })
}

/// The three equivalent reductive-case conditions on a pair
/// `(a, x) ∈ k × m`, evaluated independently:
///
/// 1. `[a + x, Λx] ∈ k` where `Λ` scales each module by its metric scalar;
/// 2. `⟨[a, x], y⟩ = ⟨x, [x, y]_m⟩` for all `y ∈ m`;
/// 3. `⟨[a + x, y]_m, x⟩ = 0` for all `y ∈ m` (the geodesic criterion).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConditionTriple {
    pub bracket_in_isotropy: bool,
    pub pairing_identity: bool,
    pub orthogonality: bool,
}

impl ConditionTriple {
    pub fn all_agree(&self) -> bool {
        self.bracket_in_isotropy == self.pairing_identity
            && self.pairing_identity == self.orthogonality
    }
}

/// Evaluate the three conditions. `a` must be supported on `k`, `x` on `m`,
/// and `x` must be nonzero.
pub fn condition_triple<S: Scalar>(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    a: &AlgebraVector<S>,
    x: &AlgebraVector<S>,
    zero_tol: f64,
) -> Result<ConditionTriple> {
    check_algebra(desc, a)?;
    check_algebra(desc, x)?;
    require_isotropy(desc, a)?;
    require_support(desc, x, Part::K, "the tangent argument")?;
    if x.is_zero_with(zero_tol) {
        return Err(Error::ZeroVector("condition triple needs a nonzero m-vector".into()));
    }

    // Λx: scale each module component by its metric scalar.
    let mut lambda_x = x.clone();
    for module in 0..3 {
        let lam = S::from_rat(metric.lambda(module));
        for &i in desc.indices(Part::M(module)) {
            lambda_x.scale_coeff(i, lam.clone());
        }
    }
    let a_plus_x = a.add(x)?;

    // (1) [a + x, Λx] has no m-component.
    let w = a_plus_x.bracket(&lambda_x)?;
    let bracket_in_isotropy = desc
        .m_indices()
        .into_iter()
        .all(|i| w.coeffs()[i].is_zero_with(zero_tol));

    // (2) and (3), linear in y, checked on the m-basis.
    let algebra = desc.algebra();
    let ax = a.bracket(x)?;
    let mut pairing_identity = true;
    let mut orthogonality = true;
    for r in desc.m_indices() {
        let y = AlgebraVector::<S>::basis(algebra.clone(), r);
        // ⟨[a, x], y⟩ − ⟨x, [x, y]_m⟩ = 0
        let lhs = inner_product(desc, metric, &ax, &y);
        let xy = x.bracket(&y)?;
        let rhs = inner_product(desc, metric, x, &xy);
        if !(lhs - rhs).is_zero_with(zero_tol) {
            pairing_identity = false;
        }
        // ⟨[a + x, y]_m, x⟩ = 0
        let axy = a_plus_x.bracket(&y)?;
        if !inner_product(desc, metric, &axy, x).is_zero_with(zero_tol) {
            orthogonality = false;
        }
    }

    Ok(ConditionTriple { bracket_in_isotropy, pairing_identity, orthogonality })
}

fn check_algebra<S: Scalar>(desc: &SpaceDescriptor, v: &AlgebraVector<S>) -> Result<()> {
    if v.algebra().labels() == desc.algebra().labels() {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch(
            "vector does not live in the space's algebra".into(),
        ))
    }
}

/// Error unless `v` has no support on `part` (used with `Part::K` to require
/// an `m`-vector and vice versa).
fn require_support<S: Scalar>(
    desc: &SpaceDescriptor,
    v: &AlgebraVector<S>,
    forbidden: Part,
    what: &str,
) -> Result<()> {
    for &i in desc.indices(forbidden) {
        if !v.coeffs()[i].is_zero_with(0.0) {
            return Err(Error::SupportViolation(format!(
                "{what} must not have a component on {}",
                desc.algebra().label(i)
            )));
        }
    }
    Ok(())
}

/// As [`require_support`] but forbidding everything except `k` — used for
/// isotropy arguments.
fn require_isotropy<S: Scalar>(
    desc: &SpaceDescriptor,
    v: &AlgebraVector<S>,
) -> Result<()> {
    for i in desc.m_indices() {
        if !v.coeffs()[i].is_zero_with(0.0) {
            return Err(Error::SupportViolation(format!(
                "isotropy argument must not have a component on {}",
                desc.algebra().label(i)
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scalar::{rat_i, Rat};

    fn vec_from(desc: &SpaceDescriptor, entries: &[(&str, i64)]) -> AlgebraVector<Rat> {
        let g = desc.algebra().clone();
        let mut v = AlgebraVector::<Rat>::zero(g.clone());
        for (label, c) in entries {
            v.coeffs_mut()[g.index_of_label(label).unwrap()] = rat_i(*c);
        }
        v
    }

    fn metric(s: &str) -> InvariantMetric {
        InvariantMetric::parse(s).unwrap().0
    }

    #[test]
    fn inner_product_weights_modules() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,2,3");
        // e_13 lies in m2, B(e_13, e_13) = 4, so ⟨e_13, e_13⟩ = 2·4 = 8.
        let v = vec_from(&d, &[("e_13", 1)]);
        assert_eq!(inner_product(&d, &m, &v, &v), rat_i(8));
        // Isotropy components are ignored but flagged.
        let w = vec_from(&d, &[("e_13", 1), ("e_34", 5)]);
        let (val, truncated) = inner_product_flagged(&d, &m, &w, &w);
        assert_eq!(val, rat_i(8));
        assert!(truncated);
        let (_, clean) = inner_product_flagged(&d, &m, &v, &v);
        assert!(!clean);
    }

    #[test]
    fn standard_metric_makes_every_su2_vector_geodesic() {
        let d = catalog::parse_spec("su2_trivial").unwrap();
        let m = metric("1,1,1");
        let x = vec_from(&d, &[("ih", 1), ("X_a", 2), ("Y_a", 3)]);
        let check = is_geodesic_vector(&d, &m, &x, 0.0).unwrap();
        assert!(check.ok, "residuals: {:?}", check.residuals);
    }

    #[test]
    fn su2_axis_vectors_are_geodesic_for_any_metric() {
        let d = catalog::parse_spec("su2_trivial").unwrap();
        let m = metric("1,2,3");
        for axis in ["ih", "X_a", "Y_a"] {
            let x = vec_from(&d, &[(axis, 1)]);
            assert!(is_geodesic_vector(&d, &m, &x, 0.0).unwrap().ok);
        }
        // A mixed vector fails off the coincidence locus.
        let x = vec_from(&d, &[("X_a", 1), ("Y_a", 1)]);
        let check = is_geodesic_vector(&d, &m, &x, 0.0).unwrap();
        assert!(!check.ok);
        // The failing residual is against y = ih: ⟨[x, ih], x⟩ = 2bc(λ2 − λ3).
        let (label, val) = &check.residuals[0];
        assert_eq!(label, "ih");
        assert_eq!(val, &rat_i(-2));
    }

    #[test]
    fn stiefel_cross_free_vectors_are_geodesic() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,2,3");
        // e_34 + e_12 (isotropy axis plus m1 axis) solves the criterion for
        // every metric.
        let x = vec_from(&d, &[("e_34", 1), ("e_12", 1)]);
        assert!(is_geodesic_vector(&d, &m, &x, 0.0).unwrap().ok);
        // e_34 + e_23 does not: the residual against e_24 is
        // ⟨e_23, e_23⟩ = λ3·4 = 12.
        let x = vec_from(&d, &[("e_34", 1), ("e_23", 1)]);
        let check = is_geodesic_vector(&d, &m, &x, 0.0).unwrap();
        assert!(!check.ok);
        let bad = check.residuals.iter().find(|(l, _)| l == "e_24").unwrap();
        assert_eq!(bad.1, rat_i(12));
    }

    #[test]
    fn zero_vector_is_rejected() {
        let d = catalog::parse_spec("su2_trivial").unwrap();
        let m = metric("1,1,1");
        let x = AlgebraVector::<Rat>::zero(d.algebra().clone());
        assert!(matches!(
            is_geodesic_vector(&d, &m, &x, 0.0),
            Err(Error::ZeroVector(_))
        ));
        assert!(matches!(complete(&d, &m, &x), Err(Error::ZeroVector(_))));
    }

    #[test]
    fn completion_exists_iff_ranks_agree() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        // λ = (1,1,2), x_m = e_13 + e_23: the system has rank(A) = 1 but
        // rank [A|b] = 2 (the e_12 row reads 0 = 4), so no completion.
        let m = metric("1,1,2");
        let x = vec_from(&d, &[("e_13", 1), ("e_23", 1)]);
        let out = complete(&d, &m, &x).unwrap();
        assert_eq!(out.rank_a, 1);
        assert_eq!(out.rank_augmented, 2);
        assert!(!out.exists());

        // Same vector under the standard metric: b ≡ 0 and x_k = 0 works.
        let out = complete(&d, &metric("1,1,1"), &x).unwrap();
        assert!(out.exists());
        let full = out.completion.unwrap();
        let check = is_geodesic_vector(&d, &metric("1,1,1"), &full, 0.0).unwrap();
        assert!(check.ok);
    }

    #[test]
    fn completion_with_empty_isotropy_reduces_to_direct_check() {
        let d = catalog::parse_spec("su2_trivial").unwrap();
        let m = metric("1,1,2");
        // X_a + Y_a is not geodesic and there is no isotropy to fix it.
        let x = vec_from(&d, &[("X_a", 1), ("Y_a", 1)]);
        let out = complete(&d, &m, &x).unwrap();
        assert_eq!(out.rank_a, 0);
        assert_eq!(out.rank_augmented, 1);
        assert!(!out.exists());
        // ih + X_a is geodesic at this metric (λ1 = λ2): completion is x
        // itself.
        let x = vec_from(&d, &[("ih", 1), ("X_a", 1)]);
        let out = complete(&d, &m, &x).unwrap();
        assert!(out.exists());
        assert_eq!(out.completion.unwrap().coeffs(), x.coeffs());
    }

    #[test]
    fn system_assembly_rejects_k_support() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,1,1");
        let x = vec_from(&d, &[("e_34", 1), ("e_12", 1)]);
        assert!(matches!(
            assemble_system(&d, &m, &x),
            Err(Error::SupportViolation(_))
        ));
    }

    #[test]
    fn completion_solution_is_geodesic_for_probe_vectors() {
        let d = catalog::parse_spec("so_klm:2,2,1").unwrap();
        let m = metric("1,1,1");
        // Under the standard metric every m-direction completes (with zero).
        for label in ["e_13", "e_23", "e_15", "e_35"] {
            let x = vec_from(&d, &[(label, 1)]);
            let out = complete(&d, &m, &x).unwrap();
            assert!(out.exists(), "{label} must complete under the standard metric");
            let full = out.completion.unwrap();
            assert!(is_geodesic_vector(&d, &m, &full, 0.0).unwrap().ok);
        }
    }

    #[test]
    fn condition_triple_agreement_on_examples() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,2,3");
        let a = vec_from(&d, &[("e_34", 1)]);
        let x = vec_from(&d, &[("e_12", 1)]);
        let t = condition_triple(&d, &m, &a, &x, 0.0).unwrap();
        assert!(t.all_agree());
        assert!(t.orthogonality, "e_34 + e_12 is geodesic");

        let x = vec_from(&d, &[("e_23", 1)]);
        let t = condition_triple(&d, &m, &a, &x, 0.0).unwrap();
        assert!(t.all_agree());
        assert!(!t.orthogonality, "e_34 + e_23 is not geodesic");
    }

    #[test]
    fn condition_triple_rejects_bad_support() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,1,1");
        let a_bad = vec_from(&d, &[("e_12", 1)]); // not isotropy
        let x = vec_from(&d, &[("e_13", 1)]);
        assert!(condition_triple(&d, &m, &a_bad, &x, 0.0).is_err());
        let a = vec_from(&d, &[("e_34", 1)]);
        let x_bad = vec_from(&d, &[("e_34", 1)]); // not in m
        assert!(condition_triple(&d, &m, &a, &x_bad, 0.0).is_err());
    }
}
