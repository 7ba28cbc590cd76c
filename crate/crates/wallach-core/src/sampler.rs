//! Numerical discovery of geodesic vectors and projection onto solution
//! families.
//!
//! A damped Gauss–Newton iteration drives the residual map
//! `R_r(X) = ⟨[X, e_r]_m, X_m⟩` (one component per tangent basis direction)
//! to zero from seeded random unit starts, renormalizing to the unit sphere
//! after every step — the residuals are homogeneous, so the sphere meets
//! every solution ray. Converged points are canonicalized up to sign and
//! deduplicated, giving a numerical census of the solution set that can be
//! compared against the exact family enumeration: each representative is
//! assigned its nearest family by Gauss–Newton projection onto the family's
//! constraint variety (the closed conditions only; genericity is open and
//! does not affect distances).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraVector;
use crate::error::Error;
use crate::families::{self, SolutionFamily};
use crate::linalg::{solve_min_norm_f64, Mat};
use crate::metric::InvariantMetric;
use crate::scalar::rat_to_f64;
use crate::space::{Part, SpaceDescriptor};
use crate::{tol, Result};

/// Tuning knobs for the Gauss–Newton search.
#[derive(Clone, Copy, Debug)]
pub struct SamplerOptions {
    pub starts: usize,
    pub max_iters: usize,
    pub damping: f64,
    /// Convergence threshold on the max-norm of the residual vector.
    pub residual_tol: f64,
    /// Two canonicalized points closer than this are the same solution.
    pub dedup_tol: f64,
}

/// The last Newton step must be below this for a start to count as
/// converged; together with the residual threshold this keeps accepted
/// points within ~1e-10 of the true solution set.
const STEP_TOL: f64 = 1e-11;

/// Coordinates smaller than this are candidates for snapping to exact zero
/// after convergence (the snap is kept only if the residual stays below
/// tolerance, so genuine small coordinates survive).
const SNAP_TOL: f64 = 1e-4;

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            starts: 100,
            max_iters: 200,
            damping: 0.5,
            residual_tol: tol::NEWTON_RESIDUAL,
            dedup_tol: tol::NEWTON_DEDUP,
        }
    }
}

/// One deduplicated converged solution.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistinctVector {
    /// Unit-norm canonical coordinates (largest component positive).
    pub coords: Vec<f64>,
    /// Max-norm of the residual vector at this point.
    pub residual: f64,
    /// Number of starts that converged here.
    pub count: usize,
    /// Nearest enumerated family, when the space has an exact enumeration.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nearest_family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_distance: Option<f64>,
}

/// Report of one sampling run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleReport {
    pub space: String,
    pub metric: InvariantMetric,
    pub seed: u64,
    pub starts: usize,
    pub converged: usize,
    pub distinct: Vec<DistinctVector>,
}

/// The residual vector of the geodesic criterion at float coordinates, in
/// tangent-basis order.
pub fn residual_vec(desc: &SpaceDescriptor, metric: &InvariantMetric, x: &[f64]) -> Vec<f64> {
    let w = weighted(desc, metric, x);
    let algebra = desc.algebra();
    let mut out = Vec::with_capacity(desc.dim_m());
    for r in desc.m_indices() {
        let mut acc = 0.0;
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0.0 {
                continue;
            }
            for (g, c) in algebra.bracket_basis(a, r) {
                // Only tangent components pair with the weighted vector.
                if w[*g] != 0.0 {
                    acc += xa * rat_to_f64(c) * w[*g];
                }
            }
        }
        out.push(acc);
    }
    out
}

/// Jacobian of [`residual_vec`] with respect to all coordinates.
pub fn residual_jacobian(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    x: &[f64],
) -> Mat<f64> {
    let algebra = desc.algebra();
    let dim = algebra.dim();
    let w = weighted(desc, metric, x);
    let m_rows = desc.m_indices();
    let mut j = Mat::zeros(m_rows.len(), dim);
    for (ri, &r) in m_rows.iter().enumerate() {
        // [X, e_r] once per row.
        let mut bracket_xr = vec![0.0; dim];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0.0 {
                continue;
            }
            for (g, c) in algebra.bracket_basis(a, r) {
                bracket_xr[*g] += xa * rat_to_f64(c);
            }
        }
        for v in 0..dim {
            // ⟨[e_v, e_r]_m, X_m⟩ term.
            let mut acc = 0.0;
            for (g, c) in algebra.bracket_basis(v, r) {
                if w[*g] != 0.0 {
                    acc += rat_to_f64(c) * w[*g];
                }
            }
            // ⟨[X, e_r]_m, ∂W/∂x_v⟩ term: the weighted vector is linear in x
            // with within-module weights λ·gram.
            if let Some(module) = desc.module_of(v) {
                let lam = metric.lambda_f64(module);
                for &i in desc.indices(Part::M(module)) {
                    let g = rat_to_f64(desc.algebra().gram().get(i, v));
                    if g != 0.0 {
                        acc += bracket_xr[i] * lam * g;
                    }
                }
            }
            if acc != 0.0 {
                j.set(ri, v, acc);
            }
        }
    }
    j
}

/// Metric-weighted copy of the tangent part: `W_i = λ · (gram · x)_i` within
/// each module, zero on the isotropy part.
fn weighted(desc: &SpaceDescriptor, metric: &InvariantMetric, x: &[f64]) -> Vec<f64> {
    let gram = desc.algebra().gram();
    let mut w = vec![0.0; desc.algebra().dim()];
    for module in 0..3 {
        let lam = metric.lambda_f64(module);
        let idx = desc.indices(Part::M(module));
        for &i in idx {
            let mut acc = 0.0;
            for &j in idx {
                let g = rat_to_f64(gram.get(i, j));
                if g != 0.0 {
                    acc += g * x[j];
                }
            }
            w[i] = lam * acc;
        }
    }
    w
}

/// Run the damped Gauss–Newton search and compare against the exact family
/// enumeration when one exists for the space.
pub fn sample_space(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    seed: u64,
    opts: SamplerOptions,
) -> Result<SampleReport> {
    let fams: Option<Vec<SolutionFamily>> = match desc.name.as_str() {
        "su2_trivial" => Some(families::su2_families(desc, metric).0),
        "stiefel_n:4" => Some(families::stiefel4_families(desc, metric).0),
        _ => None,
    };
    let run = newton_search(desc, metric, seed, opts)?;
    let mut distinct = Vec::with_capacity(run.len());
    for (coords, residual, count) in run {
        let (nearest_family, family_distance) = match &fams {
            Some(fams) => {
                let (idx, dist) = nearest_family_distance(fams, &coords)
                    .expect("enumerated spaces have at least one family");
                (Some(fams[idx].id.clone()), Some(dist))
            }
            None => (None, None),
        };
        distinct.push(DistinctVector {
            coords,
            residual,
            count,
            nearest_family,
            family_distance,
        });
    }
    let converged = distinct.iter().map(|d| d.count).sum();
    Ok(SampleReport {
        space: desc.name.clone(),
        metric: metric.clone(),
        seed,
        starts: opts.starts,
        converged,
        distinct,
    })
}

/// The Gauss–Newton search alone: canonical deduplicated solutions as
/// `(coords, residual, count)`, in first-found order.
pub fn newton_search(
    desc: &SpaceDescriptor,
    metric: &InvariantMetric,
    seed: u64,
    opts: SamplerOptions,
) -> Result<Vec<(Vec<f64>, f64, usize)>> {
    let dim = desc.algebra().dim();
    if dim == 0 {
        return Err(Error::InvalidDimension("cannot sample a zero-dimensional algebra".into()));
    }
    let n_rows = desc.m_indices().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reps: Vec<(Vec<f64>, f64, usize)> = Vec::new();
    for _ in 0..opts.starts {
        let mut x: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        if !normalize(&mut x) {
            continue;
        }
        let mut converged = false;
        let mut last_step = f64::INFINITY;
        for iter in 0..opts.max_iters {
            let r = residual_vec(desc, metric, &x);
            // A small residual alone is not enough: the residuals are
            // quadratic, so near singular strata they dip below tolerance at
            // points that are not close to any solution. Demand that the
            // iteration has also stopped moving.
            if max_abs(&r) < opts.residual_tol && last_step < STEP_TOL {
                converged = true;
                break;
            }
            // The residuals are homogeneous of degree 2, so Euler's identity
            // gives J·x = 2r: an unconstrained square Newton step is purely
            // radial and dies under renormalization. Augmenting with the
            // unit-sphere equation removes that null direction.
            let j = residual_jacobian(desc, metric, &x);
            let mut aug = Mat::zeros(n_rows + 1, dim);
            for ri in 0..n_rows {
                for v in 0..dim {
                    let val = j.get(ri, v);
                    if *val != 0.0 {
                        aug.set(ri, v, *val);
                    }
                }
            }
            for v in 0..dim {
                aug.set(n_rows, v, x[v]);
            }
            let mut rhs = r.clone();
            rhs.push((x.iter().map(|v| v * v).sum::<f64>() - 1.0) / 2.0);
            let (delta, _) = solve_min_norm_f64(&aug, &rhs);
            let eta = if iter < 10 { opts.damping } else { 1.0 };
            for (xi, di) in x.iter_mut().zip(&delta) {
                *xi -= eta * di;
            }
            last_step = eta * max_abs(&delta);
            if !normalize(&mut x) {
                break;
            }
        }
        if !converged {
            continue;
        }
        // Converged iterates can stall on "whiskers": curves near the
        // intersection of solution strata where every residual cancels below
        // tolerance while no coordinate is exactly zero. Snapping small
        // coordinates to zero — kept only when the snapped point still
        // passes the residual test — projects such points onto the exact
        // stratum they approximate.
        let mut snapped: Vec<f64> = x
            .iter()
            .map(|&v| if v.abs() < SNAP_TOL { 0.0 } else { v })
            .collect();
        if normalize(&mut snapped)
            && max_abs(&residual_vec(desc, metric, &snapped)) < opts.residual_tol
        {
            x = snapped;
        }
        canonicalize(&mut x);
        let residual = max_abs(&residual_vec(desc, metric, &x));
        if residual >= opts.residual_tol {
            continue;
        }
        match reps
            .iter_mut()
            .find(|(rep, _, _)| dist(rep, &x) < opts.dedup_tol)
        {
            Some((_, best, count)) => {
                *count += 1;
                if residual < *best {
                    *best = residual;
                }
            }
            None => reps.push((x, residual, 1)),
        }
    }
    Ok(reps)
}

/// Project a float point onto the closed constraint variety of one family
/// (Gauss–Newton with a pseudo-inverse step); returns the projected point
/// and the distance moved.
pub fn project_to_family(fam: &SolutionFamily, x: &[f64]) -> (Vec<f64>, f64) {
    let mut y = x.to_vec();
    for _ in 0..60 {
        let c = fam.constraint_values_f64(&y);
        if max_abs(&c) < 1e-14 {
            break;
        }
        let j = fam.constraint_jacobian_f64(&y);
        let (delta, _) = solve_min_norm_f64(&j, &c);
        for (yi, di) in y.iter_mut().zip(&delta) {
            *yi -= di;
        }
    }
    let d = dist(&y, x);
    (y, d)
}

/// Index and distance of the nearest family (by constraint-variety
/// projection); `None` when the list is empty.
pub fn nearest_family_distance(fams: &[SolutionFamily], x: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, fam) in fams.iter().enumerate() {
        let (_, d) = project_to_family(fam, x);
        match best {
            Some((_, bd)) if bd <= d => {}
            _ => best = Some((i, d)),
        }
    }
    best
}

/// Residual of the geodesic criterion at an [`AlgebraVector`] in float
/// coordinates (convenience for float sessions).
pub fn residual_max(desc: &SpaceDescriptor, metric: &InvariantMetric, x: &AlgebraVector<f64>) -> f64 {
    max_abs(&residual_vec(desc, metric, x.coeffs()))
}

fn normalize(x: &mut [f64]) -> bool {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n < 1e-9 {
        return false;
    }
    for v in x.iter_mut() {
        *v /= n;
    }
    true
}

/// Fix the sign so the largest-magnitude component is positive.
fn canonicalize(x: &mut [f64]) {
    let mut best = 0usize;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[best].abs() {
            best = i;
        }
    }
    if x[best] < 0.0 {
        for v in x.iter_mut() {
            *v = -*v;
        }
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::geodesic::is_geodesic_vector;

    fn metric(s: &str) -> InvariantMetric {
        InvariantMetric::parse(s).unwrap().0
    }

    fn opts(starts: usize) -> SamplerOptions {
        SamplerOptions { starts, ..SamplerOptions::default() }
    }

    #[test]
    fn residuals_match_exact_checker() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,2,3");
        let g = d.algebra().clone();
        let mut v = AlgebraVector::<f64>::zero(g.clone());
        v.set_coeff(g.index_of_label("e_34").unwrap(), 1.0);
        v.set_coeff(g.index_of_label("e_23").unwrap(), 1.0);
        let r = residual_vec(&d, &m, v.coeffs());
        let exact = is_geodesic_vector(&d, &m, &v, 1e-12).unwrap();
        for ((_, ev), rv) in exact.residuals.iter().zip(&r) {
            assert!((ev - rv).abs() < 1e-12);
        }
        // Frozen from the exact checker: the residual against e_24 is 12.
        assert!(r.iter().any(|&x| (x - 12.0).abs() < 1e-12));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,2,3");
        let x: Vec<f64> = vec![0.3, -0.7, 0.2, 0.9, -0.4, 0.5];
        let j = residual_jacobian(&d, &m, &x);
        let h = 1e-6;
        let base = residual_vec(&d, &m, &x);
        for v in 0..x.len() {
            let mut xp = x.clone();
            xp[v] += h;
            let rp = residual_vec(&d, &m, &xp);
            for r in 0..base.len() {
                let fd = (rp[r] - base[r]) / h;
                assert!(
                    (j.get(r, v) - fd).abs() < 1e-4,
                    "J[{r}][{v}] = {} vs finite difference {fd}",
                    j.get(r, v)
                );
            }
        }
    }

    #[test]
    fn su2_search_lands_on_axes() {
        let d = catalog::parse_spec("su2_trivial").unwrap();
        let m = metric("1,2,3");
        let report = sample_space(&d, &m, 19, opts(60)).unwrap();
        assert!(report.converged > 0);
        assert!(!report.distinct.is_empty());
        for v in &report.distinct {
            assert!(v.residual < tol::NEWTON_RESIDUAL);
            let fam = v.nearest_family.as_deref().expect("su2 has an enumeration");
            assert!(fam.starts_with("axis-m"), "unexpected family {fam}");
            assert!(
                v.family_distance.unwrap() < 1e-8,
                "representative strays {} from {fam}",
                v.family_distance.unwrap()
            );
        }
    }

    #[test]
    fn stiefel_search_stays_on_enumerated_varieties() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,1,2");
        let report = sample_space(&d, &m, 23, opts(60)).unwrap();
        assert!(report.converged > 0);
        for v in &report.distinct {
            assert!(
                v.family_distance.unwrap() < 1e-8,
                "representative {:?} strays {} from {}",
                v.coords,
                v.family_distance.unwrap(),
                v.nearest_family.as_deref().unwrap_or("?")
            );
        }
    }

    #[test]
    fn projection_distance_tracks_perturbation() {
        let d = catalog::parse_spec("stiefel_n:4").unwrap();
        let m = metric("1,1,2");
        let (fams, _) = crate::families::stiefel4_families(&d, &m);
        let quadric = fams.iter().find(|f| f.id == "band-quadric").unwrap();
        // On the variety: a13 = a24 = 1/√2 (Q = 0 via zero partners).
        let g = d.algebra();
        let i13 = g.index_of_label("e_13").unwrap();
        let i24 = g.index_of_label("e_24").unwrap();
        let i12 = g.index_of_label("e_12").unwrap();
        let mut on = vec![0.0; 6];
        on[i13] = 0.7071067811865476;
        on[i24] = 0.7071067811865476;
        let (_, d0) = project_to_family(quadric, &on);
        assert!(d0 < 1e-12);
        // Perturb off the variety in a forced-zero coordinate.
        let mut off = on.clone();
        off[i12] = 1e-3;
        let (_, d1) = project_to_family(quadric, &off);
        assert!((d1 - 1e-3).abs() < 1e-6);
    }

    #[test]
    fn search_is_deterministic() {
        let d = catalog::parse_spec("su2_trivial").unwrap();
        let m = metric("1,1,2");
        let a = sample_space(&d, &m, 5, opts(30)).unwrap();
        let b = sample_space(&d, &m, 5, opts(30)).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
