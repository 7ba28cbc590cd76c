//! Property tests for the algebraic invariants the library relies on:
//! bracket identities, bi-invariance of the pairing, symbol symmetry,
//! agreement of the three geodesic conditions, and the rank test behind
//! isotropy completion.

use std::sync::OnceLock;

use proptest::prelude::*;

use wallach_core::algebra::AlgebraVector;
use wallach_core::catalog;
use wallach_core::families;
use wallach_core::geodesic::{complete, condition_triple, is_geodesic_vector};
use wallach_core::metric::InvariantMetric;
use wallach_core::scalar::{rat, Rat, Scalar};
use wallach_core::space::{Part, SpaceDescriptor};

const SPACES: [&str; 6] = [
    "su2_trivial",
    "stiefel_n:4",
    "so_klm:1,1,2",
    "so_klm:2,2,1",
    "product_s2_cubed",
    "quad_diag_su2",
];

fn spaces() -> &'static Vec<SpaceDescriptor> {
    static CACHE: OnceLock<Vec<SpaceDescriptor>> = OnceLock::new();
    CACHE.get_or_init(|| {
        SPACES
            .iter()
            .map(|s| catalog::parse_spec(s).expect("catalog space builds"))
            .collect()
    })
}

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn positive_rat_strategy() -> impl Strategy<Value = Rat> {
    (1i64..=4, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn metric_strategy() -> impl Strategy<Value = InvariantMetric> {
    [positive_rat_strategy(), positive_rat_strategy(), positive_rat_strategy()]
        .prop_map(|lambda| InvariantMetric::new(lambda).expect("positive scalars"))
}

/// A vector over the full algebra of the chosen space, coefficients from the
/// small-rational pool.
fn vector_for(desc: &SpaceDescriptor, coeffs: &[Rat]) -> AlgebraVector<Rat> {
    let dim = desc.algebra().dim();
    let mut v = AlgebraVector::<Rat>::zero(desc.algebra().clone());
    for i in 0..dim {
        v.set_coeff(i, coeffs[i % coeffs.len()].clone());
    }
    v
}

/// Restrict a coefficient pool to one part of the decomposition.
fn part_vector(desc: &SpaceDescriptor, coeffs: &[Rat], part_indices: &[usize]) -> AlgebraVector<Rat> {
    let mut v = AlgebraVector::<Rat>::zero(desc.algebra().clone());
    for (n, &i) in part_indices.iter().enumerate() {
        v.set_coeff(i, coeffs[n % coeffs.len()].clone());
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric(
        space_idx in 0usize..SPACES.len(),
        xs in proptest::collection::vec(rat_strategy(), 4..12),
        ys in proptest::collection::vec(rat_strategy(), 4..12),
    ) {
        let desc = &spaces()[space_idx];
        let x = vector_for(desc, &xs);
        let y = vector_for(desc, &ys);
        let xy = x.bracket(&y).unwrap();
        let yx = y.bracket(&x).unwrap();
        let sum = xy.add(&yx).unwrap();
        prop_assert!(sum.is_zero_with(0.0));
    }

    #[test]
    fn jacobi_identity_holds(
        space_idx in 0usize..SPACES.len(),
        xs in proptest::collection::vec(rat_strategy(), 4..12),
        ys in proptest::collection::vec(rat_strategy(), 4..12),
        zs in proptest::collection::vec(rat_strategy(), 4..12),
    ) {
        let desc = &spaces()[space_idx];
        let x = vector_for(desc, &xs);
        let y = vector_for(desc, &ys);
        let z = vector_for(desc, &zs);
        let xy_z = x.bracket(&y).unwrap().bracket(&z).unwrap();
        let yz_x = y.bracket(&z).unwrap().bracket(&x).unwrap();
        let zx_y = z.bracket(&x).unwrap().bracket(&y).unwrap();
        let total = xy_z.add(&yz_x).unwrap().add(&zx_y).unwrap();
        prop_assert!(total.is_zero_with(0.0));
    }

    #[test]
    fn pairing_is_ad_invariant(
        space_idx in 0usize..SPACES.len(),
        xs in proptest::collection::vec(rat_strategy(), 4..12),
        ys in proptest::collection::vec(rat_strategy(), 4..12),
        zs in proptest::collection::vec(rat_strategy(), 4..12),
    ) {
        let desc = &spaces()[space_idx];
        let x = vector_for(desc, &xs);
        let y = vector_for(desc, &ys);
        let z = vector_for(desc, &zs);
        // B([x,y], z) + B(y, [x,z]) = 0.
        let lhs = x.bracket(&y).unwrap().b_pair(&z).unwrap()
            + y.b_pair(&x.bracket(&z).unwrap()).unwrap();
        prop_assert!(lhs.is_zero_with(0.0));
    }

    #[test]
    fn triple_symbols_are_fully_symmetric(
        space_idx in 0usize..SPACES.len(),
        i in 0usize..3,
        j in 0usize..3,
        k in 0usize..3,
    ) {
        let desc = &spaces()[space_idx];
        let base = desc.triple_symbol(i, j, k);
        for (a, b, c) in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            prop_assert_eq!(&desc.triple_symbol(a, b, c), &base);
        }
        if i == j || j == k || i == k {
            prop_assert!(base.is_zero_with(0.0), "repeated-index symbol must vanish");
        }
    }

    #[test]
    fn geodesic_criterion_is_scale_invariant(
        space_idx in 0usize..SPACES.len(),
        xs in proptest::collection::vec(rat_strategy(), 4..12),
        metric in metric_strategy(),
        scale_num in 1i64..=5,
        metric_scale in 1i64..=3,
    ) {
        let desc = &spaces()[space_idx];
        let x = vector_for(desc, &xs);
        prop_assume!(!x.is_zero_with(0.0));
        let base = is_geodesic_vector(desc, &metric, &x, 0.0).unwrap();
        // Scaling the vector preserves the verdict (residuals are homogeneous).
        let scaled = x.scale(&rat(scale_num, 2));
        let after = is_geodesic_vector(desc, &metric, &scaled, 0.0).unwrap();
        prop_assert_eq!(base.ok, after.ok);
        // Scaling every metric coefficient by the same positive rational
        // preserves the verdict too.
        let lambda = [
            metric.lambda(0) * rat(metric_scale, 1),
            metric.lambda(1) * rat(metric_scale, 1),
            metric.lambda(2) * rat(metric_scale, 1),
        ];
        let scaled_metric = InvariantMetric::new(lambda).unwrap();
        let after = is_geodesic_vector(desc, &scaled_metric, &x, 0.0).unwrap();
        prop_assert_eq!(base.ok, after.ok);
    }

    #[test]
    fn condition_triple_members_always_agree(
        space_idx in 0usize..SPACES.len(),
        avs in proptest::collection::vec(rat_strategy(), 4..12),
        xvs in proptest::collection::vec(rat_strategy(), 4..12),
        metric in metric_strategy(),
    ) {
        let desc = &spaces()[space_idx];
        let a = part_vector(desc, &avs, desc.indices(Part::K));
        let x = part_vector(desc, &xvs, &desc.m_indices());
        let t = condition_triple(desc, &metric, &a, &x, 0.0).unwrap();
        prop_assert!(
            t.all_agree(),
            "conditions disagree: {t:?} on {} with metric {}",
            desc.name,
            metric.display()
        );
    }

    #[test]
    fn completion_exists_iff_ranks_match_and_result_is_geodesic(
        space_idx in 0usize..SPACES.len(),
        xvs in proptest::collection::vec(rat_strategy(), 4..12),
        metric in metric_strategy(),
    ) {
        let desc = &spaces()[space_idx];
        let x = part_vector(desc, &xvs, &desc.m_indices());
        prop_assume!(!x.is_zero_with(0.0));
        let out = complete(desc, &metric, &x).unwrap();
        // The solver (Gauss-Jordan) decides consistency independently of the
        // fraction-free rank computation; they must agree.
        prop_assert_eq!(out.exists(), out.rank_a == out.rank_augmented);
        if let Some(full) = &out.completion {
            let check = is_geodesic_vector(desc, &metric, full, 0.0).unwrap();
            prop_assert!(check.ok, "completed vector must pass the full criterion");
        }
    }

    #[test]
    fn standard_metric_completions_always_exist_with_zero_rhs(
        space_idx in 0usize..SPACES.len(),
        xvs in proptest::collection::vec(rat_strategy(), 4..12),
    ) {
        let desc = &spaces()[space_idx];
        let x = part_vector(desc, &xvs, &desc.m_indices());
        prop_assume!(!x.is_zero_with(0.0));
        let out = complete(desc, &InvariantMetric::standard(), &x).unwrap();
        prop_assert!(out.rhs_zero, "standard-metric right-hand side must vanish");
        prop_assert!(out.exists());
    }

    #[test]
    fn enumerated_family_samples_verify_for_random_metrics(
        which in 0usize..2,
        metric in metric_strategy(),
    ) {
        let desc = &spaces()[which]; // su2_trivial or stiefel_n:4
        let report = families::enumerate(desc, &metric).unwrap();
        prop_assert!(!report.families.is_empty());
        for fam in &report.families {
            prop_assert!(!fam.samples.is_empty(), "family {} has no samples", fam.id);
            for s in &fam.samples {
                prop_assert!(
                    s.geodesic,
                    "sample {:?} of {} fails at metric {}",
                    s.coords,
                    fam.id,
                    metric.display()
                );
            }
        }
    }
}
