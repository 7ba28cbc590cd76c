//! Three-summand homogeneous space descriptions and their validation.
//!
//! A [`SpaceDescriptor`] names an isotropy subalgebra `k` and three modules
//! `m1, m2, m3` as disjoint index sets over an algebra basis, covering it.
//! [`SpaceDescriptor::verify`] checks every structural requirement the
//! geodesic machinery relies on and reports each violation with a concrete
//! witness pair instead of failing on the first.
//!
//! The interaction strength between modules is summarized by the symmetric
//! triple symbols
//! `[ijk] = Σ B([e_α, e_β], e_γ)² / (‖e_α‖² ‖e_β‖² ‖e_γ‖²)`
//! summed over basis triples of `m_i × m_j × m_k`. The per-vector norm
//! division makes the value independent of rescaling individual basis
//! vectors, so orthogonal (not necessarily normalized) bases give the same
//! answer as orthonormal ones while staying rational.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraJson, AlgebraVector, LieAlgebraData};
use crate::error::Error;
use crate::scalar::{Rat, Scalar};
use crate::Result;

/// One part of the decomposition `g = k ⊕ m1 ⊕ m2 ⊕ m3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    K,
    M(usize), // 0, 1, 2
}

/// A generalized Wallach space presentation: algebra plus index partition.
#[derive(Clone, Debug)]
pub struct SpaceDescriptor {
    pub name: String,
    algebra: Arc<LieAlgebraData>,
    k_idx: Vec<usize>,
    m_idx: [Vec<usize>; 3],
    /// True for descriptors loaded from user data rather than the catalog;
    /// verification then carries an extra caveat (module irreducibility is
    /// not checked, which user-supplied modules may silently lack).
    pub user_supplied: bool,
}

impl SpaceDescriptor {
    pub fn new(
        name: impl Into<String>,
        algebra: Arc<LieAlgebraData>,
        k_idx: Vec<usize>,
        m_idx: [Vec<usize>; 3],
    ) -> Result<Self> {
        let desc = SpaceDescriptor {
            name: name.into(),
            algebra,
            k_idx,
            m_idx,
            user_supplied: false,
        };
        desc.check_partition()?;
        Ok(desc)
    }

    fn check_partition(&self) -> Result<()> {
        let dim = self.algebra.dim();
        let mut seen = BTreeSet::new();
        for &i in self.parts_flat() {
            if i >= dim {
                return Err(Error::InvalidInput(format!(
                    "partition index {i} out of range for dimension {dim}"
                )));
            }
            if !seen.insert(i) {
                return Err(Error::InvalidInput(format!(
                    "basis index {i} appears in two parts of the decomposition"
                )));
            }
        }
        if seen.len() != dim {
            return Err(Error::InvalidInput(format!(
                "partition covers {} of {} basis vectors",
                seen.len(),
                dim
            )));
        }
        for m in &self.m_idx {
            if m.is_empty() {
                return Err(Error::InvalidInput(
                    "every module m1, m2, m3 must be nonempty".into(),
                ));
            }
        }
        Ok(())
    }

    fn parts_flat(&self) -> impl Iterator<Item = &usize> + '_ {
        self.k_idx.iter().chain(self.m_idx.iter().flatten())
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraData> {
        &self.algebra
    }

    pub fn dim_g(&self) -> usize {
        self.algebra.dim()
    }

    pub fn dim_k(&self) -> usize {
        self.k_idx.len()
    }

    pub fn dim_m(&self) -> usize {
        self.m_idx.iter().map(Vec::len).sum()
    }

    pub fn module_dims(&self) -> [usize; 3] {
        [self.m_idx[0].len(), self.m_idx[1].len(), self.m_idx[2].len()]
    }

    pub fn indices(&self, part: Part) -> &[usize] {
        match part {
            Part::K => &self.k_idx,
            Part::M(i) => &self.m_idx[i],
        }
    }

    /// All module indices in module order `m1, m2, m3`.
    pub fn m_indices(&self) -> Vec<usize> {
        self.m_idx.iter().flatten().copied().collect()
    }

    /// Which part a basis index belongs to.
    pub fn part_of(&self, idx: usize) -> Part {
        for (i, m) in self.m_idx.iter().enumerate() {
            if m.contains(&idx) {
                return Part::M(i);
            }
        }
        Part::K
    }

    /// Which module a basis index belongs to, if any.
    pub fn module_of(&self, idx: usize) -> Option<usize> {
        match self.part_of(idx) {
            Part::M(i) => Some(i),
            Part::K => None,
        }
    }

    /// Coordinate projection onto a part (basis-aligned by construction).
    pub fn project<S: Scalar>(&self, v: &AlgebraVector<S>, part: Part) -> AlgebraVector<S> {
        let keep: BTreeSet<usize> = self.indices(part).iter().copied().collect();
        let mut out = AlgebraVector::zero(v.algebra().clone());
        for (i, c) in v.coeffs().iter().enumerate() {
            if keep.contains(&i) {
                out.coeffs_mut()[i] = c.clone();
            }
        }
        out
    }

    /// Projection onto all of `m = m1 ⊕ m2 ⊕ m3`.
    pub fn project_m<S: Scalar>(&self, v: &AlgebraVector<S>) -> AlgebraVector<S> {
        let mut out = v.clone();
        for &i in &self.k_idx {
            out.coeffs_mut()[i] = S::zero();
        }
        out
    }

    /// Structural verification; every requirement is checked exhaustively
    /// over basis pairs and all violations are reported.
    pub fn verify(&self) -> SpaceReport {
        let g = &self.algebra;
        let mut checks = Vec::new();

        // 1. The form is block-diagonal across parts: B(m_i, m_j) = 0 for
        //    i ≠ j and B(k, m) = 0.
        let mut witnesses = Vec::new();
        let parts: Vec<(&str, &[usize])> = vec![
            ("k", &self.k_idx),
            ("m1", &self.m_idx[0]),
            ("m2", &self.m_idx[1]),
            ("m3", &self.m_idx[2]),
        ];
        for (pi, (_, idx_i)) in parts.iter().enumerate() {
            for (_, idx_j) in parts.iter().skip(pi + 1) {
                for &a in *idx_i {
                    for &b in *idx_j {
                        if !Zero::is_zero(g.b_entry(a, b)) {
                            witnesses.push(format!(
                                "B({}, {}) = {}",
                                g.label(a),
                                g.label(b),
                                g.b_entry(a, b)
                            ));
                        }
                    }
                }
            }
        }
        checks.push(SpaceCheck::new("parts_b_orthogonal", witnesses));

        // 2. k is a subalgebra: [k, k] ⊆ k.
        let mut witnesses = Vec::new();
        for &a in &self.k_idx {
            for &b in &self.k_idx {
                for (t, _) in g.bracket_basis(a, b) {
                    if self.part_of(*t) != Part::K {
                        witnesses.push(format!(
                            "[{}, {}] has a component on {}",
                            g.label(a),
                            g.label(b),
                            g.label(*t)
                        ));
                    }
                }
            }
        }
        checks.push(SpaceCheck::new("isotropy_subalgebra", witnesses));

        // 3. Reductivity: [k, m] ⊆ m.
        let mut witnesses = Vec::new();
        for &a in &self.k_idx {
            for b in self.m_indices() {
                for (t, _) in g.bracket_basis(a, b) {
                    if self.part_of(*t) == Part::K {
                        witnesses.push(format!(
                            "[{}, {}] has a component on {} in k",
                            g.label(a),
                            g.label(b),
                            g.label(*t)
                        ));
                    }
                }
            }
        }
        checks.push(SpaceCheck::new("reductive_complement", witnesses));

        // 4. The defining three-summand condition: [m_i, m_i] ⊆ k.
        let mut witnesses = Vec::new();
        for m in &self.m_idx {
            for &a in m {
                for &b in m {
                    for (t, _) in g.bracket_basis(a, b) {
                        if self.part_of(*t) != Part::K {
                            witnesses.push(format!(
                                "[{}, {}] has a component on {} outside k",
                                g.label(a),
                                g.label(b),
                                g.label(*t)
                            ));
                        }
                    }
                }
            }
        }
        checks.push(SpaceCheck::new("modules_bracket_into_isotropy", witnesses));

        let mut warnings = Vec::new();
        // Within-module orthogonality is not required, but the triple-symbol
        // normalization assumes it; warn when it fails.
        'outer: for m in &self.m_idx {
            for (i, &a) in m.iter().enumerate() {
                for &b in &m[i + 1..] {
                    if !Zero::is_zero(g.b_entry(a, b)) {
                        warnings.push(
                            "a module basis is not B-orthogonal; triple symbols assume \
                             orthogonal module bases"
                                .to_string(),
                        );
                        break 'outer;
                    }
                }
            }
        }
        if self.user_supplied {
            warnings.push(
                "descriptor is user-supplied: module irreducibility is not verified".to_string(),
            );
        }

        SpaceReport { space: self.name.clone(), checks, warnings }
    }

    /// All triple symbols, computed from the definition by summation over
    /// basis triples. Returned as the six values on multisets `{i, j, k}`
    /// (the symbol is invariant under index permutation, which is tested,
    /// not assumed).
    pub fn triple_symbols(&self) -> TripleSymbols {
        let mut values = Vec::new();
        for i in 0..3 {
            for j in i..3 {
                for k in j..3 {
                    values.push(TripleSymbolValue {
                        modules: [i + 1, j + 1, k + 1],
                        value: self.triple_symbol(i, j, k),
                    });
                }
            }
        }
        TripleSymbols { values }
    }

    /// A single symbol `[ijk]` (0-based module indices).
    pub fn triple_symbol(&self, i: usize, j: usize, k: usize) -> Rat {
        let g = &self.algebra;
        let mut acc = <Rat as Zero>::zero();
        for &a in &self.m_idx[i] {
            let na = g.b_entry(a, a);
            for &b in &self.m_idx[j] {
                let nb = g.b_entry(b, b);
                for (t, c) in g.bracket_basis(a, b) {
                    // B([e_a, e_b], e_γ) for e_γ in m_k picks out the m_k
                    // components of the bracket; with orthogonal module
                    // bases each component couples to exactly one e_γ.
                    if self.module_of(*t) != Some(k) {
                        continue;
                    }
                    let nt = g.b_entry(*t, *t);
                    // (c · B(e_t, e_t))² / (‖e_a‖²‖e_b‖²‖e_t‖²)
                    let pairing = c * nt;
                    acc = acc + &pairing * &pairing / (na * nb * nt);
                }
            }
        }
        acc
    }

    // -- JSON ---------------------------------------------------------------

    pub fn to_json(&self) -> SpaceJson {
        SpaceJson {
            name: self.name.clone(),
            algebra: self.algebra.to_json(),
            k: self.k_idx.clone(),
            m1: self.m_idx[0].clone(),
            m2: self.m_idx[1].clone(),
            m3: self.m_idx[2].clone(),
        }
    }

    /// Load a descriptor from its serialized form. The result is marked
    /// user-supplied; run [`SpaceDescriptor::verify`] before trusting it.
    pub fn from_json(json: &SpaceJson) -> Result<Self> {
        let algebra = LieAlgebraData::from_json(&json.algebra)?;
        let mut desc = SpaceDescriptor::new(
            json.name.clone(),
            algebra,
            json.k.clone(),
            [json.m1.clone(), json.m2.clone(), json.m3.clone()],
        )?;
        desc.user_supplied = true;
        Ok(desc)
    }
}

/// Result of one structural check: name plus witnesses for every violation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceCheck {
    pub name: String,
    pub ok: bool,
    pub witnesses: Vec<String>,
}

impl SpaceCheck {
    fn new(name: &str, witnesses: Vec<String>) -> Self {
        SpaceCheck { name: name.to_string(), ok: witnesses.is_empty(), witnesses }
    }
}

/// Full verification report for a descriptor.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceReport {
    pub space: String,
    pub checks: Vec<SpaceCheck>,
    pub warnings: Vec<String>,
}

impl SpaceReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// One triple symbol value on a module multiset (1-based module numbers).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleSymbolValue {
    pub modules: [usize; 3],
    #[serde(with = "crate::report::rat_string")]
    pub value: Rat,
}

/// All six symbols on multisets `{i ≤ j ≤ k}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripleSymbols {
    pub values: Vec<TripleSymbolValue>,
}

impl TripleSymbols {
    /// Value on an arbitrary (unordered) index triple, 0-based.
    pub fn get(&self, mut i: usize, mut j: usize, mut k: usize) -> &Rat {
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        if j > k {
            std::mem::swap(&mut j, &mut k);
        }
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let want = [i + 1, j + 1, k + 1];
        &self
            .values
            .iter()
            .find(|v| v.modules == want)
            .expect("all multisets present")
            .value
    }
}

/// Serialized descriptor: algebra presentation plus 0-based index partition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceJson {
    pub name: String,
    pub algebra: AlgebraJson,
    pub k: Vec<usize>,
    pub m1: Vec<usize>,
    pub m2: Vec<usize>,
    pub m3: Vec<usize>,
}
