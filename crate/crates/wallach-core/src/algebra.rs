//! Lie algebras presented by structure constants, and vectors in them.
//!
//! An algebra is stored as a labelled basis plus the sparse structure tensor
//! `[e_a, e_b] = Σ_g c_{ab}^g e_g` with exact rational `c_{ab}^g`. On
//! construction the presentation is validated (antisymmetry is built in,
//! the Jacobi identity is checked exhaustively) and the bi-invariant form
//! `B(x, y) = −tr(ad x ∘ ad y)` is derived from the tensor. `B` must come
//! out positive definite — the compact semisimple case all downstream
//! geometry assumes — otherwise construction fails.
//!
//! Built-in presentations: `so(n)` in the elementary skew basis
//! `e_ij = E_ij − E_ji` (`i < j`, 1-based labels `e_12`, ...), `su(2)` in a
//! real basis `(ih, X_a, Y_a)` with `[ih, X_a] = Y_a`, `[ih, Y_a] = −X_a`,
//! `[X_a, Y_a] = ih`, direct sums of previously built algebras, and exact
//! change of basis for decompositions that are not coordinate subspaces of
//! a natural basis.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{inverse_exact, is_positive_definite_exact, Mat};
use crate::scalar::{parse_rat, rat_i, Rat, Scalar};
use crate::Result;

/// A finite-dimensional real Lie algebra given by structure constants, with
/// the positive form `B = −Killing` attached.
#[derive(Debug, PartialEq)]
pub struct LieAlgebraData {
    labels: Vec<String>,
    /// Sparse structure tensor with both orientations materialized:
    /// `brackets[(a, b)]` lists the nonzero `(g, c_{ab}^g)`.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
    /// Matrix of `B(e_a, e_b)`; positive definite by construction.
    gram: Mat<Rat>,
}

impl LieAlgebraData {
    /// Build and validate an algebra from labels and structure entries
    /// `(a, b, g, c)` meaning `[e_a, e_b] ∋ c·e_g` (0-based indices, any
    /// orientation; contributions to the same slot accumulate).
    pub fn from_structure(
        labels: Vec<String>,
        entries: Vec<(usize, usize, usize, Rat)>,
    ) -> Result<Arc<Self>> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidDimension("algebra must have positive dimension".into()));
        }
        {
            let mut seen = labels.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != dim {
                return Err(Error::InvalidInput("duplicate basis labels".into()));
            }
        }
        // Canonicalize to (a < b) slots, then materialize both orientations.
        let mut canon: BTreeMap<(usize, usize), BTreeMap<usize, Rat>> = BTreeMap::new();
        for (a, b, g, c) in entries {
            if a >= dim || b >= dim || g >= dim {
                return Err(Error::InvalidInput(format!(
                    "structure entry ({a}, {b}, {g}) out of range for dimension {dim}"
                )));
            }
            if Zero::is_zero(&c) {
                continue;
            }
            if a == b {
                return Err(Error::InvalidInput(format!(
                    "nonzero bracket [e_{a}, e_{a}] violates antisymmetry"
                )));
            }
            let (key, signed) = if a < b { ((a, b), c) } else { ((b, a), -c) };
            let slot = canon.entry(key).or_default().entry(g).or_insert_with(<Rat as Zero>::zero);
            *slot = slot.clone() + signed;
        }
        let mut brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        for ((a, b), terms) in canon {
            let fwd: Vec<(usize, Rat)> =
                terms.into_iter().filter(|(_, c)| !Zero::is_zero(c)).collect();
            if fwd.is_empty() {
                continue;
            }
            let rev: Vec<(usize, Rat)> = fwd.iter().map(|(g, c)| (*g, -c.clone())).collect();
            brackets.insert((a, b), fwd);
            brackets.insert((b, a), rev);
        }

        let algebra = LieAlgebraData { labels, brackets, gram: Mat::zeros(dim, dim) };
        algebra.check_jacobi()?;
        let gram = algebra.killing_gram();
        if !is_positive_definite_exact(&gram) {
            return Err(Error::NotCompactSemisimple(
                "derived bilinear form B = -Killing is not positive definite".into(),
            ));
        }
        Ok(Arc::new(LieAlgebraData { gram, ..algebra }))
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Resolve a basis label. Exact matches win; otherwise an
    /// underscore-insensitive match is accepted when unambiguous, so the
    /// command line may say `e12` for `e_12`.
    pub fn index_of_label(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.labels.iter().position(|l| l == name) {
            return Some(i);
        }
        let strip = |s: &str| s.replace('_', "");
        let wanted = strip(name);
        let mut hits = self.labels.iter().enumerate().filter(|(_, l)| strip(l) == wanted);
        match (hits.next(), hits.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    /// Nonzero terms of `[e_a, e_b]`.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Rat)] {
        self.brackets.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    /// Iterate all nonzero structure slots `((a, b), terms)`, both
    /// orientations included, in deterministic order.
    pub fn structure_iter(
        &self,
    ) -> impl Iterator<Item = (&(usize, usize), &Vec<(usize, Rat)>)> + '_ {
        self.brackets.iter()
    }

    /// Canonical `(a < b)` structure entries, for export.
    pub fn structure_entries(&self) -> Vec<(usize, usize, usize, Rat)> {
        let mut out = Vec::new();
        for ((a, b), terms) in &self.brackets {
            if a < b {
                for (g, c) in terms {
                    out.push((*a, *b, *g, c.clone()));
                }
            }
        }
        out
    }

    /// The matrix of the positive bi-invariant form `B`.
    pub fn gram(&self) -> &Mat<Rat> {
        &self.gram
    }

    /// `B(e_a, e_b)`.
    pub fn b_entry(&self, a: usize, b: usize) -> &Rat {
        self.gram.get(a, b)
    }

    /// `B = −Killing` derived from the structure tensor via adjoint traces.
    fn killing_gram(&self) -> Mat<Rat> {
        let dim = self.dim();
        // ad_a as dense columns: ad[a][g][b] = c_{ab}^g.
        let mut ad = vec![vec![vec![<Rat as Zero>::zero(); dim]; dim]; dim];
        for ((a, b), terms) in &self.brackets {
            for (g, c) in terms {
                ad[*a][*g][*b] = c.clone();
            }
        }
        let mut gram = Mat::zeros(dim, dim);
        for a in 0..dim {
            for b in a..dim {
                let mut tr = <Rat as Zero>::zero();
                for g in 0..dim {
                    for h in 0..dim {
                        let x = &ad[a][g][h];
                        if Zero::is_zero(x) {
                            continue;
                        }
                        let y = &ad[b][h][g];
                        if Zero::is_zero(y) {
                            continue;
                        }
                        tr = tr + x * y;
                    }
                }
                gram.set(a, b, -tr.clone());
                gram.set(b, a, -tr);
            }
        }
        gram
    }

    /// Exhaustive Jacobi check over basis triples.
    fn check_jacobi(&self) -> Result<()> {
        let dim = self.dim();
        for a in 0..dim {
            for b in a + 1..dim {
                for c in b + 1..dim {
                    let mut acc = vec![<Rat as Zero>::zero(); dim];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        // [[e_x, e_y], e_z]
                        for (g, cf) in self.bracket_basis(x, y) {
                            for (h, cf2) in self.bracket_basis(*g, z) {
                                acc[*h] = acc[*h].clone() + cf * cf2;
                            }
                        }
                    }
                    if acc.iter().any(|v| !Zero::is_zero(v)) {
                        return Err(Error::InvalidInput(format!(
                            "Jacobi identity fails on basis triple ({}, {}, {})",
                            self.labels[a], self.labels[b], self.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    // -- constructors -------------------------------------------------------

    /// `so(n)`, `n ≥ 3`, in the basis `e_ij = E_ij − E_ji` for `1 ≤ i < j ≤ n`
    /// ordered lexicographically. Labels read `e_12`; indices of 10 or more
    /// are underscore-separated (`e_1_10`).
    pub fn so(n: usize) -> Result<Arc<Self>> {
        if n < 3 {
            return Err(Error::InvalidDimension(format!(
                "so({n}) is abelian or zero; need n >= 3"
            )));
        }
        let pairs: Vec<(usize, usize)> =
            (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        let index: BTreeMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let labels: Vec<String> = pairs.iter().map(|&(i, j)| so_label(n, i, j)).collect();
        // [e_ab, e_cd] = δ_bc e_ad + δ_ad e_bc − δ_bd e_ac − δ_ac e_bd
        // where e_xy for x > y means −e_yx and e_xx = 0.
        let mut entries = Vec::new();
        let push = |acc: &mut Vec<(usize, Rat)>, x: usize, y: usize, sign: i64| {
            if x == y {
                return;
            }
            let (p, s) = if x < y { ((x, y), sign) } else { ((y, x), -sign) };
            acc.push((index[&p], rat_i(s)));
        };
        for (u, &(a, b)) in pairs.iter().enumerate() {
            for (v, &(c, d)) in pairs.iter().enumerate() {
                if u >= v {
                    continue;
                }
                let mut acc: Vec<(usize, Rat)> = Vec::new();
                if b == c {
                    push(&mut acc, a, d, 1);
                }
                if a == d {
                    push(&mut acc, b, c, 1);
                }
                if b == d {
                    push(&mut acc, a, c, -1);
                }
                if a == c {
                    push(&mut acc, b, d, -1);
                }
                for (g, cf) in acc {
                    entries.push((u, v, g, cf));
                }
            }
        }
        Self::from_structure(labels, entries)
    }

    /// `su(2)` in the real basis `(ih, X_a, Y_a)`:
    /// `[ih, X_a] = Y_a`, `[ih, Y_a] = −X_a`, `[X_a, Y_a] = ih`.
    pub fn su2() -> Arc<Self> {
        let labels = vec!["ih".to_string(), "X_a".to_string(), "Y_a".to_string()];
        let entries = vec![
            (0, 1, 2, rat_i(1)),
            (0, 2, 1, rat_i(-1)),
            (1, 2, 0, rat_i(1)),
        ];
        Self::from_structure(labels, entries).expect("su(2) presentation is valid")
    }

    /// Direct sum `g_1 ⊕ ... ⊕ g_t`; factor labels are prefixed `f1.`,
    /// `f2.`, ... so they stay unique.
    pub fn direct_sum(parts: &[Arc<Self>]) -> Result<Arc<Self>> {
        if parts.is_empty() {
            return Err(Error::InvalidDimension("direct sum of zero algebras".into()));
        }
        let mut labels = Vec::new();
        let mut entries = Vec::new();
        let mut offset = 0usize;
        for (t, part) in parts.iter().enumerate() {
            for l in part.labels() {
                labels.push(format!("f{}.{}", t + 1, l));
            }
            for (a, b, g, c) in part.structure_entries() {
                entries.push((a + offset, b + offset, g + offset, c));
            }
            offset += part.dim();
        }
        Self::from_structure(labels, entries)
    }

    /// Present the same algebra in a new basis. `columns[j]` holds the old
    /// coordinates of the `j`-th new basis vector; the matrix must be
    /// invertible. Structure constants and the form are transported exactly.
    pub fn rebase(
        self: &Arc<Self>,
        columns: &[Vec<Rat>],
        labels: Vec<String>,
    ) -> Result<Arc<Self>> {
        let dim = self.dim();
        if columns.len() != dim || labels.len() != dim {
            return Err(Error::InvalidDimension(
                "change of basis needs exactly dim new vectors and labels".into(),
            ));
        }
        if columns.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidDimension("new basis vector of wrong length".into()));
        }
        let mut p = Mat::zeros(dim, dim);
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                p.set(i, j, v.clone());
            }
        }
        let p_inv = inverse_exact(&p)
            .ok_or_else(|| Error::InvalidInput("new basis is linearly dependent".into()))?;
        let mut entries = Vec::new();
        for a in 0..dim {
            for b in a + 1..dim {
                // Old coordinates of [P e_a, P e_b].
                let mut w = vec![<Rat as Zero>::zero(); dim];
                for (i, xi) in columns[a].iter().enumerate() {
                    if Zero::is_zero(xi) {
                        continue;
                    }
                    for (j, yj) in columns[b].iter().enumerate() {
                        if Zero::is_zero(yj) {
                            continue;
                        }
                        for (g, c) in self.bracket_basis(i, j) {
                            w[*g] = w[*g].clone() + xi * yj * c;
                        }
                    }
                }
                let w_new = p_inv.mul_vec(&w);
                for (g, c) in w_new.into_iter().enumerate() {
                    if !Zero::is_zero(&c) {
                        entries.push((a, b, g, c));
                    }
                }
            }
        }
        Self::from_structure(labels, entries)
    }

    // -- JSON ---------------------------------------------------------------

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            dim: self.dim(),
            labels: self.labels.clone(),
            structure: self
                .structure_entries()
                .into_iter()
                .map(|(a, b, g, c)| (a, b, g, c.to_string()))
                .collect(),
            gram: Some(
                (0..self.dim())
                    .map(|r| (0..self.dim()).map(|c| self.gram.get(r, c).to_string()).collect())
                    .collect(),
            ),
        }
    }

    pub fn from_json(json: &AlgebraJson) -> Result<Arc<Self>> {
        if json.labels.len() != json.dim {
            return Err(Error::InvalidInput(format!(
                "dim field says {} but {} labels given",
                json.dim,
                json.labels.len()
            )));
        }
        let mut entries = Vec::with_capacity(json.structure.len());
        for (a, b, g, c) in &json.structure {
            let c = parse_rat(c).ok_or_else(|| {
                Error::InvalidInput(format!("bad rational {c:?} in structure entry"))
            })?;
            entries.push((*a, *b, *g, c));
        }
        let algebra = Self::from_structure(json.labels.clone(), entries)?;
        if let Some(gram) = &json.gram {
            // A supplied form must agree with the derived one — it is a
            // consequence of the structure constants, not free data.
            if gram.len() != json.dim {
                return Err(Error::InvalidInput("gram has wrong number of rows".into()));
            }
            for (r, row) in gram.iter().enumerate() {
                if row.len() != json.dim {
                    return Err(Error::InvalidInput("gram has wrong number of columns".into()));
                }
                for (c, v) in row.iter().enumerate() {
                    let v = parse_rat(v).ok_or_else(|| {
                        Error::InvalidInput(format!("bad rational {v:?} in gram"))
                    })?;
                    if &v != algebra.gram.get(r, c) {
                        return Err(Error::InvalidInput(format!(
                            "supplied gram[{r}][{c}] = {v} contradicts the value {} derived \
                             from the structure constants",
                            algebra.gram.get(r, c)
                        )));
                    }
                }
            }
        }
        Ok(algebra)
    }
}

fn so_label(n: usize, i: usize, j: usize) -> String {
    if n <= 9 {
        format!("e_{i}{j}")
    } else {
        format!("e_{i}_{j}")
    }
}

/// Serialized form of an algebra presentation.
///
/// `structure` entries are `(a, b, g, c)` with 0-based indices and rational
/// `c` as a string (`"1"`, `"-3/2"`); only the `a < b` orientation is listed.
/// `gram` is optional on input and is validated against the derived form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub labels: Vec<String>,
    pub structure: Vec<(usize, usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
}

/// A vector in a fixed algebra, with session-scalar coefficients.
#[derive(Clone, Debug)]
pub struct AlgebraVector<S> {
    algebra: Arc<LieAlgebraData>,
    coeffs: Vec<S>,
}

impl<S: Scalar> AlgebraVector<S> {
    pub fn new(algebra: Arc<LieAlgebraData>, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != algebra.dim() {
            return Err(Error::InvalidDimension(format!(
                "vector has {} coefficients but the algebra has dimension {}",
                coeffs.len(),
                algebra.dim()
            )));
        }
        Ok(AlgebraVector { algebra, coeffs })
    }

    pub fn zero(algebra: Arc<LieAlgebraData>) -> Self {
        let coeffs = vec![S::zero(); algebra.dim()];
        AlgebraVector { algebra, coeffs }
    }

    pub fn basis(algebra: Arc<LieAlgebraData>, i: usize) -> Self {
        let mut v = Self::zero(algebra);
        v.coeffs[i] = S::one();
        v
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraData> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [S] {
        &mut self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, v: S) {
        self.coeffs[i] = v;
    }

    pub fn add_to_coeff(&mut self, i: usize, delta: S) {
        let cur = self.coeffs[i].clone();
        self.coeffs[i] = cur + delta;
    }

    pub fn scale_coeff(&mut self, i: usize, factor: S) {
        let cur = self.coeffs[i].clone();
        self.coeffs[i] = cur * factor;
    }

    pub fn is_zero_with(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_with(tol))
    }

    /// Indices with (tolerance-aware) nonzero coefficients.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero_with(tol)).collect()
    }

    fn same_algebra(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra)
            || self.algebra.labels() == other.algebra.labels()
        {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!(
                "vectors live in different algebras ({} vs {} basis labels)",
                self.algebra.dim(),
                other.algebra.dim()
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.clone() + y.clone())
            .collect();
        Ok(AlgebraVector { algebra: self.algebra.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.clone() - y.clone())
            .collect();
        Ok(AlgebraVector { algebra: self.algebra.clone(), coeffs })
    }

    pub fn scale(&self, factor: &S) -> Self {
        let coeffs = self.coeffs.iter().map(|x| x.clone() * factor.clone()).collect();
        AlgebraVector { algebra: self.algebra.clone(), coeffs }
    }

    /// Lie bracket via the structure tensor.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_algebra(other)?;
        let mut out = vec![S::zero(); self.algebra.dim()];
        for (&(a, b), terms) in self.algebra.structure_iter() {
            if a >= b {
                continue; // use antisymmetry below instead of the mirrored slot
            }
            let xa_yb = self.coeffs[a].clone() * other.coeffs[b].clone();
            let xb_ya = self.coeffs[b].clone() * other.coeffs[a].clone();
            let w = xa_yb - xb_ya;
            if w.is_zero_with(0.0) {
                continue;
            }
            for (g, c) in terms {
                out[*g] = out[*g].clone() + w.clone() * S::from_rat(c);
            }
        }
        Ok(AlgebraVector { algebra: self.algebra.clone(), coeffs: out })
    }

    /// The bi-invariant pairing `B(x, y)`.
    pub fn b_pair(&self, other: &Self) -> Result<S> {
        self.same_algebra(other)?;
        let gram = self.algebra.gram();
        let mut acc = S::zero();
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero_with(0.0) {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if y.is_zero_with(0.0) {
                    continue;
                }
                let g = gram.get(i, j);
                if Zero::is_zero(g) {
                    continue;
                }
                acc = acc + x.clone() * y.clone() * S::from_rat(g);
            }
        }
        Ok(acc)
    }

    /// Render as `c1*label1 + c2*label2 + ...` (zero coefficients omitted).
    pub fn display(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero_with(0.0) {
                parts.push(format!("{}*{}", c, self.algebra.label(i)));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl AlgebraVector<Rat> {
    /// Parse a vector description against the algebra basis: either a sparse
    /// `label=value,...` list (unnamed coordinates stay zero) or a dense
    /// comma list with one rational per basis element, in basis order.
    pub fn parse(algebra: &Arc<LieAlgebraData>, s: &str) -> Result<Self> {
        let fail = |msg: String| Error::InvalidInput(msg);
        if s.contains('=') {
            let mut v = AlgebraVector::<Rat>::zero(algebra.clone());
            for part in s.split(',') {
                let (label, value) = part
                    .split_once('=')
                    .ok_or_else(|| fail(format!("expected `label=value`, got `{part}`")))?;
                let idx = algebra
                    .index_of_label(label.trim())
                    .ok_or_else(|| fail(format!("unknown basis label `{}`", label.trim())))?;
                let value = parse_rat(value.trim())
                    .ok_or_else(|| fail(format!("invalid rational `{}`", value.trim())))?;
                v.set_coeff(idx, value);
            }
            Ok(v)
        } else {
            let coeffs: Result<Vec<Rat>> = s
                .split(',')
                .map(|p| parse_rat(p.trim()).ok_or_else(|| fail(format!("invalid rational `{p}`"))))
                .collect();
            let coeffs = coeffs?;
            if coeffs.len() != algebra.dim() {
                return Err(fail(format!(
                    "dense vector needs {} components (one per basis element), got {}",
                    algebra.dim(),
                    coeffs.len()
                )));
            }
            AlgebraVector::new(algebra.clone(), coeffs)
        }
    }
}

impl<S: Scalar> fmt::Display for AlgebraVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}
