//! Small dense matrices with exact and floating-point decision procedures.
//!
//! Everything here operates on matrices of at most a few hundred entries, so
//! the implementations favor exactness and determinism over asymptotics:
//!
//! * rank over the rationals via fraction-free Bareiss elimination on an
//!   integer lift (denominators cleared row-wise), which keeps intermediate
//!   entries as minors of the lift and avoids rational blow-up;
//! * solving over the rationals via Gauss–Jordan with the deterministic
//!   "first nonzero" pivot rule, returning the particular solution with all
//!   free variables set to zero;
//! * rank and minimum-norm solving over `f64` via SVD with a relative
//!   singular-value threshold.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{rat_to_f64, Rat, Scalar};
use crate::tol;

/// Dense row-major matrix over a session scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// New matrix with `extra` appended as a final column.
    pub fn with_column(&self, extra: &[S]) -> Mat<S> {
        assert_eq!(extra.len(), self.rows, "column length mismatch");
        let mut out = Mat::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            out.set(r, self.cols, extra[r].clone());
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for c in 0..self.cols {
                    acc = acc + self.get(r, c).clone() * v[c].clone();
                }
                acc
            })
            .collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl Mat<Rat> {
    pub fn to_f64(&self) -> Mat<f64> {
        self.map(rat_to_f64)
    }
}

// ---------------------------------------------------------------------------
// Exact rational procedures
// ---------------------------------------------------------------------------

/// Exact rank via fraction-free Bareiss elimination.
///
/// Rows are first scaled to integers (multiplying a row by a positive
/// constant preserves rank). Bareiss keeps every intermediate entry an exact
/// minor of that integer matrix, so the division step is always exact.
pub fn rank_exact(m: &Mat<Rat>) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.nrows()).map(|r| integer_row(m.row(r))).collect();
    let rows = m.nrows();
    let cols = m.ncols();
    let mut rank = 0usize;
    let mut prev_pivot = BigInt::one();
    for col in 0..cols {
        // Deterministic pivot: first row below `rank` with a nonzero entry.
        let Some(pr) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                let (q, rem) = num.div_rem(&prev_pivot);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[r][c] = q;
            }
            a[r][col] = BigInt::zero();
        }
        prev_pivot = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn integer_row(row: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        if !Zero::is_zero(x) {
            lcm = lcm.lcm(x.denom());
        }
    }
    row.iter()
        .map(|x| {
            let scaled = x * Rat::from_integer(lcm.clone());
            debug_assert!(scaled.denom().is_one());
            scaled.numer().clone()
        })
        .collect()
}

/// Exact solve of `A x = b`.
///
/// Returns `None` when the system is inconsistent; otherwise the particular
/// solution whose free variables are all zero (deterministic: Gauss–Jordan,
/// first-nonzero pivoting, columns in natural order).
pub fn solve_exact(a: &Mat<Rat>, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), a.nrows(), "rhs length mismatch");
    let rows = a.nrows();
    let cols = a.ncols();
    let mut m: Vec<Vec<Rat>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rat> = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !Zero::is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = <Rat as One>::one() / m[rank][col].clone();
        for c in col..=cols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..rows {
            if r != rank && !Zero::is_zero(&m[r][col]) {
                let factor = m[r][col].clone();
                for c in col..=cols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // Inconsistent iff some zero row has a nonzero rhs.
    for r in rank..rows {
        if !Zero::is_zero(&m[r][cols]) {
            return None;
        }
    }
    let mut x = vec![<Rat as Zero>::zero(); cols];
    for (i, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = m[i][cols].clone();
    }
    Some(x)
}

/// Exact inverse of a square rational matrix, if it is invertible.
pub fn inverse_exact(m: &Mat<Rat>) -> Option<Mat<Rat>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "inverse needs a square matrix");
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rat> = m.row(r).to_vec();
            for j in 0..n {
                row.push(if j == r { <Rat as One>::one() } else { <Rat as Zero>::zero() });
            }
            row
        })
        .collect();
    for col in 0..n {
        let pr = (col..n).find(|&r| !Zero::is_zero(&a[r][col]))?;
        a.swap(col, pr);
        let inv = <Rat as One>::one() / a[col][col].clone();
        for c in 0..2 * n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r != col && !Zero::is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &factor * &a[col][c];
                    a[r][c] = &a[r][c] - &delta;
                }
            }
        }
    }
    let mut out = Mat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, a[r][n + c].clone());
        }
    }
    Some(out)
}

/// Positive definiteness of an exact symmetric matrix, by Sylvester's
/// criterion: all leading principal minors strictly positive. The minors are
/// read off a fraction-free elimination without row exchanges (a zero pivot
/// means a zero leading minor, hence not positive definite).
pub fn is_positive_definite_exact(m: &Mat<Rat>) -> bool {
    let n = m.nrows();
    if n != m.ncols() {
        return false;
    }
    let mut a: Vec<Vec<Rat>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut prev = <Rat as One>::one();
    for k in 0..n {
        // After k elimination steps a[k][k] is det of the (k+1)-st leading
        // minor divided by det of the k-th; positivity of all minors is
        // equivalent to positivity of every pivot.
        if !a[k][k].is_positive() {
            return false;
        }
        let pivot = a[k][k].clone();
        for r in k + 1..n {
            for c in k + 1..n {
                let num = &a[k][k] * &a[r][c] - &a[r][k] * &a[k][c];
                a[r][c] = num / &prev;
            }
            a[r][k] = <Rat as Zero>::zero();
        }
        prev = pivot;
    }
    true
}

// ---------------------------------------------------------------------------
// Floating-point procedures (SVD-backed)
// ---------------------------------------------------------------------------

fn to_na(m: &Mat<f64>) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| *m.get(r, c))
}

/// Numerical rank: number of singular values above `RANK_REL * σ_max`.
pub fn rank_f64(m: &Mat<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = to_na(m).svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax <= 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > tol::RANK_REL * smax).count()
}

/// Minimum-norm least-squares solution of `A x = b` via SVD, together with
/// the residual norm `‖Ax − b‖₂`. The caller decides consistency (typically
/// by comparing ranks of `A` and `[A | b]`).
pub fn solve_min_norm_f64(a: &Mat<f64>, b: &[f64]) -> (Vec<f64>, f64) {
    assert_eq!(b.len(), a.nrows(), "rhs length mismatch");
    if a.ncols() == 0 {
        let res = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        return (Vec::new(), res);
    }
    if a.nrows() == 0 {
        return (vec![0.0; a.ncols()], 0.0);
    }
    let na = to_na(a);
    let nb = nalgebra::DVector::from_column_slice(b);
    let svd = na.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let eps = if smax > 0.0 { tol::RANK_REL * smax } else { f64::EPSILON };
    let x = svd.solve(&nb, eps).expect("SVD solve with U/V computed");
    let residual = (&na * &x - &nb).norm();
    (x.iter().cloned().collect(), residual)
}
