//! Geodesic-orbit analysis for generalized Wallach spaces.
//!
//! A generalized Wallach space is a compact homogeneous space `G/K` whose
//! reductive complement `m` splits into three pairwise orthogonal
//! `Ad(K)`-invariant summands `m = m1 ⊕ m2 ⊕ m3` with `[m_i, m_i] ⊆ k`.
//! Every `G`-invariant metric considered here is determined by three positive
//! scalars `(λ1, λ2, λ3)`, one per summand, measured against the bi-invariant
//! form `B = -Killing`.
//!
//! This crate answers, with exact rational arithmetic by default:
//!
//! * is a given tangent vector the initial velocity of a homogeneous geodesic
//!   (a *geodesic vector*), and if not, which directions witness the failure;
//! * given the `m`-part of a vector, does an isotropy completion exist that
//!   makes it geodesic, decided by an exact rank comparison;
//! * is `(G/K, λ)` a geodesic-orbit space, probed over structured and seeded
//!   random tangent directions, and how does the answer depend on `λ`;
//! * the complete closed-form solution families for the two small spaces
//!   where hand enumeration is tractable (`SU(2)` with trivial isotropy and
//!   the real Stiefel fibration `SO(4)/SO(2)`), cross-checked by damped
//!   Newton sampling in floating point;
//! * an independent dynamical check: equilibria of the Euler–Arnold flow on
//!   `SU(2)` coincide with geodesic vectors.
//!
//! The built-in catalog ([`catalog`]) covers the classical families used
//! throughout: `SO(k+l+m)` flag-type spaces, Stiefel fibrations, a product of
//! three round 2-spheres, and the quaternionic-style quotient
//! `SU(2)^4 / diag SU(2)`. Arbitrary spaces can be supplied as JSON.

pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod families;
pub mod flow;
pub mod geodesic;
pub mod linalg;
pub mod metric;
pub mod poly;
pub mod report;
pub mod sampler;
pub mod scalar;
pub mod space;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Central numeric tolerances for floating-point sessions.
///
/// Exact (rational) sessions ignore all of these: every comparison there is
/// literal equality. Float sessions use them as documented.
pub mod tol {
    /// A float quantity compared against zero counts as zero below this.
    pub const ZERO_ABS: f64 = 1e-9;
    /// Relative threshold on singular values when deciding numerical rank:
    /// `σ_i` counts toward the rank iff `σ_i > RANK_REL * σ_max`.
    pub const RANK_REL: f64 = 1e-9;
    /// Newton sampling declares convergence below this residual norm.
    pub const NEWTON_RESIDUAL: f64 = 1e-12;
    /// Newton samples closer than this (after sign/scale normalization)
    /// count as the same solution.
    pub const NEWTON_DEDUP: f64 = 1e-6;
    /// Trajectories of the Euler–Arnold flow must conserve kinetic energy to
    /// this relative drift for a run to be trusted.
    pub const ENERGY_DRIFT: f64 = 1e-8;
}

/// Default seed for every seeded random process (probing, sampling).
///
/// Override per call site, with `--seed`, or with the `GW_SEED` environment
/// variable; the fixed default makes reports byte-for-byte reproducible.
pub const DEFAULT_SEED: u64 = 0x5EED;
