//! Number types the geometric kernels are generic over.
//!
//! Every computation in this crate runs in one of two sessions: *exact*
//! (arbitrary-precision rationals, every comparison literal) or *float*
//! (`f64`, comparisons against the central tolerances). The [`Scalar`] trait
//! is the small common surface the kernels need — ring arithmetic, injection
//! of rationals, and a zero test.
//!
//! A third implementation, [`Quad`], adjoins a single square root `√d` to the
//! rationals. It exists because some closed-form solution families are cut
//! out by equations like `c² = r` with `r` a positive non-square rational;
//! exact sample points of such families live in `Q(√r)`, not `Q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used throughout exact sessions.
pub type Rat = BigRational;

/// Build a rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Build a rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse `"p"`, `"p/q"`, or a finite decimal like `"1.5"` into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        // Finite decimals are exact rationals: a.b = (a*10^k + b) / 10^k.
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut num = int * &scale;
        if negative {
            num -= &frac;
        } else {
            num += &frac;
        }
        return Some(Rat::new(num, scale));
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

/// Exact rational to nearest `f64`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of approximations for out-of-range parts.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// Common surface for session scalars: commutative ring ops, rational
/// injection, and a (tolerance-aware) zero test.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// Inject an exact rational (structure constants, metric scalars).
    fn from_rat(r: &Rat) -> Self;
    /// Zero test. Exact types ignore `tol`; floats compare `|x| <= tol`.
    fn is_zero_with(&self, tol: f64) -> bool;
    /// Approximate magnitude, for diagnostics and witness ranking.
    fn approx(&self) -> f64;
}

impl Scalar for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_zero_with(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn approx(&self) -> f64 {
        rat_to_f64(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }
    fn is_zero_with(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
    fn approx(&self) -> f64 {
        *self
    }
}

/// Element `a + b·√d` of a real quadratic extension of the rationals.
///
/// The radicand is carried per value. Purely rational values use `d = 0`
/// and unify with any radicand on contact; combining two genuinely
/// irrational values with different radicands is a programming error and
/// panics. Radicands are always non-square (enforced by [`Quad::sqrt`]),
/// which makes the zero test `a = b = 0` exact.
#[derive(Clone, Debug)]
pub struct Quad {
    a: Rat,
    b: Rat,
    d: Rat,
}

impl Quad {
    /// The rational `r`, embedded.
    pub fn from_rational(r: Rat) -> Self {
        Quad { a: r, b: <Rat as Zero>::zero(), d: <Rat as Zero>::zero() }
    }

    /// Exact square root of a nonnegative rational: rational if `r` is a
    /// perfect square, otherwise the element `√r` of `Q(√r)`.
    pub fn sqrt(r: &Rat) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if let Some(root) = exact_sqrt(r) {
            return Some(Quad::from_rational(root));
        }
        Some(Quad { a: <Rat as Zero>::zero(), b: <Rat as One>::one(), d: r.clone() })
    }

    /// Rational part `a` of `a + b√d`.
    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    /// Radical coefficient `b` of `a + b√d`.
    pub fn radical_part(&self) -> &Rat {
        &self.b
    }

    /// True when the value is plain rational (no radical contribution).
    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    /// Multiplicative inverse; `None` for zero. Uses the conjugate:
    /// `(a + b√d)⁻¹ = (a − b√d) / (a² − b²d)`, whose denominator is nonzero
    /// because `√d` is irrational whenever `b ≠ 0`.
    pub fn inverse(&self) -> Option<Self> {
        if Scalar::is_zero_with(self, 0.0) {
            return None;
        }
        let norm = self.a.clone() * self.a.clone() - self.b.clone() * self.b.clone() * self.d.clone();
        debug_assert!(!Zero::is_zero(&norm));
        let inv = <Rat as One>::one() / norm;
        Some(Quad {
            a: self.a.clone() * inv.clone(),
            b: -(self.b.clone() * inv),
            d: self.d.clone(),
        })
    }

    fn unified_radicand(&self, other: &Self) -> Rat {
        match (Zero::is_zero(&self.b), Zero::is_zero(&other.b)) {
            (true, _) => other.d.clone(),
            (false, true) => self.d.clone(),
            (false, false) => {
                assert_eq!(
                    self.d, other.d,
                    "cannot combine quadratic extension elements with different radicands"
                );
                self.d.clone()
            }
        }
    }
}

impl PartialEq for Quad {
    fn eq(&self, other: &Self) -> bool {
        // With non-square radicands, a + b√d = a' + b'√d' iff the rational
        // and radical coordinates agree (and the radicands agree when both
        // radical parts are nonzero).
        if Zero::is_zero(&self.b) && Zero::is_zero(&other.b) {
            return self.a == other.a;
        }
        self.a == other.a && self.b == other.b && self.unified_radicand(other) == self.d
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.b) {
            write!(f, "{}", self.a)
        } else if Zero::is_zero(&self.a) {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Add for Quad {
    type Output = Quad;
    fn add(self, rhs: Quad) -> Quad {
        let d = self.unified_radicand(&rhs);
        Quad { a: self.a + rhs.a, b: self.b + rhs.b, d }
    }
}

impl Sub for Quad {
    type Output = Quad;
    fn sub(self, rhs: Quad) -> Quad {
        self + (-rhs)
    }
}

impl Mul for Quad {
    type Output = Quad;
    fn mul(self, rhs: Quad) -> Quad {
        let d = self.unified_radicand(&rhs);
        // (a + b√d)(a' + b'√d) = aa' + bb'd + (ab' + a'b)√d
        let a = self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.b.clone() * d.clone();
        let b = self.a * rhs.b + rhs.a * self.b;
        Quad { a, b, d }
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Scalar for Quad {
    fn zero() -> Self {
        Quad::from_rational(<Rat as Zero>::zero())
    }
    fn one() -> Self {
        Quad::from_rational(<Rat as One>::one())
    }
    fn from_rat(r: &Rat) -> Self {
        Quad::from_rational(r.clone())
    }
    fn is_zero_with(&self, _tol: f64) -> bool {
        // Sound because the radicand is never a perfect square: √d is
        // irrational, so a + b√d = 0 forces a = b = 0.
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn approx(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * rat_to_f64(&self.d).sqrt()
    }
}

/// Exact square root of a nonnegative rational if it is a perfect square.
fn exact_sqrt(r: &Rat) -> Option<Rat> {
    if Zero::is_zero(r) {
        return Some(<Rat as Zero>::zero());
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}
