//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Solution families are cut out by low-degree polynomial equations in the
//! tangent coordinates (with the metric scalars already substituted, so the
//! coefficients are plain rationals). This module provides just enough
//! polynomial arithmetic to state those equations, evaluate them exactly on
//! candidate points in any scalar type, differentiate them for projection
//! steps, and render them readably.
//!
//! Variables are identified by index; names live outside the polynomial and
//! are supplied at render time. Monomials are multisets of variable indices
//! (`x²y` is `[x, x, y]`), kept sorted; terms are kept in a deterministic
//! order (by total degree, then lexicographic monomial) so that rendering and
//! serialization are stable.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::scalar::{Rat, Scalar};

/// A polynomial with rational coefficients in indexed variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    /// `(coefficient, monomial)`, monomials sorted, terms in normal order,
    /// no zero coefficients.
    terms: Vec<(Rat, Vec<usize>)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly { terms: vec![(c, Vec::new())] };
        p.normalize();
        p
    }

    pub fn var(i: usize) -> Self {
        Poly { terms: vec![(Rat::from_integer(1.into()), vec![i])] }
    }

    /// `c · x_i`
    pub fn term(c: Rat, vars: &[usize]) -> Self {
        let mut m = vars.to_vec();
        m.sort_unstable();
        let mut p = Poly { terms: vec![(c, m)] };
        p.normalize();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Rat, Vec<usize>)] {
        &self.terms
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut p = Poly {
            terms: self
                .terms
                .iter()
                .map(|(q, m)| (q.clone() * c.clone(), m.clone()))
                .collect(),
        };
        p.normalize();
        p
    }

    /// Total degree, or 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, m)| m.len()).max().unwrap_or(0)
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.iter().flat_map(|(_, m)| m.iter().copied()).max()
    }

    /// Exact evaluation at `vals` (indexed by variable).
    pub fn eval<S: Scalar>(&self, vals: &[S]) -> S {
        let mut acc = S::zero();
        for (c, m) in &self.terms {
            let mut t = S::from_rat(c);
            for &v in m {
                t = t * vals[v].clone();
            }
            acc = acc + t;
        }
        acc
    }

    /// Partial derivative with respect to variable `v`.
    pub fn partial(&self, v: usize) -> Poly {
        let mut terms = Vec::new();
        for (c, m) in &self.terms {
            let mult = m.iter().filter(|&&x| x == v).count();
            if mult == 0 {
                continue;
            }
            let mut reduced = m.clone();
            let pos = reduced.iter().position(|&x| x == v).unwrap();
            reduced.remove(pos);
            terms.push((c.clone() * Rat::from_integer((mult as i64).into()), reduced));
        }
        let mut p = Poly { terms };
        p.normalize();
        p
    }

    /// Render with variable names; powers collapse to `^k`.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (c, m)) in self.terms.iter().enumerate() {
            let negative = c < &crate::scalar::rat_i(0);
            let abs = if negative { -c.clone() } else { c.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let vars = render_monomial(m, names);
            if m.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs == Rat::from_integer(1.into()) {
                out.push_str(&vars);
            } else {
                out.push_str(&format!("{abs}·{vars}"));
            }
        }
        out
    }

    fn normalize(&mut self) {
        for (_, m) in &mut self.terms {
            m.sort_unstable();
        }
        self.terms
            .sort_by(|(_, a), (_, b)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut merged: Vec<(Rat, Vec<usize>)> = Vec::with_capacity(self.terms.len());
        for (c, m) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((lc, lm)) if *lm == m => *lc = lc.clone() + c,
                _ => merged.push((c, m)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        self.terms = merged;
    }
}

fn render_monomial(m: &[usize], names: &[&str]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < m.len() {
        let v = m[i];
        let mut k = 1;
        while i + k < m.len() && m[i + k] == v {
            k += 1;
        }
        let name = names.get(v).copied().unwrap_or("?");
        if k == 1 {
            parts.push(name.to_string());
        } else {
            parts.push(format!("{name}^{k}"));
        }
        i += k;
    }
    parts.join("·")
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let mut terms = self.terms;
        terms.extend(rhs.terms);
        let mut p = Poly { terms };
        p.normalize();
        p
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(c, m)| (-c, m)).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (c1, m1) in &self.terms {
            for (c2, m2) in &rhs.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                terms.push((c1.clone() * c2.clone(), m));
            }
        }
        let mut p = Poly { terms };
        p.normalize();
        p
    }
}
