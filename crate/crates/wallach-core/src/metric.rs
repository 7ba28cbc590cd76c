//! Invariant metrics `⟨x, y⟩ = λ1 B(x1, y1) + λ2 B(x2, y2) + λ3 B(x3, y3)`.
//!
//! A metric is three positive scalars, one per module. They are stored
//! exactly; finite decimal input (`1.5`) is converted to the rational it
//! denotes, and the caller decides whether the session runs exact or float.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{parse_rat, rat_to_f64, Rat};
use crate::space::SpaceDescriptor;
use crate::Result;

/// The diagonal metric data `(λ1, λ2, λ3)`, all positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantMetric {
    #[serde(with = "crate::report::rat_vec3_string")]
    lambda: [Rat; 3],
}

impl InvariantMetric {
    pub fn new(lambda: [Rat; 3]) -> Result<Self> {
        if lambda.iter().any(|l| !l.is_positive()) {
            return Err(Error::InvalidInput(format!(
                "metric scalars must be positive, got ({}, {}, {})",
                lambda[0], lambda[1], lambda[2]
            )));
        }
        Ok(InvariantMetric { lambda })
    }

    /// The bi-invariant (standard) metric `λ = (1, 1, 1)`.
    pub fn standard() -> Self {
        use crate::scalar::rat_i;
        InvariantMetric { lambda: [rat_i(1), rat_i(1), rat_i(1)] }
    }

    /// Parse `"λ1,λ2,λ3"`. Each entry may be an integer, a fraction `p/q`,
    /// or a finite decimal. The second return value is true when any entry
    /// used decimal notation — the conventional trigger for a float session.
    pub fn parse(s: &str) -> Result<(Self, bool)> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "metric must have exactly three components, got {s:?}"
            )));
        }
        let mut lambda = Vec::with_capacity(3);
        let mut saw_decimal = false;
        for p in &parts {
            saw_decimal |= p.contains('.') || p.to_ascii_lowercase().contains('e');
            let v = parse_rat(p).ok_or_else(|| {
                Error::InvalidInput(format!("bad metric component {p:?}"))
            })?;
            lambda.push(v);
        }
        let metric = Self::new([lambda[0].clone(), lambda[1].clone(), lambda[2].clone()])?;
        Ok((metric, saw_decimal))
    }

    /// `λ_i`, 0-based module index.
    pub fn lambda(&self, module: usize) -> &Rat {
        &self.lambda[module]
    }

    pub fn lambda_f64(&self, module: usize) -> f64 {
        rat_to_f64(&self.lambda[module])
    }

    /// All three metrics coincide — the geodesic-orbit-friendly case.
    pub fn is_standard(&self) -> bool {
        self.lambda[0] == self.lambda[1] && self.lambda[1] == self.lambda[2]
    }

    /// The metric scalar attached to a basis index of the descriptor
    /// (`None` on isotropy indices).
    pub fn lambda_for_index(&self, desc: &SpaceDescriptor, idx: usize) -> Option<&Rat> {
        desc.module_of(idx).map(|m| &self.lambda[m])
    }

    /// Canonical `"λ1,λ2,λ3"` rendering.
    pub fn display(&self) -> String {
        format!("{},{},{}", self.lambda[0], self.lambda[1], self.lambda[2])
    }
}

impl std::fmt::Display for InvariantMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display())
    }
}
