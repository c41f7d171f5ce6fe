//! The invariant alpha squared: catalog rules, curvature bounds derived from
//! it, and a direct numerical evaluation of its inf-max definition.

pub mod chart;
pub mod form;
pub mod numeric;
pub mod oracle;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::{atom_invariants, invariants, InvariantError, InvariantRecord};
use crate::manifold::Manifold;
use crate::scalar::Tri;
use crate::Rational;

pub use chart::{Frame, GrassmannPoint};
pub use form::QuadraticFormSpace;
pub use numeric::{alpha_squared_numeric, NumericOptions, NumericResult};
pub use oracle::{alpha_brute_oracle, OracleResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlphaError {
    #[error("format error: {0}")]
    Format(String),
    #[error("intersection form is degenerate")]
    DegenerateForm,
    #[error("intersection form is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("scale error: {0}")]
    Scale(String),
    #[error("bound unavailable: alpha squared is {0}")]
    BoundUnavailable(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

/// What is known about alpha squared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaStatus {
    Exact(Rational),
    LowerBound(Rational),
    Unknown,
    /// `b+ < 2`, where the invariant is not defined.
    Undefined,
}

impl AlphaStatus {
    pub fn name(&self) -> &'static str {
        match self {
            AlphaStatus::Exact(_) => "exact",
            AlphaStatus::LowerBound(_) => "lower_bound",
            AlphaStatus::Unknown => "unknown",
            AlphaStatus::Undefined => "undefined",
        }
    }

    /// The rational carried by `Exact` and `LowerBound`.
    pub fn value(&self) -> Option<Rational> {
        match self {
            AlphaStatus::Exact(q) | AlphaStatus::LowerBound(q) => Some(*q),
            _ => None,
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            AlphaStatus::Exact(q) => Some(*q),
            _ => None,
        }
    }
}

impl fmt::Display for AlphaStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaStatus::Exact(q) => write!(f, "Exact({q})"),
            AlphaStatus::LowerBound(q) => write!(f, "LowerBound({q})"),
            AlphaStatus::Unknown => f.write_str("Unknown"),
            AlphaStatus::Undefined => f.write_str("Undefined"),
        }
    }
}

/// The catalog rule that decided an [`AlphaValue`], in precedence order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    SmallBPlus,
    ComplexSurface,
    TripleSum,
    PositiveScalarCurvature,
    ScalarFlat,
    NoRule,
}

impl AlphaRule {
    pub fn label(self) -> &'static str {
        match self {
            AlphaRule::SmallBPlus => "R0",
            AlphaRule::ComplexSurface => "R1",
            AlphaRule::TripleSum => "R2",
            AlphaRule::PositiveScalarCurvature => "R3",
            AlphaRule::ScalarFlat => "R4",
            AlphaRule::NoRule => "R5",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaValue {
    pub status: AlphaStatus,
    pub rule: AlphaRule,
    pub trace: Vec<String>,
}

impl AlphaValue {
    fn new(status: AlphaStatus, rule: AlphaRule, line: String) -> Self {
        AlphaValue {
            status,
            rule,
            trace: vec![format!("{}: {line}", rule.label())],
        }
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Alpha squared of a canonical expression with precomputed invariants.
pub fn alpha_squared(m: &Manifold, record: &InvariantRecord) -> AlphaValue {
    use AlphaRule::*;
    if record.b_plus < 2 {
        return AlphaValue::new(
            AlphaStatus::Undefined,
            SmallBPlus,
            format!("b+ = {} < 2, alpha is undefined", record.b_plus),
        );
    }
    if let Some(c) = record.complex.as_ref().filter(|c| c.is_complex) {
        return match c.c1sq_minimal_model {
            Some(q) => AlphaValue::new(
                AlphaStatus::Exact(int(q)),
                ComplexSurface,
                format!(
                    "complex surface with b+ = {} > 1, alpha^2 = c1^2(minimal model) = {q}",
                    record.b_plus
                ),
            ),
            None => {
                // Blowing down raises c1^2, and a non-minimal surface needs at least one.
                let q = (c.c1sq + 1).max(0);
                AlphaValue::new(
                    AlphaStatus::LowerBound(int(q)),
                    ComplexSurface,
                    format!(
                        "complex surface with b+ = {} > 1 and unknown minimal model, alpha^2 >= {q}",
                        record.b_plus
                    ),
                )
            }
        };
    }
    if let Some(total) = triple_sum(m) {
        return AlphaValue::new(
            AlphaStatus::Exact(int(total)),
            TripleSum,
            format!("sum of three minimal complex surfaces with b+ = 3 mod 4, alpha^2 = {total}"),
        );
    }
    if record.psc.is_yes() {
        return AlphaValue::new(
            AlphaStatus::Exact(Rational::zero()),
            PositiveScalarCurvature,
            "positive scalar curvature excludes monopole classes, alpha^2 = 0".into(),
        );
    }
    if record.scalar_flat.is_yes() {
        return AlphaValue::new(
            AlphaStatus::Exact(Rational::zero()),
            ScalarFlat,
            "a scalar-flat metric forces alpha^2 = 0".into(),
        );
    }
    AlphaValue::new(
        AlphaStatus::Unknown,
        NoRule,
        "no catalog rule applies".into(),
    )
}

/// Sum of c1^2 when `m` is exactly three standard minimal simply connected
/// complex atoms, each with `b+ = 3 mod 4`.
fn triple_sum(m: &Manifold) -> Option<i64> {
    if m.summand_count() != 3 {
        return None;
    }
    let mut total = 0;
    for atom in m.summands() {
        if atom.is_reversed() {
            return None;
        }
        let r = atom_invariants(atom).ok()?;
        let c = r.complex.as_ref()?;
        if !c.minimal || r.simply_connected != Tri::Yes || r.b_plus % 4 != 3 {
            return None;
        }
        total += c.c1sq;
    }
    Some(total)
}

/// Convenience wrapper computing the invariants first.
pub fn alpha_squared_of(m: &Manifold) -> Result<AlphaValue, AlphaError> {
    let record = invariants(m)?;
    Ok(alpha_squared(m, &record))
}

fn bound_source(alpha: &AlphaValue) -> Result<Rational, AlphaError> {
    alpha
        .status
        .value()
        .ok_or_else(|| AlphaError::BoundUnavailable(alpha.status.name().into()))
}

/// Coefficient `c` of `pi^2` in `int s^2 dmu >= c pi^2`, valid for every metric.
pub fn scalar_l2_lower_bound(alpha: &AlphaValue) -> Result<Rational, AlphaError> {
    Ok(int(32) * bound_source(alpha)?)
}

/// Constants of the mixed scalar/self-dual Weyl estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MixedBounds {
    /// Square of the right side of `|s| + sqrt(6) |W+| >= 6 sqrt(2) pi alpha`,
    /// as a coefficient of `pi^2`.
    pub linear_sq: Rational,
    /// Right side of `(1/4 pi^2) int (s^2/24 + 2|W+|^2) >= (2/3) alpha^2`.
    pub quadratic: Rational,
}

pub fn mixed_bound_constants(alpha: &AlphaValue) -> Result<MixedBounds, AlphaError> {
    let a = bound_source(alpha)?;
    Ok(MixedBounds {
        linear_sq: int(72) * a,
        quadratic: Rational::new(2, 3) * a,
    })
}
