//! Smooth compact oriented 4-manifolds as symbolic expressions, with exact
//! invariants, Seiberg-Witten alpha values and Einstein-metric verdicts.

pub mod alpha;
pub mod curvature;
pub mod invariants;
pub mod linalg;
pub mod manifold;
pub mod obstruction;
pub mod parser;
pub mod report;
pub mod scalar;

pub use alpha::{
    alpha_brute_oracle, alpha_squared, alpha_squared_numeric, alpha_squared_of, AlphaError,
    AlphaStatus, AlphaValue, NumericOptions, QuadraticFormSpace,
};
pub use curvature::{builtin_models, ModelGeometry};
pub use invariants::{invariants, ComplexData, InvariantError, InvariantRecord};
pub use manifold::{normalize, Atom, AtomKind, DomainError, Manifold, ManifoldExpr, SurfaceSpec};
pub use obstruction::{
    evaluate, freedman_class, homeomorphic, verdict, Conclusion, HomeoType, ObstructionError,
    Verdict,
};
pub use parser::{format, parse, parse_expr, ExprError, ParseError};
pub use scalar::{Real, Scalar, Tri};

/// Exact rational scalar used for every catalog value and inequality.
pub type Rational = num_rational::Ratio<i64>;

/// Positive subspace witness in double precision.
pub type GrassmannPointF64 = alpha::GrassmannPoint<f64>;

/// Curvature model with exact rational entries.
pub type ExactModel = ModelGeometry<Rational>;

/// Curvature model in double precision.
pub type FloatModel = ModelGeometry<f64>;
