//! Iterative solver for nonlinear two-point boundary value problems
//!
//! ```text
//! y^(m)(x) = f(x, y, y', ..., y^(m-1)),   x in [0, 1]
//! y^(i)(0) = a_i  (i < k),   y^(j)(1) = b_j  (j < l),   k + l = m
//! ```
//!
//! Each iterate is a polynomial in Bernstein form. The boundary conditions
//! fix the outer `k + l` coefficients; the inner ones come from a banded
//! Toeplitz system whose right-hand side is a set of moments of `f`
//! evaluated on the previous iterate, projected onto the dual Bernstein
//! basis.
//!
//! ```
//! use dualbvp::{BVProblem64, Expr, SolveOptions, solve};
//!
//! // y'' = -2, y(0) = y(1) = 0  ->  y = x (1 - x)
//! let problem = BVProblem64::new(vec![0.0], vec![0.0], Expr::parse("-2").unwrap()).unwrap();
//! let report = solve(&problem, &SolveOptions::new(4)).unwrap();
//! assert!((report.solution.eval(0.5).unwrap() - 0.25).abs() < 1e-14);
//! ```
//!
//! Numeric code is generic over [`Scalar`]. Everything that does not need
//! transcendental functions also runs in exact rational arithmetic
//! ([`num_rational::BigRational`]); quadrature and the solver loop need a
//! [`Real`] (`f32` or `f64`).

pub mod band;
pub mod bernstein;
pub mod dual;
pub mod error;
pub mod expr;
pub mod quadrature;
pub mod scalar;
pub mod solver;
pub mod suite;

pub use band::{assemble_matrix, assemble_rhs, BandedToeplitz};
pub use bernstein::{basis_value, binomial, falling_factorial, BernsteinPoly, DiffTable, End};
pub use dual::{
    bernstein_gram, bernstein_gram_entry, dual_coefficients, duality_defect, DualCoeffTable, DualProjection,
    SplitDualTable,
};
pub use error::{Error, Result};
pub use expr::{BinOp, EvalError, Expr, Func, ParseError};
pub use quadrature::{basis_row, gauss_rule, moment_integrals, MomentVector, QuadratureRule, RuleCache};
pub use scalar::{rational, rational_from_f64, Real, Scalar};
pub use solver::{
    boundary_defect, iterate, outer_coefficients, seed, solve, BVProblem, Projection, QuadratureSettings,
    RightHandSide, SolveOptions, SolveReport,
};
pub use suite::{error_curve, example, example_in, max_error, ExampleProblem, FixtureTable, ReferenceSolution};

pub use num_rational::BigRational;

pub type BernsteinPoly64 = BernsteinPoly<f64>;
pub type BernsteinPoly32 = BernsteinPoly<f32>;
pub type ExactBernsteinPoly = BernsteinPoly<BigRational>;
pub type DualCoeffTable64 = DualCoeffTable<f64>;
pub type ExactDualCoeffTable = DualCoeffTable<BigRational>;
pub type BandedToeplitz64 = BandedToeplitz<f64>;
pub type ExactBandedToeplitz = BandedToeplitz<BigRational>;
pub type QuadratureRule64 = QuadratureRule<f64>;
pub type BVProblem64 = BVProblem<f64>;
pub type BVProblem32 = BVProblem<f32>;
pub type SolveReport64 = SolveReport<f64>;
