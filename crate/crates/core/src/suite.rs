//! Five benchmark problems with known solutions, and the error metrics
//! used to score approximate solutions against them.
//!
//! | id | equation                      | conditions                          |
//! |----|-------------------------------|-------------------------------------|
//! | 1  | `y'' = (y')^2 + 1`            | `y(0) = y(1) = 0`                   |
//! | 2  | `y'''' = -2 y'' - y`          | `y(0) = 3, y'(0) = 3, y(1) = y'(1) = 0` |
//! | 3  | `y'''' = (y''')^2 / y''`      | `y(0) = 2, y'(0) = -1, y''(0) = 3, y'''(0) = 1` |
//! | 4  | `y''' = 4 x y' + 2 y`         | `y(0) = 1, y'(0) = 0, y(1) = 0`     |
//! | 5  | `y'' = -(x + 2)^2 y`          | `y(0), y'(0)` from Bessel functions |
//!
//! Problems 4 and 5 have Airy and Bessel function solutions. Their values on
//! the grid `{0, 1/200, ..., 1}` ship as fixture tables generated by
//! `fixtures/generate.py` (mpmath, 40 digits); problem 5 also takes its
//! boundary values from the fixture header.

use std::sync::Arc;

use crate::bernstein::BernsteinPoly;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::{from_f64, Real};
use crate::solver::BVProblem;

/// Native grid of the fixture tables.
pub const FIXTURE_GRID: usize = 200;

const EXAMPLE4_FIXTURE: &str = include_str!("../fixtures/example4.txt");
const EXAMPLE5_FIXTURE: &str = include_str!("../fixtures/example5.txt");

const EXAMPLE2_EXACT: &str =
    "1.5*sec(1)^2*((4 - 3*x)*sin(x) - x*sin(2 - x) - (3*x - 1)*cos(x) + (x + 1)*cos(2 - x))";
const EXAMPLE3_EXACT: &str = "-25 - 10*x + 27*exp(x/3)";

/// Reference values sampled on `{0, 1/M, ..., 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureTable {
    header: Vec<String>,
    left: Vec<f64>,
    right: Vec<f64>,
    values: Vec<f64>,
}

impl FixtureTable {
    /// Parses `# ...` header lines followed by `FIXTURE_GRID + 1` lines `x y`.
    ///
    /// Header lines `left: a0, a1, ...` and `right: b0, ...` carry the
    /// boundary values the table was generated for.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut values = Vec::with_capacity(FIXTURE_GRID + 1);
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let h = h.trim();
                if let Some(list) = h.strip_prefix("left:") {
                    left = parse_list(list, lineno)?;
                } else if let Some(list) = h.strip_prefix("right:") {
                    right = parse_list(list, lineno)?;
                }
                header.push(h.to_string());
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(xs), Some(ys), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Fixture(format!("line {}: expected 'x y'", lineno + 1)));
            };
            let x: f64 = parse_num(xs, lineno)?;
            let y: f64 = parse_num(ys, lineno)?;
            let i = values.len();
            let expected = i as f64 / FIXTURE_GRID as f64;
            if (x - expected).abs() > 1e-9 {
                return Err(Error::Fixture(format!(
                    "line {}: x = {x} is not grid point {i}/{FIXTURE_GRID}",
                    lineno + 1
                )));
            }
            values.push(y);
        }
        if values.len() != FIXTURE_GRID + 1 {
            return Err(Error::Fixture(format!(
                "expected {} rows, found {}",
                FIXTURE_GRID + 1,
                values.len()
            )));
        }
        Ok(Self {
            header,
            left,
            right,
            values,
        })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn left(&self) -> &[f64] {
        &self.left
    }

    pub fn right(&self) -> &[f64] {
        &self.right
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn parse_num(s: &str, lineno: usize) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Fixture(format!("line {}: bad number '{s}'", lineno + 1)))
}

fn parse_list(s: &str, lineno: usize) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_num(t, lineno))
        .collect()
}

#[derive(Clone)]
pub enum ReferenceSolution {
    /// Closed form evaluated in `f64`.
    Closed(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Fixture(FixtureTable),
}

impl std::fmt::Debug for ReferenceSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReferenceSolution::Closed(_) => f.write_str("Closed(..)"),
            ReferenceSolution::Fixture(t) => f.debug_tuple("Fixture").field(&t.header).finish(),
        }
    }
}

impl ReferenceSolution {
    pub fn from_expr(e: Expr) -> Result<Self> {
        if e.max_derivative().is_some() {
            return Err(Error::argument("an exact solution may only depend on x"));
        }
        Ok(ReferenceSolution::Closed(Arc::new(move |x| {
            e.evaluate(x, &[]).unwrap_or(f64::NAN)
        })))
    }

    /// Values on `{0, 1/M, ..., 1}`.
    pub fn on_grid(&self, grid: usize) -> Result<Vec<f64>> {
        if grid == 0 {
            return Err(Error::argument("grid size M must be at least 1"));
        }
        match self {
            ReferenceSolution::Closed(f) => Ok((0..=grid).map(|i| f(grid_point(i, grid))).collect()),
            ReferenceSolution::Fixture(t) => {
                if FIXTURE_GRID % grid != 0 {
                    return Err(Error::argument(format!(
                        "fixture references are tabulated on M = {FIXTURE_GRID}; M = {grid} is not a sub-grid"
                    )));
                }
                let stride = FIXTURE_GRID / grid;
                Ok(t.values.iter().step_by(stride).copied().collect())
            }
        }
    }
}

pub fn grid_point(i: usize, grid: usize) -> f64 {
    i as f64 / grid as f64
}

#[derive(Clone)]
pub struct ExampleProblem<T> {
    pub id: usize,
    pub problem: BVProblem<T>,
    pub reference: ReferenceSolution,
    pub citation: &'static str,
}

impl<T: crate::scalar::Scalar> std::fmt::Debug for ExampleProblem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExampleProblem")
            .field("id", &self.id)
            .field("problem", &self.problem)
            .field("reference", &self.reference)
            .finish()
    }
}

/// Benchmark problem `id` (1..=5) in `f64`.
pub fn example(id: usize) -> Result<ExampleProblem<f64>> {
    example_in::<f64>(id)
}

/// Benchmark problem `id` with boundary data converted to `T`.
pub fn example_in<T: Real>(id: usize) -> Result<ExampleProblem<T>> {
    let conv = |v: &[f64]| v.iter().map(|&x| from_f64::<T>(x)).collect::<Vec<T>>();
    let (left, right, rhs, reference, citation): (Vec<f64>, Vec<f64>, &str, ReferenceSolution, &'static str) =
        match id {
            1 => (
                vec![0.0],
                vec![0.0],
                "y1^2 + 1",
                ReferenceSolution::Closed(Arc::new(example1_exact)),
                "nonlinear second order; y = -ln(cos(x - 1/2) / cos(1/2))",
            ),
            2 => (
                vec![3.0, 3.0],
                vec![0.0, 0.0],
                "-2*y2 - y0",
                ReferenceSolution::from_expr(Expr::parse(EXAMPLE2_EXACT)?)?,
                "linear fourth order; trigonometric closed form",
            ),
            3 => (
                vec![2.0, -1.0, 3.0, 1.0],
                vec![],
                "y3^2 / y2",
                ReferenceSolution::from_expr(Expr::parse(EXAMPLE3_EXACT)?)?,
                "nonlinear fourth order; y = -25 - 10x + 27 exp(x/3)",
            ),
            4 => {
                let t = FixtureTable::parse(EXAMPLE4_FIXTURE)?;
                (
                    t.left.clone(),
                    t.right.clone(),
                    "4*x*y1 + 2*y0",
                    ReferenceSolution::Fixture(t),
                    "linear third order; squares and products of Airy functions",
                )
            }
            5 => {
                let t = FixtureTable::parse(EXAMPLE5_FIXTURE)?;
                (
                    t.left.clone(),
                    t.right.clone(),
                    "-(x + 2)^2*y0",
                    ReferenceSolution::Fixture(t),
                    "linear second order; Bessel functions of order 1/4",
                )
            }
            _ => return Err(Error::argument(format!("unknown example {id}; expected 1..=5"))),
        };
    let problem = BVProblem::new(conv(&left), conv(&right), Expr::parse(rhs)?)?;
    Ok(ExampleProblem {
        id,
        problem,
        reference,
        citation,
    })
}

fn example1_exact(x: f64) -> f64 {
    0.5f64.cos().ln() - (x - 0.5).cos().ln()
}

/// `(x_i, |y(x_i) - w(x_i)|)` on `{0, 1/M, ..., 1}`.
pub fn error_curve<T: Real>(
    w: &BernsteinPoly<T>,
    reference: &ReferenceSolution,
    grid: usize,
) -> Result<Vec<(f64, f64)>> {
    let exact = reference.on_grid(grid)?;
    exact
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let x = grid_point(i, grid);
            let wx = w.eval(from_f64::<T>(x))?.to_f64_lossy();
            Ok((x, (y - wx).abs()))
        })
        .collect()
}

pub fn max_error(curve: &[(f64, f64)]) -> Result<f64> {
    if curve.is_empty() {
        return Err(Error::argument("empty error curve"));
    }
    Ok(curve.iter().map(|&(_, e)| e).fold(0.0, f64::max))
}
