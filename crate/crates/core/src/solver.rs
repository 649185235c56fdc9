//! The iterative least-squares solver.
//!
//! Starting from the degree `m - 1` polynomial fixed by the boundary data,
//! every step raises the degree by one. The outer coefficients of `w_n` come
//! straight from the boundary values; the inner ones make `w_n^(m)` the best
//! L2 approximation of `f(x, w_{n-1}, ..., w_{n-1}^(m-1))` in degree
//! `n - m`, which reduces to a banded Toeplitz system.

use std::fmt;
use std::sync::Arc;

use crate::band::{assemble_matrix, assemble_rhs, solve as solve_band};
use crate::bernstein::{binomial, falling_factorial, BernsteinPoly, End};
use crate::dual::{dual_coefficients, DualProjection, SplitDualTable};
use crate::error::{Error, Result};
use crate::expr::{EvalError, Expr};
use crate::quadrature::{moments_from_samples, sample, QuadratureRule, RuleCache};
use crate::scalar::{Real, Scalar};

/// `f(x, y, y', ..., y^(m-1))`.
pub trait RightHandSide<T>: Send + Sync {
    fn eval(&self, x: T, derivatives: &[T]) -> std::result::Result<T, EvalError>;

    /// Highest derivative argument read, when known.
    fn max_derivative(&self) -> Option<usize> {
        None
    }
}

impl<T: Real> RightHandSide<T> for Expr {
    fn eval(&self, x: T, derivatives: &[T]) -> std::result::Result<T, EvalError> {
        self.evaluate(x, derivatives)
    }

    fn max_derivative(&self) -> Option<usize> {
        Expr::max_derivative(self)
    }
}

impl<T, F> RightHandSide<T> for F
where
    F: Fn(T, &[T]) -> T + Send + Sync,
{
    fn eval(&self, x: T, derivatives: &[T]) -> std::result::Result<T, EvalError> {
        Ok(self(x, derivatives))
    }
}

/// `y^(m) = f(x, y, ..., y^(m-1))` on `[0, 1]` with `y^(i)(0) = left[i]`
/// and `y^(j)(1) = right[j]`.
#[derive(Clone)]
pub struct BVProblem<T> {
    left: Vec<T>,
    right: Vec<T>,
    rhs: Arc<dyn RightHandSide<T>>,
}

impl<T: Scalar> fmt::Debug for BVProblem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BVProblem")
            .field("left", &self.left)
            .field("right", &self.right)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> BVProblem<T> {
    pub fn new(left: Vec<T>, right: Vec<T>, rhs: impl RightHandSide<T> + 'static) -> Result<Self> {
        Self::with_shared_rhs(left, right, Arc::new(rhs))
    }

    pub fn with_shared_rhs(left: Vec<T>, right: Vec<T>, rhs: Arc<dyn RightHandSide<T>>) -> Result<Self> {
        let m = left.len() + right.len();
        if m == 0 {
            return Err(Error::argument("at least one boundary condition is required"));
        }
        for (side, values) in [("left", &left), ("right", &right)] {
            if let Some(i) = values.iter().position(|v| !v.is_finite_value()) {
                return Err(Error::argument(format!("{side} boundary value {i} is not finite")));
            }
        }
        if let Some(k) = rhs.max_derivative() {
            if k >= m {
                return Err(Error::argument(format!(
                    "right-hand side uses y{k} but the equation has order {m}"
                )));
            }
        }
        Ok(Self { left, right, rhs })
    }

    pub fn order(&self) -> usize {
        self.left.len() + self.right.len()
    }

    /// Number of conditions at `x = 0`.
    pub fn k(&self) -> usize {
        self.left.len()
    }

    /// Number of conditions at `x = 1`.
    pub fn l(&self) -> usize {
        self.right.len()
    }

    pub fn left_values(&self) -> &[T] {
        &self.left
    }

    pub fn right_values(&self) -> &[T] {
        &self.right
    }

    pub fn rhs(&self) -> &dyn RightHandSide<T> {
        self.rhs.as_ref()
    }
}

/// Gauss-Legendre settings used for the moment integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSettings {
    /// Points per panel; `None` picks `max(n + 2, 20)` for degree `n`.
    pub order: Option<usize>,
    pub panels: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            order: None,
            panels: 2,
        }
    }
}

impl QuadratureSettings {
    pub fn order_for(&self, n: usize) -> usize {
        self.order.unwrap_or((n + 2).max(20))
    }
}

/// How the dual table is built and applied to the moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Projection {
    /// Exact table split into `hi + lo` and an error-free dot product.
    #[default]
    Compensated,
    /// Table filled by the recurrence in `T`, plain dot product. Loses about
    /// a digit per degree past ~12 in `f64`.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub degree: usize,
    pub quadrature: QuadratureSettings,
    pub projection: Projection,
    /// Keep every iterate and its L2 residual.
    pub diagnostics: bool,
}

impl SolveOptions {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            quadrature: QuadratureSettings::default(),
            projection: Projection::default(),
            diagnostics: false,
        }
    }

    pub fn with_projection(mut self, projection: Projection) -> Self {
        self.projection = projection;
        self
    }

    pub fn with_diagnostics(mut self) -> Self {
        self.diagnostics = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub solution: BernsteinPoly<T>,
    /// `w_{m-1}, w_m, ..., w_N` when diagnostics were requested.
    pub iterates: Option<Vec<BernsteinPoly<T>>>,
    /// `||w_n^(m) - f(., w_{n-1}, ...)||` for `n = m..=N` when diagnostics were requested.
    pub residuals: Vec<T>,
}

impl<T: Scalar> SolveReport<T> {
    /// The iterate of degree `n`, if it was kept.
    pub fn iterate(&self, n: usize) -> Option<&BernsteinPoly<T>> {
        if n == self.solution.degree() {
            return Some(&self.solution);
        }
        let all = self.iterates.as_ref()?;
        let first = all.first()?.degree();
        all.get(n.checked_sub(first)?)
    }
}

/// Outer coefficients of the degree-`n` iterate: `p_0..p_{k-1}` on the left
/// and `p_n, p_{n-1}, ..., p_{n-l+1}` on the right (so `right[j] = p_{n-j}`).
pub fn outer_coefficients<T: Scalar>(problem: &BVProblem<T>, n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let (k, l) = (problem.k(), problem.l());
    if n + 1 < k.max(l) {
        return Err(Error::argument(format!(
            "degree {n} cannot carry {k} left and {l} right conditions"
        )));
    }
    let sign = |e: usize| if e % 2 == 0 { T::one() } else { -T::one() };

    let mut left: Vec<T> = Vec::with_capacity(k);
    for (i, a) in problem.left.iter().enumerate() {
        let mut s = T::zero();
        for (h, p) in left.iter().enumerate() {
            s = s + sign(i - h) * binomial::<T>(i, h) * p.clone();
        }
        left.push(a.clone() / falling_factorial::<T>(n, i) - s);
    }

    let mut right: Vec<T> = Vec::with_capacity(l);
    for (j, b) in problem.right.iter().enumerate() {
        let mut s = T::zero();
        for h in 1..=j {
            s = s + sign(h) * binomial::<T>(j, h) * right[j - h].clone();
        }
        right.push(sign(j) * b.clone() / falling_factorial::<T>(n, j) - s);
    }
    Ok((left, right))
}

/// The degree `m - 1` starting polynomial.
pub fn seed<T: Scalar>(problem: &BVProblem<T>) -> BernsteinPoly<T> {
    let m = problem.order();
    let (left, right) = outer_coefficients(problem, m - 1).expect("seed degree always fits");
    let coeffs: Vec<T> = left.into_iter().chain(right.into_iter().rev()).collect();
    BernsteinPoly::new(coeffs).expect("finite boundary data")
}

/// Builds `x -> f(x, w(x), ..., w^(m-1)(x))` for the previous iterate.
fn composed_rhs<'a, T: Real>(
    problem: &'a BVProblem<T>,
    previous: &BernsteinPoly<T>,
) -> Result<impl Fn(T) -> std::result::Result<T, EvalError> + 'a> {
    let m = problem.order();
    let derivs = previous.diff_table(m - 1)?.derivatives();
    Ok(move |x: T| {
        let args: Vec<T> = derivs.iter().map(|d| d.eval_unchecked(x)).collect();
        problem.rhs.eval(x, &args)
    })
}

struct Step<T> {
    poly: BernsteinPoly<T>,
    samples: Vec<T>,
}

fn step<T: Real>(
    problem: &BVProblem<T>,
    previous: &BernsteinPoly<T>,
    n: usize,
    rule: &QuadratureRule<T>,
    projection: Projection,
) -> Result<Step<T>> {
    let m = problem.order();
    let (k, l) = (problem.k(), problem.l());
    if n < m {
        return Err(Error::argument(format!("degree {n} below order {m}")));
    }
    if previous.degree() + 1 != n {
        return Err(Error::argument(format!(
            "previous iterate has degree {}, expected {}",
            previous.degree(),
            n - 1
        )));
    }

    let (left, right) = outer_coefficients(problem, n)?;
    let duals: Box<dyn DualProjection<T>> = match projection {
        Projection::Compensated => Box::new(SplitDualTable::<T>::new(n - m)),
        Projection::Plain => Box::new(dual_coefficients::<T>(n - m)),
    };
    let g = composed_rhs(problem, previous)?;
    let samples = sample(g, rule)?;
    let moments = moments_from_samples(&samples, n, m, rule)?;
    let v = assemble_rhs(n, m, k, l, duals.as_ref(), &moments, &left, &right)?;
    let system = assemble_matrix::<T>(n, m, k, l)?.with_rhs(v)?;
    let inner = solve_band(&system)?;

    let coeffs: Vec<T> = left
        .into_iter()
        .chain(inner)
        .chain(right.into_iter().rev())
        .collect();
    let poly = BernsteinPoly::new(coeffs)?;
    Ok(Step { poly, samples })
}

/// One iteration: `w_n` from `w_{n-1}`.
pub fn iterate<T: Real>(
    problem: &BVProblem<T>,
    previous: &BernsteinPoly<T>,
    n: usize,
    rule: &QuadratureRule<T>,
    projection: Projection,
) -> Result<BernsteinPoly<T>> {
    step(problem, previous, n, rule, projection)
        .map(|s| s.poly)
        .map_err(|e| Error::Iteration { n, source: Box::new(e) })
}

/// Runs the seed and every iteration up to `options.degree`.
pub fn solve<T: Real>(problem: &BVProblem<T>, options: &SolveOptions) -> Result<SolveReport<T>> {
    let m = problem.order();
    if options.degree < m {
        return Err(Error::argument(format!(
            "target degree {} below equation order {m}",
            options.degree
        )));
    }
    let mut cache = RuleCache::new();
    let mut current = seed(problem);
    let mut iterates = options.diagnostics.then(|| vec![current.clone()]);
    let mut residuals = Vec::new();

    for n in m..=options.degree {
        let rule = cache
            .get(options.quadrature.order_for(n), options.quadrature.panels)
            .map_err(|e| Error::Iteration { n, source: Box::new(e) })?;
        let next = step(problem, &current, n, &rule, options.projection)
            .map_err(|e| Error::Iteration { n, source: Box::new(e) })?;
        if options.diagnostics {
            residuals.push(residual_norm(&next.poly, m, &next.samples, &rule));
            if let Some(list) = iterates.as_mut() {
                list.push(next.poly.clone());
            }
        }
        current = next.poly;
    }

    if let Some(list) = iterates.as_mut() {
        list.pop();
    }
    Ok(SolveReport {
        solution: current,
        iterates,
        residuals,
    })
}

/// `||w^(m) - g||` by quadrature, `g` sampled at the rule's nodes.
fn residual_norm<T: Real>(w: &BernsteinPoly<T>, m: usize, samples: &[T], rule: &QuadratureRule<T>) -> T {
    let d = w.derivative(m).expect("degree at least m");
    let mut acc = T::zero();
    for ((&x, &wt), &g) in rule.nodes().iter().zip(rule.weights()).zip(samples) {
        let r = d.eval_unchecked(x) - g;
        acc = acc + wt * r * r;
    }
    acc.sqrt()
}

/// Largest `|w^(i)(end) - value| / (1 + |value|)` over all boundary conditions.
pub fn boundary_defect<T: Scalar>(problem: &BVProblem<T>, w: &BernsteinPoly<T>) -> T {
    let mut worst = T::zero();
    let conditions = problem
        .left
        .iter()
        .enumerate()
        .map(|(i, v)| (i, End::Left, v))
        .chain(problem.right.iter().enumerate().map(|(j, v)| (j, End::Right, v)));
    for (r, end, value) in conditions {
        if r > w.degree() {
            continue;
        }
        let got = w.endpoint_derivative(r, end).expect("order within degree");
        let e = (got - value.clone()).abs() / (T::one() + value.abs());
        if e > worst {
            worst = e;
        }
    }
    worst
}
