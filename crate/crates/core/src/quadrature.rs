//! Composite Gauss-Legendre quadrature on `[0, 1]` and the Bernstein
//! moments `I_q = ∫ g(x) B_q^d(x) dx` that drive each iteration.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::EvalError;
use crate::scalar::{from_f64, Real, Scalar};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    order: usize,
    panels: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(x))
    }

    /// Same order with twice as many panels.
    pub fn refined(&self) -> Result<Self> {
        gauss_rule(self.order, 2 * self.panels)
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
fn legendre_nodes(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    // roots are symmetric; compute the positive half
    for i in 0..order.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                dp = legendre_with_derivative(order, x).1;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence { order });
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if order == 0 {
        return (1.0, 0.0);
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite rule with `panels` equal panels of `order` points each.
///
/// Nodes are computed in `f64` and converted to `T`.
pub fn gauss_rule<T: Real>(order: usize, panels: usize) -> Result<QuadratureRule<T>> {
    if order == 0 || panels == 0 {
        return Err(Error::argument(format!(
            "quadrature needs order >= 1 and panels >= 1 (got {order}, {panels})"
        )));
    }
    let (ref_nodes, ref_weights) = legendre_nodes(order)?;
    let width = 1.0 / panels as f64;
    let mut nodes = Vec::with_capacity(order * panels);
    let mut weights = Vec::with_capacity(order * panels);
    for p in 0..panels {
        let a = p as f64 * width;
        for (x, w) in ref_nodes.iter().zip(&ref_weights) {
            nodes.push(from_f64::<T>(a + 0.5 * width * (x + 1.0)));
            weights.push(from_f64::<T>(0.5 * width * w));
        }
    }
    Ok(QuadratureRule {
        order,
        panels,
        nodes,
        weights,
    })
}

/// Rules keyed by `(order, panels)`, built on first use.
#[derive(Debug, Default)]
pub struct RuleCache<T> {
    rules: HashMap<(usize, usize), Arc<QuadratureRule<T>>>,
}

impl<T: Real> RuleCache<T> {
    pub fn new() -> Self {
        Self {
            rules: HashMap::new(),
        }
    }

    pub fn get(&mut self, order: usize, panels: usize) -> Result<Arc<QuadratureRule<T>>> {
        if let Some(rule) = self.rules.get(&(order, panels)) {
            return Ok(rule.clone());
        }
        let rule = Arc::new(gauss_rule(order, panels)?);
        self.rules.insert((order, panels), rule.clone());
        Ok(rule)
    }
}

/// `B_0^n(x)..B_n^n(x)` by raising the degree one step at a time.
pub fn basis_row<T: Scalar>(n: usize, x: T) -> Vec<T> {
    let mut row = vec![T::zero(); n + 1];
    row[0] = T::one();
    let u = T::one() - x.clone();
    for d in 1..=n {
        let mut prev = T::zero();
        for i in 0..=d {
            let cur = row[i].clone();
            row[i] = u.clone() * cur.clone() + x.clone() * prev;
            prev = cur;
        }
    }
    row
}

/// Moments `∫ g(x) B_q^(n-m)(x) dx`, `q = 0..=n-m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector<T> {
    n: usize,
    m: usize,
    values: Vec<T>,
}

impl<T: Scalar> MomentVector<T> {
    /// Wraps precomputed moments; `values` must have `n - m + 1` entries.
    pub fn from_values(n: usize, m: usize, values: Vec<T>) -> Result<Self> {
        if n < m || values.len() != n - m + 1 {
            return Err(Error::argument(format!(
                "expected {} moments for n = {n}, m = {m}, got {}",
                (n + 1).saturating_sub(m),
                values.len()
            )));
        }
        Ok(Self { n, m, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// Evaluates `g` once per node, failing on the first error or non-finite value.
pub fn sample<T: Real>(
    g: impl Fn(T) -> std::result::Result<T, EvalError>,
    rule: &QuadratureRule<T>,
) -> Result<Vec<T>> {
    rule.nodes
        .iter()
        .map(|&x| {
            let v = g(x).map_err(|source| Error::Evaluation {
                x: x.to_f64_lossy(),
                source,
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation {
                    x: x.to_f64_lossy(),
                    source: EvalError::NonFinite,
                })
            }
        })
        .collect()
}

/// Moments from values of `g` already sampled at the rule's nodes.
pub fn moments_from_samples<T: Real>(
    samples: &[T],
    n: usize,
    m: usize,
    rule: &QuadratureRule<T>,
) -> Result<MomentVector<T>> {
    if n < m {
        return Err(Error::argument(format!("degree {n} below order {m}")));
    }
    if samples.len() != rule.len() {
        return Err(Error::argument("sample count differs from node count"));
    }
    let d = n - m;
    let mut values = vec![T::zero(); d + 1];
    for ((&x, &w), &g) in rule.nodes.iter().zip(&rule.weights).zip(samples) {
        let wg = w * g;
        for (acc, b) in values.iter_mut().zip(basis_row(d, x)) {
            *acc = *acc + wg * b;
        }
    }
    Ok(MomentVector { n, m, values })
}

pub fn moment_integrals<T: Real>(
    g: impl Fn(T) -> std::result::Result<T, EvalError>,
    n: usize,
    m: usize,
    rule: &QuadratureRule<T>,
) -> Result<MomentVector<T>> {
    if n < m {
        return Err(Error::argument(format!("degree {n} below order {m}")));
    }
    let samples = sample(g, rule)?;
    moments_from_samples(&samples, n, m, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::binomial;

    #[test]
    fn midpoint_rule() {
        let r = gauss_rule::<f64>(1, 1).unwrap();
        assert_eq!(r.nodes(), &[0.5]);
        assert_eq!(r.weights(), &[1.0]);
    }

    #[test]
    fn exactness_examples() {
        let r = gauss_rule::<f64>(2, 1).unwrap();
        assert!((r.integrate(|x| x * x) - 1.0 / 3.0).abs() < 1e-15);
        let r = gauss_rule::<f64>(5, 1).unwrap();
        assert!((r.integrate(|x| x.powi(9)) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rule_invariants_up_to_order_128() {
        for order in 1..=128 {
            let r = gauss_rule::<f64>(order, 1).unwrap();
            let total: f64 = r.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-14, "order {order}: {total}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            assert!(r.nodes().iter().all(|&x| x > 0.0 && x < 1.0));
            if order <= 30 {
                for d in 0..2 * order {
                    let got = r.integrate(|x| x.powi(d as i32));
                    assert!((got - 1.0 / (d as f64 + 1.0)).abs() < 1e-13, "order {order}, x^{d}");
                }
            }
        }
    }

    #[test]
    fn composite_nodes_increase() {
        let r = gauss_rule::<f64>(7, 3).unwrap();
        assert_eq!(r.len(), 21);
        assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_empty_rules() {
        assert!(gauss_rule::<f64>(0, 1).is_err());
        assert!(gauss_rule::<f64>(3, 0).is_err());
    }

    #[test]
    fn f32_rule_integrates() {
        let r = gauss_rule::<f32>(6, 2).unwrap();
        assert!((r.integrate(|x| x * x * x) - 0.25).abs() < 1e-6);
    }

    #[test]
    fn basis_row_examples() {
        assert_eq!(basis_row(1, 0.25), vec![0.75, 0.25]);
        assert_eq!(basis_row(2, 0.5), vec![0.25, 0.5, 0.25]);
        let r = basis_row(3, 0.2);
        for (a, b) in r.iter().zip([0.512f64, 0.384, 0.096, 0.008]) {
            assert!((a - b).abs() < 1e-15);
        }
        let r = basis_row(25, 0.613);
        assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn moment_examples() {
        let rule = gauss_rule::<f64>(10, 1).unwrap();
        let mv = moment_integrals(|_| Ok(1.0), 5, 2, &rule).unwrap();
        assert_eq!(mv.values().len(), 4);
        for v in mv.values() {
            // every B_q^3 integrates to 1/4
            assert!((v - 0.25).abs() < 1e-15);
        }
        let zero = moment_integrals(|_| Ok(0.0), 7, 3, &rule).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
        let two = moment_integrals(|_| Ok(-2.0), 2, 2, &rule).unwrap();
        assert!((two.values()[0] + 2.0).abs() < 1e-15);
        assert!(moment_integrals(|_| Ok(1.0), 1, 2, &rule).is_err());
    }

    #[test]
    fn moment_reports_offending_node() {
        let rule = gauss_rule::<f64>(4, 1).unwrap();
        let err = moment_integrals(|x| Ok(if x > 0.5 { f64::NAN } else { x }), 3, 1, &rule)
            .unwrap_err();
        match err {
            Error::Evaluation { x, source } => {
                assert!(x > 0.5);
                assert_eq!(source, EvalError::NonFinite);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    // ∫ x^d B_q^k dx = C(k,q) B(q + d + 1, k - q + 1) = C(k,q) (q+d)! (k-q)! / (k+d+1)!
    fn exact_monomial_moment(d: usize, k: usize, q: usize) -> f64 {
        let mut v = binomial::<f64>(k, q);
        // (q+d)! (k-q)! / (k+d+1)! = 1 / ((k+d+1) C(k+d, q+d))
        v /= (k + d + 1) as f64 * binomial::<f64>(k + d, q + d);
        v
    }

    #[test]
    fn polynomial_moments_are_exact() {
        for d in 0..=10 {
            for k in 0..=10 {
                let order = (d + k) / 2 + 1;
                let rule = gauss_rule::<f64>(order, 1).unwrap();
                let mv = moment_integrals(|x| Ok(x.powi(d as i32)), k + 2, 2, &rule).unwrap();
                for (q, got) in mv.values().iter().enumerate() {
                    let exact = exact_monomial_moment(d, k, q);
                    assert!((got - exact).abs() <= 1e-12 * exact.abs(), "d={d} k={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn cache_reuses_rules() {
        let mut cache = RuleCache::<f64>::new();
        let a = cache.get(20, 2).unwrap();
        let b = cache.get(20, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
