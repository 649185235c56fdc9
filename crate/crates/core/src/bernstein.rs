//! Polynomials in Bernstein form on `[0, 1]`.
//!
//! A degree-`n` polynomial is stored as its `n + 1` Bernstein coefficients
//! `p_0..p_n`, so that `w(x) = sum_i p_i B_i^n(x)` with
//! `B_i^n(x) = C(n, i) x^i (1 - x)^(n - i)`.
//!
//! Derivatives are obtained from forward differences of the coefficient
//! sequence: the `r`-th derivative has degree `n - r` and coefficients
//! `n! / (n - r)! * Δ^r p_j`.

use num_traits::pow;

use crate::error::{Error, Result};
use crate::scalar::{int, Scalar};

/// Which end of `[0, 1]` an endpoint quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> BernsteinPoly<T> {
    /// Builds a polynomial of degree `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::argument("a Bernstein polynomial needs at least one coefficient"));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite_value()) {
            return Err(Error::argument(format!("coefficient {i} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(value: T, degree: usize) -> Self {
        Self {
            coeffs: vec![value; degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Evaluates the polynomial at `x` in `[0, 1]`.
    pub fn eval(&self, x: T) -> Result<T> {
        check_unit(&x)?;
        Ok(self.eval_unchecked(x))
    }

    /// Horner-like evaluation in `t = x / (1 - x)` for `x <= 1/2` and in
    /// `s = (1 - x) / x` above, so the ratio never exceeds one.
    pub(crate) fn eval_unchecked(&self, x: T) -> T {
        let n = self.degree();
        let p = &self.coeffs;
        if n == 0 {
            return p[0].clone();
        }
        let one = T::one();
        let half = one.clone() / int::<T>(2);
        if x <= half {
            let u = one - x.clone();
            let t = x / u.clone();
            // binomial C(n, i), updated downwards from i = n
            let mut binom = T::one();
            let mut acc = p[n].clone();
            for i in (0..n).rev() {
                binom = binom * int::<T>((i + 1) as i64) / int::<T>((n - i) as i64);
                acc = acc * t.clone() + binom.clone() * p[i].clone();
            }
            acc * pow(u, n)
        } else {
            let s = (one - x.clone()) / x.clone();
            let mut binom = T::one();
            let mut acc = p[0].clone();
            for i in 1..=n {
                binom = binom * int::<T>((n - i + 1) as i64) / int::<T>(i as i64);
                acc = acc * s.clone() + binom.clone() * p[i].clone();
            }
            acc * pow(x, n)
        }
    }

    /// Forward-difference table `Δ^r p_j` for `r = 0..=r_max`.
    pub fn diff_table(&self, r_max: usize) -> Result<DiffTable<T>> {
        let n = self.degree();
        if r_max > n {
            return Err(Error::argument(format!(
                "difference order {r_max} exceeds degree {n}"
            )));
        }
        let mut rows = Vec::with_capacity(r_max + 1);
        rows.push(self.coeffs.clone());
        for r in 1..=r_max {
            let prev: &Vec<T> = &rows[r - 1];
            let row = prev
                .windows(2)
                .map(|w| w[1].clone() - w[0].clone())
                .collect();
            rows.push(row);
        }
        Ok(DiffTable { base_degree: n, rows })
    }

    /// The `r`-th derivative as a polynomial of degree `n - r`.
    pub fn derivative(&self, r: usize) -> Result<Self> {
        if r == 0 {
            return Ok(self.clone());
        }
        let table = self.diff_table(r)?;
        Ok(table.derivative(r))
    }

    /// `w^(r)(0)` or `w^(r)(1)` straight from the coefficients.
    pub fn endpoint_derivative(&self, r: usize, end: End) -> Result<T> {
        let n = self.degree();
        if r > n {
            return Err(Error::argument(format!(
                "derivative order {r} exceeds degree {n}"
            )));
        }
        let p = &self.coeffs;
        let binoms = binomial_row::<T>(r);
        let sign = |e: usize| if e % 2 == 0 { T::one() } else { -T::one() };
        // Summation order matches `outer_coefficients` term for term.
        let diff = match end {
            End::Left => {
                let mut acc = T::zero();
                for h in 0..=r {
                    acc = acc + sign(r - h) * binoms[h].clone() * p[h].clone();
                }
                acc
            }
            End::Right => {
                let mut acc = T::zero();
                for h in 1..=r {
                    acc = acc + sign(r - h) * binoms[h].clone() * p[n - r + h].clone();
                }
                acc + sign(r) * p[n - r].clone()
            }
        };
        Ok(falling_factorial::<T>(n, r) * diff)
    }
}

/// Forward differences of a coefficient sequence, row `r` holding `Δ^r p_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffTable<T> {
    base_degree: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar> DiffTable<T> {
    pub fn base_degree(&self) -> usize {
        self.base_degree
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.rows[r]
    }

    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }

    /// Coefficients of the `r`-th derivative, scaled by `n! / (n - r)!`.
    pub fn derivative(&self, r: usize) -> BernsteinPoly<T> {
        let scale = falling_factorial::<T>(self.base_degree, r);
        BernsteinPoly {
            coeffs: self.rows[r]
                .iter()
                .map(|d| scale.clone() * d.clone())
                .collect(),
        }
    }

    /// All derivatives of order `0..=max_order`.
    pub fn derivatives(&self) -> Vec<BernsteinPoly<T>> {
        (0..self.rows.len()).map(|r| self.derivative(r)).collect()
    }
}

/// `B_i^n(x)` by direct powers.
pub fn basis_value<T: Scalar>(n: usize, i: usize, x: T) -> Result<T> {
    if i > n {
        return Err(Error::argument(format!("basis index {i} exceeds degree {n}")));
    }
    check_unit(&x)?;
    let u = T::one() - x.clone();
    Ok(binomial::<T>(n, i) * pow(x, i) * pow(u, n - i))
}

/// `C(n, k)` by the multiplicative recurrence; exact in `f64` for `n <= 56`.
pub fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut c = T::one();
    for t in 1..=k {
        c = c * int::<T>((n - k + t) as i64) / int::<T>(t as i64);
    }
    c
}

/// `C(r, 0..=r)`.
pub(crate) fn binomial_row<T: Scalar>(r: usize) -> Vec<T> {
    let mut row = Vec::with_capacity(r + 1);
    let mut c = T::one();
    row.push(c.clone());
    for h in 1..=r {
        c = c * int::<T>((r - h + 1) as i64) / int::<T>(h as i64);
        row.push(c.clone());
    }
    row
}

/// `n! / (n - r)!` as a running product of `r` integers.
pub fn falling_factorial<T: Scalar>(n: usize, r: usize) -> T {
    debug_assert!(r <= n);
    (0..r).fold(T::one(), |acc, t| acc * int::<T>((n - t) as i64))
}

pub(crate) fn check_unit<T: Scalar>(x: &T) -> Result<()> {
    if *x >= T::zero() && *x <= T::one() {
        Ok(())
    } else {
        Err(Error::argument(format!(
            "x = {} lies outside [0, 1]",
            x.to_f64_lossy()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn poly(c: &[f64]) -> BernsteinPoly<f64> {
        BernsteinPoly::new(c.to_vec()).unwrap()
    }

    fn de_casteljau(p: &[f64], x: f64) -> f64 {
        let mut b = p.to_vec();
        for r in 1..p.len() {
            for j in 0..p.len() - r {
                b[j] = (1.0 - x) * b[j] + x * b[j + 1];
            }
        }
        b[0]
    }

    #[test]
    fn basis_value_examples() {
        assert_eq!(basis_value(2, 1, 0.5).unwrap(), 0.5);
        assert_eq!(basis_value(5, 0, 0.0).unwrap(), 1.0);
        assert!((basis_value(4, 3, 0.25).unwrap() - 0.046875f64).abs() < 1e-16);
        assert!(basis_value(3, 4, 0.5).is_err());
        assert!(basis_value(3, 1, 1.5).is_err());
    }

    #[test]
    fn basis_endpoint_cardinality() {
        for n in 0..=30 {
            for i in 0..=n {
                let at0 = basis_value(n, i, 0.0).unwrap();
                let at1 = basis_value(n, i, 1.0).unwrap();
                assert_eq!(at0, if i == 0 { 1.0 } else { 0.0 });
                assert_eq!(at1, if i == n { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn basis_value_no_overflow_at_degree_60() {
        let total: f64 = (0..=60).map(|i| basis_value(60, i, 0.37).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn eval_examples() {
        assert!((poly(&[0.0, 0.5, 1.0]).eval(0.3).unwrap() - 0.3).abs() < 1e-16);
        let c = poly(&[1.25; 7]);
        for &x in &[0.0, 0.1, 0.5, 0.77, 1.0] {
            assert!((c.eval(x).unwrap() - 1.25).abs() < 1e-15);
        }
        let ex3 = poly(&[2.0, 5.0 / 3.0, 11.0 / 6.0, 8.0 / 3.0]);
        assert_eq!(ex3.eval(1.0).unwrap(), 8.0 / 3.0);
        assert_eq!(ex3.eval(0.0).unwrap(), 2.0);
        assert!(ex3.eval(-0.01).is_err());
    }

    #[test]
    fn eval_is_exact_in_rationals() {
        let p = BernsteinPoly::new(vec![rational(2, 1), rational(5, 3), rational(11, 6), rational(8, 3)])
            .unwrap();
        // Taylor cubic 2 - x + 3x^2/2 + x^3/6 at x = 1/3
        let x = rational(1, 3);
        let expected = rational(2, 1) - x.clone()
            + rational(3, 2) * x.clone() * x.clone()
            + rational(1, 6) * x.clone() * x.clone() * x.clone();
        assert_eq!(p.eval(x).unwrap(), expected);
        let above: BigRational = rational(3, 4);
        let expected = rational(2, 1) - above.clone()
            + rational(3, 2) * above.clone() * above.clone()
            + rational(1, 6) * above.clone() * above.clone() * above.clone();
        assert_eq!(p.eval(above).unwrap(), expected);
    }

    #[test]
    fn diff_table_examples() {
        let t = poly(&[1.0, 3.0, 6.0]).diff_table(2).unwrap();
        assert_eq!(t.rows(), &[vec![1.0, 3.0, 6.0], vec![2.0, 3.0], vec![1.0]]);
        let t = poly(&[4.0; 5]).diff_table(1).unwrap();
        assert!(t.row(1).iter().all(|&d| d == 0.0));
        let t = poly(&[0.0, 1.0, 4.0, 9.0]).diff_table(3).unwrap();
        assert_eq!(
            t.rows(),
            &[vec![0.0, 1.0, 4.0, 9.0], vec![1.0, 3.0, 5.0], vec![2.0, 2.0], vec![0.0]]
        );
        assert!(poly(&[1.0, 2.0]).diff_table(2).is_err());
    }

    #[test]
    fn derivative_examples() {
        let d = poly(&[0.0, 0.5, 1.0]).derivative(1).unwrap();
        assert_eq!(d.coeffs(), &[1.0, 1.0]);
        let p = poly(&[0.3, -1.0, 2.0]);
        assert_eq!(p.derivative(0).unwrap(), p);
        assert_eq!(poly(&[0.0, 0.0, 1.0]).derivative(2).unwrap().coeffs(), &[2.0]);
        assert!(p.derivative(3).is_err());
    }

    #[test]
    fn endpoint_derivative_examples() {
        assert_eq!(poly(&[0.0, 1.0]).endpoint_derivative(1, End::Left).unwrap(), 1.0);
        let ex3 = BernsteinPoly::new(vec![rational(2, 1), rational(5, 3), rational(11, 6), rational(8, 3)])
            .unwrap();
        assert_eq!(ex3.endpoint_derivative(2, End::Left).unwrap(), rational(3, 1));
        assert_eq!(ex3.endpoint_derivative(1, End::Left).unwrap(), rational(-1, 1));
        assert_eq!(ex3.endpoint_derivative(3, End::Left).unwrap(), rational(1, 1));
        let p = poly(&[0.1, 0.7, -0.4]);
        assert_eq!(p.endpoint_derivative(0, End::Right).unwrap(), -0.4);
        assert!(p.endpoint_derivative(3, End::Right).is_err());
    }

    #[test]
    fn binomials_exact_to_56() {
        assert_eq!(binomial::<f64>(56, 28), 7_648_690_600_760_440.0);
        assert_eq!(binomial::<f64>(10, 11), 0.0);
        assert_eq!(falling_factorial::<f64>(20, 3), 6840.0);
    }

    fn coeffs_strategy(max_deg: usize) -> impl Strategy<Value = Vec<f64>> {
        (0..=max_deg).prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, n + 1))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn eval_matches_de_casteljau(c in coeffs_strategy(40), x in 0.0f64..=1.0) {
            let p = poly(&c);
            let scale = c.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let h = p.eval(x).unwrap();
            let d = de_casteljau(&c, x);
            prop_assert!((h - d).abs() <= 1e-12 * scale, "{h} vs {d}");
        }

        #[test]
        fn partition_of_unity(n in 0usize..=30, x in 0.0f64..=1.0) {
            let total: f64 = (0..=n).map(|i| basis_value(n, i, x).unwrap()).sum();
            prop_assert!((total - 1.0).abs() < 1e-13);
        }

        #[test]
        fn derivative_matches_finite_differences(c in coeffs_strategy(15), x in 0.01f64..0.99) {
            prop_assume!(c.len() >= 2);
            let p = poly(&c);
            let h = 1e-6;
            let fd = (p.eval(x + h).unwrap() - p.eval(x - h).unwrap()) / (2.0 * h);
            let d = p.derivative(1).unwrap().eval(x).unwrap();
            prop_assert!((fd - d).abs() < 1e-5, "{fd} vs {d}");
        }

        #[test]
        fn derivative_orders_add(c in coeffs_strategy(15), r1 in 0usize..5, r2 in 0usize..5) {
            let p = poly(&c);
            prop_assume!(r1 + r2 <= p.degree());
            let twice = p.derivative(r1).unwrap().derivative(r2).unwrap();
            let once = p.derivative(r1 + r2).unwrap();
            let scale = once.coeffs().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (a, b) in twice.coeffs().iter().zip(once.coeffs()) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn endpoint_derivative_matches_derivative_eval(c in coeffs_strategy(12), r in 0usize..6) {
            let p = poly(&c);
            prop_assume!(r <= p.degree());
            let d = p.derivative(r).unwrap();
            let scale = d.coeffs().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let left = p.endpoint_derivative(r, End::Left).unwrap();
            let right = p.endpoint_derivative(r, End::Right).unwrap();
            prop_assert!((left - d.eval(0.0).unwrap()).abs() <= 1e-12 * scale);
            prop_assert!((right - d.eval(1.0).unwrap()).abs() <= 1e-12 * scale);
        }
    }
}
