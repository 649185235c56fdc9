//! Dual Bernstein polynomials.
//!
//! The dual basis `D_0^n..D_n^n` satisfies `<D_i^n, B_j^n> = δ_ij` under the
//! plain L2 inner product on `[0, 1]`. Each `D_i^n` is stored through its
//! Bernstein coefficients `c_ij`, so the best L2 approximation of `g` in
//! degree `n` has Bernstein coefficients `sum_q c_iq <g, B_q^n>`.
//!
//! The table is filled row by row from a closed-form first row and a
//! three-term recurrence in `i`, `O(n^2)` in total. Entries grow roughly
//! like `4^n` and alternate in sign, so `sum_q c_iq I_q` cancels heavily:
//! a plain `f64` table applied with a plain dot product loses about one
//! digit per degree past ~12. [`SplitDualTable`] avoids that by filling the
//! table exactly and applying it as an unevaluated `hi + lo` pair with an
//! error-free dot product.


use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::BigRational;

use crate::bernstein::binomial;
use crate::error::{Error, Result};
use crate::scalar::{from_f64, int, rational_from_f64, Real, Scalar};

/// Maps moments `<g, B_q^n>` to the Bernstein coefficients of the best
/// approximation of `g` in degree `n`.
pub trait DualProjection<T> {
    fn degree(&self) -> usize;

    fn project(&self, moments: &[T]) -> Vec<T>;
}

/// Connection coefficients `c_ij` between the dual and the Bernstein basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCoeffTable<T> {
    degree: usize,
    table: Vec<T>,
}

impl<T: Scalar> DualCoeffTable<T> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.table[i * (self.degree + 1) + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        let w = self.degree + 1;
        &self.table[i * w..(i + 1) * w]
    }

    /// `sum_q c_iq values[q]` for every `i`.
    pub fn apply(&self, values: &[T]) -> Vec<T> {
        assert_eq!(values.len(), self.degree + 1);
        (0..=self.degree)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(values)
                    .fold(T::zero(), |acc, (c, v)| acc + c.clone() * v.clone())
            })
            .collect()
    }
}

pub fn dual_coefficients<T: Scalar>(n: usize) -> DualCoeffTable<T> {
    let w = n + 1;
    let mut table = vec![T::zero(); w * w];
    let ni = n as i64;

    // c_0j = (-1)^j (n + 1) (n + 1 - j)_(j+1) / (j + 1)!
    for j in 0..=n {
        let mut poch = T::one();
        for t in 1..=(j + 1) {
            poch = poch * int::<T>((n - j + t) as i64) / int::<T>(t as i64);
        }
        let v = int::<T>(ni + 1) * poch;
        table[j] = if j % 2 == 0 { v } else { -v };
    }

    let a = |u: i64| (u - ni) * (u + 1);
    let b = |u: i64| u * (u - ni - 1);
    let at = |t: &[T], i: i64, j: i64| -> T {
        if i < 0 || j < 0 || j > ni {
            T::zero()
        } else {
            t[i as usize * w + j as usize].clone()
        }
    };

    for i in 0..ni {
        let div = a(i);
        assert!(div != 0, "A({i}) vanishes for degree {n}");
        let div = int::<T>(div);
        for j in 0..=ni {
            let s = int::<T>(2 * (i - j) * (i + j - ni)) * at(&table, i, j)
                + int::<T>(b(j)) * at(&table, i, j - 1)
                + int::<T>(a(j)) * at(&table, i, j + 1)
                - int::<T>(b(i)) * at(&table, i - 1, j);
            table[(i as usize + 1) * w + j as usize] = s / div.clone();
        }
    }

    DualCoeffTable { degree: n, table }
}

/// Exact `<B_i^n, B_j^n> = C(n,i) C(n,j) / ((2n + 1) C(2n, i + j))`.
pub fn bernstein_gram_entry<T: Scalar>(n: usize, i: usize, j: usize) -> Result<T> {
    if i > n || j > n {
        return Err(Error::argument(format!(
            "Gram index ({i}, {j}) out of range for degree {n}"
        )));
    }
    Ok(binomial::<T>(n, i) * binomial::<T>(n, j)
        / (int::<T>(2 * n as i64 + 1) * binomial::<T>(2 * n, i + j)))
}

/// Full `(n + 1) x (n + 1)` Gram matrix, row-major.
pub fn bernstein_gram<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| bernstein_gram_entry(n, i, j).expect("indices in range"))
                .collect()
        })
        .collect()
}

/// Largest `|(C G - I)_ij|` for the given table.
pub fn duality_defect<T: Scalar>(duals: &DualCoeffTable<T>) -> T {
    let n = duals.degree();
    let gram = bernstein_gram::<T>(n);
    let mut worst = T::zero();
    for i in 0..=n {
        for j in 0..=n {
            let mut s = T::zero();
            for (q, row) in gram.iter().enumerate() {
                s = s + duals.get(i, q).clone() * row[j].clone();
            }
            if i == j {
                s = s - T::one();
            }
            let e = s.abs();
            if e > worst {
                worst = e;
            }
        }
    }
    worst
}

impl<T: Scalar> DualCoeffTable<T> {
    /// Largest `|c_ij - c_ji|` and `|c_ij - c_{n-i,n-j}|`, relative to the largest entry.
    pub fn symmetry_defect(&self) -> T {
        let n = self.degree;
        let mut scale = T::zero();
        let mut worst = T::zero();
        for i in 0..=n {
            for j in 0..=n {
                let c = self.get(i, j).clone();
                if c.abs() > scale {
                    scale = c.abs();
                }
                for other in [self.get(j, i), self.get(n - i, n - j)] {
                    let d = (c.clone() - other.clone()).abs();
                    if d > worst {
                        worst = d;
                    }
                }
            }
        }
        if scale.is_zero() {
            scale
        } else {
            worst / scale
        }
    }
}

impl<T: Scalar> DualProjection<T> for DualCoeffTable<T> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn project(&self, moments: &[T]) -> Vec<T> {
        self.apply(moments)
    }
}

/// Exact dual table rounded to a `hi + lo` pair per entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitDualTable<T> {
    degree: usize,
    hi: Vec<T>,
    lo: Vec<T>,
}

/// Exact table of degree `n`, built once per process.
pub fn exact_dual_coefficients(n: usize) -> Arc<DualCoeffTable<BigRational>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DualCoeffTable<BigRational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("dual cache poisoned").get(&n) {
        return Arc::clone(t);
    }
    // built outside the lock so other degrees are not blocked
    let table = Arc::new(dual_coefficients::<BigRational>(n));
    let mut guard = cache.lock().expect("dual cache poisoned");
    Arc::clone(guard.entry(n).or_insert(table))
}

impl<T: Real> SplitDualTable<T> {
    pub fn new(n: usize) -> Self {
        Self::from_exact(&exact_dual_coefficients(n))
    }

    pub fn from_exact(exact: &DualCoeffTable<BigRational>) -> Self {
        let round = |v: &BigRational| from_f64::<T>(v.to_f64_lossy());
        let (hi, lo) = exact
            .table
            .iter()
            .map(|c| {
                let hi = round(c);
                let rest = c - rational_from_f64(hi.to_f64_lossy()).expect("finite entry");
                (hi, round(&rest))
            })
            .unzip();
        Self {
            degree: exact.degree,
            hi,
            lo,
        }
    }

    /// `c_ij` rounded to `T`.
    pub fn get(&self, i: usize, j: usize) -> T {
        let (hi, lo) = self.parts(i, j);
        hi + lo
    }

    /// The unevaluated pair `(hi, lo)` standing for `c_ij`.
    pub fn parts(&self, i: usize, j: usize) -> (T, T) {
        let k = i * (self.degree + 1) + j;
        (self.hi[k], self.lo[k])
    }
}

impl<T: Real> DualProjection<T> for SplitDualTable<T> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn project(&self, moments: &[T]) -> Vec<T> {
        let w = self.degree + 1;
        assert_eq!(moments.len(), w);
        (0..w)
            .map(|i| {
                let row = i * w..(i + 1) * w;
                compensated_dot(&self.hi[row.clone()], &self.lo[row], moments)
            })
            .collect()
    }
}

/// `sum (hi_q + lo_q) y_q` with TwoSum/TwoProduct error terms carried along.
fn compensated_dot<T: Real>(hi: &[T], lo: &[T], y: &[T]) -> T {
    let mut sum = T::zero();
    let mut err = T::zero();
    for ((&h, &l), &v) in hi.iter().zip(lo).zip(y) {
        let p = h * v;
        let pe = h.mul_add(v, -p);
        let s = sum + p;
        let z = s - sum;
        let se = (sum - (s - z)) + (p - z);
        sum = s;
        err = err + se + pe + l * v;
    }
    sum + err
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;
    use num_traits::Zero;

    #[test]
    fn small_tables() {
        let t0 = dual_coefficients::<f64>(0);
        assert_eq!(t0.row(0), &[1.0]);
        let t1 = dual_coefficients::<f64>(1);
        assert_eq!(t1.row(0), &[4.0, -2.0]);
        assert_eq!(t1.row(1), &[-2.0, 4.0]);
        let t2 = dual_coefficients::<f64>(2);
        assert_eq!(t2.row(0), &[9.0, -9.0, 3.0]);
    }

    #[test]
    fn gram_examples() {
        assert_eq!(bernstein_gram_entry::<BigRational>(0, 0, 0).unwrap(), rational(1, 1));
        assert_eq!(bernstein_gram_entry::<BigRational>(1, 0, 0).unwrap(), rational(1, 3));
        assert_eq!(bernstein_gram_entry::<BigRational>(1, 0, 1).unwrap(), rational(1, 6));
        assert!(bernstein_gram_entry::<f64>(2, 3, 0).is_err());
    }

    #[test]
    fn exact_tables_are_dual_and_symmetric() {
        for n in 0..=12 {
            let t = dual_coefficients::<BigRational>(n);
            assert!(duality_defect(&t).is_zero(), "degree {n}");
            assert!(t.symmetry_defect().is_zero(), "degree {n}");
        }
    }

    #[test]
    fn float_symmetry_to_degree_20() {
        for n in 0..=20 {
            let t = dual_coefficients::<f64>(n);
            assert!(t.symmetry_defect() < 1e-10, "degree {n}: {}", t.symmetry_defect());
        }
    }

    #[test]
    fn float_table_tracks_exact_table() {
        for (n, tol) in [(5, 1e-12), (10, 1e-11), (20, 1e-10), (30, 1e-8)] {
            let exact = dual_coefficients::<BigRational>(n);
            let float = dual_coefficients::<f64>(n);
            let mut scale = 0.0f64;
            let mut worst = 0.0f64;
            for i in 0..=n {
                for j in 0..=n {
                    let e = exact.get(i, j).to_f64_lossy();
                    scale = scale.max(e.abs());
                    worst = worst.max((e - float.get(i, j)).abs());
                }
            }
            assert!(worst / scale < tol, "degree {n}: {}", worst / scale);
        }
    }

    /// Distance from the exact table applied exactly to the same `f64` moments.
    fn projection_error<P: DualProjection<f64>>(table: &P, n: usize) -> f64 {
        let exact = dual_coefficients::<BigRational>(n);
        let moments: Vec<f64> = (0..=n).map(|q| ((q as f64 + 0.5) / (n as f64 + 1.0)).exp() / (n as f64 + 1.0)).collect();
        let mq: Vec<BigRational> = moments.iter().map(|&v| rational_from_f64(v).unwrap()).collect();
        let want = exact.apply(&mq);
        table
            .project(&moments)
            .iter()
            .zip(&want)
            .map(|(p, w)| (p - w.to_f64_lossy()).abs() / (1.0 + w.to_f64_lossy().abs()))
            .fold(0.0, f64::max)
    }

    #[test]
    fn split_table_projects_to_working_precision() {
        for n in [0, 1, 5, 12, 20, 30] {
            let err = projection_error(&SplitDualTable::<f64>::new(n), n);
            assert!(err < 1e-14, "degree {n}: {err}");
        }
        // the plain table is already far off at degree 20
        assert!(projection_error(&dual_coefficients::<f64>(20), 20) > 1e-8);
    }

    #[test]
    fn split_table_entries_round_to_the_exact_table() {
        let exact = dual_coefficients::<BigRational>(9);
        let split = SplitDualTable::<f64>::new(9);
        for i in 0..=9 {
            for j in 0..=9 {
                assert_eq!(split.get(i, j), exact.get(i, j).to_f64_lossy());
            }
        }
        assert!(Arc::ptr_eq(&exact_dual_coefficients(9), &exact_dual_coefficients(9)));
    }

    #[test]
    fn split_table_in_f32() {
        let split = SplitDualTable::<f32>::new(3);
        assert_eq!(split.get(0, 0), 16.0);
        let p = split.project(&[0.25, 0.25, 0.25, 0.25]);
        for v in p {
            assert!((v - 1.0).abs() < 1e-5);
        }
    }
}
