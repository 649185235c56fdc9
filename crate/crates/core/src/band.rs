//! The banded Toeplitz system for the inner Bernstein coefficients.
//!
//! Equating the Bernstein coefficients of `w_n^(m)` with the dual
//! projection of the right-hand side gives a system whose matrix has
//! entry `(i, j) = (-1)^(l + i - j) C(m, j + k - i)`: the `m`-th forward
//! difference stencil, shifted so that it has `k` sub-diagonals and `l`
//! super-diagonals.


use crate::bernstein::{binomial, falling_factorial};
use crate::dual::DualProjection;
use crate::error::{Error, Result};
use crate::quadrature::MomentVector;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BandedToeplitz<T> {
    size: usize,
    lower: usize,
    upper: usize,
    /// Values at offsets `d = j - i = -lower..=upper`, indexed by `d + lower`.
    diagonals: Vec<T>,
    rhs: Vec<T>,
}

impl<T: Scalar> BandedToeplitz<T> {
    /// A system from explicit diagonal values (offsets `-lower..=upper`).
    pub fn from_diagonals(size: usize, lower: usize, upper: usize, diagonals: Vec<T>) -> Result<Self> {
        if size == 0 {
            return Err(Error::argument("system size must be at least 1"));
        }
        if diagonals.len() != lower + upper + 1 {
            return Err(Error::argument(format!(
                "expected {} diagonals, got {}",
                lower + upper + 1,
                diagonals.len()
            )));
        }
        Ok(Self {
            size,
            lower,
            upper,
            diagonals,
            rhs: vec![T::zero(); size],
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.lower
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.upper
    }

    /// Toeplitz value at offset `d = j - i`; zero outside the band.
    pub fn diagonal(&self, d: isize) -> T {
        if d < -(self.lower as isize) || d > self.upper as isize {
            T::zero()
        } else {
            self.diagonals[(d + self.lower as isize) as usize].clone()
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.diagonal(j as isize - i as isize)
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    pub fn set_rhs(&mut self, rhs: Vec<T>) -> Result<()> {
        if rhs.len() != self.size {
            return Err(Error::argument(format!(
                "right-hand side has {} entries, system has {}",
                rhs.len(),
                self.size
            )));
        }
        self.rhs = rhs;
        Ok(())
    }

    pub fn with_rhs(mut self, rhs: Vec<T>) -> Result<Self> {
        self.set_rhs(rhs)?;
        Ok(self)
    }

    /// Dense copy of the matrix, for diagnostics and oracles.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    fn scale(&self) -> T {
        self.diagonals
            .iter()
            .map(|d| d.abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }
}

/// The system matrix for degree `n`, with a zero right-hand side.
pub fn assemble_matrix<T: Scalar>(n: usize, m: usize, k: usize, l: usize) -> Result<BandedToeplitz<T>> {
    if k + l != m {
        return Err(Error::argument(format!(
            "boundary condition count mismatch: k + l = {} but m = {m}",
            k + l
        )));
    }
    if n < m {
        return Err(Error::argument(format!("degree {n} below order {m}")));
    }
    let diagonals = (-(k as isize)..=l as isize)
        .map(|d| {
            let v = binomial::<T>(m, (d + k as isize) as usize);
            if (l as isize - d) % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    BandedToeplitz::from_diagonals(n - m + 1, k, l, diagonals)
}

/// Right-hand side `v` of the inner-coefficient system.
///
/// `left[i] = p_i` for `i < k`, `right[j] = p_(n-j)` for `j < l`.
#[allow(clippy::too_many_arguments)]
pub fn assemble_rhs<T: Scalar>(
    n: usize,
    m: usize,
    k: usize,
    l: usize,
    duals: &(impl DualProjection<T> + ?Sized),
    moments: &MomentVector<T>,
    left: &[T],
    right: &[T],
) -> Result<Vec<T>> {
    if k + l != m || n < m {
        return Err(Error::argument(format!(
            "invalid shape n = {n}, m = {m}, k = {k}, l = {l}"
        )));
    }
    let size = n - m + 1;
    if duals.degree() != n - m {
        return Err(Error::argument(format!(
            "dual table has degree {}, expected {}",
            duals.degree(),
            n - m
        )));
    }
    if moments.values().len() != size {
        return Err(Error::argument(format!(
            "{} moments supplied, expected {size}",
            moments.values().len()
        )));
    }
    if left.len() != k || right.len() != l {
        return Err(Error::argument(format!(
            "expected {k} left and {l} right outer coefficients, got {} and {}",
            left.len(),
            right.len()
        )));
    }

    let outer = |idx: usize| -> T {
        if idx < k {
            left[idx].clone()
        } else {
            right[n - idx].clone()
        }
    };
    let stencil = |h: usize| -> T {
        let c = binomial::<T>(m, h);
        if (m - h) % 2 == 0 {
            c
        } else {
            -c
        }
    };

    let scale = T::one() / falling_factorial::<T>(n, m);
    let projected = duals.project(moments.values());
    let mut v = Vec::with_capacity(size);
    for (i, proj) in projected.into_iter().enumerate() {
        let mut correction = T::zero();
        for h in 0..k.saturating_sub(i) {
            correction = correction + stencil(h) * outer(i + h);
        }
        // i + l <= n, so the lower limit is at least 1
        for h in (n + 1 - l - i)..=m {
            correction = correction + stencil(h) * outer(i + h);
        }
        v.push(scale.clone() * proj - correction);
    }
    Ok(v)
}

/// Solves the system, dispatching on the band shape.
///
/// `k = 0` uses back substitution, `l = 0` forward substitution, `k = l = 1`
/// the tridiagonal sweep and everything else banded LU with partial
/// pivoting.
pub fn solve<T: Scalar>(system: &BandedToeplitz<T>) -> Result<Vec<T>> {
    let tol = T::pivot_tolerance() * system.scale();
    if system.lower == 0 {
        back_substitution(system, &tol)
    } else if system.upper == 0 {
        forward_substitution(system, &tol)
    } else if system.lower == 1 && system.upper == 1 {
        tridiagonal(system, &tol)
    } else {
        banded_lu(system, &tol)
    }
}

fn check_pivot<T: Scalar>(pivot: &T, tol: &T, row: usize) -> Result<()> {
    if pivot.abs() <= *tol {
        Err(Error::Singular {
            row,
            pivot: pivot.to_f64_lossy(),
        })
    } else {
        Ok(())
    }
}

fn back_substitution<T: Scalar>(sys: &BandedToeplitz<T>, tol: &T) -> Result<Vec<T>> {
    let s = sys.size;
    let diag = sys.diagonal(0);
    check_pivot(&diag, tol, s - 1)?;
    let mut x = vec![T::zero(); s];
    for i in (0..s).rev() {
        let mut acc = sys.rhs[i].clone();
        for d in 1..=sys.upper.min(s - 1 - i) {
            acc = acc - sys.diagonal(d as isize) * x[i + d].clone();
        }
        x[i] = acc / diag.clone();
    }
    Ok(x)
}

fn forward_substitution<T: Scalar>(sys: &BandedToeplitz<T>, tol: &T) -> Result<Vec<T>> {
    let s = sys.size;
    let diag = sys.diagonal(0);
    check_pivot(&diag, tol, 0)?;
    let mut x = vec![T::zero(); s];
    for i in 0..s {
        let mut acc = sys.rhs[i].clone();
        for d in 1..=sys.lower.min(i) {
            acc = acc - sys.diagonal(-(d as isize)) * x[i - d].clone();
        }
        x[i] = acc / diag.clone();
    }
    Ok(x)
}

fn tridiagonal<T: Scalar>(sys: &BandedToeplitz<T>, tol: &T) -> Result<Vec<T>> {
    let s = sys.size;
    let (sub, diag, sup) = (sys.diagonal(-1), sys.diagonal(0), sys.diagonal(1));
    let mut c = vec![T::zero(); s];
    let mut d = vec![T::zero(); s];
    check_pivot(&diag, tol, 0)?;
    c[0] = sup.clone() / diag.clone();
    d[0] = sys.rhs[0].clone() / diag.clone();
    for i in 1..s {
        let denom = diag.clone() - sub.clone() * c[i - 1].clone();
        check_pivot(&denom, tol, i)?;
        c[i] = sup.clone() / denom.clone();
        d[i] = (sys.rhs[i].clone() - sub.clone() * d[i - 1].clone()) / denom;
    }
    let mut x = d;
    for i in (0..s - 1).rev() {
        let next = x[i + 1].clone();
        x[i] = x[i].clone() - c[i].clone() * next;
    }
    Ok(x)
}

/// A matrix row restricted to the columns `start..start + vals.len()`.
struct BandRow<T> {
    start: usize,
    vals: Vec<T>,
    rhs: T,
}

impl<T: Scalar> BandRow<T> {
    fn at(&self, col: usize) -> T {
        if col < self.start || col >= self.start + self.vals.len() {
            T::zero()
        } else {
            self.vals[col - self.start].clone()
        }
    }

    fn end(&self) -> usize {
        self.start + self.vals.len()
    }
}

fn banded_lu<T: Scalar>(sys: &BandedToeplitz<T>, tol: &T) -> Result<Vec<T>> {
    let s = sys.size;
    let (k, l) = (sys.lower, sys.upper);
    let mut rows: Vec<BandRow<T>> = (0..s)
        .map(|i| {
            let start = i.saturating_sub(k);
            let end = (i + l + 1).min(s);
            BandRow {
                start,
                vals: (start..end).map(|j| sys.entry(i, j)).collect(),
                rhs: sys.rhs[i].clone(),
            }
        })
        .collect();

    for col in 0..s {
        let last = (col + k).min(s - 1);
        let mut piv = col;
        let mut best = rows[col].at(col).abs();
        for r in col + 1..=last {
            let v = rows[r].at(col).abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        check_pivot(&rows[piv].at(col), tol, col)?;
        rows.swap(col, piv);

        // drop the already-eliminated leading columns of the pivot row
        let lead = col - rows[col].start;
        rows[col].vals.drain(..lead);
        rows[col].start = col;

        let (head, tail) = rows.split_at_mut(col + 1);
        let pivot_row = &head[col];
        let pivot = pivot_row.vals[0].clone();
        for row in tail.iter_mut().take(last - col) {
            let a = row.at(col);
            if a.is_zero() {
                continue;
            }
            let factor = a / pivot.clone();
            let end = pivot_row.end().max(row.end());
            let mut vals = Vec::with_capacity(end - col - 1);
            for j in col + 1..end {
                vals.push(row.at(j) - factor.clone() * pivot_row.at(j));
            }
            row.start = col + 1;
            row.vals = vals;
            row.rhs = row.rhs.clone() - factor * pivot_row.rhs.clone();
        }
    }

    let mut x = vec![T::zero(); s];
    for i in (0..s).rev() {
        let row = &rows[i];
        let mut acc = row.rhs.clone();
        for j in i + 1..row.end() {
            acc = acc - row.at(j) * x[j].clone();
        }
        x[i] = acc / row.at(i);
    }
    Ok(x)
}
