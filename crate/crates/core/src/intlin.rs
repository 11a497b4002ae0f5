//! Exact integer linear algebra and Perron-Frobenius estimation.

use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            entries.extend(r.as_ref().iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns<C: AsRef<[i64]>>(rows: usize, columns: &[C]) -> Self {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    /// Entries as `i64` rows, or `None` if any entry overflows.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * self.get(src, j);
            self.entries[dst * self.cols + j] -= delta;
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * self.get(i, src);
            self.entries[i * self.cols + dst] -= delta;
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;

    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Diagonal of a Smith normal form: `d1 | d2 | ... | dk`, zeros last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by elementary integer row and column operations.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let n = rows.min(cols);
    let mut diagonal = Vec::with_capacity(n);

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = a.get(i, j);
                    if !x.is_zero()
                        && pivot.is_none_or(|(pi, pj)| x.abs() < a.get(pi, pj).abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                diagonal.resize(n, BigInt::zero());
                return SmithForm { diagonal };
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);

            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if !a.get(i, t).is_zero() {
                    let q = a.get(i, t).div_floor(&p);
                    a.row_axpy(i, t, &q);
                    dirty |= !a.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !a.get(t, j).is_zero() {
                    let q = a.get(t, j).div_floor(&p);
                    a.col_axpy(j, t, &q);
                    dirty |= !a.get(t, j).is_zero();
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => a.row_axpy(t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        diagonal.push(a.get(t, t).abs());
    }
    SmithForm { diagonal }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::from(1));
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(a.get(n - 1, n - 1) * sign)
}

/// Power-iteration settings.
#[derive(Clone, Copy, Debug)]
pub struct PowerIteration {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tol: 1e-8,
            max_iter: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenEstimate {
    pub value: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit; `value` is then the last iterate.
    pub converged: bool,
}

/// Spectral radius of a nonnegative square matrix.
///
/// Power iteration on `M + I` from the all-ones vector, stopped when the
/// Rayleigh quotient and the normalized iterate both settle within `tol`.
/// The shift makes irreducible matrices primitive; reducible inputs still
/// converge, possibly slowly.
pub fn dominant_eigenvalue(m: &IntMatrix, settings: PowerIteration) -> Result<EigenEstimate> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            let x = m.get(i, j);
            if x.is_negative() {
                return Err(Error::NegativeEntry { row: i, col: j });
            }
            a[i * n + j] = x.to_f64().unwrap_or(f64::INFINITY) + if i == j { 1.0 } else { 0.0 };
        }
    }
    if n == 0 {
        return Ok(EigenEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut previous = f64::NAN;
    for it in 1..=settings.max_iter {
        for i in 0..n {
            y[i] = (0..n).map(|j| a[i * n + j] * x[j]).sum();
        }
        let xy: f64 = x.iter().zip(&y).map(|(p, q)| p * q).sum();
        let xx: f64 = x.iter().map(|p| p * p).sum();
        let rayleigh = xy / xx;
        let norm: f64 = y.iter().sum();
        let mut drift: f64 = 0.0;
        for i in 0..n {
            let v = y[i] / norm;
            drift = drift.max((v - x[i]).abs());
            x[i] = v;
        }
        let settled = (rayleigh - previous).abs() <= settings.tol * rayleigh.max(1.0);
        previous = rayleigh;
        if settled && drift <= settings.tol {
            return Ok(EigenEstimate {
                value: rayleigh - 1.0,
                iterations: it,
                converged: true,
            });
        }
    }
    Ok(EigenEstimate {
        value: previous - 1.0,
        iterations: settings.max_iter,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_examples() {
        let d = smith_normal_form(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(d.diagonal, big(&[1, 6]));
        let d = smith_normal_form(&IntMatrix::identity(4));
        assert_eq!(d.diagonal, big(&[1, 1, 1, 1]));
        let m_psi_minus_i = IntMatrix::from_rows(&[[-1, 0, -1], [1, -1, 0], [0, 1, 0]]);
        assert_eq!(smith_normal_form(&m_psi_minus_i).diagonal, big(&[1, 1, 1]));
    }

    #[test]
    fn smith_rectangular_and_singular() {
        let d = smith_normal_form(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        assert_eq!(d.diagonal, big(&[2, 6, 12]));
        let d = smith_normal_form(&IntMatrix::from_rows(&[[1, 2], [2, 4], [3, 6]]));
        assert_eq!(d.diagonal, big(&[1, 0]));
        let d = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(d.diagonal, big(&[0, 0]));
        assert_eq!(d.rank(), 0);
        assert!(smith_normal_form(&IntMatrix::zeros(3, 0)).diagonal.is_empty());
    }

    #[test]
    fn determinant_examples() {
        let m = IntMatrix::from_rows(&[[-1, 0, -1], [1, -1, 0], [0, 1, 0]]);
        assert_eq!(determinant(&m).unwrap(), BigInt::from(-1));
        assert_eq!(determinant(&IntMatrix::identity(5)).unwrap(), BigInt::from(1));
        assert_eq!(
            determinant(&IntMatrix::from_rows(&[[0, 1], [1, 0]])).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            determinant(&IntMatrix::from_rows(&[[1, 2], [2, 4]])).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            determinant(&IntMatrix::zeros(2, 3)).unwrap_err(),
            Error::NonSquare { rows: 2, cols: 3 }
        );
    }

    #[test]
    fn dominant_eigenvalue_examples() {
        let settings = PowerIteration::default();
        // real root of x^3 - x^2 - 1
        let t = IntMatrix::from_rows(&[[0, 0, 1], [1, 0, 0], [0, 1, 1]]);
        let e = dominant_eigenvalue(&t, settings).unwrap();
        assert!(e.converged);
        assert!((e.value - 1.465_571_231_876_768).abs() < 1e-7, "{}", e.value);
        let e = dominant_eigenvalue(&IntMatrix::identity(3), settings).unwrap();
        assert!((e.value - 1.0).abs() < 1e-12);
        let e = dominant_eigenvalue(&IntMatrix::from_rows(&[[2]]), settings).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dominant_eigenvalue_errors() {
        let s = PowerIteration::default();
        assert!(matches!(
            dominant_eigenvalue(&IntMatrix::zeros(1, 2), s),
            Err(Error::NonSquare { .. })
        ));
        assert_eq!(
            dominant_eigenvalue(&IntMatrix::from_rows(&[[1, -1], [0, 1]]), s).unwrap_err(),
            Error::NegativeEntry { row: 0, col: 1 }
        );
    }

    #[test]
    fn iteration_cap_reports_unconverged() {
        let jordan = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
        let e = dominant_eigenvalue(&jordan, PowerIteration { tol: 1e-14, max_iter: 50 }).unwrap();
        assert!(!e.converged);
        assert_eq!(e.iterations, 50);
        assert!(e.value >= 1.0);
    }

    #[test]
    fn product_and_difference() {
        let a = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
        let b = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(&a * &b, IntMatrix::from_rows(&[[2, 1], [4, 3]]));
        assert_eq!(&a - &IntMatrix::identity(2), IntMatrix::from_rows(&[[0, 2], [3, 3]]));
        assert_eq!(a.transpose(), IntMatrix::from_rows(&[[1, 3], [2, 4]]));
    }
}
