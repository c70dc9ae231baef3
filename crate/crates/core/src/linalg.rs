//! Dense complex linear algebra: SVD, numerical rank by the singular value
//! gap rule, row normalization, and square solves.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, C64};

/// Singular values below this multiple of the largest one are always zero.
pub const ABSOLUTE_RANK_FLOOR: f64 = 1e-13;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds a matrix from equally long rows. An empty list gives `0 x cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<C64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(ComplexMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn push_row(&mut self, row: &[C64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(ComplexMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = rhs.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<C64>) -> ComplexMatrix {
        ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Thin singular value decomposition `m = U diag(s) V*`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// Nonincreasing, nonnegative; length `min(rows, cols)`.
    pub singular_values: Vec<f64>,
    /// `rows x k`, columns paired with `singular_values`.
    pub left_singular_vectors: ComplexMatrix,
    /// `cols x k`, columns paired with `singular_values`.
    pub right_singular_vectors: ComplexMatrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let u = &self.left_singular_vectors;
        let v = &self.right_singular_vectors;
        ComplexMatrix::from_fn(u.rows(), v.rows(), |i, j| {
            self.singular_values
                .iter()
                .enumerate()
                .map(|(k, s)| u[(i, k)] * *s * v[(j, k)].conj())
                .sum()
        })
    }
}

const SVD_MAX_ITERATIONS: usize = 10_000;

pub fn svd(m: &ComplexMatrix) -> Result<SvdResult> {
    if m.rows == 0 || m.cols == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let decomposition = nalgebra::SVD::try_new(m.to_nalgebra(), true, true, f64::EPSILON, SVD_MAX_ITERATIONS)
        .ok_or(Error::SvdNoConvergence)?;
    let u = decomposition.u.ok_or(Error::SvdNoConvergence)?;
    let v_t = decomposition.v_t.ok_or(Error::SvdNoConvergence)?;
    let sigma = decomposition.singular_values;
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let singular_values = order.iter().map(|&k| sigma[k].max(0.0)).collect();
    let u = ComplexMatrix::from_nalgebra(&u);
    let v_t = ComplexMatrix::from_nalgebra(&v_t);
    let left = ComplexMatrix::from_fn(u.rows(), order.len(), |i, k| u[(i, order[k])]);
    let right = ComplexMatrix::from_fn(v_t.cols(), order.len(), |j, k| v_t[(order[k], j)].conj());
    Ok(SvdResult {
        singular_values,
        left_singular_vectors: left,
        right_singular_vectors: right,
    })
}

/// Singular values only.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.rows == 0 || m.cols == 0 {
        return Ok(Vec::new());
    }
    let decomposition = nalgebra::SVD::try_new(m.to_nalgebra(), false, false, f64::EPSILON, SVD_MAX_ITERATIONS)
        .ok_or(Error::SvdNoConvergence)?;
    let mut values: Vec<f64> = decomposition.singular_values.iter().map(|s| s.max(0.0)).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Numerical rank of a matrix with the given nonincreasing singular values.
///
/// Values after the largest consecutive ratio are zero when that ratio
/// exceeds `gap_threshold`; values below `ABSOLUTE_RANK_FLOOR * s[0]` are
/// zero regardless.
pub fn numerical_rank(singular_values: &[f64], gap_threshold: f64) -> usize {
    let Some(&largest) = singular_values.first() else {
        return 0;
    };
    if largest.is_nan() || largest <= 0.0 {
        return 0;
    }
    let above_floor = singular_values
        .iter()
        .take_while(|&&s| s > ABSOLUTE_RANK_FLOOR * largest)
        .count();
    let mut best: Option<(usize, f64)> = None;
    for i in 0..singular_values.len().saturating_sub(1) {
        let next = singular_values[i + 1];
        let ratio = if next > 0.0 { singular_values[i] / next } else { f64::INFINITY };
        if ratio > gap_threshold && best.is_none_or(|(_, r)| ratio > r) {
            best = Some((i + 1, ratio));
        }
    }
    let by_gap = best.map_or(singular_values.len(), |(rank, _)| rank);
    by_gap.min(above_floor)
}

/// Largest ratio of consecutive singular values, if there are at least two.
pub fn largest_gap(singular_values: &[f64]) -> Option<f64> {
    singular_values
        .windows(2)
        .map(|w| if w[1] > 0.0 { w[0] / w[1] } else { f64::INFINITY })
        .reduce(f64::max)
}

/// `cols - numerical rank`. A matrix without rows has the whole space as
/// kernel.
pub fn numerical_kernel_dim(m: &ComplexMatrix, gap_threshold: f64) -> Result<usize> {
    if m.rows == 0 {
        return Ok(m.cols);
    }
    let values = singular_values(m)?;
    Ok(m.cols - numerical_rank(&values, gap_threshold))
}

/// Scales every nonzero row to unit Euclidean norm.
pub fn precondition_rows(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    for i in 0..out.rows {
        let row = out.row_mut(i);
        let norm = libm::sqrt(row.iter().map(|z| z.norm_sqr()).sum());
        if norm > 0.0 {
            for z in row.iter_mut() {
                *z /= norm;
            }
        }
    }
    out
}

/// Solves the square system `a x = b` by LU with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if a.rows != a.cols || b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let lu = a.to_nalgebra().lu();
    let x = lu
        .solve(&DVector::from_column_slice(b))
        .ok_or(Error::SingularJacobian)?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularJacobian);
    }
    Ok(x.iter().copied().collect())
}

pub fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn euclidean_norm(v: &[C64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_singular_values() {
        let r = svd(&ComplexMatrix::identity(2)).unwrap();
        assert!((r.singular_values[0] - 1.0).abs() < 1e-14);
        assert!((r.singular_values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_with_zero() {
        let m = ComplexMatrix::from_rows(2, &[vec![c(0.0), c(0.0)], vec![c(0.0), c(3.0)]]).unwrap();
        let r = svd(&m).unwrap();
        assert!((r.singular_values[0] - 3.0).abs() < 1e-14);
        assert!(r.singular_values[1].abs() < 1e-14);
    }

    #[test]
    fn kernel_dim_rules() {
        assert_eq!(numerical_kernel_dim(&ComplexMatrix::identity(3), 200.0).unwrap(), 0);
        assert_eq!(numerical_rank(&[5.0, 1e-14, 1e-15], 200.0), 1);
        // no visible gap, everything tiny relative to the top value
        assert_eq!(numerical_rank(&[1.0, 1e-11, 1e-12 * 5.0], 200.0), 1);
        assert_eq!(numerical_rank(&[0.0, 0.0], 200.0), 0);
        assert_eq!(numerical_rank(&[3.0, 2.0, 1.0], 200.0), 3);
        assert_eq!(numerical_kernel_dim(&ComplexMatrix::zeros(0, 4), 200.0).unwrap(), 4);
    }

    #[test]
    fn row_preconditioning() {
        let m = ComplexMatrix::from_rows(2, &[vec![c(3.0), c(4.0)], vec![c(0.0), c(0.0)]]).unwrap();
        let p = precondition_rows(&m);
        assert!((p[(0, 0)] - c(0.6)).norm() < 1e-15);
        assert!((p[(0, 1)] - c(0.8)).norm() < 1e-15);
        assert_eq!(p.row(1), &[c(0.0), c(0.0)]);
    }

    #[test]
    fn solve_detects_singular() {
        let m = ComplexMatrix::from_rows(2, &[vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]]).unwrap();
        assert_eq!(solve(&m, &[c(1.0), c(1.0)]), Err(Error::SingularJacobian));
        let x = solve(&ComplexMatrix::identity(2), &[c(1.0), c(2.0)]).unwrap();
        assert_eq!(x, vec![c(1.0), c(2.0)]);
    }
}
