//! Affine-linear slices `A y + b = 0`.

use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{euclidean_norm, ComplexMatrix};
use crate::poly::Polynomial;
use crate::{random, Error, Result, C64};

/// `forms` affine-linear forms in `ambient_dim` coordinates, stored as a
/// coefficient matrix (one row per form) and a constant vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Slice {
    coefficients: ComplexMatrix,
    constants: Vec<C64>,
}

impl Slice {
    pub fn new(coefficients: ComplexMatrix, constants: Vec<C64>) -> Result<Self> {
        if coefficients.rows() != constants.len() {
            return Err(Error::DimensionMismatch {
                expected: coefficients.rows(),
                found: constants.len(),
            });
        }
        Ok(Slice {
            coefficients,
            constants,
        })
    }

    /// Generic coefficients and constants (unit phase, modulus in
    /// `[0.5, 1.5]`).
    pub fn random_generic<R: Rng + ?Sized>(forms: usize, ambient_dim: usize, rng: &mut R) -> Self {
        let coefficients = ComplexMatrix::from_fn(forms, ambient_dim, |_, _| random::generic_complex(rng));
        let constants = (0..forms).map(|_| random::generic_complex(rng)).collect();
        Slice {
            coefficients,
            constants,
        }
    }

    /// Generic slice with unit-norm coefficient rows.
    pub fn random_normalized<R: Rng + ?Sized>(forms: usize, ambient_dim: usize, rng: &mut R) -> Self {
        let mut s = Self::random_generic(forms, ambient_dim, rng);
        s.normalize_rows();
        s
    }

    /// Unit-norm random rows with constants solved so every form vanishes
    /// at `point`.
    pub fn through_point<R: Rng + ?Sized>(forms: usize, point: &[C64], rng: &mut R) -> Self {
        let mut s = Self::random_normalized(forms, point.len(), rng);
        s.constants = s.coefficients.mul_vec(point).into_iter().map(|v| -v).collect();
        s
    }

    fn normalize_rows(&mut self) {
        for i in 0..self.coefficients.rows() {
            let norm = euclidean_norm(self.coefficients.row(i));
            if norm > 0.0 {
                for z in self.coefficients.row_mut(i) {
                    *z /= norm;
                }
                self.constants[i] /= norm;
            }
        }
    }

    pub fn num_forms(&self) -> usize {
        self.constants.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.coefficients.cols()
    }

    pub fn coefficients(&self) -> &ComplexMatrix {
        &self.coefficients
    }

    pub fn constants(&self) -> &[C64] {
        &self.constants
    }

    pub fn evaluate(&self, y: &[C64]) -> Vec<C64> {
        self.coefficients
            .mul_vec(y)
            .into_iter()
            .zip(&self.constants)
            .map(|(v, b)| v + b)
            .collect()
    }

    /// Every form multiplied by `factor` (same zero set).
    pub fn scaled(&self, factor: C64) -> Slice {
        Slice {
            coefficients: ComplexMatrix::from_fn(self.coefficients.rows(), self.coefficients.cols(), |i, j| {
                self.coefficients[(i, j)] * factor
            }),
            constants: self.constants.iter().map(|b| b * factor).collect(),
        }
    }

    /// Shifts the constant term of form `index` by `delta` (a parallel
    /// translate).
    pub fn translated(&self, index: usize, delta: C64) -> Slice {
        let mut out = self.clone();
        out.constants[index] += delta;
        out
    }

    /// The forms as degree-one polynomials in `ambient_dim` variables.
    pub fn to_polynomials(&self) -> Vec<Polynomial> {
        let n = self.ambient_dim();
        (0..self.num_forms())
            .map(|i| {
                let mut p = Polynomial::constant(n, self.constants[i]);
                for j in 0..n {
                    p = &p + &Polynomial::variable(n, j).scale(self.coefficients[(i, j)]);
                }
                p
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn through_point_vanishes_there() {
        let mut rng = random::rng_from_seed(5);
        let point: Vec<C64> = (0..4).map(|_| random::gaussian_complex(&mut rng)).collect();
        let s = Slice::through_point(2, &point, &mut rng);
        assert!(s.evaluate(&point).iter().all(|v| v.norm() < 1e-12));
        for i in 0..2 {
            assert!((euclidean_norm(s.coefficients().row(i)) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn polynomials_agree_with_matrix_form() {
        let mut rng = random::rng_from_seed(6);
        let s = Slice::random_generic(2, 3, &mut rng);
        let y: Vec<C64> = (0..3).map(|_| random::gaussian_complex(&mut rng)).collect();
        let direct = s.evaluate(&y);
        for (p, v) in s.to_polynomials().iter().zip(direct) {
            assert!((p.evaluate(&y).unwrap() - v).norm() < 1e-12);
            assert_eq!(p.degree(), 1);
        }
    }
}
