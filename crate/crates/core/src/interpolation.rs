//! Hilbert function values of the projective closure of the image by
//! multivariate interpolation, and approximate equations from the kernel.
//!
//! For degree `d`, `N = binom(M - 1 + d, d)` general cone points (`M` the
//! ambient dimension of the cone) give an `N x N` matrix of degree-`d`
//! monomial values. Its numerical kernel is the degree-`d` part of the
//! ideal of the image. A kernel vector is a list of coefficients over the
//! graded-lexicographic monomial basis.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{
    largest_gap, max_norm, numerical_rank, precondition_rows, singular_values, svd, ComplexMatrix,
};
use crate::poly::{binomial, monomial_basis, Exponent, Polynomial};
use crate::problem::ConeMap;
use crate::sampler::{numerical_image_sample, SourceWitness};
use crate::{Error, Result, Settings, C64};

#[derive(Clone, Debug)]
pub struct NumericalInterpolationTable {
    pub degree: u32,
    pub num_monomials: usize,
    /// Square, row-normalized.
    pub interpolation_matrix: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right_singular_vectors: ComplexMatrix,
    pub hilbert_value: usize,
    pub sample_points: Vec<Vec<C64>>,
    pub gap_threshold: f64,
    /// Largest consecutive singular value ratio.
    pub largest_gap: Option<f64>,
    /// Kernel dimension after appending one more sampled row; equals
    /// `hilbert_value` whenever the computation is sound.
    pub extra_row_kernel_dim: usize,
}

/// Values of the degree-`d` monomials at `point` (graded-lex order), with
/// the point scaled to unit max-norm first and the row normalized after.
/// Both scalings multiply the row by a nonzero constant.
pub fn monomial_row(point: &[C64], basis: &[Exponent]) -> Vec<C64> {
    let scale = max_norm(point);
    let scaled: Vec<C64> = if scale > 0.0 {
        point.iter().map(|z| z / scale).collect()
    } else {
        point.to_vec()
    };
    let max_power = basis.iter().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize;
    let powers: Vec<Vec<C64>> = scaled
        .iter()
        .map(|z| {
            let mut p = Vec::with_capacity(max_power + 1);
            p.push(C64::new(1.0, 0.0));
            for k in 1..=max_power {
                p.push(p[k - 1] * z);
            }
            p
        })
        .collect();
    let mut row: Vec<C64> = basis
        .iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .map(|(v, &k)| powers[v][k as usize])
                .product()
        })
        .collect();
    let norm = libm::sqrt(row.iter().map(|z| z.norm_sqr()).sum());
    if norm > 0.0 {
        for z in &mut row {
            *z /= norm;
        }
    }
    row
}

pub fn build_interpolation_matrix(points: &[Vec<C64>], degree: u32) -> Result<ComplexMatrix> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidProblem("no interpolation points".into()))?;
    let dim = first.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    let basis = monomial_basis(degree, dim);
    let rows: Vec<Vec<C64>> = points.iter().map(|p| monomial_row(p, &basis)).collect();
    Ok(precondition_rows(&ComplexMatrix::from_rows(basis.len(), &rows)?))
}

/// Largest interpolation problem accepted (rows of the square matrix).
pub const MAX_INTERPOLATION_SIZE: usize = 5000;

pub fn numerical_hilbert_function(
    w: &SourceWitness,
    cone: &ConeMap,
    degree: u32,
    seed: u64,
    settings: &Settings,
) -> Result<NumericalInterpolationTable> {
    let ambient = cone.ambient_dim();
    let count = binomial((ambient - 1) as u64 + degree as u64, degree as u64);
    if count > MAX_INTERPOLATION_SIZE as u128 {
        return Err(Error::InvalidProblem(format!(
            "interpolation in degree {degree} needs {count} samples (limit {MAX_INTERPOLATION_SIZE})"
        )));
    }
    let n = count as usize;
    // One extra sample for the stabilization check.
    let mut points = numerical_image_sample(w, cone, n + 1, seed, settings)?;
    let extra = points.pop().expect("n + 1 samples");
    let matrix = build_interpolation_matrix(&points, degree)?;
    let decomposition = svd(&matrix)?;
    let hilbert_value = n - numerical_rank(&decomposition.singular_values, settings.gap_threshold);

    let mut extended = matrix.clone();
    extended.push_row(&monomial_row(&extra, &monomial_basis(degree, ambient)))?;
    let extended_values = singular_values(&extended)?;
    let extra_row_kernel_dim = n - numerical_rank(&extended_values, settings.gap_threshold);
    if extra_row_kernel_dim != hilbert_value {
        return Err(Error::IndeterminateKernel {
            reason: format!(
                "kernel dimension {hilbert_value} drops to {extra_row_kernel_dim} with one more sample"
            ),
            singular_values: decomposition.singular_values,
        });
    }

    Ok(NumericalInterpolationTable {
        degree,
        num_monomials: n,
        largest_gap: largest_gap(&decomposition.singular_values),
        interpolation_matrix: matrix,
        singular_values: decomposition.singular_values,
        right_singular_vectors: decomposition.right_singular_vectors,
        hilbert_value,
        sample_points: points,
        gap_threshold: settings.gap_threshold,
        extra_row_kernel_dim,
    })
}

/// Unit-norm coefficient vectors spanning the numerical kernel: the right
/// singular vectors paired with the `hilbert_value` smallest singular
/// values.
pub fn extract_image_equations(t: &NumericalInterpolationTable) -> Vec<Vec<C64>> {
    let k = t.right_singular_vectors.cols();
    (k - t.hilbert_value.min(k)..k)
        .map(|j| t.right_singular_vectors.column(j))
        .collect()
}

/// The form with the given coefficients over the degree-`d` monomials in
/// `num_vars` variables.
pub fn equation_polynomial(coefficients: &[C64], degree: u32, num_vars: usize) -> Result<Polynomial> {
    let basis = monomial_basis(degree, num_vars);
    if basis.len() != coefficients.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: coefficients.len(),
        });
    }
    Polynomial::from_terms(num_vars, basis.into_iter().zip(coefficients.iter().copied()))
}

/// `|sum_j c_j m_j(p)|` with the monomial row of `p` normalized as in the
/// interpolation matrix.
pub fn normalized_form_value(coefficients: &[C64], point: &[C64], degree: u32) -> f64 {
    let row = monomial_row(point, &monomial_basis(degree, point.len()));
    row.iter().zip(coefficients).map(|(m, c)| m * c).sum::<C64>().norm()
}
