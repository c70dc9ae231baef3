//! Dimension of the image from tangent-space kernels at a general point.
//!
//! At a general `x` in `X`, `dim Y = dim T_x X - dim ker dF_x`, where
//! `T_x X = ker Jac(I)(x)` and `ker dF_x` is the kernel of the Jacobians of
//! `I` and `F` stacked on top of each other.

use alloc::vec::Vec;

use crate::linalg::{numerical_kernel_dim, precondition_rows, ComplexMatrix};
use crate::poly::{Polynomial, SystemEvaluator};
use crate::problem::ProblemSpec;
use crate::random::derive_seed;
use crate::sampler::{numerical_source_sample, SourceWitness};
use crate::{Error, Result, Settings, C64};

fn jacobian_at(polys: &[Polynomial], x: &[C64]) -> Result<ComplexMatrix> {
    if polys.is_empty() {
        return Ok(ComplexMatrix::zeros(0, x.len()));
    }
    let (_, jac) = SystemEvaluator::new(polys, x.len())?.evaluate_with_jacobian(x);
    ComplexMatrix::from_row_major(polys.len(), x.len(), jac)
}

/// `n - rank Jac(I)(x)`; with no generators the tangent space is all of
/// affine `n`-space.
pub fn tangent_space_dim(generators: &[Polynomial], x: &[C64], gap_threshold: f64) -> Result<usize> {
    let jac = precondition_rows(&jacobian_at(generators, x)?);
    numerical_kernel_dim(&jac, gap_threshold)
}

/// `dim T_x X - dim ker dF_x` at the given point.
pub fn image_dim_at(generators: &[Polynomial], map: &[Polynomial], x: &[C64], gap_threshold: f64) -> Result<usize> {
    let tangent = tangent_space_dim(generators, x, gap_threshold)?;
    let stacked = jacobian_at(generators, x)?.vstack(&jacobian_at(map, x)?)?;
    let fiber = numerical_kernel_dim(&precondition_rows(&stacked), gap_threshold)?;
    Ok(tangent.saturating_sub(fiber))
}

/// Dimension of the closure of `F(X)` in affine `m`-space.
///
/// Two independent general points must agree; on disagreement two more
/// are drawn, and a second disagreement is an error.
pub fn numerical_image_dim(spec: &ProblemSpec, w: &SourceWitness, seed: u64, settings: &Settings) -> Result<usize> {
    let generators = spec.ideal_generators();
    let map = spec.map().components();
    let points: Vec<Vec<C64>> = numerical_source_sample(w, 2, derive_seed(seed, 10, 0), settings)?;
    let first = image_dim_at(generators, map, &points[0], settings.gap_threshold)?;
    let second = image_dim_at(generators, map, &points[1], settings.gap_threshold)?;
    if first == second {
        return Ok(first);
    }
    let retry = numerical_source_sample(w, 2, derive_seed(seed, 10, 1), settings)?;
    let first = image_dim_at(generators, map, &retry[0], settings.gap_threshold)?;
    let second = image_dim_at(generators, map, &retry[1], settings.gap_threshold)?;
    if first == second {
        Ok(first)
    } else {
        Err(Error::InconsistentDimension { first, second })
    }
}
