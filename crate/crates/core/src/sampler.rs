//! General points on the source variety and on the image cone.
//!
//! When `I = 0` a sample is just a random tuple. Otherwise a witness set
//! (a generic linear slice of `X` with its finitely many points) is solved
//! once by a total-degree homotopy, and each sample tracks one witness point
//! to a freshly drawn slice.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{numerical_rank, precondition_rows, singular_values, ComplexMatrix};
use crate::poly::{Polynomial, SystemEvaluator};
use crate::problem::{ConeMap, ProblemSpec};
use crate::random::{self, derive_seed};
use crate::slice::Slice;
use crate::tracker::{solve_total_degree, track_path, Homotopy};
use crate::{par, Error, Result, Settings, C64};

/// Residual bound every sample must meet on the ideal generators.
pub const SAMPLE_RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Attempts per sample before giving up.
pub const SAMPLE_RETRIES: usize = 5;

const STREAM_WITNESS: u64 = 1;
const STREAM_SOURCE: u64 = 2;
const STREAM_LAMBDA: u64 = 3;

/// A witness set for `X = V(I)`, or the trivial witness when `I = 0`.
#[derive(Clone, Debug)]
pub struct SourceWitness {
    num_vars: usize,
    generators: Vec<Polynomial>,
    slice: Option<Slice>,
    points: Vec<Vec<C64>>,
}

impl SourceWitness {
    pub fn is_trivial(&self) -> bool {
        self.slice.is_none()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Dimension of `X` (complete intersection assumption).
    pub fn source_dim(&self) -> usize {
        self.num_vars - self.generators.len()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn slice(&self) -> Option<&Slice> {
        self.slice.as_ref()
    }

    /// Cached points of `X` on the witness slice (empty when trivial).
    pub fn points(&self) -> &[Vec<C64>] {
        &self.points
    }
}

/// Max-norm of the ideal generators at `x`.
pub fn generator_residual(generators: &[Polynomial], x: &[C64]) -> f64 {
    generators
        .iter()
        .map(|g| g.evaluate(x).map_or(f64::INFINITY, |v| v.norm()))
        .fold(0.0, f64::max)
}

/// Numerical rank of the Jacobian of `generators` at `x`.
pub fn jacobian_rank(generators: &[Polynomial], x: &[C64], gap_threshold: f64) -> Result<usize> {
    if generators.is_empty() {
        return Ok(0);
    }
    let eval = SystemEvaluator::new(generators, x.len())?;
    let (_, jac) = eval.evaluate_with_jacobian(x);
    let m = precondition_rows(&ComplexMatrix::from_row_major(generators.len(), x.len(), jac)?);
    Ok(numerical_rank(&singular_values(&m)?, gap_threshold))
}

pub fn build_source_witness(spec: &ProblemSpec, seed: u64, settings: &Settings) -> Result<SourceWitness> {
    let n = spec.num_vars();
    let generators = spec.ideal_generators().to_vec();
    let r = generators.len();
    if r == 0 {
        return Ok(SourceWitness {
            num_vars: n,
            generators,
            slice: None,
            points: Vec::new(),
        });
    }
    if r > n {
        return Err(Error::Witness(format!(
            "{r} generators in {n} variables cannot be a complete intersection"
        )));
    }
    if generators.iter().any(|g| g.degree() < 1) {
        return Err(Error::Witness("ideal generators must be nonconstant".into()));
    }
    let mut rng = random::rng_from_seed(derive_seed(seed, STREAM_WITNESS, 0));
    let slice = Slice::random_generic(n - r, n, &mut rng);
    let mut system = generators.clone();
    system.extend(slice.to_polynomials());
    let solved = solve_total_degree(&system, &settings.track, derive_seed(seed, STREAM_WITNESS, 1))?;
    let mut points = Vec::new();
    for p in solved.solutions {
        if generator_residual(&generators, &p) > SAMPLE_RESIDUAL_TOLERANCE {
            continue;
        }
        if jacobian_rank(&generators, &p, settings.gap_threshold)? != r {
            continue;
        }
        points.push(p);
    }
    if points.is_empty() {
        return Err(Error::Witness(
            "no regular finite points on the witness slice; is the ideal a complete intersection?".into(),
        ));
    }
    Ok(SourceWitness {
        num_vars: n,
        generators,
        slice: Some(slice),
        points,
    })
}

/// `count` general points of `X`; sample `k` depends only on `(seed, k)`.
pub fn numerical_source_sample(w: &SourceWitness, count: usize, seed: u64, settings: &Settings) -> Result<Vec<Vec<C64>>> {
    let samples = par::map_indexed(count, |k| source_point(w, k, seed, settings));
    samples.into_iter().collect()
}

fn source_point(w: &SourceWitness, k: usize, seed: u64, settings: &Settings) -> Result<Vec<C64>> {
    let Some(slice) = &w.slice else {
        let mut rng = random::rng_from_seed(derive_seed(seed, STREAM_SOURCE, k as u64));
        return Ok((0..w.num_vars).map(|_| random::generic_complex(&mut rng)).collect());
    };
    if slice.num_forms() == 0 {
        // X is finite; its points are all there is.
        return Ok(w.points[k % w.points.len()].clone());
    }
    let mut start = w.generators.clone();
    start.extend(slice.to_polynomials());
    for attempt in 0..SAMPLE_RETRIES {
        let mut rng = random::rng_from_seed(derive_seed(
            seed,
            STREAM_SOURCE,
            (k as u64) << 8 | attempt as u64,
        ));
        let fresh = Slice::random_generic(slice.num_forms(), w.num_vars, &mut rng);
        let gamma = random::unit_complex(&mut rng);
        let mut target = w.generators.clone();
        target.extend(fresh.to_polynomials());
        let homotopy = Homotopy::new(&start, &target, gamma)?;
        let from = &w.points[(k + attempt) % w.points.len()];
        let end = track_path(&homotopy, from, &settings.track);
        if end.is_success()
            && generator_residual(&w.generators, &end.coordinates) <= SAMPLE_RESIDUAL_TOLERANCE
        {
            return Ok(end.coordinates);
        }
    }
    Err(Error::Sampling(format!(
        "sample {k}: every track to a fresh slice failed ({SAMPLE_RETRIES} attempts)"
    )))
}

/// General points in cone source coordinates: source samples, with a
/// generic `lambda` prepended when the cone map is augmented.
pub fn cone_source_sample(
    w: &SourceWitness,
    cone: &ConeMap,
    count: usize,
    seed: u64,
    settings: &Settings,
) -> Result<Vec<Vec<C64>>> {
    let sources = numerical_source_sample(w, count, seed, settings)?;
    Ok(sources
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let mut rng = random::rng_from_seed(derive_seed(seed, STREAM_LAMBDA, k as u64));
            cone.lift_source(x, random::generic_complex(&mut rng))
        })
        .collect())
}

/// `count` general points on the affine cone over the image.
pub fn numerical_image_sample(
    w: &SourceWitness,
    cone: &ConeMap,
    count: usize,
    seed: u64,
    settings: &Settings,
) -> Result<Vec<Vec<C64>>> {
    cone_source_sample(w, cone, count, seed, settings)?
        .iter()
        .map(|z| cone.map().evaluate(z))
        .collect()
}

/// `count` points `F(x)` of the affine image for general `x` in `X`.
pub fn affine_image_sample(
    spec: &ProblemSpec,
    w: &SourceWitness,
    count: usize,
    seed: u64,
    settings: &Settings,
) -> Result<Vec<Vec<C64>>> {
    numerical_source_sample(w, count, seed, settings)?
        .iter()
        .map(|x| spec.map().evaluate(x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::make_cone_map;
    use alloc::string::ToString;

    fn spec(vars: &[&str], ideal: &[&str], map: &[&str], homogeneous: bool) -> ProblemSpec {
        ProblemSpec::parse(vars.iter().map(|v| v.to_string()).collect(), ideal, map, homogeneous).unwrap()
    }

    #[test]
    fn free_source_gives_random_tuples() {
        let s = spec(&["x", "y", "z"], &[], &["x", "y", "z"], false);
        let w = build_source_witness(&s, 1, &Settings::default()).unwrap();
        assert!(w.is_trivial());
        let pts = numerical_source_sample(&w, 3, 9, &Settings::default()).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.len() == 3));
    }

    #[test]
    fn circle_witness_has_two_points() {
        let s = spec(&["x", "y"], &["x^2 + y^2 - 1"], &["x", "y"], false);
        let w = build_source_witness(&s, 3, &Settings::default()).unwrap();
        assert_eq!(w.points().len(), 2);
        for p in w.points() {
            assert!(generator_residual(w.generators(), p) <= 1e-8);
        }
        let pts = numerical_source_sample(&w, 10, 4, &Settings::default()).unwrap();
        for p in &pts {
            assert!(generator_residual(w.generators(), p) <= 1e-8);
        }
    }

    #[test]
    fn identity_image_equals_source() {
        let s = spec(&["x", "y"], &[], &["x", "y"], true);
        let cone = make_cone_map(&s).unwrap();
        let w = build_source_witness(&s, 1, &Settings::default()).unwrap();
        let src = numerical_source_sample(&w, 4, 2, &Settings::default()).unwrap();
        let img = numerical_image_sample(&w, &cone, 4, 2, &Settings::default()).unwrap();
        assert_eq!(src, img);
    }
}
