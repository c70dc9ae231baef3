//! Degree of the image by monodromy on linear slices, certified by the
//! trace test.
//!
//! A pseudo-witness set stores the points of `L_0 ∩ Ỹ` for a general
//! affine slice `L_0` of the image cone `Ỹ`, each paired with one preimage
//! in the cone's source coordinates. Points are found by tracking known
//! preimages around loops `L_0 -> L_1 -> L_0` in the space of slices; the
//! loop is complete once the trace of the slice points is affine-linear
//! along a pencil of parallel slices.
//!
//! Everything is tracked on the source side. The square system in the cone
//! source variables `z` is
//!
//! ```text
//!   g(z) = 0,   A(s) * cone(z) + b(s) = 0,   S * z + s_0 = 0
//! ```
//!
//! where `g` are the ideal generators, `(A(s), b(s))` is a straight line
//! between two slices, and `S` are fixed random forms in source
//! coordinates that cut positive-dimensional fibers down to one preimage.

use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{max_norm, ComplexMatrix};
use crate::poly::SystemEvaluator;
use crate::problem::{ConeMap, ProblemSpec};
use crate::random::{self, derive_seed};
use crate::sampler::{cone_source_sample, generator_residual, SourceWitness, SAMPLE_RESIDUAL_TOLERANCE};
use crate::slice::Slice;
use crate::tracker::{points_match, track_path, PathEval, PathSystem, TrackSettings, TrackedPoint};
use crate::{dimension, par, Error, Result, Settings, C64, POINT_MATCH_TOLERANCE};

/// Bound on `|ℓ(ỹ)|`, relative to `max(1, |ỹ|)`, for a stored pair.
pub const SLICE_RESIDUAL_TOLERANCE: f64 = 1e-6;

/// Modulus of the translation used by the trace test.
pub const TRACE_STEP: f64 = 0.1;

/// Bound on the second difference of the trace, relative to
/// `max(1, |trace|)`.
pub const TRACE_TOLERANCE: f64 = 1e-4;

const STREAM_INITIAL: u64 = 20;
const STREAM_LOOP: u64 = 21;
const STREAM_TRACE: u64 = 22;
const STREAM_RESLICE: u64 = 23;

/// A point of `L_0 ∩ Ỹ` and one of its preimages.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessPair {
    /// Cone source coordinates (with `lambda` first when augmented).
    pub source: Vec<C64>,
    /// `cone(source)`.
    pub image: Vec<C64>,
}

#[derive(Clone, Debug)]
pub struct PseudoWitnessSet {
    cone: ConeMap,
    slice: Slice,
    squaring: Slice,
    pairs: Vec<WitnessPair>,
    is_complete: bool,
    loop_log: Vec<usize>,
}

impl PseudoWitnessSet {
    /// Reassembles a set, checking every pair against the residual bounds.
    pub fn from_parts(
        cone: ConeMap,
        slice: Slice,
        squaring: Slice,
        pairs: Vec<WitnessPair>,
        is_complete: bool,
        loop_log: Vec<usize>,
    ) -> Result<Self> {
        let n = cone.cone_source_dim();
        if slice.ambient_dim() != cone.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: cone.ambient_dim(),
                found: slice.ambient_dim(),
            });
        }
        if squaring.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: squaring.ambient_dim(),
            });
        }
        let equations = cone.generators().len() + slice.num_forms() + squaring.num_forms();
        if equations != n {
            return Err(Error::InvalidProblem(format!(
                "slice system has {equations} equations in {n} unknowns"
            )));
        }
        let set = PseudoWitnessSet {
            cone,
            slice,
            squaring,
            pairs: Vec::new(),
            is_complete,
            loop_log,
        };
        for (i, p) in pairs.iter().enumerate() {
            if p.source.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.source.len(),
                });
            }
            let image = set.cone.map().evaluate(&p.source)?;
            if !points_match(&image, &p.image, POINT_MATCH_TOLERANCE) || !set.accepts(&p.source, &image) {
                return Err(Error::Witness(format!("pair {i} is not on the slice and the source variety")));
            }
        }
        Ok(PseudoWitnessSet { pairs, ..set })
    }

    pub fn cone(&self) -> &ConeMap {
        &self.cone
    }

    /// `L_0`, in the cone's ambient coordinates.
    pub fn slice(&self) -> &Slice {
        &self.slice
    }

    /// Extra forms in cone source coordinates (possibly none).
    pub fn squaring(&self) -> &Slice {
        &self.squaring
    }

    /// Dimension of the image cone (number of slice forms).
    pub fn cone_dim(&self) -> usize {
        self.slice.num_forms()
    }

    pub fn pairs(&self) -> &[WitnessPair] {
        &self.pairs
    }

    /// Number of known points; the degree when complete, a lower bound
    /// otherwise.
    pub fn degree(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_complete(&self) -> bool {
        self.is_complete
    }

    /// Points known after each monodromy loop.
    pub fn loop_log(&self) -> &[usize] {
        &self.loop_log
    }

    /// The same set restricted to the pairs at `indices`, marked
    /// incomplete.
    pub fn restricted(&self, indices: &[usize]) -> Self {
        PseudoWitnessSet {
            pairs: indices.iter().map(|&i| self.pairs[i].clone()).collect(),
            is_complete: false,
            ..self.clone()
        }
    }

    /// Product of the degrees of the tracked square system.
    pub fn bezout_bound(&self) -> u128 {
        let gens = self
            .cone
            .generators()
            .iter()
            .fold(1u128, |acc, g| acc.saturating_mul(g.degree().max(1) as u128));
        let map_degree = self
            .cone
            .map()
            .components()
            .iter()
            .map(|f| f.degree().max(1) as u128)
            .max()
            .unwrap_or(1);
        (0..self.cone_dim()).fold(gens, |acc, _| acc.saturating_mul(map_degree))
    }

    fn accepts(&self, source: &[C64], image: &[C64]) -> bool {
        source.iter().chain(image).all(|z| z.re.is_finite() && z.im.is_finite())
            && generator_residual(self.cone.generators(), source) <= SAMPLE_RESIDUAL_TOLERANCE
            && max_norm(&self.slice.evaluate(image)) <= SLICE_RESIDUAL_TOLERANCE * max_norm(image).max(1.0)
    }

    fn knows(&self, image: &[C64]) -> bool {
        self.pairs
            .iter()
            .any(|p| points_match(&p.image, image, POINT_MATCH_TOLERANCE))
    }

    /// Appends endpoints with new images, in order; returns how many.
    fn merge(&mut self, endpoints: Vec<Option<WitnessPair>>) -> usize {
        let before = self.pairs.len();
        for pair in endpoints.into_iter().flatten() {
            if !self.knows(&pair.image) {
                self.pairs.push(pair);
            }
        }
        self.pairs.len() - before
    }
}

/// The slice homotopy `s -> (1 - s) * from + s * to` pulled back to the
/// cone source coordinates.
pub struct SliceHomotopy<'a> {
    generators: Option<SystemEvaluator>,
    cone: SystemEvaluator,
    squaring: &'a Slice,
    from: &'a Slice,
    to: &'a Slice,
}

impl<'a> SliceHomotopy<'a> {
    pub fn new(cone: &ConeMap, squaring: &'a Slice, from: &'a Slice, to: &'a Slice) -> Result<Self> {
        let n = cone.cone_source_dim();
        let generators = if cone.generators().is_empty() {
            None
        } else {
            Some(SystemEvaluator::new(cone.generators(), n)?)
        };
        if from.num_forms() != to.num_forms() || from.ambient_dim() != to.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: from.num_forms(),
                found: to.num_forms(),
            });
        }
        let equations = cone.generators().len() + from.num_forms() + squaring.num_forms();
        if equations != n {
            return Err(Error::InvalidProblem(format!(
                "slice system has {equations} equations in {n} unknowns"
            )));
        }
        Ok(SliceHomotopy {
            generators,
            cone: SystemEvaluator::new(cone.map().components(), n)?,
            squaring,
            from,
            to,
        })
    }
}

impl PathSystem for SliceHomotopy<'_> {
    fn dim(&self) -> usize {
        self.cone.num_vars()
    }

    fn evaluate(&self, z: &[C64], s: f64) -> PathEval {
        let n = self.dim();
        let m = self.cone.num_polys();
        let mut value = Vec::with_capacity(n);
        let mut jacobian = Vec::with_capacity(n * n);
        let mut dt = Vec::with_capacity(n);
        let zero = C64::new(0.0, 0.0);

        if let Some(g) = &self.generators {
            let (v, j) = g.evaluate_with_jacobian(z);
            dt.extend(core::iter::repeat_n(zero, v.len()));
            value.extend(v);
            jacobian.extend(j);
        }

        let (y, jy) = self.cone.evaluate_with_jacobian(z);
        let (p, q) = (self.from.coefficients(), self.to.coefficients());
        for i in 0..self.from.num_forms() {
            let (pb, qb) = (self.from.constants()[i], self.to.constants()[i]);
            let mut v = pb + (qb - pb) * s;
            let mut d = qb - pb;
            let mut row = alloc::vec![zero; n];
            for k in 0..m {
                let a = p[(i, k)] + (q[(i, k)] - p[(i, k)]) * s;
                v += a * y[k];
                d += (q[(i, k)] - p[(i, k)]) * y[k];
                if a != zero {
                    for (r, jk) in row.iter_mut().zip(&jy[k * n..(k + 1) * n]) {
                        *r += a * jk;
                    }
                }
            }
            value.push(v);
            dt.push(d);
            jacobian.extend(row);
        }

        value.extend(self.squaring.evaluate(z));
        dt.extend(core::iter::repeat_n(zero, self.squaring.num_forms()));
        jacobian.extend_from_slice(self.squaring.coefficients().as_slice());

        PathEval {
            value,
            jacobian: ComplexMatrix::from_row_major(n, n, jacobian).expect("square slice system"),
            dt,
        }
    }
}

/// Tracks every source point from slice `from` to slice `to`.
fn track_all(
    pws: &PseudoWitnessSet,
    sources: &[Vec<C64>],
    from: &Slice,
    to: &Slice,
    settings: &TrackSettings,
) -> Result<Vec<TrackedPoint>> {
    let h = SliceHomotopy::new(&pws.cone, &pws.squaring, from, to)?;
    Ok(par::map_indexed(sources.len(), |i| track_path(&h, &sources[i], settings)))
}

/// Tracks every source point along consecutive slice segments.
fn track_segments(
    pws: &PseudoWitnessSet,
    sources: &[Vec<C64>],
    segments: &[(&Slice, &Slice)],
    settings: &TrackSettings,
) -> Result<Vec<Option<Vec<C64>>>> {
    let systems = segments
        .iter()
        .map(|(from, to)| SliceHomotopy::new(&pws.cone, &pws.squaring, from, to))
        .collect::<Result<Vec<_>>>()?;
    Ok(par::map_indexed(sources.len(), |i| {
        let mut z = sources[i].clone();
        for h in &systems {
            let end = track_path(h, &z, settings);
            if !end.is_success() {
                return None;
            }
            z = end.coordinates;
        }
        Some(z)
    }))
}

/// Pair for a tracked endpoint, if it lies on `X` and on the set's slice.
fn endpoint_pair(pws: &PseudoWitnessSet, z: Option<Vec<C64>>) -> Option<WitnessPair> {
    let z = z?;
    let image = pws.cone.map().evaluate(&z).ok()?;
    pws.accepts(&z, &image).then_some(WitnessPair { source: z, image })
}

/// One general point of the image cone with a general slice through it.
///
/// `cone_dim` is the dimension of the image cone. When the cone source has
/// more unknowns than there are generators and slice forms, random forms
/// through the sampled source point square the system.
pub fn initial_witness_pair(
    w: &SourceWitness,
    cone: &ConeMap,
    cone_dim: usize,
    seed: u64,
    settings: &Settings,
) -> Result<PseudoWitnessSet> {
    if cone_dim == 0 {
        return Err(Error::InvalidProblem("the image cone is a point; its degree is 1".into()));
    }
    let n = cone.cone_source_dim();
    let r = cone.generators().len();
    if r + cone_dim > n {
        return Err(Error::InvalidProblem(format!(
            "image cone of dimension {cone_dim} cannot come from {n} unknowns with {r} equations"
        )));
    }
    let z = cone_source_sample(w, cone, 1, derive_seed(seed, STREAM_INITIAL, 0), settings)?
        .pop()
        .expect("one sample");
    let y = cone.map().evaluate(&z)?;
    let mut rng = random::rng_from_seed(derive_seed(seed, STREAM_INITIAL, 1));
    let slice = Slice::through_point(cone_dim, &y, &mut rng);
    let squaring = Slice::through_point(n - r - cone_dim, &z, &mut rng);
    Ok(PseudoWitnessSet {
        cone: cone.clone(),
        slice,
        squaring,
        pairs: alloc::vec![WitnessPair { source: z, image: y }],
        is_complete: false,
        loop_log: Vec::new(),
    })
}

/// One round: every known preimage is tracked from `L_0` to a fresh slice
/// `L_1` and back, each leg a straight line with a random unit constant on
/// the far end. New image points are appended; returns how many.
pub fn monodromy_loop(pws: &mut PseudoWitnessSet, seed: u64, settings: &Settings) -> Result<usize> {
    if pws.pairs.is_empty() {
        return Err(Error::Witness("monodromy needs at least one known point".into()));
    }
    let mut rng = random::rng_from_seed(seed);
    let l1 = Slice::random_normalized(pws.cone_dim(), pws.cone.ambient_dim(), &mut rng);
    let gamma1 = random::unit_complex(&mut rng);
    let gamma0 = random::unit_complex(&mut rng);
    let out = l1.scaled(gamma1);
    let back = pws.slice.scaled(gamma0);
    let sources: Vec<Vec<C64>> = pws.pairs.iter().map(|p| p.source.clone()).collect();
    let ends = track_segments(pws, &sources, &[(&pws.slice, &out), (&l1, &back)], &settings.track)?;
    let endpoints = ends.into_iter().map(|z| endpoint_pair(pws, z)).collect();
    let found = pws.merge(endpoints);
    pws.loop_log.push(pws.pairs.len());
    Ok(found)
}

/// Max-norm of the second difference of the trace over the translates
/// `L_0`, `L_0 + eps`, `L_0 + 2 eps` of the first form, relative to
/// `max(1, |trace|)`. `None` if any track fails.
pub fn trace_deviation(pws: &PseudoWitnessSet, seed: u64, settings: &Settings) -> Result<Option<f64>> {
    if pws.pairs.is_empty() {
        return Err(Error::Witness("the trace test needs at least one known point".into()));
    }
    let mut rng = random::rng_from_seed(seed);
    let eps = random::unit_complex(&mut rng) * TRACE_STEP;
    let m = pws.cone.ambient_dim();
    let sources: Vec<Vec<C64>> = pws.pairs.iter().map(|p| p.source.clone()).collect();
    let mut traces = Vec::with_capacity(3);
    traces.push(trace(pws.pairs.iter().map(|p| p.image.as_slice()), m));
    for k in [1.0, 2.0] {
        let target = pws.slice.translated(0, eps * k);
        let ends = track_all(pws, &sources, &pws.slice, &target, &settings.track)?;
        let mut images = Vec::with_capacity(ends.len());
        for end in ends {
            if !end.is_success() {
                return Ok(None);
            }
            images.push(pws.cone.map().evaluate(&end.coordinates)?);
        }
        traces.push(trace(images.iter().map(Vec::as_slice), m));
    }
    let second: Vec<C64> = (0..m)
        .map(|j| traces[2][j] - traces[1][j] * 2.0 + traces[0][j])
        .collect();
    Ok(Some(max_norm(&second) / max_norm(&traces[0]).max(1.0)))
}

fn trace<'a>(points: impl Iterator<Item = &'a [C64]>, m: usize) -> Vec<C64> {
    let mut sum = alloc::vec![C64::new(0.0, 0.0); m];
    for p in points {
        for (s, z) in sum.iter_mut().zip(p) {
            *s += z;
        }
    }
    sum
}

/// Whether the known points pass the trace test. A failed track counts
/// as a failed test.
pub fn trace_test(pws: &PseudoWitnessSet, seed: u64, settings: &Settings) -> Result<bool> {
    Ok(trace_deviation(pws, seed, settings)?.is_some_and(|e| e <= TRACE_TOLERANCE))
}

/// Moves the set to the slice `target` by a straight-line homotopy to
/// `gamma * target`. Pairs whose tracks fail are dropped.
pub fn move_slice(pws: &mut PseudoWitnessSet, target: Slice, seed: u64, settings: &Settings) -> Result<()> {
    if target.num_forms() != pws.cone_dim() || target.ambient_dim() != pws.cone.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: pws.cone_dim(),
            found: target.num_forms(),
        });
    }
    let mut rng = random::rng_from_seed(seed);
    let far = target.scaled(random::unit_complex(&mut rng));
    let sources: Vec<Vec<C64>> = pws.pairs.iter().map(|p| p.source.clone()).collect();
    let ends = track_all(pws, &sources, &pws.slice, &far, &settings.track)?;
    pws.slice = target;
    pws.pairs.clear();
    let endpoints = ends
        .into_iter()
        .map(|e| endpoint_pair(pws, e.is_success().then_some(e.coordinates)))
        .collect();
    pws.merge(endpoints);
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreeSettings {
    /// Consecutive loops without a new point before the trace test runs.
    pub max_repetitive_monodromies: usize,
    /// Failed trace tests before giving up with a lower bound.
    pub max_trace_tests: usize,
    /// Stop after this many loops in total (incomplete result).
    pub loop_limit: Option<usize>,
}

impl Default for DegreeSettings {
    fn default() -> Self {
        DegreeSettings {
            max_repetitive_monodromies: 4,
            max_trace_tests: 10,
            loop_limit: None,
        }
    }
}

/// Progress reported by [`numerical_image_degree`].
#[derive(Clone, Debug, PartialEq)]
pub enum DegreeEvent {
    PointsFound { loop_index: usize, points: usize },
    TraceTest { points: usize, deviation: Option<f64>, passed: bool },
    SliceReplaced { points: usize },
}

/// Degree of the closure of the image, as a pseudo-witness set.
///
/// Loops until `max_repetitive_monodromies` consecutive loops find nothing,
/// then runs the trace test. On failure the base slice is replaced and the
/// loops resume; after `max_trace_tests` failures the set is returned
/// incomplete, its size a lower bound for the degree.
pub fn numerical_image_degree(
    spec: &ProblemSpec,
    w: &SourceWitness,
    cone: &ConeMap,
    seed: u64,
    settings: &Settings,
    degree_settings: &DegreeSettings,
    progress: &mut dyn FnMut(&DegreeEvent),
) -> Result<PseudoWitnessSet> {
    if degree_settings.max_repetitive_monodromies == 0 || degree_settings.max_trace_tests == 0 {
        return Err(Error::InvalidProblem(
            "max_repetitive_monodromies and max_trace_tests must be positive".into(),
        ));
    }
    let image_dim = dimension::numerical_image_dim(spec, w, seed, settings)?;
    let mut pws = initial_witness_pair(w, cone, cone.cone_dim(image_dim), seed, settings)?;
    let mut quiet_loops = 0;
    let mut trace_tests = 0;
    let mut loops = 0;
    loop {
        if degree_settings.loop_limit.is_some_and(|limit| loops >= limit) {
            return Ok(pws);
        }
        let found = monodromy_loop(&mut pws, derive_seed(seed, STREAM_LOOP, loops as u64), settings)?;
        progress(&DegreeEvent::PointsFound {
            loop_index: loops,
            points: pws.pairs.len(),
        });
        loops += 1;
        quiet_loops = if found > 0 { 0 } else { quiet_loops + 1 };
        if quiet_loops < degree_settings.max_repetitive_monodromies {
            continue;
        }
        let deviation = trace_deviation(&pws, derive_seed(seed, STREAM_TRACE, trace_tests as u64), settings)?;
        let passed = deviation.is_some_and(|e| e <= TRACE_TOLERANCE);
        progress(&DegreeEvent::TraceTest {
            points: pws.pairs.len(),
            deviation,
            passed,
        });
        trace_tests += 1;
        if passed {
            pws.is_complete = true;
            return Ok(pws);
        }
        if trace_tests >= degree_settings.max_trace_tests {
            return Ok(pws);
        }
        let mut rng = random::rng_from_seed(derive_seed(seed, STREAM_RESLICE, trace_tests as u64));
        let fresh = Slice::random_normalized(pws.cone_dim(), cone.ambient_dim(), &mut rng);
        move_slice(&mut pws, fresh, derive_seed(seed, STREAM_RESLICE, trace_tests as u64 + (1 << 32)), settings)?;
        if pws.pairs.is_empty() {
            return Err(Error::Tracking("every known point was lost moving to a fresh slice".into()));
        }
        progress(&DegreeEvent::SliceReplaced {
            points: pws.pairs.len(),
        });
        quiet_loops = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::make_cone_map;
    use crate::sampler::build_source_witness;
    use alloc::string::ToString;

    fn setup(vars: &[&str], map: &[&str], homogeneous: bool) -> (ProblemSpec, SourceWitness, ConeMap) {
        let spec = ProblemSpec::parse(
            vars.iter().map(|v| v.to_string()).collect(),
            &[] as &[&str],
            map,
            homogeneous,
        )
        .unwrap();
        let w = build_source_witness(&spec, 0, &Settings::default()).unwrap();
        let cone = make_cone_map(&spec).unwrap();
        (spec, w, cone)
    }

    #[test]
    fn initial_pair_lies_on_its_slice() {
        let (_, w, cone) = setup(&["s", "t"], &["s^3", "s^2*t", "s*t^2", "t^3"], true);
        let pws = initial_witness_pair(&w, &cone, 2, 5, &Settings::default()).unwrap();
        assert_eq!(pws.cone_dim(), 2);
        assert_eq!(pws.squaring().num_forms(), 0);
        let p = &pws.pairs()[0];
        assert!(max_norm(&pws.slice().evaluate(&p.image)) < 1e-10);
    }

    #[test]
    fn twisted_cubic_degree() {
        let (spec, w, cone) = setup(&["s", "t"], &["s^3", "s^2*t", "s*t^2", "t^3"], true);
        let pws = numerical_image_degree(
            &spec,
            &w,
            &cone,
            11,
            &Settings::default(),
            &DegreeSettings::default(),
            &mut |_| {},
        )
        .unwrap();
        assert!(pws.is_complete());
        assert_eq!(pws.degree(), 3);
        assert!(!trace_test(&pws.restricted(&[0, 1]), 3, &Settings::default()).unwrap());
    }

    #[test]
    fn linear_map_has_degree_one() {
        let (spec, w, cone) = setup(&["x", "y"], &["x + y", "x - y", "2*x"], false);
        let pws = numerical_image_degree(
            &spec,
            &w,
            &cone,
            2,
            &Settings::default(),
            &DegreeSettings::default(),
            &mut |_| {},
        )
        .unwrap();
        assert!(pws.is_complete());
        assert_eq!(pws.degree(), 1);
    }
}
