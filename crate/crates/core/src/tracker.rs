//! Predictor–corrector path tracking for square polynomial homotopies.
//!
//! Paths run from `t = 0` to `t = 1`. Each step takes an Euler (tangent)
//! prediction and at most `max_corrector_iterations` Newton corrections;
//! the step size halves on failure and doubles after a run of successes.
//! The endpoint is polished by Newton's method on the `t = 1` system.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::linalg::{max_norm, solve, ComplexMatrix};
use crate::poly::{Polynomial, SystemEvaluator};
use crate::{par, random, Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct TrackSettings {
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub corrector_tolerance: f64,
    pub max_corrector_iterations: usize,
    pub step_increase_factor: f64,
    /// Consecutive accepted steps before the step grows.
    pub successes_before_increase: usize,
    pub step_decrease_factor: f64,
    pub endpoint_refinement_tolerance: f64,
    pub max_refinement_iterations: usize,
    /// Coordinates beyond this magnitude mark the path as diverging.
    pub divergence_threshold: f64,
    /// Hard cap on accepted plus rejected steps; exceeding it is reported
    /// as [`TrackStatus::StepUnderflow`].
    pub max_steps: usize,
}

impl Default for TrackSettings {
    fn default() -> Self {
        TrackSettings {
            initial_step: 0.05,
            max_step: 0.1,
            min_step: 1e-7,
            corrector_tolerance: 1e-8,
            max_corrector_iterations: 3,
            step_increase_factor: 2.0,
            successes_before_increase: 5,
            step_decrease_factor: 0.5,
            endpoint_refinement_tolerance: 1e-11,
            max_refinement_iterations: 10,
            divergence_threshold: 1e8,
            max_steps: 50_000,
        }
    }
}

impl TrackSettings {
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 < self.min_step
            && self.min_step < self.initial_step
            && self.initial_step <= self.max_step
            && self.max_step <= 1.0
            && self.corrector_tolerance > 0.0
            && self.endpoint_refinement_tolerance > 0.0
            && self.max_corrector_iterations > 0
            && self.step_increase_factor > 1.0
            && 0.0 < self.step_decrease_factor
            && self.step_decrease_factor < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidProblem(format!("inconsistent track settings: {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrackStatus {
    Success,
    Diverged,
    SingularEndpoint,
    StepUnderflow,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackedPoint {
    pub coordinates: Vec<C64>,
    pub status: TrackStatus,
    /// Max-norm of the target system at `coordinates`.
    pub residual: f64,
    /// Residual at `t = 1` before endpoint refinement.
    pub pre_refinement_residual: f64,
    pub steps: usize,
}

impl TrackedPoint {
    pub fn is_success(&self) -> bool {
        self.status == TrackStatus::Success
    }
}

/// Values and derivatives of a square homotopy `H(x, t)` at one point.
pub struct PathEval {
    pub value: Vec<C64>,
    /// `dH/dx`, square.
    pub jacobian: ComplexMatrix,
    /// `dH/dt`.
    pub dt: Vec<C64>,
}

/// A square homotopy in `dim()` unknowns.
pub trait PathSystem: Sync {
    fn dim(&self) -> usize;

    fn evaluate(&self, x: &[C64], t: f64) -> PathEval;
}

/// `H(x, t) = (1 - t) * gamma * start(x) + t * target(x)`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    start: SystemEvaluator,
    target: SystemEvaluator,
    gamma: C64,
}

impl Homotopy {
    pub fn new(start: &[Polynomial], target: &[Polynomial], gamma: C64) -> Result<Self> {
        let n = square_arity(target)?;
        if start.len() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                found: start.len(),
            });
        }
        if (gamma.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProblem("gamma must have unit modulus".into()));
        }
        Ok(Homotopy {
            start: SystemEvaluator::new(start, n)?,
            target: SystemEvaluator::new(target, n)?,
            gamma,
        })
    }

    pub fn gamma(&self) -> C64 {
        self.gamma
    }
}

impl PathSystem for Homotopy {
    fn dim(&self) -> usize {
        self.target.num_vars()
    }

    fn evaluate(&self, x: &[C64], t: f64) -> PathEval {
        let n = self.dim();
        let (sv, sj) = self.start.evaluate_with_jacobian(x);
        let (tv, tj) = self.target.evaluate_with_jacobian(x);
        let a = self.gamma * (1.0 - t);
        let value = sv.iter().zip(&tv).map(|(s, g)| a * s + g * t).collect();
        let dt = sv.iter().zip(&tv).map(|(s, g)| g - self.gamma * s).collect();
        let jac = sj.iter().zip(&tj).map(|(s, g)| a * s + g * t).collect();
        PathEval {
            value,
            jacobian: ComplexMatrix::from_row_major(n, n, jac).expect("square evaluator"),
            dt,
        }
    }
}

/// The `t`-independent system `F(x) = 0`, for refinement.
struct StaticSystem {
    eval: SystemEvaluator,
}

impl PathSystem for StaticSystem {
    fn dim(&self) -> usize {
        self.eval.num_vars()
    }

    fn evaluate(&self, x: &[C64], _t: f64) -> PathEval {
        let n = self.dim();
        let (value, jac) = self.eval.evaluate_with_jacobian(x);
        PathEval {
            value,
            jacobian: ComplexMatrix::from_row_major(n, n, jac).expect("square evaluator"),
            dt: alloc::vec![C64::new(0.0, 0.0); n],
        }
    }
}

fn square_arity(system: &[Polynomial]) -> Result<usize> {
    let n = system
        .first()
        .map(|p| p.num_vars())
        .ok_or_else(|| Error::InvalidProblem("empty system".into()))?;
    if system.len() != n {
        return Err(Error::InvalidProblem(format!(
            "system is not square: {} equations in {n} unknowns",
            system.len()
        )));
    }
    if let Some(p) = system.iter().find(|p| p.num_vars() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.num_vars(),
        });
    }
    Ok(n)
}

fn scale_of(x: &[C64]) -> f64 {
    max_norm(x).max(1.0)
}

fn newton_step(sys: &dyn PathSystem, x: &[C64], t: f64) -> Result<(Vec<C64>, f64)> {
    let e = sys.evaluate(x, t);
    let rhs: Vec<C64> = e.value.iter().map(|v| -v).collect();
    let delta = solve(&e.jacobian, &rhs)?;
    Ok((delta, max_norm(&e.value)))
}

/// Outcome of Newton refinement at a fixed `t`.
struct Refined {
    point: Vec<C64>,
    converged: bool,
}

fn refine_at(sys: &dyn PathSystem, x: &[C64], t: f64, tolerance: f64, max_iters: usize) -> Result<Refined> {
    let mut point = x.to_vec();
    let mut previous: Option<f64> = None;
    for _ in 0..max_iters {
        let (delta, _) = newton_step(sys, &point, t)?;
        for (p, d) in point.iter_mut().zip(&delta) {
            *p += d;
        }
        let size = max_norm(&delta);
        let scale = scale_of(&point);
        if size <= tolerance * scale {
            return Ok(Refined { point, converged: true });
        }
        // In the asymptotic regime a regular root contracts quadratically;
        // a stalling ratio means the Jacobian is (numerically) singular.
        if let Some(prev) = previous {
            if prev < 1e-4 * scale && size > 0.5 * prev {
                return Ok(Refined { point, converged: false });
            }
        }
        previous = Some(size);
    }
    Ok(Refined { point, converged: false })
}

fn residual_at(sys: &dyn PathSystem, x: &[C64], t: f64) -> f64 {
    max_norm(&sys.evaluate(x, t).value)
}

/// Tracks one path of `h` from `start_point` at `t = 0` to `t = 1`.
pub fn track_path(h: &dyn PathSystem, start_point: &[C64], settings: &TrackSettings) -> TrackedPoint {
    let n = h.dim();
    debug_assert_eq!(start_point.len(), n);
    let mut x = start_point.to_vec();
    let mut t = 0.0f64;
    let mut step = settings.initial_step;
    let mut streak = 0usize;
    let mut steps = 0usize;
    let failed = |x: Vec<C64>, status, steps| TrackedPoint {
        coordinates: x,
        status,
        residual: f64::INFINITY,
        pre_refinement_residual: f64::INFINITY,
        steps,
    };

    while t < 1.0 {
        if steps >= settings.max_steps {
            return failed(x, TrackStatus::StepUnderflow, steps);
        }
        steps += 1;
        let h_step = step.min(1.0 - t);
        let t_next = if h_step >= 1.0 - t { 1.0 } else { t + h_step };
        match corrected_step(h, &x, t, t_next, settings) {
            Some(next) => {
                x = next;
                t = t_next;
                if max_norm(&x) > settings.divergence_threshold {
                    return failed(x, TrackStatus::Diverged, steps);
                }
                streak += 1;
                if streak >= settings.successes_before_increase {
                    step = (step * settings.step_increase_factor).min(settings.max_step);
                    streak = 0;
                }
            }
            None => {
                streak = 0;
                step *= settings.step_decrease_factor;
                if step < settings.min_step {
                    return failed(x, TrackStatus::StepUnderflow, steps);
                }
            }
        }
    }

    let pre_refinement_residual = residual_at(h, &x, 1.0);
    let refined = refine_at(
        h,
        &x,
        1.0,
        settings.endpoint_refinement_tolerance,
        settings.max_refinement_iterations,
    );
    match refined {
        Ok(Refined { point, converged }) if point.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
            let residual = residual_at(h, &point, 1.0);
            let status = if converged && pre_refinement_residual <= 1e-6 {
                TrackStatus::Success
            } else {
                TrackStatus::SingularEndpoint
            };
            TrackedPoint {
                coordinates: point,
                status,
                residual,
                pre_refinement_residual,
                steps,
            }
        }
        _ => TrackedPoint {
            coordinates: x,
            status: TrackStatus::SingularEndpoint,
            residual: f64::INFINITY,
            pre_refinement_residual,
            steps,
        },
    }
}

fn corrected_step(h: &dyn PathSystem, x: &[C64], t: f64, t_next: f64, settings: &TrackSettings) -> Option<Vec<C64>> {
    let e = h.evaluate(x, t);
    let rhs: Vec<C64> = e.dt.iter().map(|v| -v).collect();
    let tangent = solve(&e.jacobian, &rhs).ok()?;
    let dt = t_next - t;
    let mut y: Vec<C64> = x.iter().zip(&tangent).map(|(a, v)| a + v * dt).collect();
    let mut previous: Option<f64> = None;
    for _ in 0..settings.max_corrector_iterations {
        let (delta, _) = newton_step(h, &y, t_next).ok()?;
        for (p, d) in y.iter_mut().zip(&delta) {
            *p += d;
        }
        let size = max_norm(&delta);
        if !size.is_finite() {
            return None;
        }
        if size <= settings.corrector_tolerance * scale_of(&y) {
            return Some(y);
        }
        if let Some(prev) = previous {
            if size > 0.5 * prev {
                return None;
            }
        }
        previous = Some(size);
    }
    None
}

/// Newton's method on a square polynomial system.
///
/// Returns `Err(SingularJacobian)` when an iterate has an exactly singular
/// Jacobian, and a [`TrackStatus::SingularEndpoint`] point when the
/// iteration does not converge quadratically to `tolerance`.
pub fn newton_refine(system: &[Polynomial], point: &[C64], tolerance: f64, max_iters: usize) -> Result<TrackedPoint> {
    let n = square_arity(system)?;
    if point.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: point.len(),
        });
    }
    let sys = StaticSystem {
        eval: SystemEvaluator::new(system, n)?,
    };
    let pre = residual_at(&sys, point, 1.0);
    let Refined { point, converged } = refine_at(&sys, point, 1.0, tolerance, max_iters)?;
    let residual = residual_at(&sys, &point, 1.0);
    Ok(TrackedPoint {
        coordinates: point,
        status: if converged {
            TrackStatus::Success
        } else {
            TrackStatus::SingularEndpoint
        },
        residual,
        pre_refinement_residual: pre,
        steps: 0,
    })
}

/// All paths of a total-degree homotopy plus the deduplicated finite
/// solutions they reached.
#[derive(Clone, Debug)]
pub struct TotalDegreeSolution {
    pub paths: Vec<TrackedPoint>,
    pub solutions: Vec<Vec<C64>>,
    pub gamma: C64,
}

/// Refuse total-degree solves with more paths than this.
pub const MAX_TOTAL_DEGREE_PATHS: usize = 1 << 20;

/// Solves a square system from the start system `x_i^{d_i} - 1`.
pub fn solve_total_degree(system: &[Polynomial], settings: &TrackSettings, seed: u64) -> Result<TotalDegreeSolution> {
    let n = square_arity(system)?;
    settings.validate()?;
    let degrees: Vec<u32> = system
        .iter()
        .map(|p| match p.degree() {
            d if d >= 1 => Ok(d as u32),
            _ => Err(Error::InvalidProblem("every equation needs positive degree".into())),
        })
        .collect::<Result<_>>()?;
    let total = degrees
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
        .filter(|&t| t <= MAX_TOTAL_DEGREE_PATHS)
        .ok_or_else(|| Error::InvalidProblem("Bezout number too large for a total-degree solve".into()))?;

    let start: Vec<Polynomial> = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let mut e = alloc::vec![0; n];
            e[i] = d;
            &Polynomial::monomial(e, C64::new(1.0, 0.0)) - &Polynomial::constant(n, C64::new(1.0, 0.0))
        })
        .collect();
    let mut rng = random::rng_from_seed(seed);
    let gamma = random::unit_complex(&mut rng);
    let homotopy = Homotopy::new(&start, system, gamma)?;

    let paths = par::map_indexed(total, |index| {
        let root = start_root(&degrees, index);
        track_path(&homotopy, &root, settings)
    });
    let mut solutions: Vec<Vec<C64>> = Vec::new();
    for p in paths.iter().filter(|p| p.is_success()) {
        if !solutions.iter().any(|s| points_match(s, &p.coordinates, 1e-6)) {
            solutions.push(p.coordinates.clone());
        }
    }
    if solutions.is_empty() {
        return Err(Error::Tracking(format!("all {total} total-degree paths failed")));
    }
    Ok(TotalDegreeSolution { paths, solutions, gamma })
}

/// The `index`-th tuple of roots of unity in mixed radix over `degrees`.
fn start_root(degrees: &[u32], mut index: usize) -> Vec<C64> {
    degrees
        .iter()
        .map(|&d| {
            let k = index % d as usize;
            index /= d as usize;
            let angle = TAU * k as f64 / d as f64;
            C64::new(libm::cos(angle), libm::sin(angle))
        })
        .collect()
}

/// Max-norm comparison relative to the larger of the two magnitudes (and 1).
pub fn points_match(a: &[C64], b: &[C64], tolerance: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let scale = max_norm(a).max(max_norm(b)).max(1.0);
    a.iter().zip(b).all(|(p, q)| (p - q).norm() <= tolerance * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    fn polys(texts: &[&str], vars: &[&str]) -> Vec<Polynomial> {
        texts.iter().map(|t| parse_polynomial(t, vars).unwrap()).collect()
    }

    #[test]
    fn univariate_quadratic_path() {
        let start = polys(&["x^2 - 1"], &["x"]);
        let target = polys(&["x^2 - 4"], &["x"]);
        let h = Homotopy::new(&start, &target, C64::new(0.6, 0.8)).unwrap();
        let p = track_path(&h, &[C64::new(1.0, 0.0)], &TrackSettings::default());
        assert!(p.is_success());
        assert!((p.coordinates[0].norm() - 2.0).abs() < 1e-10);
        assert!(p.residual < 1e-10);
    }

    #[test]
    fn identity_homotopy_stays_put() {
        let sys = polys(&["x^2 + y - 3", "x - y + 1"], &["x", "y"]);
        let h = Homotopy::new(&sys, &sys, C64::new(1.0, 0.0)).unwrap();
        let root = [C64::new(1.0, 0.0), C64::new(2.0, 0.0)];
        let p = track_path(&h, &root, &TrackSettings::default());
        assert!(p.is_success());
        assert!(points_match(&p.coordinates, &root, 1e-12));
    }

    #[test]
    fn total_degree_univariate() {
        let s = solve_total_degree(&polys(&["x^2 - 1"], &["x"]), &TrackSettings::default(), 1).unwrap();
        assert_eq!(s.solutions.len(), 2);
        let s = solve_total_degree(&polys(&["x^2 + 1"], &["x"]), &TrackSettings::default(), 1).unwrap();
        let mut ims: Vec<f64> = s.solutions.iter().map(|p| p[0].im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-10 && (ims[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn newton_from_nearby_and_from_critical_point() {
        let sys = polys(&["x^2 - 1"], &["x"]);
        let p = newton_refine(&sys, &[C64::new(1.001, 0.0)], 1e-11, 10).unwrap();
        assert!(p.is_success());
        assert!((p.coordinates[0] - C64::new(1.0, 0.0)).norm() < 1e-11);
        assert_eq!(
            newton_refine(&sys, &[C64::new(0.0, 0.0)], 1e-11, 10),
            Err(Error::SingularJacobian)
        );
    }

    #[test]
    fn newton_flags_double_root() {
        let sys = polys(&["(x - 1)^2"], &["x"]);
        let p = newton_refine(&sys, &[C64::new(1.01, 0.0)], 1e-11, 30).unwrap();
        assert_eq!(p.status, TrackStatus::SingularEndpoint);
    }

    #[test]
    fn rejects_non_square_and_bad_gamma() {
        let sys = polys(&["x + y"], &["x", "y"]);
        assert!(solve_total_degree(&sys, &TrackSettings::default(), 0).is_err());
        let one = polys(&["x - 1"], &["x"]);
        assert!(Homotopy::new(&one, &one, C64::new(2.0, 0.0)).is_err());
    }
}
