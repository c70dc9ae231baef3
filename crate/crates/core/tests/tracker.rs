use implicitize_core::parse::parse_polynomial;
use implicitize_core::poly::Polynomial;
use implicitize_core::random::{gaussian_complex, rng_from_seed};
use implicitize_core::tracker::{newton_refine, solve_total_degree, TrackSettings};
use implicitize_core::C64;
use proptest::prelude::*;

/// Roots of `sum c_k z^k` by Weierstrass (Durand-Kerner) iteration.
fn durand_kerner(coeffs: &[C64]) -> Vec<C64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let monic: Vec<C64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: C64| monic.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..d).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut change: f64 = 0.0;
        for i in 0..d {
            let denom: C64 = (0..d).filter(|&j| j != i).map(|j| roots[i] - roots[j]).product();
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            change = change.max(step.norm());
        }
        if change < 1e-15 {
            break;
        }
    }
    roots
}

fn univariate(coeffs: &[C64]) -> Polynomial {
    Polynomial::from_terms(1, coeffs.iter().enumerate().map(|(k, c)| (vec![k as u32], *c))).unwrap()
}

fn same_sets(a: &[Vec<C64>], b: &[Vec<C64>], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| {
            b.iter()
                .any(|q| p.iter().zip(q).all(|(x, y)| (x - y).norm() <= tol * x.norm().max(1.0)))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn univariate_roots_match_durand_kerner(seed in any::<u64>(), d in 1usize..8) {
        let mut rng = rng_from_seed(seed);
        let coeffs: Vec<C64> = (0..=d).map(|_| gaussian_complex(&mut rng)).collect();
        let oracle: Vec<Vec<C64>> = durand_kerner(&coeffs).into_iter().map(|z| vec![z]).collect();
        let solved = solve_total_degree(&[univariate(&coeffs)], &TrackSettings::default(), seed).unwrap();
        prop_assert!(same_sets(&solved.solutions, &oracle, 1e-8), "{:?} vs {:?}", solved.solutions, oracle);
    }

    #[test]
    fn endpoint_residuals(seed in any::<u64>()) {
        let vars = ["x", "y"];
        let mut rng = rng_from_seed(seed);
        let c: Vec<C64> = (0..4).map(|_| gaussian_complex(&mut rng)).collect();
        let f = parse_polynomial(&format!("x^2 + ({}+{}i)*x*y - y^2 + 1", c[0].re, c[0].im), &vars).unwrap();
        let g = parse_polynomial(&format!("x*y^2 - ({}+{}i)*y + ({}+{}i)", c[1].re, c[1].im, c[2].re, c[2].im), &vars).unwrap();
        let solved = solve_total_degree(&[f, g], &TrackSettings::default(), seed).unwrap();
        for p in solved.paths.iter().filter(|p| p.is_success()) {
            prop_assert!(p.pre_refinement_residual <= 1e-6);
            prop_assert!(p.residual <= 1e-10);
        }
    }
}

#[test]
fn conic_intersection() {
    // x^2 + y^2 = 5, x y = 2 meets at (±1, ±2) and (±2, ±1) with equal signs.
    let vars = ["x", "y"];
    let system = [
        parse_polynomial("x^2 + y^2 - 5", &vars).unwrap(),
        parse_polynomial("x*y - 2", &vars).unwrap(),
    ];
    let r = |a: f64, b: f64| vec![C64::new(a, 0.0), C64::new(b, 0.0)];
    let expected = [r(1.0, 2.0), r(-1.0, -2.0), r(2.0, 1.0), r(-2.0, -1.0)];
    let solved = solve_total_degree(&system, &TrackSettings::default(), 3).unwrap();
    assert!(same_sets(&solved.solutions, &expected, 1e-10));
}

#[test]
fn gamma_independence_and_determinism() {
    let vars = ["x", "y"];
    let system = [
        parse_polynomial("x^3 - 2*x*y + 1", &vars).unwrap(),
        parse_polynomial("y^2 - x - 3", &vars).unwrap(),
    ];
    let settings = TrackSettings::default();
    let a = solve_total_degree(&system, &settings, 10).unwrap();
    let b = solve_total_degree(&system, &settings, 11).unwrap();
    assert_ne!(a.gamma, b.gamma);
    assert_eq!(a.solutions.len(), 6);
    assert!(same_sets(&a.solutions, &b.solutions, 1e-9));
    let again = solve_total_degree(&system, &settings, 10).unwrap();
    assert_eq!(a.solutions, again.solutions);
}

#[test]
fn refinement_reaches_tolerance() {
    let system = [parse_polynomial("x^2 - 2", &["x"]).unwrap()];
    let p = newton_refine(&system, &[C64::new(1.4, 0.0)], 1e-11, 10).unwrap();
    assert!(p.is_success());
    assert!(p.residual <= 1e-10);
    assert!((p.coordinates[0].re - std::f64::consts::SQRT_2).abs() < 1e-14);
}
