use implicitize_core::parse::parse_polynomial;
use implicitize_core::poly::{binomial, grlex_cmp, jacobian, monomial_basis, random_dense, SystemEvaluator};
use implicitize_core::problem::make_cone_map;
use implicitize_core::random::{gaussian_complex, rng_from_seed};
use implicitize_core::C64;
use proptest::prelude::*;

mod common;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn point(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| gaussian_complex(&mut rng)).collect()
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #[test]
    fn display_parses_back(seed in any::<u64>(), n in 1usize..4, d in 0u32..5) {
        let p = random_dense(n, d, false, &mut rng_from_seed(seed));
        let vars = names(n);
        let text = p.display_with(&vars).to_string();
        let q = parse_polynomial(&text, &vars).unwrap();
        let x = point(n, seed ^ 1);
        prop_assert!(close(p.evaluate(&x).unwrap(), q.evaluate(&x).unwrap(), 1e-12));
    }

    #[test]
    fn evaluator_agrees_with_polynomials(seed in any::<u64>(), n in 1usize..5, d in 0u32..5) {
        let mut rng = rng_from_seed(seed);
        let polys: Vec<_> = (0..3).map(|_| random_dense(n, d, false, &mut rng)).collect();
        let x = point(n, seed ^ 2);
        let eval = SystemEvaluator::new(&polys, n).unwrap();
        let (values, jac) = eval.evaluate_with_jacobian(&x);
        let symbolic = jacobian(&polys).unwrap();
        for (i, p) in polys.iter().enumerate() {
            prop_assert!(close(values[i], p.evaluate(&x).unwrap(), 1e-12));
            for j in 0..n {
                prop_assert!(close(jac[i * n + j], symbolic[i][j].evaluate(&x).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences(seed in any::<u64>(), n in 1usize..5, d in 1u32..5) {
        let mut rng = rng_from_seed(seed);
        let polys: Vec<_> = (0..2).map(|_| random_dense(n, d, false, &mut rng)).collect();
        let x: Vec<C64> = point(n, seed ^ 3).into_iter().map(|z| z * 0.5).collect();
        let eval = SystemEvaluator::new(&polys, n).unwrap();
        let (_, jac) = eval.evaluate_with_jacobian(&x);
        let h = 1e-6;
        for j in 0..n {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus[j] += h;
            minus[j] -= h;
            let (fp, fm) = (eval.evaluate(&plus), eval.evaluate(&minus));
            for i in 0..polys.len() {
                let fd = (fp[i] - fm[i]) / (2.0 * h);
                prop_assert!(close(fd, jac[i * n + j], 1e-5), "{} vs {}", fd, jac[i * n + j]);
            }
        }
    }

    #[test]
    fn jacobian_is_linear(seed in any::<u64>(), n in 1usize..4, d in 0u32..4) {
        let mut rng = rng_from_seed(seed);
        let f = random_dense(n, d, false, &mut rng);
        let g = random_dense(n, d, false, &mut rng);
        let (a, b) = (gaussian_complex(&mut rng), gaussian_complex(&mut rng));
        let combo = &f.scale(a) + &g.scale(b);
        let x = point(n, seed ^ 4);
        let (jf, jg, jc) = (jacobian(&[f]).unwrap(), jacobian(&[g]).unwrap(), jacobian(&[combo]).unwrap());
        for j in 0..n {
            let expected = a * jf[0][j].evaluate(&x).unwrap() + b * jg[0][j].evaluate(&x).unwrap();
            prop_assert!(close(jc[0][j].evaluate(&x).unwrap(), expected, 1e-10));
        }
    }

    #[test]
    fn products_evaluate_pointwise(seed in any::<u64>(), n in 1usize..4, d in 0u32..4) {
        let mut rng = rng_from_seed(seed);
        let f = random_dense(n, d, false, &mut rng);
        let g = random_dense(n, d, false, &mut rng);
        let x = point(n, seed ^ 5);
        let prod = (&f * &g).evaluate(&x).unwrap();
        prop_assert!(close(prod, f.evaluate(&x).unwrap() * g.evaluate(&x).unwrap(), 1e-10));
    }

    #[test]
    fn monomial_basis_is_complete_and_ordered(n in 1usize..6, d in 0u32..7) {
        let basis = monomial_basis(d, n);
        prop_assert_eq!(basis.len() as u128, binomial((n - 1) as u64 + d as u64, d as u64));
        prop_assert!(basis.iter().all(|e| e.iter().sum::<u32>() == d));
        prop_assert!(basis.windows(2).all(|w| grlex_cmp(&w[0], &w[1]) == std::cmp::Ordering::Greater));
    }

    #[test]
    fn augmented_cone_is_linear_in_lambda(seed in any::<u64>()) {
        let s = common::spec(&["x", "y"], &[], &["x^2 - y", "x*y + 1", "y^3"], false);
        let cone = make_cone_map(&s).unwrap();
        let z = point(3, seed);
        let mu = point(1, seed ^ 6)[0];
        let mut scaled = z.clone();
        scaled[0] *= mu;
        let (a, b) = (cone.map().evaluate(&z).unwrap(), cone.map().evaluate(&scaled).unwrap());
        for (p, q) in a.iter().zip(&b) {
            prop_assert!(close(p * mu, *q, 1e-12));
        }
    }

    #[test]
    fn homogeneous_cone_scales_by_degree(seed in any::<u64>()) {
        let s = common::spec(&["a", "b", "c"], &[], &["a^2", "a*b", "b*c", "c^2"], true);
        let cone = make_cone_map(&s).unwrap();
        let z = point(3, seed);
        let mu = point(1, seed ^ 7)[0];
        let scaled: Vec<C64> = z.iter().map(|v| v * mu).collect();
        let (a, b) = (cone.map().evaluate(&z).unwrap(), cone.map().evaluate(&scaled).unwrap());
        for (p, q) in a.iter().zip(&b) {
            prop_assert!(close(p * mu * mu, *q, 1e-12));
        }
    }
}
