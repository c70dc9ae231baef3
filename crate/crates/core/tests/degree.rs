use implicitize_core::degree::{numerical_image_degree, trace_test, DegreeEvent, DegreeSettings, PseudoWitnessSet};
use implicitize_core::linalg::max_norm;
use implicitize_core::membership::is_on_image;
use implicitize_core::problem::{make_cone_map, ProblemSpec};
use implicitize_core::random::{derive_seed, gaussian_complex, rng_from_seed};
use implicitize_core::sampler::{build_source_witness, generator_residual, numerical_image_sample, SourceWitness};
use implicitize_core::tracker::points_match;
use implicitize_core::{Settings, C64, POINT_MATCH_TOLERANCE};
use rand::seq::index::sample;

mod common;

struct Case {
    name: &'static str,
    spec: ProblemSpec,
    expected: usize,
}

fn monomial_case(name: &'static str, vars: &[&str], exponents: Vec<Vec<u32>>) -> Case {
    let map = common::monomial_strings(vars, &exponents);
    let map: Vec<&str> = map.iter().map(String::as_str).collect();
    Case {
        name,
        spec: common::spec(vars, &[], &map, true),
        expected: common::monomial_degree(&exponents),
    }
}

fn oracle_cases() -> Vec<Case> {
    vec![
        monomial_case("twisted cubic", &["s", "t"], common::rational_normal_curve(3)),
        monomial_case("veronese surface", &["a", "b", "c"], common::veronese(3, 2)),
        monomial_case("rational normal quartic", &["s", "t"], common::rational_normal_curve(4)),
    ]
}

fn run(spec: &ProblemSpec, seed: u64) -> (SourceWitness, PseudoWitnessSet, Vec<DegreeEvent>) {
    let settings = Settings::default();
    let w = build_source_witness(spec, seed, &settings).unwrap();
    let cone = make_cone_map(spec).unwrap();
    let mut events = Vec::new();
    let pws = numerical_image_degree(spec, &w, &cone, seed, &settings, &DegreeSettings::default(), &mut |e| {
        events.push(e.clone())
    })
    .unwrap();
    (w, pws, events)
}

#[test]
fn oracle_values_are_frozen() {
    let degrees: Vec<usize> = oracle_cases().iter().map(|c| c.expected).collect();
    assert_eq!(degrees, [3, 4, 4]);
}

#[test]
fn degrees_match_oracle_across_seeds() {
    for case in oracle_cases() {
        for seed in [1, 2, 3] {
            let (_, pws, _) = run(&case.spec, seed);
            assert!(pws.is_complete(), "{} seed {seed}", case.name);
            assert_eq!(pws.degree(), case.expected, "{} seed {seed}", case.name);
            assert!(pws.degree() as u128 <= pws.bezout_bound());
        }
    }
}

#[test]
fn witness_set_invariants() {
    for case in oracle_cases() {
        let (_, pws, events) = run(&case.spec, 9);
        let log = pws.loop_log();
        assert!(log.windows(2).all(|w| w[0] <= w[1]));
        let found: Vec<usize> = events
            .iter()
            .filter_map(|e| match e {
                DegreeEvent::PointsFound { points, .. } => Some(*points),
                _ => None,
            })
            .collect();
        assert_eq!(found, log);
        for (i, p) in pws.pairs().iter().enumerate() {
            assert!(max_norm(&pws.slice().evaluate(&p.image)) <= 1e-6);
            assert!(generator_residual(pws.cone().generators(), &p.source) <= 1e-8);
            for q in &pws.pairs()[i + 1..] {
                assert!(!points_match(&p.image, &q.image, POINT_MATCH_TOLERANCE));
            }
        }
    }
}

#[test]
fn trace_test_rejects_proper_subsets() {
    let settings = Settings::default();
    for case in oracle_cases() {
        let (_, pws, _) = run(&case.spec, 4);
        assert!(trace_test(&pws, 77, &settings).unwrap(), "{}", case.name);
        let d = pws.degree();
        let mut rng = rng_from_seed(5);
        for trial in 0..3 {
            let size = 1 + trial % (d - 1);
            let mut keep = sample(&mut rng, d, size).into_vec();
            keep.sort();
            assert!(!trace_test(&pws.restricted(&keep), 78 + trial as u64, &settings).unwrap(), "{} {keep:?}", case.name);
        }
    }
}

#[test]
fn membership_on_twisted_cubic() {
    let case = &oracle_cases()[0];
    let settings = Settings::default();
    let (w, pws, _) = run(&case.spec, 6);
    let cone = pws.cone().clone();
    let on = numerical_image_sample(&w, &cone, 20, 600, &settings).unwrap();
    for (k, y) in on.iter().enumerate() {
        let r = is_on_image(&pws, y, POINT_MATCH_TOLERANCE, derive_seed(6, 1, k as u64), &settings).unwrap();
        assert!(r.is_member, "sample {k}: {r:?}");
    }
    let mut rng = rng_from_seed(61);
    for k in 0..20 {
        let y: Vec<C64> = (0..4).map(|_| gaussian_complex(&mut rng)).collect();
        let r = is_on_image(&pws, &y, POINT_MATCH_TOLERANCE, derive_seed(6, 2, k), &settings).unwrap();
        assert!(!r.is_member, "random point {k}: {r:?}");
    }
}

#[test]
fn fixed_seed_is_reproducible() {
    let case = &oracle_cases()[1];
    let (_, a, _) = run(&case.spec, 12);
    let (_, b, _) = run(&case.spec, 12);
    assert_eq!(a.pairs(), b.pairs());
    assert_eq!(a.loop_log(), b.loop_log());
}

#[test]
fn conic_source_variety() {
    // A plane conic embedded linearly in P^3 has degree 2.
    let spec = common::spec(&["x", "y", "z"], &["x*z - y^2"], &["x", "y", "z", "x + y + z"], true);
    let (_, pws, _) = run(&spec, 3);
    assert!(pws.is_complete());
    assert_eq!(pws.degree(), 2);
}
