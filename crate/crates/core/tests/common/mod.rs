#![allow(dead_code)]

use std::collections::BTreeSet;

use implicitize_core::problem::ProblemSpec;

pub fn spec(vars: &[&str], ideal: &[&str], map: &[&str], homogeneous: bool) -> ProblemSpec {
    ProblemSpec::parse(vars.iter().map(|v| v.to_string()).collect(), ideal, map, homogeneous).unwrap()
}

/// Exponent vectors of the monomials `s^(d-i) t^i`.
pub fn rational_normal_curve(d: u32) -> Vec<Vec<u32>> {
    (0..=d).map(|i| vec![d - i, i]).collect()
}

/// Exponent vectors of all degree-`d` monomials in `k` variables.
pub fn veronese(k: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(k - 1, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, d, &mut Vec::new(), &mut out);
    out
}

/// Map strings for a monomial map in variables `vars`.
pub fn monomial_strings(vars: &[&str], exponents: &[Vec<u32>]) -> Vec<String> {
    exponents
        .iter()
        .map(|e| {
            let parts: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            parts.join("*")
        })
        .collect()
}

/// Dimension of the degree-`d` part of the coordinate ring of the image
/// of a monomial map: products of `d` monomials are monomials, and distinct
/// monomials are independent, so it is the number of distinct sums of `d`
/// exponent vectors.
pub fn monomial_coordinate_ring_dim(exponents: &[Vec<u32>], d: u32) -> usize {
    let mut sums: BTreeSet<Vec<u32>> = BTreeSet::new();
    sums.insert(vec![0; exponents[0].len()]);
    for _ in 0..d {
        let mut next = BTreeSet::new();
        for s in &sums {
            for e in exponents {
                next.insert(s.iter().zip(e).map(|(a, b)| a + b).collect());
            }
        }
        sums = next;
    }
    sums.len()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim I_d` for the image of a monomial map with `m` components.
pub fn monomial_ideal_dim(exponents: &[Vec<u32>], d: u32) -> usize {
    let m = exponents.len();
    binomial(m - 1 + d as usize, d as usize) - monomial_coordinate_ring_dim(exponents, d)
}

/// Degree of the projective image of a monomial map, read off the Hilbert
/// polynomial: the first constant iterated difference of `d -> H(d)`.
pub fn monomial_degree(exponents: &[Vec<u32>]) -> usize {
    let mut values: Vec<i64> = (4..16)
        .map(|d| monomial_coordinate_ring_dim(exponents, d) as i64)
        .collect();
    loop {
        if values.windows(2).all(|w| w[0] == w[1]) {
            return values[0] as usize;
        }
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(values.len() >= 3, "Hilbert function did not become polynomial");
    }
}
