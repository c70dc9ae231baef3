//! Sparse multivariate polynomials with complex double coefficients.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::{random, Error, Result, C64};

/// Exponent vector; its length is the number of variables.
pub type Exponent = Vec<u32>;

/// A polynomial in `num_vars` variables stored as a map from exponent
/// vectors to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Exponent, C64>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: C64) -> Self {
        Self::monomial(vec![0; num_vars], value)
    }

    /// The coordinate function `x_index`.
    pub fn variable(num_vars: usize, index: usize) -> Self {
        assert!(index < num_vars, "variable index out of range");
        let mut exponent = vec![0; num_vars];
        exponent[index] = 1;
        Self::monomial(exponent, C64::new(1.0, 0.0))
    }

    pub fn monomial(exponent: Exponent, coefficient: C64) -> Self {
        let mut p = Polynomial::zero(exponent.len());
        if coefficient != C64::new(0.0, 0.0) {
            p.terms.insert(exponent, coefficient);
        }
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging
    /// repeated exponents and dropping exact zeros.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, C64)>,
    {
        let mut p = Polynomial::zero(num_vars);
        for (exponent, coefficient) in terms {
            if exponent.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: exponent.len(),
                });
            }
            p.add_term(exponent, coefficient);
        }
        Ok(p)
    }

    fn add_term(&mut self, exponent: Exponent, coefficient: C64) {
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Vacant(slot) => {
                if coefficient != C64::new(0.0, 0.0) {
                    slot.insert(coefficient);
                }
            }
            Entry::Occupied(mut slot) => {
                let sum = *slot.get() + coefficient;
                if sum == C64::new(0.0, 0.0) {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponent: &[u32]) -> C64 {
        self.terms
            .get(exponent)
            .copied()
            .unwrap_or(C64::new(0.0, 0.0))
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| total_degree(e) as i64)
            .max()
            .unwrap_or(-1)
    }

    /// True when every term has the same total degree (the zero polynomial
    /// counts as homogeneous).
    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| total_degree(e));
        match degrees.next() {
            None => true,
            Some(first) => degrees.all(|d| d == first),
        }
    }

    pub fn evaluate(&self, point: &[C64]) -> Result<C64> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c * monomial_value(e, point))
            .sum())
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        assert!(var < self.num_vars, "variable index out of range");
        let mut out = Polynomial::zero(self.num_vars);
        for (exponent, coefficient) in &self.terms {
            let power = exponent[var];
            if power == 0 {
                continue;
            }
            let mut lowered = exponent.clone();
            lowered[var] -= 1;
            out.add_term(lowered, coefficient * power as f64);
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Polynomial {
        let mut out = Polynomial::zero(self.num_vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * factor);
        }
        out
    }

    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut result = Polynomial::constant(self.num_vars, C64::new(1.0, 0.0));
        for _ in 0..exponent {
            result = &result * self;
        }
        result
    }

    /// Re-embeds the polynomial into `num_vars` variables, moving variable
    /// `i` to position `i + offset`.
    pub fn embed(&self, num_vars: usize, offset: usize) -> Polynomial {
        assert!(offset + self.num_vars <= num_vars, "embedding does not fit");
        let mut out = Polynomial::zero(num_vars);
        for (e, c) in &self.terms {
            let mut lifted = vec![0; num_vars];
            lifted[offset..offset + self.num_vars].copy_from_slice(e);
            out.add_term(lifted, *c);
        }
        out
    }
}

pub(crate) fn total_degree(exponent: &[u32]) -> u32 {
    exponent.iter().sum()
}

fn monomial_value(exponent: &[u32], point: &[C64]) -> C64 {
    exponent
        .iter()
        .zip(point)
        .filter(|(e, _)| **e > 0)
        .map(|(e, x)| x.powu(*e))
        .product()
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "arity mismatch");
        let mut out = Polynomial::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl fmt::Display for Polynomial {
    /// Writes the polynomial in the parser's grammar with variables named
    /// `x0, x1, ...`. Use [`Polynomial::display_with`] for custom names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<alloc::string::String> = (0..self.num_vars)
            .map(|i| alloc::format!("x{i}"))
            .collect();
        DisplayWith { poly: self, names: &names }.fmt(f)
    }
}

impl Polynomial {
    /// Formats the polynomial using the given variable names. Terms appear
    /// in descending graded-lexicographic order; coefficients are written
    /// with round-trip precision.
    pub fn display_with<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> impl fmt::Display + 'a {
        DisplayWith { poly: self, names }
    }
}

struct DisplayWith<'a, S> {
    poly: &'a Polynomial,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for DisplayWith<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exponent, &C64)> = self.poly.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        for (k, (exponent, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (var, power) in exponent.iter().enumerate() {
                match power {
                    0 => {}
                    1 => write!(f, "*{}", self.names[var].as_ref())?,
                    p => write!(f, "*{}^{}", self.names[var].as_ref(), p)?,
                }
            }
        }
        Ok(())
    }
}

/// Graded lexicographic comparison of exponent vectors.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> core::cmp::Ordering {
    total_degree(a).cmp(&total_degree(b)).then_with(|| a.cmp(b))
}

/// An ordered list of polynomials sharing one set of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMap {
    components: Vec<Polynomial>,
}

impl PolynomialMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidProblem("map has no components".into()))?;
        let n = first.num_vars();
        if let Some(bad) = components.iter().find(|p| p.num_vars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.num_vars(),
            });
        }
        Ok(PolynomialMap { components })
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn source_dim(&self) -> usize {
        self.components[0].num_vars()
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn evaluate(&self, point: &[C64]) -> Result<Vec<C64>> {
        self.components.iter().map(|p| p.evaluate(point)).collect()
    }
}

/// Matrix of formal partial derivatives: row `i` holds the gradient of
/// `polys[i]`.
pub fn jacobian(polys: &[Polynomial]) -> Result<Vec<Vec<Polynomial>>> {
    let Some(first) = polys.first() else {
        return Ok(Vec::new());
    };
    let n = first.num_vars();
    if let Some(bad) = polys.iter().find(|p| p.num_vars() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.num_vars(),
        });
    }
    Ok(polys
        .iter()
        .map(|p| (0..n).map(|j| p.derivative(j)).collect())
        .collect())
}

/// All exponent vectors of total degree exactly `degree` in `num_vars`
/// variables, in graded-lexicographic order (`x0^d` first).
pub fn monomial_basis(degree: u32, num_vars: usize) -> Vec<Exponent> {
    let mut out = Vec::new();
    if num_vars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut current = vec![0; num_vars];
    fill_basis(&mut out, &mut current, 0, degree);
    out
}

fn fill_basis(out: &mut Vec<Exponent>, current: &mut Exponent, var: usize, remaining: u32) {
    if var + 1 == current.len() {
        current[var] = remaining;
        out.push(current.clone());
        return;
    }
    for power in (0..=remaining).rev() {
        current[var] = power;
        fill_basis(out, current, var + 1, remaining - power);
    }
    current[var] = 0;
}

/// `binom(n, k)` in `u128`, saturating on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// A polynomial with every monomial of degree `<= degree` (or exactly
/// `degree` when `homogeneous`) and generic random coefficients.
pub fn random_dense<R: Rng + ?Sized>(
    num_vars: usize,
    degree: u32,
    homogeneous: bool,
    rng: &mut R,
) -> Polynomial {
    let low = if homogeneous { degree } else { 0 };
    let mut p = Polynomial::zero(num_vars);
    for d in low..=degree {
        for e in monomial_basis(d, num_vars) {
            p.add_term(e, random::gaussian_complex(rng));
        }
    }
    p
}

/// A list of polynomials compiled for fast repeated evaluation of values
/// and Jacobians.
#[derive(Clone, Debug)]
pub struct SystemEvaluator {
    num_vars: usize,
    max_power: Vec<u32>,
    power_offset: Vec<usize>,
    /// Term ranges per polynomial.
    poly_terms: Vec<core::ops::Range<usize>>,
    term_coeff: Vec<C64>,
    term_factors: Vec<core::ops::Range<usize>>,
    factors: Vec<(usize, u32)>,
}

impl SystemEvaluator {
    pub fn new(polys: &[Polynomial], num_vars: usize) -> Result<Self> {
        let mut max_power = vec![0u32; num_vars];
        let mut poly_terms = Vec::with_capacity(polys.len());
        let mut term_coeff = Vec::new();
        let mut term_factors = Vec::new();
        let mut factors = Vec::new();
        for p in polys {
            if p.num_vars() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: p.num_vars(),
                });
            }
            let start = term_coeff.len();
            for (e, c) in p.terms() {
                let fstart = factors.len();
                for (v, &power) in e.iter().enumerate() {
                    if power > 0 {
                        factors.push((v, power));
                        max_power[v] = max_power[v].max(power);
                    }
                }
                term_factors.push(fstart..factors.len());
                term_coeff.push(*c);
            }
            poly_terms.push(start..term_coeff.len());
        }
        let mut power_offset = Vec::with_capacity(num_vars);
        let mut offset = 0;
        for &m in &max_power {
            power_offset.push(offset);
            offset += m as usize + 1;
        }
        Ok(SystemEvaluator {
            num_vars,
            max_power,
            power_offset,
            poly_terms,
            term_coeff,
            term_factors,
            factors,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_polys(&self) -> usize {
        self.poly_terms.len()
    }

    fn power_table(&self, x: &[C64]) -> Vec<C64> {
        let total = self.power_offset.last().map_or(0, |o| {
            o + *self.max_power.last().unwrap() as usize + 1
        });
        let mut table = vec![C64::new(1.0, 0.0); total];
        for ((&base, &max), &xv) in self.power_offset.iter().zip(&self.max_power).zip(x) {
            for k in 1..=max as usize {
                table[base + k] = table[base + k - 1] * xv;
            }
        }
        table
    }

    pub fn evaluate(&self, x: &[C64]) -> Vec<C64> {
        debug_assert_eq!(x.len(), self.num_vars);
        let table = self.power_table(x);
        self.poly_terms
            .iter()
            .map(|range| {
                range
                    .clone()
                    .map(|t| {
                        let mut value = self.term_coeff[t];
                        for &(v, p) in &self.factors[self.term_factors[t].clone()] {
                            value *= table[self.power_offset[v] + p as usize];
                        }
                        value
                    })
                    .sum()
            })
            .collect()
    }

    /// Values and the row-major `num_polys x num_vars` Jacobian at `x`.
    pub fn evaluate_with_jacobian(&self, x: &[C64]) -> (Vec<C64>, Vec<C64>) {
        debug_assert_eq!(x.len(), self.num_vars);
        let n = self.num_vars;
        let table = self.power_table(x);
        let mut values = vec![C64::new(0.0, 0.0); self.num_polys()];
        let mut jac = vec![C64::new(0.0, 0.0); self.num_polys() * n];
        for (i, range) in self.poly_terms.iter().enumerate() {
            let row = &mut jac[i * n..(i + 1) * n];
            for t in range.clone() {
                let coeff = self.term_coeff[t];
                let fs = &self.factors[self.term_factors[t].clone()];
                let mut value = coeff;
                for &(v, p) in fs {
                    value *= table[self.power_offset[v] + p as usize];
                }
                values[i] += value;
                for (k, &(v, p)) in fs.iter().enumerate() {
                    let mut d = coeff * p as f64 * table[self.power_offset[v] + p as usize - 1];
                    for (j, &(w, q)) in fs.iter().enumerate() {
                        if j != k {
                            d *= table[self.power_offset[w] + q as usize];
                        }
                    }
                    row[v] += d;
                }
            }
        }
        (values, jac)
    }
}
