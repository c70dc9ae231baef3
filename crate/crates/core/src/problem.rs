//! Problem data: source variety, map, and the affine-cone parametrization
//! used internally for everything projective.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::parse::parse_polynomial;
use crate::poly::{Polynomial, PolynomialMap};
use crate::{Error, Result, C64};

/// A source variety `X = V(I)` in affine `n`-space together with a map `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemSpec {
    variables: Vec<String>,
    ideal_generators: Vec<Polynomial>,
    map: PolynomialMap,
    homogeneous: bool,
}

impl ProblemSpec {
    /// Validates arities and, when `homogeneous` is set, that every
    /// generator and component is homogeneous with one shared map degree.
    pub fn new(
        variables: Vec<String>,
        ideal_generators: Vec<Polynomial>,
        map: PolynomialMap,
        homogeneous: bool,
    ) -> Result<Self> {
        let n = variables.len();
        if n == 0 {
            return Err(Error::InvalidProblem("no variables declared".into()));
        }
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::InvalidProblem(format!("variable `{v}` declared twice")));
            }
        }
        if map.source_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: map.source_dim(),
            });
        }
        if let Some(g) = ideal_generators.iter().find(|g| g.num_vars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.num_vars(),
            });
        }
        let spec = ProblemSpec {
            variables,
            ideal_generators,
            map,
            homogeneous,
        };
        if homogeneous {
            spec.check_homogeneous()?;
        }
        Ok(spec)
    }

    /// Parses generator and component strings over `variables`.
    pub fn parse<S: AsRef<str>>(
        variables: Vec<String>,
        ideal: &[S],
        map: &[S],
        homogeneous: bool,
    ) -> Result<Self> {
        let ideal_generators = ideal
            .iter()
            .map(|g| parse_polynomial(g.as_ref(), &variables))
            .collect::<Result<Vec<_>>>()?;
        let components = map
            .iter()
            .map(|f| parse_polynomial(f.as_ref(), &variables))
            .collect::<Result<Vec<_>>>()?;
        ProblemSpec::new(variables, ideal_generators, PolynomialMap::new(components)?, homogeneous)
    }

    fn check_homogeneous(&self) -> Result<()> {
        for (i, g) in self.ideal_generators.iter().enumerate() {
            if !g.is_homogeneous() {
                return Err(Error::NotHomogeneous(format!("ideal generator {i} is not homogeneous")));
            }
        }
        let mut degree = None;
        for (i, f) in self.map.components().iter().enumerate() {
            if !f.is_homogeneous() || f.is_zero() {
                return Err(Error::NotHomogeneous(format!("map component {i} is not homogeneous")));
            }
            match degree {
                None => degree = Some(f.degree()),
                Some(d) if d != f.degree() => {
                    return Err(Error::NotHomogeneous(format!(
                        "map component {i} has degree {} but component 0 has degree {d}",
                        f.degree()
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn ideal_generators(&self) -> &[Polynomial] {
        &self.ideal_generators
    }

    pub fn map(&self) -> &PolynomialMap {
        &self.map
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }
}

/// How the cone parametrization was obtained from `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Augmentation {
    /// `F` is homogeneous and already parametrizes the affine cone.
    None,
    /// `(lambda, x) -> lambda * (1, F(x))` with `lambda` as variable 0.
    Lambda,
}

/// Parametrization of the affine cone over the projective closure of the
/// image, with the ideal generators expressed in the cone's source
/// variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeMap {
    map: PolynomialMap,
    generators: Vec<Polynomial>,
    augmentation: Augmentation,
}

pub fn make_cone_map(spec: &ProblemSpec) -> Result<ConeMap> {
    if spec.homogeneous {
        spec.check_homogeneous()?;
        return Ok(ConeMap {
            map: spec.map.clone(),
            generators: spec.ideal_generators.clone(),
            augmentation: Augmentation::None,
        });
    }
    let n = spec.num_vars() + 1;
    let lambda = Polynomial::variable(n, 0);
    let mut components = Vec::with_capacity(spec.map.target_dim() + 1);
    components.push(lambda.clone());
    for f in spec.map.components() {
        components.push(&lambda * &f.embed(n, 1));
    }
    Ok(ConeMap {
        map: PolynomialMap::new(components)?,
        generators: spec.ideal_generators.iter().map(|g| g.embed(n, 1)).collect(),
        augmentation: Augmentation::Lambda,
    })
}

impl ConeMap {
    pub fn map(&self) -> &PolynomialMap {
        &self.map
    }

    /// Ideal generators in the cone's source variables.
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn augmentation(&self) -> Augmentation {
        self.augmentation
    }

    pub fn cone_source_dim(&self) -> usize {
        self.map.source_dim()
    }

    /// Number of coordinates of the ambient space of the cone.
    pub fn ambient_dim(&self) -> usize {
        self.map.target_dim()
    }

    /// Lifts a source point of `X` to cone source coordinates.
    pub fn lift_source(&self, x: &[C64], lambda: C64) -> Vec<C64> {
        match self.augmentation {
            Augmentation::None => x.to_vec(),
            Augmentation::Lambda => core::iter::once(lambda).chain(x.iter().copied()).collect(),
        }
    }

    /// Lifts an image point `y` of `A^m` to the cone's ambient space.
    pub fn lift_target(&self, y: &[C64]) -> Vec<C64> {
        match self.augmentation {
            Augmentation::None => y.to_vec(),
            Augmentation::Lambda => core::iter::once(C64::new(1.0, 0.0)).chain(y.iter().copied()).collect(),
        }
    }

    /// Dimension of the affine cone given the dimension of the affine image.
    pub fn cone_dim(&self, image_dim: usize) -> usize {
        match self.augmentation {
            Augmentation::None => image_dim,
            Augmentation::Lambda => image_dim + 1,
        }
    }
}
