//! JSON documents: problem files, witness files and result envelopes.
//!
//! Complex numbers are written as `[re, im]`.

use implicitize_core::degree::{PseudoWitnessSet, WitnessPair};
use implicitize_core::linalg::ComplexMatrix;
use implicitize_core::problem::{make_cone_map, ProblemSpec};
use implicitize_core::slice::Slice;
use implicitize_core::C64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Complex(pub f64, pub f64);

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Complex(z.re, z.im)
    }
}

impl From<Complex> for C64 {
    fn from(z: Complex) -> Self {
        C64::new(z.0, z.1)
    }
}

pub fn to_json_vec(v: &[C64]) -> Vec<Complex> {
    v.iter().map(|&z| z.into()).collect()
}

pub fn from_json_vec(v: &[Complex]) -> Vec<C64> {
    v.iter().map(|&z| z.into()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub ideal: Vec<String>,
    pub map: Vec<String>,
    #[serde(default)]
    pub homogeneous: bool,
}

impl ProblemFile {
    pub fn to_spec(&self) -> implicitize_core::Result<ProblemSpec> {
        ProblemSpec::parse(self.variables.clone(), &self.ideal, &self.map, self.homogeneous)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceFile {
    pub coefficients: Vec<Vec<Complex>>,
    pub constants: Vec<Complex>,
}

impl SliceFile {
    pub fn from_slice(s: &Slice) -> Self {
        let a = s.coefficients();
        SliceFile {
            coefficients: (0..a.rows()).map(|i| to_json_vec(a.row(i))).collect(),
            constants: to_json_vec(s.constants()),
        }
    }

    pub fn to_slice(&self, ambient_dim: usize) -> implicitize_core::Result<Slice> {
        let rows: Vec<Vec<C64>> = self.coefficients.iter().map(|r| from_json_vec(r)).collect();
        let a = ComplexMatrix::from_rows(ambient_dim, &rows)?;
        Slice::new(a, from_json_vec(&self.constants))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub source: Vec<Complex>,
    pub image: Vec<Complex>,
}

/// A persisted pseudo-witness set together with the problem it solves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub problem: ProblemFile,
    pub cone_dim: usize,
    pub slice: SliceFile,
    pub squaring: SliceFile,
    pub pairs: Vec<PairFile>,
    pub degree: usize,
    pub is_complete: bool,
    pub loop_log: Vec<usize>,
}

impl WitnessFile {
    pub fn new(problem: &ProblemFile, pws: &PseudoWitnessSet) -> Self {
        WitnessFile {
            problem: problem.clone(),
            cone_dim: pws.cone_dim(),
            slice: SliceFile::from_slice(pws.slice()),
            squaring: SliceFile::from_slice(pws.squaring()),
            pairs: pws
                .pairs()
                .iter()
                .map(|p| PairFile {
                    source: to_json_vec(&p.source),
                    image: to_json_vec(&p.image),
                })
                .collect(),
            degree: pws.degree(),
            is_complete: pws.is_complete(),
            loop_log: pws.loop_log().to_vec(),
        }
    }

    pub fn to_witness_set(&self) -> implicitize_core::Result<PseudoWitnessSet> {
        let cone = make_cone_map(&self.problem.to_spec()?)?;
        let slice = self.slice.to_slice(cone.ambient_dim())?;
        if slice.num_forms() != self.cone_dim || self.pairs.len() != self.degree {
            return Err(implicitize_core::Error::InvalidProblem(
                "witness file is inconsistent: cone_dim or degree disagrees with its contents".into(),
            ));
        }
        let squaring = self.squaring.to_slice(cone.cone_source_dim())?;
        let pairs = self
            .pairs
            .iter()
            .map(|p| WitnessPair {
                source: from_json_vec(&p.source),
                image: from_json_vec(&p.image),
            })
            .collect();
        PseudoWitnessSet::from_parts(cone, slice, squaring, pairs, self.is_complete, self.loop_log.clone())
    }
}

/// Options that shaped a result, echoed back for reproducibility.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SettingsEcho {
    pub gap_threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_arg: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_repetitive_monodromies: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_trace_tests: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loop_limit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub which: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HilbertTable {
    pub degree: u32,
    pub hilbert_value: usize,
    pub num_monomials: usize,
    pub singular_values: Vec<f64>,
    pub largest_gap: Option<f64>,
    pub extra_row_kernel_dim: usize,
    /// Kernel vectors over the graded-lex monomial basis.
    pub equations: Vec<Vec<Complex>>,
    pub points: Vec<Vec<Complex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation_matrix: Option<Vec<Vec<Complex>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Payload {
    Dim {
        dimension: usize,
    },
    Hilbert(HilbertTable),
    Degree {
        degree: usize,
        is_complete: bool,
        cone_dim: usize,
        loop_log: Vec<usize>,
    },
    Member {
        is_member: bool,
        failed_paths: usize,
        singular_endpoints: usize,
        closest_distance: Option<f64>,
    },
    Sample {
        which: String,
        points: Vec<Vec<Complex>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub command: String,
    pub seed: u64,
    pub settings: SettingsEcho,
    pub wall_time_seconds: f64,
    pub payload: Payload,
}
