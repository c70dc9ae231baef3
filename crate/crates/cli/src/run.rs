//! The five commands, independent of argument parsing.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use implicitize_core::degree::{numerical_image_degree, DegreeEvent, DegreeSettings};
use implicitize_core::dimension::numerical_image_dim;
use implicitize_core::interpolation::{extract_image_equations, numerical_hilbert_function};
use implicitize_core::membership::is_on_image;
use implicitize_core::problem::make_cone_map;
use implicitize_core::sampler::{affine_image_sample, build_source_witness, numerical_source_sample};
use implicitize_core::{Settings, POINT_MATCH_TOLERANCE};

use crate::format::{
    from_json_vec, to_json_vec, Complex, HilbertTable, Payload, ProblemFile, ResultEnvelope, SettingsEcho,
    WitnessFile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INCOMPLETE: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Dim,
    Hilbert,
    Degree,
    Member,
    Sample,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Dim => "dim",
            Command::Hilbert => "hilbert",
            Command::Degree => "degree",
            Command::Member => "member",
            Command::Sample => "sample",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Source,
    Image,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub threshold: f64,
    pub degree_arg: Option<u32>,
    pub max_repetitive_monodromies: usize,
    pub max_trace_tests: usize,
    pub loop_limit: Option<usize>,
    pub witness_out: Option<PathBuf>,
    pub witness_in: Option<PathBuf>,
    pub count: usize,
    pub which: Which,
    /// JSON text of the query point.
    pub point: Option<String>,
    pub include_matrices: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            threshold: implicitize_core::DEFAULT_GAP_THRESHOLD,
            degree_arg: None,
            max_repetitive_monodromies: 4,
            max_trace_tests: 10,
            loop_limit: None,
            witness_out: None,
            witness_in: None,
            count: 1,
            which: Which::Image,
            point: None,
            include_matrices: false,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<implicitize_core::Error> for CliError {
    fn from(e: implicitize_core::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

pub struct Outcome {
    pub envelope: ResultEnvelope,
    pub exit_code: i32,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_point(text: &str) -> Result<Vec<Complex>, CliError> {
    let text = match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?,
        None => text.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("point: {e}")))
}

pub fn run(
    command: Command,
    problem_path: &Path,
    opts: &Options,
    progress: &mut dyn FnMut(&DegreeEvent),
) -> Result<Outcome, CliError> {
    let start = Instant::now();
    if opts.threshold.is_nan() || opts.threshold <= 1.0 {
        return Err(CliError::Input("--threshold must exceed 1".into()));
    }
    let problem: ProblemFile = read_json(problem_path)?;
    let spec = problem.to_spec()?;
    let settings = Settings {
        gap_threshold: opts.threshold,
        ..Settings::default()
    };
    let mut echo = SettingsEcho {
        gap_threshold: opts.threshold,
        ..Default::default()
    };
    let seed = opts.seed;
    let mut exit_code = EXIT_OK;

    let payload = match command {
        Command::Dim => {
            let w = build_source_witness(&spec, seed, &settings)?;
            Payload::Dim {
                dimension: numerical_image_dim(&spec, &w, seed, &settings)?,
            }
        }
        Command::Hilbert => {
            let d = opts
                .degree_arg
                .ok_or_else(|| CliError::Input("hilbert needs --degree-arg".into()))?;
            echo.degree_arg = Some(d);
            let cone = make_cone_map(&spec)?;
            let w = build_source_witness(&spec, seed, &settings)?;
            let t = numerical_hilbert_function(&w, &cone, d, seed, &settings)?;
            let m = &t.interpolation_matrix;
            Payload::Hilbert(HilbertTable {
                degree: t.degree,
                hilbert_value: t.hilbert_value,
                num_monomials: t.num_monomials,
                singular_values: t.singular_values.clone(),
                largest_gap: t.largest_gap,
                extra_row_kernel_dim: t.extra_row_kernel_dim,
                equations: extract_image_equations(&t).iter().map(|v| to_json_vec(v)).collect(),
                points: t.sample_points.iter().map(|p| to_json_vec(p)).collect(),
                interpolation_matrix: opts
                    .include_matrices
                    .then(|| (0..m.rows()).map(|i| to_json_vec(m.row(i))).collect()),
            })
        }
        Command::Degree => {
            echo.max_repetitive_monodromies = Some(opts.max_repetitive_monodromies);
            echo.max_trace_tests = Some(opts.max_trace_tests);
            echo.loop_limit = opts.loop_limit;
            let cone = make_cone_map(&spec)?;
            let w = build_source_witness(&spec, seed, &settings)?;
            let degree_settings = DegreeSettings {
                max_repetitive_monodromies: opts.max_repetitive_monodromies,
                max_trace_tests: opts.max_trace_tests,
                loop_limit: opts.loop_limit,
            };
            let pws = numerical_image_degree(&spec, &w, &cone, seed, &settings, &degree_settings, progress)?;
            if let Some(path) = &opts.witness_out {
                let text = serde_json::to_string_pretty(&WitnessFile::new(&problem, &pws))
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            }
            if !pws.is_complete() {
                exit_code = EXIT_INCOMPLETE;
            }
            Payload::Degree {
                degree: pws.degree(),
                is_complete: pws.is_complete(),
                cone_dim: pws.cone_dim(),
                loop_log: pws.loop_log().to_vec(),
            }
        }
        Command::Member => {
            echo.tolerance = Some(POINT_MATCH_TOLERANCE);
            let path = opts
                .witness_in
                .as_ref()
                .ok_or_else(|| CliError::Input("member needs --witness-in".into()))?;
            let witness: WitnessFile = read_json(path)?;
            if witness.problem != problem {
                return Err(CliError::Input(format!(
                    "{} was computed for a different problem",
                    path.display()
                )));
            }
            let pws = witness.to_witness_set()?;
            let point = parse_point(
                opts.point
                    .as_deref()
                    .ok_or_else(|| CliError::Input("member needs --point".into()))?,
            )?;
            let r = is_on_image(&pws, &from_json_vec(&point), POINT_MATCH_TOLERANCE, seed, &settings)?;
            Payload::Member {
                is_member: r.is_member,
                failed_paths: r.failed_paths,
                singular_endpoints: r.singular_endpoints,
                closest_distance: r.closest_distance,
            }
        }
        Command::Sample => {
            echo.count = Some(opts.count);
            let w = build_source_witness(&spec, seed, &settings)?;
            let (which, points) = match opts.which {
                Which::Source => ("source", numerical_source_sample(&w, opts.count, seed, &settings)?),
                Which::Image => ("image", affine_image_sample(&spec, &w, opts.count, seed, &settings)?),
            };
            echo.which = Some(which.into());
            Payload::Sample {
                which: which.into(),
                points: points.iter().map(|p| to_json_vec(p)).collect(),
            }
        }
    };

    Ok(Outcome {
        envelope: ResultEnvelope {
            command: command.name().into(),
            seed,
            settings: echo,
            wall_time_seconds: start.elapsed().as_secs_f64(),
            payload,
        },
        exit_code,
    })
}
