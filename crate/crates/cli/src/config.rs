//! Experiment configuration: a JSON document describing the matrix, right
//! side, rational function, solver settings, and requested outputs.
//!
//! ```json
//! {
//!   "matrix": {"kind": "randn_shift", "n": 100, "shift": [5.0, 0.0], "seed": 1},
//!   "rhs": {"kind": "random", "seed": 2},
//!   "rational": {"kind": "random_factored", "deg_d": 3, "deg_n": 2, "seed": 3},
//!   "kmax": 60,
//!   "tol": 1e-10,
//!   "methods": ["or", "fa", "opt2", "pfrac"],
//!   "bounds": ["eig", "w"],
//!   "region_samples": 256,
//!   "output_dir": "out"
//! }
//! ```

use std::path::{Path, PathBuf};

use arnoldi_or::linalg::{CMatrix, CVector};
use arnoldi_or::ratfun::{Polynomial, RationalFunction};
use arnoldi_or::solvers::Method;
use arnoldi_or::{mtx, Complex64, Error, Result};
use serde::{Deserialize, Serialize};

use crate::generators;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatrixSpec {
    RandnShift { n: usize, shift: [f64; 2], seed: u64 },
    Grcar { n: usize },
    File { path: PathBuf },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RhsSpec {
    Random { seed: u64 },
    File { path: PathBuf },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RationalSpec {
    RandomFactored { deg_d: usize, deg_n: usize, seed: u64 },
    Explicit { num: Polynomial, den: Polynomial },
    /// `D(z) = z`, `N = 1`: plain linear-system solves.
    LinearSystem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodSpec {
    Or,
    Fa,
    Opt2,
    Pfrac,
}

impl MethodSpec {
    pub fn method(&self) -> Method {
        match self {
            MethodSpec::Or => Method::Or,
            MethodSpec::Fa => Method::Fa,
            MethodSpec::Opt2 => Method::Opt2,
            MethodSpec::Pfrac => Method::Pfrac,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundSpec {
    Eig,
    W,
    WS,
    WMinusDisks,
}

fn default_tol() -> f64 {
    1e-10
}

fn default_methods() -> Vec<MethodSpec> {
    vec![MethodSpec::Or, MethodSpec::Fa, MethodSpec::Opt2, MethodSpec::Pfrac]
}

fn default_region_samples() -> usize {
    256
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub matrix: MatrixSpec,
    pub rhs: RhsSpec,
    pub rational: RationalSpec,
    pub kmax: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_methods")]
    pub methods: Vec<MethodSpec>,
    #[serde(default)]
    pub bounds: Vec<BoundSpec>,
    #[serde(default = "default_region_samples")]
    pub region_samples: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parses a JSON config; parse errors carry line/column positions.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: format!("config: {e}"),
        })
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Re-seeds every generator deterministically from one master seed
    /// (matrix: `seed`, rhs: `seed + 1`, rational: `seed + 2`).
    pub fn override_seed(&mut self, seed: u64) {
        if let MatrixSpec::RandnShift { seed: s, .. } = &mut self.matrix {
            *s = seed;
        }
        if let RhsSpec::Random { seed: s } = &mut self.rhs {
            *s = seed.wrapping_add(1);
        }
        if let RationalSpec::RandomFactored { seed: s, .. } = &mut self.rational {
            *s = seed.wrapping_add(2);
        }
    }
}

/// A fully realized problem instance built from a config.
pub struct BuiltProblem {
    pub a: CMatrix,
    pub b: CVector,
    pub rational: RationalFunction,
    /// Exact pole locations when the rational function was generated in
    /// factored form (`poles.csv` then avoids a root-finding pass).
    pub exact_poles: Option<Vec<Complex64>>,
}

/// Builds the matrix, right side, and rational function, validating the
/// cross-field invariants (`kmax + nu <= n`, matching dimensions).
pub fn build_problem(config: &ExperimentConfig) -> Result<BuiltProblem> {
    let a = match &config.matrix {
        MatrixSpec::RandnShift { n, shift, seed } => {
            generators::gen_randn_shift(*n, Complex64::new(shift[0], shift[1]), *seed)
        }
        MatrixSpec::Grcar { n } => generators::gen_grcar(*n)?,
        MatrixSpec::File { path } => mtx::read_matrix_file(path)?,
    };
    if !a.is_square() {
        return Err(Error::InvalidArgument(format!(
            "matrix: expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let b = match &config.rhs {
        RhsSpec::Random { seed } => generators::gen_random_rhs(n, *seed),
        RhsSpec::File { path } => mtx::read_vector_file(path)?,
    };
    if b.len() != n {
        return Err(Error::InvalidArgument(format!(
            "rhs: length {} does not match the {n}-dimensional matrix",
            b.len()
        )));
    }
    let (rational, exact_poles) = match &config.rational {
        RationalSpec::RandomFactored { deg_d, deg_n, seed } => {
            let generated = generators::gen_random_rational(*deg_d, *deg_n, *seed)?;
            let poles = generated.d_roots.clone();
            (generated.rational, Some(poles))
        }
        RationalSpec::Explicit { num, den } => {
            (RationalFunction::new(num.clone(), den.clone())?, None)
        }
        RationalSpec::LinearSystem => (
            RationalFunction::inverse_z(),
            Some(vec![Complex64::ZERO]),
        ),
    };
    if config.kmax == 0 {
        return Err(Error::InvalidArgument("kmax: must be at least 1".into()));
    }
    if config.kmax + rational.nu() > n {
        return Err(Error::InvalidArgument(format!(
            "kmax: kmax + nu = {} + {} exceeds the matrix dimension {n}",
            config.kmax,
            rational.nu()
        )));
    }
    if config.region_samples < 8 {
        return Err(Error::InvalidArgument(
            "region_samples: must be at least 8".into(),
        ));
    }
    Ok(BuiltProblem { a, b, rational, exact_poles })
}
