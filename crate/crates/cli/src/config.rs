//! Run configuration read from a JSON file.

use std::path::Path;

use serde::Deserialize;
use tmapprox::{Complex64, KernelParams, Pole, PoleSequence, QuadratureSpec};

use crate::CliError;

/// How the pole sequence is produced.
#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PoleScheme {
    /// Use `poles` as given.
    #[default]
    Explicit,
    /// `a_k = i (start + (k - 1) step)`.
    EquispacedImaginary {
        #[serde(default = "one")]
        start: f64,
        #[serde(default = "one")]
        step: f64,
    },
    /// `a_k = i first ratio^(k - 1)`.
    GeometricImaginary {
        #[serde(default = "one")]
        first: f64,
        #[serde(default = "two")]
        ratio: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub initial_nodes: usize,
    pub max_doublings: u32,
    pub rel_tol: f64,
    pub scale: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let s = QuadratureSpec::default();
        QuadratureConfig {
            initial_nodes: s.initial_nodes,
            max_doublings: s.max_doublings,
            rel_tol: s.rel_tol,
            scale: s.scale,
        }
    }
}

impl From<QuadratureConfig> for QuadratureSpec {
    fn from(q: QuadratureConfig) -> Self {
        QuadratureSpec {
            initial_nodes: q.initial_nodes,
            max_doublings: q.max_doublings,
            rel_tol: q.rel_tol,
            scale: q.scale,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn unit_rho0() -> [f64; 2] {
    [1.0, 0.0]
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub poles: Vec<[f64; 2]>,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub lambda: f64,
    #[serde(default = "unit_rho0")]
    pub rho0: [f64; 2],
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub pole_scheme: PoleScheme,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub output_format: OutputFormat,
    #[serde(default)]
    pub seed: u64,
}

impl Default for RunConfig {
    /// One pole at `i`, `A = 1`, `B = 0`, `lambda = 1`.
    fn default() -> Self {
        RunConfig {
            poles: vec![[0.0, 1.0]],
            a: 1.0,
            b: 0.0,
            lambda: 1.0,
            rho0: unit_rho0(),
            n_max: None,
            pole_scheme: PoleScheme::Explicit,
            quadrature: QuadratureConfig::default(),
            output_format: OutputFormat::Json,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn params(&self) -> Result<KernelParams, CliError> {
        let p = KernelParams::real(self.a, self.b, self.lambda)?;
        Ok(p.with_rho0(Complex64::new(self.rho0[0], self.rho0[1]))?)
    }

    pub fn quadrature_spec(&self) -> Result<QuadratureSpec, CliError> {
        let spec: QuadratureSpec = self.quadrature.into();
        spec.validate()?;
        Ok(spec)
    }

    /// Number of poles used by `approx` and `verify`.
    pub fn pole_count(&self) -> Result<usize, CliError> {
        match (&self.pole_scheme, self.n_max) {
            (PoleScheme::Explicit, _) => Ok(self.poles.len()),
            (_, Some(n)) if n >= 1 => Ok(n),
            _ => Err(CliError::Config(
                "generated pole schemes need n_max >= 1".to_string(),
            )),
        }
    }

    /// The first `n` poles of the configured scheme.
    pub fn pole_sequence(&self, n: usize) -> Result<PoleSequence, CliError> {
        let poles: Vec<Pole> = match self.pole_scheme {
            PoleScheme::Explicit => {
                if self.poles.len() < n {
                    return Err(CliError::Config(format!(
                        "{n} poles requested but only {} given",
                        self.poles.len()
                    )));
                }
                self.poles[..n]
                    .iter()
                    .map(|p| Pole::new(p[0], p[1]))
                    .collect()
            }
            PoleScheme::EquispacedImaginary { start, step } => (0..n)
                .map(|k| Pole::new(0.0, start + k as f64 * step))
                .collect(),
            PoleScheme::GeometricImaginary { first, ratio } => (0..n)
                .map(|k| Pole::new(0.0, first * ratio.powi(k as i32)))
                .collect(),
        };
        Ok(PoleSequence::new(poles)?)
    }

    /// Pole sequence for single-configuration commands.
    pub fn single_sequence(&self) -> Result<PoleSequence, CliError> {
        self.pole_sequence(self.pole_count()?)
    }

    /// Upper end of a sweep.
    pub fn sweep_limit(&self) -> Result<usize, CliError> {
        match self.n_max {
            Some(0) => Err(CliError::Config("n_max must be >= 1".to_string())),
            Some(n) => Ok(n),
            None => match self.pole_scheme {
                PoleScheme::Explicit if !self.poles.is_empty() => Ok(self.poles.len()),
                _ => Err(CliError::Config("sweep needs n_max".to_string())),
            },
        }
    }
}
