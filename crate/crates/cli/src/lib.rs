//! Library side of the `tmapprox` command: configuration, the `approx`,
//! `verify` and `sweep` commands, and report formatting.
//!
//! Exit codes: 0 success, 1 `verify` ran but some identity failed,
//! 2 invalid configuration, 3 quadrature did not converge.

pub mod checks;
pub mod config;
pub mod output;

use rayon::prelude::*;
use serde::Serialize;
use tmapprox::quadrature::weighted_error_functional;
use tmapprox::{approximate, Error, KernelParams, PoleSequence, QuadratureSpec};

use checks::{relative_gap, CheckRecord, ErratumRecord, VerifyReport};
use config::{OutputFormat, RunConfig};
use output::{cx_vec, fmt_f64, to_csv, to_json, Cx};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numerical(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numerical(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(Error::NoConvergence { .. }) => EXIT_NO_CONVERGENCE,
            _ => EXIT_CONFIG,
        }
    }

    /// One-line JSON error record.
    pub fn record(&self) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            status: &'static str,
            kind: &'a str,
            message: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            pole_index: Option<usize>,
        }
        let (kind, message, pole_index) = match self {
            CliError::Config(m) => ("InvalidConfig", m.clone(), None),
            CliError::Numerical(e) => {
                let idx = match e {
                    Error::PoleNotInUpperHalfPlane { index, .. } => Some(*index),
                    _ => None,
                };
                (e.kind(), e.to_string(), idx)
            }
        };
        let r = Record {
            status: "error",
            kind,
            message,
            pole_index,
        };
        serde_json::to_string(&r).expect("error record serializes")
    }
}

/// Result of a command: the text to emit and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproxOutput {
    pub n: usize,
    pub poles: Vec<Cx>,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub lambda: f64,
    pub rho0: Cx,
    /// Ascending coefficients of the optimal polynomial.
    pub polynomial: Vec<Cx>,
    pub min_error: f64,
    pub min_error_as_printed: f64,
    pub mu: f64,
    pub sigma: Cx,
    pub a_sum: f64,
    pub b_sum: f64,
    /// Expansion coefficients in the orthonormal basis.
    pub basis_coeffs: Vec<Cx>,
    pub oracle_error: f64,
    pub relative_gap: f64,
}

/// Closed-form solution for one configuration plus the quadrature value of
/// the weighted functional at the optimal polynomial.
pub fn approx_one(
    params: &KernelParams,
    seq: &PoleSequence,
    spec: &QuadratureSpec,
) -> Result<ApproxOutput, CliError> {
    let (a, b) = params.require_real()?;
    let r = approximate(params, seq)?;
    let oracle = weighted_error_functional(&r.polynomial, params, seq, spec)?;
    Ok(ApproxOutput {
        n: seq.len(),
        poles: seq.iter().map(|p| Cx(p.to_complex())).collect(),
        a,
        b,
        lambda: params.lambda,
        rho0: Cx(params.rho0),
        polynomial: cx_vec(&r.polynomial.padded(seq.len())),
        min_error: r.min_error,
        min_error_as_printed: tmapprox::min_error_as_printed(params, seq)?,
        mu: r.mu,
        sigma: Cx(r.sigma),
        a_sum: r.a_sum,
        b_sum: r.b_sum,
        basis_coeffs: cx_vec(&r.coeffs),
        oracle_error: oracle,
        relative_gap: relative_gap(r.min_error, oracle),
    })
}

const SWEEP_HEADER: [&str; 7] = [
    "n",
    "mu",
    "a_sum",
    "b_sum",
    "min_error",
    "oracle_error",
    "relative_gap",
];

fn sweep_cells(o: &ApproxOutput) -> Vec<String> {
    let mut v = vec![o.n.to_string()];
    v.extend(
        [
            o.mu,
            o.a_sum,
            o.b_sum,
            o.min_error,
            o.oracle_error,
            o.relative_gap,
        ]
        .iter()
        .map(|&x| fmt_f64(x)),
    );
    v
}

pub fn cmd_approx(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = cfg.params()?;
    let seq = cfg.single_sequence()?;
    let spec = cfg.quadrature_spec()?;
    let o = approx_one(&params, &seq, &spec)?;
    let text = match cfg.output_format {
        OutputFormat::Json => to_json(&o),
        OutputFormat::Csv => {
            let mut header: Vec<String> = SWEEP_HEADER.iter().map(|s| s.to_string()).collect();
            let mut row = sweep_cells(&o);
            for (k, c) in o.polynomial.iter().enumerate() {
                header.push(format!("t{k}_re"));
                header.push(format!("t{k}_im"));
                row.push(fmt_f64(c.0.re));
                row.push(fmt_f64(c.0.im));
            }
            to_csv(&header, &[row])
        }
    };
    Ok(Output {
        text,
        exit_code: EXIT_OK,
    })
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    mu: f64,
    a_sum: f64,
    b_sum: f64,
    min_error: f64,
    oracle_error: f64,
    relative_gap: f64,
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = cfg.params()?;
    params.require_real()?;
    let spec = cfg.quadrature_spec()?;
    let n_max = cfg.sweep_limit()?;
    let full = cfg.pole_sequence(n_max)?;
    let rows: Vec<ApproxOutput> = (1..=n_max)
        .into_par_iter()
        .map(|n| approx_one(&params, &full.prefix(n)?, &spec))
        .collect::<Result<_, _>>()?;
    let text = match cfg.output_format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Sweep {
                rows: Vec<SweepRow>,
            }
            let rows = rows
                .iter()
                .map(|o| SweepRow {
                    n: o.n,
                    mu: o.mu,
                    a_sum: o.a_sum,
                    b_sum: o.b_sum,
                    min_error: o.min_error,
                    oracle_error: o.oracle_error,
                    relative_gap: o.relative_gap,
                })
                .collect();
            to_json(&Sweep { rows })
        }
        OutputFormat::Csv => {
            let header: Vec<String> = SWEEP_HEADER.iter().map(|s| s.to_string()).collect();
            to_csv(&header, &rows.iter().map(sweep_cells).collect::<Vec<_>>())
        }
    };
    Ok(Output {
        text,
        exit_code: EXIT_OK,
    })
}

#[derive(Serialize)]
struct RecordOut<'a> {
    identity_name: &'a str,
    max_relative_residual: f64,
    tolerance: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct ErratumOut<'a> {
    name: &'a str,
    quantity: &'a str,
    as_printed: f64,
    corrected: f64,
    oracle: f64,
    verdict: &'a str,
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    printed_forms: bool,
    seed: u64,
    all_pass: bool,
    converged: bool,
    records: Vec<RecordOut<'a>>,
    errata: Vec<ErratumOut<'a>>,
}

fn record_out(r: &CheckRecord) -> RecordOut<'_> {
    RecordOut {
        identity_name: r.identity_name,
        max_relative_residual: r.max_relative_residual,
        tolerance: r.tolerance,
        pass: r.pass,
        error: r.error.as_deref(),
    }
}

fn erratum_out(e: &ErratumRecord) -> ErratumOut<'_> {
    ErratumOut {
        name: e.name,
        quantity: e.quantity,
        as_printed: e.as_printed,
        corrected: e.corrected,
        oracle: e.oracle,
        verdict: e.verdict,
    }
}

pub fn verify_report(cfg: &RunConfig, printed: bool) -> Result<VerifyReport, CliError> {
    let params = cfg.params()?;
    let seq = cfg.single_sequence()?;
    let spec = cfg.quadrature_spec()?;
    Ok(checks::run_all(&params, &seq, &spec, cfg.seed, printed)?)
}

pub fn cmd_verify(cfg: &RunConfig, printed: bool) -> Result<Output, CliError> {
    let rep = verify_report(cfg, printed)?;
    let text = match cfg.output_format {
        OutputFormat::Json => to_json(&VerifyOut {
            printed_forms: rep.printed_forms,
            seed: cfg.seed,
            all_pass: rep.all_pass,
            converged: !rep.stalled,
            records: rep.records.iter().map(record_out).collect(),
            errata: rep.errata.iter().map(erratum_out).collect(),
        }),
        OutputFormat::Csv => {
            let header: Vec<String> = [
                "identity_name",
                "max_relative_residual",
                "tolerance",
                "pass",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect();
            let rows: Vec<Vec<String>> = rep
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.identity_name.to_string(),
                        fmt_f64(r.max_relative_residual),
                        fmt_f64(r.tolerance),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            to_csv(&header, &rows)
        }
    };
    let exit_code = if rep.stalled {
        EXIT_NO_CONVERGENCE
    } else if rep.all_pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok(Output { text, exit_code })
}
