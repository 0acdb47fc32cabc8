//! Identity checks run by `verify`. Each check compares a closed form with
//! an independent evaluation and reports the worst relative discrepancy.

use tmapprox::best_approx::printed_best_eval;
use tmapprox::quadrature::{
    fourier_coeff, gram_matrix, hardy_remainder_check, tm_inner_product, w_gram_quadrature,
    weighted_error_functional,
};
use tmapprox::sampling::PointSampler;
use tmapprox::{
    approximate, best_polynomial, kernel_eval, min_error_as_printed, min_error_closed_form,
    residual_eval, w_gram_closed_form, weighted_kernel_eval, BasisContext, Complex64,
    ComplexPolynomial, Error, HardyTestFunction, KernelParams, LineFunction, PoleSequence,
    QuadratureSpec, Result,
};

pub const TOL_ORTHONORMALITY: f64 = 1e-8;
pub const TOL_CD_KERNEL: f64 = 1e-11;
pub const TOL_RESIDUAL: f64 = 1e-9;
pub const TOL_MIN_ERROR: f64 = 1e-6;
pub const TOL_W_MATRIX: f64 = 1e-8;
pub const TOL_HERMITIAN: f64 = 1e-12;
pub const TOL_HARDY: f64 = 1e-8;
pub const TOL_OPTIMALITY: f64 = 1e-3;
pub const TOL_FOURIER: f64 = 1e-8;

pub const CD_SAMPLES: usize = 100;
pub const RESIDUAL_SAMPLES: usize = 100;
pub const HARDY_SAMPLES: usize = 20;
pub const PERTURBATIONS: usize = 50;

/// Whitelisted Hardy-space test functions.
pub fn hardy_functions() -> Vec<HardyTestFunction> {
    let ws = [Complex64::new(0.3, 0.8), Complex64::new(-1.2, 2.0)];
    ws.iter()
        .flat_map(|&w| (1..=2).map(move |p| HardyTestFunction::cauchy(w, p).expect("valid")))
        .collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn upper_point(s: &mut PointSampler) -> Complex64 {
    s.complex_in((-3.0, 3.0), (0.05, 3.0))
}

/// Largest entrywise deviation of the Gram matrix from the identity.
pub fn orthonormality(ctx: &BasisContext, spec: &QuadratureSpec) -> Result<f64> {
    let g = gram_matrix(ctx, ctx.len(), spec)?;
    let n = ctx.len();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((g[(j, k)] - target).norm());
        }
    }
    Ok(worst)
}

/// Direct partial kernel sum against its Blaschke closed form at random
/// pairs in the upper half-plane.
pub fn cd_identity(ctx: &BasisContext, sampler: &mut PointSampler, count: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..count {
        let z = upper_point(sampler);
        let zeta = upper_point(sampler);
        let k = ctx.cd_kernel_sum(ctx.len(), z, zeta)?;
        worst = worst.max(rel(k.direct, k.closed_form));
    }
    Ok(worst)
}

/// `K - T` against the closed-form residual at `count` random points of
/// the upper half-plane and `count` random real points, away from the
/// kernel poles. With `printed` the optimal polynomial is replaced by the
/// pointwise printed-form combination.
pub fn residual_identity(
    params: &KernelParams,
    seq: &PoleSequence,
    sampler: &mut PointSampler,
    count: usize,
    printed: bool,
) -> Result<f64> {
    let t = best_polynomial(params, seq)?;
    let il = Complex64::new(0.0, params.lambda);
    let mut worst = 0.0f64;
    let mut points = Vec::with_capacity(2 * count);
    while points.len() < count {
        let z = upper_point(sampler);
        if (z - il).norm() >= 0.05 {
            points.push(z);
        }
    }
    points.extend((0..count).map(|_| Complex64::new(sampler.uniform(-5.0, 5.0), 0.0)));
    for z in points {
        let tz = if printed {
            printed_best_eval(params, seq, z)?
        } else {
            t.eval(z)
        };
        let lhs = kernel_eval(params, z)? - tz;
        worst = worst.max(rel(lhs, residual_eval(params, seq, z)?));
    }
    Ok(worst)
}

/// Closed-form minimal error (or the printed-prefactor value) against the
/// quadrature of the weighted functional at the optimal polynomial.
/// Returns `(closed, oracle, relative gap)`.
pub fn min_error_vs_oracle(
    params: &KernelParams,
    seq: &PoleSequence,
    spec: &QuadratureSpec,
    printed: bool,
) -> Result<(f64, f64, f64)> {
    let t = best_polynomial(params, seq)?;
    let oracle = weighted_error_functional(&t, params, seq, spec)?;
    let closed = if printed {
        min_error_as_printed(params, seq)?
    } else {
        min_error_closed_form(params, seq)?
    };
    Ok((closed, oracle, relative_gap(closed, oracle)))
}

pub fn relative_gap(value: f64, reference: f64) -> f64 {
    let scale = value.abs().max(reference.abs());
    if scale == 0.0 {
        0.0
    } else {
        (value - reference).abs() / scale
    }
}

/// `(entrywise relative error vs quadrature, Hermitian defect)`.
pub fn w_matrix(
    params: &KernelParams,
    seq: &PoleSequence,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let closed = w_gram_closed_form(params, seq)?;
    let quad = w_gram_quadrature(params, seq, spec)?;
    let scale = closed.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    let mut herm = 0.0f64;
    for j in 0..3 {
        for k in 0..3 {
            worst = worst.max(rel(closed[(j, k)], quad[(j, k)]));
            if scale > 0.0 {
                herm = herm.max((closed[(j, k)] - closed[(k, j)].conj()).norm() / scale);
            }
        }
    }
    Ok((worst, herm))
}

/// Partial-sum expansion plus remainder against the function value.
pub fn hardy_remainder(
    ctx: &BasisContext,
    sampler: &mut PointSampler,
    count: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in hardy_functions() {
        for _ in 0..count {
            let z = upper_point(sampler);
            let (lhs, rhs) = hardy_remainder_check(&f, ctx, ctx.len(), z, spec)?;
            worst = worst.max(rel(lhs, rhs));
        }
    }
    Ok(worst)
}

/// Perturbs the optimal polynomial by `eps q` with random unit-norm
/// coefficient vectors `q` and compares the increase of the functional with
/// `eps^2 Int |q|^2 / |rho|^2`. A perturbation that does not increase the
/// functional counts as an infinite discrepancy.
pub fn optimality(
    params: &KernelParams,
    seq: &PoleSequence,
    sampler: &mut PointSampler,
    count: usize,
    spec: &QuadratureSpec,
) -> Result<f64> {
    const EPS: f64 = 1e-3;
    let spec = spec.with_rel_tol(spec.rel_tol.min(1e-12));
    let t = best_polynomial(params, seq)?;
    let base = weighted_error_functional(&t, params, seq, &spec)?;
    let zero = KernelParams::new(0.0.into(), 0.0.into(), params.lambda, params.rho0)?;
    let mut worst = 0.0f64;
    for _ in 0..count {
        let q = ComplexPolynomial::new(sampler.unit_vector(seq.len()));
        let expected = EPS * EPS * weighted_error_functional(&q, &zero, seq, &spec)?;
        let moved = &t + &q.scale(EPS.into());
        let increase = weighted_error_functional(&moved, params, seq, &spec)? - base;
        if !(increase > 0.0) {
            return Ok(f64::INFINITY);
        }
        worst = worst.max((increase - expected).abs() / expected);
    }
    Ok(worst)
}

/// Fourier coefficients of `T / tau_n` against those of `K / tau_n`, both
/// by quadrature, and against the basis expansion of `T`. Relative to the
/// norm of `K / tau_n`, which bounds every coefficient; the coefficients
/// themselves can all vanish by symmetry.
pub fn fourier_coefficients(
    params: &KernelParams,
    seq: &PoleSequence,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let report = approximate(params, seq)?;
    let ctx = BasisContext::new(seq.clone());
    let t = &report.polynomial;
    let tau = |x: f64| -> Complex64 {
        seq.iter()
            .map(|a| Complex64::new(x, 0.0) - a.conj())
            .product()
    };
    let t_over_tau = LineFunction::new(1.0, |x| t.eval(Complex64::new(x, 0.0)) / tau(x));
    let r = LineFunction::new(3.0 + seq.len() as f64, |x| {
        weighted_kernel_eval(params, seq, Complex64::new(x, 0.0)).expect("finite on the real line")
    });
    let mut from_t = Vec::with_capacity(seq.len());
    let mut from_r = Vec::with_capacity(seq.len());
    for k in 1..=seq.len() {
        from_t.push(fourier_coeff(&t_over_tau, &ctx, k, spec)?);
        from_r.push(fourier_coeff(&r, &ctx, k, spec)?);
    }
    let scale = tm_inner_product(&r, &r, spec)?.re.sqrt();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst = 0.0f64;
    for k in 0..seq.len() {
        worst = worst.max((from_t[k] - from_r[k]).norm() / scale);
        worst = worst.max((report.coeffs[k] - from_r[k]).norm() / scale);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub identity_name: &'static str,
    pub max_relative_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Set when the check could not be evaluated.
    pub error: Option<String>,
}

impl CheckRecord {
    fn new(identity_name: &'static str, tolerance: f64, outcome: Result<f64>) -> (Self, bool) {
        match outcome {
            Ok(r) => (
                CheckRecord {
                    identity_name,
                    max_relative_residual: r,
                    tolerance,
                    pass: r <= tolerance,
                    error: None,
                },
                false,
            ),
            Err(e) => {
                let stalled = matches!(e, Error::NoConvergence { .. });
                (
                    CheckRecord {
                        identity_name,
                        max_relative_residual: f64::NAN,
                        tolerance,
                        pass: false,
                        error: Some(e.to_string()),
                    },
                    stalled,
                )
            }
        }
    }
}

/// Side-by-side values for a formula whose printed form differs from the
/// verified one.
#[derive(Debug, Clone, PartialEq)]
pub struct ErratumRecord {
    pub name: &'static str,
    pub quantity: &'static str,
    pub as_printed: f64,
    pub corrected: f64,
    pub oracle: f64,
    /// Which of the two candidate values the oracle agrees with.
    pub verdict: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub printed_forms: bool,
    pub records: Vec<CheckRecord>,
    pub errata: Vec<ErratumRecord>,
    pub all_pass: bool,
    /// Some quadrature failed to converge.
    pub stalled: bool,
}

fn verdict(as_printed: f64, corrected: f64, oracle: f64) -> &'static str {
    if relative_gap(corrected, oracle) <= relative_gap(as_printed, oracle) {
        "corrected"
    } else {
        "as_printed"
    }
}

/// Runs every identity check for one configuration. `seed` fixes the
/// random evaluation points; each check draws from its own stream.
pub fn run_all(
    params: &KernelParams,
    seq: &PoleSequence,
    spec: &QuadratureSpec,
    seed: u64,
    printed: bool,
) -> Result<VerifyReport> {
    let ctx = BasisContext::new(seq.clone());
    let stream = |k: u64| PointSampler::new(seed.wrapping_add(k));
    let mut records = Vec::new();
    let mut stalled = false;
    let mut push = |name, tol, outcome| {
        let (rec, s) = CheckRecord::new(name, tol, outcome);
        stalled |= s;
        records.push(rec);
    };

    push(
        "orthonormality",
        TOL_ORTHONORMALITY,
        orthonormality(&ctx, spec),
    );
    push(
        "cd_kernel_identity",
        TOL_CD_KERNEL,
        cd_identity(&ctx, &mut stream(1), CD_SAMPLES),
    );
    push(
        "residual_identity",
        TOL_RESIDUAL,
        residual_identity(params, seq, &mut stream(2), RESIDUAL_SAMPLES, printed),
    );
    push(
        "min_error_vs_oracle",
        TOL_MIN_ERROR,
        min_error_vs_oracle(params, seq, spec, printed).map(|r| r.2),
    );
    let w = w_matrix(params, seq, spec);
    push("w_matrix", TOL_W_MATRIX, w.clone().map(|r| r.0));
    push("w_matrix_hermitian", TOL_HERMITIAN, w.map(|r| r.1));
    push(
        "hardy_remainder",
        TOL_HARDY,
        hardy_remainder(&ctx, &mut stream(3), HARDY_SAMPLES, spec),
    );
    push(
        "optimality_perturbations",
        TOL_OPTIMALITY,
        optimality(params, seq, &mut stream(4), PERTURBATIONS, spec),
    );
    push(
        "fourier_coefficients",
        TOL_FOURIER,
        fourier_coefficients(params, seq, spec),
    );

    let mut errata = Vec::new();
    let corrected = residual_identity(params, seq, &mut stream(2), RESIDUAL_SAMPLES, false)?;
    let as_printed = residual_identity(params, seq, &mut stream(2), RESIDUAL_SAMPLES, true)?;
    errata.push(ErratumRecord {
        name: "second_divided_difference_form",
        quantity: "max relative residual of K - T against the closed-form residual",
        as_printed,
        corrected,
        oracle: 0.0,
        verdict: verdict(as_printed, corrected, 0.0),
    });
    match min_error_vs_oracle(params, seq, spec, false) {
        Ok((corrected, oracle, _)) => {
            let as_printed = min_error_as_printed(params, seq)?;
            errata.push(ErratumRecord {
                name: "min_error_prefactor",
                quantity: "minimal weighted error",
                as_printed,
                corrected,
                oracle,
                verdict: verdict(as_printed, corrected, oracle),
            });
        }
        Err(Error::NoConvergence { .. }) => stalled = true,
        Err(e) => return Err(e),
    }

    let all_pass = records.iter().all(|r| r.pass);
    Ok(VerifyReport {
        printed_forms: printed,
        records,
        errata,
        all_pass,
        stalled,
    })
}
