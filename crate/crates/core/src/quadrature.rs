//! Real-line quadrature oracle.
//!
//! Integrals over `(-inf, inf)` are mapped to `(-pi/2, pi/2)` by
//! `t = c tan(theta)` and evaluated with Gauss-Legendre rules whose node
//! count doubles until successive estimates agree. The open rule never
//! samples the endpoints, and an integrand decaying like `|t|^-d` with
//! `d >= 2` stays bounded after multiplying by the Jacobian `c / cos^2`.
//!
//! Nothing here reuses the closed forms of [`crate::best_approx`]; every
//! integrand is assembled from its definition so the two routes can be
//! compared.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

use crate::basis::BasisContext;
use crate::cpoly::ComplexPolynomial;
use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::poles::{sigma_sum, PoleSequence};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Absolute floor, relative to `Int |f|`, below which a gap counts as
/// converged. Handles integrals that vanish by symmetry.
const ABS_FLOOR: f64 = 1e-14;

/// Node count, refinement limit, tolerance and substitution scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub initial_nodes: usize,
    pub max_doublings: u32,
    pub rel_tol: f64,
    /// Scale `c` in `t = c tan(theta)`. `None` picks a default from the
    /// problem data (`max(lambda, max |a_k|)`), or 1 when there is none.
    pub scale: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            initial_nodes: 256,
            max_doublings: 6,
            rel_tol: 1e-10,
            scale: None,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.initial_nodes < 8 {
            return Err(Error::InvalidQuadratureSpec("initial_nodes must be >= 8"));
        }
        if self.max_doublings < 1 {
            return Err(Error::InvalidQuadratureSpec("max_doublings must be >= 1"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidQuadratureSpec("rel_tol must be positive"));
        }
        if let Some(c) = self.scale {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidQuadratureSpec("scale must be positive"));
            }
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn resolved_scale(&self, fallback: f64) -> f64 {
        self.scale
            .unwrap_or(if fallback > 0.0 { fallback } else { 1.0 })
    }
}

/// A complex function on the real line with a declared decay exponent `d`,
/// meaning `|f(t)| = O(|t|^-d)`.
pub struct LineFunction<'a> {
    eval: Box<dyn Fn(f64) -> Complex64 + Sync + 'a>,
    decay: f64,
}

impl<'a> LineFunction<'a> {
    pub fn new(decay: f64, f: impl Fn(f64) -> Complex64 + Sync + 'a) -> Self {
        LineFunction {
            eval: Box::new(f),
            decay,
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        (self.eval)(t)
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    /// `Phi_k` restricted to the real line (decay 1).
    pub fn basis(ctx: &'a BasisContext, k: usize) -> Result<Self> {
        ctx.phi(k, Complex64::new(0.0, 0.0))?;
        Ok(LineFunction::new(1.0, move |t| {
            ctx.phi(k, Complex64::new(t, 0.0))
                .expect("basis functions are finite on the real line")
        }))
    }
}

/// Result of a converged integration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureOutcome {
    pub values: Vec<Complex64>,
    /// Number of node doublings performed before the gap closed.
    pub doublings: u32,
    /// Largest component gap at each doubling.
    pub gaps: Vec<f64>,
}

type Rule = Arc<Vec<(f64, f64)>>;

fn rule(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("rule cache poisoned").get(&n) {
        return r.clone();
    }
    let gl = GaussLegendre::new(NonZeroUsize::new(n).expect("node count is positive"));
    let r: Rule = Arc::new(gl.as_node_weight_pairs().to_vec());
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry(n)
        .or_insert(r)
        .clone()
}

/// Single pass with `n` nodes. Returns integrals and integrals of modulus.
fn apply_rule<F>(n: usize, scale: f64, dim: usize, f: &F) -> (Vec<Complex64>, Vec<f64>)
where
    F: Fn(f64, &mut [Complex64]),
{
    let mut acc = vec![ZERO; dim];
    let mut abs = vec![0.0; dim];
    let mut buf = vec![ZERO; dim];
    for &(x, w) in rule(n).iter() {
        let theta = x * FRAC_PI_2;
        let cos = theta.cos();
        let t = scale * theta.tan();
        let jac = w * FRAC_PI_2 * scale / (cos * cos);
        buf.iter_mut().for_each(|v| *v = ZERO);
        f(t, &mut buf);
        for i in 0..dim {
            acc[i] += buf[i] * jac;
            abs[i] += buf[i].norm() * jac;
        }
    }
    (acc, abs)
}

/// Integrates a `dim`-component integrand jointly; every component must
/// meet the tolerance at the same doubling.
pub fn integrate_components<F>(
    dim: usize,
    decay: f64,
    spec: &QuadratureSpec,
    f: F,
) -> Result<QuadratureOutcome>
where
    F: Fn(f64, &mut [Complex64]),
{
    spec.validate()?;
    if decay < 2.0 {
        return Err(Error::InsufficientDecay(decay));
    }
    let scale = spec.resolved_scale(1.0);
    let mut n = spec.initial_nodes;
    let (mut prev, _) = apply_rule(n, scale, dim, &f);
    let mut gaps = Vec::new();
    for doubling in 1..=spec.max_doublings {
        n *= 2;
        let (cur, abs) = apply_rule(n, scale, dim, &f);
        let mut worst = 0.0f64;
        let mut worst_idx = 0;
        let mut converged = true;
        for i in 0..dim {
            let gap = (cur[i] - prev[i]).norm();
            let allowed = (spec.rel_tol * cur[i].norm()).max(ABS_FLOOR * abs[i]);
            if gap > allowed {
                converged = false;
            }
            let relative = if abs[i] > 0.0 {
                gap / cur[i].norm().max(ABS_FLOOR * abs[i])
            } else {
                0.0
            };
            if relative >= worst {
                worst = relative;
                worst_idx = i;
            }
        }
        gaps.push(worst);
        if converged {
            return Ok(QuadratureOutcome {
                values: cur,
                doublings: doubling,
                gaps,
            });
        }
        if doubling == spec.max_doublings {
            return Err(Error::NoConvergence {
                estimate: cur[worst_idx],
                previous: prev[worst_idx],
                gap: (cur[worst_idx] - prev[worst_idx]).norm(),
                gaps,
            });
        }
        prev = cur;
    }
    unreachable!("max_doublings >= 1 is validated")
}

/// `Int_{-inf}^{inf} f(t) dt`.
pub fn integrate_line(f: &LineFunction<'_>, spec: &QuadratureSpec) -> Result<Complex64> {
    integrate_line_detailed(f, spec).map(|o| o.values[0])
}

pub fn integrate_line_detailed(
    f: &LineFunction<'_>,
    spec: &QuadratureSpec,
) -> Result<QuadratureOutcome> {
    integrate_components(1, f.decay(), spec, |t, out| out[0] = f.eval(t))
}

/// `(1/pi) Int f conj(g) dt`.
pub fn tm_inner_product(
    f: &LineFunction<'_>,
    g: &LineFunction<'_>,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let decay = f.decay() + g.decay();
    let v = integrate_components(1, decay, spec, |t, out| {
        out[0] = f.eval(t) * g.eval(t).conj()
    })?;
    Ok(v.values[0] / PI)
}

fn context_scale(ctx: &BasisContext) -> f64 {
    ctx.seq().max_modulus()
}

/// Gram matrix `(1/pi) Int Phi_j conj(Phi_k) dt` for `j, k <= m`.
pub fn gram_matrix(
    ctx: &BasisContext,
    m: usize,
    spec: &QuadratureSpec,
) -> Result<DMatrix<Complex64>> {
    if m == 0 || m > ctx.len() {
        return Err(Error::IndexOutOfRange {
            index: m,
            len: ctx.len(),
        });
    }
    let spec = QuadratureSpec {
        scale: Some(spec.resolved_scale(context_scale(ctx))),
        ..*spec
    };
    let out = integrate_components(m * m, 2.0, &spec, |t, out| {
        let phi = ctx
            .phi_all(m, Complex64::new(t, 0.0))
            .expect("basis functions are finite on the real line");
        for j in 0..m {
            for k in 0..m {
                out[j * m + k] = phi[j] * phi[k].conj();
            }
        }
    })?;
    Ok(DMatrix::from_fn(m, m, |j, k| out.values[j * m + k] / PI))
}

/// Fourier coefficient `c_k(f) = (1/pi) Int f conj(Phi_k) dt`.
pub fn fourier_coeff(
    f: &LineFunction<'_>,
    ctx: &BasisContext,
    k: usize,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if k == 0 || k > ctx.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: ctx.len(),
        });
    }
    let spec = QuadratureSpec {
        scale: Some(spec.resolved_scale(context_scale(ctx))),
        ..*spec
    };
    let phi = LineFunction::basis(ctx, k)?;
    tm_inner_product(f, &phi, &spec)
}

fn kernel_scale(params: &KernelParams, seq: &PoleSequence) -> f64 {
    params.lambda.max(seq.max_modulus())
}

/// `Int |K(t) - p(t)|^2 / |rho0 nu_n(t)|^2 dt` for `deg p <= n - 1`.
pub fn weighted_error_functional(
    p: &ComplexPolynomial,
    params: &KernelParams,
    seq: &PoleSequence,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let n = seq.len();
    if p.degree() > n - 1 {
        return Err(Error::DegreeTooHigh {
            degree: p.degree(),
            max: n - 1,
        });
    }
    let spec = QuadratureSpec {
        scale: Some(spec.resolved_scale(kernel_scale(params, seq))),
        ..*spec
    };
    let l2 = params.lambda * params.lambda;
    let rho0 = params.rho0.norm_sqr();
    let roots: Vec<Complex64> = seq.iter().map(|a| a.to_complex()).collect();
    let out = integrate_components(1, 2.0, &spec, |t, out| {
        let d = t * t + l2;
        let k = (params.a + params.b * t) / (d * d);
        let tc = Complex64::new(t, 0.0);
        let weight: f64 = roots.iter().map(|a| (tc - a).norm_sqr()).product();
        out[0] = Complex64::new((k - p.eval(tc)).norm_sqr() / (rho0 * weight), 0.0);
    })?;
    Ok(out.values[0].re)
}

/// Quadrature of `Int W_j conj(W_k) dt` with
///
/// ```text
/// W_1(t) = A i / (l tau(i l)) * 1/(i l - t)
/// W_2(t) = -(A + i l B) / tau(i l) * 1/(i l - t)^2
/// W_3(t) = (A + i l B) S / tau(i l) * 1/(i l - t)
/// ```
pub fn w_gram_quadrature(
    params: &KernelParams,
    seq: &PoleSequence,
    spec: &QuadratureSpec,
) -> Result<Matrix3<Complex64>> {
    let l = params.lambda;
    let il = Complex64::new(0.0, l);
    let i = Complex64::new(0.0, 1.0);
    let tau_il: Complex64 = seq.iter().map(|a| il - a.conj()).product();
    let sigma = sigma_sum(seq, l)?;
    let ap = params.a + il * params.b;
    let c1 = params.a * i / (l * tau_il);
    let c2 = -ap / tau_il;
    let c3 = ap * sigma / tau_il;
    let spec = QuadratureSpec {
        scale: Some(spec.resolved_scale(l)),
        ..*spec
    };
    let out = integrate_components(9, 2.0, &spec, |t, out| {
        let u = il - t;
        let w = [c1 / u, c2 / (u * u), c3 / u];
        for j in 0..3 {
            for k in 0..3 {
                out[j * 3 + k] = w[j] * w[k].conj();
            }
        }
    })?;
    Ok(Matrix3::from_fn(|j, k| out.values[j * 3 + k]))
}

/// Whitelisted Hardy-space test function `f(z) = 1/(z - conj(w))^power`
/// with `w` in the upper half-plane and `power` in `{1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyTestFunction {
    w: Complex64,
    power: u32,
}

impl HardyTestFunction {
    pub fn cauchy(w: Complex64, power: u32) -> Result<Self> {
        if !(w.im > 0.0) || !w.is_finite() {
            return Err(Error::InvalidTestFunction(
                "w must lie in the upper half-plane",
            ));
        }
        if !(1..=2).contains(&power) {
            return Err(Error::InvalidTestFunction("power must be 1 or 2"));
        }
        Ok(HardyTestFunction { w, power })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (z - self.w.conj()).powu(self.power).inv()
    }

    pub fn decay(&self) -> f64 {
        self.power as f64
    }
}

/// Both sides of the partial-sum expansion of a Hardy-space function at
/// `z` in the upper half-plane:
///
/// ```text
/// lhs = f(z)
/// rhs = Sum_{k<=m} c_k(f) Phi_k(z) + b_m(z)/(2 pi i) Int f(t) conj(b_m(t)) / (t - z) dt
/// ```
pub fn hardy_remainder_check(
    f: &HardyTestFunction,
    ctx: &BasisContext,
    m: usize,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    if !(z.im > 0.0) {
        return Err(Error::ArgumentNotInUpperHalfPlane(z));
    }
    if m == 0 || m > ctx.len() {
        return Err(Error::IndexOutOfRange {
            index: m,
            len: ctx.len(),
        });
    }
    let scale = context_scale(ctx).max(f.w.norm()).max(z.norm());
    let spec = QuadratureSpec {
        scale: Some(spec.resolved_scale(scale)),
        ..*spec
    };
    // one pass for c_1..c_m and the Cauchy-type remainder integral
    let out = integrate_components(m + 1, f.decay() + 1.0, &spec, |t, out| {
        let tc = Complex64::new(t, 0.0);
        let ft = f.eval(tc);
        let phi = ctx.phi_all(m, tc).expect("finite on the real line");
        for k in 0..m {
            out[k] = ft * phi[k].conj();
        }
        let bm = ctx.blaschke(m, tc).expect("finite on the real line");
        out[m] = ft * bm.conj() / (tc - z);
    })?;
    let phi_z = ctx.phi_all(m, z)?;
    let partial: Complex64 = (0..m).map(|k| out.values[k] / PI * phi_z[k]).sum();
    let bz = ctx.blaschke(m, z)?;
    let remainder = bz / Complex64::new(0.0, 2.0 * PI) * out.values[m];
    Ok((f.eval(z), partial + remainder))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn spec_validation() {
        assert!(spec().validate().is_ok());
        for bad in [
            QuadratureSpec {
                initial_nodes: 4,
                ..spec()
            },
            QuadratureSpec {
                max_doublings: 0,
                ..spec()
            },
            QuadratureSpec {
                rel_tol: 0.0,
                ..spec()
            },
            QuadratureSpec {
                scale: Some(-1.0),
                ..spec()
            },
        ] {
            assert!(matches!(
                bad.validate(),
                Err(Error::InvalidQuadratureSpec(_))
            ));
        }
    }

    #[test]
    fn displayed_integrals() {
        let f = LineFunction::new(2.0, |t| c(1.0 / (t * t + 1.0), 0.0));
        assert!(rel(integrate_line(&f, &spec()).unwrap(), c(PI, 0.0)) < 1e-10);
        let f = LineFunction::new(4.0, |t| c(1.0 / (t * t + 1.0).powi(2), 0.0));
        assert!(rel(integrate_line(&f, &spec()).unwrap(), c(PI / 2.0, 0.0)) < 1e-10);
        let i = c(0.0, 1.0);
        let f = LineFunction::new(3.0, move |t| ((i - t) * (i - t) * (i + t)).inv());
        assert!(rel(integrate_line(&f, &spec()).unwrap(), c(0.0, PI / 2.0)) < 1e-10);
    }

    #[test]
    fn rejects_slow_decay() {
        let f = LineFunction::new(1.0, |t| c(1.0 / (1.0 + t.abs()), 0.0));
        assert_eq!(
            integrate_line(&f, &spec()),
            Err(Error::InsufficientDecay(1.0))
        );
    }

    #[test]
    fn no_convergence_reports_gaps() {
        // A pole at distance 1e-6 from the axis cannot be resolved with 16..32 nodes.
        let f = LineFunction::new(2.0, |t| c(1.0 / (t * t + 1e-12), 0.0));
        let tight = QuadratureSpec {
            initial_nodes: 16,
            max_doublings: 1,
            ..spec()
        };
        match integrate_line(&f, &tight) {
            Err(Error::NoConvergence { gaps, gap, .. }) => {
                assert_eq!(gaps.len(), 1);
                assert!(gap > 0.0);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn odd_integrand_is_zero() {
        let f = LineFunction::new(3.0, |t| c(t / (t * t + 1.0).powi(2), 0.0));
        assert!(integrate_line(&f, &spec()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn inner_product_examples() {
        let ctx = BasisContext::new(PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap());
        let phi = LineFunction::basis(&ctx, 1).unwrap();
        assert!(rel(tm_inner_product(&phi, &phi, &spec()).unwrap(), c(1.0, 0.0)) < 1e-10);

        let ctx = BasisContext::new(PoleSequence::from_pairs(&[(0.0, 2.0), (0.0, 1.0)]).unwrap());
        let p1 = LineFunction::basis(&ctx, 1).unwrap();
        let p2 = LineFunction::basis(&ctx, 2).unwrap();
        assert!(tm_inner_product(&p1, &p2, &spec()).unwrap().norm() < 1e-10);
        assert!(rel(tm_inner_product(&p1, &p1, &spec()).unwrap(), c(1.0, 0.0)) < 1e-10);
    }

    #[test]
    fn gram_small() {
        let ctx = BasisContext::new(PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap());
        let g = gram_matrix(&ctx, 1, &spec()).unwrap();
        assert!((g[(0, 0)] - c(1.0, 0.0)).norm() < 1e-10);

        let ctx = BasisContext::new(
            PoleSequence::from_pairs(&[(0.0, 1.0), (0.0, 2.0), (1.0, 1.0)]).unwrap(),
        );
        let g = gram_matrix(&ctx, 3, &spec()).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((g[(j, k)] - c(want, 0.0)).norm() < 1e-8);
                assert!((g[(j, k)] - g[(k, j)].conj()).norm() < 1e-12);
            }
        }
        assert!(gram_matrix(&ctx, 4, &spec()).is_err());
    }

    #[test]
    fn fourier_examples() {
        let ctx = BasisContext::new(PoleSequence::from_pairs(&[(0.0, 1.0), (0.5, 2.0)]).unwrap());
        let f = LineFunction::basis(&ctx, 1).unwrap();
        assert!(rel(fourier_coeff(&f, &ctx, 1, &spec()).unwrap(), c(1.0, 0.0)) < 1e-10);
        assert!(fourier_coeff(&f, &ctx, 2, &spec()).unwrap().norm() < 1e-10);
        let g = LineFunction::new(1.0, |t| 2.0 * ctx.phi(1, c(t, 0.0)).unwrap());
        assert!(rel(fourier_coeff(&g, &ctx, 1, &spec()).unwrap(), c(2.0, 0.0)) < 1e-10);
        assert!(fourier_coeff(&g, &ctx, 3, &spec()).is_err());
    }

    #[test]
    fn weighted_error_anchors() {
        let seq = PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap();
        let params = KernelParams::real(1.0, 0.0, 1.0).unwrap();
        let at = |v: f64| {
            weighted_error_functional(&ComplexPolynomial::from_real(&[v]), &params, &seq, &spec())
                .unwrap()
        };
        let r = |a: f64, b: f64| (a - b).abs() / b.abs();
        assert!(r(at(0.375), 17.0 * PI / 128.0) < 1e-10);
        assert!(r(at(0.0), 35.0 * PI / 128.0) < 1e-10);
        assert!(r(at(0.475), 17.0 * PI / 128.0 + 0.01 * PI) < 1e-10);

        let too_high = ComplexPolynomial::from_real(&[0.0, 1.0]);
        assert!(matches!(
            weighted_error_functional(&too_high, &params, &seq, &spec()),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn hardy_examples() {
        let ctx = BasisContext::new(PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap());
        let f = HardyTestFunction::cauchy(c(0.0, 1.0), 1).unwrap();
        let (lhs, rhs) = hardy_remainder_check(&f, &ctx, 1, c(0.0, 2.0), &spec()).unwrap();
        assert!(rel(lhs, c(0.0, -1.0 / 3.0)) < 1e-15);
        assert!(rel(rhs, lhs) < 1e-10);

        let f = HardyTestFunction::cauchy(c(0.0, 2.0), 2).unwrap();
        let (lhs, rhs) = hardy_remainder_check(&f, &ctx, 1, c(0.0, 1.0), &spec()).unwrap();
        assert!(rel(lhs, c(-1.0 / 9.0, 0.0)) < 1e-15);
        assert!(rel(rhs, lhs) < 1e-8);

        assert!(matches!(
            hardy_remainder_check(&f, &ctx, 1, c(0.0, -1.0), &spec()),
            Err(Error::ArgumentNotInUpperHalfPlane(_))
        ));
        assert!(HardyTestFunction::cauchy(c(0.0, -1.0), 1).is_err());
        assert!(HardyTestFunction::cauchy(c(0.0, 1.0), 3).is_err());
    }
}
