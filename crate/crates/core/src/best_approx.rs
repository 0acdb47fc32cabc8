//! Closed-form weighted mean-square best approximation of
//! `K(t) = (A + B t) / (t^2 + lambda^2)^2` by polynomials of degree `n - 1`
//! with weight `1 / |rho0 nu_n(t)|^2`.
//!
//! The optimal polynomial is
//!
//! ```text
//! T(z) = 1/(4 l^2) [ (A i/l + (A + i l B) S) L(z; i l)
//!                  + (A i/l - (A - i l B) conj(S)) L(z; -i l)
//!                  - (A + i l B) M(z; i l) - (A - i l B) M(z; -i l) ]
//! ```
//!
//! and the minimal error is
//!
//! ```text
//! 2 pi / (16 l^5 mu |rho0|^2) * [ (A/l + l B Ac)^2 + (3A^2 + l^2 B^2)/(2 l^2)
//!     + (3A^2 + l^2 B^2)/l * Bc + A^2 Ac^2 + (A^2 + l^2 B^2) Bc^2 ]
//! ```
//!
//! where `S = Ac + i Bc` is [`sigma_sum`] and `mu` is [`mu_product`].

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::basis::BasisContext;
use crate::cpoly::{
    first_divided_difference, printed_second_difference_eval, second_divided_difference,
    ComplexPolynomial,
};
use crate::error::{Error, Result};
use crate::kernel::KernelParams;
use crate::poles::{cartesian_sums, mu_product, sigma_sum, PoleSequence};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Everything the closed-form solution produces for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxReport {
    /// Optimal polynomial `T_{n-1}`.
    pub polynomial: ComplexPolynomial,
    pub min_error: f64,
    pub mu: f64,
    pub sigma: Complex64,
    pub a_sum: f64,
    pub b_sum: f64,
    /// The bracketed quadratic form in `A`, `B`.
    pub bracket: f64,
    /// Expansion of `T / tau_n` in `Phi_1..Phi_n`.
    pub coeffs: Vec<Complex64>,
}

/// The four scalar weights multiplying `L(., i l)`, `L(., -i l)`,
/// `M(., i l)` and `M(., -i l)`, already divided by `4 l^2`.
struct Weights {
    l_up: Complex64,
    l_down: Complex64,
    m_up: Complex64,
    m_down: Complex64,
}

fn weights(p: &KernelParams, seq: &PoleSequence) -> Result<Weights> {
    let l = p.lambda;
    let il = Complex64::new(0.0, l);
    let sigma = sigma_sum(seq, l)?;
    let (ap, am) = (p.a + il * p.b, p.a - il * p.b);
    let pre = 1.0 / (4.0 * l * l);
    Ok(Weights {
        l_up: pre * (p.a * I / l + ap * sigma),
        l_down: pre * (p.a * I / l - am * sigma.conj()),
        m_up: -pre * ap,
        m_down: -pre * am,
    })
}

/// The optimal polynomial `T_{n-1}`, degree at most `n - 1`.
pub fn best_polynomial(p: &KernelParams, seq: &PoleSequence) -> Result<ComplexPolynomial> {
    let il = Complex64::new(0.0, p.lambda);
    let w = weights(p, seq)?;
    let n = seq.len();
    let l_up = first_divided_difference(seq, il)?.padded(n);
    let l_down = first_divided_difference(seq, -il)?.padded(n);
    let m_up = second_divided_difference(seq, il)?.padded(n);
    let m_down = second_divided_difference(seq, -il)?.padded(n);
    let coeffs = (0..n)
        .map(|k| w.l_up * l_up[k] + w.l_down * l_down[k] + w.m_up * m_up[k] + w.m_down * m_down[k])
        .collect();
    Ok(ComplexPolynomial::new(coeffs))
}

/// Pointwise value of the same combination with the second differences
/// replaced by the Taylor-term-free rational form. Not a polynomial; used as
/// a negative control.
pub fn printed_best_eval(p: &KernelParams, seq: &PoleSequence, z: Complex64) -> Result<Complex64> {
    let il = Complex64::new(0.0, p.lambda);
    let w = weights(p, seq)?;
    Ok(w.l_up * first_divided_difference(seq, il)?.eval(z)
        + w.l_down * first_divided_difference(seq, -il)?.eval(z)
        + w.m_up * printed_second_difference_eval(seq, il, z)?
        + w.m_down * printed_second_difference_eval(seq, -il, z)?)
}

/// The bracketed quadratic form of the minimal error.
pub fn error_bracket(a: f64, b: f64, lambda: f64, a_sum: f64, b_sum: f64) -> f64 {
    let l = lambda;
    let first = a / l + l * b * a_sum;
    let q3 = 3.0 * a * a + l * l * b * b;
    let q1 = a * a + l * l * b * b;
    first * first + q3 / (2.0 * l * l) + q3 / l * b_sum + a * a * a_sum * a_sum + q1 * b_sum * b_sum
}

fn bracket_parts(p: &KernelParams, seq: &PoleSequence) -> Result<(f64, f64, f64, f64)> {
    let (a, b) = p.require_real()?;
    let (a_sum, b_sum) = cartesian_sums(seq, p.lambda)?;
    let mu = mu_product(seq, p.lambda)?;
    Ok((
        error_bracket(a, b, p.lambda, a_sum, b_sum),
        mu,
        a_sum,
        b_sum,
    ))
}

/// Minimal value of the weighted functional over polynomials of degree
/// `<= n - 1`. Requires real `A`, `B`.
pub fn min_error_closed_form(p: &KernelParams, seq: &PoleSequence) -> Result<f64> {
    let (bracket, mu, _, _) = bracket_parts(p, seq)?;
    let l = p.lambda;
    Ok(2.0 * PI / (16.0 * l.powi(5) * mu) * bracket / p.rho0.norm_sqr())
}

/// The minimal-error formula with prefactor `2 pi / (l mu)`, i.e. without
/// the `1/(16 l^4)` carried by the squared residual. Exceeds
/// [`min_error_closed_form`] by exactly `16 l^4`; kept for the negative
/// control in verification.
pub fn min_error_as_printed(p: &KernelParams, seq: &PoleSequence) -> Result<f64> {
    let (bracket, mu, _, _) = bracket_parts(p, seq)?;
    Ok(2.0 * PI / (p.lambda * mu) * bracket / p.rho0.norm_sqr())
}

/// Closed-form Gram matrix `X[j][k] = Int W_j conj(W_k) dt` of the three
/// residual components
///
/// ```text
/// W_1 = A i / (l tau(i l)) / (i l - t)
/// W_2 = -(A + i l B) / tau(i l) / (i l - t)^2
/// W_3 = (A + i l B) S / tau(i l) / (i l - t)
/// ```
///
/// The minimal error equals `2 Re(Sum X) / (16 l^4)` for `rho0 = 1`.
pub fn w_gram_closed_form(p: &KernelParams, seq: &PoleSequence) -> Result<Matrix3<Complex64>> {
    let (a, b) = p.require_real()?;
    let l = p.lambda;
    let mu = mu_product(seq, l)?;
    let s = sigma_sum(seq, l)?;
    let ap = Complex64::new(a, l * b);
    let am = ap.conj();
    let q1 = a * a + l * l * b * b;
    let r = |x: f64| Complex64::new(x, 0.0);

    let x11 = r(a * a * PI / (l.powi(3) * mu));
    let x22 = r(PI * q1 / (2.0 * l.powi(3) * mu));
    let x33 = r(PI * q1 * s.norm_sqr() / (l * mu));
    let x21 = PI * a * ap / (2.0 * l.powi(3) * mu);
    let x12 = PI * a * am / (2.0 * l.powi(3) * mu);
    let x31 = -PI * ap * a * I * s / (l * l * mu);
    let x13 = PI * am * a * I * s.conj() / (l * l * mu);
    let x32 = -PI * q1 * I * s / (2.0 * l * l * mu);
    let x23 = PI * q1 * I * s.conj() / (2.0 * l * l * mu);

    Ok(Matrix3::new(
        x11, x12, x13, //
        x21, x22, x23, //
        x31, x32, x33,
    ))
}

/// Coefficient vectors of `e_k = tau_n Phi_k`
/// `= sqrt(beta_k) Prod_{j<k} chi_j (z - a_j) Prod_{j>k} (z - conj(a_j))`.
pub fn tm_polynomial_basis(ctx: &BasisContext) -> Vec<ComplexPolynomial> {
    let poles = ctx.seq().poles();
    let chi = ctx.chi();
    (0..poles.len())
        .map(|k| {
            let lead: Complex64 = chi[..k].iter().product();
            let roots = poles[..k]
                .iter()
                .map(|p| p.to_complex())
                .chain(poles[k + 1..].iter().map(|p| p.conj()));
            ComplexPolynomial::from_roots(roots).scale(lead * poles[k].beta.sqrt())
        })
        .collect()
}

/// Coefficients `b_1..b_n` with `q(z) = tau_n(z) Sum b_k Phi_k(z)`.
pub fn expand_in_tm_basis(q: &ComplexPolynomial, ctx: &BasisContext) -> Result<Vec<Complex64>> {
    let n = ctx.len();
    if q.degree() > n - 1 {
        return Err(Error::DegreeTooHigh {
            degree: q.degree(),
            max: n - 1,
        });
    }
    let basis = tm_polynomial_basis(ctx);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (k, e) in basis.iter().enumerate() {
        for (row, c) in e.padded(n).into_iter().enumerate().take(n) {
            m[(row, k)] = c;
        }
    }
    let rhs = DVector::from_vec(q.padded(n));
    let sol = m.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(sol.iter().copied().collect())
}

/// Assembles the full closed-form solution.
pub fn approximate(p: &KernelParams, seq: &PoleSequence) -> Result<ApproxReport> {
    let (bracket, mu, a_sum, b_sum) = bracket_parts(p, seq)?;
    let polynomial = best_polynomial(p, seq)?;
    let ctx = BasisContext::new(seq.clone());
    let coeffs = expand_in_tm_basis(&polynomial, &ctx)?;
    Ok(ApproxReport {
        min_error: min_error_closed_form(p, seq)?,
        sigma: sigma_sum(seq, p.lambda)?,
        polynomial,
        mu,
        a_sum,
        b_sum,
        bracket,
        coeffs,
    })
}
