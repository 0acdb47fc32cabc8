//! The kernel `K(z) = (A + B z) / (z^2 + lambda^2)^2`, its partial fractions,
//! the normalized kernel `R_n = K / tau_n` and the closed-form residual
//! `K - T_{n-1}` of the best polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poles::{sigma_sum, PoleSequence};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Kernel coefficients, scale and weight normalization.
///
/// `a`, `b` may be complex for the pointwise identities; the extremal
/// results need them real (see [`KernelParams::require_real`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub a: Complex64,
    pub b: Complex64,
    pub lambda: f64,
    /// Leading factor of the weight polynomial `rho_n = rho0 * nu_n`.
    pub rho0: Complex64,
}

impl KernelParams {
    pub fn new(a: Complex64, b: Complex64, lambda: f64, rho0: Complex64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::NonPositiveLambda(lambda));
        }
        if !(a.is_finite() && b.is_finite() && rho0.is_finite()) {
            return Err(Error::NonFinite("kernel coefficients"));
        }
        if rho0.norm() == 0.0 {
            return Err(Error::ZeroWeightScale);
        }
        Ok(KernelParams { a, b, lambda, rho0 })
    }

    /// Real `A`, `B` with `rho0 = 1`.
    pub fn real(a: f64, b: f64, lambda: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), lambda, Complex64::new(1.0, 0.0))
    }

    pub fn with_rho0(self, rho0: Complex64) -> Result<Self> {
        Self::new(self.a, self.b, self.lambda, rho0)
    }

    /// Returns `(A, B)` as reals, or [`Error::ComplexCoefficients`].
    pub fn require_real(&self) -> Result<(f64, f64)> {
        if self.a.im != 0.0 || self.b.im != 0.0 {
            return Err(Error::ComplexCoefficients {
                a: self.a,
                b: self.b,
            });
        }
        Ok((self.a.re, self.b.re))
    }

    fn il(&self) -> Complex64 {
        Complex64::new(0.0, self.lambda)
    }

    fn check_off_poles(&self, z: Complex64) -> Result<()> {
        let il = self.il();
        let tol = 4.0 * f64::EPSILON * (1.0 + self.lambda);
        if (z - il).norm() <= tol || (z + il).norm() <= tol {
            Err(Error::PoleHit(z))
        } else {
            Ok(())
        }
    }
}

/// `(A + B z) / (z^2 + lambda^2)^2`.
pub fn kernel_eval(p: &KernelParams, z: Complex64) -> Result<Complex64> {
    p.check_off_poles(z)?;
    let d = z * z + p.lambda * p.lambda;
    Ok((p.a + p.b * z) / (d * d))
}

/// Coefficients of
/// `c1p/(i l - z) + c1m/(i l + z) + c2p/(i l - z)^2 + c2m/(i l + z)^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialFractionCoeffs {
    pub c1p: Complex64,
    pub c1m: Complex64,
    pub c2p: Complex64,
    pub c2m: Complex64,
    lambda: f64,
}

impl PartialFractionCoeffs {
    pub fn reassemble(&self, z: Complex64) -> Complex64 {
        let il = Complex64::new(0.0, self.lambda);
        let (u, v) = (il - z, il + z);
        self.c1p / u + self.c1m / v + self.c2p / (u * u) + self.c2m / (v * v)
    }
}

pub fn partial_fraction_coeffs(p: &KernelParams) -> PartialFractionCoeffs {
    let l = p.lambda;
    let c1 = p.a * I / (4.0 * l * l * l);
    let il = p.il();
    PartialFractionCoeffs {
        c1p: c1,
        c1m: c1,
        c2p: -(p.a + il * p.b) / (4.0 * l * l),
        c2m: -(p.a - il * p.b) / (4.0 * l * l),
        lambda: l,
    }
}

fn tau_at(seq: &PoleSequence, z: Complex64) -> Complex64 {
    seq.iter().map(|p| z - p.conj()).product()
}

fn nu_at(seq: &PoleSequence, z: Complex64) -> Complex64 {
    seq.iter().map(|p| z - p.to_complex()).product()
}

/// `R_n(z) = K(z) / tau_n(z)`.
pub fn weighted_kernel_eval(
    p: &KernelParams,
    seq: &PoleSequence,
    z: Complex64,
) -> Result<Complex64> {
    let k = kernel_eval(p, z)?;
    let tau = tau_at(seq, z);
    if seq
        .iter()
        .any(|q| (z - q.conj()).norm() <= 4.0 * f64::EPSILON * (1.0 + q.to_complex().norm()))
    {
        return Err(Error::PoleHit(z));
    }
    Ok(k / tau)
}

/// Closed-form `K(z) - T_{n-1}(z)`:
///
/// ```text
/// 1/(4 l^2) tau(z)/tau(i l)  [ A i/(l (i l - z)) - (A + i l B)/(i l - z)^2 + (A + i l B) S/(i l - z) ]
/// + 1/(4 l^2) nu(z)/nu(-i l) [ A i/(l (i l + z)) - (A - i l B)/(i l + z)^2 - (A - i l B) conj(S)/(i l + z) ]
/// ```
///
/// with `S` the pole sum [`sigma_sum`]. The two groups nearly cancel for
/// large `|z|`; relative accuracy degrades past `|z| ~ 1e6`.
pub fn residual_eval(p: &KernelParams, seq: &PoleSequence, z: Complex64) -> Result<Complex64> {
    p.check_off_poles(z)?;
    let l = p.lambda;
    let il = p.il();
    let sigma = sigma_sum(seq, l)?;
    let (ap, am) = (p.a + il * p.b, p.a - il * p.b);
    let (u, v) = (il - z, il + z);
    let upper = p.a * I / (l * u) - ap / (u * u) + ap * sigma / u;
    let lower = p.a * I / (l * v) - am / (v * v) - am * sigma.conj() / v;
    let pre = 1.0 / (4.0 * l * l);
    Ok(pre * (tau_at(seq, z) / tau_at(seq, il) * upper + nu_at(seq, z) / nu_at(seq, -il) * lower))
}
