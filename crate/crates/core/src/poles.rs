//! Pole sequences in the upper half-plane and the scalar sums and products
//! built from them.
//!
//! Every closed form in this crate is driven by a finite sequence of poles
//! `a_k = alpha_k + i beta_k` with `beta_k > 0`. The sequence is kept in the
//! order the caller supplied; duplicates are allowed and count with
//! multiplicity.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A single pole `alpha + i beta` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub alpha: f64,
    pub beta: f64,
}

impl Pole {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        Pole { alpha, beta }
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.alpha, self.beta)
    }

    /// The reflected point `alpha - i beta` in the lower half-plane.
    #[inline]
    pub fn conj(self) -> Complex64 {
        Complex64::new(self.alpha, -self.beta)
    }

    /// `alpha^2 + (beta + lambda)^2`, i.e. `|i lambda - conj(a)|^2`.
    #[inline]
    fn shifted_norm_sqr(self, lambda: f64) -> f64 {
        let b = self.beta + lambda;
        self.alpha * self.alpha + b * b
    }
}

impl From<(f64, f64)> for Pole {
    fn from((alpha, beta): (f64, f64)) -> Self {
        Pole { alpha, beta }
    }
}

/// Checks that `poles` is nonempty and lies in the open upper half-plane.
pub fn validate_poles(poles: &[Pole]) -> Result<()> {
    if poles.is_empty() {
        return Err(Error::EmptySequence);
    }
    for (index, p) in poles.iter().enumerate() {
        if !p.alpha.is_finite() || !p.beta.is_finite() {
            return Err(Error::NonFinite("pole coordinates"));
        }
        if p.beta <= 0.0 {
            return Err(Error::PoleNotInUpperHalfPlane {
                index,
                beta: p.beta,
            });
        }
    }
    Ok(())
}

/// A validated, ordered, nonempty sequence of poles in the upper half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleSequence {
    poles: Vec<Pole>,
}

impl PoleSequence {
    pub fn new(poles: Vec<Pole>) -> Result<Self> {
        validate_poles(&poles)?;
        Ok(PoleSequence { poles })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().copied().map(Pole::from).collect())
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Pole> + '_ {
        self.poles.iter()
    }

    /// The first `n` poles as a new sequence.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.poles.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.poles.len(),
            });
        }
        Ok(PoleSequence {
            poles: self.poles[..n].to_vec(),
        })
    }

    /// Largest pole modulus; used to pick quadrature scales.
    pub fn max_modulus(&self) -> f64 {
        self.poles
            .iter()
            .map(|p| p.to_complex().norm())
            .fold(0.0, f64::max)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveLambda(lambda))
    }
}

/// `Sum_k (a_k + i lambda) / (alpha_k^2 + (beta_k + lambda)^2)`.
///
/// Equals `-tau'(i lambda) / tau(i lambda)` where `tau` has roots `conj(a_k)`.
pub fn sigma_sum(seq: &PoleSequence, lambda: f64) -> Result<Complex64> {
    check_lambda(lambda)?;
    Ok(seq
        .iter()
        .map(|p| Complex64::new(p.alpha, p.beta + lambda) / p.shifted_norm_sqr(lambda))
        .sum())
}

/// Real and imaginary parts of [`sigma_sum`], summed separately.
pub fn cartesian_sums(seq: &PoleSequence, lambda: f64) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    let mut a_sum = 0.0;
    let mut b_sum = 0.0;
    for p in seq.iter() {
        let d = p.shifted_norm_sqr(lambda);
        a_sum += p.alpha / d;
        b_sum += (p.beta + lambda) / d;
    }
    Ok((a_sum, b_sum))
}

/// `Prod_k (alpha_k^2 + (beta_k + lambda)^2) = |tau(i lambda)|^2`.
pub fn mu_product(seq: &PoleSequence, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(seq.iter().map(|p| p.shifted_norm_sqr(lambda)).product())
}
