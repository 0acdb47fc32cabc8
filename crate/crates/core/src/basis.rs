//! The Takenaka-Malmquist orthonormal rational system on the real line.
//!
//! For poles `a_1, ..., a_n` in the upper half-plane,
//!
//! ```text
//! Phi_k(z) = sqrt(beta_k) / (z - conj(a_k)) * b_{k-1}(z)
//! b_m(z)   = Prod_{j<=m} chi_j (z - a_j) / (z - conj(a_j)),   b_0 = 1
//! ```
//!
//! with unimodular phases `chi_j = |1 + a_j^2| / (1 + a_j^2)`. The functions
//! are orthonormal for `(1/pi) Int f conj(g) dt` over the real line and
//! `b_m` is unimodular there.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poles::{Pole, PoleSequence};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `|1 + a^2| / (1 + a^2)`, or `1` when `1 + a^2 = 0` (the pole `a = i`).
pub fn chi_factor(a: Pole) -> Complex64 {
    let a = a.to_complex();
    let d = ONE + a * a;
    if d.norm() == 0.0 {
        ONE
    } else {
        d.norm() / d
    }
}

fn hits(z: Complex64, target: Complex64) -> bool {
    (z - target).norm() <= 4.0 * f64::EPSILON * (1.0 + target.norm())
}

/// Pole sequence together with its cached phase factors.
#[derive(Debug, Clone)]
pub struct BasisContext {
    seq: PoleSequence,
    chi: Vec<Complex64>,
}

/// The two evaluations of the partial reproducing kernel
/// `Sum_{k<=m} conj(Phi_k(zeta)) Phi_k(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSum {
    pub direct: Complex64,
    /// `(1 - conj(b_m(zeta)) b_m(z)) / (2i (conj(zeta) - z))`.
    pub closed_form: Complex64,
}

impl BasisContext {
    pub fn new(seq: PoleSequence) -> Self {
        let chi = seq.iter().map(|&p| chi_factor(p)).collect();
        BasisContext { seq, chi }
    }

    /// Context with caller-chosen phases. Each entry must be unimodular;
    /// anything else would break orthonormality.
    pub fn with_phases(seq: PoleSequence, chi: Vec<Complex64>) -> Result<Self> {
        if chi.len() != seq.len() {
            return Err(Error::IndexOutOfRange {
                index: chi.len(),
                len: seq.len(),
            });
        }
        if chi.iter().any(|c| (c.norm() - 1.0).abs() > 1e-14) {
            return Err(Error::NonFinite("phase factors must be unimodular"));
        }
        Ok(BasisContext { seq, chi })
    }

    pub fn seq(&self) -> &PoleSequence {
        &self.seq
    }

    pub fn chi(&self) -> &[Complex64] {
        &self.chi
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_not_pole(&self, upto: usize, z: Complex64) -> Result<()> {
        match self.seq.poles()[..upto].iter().find(|p| hits(z, p.conj())) {
            Some(_) => Err(Error::PoleHit(z)),
            None => Ok(()),
        }
    }

    /// Product of the first `m` Blaschke factors; `b_0 = 1`.
    pub fn blaschke(&self, m: usize, z: Complex64) -> Result<Complex64> {
        if m > self.len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.len(),
            });
        }
        self.check_not_pole(m, z)?;
        Ok(self.seq.poles()[..m]
            .iter()
            .zip(&self.chi)
            .fold(ONE, |acc, (p, &chi)| {
                acc * chi * (z - p.to_complex()) / (z - p.conj())
            }))
    }

    /// `Phi_k(z)` for `1 <= k <= n`.
    pub fn phi(&self, k: usize, z: Complex64) -> Result<Complex64> {
        if k == 0 || k > self.len() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.len(),
            });
        }
        self.check_not_pole(k, z)?;
        let pole = self.seq.poles()[k - 1];
        let b = self.blaschke(k - 1, z)?;
        Ok(pole.beta.sqrt() / (z - pole.conj()) * b)
    }

    /// `Phi_1(z), ..., Phi_m(z)` sharing one running Blaschke product.
    pub fn phi_all(&self, m: usize, z: Complex64) -> Result<Vec<Complex64>> {
        if m > self.len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.len(),
            });
        }
        self.check_not_pole(m, z)?;
        let mut b = ONE;
        let mut out = Vec::with_capacity(m);
        for (p, &chi) in self.seq.poles()[..m].iter().zip(&self.chi) {
            let denom = z - p.conj();
            out.push(p.beta.sqrt() / denom * b);
            b *= chi * (z - p.to_complex()) / denom;
        }
        Ok(out)
    }

    /// Partial reproducing kernel of the first `m` basis functions, as a
    /// direct sum and through the Blaschke-product closed form.
    pub fn cd_kernel_sum(&self, m: usize, z: Complex64, zeta: Complex64) -> Result<KernelSum> {
        if m == 0 || m > self.len() {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.len(),
            });
        }
        if hits(z, zeta.conj()) {
            return Err(Error::CoincidentArguments(zeta.conj()));
        }
        let pz = self.phi_all(m, z)?;
        let pzeta = self.phi_all(m, zeta)?;
        let direct = pz.iter().zip(&pzeta).map(|(a, b)| b.conj() * a).sum();
        let bz = self.blaschke(m, z)?;
        let bzeta = self.blaschke(m, zeta)?;
        let closed_form =
            (ONE - bzeta.conj() * bz) / (Complex64::new(0.0, 2.0) * (zeta.conj() - z));
        Ok(KernelSum {
            direct,
            closed_form,
        })
    }
}
