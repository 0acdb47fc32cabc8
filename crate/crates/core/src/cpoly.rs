//! Dense complex polynomials and the divided-difference polynomials built
//! from the pole products `nu(z) = Prod (z - a_k)` and
//! `tau(z) = Prod (z - conj(a_k))`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poles::PoleSequence;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial with complex coefficients in ascending degree order.
///
/// Canonical form carries no trailing zero coefficients above degree 0; the
/// zero polynomial is `[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        ComplexPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        ComplexPolynomial { coeffs: vec![ZERO] }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial `Prod (z - r)` over `roots`, with multiplicity.
    pub fn from_roots<I: IntoIterator<Item = Complex64>>(roots: I) -> Self {
        let mut coeffs = vec![ONE];
        for r in roots {
            coeffs.push(ZERO);
            for k in (1..coeffs.len()).rev() {
                coeffs[k] = coeffs[k - 1] - r * coeffs[k];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `len(coeffs) - 1`; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    /// Synthetic division by `(z - w)`: returns `(q, r)` with
    /// `p(z) = (z - w) q(z) + r` and `r = p(w)`.
    pub fn deflate_once(&self, w: Complex64) -> Result<(Self, Complex64)> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::DegreeZeroInput);
        }
        let mut q = vec![ZERO; n];
        let mut acc = self.coeffs[n];
        for k in (0..n).rev() {
            q[k] = acc;
            acc = self.coeffs[k] + acc * w;
        }
        Ok((Self::new(q), acc))
    }

    /// Relative coefficient distance `||p - q|| / max(||p||, ||q||)` in the
    /// Euclidean coefficient norm; zero when both are zero.
    pub fn rel_distance(&self, other: &Self) -> f64 {
        let diff = (self - other).norm();
        let scale = self.norm().max(other.norm());
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rel_distance(other) <= tol
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Coefficients zero-padded (or, if shorter, unchanged) to length `len`.
    pub fn padded(&self, len: usize) -> Vec<Complex64> {
        let mut v = self.coeffs.clone();
        if v.len() < len {
            v.resize(len, ZERO);
        }
        v
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn add(self, rhs: Self) -> ComplexPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let (a, b) = (self.padded(len), rhs.padded(len));
        ComplexPolynomial::new(a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn sub(self, rhs: Self) -> ComplexPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let (a, b) = (self.padded(len), rhs.padded(len));
        ComplexPolynomial::new(a.iter().zip(&b).map(|(x, y)| x - y).collect())
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn mul(self, rhs: Self) -> ComplexPolynomial {
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn neg(self) -> ComplexPolynomial {
        self.scale(-ONE)
    }
}

/// `nu(z) = Prod (z - a_k)`.
pub fn nu_poly(seq: &PoleSequence) -> ComplexPolynomial {
    ComplexPolynomial::from_roots(seq.iter().map(|p| p.to_complex()))
}

/// `tau(z) = Prod (z - conj(a_k))`.
pub fn tau_poly(seq: &PoleSequence) -> ComplexPolynomial {
    ComplexPolynomial::from_roots(seq.iter().map(|p| p.conj()))
}

/// Picks the product polynomial whose roots lie in the half-plane opposite
/// to `w`, so that it never vanishes at `w`.
fn branch_poly(seq: &PoleSequence, w: Complex64) -> Result<ComplexPolynomial> {
    if w.im > 0.0 {
        Ok(tau_poly(seq))
    } else if w.im < 0.0 {
        Ok(nu_poly(seq))
    } else {
        Err(Error::RealArgumentW(w))
    }
}

/// First divided-difference polynomial `L(z; w)` of degree `n - 1`.
///
/// For `w` in the upper half-plane this is
/// `(tau(w) - tau(z)) / ((w - z) tau(w))`; in the lower half-plane
/// `(nu(w) - nu(z)) / ((z - w) nu(w))`. Both are obtained from a single
/// exact deflation of the product polynomial at `w`.
pub fn first_divided_difference(seq: &PoleSequence, w: Complex64) -> Result<ComplexPolynomial> {
    let p = branch_poly(seq, w)?;
    let (q, pw) = p.deflate_once(w)?;
    // p(z) - p(w) = (z - w) q(z)
    let sign = if w.im > 0.0 { ONE } else { -ONE };
    Ok(q.scale(sign / pw))
}

/// Second divided-difference polynomial `M(z; w)` of degree `n - 2`:
/// `(p(w) - p(z) - (w - z) p'(w)) / ((w - z)^2 p(w))` with `p = tau` for
/// `w` above the axis and `p = nu` below. Zero for a single pole.
pub fn second_divided_difference(seq: &PoleSequence, w: Complex64) -> Result<ComplexPolynomial> {
    let p = branch_poly(seq, w)?;
    let (q, pw) = p.deflate_once(w)?;
    if q.degree() == 0 {
        return Ok(ComplexPolynomial::zero());
    }
    // q(w) = p'(w); p(w) - p(z) - (w - z) q(w) = -(z - w)^2 q2(z)
    let (q2, _) = q.deflate_once(w)?;
    Ok(q2.scale(-ONE / pw))
}

/// The second difference with the Taylor term omitted,
/// `(p(w) - p(z)) / ((w - z)^2 p(w))`, evaluated pointwise.
///
/// This is a rational function with a simple pole at `z = w`, not a
/// polynomial; it exists only as a negative control for the verification
/// suite.
pub fn printed_second_difference_eval(
    seq: &PoleSequence,
    w: Complex64,
    z: Complex64,
) -> Result<Complex64> {
    let p = branch_poly(seq, w)?;
    if z == w {
        return Err(Error::PoleHit(z));
    }
    let pw = p.eval(w);
    Ok((pw - p.eval(z)) / ((w - z) * (w - z) * pw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    fn poly(v: &[(f64, f64)]) -> ComplexPolynomial {
        ComplexPolynomial::new(v.iter().map(|&(r, i)| c(r, i)).collect())
    }

    #[test]
    fn canonical_zero() {
        assert_eq!(ComplexPolynomial::new(vec![]), ComplexPolynomial::zero());
        assert_eq!(ComplexPolynomial::new(vec![ZERO, ZERO]).coeffs().len(), 1);
        assert_eq!(poly(&[(1.0, 0.0), (0.0, 0.0)]).degree(), 0);
    }

    #[test]
    fn eval_examples() {
        let i = c(0.0, 1.0);
        assert!(close(
            poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]).eval(i),
            c(-1.0, 0.0),
            1e-15
        ));
        assert_eq!(ComplexPolynomial::constant(ONE).eval(c(3.0, -7.0)), ONE);
        assert_eq!(poly(&[(0.0, -1.0), (1.0, 0.0)]).eval(i), ZERO);
    }

    #[test]
    fn nu_tau_examples() {
        let s = PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap();
        assert_eq!(nu_poly(&s), poly(&[(0.0, -1.0), (1.0, 0.0)]));
        assert_eq!(tau_poly(&s), poly(&[(0.0, 1.0), (1.0, 0.0)]));

        let s = PoleSequence::from_pairs(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert!(nu_poly(&s).approx_eq(&poly(&[(-1.0, 0.0), (0.0, -2.0), (1.0, 0.0)]), 1e-15));

        let s = PoleSequence::from_pairs(&[(1.0, 1.0), (-1.0, 1.0)]).unwrap();
        assert!(nu_poly(&s).approx_eq(&poly(&[(-2.0, 0.0), (0.0, -2.0), (1.0, 0.0)]), 1e-15));

        let s = PoleSequence::from_pairs(&[(0.0, 2.0)]).unwrap();
        assert_eq!(tau_poly(&s), poly(&[(0.0, 2.0), (1.0, 0.0)]));
        let s = PoleSequence::from_pairs(&[(1.0, 1.0)]).unwrap();
        assert_eq!(tau_poly(&s), poly(&[(-1.0, 1.0), (1.0, 0.0)]));
    }

    #[test]
    fn deflate_examples() {
        let i = c(0.0, 1.0);
        let (q, r) = poly(&[(1.0, 0.0), (0.0, 0.0), (1.0, 0.0)])
            .deflate_once(i)
            .unwrap();
        assert_eq!(q, poly(&[(0.0, 1.0), (1.0, 0.0)]));
        assert!(r.norm() < 1e-15);

        let (q, r) = poly(&[(0.0, 1.0), (1.0, 0.0)]).deflate_once(i).unwrap();
        assert_eq!(q, ComplexPolynomial::constant(ONE));
        assert_eq!(r, c(0.0, 2.0));

        let (q, r) = poly(&[(-1.0, 0.0), (0.0, -2.0), (1.0, 0.0)])
            .deflate_once(i)
            .unwrap();
        assert_eq!(q, poly(&[(0.0, -1.0), (1.0, 0.0)]));
        assert!(r.norm() < 1e-15);

        assert_eq!(
            ComplexPolynomial::constant(ONE).deflate_once(i),
            Err(Error::DegreeZeroInput)
        );
    }

    #[test]
    fn first_difference_examples() {
        let s = PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap();
        for w in [c(0.0, 1.0), c(0.0, -1.0)] {
            let l = first_divided_difference(&s, w).unwrap();
            assert_eq!(l.degree(), 0);
            assert!(close(l.coeffs()[0], c(0.0, -0.5), 1e-15));
        }
        let s = PoleSequence::from_pairs(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        let l = first_divided_difference(&s, c(0.0, 2.0)).unwrap();
        assert_eq!(l.degree(), 1);
        assert!(close(l.eval(ZERO), c(0.0, -4.0 / 9.0), 1e-15));
        assert_eq!(
            first_divided_difference(&s, c(1.5, 0.0)),
            Err(Error::RealArgumentW(c(1.5, 0.0)))
        );
    }

    #[test]
    fn second_difference_examples() {
        let s = PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap();
        for w in [c(0.0, 1.0), c(2.0, -3.0)] {
            assert!(second_divided_difference(&s, w).unwrap().is_zero());
        }
        let s = PoleSequence::from_pairs(&[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        for w in [c(0.0, 1.0), c(0.0, -1.0)] {
            let m = second_divided_difference(&s, w).unwrap();
            assert_eq!(m.degree(), 0);
            assert!(close(m.coeffs()[0], c(0.25, 0.0), 1e-15));
        }
        assert!(second_divided_difference(&s, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn printed_form_is_not_polynomial() {
        // One pole: the printed second difference is L(z; w)/(w - z), which
        // blows up near z = w while the corrected M is identically zero.
        let s = PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap();
        let w = c(0.0, 1.0);
        let near = printed_second_difference_eval(&s, w, w + c(1e-6, 0.0)).unwrap();
        assert!(near.norm() > 1e5);
        assert!(printed_second_difference_eval(&s, w, w).is_err());
    }

    fn arb_poles() -> impl Strategy<Value = PoleSequence> {
        prop::collection::vec((-2.0..2.0f64, 0.2..3.0f64), 1..8)
            .prop_map(|v| PoleSequence::from_pairs(&v).unwrap())
    }

    fn arb_c() -> impl Strategy<Value = Complex64> {
        (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #[test]
        fn deflate_round_trip(coeffs in prop::collection::vec(arb_c(), 2..12), w in arb_c()) {
            let p = ComplexPolynomial::new(coeffs);
            prop_assume!(p.degree() >= 1);
            let (q, r) = p.deflate_once(w).unwrap();
            let lin = ComplexPolynomial::new(vec![-w, ONE]);
            let back = &(&lin * &q) + &ComplexPolynomial::constant(r);
            // backward-error scale: the terms being recombined
            let scale = p.norm() + w.norm() * q.norm() + r.norm();
            prop_assert!((&back - &p).norm() <= 1e-13 * scale);
            prop_assert!(close(r, p.eval(w), 1e-12));
        }

        #[test]
        fn nu_vanishes_at_poles(seq in arb_poles()) {
            let nu = nu_poly(&seq);
            prop_assert_eq!(nu.degree(), seq.len());
            for p in seq.iter() {
                let a = p.to_complex();
                let bound = 1e-12 * (1.0 + a.norm()).powi(seq.len() as i32);
                prop_assert!(nu.eval(a).norm() <= bound);
            }
        }

        #[test]
        fn first_difference_matches_rational(seq in arb_poles(), wr in -2.0..2.0f64,
                                             wi in 0.1..3.0f64, upper in any::<bool>(),
                                             zs in prop::collection::vec(arb_c(), 20)) {
            let w = c(wr, if upper { wi } else { -wi });
            let l = first_divided_difference(&seq, w).unwrap();
            prop_assert_eq!(l.degree(), seq.len() - 1);
            let (p, upper_branch) = if upper { (tau_poly(&seq), true) } else { (nu_poly(&seq), false) };
            for z in zs {
                prop_assume!((z - w).norm() > 1e-3);
                let exact = if upper_branch {
                    (p.eval(w) - p.eval(z)) / ((w - z) * p.eval(w))
                } else {
                    (p.eval(w) - p.eval(z)) / ((z - w) * p.eval(w))
                };
                let got = l.eval(z);
                prop_assert!((got - exact).norm() <= 1e-11 * got.norm().max(exact.norm()).max(1e-300));
            }
        }

        #[test]
        fn second_difference_matches_rational(seq in arb_poles(), wr in -2.0..2.0f64,
                                              wi in 0.1..3.0f64, upper in any::<bool>(),
                                              zs in prop::collection::vec(arb_c(), 20)) {
            let w = c(wr, if upper { wi } else { -wi });
            let m = second_divided_difference(&seq, w).unwrap();
            let n = seq.len();
            if n == 1 {
                prop_assert!(m.is_zero());
                return Ok(());
            }
            prop_assert_eq!(m.degree(), n - 2);
            let p = if upper { tau_poly(&seq) } else { nu_poly(&seq) };
            let dp = p.derivative();
            for z in zs {
                prop_assume!((z - w).norm() > 0.1);
                let exact = (p.eval(w) - p.eval(z) - (w - z) * dp.eval(w))
                    / ((w - z) * (w - z) * p.eval(w));
                let got = m.eval(z);
                let scale = got.norm().max(exact.norm()).max(1e-300);
                prop_assert!((got - exact).norm() <= 1e-11 * scale, "got {got} exact {exact}");
            }
            let d2 = dp.derivative();
            // Taylor: p(w) - p(z) - (w - z) p'(w) = -p''(w) (z - w)^2 / 2 + ...
            let at_w = -d2.eval(w) / (2.0 * p.eval(w));
            prop_assert!((m.eval(w) - at_w).norm() <= 1e-10 * at_w.norm().max(1e-300));
        }
    }
}
