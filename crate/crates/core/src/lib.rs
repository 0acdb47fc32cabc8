//! Takenaka-Malmquist rational systems on the real line and the closed-form
//! weighted mean-square best polynomial approximation of kernels
//! `(A + B x) / (x^2 + lambda^2)^2`.
//!
//! * [`poles`]: pole sequences and the scalar sums/products they generate.
//! * [`cpoly`]: dense complex polynomials and divided-difference polynomials.
//! * [`basis`]: the orthonormal system `Phi_k`, Blaschke products and the
//!   Christoffel-Darboux-type kernel identity.
//! * [`kernel`]: the kernel, its partial fractions and the residual `K - T`.
//! * [`best_approx`]: the optimal polynomial and the minimal error.
//! * [`quadrature`]: an independent real-line quadrature oracle.
//! * [`sampling`]: seeded, reproducible check points.
//!
//! ```
//! use tmapprox::{approximate, KernelParams, PoleSequence};
//!
//! let poles = PoleSequence::from_pairs(&[(0.0, 1.0)]).unwrap();
//! let params = KernelParams::real(1.0, 0.0, 1.0).unwrap();
//! let report = approximate(&params, &poles).unwrap();
//! assert!((report.polynomial.coeffs()[0].re - 0.375).abs() < 1e-15);
//! assert!((report.min_error - 17.0 * std::f64::consts::PI / 128.0).abs() < 1e-15);
//! ```

pub mod basis;
pub mod best_approx;
pub mod cpoly;
pub mod error;
pub mod kernel;
pub mod poles;
pub mod quadrature;
pub mod sampling;

pub use num_complex::Complex64;

pub use basis::{chi_factor, BasisContext, KernelSum};
pub use best_approx::{
    approximate, best_polynomial, expand_in_tm_basis, min_error_as_printed, min_error_closed_form,
    w_gram_closed_form, ApproxReport,
};
pub use cpoly::{nu_poly, tau_poly, ComplexPolynomial};
pub use error::{Error, Result};
pub use kernel::{kernel_eval, residual_eval, weighted_kernel_eval, KernelParams};
pub use poles::{cartesian_sums, mu_product, sigma_sum, validate_poles, Pole, PoleSequence};
pub use quadrature::{HardyTestFunction, LineFunction, QuadratureSpec};
