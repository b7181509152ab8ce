//! The logarithm of the Dedekind eta function and the torus contributions
//! `F_{k,eps}(s)`.
//!
//! `L(tau) = pi i tau / 12 - sum_{n>=1} sigma_{-1}(n) e^{2 pi i n tau}` is
//! evaluated by first reducing `tau` with the functional equations
//!
//! ```text
//! L(tau + 1) = pi i / 12 + L(tau)
//! L(-1/tau)  = log(tau/i) / 2 + L(tau)
//! ```
//!
//! into the region `|Re tau| <= 1/2`, `|tau| >= 1`, which pins
//! `Im tau >= sqrt(3)/2` and makes the q-series converge in a handful of
//! terms. The accumulated corrections are exact closed forms, so the only
//! error is the series truncation, which is bounded explicitly.
//!
//! The torus contribution is
//! `F_{k,eps}(s) = i L((si + eps)/k) - i L((si - eps)/k) + c_{k,eps}`,
//! with the constant `c_{k,eps}` known in closed form for `eps = +-1` and
//! for `eps^2 = -1 (mod k)`. Other parameter pairs are a typed error, never
//! an extrapolation. `eps` enters through its integer representative in
//! `(-k/2, k/2]`: shifting the representative by `k` shifts `F` by a
//! multiple of `pi/6`, so the convention is part of the contract.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::Q;

#[derive(Debug, Error, PartialEq)]
pub enum EtaError {
    #[error("tau must lie in the open upper half plane, got im = {0}")]
    NotUpperHalfPlane(f64),
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("sigma_{{-1}} requires n >= 1")]
    BadSigmaArgument,
    #[error("modular reduction did not terminate (64 steps)")]
    ReductionFailed,
    #[error("series truncation could not reach the requested tolerance")]
    TruncationFailed,
    #[error("c_{{k,eps}} for (k, eps) = ({k}, {eps}) is not determined here: \
             only eps = +-1 and eps^2 = -1 (mod k) are covered")]
    UnsupportedConstant { k: u32, eps: i32 },
    #[error("invalid eta parameters: {0}")]
    BadParams(String),
    #[error("imaginary residual {residual:e} exceeds tolerance {tol:e}")]
    ImaginaryResidual { residual: f64, tol: f64 },
}

/// A point `re + i im` with `im > 0`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct HalfPlanePoint {
    pub re: f64,
    pub im: f64,
}

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self, EtaError> {
        if !(im > 0.0) {
            return Err(EtaError::NotUpperHalfPlane(im));
        }
        Ok(HalfPlanePoint { re, im })
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Parameters `(k, eps, s^2)` of one torus family.
#[derive(Clone, PartialEq, Debug)]
pub struct EtaParams {
    pub k: u32,
    pub eps: i32,
    pub s_sq: Q,
}

impl EtaParams {
    pub fn new(k: u32, eps: i32, s_sq: Q) -> Result<Self, EtaError> {
        if k == 0 {
            return Err(EtaError::BadParams("k must be positive".into()));
        }
        if k == 1 && eps != 0 {
            return Err(EtaError::BadParams("eps must be 0 when k = 1".into()));
        }
        if k > 1 {
            let (ki, e) = (k as i64, eps as i64);
            if e.gcd(&ki) != 1 {
                return Err(EtaError::BadParams(format!("eps = {eps} is not a unit mod {k}")));
            }
            if !(2 * e > -ki && 2 * e <= ki) {
                return Err(EtaError::BadParams(format!(
                    "eps = {eps} is not the representative in (-{k}/2, {k}/2]"
                )));
            }
        }
        if !s_sq.is_positive() {
            return Err(EtaError::BadParams("s^2 must be positive".into()));
        }
        Ok(EtaParams { k, eps, s_sq })
    }
}

/// A complex value together with an absolute error bound.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ComplexEval {
    pub value: Complex64,
    pub error_bound: f64,
}

/// A real value together with an absolute error bound.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct RealEval {
    pub value: f64,
    pub error_bound: f64,
}

/// Exact rational `sigma_{-1}(n) = sum_{d | n} 1/d`.
pub fn sigma_minus_one(n: u64) -> Result<Q, EtaError> {
    if n == 0 {
        return Err(EtaError::BadSigmaArgument);
    }
    let mut total = Q::zero();
    for d in 1..=n {
        if n % d == 0 {
            total += BigRational::new(1.into(), (d as i64).into());
        }
    }
    Ok(total)
}

const PI: f64 = std::f64::consts::PI;

fn pi_i_over_12() -> Complex64 {
    Complex64::new(0.0, PI / 12.0)
}

/// Direct q-series evaluation without modular reduction. Only sensible for
/// `Im tau` comfortably above the unit circle; used as the second route in
/// consistency checks and internally after reduction.
pub fn dedekind_log_direct(tau: HalfPlanePoint, tol: f64) -> Result<ComplexEval, EtaError> {
    if !(tol > 0.0) {
        return Err(EtaError::BadTolerance);
    }
    let t = tau.to_complex();
    let x = (-2.0 * PI * tau.im).exp();
    // tail bound: sum_{n > N} n x^n = x^{N+1} ((N+1)(1-x) + x) / (1-x)^2
    let tail = |nn: u64| -> f64 {
        let nf = nn as f64;
        x.powf(nf + 1.0) * ((nf + 1.0) * (1.0 - x) + x) / ((1.0 - x) * (1.0 - x))
    };
    let mut terms = 1u64;
    while tail(terms) > tol / 2.0 {
        terms += 1;
        if terms > 4000 {
            return Err(EtaError::TruncationFailed);
        }
    }
    let qfac = (Complex64::new(0.0, 2.0 * PI) * t).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qpow = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        qpow *= qfac;
        let sigma = sigma_minus_one(n)?.to_f64().unwrap();
        sum += sigma * qpow;
    }
    let value = pi_i_over_12() * t - sum;
    let slop = 8.0 * f64::EPSILON * (1.0 + value.norm() + terms as f64);
    Ok(ComplexEval { value, error_bound: tail(terms) + slop })
}

/// `L(tau)` with absolute error at most `tol`, via modular reduction into
/// `|Re tau| <= 1/2`, `|tau| >= 1` followed by the q-series.
pub fn dedekind_log(tau: HalfPlanePoint, tol: f64) -> Result<ComplexEval, EtaError> {
    if !(tol > 0.0) {
        return Err(EtaError::BadTolerance);
    }
    let mut t = tau.to_complex();
    let mut corr = Complex64::new(0.0, 0.0);
    let mut reduced = false;
    for _ in 0..64 {
        let shift = t.re.round();
        if shift != 0.0 {
            // L(tau) = shift * pi i / 12 + L(tau - shift)
            corr += pi_i_over_12() * shift;
            t.re -= shift;
        }
        if t.norm_sqr() < 1.0 - 1e-14 {
            // L(tau) = L(-1/tau) - log(tau / i) / 2
            let ratio = t * Complex64::new(0.0, -1.0);
            corr -= 0.5 * ratio.ln();
            t = -1.0 / t;
        } else {
            reduced = true;
            break;
        }
    }
    if !reduced {
        return Err(EtaError::ReductionFailed);
    }
    let inner = dedekind_log_direct(HalfPlanePoint { re: t.re, im: t.im }, tol)?;
    let value = corr + inner.value;
    let slop = 8.0 * f64::EPSILON * (1.0 + corr.norm());
    Ok(ComplexEval { value, error_bound: inner.error_bound + slop })
}

/// The closed-form constant `c_{k,eps}`.
///
/// Two branches are known: `-eps pi (k^2 - 3k + 1) / (6k)` for `eps = +-1`,
/// and `pi eps / (6k)` when `eps^2 = -1 (mod k)`. When both apply they must
/// agree (asserted); anything else is an explicit unsupported-parameter
/// error.
pub fn c_constant(k: u32, eps: i32) -> Result<f64, EtaError> {
    if k == 0 {
        return Err(EtaError::BadParams("k must be positive".into()));
    }
    let kf = k as f64;
    let ef = eps as f64;
    let branch_unit = (eps == 1 || eps == -1)
        .then(|| -ef * PI * (kf * kf - 3.0 * kf + 1.0) / (6.0 * kf));
    let branch_sq = (((eps as i64) * (eps as i64) + 1).rem_euclid(k as i64) == 0)
        .then(|| PI * ef / (6.0 * kf));
    match (branch_unit, branch_sq) {
        (Some(a), Some(b)) => {
            assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "c_(k,eps) branches disagree");
            Ok(a)
        }
        (Some(a), None) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(EtaError::UnsupportedConstant { k, eps }),
    }
}

/// `F_{k,eps}(s) = i L((si + eps)/k) - i L((si - eps)/k) + c_{k,eps}`.
///
/// The two arguments are reflections of each other across the imaginary
/// axis, so the result is real; the imaginary residual is checked against
/// the tolerance.
pub fn f_small(params: &EtaParams, tol: f64) -> Result<RealEval, EtaError> {
    if !(tol > 0.0) {
        return Err(EtaError::BadTolerance);
    }
    let c = c_constant(params.k, params.eps)?;
    let s = params.s_sq.to_f64().unwrap().sqrt();
    let kf = params.k as f64;
    let ef = params.eps as f64;
    let tau_plus = HalfPlanePoint::new(ef / kf, s / kf)?;
    let tau_minus = HalfPlanePoint::new(-ef / kf, s / kf)?;
    let lp = dedekind_log(tau_plus, tol / 4.0)?;
    let lm = dedekind_log(tau_minus, tol / 4.0)?;
    let i = Complex64::new(0.0, 1.0);
    let total = i * lp.value - i * lm.value + c;
    let residual = total.im.abs();
    if residual > tol {
        return Err(EtaError::ImaginaryResidual { residual, tol });
    }
    let error_bound = lp.error_bound + lm.error_bound + 4.0 * f64::EPSILON * (1.0 + c.abs());
    Ok(RealEval { value: total.re, error_bound })
}

/// The full torus contribution `F = (144 / pi) F_{k,eps}(s)`.
pub fn f_contribution(params: &EtaParams, tol: f64) -> Result<RealEval, EtaError> {
    let small = f_small(params, tol)?;
    let factor = 144.0 / PI;
    Ok(RealEval { value: factor * small.value, error_bound: factor * small.error_bound })
}
