//! Continued-fraction reconstruction of rationals from floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// All continued-fraction convergents of `x` with denominator at most
/// `max_den`, in order of increasing denominator. Any rational with small
/// denominator close to `x` appears here, so exact verification against
/// these candidates recovers rational values from float approximations.
pub fn convergents_f64(x: f64, max_den: u64) -> Vec<BigRational> {
    let mut out = Vec::new();
    if !x.is_finite() {
        return out;
    }
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::from(0));
    let (mut p1, mut q1) = (BigInt::from(x.floor() as i64), BigInt::from(1));
    let mut frac = x - x.floor();
    for _ in 0..64 {
        out.push(BigRational::new(p1.clone(), q1.clone()));
        if frac.abs() < 1e-18 {
            break;
        }
        let recip = 1.0 / frac;
        if !recip.is_finite() || recip > 1e18 {
            break;
        }
        let a = recip.floor();
        frac = recip - a;
        let a_big = BigInt::from(a as i64);
        let p2 = &a_big * &p1 + &p0;
        let q2 = &a_big * &q1 + &q0;
        if q2.abs() > BigInt::from(max_den) {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    out
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// accepted only when it lands within `tol` of `x`.
///
/// This walks the continued-fraction convergents of `x`; the first
/// convergent that is within `tol` wins, so small denominators are
/// preferred over marginally closer large ones.
pub fn reconstruct_f64(x: f64, max_den: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::from(0));
    let (mut p1, mut q1) = (BigInt::from(x.floor() as i64), BigInt::from(1));
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let cand = BigRational::new(p1.clone(), q1.clone());
        let err = (cand.to_f64().unwrap_or(f64::INFINITY) - x).abs();
        if err <= tol {
            return Some(cand);
        }
        if frac.abs() < 1e-18 {
            break;
        }
        let recip = 1.0 / frac;
        if !recip.is_finite() {
            break;
        }
        let a = recip.floor();
        frac = recip - a;
        let a_big = BigInt::from(a as i64);
        let p2 = &a_big * &p1 + &p0;
        let q2 = &a_big * &q1 + &q0;
        if q2.abs() > BigInt::from(max_den) {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    let cand = BigRational::new(p1, q1);
    if (cand.to_f64().unwrap_or(f64::INFINITY) - x).abs() <= tol {
        Some(cand)
    } else {
        None
    }
}
