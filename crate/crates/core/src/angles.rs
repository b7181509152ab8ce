//! Exact representations of configuration angles and the count `m_rho`.
//!
//! An eigenvalue pair `e^{+-ia}` of the reflection product contributes both
//! arguments `+a` and `-a`; only arguments in `(0, pi]` can land in the sets
//! counted by `m_rho`. Angles are carried exactly whenever the half trace of
//! the acting isometry is rational, which covers every bundled fixture.

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Q;

/// Tolerance used when only floating-point angle data is available.
pub const ANGLE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum AngleError {
    #[error("rho = {0} is outside (-pi, pi)")]
    RhoOutOfRange(f64),
    #[error(
        "angle {angle} lies within tolerance of the set boundary {boundary} \
         but no exact cosine data is available; refusing to classify"
    )]
    AmbiguousClassification { angle: f64, boundary: f64 },
    #[error("angle tag carries |2cos| >= 2, which must be encoded as zero/pi")]
    InvalidCosRange,
}

/// One eigen-argument, principal value in `[-pi, pi]`.
///
/// `Acos { double_cos: t, sign }` stands for `sign * arccos(t/2)` with
/// `t` strictly between -2 and 2; the endpoints are the dedicated `Zero`
/// and `Pi` tags. A conjugate pair is stored as two entries of opposite
/// sign, including the degenerate pair `(+pi, -pi)`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactAngle {
    Zero,
    Pi {
        #[serde(default = "one")]
        sign: i8,
    },
    Cos2 {
        #[serde(with = "crate::assemble::qstring")]
        value: Q,
        #[serde(default = "one")]
        sign: i8,
    },
    Float {
        value: f64,
    },
}

fn one() -> i8 {
    1
}

impl ExactAngle {
    pub fn acos(double_cos: Q, sign: i8) -> Result<Self, AngleError> {
        if double_cos.abs() >= Q::from_integer(2.into()) {
            return Err(AngleError::InvalidCosRange);
        }
        Ok(ExactAngle::Cos2 { value: double_cos, sign })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactAngle::Zero => 0.0,
            ExactAngle::Pi { sign } => *sign as f64 * std::f64::consts::PI,
            ExactAngle::Cos2 { value, sign } => {
                *sign as f64 * (value.to_f64().unwrap_or(f64::NAN) / 2.0).acos()
            }
            ExactAngle::Float { value } => *value,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactAngle::Zero)
    }
}

/// The configuration angles split by the sign of the invariant subspace.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct AngleSpectrum {
    /// Exactly 3 arguments from positive invariant subspaces of the K3 form.
    pub alpha_plus: Vec<ExactAngle>,
    /// Exactly 19 arguments from negative invariant subspaces.
    pub alpha_minus: Vec<ExactAngle>,
}

impl AngleSpectrum {
    pub fn nonzero_minus_count(&self) -> usize {
        self.alpha_minus.iter().filter(|a| !a.is_zero()).count()
    }
}

/// How a positive-argument entry relates to the counted sets
/// `{pi - |rho|, pi}` and `(pi - |rho|, pi)`.
enum Membership {
    Boundary,
    OpenInterval,
    Outside,
}

fn classify(
    angle: &ExactAngle,
    rho_abs: f64,
    rho_cos: Option<&Q>,
) -> Result<Membership, AngleError> {
    let boundary = std::f64::consts::PI - rho_abs;
    match angle {
        ExactAngle::Zero => Ok(Membership::Outside),
        ExactAngle::Pi { sign } => {
            if *sign > 0 {
                Ok(Membership::Boundary) // pi is always in the boundary set
            } else {
                Ok(Membership::Outside) // argument -pi is not in (0, pi]
            }
        }
        ExactAngle::Cos2 { value, sign } => {
            if *sign <= 0 {
                return Ok(Membership::Outside);
            }
            // alpha = arccos(value/2) in (0, pi)
            if let Some(c) = rho_cos {
                // alpha == pi - |rho|  <=>  value/2 == cos(pi - |rho|)
                let half = value / Q::from_integer(2.into());
                if half == *c {
                    Ok(Membership::Boundary)
                } else if half < *c {
                    // cos decreasing: alpha > pi - |rho|, and alpha < pi always
                    Ok(Membership::OpenInterval)
                } else {
                    Ok(Membership::Outside)
                }
            } else {
                classify_float(angle.to_f64(), boundary)
            }
        }
        ExactAngle::Float { value } => {
            if *value <= 0.0 {
                return Ok(Membership::Outside);
            }
            if let Some(c) = rho_cos {
                // exact boundary cosine available; compare cosines numerically
                // but treat the tolerance window as ambiguous all the same
                let cf = c.to_f64().unwrap_or(f64::NAN);
                let vcos = value.cos();
                if (vcos - cf).abs() <= ANGLE_TOL || (value - std::f64::consts::PI).abs() <= ANGLE_TOL
                {
                    return Err(AngleError::AmbiguousClassification {
                        angle: *value,
                        boundary,
                    });
                }
                if vcos < cf {
                    Ok(Membership::OpenInterval)
                } else {
                    Ok(Membership::Outside)
                }
            } else {
                classify_float(*value, boundary)
            }
        }
    }
}

fn classify_float(angle: f64, boundary: f64) -> Result<Membership, AngleError> {
    if (angle - boundary).abs() <= ANGLE_TOL {
        return Err(AngleError::AmbiguousClassification { angle, boundary });
    }
    if (angle - std::f64::consts::PI).abs() <= ANGLE_TOL {
        return Err(AngleError::AmbiguousClassification {
            angle,
            boundary: std::f64::consts::PI,
        });
    }
    if angle > boundary && angle < std::f64::consts::PI {
        Ok(Membership::OpenInterval)
    } else {
        Ok(Membership::Outside)
    }
}

/// The configuration count
/// `m_rho = sign(rho) (#{a_j in {pi-|rho|, pi}} - 1 + 2 #{a_j in (pi-|rho|, pi)})`
/// over the negative configuration angles, with `sign(0) := 0`.
///
/// `rho_cos`, when supplied, is the exact value of `cos(pi - |rho|)` and
/// makes every set-membership decision exact for tagged angles.
pub fn m_rho(
    spectrum: &AngleSpectrum,
    rho: f64,
    rho_cos: Option<&Q>,
) -> Result<i64, AngleError> {
    if !(-std::f64::consts::PI..std::f64::consts::PI).contains(&rho)
        || rho <= -std::f64::consts::PI
    {
        return Err(AngleError::RhoOutOfRange(rho));
    }
    if rho == 0.0 {
        return Ok(0);
    }
    let sign = if rho > 0.0 { 1i64 } else { -1i64 };
    let mut boundary = 0i64;
    let mut open = 0i64;
    for a in &spectrum.alpha_minus {
        match classify(a, rho.abs(), rho_cos)? {
            Membership::Boundary => boundary += 1,
            Membership::OpenInterval => open += 1,
            Membership::Outside => {}
        }
    }
    Ok(sign * (boundary - 1 + 2 * open))
}
