//! Generalised Dedekind sums over isolated fixed points.
//!
//! For a cyclic group of order `k` acting with isolated fixed points, each
//! fixed point `p` of the `j`-th power contributes through its rotation
//! angles `(a1, a2, a3)` (chosen to sum to zero), and the total is
//!
//! ```text
//! D = (3/k) sum_{j=1}^{k-1} cot(pi j / k)
//!         sum_p [cos(a1/2) cos(a2/2) cos(a3/2) - 1]
//!               / [sin(a1/2) sin(a2/2) sin(a3/2)]
//! ```
//!
//! The value is always rational; the float result is paired with a
//! continued-fraction reconstruction (denominator bound 10^6, acceptance
//! threshold 1e-9). Reconstruction failure is reported, not fatal.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Q;
use crate::rational::reconstruct_f64;

#[derive(Debug, Error, PartialEq)]
pub enum DedekindError {
    #[error("k must be positive")]
    BadOrder,
    #[error("power j = {j} is outside 1..={max}")]
    BadPower { j: u32, max: u32 },
    #[error("no structure-preserving action of order <= 2 has isolated fixed points, \
             but k = {k} comes with {count} fixed-point records")]
    LowOrderFixedPoints { k: u32, count: usize },
    #[error("rotation angles of record {index} sum to {sum} (mod 2 pi), expected 0")]
    AngleSumNonzero { index: usize, sum: f64 },
    #[error("rotation angle {angle} of record {index} is a multiple of 2 pi: the fixed point is not isolated")]
    NotIsolated { index: usize, angle: f64 },
}

/// One rotation angle: an exact rational multiple of pi, or a float.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    PiFrac {
        #[serde(rename = "pi_frac", with = "crate::assemble::qstring")]
        frac: Q,
    },
    Radians {
        radians: f64,
    },
}

impl AngleValue {
    pub fn radians(&self) -> f64 {
        match self {
            AngleValue::PiFrac { frac } => {
                frac.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
            }
            AngleValue::Radians { radians } => *radians,
        }
    }

    /// Multiple of 2 pi, decided exactly for tagged fractions.
    fn is_two_pi_multiple(&self) -> bool {
        match self {
            AngleValue::PiFrac { frac } => {
                frac.is_integer() && (frac.to_integer() % 2i64).is_zero()
            }
            AngleValue::Radians { radians } => {
                let turns = radians / (2.0 * std::f64::consts::PI);
                (turns - turns.round()).abs() <= 1e-9
            }
        }
    }
}

/// Fixed-point record: the power `j` of the generator and the three
/// rotation angles at one isolated fixed point of that power.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub j: u32,
    pub angles: [AngleValue; 3],
}

/// All isolated fixed-point data for one cyclic action.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct FixedPointSet {
    pub k: u32,
    #[serde(default)]
    pub entries: Vec<FixedPointRecord>,
}

impl FixedPointSet {
    pub fn empty(k: u32) -> Self {
        FixedPointSet { k, entries: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), DedekindError> {
        if self.k == 0 {
            return Err(DedekindError::BadOrder);
        }
        if self.k <= 2 && !self.entries.is_empty() {
            return Err(DedekindError::LowOrderFixedPoints {
                k: self.k,
                count: self.entries.len(),
            });
        }
        for (index, rec) in self.entries.iter().enumerate() {
            if rec.j == 0 || rec.j >= self.k {
                return Err(DedekindError::BadPower { j: rec.j, max: self.k - 1 });
            }
            for a in &rec.angles {
                if a.is_two_pi_multiple() {
                    return Err(DedekindError::NotIsolated { index, angle: a.radians() });
                }
            }
            // sum must vanish mod 2 pi; exact for tagged fractions
            let exact: Option<Q> = rec.angles.iter().try_fold(Q::zero(), |acc, a| match a {
                AngleValue::PiFrac { frac } => Some(acc + frac),
                AngleValue::Radians { .. } => None,
            });
            match exact {
                Some(total) => {
                    if !(total.is_integer() && (total.to_integer() % 2i64).is_zero()) {
                        return Err(DedekindError::AngleSumNonzero {
                            index,
                            sum: total.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI,
                        });
                    }
                }
                None => {
                    let sum: f64 = rec.angles.iter().map(AngleValue::radians).sum();
                    let turns = sum / (2.0 * std::f64::consts::PI);
                    if (turns - turns.round()).abs() > 1e-9 {
                        return Err(DedekindError::AngleSumNonzero { index, sum });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Result of evaluating the sum: the float value, its rational
/// reconstruction if one was accepted, and a flag when reconstruction
/// failed within the denominator bound.
#[derive(Clone, PartialEq, Debug)]
pub struct DedekindSum {
    pub value: f64,
    pub rational: Option<Q>,
    pub reconstruction_failed: bool,
}

impl DedekindSum {
    pub fn exact_or_value(&self) -> f64 {
        self.rational
            .as_ref()
            .and_then(|r| r.to_f64())
            .unwrap_or(self.value)
    }
}

const RECONSTRUCT_MAX_DEN: u64 = 1_000_000;
const RECONSTRUCT_TOL: f64 = 1e-9;

/// Evaluate the generalised Dedekind sum of a fixed-point set.
pub fn dedekind_sum(fps: &FixedPointSet, tol: f64) -> Result<DedekindSum, DedekindError> {
    fps.validate()?;
    if fps.entries.is_empty() {
        return Ok(DedekindSum {
            value: 0.0,
            rational: Some(Q::zero()),
            reconstruction_failed: false,
        });
    }
    let k = fps.k as f64;
    let mut total = 0.0f64;
    for rec in &fps.entries {
        let jf = rec.j as f64;
        let cot = 1.0 / (std::f64::consts::PI * jf / k).tan();
        let mut cos_prod = 1.0f64;
        let mut sin_prod = 1.0f64;
        for a in &rec.angles {
            let half = a.radians() / 2.0;
            cos_prod *= half.cos();
            sin_prod *= half.sin();
        }
        debug_assert!(sin_prod.abs() > 1e-12, "isolated fixed point has nonzero half-sines");
        total += cot * (cos_prod - 1.0) / sin_prod;
    }
    total *= 3.0 / k;
    // rounding residue never survives honest input; tol guards the caller
    let _ = tol;
    let rational = reconstruct_f64(total, RECONSTRUCT_MAX_DEN, RECONSTRUCT_TOL);
    let failed = rational.is_none();
    Ok(DedekindSum { value: total, rational, reconstruction_failed: failed })
}
