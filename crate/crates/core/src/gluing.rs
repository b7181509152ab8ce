//! Torus gluing data: the matrix constraints, derived circle ratios and the
//! finite enumeration of admissible gluings.
//!
//! A gluing is the tuple `(k+, eps+, k-, eps-, G)` with `G = (m p; n q)`
//! relating the internal and external circle directions of the two torus
//! factors. The admissible tuples satisfy
//!
//! * `det G = -k+ k-`,
//! * `m n p q <= 0`,
//! * `eps+ m - n = eps+ p - q = 0 (mod k+)`,
//! * `eps- p + m = eps- q + n = 0 (mod k-)`,
//!
//! and split into three geometric cases: aligned external circles
//! (`n = p = 0`, excluded: infinite fundamental group), right angle
//! (`m = q = 0`, free circle ratios) and the generic case, where the ratios
//! `s±` and the angle `theta` are forced:
//! `s-^2 = -mn/pq`, `s+^2 = -nq/mp`, `theta = arg(m s+ + i n)`.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{q, Q};

#[derive(Debug, Error, PartialEq)]
pub enum GluingError {
    #[error("invalid gluing data: {0:?}")]
    Invalid(ValidationReport),
    #[error("theta = 0 case (n = p = 0): external circles aligned, the glued manifold has infinite fundamental group")]
    ThetaZeroExcluded,
    #[error("zero pattern {0} admits no torus isometry: perpendicularity forces m = 0 <=> q = 0 and n = 0 <=> p = 0")]
    DegenerateZeroPattern(String),
    #[error("the right-angle case leaves the circle ratios free; supply them explicitly")]
    FreeRatios,
    #[error("bound {bound} is smaller than k+ k- = {need}")]
    BoundTooSmall { bound: i64, need: i64 },
}

/// `(k±, eps±)` and the gluing matrix `G = (m p; n q)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GluingData {
    pub k_plus: u32,
    pub eps_plus: i32,
    pub k_minus: u32,
    pub eps_minus: i32,
    pub m: i64,
    pub p: i64,
    pub n: i64,
    pub q: i64,
}

/// Per-constraint verdicts for a gluing tuple.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    /// `det G = -k+ k-`
    pub determinant: bool,
    /// `m n p q <= 0`
    pub sign_product: bool,
    /// congruences modulo `k+`
    pub congruence_plus: bool,
    /// congruences modulo `k-`
    pub congruence_minus: bool,
    /// `gcd(eps±, k±) = 1`, representative in `(-k/2, k/2]`, `eps = 0` iff `k = 1`
    pub units: bool,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.determinant
            && self.sign_product
            && self.congruence_plus
            && self.congruence_minus
            && self.units
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusCase {
    ThetaZeroExcluded,
    RightAngle,
    Generic,
}

/// Geometry derived from a valid gluing: case, ratios and angle.
#[derive(Clone, PartialEq, Debug)]
pub struct DerivedGeometry {
    pub case: TorusCase,
    /// `s+^2`; `None` marks a free ratio (right-angle case).
    pub s_plus_sq: Option<Q>,
    /// `s-^2`; `None` marks a free ratio.
    pub s_minus_sq: Option<Q>,
    /// Exact `cos^2 theta`.
    pub cos2_theta: Q,
    /// Sign of `cos theta`: +1, 0 or -1 (so `theta` and `pi - theta` stay apart).
    pub cos_sign: i8,
    /// Numeric angle in `(0, pi)`.
    pub theta: f64,
}

impl DerivedGeometry {
    /// `rho = pi - 2 theta`.
    pub fn rho(&self) -> f64 {
        std::f64::consts::PI - 2.0 * self.theta
    }

    /// Exact `cos(pi - |rho|) = cos(2 theta) = 2 cos^2 theta - 1`.
    pub fn rho_boundary_cos(&self) -> Q {
        q(2) * &self.cos2_theta - q(1)
    }
}

fn unit_ok(k: u32, eps: i32) -> bool {
    if k == 1 {
        return eps == 0;
    }
    let k = k as i64;
    let e = eps as i64;
    // representative in (-k/2, k/2]
    2 * e > -k && 2 * e <= k && e.gcd(&k) == 1
}

/// Canonical representative of `e` mod `k` in `(-k/2, k/2]`.
pub fn eps_representative(e: i64, k: u32) -> i32 {
    if k == 1 {
        return 0;
    }
    let k = k as i64;
    let mut r = e.rem_euclid(k);
    if 2 * r > k {
        r -= k;
    }
    r as i32
}

impl GluingData {
    /// Check constraints (determinant, sign, congruences, unit conventions).
    pub fn validate(&self) -> ValidationReport {
        let (m, p, n, q) = (self.m, self.p, self.n, self.q);
        let kp = self.k_plus as i64;
        let km = self.k_minus as i64;
        let ep = self.eps_plus as i64;
        let em = self.eps_minus as i64;
        ValidationReport {
            determinant: m * q - p * n == -kp * km,
            sign_product: m * n * p * q <= 0,
            congruence_plus: (ep * m - n).rem_euclid(kp) == 0 && (ep * p - q).rem_euclid(kp) == 0,
            congruence_minus: (em * p + m).rem_euclid(km) == 0 && (em * q + n).rem_euclid(km) == 0,
            units: unit_ok(self.k_plus, self.eps_plus) && unit_ok(self.k_minus, self.eps_minus),
        }
    }

    /// Case classification and exact derived geometry.
    pub fn derive(&self) -> Result<DerivedGeometry, GluingError> {
        let report = self.validate();
        if !report.passes() {
            return Err(GluingError::Invalid(report));
        }
        let (m, p, n, q_) = (self.m, self.p, self.n, self.q);
        if n == 0 && p == 0 {
            return Ok(DerivedGeometry {
                case: TorusCase::ThetaZeroExcluded,
                s_plus_sq: None,
                s_minus_sq: None,
                cos2_theta: q(1),
                cos_sign: if m > 0 { 1 } else { -1 },
                theta: 0.0,
            });
        }
        if m == 0 && q_ == 0 {
            return Ok(DerivedGeometry {
                case: TorusCase::RightAngle,
                s_plus_sq: None,
                s_minus_sq: None,
                cos2_theta: q(0),
                cos_sign: 0,
                theta: std::f64::consts::FRAC_PI_2,
            });
        }
        if m == 0 || n == 0 || p == 0 || q_ == 0 {
            return Err(GluingError::DegenerateZeroPattern(format!(
                "(m, p, n, q) = ({m}, {p}, {n}, {q_})"
            )));
        }
        // all nonzero: the validated sign constraint gives mnpq < 0
        let s_minus_sq = -q(m * n) / q(p * q_);
        let s_plus_sq = -q(n * q_) / q(m * p);
        debug_assert!(s_minus_sq.is_positive() && s_plus_sq.is_positive());
        let m2s = q(m * m) * &s_plus_sq;
        let cos2 = &m2s / (&m2s + q(n * n));
        let cos_sign = if m > 0 { 1 } else { -1 };
        let s_plus = s_plus_sq.to_f64().unwrap().sqrt();
        let theta = (n.abs() as f64).atan2(m as f64 * s_plus);
        Ok(DerivedGeometry {
            case: TorusCase::Generic,
            s_plus_sq: Some(s_plus_sq),
            s_minus_sq: Some(s_minus_sq),
            cos2_theta: cos2,
            cos_sign,
            theta,
        })
    }

    /// Orbit of the tuple under the deduplication symmetries:
    /// global sign flip `G ~ -G` and the internal-circle orientation flip
    /// `(m, n, p, q) ~ (m, -n, -p, q)` which also negates both `eps`.
    fn orbit(&self) -> [GluingData; 4] {
        let flip = |g: &GluingData| GluingData {
            k_plus: g.k_plus,
            eps_plus: eps_representative(-(g.eps_plus as i64), g.k_plus),
            k_minus: g.k_minus,
            eps_minus: eps_representative(-(g.eps_minus as i64), g.k_minus),
            m: g.m,
            p: -g.p,
            n: -g.n,
            q: g.q,
        };
        let neg = |g: &GluingData| GluingData { m: -g.m, p: -g.p, n: -g.n, q: -g.q, ..*g };
        [*self, neg(self), flip(self), neg(&flip(self))]
    }

    fn key(&self) -> (i32, i32, i64, i64, i64, i64) {
        (self.eps_plus, self.eps_minus, self.m, self.p, self.n, self.q)
    }

    /// Canonical representative of the equivalence class: fewest negative
    /// matrix entries, then non-negative `m`, then lexicographically
    /// smallest tuple. This reproduces the representatives the figures use.
    pub fn canonical(&self) -> GluingData {
        *self
            .orbit()
            .iter()
            .min_by_key(|g| {
                let entries = [g.m, g.p, g.n, g.q];
                let negatives = entries.iter().filter(|&&x| x < 0).count();
                (negatives, g.m < 0, g.key())
            })
            .unwrap()
    }

    pub fn equivalent(&self, other: &GluingData) -> bool {
        self.k_plus == other.k_plus
            && self.k_minus == other.k_minus
            && self.canonical() == other.canonical()
    }
}

/// All admissible gluings for `(k+, k-)` with `|m|, |n|, |p|, |q| <= bound`,
/// excluding the aligned (`theta = 0`) case, deduplicated up to the
/// documented symmetries unless `dedup` is false. Deterministic order.
pub fn enumerate_gluings(
    k_plus: u32,
    k_minus: u32,
    bound: i64,
    dedup: bool,
) -> Result<Vec<GluingData>, GluingError> {
    let need = k_plus as i64 * k_minus as i64;
    if bound < need {
        return Err(GluingError::BoundTooSmall { bound, need });
    }
    let units = |k: u32| -> Vec<i32> {
        if k == 1 {
            vec![0]
        } else {
            (1..=k as i64)
                .filter(|e| e.gcd(&(k as i64)) == 1)
                .map(|e| eps_representative(e, k))
                .collect()
        }
    };
    let mut out: Vec<GluingData> = Vec::new();
    let mut seen: std::collections::BTreeSet<(i32, i32, i64, i64, i64, i64)> =
        std::collections::BTreeSet::new();
    for &ep in &units(k_plus) {
        for &em in &units(k_minus) {
            for m in -bound..=bound {
                for p in -bound..=bound {
                    for n in -bound..=bound {
                        for q_ in -bound..=bound {
                            if m * q_ - p * n != -need {
                                continue;
                            }
                            let g = GluingData {
                                k_plus,
                                eps_plus: ep,
                                k_minus,
                                eps_minus: em,
                                m,
                                p,
                                n,
                                q: q_,
                            };
                            if !g.validate().passes() {
                                continue;
                            }
                            match g.derive() {
                                Ok(geom) if geom.case != TorusCase::ThetaZeroExcluded => {}
                                _ => continue,
                            }
                            let canon = if dedup { g.canonical() } else { g };
                            if seen.insert(canon.key()) {
                                out.push(canon);
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(GluingData::key);
    Ok(out)
}
