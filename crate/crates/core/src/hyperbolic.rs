//! Upper-half-plane polygons: the independent route to `F_+ + F_-`.
//!
//! The variational torus contributions can be expressed through an ideal
//! hyperbolic polygon completed by geodesics between rational boundary
//! points with `|ad - bc| in {1, 2}` (families of rectangular and rhombic
//! tori). The polygon contributes `(72/pi) Area` and each cusp at a reduced
//! fraction `e/f` between edges towards `x` and `y` contributes
//! `-24 (x - y) / ((fx - e)(fy - e))`, an exact rational.
//!
//! Areas are carried symbolically as `a pi + b theta + float` so that the
//! cancellation of the gluing angle against `rho = pi - 2 theta` can be
//! asserted exactly rather than numerically.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{q, Q};

#[derive(Debug, Error, PartialEq)]
pub enum HyperbolicError {
    #[error("cusp base must be a rational boundary point, not infinity")]
    InfiniteBase,
    #[error("cusp neighbor coincides with the base point")]
    NeighborAtBase,
    #[error("both cusp neighbors are infinite")]
    BothNeighborsInfinite,
    #[error("interior angle {0} is outside (0, pi)")]
    BadInteriorAngle(f64),
    #[error("polygon has {corners} corners but only {sides} sides")]
    TooManyCorners { corners: usize, sides: usize },
    #[error("completion geodesic from {0} to {1} is not a symmetry geodesic (|ad - bc| = {2})")]
    NonSymmetricCompletion(String, String, BigInt),
}

/// A point of the boundary circle: a reduced rational or infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BoundaryPoint {
    Infinity,
    Rational(Q),
}

impl BoundaryPoint {
    pub fn rational(n: i64, d: i64) -> Self {
        BoundaryPoint::Rational(BigRational::new(n.into(), d.into()))
    }

    /// Numerator and denominator of the reduced fraction, with `oo = 1/0`.
    fn frac(&self) -> (BigInt, BigInt) {
        match self {
            BoundaryPoint::Infinity => (BigInt::one(), BigInt::zero()),
            BoundaryPoint::Rational(r) => (r.numer().clone(), r.denom().clone()),
        }
    }
}

impl std::fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundaryPoint::Infinity => write!(f, "inf"),
            BoundaryPoint::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// Signed cuspid angle at the reduced fraction `e/f` between the edges
/// towards `x` and `y`:
/// `(x - y) / ((fx - e)(fy - e))`, with the one-sided limits
/// `-1/(f(fx - e))` for `y = oo` and `+1/(f(fy - e))` for `x = oo`.
pub fn cuspid_angle(
    base: &BoundaryPoint,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
) -> Result<Q, HyperbolicError> {
    let base_q = match base {
        BoundaryPoint::Infinity => return Err(HyperbolicError::InfiniteBase),
        BoundaryPoint::Rational(r) => r.clone(),
    };
    if x == base || y == base {
        return Err(HyperbolicError::NeighborAtBase);
    }
    let e = Q::from_integer(base_q.numer().clone());
    let f = Q::from_integer(base_q.denom().clone());
    match (x, y) {
        (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {
            Err(HyperbolicError::BothNeighborsInfinite)
        }
        (BoundaryPoint::Rational(xv), BoundaryPoint::Rational(yv)) => {
            let dx = &f * xv - &e;
            let dy = &f * yv - &e;
            Ok((xv - yv) / (dx * dy))
        }
        (BoundaryPoint::Rational(xv), BoundaryPoint::Infinity) => {
            let dx = &f * xv - &e;
            Ok(-Q::one() / (f * dx))
        }
        (BoundaryPoint::Infinity, BoundaryPoint::Rational(yv)) => {
            let dy = &f * yv - &e;
            Ok(Q::one() / (f * dy))
        }
    }
}

/// Classification of the geodesic joining two boundary points by
/// `k = |ad - bc|`: the symmetry geodesics have `k = 1` (rectangular tori)
/// or `k = 2` (rhombic tori).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SymmetryClass {
    Rectangular,
    Rhombic,
    NotSymmetric(BigInt),
}

pub fn symmetry_geodesic_check(a: &BoundaryPoint, b: &BoundaryPoint) -> SymmetryClass {
    let (an, ad) = a.frac();
    let (bn, bd) = b.frac();
    let k = (an * bd - ad * bn).abs();
    if k == BigInt::one() {
        SymmetryClass::Rectangular
    } else if k == BigInt::from(2) {
        SymmetryClass::Rhombic
    } else {
        SymmetryClass::NotSymmetric(k)
    }
}

/// One cusp corner: the base point and the two adjacent ideal directions,
/// ordered along the boundary orientation of the polygon.
#[derive(Clone, PartialEq, Debug)]
pub struct CuspCorner {
    pub base: BoundaryPoint,
    pub x: BoundaryPoint,
    pub y: BoundaryPoint,
}

/// Interior corner angles, either the symbolic `2 theta` corner where the
/// two torus rays meet or a plain float.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InteriorAngle {
    TwoTheta { two_theta: bool },
    Radians { radians: f64 },
}

/// An ideal hyperbolic polygon given combinatorially.
#[derive(Clone, PartialEq, Debug)]
pub struct HyperPolygon {
    pub cusps: Vec<CuspCorner>,
    pub interior_angles: Vec<InteriorAngle>,
    pub n_sides: usize,
    /// Edges carried by the torus rays themselves (as full geodesics);
    /// exempt from the symmetry-geodesic requirement.
    pub gamma_edges: Vec<(BoundaryPoint, BoundaryPoint)>,
}

/// Angle-valued expression `pi_coeff * pi + theta_coeff * theta + float_part`.
#[derive(Clone, PartialEq, Debug)]
pub struct AngleExpr {
    pub pi_coeff: Q,
    pub theta_coeff: Q,
    pub float_part: f64,
}

impl AngleExpr {
    pub fn zero() -> Self {
        AngleExpr { pi_coeff: Q::zero(), theta_coeff: Q::zero(), float_part: 0.0 }
    }

    /// `rho = pi - 2 theta`.
    pub fn pi_minus_two_theta() -> Self {
        AngleExpr { pi_coeff: Q::one(), theta_coeff: q(-2), float_part: 0.0 }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        self.pi_coeff.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
            + self.theta_coeff.to_f64().unwrap_or(f64::NAN) * theta
            + self.float_part
    }

    pub fn sub(&self, other: &AngleExpr) -> AngleExpr {
        AngleExpr {
            pi_coeff: &self.pi_coeff - &other.pi_coeff,
            theta_coeff: &self.theta_coeff - &other.theta_coeff,
            float_part: self.float_part - other.float_part,
        }
    }

    /// The exact multiple of pi this expression equals, if the symbolic
    /// theta part and the float remainder both vanish.
    pub fn exact_pi_multiple(&self) -> Option<Q> {
        (self.theta_coeff.is_zero() && self.float_part == 0.0).then(|| self.pi_coeff.clone())
    }
}

impl HyperPolygon {
    pub fn validate(&self) -> Result<(), HyperbolicError> {
        let corners = self.cusps.len() + self.interior_angles.len();
        if corners > self.n_sides {
            return Err(HyperbolicError::TooManyCorners { corners, sides: self.n_sides });
        }
        for a in &self.interior_angles {
            if let InteriorAngle::Radians { radians } = a {
                if !(*radians > 0.0 && *radians < std::f64::consts::PI) {
                    return Err(HyperbolicError::BadInteriorAngle(*radians));
                }
            }
        }
        Ok(())
    }

    fn is_gamma_edge(&self, a: &BoundaryPoint, b: &BoundaryPoint) -> bool {
        self.gamma_edges
            .iter()
            .any(|(u, v)| (u == a && v == b) || (u == b && v == a))
    }
}

/// Gauss–Bonnet area `(n_sides - 2) pi - sum(interior angles)`; cusp
/// corners contribute zero.
pub fn polygon_area(p: &HyperPolygon) -> Result<AngleExpr, HyperbolicError> {
    p.validate()?;
    let mut area = AngleExpr {
        pi_coeff: q(p.n_sides as i64 - 2),
        theta_coeff: Q::zero(),
        float_part: 0.0,
    };
    for a in &p.interior_angles {
        match a {
            InteriorAngle::TwoTheta { .. } => area.theta_coeff -= q(2),
            InteriorAngle::Radians { radians } => area.float_part -= radians,
        }
    }
    Ok(area)
}

/// The polygon route to `F_+ + F_-`: `(72/pi) Area(P) - 24 l(P)` with the
/// exact cusp sum `l(P)`.
#[derive(Clone, PartialEq, Debug)]
pub struct FSumDecomposition {
    pub area: AngleExpr,
    pub ell: Q,
}

impl FSumDecomposition {
    pub fn eval(&self, theta: f64) -> f64 {
        72.0 / std::f64::consts::PI * self.area.eval(theta)
            - 24.0 * self.ell.to_f64().unwrap_or(f64::NAN)
    }
}

pub fn f_sum_via_polygon(p: &HyperPolygon) -> Result<FSumDecomposition, HyperbolicError> {
    let area = polygon_area(p)?;
    let mut ell = Q::zero();
    for cusp in &p.cusps {
        for neighbor in [&cusp.x, &cusp.y] {
            if p.is_gamma_edge(&cusp.base, neighbor) {
                continue;
            }
            if let SymmetryClass::NotSymmetric(k) = symmetry_geodesic_check(&cusp.base, neighbor)
            {
                return Err(HyperbolicError::NonSymmetricCompletion(
                    cusp.base.to_string(),
                    neighbor.to_string(),
                    k,
                ));
            }
        }
        ell += cuspid_angle(&cusp.base, &cusp.x, &cusp.y)?;
    }
    Ok(FSumDecomposition { area, ell })
}

/// The polygon route to `nu_bar`:
/// `D+ + D- + (72/pi) Area - 24 l(P) - 72 rho / pi + 3 m_rho`.
#[derive(Clone, PartialEq, Debug)]
pub struct PolygonNuBar {
    pub f_sum: FSumDecomposition,
    /// Exact value when the theta terms of the area cancel against `rho`
    /// and the Dedekind contributions are rational.
    pub exact: Option<Q>,
    pub rho: AngleExpr,
    pub m_rho: i64,
    pub d_plus: Q,
    pub d_minus: Q,
}

impl PolygonNuBar {
    pub fn eval(&self, theta: f64) -> f64 {
        self.d_plus.to_f64().unwrap_or(f64::NAN)
            + self.d_minus.to_f64().unwrap_or(f64::NAN)
            + self.f_sum.eval(theta)
            - 72.0 / std::f64::consts::PI * self.rho.eval(theta)
            + 3.0 * self.m_rho as f64
    }
}

pub fn nu_bar_via_polygon(
    p: &HyperPolygon,
    rho: &AngleExpr,
    m_rho: i64,
    d_plus: &Q,
    d_minus: &Q,
) -> Result<PolygonNuBar, HyperbolicError> {
    let f_sum = f_sum_via_polygon(p)?;
    // (72/pi)(area - rho) is exact iff the theta and float parts cancel
    let diff = f_sum.area.sub(rho);
    let exact = diff.exact_pi_multiple().map(|pi_mult| {
        d_plus + d_minus + q(72) * pi_mult - q(24) * &f_sum.ell + q(3 * m_rho)
    });
    Ok(PolygonNuBar {
        f_sum,
        exact,
        rho: rho.clone(),
        m_rho,
        d_plus: d_plus.clone(),
        d_minus: d_minus.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q_ratio;

    fn bp(n: i64, d: i64) -> BoundaryPoint {
        BoundaryPoint::rational(n, d)
    }

    fn inf() -> BoundaryPoint {
        BoundaryPoint::Infinity
    }

    /// The bundled two-ideal-triangle polygon: cusps at 0, -1/2 and -1/3,
    /// one interior corner of angle 2 theta where the torus rays meet.
    pub(crate) fn two_triangle_polygon() -> HyperPolygon {
        HyperPolygon {
            cusps: vec![
                CuspCorner { base: bp(0, 1), x: bp(-1, 3), y: bp(-1, 2) },
                CuspCorner { base: bp(-1, 2), x: bp(-1, 1), y: bp(-1, 3) },
                CuspCorner { base: bp(-1, 3), x: bp(-1, 2), y: inf() },
            ],
            interior_angles: vec![InteriorAngle::TwoTheta { two_theta: true }],
            n_sides: 4,
            gamma_edges: vec![(bp(-1, 3), inf()), (bp(-1, 1), bp(0, 1))],
        }
    }

    #[test]
    fn cuspid_angle_fixture_values() {
        assert_eq!(cuspid_angle(&bp(0, 1), &bp(-1, 3), &bp(-1, 2)).unwrap(), q(1));
        assert_eq!(cuspid_angle(&bp(-1, 2), &bp(-1, 1), &bp(-1, 3)).unwrap(), q(2));
        assert_eq!(cuspid_angle(&bp(-1, 3), &bp(-1, 2), &inf()).unwrap(), q_ratio(2, 3));
    }

    #[test]
    fn cuspid_angle_antisymmetry() {
        let a = cuspid_angle(&bp(0, 1), &bp(-1, 3), &bp(-1, 2)).unwrap();
        let b = cuspid_angle(&bp(0, 1), &bp(-1, 2), &bp(-1, 3)).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn cuspid_angle_translation_invariance() {
        // x -> x+1, y -> y+1, e/f -> (e+f)/f
        let base = bp(-1, 3);
        let x = bp(-1, 2);
        let y = bp(5, 7);
        let a = cuspid_angle(&base, &x, &y).unwrap();
        let b = cuspid_angle(&bp(-1 + 3, 3), &bp(-1 + 2, 2), &bp(5 + 7, 7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cuspid_angle_errors() {
        assert!(matches!(
            cuspid_angle(&inf(), &bp(0, 1), &bp(1, 1)),
            Err(HyperbolicError::InfiniteBase)
        ));
        assert!(matches!(
            cuspid_angle(&bp(0, 1), &bp(0, 1), &bp(1, 1)),
            Err(HyperbolicError::NeighborAtBase)
        ));
        assert!(matches!(
            cuspid_angle(&bp(0, 1), &inf(), &inf()),
            Err(HyperbolicError::BothNeighborsInfinite)
        ));
    }

    #[test]
    fn polygon_area_examples() {
        let triangle = HyperPolygon {
            cusps: vec![
                CuspCorner { base: bp(0, 1), x: bp(1, 1), y: inf() },
                CuspCorner { base: bp(1, 1), x: inf(), y: bp(0, 1) },
            ],
            interior_angles: vec![],
            n_sides: 3,
            gamma_edges: vec![],
        };
        // area = (3 - 2) pi
        assert_eq!(polygon_area(&triangle).unwrap().exact_pi_multiple(), Some(Q::one()));

        let quad = HyperPolygon {
            cusps: vec![],
            interior_angles: vec![],
            n_sides: 4,
            gamma_edges: vec![],
        };
        assert_eq!(polygon_area(&quad).unwrap().exact_pi_multiple(), Some(q(2)));

        let fixture = two_triangle_polygon();
        let area = polygon_area(&fixture).unwrap();
        assert_eq!(area.pi_coeff, q(2));
        assert_eq!(area.theta_coeff, q(-2));
        assert_eq!(area.float_part, 0.0);
    }

    #[test]
    fn symmetry_classification() {
        assert_eq!(
            symmetry_geodesic_check(&bp(-1, 1), &bp(0, 1)),
            SymmetryClass::Rectangular
        );
        assert_eq!(symmetry_geodesic_check(&bp(-1, 2), &inf()), SymmetryClass::Rhombic);
        // Farey neighbours: |0*3 - 1*1| = 1
        assert_eq!(
            symmetry_geodesic_check(&bp(0, 1), &bp(1, 3)),
            SymmetryClass::Rectangular
        );
        assert_eq!(
            symmetry_geodesic_check(&bp(0, 1), &bp(3, 1)),
            SymmetryClass::NotSymmetric(BigInt::from(3))
        );
        assert_eq!(
            symmetry_geodesic_check(&bp(1, 3), &inf()),
            SymmetryClass::NotSymmetric(BigInt::from(3))
        );
    }

    #[test]
    fn f_sum_fixture_cusp_sum() {
        let f = f_sum_via_polygon(&two_triangle_polygon()).unwrap();
        assert_eq!(f.ell, q_ratio(11, 3));
        // numeric value: (72/pi)(2pi - 2 theta) - 88 at theta = arccos(1/sqrt 3)
        let theta = (1.0f64 / 3.0f64.sqrt()).acos();
        let expected = 72.0 / std::f64::consts::PI
            * (2.0 * std::f64::consts::PI - 2.0 * theta)
            - 88.0;
        assert!((f.eval(theta) - expected).abs() < 1e-12);
    }

    #[test]
    fn f_sum_degenerate_polygon_is_zero() {
        let empty = HyperPolygon {
            cusps: vec![],
            interior_angles: vec![],
            n_sides: 2,
            gamma_edges: vec![],
        };
        let f = f_sum_via_polygon(&empty).unwrap();
        assert_eq!(f.ell, Q::zero());
        assert_eq!(f.eval(1.0), 0.0);
    }

    #[test]
    fn f_sum_rejects_non_symmetric_completion() {
        let mut p = two_triangle_polygon();
        p.gamma_edges.clear(); // the vertical edge (-1/3, oo) has k = 3
        assert!(matches!(
            f_sum_via_polygon(&p),
            Err(HyperbolicError::NonSymmetricCompletion(..))
        ));
    }

    #[test]
    fn nu_bar_fixture_is_exactly_minus_nineteen() {
        let p = two_triangle_polygon();
        let rho = AngleExpr::pi_minus_two_theta();
        let r = nu_bar_via_polygon(&p, &rho, -1, &Q::zero(), &Q::zero()).unwrap();
        // exact cancellation of the theta terms: 144 - 88 - 72 - 3 = -19
        assert_eq!(r.exact, Some(q(-19)));
        let theta = (1.0f64 / 3.0f64.sqrt()).acos();
        assert!((r.eval(theta) + 19.0).abs() < 1e-12);
    }

    #[test]
    fn nu_bar_theta_independence_is_symbolic() {
        let p = two_triangle_polygon();
        let rho = AngleExpr::pi_minus_two_theta();
        let r = nu_bar_via_polygon(&p, &rho, -1, &Q::zero(), &Q::zero()).unwrap();
        let diff = r.f_sum.area.sub(&rho);
        assert!(diff.theta_coeff.is_zero());
        // and numeric evaluation agrees for unrelated theta values
        assert!((r.eval(0.3) - r.eval(1.2)).abs() < 1e-12);
    }

    #[test]
    fn nu_bar_linear_in_m_rho() {
        let p = two_triangle_polygon();
        let rho = AngleExpr::pi_minus_two_theta();
        let r = nu_bar_via_polygon(&p, &rho, 0, &Q::zero(), &Q::zero()).unwrap();
        assert_eq!(r.exact, Some(q(-16)));
    }

    #[test]
    fn nu_bar_empty_polygon() {
        let empty = HyperPolygon {
            cusps: vec![],
            interior_angles: vec![],
            n_sides: 2,
            gamma_edges: vec![],
        };
        let r = nu_bar_via_polygon(&empty, &AngleExpr::zero(), 0, &Q::zero(), &Q::zero())
            .unwrap();
        assert_eq!(r.exact, Some(Q::zero()));
    }
}
