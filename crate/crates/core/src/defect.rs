//! Coboundary-defect arithmetic for spin 7-manifolds and their
//! G2-structures, plus the classification counts for 2-connected
//! 7-manifolds with torsion-free cohomology.
//!
//! Everything here is plain integer arithmetic; the substance is in which
//! combinations are well-defined and modulo what. The three closed
//! 8-manifold relations
//!
//! ```text
//! 7 p2 = 4 p^2 + 45 sigma
//! 45*2^5 ind_D + p2 = 7 p^2
//! p2 = p^2 + 2 chi - 4 n_+
//! ```
//!
//! give rise to the defect invariants: Milnor's lambda (mod 7), the
//! Eells–Kuiper mu, the nu-invariant (mod 48) and xi (mod 3 d~), with
//! `d~ = lcm(4, d)` for the divisibility `d` of the spin class.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DefectError {
    #[error("the spin class divisibility d must be even, got {0}")]
    OddDivisor(u64),
    #[error("d = 0 (torsion spin class) is handled by the classic mod-28 branch, not d~")]
    TorsionDivisor,
    #[error("congruence p^2 = sigma (mod 8) violated: p^2 = {p_sq}, sigma = {sigma}")]
    VanDerBlij { p_sq: i64, sigma: i64 },
    #[error("parity assertion failed: 3 p^2 - 45 sigma is odd")]
    XiParity,
    #[error("relation xi = 7 nu (mod 12) fails for xi = {xi}, nu = {nu}")]
    Relation13 { xi: i64, nu: i64 },
}

/// A canonical residue: `value` in `[0, modulus)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: i128, modulus: u64) -> Residue {
        assert!(modulus >= 1);
        Residue { value: value.rem_euclid(modulus as i128) as u64, modulus }
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// xi is an honest integer when the spin class vanishes rationally, and a
/// residue mod `3 d~` otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XiValue {
    Integer(i64),
    Residue(Residue),
}

/// Data of a spin coboundary `W` of a 7-manifold with G2-structure:
/// Euler characteristic, signature, spinor zero count, the squared spin
/// class representative and the divisibility of the boundary spin class.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CoboundaryData {
    pub chi: i64,
    pub sigma: i64,
    pub n_plus: i64,
    /// Integer representative of `(p_W - u)^2`, well-defined mod `2 d~`.
    pub p_sq: i64,
    /// `p_1(W)^2` when `p_1(M) = 0`; only used by Milnor's lambda.
    #[serde(default)]
    pub p1_sq: Option<i64>,
    /// Greatest divisor of the spin class of the boundary; 0 for torsion.
    pub d: u64,
}

impl CoboundaryData {
    pub fn validate(&self) -> Result<(), DefectError> {
        if self.d % 2 != 0 {
            return Err(DefectError::OddDivisor(self.d));
        }
        if (self.p_sq - self.sigma).rem_euclid(8) != 0 {
            return Err(DefectError::VanDerBlij { p_sq: self.p_sq, sigma: self.sigma });
        }
        Ok(())
    }
}

/// `d~ = lcm(4, d)` for even positive `d`.
pub fn d_tilde(d: u64) -> Result<u64, DefectError> {
    if d == 0 {
        return Err(DefectError::TorsionDivisor);
    }
    if d % 2 != 0 {
        return Err(DefectError::OddDivisor(d));
    }
    Ok(4u64.lcm(&d))
}

/// Number of smooth structures: `gcd(28, d~ / 4)`.
pub fn smooth_structure_count(d: u64) -> Result<u64, DefectError> {
    Ok(28u64.gcd(&(d_tilde(d)? / 4)))
}

/// `(Num(d/112), 24 Num(d/112))`: the number of xi values per nu, and the
/// total number of G2-structure classes on a fixed smooth manifold.
pub fn g2_class_count(d: u64) -> Result<(u64, u64), DefectError> {
    if d == 0 {
        return Err(DefectError::TorsionDivisor);
    }
    if d % 2 != 0 {
        return Err(DefectError::OddDivisor(d));
    }
    let per_nu = d / d.gcd(&112);
    Ok((per_nu, 24 * per_nu))
}

/// Milnor's lambda: `45 sigma + p1^2 (mod 7)`.
pub fn milnor_lambda(sigma: i64, p1_sq: i64) -> Residue {
    Residue::new(45 * sigma as i128 + p1_sq as i128, 7)
}

/// Generalised Eells–Kuiper invariant
/// `mu = ((p - u)^2 - sigma) / 8` mod `gcd(28, d~/4)`, or mod 28 in the
/// torsion branch `d = 0`.
pub fn eells_kuiper_mu(data: &CoboundaryData) -> Result<Residue, DefectError> {
    data.validate()?;
    let modulus = if data.d == 0 { 28 } else { smooth_structure_count(data.d)? };
    let num = (data.p_sq as i128 - data.sigma as i128) / 8;
    Ok(Residue::new(num, modulus))
}

/// `nu = chi - 2 n_+ - 3 sigma (mod 48)`.
pub fn nu_invariant(chi: i64, n_plus: i64, sigma: i64) -> Residue {
    Residue::new(chi as i128 - 2 * n_plus as i128 - 3 * sigma as i128, 48)
}

/// `xi = 7 chi - 14 n_+ + (3 p^2 - 45 sigma)/2`, reduced mod `3 d~` when a
/// divisibility is given, exact otherwise.
pub fn xi_invariant(data: &CoboundaryData) -> Result<XiValue, DefectError> {
    data.validate()?;
    let numerator = 3 * data.p_sq as i128 - 45 * data.sigma as i128;
    if numerator.rem_euclid(2) != 0 {
        return Err(DefectError::XiParity);
    }
    let xi = 7 * data.chi as i128 - 14 * data.n_plus as i128 + numerator / 2;
    if data.d == 0 {
        Ok(XiValue::Integer(xi as i64))
    } else {
        Ok(XiValue::Residue(Residue::new(xi, 3 * d_tilde(data.d)?)))
    }
}

/// `xi = 7 nu (mod 12)`.
pub fn relation_13_check(xi: i64, nu: i64) -> bool {
    (xi - 7 * nu).rem_euclid(12) == 0
}

/// Recover `mu = (xi - 7 nu) / 12` mod `gcd(28, d~/4)`.
pub fn mu_recovery(xi: i64, nu: i64, d: u64) -> Result<Residue, DefectError> {
    if !relation_13_check(xi, nu) {
        return Err(DefectError::Relation13 { xi, nu });
    }
    let modulus = smooth_structure_count(d)?;
    Ok(Residue::new((xi as i128 - 7 * nu as i128) / 12, modulus))
}

/// Parity relation `nu = b0 + b1 + b2 + b3 (mod 2)`.
pub fn parity_check(nu: i64, b0: u64, b1: u64, b2: u64, b3: u64) -> bool {
    (nu - (b0 + b1 + b2 + b3) as i64).rem_euclid(2) == 0
}

/// `nu = nu_bar - 24 (1 + b1) (mod 48)`.
pub fn nu_from_nu_bar(nu_bar: i64, b1: u64) -> Residue {
    Residue::new(nu_bar as i128 - 24 * (1 + b1 as i128), 48)
}

/// A topological G2-structure bounds a G2-manifold iff `3 | nu`.
pub fn g2_bordism_check(nu: &Residue) -> bool {
    nu.value % 3 == 0
}

/// Verdicts for the three closed-8-manifold relations.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClosedRelations {
    /// `7 p2 = 4 p^2 + 45 sigma`
    pub signature_relation: bool,
    /// `45*2^5 ind_D + p2 = 7 p^2`
    pub dirac_relation: bool,
    /// `p2 = p^2 + 2 chi - 4 n_+`
    pub spinor_euler_relation: bool,
}

impl ClosedRelations {
    pub fn all_pass(&self) -> bool {
        self.signature_relation && self.dirac_relation && self.spinor_euler_relation
    }
}

pub fn closed_relations_check(
    sigma: i64,
    p_sq: i64,
    p2: i64,
    ind_d: i64,
    chi: i64,
    n_plus: i64,
) -> ClosedRelations {
    let (sigma, p_sq, p2, ind_d, chi, n_plus) = (
        sigma as i128,
        p_sq as i128,
        p2 as i128,
        ind_d as i128,
        chi as i128,
        n_plus as i128,
    );
    ClosedRelations {
        signature_relation: 7 * p2 == 4 * p_sq + 45 * sigma,
        dirac_relation: 45 * 32 * ind_d + p2 == 7 * p_sq,
        spinor_euler_relation: p2 == p_sq + 2 * chi - 4 * n_plus,
    }
}

/// Whether the first two closed relations admit an integer solution
/// `(ind_D, p2)` for the given `(p^2, sigma)`; equivalent to `mu = 0`.
pub fn ek_solvability(p_sq: i64, sigma: i64) -> Result<bool, DefectError> {
    if (p_sq - sigma).rem_euclid(8) != 0 {
        return Err(DefectError::VanDerBlij { p_sq, sigma });
    }
    Ok(((p_sq as i128 - sigma as i128) / 8).rem_euclid(28) == 0)
}

/// Admissible spin-class divisibilities for twisted connected sums.
pub fn tcs_d_validation(d: u64) -> bool {
    matches!(d, 2 | 4 | 6 | 8 | 12 | 24)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d_tilde_values() {
        assert_eq!(d_tilde(2), Ok(4));
        assert_eq!(d_tilde(8), Ok(8));
        assert_eq!(d_tilde(6), Ok(12));
        assert_eq!(d_tilde(3), Err(DefectError::OddDivisor(3)));
        assert_eq!(d_tilde(0), Err(DefectError::TorsionDivisor));
    }

    #[test]
    fn smooth_structure_table() {
        let expected = [(2u64, 1u64), (4, 1), (6, 1), (8, 2), (12, 1), (24, 2)];
        for (d, count) in expected {
            assert_eq!(smooth_structure_count(d), Ok(count), "d = {d}");
        }
    }

    #[test]
    fn g2_class_counts() {
        assert_eq!(g2_class_count(2), Ok((1, 24)));
        assert_eq!(g2_class_count(24), Ok((3, 72)));
        assert_eq!(g2_class_count(112), Ok((1, 24)));
    }

    #[test]
    fn milnor_lambda_values() {
        assert_eq!(milnor_lambda(0, 0).value, 0);
        assert_eq!(milnor_lambda(1, 4).value, 0);
        assert_eq!(milnor_lambda(1, 0).value, 3);
    }

    #[test]
    fn eells_kuiper_values() {
        let zero = CoboundaryData { chi: 0, sigma: 0, n_plus: 0, p_sq: 0, p1_sq: None, d: 8 };
        assert_eq!(eells_kuiper_mu(&zero).unwrap(), Residue { value: 0, modulus: 2 });

        let one = CoboundaryData { p_sq: 8, ..zero };
        assert_eq!(eells_kuiper_mu(&one).unwrap(), Residue { value: 1, modulus: 2 });

        let torsion = CoboundaryData { p_sq: 8 * 28, d: 0, ..zero };
        assert_eq!(eells_kuiper_mu(&torsion).unwrap(), Residue { value: 0, modulus: 28 });

        let bad = CoboundaryData { p_sq: 3, ..zero };
        assert!(matches!(eells_kuiper_mu(&bad), Err(DefectError::VanDerBlij { .. })));
    }

    #[test]
    fn mu_period_in_p_sq() {
        // adding 2 d~ to p_sq never changes mu
        for d in [2u64, 6, 8, 24] {
            let twod = 2 * d_tilde(d).unwrap() as i64;
            for base in [0i64, 8, 16, 48] {
                let a = CoboundaryData { chi: 0, sigma: 0, n_plus: 0, p_sq: base, p1_sq: None, d };
                for t in 1..4 {
                    let b = CoboundaryData { p_sq: base + twod * t, ..a };
                    assert_eq!(eells_kuiper_mu(&a).unwrap(), eells_kuiper_mu(&b).unwrap());
                }
            }
        }
    }

    #[test]
    fn nu_invariant_values() {
        assert_eq!(nu_invariant(0, 0, 0).value, 0);
        assert_eq!(nu_invariant(27, 0, 1).value, 24);
        assert_eq!(nu_invariant(1, 0, 1).value, 46);
    }

    #[test]
    fn xi_invariant_values() {
        let zero = CoboundaryData { chi: 0, sigma: 0, n_plus: 0, p_sq: 0, p1_sq: None, d: 2 };
        assert_eq!(
            xi_invariant(&zero).unwrap(),
            XiValue::Residue(Residue { value: 0, modulus: 12 })
        );
        let data = CoboundaryData { chi: 12, sigma: 4, n_plus: 0, p_sq: 4, p1_sq: None, d: 2 };
        assert_eq!(
            xi_invariant(&data).unwrap(),
            XiValue::Residue(Residue { value: 0, modulus: 12 })
        );
        // 12 | nu together with d~ = 4 forces xi = 0 in Z/12
        let nu = nu_invariant(data.chi, data.n_plus, data.sigma);
        assert_eq!(nu.value % 12, 0);
    }

    #[test]
    fn relation_13_examples() {
        assert!(relation_13_check(0, 0));
        assert!(relation_13_check(0, 24));
        assert!(!relation_13_check(1, 0));
    }

    #[test]
    fn mu_recovery_examples() {
        assert_eq!(mu_recovery(0, 24, 2).unwrap(), Residue { value: 0, modulus: 1 });
        assert_eq!(mu_recovery(12, 0, 8).unwrap(), Residue { value: 1, modulus: 2 });
        assert_eq!(mu_recovery(0, 0, 24).unwrap(), Residue { value: 0, modulus: 2 });
        assert!(mu_recovery(1, 0, 8).is_err());
    }

    #[test]
    fn parity_examples() {
        assert!(parity_check(24, 1, 0, 0, 97));
        assert!(parity_check(1, 1, 0, 0, 0));
        assert!(!parity_check(1, 1, 0, 0, 1));
    }

    #[test]
    fn nu_from_nu_bar_examples() {
        assert_eq!(nu_from_nu_bar(0, 0).value, 24);
        assert_eq!(nu_from_nu_bar(-48, 0).value, 24);
        assert_eq!(nu_from_nu_bar(-19, 0).value, 5);
    }

    #[test]
    fn bordism_examples() {
        assert!(g2_bordism_check(&Residue::new(24, 48)));
        assert!(g2_bordism_check(&Residue::new(0, 48)));
        assert!(!g2_bordism_check(&nu_from_nu_bar(-19, 0)));
    }

    #[test]
    fn closed_relations_examples() {
        assert!(closed_relations_check(0, 0, 0, 0, 0, 0).all_pass());
        assert!(closed_relations_check(4, 4, 28, 0, 12, 0).all_pass());
        let r = closed_relations_check(4, 4, 28, 1, 12, 0);
        assert!(r.signature_relation && !r.dirac_relation && r.spinor_euler_relation);
    }

    #[test]
    fn solvability_examples() {
        assert_eq!(ek_solvability(0, 0), Ok(true));
        assert_eq!(ek_solvability(8, 0), Ok(false));
        assert_eq!(ek_solvability(8 * 28, 0), Ok(true));
        assert!(ek_solvability(3, 0).is_err());
    }

    #[test]
    fn tcs_d_examples() {
        assert!(tcs_d_validation(8));
        assert!(tcs_d_validation(24));
        assert!(!tcs_d_validation(10));
        assert!(!tcs_d_validation(0));
    }

    /// Solutions of the closed relations are parametrised by
    /// `(p_sq, ind_D, n_plus)`; nu of any split is well-defined because
    /// `chi - 2 n_+ - 3 sigma = -48 ind_D` exactly.
    #[test]
    fn nu_well_defined_on_closed_solutions() {
        let mut state = 0x243F6A8885A308D3u64;
        let mut rand = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 41) as i64 - 20
        };
        for _ in 0..500 {
            let (p_sq, ind_d, n_plus) = (rand(), rand(), rand());
            let sigma = p_sq - 224 * ind_d;
            let p2 = 7 * p_sq - 1440 * ind_d;
            let chi = 3 * p_sq - 720 * ind_d + 2 * n_plus;
            assert!(closed_relations_check(sigma, p_sq, p2, ind_d, chi, n_plus).all_pass());
            assert_eq!(chi - 2 * n_plus - 3 * sigma, -48 * ind_d);
        }
    }
}
