//! Property tests for the exact-arithmetic invariants.

use num_bigint::BigInt;
use proptest::prelude::*;

use etcs_core::angles::{m_rho, AngleSpectrum, ExactAngle};
use etcs_core::config::Configuration;
use etcs_core::hyperbolic::{cuspid_angle, BoundaryPoint};
use etcs_core::lattice::GramMatrix;
use etcs_core::linalg::{q, q_ratio, QMat, Q};

fn symmetric_matrix(rank: usize, max: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(
        proptest::collection::vec(-max..=max, rank),
        rank,
    )
    .prop_map(move |rows| {
        let mut m = rows;
        for i in 0..rank {
            for j in 0..i {
                m[i][j] = m[j][i];
            }
        }
        m
    })
}

/// Random unimodular matrix built from elementary shears and swaps.
fn unimodular(rank: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec((0..rank, 0..rank, -2i64..=2), 0..8).prop_map(move |ops| {
        let mut s = vec![vec![0i64; rank]; rank];
        for (i, row) in s.iter_mut().enumerate() {
            row[i] = 1;
        }
        for (i, j, c) in ops {
            if i == j {
                continue;
            }
            // row_i += c * row_j keeps det = 1
            for k in 0..rank {
                s[i][k] += c * s[j][k];
            }
        }
        s
    })
}

fn to_qmat(rows: &[Vec<i64>]) -> QMat {
    QMat::from_rows(
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_counts_sum_to_rank(rows in symmetric_matrix(4, 6)) {
        let g = GramMatrix::from_i64(&rows).unwrap();
        let s = g.signature();
        prop_assert_eq!(s.n_pos + s.n_neg + s.n_zero, g.rank());
        let flipped = g.negated().signature();
        prop_assert_eq!(flipped.n_pos, s.n_neg);
        prop_assert_eq!(flipped.n_neg, s.n_pos);
        prop_assert_eq!(flipped.n_zero, s.n_zero);
    }

    #[test]
    fn signature_invariant_under_unimodular_change(
        rows in symmetric_matrix(4, 5),
        change in unimodular(4),
    ) {
        let g = GramMatrix::from_i64(&rows).unwrap();
        let s = to_qmat(&change);
        prop_assume!(s.det() == q(1) || s.det() == q(-1));
        let transformed = s.transpose().mul(&g.to_qmat()).mul(&s);
        let rows2: Vec<Vec<BigInt>> = (0..4)
            .map(|i| (0..4).map(|j| transformed[(i, j)].to_integer()).collect())
            .collect();
        let g2 = GramMatrix::new(rows2).unwrap();
        prop_assert_eq!(g.signature(), g2.signature());
    }

    #[test]
    fn direct_sum_det_and_parity(a in symmetric_matrix(2, 5), b in symmetric_matrix(3, 5)) {
        let ga = GramMatrix::from_i64(&a).unwrap();
        let gb = GramMatrix::from_i64(&b).unwrap();
        let sum = ga.direct_sum(&gb);
        prop_assert_eq!(sum.det(), ga.det() * gb.det());
        prop_assert_eq!(sum.is_even(), ga.is_even() && gb.is_even());
        let ss = sum.signature();
        let (sa, sb) = (ga.signature(), gb.signature());
        prop_assert_eq!(ss.n_pos, sa.n_pos + sb.n_pos);
        prop_assert_eq!(ss.n_neg, sa.n_neg + sb.n_neg);
    }

    /// The reflection product preserves the configuration form exactly.
    /// (reflection_product verifies the isometry identity internally and
    /// errors if it fails, so surviving the call is the assertion.)
    #[test]
    fn reflection_product_is_an_isometry(
        n_plus in -4i64..=4, n_minus in -4i64..=4, cross in -3i64..=3,
        d_plus in 1i64..=4, d_minus in 1i64..=4,
    ) {
        // rank (1,1) configurations with nondegenerate blocks
        let gram = GramMatrix::from_i64(&[
            vec![n_plus * 2 + 2 * d_plus, cross],
            vec![cross, n_minus * 2 - 2 * d_minus - 8],
        ]).unwrap();
        let cfg = Configuration::new(gram, 1, 1);
        prop_assume!(cfg.is_ok());
        let cfg = cfg.unwrap();
        let r = cfg.reflection_product();
        prop_assert!(r.is_ok());
        let r = r.unwrap();
        let g = cfg.gram().to_qmat();
        prop_assert_eq!(r.transpose().mul(&g).mul(&r), g);
    }

    #[test]
    fn reflection_product_is_an_isometry_rank22(rows in symmetric_matrix(4, 4)) {
        let gram = GramMatrix::from_i64(&rows).unwrap();
        let cfg = Configuration::new(gram, 2, 2);
        prop_assume!(cfg.is_ok());
        let cfg = cfg.unwrap();
        let r = cfg.reflection_product().unwrap();
        let g = cfg.gram().to_qmat();
        prop_assert_eq!(r.transpose().mul(&g).mul(&r), g);
    }

    /// m_rho changes sign with rho when no entry sits on a set boundary.
    #[test]
    fn m_rho_antisymmetry(
        cos_nums in proptest::collection::vec(-9i64..=9, 0..8),
        rho_steps in 1i64..=19,
    ) {
        let rho = rho_steps as f64 * 0.15;
        prop_assume!(rho < std::f64::consts::PI);
        let boundary_cos = (std::f64::consts::PI - rho).cos();
        let boundary = q_ratio((boundary_cos * 1000.0).round() as i64, 1000);
        let mut minus = Vec::new();
        for n in &cos_nums {
            // avoid the boundary set exactly
            let c = q_ratio(*n, 10);
            prop_assume!(c != boundary);
            minus.push(ExactAngle::Cos2 { value: q(2) * &c, sign: 1 });
            minus.push(ExactAngle::Cos2 { value: q(2) * &c, sign: -1 });
        }
        while minus.len() < 19 {
            minus.push(ExactAngle::Zero);
        }
        prop_assume!(minus.len() == 19);
        let spectrum = AngleSpectrum {
            alpha_plus: vec![ExactAngle::Zero; 3],
            alpha_minus: minus,
        };
        let plus = m_rho(&spectrum, rho, Some(&boundary)).unwrap();
        let negated = m_rho(&spectrum, -rho, Some(&boundary)).unwrap();
        prop_assert_eq!(plus, -negated);
    }

    /// Cuspid angles are invariant under the integer translation
    /// x -> x+1, y -> y+1, e/f -> (e+f)/f.
    #[test]
    fn cuspid_angle_translation_invariance(
        en in -12i64..=12, fd in 1i64..=9,
        xn in -12i64..=12, xd in 1i64..=9,
        yn in -12i64..=12, yd in 1i64..=9,
    ) {
        let base = BoundaryPoint::Rational(q_ratio(en, fd));
        let x = BoundaryPoint::Rational(q_ratio(xn, xd));
        let y = BoundaryPoint::Rational(q_ratio(yn, yd));
        prop_assume!(x != base && y != base);
        let before = cuspid_angle(&base, &x, &y).unwrap();
        let shift = |p: &BoundaryPoint| match p {
            BoundaryPoint::Rational(r) => BoundaryPoint::Rational(r + Q::from_integer(1.into())),
            BoundaryPoint::Infinity => BoundaryPoint::Infinity,
        };
        let after = cuspid_angle(&shift(&base), &shift(&x), &shift(&y)).unwrap();
        prop_assert_eq!(before, after);
    }

    /// Every enumerated gluing revalidates and derives the same geometry as
    /// its equivalence-class representatives.
    #[test]
    fn enumeration_roundtrip(bound in 2i64..=4) {
        for (kp, km) in [(1u32, 1u32), (2, 1), (2, 2)] {
            if bound < (kp * km) as i64 {
                continue;
            }
            for g in etcs_core::gluing::enumerate_gluings(kp, km, bound, true).unwrap() {
                prop_assert!(g.validate().passes());
                let geom = g.derive().unwrap();
                prop_assert!(geom.case != etcs_core::gluing::TorusCase::ThetaZeroExcluded);
            }
        }
    }
}
