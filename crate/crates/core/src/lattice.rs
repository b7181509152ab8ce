//! Exact arithmetic on integral symmetric bilinear forms.
//!
//! A [`GramMatrix`] holds the Gram matrix of a lattice in a chosen basis,
//! with arbitrary-precision integer entries. Signatures are computed by
//! exact symmetric reduction over the rationals, never by floating-point
//! eigenvalues: the indefinite, large-determinant forms showing up in K3
//! computations make numeric inertia unreliable.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{sym_signature, QMat, Q};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix must be square, got {rows} rows and {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("Gram matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("unknown standard lattice name: {0}")]
    UnknownLattice(String),
    #[error("entry at ({i}, {j}) does not fit in 64 bits for serialization")]
    EntryTooLarge { i: usize, j: usize },
}

/// Integral symmetric bilinear form on a free module of finite rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GramMatrix {
    rank: usize,
    entries: Vec<BigInt>,
}

/// Inertia of the real quadratic form underlying a Gram matrix.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LatticeSignature {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
}

impl std::fmt::Display for LatticeSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.n_pos, self.n_neg, self.n_zero)
    }
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let rank = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(LatticeError::NotSquare { rows: rank, cols: row.len() });
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::NotSymmetric { i, j });
                }
            }
        }
        Ok(GramMatrix { rank, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Rank-zero lattice (used as the empty direct summand).
    pub fn empty() -> Self {
        GramMatrix { rank: 0, entries: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank).map(|i| (0..self.rank).map(|j| self.entry(i, j).clone()).collect()).collect()
    }

    pub fn to_qmat(&self) -> QMat {
        QMat::from_rows(
            (0..self.rank)
                .map(|i| (0..self.rank).map(|j| Q::from_integer(self.entry(i, j).clone())).collect())
                .collect(),
        )
    }

    /// Exact inertia of the form.
    pub fn signature(&self) -> LatticeSignature {
        let (n_pos, n_neg, n_zero) = sym_signature(&self.to_qmat());
        LatticeSignature { n_pos, n_neg, n_zero }
    }

    /// True iff every diagonal entry is even.
    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| (self.entry(i, i) % BigInt::from(2)).is_zero())
    }

    pub fn det(&self) -> BigInt {
        if self.rank == 0 {
            return BigInt::one();
        }
        let d = self.to_qmat().det();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    /// True iff `|det| = 1`.
    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Perpendicular (block-diagonal) direct sum.
    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let rank = self.rank + other.rank;
        let mut entries = vec![BigInt::zero(); rank * rank];
        for i in 0..self.rank {
            for j in 0..self.rank {
                entries[i * rank + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                entries[(self.rank + i) * rank + (self.rank + j)] = other.entry(i, j).clone();
            }
        }
        GramMatrix { rank, entries }
    }

    /// The same lattice with the form negated.
    pub fn negated(&self) -> GramMatrix {
        GramMatrix { rank: self.rank, entries: self.entries.iter().map(|x| -x).collect() }
    }

    /// Row-major `i64` rows for JSON interchange; internal arithmetic is
    /// unbounded but the wire format keeps plain JSON integers.
    pub fn rows_i64(&self) -> Result<Vec<Vec<i64>>, LatticeError> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| {
                        i64::try_from(self.entry(i, j).clone())
                            .map_err(|_| LatticeError::EntryTooLarge { i, j })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Names for the standard even lattices used to model `H^2` of a K3 surface.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StandardLattice {
    /// Hyperbolic plane, Gram `[[0,1],[1,0]]`.
    U,
    /// Positive definite E8 root lattice.
    E8,
    /// E8 with the form negated.
    E8Neg,
    /// `U + U + U + E8(-1) + E8(-1)`, rank 22, signature (3, 19).
    K3,
}

impl std::str::FromStr for StandardLattice {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "U" | "u" => Ok(StandardLattice::U),
            "E8" | "e8" => Ok(StandardLattice::E8),
            "E8_neg" | "e8_neg" | "E8-" => Ok(StandardLattice::E8Neg),
            "K3" | "k3" => Ok(StandardLattice::K3),
            other => Err(LatticeError::UnknownLattice(other.to_string())),
        }
    }
}

/// Standard Gram matrices. E8 uses the even Gram matrix with diagonal 2 and
/// the usual Dynkin adjacency (chain 1-3-4-5-6-7-8 with node 2 attached to
/// node 4); downstream data depends only on isomorphism invariants.
pub fn standard_lattice(name: StandardLattice) -> GramMatrix {
    match name {
        StandardLattice::U => GramMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap(),
        StandardLattice::E8 => {
            let adj: &[(usize, usize)] =
                &[(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
            let mut rows = vec![vec![0i64; 8]; 8];
            for i in 0..8 {
                rows[i][i] = 2;
            }
            for &(i, j) in adj {
                rows[i][j] = -1;
                rows[j][i] = -1;
            }
            GramMatrix::from_i64(&rows).unwrap()
        }
        StandardLattice::E8Neg => standard_lattice(StandardLattice::E8).negated(),
        StandardLattice::K3 => {
            let u = standard_lattice(StandardLattice::U);
            let e8n = standard_lattice(StandardLattice::E8Neg);
            u.direct_sum(&u).direct_sum(&u).direct_sum(&e8n).direct_sum(&e8n)
        }
    }
}
