//! Configurations of polarising lattices inside the K3 lattice.
//!
//! A configuration is the Gram matrix of the push-out `W = N+ + N-` in a
//! basis whose first `r_plus` vectors span `N+` and the rest span `N-`.
//! From it we compute, exactly over the rationals:
//!
//! * the composition of orthogonal projections `p_+ p_-` restricted to a
//!   side, whose eigenvalues are the possible `cos^2(theta)`,
//! * eigenspaces `N^theta` and the sublattice `N_side + N_other^{!=theta}`,
//! * the product of reflections `A+ A-` and the configuration angles, i.e.
//!   the arguments of its eigenvalues split by the sign of the invariant
//!   subspace (the 19 - (r-2) directions in the orthogonal complement of W
//!   inside the K3 lattice are fixed and contribute zero angles).

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::angles::{AngleSpectrum, ExactAngle};
use crate::lattice::{GramMatrix, LatticeError};
use crate::linalg::{
    bilinear, poly_eval, primitive_scale, q, rational_roots, sym_signature, QMat, Q,
};

/// K3 lattice constants: signature (3, 19), rank 22.
const K3_POS: usize = 3;
const K3_NEG: usize = 19;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("block ranks {r_plus} + {r_minus} do not match Gram rank {rank}")]
    RankMismatch { r_plus: usize, r_minus: usize, rank: usize },
    #[error("the {side:?} block of the configuration is degenerate")]
    SingularBlock { side: Side },
    #[error("{0} is not an eigenvalue of the projection composition")]
    NotAnEigenvalue(String),
    #[error("configuration fails condition (i): signature is {0} instead of (2, r-2, 0)")]
    ConditionI(String),
    #[error("reflection product is not elliptic: invariant trace {0} has |t| > 2")]
    NonElliptic(String),
    #[error("internal inconsistency in angle classification: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Angle(#[from] crate::angles::AngleError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

/// A pair of polarising lattices spanning `W` inside the K3 lattice.
#[derive(Clone, PartialEq, Debug)]
pub struct Configuration {
    gram: GramMatrix,
    r_plus: usize,
    r_minus: usize,
}

/// Rational eigenvalues of the projection composition, with multiplicity,
/// plus the deflated characteristic factor holding any irrational ones.
#[derive(Clone, Debug)]
pub struct CosSpectrum {
    pub rational: Vec<(Q, usize)>,
    /// Ascending coefficients of the residual characteristic factor; empty
    /// when every eigenvalue is rational.
    pub residual: Vec<Q>,
}

impl CosSpectrum {
    pub fn contains(&self, c: &Q) -> bool {
        self.rational.iter().any(|(r, _)| r == c)
            || (!self.residual.is_empty() && poly_eval(&self.residual, c).is_zero())
    }
}

impl Configuration {
    /// Build a configuration, checking that both designated blocks are
    /// non-degenerate. The full Gram may be degenerate; condition (i)
    /// rejects such configurations later.
    pub fn new(gram: GramMatrix, r_plus: usize, r_minus: usize) -> Result<Self, ConfigError> {
        if r_plus + r_minus != gram.rank() {
            return Err(ConfigError::RankMismatch { r_plus, r_minus, rank: gram.rank() });
        }
        let cfg = Configuration { gram, r_plus, r_minus };
        for side in [Side::Plus, Side::Minus] {
            if cfg.block(side).det().is_zero() {
                return Err(ConfigError::SingularBlock { side });
            }
        }
        Ok(cfg)
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.gram
    }

    pub fn r_plus(&self) -> usize {
        self.r_plus
    }

    pub fn r_minus(&self) -> usize {
        self.r_minus
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    fn range(&self, side: Side) -> std::ops::Range<usize> {
        match side {
            Side::Plus => 0..self.r_plus,
            Side::Minus => self.r_plus..self.rank(),
        }
    }

    /// Gram matrix of one polarising block.
    pub fn block(&self, side: Side) -> QMat {
        let r = self.range(side);
        QMat::from_rows(
            r.clone()
                .map(|i| {
                    r.clone()
                        .map(|j| Q::from_integer(self.gram.entry(i, j).clone()))
                        .collect()
                })
                .collect(),
        )
    }

    /// Cross block `B` with rows indexed by `side` and columns by the other.
    pub fn cross_block(&self, side: Side) -> QMat {
        let rows = self.range(side);
        let cols = self.range(side.other());
        QMat::from_rows(
            rows.map(|i| {
                cols.clone()
                    .map(|j| Q::from_integer(self.gram.entry(i, j).clone()))
                    .collect()
            })
            .collect(),
        )
    }

    /// Condition (i): `W` is non-degenerate of signature `(2, rk W - 2)`.
    pub fn condition_i(&self) -> bool {
        let s = self.gram.signature();
        s.n_pos == 2 && s.n_zero == 0 && s.n_neg == self.rank() - 2
    }

    /// Matrix of the projection composition restricted to `N_side`, i.e.
    /// `N^{-1} B (N')^{-1} B^T` in the designated basis.
    pub fn proj_composition(&self, side: Side) -> Result<QMat, ConfigError> {
        let n = self.block(side);
        let n_other = self.block(side.other());
        let b = self.cross_block(side);
        let n_inv = n.inverse().ok_or(ConfigError::SingularBlock { side })?;
        let n_other_inv = n_other
            .inverse()
            .ok_or(ConfigError::SingularBlock { side: side.other() })?;
        Ok(n_inv.mul(&b).mul(&n_other_inv).mul(&b.transpose()))
    }

    /// Eigenvalues `cos^2(theta)` of the projection composition on `N+`.
    pub fn gluing_angle_cos2(&self) -> Result<CosSpectrum, ConfigError> {
        let m = self.proj_composition(Side::Plus)?;
        let (rational, residual) = rational_roots(&m.charpoly());
        Ok(CosSpectrum { rational, residual })
    }

    /// Basis of the `c`-eigenspace of the projection composition on `side`
    /// (primitive integer vectors in block coordinates). An empty basis is
    /// reported as an error: `c` is then not an eigenvalue at all.
    pub fn theta_eigenspace(&self, c: &Q, side: Side) -> Result<Vec<Vec<Q>>, ConfigError> {
        let m = self.proj_composition(side)?;
        let mut shifted = m;
        for i in 0..shifted.nrows() {
            shifted[(i, i)] -= c;
        }
        let basis = shifted.kernel_basis();
        if basis.is_empty() {
            return Err(ConfigError::NotAnEigenvalue(c.to_string()));
        }
        Ok(basis)
    }

    /// Condition (ii), non-triviality clause only: the `theta`-eigenspace on
    /// `side` is nonzero.
    pub fn condition_ii(&self, c: &Q, side: Side) -> bool {
        self.theta_eigenspace(c, side).map_or(false, |b| !b.is_empty())
    }

    /// Gram matrix of the sublattice `N_side + N_other^{!=theta}` spanned
    /// inside `W`, where `N_other^theta` is the `c`-eigenspace on the other
    /// side and the complement generators are scaled to primitive integer
    /// vectors. No primitive closure in the ambient lattice is taken.
    pub fn lambda_sum_gram(&self, c: &Q, side: Side) -> Result<GramMatrix, ConfigError> {
        let other = side.other();
        let eig = self.theta_eigenspace(c, other)?;
        let n_other = self.block(other);
        // complement: vectors y in N_other with <y, v> = 0 for all v in eig
        let rows: Vec<Vec<Q>> = eig.iter().map(|v| n_other.apply(v)).collect();
        let complement = if rows.is_empty() {
            Vec::new()
        } else {
            QMat::from_rows(rows).kernel_basis()
        };
        // assemble generators in full W coordinates: side block basis first
        let rank = self.rank();
        let mut gens: Vec<Vec<Q>> = Vec::new();
        for i in self.range(side) {
            let mut v = vec![Q::zero(); rank];
            v[i] = Q::one();
            gens.push(v);
        }
        let offset = self.range(other).start;
        for y in &complement {
            let mut v = vec![Q::zero(); rank];
            for (k, val) in y.iter().enumerate() {
                v[offset + k] = val.clone();
            }
            gens.push(primitive_scale(&v));
        }
        let g = self.gram.to_qmat();
        let rows: Vec<Vec<num_bigint::BigInt>> = gens
            .iter()
            .map(|v| {
                gens.iter()
                    .map(|w| {
                        let val = bilinear(v, &g, w);
                        debug_assert!(val.is_integer());
                        val.to_integer()
                    })
                    .collect()
            })
            .collect();
        Ok(GramMatrix::new(rows)?)
    }

    /// Matrix of `A+ A- = (2 p+ - 1)(2 p- - 1)` on `W`, in the designated
    /// basis. The result is an isometry of the configuration Gram.
    pub fn reflection_product(&self) -> Result<QMat, ConfigError> {
        let rank = self.rank();
        let proj = |side: Side| -> Result<QMat, ConfigError> {
            let n = self.block(side);
            let b = self.cross_block(side);
            let n_inv = n.inverse().ok_or(ConfigError::SingularBlock { side })?;
            // p(e_i) = e_i on own block; p(f_j) has coordinates N^{-1} B e_j
            let coeff = n_inv.mul(&b);
            let mut p = QMat::zeros(rank, rank);
            let own = self.range(side);
            let other = self.range(side.other());
            for i in own.clone() {
                p[(i, i)] = Q::one();
            }
            for (jj, j) in other.enumerate() {
                for (ii, i) in own.clone().enumerate() {
                    p[(i, j)] = coeff[(ii, jj)].clone();
                }
            }
            Ok(p)
        };
        let a = |p: &QMat| {
            let mut m = p.scale(&q(2));
            for i in 0..rank {
                m[(i, i)] -= Q::one();
            }
            m
        };
        let r = a(&proj(Side::Plus)?).mul(&a(&proj(Side::Minus)?));
        // isometry sanity check: R^T G R = G
        let g = self.gram.to_qmat();
        if r.transpose().mul(&g).mul(&r) != g {
            return Err(ConfigError::Inconsistent(
                "reflection product does not preserve the form".into(),
            ));
        }
        Ok(r)
    }

    /// The configuration angles: eigen-arguments of the reflection product,
    /// classified by the sign of the form on the invariant subspace and
    /// padded with zeros for the fixed orthogonal complement of `W`.
    pub fn configuration_angles(&self) -> Result<AngleSpectrum, ConfigError> {
        if !self.condition_i() {
            return Err(ConfigError::ConditionI(self.gram.signature().to_string()));
        }
        let rank = self.rank();
        let g = self.gram.to_qmat();
        let r = self.reflection_product()?;
        let g_inv = g.inverse().ok_or(ConfigError::Inconsistent("degenerate W".into()))?;
        let r_inv = g_inv.mul(&r.transpose()).mul(&g);
        // C = R + R^{-1} is G-self-adjoint with eigenvalue 2cos(alpha) on
        // each invariant rotation plane
        let c = r.add(&r_inv);
        let (rational, residual) = rational_roots(&c.charpoly());
        let mut pos_angles: Vec<ExactAngle> = Vec::new();
        let mut neg_angles: Vec<ExactAngle> = Vec::new();
        let two = q(2);
        for (t, mult) in &rational {
            if t.abs() > two {
                return Err(ConfigError::NonElliptic(t.to_string()));
            }
            // primary subspace for this trace class
            let mut shifted = c.clone();
            for i in 0..rank {
                shifted[(i, i)] -= t;
            }
            let basis = shifted.pow(rank).kernel_basis();
            if basis.len() != *mult {
                return Err(ConfigError::Inconsistent(format!(
                    "primary subspace dimension {} does not match multiplicity {mult}",
                    basis.len()
                )));
            }
            let bmat = QMat::from_columns(&basis, rank);
            let sub_gram = bmat.transpose().mul(&g).mul(&bmat);
            let (p, n, z) = sym_signature(&sub_gram);
            if z != 0 {
                return Err(ConfigError::Inconsistent(
                    "degenerate invariant subspace".into(),
                ));
            }
            push_angles(&mut pos_angles, t, p)?;
            push_angles(&mut neg_angles, t, n)?;
        }
        if !residual.is_empty() {
            self.classify_residual(&c, &g, &residual, &mut pos_angles, &mut neg_angles)?;
        }
        // the complement of W in the K3 lattice is fixed pointwise
        let w_pos = pos_angles.len();
        let w_neg = neg_angles.len();
        if w_pos != 2 || w_neg != rank - 2 {
            return Err(ConfigError::Inconsistent(format!(
                "angle counts ({w_pos}, {w_neg}) disagree with signature (2, {})",
                rank - 2
            )));
        }
        // structural check: the positive angles form a single +- pair, so
        // alpha_plus = {0, +2theta, -2theta}
        let paired = match (&pos_angles[0], &pos_angles[1]) {
            (ExactAngle::Zero, ExactAngle::Zero) => true,
            (ExactAngle::Pi { sign: a }, ExactAngle::Pi { sign: b }) => a != b,
            (
                ExactAngle::Cos2 { value: va, sign: sa },
                ExactAngle::Cos2 { value: vb, sign: sb },
            ) => va == vb && sa != sb,
            (ExactAngle::Float { value: va }, ExactAngle::Float { value: vb }) => {
                (va + vb).abs() < 1e-9
            }
            _ => false,
        };
        if !paired {
            return Err(ConfigError::Inconsistent(
                "positive configuration angles do not form {0, 2theta, -2theta}".into(),
            ));
        }
        pos_angles.extend(std::iter::repeat(ExactAngle::Zero).take(K3_POS - w_pos));
        neg_angles.extend(std::iter::repeat(ExactAngle::Zero).take(K3_NEG - w_neg));
        sort_angles(&mut pos_angles);
        sort_angles(&mut neg_angles);
        Ok(AngleSpectrum { alpha_plus: pos_angles, alpha_minus: neg_angles })
    }

    /// Floating-point fallback for irrational invariant traces: restrict C
    /// to the (exactly computed) residual invariant subspace, find its real
    /// eigenvalues numerically and classify signs with a hard margin.
    fn classify_residual(
        &self,
        c: &QMat,
        g: &QMat,
        residual: &[Q],
        pos_angles: &mut Vec<ExactAngle>,
        neg_angles: &mut Vec<ExactAngle>,
    ) -> Result<(), ConfigError> {
        let rank = self.rank();
        // residual invariant subspace: kernel of q(C)^rank (exact)
        let mut qc = QMat::zeros(rank, rank);
        let mut power = QMat::identity(rank);
        for coeff in residual {
            qc = qc.add(&power.scale(coeff));
            power = power.mul(c);
        }
        let basis = qc.pow(rank).kernel_basis();
        if basis.is_empty() {
            return Ok(());
        }
        let bmat = QMat::from_columns(&basis, rank);
        // exact restriction: solve B X = C B (B has full column rank)
        let btb = bmat.transpose().mul(&bmat);
        let btb_inv = btb
            .inverse()
            .ok_or(ConfigError::Inconsistent("residual basis not independent".into()))?;
        let c_res = btb_inv.mul(&bmat.transpose()).mul(&c.mul(&bmat));
        let floats: Vec<f64> = c_res
            .charpoly()
            .iter()
            .map(|x| x.to_f64().unwrap_or(f64::NAN))
            .collect();
        let roots = crate::linalg::durand_kerner(&floats);
        let mut reals: Vec<f64> = Vec::new();
        for z in &roots {
            if z.im.abs() > 1e-7 {
                return Err(ConfigError::NonElliptic(format!(
                    "complex invariant trace {z}"
                )));
            }
            reals.push(z.re);
        }
        reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut i = 0;
        let gb = bmat.transpose().mul(&g).mul(&bmat).to_f64();
        let cb = c_res.to_f64();
        while i < reals.len() {
            let mut j = i + 1;
            while j < reals.len() && (reals[j] - reals[i]).abs() < 1e-7 {
                j += 1;
            }
            let t = reals[i..j].iter().sum::<f64>() / (j - i) as f64;
            if t.abs() > 2.0 + 1e-9 {
                return Err(ConfigError::NonElliptic(format!("{t}")));
            }
            let dim = j - i;
            // eigenvectors of C_res for t, by float Gaussian elimination
            let evecs = float_kernel(&cb, t, 1e-7);
            if evecs.len() != dim {
                return Err(ConfigError::Inconsistent(format!(
                    "float eigenspace dimension {} for trace {t}, expected {dim}",
                    evecs.len()
                )));
            }
            let (p, n) = float_signature(&evecs, &gb).map_err(ConfigError::Inconsistent)?;
            let alpha = (t / 2.0).clamp(-1.0, 1.0).acos();
            push_float_angles(pos_angles, alpha, p);
            push_float_angles(neg_angles, alpha, n);
            i = j;
        }
        Ok(())
    }
}

fn push_angles(list: &mut Vec<ExactAngle>, t: &Q, count: usize) -> Result<(), ConfigError> {
    if count == 0 {
        return Ok(());
    }
    let two = q(2);
    if *t == two {
        list.extend(std::iter::repeat(ExactAngle::Zero).take(count));
    } else if *t == -two.clone() {
        for k in 0..count {
            list.push(ExactAngle::Pi { sign: if k % 2 == 0 { 1 } else { -1 } });
        }
    } else {
        if count % 2 != 0 {
            return Err(ConfigError::Inconsistent(format!(
                "odd-dimensional definite rotation component at trace {t}"
            )));
        }
        for _ in 0..count / 2 {
            list.push(ExactAngle::Cos2 { value: t.clone(), sign: 1 });
            list.push(ExactAngle::Cos2 { value: t.clone(), sign: -1 });
        }
    }
    Ok(())
}

fn push_float_angles(list: &mut Vec<ExactAngle>, alpha: f64, count: usize) {
    for k in 0..count {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        list.push(ExactAngle::Float { value: sign * alpha });
    }
}

/// Kernel of `(M - t I)` for a float matrix, by Gaussian elimination with a
/// pivot threshold.
fn float_kernel(m: &[Vec<f64>], t: f64, tol: f64) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.iter().cloned().collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= t;
    }
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter().map(|x| x.abs()))
        .fold(1.0f64, f64::max);
    for col in 0..n {
        let (best, val) = (row..n)
            .map(|r| (r, a[r][col].abs()))
            .fold((row, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol * scale {
            continue;
        }
        a.swap(row, best);
        let d = a[row][col];
        for c in 0..n {
            a[row][c] /= d;
        }
        for r in 0..n {
            if r != row && a[r][col].abs() > 0.0 {
                let f = a[r][col];
                for c in 0..n {
                    a[r][c] -= f * a[row][c];
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0.0; n];
        v[free] = 1.0;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Signature of the form restricted to a float subspace, requiring a
/// definiteness margin; returns (positive, negative) dimension counts.
fn float_signature(basis: &[Vec<f64>], g: &[Vec<f64>]) -> Result<(usize, usize), String> {
    let k = basis.len();
    let n = g.len();
    let mut gram = vec![vec![0.0f64; k]; k];
    for (i, v) in basis.iter().enumerate() {
        for (j, w) in basis.iter().enumerate() {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += v[a] * g[a][b] * w[b];
                }
            }
            gram[i][j] = s;
        }
    }
    // symmetric reduction with margin
    let margin = 1e-9;
    let (mut pos, mut neg) = (0usize, 0usize);
    let mut active: Vec<usize> = (0..k).collect();
    while let Some(pidx) = active
        .iter()
        .position(|&i| gram[i][i].abs() > margin)
    {
        let i = active.remove(pidx);
        let d = gram[i][i];
        if d > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
        let others = active.clone();
        for &j in &others {
            for &l in &others {
                gram[j][l] -= gram[j][i] * gram[i][l] / d;
            }
        }
    }
    if !active.is_empty() {
        return Err("definiteness margin violated on a float invariant subspace".into());
    }
    Ok((pos, neg))
}

fn sort_angles(list: &mut [ExactAngle]) {
    list.sort_by(|a, b| {
        b.to_f64()
            .partial_cmp(&a.to_f64())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// The designated `cos^2 theta` as an exact rational, from the double
/// cosine tag of a configuration angle: `cos^2 = (t/2 + 1)/2` for the angle
/// `2 theta` with `cos(2 theta) = t/2`.
pub fn cos2_from_double_angle(t: &Q) -> Q {
    (t / q(2) + Q::one()) / q(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q_ratio, QMat};

    pub(crate) fn example_w62() -> Configuration {
        let g = GramMatrix::from_i64(&[vec![6, 2], vec![2, 2]]).unwrap();
        Configuration::new(g, 1, 1).unwrap()
    }

    pub(crate) fn example_pi4() -> Configuration {
        let g = GramMatrix::from_i64(&[
            vec![2, 4, 3, 4],
            vec![4, 2, 3, 2],
            vec![3, 3, 6, 6],
            vec![4, 2, 6, 4],
        ])
        .unwrap();
        Configuration::new(g, 2, 2).unwrap()
    }

    pub(crate) fn example_pushout() -> Configuration {
        let g = GramMatrix::from_i64(&[
            vec![4, 5, 1, -1],
            vec![5, 2, -1, 1],
            vec![1, -1, 4, 5],
            vec![-1, 1, 5, 2],
        ])
        .unwrap();
        Configuration::new(g, 2, 2).unwrap()
    }

    fn perpendicular_22() -> Configuration {
        let g = GramMatrix::from_i64(&[vec![2, 0], vec![0, 2]]).unwrap();
        Configuration::new(g, 1, 1).unwrap()
    }

    #[test]
    fn condition_i_examples() {
        assert!(example_w62().condition_i());
        assert!(example_pi4().condition_i());
        let neg = Configuration::new(
            GramMatrix::from_i64(&[vec![-2, 0], vec![0, -2]]).unwrap(),
            1,
            1,
        )
        .unwrap();
        assert!(!neg.condition_i());
    }

    #[test]
    fn proj_composition_values() {
        let m = example_w62().proj_composition(Side::Plus).unwrap();
        assert_eq!(m, QMat::from_rows(vec![vec![q_ratio(1, 3)]]));

        let m = example_pi4().proj_composition(Side::Plus).unwrap();
        assert_eq!(m, QMat::identity(2).scale(&q_ratio(1, 2)));

        let perp = perpendicular_22();
        assert!(perp.proj_composition(Side::Plus).unwrap().is_zero());
    }

    #[test]
    fn proj_composition_pushout_matrix() {
        let m = example_pushout().proj_composition(Side::Plus).unwrap();
        let expected = QMat::from_rows(vec![
            vec![q_ratio(112, 289), q_ratio(-112, 289)],
            vec![q_ratio(-144, 289), q_ratio(144, 289)],
        ]);
        assert_eq!(m, expected);
    }

    #[test]
    fn gluing_angle_spectra() {
        let s = example_w62().gluing_angle_cos2().unwrap();
        assert_eq!(s.rational, vec![(q_ratio(1, 3), 1)]);
        assert!(s.residual.is_empty());

        let s = example_pi4().gluing_angle_cos2().unwrap();
        assert_eq!(s.rational, vec![(q_ratio(1, 2), 2)]);

        let s = perpendicular_22().gluing_angle_cos2().unwrap();
        assert_eq!(s.rational, vec![(q(0), 1)]);
    }

    #[test]
    fn theta_eigenspaces() {
        let basis = example_pushout().theta_eigenspace(&q(0), Side::Plus).unwrap();
        assert_eq!(basis, vec![vec![q(1), q(1)]]);

        let basis = example_pi4().theta_eigenspace(&q_ratio(1, 2), Side::Plus).unwrap();
        assert_eq!(basis.len(), 2);

        let basis = example_w62().theta_eigenspace(&q_ratio(1, 3), Side::Plus).unwrap();
        assert_eq!(basis, vec![vec![q(1)]]);

        // off-spectrum eigenvalue is an error
        assert!(matches!(
            perpendicular_22().theta_eigenspace(&q_ratio(1, 7), Side::Plus),
            Err(ConfigError::NotAnEigenvalue(_))
        ));
    }

    #[test]
    fn condition_ii_examples() {
        assert!(example_w62().condition_ii(&q_ratio(1, 3), Side::Plus));
        assert!(example_pushout().condition_ii(&q(0), Side::Plus));
        assert!(!perpendicular_22().condition_ii(&q_ratio(1, 7), Side::Plus));
    }

    #[test]
    fn lambda_sum_gram_reproduces_overlattice() {
        let lam = example_pushout().lambda_sum_gram(&q(0), Side::Plus).unwrap();
        assert_eq!(
            lam.rows_i64().unwrap(),
            vec![vec![4, 5, 16], vec![5, 2, -16], vec![16, -16, -272]]
        );
    }

    #[test]
    fn lambda_sum_gram_trivial_complement() {
        // N-^theta = N- forces a trivial complement, leaving N+ itself
        let lam = example_pi4().lambda_sum_gram(&q_ratio(1, 2), Side::Plus).unwrap();
        assert_eq!(lam.rows_i64().unwrap(), vec![vec![2, 4], vec![4, 2]]);
    }

    #[test]
    fn lambda_sum_gram_perpendicular() {
        // B = 0 with c = 0: the eigenspace is all of N-, complement empty
        let lam = perpendicular_22().lambda_sum_gram(&q(0), Side::Plus).unwrap();
        assert_eq!(lam.rows_i64().unwrap(), vec![vec![2]]);
    }

    #[test]
    fn reflection_product_perpendicular_is_minus_identity() {
        let r = perpendicular_22().reflection_product().unwrap();
        assert_eq!(r, QMat::identity(2).scale(&q(-1)));
    }

    #[test]
    fn reflection_product_pi4_trace_zero() {
        let r = example_pi4().reflection_product().unwrap();
        assert!(r.trace().is_zero());
    }

    #[test]
    fn configuration_angles_w62() {
        let spec = example_w62().configuration_angles().unwrap();
        assert_eq!(spec.alpha_minus, vec![ExactAngle::Zero; 19]);
        // alpha_plus = {0, +-2theta} with cos(2theta) = -1/3
        assert!(spec.alpha_plus.contains(&ExactAngle::Zero));
        assert!(spec
            .alpha_plus
            .contains(&ExactAngle::Cos2 { value: q_ratio(-2, 3), sign: 1 }));
        assert!(spec
            .alpha_plus
            .contains(&ExactAngle::Cos2 { value: q_ratio(-2, 3), sign: -1 }));
    }

    #[test]
    fn configuration_angles_pi4() {
        let spec = example_pi4().configuration_angles().unwrap();
        assert_eq!(spec.nonzero_minus_count(), 2);
        assert!(spec.alpha_minus.contains(&ExactAngle::Cos2 { value: q(0), sign: 1 }));
        assert!(spec.alpha_minus.contains(&ExactAngle::Cos2 { value: q(0), sign: -1 }));
        assert!(spec.alpha_plus.contains(&ExactAngle::Cos2 { value: q(0), sign: 1 }));
    }

    #[test]
    fn configuration_angles_perpendicular_rank11() {
        let spec = perpendicular_22().configuration_angles().unwrap();
        assert!(spec.alpha_plus.contains(&ExactAngle::Zero));
        assert!(spec.alpha_plus.contains(&ExactAngle::Pi { sign: 1 }));
        assert!(spec.alpha_plus.contains(&ExactAngle::Pi { sign: -1 }));
        assert_eq!(spec.alpha_minus, vec![ExactAngle::Zero; 19]);
    }

    #[test]
    fn configuration_angles_requires_condition_i() {
        let neg = Configuration::new(
            GramMatrix::from_i64(&[vec![-2, 0], vec![0, -2]]).unwrap(),
            1,
            1,
        )
        .unwrap();
        assert!(matches!(
            neg.configuration_angles(),
            Err(ConfigError::ConditionI(_))
        ));
    }

    #[test]
    fn cos2_rational_on_fixtures() {
        for cfg in [example_w62(), example_pi4(), example_pushout()] {
            let s = cfg.gluing_angle_cos2().unwrap();
            assert!(s.residual.is_empty(), "fixture with irrational cos^2");
            for (c, _) in &s.rational {
                // designated eigenvalues are honest cosines squared
                assert!(*c >= q(0) && *c <= q(1));
            }
        }
    }
}
