//! Dense exact linear algebra over the rationals.
//!
//! Everything in this module is deterministic and allocation-heavy rather
//! than clever: the matrices arising from lattice configurations have rank
//! at most 22, so clarity wins over asymptotics.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shorthand for arbitrary-precision rationals.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Column matrix from a slice of column vectors.
    pub fn from_columns(cols: &[Vec<Q>], dim: usize) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim);
            for i in 0..dim {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Q::is_zero)
    }

    /// Gaussian elimination determinant.
    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Q::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !a[(r, col)].is_zero()) {
                Some(p) => p,
                None => return Q::zero(),
            };
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let d = a[(col, col)].clone();
            det *= &d;
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] / &d;
                for c in col..n {
                    let sub = &f * &a[(col, c)];
                    a[(r, c)] -= sub;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let pivot = match (row..self.rows).find(|&r| !self[(r, col)].is_zero()) {
                Some(p) => p,
                None => continue,
            };
            self.swap_rows(pivot, row);
            let d = self[(row, col)].clone();
            for c in col..self.cols {
                self[(row, c)] /= d.clone();
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let f = self[(r, col)].clone();
                    for c in col..self.cols {
                        let sub = &f * &self[(row, c)];
                        self[(r, c)] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        a.rref().len()
    }

    /// Basis of the right kernel. Each vector is normalised so that its
    /// first nonzero entry is positive and the entries are integral and
    /// content-free (primitive integer vectors).
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let mut a = self.clone();
        let pivots = a.rref();
        let mut basis = Vec::new();
        let pivot_rows: Vec<(usize, usize)> =
            pivots.iter().copied().enumerate().map(|(r, c)| (c, r)).collect();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for &(pc, pr) in &pivot_rows {
                v[pc] = -a[(pr, free)].clone();
            }
            basis.push(primitive_scale(&v));
        }
        basis
    }

    /// Exact inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial by the Faddeev–LeVerrier recursion.
    /// Returned coefficients are ascending: `c[0] + c[1] x + ... + c[n] x^n`
    /// with `c[n] = 1`.
    pub fn charpoly(&self) -> Vec<Q> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut m = self.clone();
        for k in 1..=n {
            let c = -m.trace() / q(k as i64);
            coeffs[n - k] = c.clone();
            if k < n {
                let mut shifted = m.clone();
                for i in 0..n {
                    shifted[(i, i)] += &c;
                }
                m = self.mul(&shifted);
            }
        }
        coeffs
    }

    /// Matrix power by repeated multiplication (exponent is small here).
    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_f64().unwrap_or(f64::NAN)).collect())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Clear denominators and divide by the content, then fix the sign so the
/// first nonzero entry is positive.
pub fn primitive_scale(v: &[Q]) -> Vec<Q> {
    use num_integer::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &gcd).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    out.into_iter().map(Q::from_integer).collect()
}

/// Evaluate the bilinear form `v^T G w`.
pub fn bilinear(v: &[Q], g: &QMat, w: &[Q]) -> Q {
    let gw = g.apply(w);
    v.iter().zip(&gw).map(|(a, b)| a * b).sum()
}

/// Inertia (`n_pos`, `n_neg`, `n_zero`) of a symmetric rational matrix,
/// computed by exact symmetric reduction with full pivoting. Zero diagonals
/// are handled by the off-diagonal basis change `e_i <- e_i + e_j`, which is
/// what makes forms like the hyperbolic plane work without floating point.
pub fn sym_signature(g: &QMat) -> (usize, usize, usize) {
    assert!(g.is_symmetric(), "signature of a non-symmetric matrix");
    let n = g.nrows();
    let mut a = g.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    while !active.is_empty() {
        if let Some(k) = active.iter().position(|&i| !a[(i, i)].is_zero()) {
            let i = active.remove(k);
            let d = a[(i, i)].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            // congruence step: e_j <- e_j - (a_ji / d) e_i for remaining j
            let ratios: Vec<(usize, Q)> =
                active.iter().map(|&j| (j, &a[(j, i)] / &d)).collect();
            for &(j, ref fj) in &ratios {
                for &(l, ref fl) in &ratios {
                    let sub = fj * &d * fl;
                    a[(j, l)] -= sub;
                }
            }
        } else {
            // all active diagonal entries vanish; look for an off-diagonal pivot
            let mut found = None;
            'outer: for (ki, &i) in active.iter().enumerate() {
                for &j in active.iter().skip(ki + 1) {
                    if !a[(i, j)].is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            match found {
                Some((i, j)) => {
                    // basis change e_i <- e_i + e_j makes a_ii = 2 a_ij != 0
                    for c in 0..n {
                        let add = a[(j, c)].clone();
                        a[(i, c)] += add;
                    }
                    for r in 0..n {
                        let add = a[(r, j)].clone();
                        a[(r, i)] += add;
                    }
                }
                None => {
                    zero += active.len();
                    break;
                }
            }
        }
    }
    (pos, neg, zero)
}

/// Evaluate a polynomial with ascending rational coefficients.
pub fn poly_eval(poly: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Exact synthetic division by `(x - root)`; returns the quotient if the
/// remainder vanishes.
pub fn poly_deflate(poly: &[Q], root: &Q) -> Option<Vec<Q>> {
    if poly.len() < 2 {
        return None;
    }
    let n = poly.len() - 1;
    let mut quot = vec![Q::zero(); n];
    let mut carry = poly[n].clone();
    for k in (0..n).rev() {
        quot[k] = carry.clone();
        carry = &poly[k] + carry * root;
    }
    if carry.is_zero() {
        Some(quot)
    } else {
        None
    }
}

/// All complex roots of a polynomial with ascending real coefficients, by
/// the Durand–Kerner iteration. Good to ~1e-8 even at multiple roots, which
/// is plenty for snapping candidates that are then verified exactly.
pub fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for co in monic.iter().rev() {
            acc = acc * z + co;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..400 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-300 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-13 {
            break;
        }
    }
    roots
}

/// Rational roots (with multiplicity) of a rational polynomial, plus the
/// fully deflated residual factor (ascending, monic up to scale) containing
/// the irrational and complex roots.
///
/// Candidates come from float root-finding followed by continued-fraction
/// snapping; every accepted root is verified by exact evaluation, so the
/// output is exact even though the search is numeric.
pub fn rational_roots(poly: &[Q]) -> (Vec<(Q, usize)>, Vec<Q>) {
    let mut p: Vec<Q> = poly.to_vec();
    while p.len() > 1 && p.last().map_or(false, Q::is_zero) {
        p.pop();
    }
    let mut roots: Vec<(Q, usize)> = Vec::new();
    // factor out x^k first
    let mut zero_mult = 0;
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Q::zero(), zero_mult));
    }
    loop {
        if p.len() <= 1 {
            break;
        }
        let floats: Vec<f64> = p.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        if floats.iter().any(|x| !x.is_finite()) {
            break;
        }
        let mut real_parts: Vec<f64> = durand_kerner(&floats)
            .into_iter()
            .filter(|z| z.im.abs() < 1e-4)
            .map(|z| z.re)
            .collect();
        real_parts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // cluster means recover multiple roots far more accurately than the
        // scattered individual approximations
        let mut candidates: Vec<f64> = real_parts.clone();
        let mut i = 0;
        while i < real_parts.len() {
            let mut j = i + 1;
            while j < real_parts.len() && (real_parts[j] - real_parts[j - 1]).abs() < 1e-4 {
                j += 1;
            }
            if j - i > 1 {
                candidates.push(real_parts[i..j].iter().sum::<f64>() / (j - i) as f64);
            }
            i = j;
        }
        let mut found = None;
        'search: for x in &candidates {
            for cand in crate::rational::convergents_f64(*x, 1_000_000_000) {
                if poly_eval(&p, &cand).is_zero() {
                    found = Some(cand);
                    break 'search;
                }
            }
        }
        match found {
            Some(root) => {
                let mut mult = 0;
                while let Some(quot) = poly_deflate(&p, &root) {
                    p = quot;
                    mult += 1;
                    if p.len() <= 1 {
                        break;
                    }
                }
                match roots.iter_mut().find(|(r, _)| *r == root) {
                    Some((_, m)) => *m += mult,
                    None => roots.push((root, mult)),
                }
            }
            None => break,
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    let residual = if p.len() > 1 { p } else { Vec::new() };
    (roots, residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        let m = QMat::from_i64_rows(&[vec![9, 7]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![q(7), q(-9)]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = QMat::from_i64_rows(&[vec![2, 4], vec![4, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
    }

    #[test]
    fn signature_hyperbolic_plane() {
        let u = QMat::from_i64_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(sym_signature(&u), (1, 1, 0));
    }

    #[test]
    fn charpoly_of_diag() {
        let m = QMat::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        // (x-2)(x-3) = x^2 - 5x + 6
        assert_eq!(m.charpoly(), vec![q(6), q(-5), q(1)]);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x - 1/2)^2 (x + 3) = x^3 + 2x^2 - 11/4 x + 3/4
        let p = vec![q_ratio(3, 4), q_ratio(-11, 4), q(2), q(1)];
        let (roots, residual) = rational_roots(&p);
        assert!(residual.is_empty());
        assert_eq!(roots, vec![(q(-3), 1), (q_ratio(1, 2), 2)]);
    }

    #[test]
    fn rational_roots_leaves_irrational_factor() {
        // (x^2 - 2)(x - 1)
        let p = vec![q(2), q(-2), q(-1), q(1)];
        let (roots, residual) = rational_roots(&p);
        assert_eq!(roots, vec![(q(1), 1)]);
        assert_eq!(residual.len(), 3); // quadratic factor x^2 - 2
        assert!(poly_eval(&residual, &q(0)) == q(-2));
    }
}
