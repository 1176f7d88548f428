//! Dense exact linear algebra over [`Scalar`] entries.
//!
//! Determinants use fraction-free (Bareiss) elimination, so parametric
//! matrices stay polynomial throughout. Kernels and solving run over the
//! fraction field with generic-rank semantics: a nonzero polynomial pivot is
//! treated as invertible, and the pivots actually used are reported so
//! callers can audit that genericity was sound under their constraints.

use crate::scalar::Scalar;
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

#[derive(Debug, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Matrix {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_cols(cols: Vec<Vec<Scalar>>) -> Self {
        Matrix::from_rows(cols).transpose()
    }

    /// Build a small matrix from integer rows, for tests and the catalog.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| Scalar::from_int(n)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        (0..self.cols).map(|c| self[(r, c)].clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square() && *self == -self.transpose()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Scalar> {
        self.data.iter()
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e * s).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn substitute(&self, bind: &std::collections::BTreeMap<String, Scalar>) -> Matrix {
        self.map(|e| e.substitute(bind))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for c in 0..self.cols {
                    acc += &self[(r, c)] * &v[c];
                }
                acc
            })
            .collect()
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(ro + r, co + c)] = b[(r, c)].clone();
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    /// Horizontal concatenation of column vectors into a matrix.
    pub fn from_col_slice(ambient: usize, cols: &[Vec<Scalar>]) -> Matrix {
        assert!(cols.iter().all(|c| c.len() == ambient));
        Matrix::from_fn(ambient, cols.len(), |r, c| cols[c][r].clone())
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<Scalar, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        let mut m: Vec<Vec<Scalar>> = (0..n).map(|r| self.row(r)).collect();
        let mut sign = 1i64;
        let mut prev = Scalar::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Scalar::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = t
                        .try_exact_div(&prev)
                        .expect("Bareiss division is exact over an integral domain");
                }
                m[i][k] = Scalar::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(m[n - 1][n - 1].scale(&BigRational::from_integer(BigInt::from(sign))))
    }

    /// Basis of the right null space `{v : self * v = 0}`, with polynomial
    /// entries (denominators cleared). Empty for full column rank. Rank is
    /// generic: parameters are treated as transcendentals.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let rows: Vec<Vec<RatFn>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| RatFn::from(self[(r, c)].clone())).collect())
            .collect();
        let red = rref(rows, self.cols);
        let mut basis = Vec::new();
        let pivot_cols: Vec<usize> = red.pivots.iter().map(|&(_, c)| c).collect();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![RatFn::zero(); self.cols];
            v[free] = RatFn::one();
            for &(pr, pc) in &red.pivots {
                v[pc] = -red.mat[pr][free].clone();
            }
            let cleared = clear_denominators(&v);
            debug_assert!(self.mul_vec(&cleared).iter().all(Scalar::is_zero));
            basis.push(cleared);
        }
        basis
    }

    /// Generic rank (parameters treated as transcendentals).
    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<RatFn>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| RatFn::from(self[(r, c)].clone())).collect())
            .collect();
        rref(rows, self.cols).pivots.len()
    }

    /// Solve `self * x = b` over the fraction field. Returns the solution
    /// and the non-constant pivots used (empty when the decision is exact).
    pub fn solve(&self, b: &[Scalar]) -> SolveOutcome {
        assert_eq!(self.rows, b.len(), "dimension mismatch");
        let rows: Vec<Vec<RatFn>> = (0..self.rows)
            .map(|r| {
                let mut row: Vec<RatFn> =
                    (0..self.cols).map(|c| RatFn::from(self[(r, c)].clone())).collect();
                row.push(RatFn::from(b[r].clone()));
                row
            })
            .collect();
        let red = rref(rows, self.cols + 1);
        let generic_pivots = red.generic_pivots.clone();
        // Inconsistent iff a pivot sits in the augmented column.
        if red.pivots.iter().any(|&(_, c)| c == self.cols) {
            return SolveOutcome {
                solution: None,
                generic_pivots,
            };
        }
        let mut x = vec![RatFn::zero(); self.cols];
        for &(pr, pc) in &red.pivots {
            x[pc] = red.mat[pr][self.cols].clone();
        }
        SolveOutcome {
            solution: Some(x),
            generic_pivots,
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Add<&Matrix> for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&Matrix> for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&Matrix> for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                acc += &self[(r, k)] * &rhs[(k, c)];
            }
            acc
        })
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|e| -e)
    }
}

impl Neg for Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        -&self
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of [`Matrix::solve`].
pub struct SolveOutcome {
    pub solution: Option<Vec<RatFn>>,
    /// Non-constant polynomials inverted during elimination. Empty means the
    /// decision holds exactly, not just generically.
    pub generic_pivots: Vec<Scalar>,
}

impl SolveOutcome {
    /// The solution as scalars, when every component is polynomial (in
    /// particular always for rational systems).
    pub fn into_scalars(self) -> Option<Vec<Scalar>> {
        self.solution?.into_iter().map(|r| r.into_scalar()).collect()
    }
}

/// A quotient of polynomials. No gcd machinery: reduction is opportunistic
/// (exact division and rational normalization), which is enough for the
/// small systems that arise here.
#[derive(Clone)]
pub struct RatFn {
    num: Scalar,
    den: Scalar,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            num: Scalar::zero(),
            den: Scalar::one(),
        }
    }

    pub fn one() -> Self {
        RatFn {
            num: Scalar::one(),
            den: Scalar::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Scalar::one();
            return self;
        }
        if let Some(q) = self.den.as_rational() {
            let inv = BigRational::one() / q;
            self.num = self.num.scale(&inv);
            self.den = Scalar::one();
            return self;
        }
        if let Some(q) = self.num.try_exact_div(&self.den) {
            self.num = q;
            self.den = Scalar::one();
            return self;
        }
        // Keep the denominator monic so equal values share a representation
        // more often.
        let lead = self.den.leading_term().unwrap().1.clone();
        let inv = BigRational::one() / lead;
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
        self
    }

    pub fn inv(&self) -> RatFn {
        assert!(!self.is_zero(), "inverting zero");
        RatFn {
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .reduce()
    }

    pub fn mul(&self, rhs: &RatFn) -> RatFn {
        RatFn {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .reduce()
    }

    pub fn sub(&self, rhs: &RatFn) -> RatFn {
        RatFn {
            num: &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .reduce()
    }

    /// The value as a polynomial, when the denominator is trivial.
    pub fn into_scalar(self) -> Option<Scalar> {
        let r = self.reduce();
        if r.den.is_one() {
            Some(r.num)
        } else {
            None
        }
    }

    pub fn num(&self) -> &Scalar {
        &self.num
    }

    pub fn den(&self) -> &Scalar {
        &self.den
    }
}

impl From<Scalar> for RatFn {
    fn from(s: Scalar) -> Self {
        RatFn {
            num: s,
            den: Scalar::one(),
        }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -self.num,
            den: self.den,
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

struct Rref {
    mat: Vec<Vec<RatFn>>,
    /// (row, col) of each pivot, in row order.
    pivots: Vec<(usize, usize)>,
    /// Non-constant polynomials that were inverted.
    generic_pivots: Vec<Scalar>,
}

fn rref(mut rows: Vec<Vec<RatFn>>, ncols: usize) -> Rref {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut generic_pivots: Vec<Scalar> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= nrows {
            break;
        }
        // Prefer a constant pivot so parametric genericity is only invoked
        // when unavoidable.
        let cand = (r..nrows)
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| if rows[i][c].num.is_rational() && rows[i][c].den.is_one() { 0 } else { 1 });
        let Some(pr) = cand else { continue };
        rows.swap(r, pr);
        let piv = rows[r][c].clone();
        if !piv.num.is_rational() {
            let mono = piv.num.monic();
            if !generic_pivots.contains(&mono) {
                generic_pivots.push(mono);
            }
        }
        if !piv.den.is_one() && !piv.den.is_rational() {
            let mono = piv.den.monic();
            if !generic_pivots.contains(&mono) {
                generic_pivots.push(mono);
            }
        }
        let inv = piv.inv();
        for j in 0..ncols {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = rows[r][j].mul(&f);
                    rows[i][j] = rows[i][j].sub(&t);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    Rref {
        mat: rows,
        pivots,
        generic_pivots,
    }
}

/// Turn a vector of rational functions into a polynomial vector by
/// multiplying through by the denominators, then dividing by the rational
/// content and fixing the sign of the leading nonzero component.
fn clear_denominators(v: &[RatFn]) -> Vec<Scalar> {
    let mut dens: Vec<Scalar> = Vec::new();
    for x in v {
        let d = x.clone().reduce().den;
        if !d.is_one() && !dens.contains(&d) {
            dens.push(d);
        }
    }
    let mut common = Scalar::one();
    for d in &dens {
        common = &common * d;
    }
    let mut out: Vec<Scalar> = v
        .iter()
        .map(|x| {
            let x = x.clone().reduce();
            let scaled = &x.num * &common;
            scaled
                .try_exact_div(&x.den)
                .expect("common multiple divisible by each denominator")
        })
        .collect();
    // Normalize by rational content.
    let mut content: Option<BigRational> = None;
    for s in &out {
        for (_, c) in s.terms() {
            content = Some(match content {
                None => c.abs(),
                Some(g) => rational_gcd(&g, c),
            });
        }
    }
    if let Some(g) = content {
        if !g.is_zero() && !g.is_one() {
            let inv = BigRational::one() / g;
            out = out.iter().map(|s| s.scale(&inv)).collect();
        }
    }
    let negate = out
        .iter()
        .find(|s| !s.is_zero())
        .map(|s| s.leading_term().unwrap().1.is_negative())
        .unwrap_or(false);
    if negate {
        out = out.iter().map(|s| -s).collect();
    }
    out
}

fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    let num = num::integer::gcd(a.numer().clone(), b.numer().clone());
    let den = num::integer::lcm(a.denom().clone(), b.denom().clone());
    BigRational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn k() -> Scalar {
        Scalar::param("k")
    }
    fn s() -> Scalar {
        Scalar::param("s")
    }
    fn t() -> Scalar {
        Scalar::param("t")
    }

    /// Independent oracle: determinant by cofactor expansion along the first
    /// row. Exponential, fine for the sizes used in tests.
    fn det_cofactor(m: &Matrix) -> Scalar {
        let n = m.rows();
        if n == 0 {
            return Scalar::one();
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = Scalar::zero();
        for c in 0..n {
            if m[(0, c)].is_zero() {
                continue;
            }
            let minor = Matrix::from_fn(n - 1, n - 1, |i, j| {
                m[(i + 1, if j < c { j } else { j + 1 })].clone()
            });
            let term = &m[(0, c)] * &det_cofactor(&minor);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn det_metric_matrices() {
        // [[k,s],[s,0]] -> -s^2
        let m = Matrix::from_rows(vec![vec![k(), s()], vec![s(), Scalar::zero()]]);
        let expect = det_cofactor(&m);
        assert_eq!(expect, -s().pow(2));
        assert_eq!(m.det().unwrap(), expect);

        // [[0,0,k],[0,k,0],[k,0,t]] -> -k^3
        let m = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::zero(), k()],
            vec![Scalar::zero(), k(), Scalar::zero()],
            vec![k(), Scalar::zero(), t()],
        ]);
        let expect = det_cofactor(&m);
        assert_eq!(expect, -k().pow(3));
        assert_eq!(m.det().unwrap(), expect);

        assert_eq!(Matrix::identity(5).det().unwrap(), Scalar::one());
        assert_eq!(Matrix::zeros(0, 0).det().unwrap(), Scalar::one());
    }

    #[test]
    fn kernel_examples() {
        // [[1,1],[2,2]] -> span{(1,-1)}
        let m = Matrix::from_int_rows(&[&[1, 1], &[2, 2]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], vec![Scalar::one(), Scalar::from_int(-1)]);

        // identity 3x3 -> {}
        assert!(Matrix::identity(3).kernel_basis().is_empty());

        // zero 2x2 -> standard basis
        let ker = Matrix::zeros(2, 2).kernel_basis();
        assert_eq!(ker.len(), 2);
        assert_eq!(ker[0], vec![Scalar::one(), Scalar::zero()]);
        assert_eq!(ker[1], vec![Scalar::zero(), Scalar::one()]);
    }

    #[test]
    fn kernel_parametric_identity() {
        // Parametric rank-1 matrix [[k, k*s]]: kernel is spanned by (s, -1)
        // up to sign/scaling; the defining identity must hold exactly.
        let m = Matrix::from_rows(vec![vec![k(), &k() * &s()]]);
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn solve_and_rank() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let sol = m
            .solve(&[Scalar::from_int(5), Scalar::from_int(11)])
            .into_scalars()
            .unwrap();
        assert_eq!(sol, vec![Scalar::from_int(1), Scalar::from_int(2)]);
        assert_eq!(m.rank(), 2);

        // Inconsistent system
        let m = Matrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(m
            .solve(&[Scalar::from_int(0), Scalar::from_int(1)])
            .solution
            .is_none());
    }

    #[test]
    fn solve_records_generic_pivots() {
        let m = Matrix::from_rows(vec![vec![k()]]);
        let out = m.solve(&[k()]);
        assert!(out.solution.is_some());
        assert_eq!(out.generic_pivots, vec![k()]);
    }

    #[test]
    fn det_multiplicative_on_block_diagonals() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::from_seed([7u8; 32]);
        for _ in 0..50 {
            let n1 = rng.gen_range(1..=4);
            let n2 = rng.gen_range(1..=4);
            let rand_mat = |rng: &mut rand_chacha::ChaCha20Rng, n: usize| {
                Matrix::from_fn(n, n, |_, _| Scalar::from_int(rng.gen_range(-5..=5)))
            };
            let a = rand_mat(&mut rng, n1);
            let b = rand_mat(&mut rng, n2);
            let sum = Matrix::block_diag(&[&a, &b]);
            assert_eq!(
                sum.det().unwrap(),
                &a.det().unwrap() * &b.det().unwrap()
            );
        }
    }
}
