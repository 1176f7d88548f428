//! Novikov algebras given by structure constants, and the basic structural
//! predicates: axiom checking, multiplication operators, subalgebras and
//! ideals, quotients, direct sums and identity elements.

use crate::matrix::Matrix;
use crate::scalar::{nonvanishing_check, ConstraintSet, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// A finite-dimensional algebra given by its structure tensor
/// `c[i][j][k]`: the coefficient of `e_k` in `e_i ∘ e_j`. Whether the two
/// Novikov identities actually hold is decided by [`NovikovAlgebra::check_novikov`].
#[derive(Clone, PartialEq, Eq)]
pub struct NovikovAlgebra {
    basis: Vec<String>,
    /// Flattened `n^3` tensor, index `(i*n + j)*n + k`.
    tensor: Vec<Scalar>,
    params: Vec<String>,
    constraints: ConstraintSet,
}

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("structure tensor has wrong shape: expected {expected} entries, got {got}")]
    MalformedTensor { expected: usize, got: usize },
    #[error("duplicate basis name `{0}`")]
    DuplicateBasisName(String),
    #[error("basis-name collision between summands: `{0}`")]
    BasisNameCollision(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("subspace spanning set is linearly dependent")]
    DependentSpanningSet,
    #[error("membership test is parametric on the constraint locus (pivot `{pivot}`)")]
    ParametricBorderline { pivot: Scalar },
    #[error("`{0}` is not an ideal")]
    NotAnIdeal(String),
    #[error("quotient projection is not polynomial in the parameters; instantiate parameters first")]
    ParametricQuotient,
    #[error("substitution violates constraint `{0} != 0`")]
    ConstraintViolated(Scalar),
}

impl NovikovAlgebra {
    /// Build an algebra from named basis vectors and a sparse product table:
    /// `products[(i, j)]` is the coordinate vector of `e_i ∘ e_j`. Missing
    /// entries are zero.
    pub fn new(
        basis: Vec<String>,
        products: &BTreeMap<(usize, usize), Vec<Scalar>>,
        params: Vec<String>,
        constraints: ConstraintSet,
    ) -> Result<Self, AlgebraError> {
        let n = basis.len();
        for (i, b) in basis.iter().enumerate() {
            if basis[..i].contains(b) {
                return Err(AlgebraError::DuplicateBasisName(b.clone()));
            }
        }
        let mut tensor = vec![Scalar::zero(); n * n * n];
        for (&(i, j), v) in products {
            if i >= n || j >= n || v.len() != n {
                return Err(AlgebraError::MalformedTensor {
                    expected: n,
                    got: v.len(),
                });
            }
            for (k, s) in v.iter().enumerate() {
                tensor[(i * n + j) * n + k] = s.clone();
            }
        }
        Ok(NovikovAlgebra {
            basis,
            tensor,
            params,
            constraints,
        })
    }

    pub fn trivial(dim: usize) -> Self {
        let basis = (1..=dim).map(|i| format!("e{i}")).collect();
        NovikovAlgebra::new(basis, &BTreeMap::new(), vec![], ConstraintSet::new()).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    pub fn is_rational(&self) -> bool {
        self.tensor.iter().all(Scalar::is_rational)
    }

    /// Structure constant `c_{ij}^k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.tensor[(i * n + j) * n + k]
    }

    /// Coordinates of `e_i ∘ e_j`.
    pub fn product_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim()).map(|k| self.c(i, j, k).clone()).collect()
    }

    /// `x ∘ y` by bilinear extension.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        assert!(x.len() == n && y.len() == n, "dimension mismatch");
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out[k] += &f * c;
                    }
                }
            }
        }
        out
    }

    /// The star product `x ⋆ y = x ∘ y + y ∘ x`.
    pub fn star(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.product(x, y)
            .into_iter()
            .zip(self.product(y, x))
            .map(|(a, b)| a + b)
            .collect()
    }

    /// Left multiplication operator of `e_i`: column `j` holds `e_i ∘ e_j`.
    pub fn left_mult(&self, i: usize) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, |r, j| self.c(i, j, r).clone())
    }

    /// Right multiplication operator of `e_i`: column `j` holds `e_j ∘ e_i`.
    pub fn right_mult(&self, i: usize) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, n, |r, j| self.c(j, i, r).clone())
    }

    /// All multiplication operators `(L_1..L_n, R_1..R_n)`.
    pub fn mult_operators(&self) -> (Vec<Matrix>, Vec<Matrix>) {
        let ls = (0..self.dim()).map(|i| self.left_mult(i)).collect();
        let rs = (0..self.dim()).map(|i| self.right_mult(i)).collect();
        (ls, rs)
    }

    /// Left multiplication by an arbitrary vector.
    pub fn left_mult_vec(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                out = &out + &self.left_mult(i).scale(xi);
            }
        }
        out
    }

    pub fn right_mult_vec(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if !xi.is_zero() {
                out = &out + &self.right_mult(i).scale(xi);
            }
        }
        out
    }

    /// Check the two Novikov identities on all basis triples. Empty report
    /// means both hold identically.
    pub fn check_novikov(&self) -> NovikovReport {
        let n = self.dim();
        let mut violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let ei = unit(n, i);
                let ej = unit(n, j);
                let eij = self.product(&ei, &ej);
                let eji = self.product(&ej, &ei);
                for k in 0..n {
                    let ek = unit(n, k);
                    let jk = self.product(&ej, &ek);
                    let ik = self.product(&ei, &ek);
                    // (a∘b)∘c − a∘(b∘c) − (b∘a)∘c + b∘(a∘c)
                    let p1 = self.product(&eij, &ek);
                    let p2 = self.product(&ei, &jk);
                    let p3 = self.product(&eji, &ek);
                    let p4 = self.product(&ej, &ik);
                    let ls: Vec<Scalar> = (0..n)
                        .map(|t| &(&p1[t] - &p2[t]) - &(&p3[t] - &p4[t]))
                        .collect();
                    if ls.iter().any(|s| !s.is_zero()) {
                        violations.push(AxiomViolation {
                            axiom: NovikovAxiom::LeftSymmetry,
                            triple: (i, j, k),
                            residual: ls,
                        });
                    }
                    // (a∘b)∘c − (a∘c)∘b
                    let rc: Vec<Scalar> = p1
                        .iter()
                        .zip(self.product(&ik, &ej))
                        .map(|(a, b)| a - &b)
                        .collect();
                    if rc.iter().any(|s| !s.is_zero()) {
                        violations.push(AxiomViolation {
                            axiom: NovikovAxiom::RightCommutativity,
                            triple: (i, j, k),
                            residual: rc,
                        });
                    }
                }
            }
        }
        NovikovReport { violations }
    }

    /// Classify a subspace as not a subalgebra, a subalgebra, or an ideal.
    ///
    /// Membership decisions under parameters use generic rank; when a
    /// decision depends on a pivot that can vanish on the constraint locus,
    /// the borderline is reported as an error rather than silently decided.
    pub fn subspace_kind(&self, s: &Subspace) -> Result<SubspaceKind, AlgebraError> {
        if s.ambient() != self.dim() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "subspace ambient {} vs algebra dim {}",
                s.ambient(),
                self.dim()
            )));
        }
        if s.basis().rank() != s.dim() {
            return Err(AlgebraError::DependentSpanningSet);
        }
        let cols: Vec<Vec<Scalar>> = (0..s.dim()).map(|c| s.basis().col(c)).collect();
        let full: Vec<Vec<Scalar>> = (0..self.dim()).map(|i| unit(self.dim(), i)).collect();
        let in_span = |v: &[Scalar]| -> Result<bool, AlgebraError> {
            if v.iter().all(Scalar::is_zero) {
                return Ok(true);
            }
            let out = s.basis().solve(v);
            for piv in &out.generic_pivots {
                let nv = nonvanishing_check(piv, &self.constraints);
                if !(nv.is_nonzero() && nv.certified) {
                    return Err(AlgebraError::ParametricBorderline { pivot: piv.clone() });
                }
            }
            Ok(out.solution.is_some())
        };
        let mut subalgebra = true;
        for a in &cols {
            for b in &cols {
                if !in_span(&self.product(a, b))? {
                    subalgebra = false;
                }
            }
        }
        if !subalgebra {
            return Ok(SubspaceKind::NotSubalgebra);
        }
        let mut ideal = true;
        'outer: for a in &full {
            for b in &cols {
                if !in_span(&self.product(a, b))? || !in_span(&self.product(b, a))? {
                    ideal = false;
                    break 'outer;
                }
            }
        }
        Ok(if ideal {
            SubspaceKind::Ideal
        } else {
            SubspaceKind::Subalgebra
        })
    }

    /// Quotient by an ideal, on the greedy standard-basis complement.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient, AlgebraError> {
        match self.subspace_kind(ideal)? {
            SubspaceKind::Ideal => {}
            _ => return Err(AlgebraError::NotAnIdeal("quotient".into())),
        }
        let n = self.dim();
        let d = ideal.dim();
        // Greedy complement: standard basis vectors independent of the ideal.
        let mut complement: Vec<usize> = Vec::new();
        let mut span_cols: Vec<Vec<Scalar>> = (0..d).map(|c| ideal.basis().col(c)).collect();
        for i in 0..n {
            if span_cols.len() == n {
                break;
            }
            let cand = unit(n, i);
            let mut test = span_cols.clone();
            test.push(cand.clone());
            if Matrix::from_col_slice(n, &test).rank() == test.len() {
                span_cols.push(cand);
                complement.push(i);
            }
        }
        let q = complement.len();
        debug_assert_eq!(q, n - d);
        // Change of basis P = [ideal basis | complement]; quotient coords of
        // v are the last q coordinates of P^{-1} v.
        let p = Matrix::from_col_slice(n, &span_cols);
        let mut proj = Matrix::zeros(q, n);
        for i in 0..n {
            let coords = p
                .solve(&unit(n, i))
                .into_scalars()
                .ok_or(AlgebraError::ParametricQuotient)?;
            for r in 0..q {
                proj[(r, i)] = coords[d + r].clone();
            }
        }
        let mut products = BTreeMap::new();
        for a in 0..q {
            for b in 0..q {
                let prod = self.product(&unit(n, complement[a]), &unit(n, complement[b]));
                let v = proj.mul_vec(&prod);
                if v.iter().any(|s| !s.is_zero()) {
                    products.insert((a, b), v);
                }
            }
        }
        let basis = complement
            .iter()
            .map(|&i| format!("{}~", self.basis[i]))
            .collect();
        let algebra = NovikovAlgebra::new(
            basis,
            &products,
            self.params.clone(),
            self.constraints.clone(),
        )?;
        // The projection must be an algebra homomorphism.
        debug_assert!({
            let mut ok = true;
            for i in 0..n {
                for j in 0..n {
                    let lhs = proj.mul_vec(&self.product(&unit(n, i), &unit(n, j)));
                    let rhs = algebra.product(&proj.col(i), &proj.col(j));
                    ok &= lhs == rhs;
                }
            }
            ok
        });
        Ok(Quotient {
            algebra,
            projection: proj,
            complement,
        })
    }

    /// Direct sum with block structure tensor. Basis names must be disjoint.
    pub fn direct_sum(&self, other: &NovikovAlgebra) -> Result<NovikovAlgebra, AlgebraError> {
        for b in other.basis_names() {
            if self.basis.contains(b) {
                return Err(AlgebraError::BasisNameCollision(b.clone()));
            }
        }
        let n1 = self.dim();
        let n = n1 + other.dim();
        let mut products = BTreeMap::new();
        let embed = |v: &[Scalar], off: usize| -> Vec<Scalar> {
            let mut out = vec![Scalar::zero(); n];
            for (i, s) in v.iter().enumerate() {
                out[off + i] = s.clone();
            }
            out
        };
        for i in 0..n1 {
            for j in 0..n1 {
                let v = self.product_basis(i, j);
                if v.iter().any(|s| !s.is_zero()) {
                    products.insert((i, j), embed(&v, 0));
                }
            }
        }
        for i in 0..other.dim() {
            for j in 0..other.dim() {
                let v = other.product_basis(i, j);
                if v.iter().any(|s| !s.is_zero()) {
                    products.insert((n1 + i, n1 + j), embed(&v, n1));
                }
            }
        }
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        let mut params = self.params.clone();
        for p in &other.params {
            if !params.contains(p) {
                params.push(p.clone());
            }
        }
        NovikovAlgebra::new(
            basis,
            &products,
            params,
            self.constraints.union(&other.constraints),
        )
    }

    /// Rename the basis, e.g. to avoid collisions before a direct sum.
    pub fn with_basis_names(&self, names: Vec<String>) -> Result<NovikovAlgebra, AlgebraError> {
        if names.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} names for dimension {}",
                names.len(),
                self.dim()
            )));
        }
        let mut out = self.clone();
        out.basis = names;
        for (i, b) in out.basis.iter().enumerate() {
            if out.basis[..i].contains(b) {
                return Err(AlgebraError::DuplicateBasisName(b.clone()));
            }
        }
        Ok(out)
    }

    /// Substitute parameters in the structure constants. Errors when the
    /// substitution kills a constraint polynomial.
    pub fn instantiate(
        &self,
        bind: &BTreeMap<String, Scalar>,
    ) -> Result<NovikovAlgebra, AlgebraError> {
        let constraints = self
            .constraints
            .substitute(bind)
            .map_err(AlgebraError::ConstraintViolated)?;
        let params = self
            .params
            .iter()
            .filter(|p| !bind.contains_key(*p))
            .cloned()
            .collect();
        Ok(NovikovAlgebra {
            basis: self.basis.clone(),
            tensor: self.tensor.iter().map(|s| s.substitute(bind)).collect(),
            params,
            constraints,
        })
    }

    /// An element `e` with `e ∘ x = x ∘ e = x` for all `x`, if one exists;
    /// solved as an exact linear system over the basis coordinates. For
    /// parametric algebras only identities with polynomial coordinates are
    /// found; instantiate parameters first when coordinates may involve
    /// quotients of parameters.
    pub fn find_identity(&self) -> Option<Vec<Scalar>> {
        let n = self.dim();
        if n == 0 {
            return None;
        }
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..n {
            for k in 0..n {
                // (u ∘ e_j)_k = sum_i u_i c_{ij}^k
                rows.push((0..n).map(|i| self.c(i, j, k).clone()).collect());
                rhs.push(if j == k { Scalar::one() } else { Scalar::zero() });
                // (e_j ∘ u)_k = sum_i u_i c_{ji}^k
                rows.push((0..n).map(|i| self.c(j, i, k).clone()).collect());
                rhs.push(if j == k { Scalar::one() } else { Scalar::zero() });
            }
        }
        Matrix::from_rows(rows).solve(&rhs).into_scalars()
    }
}

impl fmt::Debug for NovikovAlgebra {
    /// Renders the characteristic matrix: row `i`, column `j` holds `e_i ∘ e_j`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "NovikovAlgebra dim {} [", self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| format_linear(&self.product_basis(i, j), &self.basis))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Format a coordinate vector as a linear combination of named basis vectors.
pub fn format_linear(v: &[Scalar], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, s) in v.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        if s.is_one() {
            parts.push(names[i].clone());
        } else if (-s).is_one() {
            parts.push(format!("-{}", names[i]));
        } else if s.num_terms() > 1 {
            parts.push(format!("({})*{}", s, names[i]));
        } else {
            parts.push(format!("{}*{}", s, names[i]));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Standard basis vector.
pub fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NovikovAxiom {
    LeftSymmetry,
    RightCommutativity,
}

impl fmt::Display for NovikovAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NovikovAxiom::LeftSymmetry => write!(f, "left-symmetry"),
            NovikovAxiom::RightCommutativity => write!(f, "right-commutativity"),
        }
    }
}

/// A nonzero axiom residual at a basis triple, as a coefficient vector.
#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub axiom: NovikovAxiom,
    pub triple: (usize, usize, usize),
    pub residual: Vec<Scalar>,
}

#[derive(Debug, Clone, Default)]
pub struct NovikovReport {
    pub violations: Vec<AxiomViolation>,
}

impl NovikovReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceKind {
    NotSubalgebra,
    Subalgebra,
    Ideal,
}

/// A subspace of an ambient coordinate space, spanned by the columns of a
/// basis matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn new(basis: Matrix) -> Self {
        Subspace { basis }
    }

    pub fn from_vectors(ambient: usize, vecs: &[Vec<Scalar>]) -> Self {
        Subspace {
            basis: Matrix::from_col_slice(ambient, vecs),
        }
    }

    /// Span of a set of standard basis vectors.
    pub fn from_indices(ambient: usize, idx: &[usize]) -> Self {
        let cols: Vec<Vec<Scalar>> = idx.iter().map(|&i| unit(ambient, i)).collect();
        Subspace::from_vectors(ambient, &cols)
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            basis: Matrix::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        v.iter().all(Scalar::is_zero) || self.basis.solve(v).solution.is_some()
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient(), other.ambient());
        let mut cols: Vec<Vec<Scalar>> = (0..self.dim()).map(|c| self.basis.col(c)).collect();
        for c in 0..other.dim() {
            let cand = other.basis.col(c);
            let mut test = cols.clone();
            test.push(cand.clone());
            if Matrix::from_col_slice(self.ambient(), &test).rank() == test.len() {
                cols.push(cand);
            }
        }
        Subspace::from_vectors(self.ambient(), &cols)
    }

    /// Canonical basis: reduced row echelon form of the row space, returned
    /// as columns. Two subspaces are equal iff their canonical bases agree.
    pub fn canonical(&self) -> Matrix {
        let rows: Vec<Vec<Scalar>> = (0..self.dim()).map(|c| self.basis.col(c)).collect();
        if rows.is_empty() {
            return Matrix::zeros(self.ambient(), 0);
        }
        let m = Matrix::from_rows(rows);
        let mut mat: Vec<Vec<crate::matrix::RatFn>> = (0..m.rows())
            .map(|r| {
                (0..m.cols())
                    .map(|c| crate::matrix::RatFn::from(m[(r, c)].clone()))
                    .collect()
            })
            .collect();
        let (rows_n, cols_n) = (mat.len(), m.cols());
        let mut r = 0;
        for c in 0..cols_n {
            if r >= rows_n {
                break;
            }
            let Some(pr) = (r..rows_n).find(|&i| !mat[i][c].is_zero()) else {
                continue;
            };
            mat.swap(r, pr);
            let inv = mat[r][c].inv();
            for j in 0..cols_n {
                mat[r][j] = mat[r][j].mul(&inv);
            }
            for i in 0..rows_n {
                if i != r && !mat[i][c].is_zero() {
                    let f = mat[i][c].clone();
                    for j in 0..cols_n {
                        let t = mat[r][j].mul(&f);
                        mat[i][j] = mat[i][j].sub(&t);
                    }
                }
            }
            r += 1;
        }
        let vecs: Vec<Vec<Scalar>> = (0..r)
            .map(|i| {
                (0..cols_n)
                    .map(|j| {
                        mat[i][j]
                            .clone()
                            .into_scalar()
                            .expect("rref entries stay polynomial over a field")
                    })
                    .collect()
            })
            .collect();
        Matrix::from_col_slice(self.ambient(), &vecs)
    }

    pub fn eq_space(&self, other: &Subspace) -> bool {
        self.ambient() == other.ambient() && self.canonical() == other.canonical()
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}):\n{}",
            self.dim(),
            self.ambient(),
            self.basis
        )
    }
}

/// Result of [`NovikovAlgebra::quotient`].
pub struct Quotient {
    pub algebra: NovikovAlgebra,
    /// Quotient coordinates of each ambient basis vector (q x n).
    pub projection: Matrix,
    /// Indices of the standard basis vectors chosen as the complement.
    pub complement: Vec<usize>,
}

#[cfg(test)]
pub(crate) mod test_algebras {
    use super::*;

    /// The 2-dimensional algebra of the dimension-2 classification:
    /// e1∘e2 = e1, e2∘e1 = -2 e1, e2∘e2 = e2 ((N6) at l = -2).
    pub fn thm34() -> NovikovAlgebra {
        let mut p = BTreeMap::new();
        p.insert((0, 1), vec![Scalar::one(), Scalar::zero()]);
        p.insert((1, 0), vec![Scalar::from_int(-2), Scalar::zero()]);
        p.insert((1, 1), vec![Scalar::zero(), Scalar::one()]);
        NovikovAlgebra::new(
            vec!["e1".into(), "e2".into()],
            &p,
            vec![],
            ConstraintSet::new(),
        )
        .unwrap()
    }

    /// Table 2 row (A7): e2∘e3 = e1, e3∘e2 = -2 e1, e3∘e3 = e2.
    pub fn table2_a7() -> NovikovAlgebra {
        let mut p = BTreeMap::new();
        p.insert((1, 2), vec![Scalar::one(), Scalar::zero(), Scalar::zero()]);
        p.insert(
            (2, 1),
            vec![Scalar::from_int(-2), Scalar::zero(), Scalar::zero()],
        );
        p.insert((2, 2), vec![Scalar::zero(), Scalar::one(), Scalar::zero()]);
        NovikovAlgebra::new(
            vec!["e1".into(), "e2".into(), "e3".into()],
            &p,
            vec![],
            ConstraintSet::new(),
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_algebras::{table2_a7, thm34};
    use super::*;

    #[test]
    fn check_novikov_passes_for_table_entries() {
        assert!(thm34().check_novikov().passed());
        assert!(NovikovAlgebra::trivial(3).check_novikov().passed());
        assert!(table2_a7().check_novikov().passed());
    }

    #[test]
    fn check_novikov_reports_failing_triple() {
        // e1∘e2 = e1, e2∘e1 = e2: left-symmetry fails at (e1, e2, e1) with
        // residual -e1 - e2.
        let mut p = BTreeMap::new();
        p.insert((0, 1), vec![Scalar::one(), Scalar::zero()]);
        p.insert((1, 0), vec![Scalar::zero(), Scalar::one()]);
        let a = NovikovAlgebra::new(
            vec!["e1".into(), "e2".into()],
            &p,
            vec![],
            ConstraintSet::new(),
        )
        .unwrap();
        let report = a.check_novikov();
        assert!(!report.passed());
        let v = report
            .violations
            .iter()
            .find(|v| v.axiom == NovikovAxiom::LeftSymmetry && v.triple == (0, 1, 0))
            .expect("expected left-symmetry violation at (e1,e2,e1)");
        assert_eq!(v.residual, vec![Scalar::from_int(-1), Scalar::from_int(-1)]);
    }

    #[test]
    fn star_products() {
        let a = thm34();
        // e1 ⋆ e2 = e1 + (-2 e1) = -e1
        let st = a.star(&unit(2, 0), &unit(2, 1));
        assert_eq!(st, vec![Scalar::from_int(-1), Scalar::zero()]);
        let t = NovikovAlgebra::trivial(2);
        assert!(t.star(&unit(2, 0), &unit(2, 1)).iter().all(Scalar::is_zero));
        // Table 2 (A7): e2 ⋆ e3 = e1 - 2 e1 = -e1
        let a7 = table2_a7();
        let st = a7.star(&unit(3, 1), &unit(3, 2));
        assert_eq!(
            st,
            vec![Scalar::from_int(-1), Scalar::zero(), Scalar::zero()]
        );
    }

    #[test]
    fn mult_operators_examples() {
        let a = thm34();
        assert_eq!(a.left_mult(1), Matrix::from_int_rows(&[&[-2, 0], &[0, 1]]));
        let t = NovikovAlgebra::trivial(2);
        assert!(t.left_mult(0).is_zero() && t.right_mult(1).is_zero());
        // (A7): L(e3) e2 = -2 e1
        let a7 = table2_a7();
        assert_eq!(
            a7.left_mult(2).col(1),
            vec![Scalar::from_int(-2), Scalar::zero(), Scalar::zero()]
        );
        // (A7): r(e2) e3 = e3 ∘ e2 = -2 e1
        assert_eq!(
            a7.right_mult(1).col(2),
            vec![Scalar::from_int(-2), Scalar::zero(), Scalar::zero()]
        );
    }

    #[test]
    fn subspace_kinds_on_a7() {
        let a7 = table2_a7();
        let e1 = Subspace::from_indices(3, &[0]);
        assert_eq!(a7.subspace_kind(&e1).unwrap(), SubspaceKind::Ideal);
        // span{e2}: e2∘e2 = 0 in span, but e3∘e2 = -2 e1 not in span.
        let e2 = Subspace::from_indices(3, &[1]);
        assert_eq!(a7.subspace_kind(&e2).unwrap(), SubspaceKind::Subalgebra);
        assert_eq!(
            a7.subspace_kind(&Subspace::full(3)).unwrap(),
            SubspaceKind::Ideal
        );
        assert_eq!(
            a7.subspace_kind(&Subspace::zero(3)).unwrap(),
            SubspaceKind::Ideal
        );
    }

    #[test]
    fn quotient_a7_by_e1() {
        let a7 = table2_a7();
        let q = a7.quotient(&Subspace::from_indices(3, &[0])).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        assert!(q.algebra.check_novikov().passed());
        // Complement is (e2, e3); only surviving product: ē3 ∘ ē3 = ē2.
        assert_eq!(q.complement, vec![1, 2]);
        for i in 0..2 {
            for j in 0..2 {
                let v = q.algebra.product_basis(i, j);
                if (i, j) == (1, 1) {
                    assert_eq!(v, vec![Scalar::one(), Scalar::zero()]);
                } else {
                    assert!(v.iter().all(Scalar::is_zero));
                }
            }
        }
    }

    #[test]
    fn quotient_degenerate_cases() {
        let a = thm34();
        let q = a.quotient(&Subspace::full(2)).unwrap();
        assert_eq!(q.algebra.dim(), 0);
        assert!(q.algebra.check_novikov().passed());
        let q = a.quotient(&Subspace::zero(2)).unwrap();
        assert_eq!(q.algebra.dim(), 2);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(q.algebra.product_basis(i, j), a.product_basis(i, j));
            }
        }
    }

    #[test]
    fn direct_sum_blocks_are_ideals() {
        let a = thm34();
        let b = thm34()
            .with_basis_names(vec!["f1".into(), "f2".into()])
            .unwrap();
        let sum = a.direct_sum(&b).unwrap();
        assert_eq!(sum.dim(), 4);
        assert!(sum.check_novikov().passed());
        let block1 = Subspace::from_indices(4, &[0, 1]);
        let block2 = Subspace::from_indices(4, &[2, 3]);
        assert_eq!(sum.subspace_kind(&block1).unwrap(), SubspaceKind::Ideal);
        assert_eq!(sum.subspace_kind(&block2).unwrap(), SubspaceKind::Ideal);
        assert!(matches!(
            a.direct_sum(&thm34()),
            Err(AlgebraError::BasisNameCollision(_))
        ));
        let zero = NovikovAlgebra::trivial(0);
        let same = a.direct_sum(&zero).unwrap();
        assert_eq!(same.dim(), 2);
        // Trivial ⊕ trivial = trivial.
        let t1 = NovikovAlgebra::trivial(1);
        let t1b = t1.with_basis_names(vec!["f1".into()]).unwrap();
        let t2 = t1.direct_sum(&t1b).unwrap();
        assert_eq!(t2.dim(), 2);
        assert!((0..2).all(|i| (0..2).all(|j| t2
            .product_basis(i, j)
            .iter()
            .all(Scalar::is_zero))));
    }

    #[test]
    fn identities() {
        // (N3): e1∘e1 = e1, e1∘e2 = e2, e2∘e1 = e2 has identity e1.
        let mut p = BTreeMap::new();
        p.insert((0, 0), vec![Scalar::one(), Scalar::zero()]);
        p.insert((0, 1), vec![Scalar::zero(), Scalar::one()]);
        p.insert((1, 0), vec![Scalar::zero(), Scalar::one()]);
        let n3 = NovikovAlgebra::new(
            vec!["e1".into(), "e2".into()],
            &p,
            vec![],
            ConstraintSet::new(),
        )
        .unwrap();
        assert_eq!(n3.find_identity().unwrap(), unit(2, 0));
        assert!(NovikovAlgebra::trivial(2).find_identity().is_none());
        assert!(thm34().find_identity().is_none());
    }
}
