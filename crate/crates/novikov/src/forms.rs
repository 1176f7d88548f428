//! Symmetric bilinear forms, the invariance equation
//! `B(a∘b, c) + B(b, a⋆c) = 0`, the solved space of invariant forms,
//! quadratic-structure validation, and the quasi-Frobenius constructions
//! from derivations.

use crate::algebra::{unit, NovikovAlgebra};
use crate::matrix::Matrix;
use crate::scalar::{nonvanishing_check, ConstraintSet, NonvanishingOutcome, Scalar, Verdict};
use std::collections::BTreeMap;

/// A symmetric bilinear form given by its metric matrix `b_ij = B(e_i, e_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymBilinearForm {
    matrix: Matrix,
}

#[derive(Debug, thiserror::Error)]
pub enum FormError {
    #[error("metric matrix must be square and symmetric")]
    NotSymmetric,
    #[error("matrix must be square and antisymmetric")]
    NotAntisymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl SymBilinearForm {
    pub fn new(matrix: Matrix) -> Result<Self, FormError> {
        if !matrix.is_symmetric() {
            return Err(FormError::NotSymmetric);
        }
        Ok(SymBilinearForm { matrix })
    }

    pub fn zero(n: usize) -> Self {
        SymBilinearForm {
            matrix: Matrix::zeros(n, n),
        }
    }

    /// Build from a sparse entry list; `(i, j, s)` sets both `b_ij` and `b_ji`.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut m = Matrix::zeros(n, n);
        for (i, j, s) in entries {
            m[(i, j)] = s.clone();
            m[(j, i)] = s;
        }
        SymBilinearForm { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[(i, j)]
    }

    /// `B(x, y)` by bilinear extension.
    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let n = self.dim();
        assert!(x.len() == n && y.len() == n, "dimension mismatch");
        let mut acc = Scalar::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let b = &self.matrix[(i, j)];
                if !b.is_zero() && !y[j].is_zero() {
                    acc += &(&x[i] * &y[j]) * b;
                }
            }
        }
        acc
    }

    pub fn det(&self) -> Scalar {
        self.matrix.det().expect("metric matrix is square")
    }

    pub fn substitute(&self, bind: &BTreeMap<String, Scalar>) -> SymBilinearForm {
        SymBilinearForm {
            matrix: self.matrix.substitute(bind),
        }
    }

    pub fn scale(&self, s: &Scalar) -> SymBilinearForm {
        SymBilinearForm {
            matrix: self.matrix.scale(s),
        }
    }

    pub fn add(&self, other: &SymBilinearForm) -> SymBilinearForm {
        SymBilinearForm {
            matrix: &self.matrix + &other.matrix,
        }
    }
}

/// A nonzero invariance residual: entry `(i, j, k)` is
/// `B(e_i∘e_j, e_k) + B(e_j, e_i⋆e_k)`.
#[derive(Debug, Clone)]
pub struct InvarianceViolation {
    pub triple: (usize, usize, usize),
    pub residual: Scalar,
}

/// Evaluate the invariance residual tensor on all basis triples; an empty
/// list means the form is invariant.
pub fn invariance_residual(
    algebra: &NovikovAlgebra,
    form: &SymBilinearForm,
) -> Result<Vec<InvarianceViolation>, FormError> {
    let n = algebra.dim();
    if form.dim() != n {
        return Err(FormError::DimensionMismatch(format!(
            "form dim {} vs algebra dim {}",
            form.dim(),
            n
        )));
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let prod = algebra.product_basis(i, j);
            for k in 0..n {
                let star = algebra.star(&unit(n, i), &unit(n, k));
                let r = &form.apply(&prod, &unit(n, k)) + &form.apply(&unit(n, j), &star);
                if !r.is_zero() {
                    out.push(InvarianceViolation {
                        triple: (i, j, k),
                        residual: r,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Solve for all symmetric invariant bilinear forms of `algebra`: the kernel
/// of the linear system in the `n(n+1)/2` unknowns `b_ij` (i <= j) given by
/// the invariance residuals. Parameters of the algebra are treated
/// generically.
pub fn invariant_form_space(algebra: &NovikovAlgebra) -> Vec<SymBilinearForm> {
    let n = algebra.dim();
    let unknowns: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .collect();
    if unknowns.is_empty() {
        return Vec::new();
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let prod = algebra.product_basis(a, b);
            for c in 0..n {
                let star = algebra.star(&unit(n, a), &unit(n, c));
                let mut row = vec![Scalar::zero(); unknowns.len()];
                for (u, &(p, q)) in unknowns.iter().enumerate() {
                    // Coefficient of b_pq (= b_qp) in the residual
                    // B(prod, e_c) + B(e_b, star).
                    let mut coeff = Scalar::zero();
                    if q == c {
                        coeff += prod[p].clone();
                    }
                    if p == c && p != q {
                        coeff += prod[q].clone();
                    }
                    if p == b {
                        coeff += star[q].clone();
                    }
                    if q == b && p != q {
                        coeff += star[p].clone();
                    }
                    row[u] = coeff;
                }
                if row.iter().any(|s| !s.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::zeros(1, unknowns.len()).kernel_basis()
    } else {
        Matrix::from_rows(rows).kernel_basis()
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut m = Matrix::zeros(n, n);
            for (u, &(p, q)) in unknowns.iter().enumerate() {
                m[(p, q)] = v[u].clone();
                m[(q, p)] = v[u].clone();
            }
            SymBilinearForm { matrix: m }
        })
        .collect()
}

/// A parametric family of symmetric forms on an `ambient`-dimensional space:
/// the linear combination of basis forms with named parameters.
#[derive(Debug, Clone)]
pub struct FormFamily {
    pub ambient: usize,
    pub basis: Vec<SymBilinearForm>,
    pub params: Vec<String>,
}

impl FormFamily {
    /// Attach fresh parameter names `c0, c1, ...` to a basis of forms.
    pub fn with_fresh_params(ambient: usize, basis: Vec<SymBilinearForm>) -> Self {
        let params = (0..basis.len()).map(|i| format!("c{i}")).collect();
        FormFamily::with_params(ambient, basis, params)
    }

    pub fn with_params(ambient: usize, basis: Vec<SymBilinearForm>, params: Vec<String>) -> Self {
        assert_eq!(basis.len(), params.len());
        assert!(basis.iter().all(|f| f.dim() == ambient));
        FormFamily {
            ambient,
            basis,
            params,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The general member `sum_i params_i * basis_i`.
    pub fn general_member(&self) -> SymBilinearForm {
        let mut acc = SymBilinearForm::zero(self.ambient);
        for (f, p) in self.basis.iter().zip(&self.params) {
            acc = acc.add(&f.scale(&Scalar::param(p)));
        }
        acc
    }

    pub fn member(&self, coeffs: &[Scalar]) -> SymBilinearForm {
        assert_eq!(coeffs.len(), self.basis.len());
        let mut acc = SymBilinearForm::zero(self.ambient);
        for (f, c) in self.basis.iter().zip(coeffs) {
            acc = acc.add(&f.scale(c));
        }
        acc
    }
}

/// Determinant of the general member of a family, with the nonvanishing
/// verdict under the stated constraints.
pub fn nondegeneracy_condition(
    family: &FormFamily,
    constraints: &ConstraintSet,
) -> (Scalar, NonvanishingOutcome) {
    let det = family.general_member().det();
    let outcome = nonvanishing_check(&det, constraints);
    (det, outcome)
}

/// A validated quadratic Novikov algebra: Novikov axioms, symmetry,
/// invariance, and nondegeneracy (under the algebra's constraint set).
#[derive(Debug, Clone)]
pub struct QuadraticNovikov {
    algebra: NovikovAlgebra,
    form: SymBilinearForm,
    nondegeneracy: NonvanishingOutcome,
}

/// Which of the quadratic requirements failed, with witnesses.
#[derive(Debug, Clone, Default)]
pub struct QuadraticFailure {
    pub not_novikov: Vec<(String, (usize, usize, usize))>,
    pub not_symmetric: bool,
    /// First violated invariance triples (at most 5).
    pub invariance_witnesses: Vec<InvarianceViolation>,
    pub degenerate: Option<NonvanishingOutcome>,
    pub shape_mismatch: Option<String>,
}

impl QuadraticFailure {
    fn is_failure(&self) -> bool {
        !self.not_novikov.is_empty()
            || self.not_symmetric
            || !self.invariance_witnesses.is_empty()
            || self.degenerate.is_some()
            || self.shape_mismatch.is_some()
    }
}

impl std::fmt::Display for QuadraticFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if let Some(s) = &self.shape_mismatch {
            parts.push(s.clone());
        }
        if !self.not_novikov.is_empty() {
            parts.push(format!("novikov axioms fail at {:?}", self.not_novikov));
        }
        if self.not_symmetric {
            parts.push("metric not symmetric".into());
        }
        if !self.invariance_witnesses.is_empty() {
            let w: Vec<String> = self
                .invariance_witnesses
                .iter()
                .map(|v| format!("{:?} -> {}", v.triple, v.residual))
                .collect();
            parts.push(format!("invariance fails at {}", w.join(", ")));
        }
        if let Some(d) = &self.degenerate {
            parts.push(format!("metric determinant verdict {}", d.verdict));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Validate `(algebra, form)` as a quadratic Novikov algebra.
pub fn check_quadratic(
    algebra: &NovikovAlgebra,
    form: &SymBilinearForm,
) -> Result<QuadraticNovikov, Box<QuadraticFailure>> {
    let mut fail = QuadraticFailure::default();
    if form.dim() != algebra.dim() {
        fail.shape_mismatch = Some(format!(
            "form dim {} vs algebra dim {}",
            form.dim(),
            algebra.dim()
        ));
        return Err(Box::new(fail));
    }
    for v in algebra.check_novikov().violations {
        if fail.not_novikov.len() < 5 {
            fail.not_novikov.push((v.axiom.to_string(), v.triple));
        }
    }
    if !form.matrix().is_symmetric() {
        fail.not_symmetric = true;
    }
    fail.invariance_witnesses = invariance_residual(algebra, form)
        .expect("shape checked above")
        .into_iter()
        .take(5)
        .collect();
    let nondeg = nonvanishing_check(&form.det(), algebra.constraints());
    if nondeg.verdict != Verdict::GenericallyNonzero {
        fail.degenerate = Some(nondeg.clone());
    }
    if fail.is_failure() {
        return Err(Box::new(fail));
    }
    Ok(QuadraticNovikov {
        algebra: algebra.clone(),
        form: form.clone(),
        nondegeneracy: nondeg,
    })
}

impl QuadraticNovikov {
    pub fn algebra(&self) -> &NovikovAlgebra {
        &self.algebra
    }

    pub fn form(&self) -> &SymBilinearForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn nondegeneracy(&self) -> &NonvanishingOutcome {
        &self.nondegeneracy
    }

    /// True when both the structure constants and the metric are
    /// parameter-free.
    pub fn is_rational(&self) -> bool {
        self.algebra.is_rational() && self.form.matrix().is_rational()
    }

    pub fn instantiate(
        &self,
        bind: &BTreeMap<String, Scalar>,
    ) -> Result<QuadraticNovikov, Box<QuadraticFailure>> {
        let algebra = self.algebra.instantiate(bind).map_err(|e| {
            Box::new(QuadraticFailure {
                shape_mismatch: Some(e.to_string()),
                ..Default::default()
            })
        })?;
        check_quadratic(&algebra, &self.form.substitute(bind))
    }
}

/// Outcome of checking a candidate isomorphism of quadratic Novikov
/// algebras.
#[derive(Debug, Clone)]
pub struct IsoReport {
    pub invertible: bool,
    /// First basis pairs where `m(a∘b) ≠ m(a)∘m(b)` (at most 5).
    pub multiplicative_witnesses: Vec<(usize, usize)>,
    /// First basis pairs where `B₁(a,b) ≠ B₂(m a, m b)` (at most 5).
    pub isometric_witnesses: Vec<(usize, usize)>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.invertible
            && self.multiplicative_witnesses.is_empty()
            && self.isometric_witnesses.is_empty()
    }
}

/// Check whether the matrix `m` (columns = images of the source basis) is an
/// isomorphism of quadratic Novikov algebras from `q1` to `q2`: invertible,
/// multiplicative and isometric.
pub fn is_isomorphism(q1: &QuadraticNovikov, q2: &QuadraticNovikov, m: &Matrix) -> IsoReport {
    let n = q1.dim();
    let mut report = IsoReport {
        invertible: false,
        multiplicative_witnesses: Vec::new(),
        isometric_witnesses: Vec::new(),
    };
    if q2.dim() != n || m.rows() != n || m.cols() != n {
        return report;
    }
    report.invertible = nonvanishing_check(
        &m.det().expect("square"),
        &q1.algebra().constraints().union(q2.algebra().constraints()),
    )
    .is_nonzero();
    for i in 0..n {
        for j in 0..n {
            let lhs = m.mul_vec(&q1.algebra().product_basis(i, j));
            let rhs = q2.algebra().product(&m.col(i), &m.col(j));
            if lhs != rhs && report.multiplicative_witnesses.len() < 5 {
                report.multiplicative_witnesses.push((i, j));
            }
            let b1 = q1.form().entry(i, j);
            let b2 = q2.form().apply(&m.col(i), &m.col(j));
            if *b1 != b2 && report.isometric_witnesses.len() < 5 {
                report.isometric_witnesses.push((i, j));
            }
        }
    }
    report
}

/// A skew-symmetric bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewForm {
    matrix: Matrix,
}

impl SkewForm {
    pub fn new(matrix: Matrix) -> Result<Self, FormError> {
        if !matrix.is_antisymmetric() {
            return Err(FormError::NotAntisymmetric);
        }
        Ok(SkewForm { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let n = self.matrix.rows();
        let mut acc = Scalar::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                let w = &self.matrix[(i, j)];
                if !w.is_zero() && !y[j].is_zero() {
                    acc += &(&x[i] * &y[j]) * w;
                }
            }
        }
        acc
    }
}

/// A linear map fed to the quasi-Frobenius constructions.
#[derive(Debug, Clone)]
pub struct DerivationMap {
    pub matrix: Matrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationMode {
    /// `D(a∘b) = D(a)∘b + a∘D(b)`.
    Derivation,
    /// `D(a∘b) = (1/2) a∘D(b)` with `D` invertible.
    HalfTwisted,
}

#[derive(Debug, thiserror::Error)]
pub enum QuasiFrobeniusError {
    #[error("map fails the {mode:?} functional equation at basis pair ({i}, {j})")]
    FunctionalEquation {
        mode: DerivationMode,
        i: usize,
        j: usize,
    },
    #[error("map is not skew-adjoint: B(D e_{i}, e_{j}) != -B(e_{i}, D e_{j})")]
    NotSkewAdjoint { i: usize, j: usize },
    #[error("HalfTwisted mode requires an invertible map")]
    NotInvertible,
    #[error("dimension mismatch")]
    DimensionMismatch,
}

/// Outcome of [`quasi_frobenius_from_derivation`].
#[derive(Debug, Clone)]
pub struct QuasiFrobeniusReport {
    pub antisymmetric: bool,
    /// Basis triples where `ω(a∘b,c) − ω(a⋆c,b) + ω(c∘b,a)` is nonzero
    /// (always empty when the preconditions hold).
    pub equation_witnesses: Vec<(usize, usize, usize)>,
    pub nondegenerate: NonvanishingOutcome,
    pub quasi_frobenius: bool,
}

/// Build `ω(a, b) = B(D a, b)` from a derivation (or half-twisted map) that
/// is skew-adjoint for `B`, and verify the quasi-Frobenius equation.
pub fn quasi_frobenius_from_derivation(
    q: &QuadraticNovikov,
    d: &DerivationMap,
    mode: DerivationMode,
) -> Result<(SkewForm, QuasiFrobeniusReport), QuasiFrobeniusError> {
    let n = q.dim();
    let dm = &d.matrix;
    if dm.rows() != n || dm.cols() != n {
        return Err(QuasiFrobeniusError::DimensionMismatch);
    }
    let a = q.algebra();
    for i in 0..n {
        for j in 0..n {
            let ei = unit(n, i);
            let ej = unit(n, j);
            let dij = dm.mul_vec(&a.product(&ei, &ej));
            let rhs = match mode {
                DerivationMode::Derivation => {
                    let t1 = a.product(&dm.mul_vec(&ei), &ej);
                    let t2 = a.product(&ei, &dm.mul_vec(&ej));
                    t1.iter().zip(&t2).map(|(x, y)| x + y).collect::<Vec<_>>()
                }
                DerivationMode::HalfTwisted => a
                    .product(&ei, &dm.mul_vec(&ej))
                    .iter()
                    .map(|x| x.scale(&num::BigRational::new(1.into(), 2.into())))
                    .collect(),
            };
            if dij != rhs {
                return Err(QuasiFrobeniusError::FunctionalEquation { mode, i, j });
            }
        }
    }
    if mode == DerivationMode::HalfTwisted && dm.det().expect("square").is_zero() {
        return Err(QuasiFrobeniusError::NotInvertible);
    }
    // Skew-adjointness B(D a, b) = -B(a, D b) on all basis pairs.
    let b = q.form();
    for i in 0..n {
        for j in 0..n {
            let lhs = b.apply(&dm.mul_vec(&unit(n, i)), &unit(n, j));
            let rhs = -b.apply(&unit(n, i), &dm.mul_vec(&unit(n, j)));
            if lhs != rhs {
                return Err(QuasiFrobeniusError::NotSkewAdjoint { i, j });
            }
        }
    }
    // ω_ij = ω(e_i, e_j) = B(D e_i, e_j), i.e. the matrix D^T B.
    let omega = &dm.transpose() * b.matrix();
    let skew = SkewForm::new(omega).expect("skew-adjointness makes D^T B antisymmetric");
    let mut witnesses = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ei = unit(n, i);
                let ej = unit(n, j);
                let ek = unit(n, k);
                let r = &(&skew.apply(&a.product(&ei, &ej), &ek)
                    - &skew.apply(&a.star(&ei, &ek), &ej))
                    + &skew.apply(&a.product(&ek, &ej), &ei);
                if !r.is_zero() {
                    witnesses.push((i, j, k));
                }
            }
        }
    }
    let nondeg = nonvanishing_check(
        &skew.matrix().det().expect("square"),
        q.algebra().constraints(),
    );
    let report = QuasiFrobeniusReport {
        antisymmetric: true,
        quasi_frobenius: witnesses.is_empty() && nondeg.is_nonzero(),
        equation_witnesses: witnesses,
        nondegenerate: nondeg,
    };
    Ok((skew, report))
}

#[cfg(test)]
pub(crate) mod test_forms {
    use super::*;

    /// The invariant metric of the dimension-2 algebra: B(e1, e2) = s.
    pub fn thm34_form(s_val: i64) -> SymBilinearForm {
        SymBilinearForm::from_entries(2, [(0, 1, Scalar::from_int(s_val))])
    }

    /// Table 2 (A7) metric at concrete (k, t).
    pub fn a7_form(k: i64, t: i64) -> SymBilinearForm {
        SymBilinearForm::from_entries(
            3,
            [
                (0, 2, Scalar::from_int(k)),
                (1, 1, Scalar::from_int(k)),
                (2, 2, Scalar::from_int(t)),
            ],
        )
    }
}
