//! Representations of Novikov algebras, the adjoint and dual
//! representations, and the intertwining map `θ(a) = B(a, ·)` between them
//! on a quadratic Novikov algebra.

use crate::algebra::NovikovAlgebra;
use crate::forms::QuadraticNovikov;
use crate::matrix::Matrix;
use crate::scalar::{nonvanishing_check, Scalar, Verdict};

/// A representation `(V, l, r)`: one pair of carrier matrices per basis
/// vector of the acting algebra.
#[derive(Debug, Clone)]
pub struct Representation {
    pub carrier_dim: usize,
    pub l: Vec<Matrix>,
    pub r: Vec<Matrix>,
}

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("carrier matrices must be {0}x{0}")]
    BadCarrierShape(usize),
    #[error("need one l and one r matrix per basis vector")]
    BadOperatorCount,
}

/// Which of the four representation identities failed at which basis pair.
#[derive(Debug, Clone)]
pub struct RepViolation {
    /// 1-based index of the identity in the definition order.
    pub identity: usize,
    pub pair: (usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct RepReport {
    pub violations: Vec<RepViolation>,
}

impl RepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Representation {
    pub fn new(carrier_dim: usize, l: Vec<Matrix>, r: Vec<Matrix>) -> Result<Self, RepError> {
        if l.len() != r.len() {
            return Err(RepError::BadOperatorCount);
        }
        for m in l.iter().chain(r.iter()) {
            if m.rows() != carrier_dim || m.cols() != carrier_dim {
                return Err(RepError::BadCarrierShape(carrier_dim));
            }
        }
        Ok(Representation { carrier_dim, l, r })
    }

    /// `l(x)` for an arbitrary element `x` of the acting algebra.
    pub fn l_of(&self, x: &[Scalar]) -> Matrix {
        linear_combination(&self.l, x, self.carrier_dim)
    }

    pub fn r_of(&self, x: &[Scalar]) -> Matrix {
        linear_combination(&self.r, x, self.carrier_dim)
    }
}

fn linear_combination(ms: &[Matrix], x: &[Scalar], dim: usize) -> Matrix {
    assert_eq!(ms.len(), x.len());
    let mut out = Matrix::zeros(dim, dim);
    for (m, c) in ms.iter().zip(x) {
        if !c.is_zero() {
            out = &out + &m.scale(c);
        }
    }
    out
}

/// Check the four representation identities on all basis pairs:
///
/// 1. `l(a∘b − b∘a) = [l(a), l(b)]`
/// 2. `l(a) r(b) − r(b) l(a) = r(a∘b) − r(a) r(b)`
/// 3. `l(a∘b) = r(b) l(a)`
/// 4. `r(a) r(b) = r(b) r(a)`
pub fn check_representation(
    algebra: &NovikovAlgebra,
    rep: &Representation,
) -> Result<RepReport, RepError> {
    let n = algebra.dim();
    if rep.l.len() != n || rep.r.len() != n {
        return Err(RepError::BadOperatorCount);
    }
    let mut report = RepReport::default();
    for i in 0..n {
        for j in 0..n {
            let ab = algebra.product_basis(i, j);
            let ba = algebra.product_basis(j, i);
            let comm: Vec<Scalar> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();

            let lhs = rep.l_of(&comm);
            let rhs = &(&rep.l[i] * &rep.l[j]) - &(&rep.l[j] * &rep.l[i]);
            if lhs != rhs {
                report.violations.push(RepViolation {
                    identity: 1,
                    pair: (i, j),
                });
            }

            let lhs = &(&rep.l[i] * &rep.r[j]) - &(&rep.r[j] * &rep.l[i]);
            let rhs = &rep.r_of(&ab) - &(&rep.r[i] * &rep.r[j]);
            if lhs != rhs {
                report.violations.push(RepViolation {
                    identity: 2,
                    pair: (i, j),
                });
            }

            let lhs = rep.l_of(&ab);
            let rhs = &rep.r[j] * &rep.l[i];
            if lhs != rhs {
                report.violations.push(RepViolation {
                    identity: 3,
                    pair: (i, j),
                });
            }

            let lhs = &rep.r[i] * &rep.r[j];
            let rhs = &rep.r[j] * &rep.r[i];
            if lhs != rhs {
                report.violations.push(RepViolation {
                    identity: 4,
                    pair: (i, j),
                });
            }
        }
    }
    Ok(report)
}

/// The adjoint representation `(A, L, R)`.
pub fn adjoint_rep(algebra: &NovikovAlgebra) -> Representation {
    let (l, r) = algebra.mult_operators();
    Representation {
        carrier_dim: algebra.dim(),
        l,
        r,
    }
}

/// The dual representation on `A*` in dual-basis coordinates:
/// `l(a) = L*_⋆(a)` has matrix `−(L_a + R_a)^T` (so `⟨l(a)f, v⟩ = −⟨f, a⋆v⟩`),
/// and `r(a) = −R*_∘(a)` has matrix `R_a^T` (so `⟨r(a)f, v⟩ = ⟨f, v∘a⟩`).
pub fn dual_star_rep(algebra: &NovikovAlgebra) -> Representation {
    let n = algebra.dim();
    let mut l = Vec::with_capacity(n);
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let li = algebra.left_mult(i);
        let ri = algebra.right_mult(i);
        l.push(-(&li + &ri).transpose());
        r.push(ri.transpose());
    }
    Representation {
        carrier_dim: n,
        l,
        r,
    }
}

/// Result of [`theta_isomorphism`].
#[derive(Debug, Clone)]
pub struct ThetaReport {
    pub bijective: bool,
    /// Basis indices where `θ L(e_i) ≠ L*_⋆(e_i) θ`.
    pub left_witnesses: Vec<usize>,
    /// Basis indices where `θ R(e_i) ≠ −R*_∘(e_i) θ`.
    pub right_witnesses: Vec<usize>,
}

impl ThetaReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.left_witnesses.is_empty() && self.right_witnesses.is_empty()
    }
}

/// The map `θ(a) = B(a, ·)` from the adjoint to the dual representation.
/// In dual-basis coordinates θ is the metric matrix itself; the report
/// verifies bijectivity and both intertwining identities exactly. Failures
/// indicate an internal inconsistency, since the quadratic invariants
/// guarantee success.
pub fn theta_isomorphism(q: &QuadraticNovikov) -> (Matrix, ThetaReport) {
    let n = q.dim();
    let theta = q.form().matrix().clone();
    let dual = dual_star_rep(q.algebra());
    let mut report = ThetaReport {
        bijective: nonvanishing_check(&theta.det().expect("square"), q.algebra().constraints())
            .verdict
            == Verdict::GenericallyNonzero,
        left_witnesses: Vec::new(),
        right_witnesses: Vec::new(),
    };
    for i in 0..n {
        let li = q.algebra().left_mult(i);
        let ri = q.algebra().right_mult(i);
        if &theta * &li != &dual.l[i] * &theta {
            report.left_witnesses.push(i);
        }
        if &theta * &ri != &dual.r[i] * &theta {
            report.right_witnesses.push(i);
        }
    }
    (theta, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::{table2_a7, thm34};
    use crate::algebra::NovikovAlgebra;
    use crate::forms::check_quadratic;
    use crate::forms::test_forms::{a7_form, thm34_form};
    use crate::matrix::Matrix;
    use crate::scalar::ConstraintSet;
    use std::collections::BTreeMap;

    #[test]
    fn adjoint_and_dual_are_representations() {
        for a in [thm34(), table2_a7(), NovikovAlgebra::trivial(3)] {
            assert!(check_representation(&a, &adjoint_rep(&a)).unwrap().passed());
            assert!(check_representation(&a, &dual_star_rep(&a))
                .unwrap()
                .passed());
        }
    }

    #[test]
    fn swapped_adjoint_fails() {
        // Swapping l and r of the adjoint breaks identity 3 at (e2, e1).
        let a = thm34();
        let adj = adjoint_rep(&a);
        let swapped = Representation {
            carrier_dim: 2,
            l: adj.r.clone(),
            r: adj.l.clone(),
        };
        let report = check_representation(&a, &swapped).unwrap();
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| v.identity == 3 && v.pair == (1, 0)));
    }

    #[test]
    fn dual_rep_one_dimensional_example() {
        // e∘e = e: on the dual line l(e) = (-2), r(e) = (1).
        let mut p = BTreeMap::new();
        p.insert((0, 0), vec![Scalar::one()]);
        let a = NovikovAlgebra::new(vec!["e".into()], &p, vec![], ConstraintSet::new()).unwrap();
        let dual = dual_star_rep(&a);
        assert_eq!(dual.l[0], Matrix::from_int_rows(&[&[-2]]));
        assert_eq!(dual.r[0], Matrix::from_int_rows(&[&[1]]));
    }

    #[test]
    fn trivial_dual_is_zero() {
        let t = NovikovAlgebra::trivial(2);
        let dual = dual_star_rep(&t);
        assert!(dual.l.iter().all(Matrix::is_zero));
        assert!(dual.r.iter().all(Matrix::is_zero));
    }

    #[test]
    fn theta_on_dim2_algebra() {
        let q = check_quadratic(&thm34(), &thm34_form(1)).unwrap();
        let (theta, report) = theta_isomorphism(&q);
        assert_eq!(theta, Matrix::from_int_rows(&[&[0, 1], &[1, 0]]));
        assert!(report.passed());
    }

    #[test]
    fn theta_on_trivial_and_a7() {
        let t = NovikovAlgebra::trivial(2);
        let id = crate::forms::SymBilinearForm::new(Matrix::identity(2)).unwrap();
        let q = check_quadratic(&t, &id).unwrap();
        let (theta, report) = theta_isomorphism(&q);
        assert_eq!(theta, Matrix::identity(2));
        assert!(report.passed());

        let q = check_quadratic(&table2_a7(), &a7_form(1, 0)).unwrap();
        let (theta, report) = theta_isomorphism(&q);
        assert_eq!(theta, *q.form().matrix());
        assert!(report.passed());
    }
}
