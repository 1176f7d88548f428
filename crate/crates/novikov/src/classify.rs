//! Built-in catalog of the low-dimensional algebras used throughout, and
//! machine verification of the dimension-2 and dimension-3 classification
//! tables.
//!
//! Table verification is self-contained: everything is recomputed from the
//! structure constants; the stored metric families are only compared against
//! the recomputed ones.

use crate::algebra::{unit, NovikovAlgebra};
use crate::dext::{build_dext_dim1, Dim1DextData};
use crate::forms::{
    check_quadratic, invariant_form_space, is_isomorphism, nondegeneracy_condition, FormFamily,
    IsoReport, QuadraticNovikov, SymBilinearForm,
};
use crate::matrix::Matrix;
use crate::scalar::{nonvanishing_check, ConstraintSet, Scalar, Verdict};
use num::BigRational;
use std::collections::BTreeMap;

/// One catalog algebra, optionally with its classified metric family or a
/// fixed (possibly parametric) metric.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: String,
    pub algebra: NovikovAlgebra,
    /// Classified family of invariant metrics, with the table's parameters.
    pub family: Option<FormFamily>,
    /// Constraints under which the family member is nondegenerate.
    pub family_constraints: ConstraintSet,
    /// Fixed metric for entries presented with one.
    pub metric: Option<SymBilinearForm>,
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog label `{0}`")]
    UnknownLabel(String),
    #[error("bad instantiation syntax `{0}` (expected label@p=v,q=w)")]
    BadInstantiation(String),
    #[error("instantiation failed: {0}")]
    Instantiation(String),
}

fn e(i: usize, n: usize) -> Vec<Scalar> {
    unit(n, i)
}

fn alg2(products: &[((usize, usize), Vec<Scalar>)]) -> NovikovAlgebra {
    let map: BTreeMap<(usize, usize), Vec<Scalar>> = products.iter().cloned().collect();
    NovikovAlgebra::new(
        vec!["e1".into(), "e2".into()],
        &map,
        vec![],
        ConstraintSet::new(),
    )
    .expect("catalog entry")
}

fn alg3(products: &[((usize, usize), Vec<Scalar>)]) -> NovikovAlgebra {
    let map: BTreeMap<(usize, usize), Vec<Scalar>> = products.iter().cloned().collect();
    NovikovAlgebra::new(
        vec!["e1".into(), "e2".into(), "e3".into()],
        &map,
        vec![],
        ConstraintSet::new(),
    )
    .expect("catalog entry")
}

/// Labels of the nine dimension-2 table entries, in table order.
pub const TABLE1_LABELS: [&str; 9] = ["T1", "T2", "T3", "N1", "N2", "N3", "N4", "N5", "N6"];

/// Labels of the three dimension-3 table rows.
pub const TABLE2_LABELS: [&str; 3] = ["A7@l=-2", "C5@l=-2", "D6@l=-1/2"];

/// The fixed builtin catalog.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let plain = |label: &str, algebra: NovikovAlgebra| CatalogEntry {
        label: label.into(),
        algebra,
        family: None,
        family_constraints: ConstraintSet::new(),
        metric: None,
    };

    // Dimension-2 table.
    out.push(plain("T1", NovikovAlgebra::trivial(2)));
    out.push(plain("T2", alg2(&[((0, 0), e(1, 2))])));
    out.push(plain(
        "T3",
        alg2(&[((1, 0), vec![Scalar::from_int(-1), Scalar::zero()])]),
    ));
    out.push(plain("N1", alg2(&[((0, 0), e(0, 2)), ((1, 1), e(1, 2))])));
    out.push(plain("N2", alg2(&[((0, 0), e(0, 2))])));
    out.push(plain(
        "N3",
        alg2(&[((0, 0), e(0, 2)), ((0, 1), e(1, 2)), ((1, 0), e(1, 2))]),
    ));
    out.push(plain("N4", alg2(&[((0, 1), e(0, 2)), ((1, 1), e(1, 2))])));
    out.push(plain(
        "N5",
        alg2(&[
            ((0, 1), e(0, 2)),
            ((1, 1), vec![Scalar::one(), Scalar::one()]),
        ]),
    ));
    // (N6): e1∘e2 = e1, e2∘e1 = l e1, e2∘e2 = e2 with l ∉ {0, 1}.
    {
        let l = Scalar::param("l");
        let map: BTreeMap<(usize, usize), Vec<Scalar>> = [
            ((0, 1), e(0, 2)),
            ((1, 0), vec![l.clone(), Scalar::zero()]),
            ((1, 1), e(1, 2)),
        ]
        .into_iter()
        .collect();
        let mut constraints = ConstraintSet::new();
        constraints.insert(l.clone()).unwrap();
        constraints.insert(&l - &Scalar::one()).unwrap();
        let algebra = NovikovAlgebra::new(
            vec!["e1".into(), "e2".into()],
            &map,
            vec!["l".into()],
            constraints,
        )
        .unwrap();
        out.push(plain("N6", algebra));
    }

    // The dimension-2 quadratic algebra ((N6) at l = -2) with its invariant
    // metric family. Exact computation forces b11 = b22 = 0, so the family
    // is the single hyperbolic direction scaled by s ≠ 0.
    out.push(CatalogEntry {
        label: "Thm3.4".into(),
        algebra: alg2(&[
            ((0, 1), e(0, 2)),
            ((1, 0), vec![Scalar::from_int(-2), Scalar::zero()]),
            ((1, 1), e(1, 2)),
        ]),
        family: Some(FormFamily::with_params(
            2,
            vec![SymBilinearForm::from_entries(2, [(0, 1, Scalar::one())])],
            vec!["s".into()],
        )),
        family_constraints: ConstraintSet::nonzero_params(&["s"]),
        metric: None,
    });

    // Dimension-3 table rows.
    out.push(CatalogEntry {
        label: "A7@l=-2".into(),
        algebra: alg3(&[
            ((1, 2), e(0, 3)),
            (
                (2, 1),
                vec![Scalar::from_int(-2), Scalar::zero(), Scalar::zero()],
            ),
            ((2, 2), e(1, 3)),
        ]),
        family: Some(FormFamily::with_params(
            3,
            vec![
                SymBilinearForm::from_entries(3, [(0, 2, Scalar::one()), (1, 1, Scalar::one())]),
                SymBilinearForm::from_entries(3, [(2, 2, Scalar::one())]),
            ],
            vec!["k".into(), "t".into()],
        )),
        family_constraints: ConstraintSet::nonzero_params(&["k"]),
        metric: None,
    });
    out.push(CatalogEntry {
        label: "C5@l=-2".into(),
        algebra: alg3(&[
            ((0, 2), e(0, 3)),
            (
                (2, 0),
                vec![Scalar::from_int(-2), Scalar::zero(), Scalar::zero()],
            ),
            ((2, 2), e(2, 3)),
        ]),
        family: Some(FormFamily::with_params(
            3,
            vec![
                SymBilinearForm::from_entries(3, [(0, 2, Scalar::one())]),
                SymBilinearForm::from_entries(3, [(1, 1, Scalar::one())]),
            ],
            vec!["k".into(), "s".into()],
        )),
        family_constraints: ConstraintSet::nonzero_params(&["k", "s"]),
        metric: None,
    });
    out.push(CatalogEntry {
        label: "D6@l=-1/2".into(),
        algebra: alg3(&[
            ((0, 0), e(1, 3)),
            ((0, 2), e(0, 3)),
            ((1, 2), e(1, 3)),
            (
                (2, 0),
                vec![Scalar::from_fraction(-1, 2), Scalar::zero(), Scalar::zero()],
            ),
            (
                (2, 1),
                vec![Scalar::zero(), Scalar::from_int(-2), Scalar::zero()],
            ),
            ((2, 2), e(2, 3)),
        ]),
        family: Some(FormFamily::with_params(
            3,
            vec![SymBilinearForm::from_entries(
                3,
                [(0, 0, Scalar::from_int(-2)), (1, 2, Scalar::one())],
            )],
            vec!["s".into()],
        )),
        family_constraints: ConstraintSet::nonzero_params(&["s"]),
        metric: None,
    });

    // The 4-dimensional double-extension example, with `s` free.
    out.push(example48_entry());
    out
}

fn example48_entry() -> CatalogEntry {
    let base_alg = alg2(&[
        ((0, 1), e(0, 2)),
        ((1, 0), vec![Scalar::from_int(-2), Scalar::zero()]),
        ((1, 1), e(1, 2)),
    ]);
    let base_form = SymBilinearForm::from_entries(2, [(0, 1, Scalar::one())]);
    let base = check_quadratic(&base_alg, &base_form).expect("base is quadratic");
    let s = Scalar::param("s");
    let d1 = Dim1DextData {
        k: Scalar::one(),
        alpha: vec![Scalar::zero(), Scalar::from_int(2)],
        q1: Matrix::from_int_rows(&[&[2, 0], &[0, -1]]),
        q2: Matrix::from_int_rows(&[&[-1, 0], &[0, -1]]),
        h: Matrix::from_int_rows(&[&[0, -1], &[2, 0]]),
        f: vec![Scalar::from_int(-4), Scalar::zero()],
        g: vec![Scalar::from_int(2), Scalar::zero()],
        t: -s.clone(),
        s,
    };
    let (built, _) = build_dext_dim1(&base, &d1).expect("the 4-dimensional example builds");
    CatalogEntry {
        label: "Ex4.8".into(),
        algebra: built.algebra().clone(),
        family: None,
        family_constraints: ConstraintSet::new(),
        metric: Some(built.form().clone()),
    }
}

/// Look up an entry by label; `label@p=v,q=w` instantiates parameters with
/// rational values (e.g. `N6@l=-2`; `D6@l=-1/2` is itself a fixed label).
pub fn catalog_entry(label: &str) -> Result<CatalogEntry, CatalogError> {
    let all = catalog();
    if let Some(entry) = all.iter().find(|en| en.label == label) {
        return Ok(entry.clone());
    }
    let Some((base, assigns)) = label.split_once('@') else {
        return Err(CatalogError::UnknownLabel(label.to_string()));
    };
    let entry = all
        .iter()
        .find(|en| en.label == base)
        .ok_or_else(|| CatalogError::UnknownLabel(base.to_string()))?;
    let mut bind: BTreeMap<String, Scalar> = BTreeMap::new();
    for part in assigns.split(',') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| CatalogError::BadInstantiation(label.to_string()))?;
        let q = parse_rational(value)
            .ok_or_else(|| CatalogError::BadInstantiation(label.to_string()))?;
        bind.insert(name.trim().to_string(), Scalar::from_rational(q));
    }
    let algebra = entry
        .algebra
        .instantiate(&bind)
        .map_err(|e| CatalogError::Instantiation(e.to_string()))?;
    Ok(CatalogEntry {
        label: label.to_string(),
        algebra,
        family: entry.family.clone(),
        family_constraints: entry.family_constraints.clone(),
        metric: entry.metric.as_ref().map(|m| m.substitute(&bind)),
    })
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: num::BigInt = a.trim().parse().ok()?;
            let den: num::BigInt = b.trim().parse().ok()?;
            if den == 0.into() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => {
            let n: num::BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// One named check in a table-verification report.
#[derive(Debug, Clone)]
pub struct TableCheck {
    pub id: String,
    pub passed: bool,
    pub note: String,
}

#[derive(Debug, Clone, Default)]
pub struct TableReport {
    pub checks: Vec<TableCheck>,
}

impl TableReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&TableCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, id: impl Into<String>, passed: bool, note: impl Into<String>) {
        self.checks.push(TableCheck {
            id: id.into(),
            passed,
            note: note.into(),
        });
    }
}

/// Span membership of a symmetric form in a list of forms (exact solve).
fn in_span(forms: &[SymBilinearForm], target: &SymBilinearForm) -> bool {
    let n = target.dim();
    let unknowns: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    if forms.is_empty() {
        return target.matrix().is_zero();
    }
    let a = Matrix::from_fn(unknowns.len(), forms.len(), |r, c| {
        forms[c].entry(unknowns[r].0, unknowns[r].1).clone()
    });
    let b: Vec<Scalar> = unknowns
        .iter()
        .map(|&(i, j)| target.entry(i, j).clone())
        .collect();
    a.solve(&b).solution.is_some()
}

/// Verify the dimension-2 classification: across the nine table entries a
/// nondegenerate invariant symmetric form exists only for (N6) at l = -2,
/// and compare the solved family there against the published one.
pub fn verify_theorem_2dim() -> TableReport {
    let mut report = TableReport::default();
    for label in TABLE1_LABELS {
        let entry = catalog_entry(label).expect("builtin label");
        let algebra = entry.algebra.clone();
        report.push(
            format!("table1/{label}/novikov"),
            algebra.check_novikov().passed(),
            "both Novikov identities hold identically",
        );
        let family = invariant_form_space(&algebra);
        let general = FormFamily::with_fresh_params(algebra.dim(), family.clone());
        let (det, _) = nondegeneracy_condition(&general, &ConstraintSet::new());
        let has_nondegenerate = !det.is_zero();
        if label == "T1" {
            report.push(
                "table1/T1/trivial-excluded",
                has_nondegenerate,
                "trivial algebra admits nondegenerate forms but is excluded as the nontrivial case",
            );
        } else if label == "N6" {
            report.push(
                "table1/N6/generic-l-degenerate",
                !has_nondegenerate,
                "for transcendental l the invariant family admits no nondegenerate member",
            );
        } else {
            report.push(
                format!("table1/{label}/no-nondegenerate-member"),
                !has_nondegenerate,
                format!(
                    "invariant family dim {}; determinant of the general member vanishes identically",
                    family.len()
                ),
            );
        }
    }

    // (N6) at l = -2: nondegenerate members exist; compare with the
    // published family {b11 = k, b12 = s, b22 = 0}.
    let at_l2 = catalog_entry("N6@l=-2").expect("builtin").algebra;
    let fam = invariant_form_space(&at_l2);
    let general = FormFamily::with_fresh_params(2, fam.clone());
    let (det, _) = nondegeneracy_condition(&general, &ConstraintSet::new());
    report.push(
        "table1/N6@l=-2/nondegenerate-member-exists",
        !det.is_zero(),
        format!("general-member determinant {det}"),
    );

    let paper_b11 = SymBilinearForm::from_entries(2, [(0, 0, Scalar::one())]);
    let paper_b12 = SymBilinearForm::from_entries(2, [(0, 1, Scalar::one())]);
    let computed_in_paper_shape = fam
        .iter()
        .all(|f| in_span(&[paper_b11.clone(), paper_b12.clone()], f));
    report.push(
        "table1/N6@l=-2/family-contained-in-published-shape",
        computed_in_paper_shape,
        "every solved form has b22 = 0 and lies in the span of the published directions",
    );
    // The published family asserts dimension 2 with b11 free; the exact
    // solve disagrees: the b11 direction has invariance residual -3*b11 at
    // (e2, e1, e1), so the solved family is the single direction b12.
    let exact_match = fam.len() == 2 && in_span(&fam, &paper_b11) && in_span(&fam, &paper_b12);
    report.push(
        "table1/N6@l=-2/family-matches-published-exactly",
        exact_match,
        format!(
            "published family is {{b11 = k, b12 = s, b22 = 0}} (dim 2); solved family has dim {} \
             (the b11 direction fails invariance with residual -3*b11 at (e2, e1, e1))",
            fam.len()
        ),
    );
    // Determinant of the solved family: -c0^2 in the family parameter,
    // matching the published determinant -s^2 and the condition s != 0.
    let expected = -Scalar::param(&general.params[0]).pow(2);
    report.push(
        "table1/N6@l=-2/determinant",
        det == expected,
        format!("determinant {det}; nondegenerate iff the hyperbolic coefficient is nonzero"),
    );
    report
}

/// Verify the three dimension-3 table rows: the solved invariant families
/// match the stored table families entrywise (up to parameter renaming), and
/// the determinant conditions reproduce the stated constraints.
pub fn verify_table2() -> TableReport {
    let mut report = TableReport::default();
    // (label, determinant monomial, unit) with det = unit * monomial.
    let expected: [(&str, Scalar, BigRational); 3] = [
        (
            "A7@l=-2",
            Scalar::param("k").pow(3),
            BigRational::from_integer((-1).into()),
        ),
        (
            "C5@l=-2",
            &Scalar::param("k").pow(2) * &Scalar::param("s"),
            BigRational::from_integer((-1).into()),
        ),
        (
            "D6@l=-1/2",
            Scalar::param("s").pow(3),
            BigRational::from_integer(2.into()),
        ),
    ];
    for (label, monomial, unit) in expected {
        let entry = catalog_entry(label).expect("builtin label");
        report.push(
            format!("table2/{label}/novikov"),
            entry.algebra.check_novikov().passed(),
            "both Novikov identities hold identically",
        );
        let stored = entry.family.as_ref().expect("table rows carry families");
        let computed = invariant_form_space(&entry.algebra);
        let dims_match = computed.len() == stored.basis.len();
        let mutual = stored.basis.iter().all(|f| in_span(&computed, f))
            && computed.iter().all(|f| in_span(&stored.basis, f));
        report.push(
            format!("table2/{label}/family-matches-table"),
            dims_match && mutual,
            format!(
                "solved family dim {} vs table dim {}; spans {}",
                computed.len(),
                stored.basis.len(),
                if mutual { "agree" } else { "differ" }
            ),
        );
        let (det, verdict) = nondegeneracy_condition(stored, &entry.family_constraints);
        let det_matches = det == monomial.scale(&unit);
        report.push(
            format!("table2/{label}/determinant"),
            det_matches,
            format!("determinant {det}"),
        );
        report.push(
            format!("table2/{label}/nondegeneracy-constraint"),
            verdict.is_nonzero() && verdict.certified,
            format!(
                "nonvanishing verdict {} under the table constraints",
                verdict.verdict
            ),
        );
    }
    report
}

/// Check whether `m` is an isomorphism of quadratic Novikov algebras
/// (invertible, multiplicative, isometric).
pub fn check_iso_quadratic(
    q1: &QuadraticNovikov,
    q2: &QuadraticNovikov,
    m: &Matrix,
) -> (bool, IsoReport) {
    let report = is_isomorphism(q1, q2, m);
    (report.passed(), report)
}

/// One matched degeneracy pattern in a presented basis.
#[derive(Debug, Clone)]
pub struct PatternMatch {
    pub pattern: String,
    pub indices: Vec<usize>,
    pub detail: String,
}

/// Presented-basis diagnostic: which structural degeneracy patterns match,
/// and confirmation that the invariant-form space indeed has no
/// nondegenerate member. Not a basis-independent proof.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub matches: Vec<PatternMatch>,
    pub family_dim: usize,
    /// True when every matched pattern is confirmed: the invariant-form
    /// space contains no nondegenerate member.
    pub degeneracy_confirmed: bool,
    pub presented_basis_only: bool,
}

pub fn degenerate_case_audit(algebra: &NovikovAlgebra) -> AuditReport {
    let n = algebra.dim();
    let mut matches = Vec::new();

    if let Some(id) = algebra.find_identity() {
        matches.push(PatternMatch {
            pattern: "identity-element".into(),
            indices: vec![],
            detail: format!(
                "identity {} forces B(e, a) = 0 for all a",
                crate::algebra::format_linear(&id, algebra.basis_names())
            ),
        });
    }

    let is_trivial =
        (0..n).all(|i| (0..n).all(|j| algebra.product_basis(i, j).iter().all(Scalar::is_zero)));
    if n == 2 && !is_trivial {
        for i in 0..n {
            let annihilated =
                (0..n).all(|j| algebra.product_basis(j, i).iter().all(Scalar::is_zero));
            if annihilated {
                matches.push(PatternMatch {
                    pattern: "annihilated-vector".into(),
                    indices: vec![i],
                    detail: format!(
                        "a ∘ {} = 0 for all a in a nontrivial 2-dimensional algebra",
                        algebra.basis_names()[i]
                    ),
                });
            }
        }
    }

    if n == 3 {
        audit_dim3_cases(algebra, &mut matches);
    }

    let family = invariant_form_space(algebra);
    let general = FormFamily::with_fresh_params(n, family.clone());
    let det = general.general_member().det();
    let degeneracy_confirmed = matches.is_empty()
        || nonvanishing_check(&det, &ConstraintSet::new()).verdict == Verdict::IdenticallyZero;
    AuditReport {
        matches,
        family_dim: family.len(),
        degeneracy_confirmed,
        presented_basis_only: true,
    }
}

/// `Some((c, k))` when `v = c * e_k` with `c` nonzero.
fn single_component(v: &[Scalar]) -> Option<(Scalar, usize)> {
    let mut found = None;
    for (k, s) in v.iter().enumerate() {
        if !s.is_zero() {
            if found.is_some() {
                return None;
            }
            found = Some((s.clone(), k));
        }
    }
    found
}

fn audit_dim3_cases(a: &NovikovAlgebra, matches: &mut Vec<PatternMatch>) {
    let n = 3;
    let star = |i: usize, j: usize| a.star(&unit(n, i), &unit(n, j));
    let zero = |v: &[Scalar]| v.iter().all(Scalar::is_zero);

    // Case 1: e_i∘e_i = c e_k (k ≠ i) and e_i ⋆ e_j = 0 for all j ≠ i.
    for i in 0..n {
        if let Some((_, k)) = single_component(&a.product_basis(i, i)) {
            if k != i && (0..n).filter(|&j| j != i).all(|j| zero(&star(i, j))) {
                matches.push(PatternMatch {
                    pattern: "case-1".into(),
                    indices: vec![i, k],
                    detail: format!(
                        "e{0}∘e{0} spans e{1} and e{0} ⋆ e_j = 0 for j ≠ {0}; forces B(e{1}, ·) = 0",
                        i + 1,
                        k + 1
                    ),
                });
            }
        }
    }

    // Case 2: e_i∘e_j = c e_k (i ≠ j), e_i ⋆ e_l = 0 for l ≠ j, and
    // e_j∘e_i = m e_k with m/c ≠ -2.
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let Some((c, k)) = single_component(&a.product_basis(i, j)) else {
                continue;
            };
            if !(0..n).filter(|&l| l != j).all(|l| zero(&star(i, l))) {
                continue;
            }
            let ji = a.product_basis(j, i);
            let ratio_ok = if zero(&ji) {
                true // m = 0
            } else if let Some((m, k2)) = single_component(&ji) {
                k2 == k && &m + &c.scale(&BigRational::from_integer(2.into())) != Scalar::zero()
            } else {
                false
            };
            if ratio_ok {
                matches.push(PatternMatch {
                    pattern: "case-2".into(),
                    indices: vec![i, j, k],
                    detail: format!(
                        "e{}∘e{} spans e{} with e{}∘e{} a compatible multiple; forces B(e{}, ·) = 0",
                        i + 1,
                        j + 1,
                        k + 1,
                        j + 1,
                        i + 1,
                        k + 1
                    ),
                });
            }
        }
    }

    // Case 3: e_i∘e_i = e_i and e_i ⋆ e_j = m_j e_j (m_j ≠ -1) for j ≠ i.
    for i in 0..n {
        if a.product_basis(i, i) != unit(n, i) {
            continue;
        }
        let ok = (0..n).filter(|&j| j != i).all(|j| {
            let st = star(i, j);
            match single_component(&st) {
                None => zero(&st), // m_j = 0
                Some((m, k)) => k == j && &m + &Scalar::one() != Scalar::zero(),
            }
        });
        if ok {
            matches.push(PatternMatch {
                pattern: "case-3".into(),
                indices: vec![i],
                detail: format!(
                    "e{0}∘e{0} = e{0} and e{0} ⋆ e_j = m_j e_j with m_j ≠ -1; forces B(e{0}, ·) = 0",
                    i + 1
                ),
            });
        }
    }

    // Case 4: for some j: e_i∘e_j = e_i for all i ≠ j and e_k∘e_l = 0 for
    // k, l ≠ j.
    for j in 0..n {
        let acts = (0..n)
            .filter(|&i| i != j)
            .all(|i| a.product_basis(i, j) == unit(n, i));
        let rest_zero = (0..n).filter(|&k| k != j).all(|k| {
            (0..n)
                .filter(|&l| l != j)
                .all(|l| zero(&a.product_basis(k, l)))
        });
        if acts && rest_zero {
            matches.push(PatternMatch {
                pattern: "case-4".into(),
                indices: vec![j],
                detail: format!(
                    "right multiplication by e{0} fixes the complement and all other products \
                     vanish; forces B(e_k, e_l) = 0 off e{0}",
                    j + 1
                ),
            });
        }
    }

    // Case 5: e_b∘e_b = 0, e_b∘e_c = e_b, e_c∘e_b = m e_b (m ≠ -2),
    // e_c∘e_c = k e_b + l e_c with l ≠ 0 (b, c distinct).
    for b in 0..n {
        for c in 0..n {
            if b == c {
                continue;
            }
            if !zero(&a.product_basis(b, b)) {
                continue;
            }
            if a.product_basis(b, c) != unit(n, b) {
                continue;
            }
            let cb = a.product_basis(c, b);
            let m_ok = zero(&cb)
                || single_component(&cb)
                    .map(|(m, k)| k == b && &m + &Scalar::from_int(2) != Scalar::zero())
                    .unwrap_or(false);
            if !m_ok {
                continue;
            }
            let cc = a.product_basis(c, c);
            let l_nonzero = !cc[c].is_zero();
            let only_bc = (0..n).all(|t| t == b || t == c || cc[t].is_zero());
            if l_nonzero && only_bc {
                matches.push(PatternMatch {
                    pattern: "case-5".into(),
                    indices: vec![b, c],
                    detail: format!(
                        "e{0}, e{1} form the weighted pair pattern with l ≠ 0; forces \
                         B(e{0}, e{0}) = B(e{0}, e{1}) = B(e{1}, e{1}) = 0",
                        b + 1,
                        c + 1
                    ),
                });
            }
        }
    }

    // Case 6: e_a∘e_c = 0, e_c∘e_a = e_a, e_c ⋆ e_b = m e_b + n e_a
    // (m ≠ -1), e_c∘e_c = 0, with {a, b, c} the whole basis.
    for c in 0..n {
        if !zero(&a.product_basis(c, c)) {
            continue;
        }
        for aa in 0..n {
            if aa == c {
                continue;
            }
            if !zero(&a.product_basis(aa, c)) {
                continue;
            }
            if a.product_basis(c, aa) != unit(n, aa) {
                continue;
            }
            let b = (0..n).find(|&t| t != aa && t != c).unwrap();
            let st = star(c, b);
            let outside_zero = (0..n).all(|t| t == aa || t == b || st[t].is_zero());
            let m_ok = &st[b] + &Scalar::one() != Scalar::zero();
            if outside_zero && m_ok {
                matches.push(PatternMatch {
                    pattern: "case-6".into(),
                    indices: vec![aa, b, c],
                    detail: format!(
                        "e{1} acts on e{0} with weight 1 one-sidedly and on e{2} with star \
                         weight ≠ -1; forces B(e{0}, ·) = 0",
                        aa + 1,
                        b + 1,
                        c + 1
                    ),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::invariance_residual;

    #[test]
    fn catalog_entries_are_novikov_and_families_invariant() {
        for entry in catalog() {
            assert!(
                entry.algebra.check_novikov().passed(),
                "{} fails the axioms",
                entry.label
            );
            if let Some(fam) = &entry.family {
                let general = fam.general_member();
                assert!(
                    invariance_residual(&entry.algebra, &general)
                        .unwrap()
                        .is_empty(),
                    "{} family not invariant",
                    entry.label
                );
            }
            if let Some(metric) = &entry.metric {
                assert!(
                    invariance_residual(&entry.algebra, metric)
                        .unwrap()
                        .is_empty(),
                    "{} metric not invariant",
                    entry.label
                );
            }
        }
    }

    #[test]
    fn catalog_lookup_and_instantiation() {
        let n6 = catalog_entry("N6@l=-2").unwrap();
        assert_eq!(
            n6.algebra.product_basis(1, 0),
            vec![Scalar::from_int(-2), Scalar::zero()]
        );
        let d6 = catalog_entry("D6@l=-1/2").unwrap();
        assert_eq!(
            d6.algebra.product_basis(2, 0),
            vec![Scalar::from_fraction(-1, 2), Scalar::zero(), Scalar::zero()]
        );
        let ex = catalog_entry("Ex4.8").unwrap();
        assert_eq!(ex.algebra.dim(), 4);
        assert_eq!(ex.algebra.params(), ["s"]);
        assert!(catalog_entry("Z9").is_err());
        // N6 at the excluded value l = 0 violates the constraint set.
        assert!(matches!(
            catalog_entry("N6@l=0"),
            Err(CatalogError::Instantiation(_))
        ));
    }

    #[test]
    fn theorem_2dim_report() {
        let report = verify_theorem_2dim();
        // Everything passes except the exact family match: the published
        // family includes the b11 direction, which is not invariant.
        for check in &report.checks {
            if check.id == "table1/N6@l=-2/family-matches-published-exactly" {
                assert!(!check.passed, "{}: {}", check.id, check.note);
            } else {
                assert!(check.passed, "{}: {}", check.id, check.note);
            }
        }
    }

    #[test]
    fn table2_report_passes() {
        let report = verify_table2();
        for check in &report.checks {
            assert!(check.passed, "{}: {}", check.id, check.note);
        }
    }

    #[test]
    fn iso_check_examples() {
        let entry = catalog_entry("Thm3.4").unwrap();
        let fam = entry.family.as_ref().unwrap();
        let q1 = check_quadratic(&entry.algebra, &fam.member(&[Scalar::one()])).unwrap();
        let (ok, _) = check_iso_quadratic(&q1, &q1, &Matrix::identity(2));
        assert!(ok);

        // s = 2 is isomorphic to s = 1 via diag(2, 1).
        let q2 = check_quadratic(&entry.algebra, &fam.member(&[Scalar::from_int(2)])).unwrap();
        let m = Matrix::from_int_rows(&[&[2, 0], &[0, 1]]);
        let (ok, report) = check_iso_quadratic(&q2, &q1, &m);
        assert!(ok, "{report:?}");

        // Swapping e1 and e2 is not multiplicative.
        let swap = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let (ok, report) = check_iso_quadratic(&q1, &q1, &swap);
        assert!(!ok);
        assert!(!report.multiplicative_witnesses.is_empty());
    }

    #[test]
    fn audit_patterns() {
        // (N3) has the identity e1.
        let n3 = catalog_entry("N3").unwrap();
        let report = degenerate_case_audit(&n3.algebra);
        assert!(report
            .matches
            .iter()
            .any(|m| m.pattern == "identity-element"));
        assert!(report.degeneracy_confirmed);

        // (N1) also has an identity (e1 + e2).
        let n1 = catalog_entry("N1").unwrap();
        let report = degenerate_case_audit(&n1.algebra);
        assert!(report
            .matches
            .iter()
            .any(|m| m.pattern == "identity-element"));

        // (T2): e1∘e1 = e2 leaves e2 annihilated.
        let t2 = catalog_entry("T2").unwrap();
        let report = degenerate_case_audit(&t2.algebra);
        let m = report
            .matches
            .iter()
            .find(|m| m.pattern == "annihilated-vector")
            .expect("annihilated vector expected");
        assert_eq!(m.indices, vec![1]);
        assert!(report.degeneracy_confirmed);

        // 3-dim e1∘e1 = e2, rest 0: Case 1.
        let a = alg3(&[((0, 0), e(1, 3))]);
        let report = degenerate_case_audit(&a);
        assert!(report.matches.iter().any(|m| m.pattern == "case-1"));
        assert!(report.degeneracy_confirmed);

        // The quadratic table rows match no elimination pattern.
        for label in TABLE2_LABELS {
            let entry = catalog_entry(label).unwrap();
            let report = degenerate_case_audit(&entry.algebra);
            assert!(
                report.matches.is_empty(),
                "{label} unexpectedly matched {:?}",
                report.matches
            );
        }
    }
}
