//! Command implementations. Every command produces a [`Report`]; input
//! problems (bad files, unknown names, malformed flags) surface as
//! [`InputError`] and exit with code 2, failed mathematical checks exit
//! with code 1.

use crate::dsl::{self, NvkDocument};
use crate::report::{Report, Status};
use novikov::algebra::{format_linear, NovikovAlgebra, Subspace};
use novikov::classify::{
    check_iso_quadratic, degenerate_case_audit, verify_table2, verify_theorem_2dim,
};
use novikov::dext::{
    build_dext, build_dext_dim1, build_tstar, extract_dext, validate_dext, DextData, DextError,
    Dim1DextData,
};
use novikov::forms::{
    check_quadratic, invariant_form_space, nondegeneracy_condition, DerivationMap, DerivationMode,
    FormFamily, QuadraticNovikov, SymBilinearForm,
};
use novikov::matrix::Matrix;
use novikov::reps::{adjoint_rep, check_representation, dual_star_rep, theta_isomorphism};
use novikov::scalar::{Scalar, Verdict};
use novikov::structure::{decompose, isotropic_ideal_lines, perp, IdealLines};
use std::collections::BTreeMap;
use std::path::Path;

pub struct InputError(pub String);

type Assignments = BTreeMap<String, Scalar>;

pub fn load(path: &Path) -> Result<NvkDocument, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    dsl::parse_nvk(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn assignments(set: &Option<String>) -> Result<Assignments, InputError> {
    match set {
        None => Ok(BTreeMap::new()),
        Some(s) => dsl::parse_assignments(s).map_err(|e| InputError(format!("--set: {e}"))),
    }
}

/// Apply `--set` to an algebra; constraint violations are input errors.
fn instantiate(a: &NovikovAlgebra, set: &Assignments) -> Result<NovikovAlgebra, InputError> {
    if set.is_empty() {
        return Ok(a.clone());
    }
    a.instantiate(set)
        .map_err(|e| InputError(format!("--set: {e}")))
}

type ResolvedAlgebra = (String, NovikovAlgebra, Vec<(String, SymBilinearForm)>);

/// Resolve an algebra (by name or the first declared) and its named forms,
/// with `--set` applied.
fn resolve_algebra(
    doc: &NvkDocument,
    name: Option<&str>,
    set: &Assignments,
) -> Result<ResolvedAlgebra, InputError> {
    let decl = doc.algebra(name).map_err(|e| InputError(e.to_string()))?;
    let algebra = instantiate(&decl.algebra, set)?;
    let forms = decl
        .forms
        .iter()
        .map(|(n, f)| (n.clone(), f.substitute(set)))
        .collect();
    Ok((decl.name.clone(), algebra, forms))
}

fn pick_form<'a>(
    forms: &'a [(String, SymBilinearForm)],
    name: Option<&str>,
) -> Result<&'a (String, SymBilinearForm), InputError> {
    match name {
        None => forms
            .first()
            .ok_or_else(|| InputError("no form declared; add a `form` block".into())),
        Some(n) => forms
            .iter()
            .find(|(fname, _)| fname == n)
            .ok_or_else(|| InputError(format!("unknown form `{n}`"))),
    }
}

/// Validate a (algebra, form) pair, recording the outcome in the report.
fn quadratic_checked(
    report: &mut Report,
    prefix: &str,
    algebra: &NovikovAlgebra,
    form: &SymBilinearForm,
) -> Option<QuadraticNovikov> {
    match check_quadratic(algebra, form) {
        Ok(q) => {
            report.check(format!("{prefix}/quadratic"), true, None);
            Some(q)
        }
        Err(e) => {
            report.check(format!("{prefix}/quadratic"), false, Some(e.to_string()));
            None
        }
    }
}

fn parse_span(
    expr: &str,
    params: &[String],
    algebra: &NovikovAlgebra,
) -> Result<Subspace, InputError> {
    let mut cols = Vec::new();
    for part in expr.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v = dsl::parse_linexpr_str(part, params, algebra.basis_names())
            .map_err(|e| InputError(format!("--span/--ideal: {e}")))?;
        cols.push(v);
    }
    Ok(Subspace::from_vectors(algebra.dim(), &cols))
}

/// Parse `e1=<linexpr>;e2=<linexpr>;...` into a matrix whose column for the
/// source basis vector `lhs` holds the target coordinates of its image.
fn parse_map(
    entries: &str,
    params: &[String],
    source: &NovikovAlgebra,
    target: &NovikovAlgebra,
) -> Result<Matrix, InputError> {
    let mut m = Matrix::zeros(target.dim(), source.dim());
    let mut seen = vec![false; source.dim()];
    for part in entries.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (lhs, rhs) = part
            .split_once('=')
            .ok_or_else(|| InputError(format!("--map: bad entry `{part}`")))?;
        let lhs = lhs.trim();
        let idx = source
            .basis_names()
            .iter()
            .position(|b| b == lhs)
            .ok_or_else(|| InputError(format!("--map: unknown basis vector `{lhs}`")))?;
        let v = dsl::parse_linexpr_str(rhs.trim(), params, target.basis_names())
            .map_err(|e| InputError(format!("--map: {e}")))?;
        for (r, s) in v.iter().enumerate() {
            m[(r, idx)] = s.clone();
        }
        seen[idx] = true;
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(InputError(format!(
            "--map: no image given for `{}`",
            source.basis_names()[i]
        )));
    }
    Ok(m)
}

fn subspace_text(s: &Subspace, names: &[String]) -> String {
    if s.dim() == 0 {
        return "{0}".to_string();
    }
    let cols: Vec<String> = (0..s.dim())
        .map(|c| format_linear(&s.basis().col(c), names))
        .collect();
    format!("span{{{}}}", cols.join(", "))
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

pub fn cmd_check(
    doc: &NvkDocument,
    inputs: Vec<String>,
    set: &Assignments,
) -> Result<Report, InputError> {
    let mut report = Report::new("check", inputs);
    if doc.algebras.is_empty() {
        return Err(InputError("document declares no algebra".into()));
    }
    for decl in &doc.algebras {
        let algebra = instantiate(&decl.algebra, set)?;
        let nov = algebra.check_novikov();
        let witness = nov.violations.first().map(|v| {
            format!(
                "{} residual at basis triple {:?}: {}",
                v.axiom,
                (v.triple.0 + 1, v.triple.1 + 1, v.triple.2 + 1),
                format_linear(&v.residual, algebra.basis_names())
            )
        });
        report.check(format!("{}/novikov", decl.name), nov.passed(), witness);
        for (fname, form) in &decl.forms {
            let form = form.substitute(set);
            quadratic_checked(&mut report, &format!("{}/{fname}", decl.name), &algebra, &form);
        }
    }
    Ok(report.finalize())
}

// ---------------------------------------------------------------------------
// forms
// ---------------------------------------------------------------------------

pub fn cmd_forms(
    doc: &NvkDocument,
    inputs: Vec<String>,
    algebra: Option<&str>,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name, algebra, _) = resolve_algebra(doc, algebra, set)?;
    let mut report = Report::new("forms", inputs);
    report.check(
        format!("{name}/novikov"),
        algebra.check_novikov().passed(),
        None,
    );
    let family = invariant_form_space(&algebra);
    let mut lines = vec![format!("dimension {}", family.len())];
    for (i, f) in family.iter().enumerate() {
        let entries: Vec<String> = (0..f.dim())
            .flat_map(|r| (r..f.dim()).map(move |c| (r, c)))
            .filter(|&(r, c)| !f.entry(r, c).is_zero())
            .map(|(r, c)| {
                format!(
                    "B({},{}) = {}",
                    algebra.basis_names()[r],
                    algebra.basis_names()[c],
                    f.entry(r, c)
                )
            })
            .collect();
        lines.push(format!("basis form c{i}: {}", entries.join(", ")));
    }
    report.info(format!("{name}/invariant-form-space"), lines.join("\n"));
    let general = FormFamily::with_fresh_params(algebra.dim(), family);
    // Nonvanishing is decided where every family coefficient is nonzero (in
    // addition to the document's own constraints).
    let mut constraints = algebra.constraints().clone();
    for pname in &general.params {
        constraints
            .insert(Scalar::param(pname))
            .expect("parameters are nonzero polynomials");
    }
    let (det, outcome) = nondegeneracy_condition(&general, &constraints);
    let note = match outcome.verdict {
        Verdict::GenericallyNonzero => {
            "nondegenerate members exist (generically nonzero where the coefficients are nonzero)"
        }
        Verdict::IdenticallyZero => "no nondegenerate member: the determinant vanishes identically",
        Verdict::Inconclusive => "inconclusive: the determinant has zeros inside the family",
    };
    report.info(
        format!("{name}/family-determinant"),
        format!("det = {det}; {note}"),
    );
    Ok(report.finalize())
}

// ---------------------------------------------------------------------------
// perp / decompose / ideals
// ---------------------------------------------------------------------------

pub fn cmd_perp(
    doc: &NvkDocument,
    inputs: Vec<String>,
    algebra: Option<&str>,
    form: Option<&str>,
    span: &str,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name, alg, forms) = resolve_algebra(doc, algebra, set)?;
    let (fname, f) = pick_form(&forms, form)?.clone();
    let w = parse_span(span, &doc.params, &alg)?;
    let mut report = Report::new("perp", inputs);
    let Some(q) = quadratic_checked(&mut report, &format!("{name}/{fname}"), &alg, &f) else {
        return Ok(report.finalize());
    };
    match perp(&q, &w) {
        Ok(p) => {
            report.info(
                "perp",
                format!(
                    "{}^⊥ = {}",
                    subspace_text(&w, alg.basis_names()),
                    subspace_text(&p, alg.basis_names())
                ),
            );
        }
        Err(e) => report.check("perp", false, Some(e.to_string())),
    }
    Ok(report.finalize())
}

pub fn cmd_decompose(
    doc: &NvkDocument,
    inputs: Vec<String>,
    algebra: Option<&str>,
    form: Option<&str>,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name, alg, forms) = resolve_algebra(doc, algebra, set)?;
    let (fname, f) = pick_form(&forms, form)?.clone();
    let mut report = Report::new("decompose", inputs);
    let Some(q) = quadratic_checked(&mut report, &format!("{name}/{fname}"), &alg, &f) else {
        return Ok(report.finalize());
    };
    match decompose(&q) {
        Ok(factors) => {
            report.info(
                "decompose/factors",
                format!(
                    "{} pairwise orthogonal nondegenerate ideal(s); minimality is relative to \
                     the rational-eigenvalue ideal search",
                    factors.len()
                ),
            );
            for (i, fac) in factors.iter().enumerate() {
                report.info(
                    format!("decompose/factor-{}", i + 1),
                    subspace_text(fac, alg.basis_names()),
                );
            }
        }
        Err(e) => report.check("decompose", false, Some(e.to_string())),
    }
    Ok(report.finalize())
}

pub fn cmd_ideals(
    doc: &NvkDocument,
    inputs: Vec<String>,
    algebra: Option<&str>,
    form: Option<&str>,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name, alg, forms) = resolve_algebra(doc, algebra, set)?;
    let (fname, f) = pick_form(&forms, form)?.clone();
    let mut report = Report::new("ideals", inputs);
    let Some(q) = quadratic_checked(&mut report, &format!("{name}/{fname}"), &alg, &f) else {
        return Ok(report.finalize());
    };
    match isotropic_ideal_lines(&q) {
        Ok(IdealLines::Lines(lines)) => {
            if lines.is_empty() {
                report.info("ideals/isotropic-lines", "none found by the rational search");
            }
            for (i, l) in lines.iter().enumerate() {
                report.info(
                    format!("ideals/line-{}", i + 1),
                    subspace_text(l, alg.basis_names()),
                );
            }
        }
        Ok(IdealLines::Cone { quadratic_form }) => {
            report.info(
                "ideals/cone",
                format!(
                    "all products vanish; isotropic lines form the cone {} = 0",
                    quadratic_form
                ),
            );
        }
        Err(e) => report.check("ideals", false, Some(e.to_string())),
    }
    Ok(report.finalize())
}

// ---------------------------------------------------------------------------
// rep-check / qf
// ---------------------------------------------------------------------------

pub fn cmd_rep_check(
    doc: &NvkDocument,
    inputs: Vec<String>,
    algebra: Option<&str>,
    form: Option<&str>,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name, alg, forms) = resolve_algebra(doc, algebra, set)?;
    let mut report = Report::new("rep-check", inputs);
    report.check(
        format!("{name}/novikov"),
        alg.check_novikov().passed(),
        None,
    );
    let adj = check_representation(&alg, &adjoint_rep(&alg))
        .map_err(|e| InputError(e.to_string()))?;
    report.check(
        format!("{name}/adjoint-representation"),
        adj.passed(),
        adj.violations
            .first()
            .map(|v| format!("identity {} fails at pair {:?}", v.identity, v.pair)),
    );
    let dual = check_representation(&alg, &dual_star_rep(&alg))
        .map_err(|e| InputError(e.to_string()))?;
    report.check(
        format!("{name}/dual-representation"),
        dual.passed(),
        dual.violations
            .first()
            .map(|v| format!("identity {} fails at pair {:?}", v.identity, v.pair)),
    );
    if let Ok((fname, f)) = pick_form(&forms, form) {
        if let Some(q) = quadratic_checked(&mut report, &format!("{name}/{fname}"), &alg, f) {
            let (_, theta) = theta_isomorphism(&q);
            report.check(format!("{name}/theta-bijective"), theta.bijective, None);
            report.check(
                format!("{name}/theta-left-intertwining"),
                theta.left_witnesses.is_empty(),
                (!theta.left_witnesses.is_empty())
                    .then(|| format!("fails at basis indices {:?}", theta.left_witnesses)),
            );
            report.check(
                format!("{name}/theta-right-intertwining"),
                theta.right_witnesses.is_empty(),
                (!theta.right_witnesses.is_empty())
                    .then(|| format!("fails at basis indices {:?}", theta.right_witnesses)),
            );
        }
    }
    Ok(report.finalize())
}

pub fn cmd_qf(
    doc: &NvkDocument,
    inputs: Vec<String>,
    algebra: Option<&str>,
    form: Option<&str>,
    map: &str,
    mode: DerivationMode,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name, alg, forms) = resolve_algebra(doc, algebra, set)?;
    let (fname, f) = pick_form(&forms, form)?.clone();
    let d = DerivationMap {
        matrix: parse_map(map, &doc.params, &alg, &alg)?,
    };
    let mut report = Report::new("qf", inputs);
    let Some(q) = quadratic_checked(&mut report, &format!("{name}/{fname}"), &alg, &f) else {
        return Ok(report.finalize());
    };
    match novikov::forms::quasi_frobenius_from_derivation(&q, &d, mode) {
        Ok((omega, qfr)) => {
            report.check("qf/preconditions", true, None);
            report.check("qf/antisymmetric", qfr.antisymmetric, None);
            report.check(
                "qf/equation",
                qfr.equation_witnesses.is_empty(),
                (!qfr.equation_witnesses.is_empty())
                    .then(|| format!("fails at triples {:?}", qfr.equation_witnesses)),
            );
            let status = match qfr.nondegenerate.verdict {
                Verdict::GenericallyNonzero => Status::Pass,
                Verdict::IdenticallyZero => Status::Fail,
                Verdict::Inconclusive => Status::Inconclusive,
            };
            report.check_status(
                "qf/nondegenerate",
                status,
                Some(format!("verdict {}", qfr.nondegenerate.verdict)),
            );
            let mut lines = vec![format!(
                "quasi-Frobenius: {}",
                if qfr.quasi_frobenius { "yes" } else { "no" }
            )];
            for i in 0..q.dim() {
                for j in i + 1..q.dim() {
                    let w = omega.matrix()[(i, j)].clone();
                    if !w.is_zero() {
                        lines.push(format!(
                            "ω({},{}) = {w}",
                            alg.basis_names()[i],
                            alg.basis_names()[j]
                        ));
                    }
                }
            }
            report.info("qf/omega", lines.join("\n"));
        }
        Err(e) => report.check("qf/preconditions", false, Some(e.to_string())),
    }
    Ok(report.finalize())
}

// ---------------------------------------------------------------------------
// dext subcommands
// ---------------------------------------------------------------------------

fn dext_data_from_doc(doc: &NvkDocument, set: &Assignments) -> Result<DextData, InputError> {
    let decl = doc
        .dexts
        .first()
        .ok_or_else(|| InputError("document has no `dext:` block".into()))?;
    let data = doc
        .dext_data(decl)
        .map_err(|e| InputError(e.to_string()))?;
    if set.is_empty() {
        Ok(data)
    } else {
        data.substitute(set)
            .map_err(|e| InputError(format!("--set: {e}")))
    }
}

fn report_conditions(report: &mut Report, conds: &novikov::dext::DextReport) {
    for c in &conds.conditions {
        report.check(
            format!("conditions/{}", c.id),
            c.passed,
            c.witness
                .as_ref()
                .map(|w| format!("first failing basis tuple {w:?}")),
        );
    }
}

/// Render a built quadratic algebra as a `.nvk` document (basis names with
/// `*` are rewritten to valid identifiers).
fn print_built(q: &QuadraticNovikov, name: &str) -> String {
    let mut names: Vec<String> = q
        .algebra()
        .basis_names()
        .iter()
        .map(|b| b.replace('*', "star"))
        .collect();
    // Resolve accidental collisions.
    for i in 0..names.len() {
        while names[..i].contains(&names[i]) {
            names[i].push('x');
        }
    }
    let algebra = q
        .algebra()
        .with_basis_names(names)
        .expect("sanitized names are unique");
    let doc = NvkDocument {
        params: algebra.params().to_vec(),
        constraints: algebra.constraints().clone(),
        algebras: vec![dsl::AlgebraDecl {
            name: name.to_string(),
            algebra,
            forms: vec![("B".to_string(), q.form().clone())],
        }],
        dexts: vec![],
    };
    dsl::print_nvk(&doc)
}

pub fn cmd_dext_build(
    doc: &NvkDocument,
    inputs: Vec<String>,
    set: &Assignments,
    output: Option<&Path>,
) -> Result<Report, InputError> {
    let data = dext_data_from_doc(doc, set)?;
    let mut report = Report::new("dext build", inputs);
    let conds = validate_dext(&data).map_err(|e| InputError(e.to_string()))?;
    report_conditions(&mut report, &conds);
    if conds.all_passed() {
        match build_dext(&data) {
            Ok(q) => {
                let text = print_built(&q, "Extension");
                write_output(output, &text)?;
                report.info("build/result", text);
            }
            Err(e) => report.check("build", false, Some(e.to_string())),
        }
    }
    Ok(report.finalize())
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), InputError> {
    if let Some(path) = path {
        std::fs::write(path, text)
            .map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

pub fn cmd_dext_build1(
    doc: &NvkDocument,
    inputs: Vec<String>,
    set: &Assignments,
    output: Option<&Path>,
) -> Result<Report, InputError> {
    let data = dext_data_from_doc(doc, set)?;
    if data.ext.dim() != 1 {
        return Err(InputError(
            "dext build1 requires a one-dimensional extending algebra".into(),
        ));
    }
    // Read the one-dimensional specialization off the general tables.
    let n1 = data.base.dim();
    let d1 = Dim1DextData {
        k: data.ext.c(0, 0, 0).clone(),
        alpha: data.lambda[0][0].clone(),
        q1: data.mu[0].clone(),
        q2: data.mu_prime[0].clone(),
        h: Matrix::from_fn(n1, n1, |i, j| data.phi[i][j][0].clone()),
        f: (0..n1).map(|i| data.v[0][i][0].clone()).collect(),
        g: (0..n1).map(|i| data.v_prime[i][0][0].clone()).collect(),
        t: data.tau.entry(0, 0).clone(),
        s: data.gamma[0][0][0].clone(),
    };
    let mut report = Report::new("dext build1", inputs);
    match build_dext_dim1(&data.base, &d1) {
        Ok((q, conds)) => {
            report_conditions(&mut report, &conds);
            let text = print_built(&q, "Extension");
            write_output(output, &text)?;
            report.info("build/result", text);
        }
        Err(DextError::ConditionsFailed(ids)) => {
            let conds = novikov::dext::validate_dim1(&data.base, &d1)
                .map_err(|e| InputError(e.to_string()))?;
            report_conditions(&mut report, &conds);
            report.check("build", false, Some(format!("conditions failed: {ids:?}")));
        }
        Err(e) => report.check("build", false, Some(e.to_string())),
    }
    Ok(report.finalize())
}

pub fn cmd_dext_tstar(
    doc: &NvkDocument,
    inputs: Vec<String>,
    set: &Assignments,
    output: Option<&Path>,
) -> Result<Report, InputError> {
    let data = dext_data_from_doc(doc, set)?;
    if data.base.dim() != 0 {
        return Err(InputError(
            "dext tstar expects a dext block without a base (use `by <algebra>`)".into(),
        ));
    }
    let mut report = Report::new("dext tstar", inputs);
    match build_tstar(&data.ext, &data.tau, data.gamma.clone()) {
        Ok((q, conds)) => {
            report_conditions(&mut report, &conds);
            let text = print_built(&q, "TstarExtension");
            write_output(output, &text)?;
            report.info("build/result", text);
        }
        Err(DextError::ConditionsFailed(ids)) => {
            report.check(
                "conditions",
                false,
                Some(format!("conditions failed: {ids:?}")),
            );
        }
        Err(e) => report.check("build", false, Some(e.to_string())),
    }
    Ok(report.finalize())
}

pub fn cmd_dext_extract(
    doc: &NvkDocument,
    inputs: Vec<String>,
    algebra: Option<&str>,
    form: Option<&str>,
    ideal: &str,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name, alg, forms) = resolve_algebra(doc, algebra, set)?;
    let (fname, f) = pick_form(&forms, form)?.clone();
    let j = parse_span(ideal, &doc.params, &alg)?;
    let mut report = Report::new("dext extract", inputs);
    let Some(q) = quadratic_checked(&mut report, &format!("{name}/{fname}"), &alg, &f) else {
        return Ok(report.finalize());
    };
    match extract_dext(&q, &j) {
        Ok(ex) => {
            report.check(
                "extract/jperp-products-vanish",
                ex.report.jperp_products_vanish,
                None,
            );
            report_conditions(&mut report, &ex.report.conditions);
            report.check(
                "extract/sigma-isomorphism",
                ex.report.sigma.passed(),
                None,
            );
            report.check(
                "extract/quotient-realized-on-sperp",
                ex.report.sperp_matches_quotient.passed(),
                None,
            );
            report.info(
                "extract/splitting",
                format!(
                    "J = {}, J^⊥ = {}, V = {}, S^⊥ = {}",
                    subspace_text(&ex.splitting.j, alg.basis_names()),
                    subspace_text(&ex.splitting.jperp, alg.basis_names()),
                    subspace_text(&ex.splitting.v, alg.basis_names()),
                    subspace_text(&ex.splitting.sperp, alg.basis_names()),
                ),
            );
            report.info("extract/data", print_dext_data(&ex.data));
            report.info("extract/rebuilt", print_built(&ex.rebuilt, "Rebuilt"));
        }
        Err(e) => report.check("extract", false, Some(e.to_string())),
    }
    Ok(report.finalize())
}

/// Render recovered extension data as a feedable `.nvk` document.
fn print_dext_data(data: &DextData) -> String {
    let base_names: Vec<String> = data.base.algebra().basis_names().to_vec();
    let ext_names: Vec<String> = data.ext.basis_names().to_vec();
    let n1 = data.base.dim();
    let m = data.ext.dim();
    let mut decl = dsl::DextDecl {
        base: (n1 > 0).then(|| ("W".to_string(), "B".to_string())),
        ext: "V".to_string(),
        tau: Vec::new(),
        mu: Vec::new(),
        mu_prime: Vec::new(),
        phi: Vec::new(),
        v: Vec::new(),
        v_prime: Vec::new(),
        lambda: Vec::new(),
        gamma: Vec::new(),
    };
    for p in 0..m {
        for qx in p..m {
            if !data.tau.entry(p, qx).is_zero() {
                decl.tau.push((
                    (ext_names[p].clone(), ext_names[qx].clone()),
                    data.tau.entry(p, qx).clone(),
                ));
            }
        }
    }
    for p in 0..m {
        for i in 0..n1 {
            let col = data.mu[p].col(i);
            if col.iter().any(|s| !s.is_zero()) {
                decl.mu.push((ext_names[p].clone(), base_names[i].clone(), col));
            }
            let col = data.mu_prime[p].col(i);
            if col.iter().any(|s| !s.is_zero()) {
                decl.mu_prime
                    .push((ext_names[p].clone(), base_names[i].clone(), col));
            }
        }
    }
    for i in 0..n1 {
        for j in 0..n1 {
            for p in 0..m {
                if !data.phi[i][j][p].is_zero() {
                    decl.phi.push((
                        base_names[i].clone(),
                        base_names[j].clone(),
                        ext_names[p].clone(),
                        data.phi[i][j][p].clone(),
                    ));
                }
            }
        }
    }
    for p in 0..m {
        for i in 0..n1 {
            for t in 0..m {
                if !data.v[p][i][t].is_zero() {
                    decl.v.push((
                        ext_names[p].clone(),
                        base_names[i].clone(),
                        ext_names[t].clone(),
                        data.v[p][i][t].clone(),
                    ));
                }
                if !data.v_prime[i][p][t].is_zero() {
                    decl.v_prime.push((
                        base_names[i].clone(),
                        ext_names[p].clone(),
                        ext_names[t].clone(),
                        data.v_prime[i][p][t].clone(),
                    ));
                }
            }
        }
    }
    for p in 0..m {
        for qx in 0..m {
            if data.lambda[p][qx].iter().any(|s| !s.is_zero()) {
                decl.lambda.push((
                    ext_names[p].clone(),
                    ext_names[qx].clone(),
                    data.lambda[p][qx].clone(),
                ));
            }
            for t in 0..m {
                if !data.gamma[p][qx][t].is_zero() {
                    decl.gamma.push((
                        ext_names[p].clone(),
                        ext_names[qx].clone(),
                        ext_names[t].clone(),
                        data.gamma[p][qx][t].clone(),
                    ));
                }
            }
        }
    }
    let mut algebras = Vec::new();
    if n1 > 0 {
        algebras.push(dsl::AlgebraDecl {
            name: "W".to_string(),
            algebra: data.base.algebra().clone(),
            forms: vec![("B".to_string(), data.base.form().clone())],
        });
    }
    algebras.push(dsl::AlgebraDecl {
        name: "V".to_string(),
        algebra: data.ext.clone(),
        forms: vec![],
    });
    let doc = NvkDocument {
        params: data.base.algebra().params().to_vec(),
        constraints: data.base.algebra().constraints().clone(),
        algebras,
        dexts: vec![decl],
    };
    dsl::print_nvk(&doc)
}

// ---------------------------------------------------------------------------
// iso / verify-tables / audit
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
pub fn cmd_iso(
    doc_a: &NvkDocument,
    doc_b: &NvkDocument,
    inputs: Vec<String>,
    algebra_a: Option<&str>,
    algebra_b: Option<&str>,
    form_a: Option<&str>,
    form_b: Option<&str>,
    map: &str,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name_a, alg_a, forms_a) = resolve_algebra(doc_a, algebra_a, set)?;
    let (name_b, alg_b, forms_b) = resolve_algebra(doc_b, algebra_b, set)?;
    let (fa_name, fa) = pick_form(&forms_a, form_a)?.clone();
    let (fb_name, fb) = pick_form(&forms_b, form_b)?.clone();
    if alg_a.dim() != alg_b.dim() {
        return Err(InputError(format!(
            "dimension mismatch: {} vs {}",
            alg_a.dim(),
            alg_b.dim()
        )));
    }
    let m = parse_map(map, &doc_a.params, &alg_a, &alg_b)?;
    let mut report = Report::new("iso", inputs);
    let qa = quadratic_checked(&mut report, &format!("{name_a}/{fa_name}"), &alg_a, &fa);
    let qb = quadratic_checked(&mut report, &format!("{name_b}/{fb_name}"), &alg_b, &fb);
    if let (Some(qa), Some(qb)) = (qa, qb) {
        let (ok, iso) = check_iso_quadratic(&qa, &qb, &m);
        report.check("iso/invertible", iso.invertible, None);
        report.check(
            "iso/multiplicative",
            iso.multiplicative_witnesses.is_empty(),
            (!iso.multiplicative_witnesses.is_empty())
                .then(|| format!("fails at basis pairs {:?}", iso.multiplicative_witnesses)),
        );
        report.check(
            "iso/isometric",
            iso.isometric_witnesses.is_empty(),
            (!iso.isometric_witnesses.is_empty())
                .then(|| format!("fails at basis pairs {:?}", iso.isometric_witnesses)),
        );
        report.info(
            "iso/verdict",
            if ok {
                "the map is an isomorphism of quadratic Novikov algebras"
            } else {
                "the map is not an isomorphism"
            },
        );
        if !ok {
            report.check("iso", false, None);
        }
    }
    Ok(report.finalize())
}

pub fn cmd_verify_tables(inputs: Vec<String>) -> Result<Report, InputError> {
    let mut report = Report::new("verify-tables", inputs);
    for check in verify_theorem_2dim()
        .checks
        .iter()
        .chain(verify_table2().checks.iter())
    {
        report.check(check.id.clone(), check.passed, Some(check.note.clone()));
    }
    Ok(report.finalize())
}

pub fn cmd_audit(
    doc: &NvkDocument,
    inputs: Vec<String>,
    algebra: Option<&str>,
    set: &Assignments,
) -> Result<Report, InputError> {
    let (name, alg, _) = resolve_algebra(doc, algebra, set)?;
    let mut report = Report::new("audit", inputs);
    report.check(
        format!("{name}/novikov"),
        alg.check_novikov().passed(),
        None,
    );
    let audit = degenerate_case_audit(&alg);
    report.info(
        "audit/scope",
        "presented-basis diagnostic, not a basis-independent proof",
    );
    if audit.matches.is_empty() {
        report.info("audit/patterns", "no degeneracy pattern matched");
    }
    for m in &audit.matches {
        report.info(format!("audit/pattern/{}", m.pattern), m.detail.clone());
    }
    report.info(
        "audit/invariant-form-space",
        format!("dimension {}", audit.family_dim),
    );
    if !audit.matches.is_empty() {
        report.check(
            "audit/degeneracy-confirmed",
            audit.degeneracy_confirmed,
            Some("matched patterns imply no nondegenerate invariant form".into()),
        );
    }
    Ok(report.finalize())
}
