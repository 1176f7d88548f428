//! The `.nvk` algebra-definition language: a line-oriented format for
//! structure constants, metric forms and double-extension data, with a
//! recursive-descent expression parser for exact scalars.
//!
//! ```text
//! # comment
//! algebra A dim 2
//! basis e1 e2
//! params: k s
//! constraints: s != 0
//! product:
//! e1 * e2 = e1
//! e2 * e1 = -2*e1
//! e2 * e2 = e2
//! form B:
//! B(e1,e2) = s
//! ```
//!
//! Double-extension data uses sectioned coefficient tables keyed by basis
//! tuples; missing entries are zero. Dual-space values are written by their
//! evaluations at the extending basis (`phi(e1,e2)(f) = -1` means
//! `φ(e1,e2) = -f*`).

use novikov::algebra::{AlgebraError, NovikovAlgebra};
use novikov::dext::DextData;
use novikov::forms::{check_quadratic, SymBilinearForm};
use novikov::matrix::Matrix;
use novikov::scalar::{ConstraintSet, Scalar};
use num::{BigInt, BigRational};
use std::collections::BTreeMap;
use std::fmt;

/// A parse or elaboration error with its source position.
#[derive(Debug, Clone)]
pub struct NvkError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for NvkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for NvkError {}

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> Result<T, NvkError> {
    Err(NvkError {
        line,
        col,
        message: message.into(),
    })
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Sym(char),
    Neq, // !=
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex_line(line: &str, lineno: usize) -> Result<Vec<Token>, NvkError> {
    let mut out = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric()) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Int(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        if c == '!' {
            if i + 1 < chars.len() && chars[i + 1] == '=' {
                out.push(Token { tok: Tok::Neq, col });
                i += 2;
                continue;
            }
            return err(lineno, col, "lexical error: expected `!=`");
        }
        if "+-*/^(),=:".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                col,
            });
            i += 1;
            continue;
        }
        return err(lineno, col, format!("lexical error: unexpected `{c}`"));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Expression parsing
// ---------------------------------------------------------------------------

/// Cursor over the tokens of a single line.
struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [Token], line: usize) -> Self {
        Cursor { toks, pos: 0, line }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|t| t.col)
            .or_else(|| self.toks.last().map(|t| t.col + 1))
            .unwrap_or(1)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<(), NvkError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Sym(s)) if *s == c => Ok(()),
            _ => err(self.line, col, format!("expected `{c}`")),
        }
    }

    fn expect_ident(&mut self) -> Result<String, NvkError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s.clone()),
            _ => err(self.line, col, "expected an identifier"),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), NvkError> {
        if self.at_end() {
            Ok(())
        } else {
            err(self.line, self.col(), "unexpected trailing tokens")
        }
    }
}

/// Scalar grammar: integers, fractions `a/b`, parameters, `+ - * ^`,
/// parentheses; `^` takes nonnegative integer exponents only.
fn parse_scalar(cur: &mut Cursor, params: &[String]) -> Result<Scalar, NvkError> {
    parse_sum(cur, params)
}

fn parse_sum(cur: &mut Cursor, params: &[String]) -> Result<Scalar, NvkError> {
    let mut acc = parse_product(cur, params)?;
    loop {
        match cur.peek() {
            Some(Tok::Sym('+')) => {
                cur.next();
                acc = &acc + &parse_product(cur, params)?;
            }
            Some(Tok::Sym('-')) => {
                cur.next();
                acc = &acc - &parse_product(cur, params)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_product(cur: &mut Cursor, params: &[String]) -> Result<Scalar, NvkError> {
    let mut acc = parse_power(cur, params)?;
    while let Some(Tok::Sym('*')) = cur.peek() {
        cur.next();
        acc = &acc * &parse_power(cur, params)?;
    }
    Ok(acc)
}

fn parse_power(cur: &mut Cursor, params: &[String]) -> Result<Scalar, NvkError> {
    let base = parse_atom(cur, params)?;
    if let Some(Tok::Sym('^')) = cur.peek() {
        cur.next();
        let col = cur.col();
        match cur.next() {
            Some(Tok::Int(n)) => {
                let e: u32 = n
                    .parse()
                    .map_err(|_| NvkError {
                        line: cur.line,
                        col,
                        message: "exponent out of range".into(),
                    })?;
                return Ok(base.pow(e));
            }
            _ => return err(cur.line, col, "expected a nonnegative integer exponent"),
        }
    }
    Ok(base)
}

fn parse_atom(cur: &mut Cursor, params: &[String]) -> Result<Scalar, NvkError> {
    let col = cur.col();
    match cur.next().cloned() {
        Some(Tok::Sym('-')) => Ok(-parse_power(cur, params)?),
        Some(Tok::Sym('(')) => {
            let inner = parse_sum(cur, params)?;
            cur.expect_sym(')')?;
            Ok(inner)
        }
        Some(Tok::Int(n)) => {
            let numer: BigInt = n.parse().expect("digits");
            if let Some(Tok::Sym('/')) = cur.peek() {
                cur.next();
                let dcol = cur.col();
                match cur.next() {
                    Some(Tok::Int(d)) => {
                        let denom: BigInt = d.parse().expect("digits");
                        if denom == BigInt::from(0) {
                            return err(cur.line, dcol, "zero denominator");
                        }
                        Ok(Scalar::from_rational(BigRational::new(numer, denom)))
                    }
                    _ => err(cur.line, dcol, "expected a denominator"),
                }
            } else {
                Ok(Scalar::from_rational(BigRational::from_integer(numer)))
            }
        }
        Some(Tok::Ident(name)) => {
            if params.contains(&name) {
                Ok(Scalar::param(&name))
            } else {
                err(
                    cur.line,
                    col,
                    format!("unknown identifier `{name}` (not a declared parameter)"),
                )
            }
        }
        _ => err(cur.line, col, "expected a scalar"),
    }
}

/// Linear expression over named basis vectors: `0` or a signed sum of
/// `[scalar *] <basis-id>` terms (scalar factors may be parenthesized
/// expressions, rationals or parameters).
fn parse_linexpr(
    cur: &mut Cursor,
    params: &[String],
    basis: &[String],
) -> Result<Vec<Scalar>, NvkError> {
    let n = basis.len();
    let mut out = vec![Scalar::zero(); n];
    // `0` denotes the zero vector.
    if let Some(Tok::Int(z)) = cur.peek() {
        if z == "0" && cur.toks.len() == cur.pos + 1 {
            cur.next();
            return Ok(out);
        }
    }
    let mut first = true;
    loop {
        let mut sign = Scalar::one();
        match cur.peek() {
            Some(Tok::Sym('+')) => {
                cur.next();
            }
            Some(Tok::Sym('-')) => {
                cur.next();
                sign = -sign;
            }
            None if !first => return Ok(out),
            None => return err(cur.line, cur.col(), "expected a linear expression"),
            _ if first => {}
            _ => return err(cur.line, cur.col(), "expected `+` or `-`"),
        }
        first = false;
        // Collect `factor *`... until the trailing basis identifier.
        let mut coeff = sign;
        loop {
            let col = cur.col();
            match cur.peek() {
                Some(Tok::Ident(name)) if basis.contains(name) => {
                    let idx = basis.iter().position(|b| b == name).unwrap();
                    cur.next();
                    out[idx] = &out[idx] + &coeff;
                    break;
                }
                Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::Sym('(')) | Some(Tok::Sym('-')) => {
                    let f = parse_power(cur, params)?;
                    coeff = &coeff * &f;
                    match cur.peek() {
                        Some(Tok::Sym('*')) => {
                            cur.next();
                        }
                        _ => {
                            return err(
                                cur.line,
                                cur.col(),
                                "expected `* <basis vector>` after a scalar factor",
                            )
                        }
                    }
                }
                _ => return err(cur.line, col, "expected a term"),
            }
        }
        if cur.at_end() {
            return Ok(out);
        }
    }
}

// ---------------------------------------------------------------------------
// Document model
// ---------------------------------------------------------------------------

/// A named algebra with its named forms, as elaborated core objects.
#[derive(Debug, Clone)]
pub struct AlgebraDecl {
    pub name: String,
    pub algebra: NovikovAlgebra,
    pub forms: Vec<(String, SymBilinearForm)>,
}

/// Raw double-extension data; the base form/ext algebra are referenced by
/// name and resolved during elaboration.
#[derive(Debug, Clone)]
pub struct DextDecl {
    /// `None` for a T*-style block (no base).
    pub base: Option<(String, String)>,
    pub ext: String,
    pub tau: Vec<((String, String), Scalar)>,
    pub mu: Vec<(String, String, Vec<Scalar>)>,
    pub mu_prime: Vec<(String, String, Vec<Scalar>)>,
    pub phi: Vec<(String, String, String, Scalar)>,
    pub v: Vec<(String, String, String, Scalar)>,
    pub v_prime: Vec<(String, String, String, Scalar)>,
    pub lambda: Vec<(String, String, Vec<Scalar>)>,
    pub gamma: Vec<(String, String, String, Scalar)>,
}

/// An elaborated `.nvk` document.
#[derive(Debug, Clone)]
pub struct NvkDocument {
    pub params: Vec<String>,
    pub constraints: ConstraintSet,
    pub algebras: Vec<AlgebraDecl>,
    pub dexts: Vec<DextDecl>,
}

impl NvkDocument {
    pub fn algebra(&self, name: Option<&str>) -> Result<&AlgebraDecl, NvkError> {
        match name {
            None => self.algebras.first().ok_or_else(|| NvkError {
                line: 0,
                col: 0,
                message: "document declares no algebra".into(),
            }),
            Some(n) => self
                .algebras
                .iter()
                .find(|a| a.name == n)
                .ok_or_else(|| NvkError {
                    line: 0,
                    col: 0,
                    message: format!("unknown algebra `{n}`"),
                }),
        }
    }

    /// Resolve a dext declaration into core data (base validated as
    /// quadratic on demand by the caller).
    pub fn dext_data(&self, decl: &DextDecl) -> Result<DextData, NvkError> {
        let fail = |m: String| NvkError {
            line: 0,
            col: 0,
            message: m,
        };
        let ext_decl = self.algebra(Some(&decl.ext))?;
        let ext = ext_decl.algebra.clone();
        let m = ext.dim();
        let (base_alg, base_form) = match &decl.base {
            Some((alg_name, form_name)) => {
                let base_decl = self.algebra(Some(alg_name))?;
                let form = base_decl
                    .forms
                    .iter()
                    .find(|(n, _)| n == form_name)
                    .map(|(_, f)| f.clone())
                    .ok_or_else(|| fail(format!("unknown form `{form_name}` on `{alg_name}`")))?;
                (base_decl.algebra.clone(), form)
            }
            None => (
                NovikovAlgebra::trivial(0),
                SymBilinearForm::zero(0),
            ),
        };
        let n1 = base_alg.dim();
        let base = check_quadratic(&base_alg, &base_form)
            .map_err(|e| fail(format!("base pair is not a quadratic Novikov algebra: {e}")))?;
        let ext_idx = |name: &str| -> Result<usize, NvkError> {
            ext.basis_names()
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| fail(format!("unknown identifier `{name}` in extending algebra")))
        };
        let base_idx = |name: &str| -> Result<usize, NvkError> {
            base_alg
                .basis_names()
                .iter()
                .position(|b| b == name)
                .ok_or_else(|| fail(format!("unknown identifier `{name}` in base algebra")))
        };
        let mut data = DextData::zero(base, ext.clone());
        let mut tau = Matrix::zeros(m, m);
        for ((a, b), s) in &decl.tau {
            let (i, j) = (ext_idx(a)?, ext_idx(b)?);
            tau[(i, j)] = s.clone();
            tau[(j, i)] = s.clone();
        }
        data.tau = SymBilinearForm::new(tau).expect("symmetrized");
        for (f, e, v) in &decl.mu {
            let (p, i) = (ext_idx(f)?, base_idx(e)?);
            for (r, s) in v.iter().enumerate() {
                data.mu[p][(r, i)] = s.clone();
            }
        }
        for (f, e, v) in &decl.mu_prime {
            let (p, i) = (ext_idx(f)?, base_idx(e)?);
            for (r, s) in v.iter().enumerate() {
                data.mu_prime[p][(r, i)] = s.clone();
            }
        }
        for (a, b, f, s) in &decl.phi {
            let (i, j, p) = (base_idx(a)?, base_idx(b)?, ext_idx(f)?);
            data.phi[i][j][p] = s.clone();
        }
        for (f, e, g, s) in &decl.v {
            let (p, i, t) = (ext_idx(f)?, base_idx(e)?, ext_idx(g)?);
            data.v[p][i][t] = s.clone();
        }
        for (e, f, g, s) in &decl.v_prime {
            let (i, p, t) = (base_idx(e)?, ext_idx(f)?, ext_idx(g)?);
            data.v_prime[i][p][t] = s.clone();
        }
        for (f, g, v) in &decl.lambda {
            let (p, q) = (ext_idx(f)?, ext_idx(g)?);
            if v.len() != n1 {
                return Err(fail("lambda value has wrong dimension".into()));
            }
            data.lambda[p][q] = v.clone();
        }
        for (f, g, h, s) in &decl.gamma {
            let (p, q, t) = (ext_idx(f)?, ext_idx(g)?, ext_idx(h)?);
            data.gamma[p][q][t] = s.clone();
        }
        Ok(data)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MapKind {
    Mu,
    MuP,
    Phi,
    V,
    VP,
    Lambda,
    Gamma,
}

impl MapKind {
    fn keyword(self) -> &'static str {
        match self {
            MapKind::Mu => "mu",
            MapKind::MuP => "muP",
            MapKind::Phi => "phi",
            MapKind::V => "v",
            MapKind::VP => "vP",
            MapKind::Lambda => "lambda",
            MapKind::Gamma => "gamma",
        }
    }
}

enum Section {
    None,
    Product(usize),
    Form(usize, usize),
    Tau(usize),
    Map(usize, MapKind),
}

/// An unresolved `lhs op rhs = value` rule with its source position.
type RawRule<V> = (String, String, V, usize, usize);

struct RawAlgebra {
    name: String,
    dim: usize,
    basis: Vec<String>,
    products: Vec<RawRule<Vec<Scalar>>>,
    forms: Vec<(String, Vec<RawRule<Scalar>>)>,
    header_line: usize,
}

/// Parse a `.nvk` document.
pub fn parse_nvk(text: &str) -> Result<NvkDocument, NvkError> {
    let mut params: Vec<String> = Vec::new();
    let mut constraints = ConstraintSet::new();
    let mut raw_algs: Vec<RawAlgebra> = Vec::new();
    let mut dexts: Vec<DextDecl> = Vec::new();
    let mut section = Section::None;

    for (lineno0, raw_line) in text.lines().enumerate() {
        let lineno = lineno0 + 1;
        let toks = lex_line(raw_line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, lineno);
        let head = match cur.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => String::new(),
        };
        match head.as_str() {
            "algebra" => {
                cur.next();
                let name = cur.expect_ident()?;
                let kw = cur.expect_ident()?;
                if kw != "dim" {
                    return err(lineno, cur.col(), "expected `dim`");
                }
                let col = cur.col();
                let dim: usize = match cur.next() {
                    Some(Tok::Int(n)) => n.parse().map_err(|_| NvkError {
                        line: lineno,
                        col,
                        message: "dimension out of range".into(),
                    })?,
                    _ => return err(lineno, col, "expected a dimension"),
                };
                cur.expect_end()?;
                if raw_algs.iter().any(|a| a.name == name) {
                    return err(lineno, 1, format!("duplicate algebra name `{name}`"));
                }
                raw_algs.push(RawAlgebra {
                    name,
                    dim,
                    basis: Vec::new(),
                    products: Vec::new(),
                    forms: Vec::new(),
                    header_line: lineno,
                });
                section = Section::None;
            }
            "basis" => {
                cur.next();
                let alg = raw_algs.last_mut().ok_or_else(|| NvkError {
                    line: lineno,
                    col: 1,
                    message: "`basis` before any `algebra` declaration".into(),
                })?;
                while !cur.at_end() {
                    let col = cur.col();
                    let id = cur.expect_ident()?;
                    if alg.basis.contains(&id) {
                        return err(lineno, col, format!("duplicate basis name `{id}`"));
                    }
                    alg.basis.push(id);
                }
                if alg.basis.len() != alg.dim {
                    return err(
                        lineno,
                        1,
                        format!(
                            "dimension mismatch: algebra `{}` declares dim {} but {} basis names",
                            alg.name,
                            alg.dim,
                            alg.basis.len()
                        ),
                    );
                }
            }
            "params" => {
                cur.next();
                cur.expect_sym(':')?;
                while !cur.at_end() {
                    let id = cur.expect_ident()?;
                    if !params.contains(&id) {
                        params.push(id);
                    }
                }
            }
            "constraints" => {
                cur.next();
                cur.expect_sym(':')?;
                loop {
                    let poly = parse_scalar(&mut cur, &params)?;
                    let col = cur.col();
                    match cur.next() {
                        Some(Tok::Neq) => {}
                        _ => return err(lineno, col, "expected `!= 0`"),
                    }
                    let col = cur.col();
                    match cur.next() {
                        Some(Tok::Int(z)) if z == "0" => {}
                        _ => return err(lineno, col, "expected `0`"),
                    }
                    constraints.insert(poly).map_err(|_| NvkError {
                        line: lineno,
                        col: 1,
                        message: "constraint polynomial is identically zero".into(),
                    })?;
                    if cur.at_end() {
                        break;
                    }
                    cur.expect_sym(',')?;
                }
            }
            "product" => {
                cur.next();
                cur.expect_sym(':')?;
                cur.expect_end()?;
                if raw_algs.is_empty() {
                    return err(lineno, 1, "`product:` before any `algebra`");
                }
                section = Section::Product(raw_algs.len() - 1);
            }
            "form" => {
                cur.next();
                let name = cur.expect_ident()?;
                cur.expect_sym(':')?;
                cur.expect_end()?;
                let alg = raw_algs.last_mut().ok_or_else(|| NvkError {
                    line: lineno,
                    col: 1,
                    message: "`form` before any `algebra`".into(),
                })?;
                alg.forms.push((name, Vec::new()));
                section = Section::Form(raw_algs.len() - 1, raw_algs.last().unwrap().forms.len() - 1);
            }
            "dext" => {
                cur.next();
                cur.expect_sym(':')?;
                cur.expect_end()?;
                dexts.push(DextDecl {
                    base: None,
                    ext: String::new(),
                    tau: Vec::new(),
                    mu: Vec::new(),
                    mu_prime: Vec::new(),
                    phi: Vec::new(),
                    v: Vec::new(),
                    v_prime: Vec::new(),
                    lambda: Vec::new(),
                    gamma: Vec::new(),
                });
                section = Section::None;
            }
            "base" => {
                cur.next();
                let dext = dexts.last_mut().ok_or_else(|| NvkError {
                    line: lineno,
                    col: 1,
                    message: "`base` outside a `dext:` block".into(),
                })?;
                let alg = cur.expect_ident()?;
                let kw = cur.expect_ident()?;
                if kw != "form" {
                    return err(lineno, cur.col(), "expected `form`");
                }
                let form = cur.expect_ident()?;
                let kw = cur.expect_ident()?;
                if kw != "by" {
                    return err(lineno, cur.col(), "expected `by`");
                }
                let ext = cur.expect_ident()?;
                cur.expect_end()?;
                dext.base = Some((alg, form));
                dext.ext = ext;
            }
            "by" => {
                cur.next();
                let dext = dexts.last_mut().ok_or_else(|| NvkError {
                    line: lineno,
                    col: 1,
                    message: "`by` outside a `dext:` block".into(),
                })?;
                dext.ext = cur.expect_ident()?;
                cur.expect_end()?;
            }
            "tau" if matches!(cur.toks.get(1).map(|t| &t.tok), Some(Tok::Sym(':'))) => {
                if dexts.is_empty() {
                    return err(lineno, 1, "`tau:` outside a `dext:` block");
                }
                section = Section::Tau(dexts.len() - 1);
            }
            "map" => {
                cur.next();
                let kindname = cur.expect_ident()?;
                cur.expect_sym(':')?;
                cur.expect_end()?;
                let kind = match kindname.as_str() {
                    "mu" => MapKind::Mu,
                    "muP" => MapKind::MuP,
                    "phi" => MapKind::Phi,
                    "v" => MapKind::V,
                    "vP" => MapKind::VP,
                    "lambda" => MapKind::Lambda,
                    "gamma" => MapKind::Gamma,
                    other => {
                        return err(lineno, 1, format!("unknown map section `{other}`"));
                    }
                };
                if dexts.is_empty() {
                    return err(lineno, 1, "`map` outside a `dext:` block");
                }
                section = Section::Map(dexts.len() - 1, kind);
            }
            _ => {
                // Content line of the current section.
                match &section {
                    Section::Product(alg_idx) => {
                        let alg = &mut raw_algs[*alg_idx];
                        let lhs = cur.expect_ident()?;
                        cur.expect_sym('*')?;
                        let rhs = cur.expect_ident()?;
                        cur.expect_sym('=')?;
                        let value = parse_linexpr(&mut cur, &params, &alg.basis.clone())?;
                        cur.expect_end()?;
                        alg.products.push((lhs, rhs, value, lineno, 1));
                    }
                    Section::Form(alg_idx, form_idx) => {
                        let alg = &mut raw_algs[*alg_idx];
                        let b = cur.expect_ident()?;
                        if b != "B" {
                            return err(lineno, 1, "form entries use `B(<id>,<id>) = <scalar>`");
                        }
                        cur.expect_sym('(')?;
                        let a = cur.expect_ident()?;
                        cur.expect_sym(',')?;
                        let bname = cur.expect_ident()?;
                        cur.expect_sym(')')?;
                        cur.expect_sym('=')?;
                        let value = parse_scalar(&mut cur, &params)?;
                        cur.expect_end()?;
                        alg.forms[*form_idx]
                            .1
                            .push((a, bname, value, lineno, 1));
                    }
                    Section::Tau(didx) => {
                        let head2 = cur.expect_ident()?;
                        if head2 != "tau" {
                            return err(lineno, 1, "tau entries use `tau(<id>,<id>) = <scalar>`");
                        }
                        cur.expect_sym('(')?;
                        let a = cur.expect_ident()?;
                        cur.expect_sym(',')?;
                        let b = cur.expect_ident()?;
                        cur.expect_sym(')')?;
                        cur.expect_sym('=')?;
                        let value = parse_scalar(&mut cur, &params)?;
                        cur.expect_end()?;
                        dexts[*didx].tau.push(((a, b), value));
                    }
                    Section::Map(didx, kind) => {
                        parse_map_line(&mut cur, &mut dexts[*didx], *kind, &params, &raw_algs)?;
                    }
                    Section::None => {
                        return err(
                            lineno,
                            1,
                            format!("unexpected line starting with `{head}`"),
                        );
                    }
                }
            }
        }
    }

    // Elaborate the algebras.
    let mut algebras = Vec::new();
    for raw in &raw_algs {
        if raw.basis.len() != raw.dim {
            return err(
                raw.header_line,
                1,
                format!(
                    "dimension mismatch: algebra `{}` declares dim {} but {} basis names",
                    raw.name,
                    raw.dim,
                    raw.basis.len()
                ),
            );
        }
        for b in &raw.basis {
            if params.contains(b) {
                return err(
                    raw.header_line,
                    1,
                    format!("identifier `{b}` is both a parameter and a basis name"),
                );
            }
        }
        let mut products: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
        for (lhs, rhs, value, line, col) in &raw.products {
            let i = raw.basis.iter().position(|b| b == lhs).ok_or_else(|| NvkError {
                line: *line,
                col: *col,
                message: format!("unknown identifier `{lhs}`"),
            })?;
            let j = raw.basis.iter().position(|b| b == rhs).ok_or_else(|| NvkError {
                line: *line,
                col: *col,
                message: format!("unknown identifier `{rhs}`"),
            })?;
            if products.insert((i, j), value.clone()).is_some() {
                return err(
                    *line,
                    *col,
                    format!("duplicate product rule `{lhs} * {rhs}`"),
                );
            }
        }
        let algebra = NovikovAlgebra::new(
            raw.basis.clone(),
            &products,
            params.clone(),
            constraints.clone(),
        )
        .map_err(|e: AlgebraError| NvkError {
            line: raw.header_line,
            col: 1,
            message: e.to_string(),
        })?;
        let mut forms = Vec::new();
        for (fname, entries) in &raw.forms {
            let n = raw.dim;
            let mut matrix = Matrix::zeros(n, n);
            for (a, b, value, line, col) in entries {
                let i = raw.basis.iter().position(|x| x == a).ok_or_else(|| NvkError {
                    line: *line,
                    col: *col,
                    message: format!("unknown identifier `{a}`"),
                })?;
                let j = raw.basis.iter().position(|x| x == b).ok_or_else(|| NvkError {
                    line: *line,
                    col: *col,
                    message: format!("unknown identifier `{b}`"),
                })?;
                matrix[(i, j)] = value.clone();
                matrix[(j, i)] = value.clone();
            }
            forms.push((
                fname.clone(),
                SymBilinearForm::new(matrix).expect("symmetrized by construction"),
            ));
        }
        algebras.push(AlgebraDecl {
            name: raw.name.clone(),
            algebra,
            forms,
        });
    }
    for d in &dexts {
        if d.ext.is_empty() {
            return err(0, 0, "dext block missing `base ... by <algebra>` or `by <algebra>`");
        }
    }
    Ok(NvkDocument {
        params,
        constraints,
        algebras,
        dexts,
    })
}

fn parse_map_line(
    cur: &mut Cursor,
    dext: &mut DextDecl,
    kind: MapKind,
    params: &[String],
    raw_algs: &[RawAlgebra],
) -> Result<(), NvkError> {
    let line = cur.line;
    let head = cur.expect_ident()?;
    if head != kind.keyword() {
        return err(
            line,
            1,
            format!("expected `{}(...)` in this section", kind.keyword()),
        );
    }
    // Base-algebra basis for linexpr values of mu/muP/lambda.
    let base_basis: Vec<String> = match &dext.base {
        Some((alg, _)) => raw_algs
            .iter()
            .find(|a| a.name == *alg)
            .map(|a| a.basis.clone())
            .unwrap_or_default(),
        None => Vec::new(),
    };
    match kind {
        MapKind::Mu | MapKind::MuP => {
            // mu(<f>)(<e>) = <linexpr over base basis>
            cur.expect_sym('(')?;
            let f = cur.expect_ident()?;
            cur.expect_sym(')')?;
            cur.expect_sym('(')?;
            let e = cur.expect_ident()?;
            cur.expect_sym(')')?;
            cur.expect_sym('=')?;
            let value = parse_linexpr(cur, params, &base_basis)?;
            cur.expect_end()?;
            if kind == MapKind::Mu {
                dext.mu.push((f, e, value));
            } else {
                dext.mu_prime.push((f, e, value));
            }
        }
        MapKind::Lambda => {
            cur.expect_sym('(')?;
            let f = cur.expect_ident()?;
            cur.expect_sym(',')?;
            let g = cur.expect_ident()?;
            cur.expect_sym(')')?;
            cur.expect_sym('=')?;
            let value = parse_linexpr(cur, params, &base_basis)?;
            cur.expect_end()?;
            dext.lambda.push((f, g, value));
        }
        MapKind::Phi | MapKind::V | MapKind::VP | MapKind::Gamma => {
            // kind(<a>,<b>)(<c>) = <scalar>
            cur.expect_sym('(')?;
            let a = cur.expect_ident()?;
            cur.expect_sym(',')?;
            let b = cur.expect_ident()?;
            cur.expect_sym(')')?;
            cur.expect_sym('(')?;
            let c = cur.expect_ident()?;
            cur.expect_sym(')')?;
            cur.expect_sym('=')?;
            let value = parse_scalar(cur, params)?;
            cur.expect_end()?;
            match kind {
                MapKind::Phi => dext.phi.push((a, b, c, value)),
                MapKind::V => dext.v.push((a, b, c, value)),
                MapKind::VP => dext.v_prime.push((a, b, c, value)),
                MapKind::Gamma => dext.gamma.push((a, b, c, value)),
                _ => unreachable!(),
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

/// Canonical rendering of a coordinate vector over named basis vectors,
/// parseable back by `parse_linexpr`.
pub fn print_linexpr(v: &[Scalar], basis: &[String]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, s) in v.iter().enumerate() {
        if s.is_zero() {
            continue;
        }
        if s.is_one() {
            parts.push(basis[i].clone());
        } else if (-s).is_one() {
            parts.push(format!("-{}", basis[i]));
        } else if s.num_terms() > 1 {
            parts.push(format!("({})*{}", s, basis[i]));
        } else {
            parts.push(format!("{}*{}", s, basis[i]));
        }
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, p) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(p);
        } else if let Some(stripped) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(stripped);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

fn print_scalar(s: &Scalar) -> String {
    // The canonical scalar display is already inside the grammar, except
    // that multi-term scalars are unambiguous at top level too.
    format!("{s}")
}

/// Canonical `.nvk` rendering of a document.
pub fn print_nvk(doc: &NvkDocument) -> String {
    let mut out = String::new();
    if !doc.params.is_empty() {
        out.push_str(&format!("params: {}\n", doc.params.join(" ")));
    }
    if !doc.constraints.is_empty() {
        let cs: Vec<String> = doc
            .constraints
            .iter()
            .map(|p| format!("{} != 0", print_scalar(p)))
            .collect();
        out.push_str(&format!("constraints: {}\n", cs.join(", ")));
    }
    for decl in &doc.algebras {
        let a = &decl.algebra;
        let n = a.dim();
        out.push_str(&format!("\nalgebra {} dim {}\n", decl.name, n));
        out.push_str(&format!("basis {}\n", a.basis_names().join(" ")));
        let mut lines = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = a.product_basis(i, j);
                if v.iter().any(|s| !s.is_zero()) {
                    lines.push(format!(
                        "{} * {} = {}",
                        a.basis_names()[i],
                        a.basis_names()[j],
                        print_linexpr(&v, a.basis_names())
                    ));
                }
            }
        }
        if !lines.is_empty() {
            out.push_str("product:\n");
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        }
        for (fname, form) in &decl.forms {
            out.push_str(&format!("form {fname}:\n"));
            for i in 0..n {
                for j in i..n {
                    let s = form.entry(i, j);
                    if !s.is_zero() {
                        out.push_str(&format!(
                            "B({},{}) = {}\n",
                            a.basis_names()[i],
                            a.basis_names()[j],
                            print_scalar(s)
                        ));
                    }
                }
            }
        }
    }
    for d in &doc.dexts {
        out.push_str("\ndext:\n");
        match &d.base {
            Some((alg, form)) => {
                out.push_str(&format!("base {alg} form {form} by {}\n", d.ext));
            }
            None => out.push_str(&format!("by {}\n", d.ext)),
        }
        if !d.tau.is_empty() {
            out.push_str("tau:\n");
            for ((a, b), s) in &d.tau {
                out.push_str(&format!("tau({a},{b}) = {}\n", print_scalar(s)));
            }
        }
        let base_basis: Vec<String> = d
            .base
            .as_ref()
            .and_then(|(alg, _)| {
                doc.algebras
                    .iter()
                    .find(|a| a.name == *alg)
                    .map(|a| a.algebra.basis_names().to_vec())
            })
            .unwrap_or_default();
        if !d.phi.is_empty() {
            out.push_str("map phi:\n");
            for (a, b, c, s) in &d.phi {
                out.push_str(&format!("phi({a},{b})({c}) = {}\n", print_scalar(s)));
            }
        }
        if !d.mu.is_empty() {
            out.push_str("map mu:\n");
            for (f, e, v) in &d.mu {
                out.push_str(&format!("mu({f})({e}) = {}\n", print_linexpr(v, &base_basis)));
            }
        }
        if !d.mu_prime.is_empty() {
            out.push_str("map muP:\n");
            for (f, e, v) in &d.mu_prime {
                out.push_str(&format!(
                    "muP({f})({e}) = {}\n",
                    print_linexpr(v, &base_basis)
                ));
            }
        }
        if !d.v.is_empty() {
            out.push_str("map v:\n");
            for (f, e, g, s) in &d.v {
                out.push_str(&format!("v({f},{e})({g}) = {}\n", print_scalar(s)));
            }
        }
        if !d.v_prime.is_empty() {
            out.push_str("map vP:\n");
            for (e, f, g, s) in &d.v_prime {
                out.push_str(&format!("vP({e},{f})({g}) = {}\n", print_scalar(s)));
            }
        }
        if !d.lambda.is_empty() {
            out.push_str("map lambda:\n");
            for (f, g, v) in &d.lambda {
                out.push_str(&format!(
                    "lambda({f},{g}) = {}\n",
                    print_linexpr(v, &base_basis)
                ));
            }
        }
        if !d.gamma.is_empty() {
            out.push_str("map gamma:\n");
            for (f, g, h, s) in &d.gamma {
                out.push_str(&format!("gamma({f},{g})({h}) = {}\n", print_scalar(s)));
            }
        }
    }
    out
}

/// Parse a standalone linear expression over named basis vectors (used by
/// `--span`, `--ideal` and `--map`).
pub fn parse_linexpr_str(
    text: &str,
    params: &[String],
    basis: &[String],
) -> Result<Vec<Scalar>, NvkError> {
    let toks = lex_line(text, 0)?;
    let mut cur = Cursor::new(&toks, 0);
    let v = parse_linexpr(&mut cur, params, basis)?;
    cur.expect_end()?;
    Ok(v)
}

/// Parse a `p=v,q=w` assignment list (used by `--set`).
pub fn parse_assignments(s: &str) -> Result<BTreeMap<String, Scalar>, NvkError> {
    let mut out = BTreeMap::new();
    for (k, part) in s.split(',').enumerate() {
        let Some((name, value)) = part.split_once('=') else {
            return err(0, k + 1, format!("bad assignment `{part}` (expected p=v)"));
       };
        let toks = lex_line(value, 0)?;
        let mut cur = Cursor::new(&toks, 0);
        // Values are rational literals (possibly negated).
        let v = parse_scalar(&mut cur, &[])?;
        cur.expect_end()?;
        out.insert(name.trim().to_string(), v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIM2: &str = "\
# the 2-dimensional quadratic algebra
algebra A dim 2
basis e1 e2
params: s
constraints: s != 0
product:
e1 * e2 = e1
e2 * e1 = -2*e1
e2 * e2 = e2
form B:
B(e1,e2) = s
";

    #[test]
    fn parse_dim2_document() {
        let doc = parse_nvk(DIM2).unwrap();
        assert_eq!(doc.algebras.len(), 1);
        let a = &doc.algebras[0];
        assert_eq!(a.algebra.dim(), 2);
        assert_eq!(
            a.algebra.product_basis(1, 0),
            vec![Scalar::from_int(-2), Scalar::zero()]
        );
        assert_eq!(a.forms.len(), 1);
        assert_eq!(*a.forms[0].1.entry(0, 1), Scalar::param("s"));
        assert_eq!(*a.forms[0].1.entry(1, 0), Scalar::param("s"));
    }

    #[test]
    fn duplicate_basis_name_is_an_error() {
        let text = "algebra A dim 2\nbasis e1 e1\n";
        let e = parse_nvk(text).unwrap_err();
        assert!(e.message.contains("duplicate basis name"), "{e}");
        assert_eq!(e.line, 2);
    }

    #[test]
    fn unknown_identifier_is_an_error_with_position() {
        let text = "algebra A dim 2\nbasis e1 e2\nproduct:\ne1 * e9 = e1\n";
        let e = parse_nvk(text).unwrap_err();
        assert!(e.message.contains("unknown identifier"), "{e}");
        assert_eq!(e.line, 4);
    }

    #[test]
    fn duplicate_product_rule_is_an_error() {
        let text =
            "algebra A dim 2\nbasis e1 e2\nproduct:\ne1 * e2 = e1\ne1 * e2 = 2*e1\n";
        let e = parse_nvk(text).unwrap_err();
        assert!(e.message.contains("duplicate product rule"), "{e}");
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let text = "algebra A dim 3\nbasis e1 e2\n";
        let e = parse_nvk(text).unwrap_err();
        assert!(e.message.contains("dimension mismatch"), "{e}");
    }

    #[test]
    fn scalar_expressions_roundtrip() {
        let text = "algebra A dim 1\nbasis e\nparams: k s\nproduct:\ne * e = (k^2 - 1/2*s + 3)*e\n";
        let doc = parse_nvk(text).unwrap();
        let expect = &(&Scalar::param("k").pow(2)
            - &Scalar::param("s").scale(&BigRational::new(1.into(), 2.into())))
            + &Scalar::from_int(3);
        assert_eq!(doc.algebras[0].algebra.product_basis(0, 0), vec![expect]);
    }

    #[test]
    fn print_then_parse_is_identity_on_canonical_documents() {
        let doc = parse_nvk(DIM2).unwrap();
        let printed = print_nvk(&doc);
        let reparsed = parse_nvk(&printed).unwrap();
        assert_eq!(print_nvk(&reparsed), printed);
        // The elaborated models agree too.
        assert_eq!(
            doc.algebras[0].algebra, reparsed.algebras[0].algebra,
        );
        assert_eq!(doc.algebras[0].forms, reparsed.algebras[0].forms);
    }

    #[test]
    fn parse_dext_block() {
        let text = "\
algebra A1 dim 2
basis e1 e2
params: s
product:
e1 * e2 = e1
e2 * e1 = -2*e1
e2 * e2 = e2
form B1:
B(e1,e2) = 1

algebra A2 dim 1
basis f
product:
f * f = f

dext:
base A1 form B1 by A2
tau:
tau(f,f) = -s
map phi:
phi(e1,e2)(f) = -1
phi(e2,e1)(f) = 2
map mu:
mu(f)(e1) = 2*e1
mu(f)(e2) = -e2
map muP:
muP(f)(e1) = -e1
muP(f)(e2) = -e2
map v:
v(f,e1)(f) = -4
map vP:
vP(e1,f)(f) = 2
map lambda:
lambda(f,f) = 2*e2
map gamma:
gamma(f,f)(f) = s
";
        let doc = parse_nvk(text).unwrap();
        assert_eq!(doc.dexts.len(), 1);
        let data = doc.dext_data(&doc.dexts[0]).unwrap();
        let report = novikov::dext::validate_dext(&data).unwrap();
        assert!(report.all_passed(), "{:?}", report.failed_ids());
        // Roundtrip through the printer.
        let printed = print_nvk(&doc);
        let reparsed = parse_nvk(&printed).unwrap();
        assert_eq!(print_nvk(&reparsed), printed);
    }

    #[test]
    fn parse_document_with_metric_family_entries() {
        // The classification-style document: both metric entries are
        // parsed structurally; whether the form is invariant is a matter
        // for `check`, not the parser.
        let text = "\
algebra A dim 2
basis e1 e2
params: k s
product:
e1 * e2 = e1
e2 * e1 = -2*e1
e2 * e2 = e2
form B:
B(e1,e1) = k
B(e1,e2) = s
";
        let doc = parse_nvk(text).unwrap();
        let a = &doc.algebras[0];
        assert_eq!(a.algebra.product_basis(0, 1), vec![Scalar::one(), Scalar::zero()]);
        assert_eq!(
            a.algebra.product_basis(1, 0),
            vec![Scalar::from_int(-2), Scalar::zero()]
        );
        assert_eq!(a.algebra.product_basis(1, 1), vec![Scalar::zero(), Scalar::one()]);
        let b = &a.forms[0].1;
        assert_eq!(*b.entry(0, 0), Scalar::param("k"));
        assert_eq!(*b.entry(0, 1), Scalar::param("s"));
        assert_eq!(*b.entry(1, 1), Scalar::zero());
    }

    #[test]
    fn assignments() {
        let m = parse_assignments("k=1,t=-1/2").unwrap();
        assert_eq!(m["k"], Scalar::one());
        assert_eq!(m["t"], Scalar::from_fraction(-1, 2));
        assert!(parse_assignments("k").is_err());
    }
}
