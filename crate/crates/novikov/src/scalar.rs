//! Exact scalar arithmetic: multivariate polynomials over arbitrary-precision
//! rationals, together with sets of nonvanishing constraints.
//!
//! A parameter-free [`Scalar`] is a plain rational. Scalars are kept in
//! canonical form at all times: terms sorted by graded lexicographic monomial
//! order, no zero coefficients, coefficients in lowest terms (guaranteed by
//! `BigRational`). Equality is structural on canonical forms.

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// A monomial: a finite product of named parameters with positive exponents,
/// stored sorted by parameter name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: Vec<(String, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { vars: Vec::new() }
    }

    pub fn var(name: &str) -> Self {
        Monomial {
            vars: vec![(name.to_string(), 1)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.vars.iter().map(|(_, e)| e).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = (&str, u32)> {
        self.vars.iter().map(|(v, e)| (v.as_str(), *e))
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: BTreeMap<&str, u32> = BTreeMap::new();
        for (v, e) in self.vars.iter().chain(other.vars.iter()) {
            *out.entry(v).or_insert(0) += e;
        }
        Monomial {
            vars: out.into_iter().map(|(v, e)| (v.to_string(), e)).collect(),
        }
    }

    /// Exact monomial division, `None` when `other` does not divide `self`.
    fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut rest: BTreeMap<&str, u32> =
            self.vars.iter().map(|(v, e)| (v.as_str(), *e)).collect();
        for (v, e) in &other.vars {
            let have = rest.remove(v.as_str())?;
            if have < *e {
                return None;
            }
            if have > *e {
                out.push((v.clone(), have - e));
            }
        }
        for (v, e) in rest {
            out.push((v.to_string(), e));
        }
        out.sort();
        Some(Monomial { vars: out })
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then lexicographic
    /// with alphabetically earlier parameters more significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let mut a = self.vars.iter().peekable();
        let mut b = other.vars.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                // A variable missing on one side counts as exponent 0 there;
                // the side that *has* the earlier variable is larger.
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        o => return o,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.clone()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// An exact scalar: a canonical multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Monomial::one(), q);
        }
        Scalar { terms }
    }

    pub fn param(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), BigRational::one());
        Scalar { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigRational)>) -> Self {
        let mut out = Scalar::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|q| q.is_one()).unwrap_or(false)
    }

    /// `Some(q)` when the scalar is parameter-free.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.vars() {
                out.insert(v.to_string());
            }
        }
        out
    }

    /// Leading term in the graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * q))
                .collect(),
        }
    }

    /// Divide by the leading coefficient, giving a monic canonical
    /// representative up to nonzero rational scaling.
    pub fn monic(&self) -> Scalar {
        match self.leading_term() {
            None => Scalar::zero(),
            Some((_, c)) => {
                let inv = BigRational::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    /// Full evaluation; every parameter of the scalar must be bound.
    pub fn eval(&self, point: &BTreeMap<String, BigRational>) -> Result<BigRational, String> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                let val = point
                    .get(v)
                    .ok_or_else(|| format!("unbound parameter `{v}`"))?;
                for _ in 0..e {
                    t *= val;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute some parameters by scalars; unbound parameters remain.
    pub fn substitute(&self, bind: &BTreeMap<String, Scalar>) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = Scalar::from_rational(c.clone());
            for (v, e) in m.vars() {
                let factor = match bind.get(v) {
                    Some(s) => s.clone(),
                    None => Scalar::param(v),
                };
                t = &t * &factor.pow(e);
            }
            out += t;
        }
        out
    }

    /// Exact polynomial division: `Some(q)` with `self = q * d` or `None`.
    pub fn try_exact_div(&self, d: &Scalar) -> Option<Scalar> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Scalar::zero();
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let qm = rm.try_div(&dm)?;
            let qc = rc / dc.clone();
            let t = Scalar::from_terms([(qm, qc)]);
            rem -= &t * d;
            quot += t;
        }
        Some(quot)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending monomial order, sign-aware joining.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    /// An arbitrary but fixed total order, used only for canonical sorting
    /// of constraint sets and report output.
    fn cmp(&self, other: &Self) -> Ordering {
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = other.terms.iter().collect();
        a.cmp(&b)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}
forward_binop!(Add, add);

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}
forward_binop!(Sub, sub);

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}
forward_binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// A finite set of polynomials asserted to be nonzero (e.g. `{k}` for
/// `k != 0`). Members are kept monic so the set is deduplicated up to
/// nonzero rational scaling.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    polys: Vec<Scalar>,
}

#[derive(Debug, thiserror::Error)]
#[error("constraint polynomial is identically zero")]
pub struct ZeroConstraint;

impl ConstraintSet {
    pub fn new() -> Self {
        ConstraintSet::default()
    }

    pub fn from_polys(polys: impl IntoIterator<Item = Scalar>) -> Result<Self, ZeroConstraint> {
        let mut out = ConstraintSet::new();
        for p in polys {
            out.insert(p)?;
        }
        Ok(out)
    }

    /// Convenience: a constraint set asserting each named parameter nonzero.
    pub fn nonzero_params(names: &[&str]) -> Self {
        ConstraintSet::from_polys(names.iter().map(|n| Scalar::param(n))).unwrap()
    }

    pub fn insert(&mut self, p: Scalar) -> Result<(), ZeroConstraint> {
        if p.is_zero() {
            return Err(ZeroConstraint);
        }
        let m = p.monic();
        if !self.polys.contains(&m) {
            self.polys.push(m);
            self.polys.sort();
        }
        Ok(())
    }

    pub fn union(&self, other: &ConstraintSet) -> ConstraintSet {
        let mut out = self.clone();
        for p in &other.polys {
            out.insert(p.clone()).expect("members are nonzero");
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Scalar> {
        self.polys.iter()
    }

    /// Substitute parameters in every member. Errors when a member becomes
    /// identically zero: the substitution violates the constraints.
    pub fn substitute(&self, bind: &BTreeMap<String, Scalar>) -> Result<ConstraintSet, Scalar> {
        let mut out = ConstraintSet::new();
        for p in &self.polys {
            let q = p.substitute(bind);
            if q.is_zero() {
                return Err(p.clone());
            }
            if !q.is_rational() {
                out.insert(q).expect("nonzero");
            }
        }
        Ok(out)
    }

    /// Polynomials known to be nonzero wherever the constraints hold: the
    /// members themselves, plus every variable of a member that is a single
    /// monomial (`k^2*s != 0` forces `k != 0` and `s != 0`).
    fn nonzero_divisors(&self) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = self.polys.clone();
        for p in &self.polys {
            if p.num_terms() == 1 {
                let (m, _) = p.leading_term().unwrap();
                for (v, _) in m.vars() {
                    let s = Scalar::param(v);
                    if !out.contains(&s) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

/// Verdict of [`nonvanishing_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    GenericallyNonzero,
    IdenticallyZero,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::GenericallyNonzero => write!(f, "GenericallyNonzero"),
            Verdict::IdenticallyZero => write!(f, "IdenticallyZero"),
            Verdict::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

/// Outcome of a nonvanishing decision. `certified` is true when the verdict
/// was established exactly (factor pattern), false when it rests on sampling.
#[derive(Debug, Clone)]
pub struct NonvanishingOutcome {
    pub verdict: Verdict,
    pub certified: bool,
    /// A rational point witnessing a zero, for `Inconclusive` verdicts.
    pub witness: Option<BTreeMap<String, BigRational>>,
}

impl NonvanishingOutcome {
    pub fn is_nonzero(&self) -> bool {
        self.verdict == Verdict::GenericallyNonzero
    }
}

/// Fixed seed for the deterministic sampling fallback, so verdicts are
/// reproducible across runs.
pub const SAMPLE_SEED: [u8; 32] = *b"novikov/nonvanishing/sampler/v1\0";
const SAMPLE_POINTS: usize = 8;

/// Decide whether `p` is nonzero wherever the constraints hold.
///
/// Exact route: `p` is a nonzero rational times a product of powers of
/// constraint polynomials and of variables forced nonzero by monomial
/// constraints. Otherwise, univariate polynomials are screened for rational
/// roots compatible with the constraints, and finally `p` is evaluated at
/// [`SAMPLE_POINTS`] deterministic pseudorandom rational points avoiding the
/// constraint zero loci.
pub fn nonvanishing_check(p: &Scalar, constraints: &ConstraintSet) -> NonvanishingOutcome {
    if p.is_zero() {
        return NonvanishingOutcome {
            verdict: Verdict::IdenticallyZero,
            certified: true,
            witness: None,
        };
    }
    if p.is_rational() {
        return NonvanishingOutcome {
            verdict: Verdict::GenericallyNonzero,
            certified: true,
            witness: None,
        };
    }

    // Factor pattern: strip constraint divisors until none applies.
    let mut rem = p.clone();
    let divisors = constraints.nonzero_divisors();
    loop {
        let mut progressed = false;
        for d in &divisors {
            if d.is_rational() {
                continue;
            }
            while let Some(q) = rem.try_exact_div(d) {
                rem = q;
                progressed = true;
                if rem.is_rational() {
                    break;
                }
            }
        }
        if rem.is_rational() {
            return NonvanishingOutcome {
                verdict: Verdict::GenericallyNonzero,
                certified: true,
                witness: None,
            };
        }
        if !progressed {
            break;
        }
    }

    // Univariate screen: enumerate rational roots and test them against the
    // constraints.
    let vars: Vec<String> = p.vars().into_iter().collect();
    if vars.len() == 1 {
        if let Some(root) = univariate_constraint_compatible_root(p, &vars[0], constraints) {
            return NonvanishingOutcome {
                verdict: Verdict::Inconclusive,
                certified: false,
                witness: Some(root),
            };
        }
    }

    // Sampling fallback.
    let mut rng = ChaCha20Rng::from_seed(SAMPLE_SEED);
    for _ in 0..SAMPLE_POINTS {
        let point = match sample_point(&mut rng, &vars, constraints) {
            Some(pt) => pt,
            None => continue,
        };
        let val = p.eval(&point).expect("all vars bound");
        if val.is_zero() {
            return NonvanishingOutcome {
                verdict: Verdict::Inconclusive,
                certified: false,
                witness: Some(point),
            };
        }
    }
    NonvanishingOutcome {
        verdict: Verdict::GenericallyNonzero,
        certified: false,
        witness: None,
    }
}

/// Draw a rational point for `vars` with all constraints nonzero.
fn sample_point(
    rng: &mut ChaCha20Rng,
    vars: &[String],
    constraints: &ConstraintSet,
) -> Option<BTreeMap<String, BigRational>> {
    'retry: for _ in 0..200 {
        let mut point = BTreeMap::new();
        for v in vars {
            let num: i64 = rng.gen_range(-30..=30);
            let den: i64 = rng.gen_range(1..=8);
            point.insert(
                v.clone(),
                BigRational::new(BigInt::from(num), BigInt::from(den)),
            );
        }
        for c in constraints.iter() {
            // Constraints may involve parameters outside `vars`; bind those
            // too so the point is honest about the whole zero locus.
            let mut full = point.clone();
            for v in c.vars() {
                full.entry(v).or_insert_with(|| {
                    BigRational::new(BigInt::from(rng.gen_range(1..=17)), BigInt::one())
                });
            }
            if c.eval(&full).expect("bound").is_zero() {
                continue 'retry;
            }
        }
        return Some(point);
    }
    None
}

/// Rational roots of a univariate polynomial in `var`, by the rational root
/// theorem with integer divisor enumeration. `None` when the coefficients
/// are too large to factor by trial division.
pub fn rational_roots(p: &Scalar, var: &str) -> Option<Vec<BigRational>> {
    if p.is_zero() {
        return None;
    }
    let coeffs = integer_coeffs(p, var)?;
    let low = coeffs.iter().position(|c| !c.is_zero())?;
    let mut candidates: Vec<BigRational> = Vec::new();
    if low > 0 {
        candidates.push(BigRational::zero());
    }
    let lead = coeffs.last().cloned()?;
    let constant = coeffs[low].clone();
    let ps = divisors(&constant)?;
    let qs = divisors(&lead)?;
    for pn in &ps {
        for qd in &qs {
            let r = BigRational::new(pn.clone(), qd.clone());
            for root in [r.clone(), -r] {
                if !candidates.contains(&root) {
                    candidates.push(root);
                }
            }
        }
    }
    let mut roots: Vec<BigRational> = candidates
        .into_iter()
        .filter(|root| {
            let bind: BTreeMap<String, Scalar> =
                [(var.to_string(), Scalar::from_rational(root.clone()))]
                    .into_iter()
                    .collect();
            p.substitute(&bind).is_zero()
        })
        .collect();
    roots.sort();
    Some(roots)
}

/// For a univariate `p`, find a rational root compatible with the
/// constraints, i.e. a root at which no constraint polynomial becomes
/// identically zero.
fn univariate_constraint_compatible_root(
    p: &Scalar,
    var: &str,
    constraints: &ConstraintSet,
) -> Option<BTreeMap<String, BigRational>> {
    let candidates = rational_roots(p, var)?;
    for root in candidates {
        let mut point = BTreeMap::new();
        point.insert(var.to_string(), root.clone());
        let bind: BTreeMap<String, Scalar> = [(
            var.to_string(),
            Scalar::from_rational(root.clone()),
        )]
        .into_iter()
        .collect();
        if !p.substitute(&bind).is_zero() {
            continue;
        }
        // Root found; compatible iff no constraint collapses to zero there.
        let compatible = constraints
            .iter()
            .all(|c| !c.substitute(&bind).is_zero());
        if compatible {
            return Some(point);
        }
    }
    None
}

/// Coefficients of a univariate scalar as integers (after clearing
/// denominators), by ascending power. `None` when enumeration is hopeless.
fn integer_coeffs(p: &Scalar, var: &str) -> Option<Vec<BigInt>> {
    let deg = p.degree()? as usize;
    let mut rat = vec![BigRational::zero(); deg + 1];
    for (m, c) in p.terms() {
        let e = m.vars().next().map(|(_, e)| e).unwrap_or(0) as usize;
        debug_assert!(m.is_one() || m.vars().all(|(v, _)| v == var));
        rat[e] = c.clone();
    }
    let mut lcm = BigInt::one();
    for c in &rat {
        lcm = num::integer::lcm(lcm, c.denom().clone());
    }
    Some(rat.iter().map(|c| (c * &lcm).to_integer()).collect())
}

/// All positive divisors of `n`; `None` when `n` is too large to factor by
/// trial division.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n > BigInt::from(1_000_000_000_000i64) {
        return None;
    }
    let mut n = n.to_string().parse::<i64>().ok()?.unsigned_abs();
    if n == 0 {
        return Some(vec![BigInt::one()]);
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    let mut out = vec![1u64];
    for (pf, e) in factors {
        let prev = out.clone();
        let mut pw = 1u64;
        for _ in 0..e {
            pw = pw.checked_mul(pf)?;
            for v in &prev {
                out.push(v.checked_mul(pw)?);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out.into_iter().map(BigInt::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Scalar {
        Scalar::param("k")
    }
    fn s() -> Scalar {
        Scalar::param("s")
    }

    #[test]
    fn canonical_form_and_equality() {
        let a = &(&k() * &s()) + &Scalar::from_int(2);
        let b = &Scalar::from_int(2) + &(&s() * &k());
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "k*s + 2");
        let z = &a - &b;
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn grlex_display_order() {
        // k^2 dominates k*s? Same degree: k^2 has higher power on earlier var.
        let p = &(&k() * &s()) + &(&k() * &k()) + &s() + &Scalar::from_fraction(-1, 2);
        assert_eq!(p.to_string(), "k^2 + k*s + s - 1/2");
    }

    #[test]
    fn exact_division() {
        let p = &(&k() * &k()) * &s(); // k^2 s
        let q = p.try_exact_div(&k()).unwrap();
        assert_eq!(q, &k() * &s());
        assert!(p.try_exact_div(&(&k() + &s())).is_none());
        let prod = &(&k() + &s()) * &(&k() - &s());
        assert_eq!(prod.try_exact_div(&(&k() + &s())).unwrap(), &k() - &s());
    }

    #[test]
    fn substitution_and_eval() {
        let p = &(&k() * &s()) - &Scalar::from_int(3);
        let bind: BTreeMap<String, Scalar> =
            [("k".to_string(), Scalar::from_int(6))].into_iter().collect();
        assert_eq!(p.substitute(&bind), &(&Scalar::from_int(6) * &s()) - &Scalar::from_int(3));
        let point: BTreeMap<String, BigRational> = [
            ("k".to_string(), BigRational::from_integer(2.into())),
            ("s".to_string(), BigRational::from_integer(5.into())),
        ]
        .into_iter()
        .collect();
        assert_eq!(p.eval(&point).unwrap(), BigRational::from_integer(7.into()));
    }

    #[test]
    fn nonvanishing_table2_values() {
        // -k^3 under {k != 0}
        let c = ConstraintSet::nonzero_params(&["k"]);
        let p = -k().pow(3);
        let out = nonvanishing_check(&p, &c);
        assert_eq!(out.verdict, Verdict::GenericallyNonzero);
        assert!(out.certified);

        // -k^2 s under {k != 0, s != 0}
        let c = ConstraintSet::nonzero_params(&["k", "s"]);
        let p = -(&k().pow(2) * &s());
        let out = nonvanishing_check(&p, &c);
        assert_eq!(out.verdict, Verdict::GenericallyNonzero);
        assert!(out.certified);

        // zero polynomial
        let out = nonvanishing_check(&Scalar::zero(), &c);
        assert_eq!(out.verdict, Verdict::IdenticallyZero);
    }

    #[test]
    fn nonvanishing_monomial_constraint_forces_variables() {
        // constraint k^2 s != 0 certifies k != 0 and s != 0.
        let mut c = ConstraintSet::new();
        c.insert(&k().pow(2) * &s()).unwrap();
        let out = nonvanishing_check(&(&k() * &s().pow(4)), &c);
        assert_eq!(out.verdict, Verdict::GenericallyNonzero);
        assert!(out.certified);
    }

    #[test]
    fn nonvanishing_adversarial_rational_roots() {
        let c = ConstraintSet::nonzero_params(&["k"]);
        // k - 1 vanishes at k = 1, which satisfies k != 0.
        let out = nonvanishing_check(&(&k() - &Scalar::from_int(1)), &c);
        assert_eq!(out.verdict, Verdict::Inconclusive);
        let w = out.witness.unwrap();
        assert_eq!(w["k"], BigRational::one());

        // k^2 - 9/4 has roots +-3/2.
        let p = &k().pow(2) - &Scalar::from_fraction(9, 4);
        let out = nonvanishing_check(&p, &c);
        assert_eq!(out.verdict, Verdict::Inconclusive);

        // k*(k - 2): the root k = 0 is excluded by the constraints but k = 2
        // is not.
        let p = &k() * &(&k() - &Scalar::from_int(2));
        let out = nonvanishing_check(&p, &c);
        assert_eq!(out.verdict, Verdict::Inconclusive);
        assert_eq!(out.witness.unwrap()["k"], BigRational::from_integer(2.into()));

        // -k^3 + 0*junk is caught by the factor pattern, not sampling.
        let out = nonvanishing_check(&-k().pow(3), &c);
        assert!(out.certified);
    }

    #[test]
    fn nonvanishing_adversarial_sampled_zero() {
        // Build a multivariate polynomial vanishing at the first point the
        // deterministic sampler draws, so the sampling path must report
        // Inconclusive rather than GenericallyNonzero.
        let cs = ConstraintSet::nonzero_params(&["k", "s"]);
        let vars = vec!["k".to_string(), "s".to_string()];
        let mut rng = ChaCha20Rng::from_seed(SAMPLE_SEED);
        let pt = sample_point(&mut rng, &vars, &cs).unwrap();
        let p = &(&k() - &Scalar::from_rational(pt["k"].clone()))
            * &(&s() - &Scalar::from_rational(pt["s"].clone()));
        let out = nonvanishing_check(&p, &cs);
        assert_eq!(out.verdict, Verdict::Inconclusive);
        assert_eq!(out.witness.unwrap(), pt);
    }

    #[test]
    fn constraint_set_dedup_up_to_scaling() {
        let mut c = ConstraintSet::new();
        c.insert(k()).unwrap();
        c.insert(k().scale(&BigRational::new(BigInt::from(-7), BigInt::from(2))))
            .unwrap();
        assert_eq!(c.iter().count(), 1);
        assert!(c.insert(Scalar::zero()).is_err());
    }
}
