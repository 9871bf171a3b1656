//! Sparse multivariate (Laurent-capable) polynomials over a [`FieldSpec`].
//!
//! A [`Ring`] lists its variables; the first `n_main` of them are the main
//! variables and the rest are parameters (generic coordinates, global
//! parameters). Content extraction, supports and degrees refer to the main
//! variables only; parameters behave like coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{FieldSpec, Scalar};

/// Exponent vector, one entry per ring variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<i64>);

impl Monomial {
    pub fn new(exps: Vec<i64>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// Componentwise divisibility `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn min(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn dot(&self, w: &[i64]) -> i64 {
        self.0.iter().zip(w).map(|(a, b)| a * b).sum()
    }
}

/// Display order: smaller total degree first, then lexicographically larger
/// exponent vectors first. This is the series-style order used for output
/// and deterministic iteration.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic term order (`x0 > x1 > ...`), used for division.
pub fn grlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.0.cmp(&b.0))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    field: FieldSpec,
    vars: Vec<String>,
    n_main: usize,
}

impl Ring {
    pub fn new(field: FieldSpec, vars: Vec<String>) -> Arc<Ring> {
        let n_main = vars.len();
        Arc::new(Ring {
            field,
            vars,
            n_main,
        })
    }

    pub fn with_params(field: FieldSpec, main: Vec<String>, params: Vec<String>) -> Arc<Ring> {
        let n_main = main.len();
        let mut vars = main;
        vars.extend(params);
        Arc::new(Ring {
            field,
            vars,
            n_main,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_main(&self) -> usize {
        self.n_main
    }

    pub fn main_vars(&self) -> &[String] {
        &self.vars[..self.n_main]
    }

    pub fn params(&self) -> &[String] {
        &self.vars[self.n_main..]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The ring of parameters alone (all of them main).
    pub fn param_ring(&self) -> Arc<Ring> {
        Ring::new(self.field, self.params().to_vec())
    }
}

/// A polynomial with no stored zero coefficients.
#[derive(Clone, Debug)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.terms == other.terms
    }
}

impl Eq for Poly {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring arithmetic; the operator impls panic on ring mismatch.
pub fn poly_arith(op: PolyOp, f: &Poly, g: &Poly) -> Result<Poly> {
    if !f.same_ring(g) {
        return Err(Error::RingMismatch);
    }
    Ok(match op {
        PolyOp::Add => f + g,
        PolyOp::Sub => f - g,
        PolyOp::Mul => f * g,
    })
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Poly {
        Poly::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &Arc<Ring>, n: i64) -> Poly {
        Poly::constant(ring, ring.field().from_i64(n))
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        Poly::monomial(ring, Monomial::var(ring.nvars(), i), ring.field().one())
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Poly> {
        let i = ring
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Poly::var(ring, i))
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Poly {
        debug_assert_eq!(m.len(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(
        ring: &Arc<Ring>,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Poly {
        let mut p = Poly::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn same_ring(&self, other: &Poly) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    /// Exactly the keys of the term map.
    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.ring.nvars()))
    }

    pub fn is_laurent_free(&self) -> bool {
        self.terms.keys().all(Monomial::is_nonnegative)
    }

    /// Single term, if the polynomial is one.
    pub fn as_term(&self) -> Option<(&Monomial, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    pub fn mentions(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] != 0)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Largest term under graded lex.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn make_monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.inv().expect("leading coefficient nonzero")),
            None => self.clone(),
        }
    }

    /// Same terms, reinterpreted in a ring with identical layout.
    pub fn with_ring(&self, ring: &Arc<Ring>) -> Poly {
        assert_eq!(ring.nvars(), self.ring.nvars());
        Poly {
            ring: ring.clone(),
            terms: self.terms.clone(),
        }
    }

    /// Moves the polynomial into `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Poly> {
        let n = target.nvars();
        let mut map = Vec::with_capacity(self.ring.nvars());
        for (i, name) in self.ring.vars().iter().enumerate() {
            map.push(target.index_of(name).ok_or_else(|| {
                if self.mentions(i) {
                    Error::UnknownVariable(name.clone())
                } else {
                    Error::RingMismatch
                }
            }));
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &x) in m.0.iter().enumerate() {
                if x != 0 {
                    let j = map[i].clone()?;
                    e[j] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Groups terms by their main-variable part. Keys have length `n_main`;
    /// values live in [`Ring::param_ring`].
    pub fn split_main(&self) -> BTreeMap<Monomial, Poly> {
        let nm = self.ring.n_main();
        let pr = self.ring.param_ring();
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = Monomial(m.0[..nm].to_vec());
            let rest = Monomial(m.0[nm..].to_vec());
            out.entry(key)
                .or_insert_with(|| Poly::zero(&pr))
                .add_term(rest, c.clone());
        }
        out
    }

    /// Inverse of [`Poly::split_main`].
    pub fn from_split(ring: &Arc<Ring>, parts: &BTreeMap<Monomial, Poly>) -> Poly {
        let mut out = Poly::zero(ring);
        for (key, coeff) in parts {
            for (rest, c) in &coeff.terms {
                let mut e = key.0.clone();
                e.extend_from_slice(&rest.0);
                out.add_term(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Distinct main-variable monomials.
    pub fn main_support(&self) -> Vec<Monomial> {
        self.split_main().into_keys().collect()
    }

    /// Factors `f = m * g` where `m` is the componentwise minimum of the
    /// main-variable exponents, so `g` has non-negative main exponents and no
    /// monomial content.
    pub fn monomial_content(&self) -> Result<(Monomial, Poly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let nm = self.ring.n_main();
        let mut min = vec![i64::MAX; self.ring.nvars()];
        for m in self.terms.keys() {
            for i in 0..nm {
                min[i] = min[i].min(m.0[i]);
            }
        }
        for v in min.iter_mut().skip(nm) {
            *v = 0;
        }
        let content = Monomial(min);
        let rest = self.mul_monomial(&content.inverse());
        Ok((content, rest))
    }

    /// Coefficients of `v^0, v^1, ..., v^deg`, each free of `v`.
    pub fn coefficients_wrt(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v).max(0) as usize;
        let mut out = vec![Poly::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let k = m.0[v];
            assert!(k >= 0, "coefficients_wrt on a negative exponent");
            let mut e = m.0.clone();
            e[v] = 0;
            out[k as usize].add_term(Monomial(e), c.clone());
        }
        out
    }

    /// `g` with `g^p = f` for `p` the characteristic.
    pub fn pth_power_decompose(&self, p: u64) -> Option<Poly> {
        if p != self.field().characteristic() {
            return None;
        }
        self.frobenius_root(p)
    }

    /// `g` with `g^k = f`, when `k` is a power of the characteristic and every
    /// exponent is divisible by `k` (coefficients of a prime field are fixed
    /// by Frobenius).
    pub fn frobenius_root(&self, k: u64) -> Option<Poly> {
        let p = self.field().characteristic();
        if p == 0 || k < 2 || !is_power_of(k, p) {
            return None;
        }
        let k = k as i64;
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.0.iter().any(|e| e.rem_euclid(k) != 0) {
                return None;
            }
            out.add_term(Monomial(m.0.iter().map(|e| e / k).collect()), c.clone());
        }
        Some(out)
    }

    /// Substitutes `images[i]` (polynomials in a common target ring) for
    /// variable `i`. A variable raised to a negative power must map to a
    /// single term.
    pub fn compose(&self, target: &Arc<Ring>, images: &[Poly]) -> Result<Poly> {
        assert_eq!(images.len(), self.ring.nvars());
        let mut cache: Vec<BTreeMap<i64, Poly>> = vec![BTreeMap::new(); images.len()];
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !cache[i].contains_key(&e) {
                    let p = power_signed(&images[i], e)?;
                    cache[i].insert(e, p);
                }
                term = &term * &cache[i][&e];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Applies a monomial substitution (optionally translated).
    pub fn substitute(&self, s: &MonomialSubstitution) -> Result<Poly> {
        if !self.same_ring(&Poly::zero(&s.source)) {
            return Err(Error::RingMismatch);
        }
        self.compose(&s.target, &s.images()?)
    }

    /// Evaluates with rational-function images.
    pub fn eval_frac(&self, target: &Arc<Ring>, images: &[Frac]) -> Result<Frac> {
        assert_eq!(images.len(), self.ring.nvars());
        let mut out = Frac::zero(target);
        for (m, c) in &self.terms {
            let mut term = Frac::from_poly(Poly::constant(target, c.clone()));
            for (i, &e) in m.0.iter().enumerate() {
                if e != 0 {
                    term = term.mul(&images[i].powi(e)?);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Exact quotient `self / g` when `g` divides `self`, via graded-lex
    /// division; Laurent inputs are not supported.
    pub fn exact_div(&self, g: &Poly) -> Option<Poly> {
        if g.is_zero() {
            return None;
        }
        if let Some((m, c)) = g.as_term() {
            let inv = c.inv().ok()?;
            let q = self.mul_monomial(&m.inverse()).scale(&inv);
            return if q.is_laurent_free() || !self.is_laurent_free() {
                Some(q)
            } else {
                None
            };
        }
        let (lm, lc) = g.leading_term()?;
        let lc_inv = lc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return None;
            }
            let t = Poly::monomial(&self.ring, m.div(lm), c * &lc_inv);
            rem = &rem - &(&t * g);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Substitutes main variable `j` by `images[j]` (in the parameter ring);
    /// the result lives in [`Ring::param_ring`].
    pub fn eval_main(&self, images: &[Poly]) -> Result<Poly> {
        let pr = self.ring.param_ring();
        let mut all: Vec<Poly> = images.iter().map(|p| p.with_ring(&pr)).collect();
        for i in 0..pr.nvars() {
            all.push(Poly::var(&pr, i));
        }
        self.compose(&pr, &all)
    }

    /// Every main variable replaced by its same-index parameter in `own`.
    pub fn at_point(&self, own: &[usize]) -> Result<Poly> {
        let pr = self.ring.param_ring();
        let images: Vec<Poly> = own.iter().map(|&i| Poly::var(&pr, i)).collect();
        self.eval_main(&images)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Poly {
        Poly::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }
}

fn is_power_of(mut k: u64, p: u64) -> bool {
    while k > 1 {
        if k % p != 0 {
            return false;
        }
        k /= p;
    }
    k == 1
}

fn power_signed(f: &Poly, e: i64) -> Result<Poly> {
    if e >= 0 {
        return Ok(f.pow(e as u32));
    }
    match f.as_term() {
        Some((m, c)) => {
            let inv = Poly::monomial(f.ring(), m.inverse(), c.inv()?);
            Ok(inv.pow(e.unsigned_abs() as u32))
        }
        None if f.is_zero() => Err(Error::DivisionByZero),
        None => Err(Error::Invalid(format!(
            "negative power of a non-monomial image `{f}`"
        ))),
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.same_ring(rhs), "ring mismatch in addition");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.same_ring(rhs), "ring mismatch in multiplication");
        let mut out = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{}", vars[i])?;
        } else {
            write!(f, "{}^{}", vars[i], e)?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_monomial(f, self.ring.vars(), m)?;
            }
        }
        Ok(())
    }
}

/// Image of every source variable: an optional translation constant plus a
/// Laurent monomial in the target's main variables. Parameters of the source
/// ring must exist (by name) in the target ring and map to themselves.
#[derive(Debug, Clone)]
pub struct MonomialSubstitution {
    pub source: Arc<Ring>,
    pub target: Arc<Ring>,
    /// Per source main variable, a target-ring polynomial (usually free of
    /// main variables) or zero.
    pub translations: Vec<Poly>,
    /// `exponents[i][j]`: power of target main variable `j` in the image of
    /// source main variable `i`.
    pub exponents: Vec<Vec<i64>>,
}

impl MonomialSubstitution {
    pub fn images(&self) -> Result<Vec<Poly>> {
        let nm = self.source.n_main();
        let tn = self.target.nvars();
        let mut images = Vec::with_capacity(self.source.nvars());
        for i in 0..nm {
            let mut e = vec![0; tn];
            e[..self.exponents[i].len()].copy_from_slice(&self.exponents[i]);
            let mono = Poly::monomial(&self.target, Monomial(e), self.target.field().one());
            images.push(&self.translations[i] + &mono);
        }
        for name in self.source.params() {
            images.push(Poly::var_named(&self.target, name)?);
        }
        Ok(images)
    }
}

/// A quotient of polynomials. Whenever the denominator is a single term it
/// is folded into the numerator as a Laurent monomial.
#[derive(Debug, Clone)]
pub struct Frac {
    pub num: Poly,
    pub den: Poly,
}

impl Frac {
    pub fn zero(ring: &Arc<Ring>) -> Frac {
        Frac::from_poly(Poly::zero(ring))
    }

    pub fn from_poly(p: Poly) -> Frac {
        let den = Poly::one(p.ring());
        Frac { num: p, den }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Frac> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Frac { num, den }.normalized())
    }

    fn normalized(self) -> Frac {
        if let Some((m, c)) = self.den.as_term() {
            let inv = c.inv().expect("nonzero denominator");
            let num = self.num.mul_monomial(&m.inverse()).scale(&inv);
            return Frac::from_poly(num);
        }
        if self.num.is_zero() {
            return Frac::from_poly(self.num);
        }
        // a polynomial denominator that divides the numerator disappears
        if let Some(q) = self.num.exact_div(&self.den) {
            return Frac::from_poly(q);
        }
        self
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.num.ring()
    }

    pub fn is_poly(&self) -> bool {
        self.den.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn into_poly(self) -> Option<Poly> {
        if self.is_poly() {
            Some(self.num)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Frac) -> Frac {
        if self.den == o.den {
            return Frac {
                num: &self.num + &o.num,
                den: self.den.clone(),
            }
            .normalized();
        }
        Frac {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
        .normalized()
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        Frac {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
        .normalized()
    }

    pub fn div(&self, o: &Frac) -> Result<Frac> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Frac {
            num: &self.num * &o.den,
            den: &self.den * &o.num,
        }
        .normalized())
    }

    pub fn powi(&self, e: i64) -> Result<Frac> {
        let k = e.unsigned_abs() as u32;
        let p = Frac {
            num: self.num.pow(k),
            den: self.den.pow(k),
        };
        if e >= 0 {
            Ok(p.normalized())
        } else {
            Frac::from_poly(Poly::one(self.ring())).div(&p)
        }
    }

    /// Cross-multiplied equality.
    pub fn equals(&self, o: &Frac) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    pub fn embed(&self, target: &Arc<Ring>) -> Result<Frac> {
        Frac::new(self.num.embed(target)?, self.den.embed(target)?)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
